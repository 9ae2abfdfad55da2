//! Maximum-weight matching in general graphs (Edmonds' blossom method,
//! primal-dual formulation), used here to get exact minimum-weight
//! perfect matchings for the Christofides step.
//!
//! This follows the classic O(n³) formulation by Galil as popularized by
//! van Rantwijk's reference implementation: vertices and blossoms carry
//! dual variables, alternating trees grow from free vertices, and the
//! dual adjustment picks the tightest of the four classic delta rules.
//! Weights are plain f64 (duals stay exact for integer inputs since the
//! only divisions are by two).

/// Edge list entry: (u, v, weight).
pub(crate) type WeightedEdge = (usize, usize, f64);

const LABEL_FREE: u8 = 0;
const LABEL_S: u8 = 1;
const LABEL_T: u8 = 2;
const LABEL_CRUMB: u8 = 5;

struct Matcher<'a> {
    edges: &'a [WeightedEdge],
    nv: usize,
    max_cardinality: bool,
    /// endpoint[p]: vertex attached to endpoint p; endpoints 2k and 2k+1
    /// belong to edge k.
    endpoint: Vec<usize>,
    /// Remote endpoints of the edges incident to each vertex.
    neighb_end: Vec<Vec<usize>>,
    /// mate[v]: remote endpoint of v's matched edge, or None.
    mate: Vec<Option<usize>>,
    label: Vec<u8>,
    label_end: Vec<Option<usize>>,
    in_blossom: Vec<usize>,
    blossom_parent: Vec<Option<usize>>,
    blossom_childs: Vec<Vec<usize>>,
    blossom_base: Vec<Option<usize>>,
    blossom_endps: Vec<Vec<usize>>,
    best_edge: Vec<Option<usize>>,
    blossom_best_edges: Vec<Option<Vec<usize>>>,
    unused_blossoms: Vec<usize>,
    dual_var: Vec<f64>,
    allowed_edge: Vec<bool>,
    queue: Vec<usize>,
}

impl<'a> Matcher<'a> {
    fn new(nv: usize, edges: &'a [WeightedEdge], max_cardinality: bool) -> Self {
        let ne = edges.len();
        let mut endpoint = Vec::with_capacity(2 * ne);
        for &(i, j, _) in edges {
            endpoint.push(i);
            endpoint.push(j);
        }
        let mut neighb_end = vec![Vec::new(); nv];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            neighb_end[i].push(2 * k + 1);
            neighb_end[j].push(2 * k);
        }
        let max_weight = edges.iter().map(|e| e.2).fold(0.0f64, f64::max);
        let mut dual_var = vec![max_weight; nv];
        dual_var.extend(std::iter::repeat(0.0).take(nv));
        Self {
            edges,
            nv,
            max_cardinality,
            endpoint,
            neighb_end,
            mate: vec![None; nv],
            label: vec![LABEL_FREE; 2 * nv],
            label_end: vec![None; 2 * nv],
            in_blossom: (0..nv).collect(),
            blossom_parent: vec![None; 2 * nv],
            blossom_childs: vec![Vec::new(); 2 * nv],
            blossom_base: (0..nv).map(Some).chain((0..nv).map(|_| None)).collect(),
            blossom_endps: vec![Vec::new(); 2 * nv],
            best_edge: vec![None; 2 * nv],
            blossom_best_edges: vec![None; 2 * nv],
            unused_blossoms: (nv..2 * nv).collect(),
            dual_var,
            allowed_edge: vec![false; ne],
            queue: Vec::new(),
        }
    }

    /// Slack of edge k (scaled by two, like the vertex duals).
    fn slack(&self, k: usize) -> f64 {
        let (i, j, w) = self.edges[k];
        self.dual_var[i] + self.dual_var[j] - 2.0 * w
    }

    fn blossom_leaves(&self, b: usize) -> Vec<usize> {
        if b < self.nv {
            return vec![b];
        }
        let mut out = Vec::new();
        let mut stack = vec![b];
        while let Some(t) = stack.pop() {
            if t < self.nv {
                out.push(t);
            } else {
                stack.extend(self.blossom_childs[t].iter().rev().copied());
            }
        }
        out
    }

    /// Label the top-level blossom of w, propagating S to the mate when
    /// labelling T.
    fn assign_label(&mut self, w: usize, t: u8, p: Option<usize>) {
        let b = self.in_blossom[w];
        debug_assert!(self.label[w] == LABEL_FREE && self.label[b] == LABEL_FREE);
        self.label[w] = t;
        self.label[b] = t;
        self.label_end[w] = p;
        self.label_end[b] = p;
        self.best_edge[w] = None;
        self.best_edge[b] = None;
        if t == LABEL_S {
            let mut leaves = self.blossom_leaves(b);
            self.queue.append(&mut leaves);
        } else if t == LABEL_T {
            let base = self.blossom_base[b].expect("labelled blossom has a base");
            let mate_p = self.mate[base].expect("T-labelled blossom base is matched");
            self.assign_label(self.endpoint[mate_p], LABEL_S, Some(mate_p ^ 1));
        }
    }

    /// Trace back from two S-vertices; return the base of a new blossom,
    /// or None when paths reach distinct roots (an augmenting path).
    fn scan_blossom(&mut self, v: usize, w: usize) -> Option<usize> {
        let mut v = Some(v);
        let mut w = Some(w);
        let mut path = Vec::new();
        let mut base = None;
        while v.is_some() || w.is_some() {
            let mut b = self.in_blossom[v.unwrap()];
            if self.label[b] & 4 != 0 {
                base = self.blossom_base[b];
                break;
            }
            debug_assert_eq!(self.label[b], LABEL_S);
            path.push(b);
            self.label[b] = LABEL_CRUMB;
            match self.label_end[b] {
                None => v = None, // reached a root
                Some(le) => {
                    let t = self.endpoint[le];
                    b = self.in_blossom[t];
                    debug_assert_eq!(self.label[b], LABEL_T);
                    v = Some(self.endpoint[self.label_end[b].unwrap()]);
                }
            }
            if w.is_some() {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = LABEL_S;
        }
        base
    }

    /// Wrap a possibly-negative child index into 0..len.
    fn wrap(len: usize, j: isize) -> usize {
        if j < 0 {
            (len as isize + j) as usize
        } else {
            j as usize
        }
    }

    /// Create a new blossom with the given base through edge k joining
    /// two S-blossoms.
    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.in_blossom[base];
        let mut bv = self.in_blossom[v];
        let mut bw = self.in_blossom[w];
        let b = self.unused_blossoms.pop().expect("blossom slots cannot run out");
        self.blossom_base[b] = Some(base);
        self.blossom_parent[b] = None;
        self.blossom_parent[bb] = Some(b);

        let mut childs: Vec<usize> = Vec::new();
        let mut endps: Vec<usize> = Vec::new();
        while bv != bb {
            self.blossom_parent[bv] = Some(b);
            childs.push(bv);
            let le = self.label_end[bv].expect("path blossom carries a label end");
            endps.push(le);
            v = self.endpoint[le];
            bv = self.in_blossom[v];
        }
        childs.push(bb);
        childs.reverse();
        endps.reverse();
        endps.push(2 * k);
        while bw != bb {
            self.blossom_parent[bw] = Some(b);
            childs.push(bw);
            let le = self.label_end[bw].expect("path blossom carries a label end");
            endps.push(le ^ 1);
            w = self.endpoint[le];
            bw = self.in_blossom[w];
        }
        debug_assert_eq!(self.label[bb], LABEL_S);
        self.label[b] = LABEL_S;
        self.label_end[b] = self.label_end[bb];
        self.dual_var[b] = 0.0;
        for leaf in self.blossom_leaves_of(&childs) {
            if self.label[self.in_blossom[leaf]] == LABEL_T {
                self.queue.push(leaf);
            }
            self.in_blossom[leaf] = b;
        }
        self.blossom_childs[b] = childs;
        self.blossom_endps[b] = endps;

        // Recompute least-slack edges out of the new blossom.
        let mut best_edge_to: Vec<Option<usize>> = vec![None; 2 * self.nv];
        for bv in self.blossom_childs[b].clone() {
            let nblists: Vec<Vec<usize>> = match self.blossom_best_edges[bv].take() {
                Some(list) => vec![list],
                None => self
                    .blossom_leaves(bv)
                    .into_iter()
                    .map(|v| self.neighb_end[v].iter().map(|p| p / 2).collect())
                    .collect(),
            };
            for nblist in nblists {
                for k in nblist {
                    let (mut i, mut j, _) = self.edges[k];
                    if self.in_blossom[j] == b {
                        std::mem::swap(&mut i, &mut j);
                    }
                    let bj = self.in_blossom[j];
                    if bj != b
                        && self.label[bj] == LABEL_S
                        && best_edge_to[bj].is_none_or(|cur| self.slack(k) < self.slack(cur))
                    {
                        best_edge_to[bj] = Some(k);
                    }
                }
            }
            self.best_edge[bv] = None;
        }
        let best: Vec<usize> = best_edge_to.into_iter().flatten().collect();
        self.best_edge[b] = best
            .iter()
            .copied()
            .min_by(|&a, &c| self.slack(a).partial_cmp(&self.slack(c)).unwrap());
        self.blossom_best_edges[b] = Some(best);
    }

    fn blossom_leaves_of(&self, childs: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        for &c in childs {
            out.extend(self.blossom_leaves(c));
        }
        out
    }

    /// Dissolve a top-level blossom, relabelling the interior when the
    /// expansion happens mid-stage on a T-blossom.
    fn expand_blossom(&mut self, b: usize, end_stage: bool) {
        for s in self.blossom_childs[b].clone() {
            self.blossom_parent[s] = None;
            if s < self.nv {
                self.in_blossom[s] = s;
            } else if end_stage && self.dual_var[s] == 0.0 {
                self.expand_blossom(s, end_stage);
            } else {
                for v in self.blossom_leaves(s) {
                    self.in_blossom[v] = s;
                }
            }
        }
        if !end_stage && self.label[b] == LABEL_T {
            // Relabel the even-length path from the entry child to the
            // base, and clear labels on the rest.
            let entry_p = self.label_end[b].expect("T-blossom has a label end");
            let entry_child = self.in_blossom[self.endpoint[entry_p ^ 1]];
            let childs_len = self.blossom_childs[b].len();
            let i = self.blossom_childs[b]
                .iter()
                .position(|&c| c == entry_child)
                .expect("entry child is a direct sub-blossom");
            let mut j = i as isize;
            let (j_step, endp_trick): (isize, usize) =
                if i & 1 != 0 { (1, 0) } else { (-1, 1) };
            if i & 1 != 0 {
                j -= childs_len as isize;
            }
            let mut p = entry_p;
            while j != 0 {
                let q = self.endps_at(b, j - endp_trick as isize) ^ endp_trick;
                self.label[self.endpoint[p ^ 1]] = LABEL_FREE;
                self.label[self.endpoint[q ^ 1]] = LABEL_FREE;
                let vertex = self.endpoint[p ^ 1];
                self.assign_label(vertex, LABEL_T, Some(p));
                self.allowed_edge[q / 2] = true;
                j += j_step;
                p = self.endps_at(b, j - endp_trick as isize) ^ endp_trick;
                self.allowed_edge[p / 2] = true;
                j += j_step;
            }
            let bv = self.childs_at(b, j);
            let entry_vertex = self.endpoint[p ^ 1];
            self.label[entry_vertex] = LABEL_T;
            self.label[bv] = LABEL_T;
            self.label_end[entry_vertex] = Some(p);
            self.label_end[bv] = Some(p);
            self.best_edge[bv] = None;
            j += j_step;
            while self.childs_at(b, j) != entry_child {
                let bv = self.childs_at(b, j);
                if self.label[bv] == LABEL_S {
                    j += j_step;
                    continue;
                }
                let mut reached = None;
                for v in self.blossom_leaves(bv) {
                    if self.label[v] != LABEL_FREE {
                        reached = Some(v);
                        break;
                    }
                }
                if let Some(v) = reached {
                    debug_assert_eq!(self.label[v], LABEL_T);
                    debug_assert_eq!(self.in_blossom[v], bv);
                    self.label[v] = LABEL_FREE;
                    let base = self.blossom_base[bv].unwrap();
                    self.label[self.endpoint[self.mate[base].unwrap()]] = LABEL_FREE;
                    let le = self.label_end[v];
                    self.assign_label(v, LABEL_T, le);
                }
                j += j_step;
            }
        }
        self.label[b] = LABEL_FREE;
        self.label_end[b] = None;
        self.blossom_childs[b].clear();
        self.blossom_endps[b].clear();
        self.blossom_base[b] = None;
        self.blossom_best_edges[b] = None;
        self.best_edge[b] = None;
        self.unused_blossoms.push(b);
    }

    fn childs_at(&self, b: usize, j: isize) -> usize {
        let len = self.blossom_childs[b].len();
        self.blossom_childs[b][Self::wrap(len, j)]
    }

    fn endps_at(&self, b: usize, j: isize) -> usize {
        let len = self.blossom_endps[b].len();
        self.blossom_endps[b][Self::wrap(len, j)]
    }

    /// Swap matched and unmatched edges along the path inside blossom b
    /// from vertex v down to the base, then re-root the blossom at v.
    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossom_parent[t] != Some(b) {
            t = self.blossom_parent[t].expect("v lies inside b");
        }
        if t >= self.nv {
            self.augment_blossom(t, v);
        }
        let childs_len = self.blossom_childs[b].len();
        let i = self.blossom_childs[b].iter().position(|&c| c == t).unwrap();
        let mut j = i as isize;
        let (j_step, endp_trick): (isize, usize) = if i & 1 != 0 { (1, 0) } else { (-1, 1) };
        if i & 1 != 0 {
            j -= childs_len as isize;
        }
        while j != 0 {
            j += j_step;
            let t1 = self.childs_at(b, j);
            let p = self.endps_at(b, j - endp_trick as isize) ^ endp_trick;
            if t1 >= self.nv {
                self.augment_blossom(t1, self.endpoint[p]);
            }
            j += j_step;
            let t2 = self.childs_at(b, j);
            if t2 >= self.nv {
                self.augment_blossom(t2, self.endpoint[p ^ 1]);
            }
            self.mate[self.endpoint[p]] = Some(p ^ 1);
            self.mate[self.endpoint[p ^ 1]] = Some(p);
        }
        self.blossom_childs[b].rotate_left(i);
        self.blossom_endps[b].rotate_left(i);
        self.blossom_base[b] = self.blossom_base[self.blossom_childs[b][0]];
        debug_assert_eq!(self.blossom_base[b], Some(v));
    }

    /// Augment along the path through edge k joining two S-vertices in
    /// different trees.
    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for (mut s, mut p) in [(v, 2 * k + 1), (w, 2 * k)] {
            loop {
                let bs = self.in_blossom[s];
                debug_assert_eq!(self.label[bs], LABEL_S);
                if bs >= self.nv {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = Some(p);
                match self.label_end[bs] {
                    None => break, // reached a root
                    Some(le) => {
                        let t = self.endpoint[le];
                        let bt = self.in_blossom[t];
                        debug_assert_eq!(self.label[bt], LABEL_T);
                        let le_t = self.label_end[bt].expect("T-blossom has a label end");
                        s = self.endpoint[le_t];
                        let j = self.endpoint[le_t ^ 1];
                        debug_assert_eq!(self.blossom_base[bt], Some(t));
                        if bt >= self.nv {
                            self.augment_blossom(bt, j);
                        }
                        self.mate[j] = Some(le_t);
                        p = le_t ^ 1;
                    }
                }
            }
        }
    }

    fn min_vertex_dual(&self) -> f64 {
        self.dual_var[..self.nv].iter().copied().fold(f64::INFINITY, f64::min)
    }

    fn solve(mut self) -> Vec<Option<usize>> {
        for _stage in 0..self.nv {
            self.label.fill(LABEL_FREE);
            self.label_end.fill(None);
            self.best_edge.fill(None);
            for slot in self.blossom_best_edges[self.nv..].iter_mut() {
                *slot = None;
            }
            self.allowed_edge.fill(false);
            self.queue.clear();
            for v in 0..self.nv {
                if self.mate[v].is_none() && self.label[self.in_blossom[v]] == LABEL_FREE {
                    self.assign_label(v, LABEL_S, None);
                }
            }

            let mut augmented = false;
            loop {
                while let Some(v) = self.queue.pop() {
                    debug_assert_eq!(self.label[self.in_blossom[v]], LABEL_S);
                    for p_idx in 0..self.neighb_end[v].len() {
                        let p = self.neighb_end[v][p_idx];
                        let k = p / 2;
                        let w = self.endpoint[p];
                        if self.in_blossom[v] == self.in_blossom[w] {
                            continue;
                        }
                        let mut kslack = 0.0;
                        if !self.allowed_edge[k] {
                            kslack = self.slack(k);
                            if kslack <= 0.0 {
                                self.allowed_edge[k] = true;
                            }
                        }
                        if self.allowed_edge[k] {
                            let bw = self.in_blossom[w];
                            if self.label[bw] == LABEL_FREE {
                                self.assign_label(w, LABEL_T, Some(p ^ 1));
                            } else if self.label[bw] == LABEL_S {
                                match self.scan_blossom(v, w) {
                                    Some(base) => self.add_blossom(base, k),
                                    None => {
                                        self.augment_matching(k);
                                        augmented = true;
                                        break;
                                    }
                                }
                            } else if self.label[w] == LABEL_FREE {
                                debug_assert_eq!(self.label[bw], LABEL_T);
                                self.label[w] = LABEL_T;
                                self.label_end[w] = Some(p ^ 1);
                            }
                        } else if self.label[self.in_blossom[w]] == LABEL_S {
                            let b = self.in_blossom[v];
                            if self.best_edge[b].is_none_or(|cur| kslack < self.slack(cur)) {
                                self.best_edge[b] = Some(k);
                            }
                        } else if self.label[w] == LABEL_FREE
                            && self.best_edge[w].is_none_or(|cur| kslack < self.slack(cur))
                        {
                            self.best_edge[w] = Some(k);
                        }
                    }
                    if augmented {
                        break;
                    }
                }
                if augmented {
                    break;
                }

                // No augmenting path under the current duals; pick the
                // tightest of the four delta rules.
                let mut delta_type = -1;
                let mut delta = 0.0f64;
                let mut delta_edge = 0usize;
                let mut delta_blossom = 0usize;
                if !self.max_cardinality {
                    delta_type = 1;
                    delta = self.min_vertex_dual();
                }
                for v in 0..self.nv {
                    if self.label[self.in_blossom[v]] == LABEL_FREE {
                        if let Some(k) = self.best_edge[v] {
                            let d = self.slack(k);
                            if delta_type == -1 || d < delta {
                                delta = d;
                                delta_type = 2;
                                delta_edge = k;
                            }
                        }
                    }
                }
                for b in 0..2 * self.nv {
                    if self.blossom_parent[b].is_none() && self.label[b] == LABEL_S {
                        if let Some(k) = self.best_edge[b] {
                            let d = 0.5 * self.slack(k);
                            if delta_type == -1 || d < delta {
                                delta = d;
                                delta_type = 3;
                                delta_edge = k;
                            }
                        }
                    }
                }
                for b in self.nv..2 * self.nv {
                    if self.blossom_base[b].is_some()
                        && self.blossom_parent[b].is_none()
                        && self.label[b] == LABEL_T
                        && (delta_type == -1 || self.dual_var[b] < delta)
                    {
                        delta = self.dual_var[b];
                        delta_type = 4;
                        delta_blossom = b;
                    }
                }
                if delta_type == -1 {
                    // Max-cardinality search exhausted; finish with a
                    // final feasibility-preserving update.
                    debug_assert!(self.max_cardinality);
                    delta_type = 1;
                    delta = self.min_vertex_dual().max(0.0);
                }

                for v in 0..self.nv {
                    match self.label[self.in_blossom[v]] {
                        LABEL_S => self.dual_var[v] -= delta,
                        LABEL_T => self.dual_var[v] += delta,
                        _ => {}
                    }
                }
                for b in self.nv..2 * self.nv {
                    if self.blossom_base[b].is_some() && self.blossom_parent[b].is_none() {
                        match self.label[b] {
                            LABEL_S => self.dual_var[b] += delta,
                            LABEL_T => self.dual_var[b] -= delta,
                            _ => {}
                        }
                    }
                }

                match delta_type {
                    1 => break, // optimum reached
                    2 => {
                        self.allowed_edge[delta_edge] = true;
                        let (mut i, j, _) = self.edges[delta_edge];
                        if self.label[self.in_blossom[i]] == LABEL_FREE {
                            i = j;
                        }
                        debug_assert_eq!(self.label[self.in_blossom[i]], LABEL_S);
                        self.queue.push(i);
                    }
                    3 => {
                        self.allowed_edge[delta_edge] = true;
                        let (i, _, _) = self.edges[delta_edge];
                        debug_assert_eq!(self.label[self.in_blossom[i]], LABEL_S);
                        self.queue.push(i);
                    }
                    _ => self.expand_blossom(delta_blossom, false),
                }
            }

            if !augmented {
                break;
            }
            for b in self.nv..2 * self.nv {
                if self.blossom_parent[b].is_none()
                    && self.blossom_base[b].is_some()
                    && self.label[b] == LABEL_S
                    && self.dual_var[b] == 0.0
                {
                    self.expand_blossom(b, true);
                }
            }
        }

        // Convert remote endpoints to partner vertices.
        (0..self.nv).map(|v| self.mate[v].map(|p| self.endpoint[p])).collect()
    }
}

/// Maximum-weight matching over an explicit edge list on vertices
/// 0..num_vertices. With `max_cardinality`, only maximum-cardinality
/// matchings are considered. Returns the partner of each vertex.
pub(crate) fn max_weight_matching(
    num_vertices: usize,
    edges: &[WeightedEdge],
    max_cardinality: bool,
) -> Vec<Option<usize>> {
    if num_vertices == 0 || edges.is_empty() {
        return vec![None; num_vertices];
    }
    Matcher::new(num_vertices, edges, max_cardinality).solve()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matching_weight(mate: &[Option<usize>], edges: &[WeightedEdge]) -> f64 {
        let mut total = 0.0;
        for &(i, j, w) in edges {
            if mate[i] == Some(j) {
                total += w;
            }
        }
        total
    }

    #[test]
    fn single_edge() {
        let edges = vec![(0, 1, 5.0)];
        let mate = max_weight_matching(2, &edges, false);
        assert_eq!(mate, vec![Some(1), Some(0)]);
    }

    #[test]
    fn prefers_heavier_edge() {
        // Path 0-1-2; only one edge fits; take the heavier.
        let edges = vec![(0, 1, 2.0), (1, 2, 3.0)];
        let mate = max_weight_matching(3, &edges, false);
        assert_eq!(mate[1], Some(2));
        assert_eq!(mate[0], None);
    }

    #[test]
    fn max_cardinality_overrides_weight() {
        // Without the cardinality constraint the middle edge wins; with
        // it, the two outer edges must both be taken.
        let edges = vec![(0, 1, 1.0), (1, 2, 10.0), (2, 3, 1.0)];
        let free = max_weight_matching(4, &edges, false);
        assert_eq!(free[1], Some(2));
        let full = max_weight_matching(4, &edges, true);
        assert_eq!(full[0], Some(1));
        assert_eq!(full[2], Some(3));
    }

    fn mates(pairs: &[(usize, usize)], n: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; n];
        for &(a, b) in pairs {
            out[a] = Some(b);
            out[b] = Some(a);
        }
        out
    }

    #[test]
    fn s_blossom_is_created_and_augmented() {
        // Triangle with a pendant: the odd cycle must collapse into a
        // blossom before the augmenting path is found.
        let edges = vec![(0, 1, 8.0), (0, 2, 9.0), (1, 2, 10.0), (2, 3, 7.0)];
        let mate = max_weight_matching(4, &edges, false);
        assert_eq!(mate, mates(&[(0, 1), (2, 3)], 4));
        assert_eq!(matching_weight(&mate, &edges), 15.0);

        let mut edges = edges;
        edges.push((0, 5, 5.0));
        edges.push((3, 4, 6.0));
        let mate = max_weight_matching(6, &edges, false);
        assert_eq!(mate, mates(&[(0, 5), (1, 2), (3, 4)], 6));
    }

    #[test]
    fn nested_s_blossom() {
        let edges = vec![
            (0, 1, 9.0),
            (0, 2, 9.0),
            (1, 2, 10.0),
            (1, 3, 8.0),
            (2, 4, 8.0),
            (3, 4, 10.0),
            (4, 5, 6.0),
        ];
        let mate = max_weight_matching(6, &edges, false);
        assert_eq!(mate, mates(&[(0, 2), (1, 3), (4, 5)], 6));
    }

    #[test]
    fn s_to_t_blossom_relabel() {
        let edges = vec![
            (0, 1, 9.0),
            (0, 2, 8.0),
            (1, 2, 10.0),
            (0, 3, 5.0),
            (3, 4, 4.0),
            (0, 5, 3.0),
        ];
        let mate = max_weight_matching(6, &edges, false);
        assert_eq!(mate, mates(&[(0, 5), (1, 2), (3, 4)], 6));
    }

    #[test]
    fn nested_blossom_expanded_during_stage() {
        let edges = vec![
            (0, 1, 19.0),
            (0, 2, 20.0),
            (0, 7, 8.0),
            (1, 2, 25.0),
            (1, 3, 18.0),
            (2, 4, 18.0),
            (3, 4, 13.0),
            (3, 6, 7.0),
            (4, 5, 7.0),
        ];
        let mate = max_weight_matching(8, &edges, false);
        assert_eq!(mate, mates(&[(0, 7), (1, 2), (3, 6), (4, 5)], 8));
    }

    #[test]
    fn max_cardinality_on_equal_weights_is_perfect() {
        let mut edges = Vec::new();
        for i in 0..6 {
            for j in (i + 1)..6 {
                edges.push((i, j, 1.0));
            }
        }
        let mate = max_weight_matching(6, &edges, true);
        assert!(mate.iter().all(|m| m.is_some()));
        for (v, m) in mate.iter().enumerate() {
            assert_eq!(mate[m.unwrap()], Some(v));
        }
    }
}
