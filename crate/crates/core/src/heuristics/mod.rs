//! Constructive and improvement heuristics: minimum spanning tree,
//! exact minimum-weight perfect matching, Eulerian walks, shortcutting
//! (the five Christofides steps), 2-opt/3-opt local search, and the
//! max-tour estimate via the cost transformation.
//!
//! Everything here is deterministic: ties break lexicographically by
//! (edge, node) index, so identical inputs give identical tours across
//! runs and worker counts.

mod matching;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{transform_max, CostMatrix, Instance};
use crate::tour::{order_length, Tour};

/// Weighted edge list; u < v per edge, multiplicity allowed (the
/// Christofides union step builds a multigraph).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeSet {
    pub edges: Vec<(u32, u32, f64)>,
}

impl EdgeSet {
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Degree of every vertex in 0..n (multiplicity counted).
    pub fn degrees(&self, n: usize) -> Vec<u32> {
        let mut deg = vec![0u32; n];
        for &(u, v, _) in &self.edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        deg
    }
}

/// Which heuristic produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Christofides,
    TwoOpt,
    ThreeOpt,
    NearestNeighbor,
    MaxTransform,
}

/// A heuristic tour with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeuristicResult {
    pub tour: Tour,
    pub length: f64,
    pub method: Method,
    pub improvement_steps: u64,
}

/// Minimum spanning tree by dense Prim, O(n²). Returns n−1 edges sorted
/// lexicographically; key ties resolve to the smaller vertex index.
pub fn minimum_spanning_tree(costs: &CostMatrix) -> EdgeSet {
    let n = costs.n();
    assert!(n >= 2, "spanning tree needs at least 2 nodes");
    let mut in_tree = vec![false; n];
    let mut key = vec![f64::INFINITY; n];
    let mut parent = vec![0usize; n];
    in_tree[0] = true;
    for v in 1..n {
        key[v] = costs.get(0, v);
    }
    let mut edges = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let mut pick = None;
        let mut pick_key = f64::INFINITY;
        for v in 0..n {
            if !in_tree[v] && key[v] < pick_key {
                pick = Some(v);
                pick_key = key[v];
            }
        }
        let v = pick.expect("graph is complete");
        in_tree[v] = true;
        let p = parent[v];
        edges.push((p.min(v) as u32, p.max(v) as u32, costs.get(p, v)));
        for w in 0..n {
            if !in_tree[w] && costs.get(v, w) < key[w] {
                key[w] = costs.get(v, w);
                parent[w] = v;
            }
        }
    }
    edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    EdgeSet { edges }
}

/// Vertices of odd degree in the edge set; always even in count for a
/// spanning tree (handshake lemma). Sorted ascending.
pub fn odd_degree_vertices(tree: &EdgeSet, n: usize) -> Vec<u32> {
    tree.degrees(n)
        .iter()
        .enumerate()
        .filter(|(_, &d)| d % 2 == 1)
        .map(|(v, _)| v as u32)
        .collect()
}

/// Exact minimum-weight perfect matching on the complete subgraph
/// induced by `nodes` (blossom-based; the 1.5 guarantee of Christofides
/// depends on exactness).
pub fn min_weight_perfect_matching(nodes: &[u32], costs: &CostMatrix) -> Result<EdgeSet> {
    if nodes.len() % 2 != 0 {
        return Err(Error::OddNodeSet(nodes.len()));
    }
    if nodes.is_empty() {
        return Ok(EdgeSet { edges: Vec::new() });
    }
    let m = nodes.len();
    for &v in nodes {
        if v as usize >= costs.n() {
            return Err(Error::IndexOutOfRange { index: v as usize, n: costs.n() });
        }
    }
    // Reduce min-weight perfect to max-weight max-cardinality by
    // flipping against the largest cost; every perfect matching has
    // m/2 edges so the argmax is the cost argmin.
    let mut max_cost = 0.0f64;
    for a in 0..m {
        for b in (a + 1)..m {
            max_cost = max_cost.max(costs.get(nodes[a] as usize, nodes[b] as usize));
        }
    }
    let mut edges: Vec<matching::WeightedEdge> = Vec::with_capacity(m * (m - 1) / 2);
    for a in 0..m {
        for b in (a + 1)..m {
            edges.push((a, b, max_cost - costs.get(nodes[a] as usize, nodes[b] as usize)));
        }
    }
    let mate = matching::max_weight_matching(m, &edges, true);
    let mut out = Vec::with_capacity(m / 2);
    for a in 0..m {
        let b = mate[a].expect("complete graph on an even set has a perfect matching");
        if a < b {
            let (u, v) = (nodes[a], nodes[b]);
            let (u, v) = (u.min(v), u.max(v));
            out.push((u, v, costs.get(u as usize, v as usize)));
        }
    }
    out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    Ok(EdgeSet { edges: out })
}

/// Closed walk using every edge exactly once (Hierholzer). Requires all
/// degrees even and the edge support connected; edge multiplicity is
/// respected. The returned walk starts and ends at the same vertex.
pub fn eulerian_circuit(graph: &EdgeSet, n: usize) -> Result<Vec<u32>> {
    if graph.is_empty() {
        return Err(Error::NotEulerian("no edges".into()));
    }
    let degrees = graph.degrees(n);
    if let Some(v) = degrees.iter().position(|&d| d % 2 == 1) {
        return Err(Error::NotEulerian(format!("vertex {v} has odd degree {}", degrees[v])));
    }
    // Adjacency as (neighbor, edge id), sorted for deterministic walks.
    let mut adj: Vec<Vec<(u32, usize)>> = vec![Vec::new(); n];
    for (id, &(u, v, _)) in graph.edges.iter().enumerate() {
        adj[u as usize].push((v, id));
        adj[v as usize].push((u, id));
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
    }
    let start = (0..n).find(|&v| degrees[v] > 0).unwrap() as u32;
    let mut used = vec![false; graph.edges.len()];
    let mut cursor = vec![0usize; n];
    let mut stack = vec![start];
    let mut walk = Vec::with_capacity(graph.edges.len() + 1);
    while let Some(&v) = stack.last() {
        let vi = v as usize;
        let mut advanced = false;
        while cursor[vi] < adj[vi].len() {
            let (w, id) = adj[vi][cursor[vi]];
            if used[id] {
                cursor[vi] += 1;
                continue;
            }
            used[id] = true;
            cursor[vi] += 1;
            stack.push(w);
            advanced = true;
            break;
        }
        if !advanced {
            walk.push(stack.pop().unwrap());
        }
    }
    if walk.len() != graph.edges.len() + 1 {
        return Err(Error::NotEulerian("edge support is disconnected".into()));
    }
    walk.reverse();
    Ok(walk)
}

/// Contract a closed walk to a Hamiltonian cycle by keeping the first
/// occurrence of each node; under the triangle inequality the result is
/// no longer than the walk.
pub fn shortcut(walk: &[u32], n: usize) -> Result<Tour> {
    if walk.len() < 2 || walk.first() != walk.last() {
        return Err(Error::InvalidParameter("walk must be closed (first == last)".into()));
    }
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for &v in walk {
        if (v as usize) < n && !seen[v as usize] {
            seen[v as usize] = true;
            order.push(v);
        }
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::WalkMissingNode(missing));
    }
    Tour::new(order)
}

/// The five Christofides steps over an explicit cost matrix: MST, odd
/// set, exact matching, Euler walk, shortcut. On metric instances the
/// result is at most 1.5 × optimal.
pub fn christofides_costs(costs: &CostMatrix) -> Result<HeuristicResult> {
    let n = costs.n();
    if n < 3 {
        return Err(Error::TooFewNodes(n));
    }
    let mst = minimum_spanning_tree(costs);
    let odd = odd_degree_vertices(&mst, n);
    let matching = min_weight_perfect_matching(&odd, costs)?;
    let mut union = mst;
    union.edges.extend_from_slice(&matching.edges);
    let walk = eulerian_circuit(&union, n)?;
    let tour = shortcut(&walk, n)?;
    let length = tour.length(costs)?;
    Ok(HeuristicResult { tour, length, method: Method::Christofides, improvement_steps: 0 })
}

/// [`christofides_costs`] over an instance's materialized matrix.
///
/// The caller is responsible for metricity; rounding-induced triangle
/// violations (see [`CostMatrix::triangle_violations`]) only weaken the
/// 1.5 guarantee, the construction still returns a valid tour.
pub fn christofides(instance: &Instance) -> Result<HeuristicResult> {
    christofides_costs(&instance.cost_matrix())
}

/// Greedy nearest-neighbor construction from a start node; ties take the
/// smaller index.
pub fn nearest_neighbor(costs: &CostMatrix, start: u32) -> Result<HeuristicResult> {
    let n = costs.n();
    if n < 3 {
        return Err(Error::TooFewNodes(n));
    }
    if start as usize >= n {
        return Err(Error::IndexOutOfRange { index: start as usize, n });
    }
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut here = start as usize;
    visited[here] = true;
    order.push(start);
    for _ in 1..n {
        let mut pick = None;
        let mut pick_cost = f64::INFINITY;
        for v in 0..n {
            if !visited[v] && costs.get(here, v) < pick_cost {
                pick = Some(v);
                pick_cost = costs.get(here, v);
            }
        }
        let v = pick.unwrap();
        visited[v] = true;
        order.push(v as u32);
        here = v;
    }
    let tour = Tour::new(order)?;
    let length = tour.length(costs)?;
    Ok(HeuristicResult { tour, length, method: Method::NearestNeighbor, improvement_steps: 0 })
}

/// Local-search neighborhood depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KOptLevel {
    Two,
    Three,
}

/// Move acceptance strategy within a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Apply each improving move as soon as it is found.
    FirstImprovement,
    /// Scan the whole neighborhood, apply the single best move.
    BestImprovement,
}

#[derive(Debug, Clone)]
pub struct KOptOptions {
    pub k: KOptLevel,
    pub strategy: Strategy,
    pub max_passes: u32,
    /// Restrict 2-opt partner scans to each node's nearest neighbors;
    /// `None` scans everything (the oracle-test mode). 3-opt always
    /// scans fully — desk-scale instances keep O(n³) affordable.
    pub neighbor_limit: Option<usize>,
}

impl Default for KOptOptions {
    fn default() -> Self {
        Self {
            k: KOptLevel::Three,
            strategy: Strategy::FirstImprovement,
            max_passes: 1000,
            neighbor_limit: None,
        }
    }
}

/// Acceptance threshold: strict integer decrease on integer instances,
/// a relative epsilon otherwise (guards against floating-point livelock).
fn improvement_eps(costs: &CostMatrix, current_length: f64) -> f64 {
    if costs.is_integral() {
        0.5
    } else {
        1e-9 * current_length.abs().max(1.0)
    }
}

/// Nearest-neighbor candidate lists (excluding self), each sorted by
/// (cost, index).
fn neighbor_lists(costs: &CostMatrix, limit: usize) -> Vec<Vec<u32>> {
    let n = costs.n();
    (0..n)
        .map(|v| {
            let mut others: Vec<u32> = (0..n as u32).filter(|&w| w as usize != v).collect();
            others.sort_by(|&a, &b| {
                costs
                    .get(v, a as usize)
                    .partial_cmp(&costs.get(v, b as usize))
                    .unwrap()
                    .then(a.cmp(&b))
            });
            others.truncate(limit);
            others
        })
        .collect()
}

struct TwoOptPass<'a> {
    costs: &'a CostMatrix,
    order: &'a mut Vec<u32>,
    pos: Vec<usize>,
    eps: f64,
    strategy: Strategy,
    candidates: Option<&'a [Vec<u32>]>,
}

impl TwoOptPass<'_> {
    fn gain(&self, i: usize, j: usize) -> f64 {
        let n = self.order.len();
        let (a, b) = (self.order[i] as usize, self.order[i + 1] as usize);
        let (c, d) = (self.order[j] as usize, self.order[(j + 1) % n] as usize);
        self.costs.get(a, b) + self.costs.get(c, d) - self.costs.get(a, c) - self.costs.get(b, d)
    }

    fn apply(&mut self, i: usize, j: usize) {
        self.order[i + 1..=j].reverse();
        for (p, &v) in self.order.iter().enumerate().skip(i + 1).take(j - i) {
            self.pos[v as usize] = p;
        }
    }

    /// One full sweep; returns applied move count.
    fn sweep(&mut self) -> u64 {
        let n = self.order.len();
        let mut steps = 0;
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..n - 1 {
            let js: Vec<usize> = match self.candidates {
                None => ((i + 2)..n).collect(),
                Some(lists) => {
                    // Partner edge (c,d) with c among a's nearest
                    // neighbors; map back to tour positions.
                    let a = self.order[i] as usize;
                    let mut js: Vec<usize> =
                        lists[a].iter().map(|&c| self.pos[c as usize]).filter(|&j| j > i + 1).collect();
                    js.sort_unstable();
                    js
                }
            };
            for j in js {
                if i == 0 && j == n - 1 {
                    continue; // same edge pair
                }
                let g = self.gain(i, j);
                if g > self.eps {
                    match self.strategy {
                        Strategy::FirstImprovement => {
                            self.apply(i, j);
                            steps += 1;
                        }
                        Strategy::BestImprovement => {
                            if best.is_none_or(|(bg, _, _)| g > bg) {
                                best = Some((g, i, j));
                            }
                        }
                    }
                }
            }
        }
        if let Some((_, i, j)) = best {
            self.apply(i, j);
            steps += 1;
        }
        steps
    }
}

/// Rebuild the order for one of the seven 3-opt reconnections of the
/// segments around cut edges (i,i+1), (j,j+1), (k,k+1).
fn three_opt_apply(order: &[u32], i: usize, j: usize, k: usize, case: u8) -> Vec<u32> {
    let s1 = &order[..=i];
    let s2 = &order[i + 1..=j];
    let s3 = &order[j + 1..=k];
    let s4 = &order[k + 1..];
    let mut out = Vec::with_capacity(order.len());
    out.extend_from_slice(s1);
    let rev = |s: &[u32]| s.iter().rev().copied().collect::<Vec<_>>();
    match case {
        1 => {
            out.extend(rev(s2));
            out.extend_from_slice(s3);
        }
        2 => {
            out.extend_from_slice(s2);
            out.extend(rev(s3));
        }
        3 => {
            out.extend(rev(s2));
            out.extend(rev(s3));
        }
        4 => {
            out.extend_from_slice(s3);
            out.extend_from_slice(s2);
        }
        5 => {
            out.extend_from_slice(s3);
            out.extend(rev(s2));
        }
        6 => {
            out.extend(rev(s3));
            out.extend_from_slice(s2);
        }
        7 => {
            out.extend(rev(s3));
            out.extend(rev(s2));
        }
        _ => unreachable!(),
    }
    out.extend_from_slice(s4);
    out
}

struct ThreeOptSweep<'a> {
    costs: &'a CostMatrix,
    eps: f64,
    strategy: Strategy,
}

impl ThreeOptSweep<'_> {
    /// One sweep over all (i, j, k) cut triples with the seven
    /// reconnections; returns applied move count.
    fn sweep(&self, order: &mut Vec<u32>) -> u64 {
        let n = order.len();
        let c = |u: u32, v: u32| self.costs.get(u as usize, v as usize);
        let mut steps = 0;
        let mut best: Option<(f64, usize, usize, usize, u8)> = None;
        let mut i = 0;
        while i + 2 < n {
            let mut j = i + 1;
            while j + 1 < n {
                for k in (j + 1)..n {
                    let a = order[i];
                    let b = order[i + 1];
                    let cc = order[j];
                    let d = order[j + 1];
                    let e = order[k];
                    let f = order[(k + 1) % n];
                    let d0 = c(a, b) + c(cc, d) + c(e, f);
                    let gains = [
                        d0 - (c(a, cc) + c(b, d) + c(e, f)),
                        d0 - (c(a, b) + c(cc, e) + c(d, f)),
                        d0 - (c(a, cc) + c(b, e) + c(d, f)),
                        d0 - (c(a, d) + c(e, b) + c(cc, f)),
                        d0 - (c(a, d) + c(e, cc) + c(b, f)),
                        d0 - (c(a, e) + c(d, b) + c(cc, f)),
                        d0 - (c(a, e) + c(d, cc) + c(b, f)),
                    ];
                    let mut local: Option<(f64, u8)> = None;
                    for (idx, &g) in gains.iter().enumerate() {
                        if g > self.eps && local.is_none_or(|(lg, _)| g > lg) {
                            local = Some((g, idx as u8 + 1));
                        }
                    }
                    if let Some((g, case)) = local {
                        match self.strategy {
                            Strategy::FirstImprovement => {
                                *order = three_opt_apply(order, i, j, k, case);
                                steps += 1;
                            }
                            Strategy::BestImprovement => {
                                if best.is_none_or(|(bg, ..)| g > bg) {
                                    best = Some((g, i, j, k, case));
                                }
                            }
                        }
                    }
                }
                j += 1;
            }
            i += 1;
        }
        if let Some((_, i, j, k, case)) = best {
            *order = three_opt_apply(order, i, j, k, case);
            steps += 1;
        }
        steps
    }
}

/// Improve a tour by 2-opt or 3-opt until it is locally optimal or
/// `max_passes` sweeps have run; never returns a longer tour and is
/// deterministic for fixed inputs.
pub fn k_opt_improve(tour: &Tour, costs: &CostMatrix, opts: &KOptOptions) -> Result<HeuristicResult> {
    if tour.n() != costs.n() {
        return Err(Error::SizeMismatch { tour: tour.n(), matrix: costs.n() });
    }
    if opts.max_passes < 1 {
        return Err(Error::InvalidParameter("max_passes must be at least 1".into()));
    }
    let mut order = tour.order().to_vec();
    let mut steps = 0u64;
    let candidates = opts.neighbor_limit.map(|limit| neighbor_lists(costs, limit));

    for _ in 0..opts.max_passes {
        let eps = improvement_eps(costs, order_length(&order, costs));
        let applied = match opts.k {
            KOptLevel::Two => {
                let n = order.len();
                let mut pos = vec![0usize; n];
                for (p, &v) in order.iter().enumerate() {
                    pos[v as usize] = p;
                }
                let mut pass = TwoOptPass {
                    costs,
                    order: &mut order,
                    pos,
                    eps,
                    strategy: opts.strategy,
                    candidates: candidates.as_deref(),
                };
                pass.sweep()
            }
            KOptLevel::Three => {
                let sweep = ThreeOptSweep { costs, eps, strategy: opts.strategy };
                sweep.sweep(&mut order)
            }
        };
        steps += applied;
        if applied == 0 {
            break;
        }
    }
    let improved = Tour::new(order)?;
    let length = improved.length(costs)?;
    let method = match opts.k {
        KOptLevel::Two => Method::TwoOpt,
        KOptLevel::Three => Method::ThreeOpt,
    };
    Ok(HeuristicResult { tour: improved, length, method, improvement_steps: steps })
}

/// Estimated maximum tour length and the witnessing tour.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MaxTourEstimate {
    /// Length of the witness tour under the original costs; a valid
    /// lower bound on the true maximum.
    pub estimate: f64,
    pub tour: Tour,
    /// The `M` used in the cost transformation.
    pub offset: f64,
}

/// Estimate the maximum tour length: run Christofides plus 3-opt on the
/// transformed costs M − c and map the minimizing tour back.
///
/// The transformed matrix is generally not metric, so the construction
/// carries no ratio guarantee there; the returned estimate is exact for
/// its witness tour and therefore never exceeds the true maximum.
pub fn max_tour_heuristic(instance: &Instance) -> Result<MaxTourEstimate> {
    let costs = instance.cost_matrix();
    max_tour_heuristic_costs(&costs)
}

/// See [`max_tour_heuristic`].
pub fn max_tour_heuristic_costs(costs: &CostMatrix) -> Result<MaxTourEstimate> {
    let (transformed, offset) = transform_max(costs);
    let start = christofides_costs(&transformed)?;
    let opts = KOptOptions { k: KOptLevel::Three, ..Default::default() };
    let improved = k_opt_improve(&start.tour, &transformed, &opts)?;
    let estimate = improved.tour.length(costs)?;
    Ok(MaxTourEstimate { estimate, tour: improved.tour, offset })
}
