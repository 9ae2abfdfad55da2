//! Tours and the statistics of the tour-length population.
//!
//! A tour is an undirected Hamiltonian cycle in canonical form (starts
//! at node 0, oriented so the second node is smaller than the last), so
//! each of the (n−1)!/2 distinct cycles has exactly one representative.
//! This module enumerates that population exactly for small n, computes
//! its mean and variance in closed form for any n, estimates all four
//! moments by seeded uniform sampling, and bins lengths into histograms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::CostMatrix;

/// Canonical Hamiltonian cycle over nodes 0..n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tour {
    order: Vec<u32>,
}

impl Tour {
    /// Validate a visiting order (any rotation/orientation) and store it
    /// canonically: node 0 first, then the smaller-indexed neighbor of 0.
    pub fn new(order: Vec<u32>) -> Result<Self> {
        let n = order.len();
        if n < 3 {
            return Err(Error::TooFewNodes(n));
        }
        let mut seen = vec![false; n];
        for &v in &order {
            if v as usize >= n || seen[v as usize] {
                return Err(Error::InvalidTour { n });
            }
            seen[v as usize] = true;
        }
        Ok(Self { order: canonicalize(&order) })
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// Cycle length under the given costs.
    pub fn length(&self, costs: &CostMatrix) -> Result<f64> {
        if costs.n() != self.n() {
            return Err(Error::SizeMismatch { tour: self.n(), matrix: costs.n() });
        }
        Ok(order_length(&self.order, costs))
    }
}

fn canonicalize(order: &[u32]) -> Vec<u32> {
    let n = order.len();
    let zero = order.iter().position(|&v| v == 0).expect("validated permutation");
    let mut rotated: Vec<u32> = Vec::with_capacity(n);
    rotated.extend_from_slice(&order[zero..]);
    rotated.extend_from_slice(&order[..zero]);
    if rotated[1] > rotated[n - 1] {
        rotated[1..].reverse();
    }
    rotated
}

/// Length of a cycle given as a raw visiting order. The closing edge
/// back to the first node is included.
pub fn order_length(order: &[u32], costs: &CostMatrix) -> f64 {
    let n = order.len();
    debug_assert_eq!(n, costs.n());
    let mut sum = 0.0;
    for k in 0..n {
        sum += costs.get(order[k] as usize, order[(k + 1) % n] as usize);
    }
    sum
}

/// Sum of edge costs along the tour (the closing edge included).
pub fn tour_length(tour: &Tour, costs: &CostMatrix) -> Result<f64> {
    tour.length(costs)
}

/// How a [`MomentSet`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "basis", rename_all = "kebab-case")]
pub enum CountBasis {
    ExactEnumeration,
    ClosedForm,
    Sampled { sample_size: u64, seed: u64 },
}

/// First four moments (kurtosis in the ordinary convention, normal = 3)
/// of a tour-length distribution, plus support bounds when known.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub count_basis: CountBasis,
}

/// Streaming accumulator over tour lengths: power sums of the deviation
/// from a fixed shift (the exact mean), so the 3e9-term sums for n = 14
/// stay well conditioned, plus extreme tracking.
#[derive(Debug, Clone)]
struct Accumulator {
    shift: f64,
    count: u64,
    s1: f64,
    s2: f64,
    s3: f64,
    s4: f64,
    best_len: f64,
    best_order: Vec<u32>,
    worst_len: f64,
    worst_order: Vec<u32>,
}

impl Accumulator {
    fn new(shift: f64) -> Self {
        Self {
            shift,
            count: 0,
            s1: 0.0,
            s2: 0.0,
            s3: 0.0,
            s4: 0.0,
            best_len: f64::INFINITY,
            best_order: Vec::new(),
            worst_len: f64::NEG_INFINITY,
            worst_order: Vec::new(),
        }
    }

    #[inline(always)]
    fn record(&mut self, len: f64, order: &[u32]) {
        let d = len - self.shift;
        let d2 = d * d;
        self.count += 1;
        self.s1 += d;
        self.s2 += d2;
        self.s3 += d2 * d;
        self.s4 += d2 * d2;
        if len < self.best_len {
            self.best_len = len;
            self.best_order.clear();
            self.best_order.extend_from_slice(order);
        }
        if len > self.worst_len {
            self.worst_len = len;
            self.worst_order.clear();
            self.worst_order.extend_from_slice(order);
        }
    }

    /// Fold `other` into `self`. Merges happen in a fixed shard order,
    /// so results do not depend on the worker count; strict comparisons
    /// keep the earliest extreme on ties.
    fn merge(&mut self, other: &Accumulator) {
        debug_assert_eq!(self.shift, other.shift);
        self.count += other.count;
        self.s1 += other.s1;
        self.s2 += other.s2;
        self.s3 += other.s3;
        self.s4 += other.s4;
        if other.best_len < self.best_len {
            self.best_len = other.best_len;
            self.best_order = other.best_order.clone();
        }
        if other.worst_len > self.worst_len {
            self.worst_len = other.worst_len;
            self.worst_order = other.worst_order.clone();
        }
    }

    fn moments(&self, basis: CountBasis) -> MomentSet {
        assert!(self.count > 0, "no tours recorded");
        let n = self.count as f64;
        // The shift is only approximately the mean; fold the residual
        // offset back into central moments.
        let c1 = self.s1 / n;
        let mean = self.shift + c1;
        if self.best_len == self.worst_len {
            // Constant population: define higher standardized moments as 0.
            return MomentSet {
                mean,
                variance: 0.0,
                skewness: 0.0,
                kurtosis: 0.0,
                min: Some(self.best_len),
                max: Some(self.worst_len),
                count_basis: basis,
            };
        }
        let r2 = self.s2 / n;
        let r3 = self.s3 / n;
        let r4 = self.s4 / n;
        let m2 = (r2 - c1 * c1).max(0.0);
        let m3 = r3 - 3.0 * c1 * r2 + 2.0 * c1.powi(3);
        let m4 = r4 - 4.0 * c1 * r3 + 6.0 * c1 * c1 * r2 - 3.0 * c1.powi(4);
        MomentSet {
            mean,
            variance: m2,
            skewness: m3 / m2.powf(1.5),
            kurtosis: m4 / (m2 * m2),
            min: Some(self.best_len),
            max: Some(self.worst_len),
            count_basis: basis,
        }
    }
}

/// Default node-count ceiling for full enumeration: 13!/2 ≈ 3.1e9 tours.
pub const DEFAULT_ENUMERATION_CAP: usize = 14;

#[derive(Debug, Clone)]
pub struct EnumerateOptions {
    pub cap: usize,
    /// Explicit consent to enumerate past the cap.
    pub allow_above_cap: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self { cap: DEFAULT_ENUMERATION_CAP, allow_above_cap: false }
    }
}

/// Exact statistics from visiting every canonical tour.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnumerationResult {
    pub moments: MomentSet,
    pub tours_visited: u64,
    /// Argmin tour (ties resolved to the first in shard order).
    pub best: Tour,
    /// Argmax tour.
    pub worst: Tour,
}

/// Per-tour callback; receives the canonical order and its length.
pub type TourVisitor<'a> = &'a (dyn Fn(&[u32], f64) + Sync);

struct ShardRunner<'a> {
    costs: &'a [f64],
    n: usize,
    buf: Vec<u32>,
    acc: Accumulator,
    visitor: Option<TourVisitor<'a>>,
}

impl ShardRunner<'_> {
    #[inline(always)]
    fn record(&mut self, len: f64) {
        self.acc.record(len, &self.buf);
        if let Some(v) = self.visitor {
            v(&self.buf, len);
        }
    }

    /// Fill positions `pos..n-1` with the remaining values in every
    /// order. The final two free slots are expanded inline; swap-based
    /// generation keeps the visit order deterministic.
    fn descend(&mut self, pos: usize, len: f64) {
        let n = self.n;
        if pos == n - 3 {
            let prev = self.buf[pos - 1] as usize;
            let x = self.buf[pos] as usize;
            let y = self.buf[pos + 1] as usize;
            let last = self.buf[pos + 2] as usize;
            let cxy = self.costs[x * n + y];
            let l1 = len + self.costs[prev * n + x] + cxy + self.costs[y * n + last];
            let l2 = len + self.costs[prev * n + y] + cxy + self.costs[x * n + last];
            self.record(l1);
            self.buf.swap(pos, pos + 1);
            self.record(l2);
            self.buf.swap(pos, pos + 1);
            return;
        }
        let prev = self.buf[pos - 1] as usize;
        for i in pos..n - 1 {
            self.buf.swap(pos, i);
            let here = self.buf[pos] as usize;
            self.descend(pos + 1, len + self.costs[prev * n + here]);
            self.buf.swap(pos, i);
        }
    }
}

fn run_shard(
    costs: &CostMatrix,
    shift: f64,
    v1: u32,
    vlast: u32,
    visitor: Option<TourVisitor<'_>>,
) -> Accumulator {
    let n = costs.n();
    let flat = costs.as_slice();
    let mut buf = Vec::with_capacity(n);
    buf.push(0u32);
    buf.push(v1);
    for v in 1..n as u32 {
        if v != v1 && v != vlast {
            buf.push(v);
        }
    }
    buf.push(vlast);
    let base = flat[v1 as usize] + flat[vlast as usize * n]; // c(0,v1) + c(vlast,0)
    let mut runner =
        ShardRunner { costs: flat, n, buf, acc: Accumulator::new(shift), visitor };
    match n {
        3 => {
            let len = base + flat[v1 as usize * n + vlast as usize];
            runner.record(len);
        }
        4 => {
            let mid = runner.buf[2] as usize;
            let len = base + flat[v1 as usize * n + mid] + flat[mid * n + vlast as usize];
            runner.record(len);
        }
        _ => runner.descend(2, base),
    }
    runner.acc
}

/// Visit each of the (n−1)!/2 canonical tours exactly once and return
/// the exact moment set plus the extreme tours.
///
/// Work is split into shards fixed by the (second, last) node pair;
/// visit order inside a shard is deterministic and the shard merge order
/// is fixed, so results are identical for any worker count. The optional
/// visitor runs on whichever worker owns the shard.
pub fn enumerate_tours(
    costs: &CostMatrix,
    opts: &EnumerateOptions,
    visitor: Option<TourVisitor<'_>>,
) -> Result<EnumerationResult> {
    let n = costs.n();
    if n < 3 {
        return Err(Error::TooFewNodes(n));
    }
    if n > opts.cap && !opts.allow_above_cap {
        return Err(Error::EnumerationCapExceeded { n, cap: opts.cap });
    }
    let shift = exact_mean(costs);
    let mut shards: Vec<(u32, u32)> = Vec::new();
    for v1 in 1..n as u32 {
        for vlast in (v1 + 1)..n as u32 {
            shards.push((v1, vlast));
        }
    }
    let accs: Vec<Accumulator> = shards
        .par_iter()
        .map(|&(v1, vlast)| run_shard(costs, shift, v1, vlast, visitor))
        .collect();
    let mut total = Accumulator::new(shift);
    for acc in &accs {
        total.merge(acc);
    }
    let moments = total.moments(CountBasis::ExactEnumeration);
    Ok(EnumerationResult {
        moments,
        tours_visited: total.count,
        best: Tour::new(total.best_order)?,
        worst: Tour::new(total.worst_order)?,
    })
}

/// Exact mean tour length over all Hamiltonian cycles, in O(n²).
///
/// Every edge appears in the same fraction 2/(n−1) of cycles, so the
/// mean is (2/(n−1))·Σ_{i<j} c_ij.
pub fn exact_mean(costs: &CostMatrix) -> f64 {
    let n = costs.n();
    debug_assert!(n >= 3);
    2.0 / (n as f64 - 1.0) * costs.sum_of_costs()
}

/// Exact variance of the tour-length distribution in O(n²).
///
/// E[L²] decomposes over ordered edge pairs by co-occurrence class in a
/// uniform random Hamiltonian cycle: identical edges appear with
/// probability 2/(n−1), vertex-sharing pairs with 2/((n−1)(n−2)), and
/// disjoint pairs with 4/((n−1)(n−2)) (verified against brute-force
/// counts in the tests). Falls back to direct enumeration for n < 5,
/// where the disjoint class is empty or the counts degenerate.
pub fn exact_variance(costs: &CostMatrix) -> f64 {
    let n = costs.n();
    debug_assert!(n >= 3);
    if n < 5 {
        let result = enumerate_tours(costs, &EnumerateOptions::default(), None)
            .expect("n in 3..5 is always below the cap");
        return result.moments.variance;
    }
    let nf = n as f64;
    let p_same = 2.0 / (nf - 1.0);
    let p_adj = 2.0 / ((nf - 1.0) * (nf - 2.0));
    let p_dis = 4.0 / ((nf - 1.0) * (nf - 2.0));

    let mut sum = 0.0; // Σ_e c_e over unordered edges
    let mut sum_sq = 0.0; // Σ_e c_e²
    let mut vertex_sums = vec![0.0f64; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let c = costs.get(i, j);
            sum += c;
            sum_sq += c * c;
            vertex_sums[i] += c;
            vertex_sums[j] += c;
        }
    }
    // Ordered pairs of distinct edges sharing a vertex:
    // Σ_v (s_v² − Σ_{e∋v} c_e²).
    let mut adj = 0.0;
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            let c = costs.get(i, j);
            diag += c * c;
        }
        adj += vertex_sums[i] * vertex_sums[i] - diag;
    }
    let dis_ordered = sum * sum - sum_sq - adj;
    let second_moment = p_same * sum_sq + p_adj * adj + p_dis * dis_ordered;
    let mean = p_same * sum;
    (second_moment - mean * mean).max(0.0)
}

const SAMPLE_CHUNK: u64 = 1 << 16;

fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Four sampled moments from uniformly random tours.
///
/// Each sample index gets its own counter-derived generator, so the
/// estimate is reproducible for a given seed regardless of how samples
/// are spread across workers.
pub fn sample_moments(costs: &CostMatrix, sample_size: u64, seed: u64) -> Result<MomentSet> {
    let n = costs.n();
    if n < 3 {
        return Err(Error::TooFewNodes(n));
    }
    if sample_size < 1000 {
        return Err(Error::InvalidParameter(format!(
            "sample_size must be at least 1000, got {sample_size}"
        )));
    }
    let shift = exact_mean(costs);
    let chunks: Vec<(u64, u64)> = (0..sample_size)
        .step_by(SAMPLE_CHUNK as usize)
        .map(|lo| (lo, (lo + SAMPLE_CHUNK).min(sample_size)))
        .collect();
    let accs: Vec<Accumulator> = chunks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut acc = Accumulator::new(shift);
            let mut order: Vec<u32> = (0..n as u32).collect();
            for idx in lo..hi {
                let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, idx));
                // Fisher-Yates over positions 1..n keeps node 0 fixed;
                // uniform over directed rooted tours, hence uniform over
                // undirected cycles.
                for i in (2..n).rev() {
                    let j = rng.random_range(1..=i);
                    order.swap(i, j);
                }
                acc.record(order_length(&order, costs), &order);
            }
            acc
        })
        .collect();
    let mut total = Accumulator::new(shift);
    for acc in &accs {
        total.merge(acc);
    }
    Ok(total.moments(CountBasis::Sampled { sample_size, seed }))
}

/// Fixed-width histogram over a closed range; out-of-range values clamp
/// into the edge bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl Histogram {
    pub fn new(bins: usize, range: (f64, f64)) -> Result<Self> {
        let (lo, hi) = range;
        if bins < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 bins, got {bins}")));
        }
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "histogram range must satisfy min < max, got ({lo}, {hi})"
            )));
        }
        let width = (hi - lo) / bins as f64;
        let bin_edges = (0..=bins).map(|k| lo + k as f64 * width).collect();
        Ok(Self { bin_edges, counts: vec![0; bins], total: 0 })
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    /// Count one value into its half-open bin.
    pub fn record(&mut self, x: f64) {
        let bins = self.counts.len();
        let lo = self.bin_edges[0];
        let hi = self.bin_edges[bins];
        let pos = (x - lo) / (hi - lo) * bins as f64;
        let idx = (pos.floor().max(0.0) as usize).min(bins - 1);
        self.counts[idx] += 1;
        self.total += 1;
    }

    pub fn bin_centers(&self) -> Vec<f64> {
        self.bin_edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Normalized density per bin: count / (total · bin width).
    pub fn densities(&self) -> Vec<f64> {
        if self.total == 0 {
            return vec![0.0; self.counts.len()];
        }
        let total = self.total as f64;
        self.bin_edges
            .windows(2)
            .zip(&self.counts)
            .map(|(w, &c)| c as f64 / (total * (w[1] - w[0])))
            .collect()
    }

    /// Two-column CSV (bin_center, density) for external plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_center,density\n");
        for (center, density) in self.bin_centers().iter().zip(self.densities()) {
            out.push_str(&format!("{center},{density}\n"));
        }
        out
    }
}

/// Bin a stream of lengths. See [`Histogram::record`] for clamping.
pub fn histogram<I: IntoIterator<Item = f64>>(
    lengths: I,
    bins: usize,
    range: (f64, f64),
) -> Result<Histogram> {
    let mut h = Histogram::new(bins, range)?;
    for x in lengths {
        h.record(x);
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Instance;
    use std::collections::HashSet;
    use std::sync::Mutex;

    fn unit_triangle() -> CostMatrix {
        CostMatrix::from_fn(3, |_, _| 1.0)
    }

    /// Unit square corners 0,1,2,3 in perimeter order.
    fn unit_square() -> CostMatrix {
        let pts = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        CostMatrix::from_fn(4, |i, j| {
            let dx: f64 = pts[i][0] - pts[j][0];
            let dy: f64 = pts[i][1] - pts[j][1];
            (dx * dx + dy * dy).sqrt()
        })
    }

    #[test]
    fn tour_length_trivial_cases() {
        let tri = unit_triangle();
        let t = Tour::new(vec![0, 1, 2]).unwrap();
        assert_eq!(t.length(&tri).unwrap(), 3.0);

        let sq = unit_square();
        let perimeter = Tour::new(vec![0, 1, 2, 3]).unwrap();
        assert_eq!(perimeter.length(&sq).unwrap(), 4.0);

        assert!(matches!(
            Tour::new(vec![0, 1, 2]).unwrap().length(&sq),
            Err(Error::SizeMismatch { tour: 3, matrix: 4 })
        ));
    }

    #[test]
    fn tour_canonical_form() {
        let t = Tour::new(vec![2, 1, 0, 3]).unwrap();
        assert_eq!(t.order()[0], 0);
        assert!(t.order()[1] < t.order()[3]);
        // All rotations/reflections canonicalize identically.
        let u = Tour::new(vec![3, 0, 1, 2]).unwrap();
        let v = Tour::new(vec![1, 0, 3, 2]).unwrap();
        assert_eq!(t.order(), Tour::new(vec![0, 1, 2, 3]).unwrap().order());
        assert_eq!(u.order(), v.order());

        assert!(Tour::new(vec![0, 1, 1, 3]).is_err());
        assert!(Tour::new(vec![0, 1, 4, 3]).is_err());
    }

    #[test]
    fn enumeration_counts_match_formula() {
        for n in 3..=10usize {
            let costs = Instance::generate_random(n, 42).unwrap().cost_matrix();
            let expected: u64 = (1..n as u64).product::<u64>() / 2; // (n−1)!/2
            let result = enumerate_tours(&costs, &EnumerateOptions::default(), None).unwrap();
            assert_eq!(result.tours_visited, expected, "n={n}");
        }
    }

    #[test]
    fn enumeration_small_cases() {
        let costs = Instance::generate_random(4, 0).unwrap().cost_matrix();
        let r = enumerate_tours(&costs, &EnumerateOptions::default(), None).unwrap();
        assert_eq!(r.tours_visited, 3);

        let costs = Instance::generate_random(5, 0).unwrap().cost_matrix();
        let r = enumerate_tours(&costs, &EnumerateOptions::default(), None).unwrap();
        assert_eq!(r.tours_visited, 12);
    }

    #[test]
    fn enumeration_visits_each_canonical_tour_once() {
        let costs = Instance::generate_random(6, 3).unwrap().cost_matrix();
        let seen = Mutex::new(HashSet::new());
        let visitor = |order: &[u32], len: f64| {
            assert_eq!(order[0], 0);
            assert!(order[1] < order[5]);
            assert!((len - order_length(order, &costs)).abs() < 1e-12);
            assert!(seen.lock().unwrap().insert(order.to_vec()));
        };
        let r = enumerate_tours(&costs, &EnumerateOptions::default(), Some(&visitor)).unwrap();
        assert_eq!(r.tours_visited, 60);
        assert_eq!(seen.lock().unwrap().len(), 60);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let costs = Instance::generate_random(7, 0).unwrap().cost_matrix();
        let opts = EnumerateOptions { cap: 6, allow_above_cap: false };
        assert!(matches!(
            enumerate_tours(&costs, &opts, None),
            Err(Error::EnumerationCapExceeded { n: 7, cap: 6 })
        ));
        let opts = EnumerateOptions { cap: 6, allow_above_cap: true };
        assert!(enumerate_tours(&costs, &opts, None).is_ok());
    }

    #[test]
    fn enumeration_extremes_are_exact() {
        let costs = Instance::generate_random(7, 11).unwrap().cost_matrix();
        let r = enumerate_tours(&costs, &EnumerateOptions::default(), None).unwrap();
        let best = r.best.length(&costs).unwrap();
        let worst = r.worst.length(&costs).unwrap();
        assert_eq!(Some(best), r.moments.min);
        assert_eq!(Some(worst), r.moments.max);
        assert!(best <= r.moments.mean && r.moments.mean <= worst);
    }

    #[test]
    fn enumeration_independent_of_worker_count() {
        let costs = Instance::generate_random(8, 5).unwrap().cost_matrix();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| enumerate_tours(&costs, &EnumerateOptions::default(), None).unwrap())
        };
        let a = run(1);
        let b = run(3);
        assert_eq!(a.moments, b.moments);
        assert_eq!(a.best, b.best);
        assert_eq!(a.worst, b.worst);
    }

    #[test]
    fn exact_mean_all_equal_k4() {
        let costs = CostMatrix::from_fn(4, |_, _| 1.0);
        assert!((exact_mean(&costs) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn exact_mean_matches_enumeration() {
        for n in 4..=9usize {
            let costs = Instance::generate_random(n, 1000 + n as u64).unwrap().cost_matrix();
            let exact = exact_mean(&costs);
            let enumerated =
                enumerate_tours(&costs, &EnumerateOptions::default(), None).unwrap().moments.mean;
            assert!(
                ((exact - enumerated) / enumerated).abs() < 1e-9,
                "n={n}: {exact} vs {enumerated}"
            );
        }
    }

    #[test]
    fn exact_variance_all_equal_is_zero() {
        let costs = CostMatrix::from_fn(7, |_, _| 2.5);
        assert_eq!(exact_variance(&costs), 0.0);
    }

    #[test]
    fn exact_variance_matches_enumeration() {
        for n in 5..=9usize {
            let costs = Instance::generate_random(n, 2000 + n as u64).unwrap().cost_matrix();
            let exact = exact_variance(&costs);
            let enumerated = enumerate_tours(&costs, &EnumerateOptions::default(), None)
                .unwrap()
                .moments
                .variance;
            assert!(
                ((exact - enumerated) / enumerated).abs() < 1e-9,
                "n={n}: {exact} vs {enumerated}"
            );
        }
    }

    #[test]
    fn exact_variance_small_n_falls_back_to_enumeration() {
        for n in 3..=4usize {
            let costs = Instance::generate_random(n, 77).unwrap().cost_matrix();
            let exact = exact_variance(&costs);
            let enumerated = enumerate_tours(&costs, &EnumerateOptions::default(), None)
                .unwrap()
                .moments
                .variance;
            assert_eq!(exact, enumerated);
        }
    }

    /// The closed-form co-occurrence probabilities behind exact_variance,
    /// verified by brute-force counting over all canonical tours.
    #[test]
    fn edge_co_occurrence_probabilities() {
        for n in 5..=8usize {
            let total = (1..n as u64).product::<u64>() / 2;
            // Representative pairs: identical, vertex-sharing, disjoint.
            let count = |pred: &(dyn Fn(&[u32]) -> bool + Sync)| {
                let hits = Mutex::new(0u64);
                let costs = CostMatrix::from_fn(n, |_, _| 1.0);
                let visitor = |order: &[u32], _: f64| {
                    if pred(order) {
                        *hits.lock().unwrap() += 1;
                    }
                };
                enumerate_tours(&costs, &EnumerateOptions::default(), Some(&visitor)).unwrap();
                hits.into_inner().unwrap()
            };
            let has_edge = |order: &[u32], a: u32, b: u32| {
                let n = order.len();
                (0..n).any(|k| {
                    let (u, v) = (order[k], order[(k + 1) % n]);
                    (u == a && v == b) || (u == b && v == a)
                })
            };
            let nf = n as f64;

            let p_same = count(&|o: &[u32]| has_edge(o, 0, 1)) as f64 / total as f64;
            assert!((p_same - 2.0 / (nf - 1.0)).abs() < 1e-12, "n={n} identical");

            let p_adj =
                count(&|o: &[u32]| has_edge(o, 0, 1) && has_edge(o, 1, 2)) as f64 / total as f64;
            assert!(
                (p_adj - 2.0 / ((nf - 1.0) * (nf - 2.0))).abs() < 1e-12,
                "n={n} vertex-sharing"
            );

            let p_dis =
                count(&|o: &[u32]| has_edge(o, 0, 1) && has_edge(o, 2, 3)) as f64 / total as f64;
            assert!(
                (p_dis - 4.0 / ((nf - 1.0) * (nf - 2.0))).abs() < 1e-12,
                "n={n} disjoint"
            );
        }
    }

    #[test]
    fn sampling_constant_costs_has_zero_variance() {
        let costs = CostMatrix::from_fn(9, |_, _| 3.0);
        let m = sample_moments(&costs, 1000, 1).unwrap();
        assert_eq!(m.variance, 0.0);
        assert_eq!(m.mean, 27.0);
    }

    #[test]
    fn sampling_rejects_tiny_sample() {
        let costs = unit_square();
        assert!(sample_moments(&costs, 999, 1).is_err());
    }

    #[test]
    fn sampling_is_deterministic_and_worker_independent() {
        let costs = Instance::generate_random(12, 9).unwrap().cost_matrix();
        let a = sample_moments(&costs, 200_000, 7).unwrap();
        let b = sample_moments(&costs, 200_000, 7).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let c = pool.install(|| sample_moments(&costs, 200_000, 7).unwrap());
        assert_eq!(a, c);
        let d = sample_moments(&costs, 200_000, 8).unwrap();
        assert_ne!(a, d);
    }

    #[test]
    fn sampled_moments_close_to_enumeration_n10() {
        let costs = Instance::generate_random(10, 21).unwrap().cost_matrix();
        let exact = enumerate_tours(&costs, &EnumerateOptions::default(), None).unwrap().moments;
        let m = 400_000u64;
        let sampled = sample_moments(&costs, m, 5).unwrap();
        let mf = m as f64;
        // Standard errors: mean σ/√m, variance ~σ²√((κ−1)/m), skewness
        // √(6/m), kurtosis √(24/m).
        let sd = exact.variance.sqrt();
        assert!((sampled.mean - exact.mean).abs() < 3.0 * sd / mf.sqrt());
        let var_se = exact.variance * ((exact.kurtosis - 1.0) / mf).sqrt();
        assert!((sampled.variance - exact.variance).abs() < 3.0 * var_se);
        assert!((sampled.skewness - exact.skewness).abs() < 3.0 * (6.0 / mf).sqrt());
        assert!((sampled.kurtosis - exact.kurtosis).abs() < 3.0 * (24.0 / mf).sqrt());
    }

    #[test]
    fn sampling_mean_stable_under_doubling() {
        let costs = Instance::generate_random(15, 3).unwrap().cost_matrix();
        let small = sample_moments(&costs, 50_000, 11).unwrap();
        let large = sample_moments(&costs, 100_000, 11).unwrap();
        let se = (small.variance / 50_000.0).sqrt();
        assert!((small.mean - large.mean).abs() < 4.0 * se);
    }

    #[test]
    fn tour_length_invariant_under_rotation_and_reversal() {
        for n in 4..=7usize {
            let costs = Instance::generate_random(n, n as u64).unwrap().cost_matrix();
            let order: Vec<u32> = (0..n as u32).collect();
            let base = order_length(&order, &costs);
            for shift in 0..n {
                let rotated: Vec<u32> =
                    (0..n).map(|k| order[(k + shift) % n]).collect();
                assert!((order_length(&rotated, &costs) - base).abs() < 1e-12);
                let mut reversed = rotated.clone();
                reversed.reverse();
                assert!((order_length(&reversed, &costs) - base).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn histogram_empty_stream_all_zero() {
        let h = histogram(std::iter::empty(), 4, (0.0, 1.0)).unwrap();
        assert_eq!(h.counts, vec![0, 0, 0, 0]);
        assert_eq!(h.total, 0);
        assert!(h.densities().iter().all(|&d| d == 0.0));
    }

    #[test]
    fn histogram_single_midpoint_value() {
        let h = histogram([0.5], 5, (0.0, 1.0)).unwrap();
        assert_eq!(h.total, 1);
        assert_eq!(h.counts.iter().sum::<u64>(), 1);
        assert_eq!(h.counts[2], 1);
    }

    #[test]
    fn histogram_clamps_out_of_range() {
        let h = histogram([-5.0, 0.2, 99.0], 4, (0.0, 1.0)).unwrap();
        assert_eq!(h.counts[0], 2); // -5.0 clamps low, 0.2 lands there
        assert_eq!(h.counts[3], 1);
        assert_eq!(h.total, 3);
    }

    #[test]
    fn histogram_density_integrates_to_one() {
        let costs = Instance::generate_random(8, 2).unwrap().cost_matrix();
        let lengths = Mutex::new(Vec::new());
        let visitor = |_: &[u32], len: f64| lengths.lock().unwrap().push(len);
        enumerate_tours(&costs, &EnumerateOptions::default(), Some(&visitor)).unwrap();
        let lengths = lengths.into_inner().unwrap();
        let lo = lengths.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = lengths.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let h = histogram(lengths.iter().cloned(), 16, (lo, hi + 1e-9)).unwrap();
        assert_eq!(h.total as usize, lengths.len());
        assert_eq!(h.counts.iter().sum::<u64>(), h.total);
        let width = (h.bin_edges[1] - h.bin_edges[0]) as f64;
        let integral: f64 = h.densities().iter().map(|d| d * width).sum();
        assert!((integral - 1.0).abs() < 1e-9);
    }

    #[test]
    fn histogram_rejects_bad_arguments() {
        assert!(Histogram::new(1, (0.0, 1.0)).is_err());
        assert!(Histogram::new(4, (1.0, 1.0)).is_err());
        assert!(Histogram::new(4, (2.0, 1.0)).is_err());
    }

    #[test]
    fn histogram_csv_shape() {
        let h = histogram([0.1, 0.9], 2, (0.0, 1.0)).unwrap();
        let csv = h.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "bin_center,density");
        assert!(lines[1].starts_with("0.25,"));
    }
}
