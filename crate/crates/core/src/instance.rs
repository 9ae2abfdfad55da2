//! Instance ingestion and distance evaluation.
//!
//! Supports the TSPLIB subset needed here (EUC_2D, GEO, and EXPLICIT
//! with FULL_MATRIX / LOWER_DIAG_ROW / UPPER_ROW layouts), seeded random
//! unit-square instances, and the max-tour cost transformation. TSPLIB
//! rounding conventions are implemented bit-exactly (nearest-integer
//! Euclidean, truncation-based geographic distances) because the golden
//! optima for instances like burma14 are only reproducible under them;
//! generated random instances keep exact real distances instead.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense symmetric cost matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct CostMatrix {
    n: usize,
    values: Vec<f64>,
}

impl CostMatrix {
    /// Validate and wrap a dense matrix: symmetric, zero diagonal,
    /// non-negative, finite.
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for n={n}, got {}",
                n * n,
                values.len()
            )));
        }
        for i in 0..n {
            if values[i * n + i] != 0.0 {
                return Err(Error::InvalidMatrix(format!(
                    "diagonal entry ({i},{i}) is {}, expected 0",
                    values[i * n + i]
                )));
            }
            for j in (i + 1)..n {
                let a = values[i * n + j];
                let b = values[j * n + i];
                if a != b {
                    return Err(Error::NonSymmetricMatrix { i, j, a, b });
                }
                if !(a >= 0.0) || !a.is_finite() {
                    return Err(Error::InvalidMatrix(format!(
                        "cost ({i},{j}) is {a}, expected finite and non-negative"
                    )));
                }
            }
        }
        Ok(Self { n, values })
    }

    /// Build from a symmetric cost function over index pairs.
    pub fn from_fn<F: Fn(usize, usize) -> f64>(n: usize, cost: F) -> Self {
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let c = cost(i, j);
                values[i * n + j] = c;
                values[j * n + i] = c;
            }
        }
        Self { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline(always)]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Flat row-major view, stride `n`; the enumeration kernels index it
    /// directly.
    #[inline(always)]
    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    /// Sum over unordered off-diagonal pairs.
    pub fn sum_of_costs(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                s += self.get(i, j);
            }
        }
        s
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                m = m.max(self.get(i, j));
            }
        }
        m
    }

    /// True when every cost is an integer value (stored in f64).
    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|c| c.fract() == 0.0)
    }

    /// Count triangle-inequality violations c(i,k) > c(i,j) + c(j,k) + slack
    /// over all ordered triples. O(n³); meant for diagnostics and tests.
    pub fn triangle_violations(&self, slack: f64) -> u64 {
        let mut count = 0;
        for i in 0..self.n {
            for j in 0..self.n {
                if j == i {
                    continue;
                }
                for k in 0..self.n {
                    if k == i || k == j {
                        continue;
                    }
                    if self.get(i, k) > self.get(i, j) + self.get(j, k) + slack {
                        count += 1;
                    }
                }
            }
        }
        count
    }
}

impl TryFrom<Vec<Vec<f64>>> for CostMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut values = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row length {} != dimension {n}",
                    row.len()
                )));
            }
            values.extend_from_slice(row);
        }
        CostMatrix::new(n, values)
    }
}

impl From<CostMatrix> for Vec<Vec<f64>> {
    fn from(m: CostMatrix) -> Self {
        (0..m.n).map(|i| m.values[i * m.n..(i + 1) * m.n].to_vec()).collect()
    }
}

/// How node positions or costs are stored, and which distance kernel
/// applies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Geometry {
    /// TSPLIB EUC_2D: planar coordinates, distances rounded to nearest
    /// integer.
    Euc2d { coords: Vec<[f64; 2]> },
    /// TSPLIB GEO: latitude/longitude in degrees.minutes form, the
    /// truncating geographic kernel.
    Geo { coords: Vec<[f64; 2]> },
    /// Explicit symmetric cost matrix.
    Explicit { costs: CostMatrix },
    /// Planar coordinates with exact (unrounded) Euclidean distances;
    /// used by generated random instances.
    Euc2dReal { coords: Vec<[f64; 2]> },
}

/// A TSP instance: label, node count, and geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub name: String,
    pub n: usize,
    pub geometry: Geometry,
}

/// TSPLIB uses its own truncated value of pi in the GEO kernel.
const TSPLIB_PI: f64 = 3.141592;
const EARTH_RADIUS: f64 = 6378.388;

/// Degrees.minutes encoding to radians, per the TSPLIB specification
/// (integer part = degrees, fraction = minutes).
fn geo_radians(x: f64) -> f64 {
    let deg = x.trunc();
    let min = x - deg;
    TSPLIB_PI * (deg + 5.0 * min / 3.0) / 180.0
}

fn geo_distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    let lat_i = geo_radians(a[0]);
    let lon_i = geo_radians(a[1]);
    let lat_j = geo_radians(b[0]);
    let lon_j = geo_radians(b[1]);
    let q1 = (lon_i - lon_j).cos();
    let q2 = (lat_i - lat_j).cos();
    let q3 = (lat_i + lat_j).cos();
    (EARTH_RADIUS * (0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)).acos() + 1.0).trunc()
}

fn euclid(a: [f64; 2], b: [f64; 2]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    (dx * dx + dy * dy).sqrt()
}

/// TSPLIB nearest-integer rounding: nint(x) = ⌊x + 0.5⌋ for x ≥ 0.
fn nint(x: f64) -> f64 {
    (x + 0.5).floor()
}

impl Instance {
    /// Generate `n` points drawn independently and uniformly from the
    /// unit square, deterministic in `seed`. Distances are exact reals.
    pub fn generate_random(n: usize, seed: u64) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewNodes(n));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coords = (0..n).map(|_| [rng.random::<f64>(), rng.random::<f64>()]).collect();
        Ok(Self {
            name: format!("random-n{n}-seed{seed}"),
            n,
            geometry: Geometry::Euc2dReal { coords },
        })
    }

    /// Edge cost between nodes `i` and `j` under the instance's distance
    /// kernel. Symmetric; zero on the diagonal.
    ///
    /// Panics when an index is out of range.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n && j < self.n, "node index ({i},{j}) out of range for n={}", self.n);
        if i == j {
            return 0.0;
        }
        match &self.geometry {
            Geometry::Euc2d { coords } => nint(euclid(coords[i], coords[j])),
            Geometry::Geo { coords } => geo_distance(coords[i], coords[j]),
            Geometry::Explicit { costs } => costs.get(i, j),
            Geometry::Euc2dReal { coords } => euclid(coords[i], coords[j]),
        }
    }

    /// Materialize the full cost matrix.
    pub fn cost_matrix(&self) -> CostMatrix {
        match &self.geometry {
            Geometry::Explicit { costs } => costs.clone(),
            _ => CostMatrix::from_fn(self.n, |i, j| self.distance(i, j)),
        }
    }

    /// Max-tour cost transformation: off-diagonal costs become M − c
    /// with M = (max cost) + 1, so a minimum tour of the result is a
    /// maximum tour of the original, recoverable as n·M − length.
    pub fn transform_max(&self) -> (CostMatrix, f64) {
        transform_max(&self.cost_matrix())
    }
}

/// See [`Instance::transform_max`]. Returns the transformed matrix and M.
pub fn transform_max(costs: &CostMatrix) -> (CostMatrix, f64) {
    let m = costs.max_off_diagonal() + 1.0;
    (CostMatrix::from_fn(costs.n(), |i, j| m - costs.get(i, j)), m)
}

/// Supported explicit matrix layouts.
#[derive(Debug, Clone, Copy, PartialEq)]
enum WeightFormat {
    FullMatrix,
    LowerDiagRow,
    UpperRow,
}

/// Parse a TSPLIB-format document.
///
/// Supports EDGE_WEIGHT_TYPE in {EUC_2D, GEO, EXPLICIT}; explicit
/// matrices may use FULL_MATRIX, LOWER_DIAG_ROW or UPPER_ROW layout and
/// are symmetrized from the declared triangle.
pub fn parse_tsplib(text: &str) -> Result<Instance> {
    let mut name = String::from("unnamed");
    let mut dimension: Option<usize> = None;
    let mut weight_type: Option<String> = None;
    let mut weight_format: Option<String> = None;
    let mut coord_lines: Vec<&str> = Vec::new();
    let mut weight_tokens: Vec<f64> = Vec::new();

    #[derive(PartialEq)]
    enum Section {
        Header,
        Coords,
        Weights,
        Done,
    }
    let mut section = Section::Header;

    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.eq_ignore_ascii_case("EOF") {
            section = Section::Done;
            continue;
        }
        match section {
            Section::Header => {
                if let Some((key, value)) = split_header(line) {
                    match key.as_str() {
                        "NAME" => name = value.to_string(),
                        "DIMENSION" => {
                            dimension = Some(value.parse().map_err(|_| {
                                Error::MalformedHeader(format!("bad DIMENSION value {value:?}"))
                            })?)
                        }
                        "EDGE_WEIGHT_TYPE" => weight_type = Some(value.to_uppercase()),
                        "EDGE_WEIGHT_FORMAT" => weight_format = Some(value.to_uppercase()),
                        // TYPE, COMMENT, DISPLAY_DATA_TYPE, ... are ignored.
                        _ => {}
                    }
                } else if line.eq_ignore_ascii_case("NODE_COORD_SECTION") {
                    section = Section::Coords;
                } else if line.eq_ignore_ascii_case("EDGE_WEIGHT_SECTION") {
                    section = Section::Weights;
                } else {
                    return Err(Error::MalformedHeader(format!("unrecognized line {line:?}")));
                }
            }
            Section::Coords => {
                if line.eq_ignore_ascii_case("EDGE_WEIGHT_SECTION") {
                    section = Section::Weights;
                } else {
                    coord_lines.push(line);
                }
            }
            Section::Weights => {
                if line.eq_ignore_ascii_case("NODE_COORD_SECTION") {
                    section = Section::Coords;
                } else {
                    for tok in line.split_whitespace() {
                        weight_tokens.push(tok.parse().map_err(|_| {
                            Error::MalformedHeader(format!("bad weight token {tok:?}"))
                        })?);
                    }
                }
            }
            Section::Done => {}
        }
    }

    let n = dimension.ok_or_else(|| Error::MalformedHeader("missing DIMENSION".into()))?;
    if n < 3 {
        return Err(Error::TooFewNodes(n));
    }
    let wt = weight_type.ok_or_else(|| Error::MalformedHeader("missing EDGE_WEIGHT_TYPE".into()))?;

    match wt.as_str() {
        "EUC_2D" | "GEO" => {
            let coords = parse_coords(&coord_lines, n)?;
            let geometry = if wt == "EUC_2D" {
                Geometry::Euc2d { coords }
            } else {
                Geometry::Geo { coords }
            };
            Ok(Instance { name, n, geometry })
        }
        "EXPLICIT" => {
            let fmt = match weight_format.as_deref() {
                Some("FULL_MATRIX") => WeightFormat::FullMatrix,
                Some("LOWER_DIAG_ROW") => WeightFormat::LowerDiagRow,
                Some("UPPER_ROW") => WeightFormat::UpperRow,
                Some(other) => return Err(Error::UnsupportedEdgeWeightFormat(other.to_string())),
                None => {
                    return Err(Error::MalformedHeader(
                        "EXPLICIT instance missing EDGE_WEIGHT_FORMAT".into(),
                    ))
                }
            };
            let costs = assemble_matrix(&weight_tokens, n, fmt)?;
            Ok(Instance { name, n, geometry: Geometry::Explicit { costs } })
        }
        other => Err(Error::UnsupportedEdgeWeightType(other.to_string())),
    }
}

fn split_header(line: &str) -> Option<(String, &str)> {
    let (key, value) = line.split_once(':')?;
    Some((key.trim().to_uppercase(), value.trim()))
}

fn parse_coords(lines: &[&str], n: usize) -> Result<Vec<[f64; 2]>> {
    if lines.len() != n {
        return Err(Error::DimensionMismatch { declared: n, found: lines.len() });
    }
    let mut coords = vec![[0.0f64; 2]; n];
    let mut seen = vec![false; n];
    for line in lines {
        let mut it = line.split_whitespace();
        let idx: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::MalformedHeader(format!("bad coord line {line:?}")))?;
        let x: f64 = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::MalformedHeader(format!("bad coord line {line:?}")))?;
        let y: f64 = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::MalformedHeader(format!("bad coord line {line:?}")))?;
        if !(1..=n).contains(&idx) {
            return Err(Error::IndexOutOfRange { index: idx, n });
        }
        coords[idx - 1] = [x, y];
        seen[idx - 1] = true;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::MalformedHeader(format!("no coordinates for node {}", missing + 1)));
    }
    Ok(coords)
}

fn assemble_matrix(tokens: &[f64], n: usize, fmt: WeightFormat) -> Result<CostMatrix> {
    let expected = match fmt {
        WeightFormat::FullMatrix => n * n,
        WeightFormat::LowerDiagRow => n * (n + 1) / 2,
        WeightFormat::UpperRow => n * (n - 1) / 2,
    };
    if tokens.len() != expected {
        return Err(Error::DimensionMismatch { declared: expected, found: tokens.len() });
    }
    let mut values = vec![0.0f64; n * n];
    let mut k = 0;
    match fmt {
        WeightFormat::FullMatrix => {
            values.copy_from_slice(tokens);
            // Symmetry (and the zero diagonal) is validated below.
        }
        WeightFormat::LowerDiagRow => {
            for i in 0..n {
                for j in 0..=i {
                    values[i * n + j] = tokens[k];
                    values[j * n + i] = tokens[k];
                    k += 1;
                }
            }
        }
        WeightFormat::UpperRow => {
            for i in 0..n {
                for j in (i + 1)..n {
                    values[i * n + j] = tokens[k];
                    values[j * n + i] = tokens[k];
                    k += 1;
                }
            }
        }
    }
    CostMatrix::new(n, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE_345: &str = "\
NAME: tri345
TYPE: TSP
DIMENSION: 3
EDGE_WEIGHT_TYPE: EUC_2D
NODE_COORD_SECTION
1 0 0
2 3 0
3 0 4
EOF
";

    #[test]
    fn parses_pythagorean_triangle() {
        let inst = parse_tsplib(TRIANGLE_345).unwrap();
        assert_eq!(inst.n, 3);
        assert_eq!(inst.name, "tri345");
        assert_eq!(inst.distance(0, 1), 3.0);
        assert_eq!(inst.distance(0, 2), 4.0);
        assert_eq!(inst.distance(1, 2), 5.0);
        assert_eq!(inst.distance(1, 0), 3.0);
        assert_eq!(inst.distance(2, 2), 0.0);
    }

    #[test]
    fn euc2d_rounds_to_nearest_integer() {
        let inst = Instance {
            name: "t".into(),
            n: 3,
            geometry: Geometry::Euc2d { coords: vec![[0.0, 0.0], [1.0, 1.0], [10.0, 0.0]] },
        };
        // √2 ≈ 1.414 → 1.
        assert_eq!(inst.distance(0, 1), 1.0);
        assert_eq!(inst.distance(0, 2), 10.0);
    }

    #[test]
    fn explicit_layouts_agree() {
        let full = "\
NAME: m
DIMENSION: 3
EDGE_WEIGHT_TYPE: EXPLICIT
EDGE_WEIGHT_FORMAT: FULL_MATRIX
EDGE_WEIGHT_SECTION
0 3 4
3 0 5
4 5 0
EOF
";
        let lower = "\
NAME: m
DIMENSION: 3
EDGE_WEIGHT_TYPE: EXPLICIT
EDGE_WEIGHT_FORMAT: LOWER_DIAG_ROW
EDGE_WEIGHT_SECTION
0
3 0
4 5 0
EOF
";
        let upper = "\
NAME: m
DIMENSION: 3
EDGE_WEIGHT_TYPE: EXPLICIT
EDGE_WEIGHT_FORMAT: UPPER_ROW
EDGE_WEIGHT_SECTION
3 4
5
EOF
";
        let a = parse_tsplib(full).unwrap().cost_matrix();
        let b = parse_tsplib(lower).unwrap().cost_matrix();
        let c = parse_tsplib(upper).unwrap().cost_matrix();
        assert_eq!(a, b);
        assert_eq!(b, c);
        assert_eq!(a.get(0, 1), 3.0);
        assert_eq!(a.get(2, 1), 5.0);
    }

    #[test]
    fn distinct_parse_errors() {
        let bad_type = TRIANGLE_345.replace("EUC_2D", "ATT");
        assert!(matches!(parse_tsplib(&bad_type), Err(Error::UnsupportedEdgeWeightType(t)) if t == "ATT"));

        let bad_header = TRIANGLE_345.replace("DIMENSION: 3", "DIMENSION: x");
        assert!(matches!(parse_tsplib(&bad_header), Err(Error::MalformedHeader(_))));

        let missing_node = TRIANGLE_345.replace("3 0 4\n", "");
        assert!(matches!(
            parse_tsplib(&missing_node),
            Err(Error::DimensionMismatch { declared: 3, found: 2 })
        ));

        let asym = "\
NAME: m
DIMENSION: 3
EDGE_WEIGHT_TYPE: EXPLICIT
EDGE_WEIGHT_FORMAT: FULL_MATRIX
EDGE_WEIGHT_SECTION
0 3 4
9 0 5
4 5 0
EOF
";
        assert!(matches!(parse_tsplib(asym), Err(Error::NonSymmetricMatrix { i: 0, j: 1, .. })));

        let bad_fmt = asym.replace("FULL_MATRIX", "UPPER_DIAG_ROW");
        assert!(matches!(parse_tsplib(&bad_fmt), Err(Error::UnsupportedEdgeWeightFormat(_))));
    }

    #[test]
    fn random_generation_is_deterministic_and_in_unit_square() {
        let a = Instance::generate_random(12, 7).unwrap();
        let b = Instance::generate_random(12, 7).unwrap();
        assert_eq!(a, b);
        let Geometry::Euc2dReal { coords } = &a.geometry else { panic!("wrong geometry") };
        assert_eq!(coords.len(), 12);
        assert!(coords.iter().all(|c| (0.0..1.0).contains(&c[0]) && (0.0..1.0).contains(&c[1])));

        let c = Instance::generate_random(12, 8).unwrap();
        assert_ne!(a, c);
        assert!(Instance::generate_random(2, 1).is_err());
    }

    #[test]
    fn cost_matrix_invariants_hold_for_geometric_instances() {
        for seed in 0..5 {
            let inst = Instance::generate_random(9, seed).unwrap();
            let m = inst.cost_matrix();
            for i in 0..9 {
                assert_eq!(m.get(i, i), 0.0);
                for j in 0..9 {
                    assert_eq!(m.get(i, j), m.get(j, i));
                    assert!(m.get(i, j) >= 0.0);
                }
            }
            // Exact real Euclidean distances are metric.
            assert_eq!(m.triangle_violations(1e-12), 0);
        }
    }

    #[test]
    fn rounded_kernels_are_metric_up_to_unit_slack() {
        let inst = parse_tsplib(TRIANGLE_345).unwrap();
        assert_eq!(inst.cost_matrix().triangle_violations(1.0), 0);
    }

    #[test]
    fn transform_max_formula() {
        let costs = CostMatrix::new(
            3,
            vec![0.0, 3.0, 4.0, 3.0, 0.0, 5.0, 4.0, 5.0, 0.0],
        )
        .unwrap();
        let (t, m) = transform_max(&costs);
        assert_eq!(m, 6.0);
        assert_eq!(t.get(0, 1), 3.0);
        assert_eq!(t.get(0, 2), 2.0);
        assert_eq!(t.get(1, 2), 1.0);
        assert_eq!(t.get(1, 1), 0.0);
    }

    #[test]
    fn transform_max_degenerate_all_equal() {
        let costs = CostMatrix::from_fn(5, |_, _| 4.0);
        let (t, m) = transform_max(&costs);
        assert_eq!(m, 5.0);
        for i in 0..5 {
            for j in 0..5 {
                if i != j {
                    assert_eq!(t.get(i, j), 1.0);
                }
            }
        }
    }

    #[test]
    fn json_round_trip_preserves_explicit_matrix() {
        let text = "\
NAME: m
DIMENSION: 4
EDGE_WEIGHT_TYPE: EXPLICIT
EDGE_WEIGHT_FORMAT: UPPER_ROW
EDGE_WEIGHT_SECTION
1 2 3
4 5
6
EOF
";
        let inst = parse_tsplib(text).unwrap();
        let json = serde_json::to_string(&inst).unwrap();
        let back: Instance = serde_json::from_str(&json).unwrap();
        assert_eq!(inst, back);
        assert_eq!(inst.cost_matrix(), back.cost_matrix());
    }

    #[test]
    fn matrix_rejects_bad_input() {
        assert!(matches!(
            CostMatrix::new(2, vec![0.0, 1.0, 2.0, 0.0]),
            Err(Error::NonSymmetricMatrix { .. })
        ));
        assert!(CostMatrix::new(2, vec![1.0, 1.0, 1.0, 0.0]).is_err());
        assert!(CostMatrix::new(2, vec![0.0, -1.0, -1.0, 0.0]).is_err());
        assert!(CostMatrix::new(2, vec![0.0, 1.0]).is_err());
    }
}
