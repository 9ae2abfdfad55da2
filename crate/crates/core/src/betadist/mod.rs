//! Generalized Beta distribution numerics.
//!
//! A Generalized Beta is a Beta(α, β) rescaled from [0, 1] to an
//! arbitrary support [A, B]; here A and B play the roles of minimum and
//! maximum tour length. This module provides the density and CDF,
//! closed-form moments, both moment-matching fitters (four moments, or a
//! known lower bound plus three moments), truncated conditional means,
//! and the Kolmogorov-Smirnov distance used for goodness-of-fit checks.

pub mod special;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tour::{CountBasis, MomentSet};
use special::{incomplete_beta_mean_ratio, ln_beta, regularized_incomplete_beta};

pub use special::{beta_function, hypergeometric_2f1, incomplete_beta, ln_gamma};

/// Parameters of a Generalized Beta distribution on [lower, upper].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GBParams {
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "A")]
    pub lower: f64,
    #[serde(rename = "B")]
    pub upper: f64,
}

impl GBParams {
    pub fn new(alpha: f64, beta: f64, lower: f64, upper: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) || !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "shape parameters must be positive and finite, got alpha={alpha}, beta={beta}"
            )));
        }
        if !(upper > lower) || !lower.is_finite() || !upper.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "support must satisfy B > A, got A={lower}, B={upper}"
            )));
        }
        Ok(Self { alpha, beta, lower, upper })
    }

    /// Width of the support, B − A.
    pub fn range(&self) -> f64 {
        self.upper - self.lower
    }

    /// Map x into the normalized coordinate x̂ = (x − A)/(B − A).
    pub fn normalize(&self, x: f64) -> f64 {
        (x - self.lower) / self.range()
    }
}

/// An upper-truncation window in normalized coordinates.
///
/// The truncation machinery conditions the distribution on
/// x̂ ∈ [a_hat, b_hat]; the iterative schedule only ever truncates from
/// above, so `a_hat` is pinned to zero there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationWindow {
    pub a_hat: f64,
    pub b_hat: f64,
}

impl TruncationWindow {
    pub fn new(a_hat: f64, b_hat: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&a_hat) || !(b_hat > a_hat) || !(b_hat <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "truncation window requires 0 <= a_hat < b_hat <= 1, got ({a_hat}, {b_hat})"
            )));
        }
        Ok(Self { a_hat, b_hat })
    }

    /// Window [0, b_hat], the only shape Lemma-style truncation uses.
    pub fn upper(b_hat: f64) -> Result<Self> {
        Self::new(0.0, b_hat)
    }
}

/// Density of the Generalized Beta at x.
///
/// Normalized over [A, B]: the (B−A)^(α+β−1) support-scaling factor is
/// included so the density integrates to one. Zero outside the support.
pub fn gb_pdf(x: f64, p: &GBParams) -> f64 {
    if x < p.lower || x > p.upper {
        return 0.0;
    }
    let r = p.range();
    let xn = (x - p.lower) / r;
    // Boundary values follow the one-sided limits.
    if xn == 0.0 {
        return match p.alpha {
            a if a > 1.0 => 0.0,
            a if a == 1.0 => ((p.beta - 1.0) * (1.0 - xn).ln() - ln_beta(p.alpha, p.beta)).exp() / r,
            _ => f64::INFINITY,
        };
    }
    if xn == 1.0 {
        return match p.beta {
            b if b > 1.0 => 0.0,
            b if b == 1.0 => ((p.alpha - 1.0) * xn.ln() - ln_beta(p.alpha, p.beta)).exp() / r,
            _ => f64::INFINITY,
        };
    }
    let ln_f = (p.alpha - 1.0) * xn.ln() + (p.beta - 1.0) * (1.0 - xn).ln()
        - ln_beta(p.alpha, p.beta)
        - r.ln();
    ln_f.exp()
}

/// CDF of the Generalized Beta: the regularized incomplete beta of the
/// normalized coordinate, clamped outside the support.
pub fn gb_cdf(x: f64, p: &GBParams) -> f64 {
    if x <= p.lower {
        return 0.0;
    }
    if x >= p.upper {
        return 1.0;
    }
    regularized_incomplete_beta(p.normalize(x), p.alpha, p.beta)
        .expect("normalized coordinate in (0,1) with validated shapes")
}

/// Closed-form moments of the Generalized Beta.
///
/// Kurtosis is reported in the ordinary convention (normal = 3); the
/// min/max fields carry the support bounds.
pub fn gb_moments(p: &GBParams) -> MomentSet {
    let (a, b) = (p.alpha, p.beta);
    let s = a + b;
    let r = p.range();
    let mean = p.lower + r * a / s;
    let variance = r * r * a * b / (s * s * (s + 1.0));
    let skewness = 2.0 * (b - a) * (s + 1.0).sqrt() / ((s + 2.0) * (a * b).sqrt());
    let excess =
        6.0 * ((a - b).powi(2) * (s + 1.0) - a * b * (s + 2.0)) / (a * b * (s + 2.0) * (s + 3.0));
    MomentSet {
        mean,
        variance,
        skewness,
        kurtosis: excess + 3.0,
        min: Some(p.lower),
        max: Some(p.upper),
        count_basis: CountBasis::ClosedForm,
    }
}

/// Standard deviation, √Var.
pub fn gb_std_dev(p: &GBParams) -> f64 {
    gb_moments(p).variance.sqrt()
}

/// A fitted parameter set together with the residuals of the moment
/// equations it was solved from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitResult {
    pub params: GBParams,
    /// Relative residual of the mean equation.
    pub residual_mean: f64,
    /// Relative residual of the variance equation.
    pub residual_variance: f64,
    /// Absolute residual of the skewness equation.
    pub residual_skewness: f64,
    /// Absolute residual of the excess-kurtosis equation (zero for the
    /// three-moment fit, which does not constrain kurtosis).
    pub residual_kurtosis: f64,
}

fn feasibility(variance: f64, skewness: f64, kurtosis: f64) -> Result<()> {
    if !(variance > 0.0) {
        return Err(Error::DegenerateDistribution(format!(
            "variance must be positive, got {variance}"
        )));
    }
    let s2 = skewness * skewness;
    // General lower bound for any distribution; Beta requires strictness.
    if kurtosis <= s2 + 1.0 {
        return Err(Error::InfeasibleMoments(format!(
            "kurtosis <= skewness^2 + 1 ({kurtosis} <= {})",
            s2 + 1.0
        )));
    }
    // Above this line lies Pearson Type III and beyond; Beta (Type I)
    // requires kurtosis < 3 + 1.5·skewness².
    if 6.0 + 3.0 * s2 - 2.0 * kurtosis <= 0.0 {
        return Err(Error::InfeasibleMoments(format!(
            "kurtosis >= 3 + 1.5*skewness^2 ({kurtosis} >= {})",
            3.0 + 1.5 * s2
        )));
    }
    Ok(())
}

/// Solve all four Generalized Beta parameters from (mean, variance,
/// skewness, ordinary kurtosis).
///
/// Shape parameters come from the (skewness², kurtosis) relations, then
/// the support from mean and variance.
pub fn fit_from_four_moments(m: &MomentSet) -> Result<FitResult> {
    feasibility(m.variance, m.skewness, m.kurtosis)?;
    let g1 = m.skewness;
    let k = m.kurtosis;
    let s2 = g1 * g1;

    let nu = 6.0 * (k - s2 - 1.0) / (6.0 + 3.0 * s2 - 2.0 * k);
    let p = 4.0 * nu * nu * (nu + 1.0) / (s2 * (nu + 2.0).powi(2) + 16.0 * (nu + 1.0));
    let d2 = (nu * nu - 4.0 * p).max(0.0);
    // skewness > 0 puts the long tail right of the mode: beta > alpha.
    let d = d2.sqrt() * g1.signum();
    let beta = 0.5 * (nu + d);
    let alpha = 0.5 * (nu - d);

    let range = (m.variance * nu * nu * (nu + 1.0) / p).sqrt();
    let lower = m.mean - range * alpha / nu;
    let params = GBParams::new(alpha, beta, lower, lower + range)?;
    Ok(fit_residuals(params, m.mean, m.variance, m.skewness, Some(m.kurtosis)))
}

fn fit_residuals(
    params: GBParams,
    mean: f64,
    variance: f64,
    skewness: f64,
    kurtosis: Option<f64>,
) -> FitResult {
    let got = gb_moments(&params);
    FitResult {
        params,
        residual_mean: (got.mean - mean) / mean.abs().max(f64::MIN_POSITIVE),
        residual_variance: (got.variance - variance) / variance,
        residual_skewness: got.skewness - skewness,
        residual_kurtosis: kurtosis.map_or(0.0, |k| got.kurtosis - k),
    }
}

/// Beta skewness as a function of the two shapes.
fn shape_skewness(alpha: f64, beta: f64) -> f64 {
    let s = alpha + beta;
    2.0 * (beta - alpha) * (s + 1.0).sqrt() / ((s + 2.0) * (alpha * beta).sqrt())
}

/// Given beta and the variance/mean-offset ratio c = Var/(mean−A)², the
/// unique positive alpha satisfying the mean and variance equations.
fn alpha_for(beta: f64, c: f64) -> f64 {
    // c·α² + c·α(β+1) − β = 0.
    let half_b = c * (beta + 1.0) / 2.0;
    (-half_b + (half_b * half_b + c * beta).sqrt()) / c
}

const BRACKET_LO: f64 = 1e-3;
const BRACKET_HI: f64 = 1e6;

/// Solve (B, α, β) from a known lower support bound plus mean, variance
/// and skewness.
///
/// B and α are eliminated through the mean and variance equations,
/// leaving a one-dimensional root-find on the skewness equation in β
/// (bracketed on a log grid over [1e-3, 1e6], then bisected).
pub fn fit_from_bound_and_moments(
    lower: f64,
    mean: f64,
    variance: f64,
    skewness: f64,
) -> Result<FitResult> {
    if !(mean > lower) {
        return Err(Error::InvalidParameter(format!(
            "mean ({mean}) must exceed the lower bound ({lower})"
        )));
    }
    if !(variance > 0.0) {
        return Err(Error::DegenerateDistribution(format!(
            "variance must be positive, got {variance}"
        )));
    }
    let c = variance / ((mean - lower) * (mean - lower));
    let h = |beta: f64| shape_skewness(alpha_for(beta, c), beta) - skewness;

    // Log-spaced scan for a sign change.
    let steps = 200;
    let ratio = (BRACKET_HI / BRACKET_LO).powf(1.0 / steps as f64);
    let mut lo = BRACKET_LO;
    let mut f_lo = h(lo);
    let mut bracket = None;
    for _ in 0..steps {
        let hi = lo * ratio;
        let f_hi = h(hi);
        if f_lo == 0.0 || f_lo.signum() != f_hi.signum() {
            bracket = Some((lo, hi, f_lo));
            break;
        }
        lo = hi;
        f_lo = f_hi;
    }
    let (mut lo, mut hi, mut f_lo) = bracket.ok_or(Error::NoRootInBracket {
        what: format!("skewness equation (A={lower}, mean={mean}, var={variance}, skew={skewness})"),
        lo: BRACKET_LO,
        hi: BRACKET_HI,
    })?;

    // Bisection to 1e-12 relative on beta.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = h(mid);
        if f_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 1e-12 * hi {
            break;
        }
    }
    let beta = 0.5 * (lo + hi);
    let alpha = alpha_for(beta, c);
    let range = (mean - lower) * (alpha + beta) / alpha;
    let params = GBParams::new(alpha, beta, lower, lower + range)?;
    let fit = fit_residuals(params, mean, variance, skewness, None);
    if fit.residual_mean.abs() > 1e-8
        || fit.residual_variance.abs() > 1e-8
        || fit.residual_skewness.abs() > 1e-8 * skewness.abs().max(1.0)
    {
        return Err(Error::NonConvergence {
            what: format!(
                "bound-plus-moments fit residuals ({:e}, {:e}, {:e})",
                fit.residual_mean, fit.residual_variance, fit.residual_skewness
            ),
            limit: 200,
        });
    }
    Ok(fit)
}

/// Expectation of the Generalized Beta conditioned on
/// X ≤ A + b̂·(B − A).
///
/// Per the upper-truncation identity this is
/// A + (B−A)·B₂(0, b̂, α+1, β)/B₂(0, b̂, α, β); with b̂ = 1 it reduces to
/// the untruncated mean.
pub fn truncated_mean(p: &GBParams, w: &TruncationWindow) -> Result<f64> {
    if w.a_hat != 0.0 {
        return Err(Error::InvalidParameter(format!(
            "truncated mean is defined for upper truncation only (a_hat = 0), got a_hat = {}",
            w.a_hat
        )));
    }
    if !(w.b_hat > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "truncation upper bound must be positive, got {}",
            w.b_hat
        )));
    }
    Ok(p.lower + p.range() * incomplete_beta_mean_ratio(w.b_hat, p.alpha, p.beta)?)
}

/// Kolmogorov-Smirnov statistic between a sorted sample and the
/// Generalized Beta CDF: the sup-norm distance of the empirical CDF from
/// the model CDF.
pub fn ks_statistic(samples: &[f64], p: &GBParams) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter("K-S requires a non-empty sample".into()));
    }
    if samples.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter("K-S requires samples sorted ascending".into()));
    }
    let m = samples.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let cdf = gb_cdf(x, p);
        let above = (i as f64 + 1.0) / m - cdf;
        let below = cdf - i as f64 / m;
        d = d.max(above).max(below);
    }
    Ok(d.min(1.0))
}
