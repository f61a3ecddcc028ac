//! Error-exponent mathematics for ML-decoded random codes on a BSC.
//!
//! The exponent is built from Rényi entropies of the noise process: a
//! scaled cumulant `lambda(alpha)`, its Legendre-Fenchel transform
//! `rate_function(x)` (computed by bracketed concave maximization), the
//! critical point `x*` where the transform's slope is 1, and the piecewise
//! exponent `epsilon(R, p)` with a linear low-rate branch and a curved
//! branch up to capacity. `empirical_exponent` fits the decay of measured
//! per-column error rates against the closed form.

use alloc::vec::Vec;
use core::fmt;

use crate::codebook::Codebook;
use crate::crypto::CipherKey;
use crate::grandec::default_budget;
use crate::params::{binary_entropy, SystemParams};
use crate::pipeline::{self, PipelineError, RunSeeds};

#[derive(Clone, Debug, PartialEq)]
pub enum ExponentError {
    Domain(&'static str),
    NonConvergence,
    BracketFailure,
    Pipeline(PipelineError),
}

impl fmt::Display for ExponentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentError::Domain(m) => write!(f, "domain error: {}", m),
            ExponentError::NonConvergence => write!(f, "optimizer hit its iteration cap"),
            ExponentError::BracketFailure => write!(f, "root bracket failed"),
            ExponentError::Pipeline(e) => write!(f, "pipeline: {}", e),
        }
    }
}

impl From<PipelineError> for ExponentError {
    fn from(e: PipelineError) -> Self {
        ExponentError::Pipeline(e)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ExponentError {}

/// Centralized numeric tolerances.
#[derive(Clone, Copy, Debug)]
pub struct NumericConfig {
    /// Supremum bracket over alpha.
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    /// Golden-section interval tolerance on alpha.
    pub golden_tol: f64,
    /// Central finite-difference step.
    pub fd_step: f64,
    /// Bisection tolerance on x.
    pub bisect_tol: f64,
    pub max_iter: u32,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            alpha_lo: -1.0 + 1e-9,
            alpha_hi: 64.0,
            golden_tol: 1e-11,
            fd_step: 1e-5,
            bisect_tol: 1e-9,
            max_iter: 300,
        }
    }
}

/// Rényi entropy of the Bernoulli(p) noise in bits.
///
/// Closed form for `alpha != 1`; the Shannon entropy at `alpha = 1` (the
/// limit); converges to the min-entropy `-log2 max(p, 1-p)` as
/// `alpha -> inf`. Evaluated in the stable form
/// `(alpha log2 m + log2(1 + t^alpha)) / (1 - alpha)` with `m` the larger
/// mass and `t` the ratio of the smaller to it.
pub fn renyi_entropy(p: f64, alpha: f64) -> Result<f64, ExponentError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(ExponentError::Domain("p must lie in (0, 1)"));
    }
    if !(alpha > 0.0) {
        return Err(ExponentError::Domain("alpha must be positive"));
    }
    if alpha == 1.0 {
        return binary_entropy(p).map_err(|_| ExponentError::Domain("p out of range"));
    }
    let m = if p >= 0.5 { p } else { 1.0 - p };
    let t = (1.0 - m) / m;
    // t^alpha underflows harmlessly to 0 for large alpha.
    let t_pow = libm::exp2(alpha * libm::log2(t));
    let log_sum = alpha * libm::log2(m) + libm::log1p(t_pow) / core::f64::consts::LN_2;
    Ok(log_sum / (1.0 - alpha))
}

/// Min-entropy `-log2 max(p, 1-p)`.
pub fn min_entropy(p: f64) -> f64 {
    -libm::log2(if p >= 0.5 { p } else { 1.0 - p })
}

/// Scaled cumulant of the noise process:
/// `alpha * H_{1/(1+alpha)}` for `alpha > -1`, `-H_min` below.
/// Continuous at `alpha = -1`.
pub fn lambda_noise(p: f64, alpha: f64) -> Result<f64, ExponentError> {
    if !(p > 0.0 && p < 0.5) {
        return Err(ExponentError::Domain("p must lie in (0, 1/2)"));
    }
    if alpha <= -1.0 {
        return Ok(-min_entropy(p));
    }
    if alpha == 0.0 {
        return Ok(0.0);
    }
    let order = 1.0 / (1.0 + alpha);
    Ok(alpha * renyi_entropy(p, order)?)
}

/// Value and maximizer of the Legendre-Fenchel transform at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransformPoint {
    pub value: f64,
    pub argmax: f64,
}

/// Rate function `I(x) = sup_alpha (alpha x - lambda(alpha))`, by
/// golden-section maximization of the concave objective over the bracket.
pub fn rate_function(p: f64, x: f64, cfg: &NumericConfig) -> Result<TransformPoint, ExponentError> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(ExponentError::Domain("x must lie in (0, 1]"));
    }
    let g = |alpha: f64| -> Result<f64, ExponentError> { Ok(alpha * x - lambda_noise(p, alpha)?) };
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = cfg.alpha_lo;
    let mut b = cfg.alpha_hi;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut gc = g(c)?;
    let mut gd = g(d)?;
    let mut iter = 0;
    while b - a > cfg.golden_tol {
        iter += 1;
        if iter > cfg.max_iter {
            return Err(ExponentError::NonConvergence);
        }
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = g(c)?;
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = g(d)?;
        }
    }
    let argmax = 0.5 * (a + b);
    Ok(TransformPoint { value: g(argmax)?, argmax })
}

/// `x*` solved two independent ways, for cross-checking.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalPoint {
    /// Bisection on the finite-difference slope of the rate function.
    pub by_slope: f64,
    /// Bisection on the maximizing alpha reaching 1 (duality).
    pub by_argmax: f64,
}

impl CriticalPoint {
    pub fn value(&self) -> f64 {
        self.by_slope
    }
}

/// Solve `d/dx I(x) = 1` for `x*` in `(H(p), 1)`.
pub fn critical_x_star(p: f64, cfg: &NumericConfig) -> Result<CriticalPoint, ExponentError> {
    if !(p > 0.0 && p < 0.5) {
        return Err(ExponentError::Domain("p must lie in (0, 1/2)"));
    }
    let h = binary_entropy(p).expect("p in range");
    let lo = h + 1e-7;
    let hi = 1.0 - 1e-9;

    let slope = |x: f64| -> Result<f64, ExponentError> {
        let step = cfg.fd_step.min((1.0 - x) * 0.5).min((x - 1e-12) * 0.5);
        let up = rate_function(p, x + step, cfg)?.value;
        let down = rate_function(p, x - step, cfg)?.value;
        Ok((up - down) / (2.0 * step))
    };
    let by_slope = bisect(lo, hi, cfg, |x| Ok(slope(x)? - 1.0))?;

    let by_argmax = bisect(lo, hi, cfg, |x| Ok(rate_function(p, x, cfg)?.argmax - 1.0))?;

    Ok(CriticalPoint { by_slope, by_argmax })
}

fn bisect(
    mut lo: f64,
    mut hi: f64,
    cfg: &NumericConfig,
    mut f: impl FnMut(f64) -> Result<f64, ExponentError>,
) -> Result<f64, ExponentError> {
    let flo = f(lo)?;
    let fhi = f(hi)?;
    if flo > 0.0 || fhi < 0.0 {
        return Err(ExponentError::BracketFailure);
    }
    let mut iter = 0;
    while hi - lo > cfg.bisect_tol {
        iter += 1;
        if iter > cfg.max_iter {
            return Err(ExponentError::NonConvergence);
        }
        let mid = 0.5 * (lo + hi);
        if f(mid)? <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Summary of the exponent landscape at one flip probability.
#[derive(Clone, Copy, Debug)]
pub struct ExponentProfile {
    pub p: f64,
    pub shannon: f64,
    pub renyi_half: f64,
    pub min_entropy: f64,
    pub x_star: f64,
    pub capacity: f64,
}

pub fn profile(p: f64, cfg: &NumericConfig) -> Result<ExponentProfile, ExponentError> {
    Ok(ExponentProfile {
        p,
        shannon: binary_entropy(p).map_err(|_| ExponentError::Domain("p out of range"))?,
        renyi_half: renyi_entropy(p, 0.5)?,
        min_entropy: min_entropy(p),
        x_star: critical_x_star(p, cfg)?.value(),
        capacity: 1.0 - binary_entropy(p).expect("p in range"),
    })
}

/// The exponent `epsilon(R, p)`: `1 - R - H_{1/2}` on the low-rate branch
/// `R < 1 - x*`, and `I(1 - R)` from there up to capacity.
pub fn error_exponent(rate: f64, p: f64, cfg: &NumericConfig) -> Result<f64, ExponentError> {
    let capacity = 1.0 - binary_entropy(p).map_err(|_| ExponentError::Domain("p out of range"))?;
    if !(rate > 0.0 && rate < capacity) {
        return Err(ExponentError::Domain("rate must lie in (0, capacity)"));
    }
    let x_star = critical_x_star(p, cfg)?.value();
    if rate < 1.0 - x_star {
        Ok(1.0 - rate - renyi_entropy(p, 0.5)?)
    } else {
        Ok(rate_function(p, 1.0 - rate, cfg)?.value)
    }
}

/// One block length's measurement in an exponent fit.
#[derive(Clone, Copy, Debug)]
pub struct ExponentRow {
    pub n: u32,
    pub msg_bits: u32,
    pub trials: u64,
    pub error_events: u64,
    pub bler: f64,
}

/// Least-squares fit of `-log2 BLER` against `n`.
#[derive(Clone, Debug)]
pub struct ExponentFit {
    pub rows: Vec<ExponentRow>,
    /// Fitted decay rate in bits per channel use.
    pub slope: f64,
    pub slope_stderr: f64,
    pub theory: f64,
    /// Some block length saw fewer than 20 error events.
    pub sparse_errors: bool,
}

/// Run the single-column pipeline at fixed rate over increasing block
/// lengths and fit the error decay against the closed-form exponent.
///
/// Uses plain random-coding configurations (`w = 0`, no cipher expansion)
/// with `k_u = round(R n)`.
pub fn empirical_exponent(
    rate: f64,
    p: f64,
    n_list: &[u32],
    trials: u64,
    base_seed: u64,
    cfg: &NumericConfig,
) -> Result<ExponentFit, ExponentError> {
    if trials < 1000 {
        return Err(ExponentError::Domain("need at least 10^3 trials"));
    }
    let mut rows = Vec::new();
    for &n in n_list {
        let k_u = libm::round(rate * n as f64) as u32;
        let params = SystemParams::new(n, p, 0, k_u, 0, 0, 0)
            .map_err(|_| ExponentError::Domain("block length infeasible at this rate"))?;
        if !params.check_rate_condition().satisfied {
            return Err(ExponentError::Domain("rate condition violated at some block length"));
        }
        let codebook = Codebook::generate(&params, base_seed ^ n as u64)
            .map_err(|_| ExponentError::Domain("block length exceeds the enumeration cap"))?;
        let key = CipherKey::from_seed(base_seed.wrapping_add(n as u64));
        let seeds = RunSeeds::from_base(base_seed.wrapping_mul(0x100000001b3).wrapping_add(n as u64));
        let budget = default_budget(params.wire_bits(), p);
        let (errors, total) = pipeline::column_error_rate(&codebook, &key, &seeds, trials, budget)?;
        rows.push(ExponentRow {
            n,
            msg_bits: k_u,
            trials: total,
            error_events: errors,
            bler: errors as f64 / total as f64,
        });
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.error_events > 0)
        .map(|r| (r.n as f64, -libm::log2(r.bler)))
        .collect();
    let (slope, stderr) = least_squares_slope(&pts);
    let theory = error_exponent(rate, p, cfg)?;
    Ok(ExponentFit {
        sparse_errors: rows.iter().any(|r| r.error_events < 20),
        rows,
        slope,
        slope_stderr: stderr,
        theory,
    })
}

fn least_squares_slope(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return (f64::NAN, f64::NAN);
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    if pts.len() == 2 {
        return (slope, f64::NAN);
    }
    let sse: f64 = pts
        .iter()
        .map(|p| {
            let fit = my + slope * (p.0 - mx);
            (p.1 - fit) * (p.1 - fit)
        })
        .sum();
    let stderr = libm::sqrt(sse / (n - 2.0) / sxx);
    (slope, stderr)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> NumericConfig {
        NumericConfig::default()
    }

    #[test]
    fn renyi_uniform_noise_is_one() {
        for alpha in [0.1, 0.5, 1.0, 2.0, 100.0] {
            assert!((renyi_entropy(0.5, alpha).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn renyi_closed_form_at_half() {
        // H_{1/2}(0.1) = 2 log2(sqrt(0.1) + sqrt(0.9)).
        let expect = 2.0 * libm::log2(libm::sqrt(0.1) + libm::sqrt(0.9));
        assert!((renyi_entropy(0.1, 0.5).unwrap() - expect).abs() < 1e-12);
        assert!((expect - 0.6780719051).abs() < 1e-9);
    }

    #[test]
    fn renyi_large_alpha_approaches_min_entropy() {
        let h = renyi_entropy(0.1, 1e6).unwrap();
        assert!((h - min_entropy(0.1)).abs() < 1e-4, "H_1e6 = {}", h);
        assert!((min_entropy(0.1) - 0.1520030934).abs() < 1e-9);
    }

    #[test]
    fn renyi_non_increasing_in_alpha() {
        for p in [0.05, 0.1, 0.2, 0.4] {
            let mut last = f64::INFINITY;
            for i in 1..200 {
                let alpha = i as f64 * 0.05;
                let alpha = if (alpha - 1.0).abs() < 1e-12 { 1.0 } else { alpha };
                let h = renyi_entropy(p, alpha).unwrap();
                assert!(h <= last + 1e-10, "p={} alpha={}", p, alpha);
                last = h;
            }
        }
    }

    #[test]
    fn renyi_domain_errors() {
        assert!(renyi_entropy(0.0, 1.0).is_err());
        assert!(renyi_entropy(1.0, 1.0).is_err());
        assert!(renyi_entropy(0.3, 0.0).is_err());
        assert!(renyi_entropy(0.3, -1.0).is_err());
    }

    #[test]
    fn lambda_special_points() {
        let p = 0.1;
        assert_eq!(lambda_noise(p, 0.0).unwrap(), 0.0);
        // alpha = 1 gives H_{1/2}.
        assert!(
            (lambda_noise(p, 1.0).unwrap() - renyi_entropy(p, 0.5).unwrap()).abs() < 1e-12
        );
        // Continuity at alpha = -1, approached from both sides.
        let left = lambda_noise(p, -1.0 - 1e-9).unwrap();
        let right = lambda_noise(p, -1.0 + 1e-9).unwrap();
        assert!((left - right).abs() < 1e-6, "left {} right {}", left, right);
        assert!((left + min_entropy(p)).abs() < 1e-9);
    }

    #[test]
    fn lambda_is_convex() {
        let p = 0.12;
        let grid: Vec<f64> = (0..160).map(|i| -0.95 + i as f64 * 0.05).collect();
        for w in grid.windows(3) {
            let (a, b, c) = (w[0], w[1], w[2]);
            let fa = lambda_noise(p, a).unwrap();
            let fb = lambda_noise(p, b).unwrap();
            let fc = lambda_noise(p, c).unwrap();
            assert!(fb <= 0.5 * (fa + fc) + 1e-10);
        }
    }

    #[test]
    fn rate_function_zero_at_mean() {
        // The transform vanishes at x = H(p), with the sup at alpha = 0.
        for p in [0.05, 0.1, 0.2] {
            let h = binary_entropy(p).unwrap();
            let tp = rate_function(p, h, &cfg()).unwrap();
            assert!(tp.value.abs() < 1e-9, "I(H(p)) = {}", tp.value);
            assert!(tp.argmax.abs() < 1e-3, "argmax {}", tp.argmax);
        }
    }

    #[test]
    fn rate_function_uniform_noise_is_linear() {
        // p = 1/2: H_alpha = 1 so lambda(alpha) = alpha and I(x) = 1 - x.
        // p close to 1/2 must approach that analytic reduction.
        let p = 0.5 - 1e-9;
        for x in [0.1, 0.3, 0.5, 0.7, 0.9, 1.0] {
            let v = rate_function(p, x, &cfg()).unwrap().value;
            assert!((v - (1.0 - x)).abs() < 1e-6, "I({}) = {}", x, v);
        }
    }

    #[test]
    fn rate_function_is_convex_on_grid() {
        let p = 0.1;
        let xs: Vec<f64> = (1..40).map(|i| i as f64 * 0.025).collect();
        let vals: Vec<f64> =
            xs.iter().map(|&x| rate_function(p, x, &cfg()).unwrap().value).collect();
        for w in vals.windows(3) {
            assert!(w[1] <= 0.5 * (w[0] + w[2]) + 1e-9);
        }
    }

    #[test]
    fn x_star_methods_agree() {
        for p in [0.05, 0.1, 0.2] {
            let xs = critical_x_star(p, &cfg()).unwrap();
            assert!(
                (xs.by_slope - xs.by_argmax).abs() <= 1e-5,
                "p={}: {} vs {}",
                p,
                xs.by_slope,
                xs.by_argmax
            );
            assert!(xs.value() > binary_entropy(p).unwrap());
            assert!(xs.value() <= 1.0);
        }
    }

    #[test]
    fn x_star_shrinks_with_p() {
        // x* equals the transform slope at unit argument; spot values from
        // a high-precision evaluation of that derivative.
        let oracle = [
            (0.2, 0.918295834054),
            (0.1, 0.811278124459),
            (0.05, 0.69431616583),
            (0.02, 0.5435644432),
            (0.01, 0.440877923567),
            (0.005, 0.351563377289),
        ];
        let mut last = 1.0;
        for &(p, expect) in &oracle {
            let x = critical_x_star(p, &cfg()).unwrap().value();
            assert!((x - expect).abs() < 1e-6, "x*({}) = {}", p, x);
            assert!(x < last, "x*({}) = {}", p, x);
            last = x;
        }
    }

    #[test]
    fn exponent_linear_branch_identity() {
        let p = 0.1;
        let c = cfg();
        let x_star = critical_x_star(p, &c).unwrap().value();
        let h_half = renyi_entropy(p, 0.5).unwrap();
        for frac in [0.1, 0.4, 0.8] {
            let rate = frac * (1.0 - x_star);
            let eps = error_exponent(rate, p, &c).unwrap();
            assert!((eps + rate + h_half - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn exponent_continuous_at_branch_point() {
        let p = 0.1;
        let c = cfg();
        let x_star = critical_x_star(p, &c).unwrap().value();
        let delta = 1e-5;
        let left = error_exponent(1.0 - x_star - delta, p, &c).unwrap();
        let right = error_exponent(1.0 - x_star + delta, p, &c).unwrap();
        assert!((left - right).abs() <= 1e-4, "left {} right {}", left, right);
    }

    #[test]
    fn exponent_vanishes_at_capacity() {
        for p in [0.05, 0.1] {
            let capacity = 1.0 - binary_entropy(p).unwrap();
            let eps = error_exponent(capacity - 1e-4, p, &cfg()).unwrap();
            assert!(eps.abs() < 1e-4, "eps near capacity = {}", eps);
        }
    }

    #[test]
    fn exponent_monotone_and_nonnegative() {
        let p = 0.1;
        let c = cfg();
        let capacity = 1.0 - binary_entropy(p).unwrap();
        let mut last = f64::INFINITY;
        for i in 1..50 {
            let rate = capacity * i as f64 / 50.0;
            let eps = error_exponent(rate, p, &c).unwrap();
            assert!(eps >= -1e-12);
            assert!(eps <= last + 1e-12);
            last = eps;
        }
    }

    #[test]
    fn exponent_domain_errors() {
        let c = cfg();
        assert!(error_exponent(0.0, 0.1, &c).is_err());
        let capacity = 1.0 - binary_entropy(0.1).unwrap();
        assert!(error_exponent(capacity, 0.1, &c).is_err());
        assert!(error_exponent(0.9, 0.1, &c).is_err());
    }

    #[test]
    fn noiseless_channel_never_errs() {
        // p = 0 short-circuits before the exponent math: BLER is zero.
        let params = SystemParams::new(12, 0.0, 0, 6, 0, 0, 0).unwrap();
        let cb = Codebook::generate(&params, 1).unwrap();
        let key = CipherKey::from_seed(1);
        let seeds = RunSeeds::from_base(2);
        let (errors, _) =
            pipeline::column_error_rate(&cb, &key, &seeds, 1000, 64).unwrap();
        assert_eq!(errors, 0);
    }
}
