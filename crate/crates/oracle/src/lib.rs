//! Reference evaluators that share no numerical path with `fracq-core`'s
//! Mittag-Leffler strategies: an extended-precision Taylor sum, a
//! deformed-contour Laplace inversion and the branch-cut representation
//! `T = e^{s*t}/α − F_α(σ; t)`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;

use fracq_core::quadrature::{integrate, QuadOptions};
use fracq_core::special::{i_pow, near_excluded_order, neg_lambda_root, principal_pole};
use fracq_core::Complex64;
use rug::Float;

mod highprec;

pub use highprec::{ml_highprec, ml_highprec_mp, MpComplex};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Core(#[from] fracq_core::Error),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("pole too close to the inversion contour: {0}")]
    Contour(String),

    #[error("integrand denominator vanishes on the real axis: {0}")]
    PoleOnPath(String),

    #[error("extended-precision series failed to converge after {terms} terms")]
    Convergence { terms: usize },

    #[error("quadrature did not reach tolerance: {0}")]
    Quadrature(String),
}

pub type Result<T, E = OracleError> = std::result::Result<T, E>;

fn domain(msg: impl Into<String>) -> OracleError {
    OracleError::Domain(msg.into())
}

/// Contour used for numerical Laplace inversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InversionMethod {
    /// Weideman's optimised cotangent (Talbot-type) contour, midpoint rule.
    #[default]
    DeformedContour,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BromwichConfig {
    /// Abscissa of the Bromwich line the contour is deformed from.
    pub gamma_abscissa: f64,
    pub nodes: usize,
    pub method: InversionMethod,
}

/// Minimum distance between the principal pole and the contour.
pub const CONTOUR_CLEARANCE: f64 = 1e-3;

impl BromwichConfig {
    /// A configuration whose abscissa clears the pole for `(alpha, lambda)`.
    pub fn for_problem(alpha: f64, lambda: f64) -> Self {
        Self { gamma_abscissa: lambda.abs().powf(1.0 / alpha) + 1.0, nodes: 48, method: InversionMethod::default() }
    }

    fn validate(&self, alpha: f64, lambda: f64) -> Result<()> {
        if self.nodes < 4 {
            return Err(domain(format!("at least 4 contour nodes needed, got {}", self.nodes)));
        }
        let reach = lambda.abs().powf(1.0 / alpha);
        if !(self.gamma_abscissa > reach) {
            return Err(domain(format!(
                "gamma abscissa {} must exceed |lambda|^(1/alpha) = {reach}",
                self.gamma_abscissa
            )));
        }
        Ok(())
    }
}

// Weideman (2006) parameters for the cotangent contour.
const W_SHIFT: f64 = -0.6122;
const W_COT: f64 = 0.5017;
const W_FREQ: f64 = 0.6407;
const W_IMAG: f64 = 0.2645;

struct Contour {
    scale: f64,
}

impl Contour {
    fn point(&self, theta: f64) -> Complex64 {
        let cot = if theta == 0.0 { 1.0 / W_FREQ } else { theta / (W_FREQ * theta).tan() };
        Complex64::new(self.scale * (W_SHIFT + W_COT * cot), self.scale * W_IMAG * theta)
    }

    fn derivative(&self, theta: f64) -> Complex64 {
        let d_re = if theta == 0.0 {
            0.0
        } else {
            let x = W_FREQ * theta;
            W_COT * (1.0 / x.tan() - x / x.sin().powi(2))
        };
        Complex64::new(self.scale * d_re, self.scale * W_IMAG)
    }

    /// Signed horizontal gap between a point and the contour at the same
    /// height: positive when the point lies to the left (enclosed).
    fn gap(&self, s: Complex64) -> Option<f64> {
        let theta = s.im / (self.scale * W_IMAG);
        if theta.abs() >= PI {
            return None;
        }
        Some(self.point(theta).re - s.re)
    }
}

/// Inverse Laplace transform of `s^{α-1}/(s^α − i^α λ)` at time `t`.
pub fn bromwich_invert(cfg: &BromwichConfig, alpha: f64, lambda: f64, t: f64) -> Result<Complex64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(domain(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain(format!("inversion needs t > 0, got {t}")));
    }
    cfg.validate(alpha, lambda)?;
    let sigma = lambda * i_pow(alpha)?;
    let contour = Contour { scale: cfg.nodes as f64 / t };

    let mut residue = Complex64::new(0.0, 0.0);
    if let Some(pole) = principal_pole(sigma, alpha) {
        match contour.gap(pole) {
            Some(g) if g.abs() < CONTOUR_CLEARANCE => {
                return Err(OracleError::Contour(format!("pole {pole} is {g:.2e} from the contour at t = {t}")));
            }
            Some(g) if g > 0.0 => {}
            _ => residue = (pole * t).exp() / alpha,
        }
    }

    let transform = |s: Complex64| s.powf(alpha - 1.0) / (s.powf(alpha) - sigma);
    let h = 2.0 * PI / cfg.nodes as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..cfg.nodes {
        let theta = -PI + (k as f64 + 0.5) * h;
        let s = contour.point(theta);
        sum += (s * t).exp() * transform(s) * contour.derivative(theta);
    }
    Ok(sum * h / (2.0 * PI * Complex64::i()) + residue)
}

/// Signed distance of the principal pole from the contour at time `t`,
/// `None` when there is no pole or it lies beyond the contour's reach.
pub fn pole_clearance(cfg: &BromwichConfig, alpha: f64, lambda: f64, t: f64) -> Result<Option<f64>> {
    let sigma = lambda * i_pow(alpha)?;
    let contour = Contour { scale: cfg.nodes as f64 / t };
    Ok(principal_pole(sigma, alpha).and_then(|p| contour.gap(p)))
}

/// Which root of `s^α = σ` supplies the pole term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PoleBranch {
    /// The principal-sheet root, absent when `|arg σ| ≥ απ`.
    #[default]
    Principal,
    /// `i λ^{1/α}` with `λ^{1/α} = |λ|^{1/α} e^{iπ/α}`.
    Printed,
}

/// Sign in front of the pole term of `F_α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PoleSign {
    #[default]
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FAlphaQuery {
    pub alpha: f64,
    pub lambda: f64,
    pub t: f64,
    pub sigma: Complex64,
}

impl FAlphaQuery {
    pub fn new(alpha: f64, lambda: f64, t: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(domain(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if !(lambda < 0.0) {
            return Err(domain(format!("lambda must be negative, got {lambda}")));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(domain(format!("t must be positive, got {t}")));
        }
        if near_excluded_order(alpha) {
            log::warn!("alpha = {alpha} is within 1e-9 of an excluded order 2/(5+4k)");
        }
        Ok(Self { alpha, lambda, t, sigma: lambda * i_pow(alpha)? })
    }
}

/// Tail cutoff in `x t` for the branch-cut integral.
pub const TAIL_CUTOFF: f64 = 40.0;
/// Smallest admissible `|denominator|` on the integration path.
pub const PATH_CLEARANCE: f64 = 1e-12;
const F_ALPHA_TARGET: f64 = 1e-9;

/// The branch-cut integral
/// `F_α(σ;t) = (σ sin απ/π) ∫_0^∞ e^{-xt} x^{α-1} / (x^{2α} − 2σx^α cos απ + σ²) dx`,
/// integrated in `u = x^α`.
pub fn f_alpha_quadrature(q: &FAlphaQuery) -> Result<Complex64> {
    let a = q.alpha;
    let (sin, cos) = (PI * a).sin_cos();
    if a == 1.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let sigma = q.sigma;
    let den = |u: f64| u * u - 2.0 * sigma * cos * u + sigma * sigma;

    let roots = [sigma * Complex64::from_polar(1.0, PI * a), sigma * Complex64::from_polar(1.0, -PI * a)];
    for r in roots {
        let closest = den(r.re.max(0.0)).norm();
        if closest < PATH_CLEARANCE {
            return Err(OracleError::PoleOnPath(format!(
                "|denominator| = {closest:.2e} at u = {} for alpha = {a}",
                r.re.max(0.0)
            )));
        }
    }

    let upper = (TAIL_CUTOFF / q.t).powf(a);
    let pref = sigma * sin / (PI * a);
    let opts = QuadOptions { abs_tol: 1e-13 / pref.norm().max(1e-300), rel_tol: 1e-13, max_intervals: 5000 };
    let r = integrate(|u| (-u.powf(1.0 / a) * q.t).exp() / den(u), 0.0, upper, opts)
        .map_err(|e| OracleError::Quadrature(e.to_string()))?;
    let err = r.error * pref.norm();
    if err > F_ALPHA_TARGET {
        return Err(OracleError::Quadrature(format!("error estimate {err:.2e}")));
    }
    Ok(pref * r.value)
}

/// The pole term `e^{s*t}/α` under the chosen branch; zero when the
/// branch has no pole.
pub fn pole_term(q: &FAlphaQuery, branch: PoleBranch) -> Result<Complex64> {
    let pole = match branch {
        PoleBranch::Principal => principal_pole(q.sigma, q.alpha),
        PoleBranch::Printed => Some(Complex64::i() * neg_lambda_root(q.lambda, q.alpha)?),
    };
    Ok(pole.map_or(Complex64::new(0.0, 0.0), |p| (p * q.t).exp() / q.alpha))
}

/// Closed form `F_α = ±e^{s*t}/α − E_α(λ i^α t^α)`.
pub fn f_alpha_series(q: &FAlphaQuery, branch: PoleBranch, sign: PoleSign) -> Result<Complex64> {
    let pole = pole_term(q, branch)?;
    let pole = match sign {
        PoleSign::Plus => pole,
        PoleSign::Minus => -pole,
    };
    let e = fracq_core::mittag_leffler::ml(q.alpha, 1.0, q.sigma * q.t.powf(q.alpha))?;
    Ok(pole - e)
}

/// `T(t) = e^{s*t}/α − F_α(σ; t)` with the principal pole and the
/// quadrature of `F_α`.
pub fn t_via_pole_plus_integral(alpha: f64, lambda: f64, t: f64) -> Result<Complex64> {
    let q = FAlphaQuery::new(alpha, lambda, t)?;
    Ok(pole_term(&q, PoleBranch::Principal)? - f_alpha_quadrature(&q)?)
}

/// `10^{-digits}` as a working-precision float.
pub(crate) fn decimal_eps(digits: u32, prec: u32) -> Float {
    Float::with_val(prec, Float::u_pow_u(10, digits)).recip()
}

#[cfg(test)]
mod tests {
    use super::*;
    use fracq_core::mittag_leffler::ml;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn contour_derivative_matches_difference() {
        let k = Contour { scale: 7.0 };
        for theta in [-2.5, -0.3, 0.4, 1.9] {
            let h = 1e-6;
            let fd = (k.point(theta + h) - k.point(theta - h)) / (2.0 * h);
            assert!((fd - k.derivative(theta)).norm() < 1e-6);
        }
        assert!((k.point(1e-9) - k.point(0.0)).norm() < 1e-8);
    }

    #[test]
    fn bromwich_exponential() {
        let cfg = BromwichConfig::for_problem(1.0, -1.0);
        let v = bromwich_invert(&cfg, 1.0, -1.0, 1.0).unwrap();
        assert!((v - c(0.0, -1.0).exp()).norm() < 1e-10);
        let v = bromwich_invert(&cfg, 1.0, -1.0, 1e-8).unwrap();
        assert!((v - 1.0).norm() < 1e-7);
    }

    #[test]
    fn bromwich_matches_highprec() {
        let cfg = BromwichConfig::for_problem(0.5, -1.0);
        let v = bromwich_invert(&cfg, 0.5, -1.0, 1.0).unwrap();
        let z = -Complex64::from_polar(1.0, PI / 4.0);
        assert!((v - ml_highprec(0.5, 1.0, z, 60).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn bromwich_adds_missed_residue() {
        let cfg = BromwichConfig::for_problem(0.9, -4.0);
        assert_eq!(pole_clearance(&cfg, 0.9, -4.0, 10.0).unwrap(), None);
        let v = bromwich_invert(&cfg, 0.9, -4.0, 10.0).unwrap();
        let w = ml(0.9, 1.0, -4.0 * i_pow(0.9).unwrap() * 10f64.powf(0.9)).unwrap();
        assert!((v - w).norm() < 1e-9, "{v} vs {w}");
    }

    #[test]
    fn bromwich_rejects_pole_on_contour() {
        let cfg = BromwichConfig::for_problem(0.9, -4.0);
        let gap = |t: f64| pole_clearance(&cfg, 0.9, -4.0, t).unwrap();
        // the pole enters the enclosed region as t shrinks
        let (mut lo, mut hi) = (0.5, 1.0);
        assert!(gap(lo).unwrap() > 0.0);
        while gap(hi).is_none_or(|g| g > 0.0) {
            hi *= 1.5;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if gap(mid).is_some_and(|g| g > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!(matches!(bromwich_invert(&cfg, 0.9, -4.0, lo), Err(OracleError::Contour(_))));
    }

    #[test]
    fn bromwich_config_validation() {
        let bad = BromwichConfig { gamma_abscissa: 0.5, nodes: 48, method: InversionMethod::DeformedContour };
        assert!(bromwich_invert(&bad, 0.5, -1.0, 1.0).is_err());
        let cfg = BromwichConfig::for_problem(0.5, -1.0);
        assert!(bromwich_invert(&cfg, 0.5, -1.0, 0.0).is_err());
    }

    #[test]
    fn f_alpha_identity() {
        for alpha in [0.3, 0.5, 0.7] {
            for lambda in [-1.0, -4.0] {
                for t in [0.1, 0.5, 1.0] {
                    let q = FAlphaQuery::new(alpha, lambda, t).unwrap();
                    let a = f_alpha_quadrature(&q).unwrap();
                    let b = f_alpha_series(&q, PoleBranch::Principal, PoleSign::Plus).unwrap();
                    assert!((a - b).norm() < 1e-6, "{alpha} {lambda} {t}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn f_alpha_limits() {
        let q = FAlphaQuery::new(0.9, -1.0, 1e-10).unwrap();
        let f = f_alpha_series(&q, PoleBranch::Principal, PoleSign::Plus).unwrap();
        assert!((f - (1.0 / 0.9 - 1.0)).norm() < 1e-3);
        let q = FAlphaQuery::new(0.5, -1.0, 1e-10).unwrap();
        let f = f_alpha_series(&q, PoleBranch::Printed, PoleSign::Plus).unwrap();
        assert!((f - 1.0).norm() < 1e-3);
        // printed branch at alpha = 1/2: lambda^2 = 1, pole factor e^{it}
        let q = FAlphaQuery::new(0.5, -1.0, 0.7).unwrap();
        assert!((pole_term(&q, PoleBranch::Printed).unwrap() - 2.0 * c(0.0, 0.7).exp()).norm() < 1e-14);
        assert_eq!(pole_term(&q, PoleBranch::Principal).unwrap(), c(0.0, 0.0));
        let q = FAlphaQuery::new(1.0, -2.0, 0.7).unwrap();
        assert_eq!(f_alpha_quadrature(&q).unwrap(), c(0.0, 0.0));
        let q = FAlphaQuery::new(1.0 - 1e-7, -2.0, 0.7).unwrap();
        assert!(f_alpha_quadrature(&q).unwrap().norm() < 1e-5);
        assert!(FAlphaQuery::new(0.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn f_alpha_large_t() {
        let q = FAlphaQuery::new(0.5, -1.0, 200.0).unwrap();
        let f = f_alpha_quadrature(&q).unwrap();
        let e = fracq_core::mittag_leffler::ml_asymptotic(
            &fracq_core::mittag_leffler::MlQuery::new(0.5, 1.0, q.sigma * 200f64.sqrt()).unwrap(),
            3,
        )
        .unwrap();
        assert!((f + e).norm() < 1e-4, "{f} vs {e}");
    }

    #[test]
    fn pole_on_path() {
        let q = FAlphaQuery::new(2.0 / 3.0, -1.0, 1.0).unwrap();
        assert!(matches!(f_alpha_quadrature(&q), Err(OracleError::PoleOnPath(_))));
    }

    #[test]
    fn method_two() {
        let v = t_via_pole_plus_integral(1.0, -3.0, 0.4).unwrap();
        assert!((v - c(0.0, -1.2).exp()).norm() < 1e-12);
        let v = t_via_pole_plus_integral(0.5, -1.0, 1e-9).unwrap();
        assert!((v - 1.0).norm() < 1e-3);
        let z = -Complex64::from_polar(1.0, PI / 4.0);
        let v = t_via_pole_plus_integral(0.5, -1.0, 1.0).unwrap();
        assert!((v - ml_highprec(0.5, 1.0, z, 60).unwrap()).norm() < 1e-9);
    }
}
