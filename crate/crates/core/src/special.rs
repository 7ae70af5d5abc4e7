//! Complex gamma, reciprocal gamma and the branch conventions used for
//! fractional powers throughout the crate.
//!
//! Gamma uses the Lanczos approximation with `g = 7` and nine coefficients,
//! combined with the reflection formula on the left half plane.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Distance to a non-positive integer below which `z` counts as a pole.
pub const POLE_TOL: f64 = 1e-12;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

// ln(sqrt(2 pi))
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// True when `z` lies within [`POLE_TOL`] of 0, -1, -2, ...
pub fn is_gamma_pole(z: Complex64) -> bool {
    if z.im.abs() > POLE_TOL || z.re > POLE_TOL {
        return false;
    }
    (z.re - z.re.round()).abs() <= POLE_TOL
}

fn lanczos_sum(z: Complex64) -> Complex64 {
    // z is already shifted by -1
    let mut acc = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

/// Gamma for `Re z >= 0.5`.
fn gamma_right(z: Complex64) -> Complex64 {
    let zm = z - 1.0;
    let t = zm + LANCZOS_G + 0.5;
    let ln = (zm + 0.5) * t.ln() - t + LN_SQRT_2PI;
    ln.exp() * lanczos_sum(zm)
}

/// Complex gamma function on the principal sheet.
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    if is_gamma_pole(z) {
        return Err(Error::Pole(z));
    }
    if z.im == 0.0 && z.re.abs() < 171.0 {
        return Ok(Complex64::new(libm::tgamma(z.re), 0.0));
    }
    if z.re < 0.5 {
        let s = (PI * z).sin();
        Ok(PI / (s * gamma_right(1.0 - z)))
    } else {
        Ok(gamma_right(z))
    }
}

/// `1/Γ(z)`, an entire function. Exactly zero at the poles of Γ.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if is_gamma_pole(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.im == 0.0 {
        return Complex64::new(recip_gamma_real(z.re), 0.0);
    }
    if z.re < 0.5 {
        (PI * z).sin() * gamma_right(1.0 - z) / PI
    } else {
        1.0 / gamma_right(z)
    }
}

/// A logarithm of Γ(z): `exp(ln_gamma(z)) == Γ(z)`.
///
/// The imaginary part is not continued along a fixed branch, so only use
/// the result through `exp`. Avoids overflow for large arguments.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if is_gamma_pole(z) {
        return Err(Error::Pole(z));
    }
    if z.re < 0.5 {
        let s = (PI * z).sin();
        Ok(Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma_right(1.0 - z))
    } else {
        Ok(ln_gamma_right(z))
    }
}

fn ln_gamma_right(z: Complex64) -> Complex64 {
    let zm = z - 1.0;
    let t = zm + LANCZOS_G + 0.5;
    (zm + 0.5) * t.ln() - t + LN_SQRT_2PI + lanczos_sum(zm).ln()
}

/// Real gamma for `x > 0` (overflows to infinity past ~171.6).
pub fn gamma_real(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    libm::tgamma(x)
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma_real(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    libm::lgamma(x)
}

/// `1/Γ(x)` for real `x`, zero at the poles.
pub fn recip_gamma_real(x: f64) -> f64 {
    if x <= POLE_TOL && (x - x.round()).abs() <= POLE_TOL {
        return 0.0;
    }
    if x > 171.0 {
        (-libm::lgamma(x)).exp()
    } else if x < -170.0 {
        let (lg, sign) = libm::lgamma_r(x);
        sign as f64 * (-lg).exp()
    } else {
        1.0 / libm::tgamma(x)
    }
}

/// Principal value of `i^alpha = exp(i alpha pi / 2)`.
pub fn i_pow(alpha: f64) -> Result<Complex64> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::domain(format!("i^alpha needs alpha in (0, 2], got {alpha}")));
    }
    Ok(Complex64::from_polar(1.0, 0.5 * alpha * PI))
}

/// True when `alpha` sits within `1e-9` of `2/(5+4k)` for some k >= 0.
///
/// At these orders the printed pole `i |λ|^{1/α} e^{iπ/α}` lands on the
/// negative real axis, i.e. on the branch cut.
pub fn near_excluded_order(alpha: f64) -> bool {
    if !(alpha > 0.0) {
        return false;
    }
    // 2/(5+4k) = alpha  <=>  k = (2/alpha - 5)/4
    let k = ((2.0 / alpha - 5.0) / 4.0).round();
    if k < 0.0 {
        return (alpha - 0.4).abs() <= 1e-9;
    }
    (alpha - 2.0 / (5.0 + 4.0 * k)).abs() <= 1e-9
}

/// `λ^{1/α}` for negative `λ` on the branch `|λ|^{1/α} e^{iπ/α}`.
///
/// Logs a warning when `alpha` is one of the excluded orders
/// (see [`near_excluded_order`]).
pub fn neg_lambda_root(lambda: f64, alpha: f64) -> Result<Complex64> {
    if !(lambda < 0.0) {
        return Err(Error::domain(format!("negative-lambda root needs lambda < 0, got {lambda}")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    if near_excluded_order(alpha) {
        log::warn!("alpha = {alpha} is an excluded order 2/(5+4k); the pole sits on the branch cut");
    }
    Ok(Complex64::from_polar(lambda.abs().powf(1.0 / alpha), PI / alpha))
}

/// Which root of `λ` is used for the pole `s₂ = i λ^{1/α}` of the
/// time-dependence transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootRule {
    /// `|λ|^{1/α} e^{iπ/α}` as written for the box problem.
    NegativeRealAxis,
    /// Principal root of `σ = λ i^α`: `σ^{1/α}`, present only when
    /// `|arg σ| < απ`.
    PrincipalSheet,
}

/// Branch bookkeeping for a fractional order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchConvention {
    pub alpha: f64,
    pub i_pow_alpha: Complex64,
    pub root_rule: RootRule,
}

impl BranchConvention {
    pub fn new(alpha: f64, root_rule: RootRule) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::domain(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        Ok(Self { alpha, i_pow_alpha: i_pow(alpha)?, root_rule })
    }

    /// The pole of `s^{α-1}/(s^α - i^α λ)` under this convention, or `None`
    /// when the rule places no pole on the principal sheet.
    pub fn pole(&self, lambda: f64) -> Result<Option<Complex64>> {
        match self.root_rule {
            RootRule::NegativeRealAxis => {
                let root = neg_lambda_root(lambda, self.alpha)?;
                Ok(Some(Complex64::i() * root))
            }
            RootRule::PrincipalSheet => {
                let sigma = lambda * self.i_pow_alpha;
                Ok(principal_pole(sigma, self.alpha))
            }
        }
    }
}

/// Principal-sheet solution of `s^α = σ`, if one exists.
pub fn principal_pole(sigma: Complex64, alpha: f64) -> Option<Complex64> {
    let arg = sigma.arg();
    if sigma.norm() == 0.0 || arg.abs() >= alpha * PI {
        return None;
    }
    Some(Complex64::from_polar(sigma.norm().powf(1.0 / alpha), arg / alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gamma_known_values() {
        assert_relative_eq!(gamma_complex(c(1.0, 0.0)).unwrap().re, 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma_complex(c(0.5, 0.0)).unwrap().re, 1.772_453_850_905_516, max_relative = 1e-14);
        assert_relative_eq!(gamma_complex(c(5.0, 0.0)).unwrap().re, 24.0, max_relative = 1e-14);
        // Γ(1+i) = 0.498015668118356 - 0.154949828301811 i
        let g = gamma_complex(c(1.0, 1.0)).unwrap();
        assert!((g - c(0.498_015_668_118_356, -0.154_949_828_301_811)).norm() < 1e-14);
        // Γ(-2.5) = -0.9453087205
        assert_relative_eq!(gamma_complex(c(-2.5, 0.0)).unwrap().re, -0.945_308_720_482_941_9, max_relative = 1e-13);
    }

    #[test]
    fn gamma_large_argument_accuracy() {
        // Γ(30) = 29!
        let f29 = 8_841_761_993_739_701_954_543_616_000_000.0_f64;
        assert_relative_eq!(gamma_complex(c(30.0, 0.0)).unwrap().re, f29, max_relative = 1e-13);
        assert_relative_eq!(gamma_real(30.0), f29, max_relative = 1e-13);
        assert_relative_eq!(ln_gamma_real(30.0), f29.ln(), max_relative = 1e-14);
    }

    #[test]
    fn gamma_poles() {
        assert!(matches!(gamma_complex(c(0.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(gamma_complex(c(-3.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(gamma_complex(c(-7.0 + 1e-13, 0.0)), Err(Error::Pole(_))));
        assert!(gamma_complex(c(-3.0, 1e-6)).is_ok());
    }

    #[test]
    fn recip_gamma_values() {
        assert_eq!(recip_gamma(c(-3.0, 0.0)), c(0.0, 0.0));
        assert_relative_eq!(recip_gamma(c(1.0, 0.0)).re, 1.0, max_relative = 1e-15);
        assert_relative_eq!(recip_gamma(c(0.5, 0.0)).re, 0.564_189_583_547_756, max_relative = 1e-14);
        assert_eq!(recip_gamma_real(-4.0), 0.0);
        assert_relative_eq!(recip_gamma_real(-0.5), -0.282_094_791_773_878_1, max_relative = 1e-14);
    }

    #[test]
    fn i_pow_values() {
        let one = i_pow(1.0).unwrap();
        assert!((one - c(0.0, 1.0)).norm() < 1e-15);
        let half = i_pow(0.5).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((half - c(r, r)).norm() < 1e-15);
        assert!((i_pow(2.0).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(i_pow(0.0).is_err());
        assert!(i_pow(2.5).is_err());
    }

    #[test]
    fn neg_lambda_root_values() {
        assert!((neg_lambda_root(-1.0, 1.0).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((neg_lambda_root(-1.0, 0.5).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!((neg_lambda_root(-4.0, 0.5).unwrap() - c(16.0, 0.0)).norm() < 1e-13);
        assert!(neg_lambda_root(1.0, 0.5).is_err());
        assert!(neg_lambda_root(0.0, 0.5).is_err());
    }

    #[test]
    fn excluded_orders() {
        assert!(near_excluded_order(0.4));
        assert!(near_excluded_order(2.0 / 9.0));
        assert!(near_excluded_order(2.0 / 13.0 + 5e-10));
        assert!(!near_excluded_order(0.5));
        assert!(!near_excluded_order(0.41));
    }

    #[test]
    fn principal_pole_presence() {
        // σ = λ i^α with λ < 0 has |arg σ| = π - απ/2: pole only for α > 2/3
        for (alpha, present) in [(0.3, false), (0.5, false), (0.7, true), (0.9, true)] {
            let b = BranchConvention::new(alpha, RootRule::PrincipalSheet).unwrap();
            assert_eq!(b.pole(-1.0).unwrap().is_some(), present, "alpha = {alpha}");
        }
        let b = BranchConvention::new(0.5, RootRule::NegativeRealAxis).unwrap();
        let s2 = b.pole(-1.0).unwrap().unwrap();
        assert!((s2 - c(0.0, 1.0)).norm() < 1e-15);
    }

    fn off_pole(re: f64, im: f64) -> bool {
        !(im.abs() < 1e-3 && re < 0.5 && (re - re.round()).abs() < 1e-3)
    }

    proptest! {
        #[test]
        fn reflection_formula(re in -6.0f64..6.0, im in -3.0f64..3.0) {
            prop_assume!(off_pole(re, im) && off_pole(1.0 - re, -im));
            let z = c(re, im);
            let lhs = gamma_complex(z).unwrap() * gamma_complex(1.0 - z).unwrap() * (PI * z).sin() / PI;
            prop_assert!((lhs - 1.0).norm() < 1e-12, "z = {z}: {lhs}");
        }

        #[test]
        fn recip_times_gamma(re in -6.0f64..20.0, im in -5.0f64..5.0) {
            prop_assume!(off_pole(re, im));
            let z = c(re, im);
            let p = recip_gamma(z) * gamma_complex(z).unwrap();
            prop_assert!((p - 1.0).norm() < 1e-12);
        }

        #[test]
        fn schwarz_reflection(re in -6.0f64..20.0, im in -5.0f64..5.0) {
            prop_assume!(off_pole(re, im));
            let z = c(re, im);
            let a = gamma_complex(z).unwrap().conj();
            let b = gamma_complex(z.conj()).unwrap();
            prop_assert!((a - b).norm() <= 1e-14 * a.norm());
        }

        #[test]
        fn ln_gamma_consistent(re in -6.0f64..40.0, im in -5.0f64..5.0) {
            prop_assume!(off_pole(re, im));
            let z = c(re, im);
            let g = gamma_complex(z).unwrap();
            let e = ln_gamma(z).unwrap().exp();
            prop_assert!((g - e).norm() <= 1e-12 * g.norm());
        }

        #[test]
        fn i_pow_unit_modulus(alpha in 1e-6f64..=2.0) {
            prop_assert!((i_pow(alpha).unwrap().norm() - 1.0).abs() < 1e-15);
        }
    }
}
