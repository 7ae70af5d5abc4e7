use fracq_core::special::ln_gamma_real;
use fracq_core::Complex64;
use rug::Float;

use crate::{decimal_eps, domain, OracleError, Result};

const MAX_TERMS: usize = 200_000;
const SMALL_RUN: usize = 10;

/// A complex number as a pair of MPFR floats.
#[derive(Debug, Clone, PartialEq)]
pub struct MpComplex {
    pub re: Float,
    pub im: Float,
}

impl MpComplex {
    fn zero(prec: u32) -> Self {
        Self { re: Float::new(prec), im: Float::new(prec) }
    }

    fn from_c64(prec: u32, z: Complex64) -> Self {
        Self { re: Float::with_val(prec, z.re), im: Float::with_val(prec, z.im) }
    }

    fn mul(&self, o: &Self) -> Self {
        let prec = self.re.prec();
        let re = Float::with_val(prec, &self.re * &o.re) - Float::with_val(prec, &self.im * &o.im);
        let im = Float::with_val(prec, &self.re * &o.im) + Float::with_val(prec, &self.im * &o.re);
        Self { re, im }
    }

    fn norm(&self) -> Float {
        Float::with_val(self.re.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// `|self − other| ≤ 10^{-digits} |other|`.
    pub fn agrees_with(&self, other: &Self, digits: u32) -> bool {
        let prec = self.re.prec().max(other.re.prec());
        let d =
            Self { re: Float::with_val(prec, &self.re - &other.re), im: Float::with_val(prec, &self.im - &other.im) };
        d.norm() <= decimal_eps(digits, prec) * other.norm()
    }
}

/// Natural log of the largest `|z|^k / |Γ(αk+β)|`, and the index where
/// the terms have started to decay for good.
fn peak_term(alpha: f64, beta: f64, r: f64) -> (f64, usize) {
    let lr = if r > 0.0 { r.ln() } else { return (0.0, 0) };
    let mut best = f64::NEG_INFINITY;
    let mut at = 0;
    for k in 0..MAX_TERMS {
        let x = alpha * k as f64 + beta;
        let lt = k as f64 * lr - ln_gamma_real(x.abs().max(f64::MIN_POSITIVE));
        if lt > best {
            best = lt;
            at = k;
        } else if k > at + 8 && lt < best - 50.0 {
            break;
        }
    }
    (best.max(0.0), at)
}

/// Taylor sum of `E_{α,β}(z)` carried in MPFR at `digits` decimal digits
/// plus enough guard bits to absorb cancellation between large terms.
pub fn ml_highprec_mp(alpha: f64, beta: f64, z: Complex64, digits: u32) -> Result<MpComplex> {
    if !(50..=500).contains(&digits) {
        return Err(domain(format!("digits must lie in [50, 500], got {digits}")));
    }
    if !(z.norm() <= 30.0) {
        return Err(domain(format!("extended-precision sum needs |z| <= 30, got {}", z.norm())));
    }
    if !(alpha > 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(domain(format!("invalid parameters alpha = {alpha}, beta = {beta}")));
    }
    let (peak, peak_at) = peak_term(alpha, beta, z.norm());
    let prec = (f64::from(digits) * std::f64::consts::LOG2_10 + peak * std::f64::consts::LOG2_E) as u32 + 64;

    let eps = decimal_eps(digits, prec);
    let zz = MpComplex::from_c64(prec, z);
    let a = Float::with_val(prec, alpha);
    let mut power = MpComplex::from_c64(prec, Complex64::new(1.0, 0.0));
    let mut sum = MpComplex::zero(prec);
    let mut run = 0;
    for k in 0..MAX_TERMS {
        let arg = Float::with_val(prec, &a * k as u32) + beta;
        let small = if arg.is_integer() && arg <= 0 {
            true
        } else {
            let g = arg.gamma();
            let term =
                MpComplex { re: Float::with_val(prec, &power.re / &g), im: Float::with_val(prec, &power.im / &g) };
            sum.re += &term.re;
            sum.im += &term.im;
            term.norm() <= Float::with_val(prec, &eps * &sum.norm())
        };
        run = if small { run + 1 } else { 0 };
        if run >= SMALL_RUN && k > peak_at {
            return Ok(sum);
        }
        power = power.mul(&zz);
    }
    Err(OracleError::Convergence { terms: MAX_TERMS })
}

/// [`ml_highprec_mp`] rounded to double precision.
pub fn ml_highprec(alpha: f64, beta: f64, z: Complex64, digits: u32) -> Result<Complex64> {
    ml_highprec_mp(alpha, beta, z, digits).map(|v| v.to_c64())
}
