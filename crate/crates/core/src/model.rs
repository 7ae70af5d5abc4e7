//! The infinite square well under time-fractional dynamics.
//!
//! Separable solutions are `Ψ_n(x,t) = √(2/a) sin(nπx/a) T(t)` with
//! `T(t) = E_α(λ_n i^α t^α)` and `λ_n = -D_α (nπ/a)²`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mittag_leffler::{ml, time_argument};
use crate::quadrature::{integrate, QuadOptions};
use crate::special::{gamma_real, i_pow};

/// `|E_α|` below this makes the effective potential singular.
pub const DENOMINATOR_TOL: f64 = 1e-13;
/// Accuracy demanded of the product-form quadrature.
pub const PRODUCT_FORM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxModel {
    /// Well width.
    pub a: f64,
    /// Quantum number.
    pub n: u32,
    pub alpha: f64,
    /// Quantum diffusion constant `D_α`.
    pub d_alpha: f64,
    pub hbar: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectivePotentialSample {
    pub t: f64,
    pub v_r: f64,
    pub v_i: f64,
}

/// Which form of the small-time expansion of `V_eff^I` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeriesVariant {
    /// Keeps the static constant in `V_I` and flips the sign of its
    /// `t^{α-1}` term.
    #[default]
    Printed,
    /// The expansion of the exact potential.
    Corrected,
}

impl BoxModel {
    /// A model in units `ħ = 1`, `m = 1/2`.
    pub fn new(a: f64, n: u32, alpha: f64, d_alpha: f64) -> Result<Self> {
        Self::with_units(a, n, alpha, d_alpha, 1.0, 0.5)
    }

    pub fn with_units(a: f64, n: u32, alpha: f64, d_alpha: f64, hbar: f64, mass: f64) -> Result<Self> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::domain(format!("{name} must be positive, got {v}")))
            }
        };
        positive("well width", a)?;
        positive("D_alpha", d_alpha)?;
        positive("hbar", hbar)?;
        positive("mass", mass)?;
        if n == 0 {
            return Err(Error::domain("quantum number must be at least 1"));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::domain(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        Ok(Self { a, n, alpha, d_alpha, hbar, mass })
    }

    /// `ħ²/(2m)`, the value of `D_1` that recovers ordinary quantum mechanics.
    pub fn classical_d(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass) / self.hbar
    }

    fn wavenumber(&self) -> f64 {
        f64::from(self.n) * PI / self.a
    }

    fn lambda(&self) -> f64 {
        box_eigenvalue(self)
    }

    /// `ħ²λ/(2mD_α)`, the constant part of the effective potential.
    fn static_potential(&self) -> f64 {
        self.hbar * self.hbar * self.lambda() / (2.0 * self.mass * self.d_alpha)
    }

    /// `ħπ²n²D_α/a²`, the energy at `t = 0`.
    pub fn initial_energy(&self) -> f64 {
        self.hbar * self.wavenumber().powi(2) * self.d_alpha
    }

    /// `T(t) = E_α(λ_n i^α t^α)`.
    pub fn time_factor(&self, t: f64) -> Result<Complex64> {
        ml(self.alpha, 1.0, time_argument(self.alpha, self.lambda(), t)?)
    }
}

/// `λ_n = -D_α (nπ/a)²`.
pub fn box_eigenvalue(model: &BoxModel) -> f64 {
    -model.d_alpha * model.wavenumber().powi(2)
}

pub fn box_wavefunction(model: &BoxModel, x: f64, t: f64) -> Result<Complex64> {
    if !(0.0..=model.a).contains(&x) {
        return Err(Error::domain(format!("x = {x} lies outside [0, {}]", model.a)));
    }
    if x == 0.0 || x == model.a {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let spatial = (2.0 / model.a).sqrt() * (model.wavenumber() * x).sin();
    Ok(model.time_factor(t)? * spatial)
}

/// `|T(t)|²`, the probability of finding the particle in the well.
pub fn total_probability(model: &BoxModel, t: f64) -> Result<f64> {
    Ok(model.time_factor(t)?.norm_sqr())
}

/// `1 - 2cos(απ/2)|λ|t^α/(αΓ(α))`.
pub fn total_probability_small_t(model: &BoxModel, t: f64) -> f64 {
    let a = model.alpha;
    1.0 - 2.0 * (a * PI / 2.0).cos() * model.lambda().abs() * t.powf(a) / (a * gamma_real(a))
}

/// Leading algebraic decay `1/(Γ(1-α)² λ² t^{2α})`, valid for `|λ|t^α ≥ 10`.
pub fn total_probability_large_t(model: &BoxModel, t: f64) -> Result<f64> {
    let a = model.alpha;
    if a == 1.0 {
        return Err(Error::domain("no algebraic decay at alpha = 1"));
    }
    let x = model.lambda().abs() * t.powf(a);
    if !(x >= 10.0) {
        return Err(Error::domain(format!("large-time law needs |lambda| t^alpha >= 10, got {x}")));
    }
    Ok(1.0 / (gamma_real(1.0 - a) * x).powi(2))
}

/// `⟨E⟩(t) = ħπ²n²D_α/a² · |T(t)|²`.
pub fn energy_expectation(model: &BoxModel, t: f64) -> Result<f64> {
    Ok(model.initial_energy() * total_probability(model, t)?)
}

/// `E_{α,α}(w)/E_α(w)` with the zero check on the denominator.
fn ml_ratio(alpha: f64, w: Complex64) -> Result<Complex64> {
    let den = ml(alpha, 1.0, w)?;
    if den.norm() < DENOMINATOR_TOL {
        return Err(Error::Singularity(format!("|E_alpha({w})| = {:.3e}", den.norm())));
    }
    Ok(ml(alpha, alpha, w)? / den)
}

/// The complex effective potential
/// `i^{1+α}ħλ t^{α-1} E_{α,α}(w)/E_α(w) + ħ²λ/(2mD_α)`, `w = λi^αt^α`.
pub fn v_eff(model: &BoxModel, t: f64) -> Result<EffectivePotentialSample> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("effective potential needs t > 0, got {t}")));
    }
    let a = model.alpha;
    let lambda = model.lambda();
    let w = time_argument(a, lambda, t)?;
    let dynamic = i_pow(1.0 + a)? * (model.hbar * lambda * t.powf(a - 1.0)) * ml_ratio(a, w)?;
    Ok(EffectivePotentialSample { t, v_r: dynamic.re + model.static_potential(), v_i: dynamic.im })
}

/// Small-time expansion of the effective potential through the
/// `t^{2α-1}` terms (`order ≤ 2` counts the non-constant terms kept).
pub fn v_eff_series_small_t(
    model: &BoxModel,
    t: f64,
    order: u32,
    variant: SeriesVariant,
) -> Result<EffectivePotentialSample> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("expansion needs t > 0, got {t}")));
    }
    if order > 2 {
        return Err(Error::domain(format!("expansion order must be at most 2, got {order}")));
    }
    let a = model.alpha;
    let hl = model.hbar * model.lambda();
    let hl2 = hl * model.lambda();
    let c = model.static_potential();
    let (s1, c1) = ((a * PI / 2.0).sin(), (a * PI / 2.0).cos());
    let (s2, c2) = ((a * PI).sin(), (a * PI).cos());
    let ga = gamma_real(a);
    let ga1 = gamma_real(1.0 + a);
    let g2a = gamma_real(2.0 * a);
    let k = 1.0 / g2a - 1.0 / (ga * ga1);
    let t1 = t.powf(a - 1.0);
    let t2 = t.powf(2.0 * a - 1.0);

    let mut v_r = c;
    let mut v_i = match variant {
        SeriesVariant::Printed => c,
        SeriesVariant::Corrected => 0.0,
    };
    if order >= 1 {
        v_r -= hl * s1 * t1 / ga;
        v_i += match variant {
            SeriesVariant::Printed => -hl * c1 * t1 / ga,
            SeriesVariant::Corrected => hl * c1 * t1 / ga,
        };
    }
    if order >= 2 {
        v_r -= hl2 * s2 * k * t2;
        v_i += match variant {
            SeriesVariant::Printed => hl2 * s2 * (1.0 / (ga1 * ga) + c2 / g2a - 2.0 * c1 * c1 / (ga * ga1)) * t2,
            SeriesVariant::Corrected => hl2 * c2 * k * t2,
        };
    }
    Ok(EffectivePotentialSample { t, v_r, v_i })
}

/// `J(t) = ∫_0^t (V_eff - ħ²λ/(2mD_α)) dt'`, integrated in `u = t'^α`
/// where the integrand is bounded.
fn dynamic_action(model: &BoxModel, t: f64) -> Result<Complex64> {
    let a = model.alpha;
    let lambda = model.lambda();
    let sigma = i_pow(a)? * lambda;
    let pref = i_pow(1.0 + a)? * (model.hbar * lambda / a);
    let mut failure = None;
    let opts = QuadOptions { abs_tol: 1e-11, rel_tol: 1e-11, max_intervals: 4000 };
    let r = integrate(
        |u| match ml_ratio(a, sigma * u) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        0.0,
        t.powf(a),
        opts,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let r = r?;
    let scale = pref.norm();
    if r.error * scale > PRODUCT_FORM_TOL {
        return Err(Error::Quadrature(format!("error estimate {:.3e}", r.error * scale)));
    }
    Ok(pref * r.value)
}

/// `T(t)` rebuilt as the product of its decaying and oscillating parts,
/// `exp((1/ħ)∫V_I) · exp((i/ħ)[ħ²λt/(2mD_α) - ∫V_R])`.
pub fn t_product_form(model: &BoxModel, t: f64) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("product form needs t > 0, got {t}")));
    }
    let j = dynamic_action(model, t)?;
    let decay = (j.im / model.hbar).exp();
    let phase = -j.re / model.hbar;
    Ok(Complex64::from_polar(decay, phase))
}

/// `ħπ²D_αn²/a² · exp((2/ħ)∫_0^t V_I)`.
pub fn energy_product_form(model: &BoxModel, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("product form needs t > 0, got {t}")));
    }
    let j = dynamic_action(model, t)?;
    Ok(model.initial_energy() * (2.0 * j.im / model.hbar).exp())
}
