//! Fractional integrals and derivatives of uniformly sampled functions.
//!
//! Time operators act on grids `t_k = k h` starting at zero; the Riesz
//! derivative acts on one period of a periodic function.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::special::gamma_real;

const UNIFORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub grid: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Period length when the samples cover one period `[x_0, x_0 + L)`.
    pub period: Option<f64>,
}

impl SampledFunction {
    pub fn new(grid: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        let f = Self { grid, values, period: None };
        f.check()?;
        Ok(f)
    }

    /// Samples of `f` on `n` uniform nodes spanning `[0, t_end]`.
    pub fn from_fn(t_end: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        if n < 2 || !(t_end > 0.0) {
            return Err(Error::domain("need t_end > 0 and at least two nodes"));
        }
        let h = t_end / (n - 1) as f64;
        let grid: Vec<f64> = (0..n).map(|k| k as f64 * h).collect();
        let values = grid.iter().map(|&t| f(t)).collect();
        Self::new(grid, values)
    }

    /// Samples of an `L`-periodic `f` at `x_k = k L / n`, `k < n`.
    pub fn periodic(length: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        if !(length > 0.0) {
            return Err(Error::domain("period must be positive"));
        }
        let grid: Vec<f64> = (0..n).map(|k| k as f64 * length / n as f64).collect();
        let values = grid.iter().map(|&x| f(x)).collect();
        let s = Self { grid, values, period: Some(length) };
        s.check()?;
        Ok(s)
    }

    fn check(&self) -> Result<()> {
        let n = self.grid.len();
        if n < 4 {
            return Err(Error::domain(format!("need at least 4 nodes, got {n}")));
        }
        if self.values.len() != n {
            return Err(Error::domain(format!("{} values for {n} nodes", self.values.len())));
        }
        let t0 = self.grid[0];
        let h = self.spacing();
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::domain("grid must be strictly increasing"));
        }
        let scale = t0.abs().max(self.grid[n - 1].abs());
        for (k, &t) in self.grid.iter().enumerate() {
            if (t - t0 - k as f64 * h).abs() > UNIFORM_TOL * scale {
                return Err(Error::domain(format!("grid is not uniform at node {k}")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        (self.grid[self.grid.len() - 1] - self.grid[0]) / (self.grid.len() - 1) as f64
    }

    fn with_values(&self, values: Vec<Complex64>) -> Self {
        Self { grid: self.grid.clone(), values, period: self.period }
    }

    fn require_time_grid(&self) -> Result<()> {
        if self.grid[0] != 0.0 {
            return Err(Error::domain(format!("time grid must start at 0, starts at {}", self.grid[0])));
        }
        Ok(())
    }
}

/// Riemann-Liouville integral of order `-q` (`q < 0`), product trapezoidal
/// rule on the piecewise-linear interpolant.
pub fn rl_integral(f: &SampledFunction, q: f64) -> Result<SampledFunction> {
    if !(q < 0.0) {
        return Err(Error::domain(format!("integral order needs q < 0, got {q}")));
    }
    f.require_time_grid()?;
    let nu = -q;
    let h = f.spacing();
    let scale = h.powf(nu) / gamma_real(nu + 2.0);
    let p1 = |k: usize| (k as f64).powf(nu + 1.0);
    // w[k] = (k+1)^{ν+1} - 2k^{ν+1} + (k-1)^{ν+1}, the interior weight at lag k
    let w: Vec<f64> = (0..f.len()).map(|k| if k == 0 { 1.0 } else { p1(k + 1) - 2.0 * p1(k) + p1(k - 1) }).collect();
    let out = (0..f.len())
        .map(|n| {
            if n == 0 {
                return Complex64::new(0.0, 0.0);
            }
            let nf = n as f64;
            let a0 = (nf - 1.0).powf(nu + 1.0) - (nf - nu - 1.0) * nf.powf(nu);
            let mut acc = f.values[0] * a0 + f.values[n];
            for j in 1..n {
                acc += f.values[j] * w[n - j];
            }
            acc * scale
        })
        .collect();
    Ok(f.with_values(out))
}

fn check_derivative_order(q: f64) -> Result<()> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain(format!("derivative order must lie in (0, 1), got {q}")));
    }
    Ok(())
}

/// Caputo derivative of order `q ∈ (0, 1)` by the L1 scheme. The value at
/// `t = 0` is reported as zero.
pub fn caputo_derivative(f: &SampledFunction, q: f64) -> Result<SampledFunction> {
    check_derivative_order(q)?;
    f.require_time_grid()?;
    let h = f.spacing();
    let scale = h.powf(-q) / gamma_real(2.0 - q);
    let b: Vec<f64> = (0..f.len()).map(|k| (k as f64 + 1.0).powf(1.0 - q) - (k as f64).powf(1.0 - q)).collect();
    let diffs: Vec<Complex64> = f.values.windows(2).map(|w| w[1] - w[0]).collect();
    let out = (0..f.len())
        .map(|n| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += diffs[n - k - 1] * b[k];
            }
            acc * scale
        })
        .collect();
    Ok(f.with_values(out))
}

/// Riemann-Liouville derivative of order `q ∈ (0, 1)`, obtained from the
/// Caputo derivative plus `t^{-q} f(0) / Γ(1-q)`.
///
/// When `f(0) ≠ 0` the `t = 0` entry is an infinity carrying the signs of
/// `f(0)`.
pub fn rl_derivative(f: &SampledFunction, q: f64) -> Result<SampledFunction> {
    let mut d = caputo_derivative(f, q)?;
    let f0 = f.values[0];
    if f0 != Complex64::new(0.0, 0.0) {
        let c = f0 / gamma_real(1.0 - q);
        for (v, &t) in d.values.iter_mut().zip(&f.grid).skip(1) {
            *v += c * t.powf(-q);
        }
        let inf = |x: f64| if x == 0.0 { 0.0 } else { f64::INFINITY.copysign(x) };
        d.values[0] = Complex64::new(inf(f0.re), inf(f0.im));
    }
    Ok(d)
}

/// Riesz derivative of order `q ∈ (0, 2]` of a periodic sample, applied as
/// the Fourier multiplier `-|ω|^q`.
pub fn riesz_derivative(f: &SampledFunction, q: f64) -> Result<SampledFunction> {
    if !(q > 0.0 && q <= 2.0) {
        return Err(Error::domain(format!("Riesz order must lie in (0, 2], got {q}")));
    }
    let length = f.period.ok_or_else(|| Error::domain("Riesz derivative needs a periodic sample"))?;
    let n = f.len();
    if !n.is_multiple_of(2) {
        return Err(Error::domain(format!("Riesz derivative needs an even node count, got {n}")));
    }
    let mut planner = FftPlanner::new();
    let mut buf = f.values.clone();
    planner.plan_fft_forward(n).process(&mut buf);
    let base = 2.0 * PI / length;
    for (k, c) in buf.iter_mut().enumerate() {
        let mode = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
        *c *= -(base * mode.abs()).powf(q) / n as f64;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    Ok(f.with_values(buf))
}

/// Largest residual of `f' = D^{1-α}[D^α f] + [D^α f](0) t^{α-1}/Γ(α)` over
/// the interior nodes, with Caputo derivatives on both sides and a centred
/// difference for `f'`.
pub fn composition_identity_residual(f: &SampledFunction, alpha: f64) -> Result<f64> {
    check_derivative_order(alpha)?;
    let g = caputo_derivative(f, alpha)?;
    let gg = caputo_derivative(&g, 1.0 - alpha)?;
    let h = f.spacing();
    let g0 = g.values[0];
    let ga = gamma_real(alpha);
    let mut worst: f64 = 0.0;
    for k in 1..f.len() - 1 {
        let t = f.grid[k];
        let df = (f.values[k + 1] - f.values[k - 1]) / (2.0 * h);
        let rhs = gg.values[k] + g0 * t.powf(alpha - 1.0) / ga;
        worst = worst.max((df - rhs).norm());
    }
    Ok(worst)
}
