//! Fox H-functions given by their Mellin-Barnes parameters.
//!
//! ```text
//! H^{m,n}_{p,q}(z) = 1/(2πi) ∫ h(s) z^{-s} ds,
//! h(s) = Π_{j≤m} Γ(b_j + B_j s) Π_{j≤n} Γ(1 - a_j - A_j s)
//!      / Π_{j>m} Γ(1 - b_j - B_j s) Π_{j>n} Γ(a_j + A_j s)
//! ```
//!
//! Evaluation sums residues: over the poles of the `Γ(b_j + B_j s)` factors
//! (expansion I, a power series in `z`) or over those of the
//! `Γ(1 - a_j - A_j s)` factors (expansion II, a series in `1/z`).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::ln_gamma;

/// Depth of the pole-lattice scans.
pub const POLE_SCAN_DEPTH: usize = 50;
/// Two lattice points closer than this are treated as coinciding.
pub const POLE_SCAN_TOL: f64 = 1e-10;
/// Half-width of the refused ring `|z|β* ≈ 1` when `μ = 0`.
pub const BOUNDARY_RING: f64 = 1e-6;
/// Truncation tolerance used by [`h_eval`].
pub const EVAL_TOL: f64 = 1e-15;

const MAX_TERMS: usize = 10_000;
const MIN_TERMS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct HFunctionParams {
    pub m: usize,
    pub n: usize,
    /// `(a_j, A_j)`, `j = 1..p`.
    pub upper: Vec<(Complex64, f64)>,
    /// `(b_j, B_j)`, `j = 1..q`.
    pub lower: Vec<(Complex64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Expansion I converges for every `z ≠ 0`.
    AllZ,
    /// Expansion I converges for `|z| < 1/β*`, expansion II outside.
    DiskOnly,
    /// Only expansion II converges, for every `z ≠ 0`.
    ExteriorOnly,
    /// `μ` or `β*` is not finite.
    Indeterminate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::AllZ => "AllZ",
            Verdict::DiskOnly => "DiskOnly",
            Verdict::ExteriorOnly => "ExteriorOnly",
            Verdict::Indeterminate => "Indeterminate",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HConvergenceClass {
    pub mu: f64,
    pub beta_star: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleSide {
    Lower,
    Upper,
}

impl HFunctionParams {
    /// Build a parameter set, checking `n ≤ p` and `m ≤ q`.
    ///
    /// Coefficient signs are not checked here, so objects with negative
    /// `A_j` or `B_j` can still be built and transformed; the evaluators
    /// reject them.
    pub fn new(m: usize, n: usize, upper: Vec<(Complex64, f64)>, lower: Vec<(Complex64, f64)>) -> Result<Self> {
        let p = Self { m, n, upper, lower };
        p.check_shape()?;
        Ok(p)
    }

    /// Parameters with real `a_j`, `b_j`.
    pub fn real(m: usize, n: usize, upper: &[(f64, f64)], lower: &[(f64, f64)]) -> Result<Self> {
        let lift = |v: &[(f64, f64)]| v.iter().map(|&(x, c)| (Complex64::new(x, 0.0), c)).collect();
        Self::new(m, n, lift(upper), lift(lower))
    }

    /// `E_α(z) = H^{1,1}_{1,2}(-z | (0,1); (0,1),(0,α))`.
    pub fn mittag_leffler(alpha: f64) -> Self {
        Self::real(1, 1, &[(0.0, 1.0)], &[(0.0, 1.0), (0.0, alpha)]).expect("valid shape")
    }

    pub fn p(&self) -> usize {
        self.upper.len()
    }

    pub fn q(&self) -> usize {
        self.lower.len()
    }

    fn check_shape(&self) -> Result<()> {
        if self.n > self.p() {
            return Err(Error::Param(format!("n = {} exceeds p = {}", self.n, self.p())));
        }
        if self.m > self.q() {
            return Err(Error::Param(format!("m = {} exceeds q = {}", self.m, self.q())));
        }
        let finite =
            |v: &[(Complex64, f64)]| v.iter().all(|(x, c)| x.re.is_finite() && x.im.is_finite() && c.is_finite());
        if !finite(&self.upper) || !finite(&self.lower) {
            return Err(Error::Param("non-finite parameter".into()));
        }
        Ok(())
    }

    /// Full invariant check required by the evaluators.
    pub fn validate(&self) -> Result<()> {
        self.check_shape()?;
        if self.m == 0 {
            return Err(Error::Param("m must be at least 1".into()));
        }
        if let Some((i, _)) = self.upper.iter().enumerate().find(|(_, (_, c))| !(*c > 0.0)) {
            return Err(Error::Param(format!("A_{} must be positive", i + 1)));
        }
        if let Some((i, _)) = self.lower.iter().enumerate().find(|(_, (_, c))| !(*c > 0.0)) {
            return Err(Error::Param(format!("B_{} must be positive", i + 1)));
        }
        // poles of Γ(b_h + B_h s) and of Γ(1 - a_j - A_j s) must be disjoint
        for (h, &(b, bb)) in self.lower[..self.m].iter().enumerate() {
            for (j, &(a, aa)) in self.upper[..self.n].iter().enumerate() {
                for nu in 0..=POLE_SCAN_DEPTH {
                    for lam in 0..=POLE_SCAN_DEPTH {
                        let lhs = (b + nu as f64) * aa;
                        let rhs = (a - lam as f64 - 1.0) * bb;
                        if (lhs - rhs).norm() <= POLE_SCAN_TOL {
                            return Err(Error::Param(format!(
                                "pole of Γ(b_{0} + B_{0} s) meets pole of Γ(1 - a_{1} - A_{1} s)",
                                h + 1,
                                j + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Convergence indices `μ = ΣB - ΣA`, `β* = Π A^A Π B^{-B}` and the verdict.
pub fn h_classify(p: &HFunctionParams) -> Result<HConvergenceClass> {
    p.validate()?;
    let sum_a: f64 = p.upper.iter().map(|(_, c)| c).sum();
    let sum_b: f64 = p.lower.iter().map(|(_, c)| c).sum();
    let mu = sum_b - sum_a;
    let ln_beta: f64 =
        p.upper.iter().map(|(_, c)| c * c.ln()).sum::<f64>() - p.lower.iter().map(|(_, c)| c * c.ln()).sum::<f64>();
    let beta_star = ln_beta.exp();
    let verdict = if !mu.is_finite() || !beta_star.is_finite() || beta_star == 0.0 {
        Verdict::Indeterminate
    } else if mu.abs() <= 1e-12 * sum_a.max(sum_b).max(1.0) {
        Verdict::DiskOnly
    } else if mu > 0.0 {
        Verdict::AllZ
    } else {
        Verdict::ExteriorOnly
    };
    let mu = if verdict == Verdict::DiskOnly { 0.0 } else { mu };
    Ok(HConvergenceClass { mu, beta_star, verdict })
}

/// Whether the residues summed by expansion I (`Lower`) or II (`Upper`)
/// are all simple, scanning both pole lattices to depth 50.
pub fn h_check_simple_poles(p: &HFunctionParams, side: PoleSide) -> bool {
    // Lower: poles s = -(b_j + ν)/B_j; Upper: s = (1 - a_j + ν)/A_j
    let lattice: Vec<(Complex64, f64)> = match side {
        PoleSide::Lower => p.lower.iter().take(p.m).map(|&(b, bb)| (b, bb)).collect(),
        PoleSide::Upper => p.upper.iter().take(p.n).map(|&(a, aa)| (1.0 - a, aa)).collect(),
    };
    for h in 0..lattice.len() {
        for j in (h + 1)..lattice.len() {
            let (ch, wh) = lattice[h];
            let (cj, wj) = lattice[j];
            for nu in 0..=POLE_SCAN_DEPTH {
                for lam in 0..=POLE_SCAN_DEPTH {
                    let d = (cj + lam as f64) * wh - (ch + nu as f64) * wj;
                    if d.norm() <= POLE_SCAN_TOL {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// `ln Γ(x)` as a complex logarithm, `None` at a pole.
fn ln_gamma_or_pole(x: Complex64) -> Option<Complex64> {
    if x.im == 0.0 {
        let r = x.re;
        if r <= 1e-12 && (r - r.round()).abs() <= 1e-12 {
            return None;
        }
        let (lg, sign) = libm::lgamma_r(r);
        return Some(Complex64::new(lg, if sign < 0 { PI } else { 0.0 }));
    }
    ln_gamma(x).ok()
}

/// Residue sum over the lower-side poles without region checks.
fn lower_residue_sum(p: &HFunctionParams, z: Complex64, tol: f64) -> Result<Complex64> {
    let lnz = z.ln();
    let mut total = Complex64::new(0.0, 0.0);
    for h in 0..p.m {
        let (bh, bbh) = p.lower[h];
        let mut small = 0;
        let mut converged = false;
        for nu in 0..MAX_TERMS {
            // pole at s = -s_nu
            let s_nu = (bh + nu as f64) / bbh;
            let mut log = s_nu * lnz - libm::lgamma(nu as f64 + 1.0) - bbh.ln();
            let mut vanishes = false;
            for (j, &(b, bb)) in p.lower.iter().enumerate() {
                if j == h {
                    continue;
                }
                if j < p.m {
                    log += ln_gamma_or_pole(b - s_nu * bb).ok_or(Error::Pole(b - s_nu * bb))?;
                } else {
                    match ln_gamma_or_pole(1.0 - b + s_nu * bb) {
                        Some(l) => log -= l,
                        None => vanishes = true,
                    }
                }
            }
            for (j, &(a, aa)) in p.upper.iter().enumerate() {
                if j < p.n {
                    let x = 1.0 - a + s_nu * aa;
                    log += ln_gamma_or_pole(x).ok_or(Error::Pole(x))?;
                } else {
                    match ln_gamma_or_pole(a - s_nu * aa) {
                        Some(l) => log -= l,
                        None => vanishes = true,
                    }
                }
            }
            let term = if vanishes {
                Complex64::new(0.0, 0.0)
            } else {
                let t = log.exp();
                if nu % 2 == 1 {
                    -t
                } else {
                    t
                }
            };
            if !(term.re.is_finite() && term.im.is_finite()) {
                return Err(Error::Convergence { terms: nu + 1 });
            }
            total += term;
            if term.norm() <= tol * total.norm() {
                small += 1;
            } else {
                small = 0;
            }
            if small >= 3 && nu + 1 >= MIN_TERMS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence { terms: MAX_TERMS });
        }
    }
    Ok(total)
}

fn check_nonzero(z: Complex64) -> Result<()> {
    if z.norm() == 0.0 || !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain(format!("argument must be finite and non-zero, got {z}")));
    }
    Ok(())
}

/// Expansion I: residues at the poles of `Γ(b_h + B_h s)`, `h = 1..m`,
/// a power series in `z`.
pub fn h_series_expansion_i(p: &HFunctionParams, z: Complex64, tol: f64) -> Result<Complex64> {
    check_nonzero(z)?;
    let class = h_classify(p)?;
    let inside = match class.verdict {
        Verdict::AllZ => true,
        Verdict::DiskOnly => z.norm() * class.beta_star < 1.0,
        _ => false,
    };
    if !inside {
        return Err(Error::Region(format!(
            "expansion I needs mu > 0 or |z| beta* < 1 (mu = {}, |z| beta* = {})",
            class.mu,
            z.norm() * class.beta_star
        )));
    }
    if !h_check_simple_poles(p, PoleSide::Lower) {
        return Err(Error::Param("lower-side poles are not simple".into()));
    }
    lower_residue_sum(p, z, tol)
}

/// Expansion II: residues at the poles of `Γ(1 - a_h - A_h s)`,
/// `h = 1..n`, a series in `1/z`.
pub fn h_series_expansion_ii(p: &HFunctionParams, z: Complex64, tol: f64) -> Result<Complex64> {
    check_nonzero(z)?;
    let class = h_classify(p)?;
    let inside = match class.verdict {
        Verdict::ExteriorOnly => true,
        Verdict::DiskOnly => z.norm() * class.beta_star > 1.0,
        _ => false,
    };
    if !inside {
        return Err(Error::Region(format!(
            "expansion II needs mu < 0 or |z| beta* > 1 (mu = {}, |z| beta* = {})",
            class.mu,
            z.norm() * class.beta_star
        )));
    }
    if !h_check_simple_poles(p, PoleSide::Upper) {
        return Err(Error::Param("upper-side poles are not simple".into()));
    }
    // the upper-side residues of p at z are the lower-side residues of the
    // inverted parameters at 1/z
    let inv = h_invert_argument(p);
    if inv.m == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    lower_residue_sum(&inv, z.inv(), tol)
}

/// Evaluate `H(z)` by whichever residue expansion converges at `z`.
pub fn h_eval(p: &HFunctionParams, z: Complex64) -> Result<Complex64> {
    check_nonzero(z)?;
    let class = h_classify(p)?;
    match class.verdict {
        Verdict::AllZ => h_series_expansion_i(p, z, EVAL_TOL),
        Verdict::ExteriorOnly => h_series_expansion_ii(p, z, EVAL_TOL),
        Verdict::DiskOnly => {
            let r = z.norm() * class.beta_star;
            if (r - 1.0).abs() <= BOUNDARY_RING {
                Err(Error::Unsupported(format!("|z| beta* = {r} lies on the convergence boundary")))
            } else if r < 1.0 {
                h_series_expansion_i(p, z, EVAL_TOL)
            } else {
                h_series_expansion_ii(p, z, EVAL_TOL)
            }
        }
        Verdict::Indeterminate => Err(Error::Unsupported(format!("mu = {}, beta* = {}", class.mu, class.beta_star))),
    }
}

/// Parameters of the same function written in the argument `1/z`.
pub fn h_invert_argument(p: &HFunctionParams) -> HFunctionParams {
    HFunctionParams {
        m: p.n,
        n: p.m,
        upper: p.lower.iter().map(|&(b, bb)| (1.0 - b, bb)).collect(),
        lower: p.upper.iter().map(|&(a, aa)| (1.0 - a, aa)).collect(),
    }
}

/// Order-`β` Riemann-Liouville derivative of `t^a H(c t^b)`.
///
/// Returns the parameters of the resulting `H^{m,n+1}_{p+1,q+1}(c t^b)` and
/// the exponent of its `t` prefactor, `a - β`.
pub fn h_rl_derivative_params(
    p: &HFunctionParams,
    a_exp: f64,
    b_exp: f64,
    order: f64,
) -> Result<(HFunctionParams, f64)> {
    if !(b_exp > 0.0) {
        return Err(Error::Param(format!("b must be positive, got {b_exp}")));
    }
    let min_ratio = p.lower[..p.m].iter().map(|(b, bb)| b.re / bb).fold(f64::INFINITY, f64::min);
    if p.m > 0 && !(a_exp + b_exp * min_ratio > -1.0) {
        return Err(Error::Param(format!("a + b min(b_j/B_j) = {} must exceed -1", a_exp + b_exp * min_ratio)));
    }
    let mut upper = Vec::with_capacity(p.p() + 1);
    upper.push((Complex64::new(-a_exp, 0.0), b_exp));
    upper.extend_from_slice(&p.upper);
    let mut lower = p.lower.clone();
    lower.push((Complex64::new(order - a_exp, 0.0), b_exp));
    Ok((HFunctionParams { m: p.m, n: p.n + 1, upper, lower }, a_exp - order))
}

/// Laplace transform of `x^{ρ-1} H(a x^σ)`: the result is
/// `s^{-ρ} H'(a s^{-σ})` with `H'` described by the returned parameters.
pub fn h_laplace_params(p: &HFunctionParams, rho: f64, sigma: f64) -> Result<HFunctionParams> {
    if !(sigma > 0.0) {
        return Err(Error::Param(format!("sigma must be positive, got {sigma}")));
    }
    let mut upper = Vec::with_capacity(p.p() + 1);
    upper.push((Complex64::new(1.0 - rho, 0.0), sigma));
    upper.extend_from_slice(&p.upper);
    Ok(HFunctionParams { m: p.m, n: p.n + 1, upper, lower: p.lower.clone() })
}

fn fmt_complex(f: &mut fmt::Formatter<'_>, z: Complex64) -> fmt::Result {
    if z.im == 0.0 && z.im.is_sign_positive() {
        write!(f, "{}", z.re)
    } else if z.im.is_sign_negative() {
        write!(f, "{}-{}i", z.re, -z.im)
    } else {
        write!(f, "{}+{}i", z.re, z.im)
    }
}

fn fmt_pairs(f: &mut fmt::Formatter<'_>, pairs: &[(Complex64, f64)]) -> fmt::Result {
    for (i, &(x, c)) in pairs.iter().enumerate() {
        if i > 0 {
            f.write_str(";")?;
        }
        f.write_str("(")?;
        fmt_complex(f, x)?;
        write!(f, ",{c})")?;
    }
    Ok(())
}

impl fmt::Display for HFunctionParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H[{},{},{},{}] upper=", self.m, self.n, self.p(), self.q())?;
        fmt_pairs(f, &self.upper)?;
        f.write_str(" lower=")?;
        fmt_pairs(f, &self.lower)
    }
}

/// Text-format parse failure at a byte offset.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> std::result::Result<T, ParseError> {
        Err(ParseError { pos: self.pos, msg: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn expect(&mut self, lit: &str) -> std::result::Result<(), ParseError> {
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            Ok(())
        } else {
            self.err(format!("expected `{lit}`"))
        }
    }

    /// Consume up to (not including) the first char in `stops`.
    fn token(&mut self, stops: &[char]) -> (usize, &'a str) {
        let start = self.pos;
        let len = self.rest().find(|c| stops.contains(&c)).unwrap_or(self.rest().len());
        self.pos += len;
        (start, &self.src[start..start + len])
    }

    fn integer(&mut self, stops: &[char]) -> std::result::Result<usize, ParseError> {
        let (start, tok) = self.token(stops);
        tok.trim().parse().map_err(|_| ParseError { pos: start, msg: format!("invalid integer `{tok}`") })
    }

    fn pairs(&mut self) -> std::result::Result<Vec<(Complex64, f64)>, ParseError> {
        let mut out = Vec::new();
        if !self.rest().starts_with('(') {
            return Ok(out);
        }
        loop {
            self.expect("(")?;
            let (start, tok) = self.token(&[',', ')']);
            let x = parse_complex(tok.trim())
                .ok_or_else(|| ParseError { pos: start, msg: format!("invalid number `{tok}`") })?;
            self.expect(",")?;
            let (start, tok) = self.token(&[')']);
            let c: f64 =
                tok.trim().parse().map_err(|_| ParseError { pos: start, msg: format!("invalid number `{tok}`") })?;
            self.expect(")")?;
            out.push((x, c));
            if self.rest().starts_with(';') {
                self.pos += 1;
            } else {
                return Ok(out);
            }
        }
    }
}

/// Parse `x`, `x+yi`, `x-yi` or `yi`.
fn parse_complex(s: &str) -> Option<Complex64> {
    if let Some(body) = s.strip_suffix('i') {
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        return match split {
            Some(k) => {
                let re: f64 = body[..k].parse().ok()?;
                let im: f64 = body[k..].parse().ok()?;
                Some(Complex64::new(re, im))
            }
            None => Some(Complex64::new(0.0, body.parse().ok()?)),
        };
    }
    Some(Complex64::new(s.parse().ok()?, 0.0))
}

impl FromStr for HFunctionParams {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let mut c = Cursor { src: s, pos: 0 };
        c.skip_ws();
        c.expect("H[")?;
        let m = c.integer(&[','])?;
        c.expect(",")?;
        let n = c.integer(&[','])?;
        c.expect(",")?;
        let p = c.integer(&[','])?;
        c.expect(",")?;
        let q = c.integer(&[']'])?;
        c.expect("]")?;
        c.skip_ws();
        c.expect("upper=")?;
        let upper_pos = c.pos;
        let upper = c.pairs()?;
        c.skip_ws();
        c.expect("lower=")?;
        let lower_pos = c.pos;
        let lower = c.pairs()?;
        c.skip_ws();
        if !c.rest().is_empty() {
            return c.err("unexpected trailing input");
        }
        if upper.len() != p {
            return Err(ParseError { pos: upper_pos, msg: format!("expected {p} upper pairs, found {}", upper.len()) });
        }
        if lower.len() != q {
            return Err(ParseError { pos: lower_pos, msg: format!("expected {q} lower pairs, found {}", lower.len()) });
        }
        HFunctionParams::new(m, n, upper, lower).map_err(|e| ParseError { pos: 0, msg: e.to_string() })
    }
}
