//! The acceptance suite: thirteen numbered criteria, each measured against
//! a fixed tolerance and a runtime budget.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::time::{Duration, Instant};

use fracq_core::fox_h::{h_eval, HFunctionParams};
use fracq_core::frac_deriv::{caputo_derivative, composition_identity_residual, riesz_derivative, SampledFunction};
use fracq_core::mittag_leffler::{ml, time_argument};
use fracq_core::model::{
    energy_expectation, energy_product_form, t_product_form, total_probability, total_probability_small_t, v_eff,
    BoxModel,
};
use fracq_core::special::{gamma_real, i_pow};
use fracq_core::Complex64;
use fracq_oracle::{bromwich_invert, ml_highprec, t_via_pole_plus_integral, BromwichConfig};
use rayon::prelude::*;

type Measure = Result<f64, String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: &'static str,
    pub measured: Measure,
    pub tol: f64,
    pub bound: Bound,
}

impl Check {
    fn at_most(label: &'static str, measured: Measure, tol: f64) -> Self {
        Self { label, measured, tol, bound: Bound::AtMost }
    }

    fn at_least(label: &'static str, measured: Measure, tol: f64) -> Self {
        Self { label, measured, tol, bound: Bound::AtLeast }
    }

    pub fn passed(&self) -> bool {
        match (&self.measured, self.bound) {
            (Ok(v), Bound::AtMost) => *v <= self.tol,
            (Ok(v), Bound::AtLeast) => *v >= self.tol,
            (Err(_), _) => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl CriterionReport {
    pub fn within_budget(&self) -> bool {
        self.elapsed <= self.budget
    }

    pub fn passed(&self) -> bool {
        self.within_budget() && self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} {verdict}  {}", self.id, self.title)?;
        for c in &self.checks {
            let op = match c.bound {
                Bound::AtMost => "<=",
                Bound::AtLeast => ">=",
            };
            match &c.measured {
                Ok(v) => write!(f, " | {} = {v:.3e} {op} {:.1e}", c.label, c.tol)?,
                Err(e) => write!(f, " | {}: error: {e}", c.label)?,
            }
        }
        write!(f, " | {:.2} s of {} s", self.elapsed.as_secs_f64(), self.budget.as_secs())
    }
}

/// Fold a fallible sample stream into its maximum.
fn max_of(values: impl IntoIterator<Item = Measure>) -> Measure {
    values.into_iter().try_fold(0.0_f64, |acc, v| v.map(|v| acc.max(v)))
}

fn par_max<T: Sync>(items: &[T], f: impl Fn(&T) -> Measure + Sync + Send) -> Measure {
    items.par_iter().map(f).try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(a.ln(), b.ln(), n).into_iter().map(f64::exp).collect()
}

fn unit_box(alpha: f64, n: u32) -> BoxModel {
    BoxModel::new(PI, n, alpha, 1.0).expect("valid box")
}

fn time_factor(alpha: f64, lambda: f64, t: f64) -> Result<Complex64, String> {
    let z = time_argument(alpha, lambda, t).map_err(|e| e.to_string())?;
    ml(alpha, 1.0, z).map_err(|e| e.to_string())
}

fn euler_limit() -> Vec<Check> {
    let ts = linspace(0.0, 10.0, 200);
    let err = max_of([-1.0, -4.0].iter().flat_map(|&lambda| {
        ts.iter().map(move |&t| Ok((time_factor(1.0, lambda, t)? - Complex64::from_polar(1.0, lambda * t)).norm()))
    }));
    vec![Check::at_most("max |E_1 - e^{i lambda t}|", err, 1e-12)]
}

fn method_equivalence() -> Vec<Check> {
    let mut lattice = Vec::new();
    for alpha in [0.3, 0.5, 0.7] {
        for lambda in [-1.0, -4.0] {
            for t in [0.1, 0.5, 1.0, 2.0, 5.0] {
                lattice.push((alpha, lambda, t));
            }
        }
    }
    let err = par_max(&lattice, |&(alpha, lambda, t)| {
        let two = t_via_pole_plus_integral(alpha, lambda, t).map_err(|e| e.to_string())?;
        Ok((two - time_factor(alpha, lambda, t)?).norm())
    });
    vec![Check::at_most("max |pole - F - E_alpha|", err, 1e-6)]
}

fn bromwich_oracle() -> Vec<Check> {
    let mut items = Vec::new();
    for alpha in [0.3, 0.5, 0.9] {
        for t in logspace(0.01, 10.0, 20) {
            items.push((alpha, t));
        }
    }
    let lambda = -1.0;
    let err = par_max(&items, |&(alpha, t)| {
        let cfg = BromwichConfig::for_problem(alpha, lambda);
        let inv = bromwich_invert(&cfg, alpha, lambda, t).map_err(|e| e.to_string())?;
        let z = time_argument(alpha, lambda, t).map_err(|e| e.to_string())?;
        let reference = ml_highprec(alpha, 1.0, z, 50).map_err(|e| e.to_string())?;
        Ok((inv - reference).norm())
    });
    vec![Check::at_most("max |Bromwich - Taylor(50 digits)|", err, 1e-8)]
}

fn h_representation() -> Vec<Check> {
    let mut items = Vec::new();
    for alpha in [0.3, 0.5, FRAC_1_SQRT_2] {
        for r in [0.5, 1.0, 1.5, 2.0] {
            for k in 0..16 {
                let theta = (k as f64 + 0.5) * PI / 8.0;
                items.push((alpha, Complex64::from_polar(r, theta)));
            }
        }
    }
    let err = par_max(&items, |&(alpha, z)| {
        let h = h_eval(&HFunctionParams::mittag_leffler(alpha), -z).map_err(|e| e.to_string())?;
        let reference = ml_highprec(alpha, 1.0, z, 50).map_err(|e| e.to_string())?;
        Ok((h - reference).norm() / reference.norm().max(1.0))
    });
    vec![Check::at_most("max rel |H(-z) - E_alpha(z)|", err, 1e-9)]
}

fn small_time_law() -> Vec<Check> {
    let m = unit_box(0.5, 1);
    let err = max_of(logspace(1e-4, 1e-2, 50).into_iter().map(|t| {
        let p = total_probability(&m, t).map_err(|e| e.to_string())?;
        Ok((p - total_probability_small_t(&m, t)).abs() / (1.0 - p).abs())
    }));
    vec![Check::at_most("max |P - P_small| / |1 - P|", err, 0.01)]
}

fn large_time_decay() -> Vec<Check> {
    let (alpha, lambda, t) = (0.5_f64, -1.0_f64, 1e4_f64);
    let scaled = time_factor(alpha, lambda, t).map(|v| lambda * lambda * t.powf(2.0 * alpha) * v.norm_sqr());
    vec![Check::at_most("|lambda^2 t^{2 alpha} P - 1|", scaled.map(|s| (s - 1.0).abs()), 0.02)]
}

fn probability_bound() -> Vec<Check> {
    let mut models = Vec::new();
    for alpha in [0.3, 0.5, 0.7, 0.9] {
        for n in 1..=3 {
            models.push(unit_box(alpha, n));
        }
    }
    let ts = linspace(0.0, 100.0, 10_000);
    let excess = par_max(&models, |m| {
        max_of(ts.iter().map(|&t| total_probability(m, t).map(|p| p - 1.0).map_err(|e| e.to_string())))
    });
    vec![Check::at_most("max P - 1", excess, 1e-10)]
}

fn product_form() -> Vec<Check> {
    let mut items = Vec::new();
    for alpha in [0.5, 0.7] {
        for k in 1..=50 {
            items.push((unit_box(alpha, 1), 2.0 * k as f64 / 50.0));
        }
    }
    let err = par_max(&items, |(m, t)| {
        let a = t_product_form(m, *t).map_err(|e| e.to_string())?;
        let b = m.time_factor(*t).map_err(|e| e.to_string())?;
        Ok((a - b).norm())
    });
    vec![Check::at_most("max |T_product - E_alpha|", err, 1e-4)]
}

fn potential_limit() -> Vec<Check> {
    let err = max_of([1, 2].into_iter().flat_map(|n| {
        let m = unit_box(1.0, n);
        linspace(0.1, 10.0, 100).into_iter().map(move |t| {
            let v = v_eff(&m, t).map_err(|e| e.to_string())?;
            Ok(v.v_r.hypot(v.v_i))
        })
    }));
    vec![Check::at_most("max |V_eff|", err, 1e-8)]
}

fn energy_consistency() -> Vec<Check> {
    let m = unit_box(0.5, 1);
    let ts: Vec<f64> = (1..=50).map(|k| 2.0 * k as f64 / 50.0).collect();
    let err = par_max(&ts, |&t| {
        let a = energy_product_form(&m, t).map_err(|e| e.to_string())?;
        let b = energy_expectation(&m, t).map_err(|e| e.to_string())?;
        Ok((a / b - 1.0).abs())
    });
    vec![Check::at_most("max rel |E_product - <E>|", err, 1e-4)]
}

fn convention_invariance() -> Vec<Check> {
    let mut err = Vec::new();
    for alpha in [0.3, 0.5, 0.7, 0.9] {
        let ip = i_pow(alpha).expect("alpha in range");
        for lambda in [-1.0, -4.0] {
            for t in [0.1_f64, 0.5, 1.0, 2.0, 5.0] {
                let ta = t.powf(alpha);
                let plus = ml(alpha, 1.0, lambda * ip * ta);
                let minus = ml(alpha, 1.0, lambda * ip.conj() * ta);
                err.push(match (plus, minus) {
                    (Ok(p), Ok(m)) => Ok((p.norm() - m.norm()).abs()),
                    (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
                });
            }
        }
    }
    vec![Check::at_most("max ||E(+i)| - |E(-i)||", max_of(err), 1e-12)]
}

fn order_over_refinements(errors: &[f64]) -> f64 {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).fold(f64::INFINITY, f64::min)
}

fn operator_identities() -> Vec<Check> {
    let re = |x: f64| Complex64::new(x, 0.0);
    let fail = |e: fracq_core::Error| e.to_string();

    let constant = SampledFunction::from_fn(2.0, 256, |_| re(3.0))
        .and_then(|f| caputo_derivative(&f, 0.5))
        .map(|d| d.values.iter().map(|v| v.norm()).fold(0.0, f64::max))
        .map_err(fail);

    let linear =
        SampledFunction::from_fn(2.0, 256, re).and_then(|f| caputo_derivative(&f, 0.5)).map_err(fail).map(|d| {
            d.grid.iter().zip(&d.values).map(|(&t, v)| (v - re(t.sqrt() / gamma_real(1.5))).norm()).fold(0.0, f64::max)
        });

    let l1_order = [64, 128, 256, 512]
        .iter()
        .map(|&n| {
            let d = SampledFunction::from_fn(1.0, n, |t| re(t * t)).and_then(|f| caputo_derivative(&f, 0.5))?;
            let exact = |t: f64| 2.0 * t.powf(1.5) / gamma_real(2.5);
            Ok(d.grid.iter().zip(&d.values).map(|(&t, v)| (v - re(exact(t))).norm()).fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>, fracq_core::Error>>()
        .map(|e| order_over_refinements(&e))
        .map_err(fail);

    let riesz = SampledFunction::periodic(2.0 * PI, 64, |x| re(x.sin().exp()))
        .and_then(|f| riesz_derivative(&f, 2.0))
        .map(|d| {
            d.grid
                .iter()
                .zip(&d.values)
                .map(|(&x, v)| {
                    let exact = x.sin().exp() * (x.cos().powi(2) - x.sin());
                    (v - re(exact)).norm()
                })
                .fold(0.0, f64::max)
        })
        .map_err(fail);

    let alpha = 0.5;
    let composition = [64, 128, 256, 512]
        .iter()
        .map(|&n| {
            SampledFunction::from_fn(1.0, n, |t| re(t * t)).and_then(|f| composition_identity_residual(&f, alpha))
        })
        .collect::<Result<Vec<f64>, fracq_core::Error>>()
        .map(|e| order_over_refinements(&e))
        .map_err(fail);

    vec![
        Check::at_most("Caputo(const)", constant, 0.0),
        Check::at_most("|Caputo(t) - t^0.5/G(1.5)|", linear, 1e-12),
        Check::at_least("L1 order on t^2", l1_order, 1.4),
        Check::at_most("|Riesz_2 - f''|", riesz, 1e-10),
        Check::at_least("composition residual order", composition, 1.0 - alpha + 0.4),
    ]
}

fn eigen_ode() -> Vec<Check> {
    let (alpha, lambda) = (0.5, -1.0);
    let sigma = lambda * i_pow(alpha).expect("alpha in range");
    let err = (|| {
        let mut values = Vec::new();
        for t in linspace(0.0, 1.0, 1025) {
            values.push(time_factor(alpha, lambda, t)?);
        }
        let g = SampledFunction::new(linspace(0.0, 1.0, 1025), values).map_err(|e| e.to_string())?;
        let d = caputo_derivative(&g, alpha).map_err(|e| e.to_string())?;
        Ok(d.grid
            .iter()
            .zip(d.values.iter().zip(&g.values))
            .filter(|(&t, _)| t >= 0.1)
            .map(|(_, (&dv, &gv))| (dv - sigma * gv).norm() / (sigma * gv).norm())
            .fold(0.0, f64::max))
    })();
    vec![Check::at_most("max rel |D^alpha E - sigma E| (t >= 0.1)", err, 5e-3)]
}

type CriterionFn = fn() -> Vec<Check>;

const CRITERIA: [(u8, &str, CriterionFn, u64); 13] = [
    (1, "Euler limit", euler_limit, 1),
    (2, "Method I equals Method II", method_equivalence, 30),
    (3, "Bromwich oracle", bromwich_oracle, 30),
    (4, "H-function representation", h_representation, 10),
    (5, "small-time probability law", small_time_law, 5),
    (6, "large-time decay", large_time_decay, 1),
    (7, "probability bound", probability_bound, 60),
    (8, "product-form equivalence", product_form, 60),
    (9, "effective-potential limit", potential_limit, 1),
    (10, "energy consistency", energy_consistency, 60),
    (11, "convention invariance", convention_invariance, 1),
    (12, "fractional-operator identities", operator_identities, 30),
    (13, "eigen-ODE check", eigen_ode, 10),
];

/// Run one criterion; `tol` replaces every upper-bound tolerance.
pub fn run_criterion(id: u8, tol: Option<f64>) -> Option<CriterionReport> {
    let &(id, title, f, budget) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let mut checks = f();
    let elapsed = start.elapsed();
    if let Some(tol) = tol {
        for c in checks.iter_mut().filter(|c| c.bound == Bound::AtMost) {
            c.tol = tol;
        }
    }
    Some(CriterionReport { id, title, checks, elapsed, budget: Duration::from_secs(budget) })
}

pub fn criterion_ids() -> impl Iterator<Item = u8> {
    CRITERIA.iter().map(|c| c.0)
}

/// Run the selected criteria (all when `only` is empty) in order.
pub fn run_verify(only: &[u8], tol: Option<f64>) -> Vec<CriterionReport> {
    criterion_ids().filter(|id| only.is_empty() || only.contains(id)).filter_map(|id| run_criterion(id, tol)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_bounds() {
        assert!(Check::at_most("x", Ok(0.0), 0.0).passed());
        assert!(!Check::at_most("x", Ok(1e-3), 1e-4).passed());
        assert!(Check::at_least("x", Ok(1.5), 1.4).passed());
        assert!(!Check::at_most("x", Err("boom".into()), 1.0).passed());
        assert_eq!(max_of([Ok(1.0), Ok(3.0), Ok(2.0)]), Ok(3.0));
        assert!(max_of([Ok(1.0), Err("x".into())]).is_err());
    }

    #[test]
    fn forced_failure_is_reported() {
        let r = run_criterion(9, Some(1e-30)).unwrap();
        assert!(!r.passed());
        assert!(r.to_string().contains("FAIL"));
        assert!(run_criterion(14, None).is_none());
    }

    #[test]
    fn orders() {
        assert!((order_over_refinements(&[1.0, 0.25, 0.0625]) - 2.0).abs() < 1e-15);
    }
}
