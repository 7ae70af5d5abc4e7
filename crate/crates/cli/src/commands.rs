//! Sweep commands. Rows are computed in parallel and emitted in grid order.

use fracq_core::fox_h::{h_classify, h_eval, HFunctionParams};
use fracq_core::mittag_leffler::{ml, time_argument};
use fracq_core::model::{
    box_eigenvalue, energy_expectation, total_probability, total_probability_large_t, total_probability_small_t, v_eff,
    v_eff_series_small_t, BoxModel, SeriesVariant,
};
use fracq_core::Complex64;
use rayon::prelude::*;

use crate::config::SweepConfig;
use crate::output::{Cell, Table};
use crate::CliError;

fn numerical(e: impl std::fmt::Display, alpha: f64, lambda: f64, t: f64) -> CliError {
    CliError::Numerical(format!("{e} (alpha = {alpha}, lambda = {lambda}, t = {t})"))
}

fn models(cfg: &SweepConfig) -> Result<Vec<BoxModel>, CliError> {
    let mut out = Vec::new();
    for &alpha in &cfg.alpha {
        for &n in &cfg.n {
            let m = BoxModel::with_units(cfg.a, n, alpha, cfg.d_alpha, cfg.hbar, cfg.mass)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            out.push(m);
        }
    }
    Ok(out)
}

fn collect_rows<I, F>(items: Vec<I>, f: F) -> Result<Vec<Vec<Cell>>, CliError>
where
    I: Send + Sync,
    F: Fn(&I) -> Result<Vec<Cell>, CliError> + Send + Sync,
{
    items.par_iter().map(f).collect()
}

/// `E_{α,β}(λ i^α t^α)` over the grid.
pub fn run_ml(cfg: &SweepConfig) -> Result<Table, CliError> {
    let mut items = Vec::new();
    for &alpha in &cfg.alpha {
        for &lambda in &cfg.lambda {
            for t in cfg.t_grid.nodes() {
                items.push((alpha, lambda, t));
            }
        }
    }
    let beta = cfg.beta;
    let mut table = Table::new(vec!["alpha", "lambda", "t", "z_re", "z_im", "re", "im"]);
    table.rows = collect_rows(items, |&(alpha, lambda, t)| {
        let z = time_argument(alpha, lambda, t).map_err(|e| numerical(e, alpha, lambda, t))?;
        let v = ml(alpha, beta, z).map_err(|e| numerical(e, alpha, lambda, t))?;
        Ok(vec![alpha.into(), lambda.into(), t.into(), z.re.into(), z.im.into(), v.re.into(), v.im.into()])
    })?;
    Ok(table)
}

/// Time factor, probability laws and energy for the infinite well.
pub fn run_box_scan(cfg: &SweepConfig) -> Result<Table, CliError> {
    let items: Vec<(BoxModel, f64)> =
        models(cfg)?.into_iter().flat_map(|m| cfg.t_grid.nodes().into_iter().map(move |t| (m, t))).collect();
    let mut table = Table::new(vec!["alpha", "n", "t", "reT", "imT", "prob", "prob_small_t", "prob_large_t", "energy"]);
    table.rows = collect_rows(items, |(m, t)| {
        let t = *t;
        let fail = |e: fracq_core::Error| numerical(e, m.alpha, box_eigenvalue(m), t);
        let tt = m.time_factor(t).map_err(fail)?;
        let prob = total_probability(m, t).map_err(fail)?;
        let large = total_probability_large_t(m, t).ok();
        let energy = energy_expectation(m, t).map_err(fail)?;
        Ok(vec![
            m.alpha.into(),
            f64::from(m.n).into(),
            t.into(),
            tt.re.into(),
            tt.im.into(),
            prob.into(),
            total_probability_small_t(m, t).into(),
            large.into(),
            energy.into(),
        ])
    })?;
    Ok(table)
}

/// Exact effective potential beside its corrected small-time expansion.
pub fn run_veff_scan(cfg: &SweepConfig) -> Result<Table, CliError> {
    if !(cfg.t_grid.start > 0.0) {
        return Err(CliError::Usage("the effective potential needs a t-grid starting above 0".into()));
    }
    let items: Vec<(BoxModel, f64)> =
        models(cfg)?.into_iter().flat_map(|m| cfg.t_grid.nodes().into_iter().map(move |t| (m, t))).collect();
    let mut table = Table::new(vec!["alpha", "n", "t", "vR", "vI", "vR_series", "vI_series"]);
    table.rows = collect_rows(items, |(m, t)| {
        let t = *t;
        let fail = |e: fracq_core::Error| numerical(e, m.alpha, box_eigenvalue(m), t);
        let v = v_eff(m, t).map_err(fail)?;
        let s = v_eff_series_small_t(m, t, 2, SeriesVariant::Corrected).map_err(fail)?;
        Ok(vec![
            m.alpha.into(),
            f64::from(m.n).into(),
            t.into(),
            v.v_r.into(),
            v.v_i.into(),
            s.v_r.into(),
            s.v_i.into(),
        ])
    })?;
    Ok(table)
}

/// Evaluate a serialized H-function at each requested argument.
pub fn run_fox_eval(cfg: &SweepConfig) -> Result<Table, CliError> {
    let text = cfg.params.as_deref().ok_or_else(|| CliError::Usage("foxh needs --params".into()))?;
    let params: HFunctionParams = text.parse().map_err(|e| CliError::Usage(format!("params: {e}")))?;
    if cfg.z.is_empty() {
        return Err(CliError::Usage("foxh needs at least one --z".into()));
    }
    let class = h_classify(&params).map_err(|e| CliError::Usage(format!("params: {e}")))?;
    let mut table = Table::new(vec!["z_re", "z_im", "h_re", "h_im", "mu", "verdict"]);
    table.rows = collect_rows(cfg.z.clone(), |z: &Complex64| {
        let h = h_eval(&params, *z).map_err(|e| CliError::Numerical(format!("{e} (z = {z})")))?;
        Ok(vec![
            z.re.into(),
            z.im.into(),
            h.re.into(),
            h.im.into(),
            class.mu.into(),
            Cell::Text(class.verdict.to_string()),
        ])
    })?;
    Ok(table)
}
