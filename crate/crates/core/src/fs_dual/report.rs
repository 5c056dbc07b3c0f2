use serde::{Deserialize, Serialize};

use super::eval::{hardy_area_functional, normalize_weight, test_weight, DualRules};
use super::params::{DualParams, Theorem};
use super::search::{infimum_search, SearchConfig, SearchOutcome};
use crate::analytic::{CorpusEntry, TaylorFunction};
use crate::error::{Error, Result};
use crate::norms::{bergman_norm_p, bloch_norm, bp_norm_p};
use crate::quadrature::{default_a_grid, refined_a_grid, GridConfig, MoebiusPoint};

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportConfig {
    pub grid: GridConfig,
    pub a_grid: Vec<MoebiusPoint>,
    pub search: Option<SearchConfig>,
    /// Recompute the test-weight dual at twice the grid resolution (and on the
    /// refined a-grid for S₃).
    pub refine: bool,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            grid: GridConfig::default(),
            a_grid: default_a_grid(),
            search: None,
            refine: false,
        }
    }
}

/// One corpus entry. Dual columns are reported to the power 1/α (p/2 for S₁)
/// and refer to the LHS-normalized function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceRow {
    pub label: String,
    pub theorem: Theorem,
    pub p: f64,
    pub alpha: f64,
    pub lhs_power_value: Option<f64>,
    pub test_dual: Option<f64>,
    pub searched_dual: Option<f64>,
    pub holder_floor: Option<f64>,
    pub ratio_test: Option<f64>,
    pub ratio_searched: Option<f64>,
    pub refine_delta: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandSummary {
    pub rows: usize,
    pub failed_rows: usize,
    pub min_ratio_test: Option<f64>,
    pub max_ratio_test: Option<f64>,
    pub band_test: Option<f64>,
    pub min_ratio_searched: Option<f64>,
    pub max_ratio_searched: Option<f64>,
    pub band_searched: Option<f64>,
    pub max_refine_delta: Option<f64>,
    /// Rows breaking floor ≤ searched ≤ test.
    pub ordering_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub theorem: Theorem,
    pub params: DualParams,
    pub rows: Vec<EquivalenceRow>,
    pub summary: BandSummary,
    pub note: String,
}

const NOTE: &str = "functions are rescaled so that the left-hand side equals 1 (the two sides scale differently); \
lhs_power_value is the unscaled left-hand side; searched values are infima over the power-product family";

/// Left-hand side of the theorem, raised to the power p.
pub fn lhs_power_value(f: &TaylorFunction, params: &DualParams, rules: &DualRules) -> Result<f64> {
    let p = params.p;
    match params.theorem {
        Theorem::S1Hardy => hardy_area_functional(f, params, &rules.disc, rules.circle),
        Theorem::S2Bergman => Ok(bergman_norm_p(f, p, &rules.disc)?.value),
        Theorem::S3Bloch => Ok(bloch_norm(f, &rules.disc).value.powf(p)),
        Theorem::S4Bp => Ok(bp_norm_p(f, p, &rules.disc)?.value),
    }
}

struct RowValues {
    lhs: f64,
    lhs_normalized: f64,
    test_dual: Option<f64>,
    floor: Option<f64>,
    searched_dual: Option<f64>,
    outcome: Option<SearchOutcome>,
}

fn row_values(
    f: &TaylorFunction,
    params: &DualParams,
    rules: &DualRules,
    search: Option<&SearchConfig>,
) -> Result<RowValues> {
    let lhs = lhs_power_value(f, params, rules)?;
    if !(lhs > 0.0) || !lhs.is_finite() {
        return Err(Error::Normalization(format!(
            "left-hand side {lhs} cannot be normalized"
        )));
    }
    let lambda = lhs.powf(-1.0 / params.p);
    let g = f.scale(Complex64::new(lambda, 0.0));
    let lhs_normalized = lhs_power_value(&g, params, rules)?;
    let adapted = if params.theorem == Theorem::S2Bergman {
        rules.adapted_to(&g)?
    } else {
        rules.clone()
    };
    let mut test_dual = None;
    let mut floor = None;
    if let Some(w) = test_weight(&g, params)? {
        let ev = normalize_weight(&g, &w, params, &adapted)?;
        test_dual = Some(ev.reported_dual());
        floor = ev.holder_floor;
    }
    let mut outcome = None;
    let searched_dual = match search {
        Some(cfg) => {
            let out = infimum_search(&g, params, cfg, &adapted)?;
            let dual = match &out.best {
                Some(best) => {
                    if floor.is_none() {
                        floor = best.holder_floor;
                    }
                    best.reported_dual()
                }
                None => {
                    return Err(Error::Normalization(format!(
                        "search failed: {}",
                        out.failure.clone().unwrap_or_default()
                    )))
                }
            };
            outcome = Some(out);
            Some(dual)
        }
        None => None,
    };
    Ok(RowValues {
        lhs,
        lhs_normalized,
        test_dual,
        floor,
        searched_dual,
        outcome,
    })
}

fn error_row(label: &str, params: &DualParams, err: &Error) -> EquivalenceRow {
    EquivalenceRow {
        label: label.to_string(),
        theorem: params.theorem,
        p: params.p,
        alpha: params.alpha,
        lhs_power_value: None,
        test_dual: None,
        searched_dual: None,
        holder_floor: None,
        ratio_test: None,
        ratio_searched: None,
        refine_delta: None,
        error: Some(err.to_string()),
    }
}

fn relative_change(a: f64, b: f64) -> f64 {
    (b / a - 1.0).abs()
}

/// One report row; errors are recorded in the row.
pub fn equivalence_row(
    label: &str,
    f: &TaylorFunction,
    params: &DualParams,
    rules: &DualRules,
    config: &ReportConfig,
) -> EquivalenceRow {
    let base = match row_values(f, params, rules, config.search.as_ref()) {
        Ok(v) => v,
        Err(e) => return error_row(label, params, &e),
    };
    let ratio_test = base.test_dual.map(|t| t / base.lhs_normalized);
    let mut refine_delta = None;
    if config.refine {
        let refined = (|| -> Result<f64> {
            let Some(t0) = ratio_test else {
                return Ok(0.0);
            };
            let fine = DualRules::with_a_grid(&config.grid.scaled(2)?, config.a_grid.clone())?;
            let v = row_values(f, params, &fine, None)?;
            let mut delta = relative_change(t0, v.test_dual.unwrap_or(f64::NAN) / v.lhs_normalized);
            if params.theorem == Theorem::S3Bloch {
                let dense = DualRules::with_a_grid(&config.grid, refined_a_grid())?;
                let v = row_values(f, params, &dense, None)?;
                delta = delta.max(relative_change(t0, v.test_dual.unwrap_or(f64::NAN) / v.lhs_normalized));
            }
            Ok(delta)
        })();
        match refined {
            Ok(d) => refine_delta = Some(d),
            Err(e) => return error_row(label, params, &e),
        }
    }
    EquivalenceRow {
        label: label.to_string(),
        theorem: params.theorem,
        p: params.p,
        alpha: params.alpha,
        lhs_power_value: Some(base.lhs),
        test_dual: base.test_dual,
        searched_dual: base.searched_dual,
        holder_floor: base.floor,
        ratio_test,
        ratio_searched: base.searched_dual.map(|s| s / base.lhs_normalized),
        refine_delta,
        error: None,
    }
}

fn band(values: impl Iterator<Item = f64>) -> (Option<f64>, Option<f64>, Option<f64>) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut any = false;
    for v in values {
        any = true;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !any {
        return (None, None, None);
    }
    (Some(lo), Some(hi), Some(hi / lo))
}

pub fn summarize(rows: &[EquivalenceRow]) -> BandSummary {
    let ok: Vec<&EquivalenceRow> = rows.iter().filter(|r| r.error.is_none()).collect();
    let (min_t, max_t, band_t) = band(ok.iter().filter_map(|r| r.ratio_test));
    let (min_s, max_s, band_s) = band(ok.iter().filter_map(|r| r.ratio_searched));
    let max_refine_delta = ok
        .iter()
        .filter_map(|r| r.refine_delta)
        .fold(None, |m: Option<f64>, d| Some(m.map_or(d, |m| m.max(d))));
    let ordering_violations = ok.iter().filter(|r| ordering_violated(r)).count();
    BandSummary {
        rows: rows.len(),
        failed_rows: rows.len() - ok.len(),
        min_ratio_test: min_t,
        max_ratio_test: max_t,
        band_test: band_t,
        min_ratio_searched: min_s,
        max_ratio_searched: max_s,
        band_searched: band_s,
        max_refine_delta,
        ordering_violations,
    }
}

/// floor ≤ searched ≤ test, with 1e-10 relative slack.
pub fn ordering_violated(row: &EquivalenceRow) -> bool {
    let tol = 1e-10;
    let le = |a: Option<f64>, b: Option<f64>| match (a, b) {
        (Some(a), Some(b)) => a <= b * (1.0 + tol),
        _ => true,
    };
    !(le(row.holder_floor, row.searched_dual)
        && le(row.searched_dual, row.test_dual)
        && le(row.holder_floor, row.test_dual))
}

/// Per-entry comparison of the left-hand side with the dual quantities.
pub fn equivalence_report(
    corpus: &[CorpusEntry],
    params: &DualParams,
    config: &ReportConfig,
) -> Result<EquivalenceReport> {
    params.validate()?;
    let rules = DualRules::with_a_grid(&config.grid, config.a_grid.clone())?;
    let rows: Vec<EquivalenceRow> = corpus
        .iter()
        .map(|e| equivalence_row(&e.label, &e.function, params, &rules, config))
        .collect();
    let summary = summarize(&rows);
    Ok(EquivalenceReport {
        theorem: params.theorem,
        params: *params,
        rows,
        summary,
        note: NOTE.to_string(),
    })
}

/// One searched corpus entry, with the best weight found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchRow {
    pub label: String,
    pub theorem: Theorem,
    pub p: f64,
    pub alpha: f64,
    pub lhs_power_value: Option<f64>,
    pub test_dual: Option<f64>,
    pub searched_dual: Option<f64>,
    pub holder_floor: Option<f64>,
    pub evaluations: Option<usize>,
    pub improvements: Option<usize>,
    pub best_u: Option<f64>,
    pub best_v: Option<f64>,
    pub best_s: Option<f64>,
    pub best_softening: Option<f64>,
    pub best_scale: Option<f64>,
    pub ordering_violated: bool,
    pub error: Option<String>,
}

/// Runs the family search on the LHS-normalized function.
pub fn search_row(
    label: &str,
    f: &TaylorFunction,
    params: &DualParams,
    rules: &DualRules,
    search: &SearchConfig,
) -> SearchRow {
    let mut row = SearchRow {
        label: label.to_string(),
        theorem: params.theorem,
        p: params.p,
        alpha: params.alpha,
        lhs_power_value: None,
        test_dual: None,
        searched_dual: None,
        holder_floor: None,
        evaluations: None,
        improvements: None,
        best_u: None,
        best_v: None,
        best_s: None,
        best_softening: None,
        best_scale: None,
        ordering_violated: false,
        error: None,
    };
    let v = match row_values(f, params, rules, Some(search)) {
        Ok(v) => v,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.lhs_power_value = Some(v.lhs);
    row.test_dual = v.test_dual;
    row.searched_dual = v.searched_dual;
    row.holder_floor = v.floor;
    if let Some(out) = &v.outcome {
        row.evaluations = Some(out.evaluations);
        row.improvements = Some(out.improvements);
        if let Some(best) = &out.best {
            row.best_u = Some(best.weight.exponents.u);
            row.best_v = Some(best.weight.exponents.v);
            row.best_s = Some(best.weight.exponents.s);
            row.best_softening = Some(best.weight.softening);
            row.best_scale = Some(best.weight.scale);
        }
    }
    let le = |a: Option<f64>, b: Option<f64>| match (a, b) {
        (Some(a), Some(b)) => a <= b * (1.0 + 1e-10),
        _ => true,
    };
    row.ordering_violated = !(le(row.holder_floor, row.searched_dual) && le(row.searched_dual, row.test_dual));
    if row.ordering_violated {
        row.error = Some("ordering floor <= searched <= test violated".into());
    }
    row
}
