//! Derivative-free search over the power-product weight family.
//!
//! Opportunistic compass search on (u, v, s) with the softening ε treated as
//! a categorical coordinate. Every candidate is normalized onto its
//! constraint surface, so minimizing the normalized dual is meaningful.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::eval::{normalize_weight_with, prepare_tables, test_weight, DualEvaluation, DualRules};
use super::params::DualParams;
use super::weight::{Arity, Exponents, WeightSpec};
use crate::analytic::TaylorFunction;
use crate::error::{Error, Result};

/// Starting exponents: "paper" selects the test weight (ω ≡ 1 for S₁).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SearchStart {
    Named(String),
    Exponents(Exponents),
}

impl Default for SearchStart {
    fn default() -> Self {
        SearchStart::Named("paper".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    pub start: SearchStart,
    pub epsilons: Vec<f64>,
    pub budget: usize,
    pub seed: u64,
    pub initial_step: f64,
    pub min_step: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            start: SearchStart::default(),
            epsilons: vec![0.0, 1e-6, 1e-3],
            budget: 200,
            seed: 0,
            initial_step: 0.5,
            min_step: 1e-3,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::config("search budget must be at least 1"));
        }
        if let SearchStart::Named(name) = &self.start {
            if name != "paper" {
                return Err(Error::config(format!("unknown search start '{name}'")));
            }
        }
        if self.epsilons.iter().any(|e| !(*e >= 0.0) || !e.is_finite()) {
            return Err(Error::config("epsilons must be finite and >= 0"));
        }
        if !(self.initial_step > 0.0) || !(self.min_step > 0.0) {
            return Err(Error::config("search steps must be positive"));
        }
        Ok(())
    }

    /// Softening values, sorted, always including 0.
    fn softenings(&self) -> Vec<f64> {
        let mut e = self.epsilons.clone();
        e.push(0.0);
        e.sort_by(|a, b| a.partial_cmp(b).expect("finite epsilons"));
        e.dedup();
        e
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    /// Best feasible normalized weight found; none if every candidate failed.
    pub best: Option<DualEvaluation>,
    /// The normalized starting weight, if it was feasible.
    pub start: Option<DualEvaluation>,
    pub evaluations: usize,
    pub improvements: usize,
    pub failure: Option<String>,
}

fn start_weight(f: &TaylorFunction, params: &DualParams, config: &SearchConfig) -> Result<WeightSpec> {
    let arity = if params.theorem.is_two_point() {
        Arity::TwoPoint
    } else {
        Arity::OnePoint
    };
    match &config.start {
        SearchStart::Exponents(e) => WeightSpec::new(arity, *e, 0.0, 1.0),
        SearchStart::Named(_) => match test_weight(f, params)? {
            Some(w) => Ok(w),
            None => WeightSpec::new(arity, Exponents { u: 0.0, v: 0.0, s: 0.0 }, 0.0, 1.0),
        },
    }
}

type Key = [u64; 4];

fn key(x: &[f64; 3], eps: usize) -> Key {
    [x[0].to_bits(), x[1].to_bits(), x[2].to_bits(), eps as u64]
}

/// Minimizes the normalized dual over ω_(u,v,s,ε) within `budget` evaluations.
pub fn infimum_search(
    f: &TaylorFunction,
    params: &DualParams,
    config: &SearchConfig,
    rules: &DualRules,
) -> Result<SearchOutcome> {
    config.validate()?;
    params.validate()?;
    let start = start_weight(f, params, config)?;
    let eps = config.softenings();
    let zero = eps.iter().position(|e| *e == 0.0).expect("zero softening");
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let tables = prepare_tables(f, params, rules);
    let mut cache: HashMap<Key, Option<DualEvaluation>> = HashMap::new();
    let mut evaluations = 0usize;
    let mut last_error: Option<String> = None;

    let mut evaluate = |x: &[f64; 3], e: usize, evaluations: &mut usize| -> Option<DualEvaluation> {
        if let Some(v) = cache.get(&key(x, e)) {
            return v.clone();
        }
        *evaluations += 1;
        let w = WeightSpec {
            exponents: Exponents {
                u: x[0],
                v: x[1],
                s: x[2],
            },
            softening: eps[e],
            ..start
        };
        let r = match normalize_weight_with(f, &w, params, rules, tables.as_ref()) {
            Ok(ev) if ev.feasible && ev.dual_value.is_finite() => Some(ev),
            Ok(_) => None,
            Err(err) => {
                last_error = Some(err.to_string());
                None
            }
        };
        cache.insert(key(x, e), r.clone());
        r
    };

    let mut x = [start.exponents.u, start.exponents.v, start.exponents.s];
    let mut e_cur = zero;
    let start_eval = evaluate(&x, e_cur, &mut evaluations);
    let mut best = start_eval.clone();
    let mut improvements = 0usize;
    let mut h = config.initial_step;
    while evaluations < config.budget && h >= config.min_step {
        let mut moves: Vec<([f64; 3], usize)> = Vec::new();
        for c in 0..3 {
            for sign in [1.0, -1.0] {
                let mut y = x;
                y[c] += sign * h;
                moves.push((y, e_cur));
            }
        }
        for e in 0..eps.len() {
            if e != e_cur {
                moves.push((x, e));
            }
        }
        moves.shuffle(&mut rng);
        let mut improved = false;
        for (y, e) in moves {
            if evaluations >= config.budget {
                break;
            }
            if let Some(ev) = evaluate(&y, e, &mut evaluations) {
                let better = match &best {
                    Some(b) => ev.dual_value < b.dual_value,
                    None => true,
                };
                if better {
                    best = Some(ev);
                    x = y;
                    e_cur = e;
                    improvements += 1;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    let failure = if best.is_none() {
        Some(last_error.unwrap_or_else(|| "no feasible candidate within budget".into()))
    } else {
        None
    };
    Ok(SearchOutcome {
        best,
        start: start_eval,
        evaluations,
        improvements,
        failure,
    })
}
