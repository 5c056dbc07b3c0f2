//! Seeded test corpus of analytic functions with `f(0) = 0`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::TaylorFunction;
use crate::error::{Error, Result};

/// Default truncation degree for series families (lacunary, logarithm, Blaschke).
pub const DEFAULT_DEGREE: usize = 16;

const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
}

impl FamilySpec {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: Value) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }
}

/// `{"families": [{"name": ..., "params": {...}}], "degree": N, "seed": s}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusConfig {
    pub families: Vec<FamilySpec>,
    #[serde(default = "default_degree")]
    pub degree: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_degree() -> usize {
    DEFAULT_DEGREE
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl Default for CorpusConfig {
    /// Monomials `z..z^6`, three random polynomials, lacunary series for
    /// `lambda = 0.5, 0.9`, the truncated logarithm and two Blaschke-type factors.
    fn default() -> Self {
        Self {
            families: vec![
                FamilySpec::new("monomials"),
                FamilySpec::new("random_polynomial"),
                FamilySpec::new("lacunary"),
                FamilySpec::new("truncated_log"),
                FamilySpec::new("blaschke"),
            ],
            degree: DEFAULT_DEGREE,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    HighResolutionOracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceValue {
    pub value: f64,
    pub provenance: Provenance,
}

impl ReferenceValue {
    fn closed_form(value: f64) -> Self {
        Self {
            value,
            provenance: Provenance::ClosedForm,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub label: String,
    pub family: String,
    pub function: TaylorFunction,
    pub family_params: BTreeMap<String, f64>,
    /// Keys: `hardy_2` (squared H^2 norm), `bergman_2` (integral of |f|^2),
    /// `bloch`, `bp_2` (squared B_2 seminorm).
    pub reference_values: BTreeMap<String, ReferenceValue>,
    /// Set for truncations of functions with a boundary singularity, whose
    /// equivalence ratios are allowed wider bands.
    pub boundary_singular: bool,
}

impl CorpusEntry {
    /// Entry for a polynomial, which carries its Parseval reference value.
    pub fn polynomial(label: &str, function: TaylorFunction) -> Self {
        let mut reference_values = BTreeMap::new();
        reference_values.insert(
            "hardy_2".to_string(),
            ReferenceValue::closed_form(function.coefficient_energy()),
        );
        Self {
            label: label.to_string(),
            family: "literal".to_string(),
            function,
            family_params: BTreeMap::new(),
            reference_values,
            boundary_singular: false,
        }
    }

    /// Genuine polynomials (monomials, random and literal polynomials), as
    /// opposed to truncations of infinite series.
    pub fn is_polynomial_family(&self) -> bool {
        matches!(self.family.as_str(), "monomials" | "random_polynomial" | "literal")
    }
}

/// Expands a corpus configuration into entries, in configuration order.
pub fn make_corpus(config: &CorpusConfig) -> Result<Vec<CorpusEntry>> {
    if config.degree < 1 {
        return Err(Error::config("corpus degree must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut entries = Vec::new();
    for family in &config.families {
        match family.name.as_str() {
            "monomials" => monomials(family, &mut entries)?,
            "random_polynomial" => random_polynomials(family, &mut rng, &mut entries)?,
            "lacunary" => lacunary(family, config.degree, &mut entries)?,
            "truncated_log" => truncated_log(family, config.degree, &mut entries)?,
            "blaschke" => blaschke(family, config.degree, &mut entries)?,
            "literal" => literal(family, &mut entries)?,
            other => return Err(Error::config(format!("unknown corpus family '{other}'"))),
        }
    }
    Ok(entries)
}

fn param_usize(spec: &FamilySpec, key: &str, default: usize) -> Result<usize> {
    match spec.params.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_u64()
            .map(|n| n as usize)
            .ok_or_else(|| Error::config(format!("{}: '{key}' must be a nonnegative integer", spec.name))),
    }
}

/// Accepts either a single number or an array of numbers.
fn param_reals(spec: &FamilySpec, key: &str, default: &[f64]) -> Result<Vec<f64>> {
    let bad = || Error::config(format!("{}: '{key}' must be a number or array of numbers", spec.name));
    match spec.params.get(key) {
        None => Ok(default.to_vec()),
        Some(Value::Number(n)) => n.as_f64().map(|x| vec![x]).ok_or_else(bad),
        Some(Value::Array(items)) => items.iter().map(|v| v.as_f64().ok_or_else(bad)).collect(),
        Some(_) => Err(bad()),
    }
}

fn monomials(spec: &FamilySpec, out: &mut Vec<CorpusEntry>) -> Result<()> {
    let from = param_usize(spec, "from", 1)?;
    let to = param_usize(spec, "to", 6)?;
    if from == 0 {
        return Err(Error::config("monomials: 'from' must be >= 1 so that f(0) = 0"));
    }
    for n in from..=to {
        let nf = n as f64;
        let mut refs = BTreeMap::new();
        refs.insert("hardy_2".into(), ReferenceValue::closed_form(1.0));
        refs.insert("bergman_2".into(), ReferenceValue::closed_form(PI / (nf + 1.0)));
        // sup of n r^{n-1} (1 - r) is attained at r = (n - 1) / n.
        let bloch = if n == 1 {
            1.0
        } else {
            ((nf - 1.0) / nf).powi(n as i32 - 1)
        };
        refs.insert("bloch".into(), ReferenceValue::closed_form(bloch));
        refs.insert("bp_2".into(), ReferenceValue::closed_form(nf * PI));
        out.push(CorpusEntry {
            label: format!("z^{n}"),
            family: spec.name.clone(),
            function: TaylorFunction::monomial(n),
            family_params: BTreeMap::from([("n".to_string(), nf)]),
            reference_values: refs,
            boundary_singular: false,
        });
    }
    Ok(())
}

fn random_polynomials(spec: &FamilySpec, rng: &mut ChaCha8Rng, out: &mut Vec<CorpusEntry>) -> Result<()> {
    let count = param_usize(spec, "count", 3)?;
    let degree = param_usize(spec, "degree", 8)?;
    if degree < 1 {
        return Err(Error::config("random_polynomial: 'degree' must be >= 1"));
    }
    for k in 0..count {
        let mut coeffs: Vec<Complex64> = (0..=degree)
            .map(|_| Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
            .collect();
        coeffs[0] = Complex64::new(0.0, 0.0);
        let function = TaylorFunction::new(coeffs)?;
        let mut entry = CorpusEntry::polynomial(&format!("random-{k}"), function);
        entry.family = spec.name.clone();
        entry.family_params = BTreeMap::from([("index".to_string(), k as f64), ("degree".to_string(), degree as f64)]);
        out.push(entry);
    }
    Ok(())
}

/// `sum_{k=0}^{K} lambda^k z^{2^k}` with `2^K <= degree`.
fn lacunary(spec: &FamilySpec, degree: usize, out: &mut Vec<CorpusEntry>) -> Result<()> {
    for lambda in param_reals(spec, "lambda", &[0.5, 0.9])? {
        if !(lambda.abs() < 1.0) {
            return Err(Error::config(format!("lacunary: |lambda| must be < 1, got {lambda}")));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
        let mut power = 1usize;
        let mut k = 0;
        while power <= degree {
            coeffs[power] = Complex64::new(lambda.powi(k), 0.0);
            power *= 2;
            k += 1;
        }
        let function = TaylorFunction::new(coeffs)?;
        let mut entry = CorpusEntry::polynomial(&format!("lacunary({lambda})"), function);
        entry.family = spec.name.clone();
        entry.family_params = BTreeMap::from([("lambda".to_string(), lambda), ("terms".to_string(), k as f64)]);
        out.push(entry);
    }
    Ok(())
}

/// `sum_{n=1}^{N} z^n / n`, the truncated series of `log(1 / (1 - z))`.
fn truncated_log(spec: &FamilySpec, degree: usize, out: &mut Vec<CorpusEntry>) -> Result<()> {
    let n = param_usize(spec, "degree", degree)?;
    let coeffs: Vec<Complex64> = (0..=n)
        .map(|k| {
            if k == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(1.0 / k as f64, 0.0)
            }
        })
        .collect();
    let function = TaylorFunction::new(coeffs)?;
    let mut entry = CorpusEntry::polynomial(&format!("log(N={n})"), function);
    entry.family = spec.name.clone();
    entry.family_params = BTreeMap::from([("degree".to_string(), n as f64)]);
    entry.boundary_singular = true;
    out.push(entry);
    Ok(())
}

/// Taylor coefficients of `z (a - z) / (1 - conj(a) z)` up to `z^degree`:
/// `a` at `z^1` and `-(1 - |a|^2) conj(a)^{n-2}` at `z^n`, `n >= 2`.
pub(crate) fn blaschke_coefficients(a: Complex64, degree: usize) -> Vec<Complex64> {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
    if degree >= 1 {
        coeffs[1] = a;
    }
    let factor = -(1.0 - a.norm_sqr());
    let mut power = Complex64::new(1.0, 0.0);
    for c in coeffs.iter_mut().skip(2) {
        *c = power * factor;
        power *= a.conj();
    }
    coeffs
}

fn blaschke(spec: &FamilySpec, degree: usize, out: &mut Vec<CorpusEntry>) -> Result<()> {
    for a in param_reals(spec, "a", &[0.3, 0.7])? {
        if !(a.abs() < 1.0) {
            return Err(Error::config(format!("blaschke: |a| must be < 1, got {a}")));
        }
        let function = TaylorFunction::new(blaschke_coefficients(Complex64::new(a, 0.0), degree))?;
        let mut entry = CorpusEntry::polynomial(&format!("blaschke({a})"), function);
        entry.family = spec.name.clone();
        entry.family_params = BTreeMap::from([("a".to_string(), a)]);
        out.push(entry);
    }
    Ok(())
}

fn literal(spec: &FamilySpec, out: &mut Vec<CorpusEntry>) -> Result<()> {
    let value = spec
        .params
        .get("coefficients")
        .ok_or_else(|| Error::config("literal: missing 'coefficients'"))?;
    let function: TaylorFunction = serde_json::from_value(value.clone())
        .map_err(|e| Error::config(format!("literal: coefficients must be [re, im] pairs: {e}")))?;
    if !function.vanishes_at_zero() {
        return Err(Error::config("literal: coefficient a_0 must be zero"));
    }
    let label = spec
        .params
        .get("label")
        .and_then(Value::as_str)
        .map(str::to_string)
        .unwrap_or_else(|| format!("literal-{}", out.len()));
    let mut entry = CorpusEntry::polynomial(&label, function);
    entry.family = spec.name.clone();
    out.push(entry);
    Ok(())
}
