use std::fs;
use std::path::{Path, PathBuf};

use discnorm::analytic::{make_corpus, CorpusConfig, CorpusEntry};
use discnorm::fs_dual::{DualParams, SearchConfig, Theorem, DEFAULT_ALPHA, DEFAULT_APERTURE, DEFAULT_P};
use discnorm::norms::NormKind;
use discnorm::quadrature::{default_a_grid, GridConfig, MoebiusPoint};
use serde::Deserialize;

use crate::output::Format;
use crate::CliError;

/// One norm computation. Missing parameters fall back to per-kind defaults.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormSpec {
    pub kind: NormKind,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub t: Option<f64>,
    #[serde(default)]
    pub aperture: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
}

impl NormSpec {
    fn with_p(kind: NormKind, p: f64) -> Self {
        Self {
            kind,
            p: Some(p),
            t: None,
            aperture: None,
            beta: None,
        }
    }
}

pub fn default_norms() -> Vec<NormSpec> {
    vec![
        NormSpec {
            p: None,
            ..NormSpec::with_p(NormKind::Bloch, 0.0)
        },
        NormSpec::with_p(NormKind::BergmanP, 2.0),
        NormSpec::with_p(NormKind::Bp, 2.0),
        NormSpec::with_p(NormKind::HardyP, 2.0),
        NormSpec {
            t: Some(1.0),
            aperture: Some(DEFAULT_APERTURE),
            ..NormSpec::with_p(NormKind::Lusin, 2.0)
        },
    ]
}

/// Contents of `--config`. Relative paths resolve against the config file.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub corpus_path: Option<PathBuf>,
    pub grid: GridConfig,
    pub theorem: Option<String>,
    pub p: Option<f64>,
    pub alpha: Option<f64>,
    pub s: Option<f64>,
    pub aperture: Option<f64>,
    pub norms: Option<Vec<NormSpec>>,
    pub search: Option<SearchConfig>,
    pub refine: bool,
    pub a_grid: Option<Vec<MoebiusPoint>>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
}

/// Overrides taken from the command line.
#[derive(Debug, Default)]
pub struct Overrides {
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub grid_scale: Option<usize>,
}

/// Everything a subcommand needs, with paths checked and defaults applied.
pub struct Run {
    pub corpus: Vec<CorpusEntry>,
    pub grid: GridConfig,
    pub a_grid: Vec<MoebiusPoint>,
    pub norms: Vec<NormSpec>,
    pub search: SearchConfig,
    pub search_configured: bool,
    pub refine: bool,
    pub output: Option<PathBuf>,
    pub format: Format,
    theorem: Option<String>,
    p: Option<f64>,
    alpha: Option<f64>,
    s: Option<f64>,
    aperture: Option<f64>,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path, what: &str) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {what} {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("malformed {what} {}: {e}", path.display())))
}

impl Run {
    pub fn load(config: Option<&Path>, over: Overrides) -> Result<Self, CliError> {
        let (cfg, base) = match config {
            Some(path) => {
                let cfg: RunConfig = read_json(path, "config")?;
                let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
                (cfg, base)
            }
            None => (RunConfig::default(), PathBuf::new()),
        };
        let seed = over.seed.or(cfg.seed);

        let mut corpus_cfg = match &cfg.corpus_path {
            Some(p) => read_json::<CorpusConfig>(&base.join(p), "corpus file")?,
            None => CorpusConfig::default(),
        };
        if let Some(s) = seed {
            corpus_cfg.seed = s;
        }
        let corpus = make_corpus(&corpus_cfg).map_err(|e| CliError::Config(e.to_string()))?;

        let mut grid = cfg.grid;
        if let Some(k) = over.grid_scale {
            grid = grid.scaled(k).map_err(|e| CliError::Config(e.to_string()))?;
        }
        grid.validate().map_err(|e| CliError::Config(e.to_string()))?;

        let search_configured = cfg.search.is_some();
        let mut search = cfg.search.unwrap_or_default();
        if let Some(s) = seed {
            search.seed = s;
        }
        search.validate().map_err(|e| CliError::Config(e.to_string()))?;

        let output = over.output.or_else(|| cfg.output.map(|p| base.join(p)));
        Ok(Self {
            corpus,
            grid,
            a_grid: cfg.a_grid.unwrap_or_else(default_a_grid),
            norms: cfg.norms.unwrap_or_else(default_norms),
            search,
            search_configured,
            refine: cfg.refine,
            output,
            format: over.format.or(cfg.format).unwrap_or(Format::Csv),
            theorem: cfg.theorem,
            p: cfg.p,
            alpha: cfg.alpha,
            s: cfg.s,
            aperture: cfg.aperture,
        })
    }

    /// Dual parameters; S₂ with the default exponents unless configured.
    pub fn params(&self) -> Result<DualParams, CliError> {
        let theorem = match &self.theorem {
            Some(name) => Theorem::parse(name).map_err(|e| CliError::Config(e.to_string()))?,
            None => Theorem::S2Bergman,
        };
        let params = match theorem {
            Theorem::S1Hardy => DualParams::hardy(
                self.p.unwrap_or(1.0),
                self.s.unwrap_or(1.0),
                self.aperture.unwrap_or(DEFAULT_APERTURE),
            ),
            t => DualParams::new(t, self.p.unwrap_or(DEFAULT_P), self.alpha.unwrap_or(DEFAULT_ALPHA)),
        };
        params.map_err(|e| CliError::Config(e.to_string()))
    }
}
