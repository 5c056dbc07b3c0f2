//! `discnorm` command-line driver: norm tables, equivalence reports and
//! infimum searches over a seeded corpus, written as CSV or JSON.

mod config;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use discnorm::analytic::TaylorFunction;
use discnorm::fs_dual::{equivalence_report, search_row, DualParams, DualRules, EquivalenceReport, ReportConfig};
use discnorm::norms::{
    bergman_norm_p, bloch_norm, bp_norm_p, default_hardy_radii, hardy_norm_p, kwon_ast_rhs, kwon_bloch_functional,
    kwon_bp_functional, lusin_functional, NormKind, NormValue,
};
use discnorm::quadrature::{BidiscRule, DiscRule};
use serde::Serialize;

use config::{NormSpec, Overrides, Run};
use output::{write_json, Cell, Format, Table};

#[derive(Debug)]
pub enum CliError {
    /// Bad config, violated hypothesis or unreadable input: exit 2.
    Config(String),
    Io(io::Error),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Parser)]
#[command(
    name = "discnorm",
    version,
    about = "Norms and weighted dual characterizations on the unit disc"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Report file; stdout when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for the corpus and the search.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Multiply all grid node counts by k.
    #[arg(long, global = true, value_name = "K")]
    grid_scale: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// One row per corpus entry and configured norm.
    Norms,
    /// Theorem ratios per corpus entry plus a band summary.
    Equivalence,
    /// Family infimum search per corpus entry.
    Search,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let over = Overrides {
        output: cli.output,
        format: cli.format,
        seed: cli.seed,
        grid_scale: cli.grid_scale,
    };
    let result = Run::load(cli.config.as_deref(), over).and_then(|run| match cli.command {
        Command::Norms => cmd_norms(&run),
        Command::Equivalence => cmd_equivalence(&run),
        Command::Search => cmd_search(&run),
    });
    match result {
        Ok(0) => ExitCode::SUCCESS,
        Ok(failed) => {
            eprintln!("discnorm: {failed} row(s) failed");
            ExitCode::from(3)
        }
        Err(CliError::Config(msg)) => {
            eprintln!("discnorm: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) => {
            eprintln!("discnorm: {e}");
            ExitCode::from(1)
        }
    }
}

fn emit(run: &Run, table: &Table, json: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), CliError> {
    let mut out: Box<dyn Write> = match &run.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match run.format {
        Format::Csv => table.write_csv(&mut out)?,
        Format::Json => json(&mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn params_label(spec: &NormSpec) -> String {
    let mut parts = Vec::new();
    for (k, v) in [
        ("p", spec.p),
        ("t", spec.t),
        ("aperture", spec.aperture),
        ("beta", spec.beta),
    ] {
        if let Some(v) = v {
            parts.push(format!("{k}={v}"));
        }
    }
    parts.join(";")
}

/// Fills per-kind defaults in place so the params column shows what ran.
fn complete(spec: &NormSpec) -> NormSpec {
    let mut s = spec.clone();
    if s.kind != NormKind::Bloch {
        s.p.get_or_insert(2.0);
    }
    if s.kind == NormKind::Lusin {
        s.t.get_or_insert(1.0);
        s.aperture.get_or_insert(discnorm::fs_dual::DEFAULT_APERTURE);
    }
    s
}

struct Rules {
    disc: DiscRule,
    bidisc: Option<BidiscRule>,
}

fn norm_value(f: &TaylorFunction, spec: &NormSpec, run: &Run, rules: &Rules) -> discnorm::Result<NormValue> {
    let p = spec.p.unwrap_or(2.0);
    let beta = || {
        spec.beta
            .ok_or_else(|| discnorm::Error::Config(format!("{} requires beta", spec.kind.name())))
    };
    let bidisc = || rules.bidisc.as_ref().expect("bidisc rule built for kwon kinds");
    match spec.kind {
        NormKind::Bloch => Ok(bloch_norm(f, &rules.disc)),
        NormKind::BergmanP => bergman_norm_p(f, p, &rules.disc),
        NormKind::Bp => bp_norm_p(f, p, &rules.disc),
        NormKind::HardyP => hardy_norm_p(f, p, &default_hardy_radii(), run.grid.circle),
        NormKind::Lusin => lusin_functional(
            f,
            p,
            spec.t.unwrap_or(1.0),
            spec.aperture.unwrap_or(discnorm::fs_dual::DEFAULT_APERTURE),
            &rules.disc,
            run.grid.circle,
        ),
        NormKind::KwonAst => kwon_ast_rhs(f, p, beta()?, &rules.disc),
        NormKind::KwonBloch => kwon_bloch_functional(f, p, beta()?, &run.a_grid, bidisc()),
        NormKind::KwonBp => kwon_bp_functional(f, p, beta()?, bidisc()),
    }
}

fn cmd_norms(run: &Run) -> Result<usize, CliError> {
    let specs: Vec<NormSpec> = run.norms.iter().map(complete).collect();
    let config_err = |e: discnorm::Error| CliError::Config(e.to_string());
    let two_point = specs
        .iter()
        .any(|s| matches!(s.kind, NormKind::KwonBloch | NormKind::KwonBp));
    let rules = Rules {
        disc: run.grid.disc_rule().map_err(config_err)?,
        bidisc: if two_point {
            Some(run.grid.bidisc_rule().map_err(config_err)?)
        } else {
            None
        },
    };

    let mut table = Table::new(&["label", "norm", "params", "value", "grid", "error"]);
    let mut failed = 0;
    for entry in &run.corpus {
        for spec in &specs {
            let (value, grid, error) = match norm_value(&entry.function, spec, run, &rules) {
                Ok(v) => (Some(v.value), v.grid, None),
                Err(e) => {
                    failed += 1;
                    (None, String::new(), Some(e.to_string()))
                }
            };
            table.push(vec![
                Cell::text(&entry.label),
                Cell::text(spec.kind.name()),
                Cell::text(params_label(spec)),
                Cell::Num(value),
                Cell::text(grid),
                Cell::opt_text(error.as_deref()),
            ]);
        }
    }
    emit(run, &table, |out| write_json(out, &table))?;
    Ok(failed)
}

const EQUIVALENCE_COLUMNS: [&str; 12] = [
    "label",
    "theorem",
    "p",
    "alpha",
    "lhs_power_value",
    "test_dual",
    "searched_dual",
    "holder_floor",
    "ratio_test",
    "ratio_searched",
    "refine_delta",
    "error",
];

#[derive(Serialize)]
struct EquivalenceJson<'a> {
    theorem: &'a str,
    params: &'a DualParams,
    rows: &'a Table,
    summary: &'a discnorm::fs_dual::BandSummary,
    note: &'a str,
}

fn summary_row(
    report: &EquivalenceReport,
    label: &str,
    test: Option<f64>,
    searched: Option<f64>,
    delta: Option<f64>,
) -> Vec<Cell> {
    vec![
        Cell::text(label),
        Cell::text(report.theorem.name()),
        Cell::Num(Some(report.params.p)),
        Cell::Num(Some(report.params.alpha)),
        Cell::Num(None),
        Cell::Num(None),
        Cell::Num(None),
        Cell::Num(None),
        Cell::Num(test),
        Cell::Num(searched),
        Cell::Num(delta),
        Cell::text(""),
    ]
}

fn cmd_equivalence(run: &Run) -> Result<usize, CliError> {
    let params = run.params()?;
    let config = ReportConfig {
        grid: run.grid,
        a_grid: run.a_grid.clone(),
        search: run.search_configured.then(|| run.search.clone()),
        refine: run.refine,
    };
    let report = equivalence_report(&run.corpus, &params, &config).map_err(|e| CliError::Config(e.to_string()))?;

    let mut rows = Table::new(&EQUIVALENCE_COLUMNS);
    for r in &report.rows {
        rows.push(vec![
            Cell::text(&r.label),
            Cell::text(r.theorem.name()),
            Cell::Num(Some(r.p)),
            Cell::Num(Some(r.alpha)),
            Cell::Num(r.lhs_power_value),
            Cell::Num(r.test_dual),
            Cell::Num(r.searched_dual),
            Cell::Num(r.holder_floor),
            Cell::Num(r.ratio_test),
            Cell::Num(r.ratio_searched),
            Cell::Num(r.refine_delta),
            Cell::opt_text(r.error.as_deref()),
        ]);
    }
    let s = &report.summary;
    let mut csv = Table {
        columns: rows.columns.clone(),
        rows: rows.rows.clone(),
    };
    csv.push(summary_row(
        &report,
        "summary:min",
        s.min_ratio_test,
        s.min_ratio_searched,
        None,
    ));
    csv.push(summary_row(
        &report,
        "summary:max",
        s.max_ratio_test,
        s.max_ratio_searched,
        s.max_refine_delta,
    ));
    csv.push(summary_row(&report, "summary:band", s.band_test, s.band_searched, None));

    emit(run, &csv, |out| {
        write_json(
            out,
            &EquivalenceJson {
                theorem: report.theorem.name(),
                params: &report.params,
                rows: &rows,
                summary: s,
                note: &report.note,
            },
        )
    })?;
    Ok(s.failed_rows)
}

fn cmd_search(run: &Run) -> Result<usize, CliError> {
    let params = run.params()?;
    let rules = DualRules::with_a_grid(&run.grid, run.a_grid.clone()).map_err(|e| CliError::Config(e.to_string()))?;
    let mut table = Table::new(&[
        "label",
        "theorem",
        "p",
        "alpha",
        "lhs_power_value",
        "test_dual",
        "searched_dual",
        "holder_floor",
        "evaluations",
        "improvements",
        "best_u",
        "best_v",
        "best_s",
        "best_softening",
        "best_scale",
        "ordering_violated",
        "error",
    ]);
    let mut failed = 0;
    for entry in &run.corpus {
        let r = search_row(&entry.label, &entry.function, &params, &rules, &run.search);
        if r.error.is_some() {
            failed += 1;
        }
        table.push(vec![
            Cell::text(&r.label),
            Cell::text(r.theorem.name()),
            Cell::Num(Some(r.p)),
            Cell::Num(Some(r.alpha)),
            Cell::Num(r.lhs_power_value),
            Cell::Num(r.test_dual),
            Cell::Num(r.searched_dual),
            Cell::Num(r.holder_floor),
            Cell::Count(r.evaluations),
            Cell::Count(r.improvements),
            Cell::Num(r.best_u),
            Cell::Num(r.best_v),
            Cell::Num(r.best_s),
            Cell::Num(r.best_softening),
            Cell::Num(r.best_scale),
            Cell::Flag(r.ordering_violated),
            Cell::opt_text(r.error.as_deref()),
        ]);
    }
    emit(run, &table, |out| write_json(out, &table))?;
    Ok(failed)
}
