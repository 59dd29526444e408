//! `qwalk` command-line front end.
//!
//! Every invocation writes its artifacts into one run directory (`--out`)
//! together with a `manifest.json` listing them.

pub mod error;
pub mod input;
pub mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qwalk_core::limit::{compare_with_measure, limit_analysis, write_comparison_csv, LimitOptions};
use qwalk_core::model::ct_generator;
use qwalk_core::simulate::Evolution;
use qwalk_core::spectral::are_conjugate_systems;
use qwalk_core::symbol::verify_cayley_hamilton;
use qwalk_core::{
    fmt17, position_distribution, refine_system, track_bands_with, verify_unitary_symbol,
    EigenSystem, SymbolMatrix, TrackOptions,
};

use crate::error::{CliError, CliResult, Context};
use crate::input::{load_state, load_walk, LoadedWalk};
use crate::report::{AnalysisReport, RunDir, Settings, UnitaritySummary};

/// Grid and tolerance of the unitarity check in `check`.
const UNITARY_CHECK_GRID: usize = 256;
const UNITARY_CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "qwalk",
    version,
    about = "Spectral analysis of one-dimensional quantum walks"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Base grid size M (power of two, at least 64)
    #[arg(long, global = true, env = "QWALK_GRID", default_value_t = 1024)]
    pub grid: usize,

    /// Eigenvalue matching and clustering tolerance
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,

    /// Number of velocity bins for limit measures
    #[arg(long, global = true, default_value_t = qwalk_core::limit::DEFAULT_BINS)]
    pub bins: usize,

    /// Run directory for all emitted files
    #[arg(long, global = true, default_value = "qwalk-out")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Unitarity, decay class and Cayley-Hamilton residual of a walk
    Check {
        spec: PathBuf,
        /// Coefficient window |s| <= cutoff for the decay fit
        #[arg(long, default_value_t = 16)]
        cutoff: usize,
    },
    /// Tracked eigenvalue bands
    Bands { spec: PathBuf },
    /// Refined bands and the decomposability verdict
    Decompose { spec: PathBuf },
    /// Winding numbers of the refined bands
    Winding { spec: PathBuf },
    /// Whether the walk is the time-one map of a continuous-time walk
    CtCheck { spec: PathBuf },
    /// Position distributions of U^t xi
    Simulate {
        spec: PathBuf,
        #[arg(long)]
        init: PathBuf,
        /// Times, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<usize>,
    },
    /// Weak limit measure of X_t / t
    Limit {
        spec: PathBuf,
        #[arg(long)]
        init: PathBuf,
        /// Window used to classify the initial vector
        #[arg(long)]
        cutoff: Option<usize>,
    },
    /// Simulated rescaled moments against the limit measure
    Compare {
        spec: PathBuf,
        #[arg(long)]
        init: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "100,200,400,800")]
        t: Vec<usize>,
        /// Highest moment order
        #[arg(long, default_value_t = 4)]
        moments: u32,
    },
    /// Whether two walks have equivalent refined eigen systems
    Conjugate { first: PathBuf, second: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Bands { .. } => "bands",
            Command::Decompose { .. } => "decompose",
            Command::Winding { .. } => "winding",
            Command::CtCheck { .. } => "ct-check",
            Command::Simulate { .. } => "simulate",
            Command::Limit { .. } => "limit",
            Command::Compare { .. } => "compare",
            Command::Conjugate { .. } => "conjugate",
        }
    }

    fn inputs(&self) -> Vec<PathBuf> {
        match self {
            Command::Check { spec, .. }
            | Command::Bands { spec }
            | Command::Decompose { spec }
            | Command::Winding { spec }
            | Command::CtCheck { spec } => vec![spec.clone()],
            Command::Simulate { spec, init, .. }
            | Command::Limit { spec, init, .. }
            | Command::Compare { spec, init, .. } => {
                vec![spec.clone(), init.clone()]
            }
            Command::Conjugate { first, second } => vec![first.clone(), second.clone()],
        }
    }
}

/// Runs one subcommand, writing human-readable lines to `stdout`.
pub fn run<W: Write>(cli: &Cli, stdout: &mut W) -> CliResult<()> {
    let g = &cli.global;
    let inputs = cli.command.inputs();
    if inputs.iter().filter(|p| p.as_os_str() == "-").count() > 1 {
        return Err(CliError::Usage(
            "standard input can supply at most one document".into(),
        ));
    }
    let mut dir = RunDir::create(&g.out)?;
    let outcome = dispatch(&cli.command, g, &mut dir, stdout);
    // The manifest is written even when the analysis fails, so partial runs
    // stay inspectable.
    let manifest = dir.finish(
        cli.command.name(),
        inputs.iter().map(|p| p.display().to_string()).collect(),
        Settings {
            grid: g.grid,
            tol: g.tol,
            bins: g.bins,
        },
    );
    outcome?;
    manifest.map(|_| ())
}

fn say<W: Write>(out: &mut W, line: impl AsRef<str>) -> CliResult<()> {
    writeln!(out, "{}", line.as_ref()).map_err(|source| CliError::Io {
        path: "<stdout>".into(),
        source,
    })
}

fn track_opts(g: &GlobalOpts) -> TrackOptions {
    TrackOptions {
        base_grid: g.grid,
        tol: g.tol,
        ..TrackOptions::default()
    }
}

fn refined_system(walk: &LoadedWalk, g: &GlobalOpts) -> CliResult<EigenSystem> {
    let sys = track_bands_with(&walk.symbol, &track_opts(g))
        .context(format!("{}: band tracking", walk.id))?;
    refine_system(&sys, g.tol).context(format!("{}: refinement", walk.id))
}

fn write_system(dir: &mut RunDir, sys: &EigenSystem, stem: &str) -> CliResult<()> {
    dir.write_str(&format!("{stem}.json"), &sys.to_json_string())?;
    dir.write_with(&format!("{stem}.csv"), |f| sys.write_csv(f))?;
    Ok(())
}

fn band_lines<W: Write>(out: &mut W, sys: &EigenSystem) -> CliResult<()> {
    for (j, b) in sys.bands.iter().enumerate() {
        say(
            out,
            format!(
                "band {j}: d={} winding={} multiplicity={}",
                b.d, b.winding, b.multiplicity
            ),
        )?;
    }
    Ok(())
}

fn dispatch<W: Write>(
    cmd: &Command,
    g: &GlobalOpts,
    dir: &mut RunDir,
    out: &mut W,
) -> CliResult<()> {
    match cmd {
        Command::Check { spec, cutoff } => check(&load_walk(spec)?, *cutoff, dir, out),
        Command::Bands { spec } => {
            let walk = load_walk(spec)?;
            let sys = track_bands_with(&walk.symbol, &track_opts(g))
                .context(format!("{}: band tracking", walk.id))?;
            write_system(dir, &sys, "bands")?;
            band_lines(out, &sys)?;
            dir.write_report(AnalysisReport::new(walk.id).with_system(&sys))?;
            Ok(())
        }
        Command::Decompose { spec } => {
            let walk = load_walk(spec)?;
            let sys = refined_system(&walk, g)?;
            write_system(dir, &sys, "refined")?;
            say(
                out,
                if sys.is_decomposable() {
                    "decomposable"
                } else {
                    "indecomposable"
                },
            )?;
            band_lines(out, &sys)?;
            dir.write_report(AnalysisReport::new(walk.id).with_system(&sys))?;
            Ok(())
        }
        Command::Winding { spec } => {
            let walk = load_walk(spec)?;
            let sys = refined_system(&walk, g)?;
            let windings =
                qwalk_core::winding_numbers(&sys).context(format!("{}: winding", walk.id))?;
            let report = AnalysisReport::new(walk.id).with_system(&sys);
            let listed: Vec<String> = windings.iter().map(|w| w.to_string()).collect();
            say(out, format!("windings: [{}]", listed.join(", ")))?;
            say(
                out,
                format!("total: {}", report.total_winding.unwrap_or_default()),
            )?;
            dir.write_report(report)?;
            Ok(())
        }
        Command::CtCheck { spec } => ct_check(&load_walk(spec)?, g, dir, out),
        Command::Simulate { spec, init, t } => {
            let walk = load_walk(spec)?;
            let xi = load_state(init)?;
            let mut times = t.clone();
            times.sort_unstable();
            times.dedup();
            let mut ev = Evolution::new(&walk.symbol, &xi).context("simulate")?;
            for &time in &times {
                ev.advance_to(time);
                let dist = position_distribution(ev.state(), time);
                let name = format!("distribution_t{time}.csv");
                dir.write_with(&name, |f| dist.write_csv(f))?;
                say(
                    out,
                    format!(
                        "t={time} sites={} total={}",
                        dist.probs.len(),
                        fmt17(dist.total())
                    ),
                )?;
            }
            Ok(())
        }
        Command::Limit { spec, init, cutoff } => {
            let walk = load_walk(spec)?;
            let xi = load_state(init)?;
            let sys = refined_system(&walk, g)?;
            let opts = LimitOptions {
                bins: g.bins,
                tol: g.tol,
                cutoff: *cutoff,
            };
            let a = limit_analysis(&walk.symbol, &xi, &sys, &opts)
                .context(format!("{}: limit", walk.id))?;
            dir.write_str("limit.json", &a.measure.to_json_string())?;
            dir.write_with("limit.csv", |f| a.measure.write_csv(f))?;
            say(
                out,
                format!("total mass: {}", fmt17(a.measure.total_mass())),
            )?;
            for atom in &a.measure.atoms {
                say(
                    out,
                    format!("atom: x={} mass={}", fmt17(atom.x), fmt17(atom.mass)),
                )?;
            }
            dir.write_report(AnalysisReport::new(walk.id).with_system(&sys))?;
            Ok(())
        }
        Command::Compare {
            spec,
            init,
            t,
            moments,
        } => {
            let walk = load_walk(spec)?;
            let xi = load_state(init)?;
            let sys = refined_system(&walk, g)?;
            let opts = LimitOptions {
                bins: g.bins,
                tol: g.tol,
                cutoff: None,
            };
            let a = limit_analysis(&walk.symbol, &xi, &sys, &opts)
                .context(format!("{}: limit", walk.id))?;
            let rows = compare_with_measure(&walk.symbol, &xi, &a.measure, t, *moments)
                .context("compare")?;
            dir.write_with("compare.csv", |f| write_comparison_csv(&rows, f))?;
            let worst = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
            say(
                out,
                format!("rows: {} max deviation: {}", rows.len(), fmt17(worst)),
            )?;
            Ok(())
        }
        Command::Conjugate { first, second } => {
            let a = load_walk(first)?;
            let b = load_walk(second)?;
            let same = if a.symbol.dim() != b.symbol.dim() {
                false
            } else {
                let sa = refined_system(&a, g)?;
                let sb = refined_system(&b, g)?;
                are_conjugate_systems(&sa, &sb, g.tol)
            };
            dir.write_json(
                "conjugate.json",
                &serde_json::json!({ "first": a.id, "second": b.id, "conjugate": same }),
            )?;
            say(out, same.to_string())
        }
    }
}

fn check<W: Write>(
    walk: &LoadedWalk,
    cutoff: usize,
    dir: &mut RunDir,
    out: &mut W,
) -> CliResult<()> {
    let w: &SymbolMatrix = &walk.symbol;
    let unitary = verify_unitary_symbol(w, UNITARY_CHECK_GRID, UNITARY_CHECK_TOL);
    let decay = w
        .decay_class(cutoff)
        .context(format!("{}: decay", walk.id))?;
    let mut report = AnalysisReport::new(walk.id.clone());
    report.unitarity = Some(UnitaritySummary {
        pass: unitary.pass,
        max_deviation: unitary.max_deviation,
    });
    report.decay_class = Some(decay);
    report.cayley_hamilton_residual =
        Some(verify_cayley_hamilton(w, UNITARY_CHECK_GRID).context("cayley-hamilton")?);
    say(
        out,
        format!(
            "unitary: {} (max deviation {:.3e})",
            if unitary.pass { "pass" } else { "fail" },
            unitary.max_deviation
        ),
    )?;
    say(
        out,
        format!(
            "decay: {}",
            serde_json::to_string(&decay).expect("plain data")
        ),
    )?;
    say(
        out,
        format!(
            "cayley-hamilton residual: {:.3e}",
            report.cayley_hamilton_residual.unwrap_or_default()
        ),
    )?;
    dir.write_report(report)?;
    if unitary.pass {
        Ok(())
    } else {
        Err(qwalk_core::Error::NotUnitary {
            deviation: unitary.max_deviation,
        })
        .context(walk.id.clone())
    }
}

fn ct_check<W: Write>(
    walk: &LoadedWalk,
    g: &GlobalOpts,
    dir: &mut RunDir,
    out: &mut W,
) -> CliResult<()> {
    let sys = refined_system(walk, g)?;
    let report = AnalysisReport::new(walk.id.clone()).with_system(&sys);
    if let Some(b) = sys.bands.iter().find(|b| b.winding != 0) {
        say(out, "false")?;
        say(out, format!("reason: winding {}", b.winding))?;
    } else {
        for (j, b) in sys.bands.iter().enumerate() {
            let h =
                ct_generator(&b.samples).context(format!("{}: generator of band {j}", walk.id))?;
            dir.write_with(&format!("generator_band{j}.csv"), |f| h.write_csv(f))?;
        }
        say(out, "true")?;
    }
    dir.write_report(report)?;
    Ok(())
}
