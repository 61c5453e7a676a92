//! `swkb`: scenario runner and figure reproduction.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use swkb_core::exact::Precision;
use swkb_core::figure::{reproduce_figure, FigureId};
use swkb_core::scenario::{load, run_scenario, RunOptions};
use swkb_core::verify::{isospectrality_report, SolveOptions};

/// Maximum relative deviation accepted by `spectrum`.
const SPECTRUM_TOL: f64 = 1e-3;

#[derive(Parser)]
#[command(name = "swkb", version, about = "SWKB quantization integrals for deformed solvable potentials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the levels of each scenario and write CSV datasets.
    Run {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Append the sgn(err) 2^log10|err| column.
        #[arg(long)]
        rescaled: bool,
    },
    /// Parse and check a scenario file without running it.
    Validate { file: PathBuf },
    /// Compare the finite-difference spectrum of each deformed potential
    /// with the expected levels.
    Spectrum {
        file: PathBuf,
        /// Number of levels to compare.
        #[arg(long, default_value_t = 5)]
        levels: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Reproduce a figure dataset (`fig1`..`fig6`, or `all`).
    Figure {
        id: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecisionArg {
    Double,
    Dd,
    Auto,
}

#[derive(Args)]
struct Common {
    /// Override the last level of every sweep.
    #[arg(long)]
    n_max: Option<usize>,
    /// Override the quadrature tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Directory for CSV and manifest output.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum)]
    precision: Option<PrecisionArg>,
}

impl Common {
    fn run_options(&self) -> RunOptions {
        RunOptions {
            n_max: self.n_max,
            tol: self.tol,
            precision: self.precision.map(|p| match p {
                PrecisionArg::Double => Precision::Double,
                PrecisionArg::Dd => Precision::DoubleDouble,
                PrecisionArg::Auto => Precision::Auto,
            }),
        }
    }

    fn init_threads(&self) -> Result<(), String> {
        if let Some(n) = self.threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| e.to_string())?;
        }
        Ok(())
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_run(file: &Path, common: &Common, rescaled: bool) -> Result<bool, String> {
    common.init_threads()?;
    let scenarios = load(file).map_err(|e| e.to_string())?;
    let opts = common.run_options();
    let mut all_passed = true;
    for s in &scenarios {
        let run = run_scenario(s, &opts).map_err(|e| format!("{}: {e}", s.name))?;
        let out = common
            .out_dir
            .join(s.output.clone().unwrap_or_else(|| PathBuf::from(format!("{}.csv", s.name))));
        write_file(&out, &run.to_csv(rescaled))?;
        println!("{}", run.summary());
        for (n, e) in &run.failures {
            println!("  level {n} failed: {e}");
        }
        for c in &run.checks {
            println!("  {}: {} ({})", c.name, if c.passed { "pass" } else { "FAIL" }, c.detail);
        }
        all_passed &= run.passed();
    }
    Ok(all_passed)
}

fn cmd_validate(file: &Path) -> Result<bool, String> {
    let scenarios = load(file).map_err(|e| e.to_string())?;
    let mut ok = true;
    for s in &scenarios {
        match s.validate() {
            Ok(()) => println!("{}: ok", s.name),
            Err(e) => {
                println!("{}: {e}", s.name);
                ok = false;
            }
        }
    }
    Ok(ok)
}

fn cmd_spectrum(file: &Path, levels: usize, common: &Common) -> Result<bool, String> {
    common.init_threads()?;
    let scenarios = load(file).map_err(|e| e.to_string())?;
    let mut ok = true;
    for s in &scenarios {
        let sys = s.build().map_err(|e| format!("{}: {e}", s.name))?;
        let report = isospectrality_report(&sys, levels, &SolveOptions::default())
            .map_err(|e| format!("{}: {e}", s.name))?;
        let pass = report.max_deviation() < SPECTRUM_TOL;
        println!(
            "{}: max relative deviation {:.3e} over {} levels: {}",
            s.name,
            report.max_deviation(),
            levels,
            if pass { "PASS" } else { "FAIL" }
        );
        for l in &report.levels {
            println!("  {:>2}  {:>18.10}  {:>14.6}  {:.2e}", l.index, l.numeric, l.reference, l.deviation);
        }
        ok &= pass;
    }
    Ok(ok)
}

fn cmd_figure(id: &str, common: &Common) -> Result<bool, String> {
    common.init_threads()?;
    let ids: Vec<FigureId> = if id == "all" {
        FigureId::ALL.to_vec()
    } else {
        vec![id.parse().map_err(|e: swkb_core::Error| e.to_string())?]
    };
    let opts = common.run_options();
    let mut ok = true;
    for id in ids {
        let out = reproduce_figure(id, &common.out_dir, &opts).map_err(|e| e.to_string())?;
        for run in &out.runs {
            println!("{}", run.summary());
        }
        println!("{id}: {} (manifest {})", if out.passed { "PASS" } else { "FAIL" }, out.manifest.display());
        ok &= out.passed;
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { file, common, rescaled } => cmd_run(file, common, *rescaled),
        Command::Validate { file } => cmd_validate(file),
        Command::Spectrum { file, levels, common } => cmd_spectrum(file, *levels, common),
        Command::Figure { id, common } => cmd_figure(id, common),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
