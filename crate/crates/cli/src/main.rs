mod census;
mod fields;
mod input;
mod output;
mod plot;
mod profile;
mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};

use input::ElementArgs;
use profile::Profile;

const EXIT_CLASSIFICATION: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "sl2orbit", version, about = "Orbits of SL(2,R) on projectivized representations")]
struct Cli {
    /// Tolerance profile for numeric cross-checks.
    #[arg(long, global = true, env = "SL2ORBIT_PROFILE", value_enum, default_value = "standard")]
    profile: Profile,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a point and report its orbit, closure and regularity.
    Classify {
        #[command(flatten)]
        element: ElementArgs,
        /// Cross-check the symbolic verdicts numerically.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample points for the numeric checks.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Orbit counts of the irreducible representations.
    Census {
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        /// Compare against the golden table; nonzero exit on drift.
        #[arg(long)]
        golden: bool,
        /// Golden table to use instead of the shipped one.
        #[arg(long, requires = "golden")]
        golden_file: Option<PathBuf>,
    },
    /// Point cloud of an orbit and its border as CSV and SVG.
    Plot {
        #[command(flatten)]
        element: ElementArgs,
        #[arg(long, default_value_t = 2000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output prefix; writes `<prefix>.csv` and `<prefix>.svg`.
        #[arg(long)]
        out: PathBuf,
        /// Projection axes `i,j` in the coordinate vector.
        #[arg(long, value_delimiter = ',', num_args = 2)]
        axes: Option<Vec<usize>>,
    },
    /// Residual summary and trajectories of the generator fields.
    Fields {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 25)]
        nx: usize,
        #[arg(long, default_value_t = 9)]
        ny: usize,
        #[arg(long, default_value_t = 2.0)]
        y_max: f64,
        /// Flow time for the trajectories.
        #[arg(long, default_value_t = 1.0)]
        time: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Classification(anyhow::Error),
    Mismatch(String),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Other(e.into())
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => output::write_atomic(p, text.as_bytes())?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn classify(
    element: &ElementArgs,
    verify: bool,
    seed: u64,
    samples: usize,
    out: Option<&Path>,
    profile: Profile,
) -> Result<(), Failure> {
    let x = element.build().map_err(Failure::Classification)?;
    let mut rep = report::classify(&x, element.describe()).map_err(|e| Failure::Classification(e.into()))?;
    if verify {
        report::verify(&mut rep, &x, seed, samples, profile.tolerances());
    }
    let text = serde_json::to_string_pretty(&rep).map_err(anyhow::Error::from)? + "\n";
    emit(out, &text)?;
    if !rep.verified_ok() {
        let v = rep.verification.as_ref().expect("checked");
        return Err(Failure::Mismatch(v.mismatches.join("\n")));
    }
    Ok(())
}

fn run_census(n_max: usize, golden: bool, golden_file: Option<&Path>) -> Result<(), Failure> {
    let rows = census::compute(n_max);
    let table = census::render(&rows);
    io::stdout().write_all(table.as_bytes())?;
    if golden {
        let text = match golden_file {
            Some(p) => fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?,
            None => census::SHIPPED_GOLDEN.to_string(),
        };
        let expected = census::parse(&text)?;
        let drift = census::drift(&rows, &expected);
        if !drift.is_empty() {
            return Err(Failure::Mismatch(format!("census drift:\n{}", drift.join("\n"))));
        }
    }
    Ok(())
}

fn run_plot(
    element: &ElementArgs,
    count: usize,
    seed: u64,
    out: &Path,
    axes: Option<&[usize]>,
) -> Result<(), Failure> {
    let x = element.build().map_err(Failure::Classification)?;
    let cloud = plot::cloud(&x, count, seed).map_err(Failure::Classification)?;
    let axes = match axes {
        Some([i, j]) => (*i, *j),
        Some(_) => return Err(anyhow!("--axes takes two indices").into()),
        None => plot::default_axes(&x).map_err(Failure::Classification)?,
    };
    let title = format!("rho = {}, {}", x.rep(), element.describe());
    let svg = plot::svg(&cloud, axes, &title)?;
    let csv_path = out.with_extension("csv");
    let svg_path = out.with_extension("svg");
    output::write_all_atomic(&[(&csv_path, plot::csv(&cloud).into_bytes()), (&svg_path, svg.into_bytes())])?;
    Ok(())
}

fn run_fields(n: u32, nx: usize, ny: usize, y_max: f64, time: f64, step: f64, out: &Path) -> Result<(), Failure> {
    let result = fields::run(n, nx, ny, y_max, time, step)?;
    output::ensure_dir(out)?;
    let summary = serde_json::to_string_pretty(&result.summary).map_err(anyhow::Error::from)? + "\n";
    let mut files: Vec<(PathBuf, Vec<u8>)> = vec![
        (out.join(format!("fields_n{n}.json")), summary.into_bytes()),
        (out.join(format!("table_n{n}.csv")), result.table.into_bytes()),
    ];
    for (label, csv) in result.trajectories {
        files.push((out.join(format!("trajectory_{label}.csv")), csv.into_bytes()));
    }
    let refs: Vec<(&Path, Vec<u8>)> = files.iter().map(|(p, b)| (p.as_path(), b.clone())).collect();
    output::write_all_atomic(&refs)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify { element, verify, seed, samples, out } => {
            classify(element, *verify, *seed, *samples, out.as_deref(), cli.profile)
        }
        Command::Census { n_max, golden, golden_file } => run_census(*n_max, *golden, golden_file.as_deref()),
        Command::Plot { element, count, seed, out, axes } => run_plot(element, *count, *seed, out, axes.as_deref()),
        Command::Fields { n, nx, ny, y_max, time, step, out } => run_fields(*n, *nx, *ny, *y_max, *time, *step, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Classification(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_CLASSIFICATION)
        }
        Err(Failure::Mismatch(m)) => {
            eprintln!("verification mismatch:\n{m}");
            ExitCode::from(EXIT_MISMATCH)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
