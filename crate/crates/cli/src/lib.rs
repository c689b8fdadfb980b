//! Command-line front end for `diamond-core`.
//!
//! [`run`] parses arguments and writes results to the given streams, so the
//! binary and the tests share one code path. Thread count follows
//! `RAYON_NUM_THREADS`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use diamond_core::{
    discrepancy_estimate, discrepancy_exact, draw_phases, generate_projective, generate_sphere,
    pairwise_log_energy, predictors, qgde_profile, solve_qgde, solve_qpgde, ConstantsTable,
    DiscrepancyResult, EnergyReport, Prediction, Profile, QgdeParams, Space, Vec3,
};

/// Largest N for which `sweep` computes pairwise energies.
pub const SWEEP_PAIRWISE_LIMIT: i64 = 20_000;
/// Random centers used by `discrepancy` and `sweep` unless told otherwise.
pub const DEFAULT_CENTERS: usize = 1000;

// Decorrelates the center stream from the phase stream of the same seed.
const CENTER_SEED_MIX: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Parser)]
#[command(name = "diamond", version, about = "Diamond ensembles on the sphere and the projective plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the quasioptimal parameters realizing N points.
    Solve {
        n: i64,
        #[arg(long, value_enum, default_value_t = SpaceArg::Sphere)]
        space: SpaceArg,
    },
    /// Generate one seeded point set and write it as CSV or JSON.
    Generate {
        #[arg(long)]
        n: i64,
        #[arg(long, value_enum, default_value_t = SpaceArg::Sphere)]
        space: SpaceArg,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print an energy report.
    Energy(EnergyArgs),
    /// Cap discrepancy of a seeded spherical point set.
    Discrepancy {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        seed: u64,
        /// Scan the full candidate family (small N only).
        #[arg(long, conflicts_with = "estimate")]
        exact: bool,
        /// Lower bound from K random centers plus the points themselves.
        #[arg(long, value_name = "K")]
        estimate: Option<usize>,
    },
    /// Tabulate energies over a range of N as CSV.
    Sweep(SweepArgs),
    /// Print the constants table.
    Constants,
}

#[derive(Debug, Args)]
struct EnergyArgs {
    #[arg(long)]
    n: i64,
    #[arg(long, value_enum, default_value_t = SpaceArg::Sphere)]
    space: SpaceArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Compute the exact energy of the seeded realization.
    #[arg(long)]
    pairwise: bool,
    /// Add the quadrature route to the expected energy.
    #[arg(long)]
    expected: bool,
    /// Add the full set of asymptotic predictors.
    #[arg(long)]
    predict: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long = "from")]
    n_from: i64,
    #[arg(long = "to")]
    n_to: i64,
    #[arg(long = "step", default_value_t = 1)]
    n_step: i64,
    #[arg(long, value_enum, default_value_t = SpaceArg::Sphere)]
    space: SpaceArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated subset of expected,pairwise,discrepancy,predictors.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "expected,predictors")]
    metrics: Vec<Metric>,
    /// Random centers for the discrepancy column.
    #[arg(long, default_value_t = DEFAULT_CENTERS)]
    centers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpaceArg {
    Sphere,
    Projective,
}

impl From<SpaceArg> for Space {
    fn from(s: SpaceArg) -> Space {
        match s {
            SpaceArg::Sphere => Space::Sphere,
            SpaceArg::Projective => Space::Projective,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Sweep columns beyond `N`, the parameters and the expected energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    /// Always included.
    Expected,
    Pairwise,
    Discrepancy,
    /// Always included.
    Predictors,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] diamond_core::Error),
    #[error("{0}")]
    Validation(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(_) | CliError::Validation(_) => 2,
            CliError::Io { .. } => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// JSON form of a generated point set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointFile {
    #[serde(rename = "N")]
    pub n: i64,
    #[serde(rename = "M")]
    pub big_m: usize,
    pub space: Space,
    pub params: QgdeParams,
    pub seed: u64,
    pub thetas: Vec<f64>,
    pub points: Vec<Vec3>,
}

/// One row of the CSV point format.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointRow {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Reads the CSV point format (`x,y,z` header, one point per row).
pub fn read_points_csv(r: impl io::Read) -> Result<Vec<Vec3>, csv::Error> {
    csv::Reader::from_reader(r)
        .deserialize::<PointRow>()
        .map(|row| row.map(|p| [p.x, p.y, p.z]))
        .collect()
}

#[derive(Debug, Serialize)]
struct EnergyOutput {
    seed: u64,
    #[serde(flatten)]
    report: EnergyReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    prediction: Option<Prediction>,
}

#[derive(Debug, Serialize)]
struct DiscrepancyOutput {
    #[serde(rename = "N")]
    n: i64,
    seed: u64,
    #[serde(flatten)]
    result: DiscrepancyResult,
}

/// Runs the command line `args` (program name first) and returns the exit
/// status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // help and version go to stdout with status 0
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Solve { n, space } => {
            let params = solve(n, space.into())?.0;
            print_json(out, &params)
        }
        Command::Generate { n, space, seed, format, out: path } => {
            let file = generate(n, space.into(), seed)?;
            let mut buf = Vec::new();
            match format {
                Format::Csv => write_points_csv(&mut buf, &file.points).map_err(|e| io_err("<buffer>", e))?,
                Format::Json => {
                    serde_json::to_writer(&mut buf, &file).map_err(|e| io_err("<buffer>", e.into()))?;
                    buf.push(b'\n');
                }
            }
            emit(out, path.as_deref(), &buf)
        }
        Command::Energy(a) => print_json(out, &energy(&a)?),
        Command::Discrepancy { n, seed, exact, estimate } => {
            let result = discrepancy(n, seed, exact, estimate.unwrap_or(DEFAULT_CENTERS))?;
            print_json(out, &DiscrepancyOutput { n, seed, result })
        }
        Command::Sweep(a) => {
            let buf = sweep(&a)?;
            emit(out, a.out.as_deref(), &buf)
        }
        Command::Constants => print_json(out, &ConstantsTable::new()),
    }
}

fn io_err(path: &str, source: io::Error) -> CliError {
    CliError::Io { path: path.to_string(), source }
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult<()> {
    let s = serde_json::to_string(value).map_err(|e| io_err("<stdout>", e.into()))?;
    writeln!(out, "{s}").map_err(|e| io_err("<stdout>", e))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match path {
        None => out.write_all(bytes).map_err(|e| io_err("<stdout>", e)),
        Some(p) => {
            let name = p.display().to_string();
            let f = File::create(p).map_err(|e| io_err(&name, e))?;
            let mut w = BufWriter::new(f);
            w.write_all(bytes).and_then(|_| w.flush()).map_err(|e| io_err(&name, e))
        }
    }
}

fn solve(n: i64, space: Space) -> CliResult<(QgdeParams, Profile)> {
    Ok(match space {
        Space::Sphere => {
            let params = solve_qgde(n)?;
            (params, qgde_profile(params)?)
        }
        Space::Projective => solve_qpgde(n)?,
    })
}

fn generate(n: i64, space: Space, seed: u64) -> CliResult<PointFile> {
    let (params, p) = solve(n, space)?;
    let (phases, points) = match space {
        Space::Sphere => {
            let phases = draw_phases(seed, 2 * p.m() - 1);
            let s = generate_sphere(&p, &phases)?;
            (phases, s.points)
        }
        Space::Projective => {
            let phases = draw_phases(seed, p.m());
            let s = generate_projective(&p, &phases)?;
            (phases, s.representatives)
        }
    };
    Ok(PointFile { n, big_m: p.m(), space, params, seed, thetas: phases.thetas, points })
}

fn write_points_csv(w: &mut impl Write, points: &[Vec3]) -> io::Result<()> {
    writeln!(w, "x,y,z")?;
    for p in points {
        writeln!(w, "{:.16e},{:.16e},{:.16e}", p[0], p[1], p[2])?;
    }
    Ok(())
}

fn energy(a: &EnergyArgs) -> CliResult<EnergyOutput> {
    let space = Space::from(a.space);
    let (_, p) = solve(a.n, space)?;
    let report = match space {
        Space::Sphere => {
            let s = a.pairwise.then(|| generate_sphere(&p, &draw_phases(a.seed, 2 * p.m() - 1))).transpose()?;
            EnergyReport::sphere(&p, s.as_ref(), a.expected)?
        }
        Space::Projective => {
            let s = a.pairwise.then(|| generate_projective(&p, &draw_phases(a.seed, p.m()))).transpose()?;
            EnergyReport::projective(&p, s.as_ref(), a.expected)?
        }
    };
    let prediction = a.predict.then(|| predictors(a.n, space)).transpose()?;
    Ok(EnergyOutput { seed: a.seed, report, prediction })
}

fn discrepancy(n: i64, seed: u64, exact: bool, centers: usize) -> CliResult<DiscrepancyResult> {
    let (_, p) = solve(n, Space::Sphere)?;
    let s = generate_sphere(&p, &draw_phases(seed, 2 * p.m() - 1))?;
    Ok(if exact {
        discrepancy_exact(&s)?
    } else {
        discrepancy_estimate(&s, centers, seed ^ CENTER_SEED_MIX)?
    })
}

fn sweep(a: &SweepArgs) -> CliResult<Vec<u8>> {
    let space = Space::from(a.space);
    let min = match space {
        Space::Sphere => diamond_core::MIN_SPHERE_N,
        Space::Projective => diamond_core::MIN_PROJECTIVE_N,
    };
    if a.n_from < min {
        return Err(CliError::Validation(format!("--from must be at least {min} for this space, got {}", a.n_from)));
    }
    if a.n_step < 1 {
        return Err(CliError::Validation(format!("--step must be at least 1, got {}", a.n_step)));
    }
    if a.n_to < a.n_from {
        return Err(CliError::Validation(format!("--to ({}) is below --from ({})", a.n_to, a.n_from)));
    }
    let pairwise = a.metrics.contains(&Metric::Pairwise);
    let disc = a.metrics.contains(&Metric::Discrepancy);
    if disc && space == Space::Projective {
        return Err(CliError::Validation("discrepancy is only defined on the sphere".into()));
    }

    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![
        "N", "m", "gamma", "delta_m", "epsilon", "expected_closed", "predicted_upper", "predicted_lower",
        "residual_per_point",
    ];
    if pairwise {
        header.push("pairwise");
    }
    if disc {
        header.push("discrepancy");
    }
    let csv_err = |e: csv::Error| io_err("<buffer>", e.into());
    w.write_record(&header).map_err(csv_err)?;

    let mut n = a.n_from;
    while n <= a.n_to {
        let (params, p) = solve(n, space)?;
        let report = match space {
            Space::Sphere => EnergyReport::sphere(&p, None, false)?,
            Space::Projective => EnergyReport::projective(&p, None, false)?,
        };
        let pred = predictors(n, space)?;
        let mut row = vec![
            n.to_string(),
            params.m.to_string(),
            params.gamma.to_string(),
            params.delta_m.to_string(),
            params.epsilon.to_string(),
            fmt(report.expected_closed),
            fmt(pred.upper),
            fmt(pred.lower),
            fmt(report.residual_per_point),
        ];
        if pairwise {
            // left empty above the O(N²) guard
            row.push(if n <= SWEEP_PAIRWISE_LIMIT {
                let e = match space {
                    Space::Sphere => pairwise_log_energy(&generate_sphere(&p, &draw_phases(a.seed, 2 * p.m() - 1))?)?,
                    Space::Projective => diamond_core::pairwise_projective_energy(&generate_projective(
                        &p,
                        &draw_phases(a.seed, p.m()),
                    )?)?,
                };
                fmt(e)
            } else {
                String::new()
            });
        }
        if disc {
            row.push(fmt(discrepancy(n, a.seed, false, a.centers)?.value));
        }
        w.write_record(&row).map_err(csv_err)?;
        n = match n.checked_add(a.n_step) {
            Some(next) => next,
            None => break,
        };
    }
    w.into_inner().map_err(|e| io_err("<buffer>", e.into_error()))
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}
