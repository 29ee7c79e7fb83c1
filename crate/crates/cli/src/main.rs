//! `smallball`: build gallery measures, evaluate small-ball masses, classify
//! candidate modes and reproduce the gallery's counterexamples.
//!
//! Exit codes: 0 on success whatever the verdict, 1 on I/O or precondition
//! errors, 2 on unknown gallery ids and unparseable command lines.

mod config;
mod error;
mod oracle_cmd;
mod output;
mod reproduce;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use smallball::gallery::GALLERY_IDS;
use smallball::{Analysis, Ball, PNorm, Point, Verdict};

use config::{load_measure, GalleryParams, MeasureArgs, RunArgs};
use error::{CliError, Result};
use output::emit;

#[derive(Parser)]
#[command(name = "smallball", version, about = "Small-ball masses and mode classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List or build the gallery constructions.
    Gallery {
        #[command(subcommand)]
        action: GalleryAction,
    },
    /// Print the mass of an open ball.
    Mass {
        #[command(flatten)]
        source: MeasureArgs,
        /// Ball centre, `x` or `x,y`.
        #[arg(long, allow_hyphen_values = true)]
        center: Point,
        /// Ball radius.
        #[arg(long)]
        r: f64,
        /// Ball shape: l1, l2 or linf.
        #[arg(long, default_value = "l2")]
        norm: PNorm,
    },
    /// Classify a candidate point; prints the verdict as JSON.
    Classify {
        #[arg(value_enum)]
        mode: Mode,
        #[command(flatten)]
        run: Box<RunArgs>,
    },
    /// Regenerate the report of a gallery counterexample.
    Reproduce {
        #[arg(value_enum)]
        example: reproduce::Report,
        /// Directory for the report files.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Write CSV tables (default: CSV and SVG).
        #[arg(long)]
        csv: bool,
        /// Write SVG plots (default: CSV and SVG).
        #[arg(long)]
        svg: bool,
    },
    /// Cross-check exact ball masses against the brute-force oracles.
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
}

#[derive(Subcommand)]
enum GalleryAction {
    /// List the gallery ids.
    List,
    /// Write a gallery measure as JSON.
    Build {
        id: String,
        #[command(flatten)]
        params: GalleryParams,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OracleAction {
    /// Emit a CSV comparing exact, Monte Carlo and quadrature masses.
    Compare(oracle_cmd::CompareArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Weak,
    Strong,
    Estrong,
    Local,
}

fn gallery_blurb(id: &str) -> &'static str {
    match id {
        "crossed-squares" => "crosses framed by squares: countably many weak modes, no E-strong mode",
        "no-mode" => "step density with ever narrower, taller bumps: no strong mode",
        "k-dependence" => "two crosses whose ranking depends on the ball shape",
        "two-line-gaussian" => "Gaussian mass on two parallel lines, origin off the support",
        _ => "",
    }
}

fn classify(mode: Mode, args: &RunArgs) -> Result<()> {
    let run = args.resolve()?;
    let analysis = Analysis::new(run.measure(), run.norm, run.schedule.clone()).with_tol(run.tol)?;
    let verdict: Verdict = match mode {
        Mode::Weak => analysis.check_weak_mode(&run.u, &run.e_sample()?)?,
        Mode::Estrong => analysis.check_e_strong_mode(&run.u, &run.e_sample()?)?,
        Mode::Strong => analysis.check_strong_mode(&run.u, &run.search_grid()?)?,
        Mode::Local => {
            let v = run
                .local
                .ok_or_else(|| CliError::Usage("local modes need --v-radius".into()))?;
            analysis.check_local_mode(&run.u, v, &run.search_grid()?)?
        }
    };
    let trace_path = run.output.trace.as_deref();
    if let Some(path) = trace_path {
        output::write_atomic(path, &verdict.evidence[0].to_csv())?;
    }
    let json = verdict.to_json(trace_path.map(|p| p.to_str().unwrap_or_default()))? + "\n";
    if let Some(path) = &run.output.verdict {
        output::write_atomic(path, &json)?;
    }
    if let Some(path) = &run.output.svg {
        let series: Vec<svg::Series> = verdict
            .evidence
            .iter()
            .map(|t| svg::Series {
                name: match &t.numerator {
                    smallball::Numerator::Point(z) => format!("f({z}, r) / f(u, r)"),
                    smallball::Numerator::SupOverSet { name, size } => format!("sup over {name} ({size}) / f(u, r)"),
                },
                points: t.rows.iter().map(|row| (row.r, row.ratio)).collect(),
            })
            .collect();
        let title = format!("{mode:?} mode check at u = {}: {}", run.u, verdict.status);
        output::write_atomic(path, &svg::ratio_chart(&title, &series))?;
    }
    print!("{json}");
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gallery { action } => match action {
            GalleryAction::List => {
                for id in GALLERY_IDS {
                    println!("{id:<18} {}", gallery_blurb(id));
                }
                Ok(())
            }
            GalleryAction::Build { id, params, out } => {
                let m = params.example(&id)?.build()?;
                emit(out.as_deref(), &(m.to_json()? + "\n"))
            }
        },
        Command::Mass {
            source,
            center,
            r,
            norm,
        } => {
            let loaded = load_measure(source.measure.as_deref(), source.gallery.as_deref(), &source.params)?;
            let mass = loaded.measure.ball_mass(&Ball::new(center, r, norm)?)?;
            println!("{mass}");
            Ok(())
        }
        Command::Classify { mode, run } => classify(mode, &run),
        Command::Reproduce {
            example,
            out_dir,
            csv,
            svg,
        } => {
            let (csv, svg) = if csv || svg { (csv, svg) } else { (true, true) };
            reproduce::run(example, &out_dir, csv, svg)
        }
        Command::Oracle {
            action: OracleAction::Compare(args),
        } => oracle_cmd::compare(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
