//! `krein-photon`: evaluate, verify and integrate the single-photon Krein-space
//! objects from the command line.
//!
//! Every subcommand writes one JSON document (schema 1) to stdout or to
//! `--out FILE`. Timing goes to stderr so the documents stay reproducible.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 unparsable input,
//! 3 domain error (pole, r ≤ 0, point off the cone), 4 accuracy violation in
//! `--strict` mode.

mod commands;
mod grammar;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use krein_photon::field::QuadratureConfig;
use krein_photon::sl2c::FourVector;
use krein_photon::verify::{Suite, VerifyOptions};

use commands::{Document, EvalInputs, EvalObject, Failure, ProductKind, ProductOptions, TransformOptions};

/// Worker count for the parallel quadrature; unset means all cores.
const THREADS_VAR: &str = "KREIN_PHOTON_THREADS";

#[derive(Parser)]
#[command(name = "krein-photon", version, about = "Krein-space photon toolkit")]
struct Cli {
    /// Write the JSON document here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a closed-form object at a cone point and/or group element.
    Eval {
        #[arg(value_enum)]
        object: EvalObject,
        /// Cone point as t,x,y,z.
        #[arg(long, value_parser = grammar::four_vector, allow_hyphen_values = true)]
        p: Option<FourVector>,
        /// Group element, e.g. rot23:0.7 or boost03:1*rot12:0.3.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        /// Significant digits in the output.
        #[arg(long, default_value_t = 15, value_parser = clap::value_parser!(u32).range(1..=17))]
        precision: u32,
    },
    /// Run a seeded verification suite.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Override the per-suite sample count.
        #[arg(long)]
        samples: Option<usize>,
        /// Multiply every tolerance by this factor.
        #[arg(long, default_value_t = 1.0, value_parser = parse_scale)]
        tolerance_scale: f64,
    },
    /// Inner product of two packets given as JSON files.
    Product {
        #[arg(value_enum)]
        kind: ProductKind,
        a: PathBuf,
        b: PathBuf,
        /// Node counts n_r,n_polar,n_azimuth.
        #[arg(long, value_parser = grammar::quadrature)]
        quadrature: Option<QuadratureConfig>,
        /// Time slice of the position-space product.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        time: f64,
        /// Half width of the position grid.
        #[arg(long)]
        half_width: Option<f64>,
        /// Spacing of the position grid.
        #[arg(long)]
        spacing: Option<f64>,
        /// Also compare the momentum and position Krein products.
        #[arg(long)]
        cross_check: bool,
        /// Exit with code 4 when an accuracy indicator is out of bounds.
        #[arg(long)]
        strict: bool,
    },
    /// Position-space field of a packet at spacetime points.
    Transform {
        packet: PathBuf,
        /// Spacetime point t,x,y,z; repeatable.
        #[arg(long = "x", value_parser = grammar::four_vector, allow_hyphen_values = true)]
        x: Vec<FourVector>,
        /// Act with this group element first.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        /// Act with this translation first, as t,x,y,z.
        #[arg(long, value_parser = grammar::four_vector, allow_hyphen_values = true)]
        translate: Option<FourVector>,
        #[arg(long, value_parser = grammar::quadrature)]
        quadrature: Option<QuadratureConfig>,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse::<Suite>()
        .map_err(|_| format!("unknown suite `{s}` (sl2c, cone, krein, rep, transversal, field, all)"))
}

fn parse_scale(s: &str) -> Result<f64, String> {
    s.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite() && *x >= 0.0)
        .ok_or_else(|| format!("`{s}` is not a non-negative number"))
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(text) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Failure::parse(format!("{THREADS_VAR} must be a positive integer, got `{text}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::parse(format!("cannot start {n} worker threads: {e}")))
}

fn parse_alpha(text: &Option<String>) -> Result<Option<(&str, grammar::ParsedElement)>, Failure> {
    text.as_deref()
        .map(|t| grammar::group_element(t).map(|g| (t, g)).map_err(Failure::parse))
        .transpose()
}

fn execute(cli: &Cli) -> Result<Document, Failure> {
    configure_threads()?;
    Ok(match &cli.command {
        Command::Eval {
            object,
            p,
            alpha,
            precision,
        } => {
            let mut body = commands::eval(
                *object,
                EvalInputs {
                    p: *p,
                    alpha: parse_alpha(alpha)?,
                },
            )?;
            commands::round_numbers(&mut body, *precision as usize);
            body.into()
        }
        Command::Verify {
            suite,
            seed,
            samples,
            tolerance_scale,
        } => commands::verify(
            *suite,
            VerifyOptions {
                seed: *seed,
                samples: *samples,
                tolerance_scale: *tolerance_scale,
            },
        )?,
        Command::Product {
            kind,
            a,
            b,
            quadrature,
            time,
            half_width,
            spacing,
            cross_check,
            strict,
        } => commands::product(
            *kind,
            a,
            b,
            &ProductOptions {
                quadrature: *quadrature,
                time: *time,
                half_width: *half_width,
                spacing: *spacing,
                cross_check: *cross_check,
                strict: *strict,
            },
        )?,
        Command::Transform {
            packet,
            x,
            alpha,
            translate,
            quadrature,
        } => commands::transform(
            packet,
            &TransformOptions {
                points: x.clone(),
                alpha: parse_alpha(alpha)?,
                translation: *translate,
                quadrature: *quadrature,
            },
        )?
        .into(),
    })
}

fn emit(doc: &serde_json::Value, out: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(doc).expect("documents always serialize");
    text.push('\n');
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::parse(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::parse(format!("cannot write to stdout: {e}")))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = execute(&cli).and_then(|doc| {
        emit(&doc.body, cli.out.as_deref())?;
        doc.failure.map_or(Ok(()), Err)
    });
    eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
