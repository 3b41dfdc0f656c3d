//! `mlp`: exact dimensions and bases of spaces of modular local polynomials
//! attached to a discriminant.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mlp_core::{build_arrangement, compute_space, enumerate_forms, fraction_string, Weight};

use mlp_cli::cache::Cache;
use mlp_cli::error::CliError;
use mlp_cli::record::ResultRecord;
use mlp_cli::{svg, sweep};

#[derive(Parser)]
#[command(name = "mlp", version, about = "Modular local polynomials with geodesic exceptional sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the reduced forms whose geodesics cross the standard domain.
    Forms {
        #[arg(long)]
        disc: i64,
    },
    /// Dimension and basis as a JSON record on stdout.
    Dim {
        #[arg(long)]
        disc: i64,
        #[arg(long, allow_negative_numbers = true)]
        weight: i64,
        /// Also cut along every translate of the domain boundary.
        #[arg(long)]
        augmented: bool,
    },
    /// Write the JSON record with its basis to a file.
    Basis {
        #[arg(long)]
        disc: i64,
        #[arg(long, allow_negative_numbers = true)]
        weight: i64,
        #[arg(long)]
        json: PathBuf,
        #[arg(long)]
        augmented: bool,
    },
    /// Face summary with sample points, optionally drawn as SVG.
    Faces {
        #[arg(long)]
        disc: i64,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Significant digits of decimal output.
        #[arg(long, default_value_t = 12)]
        precision: usize,
    },
    /// Check both dimension theorems for every discriminant up to a bound.
    Sweep {
        #[arg(long)]
        max_disc: i64,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "0,-2,-4")]
        weights: Vec<i64>,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn record_text(disc: i64, k: i64, augmented: bool) -> Result<String, CliError> {
    Weight::new(k)?;
    mlp_core::geometry::validate_discriminant(disc)?;
    let cache = Cache::from_env();
    if let Some(text) = cache.as_ref().and_then(|c| c.load(disc, k, augmented)) {
        return Ok(text);
    }
    let text = ResultRecord::from_space(&compute_space(disc, k, augmented)?).to_json();
    if let Some(c) = &cache {
        c.store(disc, k, augmented, &text)?;
    }
    Ok(text)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Forms { disc } => {
            let forms: Vec<[i64; 3]> = enumerate_forms(disc)?
                .iter()
                .map(|q| q.to_i64().expect("small form"))
                .collect();
            println!("{}", serde_json::to_string(&forms).expect("serializable"));
        }
        Command::Dim { disc, weight, augmented } => {
            print!("{}", record_text(disc, weight, augmented)?);
        }
        Command::Basis { disc, weight, json, augmented } => {
            let text = record_text(disc, weight, augmented)?;
            fs::write(&json, text).map_err(|e| CliError::io(&json, e))?;
        }
        Command::Faces { disc, svg, precision } => {
            let fc = build_arrangement(disc)?;
            println!("rF={}", fc.face_count());
            println!("cuspFaces={}", fc.cusp_face_count());
            for face in &fc.faces {
                let (x, y) = face.sample.to_f64();
                println!(
                    "face {} sample x={} s={} ~ {} + {}i{}",
                    face.id,
                    fraction_string(&face.sample.x),
                    fraction_string(&face.sample.s),
                    svg::fmt_sig(x, precision),
                    svg::fmt_sig(y, precision),
                    if face.is_cusp { " cusp" } else { "" }
                );
            }
            if let Some(path) = svg {
                fs::write(&path, svg::render(&fc, precision)).map_err(|e| CliError::io(&path, e))?;
            }
        }
        Command::Sweep { max_disc, weights, jobs } => {
            let weights = weights
                .into_iter()
                .map(Weight::new)
                .collect::<Result<Vec<_>, _>>()?;
            let rows = sweep::run(max_disc, &weights, jobs)?;
            println!("{}", sweep::header());
            for row in &rows {
                println!("{}", sweep::format_row(row));
            }
            if let Some(bad) = rows.iter().find(|r| r.failure.is_some()) {
                return Err(CliError::Assertion {
                    disc: bad.record.disc,
                    k: bad.record.k,
                    what: bad.failure.clone().unwrap_or_default(),
                });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mlp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
