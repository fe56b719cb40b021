//! Command-line interface. Reports go to stdout as JSON; diagnostics to
//! stderr. Exit codes: 0 helix, 3 non-helix, 4 constant-invariant non-helix,
//! 10 input/spec errors, 11 domain errors, 12 numerical failures.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::analysis::{detect_helix_with_plot, save_plot_csv, Tolerances, Verdict};
use crate::curve::{load_curve, Curve};
use crate::error::Error;
use crate::presets::{build_curve, load_preset_spec, load_profile_spec, DEFAULT_H, PRESETS};
use crate::synthesis::{synthesize, SynthesisOptions};
use crate::verify::{run_all, VerifyConfig};

#[derive(Parser)]
#[command(name = "helix4", version, about = "Helix detection and synthesis for spacelike curves in Minkowski 4-space")]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Analyze a curve (CSV sample file, preset spec JSON, or --preset) and
    /// print a helix report.
    Analyze {
        /// Curve CSV (header s,x1,x2,x3,x4) or preset spec JSON.
        input: Option<PathBuf>,
        /// Use a built-in preset instead of an input file.
        #[arg(long, conflicts_with = "input")]
        preset: Option<String>,
        /// Sampling step for reconstruction.
        #[arg(long, default_value_t = DEFAULT_H)]
        h: f64,
        /// Override the preset's parameter range.
        #[arg(long)]
        s_max: Option<f64>,
        /// Invariant-constancy tolerance.
        #[arg(long = "tol-H")]
        tol_h: Option<f64>,
        /// Axis-constancy tolerance base.
        #[arg(long = "tol-U")]
        tol_u: Option<f64>,
        /// Write per-sample diagnostics to a CSV file.
        #[arg(long)]
        plot_csv: Option<PathBuf>,
        /// Write the JSON report to a file as well as stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Integrate a curvature profile spec JSON into a guaranteed helix (or
    /// control curve) and write the samples as CSV.
    Synthesize {
        /// Profile spec JSON.
        spec: PathBuf,
        /// Output curve CSV path.
        #[arg(long, short)]
        output: PathBuf,
        /// Also write the carried frame field alongside (CSV).
        #[arg(long)]
        frames: Option<PathBuf>,
    },
    /// Run the built-in acceptance criteria and print a summary.
    Verify {
        /// Run only criteria whose name contains this substring.
        #[arg(long)]
        only: Option<String>,
        /// Override the sampled-path invariant tolerance.
        #[arg(long = "tol-H")]
        tol_h: Option<f64>,
        /// Override the sampled-path axis tolerance base.
        #[arg(long = "tol-U")]
        tol_u: Option<f64>,
        /// Write the JSON summary to a file as well as stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// List the built-in presets.
    Presets,
}

fn error_exit(err: &Error) -> u8 {
    match err {
        Error::Io(_)
        | Error::Json(_)
        | Error::Parse { .. }
        | Error::NonMonotoneParameter { .. }
        | Error::DimensionMismatch { .. }
        | Error::UnknownPreset(_)
        | Error::InvalidSpec(_) => 10,
        Error::NonFiniteState { .. } | Error::IllConditioned { .. } => 12,
        _ => 11,
    }
}

pub fn run() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(error_exit(&err))
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Commands::Analyze { input, preset, h, s_max, tol_h, tol_u, plot_csv, report } => {
            let curve = match (&preset, &input) {
                (Some(name), _) => build_curve(name, s_max, Some(h))?,
                (None, Some(path)) => load_input(path)?,
                (None, None) => {
                    return Err(Error::InvalidSpec(
                        "provide an input file or --preset".to_string(),
                    ))
                }
            };
            let mut tol = Tolerances::sampled();
            if let Some(v) = tol_h {
                tol.tol_h = v;
            }
            if let Some(v) = tol_u {
                tol.tol_u = v;
            }
            let (rep, plot) = detect_helix_with_plot(&curve, h, &tol)?;
            let json = serde_json::to_string_pretty(&rep).expect("report serializes");
            println!("{json}");
            if let Some(path) = report {
                std::fs::write(&path, &json)?;
            }
            if let Some(path) = plot_csv {
                save_plot_csv(&plot, &path)?;
            }
            Ok(match rep.verdict {
                Verdict::Helix => 0,
                Verdict::NonHelix => 3,
                Verdict::InvariantConstantNonHelix => 4,
            })
        }
        Commands::Synthesize { spec, output, frames } => {
            let profile = load_profile_spec(&spec)?;
            let syn = synthesize(&profile, crate::minkowski::Vec4::ZERO, &SynthesisOptions::default())?;
            crate::curve::save_curve(&syn.curve, &output)?;
            if let Some(path) = frames {
                crate::frenet::save_frame_field(&syn.field, &path)?;
            }
            eprintln!(
                "synthesized {} samples, carried Gram drift {:.3e}",
                syn.curve.points.len(),
                syn.gram_drift
            );
            Ok(0)
        }
        Commands::Verify { only, tol_h, tol_u, report } => {
            let cfg = VerifyConfig {
                only,
                tol_h,
                tol_u,
                bin: std::env::current_exe().ok(),
            };
            let summary = run_all(&cfg);
            for c in &summary.criteria {
                eprintln!(
                    "criterion {:2} {:<24} {}{}",
                    c.id,
                    c.name,
                    if c.passed { "pass" } else { "FAIL" },
                    if c.passed { String::new() } else { format!(": {}", c.details) }
                );
            }
            let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
            println!("{json}");
            if let Some(path) = report {
                std::fs::write(&path, &json)?;
            }
            Ok(if summary.all_passed { 0 } else { 1 })
        }
        Commands::Presets => {
            for p in PRESETS {
                println!("{:<28} s_max={:<5} {}", p.name, p.s_max, p.description);
            }
            Ok(0)
        }
    }
}

/// Load either a curve CSV or a preset spec JSON, by extension.
fn load_input(path: &PathBuf) -> Result<Curve, Error> {
    if path.extension().and_then(|e| e.to_str()) == Some("json") {
        load_preset_spec(path)
    } else {
        Ok(Curve::Sampled(load_curve(path)?))
    }
}
