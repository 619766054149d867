//! The command-line interface.
//!
//! Exit codes: 0 on success, 1 when a check fails, 2 on parse or semantic
//! errors, 3 on numerical failures. Diagnostics go to standard error.
//! The `ANDREEV_LOG` environment variable controls log verbosity.

use crate::angles::check_conditions;
use crate::construct::{construct, ConstructError, PipelineConfig};
use crate::io::{
    off_to_realization, parse_input, read_off, write_atomic, write_generators, write_off,
    InputDocument,
};
use crate::orbifolds::{lambert_volume, lobell_volume, monte_carlo_volume};
use crate::solver::{build_system, gauge_normalize, homotopy_deform, pick_gauge, Gauge};
use clap::{Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "andreev",
    about = "Construct compact hyperbolic polyhedra with prescribed non-obtuse dihedral angles",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an input document against the Andreev conditions.
    Check { input: PathBuf },
    /// Construct the polyhedron described by an input document.
    Build {
        input: PathBuf,
        /// Write the realized polyhedron in OFF layout.
        #[arg(long)]
        off: PathBuf,
        /// Write the face reflections as a generators file (requires all
        /// angles to be integer sub-multiples of pi).
        #[arg(long)]
        generators: Option<PathBuf>,
        /// Write the pipeline report.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Deform a previously built polyhedron (OFF) to new angles.
    Deform {
        /// OFF file of the starting polyhedron.
        start: PathBuf,
        /// Input document carrying the same combinatorics and the target
        /// angles.
        #[arg(long)]
        angles: PathBuf,
        #[arg(long)]
        off: PathBuf,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Closed-form and Monte Carlo volumes.
    #[command(subcommand)]
    Volume(VolumeCommand),
}

#[derive(Subcommand)]
enum VolumeCommand {
    /// Lambert cube volume for angles (pi/p, pi/q, pi/r).
    Lambert { p: u32, q: u32, r: u32 },
    /// Löbell orbifold volume.
    Lobell { n: usize },
    /// Monte Carlo volume of the polyhedron described by an input document.
    Montecarlo {
        input: PathBuf,
        #[arg(long, default_value_t = 10_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

const EXIT_OK: i32 = 0;
const EXIT_CHECK_FAILED: i32 = 1;
const EXIT_INPUT: i32 = 2;
const EXIT_NUMERICAL: i32 = 3;

fn load_document(path: &PathBuf) -> Result<InputDocument, i32> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("cannot read {}: {e}", path.display());
        EXIT_INPUT
    })?;
    parse_input(&text).map_err(|e| {
        eprintln!("{e}");
        EXIT_INPUT
    })
}

fn numerical_exit(e: &ConstructError) -> i32 {
    match e {
        ConstructError::Rejected { .. } | ConstructError::Angles(_) => EXIT_INPUT,
        _ => EXIT_NUMERICAL,
    }
}

fn config_from(doc: &InputDocument, k: Option<usize>, epsilon: Option<f64>, delta: Option<f64>) -> PipelineConfig {
    let mut cfg = PipelineConfig::default();
    if let Some(k) = doc.overrides.k {
        cfg.subdivisions = k;
    }
    if let Some(e) = &doc.overrides.epsilon {
        cfg.epsilon = e.value();
    }
    if let Some(d) = &doc.overrides.delta {
        cfg.delta = d.value();
    }
    if let Some(t) = doc.overrides.residual_tol {
        cfg.residual_tol = t;
    }
    if doc.overrides.least_squares.unwrap_or(false) {
        cfg.least_squares = true;
    }
    if let Some(k) = k {
        cfg.subdivisions = k;
    }
    if let Some(e) = epsilon {
        cfg.epsilon = e;
    }
    if let Some(d) = delta {
        cfg.delta = d;
    }
    cfg
}

/// Runs the CLI on explicit arguments and returns the process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes.
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Check { input } => {
            let doc = match load_document(&input) {
                Ok(doc) => doc,
                Err(code) => return code,
            };
            let complex = doc.complex().expect("validated by parse");
            match check_conditions(&complex, &doc.angles()) {
                Ok(report) if report.passed() => {
                    println!("all Andreev conditions hold");
                    EXIT_OK
                }
                Ok(report) => {
                    for v in &report.violations {
                        println!("{v}");
                    }
                    EXIT_CHECK_FAILED
                }
                Err(e) => {
                    eprintln!("{e}");
                    EXIT_INPUT
                }
            }
        }
        Command::Build { input, off, generators, report, k, epsilon, delta, seed: _ } => {
            let doc = match load_document(&input) {
                Ok(doc) => doc,
                Err(code) => return code,
            };
            let complex = doc.complex().expect("validated by parse");
            let cfg = config_from(&doc, k, epsilon, delta);
            let built = match construct(&complex, &doc.angles(), &cfg) {
                Ok(b) => b,
                Err(e) => {
                    eprintln!("{e}");
                    return numerical_exit(&e);
                }
            };
            let off_text = match write_off(&built.realization) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("{e}");
                    return EXIT_NUMERICAL;
                }
            };
            if let Err(e) = write_atomic(&off, &off_text) {
                eprintln!("cannot write {}: {e}", off.display());
                return EXIT_INPUT;
            }
            if let Some(path) = generators {
                match write_generators(&built.realization) {
                    Ok(text) => {
                        if let Err(e) = write_atomic(&path, &text) {
                            eprintln!("cannot write {}: {e}", path.display());
                            return EXIT_INPUT;
                        }
                    }
                    Err(e) => {
                        eprintln!("{e}");
                        return EXIT_CHECK_FAILED;
                    }
                }
            }
            if let Some(path) = report {
                if let Err(e) = write_atomic(&path, &built.report.to_text()) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return EXIT_INPUT;
                }
            }
            EXIT_OK
        }
        Command::Deform { start, angles, off, k } => {
            let text = match std::fs::read_to_string(&start) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("cannot read {}: {e}", start.display());
                    return EXIT_INPUT;
                }
            };
            let data = match read_off(&text) {
                Ok(d) => d,
                Err(e) => {
                    eprintln!("{e}");
                    return EXIT_INPUT;
                }
            };
            let doc = match load_document(&angles) {
                Ok(doc) => doc,
                Err(code) => return code,
            };
            let p = match off_to_realization(&data) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("{e}");
                    return EXIT_INPUT;
                }
            };
            let target_complex = doc.complex().expect("validated by parse");
            if p.complex() != &target_complex {
                eprintln!("angle document and OFF file describe different complexes");
                return EXIT_INPUT;
            }
            let cfg = config_from(&doc, k, None, None);
            let p = match gauge_normalize(&p) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("{e}");
                    return EXIT_NUMERICAL;
                }
            };
            let sys = build_system(p.complex(), Gauge::Anchored(pick_gauge(&p)));
            let deformed = homotopy_deform(
                &sys,
                &p,
                &doc.angles(),
                cfg.subdivisions,
                cfg.residual_tol,
                cfg.max_iter,
            );
            match deformed {
                Ok((q, _)) => {
                    let q = match gauge_normalize(&q) {
                        Ok(q) => q,
                        Err(e) => {
                            eprintln!("{e}");
                            return EXIT_NUMERICAL;
                        }
                    };
                    match write_off(&q) {
                        Ok(text) => {
                            if let Err(e) = write_atomic(&off, &text) {
                                eprintln!("cannot write {}: {e}", off.display());
                                return EXIT_INPUT;
                            }
                            EXIT_OK
                        }
                        Err(e) => {
                            eprintln!("{e}");
                            EXIT_NUMERICAL
                        }
                    }
                }
                Err(e) => {
                    eprintln!("{e}");
                    EXIT_NUMERICAL
                }
            }
        }
        Command::Volume(vc) => match vc {
            VolumeCommand::Lambert { p, q, r } => {
                if p < 3 || q < 3 || r < 3 {
                    eprintln!("Lambert cube orders must be at least 3");
                    return EXIT_INPUT;
                }
                let pi = std::f64::consts::PI;
                match lambert_volume(pi / p as f64, pi / q as f64, pi / r as f64) {
                    Ok(v) => {
                        println!("{:.10}", v.value);
                        EXIT_OK
                    }
                    Err(e) => {
                        eprintln!("{e}");
                        EXIT_INPUT
                    }
                }
            }
            VolumeCommand::Lobell { n } => match lobell_volume(n) {
                Ok(v) => {
                    println!("{:.10}", v.value);
                    EXIT_OK
                }
                Err(e) => {
                    eprintln!("{e}");
                    EXIT_INPUT
                }
            },
            VolumeCommand::Montecarlo { input, samples, seed } => {
                let doc = match load_document(&input) {
                    Ok(doc) => doc,
                    Err(code) => return code,
                };
                let complex = doc.complex().expect("validated by parse");
                let cfg = config_from(&doc, None, None, None);
                let built = match construct(&complex, &doc.angles(), &cfg) {
                    Ok(b) => b,
                    Err(e) => {
                        eprintln!("{e}");
                        return numerical_exit(&e);
                    }
                };
                let seed = doc.overrides.seed.unwrap_or(seed);
                match monte_carlo_volume(&built.realization, samples, seed) {
                    Ok(v) => {
                        println!(
                            "{:.6} +- {:.6} ({} samples, seed {seed})",
                            v.value,
                            v.stderr.unwrap_or(0.0),
                            samples
                        );
                        EXIT_OK
                    }
                    Err(e) => {
                        eprintln!("{e}");
                        EXIT_NUMERICAL
                    }
                }
            }
        },
    }
}
