//! `qmixpar` — build two-qubit mixed states from their fifteen coordinates,
//! measure entanglement, sweep parameter grids, and run the verification
//! suites.
//!
//! Exit codes: 0 success, 2 usage or schema error, 3 verification failure,
//! 4 internal invariant violation.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qmixpar_core::entangle::{
    part_concurrences, report_oracle, slice_c21_zero_mu23, slice_s21_zero, EntanglementReport,
    PartConcurrences,
};
use qmixpar_core::geometry::werner_mu_report;
use qmixpar_core::linalg::CMat;
use qmixpar_core::parametrize::{
    closed_form_density, closed_form_density_computational, density_from_coords, CoordsFile,
    TwoQubitCoords,
};
use qmixpar_core::verify::{run_all, run_suite};
use qmixpar_core::Error as CoreError;

mod sweep;

const EXIT_USAGE: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

/// Disagreement budget between the two construction routes.
const ROUTE_TOL: f64 = 1e-10;

#[derive(Debug)]
pub enum CliError {
    /// Bad input: malformed JSON, schema violation, out-of-range value.
    Usage(String),
    /// A verification suite failed.
    Verify,
    /// The library contradicted itself; a bug, not a user problem.
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Verify => EXIT_VERIFY,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::InvariantViolation(_)
            | CoreError::NoConvergence { .. }
            | CoreError::PptNotViolated => CliError::Internal(err.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "qmixpar",
    version,
    about = "Two-qubit mixed states from fifteen coordinates: construction, \
             entanglement measures, sweeps and verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the density matrix from a coordinate JSON file.
    Build {
        /// Coordinate JSON file (omitted keys default to the Bell projector).
        #[arg(long)]
        input: PathBuf,
        /// Write the JSON result here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Basis of the printed matrix.
        #[arg(long, value_enum, default_value_t = Basis::Computational)]
        basis: Basis,
        /// Interpret the angle coordinates of the input as degrees.
        #[arg(long)]
        degrees: bool,
    },
    /// Entanglement report plus the pure-state concurrences.
    Measure {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        degrees: bool,
    },
    /// Evaluate quantities over a coordinate grid, writing CSV.
    Sweep {
        /// Sweep specification JSON.
        #[arg(long)]
        spec: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; the output is identical for any value.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        degrees: bool,
    },
    /// Run verification suites (closed forms against the eigensolver oracle).
    Verify {
        /// Suite name, or "all".
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Override the per-suite sample count.
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Basis {
    Computational,
    Bold,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build {
            input,
            out,
            basis,
            degrees,
        } => cmd_build(&input, out.as_deref(), basis, degrees),
        Command::Measure {
            input,
            out,
            degrees,
        } => cmd_measure(&input, out.as_deref(), degrees),
        Command::Sweep {
            spec,
            out,
            jobs,
            degrees,
        } => cmd_sweep(&spec, &out, jobs, degrees),
        Command::Verify {
            suite,
            seed,
            samples,
        } => cmd_verify(&suite, seed, samples),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            match &err {
                CliError::Usage(msg) => eprintln!("error: {msg}"),
                CliError::Verify => eprintln!("error: verification failed"),
                CliError::Internal(msg) => eprintln!("internal error: {msg}"),
            }
            ExitCode::from(err.code())
        }
    }
}

fn read_to_string(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn to_radians(file: &mut CoordsFile) {
    for key in CoordsFile::ANGLE_KEYS {
        let v = file.get(key).expect("angle keys are valid");
        file.set(key, v.to_radians());
    }
}

fn load_coords(path: &Path, degrees: bool) -> Result<(CoordsFile, TwoQubitCoords), CliError> {
    let text = read_to_string(path)?;
    let mut file: CoordsFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    if degrees {
        to_radians(&mut file);
    }
    let coords = file.build()?;
    Ok((file, coords))
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn matrix_json(m: &CMat) -> serde_json::Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect();
    json!(rows)
}

fn cmd_build(
    input: &Path,
    out: Option<&Path>,
    basis: Basis,
    degrees: bool,
) -> Result<(), CliError> {
    let (_, coords) = load_coords(input, degrees)?;

    // Two routes: eigenensemble assembly and the closed-form entries.
    // They must agree or the build is refused.
    let via_ensemble = density_from_coords(&coords);
    let via_closed_form = closed_form_density_computational(&coords);
    let route_delta = via_ensemble.max_abs_diff(&via_closed_form);
    if route_delta > ROUTE_TOL {
        return Err(CliError::Internal(format!(
            "construction routes disagree by {route_delta:.3e}"
        )));
    }

    let rho = match basis {
        Basis::Computational => via_ensemble,
        Basis::Bold => closed_form_density(&coords),
    };
    let doc = json!({
        "basis": match basis { Basis::Computational => "computational", Basis::Bold => "bold" },
        "trace": rho.trace().re,
        "hermiticity_error": rho.hermiticity_deviation(),
        "route_delta": route_delta,
        "matrix": matrix_json(&rho),
    });
    emit(
        out,
        &serde_json::to_string_pretty(&doc).expect("serializable"),
    )
}

fn report_json(rep: &EntanglementReport) -> serde_json::Value {
    json!({
        "branch": rep.branch.name(),
        "ppt_satisfied": rep.ppt_satisfied,
        "negativity": rep.negativity,
        "concurrence": rep.concurrence,
    })
}

fn parts_json(parts: &PartConcurrences) -> serde_json::Value {
    json!({
        "c_p": parts.c_p,
        "c_psi1": parts.c_psi1,
        "c_psi2": parts.c_psi2,
        "c_psi3": parts.c_psi3,
        "c_e1": parts.c_e1,
        "c_e2": parts.c_e2,
        "c_e3": parts.c_e3,
    })
}

fn slice_json(
    rep: &EntanglementReport,
    oracle: &EntanglementReport,
    ppt_margin: f64,
) -> serde_json::Value {
    json!({
        "branch": rep.branch.name(),
        "ppt_satisfied": rep.ppt_satisfied,
        "negativity": rep.negativity,
        "concurrence": rep.concurrence,
        "ppt_margin": ppt_margin,
        "delta_negativity": rep.negativity - oracle.negativity,
        "delta_concurrence": rep.concurrence.max(0.0) - oracle.concurrence,
    })
}

fn cmd_measure(input: &Path, out: Option<&Path>, degrees: bool) -> Result<(), CliError> {
    let (file, coords) = load_coords(input, degrees)?;
    let rho = density_from_coords(&coords);
    let oracle = report_oracle(&rho).map_err(|e| CliError::Internal(e.to_string()))?;
    let parts = part_concurrences(&coords);
    let w = coords.weights();
    let m = w.mu();

    // Attach every closed-form branch whose slice condition the point
    // satisfies, with its deviation from the oracle.
    let mut slices = Vec::new();
    let theta21 = coords.a21().theta();
    if theta21.abs() <= 1e-12 {
        let rep = slice_s21_zero(&w, parts.c_p, parts.c_psi2)?;
        let margin = 4.0 * m[2] * m[3] + (m[2] - m[3]).powi(2) * parts.c_psi2.powi(2)
            - (m[0] - m[1]).powi(2) * parts.c_p.powi(2);
        slices.push(slice_json(&rep, &oracle, margin));
    }
    if (theta21 - std::f64::consts::PI).abs() <= 1e-12 && (m[2] - m[3]).abs() <= 1e-12 {
        let rep = slice_c21_zero_mu23(&w, parts.c_p, parts.c_psi1)?;
        let margin1 = 4.0 * m[0] * m[2] + (m[0] - m[2]).powi(2) * parts.c_p.powi(2)
            - (m[1] - m[2]).powi(2) * parts.c_psi1.powi(2);
        let margin2 = 4.0 * m[1] * m[2] + (m[1] - m[2]).powi(2) * parts.c_psi1.powi(2)
            - (m[0] - m[2]).powi(2) * parts.c_p.powi(2);
        slices.push(slice_json(&rep, &oracle, margin1.min(margin2)));
    }
    if theta21.abs() <= 1e-12
        && coords.a32().theta().abs() <= 1e-12
        && coords.a0().theta().abs() <= 1e-12
    {
        let rep = werner_mu_report(&w, parts.c_p)?;
        let margin = 2.0 * (m[2] * m[3]).sqrt() - (m[0] - m[1]) * parts.c_p;
        slices.push(slice_json(&rep, &oracle, margin));
    }

    let doc = json!({
        "coords": serde_json::to_value(file).expect("serializable"),
        "mu": m,
        "nu": coords.nu(),
        "report": report_json(&oracle),
        "parts": parts_json(&parts),
        "slices": slices,
    });
    emit(
        out,
        &serde_json::to_string_pretty(&doc).expect("serializable"),
    )
}

fn cmd_sweep(spec: &Path, out: &Path, jobs: usize, degrees: bool) -> Result<(), CliError> {
    let text = read_to_string(spec)?;
    let parsed: sweep::SweepSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", spec.display())))?;
    let csv = sweep::run(parsed, degrees, jobs)?;
    fs::write(out, csv).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", out.display())))
}

fn cmd_verify(suite: &str, seed: u64, samples: Option<usize>) -> Result<(), CliError> {
    let outcomes = if suite == "all" {
        run_all(seed, samples)
    } else {
        vec![run_suite(suite, seed, samples)?]
    };
    println!(
        "{:<24} {:>8} {:>14} {:>10}  result",
        "suite", "cases", "max_abs_error", "tolerance"
    );
    let mut all_pass = true;
    for o in &outcomes {
        println!(
            "{:<24} {:>8} {:>14.3e} {:>10.1e}  {}",
            o.suite,
            o.cases_run,
            o.max_abs_error,
            o.tolerance,
            if o.pass { "PASS" } else { "FAIL" }
        );
        if let Some(note) = &o.note {
            println!("  note: {note}");
        }
        all_pass &= o.pass;
    }
    if all_pass {
        Ok(())
    } else {
        Err(CliError::Verify)
    }
}
