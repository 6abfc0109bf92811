//! `btcone`: command-line access to the cover cone library.
//!
//! Exit status 0 means success, 1 a negative mathematical verdict (not in the
//! cone, not implied, not realized), 2 a usage or input error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cover_cone::{
    analyze_witness, build_bt_system, check_implication, enumerate_covers, find_lambda,
    irreducible_covers, log_projection_vector, membership, nearest_sample_distance, read_body,
    read_cover_sets, read_family, read_inequality, read_vector, shearer_check, violating_body,
    witness_vector, write_body, write_vector, Error, Implication, SubsetMask, MAX_DIMENSION,
};
use cover_cone::{precise, rational};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "btcone",
    version,
    about = "Uniform cover cones of log projection volumes"
)]
struct Cli {
    /// Seed for every randomized computation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the uniform covers of a ground set.
    Covers {
        /// Ground set, e.g. `1,2,3`.
        #[arg(long)]
        ground: String,
        /// Largest multiplicity; defaults to the size of the ground set.
        #[arg(long)]
        kmax: Option<u32>,
        /// Only irreducible covers.
        #[arg(long)]
        irreducible: bool,
    },
    /// Test a vector against every generator inequality.
    Member {
        #[arg(long)]
        vector: PathBuf,
        /// Embed the vector into a larger dimension first.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        kmax: Option<u32>,
        /// Include the generator system, one inequality per line.
        #[arg(long)]
        hrep: bool,
    },
    /// Decide whether a linear inequality holds on the whole cone.
    Imply {
        #[arg(long)]
        inequality: PathBuf,
        /// When not implied, write a violating body here.
        #[arg(long)]
        emit_body: Option<PathBuf>,
        #[arg(long)]
        kmax: Option<u32>,
        #[arg(long, default_value = "4096")]
        lambda_cap: String,
    },
    /// Build a body whose log projection vector is a multiple of the input.
    Realize {
        #[arg(long)]
        vector: PathBuf,
        /// Interior shift used when some generator is tight.
        #[arg(long, default_value = "1/4")]
        epsilon: String,
        #[arg(long, default_value = "64")]
        lambda_cap: String,
        #[arg(long)]
        out: PathBuf,
        /// Per-step details and per-subset gaps.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Log projection vector of a body, rounded to 30 significant digits.
    Project {
        #[arg(long)]
        body: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Analyze the non-closedness witness vector.
    Witness {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long)]
        kmax: Option<u32>,
        /// Also report the nearest of this many random bodies.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Check the product inequality for traces of a set family.
    Shearer {
        #[arg(long)]
        family: PathBuf,
        /// File `{"n":..,"sets":[..]}` with the covering sets.
        #[arg(long)]
        cover: PathBuf,
        #[arg(long)]
        k: u32,
    },
}

/// Why a command did not succeed.
enum Failure {
    /// Negative verdict, with the report to print.
    Verdict(Value),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotInCone { .. }
            | Error::NotStrict
            | Error::Infeasible { .. }
            | Error::Inconclusive { .. }
            | Error::VerificationFailed { .. } => {
                Failure::Verdict(json!({ "ok": false, "reason": e.to_string() }))
            }
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = Result<Value, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_rational(flag: &str, text: &str) -> Result<rational::Rational, Failure> {
    rational::parse_rational(text).map_err(|e| Failure::Input(format!("--{flag}: {e}")))
}

fn covers(ground: &str, kmax: Option<u32>, irreducible: bool) -> Outcome {
    let ground = SubsetMask::parse_nonempty(ground, MAX_DIMENSION)?;
    let kmax = kmax.unwrap_or(ground.len() as u32);
    let list = if irreducible {
        irreducible_covers(ground, kmax)?
    } else {
        enumerate_covers(ground, kmax)?
    };
    Ok(json!({ "count": list.len(), "covers": list }))
}

fn member(path: &Path, n: Option<usize>, kmax: Option<u32>, hrep: bool) -> Outcome {
    let mut v = read_vector(&read(path)?)?;
    if let Some(n) = n {
        v = v.embed(n)?;
    }
    let sys = build_bt_system(v.n(), kmax.unwrap_or(v.n() as u32))?;
    let report = membership(&sys, &v)?;
    let mut out = json!({
        "inside": report.inside,
        "generators": sys.len(),
        "violated": report.violated.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "tight": report.tight.iter().map(ToString::to_string).collect::<Vec<_>>(),
    });
    if hrep {
        out["hrep"] = json!(sys.to_hrep().lines().collect::<Vec<_>>());
    }
    if report.inside {
        Ok(out)
    } else {
        Err(Failure::Verdict(out))
    }
}

fn imply(path: &Path, emit_body: Option<&Path>, kmax: Option<u32>, lambda_cap: &str) -> Outcome {
    let ineq = read_inequality(&read(path)?)?;
    let lambda_cap = parse_rational("lambda-cap", lambda_cap)?;
    let sys = build_bt_system(ineq.n(), kmax.unwrap_or(ineq.n() as u32))?;
    let witness = match check_implication(&sys, &ineq)? {
        Implication::Certificate(cert) => {
            return Ok(json!({ "implied": true, "certificate": cert.entries(&sys) }));
        }
        Implication::Witness(w) => w,
    };
    let mut out = json!({
        "implied": false,
        "witness": serde_json::from_str::<Value>(&write_vector(&witness)).expect("vector JSON"),
    });
    if let Some(target) = emit_body {
        match violating_body(&sys, &ineq, &witness, &lambda_cap) {
            Ok(found) => {
                write(target, &write_body(&found.body))?;
                out["body"] = json!({
                    "path": target.display().to_string(),
                    "lambda": rational::format_rational(&found.lambda),
                    "boxes": found.body.boxes().len(),
                    "log_margin": found.margin(),
                });
            }
            Err(e) => out["body"] = json!({ "error": e.to_string() }),
        }
    }
    Err(Failure::Verdict(out))
}

fn realize(
    path: &Path,
    epsilon: &str,
    lambda_cap: &str,
    out: &Path,
    report: Option<&Path>,
) -> Outcome {
    let v = read_vector(&read(path)?)?;
    let epsilon = parse_rational("epsilon", epsilon)?;
    let lambda_cap = parse_rational("lambda-cap", lambda_cap)?;
    let sys = build_bt_system(v.n(), v.n() as u32)?;
    let result = find_lambda(&sys, &v, &epsilon, &lambda_cap)?;
    write(out, &write_body(&result.body))?;
    if let Some(report) = report {
        let text = serde_json::to_string_pretty(&result.report()).expect("report JSON");
        write(report, &text)?;
    }
    Ok(json!({
        "lambda": rational::format_rational(&result.lambda),
        "shifted": result.shifted,
        "boxes": result.body.boxes().len(),
        "max_gap": result.max_gap(),
    }))
}

fn project(body: &Path, out: &Path) -> Outcome {
    let body = read_body(&read(body)?)?;
    let logs = log_projection_vector(&body);
    let Some(v) = logs.to_vector(precise::REPORT_DIGITS) else {
        let zero: Vec<String> = logs
            .zero_subsets()
            .iter()
            .map(ToString::to_string)
            .collect();
        return Err(Failure::Verdict(json!({
            "ok": false,
            "reason": "some projection has zero volume",
            "zero_subsets": zero,
        })));
    };
    write(out, &write_vector(&v))?;
    Ok(json!({ "n": v.n(), "path": out.display().to_string() }))
}

fn witness(n: usize, kmax: Option<u32>, samples: Option<usize>, seed: u64) -> Outcome {
    let v = witness_vector(n)?;
    let sys = build_bt_system(n, kmax.unwrap_or(n as u32))?;
    let report = analyze_witness(&sys, &v)?;
    let mut out = report.to_json();
    if let Some(samples) = samples {
        let nearest = nearest_sample_distance(&v, samples, seed)?;
        out["nearest_sample"] = serde_json::to_value(nearest).expect("sample JSON");
    }
    Ok(out)
}

fn shearer(family: &Path, cover: &Path, k: u32) -> Outcome {
    let family = read_family(&read(family)?)?;
    let (n, sets) = read_cover_sets(&read(cover)?)?;
    if n != family.n() {
        return Err(Failure::Input(format!(
            "cover file has n = {n}, family has n = {}",
            family.n()
        )));
    }
    let report = shearer_check(&family, &sets, k)?;
    if report.holds {
        Ok(report.to_json())
    } else {
        Err(Failure::Verdict(report.to_json()))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Covers {
            ground,
            kmax,
            irreducible,
        } => covers(&ground, kmax, irreducible),
        Command::Member {
            vector,
            n,
            kmax,
            hrep,
        } => member(&vector, n, kmax, hrep),
        Command::Imply {
            inequality,
            emit_body,
            kmax,
            lambda_cap,
        } => imply(&inequality, emit_body.as_deref(), kmax, &lambda_cap),
        Command::Realize {
            vector,
            epsilon,
            lambda_cap,
            out,
            report,
        } => realize(&vector, &epsilon, &lambda_cap, &out, report.as_deref()),
        Command::Project { body, out } => project(&body, &out),
        Command::Witness { n, kmax, samples } => witness(n, kmax, samples, cli.seed),
        Command::Shearer { family, cover, k } => shearer(&family, &cover, k),
    }
}

/// A closed pipe downstream is not an error worth a panic.
fn emit(report: &Value) {
    let _ = writeln!(std::io::stdout().lock(), "{report}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            emit(&report);
            ExitCode::SUCCESS
        }
        Err(Failure::Verdict(report)) => {
            emit(&report);
            ExitCode::from(1)
        }
        Err(Failure::Input(message)) => {
            eprintln!("btcone: {message}");
            ExitCode::from(2)
        }
    }
}
