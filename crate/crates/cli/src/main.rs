use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use sectorial_core::lab::{im_part_bound, block_modulus_check, modulus_bound, WitnessReport};
use sectorial_core::matrix::HermitianMatrix;
use sectorial_core::sectorial::{sector_angle, AngleMethod, Sectoriality};
use sectorial_core::{BoundInstance, BoundKind, ConcaveFunction, NormSpec, PartitionedMatrix, SectorAngle};
use sectorial_lab::curve::{emit_curve, log_grid};
use sectorial_lab::hunt::hunt_sensitivity;
use sectorial_lab::io::parse_matrix_file;
use sectorial_lab::{run_sweep, HarnessError, SweepConfig, EXIT_INPUT, EXIT_OK, EXIT_VIOLATION};

#[derive(Parser)]
#[command(name = "sectorial", version, about = "Check Rotfel'd-type bounds for sectorial block matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Whitened,
    Bisection,
    Fov,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Ineq {
    /// `|X*|` and `|X|` against the diagonal blocks of a psd block matrix.
    Block,
    /// `|ℑA|` against two congruences of `ℜA`.
    ImPart,
    /// `|A|` against two congruences of `ℜA`.
    Modulus,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal sector angle of a matrix.
    Angle {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "whitened")]
        method: Method,
    },
    /// Evaluate one bound for every norm of a norm spec.
    Verify {
        file: PathBuf,
        #[arg(long)]
        kind: String,
        /// Scale for `main`/`m2`; overrides any `:s` in `--kind`.
        #[arg(long)]
        s: Option<f64>,
        #[arg(long, default_value = "pow:1")]
        f: String,
        #[arg(long, default_value = "kyfan:all")]
        norm: String,
        #[arg(long)]
        split: usize,
        /// Sector angle in radians; defaults to the minimal one.
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Check a witness-based matrix inequality.
    Witness {
        /// For `block`, the whole `2n × 2n` block matrix.
        file: PathBuf,
        #[arg(long, value_enum)]
        ineq: Ineq,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Run a randomized campaign and write JSON lines.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides `parallelism` from the config.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Inject known-false claims and report how many are caught.
    Hunt {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Write right sides against `s` as CSV.
    Curve {
        file: PathBuf,
        /// Comma-separated bound kinds.
        #[arg(long, value_delimiter = ',', default_value = "main,m2,zpt,mao")]
        kinds: Vec<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "pow:1")]
        f: String,
        #[arg(long, default_value = "trace")]
        norm: String,
        #[arg(long)]
        split: usize,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 0.01)]
        s_min: f64,
        #[arg(long, default_value_t = 100.0)]
        s_max: f64,
        #[arg(long, default_value_t = 64)]
        points: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return ExitCode::from(code as u8);
        }
    };
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

fn verdict(all_hold: bool) -> i32 {
    if all_hold {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}

fn print_json(v: &serde_json::Value) {
    println!("{v}");
}

fn angle_arg(alpha: Option<f64>) -> Result<Option<SectorAngle>, HarnessError> {
    Ok(alpha.map(SectorAngle::new).transpose()?)
}

fn run(command: Command) -> Result<i32, HarnessError> {
    match command {
        Command::Angle { file, method } => angle(&file, method),
        Command::Verify {
            file,
            kind,
            s,
            f,
            norm,
            split,
            alpha,
        } => verify(&file, &kind, s, &f, &norm, split, alpha),
        Command::Witness { file, ineq, s, alpha } => witness(&file, ineq, s, alpha),
        Command::Sweep { config, out, workers } => sweep(&config, out.as_deref(), workers),
        Command::Hunt { config, workers } => {
            let mut cfg = SweepConfig::from_file(&config)?;
            if let Some(w) = workers {
                cfg.parallelism = w;
            }
            let report = hunt_sensitivity(&cfg)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(verdict(report.passed))
        }
        Command::Curve {
            file,
            kinds,
            out,
            f,
            norm,
            split,
            alpha,
            s_min,
            s_max,
            points,
        } => {
            let p = PartitionedMatrix::new(parse_matrix_file(&file)?, split)?;
            let kinds = kinds.iter().map(|k| k.parse()).collect::<Result<Vec<BoundKind>, _>>()?;
            let grid = log_grid(s_min, s_max, points)?;
            let f: ConcaveFunction = f.parse()?;
            let rows = emit_curve(&p, angle_arg(alpha)?, &f, norm.parse()?, &kinds, &grid, &out)?;
            print_json(&json!({ "out": out.display().to_string(), "rows": rows }));
            Ok(EXIT_OK)
        }
    }
}

fn angle(file: &Path, method: Method) -> Result<i32, HarnessError> {
    let a = parse_matrix_file(file)?;
    let methods: &[(&str, AngleMethod)] = match method {
        Method::Whitened => &[("whitened", AngleMethod::Whitened)],
        Method::Bisection => &[("bisection", AngleMethod::Bisection)],
        Method::Fov => &[("fov_sampling", AngleMethod::FovSampling)],
        Method::All => &[
            ("whitened", AngleMethod::Whitened),
            ("bisection", AngleMethod::Bisection),
            ("fov_sampling", AngleMethod::FovSampling),
        ],
    };
    for (name, m) in methods {
        let v = match sector_angle(&a, *m)? {
            Sectoriality::Sectorial(t) => json!({
                "method": name,
                "sectorial": true,
                "alpha": t.alpha(),
                "degrees": t.alpha().to_degrees(),
            }),
            Sectoriality::NotSectorial => json!({ "method": name, "sectorial": false }),
        };
        print_json(&v);
    }
    Ok(EXIT_OK)
}

fn verify(
    file: &Path,
    kind: &str,
    s: Option<f64>,
    f: &str,
    norm: &str,
    split: usize,
    alpha: Option<f64>,
) -> Result<i32, HarnessError> {
    let mut kind: BoundKind = kind.parse()?;
    if let Some(s) = s {
        if kind.s().is_none() {
            return Err(HarnessError::Config(format!("--s does not apply to `{kind}`")));
        }
        kind = kind.with_s(s);
    }
    let f: ConcaveFunction = f.parse()?;
    let spec: NormSpec = norm.parse()?;
    let inst = BoundInstance::new(PartitionedMatrix::new(parse_matrix_file(file)?, split)?)?;
    let alpha = angle_arg(alpha)?;
    let mut all_hold = true;
    for norm in spec.expand(inst.partition().dim()) {
        let r = inst.verify(alpha, &f, norm, kind)?;
        all_hold &= r.holds;
        print_json(&json!({
            "kind": r.kind.to_string(),
            "norm": r.norm.to_string(),
            "f": r.f.to_string(),
            "s": r.s,
            "alpha": r.alpha,
            "lhs": r.lhs,
            "rhs": r.rhs,
            "margin": r.margin,
            "holds": r.holds,
        }));
    }
    Ok(verdict(all_hold))
}

fn witness_json(name: &str, w: &WitnessReport) -> serde_json::Value {
    json!({
        "ineq": name,
        "s": w.s,
        "witnesses": w.witnesses.iter().map(|x| x.label).collect::<Vec<_>>(),
        "max_unitarity_defect": w.max_unitarity_defect(),
        "residual_min_eig": w.residual_min_eig,
        "tolerance": w.tolerance,
        "holds": w.holds,
    })
}

fn witness(file: &Path, ineq: Ineq, s: f64, alpha: Option<f64>) -> Result<i32, HarnessError> {
    let m = parse_matrix_file(file)?;
    let reports = match ineq {
        Ineq::Block => {
            if m.dim() % 2 != 0 {
                return Err(HarnessError::Config(format!(
                    "block expects an even-sized block matrix, got n = {}",
                    m.dim()
                )));
            }
            let half = m.dim() / 2;
            let p = PartitionedMatrix::new(m, half)?;
            let a = HermitianMatrix::new(p.a11())?;
            let b = HermitianMatrix::new(p.a22())?;
            let (first, second) = block_modulus_check(&a, &p.a12(), &b, s)?;
            vec![witness_json("block_adjoint", &first), witness_json("block", &second)]
        }
        Ineq::ImPart | Ineq::Modulus => {
            let inst_alpha = match angle_arg(alpha)? {
                Some(a) => a,
                None => sector_angle(&m, AngleMethod::Bisection)?
                    .angle()
                    .ok_or(sectorial_core::Error::NotInSector)?,
            };
            let (name, w) = match ineq {
                Ineq::ImPart => ("im_part", im_part_bound(&m, inst_alpha, s)?),
                _ => ("modulus", modulus_bound(&m, inst_alpha, s)?),
            };
            vec![witness_json(name, &w)]
        }
    };
    let all_hold = reports.iter().all(|r| r["holds"] == json!(true));
    for r in &reports {
        print_json(r);
    }
    Ok(verdict(all_hold))
}

fn sweep(config: &Path, out: Option<&Path>, workers: Option<usize>) -> Result<i32, HarnessError> {
    let mut cfg = SweepConfig::from_file(config)?;
    if let Some(w) = workers {
        cfg.parallelism = w;
    }
    let outcome = run_sweep(&cfg)?;
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|source| HarnessError::Io {
                path: path.display().to_string(),
                source,
            })?;
            let mut w = BufWriter::new(file);
            outcome.write_jsonl(&mut w)?;
            w.flush().map_err(|source| HarnessError::Io {
                path: path.display().to_string(),
                source,
            })?;
        }
        None => outcome.write_jsonl(std::io::stdout().lock())?,
    }
    let s = &outcome.summary;
    eprintln!(
        "{} trials, {} reports, {} witness checks, {} violations, {} errors",
        s.trials, s.reports, s.witness_checks, s.violations, s.errors
    );
    Ok(verdict(s.violations == 0))
}
