use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use plucker_poisson::dynamics::{elliptic_oracle, jacobi_elliptic_many, quarter_period, DynamicsError, SnCnDn};
use plucker_poisson::scenarios::{self, builtin_catalog, compat_specs, integrate_spec, ScenarioError, VerifyOptions};

/// Rank-two Poisson brackets from Plücker coordinates: verification,
/// compatibility and integration.
#[derive(Debug, Parser)]
#[command(name = "plucker-poisson", version)]
struct Cli {
    /// Seed for the generic sample points.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Overrides the default tolerances (drift bound for `integrate`).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Machine-readable output for `list` and `elliptic`.
    #[arg(long, global = true)]
    json: bool,
    /// Output file: the report, the trajectory CSV or the elliptic table.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the structural checks on a scenario file or built-in name.
    Verify { scenario: String },
    /// Decide whether two Plücker brackets are compatible.
    Compat { a: String, b: String },
    /// Integrate a scenario and report invariant drift.
    Integrate { scenario: String },
    /// Tabulate sn, cn, dn against the identities and the quadrature oracle.
    Elliptic {
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        t_max: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// List the built-in scenarios.
    List,
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Io(PathBuf, io::Error),
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        CliError::Input(e.to_string())
    }
}

type Outcome = Result<bool, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Input(format!("--tol must be positive and finite, got {t}")));
        }
    }
    let opts = VerifyOptions { seed: cli.seed, tol: cli.tol, ..VerifyOptions::default() };
    match &cli.command {
        Command::Verify { scenario } => {
            let resolved = scenarios::resolve(scenario)?;
            let report = scenarios::verify_resolved(&resolved, &opts)?;
            emit_report(cli, &report.to_json())?;
            Ok(report.passed())
        }
        Command::Compat { a, b } => {
            let (ra, rb) = (scenarios::resolve(a)?, scenarios::resolve(b)?);
            let report = compat_specs(ra.spec(), rb.spec(), &opts)?;
            emit_report(cli, &report.to_json())?;
            Ok(report.compatible() && report.checks.iter().all(|c| c.passed()))
        }
        Command::Integrate { scenario } => {
            let resolved = scenarios::resolve(scenario)?;
            let (summary, trajectory) = integrate_spec(resolved.spec(), cli.tol)?;
            if let (Some(path), Some(tr)) = (&cli.out, &trajectory) {
                let file = create(path)?;
                let mut w = BufWriter::new(file);
                tr.write_csv(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::Io(path.clone(), e))?;
            }
            println!("{}", summary.to_json());
            Ok(summary.passed())
        }
        Command::Elliptic { k, t_max, steps } => elliptic(cli, *k, *t_max, *steps),
        Command::List => {
            let names: Vec<String> = builtin_catalog().into_iter().map(|s| s.name).collect();
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&names).expect("names serialize"));
            } else {
                for n in names {
                    println!("{n}");
                }
            }
            Ok(true)
        }
    }
}

fn create(path: &PathBuf) -> Result<File, CliError> {
    File::create(path).map_err(|e| CliError::Io(path.clone(), e))
}

fn emit_report(cli: &Cli, json: &str) -> Result<(), CliError> {
    println!("{json}");
    if let Some(path) = &cli.out {
        std::fs::write(path, format!("{json}\n")).map_err(|e| CliError::Io(path.clone(), e))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct EllipticRow {
    t: f64,
    sn: f64,
    cn: f64,
    dn: f64,
    /// `|sn² + cn² − 1|`
    id1: f64,
    /// `|k²sn² + dn² − 1|`
    id2: f64,
    /// `|sn − sn_oracle|` on the primary branch.
    oracle_delta: Option<f64>,
}

#[derive(Serialize)]
struct EllipticTable {
    k: f64,
    quarter_period: f64,
    rows: Vec<EllipticRow>,
    verdict: &'static str,
}

const IDENTITY_TOL: f64 = 1e-9;
const ORACLE_TOL: f64 = 1e-7;

fn elliptic(cli: &Cli, k: f64, t_max: f64, steps: usize) -> Outcome {
    if !t_max.is_finite() {
        return Err(CliError::Input(format!("--t-max must be finite, got {t_max}")));
    }
    if steps == 0 {
        return Err(CliError::Input("--steps must be at least 1".into()));
    }
    let kk = quarter_period(k)?;
    let ts: Vec<f64> = (0..=steps).map(|i| t_max * i as f64 / steps as f64).collect();
    let values = jacobi_elliptic_many(&ts, k)?;
    let id_tol = cli.tol.unwrap_or(IDENTITY_TOL);
    let mut ok = true;
    let rows: Vec<EllipticRow> = ts
        .iter()
        .zip(values)
        .map(|(&t, SnCnDn { sn, cn, dn })| {
            let oracle_delta = elliptic_oracle(t, k).ok().map(|o| (sn - o.sn).abs());
            let id1 = (sn * sn + cn * cn - 1.0).abs();
            let id2 = (k * k * sn * sn + dn * dn - 1.0).abs();
            ok &= id1 <= id_tol && id2 <= id_tol && oracle_delta.is_none_or(|d| d <= ORACLE_TOL);
            EllipticRow { t, sn, cn, dn, id1, id2, oracle_delta }
        })
        .collect();

    let text = if cli.json {
        let table = EllipticTable { k, quarter_period: kk, rows, verdict: if ok { "pass" } else { "fail" } };
        serde_json::to_string_pretty(&table).expect("table serializes") + "\n"
    } else {
        let mut s = String::from("t,sn,cn,dn,id1,id2,oracle_delta\n");
        for r in &rows {
            let delta = r.oracle_delta.map(|d| format!("{d:.16e}")).unwrap_or_default();
            s += &format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{delta}\n",
                r.t, r.sn, r.cn, r.dn, r.id1, r.id2
            );
        }
        s
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(path.clone(), e))?,
        None => print!("{text}"),
    }
    Ok(ok)
}
