mod args;
mod output;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use rayon::prelude::*;
use serde::Serialize;

use diskweyl_core::asymptotics::{fit_envelope_points, scan_remainder};
use diskweyl_core::bessel_zeros::zeros_up_to;
use diskweyl_core::lattice_count::sandwich_check;
use diskweyl_core::spectral_count::sample;
use diskweyl_core::verify::{run_suite, Suite, SuiteReport, VerifyOptions};
use diskweyl_core::{BesselZero, EvalAccuracy, MollifyConfig};

use args::{Cli, Column, Command, FitArgs, MollifyArgs, ScanArgs, SuiteArg, VerifyArgs, ZerosArgs};
use output::{fmt_f64, write_csv, write_json};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] diskweyl_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Violation(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Violation(_) => 1,
            CliError::Usage(_) | CliError::Io { .. } | CliError::Csv(_) => 2,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(_) => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(e) => e.kind(),
            CliError::Io { .. } => "io",
            CliError::Csv(_) => "csv",
            CliError::Violation(_) => "violation",
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    exit_code: u8,
    message: String,
}

fn report_error(kind: &str, code: u8, message: String) -> ExitCode {
    let record = ErrorRecord {
        error: kind,
        exit_code: code,
        message,
    };
    eprintln!(
        "{}",
        serde_json::to_string(&record).expect("error record serializes")
    );
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return report_error("usage", 2, e.to_string().trim().to_string()),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report_error(e.kind(), e.exit_code(), e.to_string()),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Zeros(a) => zeros(a),
        Command::Count(a) => {
            let s = sample(a.mu)?;
            write_json(None, &s)
        }
        Command::Scan(a) => scan(a),
        Command::Fit(a) => fit(a),
        Command::Verify(a) => verify(a),
        Command::Mollify(a) => mollify(a),
    }
}

fn zeros(a: ZerosArgs) -> CliResult<()> {
    if !(a.mu.is_finite() && a.mu > 0.0) {
        return Err(CliError::Usage(format!(
            "--mu must be positive, got {}",
            a.mu
        )));
    }
    // J_n has no zero below n
    let n_max = a
        .n_max
        .unwrap_or(a.mu.floor() as u32)
        .min(a.mu.floor() as u32);
    let per_order: Result<Vec<Vec<BesselZero>>, _> = (0..=n_max)
        .into_par_iter()
        .map(|n| zeros_up_to(n, a.mu))
        .collect();
    let rows = per_order?.into_iter().flatten().map(|z| {
        vec![
            z.n.to_string(),
            z.k.to_string(),
            fmt_f64(z.x),
            fmt_f64(z.residual),
        ]
    });
    write_csv(a.out.as_deref(), &["n", "k", "x", "residual"], rows)
}

fn scan(a: ScanArgs) -> CliResult<()> {
    let samples = scan_remainder(a.mu_min, a.mu_max, a.step)?;
    let rows = samples.iter().map(|s| {
        vec![
            fmt_f64(s.mu),
            s.n_disk.to_string(),
            s.n_lattice.to_string(),
            fmt_f64(s.weyl2),
            fmt_f64(s.remainder),
            s.diff.to_string(),
        ]
    });
    write_csv(
        a.out.as_deref(),
        &["mu", "n_disk", "n_lattice", "weyl2", "remainder", "diff"],
        rows,
    )
}

fn read_columns(path: &Path, column: Column) -> CliResult<Vec<(f64, f64)>> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    let headers = reader.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| CliError::Usage(format!("{}: no `{name}` column", path.display())))
    };
    let (mu_col, value_col) = (find("mu")?, find(column.header())?);
    let parse = |rec: &csv::StringRecord, i: usize, line: usize| -> CliResult<f64> {
        let field = rec.get(i).unwrap_or("").trim();
        field.parse().map_err(|_| {
            CliError::Usage(format!(
                "{} line {line}: cannot parse `{field}`",
                path.display()
            ))
        })
    };
    let mut points = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        points.push((parse(&rec, mu_col, i + 2)?, parse(&rec, value_col, i + 2)?));
    }
    if points
        .windows(2)
        .any(|w| w[0].0.partial_cmp(&w[1].0) != Some(std::cmp::Ordering::Less))
    {
        return Err(CliError::Usage(format!(
            "{}: mu must be strictly increasing",
            path.display()
        )));
    }
    Ok(points)
}

fn fit(a: FitArgs) -> CliResult<()> {
    let points = read_columns(&a.input, a.column)?;
    let result = fit_envelope_points(&points, a.block)?;
    write_json(a.out.as_deref(), &result)
}

#[derive(Serialize)]
struct VerifyReport {
    passed: bool,
    suites: Vec<SuiteReport>,
}

fn verify(a: VerifyArgs) -> CliResult<()> {
    let defaults = EvalAccuracy::default();
    let accuracy = EvalAccuracy::new(
        a.oracle_abs_tol.unwrap_or(defaults.abs_tol),
        a.oracle_rel_tol.unwrap_or(defaults.rel_tol),
        defaults.max_nodes,
    )?;
    let opts = VerifyOptions {
        seed: a.seed,
        samples: a.samples,
        mu: a.mu,
        accuracy,
    };
    let suites: Vec<Suite> = if a.suite.is_empty() {
        Suite::ALL.to_vec()
    } else {
        a.suite
            .iter()
            .map(|s| match s {
                SuiteArg::Special => Suite::Special,
                SuiteArg::Geometry => Suite::Geometry,
                SuiteArg::Lattice => Suite::Lattice,
                SuiteArg::Sandwich => Suite::Sandwich,
                SuiteArg::Appendix => Suite::Appendix,
            })
            .collect()
    };
    let reports = suites
        .iter()
        .map(|&s| run_suite(s, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let report = VerifyReport {
        passed: reports.iter().all(SuiteReport::passed),
        suites: reports,
    };
    write_json(a.out.as_deref(), &report)?;
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<String> = report
            .suites
            .iter()
            .flat_map(|r| {
                r.checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(move |c| format!("{}/{}", r.suite.name(), c.name))
            })
            .collect();
        Err(CliError::Violation(format!(
            "failed checks: {}",
            failed.join(", ")
        )))
    }
}

fn mollify(a: MollifyArgs) -> CliResult<()> {
    let d = MollifyConfig::default();
    let cfg = MollifyConfig::new(
        a.eps_exp,
        a.eps_scale,
        a.cells,
        d.chi_plateau,
        d.chi_support,
    )?;
    let s = sandwich_check(a.mu, &cfg)?;
    write_json(a.out.as_deref(), &s)?;
    if s.is_ordered() {
        Ok(())
    } else {
        Err(CliError::Violation(format!(
            "sandwich out of order at mu {}: {} <= {} <= {} fails",
            a.mu, s.n_minus, s.n_exact, s.n_plus
        )))
    }
}
