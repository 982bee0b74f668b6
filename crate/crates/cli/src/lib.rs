//! Command-line front end for the `tenbound` library.
//!
//! Every command prints one JSON report
//! `{"command", "inputs", "outputs", "timing_ms", "warnings"}` on stdout and
//! reports failures on stderr. Exit codes: 0 success, 1 failed verification,
//! 2 violated precondition, 3 malformed input, 4 resource cap, 5 iteration
//! did not converge.

pub mod args;
pub mod commands;
pub mod error;
pub mod report;
pub mod schema;
pub mod verify;

use std::io::Write;
use std::time::Instant;

use serde_json::json;

use args::{Cli, Command};
use commands::Context;
use error::{CliError, EXIT_OK, EXIT_VERIFY_FAILED};
use report::RunReport;

fn command_name(cmd: &Command) -> &'static str {
    use args::{BoundsCommand as B, RegionsCommand as R};
    match cmd {
        Command::Info { .. } => "info",
        Command::Rowsum { .. } => "rowsum",
        Command::Product(_) => "product",
        Command::Bounds(B::Rowsum { .. }) => "bounds rowsum",
        Command::Bounds(B::Minc { .. }) => "bounds minc",
        Command::Bounds(B::MincPower { .. }) => "bounds minc-power",
        Command::Bounds(B::Product { .. }) => "bounds product",
        Command::Bounds(B::Power { .. }) => "bounds power",
        Command::Regions(R::Gershgorin(_)) => "regions gershgorin",
        Command::Regions(R::Brualdi(_)) => "regions brualdi",
        Command::Rho(_) => "rho",
        Command::CwCert(_) => "cw-cert",
        Command::VerifyPaper(_) => "verify-paper",
    }
}

/// Runs one parsed command and returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let start = Instant::now();
    let mut ctx = Context::new(cli.entry_cap, cli.circuit_cap);
    let name = command_name(&cli.command);

    if let Command::VerifyPaper(v) = &cli.command {
        return verify_paper(&mut ctx, v, cli.pretty, start, out, err);
    }

    let result = match &cli.command {
        Command::Info { tensor } => commands::info(&mut ctx, tensor),
        Command::Rowsum { tensor } => commands::rowsum(&mut ctx, tensor),
        Command::Product(p) => commands::product(&mut ctx, p),
        Command::Bounds(b) => commands::bounds(&mut ctx, b),
        Command::Regions(r) => commands::regions(&mut ctx, r),
        Command::Rho(r) => commands::rho(&mut ctx, r),
        Command::CwCert(c) => commands::cw_cert(&mut ctx, c),
        Command::VerifyPaper(_) => unreachable!("handled above"),
    };
    match result {
        Ok(outputs) => {
            let report = RunReport {
                command: name.to_string(),
                inputs: ctx.inputs,
                outputs,
                timing_ms: start.elapsed().as_secs_f64() * 1e3,
                warnings: ctx.warnings,
            };
            let _ = writeln!(out, "{}", report.render(cli.pretty));
            for w in &report.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            ctx.exit_code
        }
        Err(e) => report_error(name, &e, err),
    }
}

fn report_error(name: &str, e: &CliError, err: &mut dyn Write) -> i32 {
    let _ = writeln!(err, "error: {name}: {e}");
    e.exit_code()
}

fn verify_paper(
    ctx: &mut Context,
    args: &args::VerifyArgs,
    pretty: bool,
    start: Instant,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let tensor = match &args.fixture {
        None => tenbound::fixtures::example_tensor(),
        Some(path) => {
            let loaded = ctx.load(path).and_then(|t| {
                t.to_real().ok_or_else(|| {
                    CliError::Usage(format!("{}: fixture must be real", path.display()))
                })
            });
            match loaded {
                Ok(t) => t,
                Err(e) => return report_error("verify-paper", &e, err),
            }
        }
    };
    let checks = verify::run_checks(&tensor);
    let passed = checks.iter().all(|c| c.passed);
    if args.json {
        let report = RunReport {
            command: "verify-paper".into(),
            inputs: std::mem::take(&mut ctx.inputs),
            outputs: json!({
                "passed": passed,
                "checks": checks.iter().map(verify::Check::to_value).collect::<Vec<_>>(),
            }),
            timing_ms: start.elapsed().as_secs_f64() * 1e3,
            warnings: Vec::new(),
        };
        let _ = writeln!(out, "{}", report.render(pretty));
    } else {
        for c in &checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{tag} {}: {}", c.name, c.detail);
        }
    }
    match checks.iter().find(|c| !c.passed) {
        None => EXIT_OK,
        Some(first) => {
            let _ = writeln!(err, "verify-paper: {} failed: {}", first.name, first.detail);
            EXIT_VERIFY_FAILED
        }
    }
}
