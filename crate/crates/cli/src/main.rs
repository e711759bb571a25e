//! `starlab`: runs the verification suites on a scenario and emits a report.
//!
//! Exit status is 0 when every check passes, 1 when a check fails and 2 on
//! invalid input. Reports are also written to `$STARLAB_REPORT_DIR` when set.

mod commands;
mod report;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context as _, Result};
use clap::{Args, Parser, Subcommand};

use commands::Context;
use report::Report;
use scenario::Scenario;

const REPORT_DIR_VAR: &str = "STARLAB_REPORT_DIR";

#[derive(Parser)]
#[command(name = "starlab", version, about = "Exact checks for star products, twisted traces and Hochschild theory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    degree_cap: Option<u32>,
    #[arg(long, global = true)]
    hbar_order: Option<u32>,
    /// Number of random samples per check.
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    #[arg(long, global = true)]
    text: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Per-class twisted trace data and monomial traces.
    TraceTable,
    /// Twisted trace axioms and the dimension of the space of traces.
    VerifyTraces,
    /// Dual Koszul cohomology, per element or summed over classes.
    KoszulCohomology {
        /// Group element index; all class representatives when omitted.
        #[arg(long)]
        element: Option<usize>,
    },
    /// Hochschild and cyclic homology dimensions of a finite-dimensional algebra.
    Hochschild {
        /// `matrix <n>`, `group-algebra z<m>`, `truncated <nvars> <cap>` or `ground-field`.
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        k_max: Option<usize>,
        /// Permutation action for the invariant cohomology comparison.
        #[arg(long)]
        action: Option<String>,
    },
    /// Sector decomposition of the Hochschild homology of a finite groupoid.
    GroupoidHh {
        /// Groupoid tables (JSON).
        #[arg(long)]
        tables: Option<PathBuf>,
        /// `group=<z<m>|s<n>> set=<n> perm=<cycles>`.
        #[arg(long)]
        action: Option<String>,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Brylinski differential, HKR maps and the compatibility constant.
    PoissonCheck {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// The cochain action identity for the Gerstenhaber bracket.
    OperationIdentity {
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
    },
    /// Moyal product identities and the star inverse square root.
    StarCheck {
        #[arg(long)]
        dim: Option<usize>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::TraceTable => "trace-table",
            Command::VerifyTraces => "verify-traces",
            Command::KoszulCohomology { .. } => "koszul-cohomology",
            Command::Hochschild { .. } => "hochschild",
            Command::GroupoidHh { .. } => "groupoid-hh",
            Command::PoissonCheck { .. } => "poisson-check",
            Command::OperationIdentity { .. } => "operation-identity",
            Command::StarCheck { .. } => "star-check",
        }
    }
}

fn run(cli: &Cli) -> Result<Report> {
    let mut scenario = match &cli.common.config {
        Some(path) => Scenario::load(path)?,
        None => Scenario::default(),
    };
    if scenario.name.is_empty() {
        scenario.name = "adhoc".into();
    }
    let ctx = Context {
        seed: cli.common.seed.or(scenario.seed).unwrap_or(0),
        samples: cli.common.samples,
        degree_cap: cli.common.degree_cap,
        hbar_order: cli.common.hbar_order,
        scenario,
    };
    let mut report = match &cli.command {
        Command::TraceTable => commands::trace_table(&ctx),
        Command::VerifyTraces => commands::verify_traces(&ctx),
        Command::KoszulCohomology { element } => commands::koszul_cohomology(&ctx, *element),
        Command::Hochschild { algebra, k_max, action } => commands::hochschild(&ctx, algebra.as_deref(), *k_max, action.as_deref()),
        Command::GroupoidHh { tables, action, k_max } => commands::groupoid_hh(&ctx, tables.as_ref(), action.as_deref(), *k_max),
        Command::PoissonCheck { dim, k } => commands::poisson_check(&ctx, *dim, *k),
        Command::OperationIdentity { algebra, max_arity } => commands::operation_identity(&ctx, algebra.as_deref(), *max_arity),
        Command::StarCheck { dim } => commands::star_check(&ctx, *dim),
    }?;
    report.finish();
    Ok(report)
}

fn emit(cli: &Cli, report: &Report) -> Result<()> {
    let (body, ext) = if cli.common.text { (report.to_text(), "txt") } else { (report.to_json(), "json") };
    print!("{body}");
    if let Some(dir) = std::env::var_os(REPORT_DIR_VAR) {
        let dir = PathBuf::from(dir);
        std::fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
        let path = dir.join(format!("{}.{ext}", cli.command.name()));
        std::fs::write(&path, body).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cli, &report) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    ExitCode::from(exit_status(&report))
}

fn exit_status(report: &Report) -> u8 {
    u8::from(report.failed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use starlab_core::report::Check;

    #[test]
    fn failing_check_maps_to_one() {
        let mut r = Report::new("star-check", "t", 0);
        let mut c = Check::new("c", "anchor");
        c.record(true, || vec![("k", 0)]);
        r.push(c.clone());
        r.finish();
        assert_eq!(exit_status(&r), 0);
        c.fail("k", 1);
        r.push(c);
        r.finish();
        assert_eq!(exit_status(&r), 1);
    }

    #[test]
    fn json_and_text_conflict() {
        assert!(Cli::try_parse_from(["starlab", "star-check", "--json", "--text"]).is_err());
        assert!(Cli::try_parse_from(["starlab", "--seed", "3", "star-check", "--text"]).is_ok());
    }
}
