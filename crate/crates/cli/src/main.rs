use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use halfweyl_cli::{
    exit, identity_listing, resolve_report_path, run_certify, run_verify, write_report, ConfigError, ModelSpec,
    RunConfig, RunReport,
};

#[derive(Parser)]
#[command(name = "halfweyl", version, about = "Verify soliton curvature identities and certify the quartic inequality")]
struct Cli {
    /// Print every registered identity and exit.
    #[arg(long)]
    list_identities: bool,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the identity suite over the model catalog.
    Verify(VerifyArgs),
    /// Run the symbolic certificates and exact rational sampling.
    Certify(CertifyArgs),
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; every field is optional.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Report file; overrides the config and HALFWEYL_REPORT.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Catalog model; repeat for several. Replaces the configured list.
    #[arg(long = "model")]
    models: Vec<String>,
    /// Soliton constant for the matching --model (default 1).
    #[arg(long = "lambda")]
    lambdas: Vec<f64>,
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    samples: Option<u64>,
    /// Bound on sampled numerators and denominators.
    #[arg(long)]
    bound: Option<u64>,
}

fn base_config(common: &Common) -> Result<RunConfig, ConfigError> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn verify_config(a: &VerifyArgs) -> Result<RunConfig, ConfigError> {
    let mut cfg = base_config(&a.common)?;
    if !a.lambdas.is_empty() && a.lambdas.len() != a.models.len() {
        return Err(ConfigError::Invalid(format!(
            "{} --lambda values for {} --model flags; give one per model or none",
            a.lambdas.len(),
            a.models.len()
        )));
    }
    if !a.models.is_empty() {
        cfg.models = a
            .models
            .iter()
            .enumerate()
            .map(|(i, id)| ModelSpec { id: id.clone(), lambda: a.lambdas.get(i).copied().unwrap_or(1.0) })
            .collect();
    }
    if let Some(n) = a.points {
        cfg.points_per_model = n;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn certify_config(a: &CertifyArgs) -> Result<RunConfig, ConfigError> {
    let mut cfg = base_config(&a.common)?;
    if let Some(n) = a.samples {
        cfg.certifier.samples = n;
    }
    if let Some(b) = a.bound {
        cfg.certifier.bound = b;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn summarize(report: &RunReport) {
    let a = &report.aggregate;
    for e in report.failures().take(20) {
        eprintln!(
            "FAIL {} {}[{}] {:?}: residual {:e} > {:e}{}",
            e.identity_id,
            e.model,
            e.point_index,
            e.scheme,
            e.residual,
            e.tolerance,
            e.error.as_deref().map(|m| format!(" ({m})")).unwrap_or_default()
        );
    }
    for c in report.certificates.iter().filter(|c| !c.is_certified()) {
        eprintln!("FAIL certificate {}: {:?}", c.name, c.verdict);
    }
    for e in &report.errors {
        eprintln!("FAIL {e}");
    }
    println!("total {} passed {} failed {} skipped {}", a.total, a.passed, a.failed, a.skipped);
}

fn finish(report: RunReport, flag: Option<&std::path::Path>, cfg: &RunConfig) -> ExitCode {
    let path = resolve_report_path(flag, cfg);
    summarize(&report);
    if let Err(e) = write_report(&report, &path) {
        eprintln!("error: cannot write report `{}`: {e}", path.display());
        return ExitCode::from(exit::IO as u8);
    }
    println!("report written to {}", path.display());
    ExitCode::from(report.exit_code as u8)
}

fn config_error(e: ConfigError) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        ConfigError::Read { .. } => ExitCode::from(exit::IO as u8),
        _ => ExitCode::from(exit::CONFIG as u8),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_identities {
        print!("{}", identity_listing());
        return ExitCode::SUCCESS;
    }
    match cli.command {
        None => {
            eprintln!("error: expected a subcommand (verify or certify) or --list-identities");
            ExitCode::from(exit::CONFIG as u8)
        }
        Some(Cmd::Verify(a)) => match verify_config(&a).and_then(|cfg| run_verify(&cfg).map(|r| (r, cfg))) {
            Ok((report, cfg)) => finish(report, a.common.report.as_deref(), &cfg),
            Err(e) => config_error(e),
        },
        Some(Cmd::Certify(a)) => match certify_config(&a).and_then(|cfg| run_certify(&cfg).map(|r| (r, cfg))) {
            Ok((report, cfg)) => finish(report, a.common.report.as_deref(), &cfg),
            Err(e) => config_error(e),
        },
    }
}
