use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qsc_cli::{cmd_list, cmd_tensor, cmd_verify, CliError, RunConfig, TensorRequest, EXIT_CONFIG};

#[derive(Parser)]
#[command(
    name = "qsc-lab",
    version,
    about = "Verify curvature identities of quarter-symmetric connections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity suite and report residuals.
    Verify(VerifyArgs),
    /// Print the nonzero components of one tensor at a point.
    Tensor(TensorArgs),
    /// List manifolds, generators or identities.
    List { what: Option<String> },
}

#[derive(Args)]
struct VerifyArgs {
    /// JSON file with RunConfig fields; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    manifold: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    /// Comma-separated generator specs, e.g. zero,linear_j,random_poly:3
    #[arg(long, value_delimiter = ',')]
    generators: Option<Vec<String>>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// analytic, fd2 or fd4
    #[arg(long)]
    diff: Option<String>,
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    richardson: bool,
    #[arg(long)]
    tol_core: Option<f64>,
    #[arg(long)]
    tol_audit: Option<f64>,
    /// Exit successfully even when audit identities fail.
    #[arg(long)]
    audit_soft: bool,
    /// Where to write the JSON report.
    #[arg(long)]
    report: Option<PathBuf>,
}

impl VerifyArgs {
    fn into_config(self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.manifold {
            cfg.manifold = v;
        }
        if let Some(v) = self.k {
            cfg.k = v;
        }
        if let Some(v) = self.generators {
            cfg.generators = v;
        }
        if let Some(v) = self.points {
            cfg.num_points = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.diff {
            cfg.diff = v;
        }
        if let Some(v) = self.step {
            cfg.step = v;
        }
        if let Some(v) = self.tol_core {
            cfg.tolerance_core = v;
        }
        if let Some(v) = self.tol_audit {
            cfg.tolerance_audit = v;
        }
        if let Some(v) = self.report {
            cfg.output = Some(v);
        }
        cfg.richardson |= self.richardson;
        cfg.audit_soft |= self.audit_soft;
        Ok(cfg)
    }
}

#[derive(Args)]
struct TensorArgs {
    #[arg(long)]
    what: String,
    #[arg(long, default_value = "flat")]
    manifold: String,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value = "zero")]
    generator: String,
    /// Comma-separated coordinates x1,y1,x2,y2,...
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    #[arg(long, default_value = "analytic")]
    diff: String,
    /// Components with magnitude below this are not printed.
    #[arg(long, default_value_t = 1e-12)]
    threshold: f64,
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Verify(args) => cmd_verify(&args.into_config()?, &mut stdout),
        Command::Tensor(a) => {
            let req = TensorRequest {
                what: a.what,
                manifold: a.manifold,
                k: a.k,
                generator: a.generator,
                point: a.point,
                diff: a.diff,
                threshold: a.threshold,
            };
            cmd_tensor(&req, &mut stdout).map(|_| 0)
        }
        Command::List { what } => cmd_list(what.as_deref(), &mut stdout).map(|_| 0),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}
