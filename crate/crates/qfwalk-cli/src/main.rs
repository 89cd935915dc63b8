use clap::{Args, Parser, Subcommand};
use qfwalk::verify::Suite;
use qfwalk_cli::{parse_config, run_suite, ExperimentConfig, Mode};
use std::path::PathBuf;
use std::process::ExitCode;

/// Exit status for unreadable or invalid configurations and arguments.
const USAGE_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "qfwalk", version, about = "Quasifree stochastic cocycles and quantum random walks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON experiment configuration; the thermal-qubit defaults are used if absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for randomised checks and default test data (overrides the configuration).
    #[arg(long)]
    seed: Option<u64>,
    /// Algorithmic tolerance (overrides the configuration).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the acceptance checks and report worst residuals.
    Verify {
        /// all, algebra, fock, qsc, quasifree or walk.
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        common: Common,
    },
    /// Walk matrix elements against the limit cocycle; writes CSV.
    Converge {
        #[command(flatten)]
        common: Common,
        /// CSV destination (overrides the configuration's "output"); stdout if neither is given.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Σ(ρ) blocks, the quasifree residual and the uniqueness verdict.
    Dilate {
        #[command(flatten)]
        common: Common,
    },
    /// Minimality and amplitude-set data of the limit generator.
    Uniqueness {
        #[command(flatten)]
        common: Common,
    },
}

fn load(common: &Common) -> Result<ExperimentConfig, String> {
    let text = match &common.config {
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))?,
        None => "{}".to_string(),
    };
    let mut doc: serde_json::Value = serde_json::from_str(&text).map_err(|e| format!("malformed JSON: {e}"))?;
    // flags override the document before validation so defaults derived from the seed follow them
    if let Some(obj) = doc.as_object_mut() {
        if let Some(s) = common.seed {
            obj.insert("seed".into(), s.into());
        }
        if let Some(t) = common.tol {
            obj.insert("tol".into(), t.into());
        }
    }
    parse_config(&doc.to_string()).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, common, suites, out) = match &cli.command {
        Command::Verify { suite, common } => {
            let suites = if suite == "all" {
                Vec::new()
            } else {
                match Suite::parse(suite) {
                    Some(s) => vec![s],
                    None => {
                        eprintln!("error: unknown suite \"{suite}\"");
                        return ExitCode::from(USAGE_ERROR);
                    }
                }
            };
            (Mode::Verify, common, suites, None)
        }
        Command::Converge { common, out } => (Mode::Converge, common, Vec::new(), out.clone()),
        Command::Dilate { common } => (Mode::Dilate, common, Vec::new(), None),
        Command::Uniqueness { common } => (Mode::Uniqueness, common, Vec::new(), None),
    };
    let cfg = match load(common) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE_ERROR);
        }
    };
    let report = run_suite(&cfg, mode, &suites);
    print!("{}", report.render());
    if let Some(csv) = &report.csv {
        match out.or_else(|| cfg.output.clone()) {
            Some(path) => {
                if let Err(e) = std::fs::write(&path, csv) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(USAGE_ERROR);
                }
                println!("wrote {}", path.display());
            }
            None => print!("{csv}"),
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
