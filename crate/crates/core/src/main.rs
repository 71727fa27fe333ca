use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kmsq::cli::{self, CliError, RunConfig, Settings};

#[derive(Parser)]
#[command(name = "kmsq", version, about = "Seeds, verification and coset-complex spectra for KMS quotients")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a seed triple and check its conditions.
    Seed(Flags),
    /// Run every verification section on a seed.
    Verify(Flags),
    /// Build the coset complex (k = 1) or its links and compare spectra.
    Complex(Flags),
    /// Summarize the reports in the output directory.
    Report(Flags),
}

#[derive(Args)]
struct Flags {
    /// key=value config file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    /// sl or sp
    #[arg(long)]
    variant: Option<String>,
    /// verify: auto, full, envelope, none; complex: full, links
    #[arg(long)]
    mode: Option<String>,
    /// enumeration cap
    #[arg(long)]
    cap: Option<u128>,
    #[arg(long)]
    word_budget: Option<usize>,
    /// spectral tolerance
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    rng_seed: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// seed file to use instead of building one
    #[arg(long)]
    seed: Option<PathBuf>,
}

impl Flags {
    fn settings(&self) -> Result<Settings, CliError> {
        let base = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        let mut f = Settings::default();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                f.set(k, v);
            }
        };
        put("p", self.p.map(|x| x.to_string()));
        put("r", self.r.map(|x| x.to_string()));
        put("k", self.k.map(|x| x.to_string()));
        put("variant", self.variant.clone());
        put("mode", self.mode.clone());
        put("cap", self.cap.map(|x| x.to_string()));
        put("word-budget", self.word_budget.map(|x| x.to_string()));
        put("tol", self.tol.map(|x| x.to_string()));
        put("rng-seed", self.rng_seed.clone());
        put("out", self.out.as_ref().map(|x| x.display().to_string()));
        put("seed", self.seed.as_ref().map(|x| x.display().to_string()));
        Ok(base.overlay(&f))
    }

    fn config(&self) -> Result<RunConfig, CliError> {
        Ok(RunConfig::from_settings(&self.settings()?)?)
    }

    fn out(&self) -> Result<PathBuf, CliError> {
        Ok(self.settings()?.0.get("out").map(PathBuf::from).unwrap_or_else(|| PathBuf::from(RunConfig::DEFAULT_OUT)))
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let outcome = match cli.cmd {
        Cmd::Seed(f) => cli::cmd_seed(&f.config()?)?,
        Cmd::Verify(f) => cli::cmd_verify(&f.config()?)?.0,
        Cmd::Complex(f) => cli::cmd_complex(&f.config()?)?.0,
        Cmd::Report(f) => cli::cmd_report(&f.out()?)?,
    };
    println!("{}", outcome.summary.trim_end());
    for p in &outcome.written {
        println!("wrote {}", p.display());
    }
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
