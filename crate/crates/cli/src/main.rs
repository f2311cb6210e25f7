use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sciai_cli::{run, Config, Stage};
use sciai_core::ai::AiMode;
use sciai_core::scoring::{CapabilitySupport, DirectMeasure, PotentialMeasure};
use sciai_core::synth::{generate, SynthSpec};
use sciai_core::Result;

#[derive(Parser)]
#[command(
    name = "sciai",
    version,
    about = "Measure direct and potential AI impact on scientific fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load and validate inputs.
    Ingest(RunArgs),
    /// Label AI papers and patents, derive the AI n-gram lexicon and hit papers.
    Label(RunArgs),
    /// Compute direct and potential scores.
    Score(RunArgs),
    /// Run the downstream analyses.
    Analyze(RunArgs),
    /// Write plot tables, correlations and replication checks.
    Report(RunArgs),
    /// All stages.
    Run(RunArgs),
    /// Write a synthetic corpus and a matching config.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        papers_per_cell: Option<usize>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    from_year: Option<i32>,
    #[arg(long)]
    to_year: Option<i32>,
    #[arg(long, value_parser = parse_serde::<AiMode>)]
    ai_mode: Option<AiMode>,
    #[arg(long, value_parser = parse_serde::<DirectMeasure>)]
    direct_measure: Option<DirectMeasure>,
    #[arg(long, value_parser = parse_serde::<PotentialMeasure>)]
    potential_measure: Option<PotentialMeasure>,
    #[arg(long, value_parser = parse_serde::<CapabilitySupport>)]
    eq2_support: Option<CapabilitySupport>,
    #[arg(long)]
    freeze_year: Option<i32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    shards: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Count each n-gram and task at most once per document.
    #[arg(long)]
    unique_per_doc: bool,
    #[arg(long)]
    no_cache: bool,
    /// Pooled-variance instead of Welch t-tests.
    #[arg(long)]
    pooled_t: bool,
    /// Print the merged config as TOML and exit.
    #[arg(long)]
    print_effective_config: bool,
}

fn parse_serde<T: serde::de::DeserializeOwned>(s: &str) -> std::result::Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

impl RunArgs {
    fn config(&self) -> Result<Config> {
        let mut cfg = Config::load(&self.config)?;
        let r = &mut cfg.run;
        if let Some(y) = self.from_year {
            r.from_year = y;
        }
        if let Some(y) = self.to_year {
            r.to_year = y;
        }
        if let Some(s) = self.seed {
            r.seed = s;
        }
        if let Some(n) = self.shards {
            r.shards = n;
        }
        if let Some(o) = &self.out {
            r.out = o.clone();
        }
        if self.no_cache {
            r.cache = false;
        }
        if let Some(m) = self.ai_mode {
            cfg.ai.mode = m;
        }
        let s = &mut cfg.scoring;
        if let Some(m) = self.direct_measure {
            s.direct_measure = m;
        }
        if let Some(m) = self.potential_measure {
            s.potential_measure = m;
        }
        if let Some(m) = self.eq2_support {
            s.eq2_support = m;
        }
        if let Some(y) = self.freeze_year {
            s.freeze_year = Some(y);
        }
        if self.unique_per_doc {
            s.unique_per_doc = true;
        }
        if self.pooled_t {
            cfg.analysis.pooled_t = true;
        }
        Ok(cfg)
    }
}

fn execute(cli: Cli) -> Result<()> {
    let (args, stage) = match cli.command {
        Command::Ingest(a) => (a, Stage::Ingest),
        Command::Label(a) => (a, Stage::Label),
        Command::Score(a) => (a, Stage::Score),
        Command::Analyze(a) => (a, Stage::Analyze),
        Command::Report(a) | Command::Run(a) => (a, Stage::Report),
        Command::Synth {
            out,
            seed,
            papers_per_cell,
        } => {
            let mut spec = SynthSpec {
                seed,
                ..SynthSpec::default()
            };
            if let Some(n) = papers_per_cell {
                spec.papers_per_cell = n;
            }
            let path = generate(&spec).write(&out)?;
            println!("{}", path.display());
            return Ok(());
        }
    };
    let cfg = args.config()?;
    if args.print_effective_config {
        print!("{}", cfg.to_toml());
        return Ok(());
    }
    run(&cfg, stage)?;
    println!("{stage} finished; outputs in {}", cfg.run.out.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    // a panic is an internal error; the hook has already printed it
    match std::panic::catch_unwind(|| execute(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => ExitCode::from(3),
    }
}
