use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use padic_tower::scenario::{self, Overrides, Report, Scenario};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "ptower", version, about = "Run and verify p-adic tower scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Override the p-adic precision N.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Override the series cutoff D.
    #[arg(long, global = true)]
    cutoff: Option<usize>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a scenario from a JSON config file.
    Run { config: String },
    /// Run a bundled scenario.
    Builtin { name: String },
    /// List bundled scenarios.
    List {
        /// Print a JSON array.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

const CONFIG_ERROR: u8 = 4;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(CONFIG_ERROR) } else { ExitCode::SUCCESS };
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(CONFIG_ERROR);
        }
        pool = pool.num_threads(j);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(CONFIG_ERROR);
        }
    };
    pool.install(|| execute(&cli))
}

fn execute(cli: &Cli) -> ExitCode {
    let overrides = Overrides { precision: cli.precision, cutoff: cli.cutoff };
    let report = match &cli.command {
        Command::List { json } => {
            list(*json || cli.format == Format::Json);
            return ExitCode::SUCCESS;
        }
        Command::Builtin { name } => match scenario::builtin(name) {
            Some(b) => scenario::run_json(b.config, &overrides),
            None => {
                eprintln!("error: no builtin scenario named {name:?}; try `ptower list`");
                return ExitCode::from(CONFIG_ERROR);
            }
        },
        Command::Run { config } => match std::fs::read_to_string(config) {
            Ok(text) => scenario::run_json(&text, &overrides),
            Err(e) => {
                eprintln!("error: cannot read {config}: {e}");
                return ExitCode::from(CONFIG_ERROR);
            }
        },
    };
    emit(&report, cli.format);
    ExitCode::from(report.exit_code() as u8)
}

fn emit(report: &Report, format: Format) {
    log::info!("{} finished with verdict {:?}", report.name, report.verdict);
    match format {
        Format::Json => print!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
}

fn list(machine: bool) {
    let all = scenario::builtins();
    if machine {
        let items: Vec<_> = all
            .iter()
            .map(|b| {
                let kind = Scenario::from_json(b.config).map(|s| s.kind.name()).unwrap_or("?");
                json!({ "name": b.name, "kind": kind, "description": b.description })
            })
            .collect();
        print!("{}", scenario::canonical_json(&json!(items)));
    } else {
        let width = all.iter().map(|b| b.name.len()).max().unwrap_or(0);
        for b in &all {
            println!("{:width$}  {}", b.name, b.description);
        }
    }
}
