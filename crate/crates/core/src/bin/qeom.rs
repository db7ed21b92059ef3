use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser};
use qeom::config::{ModeName, RunConfig};
use qeom::run::run;
use qeom::Error;

/// Propagate a frozen-Gaussian wavepacket and write frames CSVs plus a manifest.
#[derive(Parser, Debug)]
#[command(version, group(ArgGroup::new("source").required(true).args(["config", "preset"])))]
struct Args {
    /// TOML run config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in preset: double_well or ferretti.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated modes: classical, quantum, auto.
    #[arg(long, value_delimiter = ',')]
    mode: Option<Vec<String>>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Record every n-th step.
    #[arg(long)]
    stride: Option<usize>,
}

fn load(args: &Args) -> Result<RunConfig, Error> {
    let mut config = match (&args.config, &args.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
                key: "config".into(),
                reason: format!("{}: {e}", path.display()),
            })?;
            RunConfig::from_toml(&text)?
        }
        (None, Some(name)) => RunConfig::preset(name)?,
        (None, None) => unreachable!("clap requires a source"),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(modes) = &args.mode {
        config.modes = modes.iter().map(|m| ModeName::parse(m)).collect::<Result<_, _>>()?;
    }
    if let Some(stride) = args.stride {
        config.stride = stride;
    }
    config.validate()?;
    Ok(config)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = load(&args).and_then(|config| run(&config, &args.out));
    match result {
        Ok(manifest) => {
            for r in &manifest.runs {
                println!("{}", args.out.join(&r.file).display());
            }
            println!("{}", args.out.join("manifest.toml").display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
