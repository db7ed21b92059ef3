//! Writes frames CSVs and a manifest for a built-in preset, the same as the `qeom` binary.
//! Usage: `cargo run --release --example run_from_preset -- [double_well|ferretti] [out_dir]`.

use std::path::PathBuf;

use qeom::config::RunConfig;

fn main() {
    let mut args = std::env::args().skip(1);
    let preset = args.next().unwrap_or_else(|| "double_well".into());
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out".into()));
    let result = RunConfig::preset(&preset).and_then(|cfg| qeom::run::run(&cfg, &out));
    match result {
        Ok(m) => {
            for r in &m.runs {
                println!("{} {} steps, {} frames -> {}", r.mode.as_str(), r.summary.steps, r.summary.frames, out.join(&r.file).display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
