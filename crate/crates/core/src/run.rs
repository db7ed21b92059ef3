//! Run orchestration: propagation loops, frames CSVs and the manifest.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::basis::WavefunctionState;
use crate::config::{ModeName, RunConfig};
use crate::dynamics::Propagator;
use crate::error::{Error, Result};
use crate::observables::FrameRecord;
use crate::sampling::initial_state;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Per-mode totals over a run.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ModeSummary {
    pub steps: usize,
    pub quantum_steps: usize,
    /// Largest per-TBF conservation residual seen in any quantum step.
    pub max_residual: f64,
    pub frames: usize,
}

/// Sampled and projected initial state for `config`.
pub fn prepare(config: &RunConfig) -> Result<WavefunctionState> {
    initial_state(
        &config.wavepacket,
        config.n_tbfs,
        config.seed,
        config.model.masses(),
        config.model.n_states(),
        config.all_states,
    )
}

/// Propagates one mode, handing each recorded frame to `on_frame`.
///
/// Frames are recorded at step 0, every `stride` steps, and at the final step.
pub fn simulate<F>(config: &RunConfig, mode: ModeName, mut on_frame: F) -> Result<ModeSummary>
where
    F: FnMut(&FrameRecord) -> Result<()>,
{
    config.validate()?;
    let ham = config.model.hamiltonian()?;
    let mut state = prepare(config)?;
    let mut prop = Propagator::new(ham.clone(), config.mode(mode), config.resolved_dt())?;
    let n_steps = config.n_steps();
    let mut summary = ModeSummary {
        steps: n_steps,
        ..Default::default()
    };
    on_frame(&FrameRecord::capture(&state, &ham, config.z_coupling, mode == ModeName::Quantum)?)?;
    summary.frames += 1;
    for k in 1..=n_steps {
        let (next, report) = prop.step(&state)?;
        state = next;
        if report.used_quantum {
            summary.quantum_steps += 1;
            summary.max_residual = summary.max_residual.max(report.max_residual);
        }
        if k % config.stride == 0 || k == n_steps {
            on_frame(&FrameRecord::capture(&state, &ham, config.z_coupling, report.used_quantum)?)?;
            summary.frames += 1;
        }
    }
    Ok(summary)
}

/// All frames of one mode in memory.
pub fn simulate_frames(config: &RunConfig, mode: ModeName) -> Result<(Vec<FrameRecord>, ModeSummary)> {
    let mut frames = Vec::new();
    let summary = simulate(config, mode, |f| {
        frames.push(f.clone());
        Ok(())
    })?;
    Ok((frames, summary))
}

/// Column names of a frames CSV.
pub fn frame_header(n_states: usize, n_tbfs: usize, ndof: usize) -> Vec<String> {
    let mut h: Vec<String> = ["time", "e_qm", "e_cl_total", "norm", "residual", "quantum_step"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    h.extend((0..n_states).map(|s| format!("pop_{s}")));
    for i in 0..n_tbfs {
        h.push(format!("e_cl_{i}"));
        h.push(format!("w_mulliken_{i}"));
        h.push(format!("w_raw_{i}"));
        h.extend((0..ndof).map(|d| format!("r_{i}_{d}")));
        h.extend((0..ndof).map(|d| format!("p_{i}_{d}")));
    }
    h
}

/// One CSV row, in [`frame_header`] order.
pub fn frame_row(f: &FrameRecord) -> Vec<String> {
    let mut row = vec![
        g17(f.time),
        g17(f.quantum_energy),
        g17(f.classical_energy_total),
        g17(f.norm),
        g17(f.residual),
        (f.used_quantum as u8).to_string(),
    ];
    row.extend(f.populations.iter().map(|&v| g17(v)));
    for i in 0..f.classical_energies.len() {
        row.push(g17(f.classical_energies[i]));
        row.push(g17(f.weights.mulliken[i]));
        row.push(g17(f.weights.raw[i]));
        row.extend(f.positions[i].iter().map(|&v| g17(v)));
        row.extend(f.momenta[i].iter().map(|&v| g17(v)));
    }
    row
}

/// C `printf("%.17g")`.
pub fn g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        strip_zeros(&format!("{:.*}", (16 - exp) as usize, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Echo of a run, written as `manifest.toml`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub engine: String,
    pub version: String,
    pub n_steps: usize,
    pub runs: Vec<ModeRun>,
    /// Resolved config; feeding this table back as a config reproduces the run.
    pub config: RunConfig,
}

/// One finished mode in the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeRun {
    pub mode: ModeName,
    pub file: String,
    #[serde(flatten)]
    pub summary: ModeSummary,
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    }
}

fn write_mode(config: &RunConfig, mode: ModeName, dir: &Path) -> Result<(PathBuf, ModeSummary)> {
    let name = format!("{}_frames.csv", mode.as_str());
    let path = dir.join(&name);
    let partial = dir.join(format!("{name}.partial"));
    let file = File::create(&partial).map_err(|e| io_err(&partial, e))?;
    let mut out = BufWriter::new(file);
    let n_states = config.model.n_states();
    let n_tbfs = config.n_tbfs * if config.all_states { n_states } else { 1 };
    let header = frame_header(n_states, n_tbfs, config.model.masses().len());
    let result = writeln!(out, "{}", header.join(","))
        .map_err(|e| io_err(&partial, e))
        .and_then(|_| {
            simulate(config, mode, |f| {
                writeln!(out, "{}", frame_row(f).join(",")).map_err(|e| io_err(&partial, e))
            })
        })
        .and_then(|s| out.flush().map(|_| s).map_err(|e| io_err(&partial, e)));
    drop(out);
    match result {
        Ok(summary) => {
            fs::rename(&partial, &path).map_err(|e| io_err(&path, e))?;
            Ok((path, summary))
        }
        Err(e) => {
            let _ = fs::remove_file(&partial);
            Err(e)
        }
    }
}

/// Validates `config`, then writes one frames CSV per mode and `manifest.toml` into `dir`.
///
/// Nothing is created when validation fails. If a mode fails, its partial CSV is removed
/// and the error is returned; CSVs of modes that already finished are kept.
pub fn run(config: &RunConfig, dir: &Path) -> Result<Manifest> {
    config.validate()?;
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut runs = Vec::new();
    for &mode in &config.modes {
        let (path, summary) = write_mode(config, mode, dir)?;
        runs.push(ModeRun {
            mode,
            file: path.file_name().unwrap().to_string_lossy().into_owned(),
            summary,
        });
    }
    let manifest = Manifest {
        engine: "qeom".into(),
        version: ENGINE_VERSION.into(),
        n_steps: config.n_steps(),
        runs,
        config: config.resolved(),
    };
    let path = dir.join("manifest.toml");
    let text = toml::to_string(&manifest).expect("manifest serializes");
    fs::write(&path, text).map_err(|e| io_err(&path, e))?;
    Ok(manifest)
}
