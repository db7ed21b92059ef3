//! Two TBFs in the double well under the automatic classical/quantum switch. Usage:
//! `cargo run --release --example auto_switching -- [delta] [monitor]`, where monitor is
//! one of classical_energy_step, quantum_energy_step, quantum_energy_drift,
//! classical_energy_drift.

use qeom::config::{ModeName, RunConfig};
use qeom::dynamics::AutoMonitor;
use qeom::observables::{max_norm_error, relative_energy_drift, weight_total_variation};
use qeom::run::simulate_frames;

fn main() -> qeom::Result<()> {
    let mut args = std::env::args().skip(1);
    let mut cfg = RunConfig::preset("double_well")?;
    cfg.n_tbfs = 2;
    if let Some(d) = args.next() {
        cfg.auto.delta = d.parse().map_err(|_| qeom::Error::Config { key: "delta".into(), reason: d })?;
    }
    if let Some(m) = args.next() {
        cfg.auto.monitor = match m.as_str() {
            "quantum_energy_step" => AutoMonitor::QuantumEnergyStep,
            "quantum_energy_drift" => AutoMonitor::QuantumEnergyDrift,
            "classical_energy_drift" => AutoMonitor::ClassicalEnergyDrift,
            _ => AutoMonitor::ClassicalEnergyStep,
        };
    }
    println!("delta {:e}, monitor {:?}", cfg.auto.delta, cfg.auto.monitor);
    for mode in [ModeName::Classical, ModeName::Auto, ModeName::Quantum] {
        let (frames, summary) = simulate_frames(&cfg, mode)?;
        println!(
            "{:<9} quantum steps {:>6}/{}  E_QM drift {:.2e}  |norm-1| {:.1e}  weight TV {:.3}",
            mode.as_str(),
            summary.quantum_steps,
            summary.steps,
            relative_energy_drift(&frames),
            max_norm_error(&frames),
            weight_total_variation(&frames, true)
        );
    }
    Ok(())
}
