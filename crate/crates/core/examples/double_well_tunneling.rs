//! One TBF started at rest in the left well: classical center motion stays in the well,
//! the quantum EOM carries the center further toward the barrier and conserves the
//! quantum energy.

use qeom::config::{ModeName, RunConfig};
use qeom::observables::relative_energy_drift;
use qeom::run::simulate_frames;

fn main() -> qeom::Result<()> {
    let cfg = RunConfig::preset("double_well")?;
    for mode in [ModeName::Classical, ModeName::Quantum] {
        let (frames, summary) = simulate_frames(&cfg, mode)?;
        let max_r = frames.iter().map(|f| f.positions[0][0]).fold(f64::MIN, f64::max);
        println!(
            "{:<9} steps {:>6}  E_QM drift {:.2e}  max R {:+.4}",
            mode.as_str(),
            summary.steps,
            relative_energy_drift(&frames),
            max_r
        );
    }
    Ok(())
}
