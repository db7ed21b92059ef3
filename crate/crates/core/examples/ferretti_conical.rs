//! Two-state conical-intersection model over one X half-period, with TBFs on both states
//! at every sampled center. Compares the classical EOM with the quantum EOM under both
//! choices of `Z` coupling. Pass a number of half-periods to shorten or lengthen the run.

use qeom::config::{ModeName, RunConfig};
use qeom::dynamics::ZCoupling;
use qeom::observables::{classical_energy_fluctuation, max_norm_error, relative_energy_drift};
use qeom::run::simulate_frames;

fn main() -> qeom::Result<()> {
    let mut cfg = RunConfig::preset("ferretti")?;
    if let Some(h) = std::env::args().nth(1) {
        cfg.half_periods = h.parse().ok();
    }
    let runs = [
        ("classical", ModeName::Classical, ZCoupling::SameState),
        ("quantum/same", ModeName::Quantum, ZCoupling::SameState),
        ("quantum/all", ModeName::Quantum, ZCoupling::AllStates),
    ];
    for (label, mode, coupling) in runs {
        cfg.z_coupling = coupling;
        let (frames, _) = simulate_frames(&cfg, mode)?;
        let last = frames.last().expect("at least one frame");
        println!(
            "{label:<13} E_QM drift {:.2e}  |norm-1| {:.1e}  E_cl fluctuation {:.2e}  P(state 1) {:.4}",
            relative_energy_drift(&frames),
            max_norm_error(&frames),
            classical_energy_fluctuation(&frames),
            last.populations[1]
        );
    }
    Ok(())
}
