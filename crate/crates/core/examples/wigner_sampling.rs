//! Samples TBF centers from the Wigner distribution of a Gaussian wavepacket and projects
//! the wavepacket onto growing bases.

use qeom::sampling::{build_basis, project_amplitudes, wigner_sample, InitialWavepacket};

fn main() -> qeom::Result<()> {
    let wp = InitialWavepacket { state: 0, position: vec![0.0], momentum: vec![2.0], widths: vec![0.5] };
    let centers = wigner_sample(&wp, 100_000, 7)?;
    let n = centers.len() as f64;
    let var = |f: &dyn Fn(usize) -> f64, mean: f64| (0..centers.len()).map(|i| (f(i) - mean).powi(2)).sum::<f64>() / (n - 1.0);
    println!(
        "std R {:.4}  std P {:.4}  (expected {:.4})",
        var(&|i| centers[i].position[0], 0.0).sqrt(),
        var(&|i| centers[i].momentum[0], 2.0).sqrt(),
        0.5f64.sqrt()
    );

    let wp = InitialWavepacket { widths: vec![4.0], ..wp };
    let centers = wigner_sample(&wp, 6, 3)?;
    for k in 1..=centers.len() {
        let basis = build_basis(&wp, &centers[..k], vec![1.0], 1, false)?;
        let p = project_amplitudes(&basis, &wp)?;
        println!("{k} TBFs: captured norm {:.12}", p.captured_norm);
    }
    Ok(())
}
