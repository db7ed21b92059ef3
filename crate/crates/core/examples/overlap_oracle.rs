//! Closed-form matrix elements between two frozen Gaussians next to a brute-force
//! Gauss-Hermite quadrature of the same integrals.

use qeom::integrals::{hamiltonian_element, hamiltonian_moment_10, kinetic, overlap};
use qeom::potentials::{ferretti, FerrettiParams};
use qeom::quadrature::Oracle;
use qeom::FrozenGaussian;

fn main() -> qeom::Result<()> {
    let ham = ferretti(&FerrettiParams::default())?;
    let widths = vec![22.2, 12.9];
    let bra = FrozenGaussian::new(0, vec![3.0, 0.1], vec![-5.0, 2.0], 0.0, widths.clone())?;
    let ket = FrozenGaussian::new(1, vec![3.2, -0.05], vec![-4.0, 1.0], 0.7, widths)?;
    let q = Oracle::default();

    println!("{:<12} {:>44} {:>44}", "element", "closed form", "quadrature");
    let rows = [
        ("overlap", overlap(&bra, &ket)?, q.overlap(&bra, &ket)),
        ("kinetic", kinetic(&bra, &ket, ham.masses())?, q.kinetic(&bra, &ket, ham.masses())),
        ("H (0,1)", hamiltonian_element(&bra, &ket, &ham)?, q.hamiltonian(&bra, &ket, &ham)),
        ("H10_x", hamiltonian_moment_10(&bra, &ket, &ham, 0)?, q.hamiltonian_moment_10(&bra, &ket, &ham, 0)),
        ("H10_y", hamiltonian_moment_10(&bra, &ket, &ham, 1)?, q.hamiltonian_moment_10(&bra, &ket, &ham, 1)),
    ];
    for (name, closed, quad) in rows {
        println!("{name:<12} {:>44} {:>44}", format!("{closed:.15e}"), format!("{quad:.15e}"));
    }
    Ok(())
}
