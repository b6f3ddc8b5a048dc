//! Spectral representation of an unsharp spin observable.
//!
//! `cargo run --example spectral_representation`

use povmlab::linalg::Tolerance;
use povmlab::observables::fixtures::smeared_qubit;
use povmlab::representation::{reconstruct_spectral, spectral_representation};

fn main() -> povmlab::error::Result<()> {
    let tol = Tolerance::default();
    let e = smeared_qubit(0.5);
    let rep = spectral_representation(&e, &tol)?;

    for (k, (p, row)) in rep.projections().iter().zip(rep.rows()).enumerate() {
        println!(
            "P_{k} diagonal {:?} -> outcome weights {:?}",
            p.diagonal_real(),
            row.weights()
        );
    }
    let error = reconstruct_spectral(&rep).max_effect_diff(&e)?;
    println!("reconstruction error {error:.1e}");
    Ok(())
}
