//! Writes a commutative observable as a convex combination of sharp
//! observables obtained from its spectral projections by relabeling.
//!
//! `cargo run --example mixture_decomposition`

use povmlab::generate::{random_fuzzy, seeded};
use povmlab::linalg::Tolerance;
use povmlab::representation::{
    mixture_decomposition, reconstruct_mixture, spectral_representation,
};

fn main() -> povmlab::error::Result<()> {
    let tol = Tolerance::default();
    let triple = random_fuzzy(6, 3, 4, &mut seeded(2024))?;
    let rep = spectral_representation(&triple.fuzzy, &tol)?;
    let dec = mixture_decomposition(&rep, &tol);

    println!(
        "{} spectral projections, {} outcomes",
        rep.len(),
        triple.fuzzy.len()
    );
    for (w, map) in dec.weights().iter().zip(dec.components()) {
        println!("  weight {w:.6}: projection k goes to outcome {map:?}");
    }
    let m = reconstruct_mixture(&dec, &rep)?;
    println!(
        "reconstruction error {:.1e}",
        m.max_effect_diff(&triple.fuzzy)?
    );
    Ok(())
}
