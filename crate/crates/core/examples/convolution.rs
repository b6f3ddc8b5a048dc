//! Smeared position measurement on the cyclic group Z_n: the spectral
//! rows are shifted copies of the smearing measure and the mixture weights
//! are its values.
//!
//! `cargo run --example convolution`

use povmlab::linalg::Tolerance;
use povmlab::representation::{
    convolution_observable, mixture_decomposition, spectral_representation, CyclicMeasure,
};

fn main() -> povmlab::error::Result<()> {
    let tol = Tolerance::default();
    let nu = CyclicMeasure::new(vec![0.5, 0.3, 0.0, 0.0, 0.2], &tol)?;
    let e = convolution_observable(&nu);
    let rep = spectral_representation(&e, &tol)?;
    for (p, row) in rep.projections().iter().zip(rep.rows()) {
        let x = p.diagonal_real().iter().position(|v| *v > 0.5).unwrap_or(0);
        println!("point {x}: {:?}", row.weights());
    }
    let dec = mixture_decomposition(&rep, &tol);
    println!("mixture weights {:?}", dec.weights());
    Ok(())
}
