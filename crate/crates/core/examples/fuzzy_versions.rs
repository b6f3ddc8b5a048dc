//! Finding the classical post-processing that turns one observable into
//! another, and recognising relabelings.
//!
//! `cargo run --example fuzzy_versions`

use povmlab::fuzzy::{
    find_fuzzy_kernel, find_fuzzy_kernel_canonical, is_relabeling, relabel, Relabeling,
};
use povmlab::linalg::Tolerance;
use povmlab::observables::fixtures::{computational_basis, sharp_x, sharp_z, smeared_qubit};
use povmlab::observables::OutcomeSet;

fn main() -> povmlab::error::Result<()> {
    let tol = Tolerance::default();

    match find_fuzzy_kernel(&smeared_qubit(0.5), &sharp_z(), &tol)? {
        Some(k) => println!("smeared spin-z from spin-z: kernel {:?}", k.matrix()),
        None => println!("smeared spin-z is not a post-processing of spin-z"),
    }
    let xz = find_fuzzy_kernel(&sharp_x(), &sharp_z(), &tol)?;
    println!(
        "spin-x from spin-z: {}",
        if xz.is_some() {
            "feasible"
        } else {
            "infeasible"
        }
    );

    let f = computational_basis(4);
    let parity = Relabeling::from_labels(
        f.outcomes().clone(),
        OutcomeSet::new(["even", "odd"])?,
        &[("0", "even"), ("1", "odd"), ("2", "even"), ("3", "odd")],
    )?;
    let e = relabel(&f, &parity)?;
    if let Some(k) = find_fuzzy_kernel_canonical(&e, &f, &tol)? {
        if let Some(phi) = is_relabeling(&k, &tol) {
            println!("parity observable recovered as relabeling {:?}", phi.map());
        }
    }
    Ok(())
}
