//! Commutants of operator families and the double commutant of an abelian
//! family.
//!
//! `cargo run --example commutant`

use povmlab::linalg::ComplexMatrix;
use povmlab::linalg::{commutant_basis, Tolerance};
use povmlab::observables::fixtures::{pauli_x, pauli_z};
use povmlab::observables::{is_maximally_commutative, Observable, OutcomeSet};

fn main() -> povmlab::error::Result<()> {
    let tol = Tolerance::default();
    println!(
        "{{sz}}: dimension {}",
        commutant_basis(&[pauli_z()], &tol)?.len()
    );
    println!(
        "{{sz, sx}}: dimension {}",
        commutant_basis(&[pauli_z(), pauli_x()], &tol)?.len()
    );

    let commutant = commutant_basis(&[pauli_z()], &tol)?;
    println!(
        "double commutant of {{sz}}: dimension {}",
        commutant_basis(&commutant, &tol)?.len()
    );

    // A rank-two projection leaves room for non-commuting operators.
    let coarse = Observable::new(
        OutcomeSet::new(["low", "high"])?,
        vec![
            ComplexMatrix::from_real_diagonal(&[1.0, 1.0, 0.0]),
            ComplexMatrix::from_real_diagonal(&[0.0, 0.0, 1.0]),
        ],
    )?;
    println!(
        "coarse measurement: commutant dimension {}, maximal abelian {}",
        commutant_basis(coarse.effects(), &tol)?.len(),
        is_maximally_commutative(&coarse, &tol)?
    );
    Ok(())
}
