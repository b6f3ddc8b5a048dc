//! Standard small observables used in tests, examples and the generator.

use std::f64::consts::PI;

use super::{Observable, OutcomeSet};
use crate::linalg::{ComplexMatrix, C64};

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).expect("2x2")
}

pub fn pauli_y() -> ComplexMatrix {
    let i = C64::new(0.0, 1.0);
    let z = C64::new(0.0, 0.0);
    ComplexMatrix::from_rows(&[vec![z, -i], vec![i, z]]).expect("2x2")
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
}

/// `{I/2, I/2}` on `C^dim`.
pub fn coin(dim: usize) -> Observable {
    let half = ComplexMatrix::identity(dim).scale(0.5);
    Observable::new(
        OutcomeSet::range(2).expect("labels"),
        vec![half.clone(), half],
    )
    .expect("shapes")
}

/// Single outcome with effect `I`.
pub fn trivial(dim: usize) -> Observable {
    Observable::new(
        OutcomeSet::range(1).expect("labels"),
        vec![ComplexMatrix::identity(dim)],
    )
    .expect("shapes")
}

/// Rank-one projections onto the standard basis of `C^dim`.
pub fn computational_basis(dim: usize) -> Observable {
    let effects = (0..dim)
        .map(|k| {
            let mut diag = vec![0.0; dim];
            diag[k] = 1.0;
            ComplexMatrix::from_real_diagonal(&diag)
        })
        .collect();
    Observable::new(OutcomeSet::range(dim).expect("labels"), effects).expect("shapes")
}

/// Spin-z projections `(I +- sz)/2` on outcomes `"0"`, `"1"`.
pub fn sharp_z() -> Observable {
    smeared_qubit(1.0)
}

/// Spin-x projections `(I +- sx)/2` on outcomes `"0"`, `"1"`.
pub fn sharp_x() -> Observable {
    smeared_x(1.0)
}

/// `(I +- t sz)/2`, the unsharp spin-z observable.
pub fn smeared_qubit(t: f64) -> Observable {
    along(&pauli_z(), t)
}

/// `(I +- t sx)/2`.
pub fn smeared_x(t: f64) -> Observable {
    along(&pauli_x(), t)
}

fn along(sigma: &ComplexMatrix, t: f64) -> Observable {
    let id = ComplexMatrix::identity(2);
    let plus = (&id + &sigma.scale(t)).scale(0.5);
    let minus = (&id - &sigma.scale(t)).scale(0.5);
    Observable::new(OutcomeSet::range(2).expect("labels"), vec![plus, minus]).expect("shapes")
}

/// Qubit trine: `(I + n_k . s)/3` for three unit vectors at 120 degrees in
/// the x-z plane.
pub fn trine() -> Observable {
    let id = ComplexMatrix::identity(2);
    let effects = (0..3)
        .map(|k| {
            let angle = 2.0 * PI * k as f64 / 3.0;
            let mut e = id.clone();
            e.add_scaled(angle.sin(), &pauli_x());
            e.add_scaled(angle.cos(), &pauli_z());
            e.scale(1.0 / 3.0)
        })
        .collect();
    Observable::new(OutcomeSet::range(3).expect("labels"), effects).expect("shapes")
}
