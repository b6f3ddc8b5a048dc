//! Reference values computed independently with numpy/scipy
//! (`tools/oracle.py`) and frozen here.

mod common;

use common::{max_diff, tol};
use povmlab::feasibility::encode_kernel_problem;
use povmlab::fuzzy::{apply_kernel, find_fuzzy_kernel, MarkovKernel};
use povmlab::joint::{joint_for_commuting_pair, marginals, product_joint};
use povmlab::linalg::{
    commutant_basis, hermitian_eig, nullspace, simultaneous_diagonalization, ComplexMatrix,
    RectMatrix, C64,
};
use povmlab::observables::fixtures::*;
use povmlab::observables::{
    is_commutative, is_maximally_commutative, outcome_distribution, Observable, OutcomeSet, State,
};
use povmlab::representation::{
    mixture_decomposition, reconstruct_mixture, spectral_representation,
};

fn close(a: f64, b: f64, eps: f64) -> bool {
    (a - b).abs() <= eps
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn eigenvalues_of_complex_hermitian_matrix() {
    let h = ComplexMatrix::from_rows(&[
        vec![c(2.0, 0.0), c(1.0, -1.0), c(0.0, 0.0), c(0.0, 0.5)],
        vec![c(1.0, 1.0), c(3.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, -1.0)],
        vec![c(0.0, -0.5), c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)],
    ])
    .unwrap();
    let eig = hermitian_eig(&h, &tol()).unwrap();
    let expected = [
        -0.7418554124033011,
        0.5749428783927932,
        1.942472890131301,
        4.22443964387921,
    ];
    for (got, want) in eig.values.iter().zip(expected) {
        assert!(close(*got, want, 1e-12), "{got} vs {want}");
    }
    assert!(eig.reconstruct().max_abs_diff(&h) < 1e-12);
}

#[test]
fn pauli_x_eigenvectors() {
    let eig = hermitian_eig(&pauli_x(), &tol()).unwrap();
    assert_eq!(eig.values.len(), 2);
    assert!(close(eig.values[0], -1.0, 1e-14) && close(eig.values[1], 1.0, 1e-14));
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v0 = eig.vectors.column(0);
    let v1 = eig.vectors.column(1);
    // Leading coordinate made real positive.
    assert!((v0[0] - c(s, 0.0)).norm() < 1e-14 && (v0[1] - c(-s, 0.0)).norm() < 1e-14);
    assert!((v1[0] - c(s, 0.0)).norm() < 1e-14 && (v1[1] - c(s, 0.0)).norm() < 1e-14);
}

#[test]
fn joint_values_of_pauli_x_family() {
    let family = [pauli_x(), &ComplexMatrix::identity(2) - &pauli_x()];
    let sd = simultaneous_diagonalization(&family, &tol()).unwrap();
    let mut tuples = sd.joint_values.clone();
    tuples.sort_by(|a, b| a[0].total_cmp(&b[0]));
    assert!(close(tuples[0][0], -1.0, 1e-14) && close(tuples[0][1], 2.0, 1e-14));
    assert!(close(tuples[1][0], 1.0, 1e-14) && close(tuples[1][1], 0.0, 1e-14));
}

#[test]
fn nullspace_of_row_vector() {
    let basis = nullspace(
        &RectMatrix::from_real_rows(&[vec![1.0, 1.0]]).unwrap(),
        &tol(),
    )
    .unwrap();
    assert_eq!(basis.len(), 1);
    let b = &basis[0];
    assert!(((b[0] + b[1]).norm()) < 1e-14);
    assert!(close(b[0].norm(), std::f64::consts::FRAC_1_SQRT_2, 1e-14));
}

#[test]
fn commutant_dimensions() {
    assert_eq!(commutant_basis(&[pauli_z()], &tol()).unwrap().len(), 2);
    assert_eq!(
        commutant_basis(&[pauli_z(), pauli_x()], &tol())
            .unwrap()
            .len(),
        1
    );
    let block = |p: &ComplexMatrix| {
        let mut m = ComplexMatrix::zeros(4);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    m.set(2 * i + k, 2 * j + k, p.get(i, j));
                }
            }
        }
        m
    };
    let pz_i = Observable::new(
        OutcomeSet::range(2).unwrap(),
        sharp_z().effects().iter().map(block).collect(),
    )
    .unwrap();
    assert_eq!(commutant_basis(pz_i.effects(), &tol()).unwrap().len(), 8);
    assert!(!is_maximally_commutative(&pz_i, &tol()).unwrap());
    assert!(is_maximally_commutative(&sharp_z(), &tol()).unwrap());
}

#[test]
fn outcome_statistics() {
    let p = outcome_distribution(&smeared_qubit(0.5), &State::maximally_mixed(2), &tol()).unwrap();
    assert_eq!(p.weights(), &[0.5, 0.5]);

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus_x = State::pure(&[c(s, 0.0), c(s, 0.0)]).unwrap();
    let p = outcome_distribution(&trine(), &plus_x, &tol()).unwrap();
    for (got, want) in
        p.weights()
            .iter()
            .zip([0.33333333333333326, 0.6220084679281461, 0.04465819873852055])
    {
        assert!(close(*got, want, 1e-14));
    }
    let plus_i = State::pure(&[c(s, 0.0), c(0.0, s)]).unwrap();
    let p = outcome_distribution(&trine(), &plus_i, &tol()).unwrap();
    assert!(p.weights().iter().all(|w| close(*w, 1.0 / 3.0, 1e-14)));
}

#[test]
fn trine_commutator() {
    let (commutative, norm) = is_commutative(&trine(), &tol());
    assert!(!commutative);
    assert!(close(norm, 0.19245008972987523, 1e-14));
}

#[test]
fn kernel_feasibility_values() {
    let k = find_fuzzy_kernel(&smeared_qubit(0.5), &sharp_z(), &tol())
        .unwrap()
        .unwrap();
    let flat: Vec<f64> = k.matrix().iter().flatten().copied().collect();
    for (got, want) in flat.iter().zip([0.75, 0.25, 0.25, 0.75]) {
        assert!(close(*got, want, 1e-12));
    }
    let problem = encode_kernel_problem(&smeared_qubit(0.5), &sharp_z(), 1e-7).unwrap();
    assert_eq!(problem.num_vars(), 4);
    assert_eq!(problem.equalities().len(), 2 * 4 * 2 + 2);

    assert!(find_fuzzy_kernel(&sharp_x(), &sharp_z(), &tol())
        .unwrap()
        .is_none());
    assert!(find_fuzzy_kernel(&sharp_z(), &smeared_qubit(0.5), &tol())
        .unwrap()
        .is_none());

    let k = find_fuzzy_kernel(&smeared_qubit(0.25), &smeared_qubit(0.5), &tol())
        .unwrap()
        .unwrap();
    assert!(close(k.row(0)[0], 0.75, 1e-9) && close(k.row(1)[1], 0.75, 1e-9));

    assert!(find_fuzzy_kernel(&trine(), &trine(), &tol())
        .unwrap()
        .is_some());
    let k = find_fuzzy_kernel(&coin(2), &trine(), &tol())
        .unwrap()
        .unwrap();
    assert!(k.matrix().iter().flatten().all(|v| close(*v, 0.5, 1e-9)));
}

#[test]
fn commuting_joint_of_smeared_qubits() {
    let g = joint_for_commuting_pair(&smeared_qubit(0.5), &smeared_qubit(0.25), &tol())
        .unwrap()
        .joint()
        .unwrap();
    let expected = [
        [0.46875, 0.09375],
        [0.28125, 0.15625],
        [0.15625, 0.28125],
        [0.09375, 0.46875],
    ];
    for (effect, diag) in g.effects().iter().zip(expected) {
        assert!(effect.max_abs_diff(&ComplexMatrix::from_real_diagonal(&diag)) < 1e-14);
    }
}

#[test]
fn product_joint_of_trine() {
    let from = OutcomeSet::range(3).unwrap();
    let to = OutcomeSet::range(2).unwrap();
    let mu = MarkovKernel::new(
        from.clone(),
        to.clone(),
        vec![vec![1.0, 0.0], vec![0.5, 0.5], vec![0.0, 1.0]],
        &tol(),
    )
    .unwrap();
    let nu = MarkovKernel::new(
        from,
        to,
        vec![vec![0.2, 0.8], vec![0.6, 0.4], vec![1.0, 0.0]],
        &tol(),
    )
    .unwrap();
    let g = product_joint(&trine(), &mu, &nu).unwrap();
    let expected = [
        [0.183333333333333, 0.086602540378444, 0.15],
        [0.566666666666667, 0.057735026918963, 0.1],
        [0.216666666666667, -0.202072594216369, 0.65],
        [0.033333333333333, 0.057735026918963, 0.1],
    ];
    for (effect, [d0, off, d1]) in g.effects().iter().zip(expected) {
        let want = ComplexMatrix::from_real_rows(&[vec![d0, off], vec![off, d1]]).unwrap();
        assert!(effect.max_abs_diff(&want) < 1e-12);
    }
    let (e1, _) = marginals(&g).unwrap();
    let want = ComplexMatrix::from_real_rows(&[
        vec![0.75, 0.14433756729740643],
        vec![0.14433756729740643, 0.24999999999999994],
    ])
    .unwrap();
    assert!(e1.effects()[0].max_abs_diff(&want) < 1e-14);
    assert!(max_diff(&e1, &apply_kernel(&trine(), &mu).unwrap()) < 1e-15);
}

#[test]
fn rotated_commutative_observable() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let u = ComplexMatrix::from_rows(&[vec![c(s, 0.0), c(0.0, s)], vec![c(0.0, s), c(s, 0.0)]])
        .unwrap();
    let effects = [[0.6, 0.1], [0.3, 0.2], [0.1, 0.7]]
        .iter()
        .map(|d| ComplexMatrix::from_real_diagonal(d).conjugate_by(&u.adjoint()))
        .collect();
    let e = Observable::new(OutcomeSet::range(3).unwrap(), effects).unwrap();
    let rep = spectral_representation(&e, &tol()).unwrap();
    let rows = [[0.1, 0.2, 0.7], [0.6, 0.3, 0.1]];
    let projections = [
        ComplexMatrix::from_rows(&[
            vec![c(0.5, 0.0), c(0.0, 0.5)],
            vec![c(0.0, -0.5), c(0.5, 0.0)],
        ])
        .unwrap(),
        ComplexMatrix::from_rows(&[
            vec![c(0.5, 0.0), c(0.0, -0.5)],
            vec![c(0.0, 0.5), c(0.5, 0.0)],
        ])
        .unwrap(),
    ];
    for k in 0..2 {
        for (got, want) in rep.rows()[k].weights().iter().zip(rows[k]) {
            assert!(close(*got, want, 1e-14));
        }
        assert!(rep.projections()[k].max_abs_diff(&projections[k]) < 1e-14);
    }
    let dec = mixture_decomposition(&rep, &tol());
    assert!(max_diff(&reconstruct_mixture(&dec, &rep).unwrap(), &e) < 1e-14);
}

#[test]
fn mixture_of_coin() {
    let rep = spectral_representation(&coin(2), &tol()).unwrap();
    let dec = mixture_decomposition(&rep, &tol());
    assert_eq!(dec.weights(), &[0.5, 0.5]);
    assert_eq!(dec.components(), &[vec![0], vec![1]]);
}
