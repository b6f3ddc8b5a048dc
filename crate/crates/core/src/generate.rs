//! Seeded instance generators.
//!
//! Every generator takes an explicit RNG; [`seeded`] gives the ChaCha8
//! stream used by the command line, so a seed fully determines the output.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::fuzzy::{apply_kernel, MarkovKernel, Relabeling};
use crate::linalg::{hermitian_eig, ComplexMatrix, Tolerance, C64};
use crate::observables::{fixtures, Observable, OutcomeSet, State};
use crate::representation::{convolution_observable, CyclicMeasure};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_vector<R: Rng>(d: usize, rng: &mut R) -> Vec<C64> {
    (0..d)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

/// Orthonormalises the columns of a complex Gaussian matrix (Gram-Schmidt,
/// each projection applied twice).
pub fn random_unitary<R: Rng>(d: usize, rng: &mut R) -> ComplexMatrix {
    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(d);
    while columns.len() < d {
        let mut v = gaussian_vector(d, rng);
        for _ in 0..2 {
            for q in &columns {
                let overlap: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= overlap * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            columns.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_columns(d, &columns)
}

/// Sharp observable on `C^d` with `n` outcomes: the columns of a random
/// unitary are dealt out to uniformly chosen outcomes. Some effects may be
/// zero.
pub fn random_sharp<R: Rng>(d: usize, n: usize, rng: &mut R) -> Result<Observable> {
    let assignment: Vec<usize> = (0..d).map(|_| rng.random_range(0..n)).collect();
    sharp_from_assignment(&random_unitary(d, rng), &assignment, n)
}

/// Like [`random_sharp`] but with every effect nonzero (needs `n <= d`).
pub fn random_sharp_nonzero<R: Rng>(d: usize, n: usize, rng: &mut R) -> Result<Observable> {
    if n > d {
        return Err(Error::ShapeMismatch(format!(
            "{n} nonzero projections do not fit in dimension {d}"
        )));
    }
    let mut assignment: Vec<usize> = (0..d)
        .map(|k| if k < n { k } else { rng.random_range(0..n) })
        .collect();
    assignment.shuffle(rng);
    sharp_from_assignment(&random_unitary(d, rng), &assignment, n)
}

fn sharp_from_assignment(u: &ComplexMatrix, assignment: &[usize], n: usize) -> Result<Observable> {
    let d = u.dim();
    let mut effects = vec![ComplexMatrix::zeros(d); n];
    for (k, &x) in assignment.iter().enumerate() {
        effects[x].add_scaled(1.0, &ComplexMatrix::outer(&u.column(k)));
    }
    Observable::new(OutcomeSet::range(n)?, effects)
}

/// Random probability vector of length `n`. About a quarter of the entries
/// are exactly zero, the rest are normalised exponential samples.
pub fn random_weights<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let raw: Vec<f64> = (0..n)
            .map(|_| {
                if n > 1 && rng.random_bool(0.25) {
                    0.0
                } else {
                    rng.sample::<f64, _>(Exp1)
                }
            })
            .collect();
        let total: f64 = raw.iter().sum();
        if total > 0.0 {
            return raw.into_iter().map(|w| w / total).collect();
        }
    }
}

pub fn random_kernel<R: Rng>(from: &OutcomeSet, to: &OutcomeSet, rng: &mut R) -> MarkovKernel {
    let matrix = (0..from.len())
        .map(|_| random_weights(to.len(), rng))
        .collect();
    MarkovKernel::new(from.clone(), to.clone(), matrix, &Tolerance::default())
        .expect("normalised rows")
}

pub fn random_relabeling<R: Rng>(from: &OutcomeSet, to: &OutcomeSet, rng: &mut R) -> Relabeling {
    let map = (0..from.len())
        .map(|_| rng.random_range(0..to.len()))
        .collect();
    Relabeling::new(from.clone(), to.clone(), map).expect("indices in range")
}

/// Random density matrix `A A* / tr(A A*)` with Gaussian `A`.
pub fn random_state<R: Rng>(d: usize, rng: &mut R) -> State {
    let columns: Vec<Vec<C64>> = (0..d).map(|_| gaussian_vector(d, rng)).collect();
    let a = ComplexMatrix::from_columns(d, &columns);
    let rho = &a * &a.adjoint();
    let trace = rho.trace().re;
    State::new(
        rho.scale(1.0 / trace).hermitian_part(),
        &Tolerance::default(),
    )
    .expect("positive with unit trace")
}

/// Generic (typically non-commutative) observable: random positive
/// operators `A_x = B_x B_x*` normalised as `S^{-1/2} A_x S^{-1/2}` with
/// `S = sum_x A_x`.
pub fn random_povm<R: Rng>(d: usize, n: usize, rng: &mut R) -> Result<Observable> {
    let tol = Tolerance::default();
    let positives: Vec<ComplexMatrix> = (0..n)
        .map(|_| {
            let columns: Vec<Vec<C64>> = (0..d).map(|_| gaussian_vector(d, rng)).collect();
            let b = ComplexMatrix::from_columns(d, &columns);
            (&b * &b.adjoint()).hermitian_part()
        })
        .collect();
    let mut total = ComplexMatrix::zeros(d);
    for a in &positives {
        total.add_scaled(1.0, a);
    }
    let eig = hermitian_eig(&total, &tol)?;
    let mut inv_sqrt = ComplexMatrix::zeros(d);
    for (k, value) in eig.values.iter().enumerate() {
        inv_sqrt.add_scaled(
            value.powf(-0.5),
            &ComplexMatrix::outer(&eig.vectors.column(k)),
        );
    }
    let effects = positives
        .iter()
        .map(|a| (&(&inv_sqrt * a) * &inv_sqrt).hermitian_part())
        .collect();
    Observable::new(OutcomeSet::range(n)?, effects)
}

/// A sharp `F`, a kernel `mu`, and `E = apply_kernel(F, mu)`.
#[derive(Debug, Clone)]
pub struct FuzzyTriple {
    pub sharp: Observable,
    pub kernel: MarkovKernel,
    pub fuzzy: Observable,
}

pub fn random_fuzzy<R: Rng>(
    d: usize,
    n_sharp: usize,
    n_fuzzy: usize,
    rng: &mut R,
) -> Result<FuzzyTriple> {
    let sharp = random_sharp(d, n_sharp, rng)?;
    let kernel = random_kernel(sharp.outcomes(), &OutcomeSet::range(n_fuzzy)?, rng);
    let fuzzy = apply_kernel(&sharp, &kernel)?;
    Ok(FuzzyTriple {
        sharp,
        kernel,
        fuzzy,
    })
}

pub fn smeared_qubit(t: f64) -> Result<Observable> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!(
            "smearing parameter {t} outside [0, 1]"
        )));
    }
    Ok(fixtures::smeared_qubit(t))
}

pub fn coin(d: usize) -> Observable {
    fixtures::coin(d)
}

pub fn convolution(nu: Vec<f64>) -> Result<Observable> {
    Ok(convolution_observable(&CyclicMeasure::new(
        nu,
        &Tolerance::default(),
    )?))
}
