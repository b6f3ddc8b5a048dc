//! Canonical forms of commutative observables.
//!
//! A commutative observable `E` is a kernel image of the sharp observable
//! formed by the minimal projections `P_k` of the algebra its effects
//! generate: `E(x) = sum_k mu_k(x) P_k` with one probability row `mu_k` per
//! projection ([`SpectralRep`]). The row-stochastic matrix of rows `mu_k` in
//! turn splits into a convex combination of deterministic maps, each of which
//! relabels `P` into a sharp observable; this writes `E` as a mixture of sharp
//! observables ([`MixtureDecomposition`]).

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::linalg::{simultaneous_diagonalization, ComplexMatrix, Tolerance};
use crate::observables::{is_commutative, Observable, OutcomeSet, ProbabilityVector};

/// Minimal projections of a commutative observable with one probability row
/// per projection, in canonical (lexicographic by row) order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralRep {
    source_outcomes: OutcomeSet,
    projections: Vec<ComplexMatrix>,
    rows: Vec<ProbabilityVector>,
}

impl SpectralRep {
    pub fn new(
        source_outcomes: OutcomeSet,
        projections: Vec<ComplexMatrix>,
        rows: Vec<ProbabilityVector>,
    ) -> Result<Self> {
        if projections.is_empty() || projections.len() != rows.len() {
            return Err(Error::IndexMismatch(format!(
                "{} projections but {} rows",
                projections.len(),
                rows.len()
            )));
        }
        if let Some(r) = rows.iter().find(|r| r.outcomes() != &source_outcomes) {
            return Err(Error::OutcomeMismatch(format!(
                "row over {:?} in a representation over {:?}",
                r.outcomes().labels(),
                source_outcomes.labels()
            )));
        }
        let d = projections[0].dim();
        if let Some(p) = projections.iter().find(|p| p.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.dim(),
            });
        }
        Ok(Self {
            source_outcomes,
            projections,
            rows,
        })
    }

    pub fn source_outcomes(&self) -> &OutcomeSet {
        &self.source_outcomes
    }

    pub fn projections(&self) -> &[ComplexMatrix] {
        &self.projections
    }

    pub fn rows(&self) -> &[ProbabilityVector] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.projections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projections.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.projections[0].dim()
    }

    /// The `K x |outcomes|` row-stochastic matrix of the rows.
    pub fn stochastic_matrix(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.weights().to_vec()).collect()
    }

    /// The projections as a sharp observable on labels `"k0", "k1", ...`.
    pub fn projection_observable(&self) -> Observable {
        let labels =
            OutcomeSet::new((0..self.len()).map(|k| format!("k{k}"))).expect("distinct labels");
        Observable::new(labels, self.projections.clone()).expect("consistent shapes")
    }

    /// Largest entry of `|P_k P_l - delta_kl P_k|` and of `|sum_k P_k - I|`.
    pub fn projection_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        let mut total = ComplexMatrix::zeros(d);
        for (k, p) in self.projections.iter().enumerate() {
            total.add_scaled(1.0, p);
            worst = worst.max(p.hermiticity_defect());
            for (l, q) in self.projections.iter().enumerate() {
                let prod = p * q;
                let dev = if k == l {
                    prod.max_abs_diff(p)
                } else {
                    prod.max_abs()
                };
                worst = worst.max(dev);
            }
        }
        worst.max(total.max_abs_diff(&ComplexMatrix::identity(d)))
    }
}

/// A cluster of common eigenvectors: its projection and the common
/// eigenvalue of every family member on it.
#[derive(Debug, Clone)]
pub(crate) struct SpectralCluster {
    pub projection: ComplexMatrix,
    pub values: Vec<f64>,
}

/// Groups the common eigenbasis of a commuting Hermitian family by joint
/// value tuple. Tuples within `eps_eig_cluster` (max norm) share a cluster;
/// tuples further apart but within ten times that are reported as ambiguous.
pub(crate) fn joint_spectral_clusters(
    family: &[ComplexMatrix],
    tol: &Tolerance,
) -> Result<Vec<SpectralCluster>> {
    let sd = simultaneous_diagonalization(family, tol)?;
    let d = sd.basis.dim();
    let eps = tol.eps_eig_cluster;
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for u in 0..d {
        for v in (u + 1)..d {
            let (coordinate, gap) = sd.joint_values[u]
                .iter()
                .zip(&sd.joint_values[v])
                .map(|(a, b)| (a - b).abs())
                .enumerate()
                .fold(
                    (0, 0.0f64),
                    |acc, (i, g)| if g > acc.1 { (i, g) } else { acc },
                );
            if gap <= eps {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                parent[ru.max(rv)] = ru.min(rv);
            } else if gap <= 10.0 * eps {
                return Err(Error::ClusterAmbiguity {
                    coordinate,
                    gap,
                    lower: eps,
                    upper: 10.0 * eps,
                });
            }
        }
    }

    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut root_slot: Vec<Option<usize>> = vec![None; d];
    for v in 0..d {
        let root = find(&mut parent, v);
        let slot = *root_slot[root].get_or_insert_with(|| {
            members.push(Vec::new());
            members.len() - 1
        });
        members[slot].push(v);
    }

    Ok(members
        .into_iter()
        .map(|vs| {
            let mut projection = ComplexMatrix::zeros(d);
            let mut values = vec![0.0; family.len()];
            for &v in &vs {
                projection.add_scaled(1.0, &ComplexMatrix::outer(&sd.basis.column(v)));
                for (acc, t) in values.iter_mut().zip(&sd.joint_values[v]) {
                    *acc += t;
                }
            }
            for acc in &mut values {
                *acc /= vs.len() as f64;
            }
            SpectralCluster { projection, values }
        })
        .collect())
}

/// Lexicographic order on rows, treating coordinates within `eps` as equal.
fn compare_rows(a: &[f64], b: &[f64], eps: f64) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > eps {
            return x.total_cmp(y);
        }
    }
    Ordering::Equal
}

/// Spectral representation of a commutative observable.
pub fn spectral_representation(e: &Observable, tol: &Tolerance) -> Result<SpectralRep> {
    let (commutative, norm) = is_commutative(e, tol);
    if !commutative {
        return Err(Error::NotCommutative { norm });
    }
    let clusters = joint_spectral_clusters(e.effects(), tol)?;
    let mut pairs: Vec<(ComplexMatrix, Vec<f64>)> = clusters
        .into_iter()
        .map(|c| {
            let row = c.values.iter().map(|v| v.clamp(0.0, 1.0)).collect();
            (c.projection, row)
        })
        .collect();
    pairs.sort_by(|a, b| compare_rows(&a.1, &b.1, tol.eps_eig_cluster));

    let mut projections = Vec::with_capacity(pairs.len());
    let mut rows = Vec::with_capacity(pairs.len());
    for (p, row) in pairs {
        rows.push(ProbabilityVector::new(e.outcomes().clone(), row, tol)?);
        projections.push(p);
    }
    SpectralRep::new(e.outcomes().clone(), projections, rows)
}

/// `E(x) = sum_k mu_k(x) P_k`.
pub fn reconstruct_spectral(rep: &SpectralRep) -> Observable {
    let d = rep.dim();
    let effects = (0..rep.source_outcomes.len())
        .map(|x| {
            let mut effect = ComplexMatrix::zeros(d);
            for (p, row) in rep.projections.iter().zip(&rep.rows) {
                effect.add_scaled(row.weights()[x], p);
            }
            effect
        })
        .collect();
    Observable::new(rep.source_outcomes.clone(), effects).expect("consistent shapes")
}

/// Convex combination of deterministic maps from projection indices to
/// outcome indices.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureDecomposition {
    outcomes: OutcomeSet,
    weights: Vec<f64>,
    /// `components[j][k]` is the outcome index that map `j` assigns to
    /// projection `k`.
    components: Vec<Vec<usize>>,
}

impl MixtureDecomposition {
    pub fn new(
        outcomes: OutcomeSet,
        weights: Vec<f64>,
        components: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if weights.len() != components.len() {
            return Err(Error::IndexMismatch(format!(
                "{} weights for {} components",
                weights.len(),
                components.len()
            )));
        }
        if let Some(bad) = components.iter().flatten().find(|&&x| x >= outcomes.len()) {
            return Err(Error::IndexMismatch(format!(
                "outcome index {bad} out of range"
            )));
        }
        Ok(Self {
            outcomes,
            weights,
            components,
        })
    }

    pub fn outcomes(&self) -> &OutcomeSet {
        &self.outcomes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// The sharp observable `x -> sum_{k : d_j(k) = x} P_k` of component `j`.
    pub fn component_observable(&self, j: usize, rep: &SpectralRep) -> Result<Observable> {
        let map = &self.components[j];
        check_indices(map, rep)?;
        let d = rep.dim();
        let mut effects = vec![ComplexMatrix::zeros(d); self.outcomes.len()];
        for (k, &x) in map.iter().enumerate() {
            effects[x].add_scaled(1.0, &rep.projections[k]);
        }
        Observable::new(self.outcomes.clone(), effects)
    }
}

fn check_indices(map: &[usize], rep: &SpectralRep) -> Result<()> {
    if map.len() != rep.len() {
        return Err(Error::IndexMismatch(format!(
            "map covers {} projections, representation has {}",
            map.len(),
            rep.len()
        )));
    }
    if let Some(bad) = map.iter().find(|&&x| x >= rep.source_outcomes.len()) {
        return Err(Error::IndexMismatch(format!(
            "outcome index {bad} out of range"
        )));
    }
    Ok(())
}

/// Entries left over after subtracting a weight below this are exact zeros.
const PEEL_FLOOR: f64 = 1e-15;

/// Splits the row-stochastic matrix of `rep` into deterministic maps by
/// greedy peeling: every row picks its largest residual entry (lowest outcome
/// index on ties), the smallest of those picks becomes the weight, and it is
/// subtracted until less than `eps_eq` of mass remains.
pub fn mixture_decomposition(rep: &SpectralRep, tol: &Tolerance) -> MixtureDecomposition {
    let mut residual: Vec<Vec<f64>> = rep
        .stochastic_matrix()
        .into_iter()
        .map(|r| r.into_iter().map(|v| v.max(0.0)).collect())
        .collect();
    let k_rows = residual.len();
    let n_out = rep.source_outcomes.len();
    let max_steps = k_rows * n_out.saturating_sub(1) + 1;

    let mut weights = Vec::new();
    let mut components = Vec::new();
    while weights.len() < max_steps {
        let mass = residual
            .iter()
            .map(|r| r.iter().sum::<f64>())
            .fold(0.0, f64::max);
        if mass < tol.eps_eq {
            break;
        }
        let map: Vec<usize> = residual
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |best, (i, &v)| {
                        if v > best.1 {
                            (i, v)
                        } else {
                            best
                        }
                    })
                    .0
            })
            .collect();
        let (argmin, w) = map
            .iter()
            .enumerate()
            .map(|(k, &x)| (k, residual[k][x]))
            .fold(
                (0, f64::INFINITY),
                |best, (k, v)| if v < best.1 { (k, v) } else { best },
            );
        if w <= 0.0 {
            break;
        }
        for (k, &x) in map.iter().enumerate() {
            let v = residual[k][x] - w;
            residual[k][x] = if k == argmin || v <= PEEL_FLOOR {
                0.0
            } else {
                v
            };
        }
        weights.push(w);
        components.push(map);
    }
    MixtureDecomposition {
        outcomes: rep.source_outcomes.clone(),
        weights,
        components,
    }
}

/// `E(x) = sum_j w_j sum_{k : d_j(k) = x} P_k`.
pub fn reconstruct_mixture(dec: &MixtureDecomposition, rep: &SpectralRep) -> Result<Observable> {
    if dec.outcomes != rep.source_outcomes {
        return Err(Error::IndexMismatch(
            "decomposition and representation use different outcome sets".into(),
        ));
    }
    let d = rep.dim();
    let mut effects = vec![ComplexMatrix::zeros(d); dec.outcomes.len()];
    for (w, map) in dec.weights.iter().zip(&dec.components) {
        check_indices(map, rep)?;
        for (k, &x) in map.iter().enumerate() {
            effects[x].add_scaled(*w, &rep.projections[k]);
        }
    }
    Observable::new(dec.outcomes.clone(), effects)
}

/// Probability measure on the cyclic group `Z_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicMeasure {
    weights: ProbabilityVector,
}

impl CyclicMeasure {
    pub fn new(weights: Vec<f64>, tol: &Tolerance) -> Result<Self> {
        let outcomes = OutcomeSet::range(weights.len())?;
        Ok(Self {
            weights: ProbabilityVector::new(outcomes, weights, tol)?,
        })
    }

    /// Point mass at `0`.
    pub fn dirac(n: usize) -> Self {
        let mut w = vec![0.0; n];
        w[0] = 1.0;
        Self::new(w, &Tolerance::default()).expect("valid point mass")
    }

    pub fn order(&self) -> usize {
        self.weights.weights().len()
    }

    pub fn weights(&self) -> &[f64] {
        self.weights.weights()
    }

    /// `nu(k mod n)` for any integer `k`.
    pub fn at(&self, k: isize) -> f64 {
        let n = self.order() as isize;
        self.weights.weights()[k.rem_euclid(n) as usize]
    }

    pub fn outcomes(&self) -> &OutcomeSet {
        self.weights.outcomes()
    }
}

/// Smeared position observable on `C^n`: the effect of outcome `x0` is the
/// multiplication operator `x -> nu(x - x0)`.
pub fn convolution_observable(m: &CyclicMeasure) -> Observable {
    let n = m.order();
    let effects = (0..n)
        .map(|x0| {
            let diag: Vec<f64> = (0..n).map(|x| m.at(x as isize - x0 as isize)).collect();
            ComplexMatrix::from_real_diagonal(&diag)
        })
        .collect();
    Observable::new(m.outcomes().clone(), effects).expect("consistent shapes")
}
