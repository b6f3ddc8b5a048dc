//! Markov kernels and the fuzzy-version relation.
//!
//! `E` is a fuzzy version of `F` when `E(a) = sum_x mu_x(a) F(x)` for a
//! row-stochastic kernel `mu` from `F`'s outcomes to `E`'s. Whether such a
//! kernel exists is a linear feasibility question, decided with
//! [`crate::feasibility`].

use crate::error::{Error, Result};
use crate::feasibility::{encode_kernel_problem, solve, solve_with_objective};
use crate::linalg::{hermitian_eig, ComplexMatrix, Tolerance};
use crate::observables::{
    is_commutative, is_maximally_commutative, is_sharp, Observable, OutcomeSet, ProbabilityVector,
};
use crate::representation::{spectral_representation, CyclicMeasure};

/// Row-stochastic matrix from one outcome set to another.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovKernel {
    from: OutcomeSet,
    to: OutcomeSet,
    matrix: Vec<Vec<f64>>,
}

impl MarkovKernel {
    /// Entries within `eps_eq` of `[0, 1]` are clamped into it; every row
    /// must sum to one within `eps_eq`.
    pub fn new(
        from: OutcomeSet,
        to: OutcomeSet,
        matrix: Vec<Vec<f64>>,
        tol: &Tolerance,
    ) -> Result<Self> {
        if matrix.len() != from.len() {
            return Err(Error::InvalidKernel(format!(
                "{} rows for {} source outcomes",
                matrix.len(),
                from.len()
            )));
        }
        let mut clamped = Vec::with_capacity(matrix.len());
        for (x, row) in matrix.into_iter().enumerate() {
            if row.len() != to.len() {
                return Err(Error::InvalidKernel(format!(
                    "row {x} has {} entries for {} target outcomes",
                    row.len(),
                    to.len()
                )));
            }
            if let Some(v) = row
                .iter()
                .find(|v| !v.is_finite() || **v < -tol.eps_eq || **v > 1.0 + tol.eps_eq)
            {
                return Err(Error::InvalidKernel(format!("entry {v} in row {x}")));
            }
            let row: Vec<f64> = row.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > tol.eps_eq {
                return Err(Error::InvalidKernel(format!("row {x} sums to {sum}")));
            }
            clamped.push(row);
        }
        Ok(Self {
            from,
            to,
            matrix: clamped,
        })
    }

    /// Caller guarantees the shape and the stochastic property.
    pub(crate) fn from_parts(from: OutcomeSet, to: OutcomeSet, matrix: Vec<Vec<f64>>) -> Self {
        Self { from, to, matrix }
    }

    pub fn identity(outcomes: &OutcomeSet) -> Self {
        let n = outcomes.len();
        let matrix = (0..n)
            .map(|x| (0..n).map(|a| if a == x { 1.0 } else { 0.0 }).collect())
            .collect();
        Self {
            from: outcomes.clone(),
            to: outcomes.clone(),
            matrix,
        }
    }

    /// Every source outcome is sent to the same distribution.
    pub fn constant(from: &OutcomeSet, row: &ProbabilityVector) -> Self {
        Self {
            from: from.clone(),
            to: row.outcomes().clone(),
            matrix: vec![row.weights().to_vec(); from.len()],
        }
    }

    pub fn from_outcomes(&self) -> &OutcomeSet {
        &self.from
    }

    pub fn to_outcomes(&self) -> &OutcomeSet {
        &self.to
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.matrix[x]
    }

    /// `self` followed by `next`: the matrix product `self * next`.
    pub fn then(&self, next: &MarkovKernel) -> Result<MarkovKernel> {
        if self.to != next.from {
            return Err(Error::OutcomeMismatch(
                "kernels cannot be chained: intermediate outcome sets differ".into(),
            ));
        }
        let matrix = self
            .matrix
            .iter()
            .map(|row| {
                (0..next.to.len())
                    .map(|a| row.iter().zip(&next.matrix).map(|(p, r)| p * r[a]).sum())
                    .collect()
            })
            .collect();
        Ok(Self {
            from: self.from.clone(),
            to: next.to.clone(),
            matrix,
        })
    }

    /// Smallest nonnegative entry and largest row-sum defect, for reports.
    pub fn stochastic_defect(&self) -> f64 {
        self.matrix
            .iter()
            .map(|r| {
                let neg = r.iter().fold(0.0f64, |m, v| m.max(-v));
                neg.max((r.iter().sum::<f64>() - 1.0).abs())
            })
            .fold(0.0, f64::max)
    }
}

/// Deterministic kernel given by a function between outcome sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relabeling {
    from: OutcomeSet,
    to: OutcomeSet,
    map: Vec<usize>,
}

impl Relabeling {
    /// `map[x]` is the target index assigned to source outcome `x`.
    pub fn new(from: OutcomeSet, to: OutcomeSet, map: Vec<usize>) -> Result<Self> {
        if map.len() != from.len() {
            return Err(Error::IndexMismatch(format!(
                "relabeling defined on {} of {} outcomes",
                map.len(),
                from.len()
            )));
        }
        if let Some(bad) = map.iter().find(|&&a| a >= to.len()) {
            return Err(Error::IndexMismatch(format!(
                "target index {bad} out of range"
            )));
        }
        Ok(Self { from, to, map })
    }

    /// Builds the map from `(source label, target label)` pairs.
    pub fn from_labels(from: OutcomeSet, to: OutcomeSet, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut map = vec![usize::MAX; from.len()];
        for (x, a) in pairs {
            map[from.index_of(x)?] = to.index_of(a)?;
        }
        if let Some(x) = map.iter().position(|&a| a == usize::MAX) {
            return Err(Error::IndexMismatch(format!(
                "relabeling not defined on {:?}",
                from.label(x)
            )));
        }
        Self::new(from, to, map)
    }

    pub fn from_outcomes(&self) -> &OutcomeSet {
        &self.from
    }

    pub fn to_outcomes(&self) -> &OutcomeSet {
        &self.to
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn image(&self, x: usize) -> usize {
        self.map[x]
    }

    /// The kernel `x -> delta_{map(x)}`.
    pub fn to_kernel(&self) -> MarkovKernel {
        let matrix = self
            .map
            .iter()
            .map(|&a| {
                let mut row = vec![0.0; self.to.len()];
                row[a] = 1.0;
                row
            })
            .collect();
        MarkovKernel {
            from: self.from.clone(),
            to: self.to.clone(),
            matrix,
        }
    }
}

/// `E(a) = sum_x mu_x(a) F(x)`.
pub fn apply_kernel(f: &Observable, mu: &MarkovKernel) -> Result<Observable> {
    if mu.from != *f.outcomes() {
        return Err(Error::OutcomeMismatch(format!(
            "kernel is defined on {:?}, observable on {:?}",
            mu.from.labels(),
            f.outcomes().labels()
        )));
    }
    let d = f.dim();
    let effects = (0..mu.to.len())
        .map(|a| {
            let mut effect = ComplexMatrix::zeros(d);
            for (fx, row) in f.effects().iter().zip(&mu.matrix) {
                if row[a] != 0.0 {
                    effect.add_scaled(row[a], fx);
                }
            }
            effect
        })
        .collect();
    Observable::new(mu.to.clone(), effects)
}

/// Searches for a kernel taking `f` to `e`. `None` means the linear system
/// is infeasible at the configured slack.
pub fn find_fuzzy_kernel(
    e: &Observable,
    f: &Observable,
    tol: &Tolerance,
) -> Result<Option<MarkovKernel>> {
    let problem = encode_kernel_problem(e, f, tol.eps_feas)?;
    Ok(solve(&problem)?.map(|x| kernel_from_solution(e, f, &x)))
}

/// Like [`find_fuzzy_kernel`], but among feasible kernels picks one
/// minimising the mass placed on later target labels. Rows that the
/// equations leave free (those of zero effects) come out as point masses on
/// the first target label, so relabelings are detected reliably.
pub fn find_fuzzy_kernel_canonical(
    e: &Observable,
    f: &Observable,
    tol: &Tolerance,
) -> Result<Option<MarkovKernel>> {
    let problem = encode_kernel_problem(e, f, tol.eps_feas)?;
    let n_target = e.len();
    let objective: Vec<f64> = (0..problem.num_vars())
        .map(|v| (v % n_target) as f64)
        .collect();
    Ok(solve_with_objective(&problem, Some(&objective))?.map(|x| kernel_from_solution(e, f, &x)))
}

fn kernel_from_solution(e: &Observable, f: &Observable, x: &[f64]) -> MarkovKernel {
    let n_target = e.len();
    let matrix = x
        .chunks(n_target)
        .map(|chunk| {
            let row: Vec<f64> = chunk.iter().map(|v| v.max(0.0)).collect();
            let sum: f64 = row.iter().sum();
            row.into_iter().map(|v| v / sum).collect()
        })
        .collect();
    MarkovKernel {
        from: f.outcomes().clone(),
        to: e.outcomes().clone(),
        matrix,
    }
}

/// Returns the underlying function when every row of the kernel is a point
/// mass (an entry of at least `1 - eps_eq`).
pub fn is_relabeling(mu: &MarkovKernel, tol: &Tolerance) -> Option<Relabeling> {
    let map = mu
        .matrix
        .iter()
        .map(|row| row.iter().position(|v| *v >= 1.0 - tol.eps_eq))
        .collect::<Option<Vec<usize>>>()?;
    Some(Relabeling {
        from: mu.from.clone(),
        to: mu.to.clone(),
        map,
    })
}

/// `E(a) = sum_{x : phi(x) = a} F(x)`.
pub fn relabel(f: &Observable, phi: &Relabeling) -> Result<Observable> {
    if phi.from != *f.outcomes() {
        return Err(Error::OutcomeMismatch(format!(
            "relabeling is defined on {:?}, observable on {:?}",
            phi.from.labels(),
            f.outcomes().labels()
        )));
    }
    let mut effects = vec![ComplexMatrix::zeros(f.dim()); phi.to.len()];
    for (fx, &a) in f.effects().iter().zip(&phi.map) {
        effects[a].add_scaled(1.0, fx);
    }
    Observable::new(phi.to.clone(), effects)
}

/// Covariant kernel on `Z_n`: `mu_x(a) = nu(x - a)`.
pub fn convolution_kernel(m: &CyclicMeasure) -> MarkovKernel {
    let n = m.order();
    let matrix = (0..n)
        .map(|x| (0..n).map(|a| m.at(x as isize - a as isize)).collect())
        .collect();
    MarkovKernel {
        from: m.outcomes().clone(),
        to: m.outcomes().clone(),
        matrix,
    }
}

/// Witness that `E = apply_kernel(parent, kernel)` while `parent` is not a
/// kernel image of `E`.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyCertificate {
    pub parent: Observable,
    pub kernel: MarkovKernel,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FuzzyClass {
    NotFuzzy,
    Fuzzy(FuzzyCertificate),
    /// The available criteria do not settle the question.
    Unknown,
}

/// Classifies `E` as fuzzy or not.
///
/// Sharp observables are decided exactly: not fuzzy iff their algebra is
/// maximal abelian. A commutative `E` is a kernel image of its spectral
/// projections `P`. If `P` is not a kernel image of `E`, the pair certifies
/// `E` fuzzy. If it is, `E` and `P` are post-processings of each other and
/// share the verdict of `P`; a fuzzy `P` is then certified through its
/// rank-one refinement. Non-commutative observables are `Unknown`.
pub fn classify_fuzzy(e: &Observable, tol: &Tolerance) -> Result<FuzzyClass> {
    if is_sharp(e, tol) {
        if is_maximally_commutative(e, tol)? {
            return Ok(FuzzyClass::NotFuzzy);
        }
        return Ok(FuzzyClass::Fuzzy(rank_one_refinement(e, tol)?));
    }
    if !is_commutative(e, tol).0 {
        return Ok(FuzzyClass::Unknown);
    }
    let rep = spectral_representation(e, tol)?;
    let parent = rep.projection_observable();
    let kernel = MarkovKernel {
        from: parent.outcomes().clone(),
        to: e.outcomes().clone(),
        matrix: rep.stochastic_matrix(),
    };
    if find_fuzzy_kernel(&parent, e, tol)?.is_none() {
        return Ok(FuzzyClass::Fuzzy(FuzzyCertificate { parent, kernel }));
    }
    if is_maximally_commutative(&parent, tol)? {
        return Ok(FuzzyClass::NotFuzzy);
    }
    let refined = rank_one_refinement(&parent, tol)?;
    if find_fuzzy_kernel(&refined.parent, e, tol)?.is_some() {
        return Ok(FuzzyClass::Unknown);
    }
    Ok(FuzzyClass::Fuzzy(FuzzyCertificate {
        kernel: refined.kernel.then(&kernel)?,
        parent: refined.parent,
    }))
}

/// Splits every effect of a sharp observable into rank-one projections.
/// The original is the relabeling that merges the pieces back together.
fn rank_one_refinement(e: &Observable, tol: &Tolerance) -> Result<FuzzyCertificate> {
    let mut labels = Vec::new();
    let mut effects = Vec::new();
    let mut map = Vec::new();
    for (a, effect) in e.effects().iter().enumerate() {
        let eig = hermitian_eig(effect, tol)?;
        let mut piece = 0;
        for (k, value) in eig.values.iter().enumerate() {
            if *value > 0.5 {
                labels.push(format!("{}.{piece}", e.outcomes().label(a)));
                effects.push(ComplexMatrix::outer(&eig.vectors.column(k)));
                map.push(a);
                piece += 1;
            }
        }
    }
    let outcomes = OutcomeSet::new(labels)?;
    let parent = Observable::new(outcomes.clone(), effects)?;
    let kernel = Relabeling::new(outcomes, e.outcomes().clone(), map)?.to_kernel();
    Ok(FuzzyCertificate { parent, kernel })
}
