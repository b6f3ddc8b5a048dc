//! Finite-outcome observables (POVMs), sharp observables, states and outcome
//! statistics.
//!
//! An [`Observable`] stores one effect per outcome label; the effect of a
//! subset of outcomes is the sum over its members. Shape consistency is
//! enforced on construction, the positivity/normalisation axioms are checked
//! by [`validate`] so that invalid inputs can still be inspected and reported.

pub mod fixtures;

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{commutant_basis, hermitian_eig, ComplexMatrix, Tolerance};

/// Ordered list of distinct outcome labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OutcomeSet {
    labels: Vec<String>,
}

impl OutcomeSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidOutcomeSet("outcome set is empty".into()));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidOutcomeSet(format!("duplicate label {l:?}")));
            }
        }
        Ok(Self { labels })
    }

    /// Labels `"0", "1", ..., "n-1"`.
    pub fn range(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }
}

/// Positive operator valued measure on a finite outcome set.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    outcomes: OutcomeSet,
    dim: usize,
    effects: Vec<ComplexMatrix>,
}

impl Observable {
    /// Checks shapes only; see [`validate`] for the measure axioms.
    pub fn new(outcomes: OutcomeSet, effects: Vec<ComplexMatrix>) -> Result<Self> {
        if effects.len() != outcomes.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} outcomes but {} effects",
                outcomes.len(),
                effects.len()
            )));
        }
        let dim = effects[0].dim();
        if let Some(bad) = effects.iter().find(|e| e.dim() != dim) {
            return Err(Error::ShapeMismatch(format!(
                "effect dimensions disagree: {dim} vs {}",
                bad.dim()
            )));
        }
        Ok(Self {
            outcomes,
            dim,
            effects,
        })
    }

    /// Like [`Observable::new`] but also rejects inputs that fail [`validate`].
    pub fn new_validated(
        outcomes: OutcomeSet,
        effects: Vec<ComplexMatrix>,
        tol: &Tolerance,
    ) -> Result<Self> {
        let obs = Self::new(outcomes, effects)?;
        let report = validate(&obs, tol);
        if report.is_valid() {
            Ok(obs)
        } else {
            Err(Error::InvalidObservable(report))
        }
    }

    pub fn outcomes(&self) -> &OutcomeSet {
        &self.outcomes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn effect(&self, label: &str) -> Result<&ComplexMatrix> {
        Ok(&self.effects[self.outcomes.index_of(label)?])
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    /// Largest entrywise difference between corresponding effects.
    /// Outcome labels are not compared.
    pub fn max_effect_diff(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.len() != other.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} vs {} effects",
                self.len(),
                other.len()
            )));
        }
        Ok(self
            .effects
            .iter()
            .zip(&other.effects)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max))
    }
}

/// Observable whose effects are mutually orthogonal projections.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpObservable(Observable);

impl SharpObservable {
    pub fn new(obs: Observable, tol: &Tolerance) -> Result<Self> {
        let report = validate(&obs, tol);
        if !report.is_valid() {
            return Err(Error::InvalidObservable(report));
        }
        if !is_sharp(&obs, tol) {
            return Err(Error::InvalidObservable(ValidationReport {
                violations: vec![Violation::NotProjective],
            }));
        }
        Ok(Self(obs))
    }

    pub fn as_observable(&self) -> &Observable {
        &self.0
    }

    pub fn into_observable(self) -> Observable {
        self.0
    }
}

impl AsRef<Observable> for SharpObservable {
    fn as_ref(&self) -> &Observable {
        &self.0
    }
}

/// Density operator: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    matrix: ComplexMatrix,
}

impl State {
    pub fn new(matrix: ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        let dev = matrix.hermiticity_defect();
        if dev > tol.eps_herm {
            return Err(Error::InvalidState(format!(
                "not Hermitian (defect {dev:.3e})"
            )));
        }
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > tol.eps_eq {
            return Err(Error::InvalidState(format!("trace is {tr}")));
        }
        let min = hermitian_eig(&matrix, tol)?.values[0];
        if min < -tol.eps_psd {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// `|v><v|` for a vector normalised on the fly.
    pub fn pure(v: &[crate::linalg::C64]) -> Result<Self> {
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite vector".into()));
        }
        let unit: Vec<_> = v.iter().map(|z| z / norm).collect();
        Ok(Self {
            matrix: ComplexMatrix::outer(&unit),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// Probability distribution over an outcome set.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    outcomes: OutcomeSet,
    weights: Vec<f64>,
}

impl ProbabilityVector {
    /// Weights in `[-eps_eq, 0)` are clamped to zero; anything more negative,
    /// or a total away from 1 by more than `eps_eq`, is an error.
    pub fn new(outcomes: OutcomeSet, weights: Vec<f64>, tol: &Tolerance) -> Result<Self> {
        if weights.len() != outcomes.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} outcomes but {} weights",
                outcomes.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite()) {
            return Err(Error::InvalidProbability(format!("non-finite weight {w}")));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| **w < -tol.eps_eq) {
            return Err(Error::InvalidProbability(format!(
                "weight of {:?} is {w:.3e}",
                outcomes.label(i)
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > tol.eps_eq {
            return Err(Error::InvalidProbability(format!("weights sum to {total}")));
        }
        let weights = weights.into_iter().map(|w| w.max(0.0)).collect();
        Ok(Self { outcomes, weights })
    }

    pub fn outcomes(&self) -> &OutcomeSet {
        &self.outcomes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, label: &str) -> Result<f64> {
        Ok(self.weights[self.outcomes.index_of(label)?])
    }
}

/// One failed measure axiom.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NotHermitian { outcome: String, deviation: f64 },
    NegativeEigenvalue { outcome: String, value: f64 },
    SumNotIdentity { deviation: f64 },
    NotProjective,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotHermitian { outcome, deviation } => {
                write!(
                    f,
                    "effect {outcome:?} is not Hermitian (deviates by {deviation})"
                )
            }
            Violation::NegativeEigenvalue { outcome, value } => {
                write!(f, "effect {outcome:?} has negative eigenvalue {value}")
            }
            Violation::SumNotIdentity { deviation } => {
                write!(f, "sum deviates by {deviation:.1} from the identity")
            }
            Violation::NotProjective => {
                write!(f, "effects are not mutually orthogonal projections")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks the measure axioms: Hermitian effects, positivity, and a sum equal
/// to the identity.
pub fn validate(e: &Observable, tol: &Tolerance) -> ValidationReport {
    let mut violations = Vec::new();
    for (label, effect) in e.outcomes.labels().iter().zip(&e.effects) {
        let deviation = effect.hermiticity_defect();
        if deviation > tol.eps_herm {
            violations.push(Violation::NotHermitian {
                outcome: label.clone(),
                deviation,
            });
            continue;
        }
        match hermitian_eig(effect, tol) {
            Ok(eig) if eig.values[0] < -tol.eps_psd => {
                violations.push(Violation::NegativeEigenvalue {
                    outcome: label.clone(),
                    value: eig.values[0],
                });
            }
            Ok(_) => {}
            Err(_) => violations.push(Violation::NotHermitian {
                outcome: label.clone(),
                deviation,
            }),
        }
    }
    let total = total_effect(e);
    let deviation = total.max_abs_diff(&ComplexMatrix::identity(e.dim));
    if deviation > tol.eps_eq {
        violations.push(Violation::SumNotIdentity { deviation });
    }
    ValidationReport { violations }
}

fn total_effect(e: &Observable) -> ComplexMatrix {
    let mut total = ComplexMatrix::zeros(e.dim);
    for effect in &e.effects {
        total.add_scaled(1.0, effect);
    }
    total
}

/// Outcome statistics `x -> Re tr(T E(x))`.
pub fn outcome_distribution(
    e: &Observable,
    state: &State,
    tol: &Tolerance,
) -> Result<ProbabilityVector> {
    if state.dim() != e.dim {
        return Err(Error::DimensionMismatch {
            expected: e.dim,
            found: state.dim(),
        });
    }
    let t = state.matrix();
    let weights = e
        .effects
        .iter()
        .map(|effect| {
            // tr(T E) = sum_ij T_ij E_ji
            let d = e.dim;
            let mut acc = 0.0;
            for i in 0..d {
                for j in 0..d {
                    acc += (t.get(i, j) * effect.get(j, i)).re;
                }
            }
            acc
        })
        .collect();
    ProbabilityVector::new(e.outcomes.clone(), weights, tol)
}

/// `E(X)`: the sum of the effects of the listed outcomes, accumulated in
/// outcome order.
pub fn effect_of_subset(e: &Observable, subset: &[&str]) -> Result<ComplexMatrix> {
    let mut selected = vec![false; e.len()];
    for label in subset {
        selected[e.outcomes.index_of(label)?] = true;
    }
    let mut out = ComplexMatrix::zeros(e.dim);
    for (effect, _) in e.effects.iter().zip(&selected).filter(|(_, s)| **s) {
        out.add_scaled(1.0, effect);
    }
    Ok(out)
}

/// `E(f) = sum_x f(x) E(x)` for a real function on the outcomes.
pub fn effect_of_function(e: &Observable, f: &[f64]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(e.dim);
    for (effect, fx) in e.effects.iter().zip(f) {
        out.add_scaled(*fx, effect);
    }
    out
}

/// Whether all effects commute, with the largest commutator entry found.
pub fn is_commutative(e: &Observable, tol: &Tolerance) -> (bool, f64) {
    let norm = max_commutator(&e.effects);
    (norm <= tol.eps_eq, norm)
}

pub(crate) fn max_commutator(family: &[ComplexMatrix]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..family.len() {
        for j in (i + 1)..family.len() {
            worst = worst.max(family[i].commutator(&family[j]).max_abs());
        }
    }
    worst
}

/// Whether every effect is idempotent and distinct effects multiply to zero.
pub fn is_sharp(e: &Observable, tol: &Tolerance) -> bool {
    for (i, a) in e.effects.iter().enumerate() {
        if (a * a).max_abs_diff(a) > tol.eps_eq {
            return false;
        }
        for b in &e.effects[i + 1..] {
            if (a * b).max_abs() > tol.eps_eq {
                return false;
            }
        }
    }
    true
}

/// Whether the algebra generated by the (commuting) effects is maximal
/// abelian, decided by checking that the commutant of the effects is itself
/// abelian.
pub fn is_maximally_commutative(e: &Observable, tol: &Tolerance) -> Result<bool> {
    let (commutative, norm) = is_commutative(e, tol);
    if !commutative {
        return Err(Error::NotCommutative { norm });
    }
    let basis = commutant_basis(&e.effects, tol)?;
    if basis.len() > e.dim {
        // an abelian subalgebra of L(C^d) has dimension at most d
        return Ok(false);
    }
    let threshold = 10.0 * tol.eps_eq;
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            if basis[i].commutator(&basis[j]).max_abs() > threshold {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::linalg::C64;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn outcome_set_rules() {
        assert!(OutcomeSet::new(Vec::<String>::new()).is_err());
        assert!(OutcomeSet::new(["a", "a"]).is_err());
        let s = OutcomeSet::new(["a", "b"]).unwrap();
        assert_eq!(s.index_of("b").unwrap(), 1);
        assert!(matches!(s.index_of("c"), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn validate_examples() {
        assert!(validate(&coin(2), &tol()).is_valid());

        let doubled = Observable::new(
            OutcomeSet::range(2).unwrap(),
            vec![ComplexMatrix::identity(2), ComplexMatrix::identity(2)],
        )
        .unwrap();
        let report = validate(&doubled, &tol());
        assert_eq!(
            report.violations,
            vec![Violation::SumNotIdentity { deviation: 1.0 }]
        );
        assert!(report.to_string().contains("sum deviates by 1.0"));

        let negative = Observable::new(
            OutcomeSet::range(2).unwrap(),
            vec![
                ComplexMatrix::from_real_diagonal(&[1.5, 0.0]),
                ComplexMatrix::from_real_diagonal(&[-0.5, 1.0]),
            ],
        )
        .unwrap();
        let report = validate(&negative, &tol());
        assert_eq!(report.violations.len(), 1);
        match &report.violations[0] {
            Violation::NegativeEigenvalue { outcome, value } => {
                assert_eq!(outcome, "1");
                assert!((value + 0.5).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn shape_mismatch_on_construction() {
        let r = Observable::new(
            OutcomeSet::range(2).unwrap(),
            vec![ComplexMatrix::identity(2), ComplexMatrix::zeros(3)],
        );
        assert!(matches!(r, Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn distributions() {
        let p = outcome_distribution(&coin(2), &State::maximally_mixed(2), &tol()).unwrap();
        assert_eq!(p.weights(), &[0.5, 0.5]);

        let zero = State::pure(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        let p = outcome_distribution(&sharp_z(), &zero, &tol()).unwrap();
        assert_eq!(p.weights(), &[1.0, 0.0]);

        // tr(I/2 * (I +- sz/2)/2) = 1/2
        let p =
            outcome_distribution(&smeared_qubit(0.5), &State::maximally_mixed(2), &tol()).unwrap();
        assert!((p.weights()[0] - 0.5).abs() < 1e-15);
        assert!((p.weights()[1] - 0.5).abs() < 1e-15);

        assert!(matches!(
            outcome_distribution(&coin(3), &State::maximally_mixed(2), &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn subsets() {
        let c = coin(2);
        assert_eq!(effect_of_subset(&c, &[]).unwrap(), ComplexMatrix::zeros(2));
        assert_eq!(
            effect_of_subset(&c, &["0", "1"]).unwrap(),
            ComplexMatrix::identity(2)
        );
        assert_eq!(
            effect_of_subset(&c, &["0"]).unwrap(),
            ComplexMatrix::identity(2).scale(0.5)
        );
        assert!(matches!(
            effect_of_subset(&c, &["7"]),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn commutativity() {
        assert!(is_commutative(&smeared_qubit(0.3), &tol()).0);
        assert!(is_commutative(&smeared_x(0.5), &tol()).0);
        let (ok, norm) = is_commutative(&trine(), &tol());
        assert!(!ok);
        // [E0, E1] = (1/9)[n0.s, n1.s] = (2i/9)(n0 x n1).s, |n0 x n1| = sin(120deg)
        let expected = 2.0 / 9.0 * (3.0f64).sqrt() / 2.0;
        assert!((norm - expected).abs() < 1e-12, "{norm} vs {expected}");
    }

    #[test]
    fn sharpness() {
        assert!(is_sharp(&sharp_z(), &tol()));
        assert!(!is_sharp(&coin(2), &tol()));
        assert!(is_sharp(&trivial(2), &tol()));
        assert!(SharpObservable::new(coin(2), &tol()).is_err());
    }

    #[test]
    fn maximal_commutativity() {
        assert!(is_maximally_commutative(&sharp_z(), &tol()).unwrap());
        assert!(!is_maximally_commutative(&trivial(2), &tol()).unwrap());
        let zi = Observable::new(
            OutcomeSet::range(2).unwrap(),
            vec![
                ComplexMatrix::from_real_diagonal(&[1.0, 1.0, 0.0, 0.0]),
                ComplexMatrix::from_real_diagonal(&[0.0, 0.0, 1.0, 1.0]),
            ],
        )
        .unwrap();
        assert!(!is_maximally_commutative(&zi, &tol()).unwrap());
        assert!(matches!(
            is_maximally_commutative(&trine(), &tol()),
            Err(Error::NotCommutative { .. })
        ));
    }

    #[test]
    fn probability_vector_clamps_rounding() {
        let s = OutcomeSet::range(2).unwrap();
        let p = ProbabilityVector::new(s.clone(), vec![1.0 + 5e-10, -5e-10], &tol()).unwrap();
        assert_eq!(p.weights()[1], 0.0);
        assert!(ProbabilityVector::new(s.clone(), vec![1.1, -0.1], &tol()).is_err());
        assert!(ProbabilityVector::new(s, vec![0.5, 0.4], &tol()).is_err());
    }
}
