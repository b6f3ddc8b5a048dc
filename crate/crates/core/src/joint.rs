//! Joint observables on product outcome sets.

use crate::error::{Error, Result};
use crate::fuzzy::{apply_kernel, MarkovKernel};
use crate::linalg::{ComplexMatrix, Tolerance};
use crate::observables::{max_commutator, Observable, OutcomeSet};
use crate::representation::joint_spectral_clusters;

/// Separator between the two components of a product label.
pub const PAIR_SEPARATOR: char = '|';

/// `first x second`, flattened in row-major order with labels `"a|b"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductOutcomeSet {
    first: OutcomeSet,
    second: OutcomeSet,
    flat: OutcomeSet,
}

impl ProductOutcomeSet {
    pub fn new(first: OutcomeSet, second: OutcomeSet) -> Result<Self> {
        for l in first.labels().iter().chain(second.labels()) {
            if l.contains(PAIR_SEPARATOR) {
                return Err(Error::InvalidOutcomeSet(format!(
                    "label {l:?} contains the reserved character '{PAIR_SEPARATOR}'"
                )));
            }
        }
        let flat = OutcomeSet::new(first.labels().iter().flat_map(|a| {
            second
                .labels()
                .iter()
                .map(move |b| format!("{a}{PAIR_SEPARATOR}{b}"))
        }))?;
        Ok(Self {
            first,
            second,
            flat,
        })
    }

    /// Recovers the factors from flattened labels, which must form a full
    /// row-major grid.
    pub fn parse(flat: &OutcomeSet) -> Result<Self> {
        let mut firsts: Vec<&str> = Vec::new();
        let mut seconds: Vec<&str> = Vec::new();
        let mut pairs = Vec::with_capacity(flat.len());
        for label in flat.labels() {
            let (a, b) = label
                .split_once(PAIR_SEPARATOR)
                .filter(|(_, b)| !b.contains(PAIR_SEPARATOR))
                .ok_or_else(|| {
                    Error::NotProductStructured(format!("label {label:?} is not of the form a|b"))
                })?;
            if !firsts.contains(&a) {
                firsts.push(a);
            }
            if !seconds.contains(&b) {
                seconds.push(b);
            }
            pairs.push((a, b));
        }
        let grid = firsts
            .iter()
            .flat_map(|a| seconds.iter().map(move |b| (*a, *b)));
        if pairs.len() != firsts.len() * seconds.len() || !grid.eq(pairs.iter().copied()) {
            return Err(Error::NotProductStructured(
                "labels do not enumerate a product set in row-major order".into(),
            ));
        }
        let product = Self::new(OutcomeSet::new(firsts)?, OutcomeSet::new(seconds)?)?;
        debug_assert_eq!(product.flat, *flat);
        Ok(product)
    }

    pub fn first(&self) -> &OutcomeSet {
        &self.first
    }

    pub fn second(&self) -> &OutcomeSet {
        &self.second
    }

    pub fn flat(&self) -> &OutcomeSet {
        &self.flat
    }

    pub fn len(&self) -> usize {
        self.flat.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, a: usize, b: usize) -> usize {
        a * self.second.len() + b
    }
}

/// `E1(a) = sum_b G(a,b)` and `E2(b) = sum_a G(a,b)`.
pub fn marginals(g: &Observable) -> Result<(Observable, Observable)> {
    let product = ProductOutcomeSet::parse(g.outcomes())?;
    let (n1, n2) = (product.first.len(), product.second.len());
    let d = g.dim();
    let mut first = vec![ComplexMatrix::zeros(d); n1];
    let mut second = vec![ComplexMatrix::zeros(d); n2];
    for (a, row) in first.iter_mut().enumerate() {
        for (b, column) in second.iter_mut().enumerate() {
            let effect = &g.effects()[product.index(a, b)];
            row.add_scaled(1.0, effect);
            column.add_scaled(1.0, effect);
        }
    }
    Ok((
        Observable::new(product.first, first)?,
        Observable::new(product.second, second)?,
    ))
}

/// Kernel `x -> mu_x (x) nu_x` on the product outcome set.
pub fn product_kernel(mu: &MarkovKernel, nu: &MarkovKernel) -> Result<MarkovKernel> {
    if mu.from_outcomes() != nu.from_outcomes() {
        return Err(Error::OutcomeMismatch(
            "kernels have different source outcomes".into(),
        ));
    }
    let product = ProductOutcomeSet::new(mu.to_outcomes().clone(), nu.to_outcomes().clone())?;
    let matrix = mu
        .matrix()
        .iter()
        .zip(nu.matrix())
        .map(|(m, n)| {
            m.iter()
                .flat_map(|p| n.iter().map(move |q| p * q))
                .collect()
        })
        .collect();
    Ok(MarkovKernel::from_parts(
        mu.from_outcomes().clone(),
        product.flat,
        matrix,
    ))
}

/// `G~(a,b) = sum_x mu_x(a) nu_x(b) G(x)`; its marginals are the images of
/// `G` under `mu` and `nu`.
pub fn product_joint(g: &Observable, mu: &MarkovKernel, nu: &MarkovKernel) -> Result<Observable> {
    if mu.from_outcomes() != g.outcomes() || nu.from_outcomes() != g.outcomes() {
        return Err(Error::OutcomeMismatch(
            "both kernels must be defined on the outcomes of G".into(),
        ));
    }
    apply_kernel(g, &product_kernel(mu, nu)?)
}

#[derive(Debug, Clone, PartialEq)]
pub enum JointVerdict {
    Joint(Observable),
    /// The effects do not all commute, so no joint observable is built.
    /// This is not a proof of incompatibility.
    NotDecided {
        commutator_norm: f64,
    },
}

impl JointVerdict {
    pub fn joint(self) -> Option<Observable> {
        match self {
            JointVerdict::Joint(g) => Some(g),
            JointVerdict::NotDecided { .. } => None,
        }
    }
}

/// Builds a joint observable when all effects of `e1` and `e2` commute,
/// using their common spectral projections `P_k` and the values `mu_k(a)`,
/// `nu_k(b)` of the effects on them: `G(a,b) = sum_k mu_k(a) nu_k(b) P_k`.
pub fn joint_for_commuting_pair(
    e1: &Observable,
    e2: &Observable,
    tol: &Tolerance,
) -> Result<JointVerdict> {
    if e1.dim() != e2.dim() {
        return Err(Error::DimensionMismatch {
            expected: e1.dim(),
            found: e2.dim(),
        });
    }
    let family: Vec<ComplexMatrix> = e1.effects().iter().chain(e2.effects()).cloned().collect();
    let norm = max_commutator(&family);
    if norm > tol.eps_eq {
        return Ok(JointVerdict::NotDecided {
            commutator_norm: norm,
        });
    }
    // Any orthogonal split of the common eigenspaces yields the same G up to
    // rounding, so a cluster ambiguity only means falling back to rank-one
    // pieces.
    let clusters = match joint_spectral_clusters(&family, tol) {
        Ok(c) => c,
        Err(Error::ClusterAmbiguity { .. }) => {
            let mut strict = *tol;
            strict.eps_eig_cluster = 0.0;
            joint_spectral_clusters(&family, &strict)?
        }
        Err(e) => return Err(e),
    };
    let product = ProductOutcomeSet::new(e1.outcomes().clone(), e2.outcomes().clone())?;
    let n1 = e1.len();
    let mut effects = vec![ComplexMatrix::zeros(e1.dim()); product.len()];
    for cluster in &clusters {
        let (mu, nu) = cluster.values.split_at(n1);
        for (a, p) in mu.iter().enumerate() {
            for (b, q) in nu.iter().enumerate() {
                let w = p.clamp(0.0, 1.0) * q.clamp(0.0, 1.0);
                if w != 0.0 {
                    effects[product.index(a, b)].add_scaled(w, &cluster.projection);
                }
            }
        }
    }
    Ok(JointVerdict::Joint(Observable::new(product.flat, effects)?))
}

/// Largest entrywise deviation of the marginals of `g` from `(e1, e2)`.
pub fn joint_residual(g: &Observable, e1: &Observable, e2: &Observable) -> Result<f64> {
    let (m1, m2) = marginals(g)?;
    if m1.outcomes() != e1.outcomes() || m2.outcomes() != e2.outcomes() {
        return Err(Error::OutcomeMismatch(
            "marginal outcome sets differ from the given observables".into(),
        ));
    }
    Ok(m1.max_effect_diff(e1)?.max(m2.max_effect_diff(e2)?))
}

/// Whether `g` is a joint observable of `e1` and `e2` within `10 eps_eq`.
pub fn verify_joint(
    g: &Observable,
    e1: &Observable,
    e2: &Observable,
    tol: &Tolerance,
) -> Result<bool> {
    Ok(joint_residual(g, e1, e2)? <= 10.0 * tol.eps_eq)
}
