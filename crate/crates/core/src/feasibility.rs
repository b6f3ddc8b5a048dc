//! Linear feasibility over nonnegative variables.
//!
//! Decides whether `x >= 0` exists with `row . x = rhs` for every equality,
//! up to a slack, using the first phase of a dense two-phase simplex with
//! Bland's rule. An optional linear objective can be minimised over the
//! feasible set afterwards (second phase).

use crate::error::{Error, Result};
use crate::linalg::Tolerance;
use crate::observables::Observable;

/// Coefficients below this magnitude count as structural zeros when a whole
/// row is tested for being empty.
const ZERO_ROW_EPS: f64 = 1e-14;
/// Smallest admissible pivot element.
const PIVOT_EPS: f64 = 1e-9;
/// Reduced costs above `-COST_EPS` are treated as nonnegative.
const COST_EPS: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub struct Equality {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityProblem {
    num_vars: usize,
    equalities: Vec<Equality>,
    slack: f64,
}

impl FeasibilityProblem {
    pub fn new(num_vars: usize, equalities: Vec<Equality>, slack: f64) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::ShapeMismatch(
                "feasibility problem needs variables".into(),
            ));
        }
        if !(slack.is_finite() && slack >= 0.0) {
            return Err(Error::ShapeMismatch(format!("invalid slack {slack}")));
        }
        for (k, eq) in equalities.iter().enumerate() {
            if eq.coeffs.len() != num_vars {
                return Err(Error::ShapeMismatch(format!(
                    "equality {k} has {} coefficients, expected {num_vars}",
                    eq.coeffs.len()
                )));
            }
            if !eq.rhs.is_finite() || eq.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self {
            num_vars,
            equalities,
            slack,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn equalities(&self) -> &[Equality] {
        &self.equalities
    }

    pub fn slack(&self) -> f64 {
        self.slack
    }

    /// Largest `|row . x - rhs|` over all equalities.
    pub fn max_residual(&self, x: &[f64]) -> f64 {
        self.equalities
            .iter()
            .map(|eq| (dot(&eq.coeffs, x) - eq.rhs).abs())
            .fold(0.0, f64::max)
    }
}

/// Finds a nonnegative `x` meeting every equality within the slack, or
/// returns `None` when the phase-one optimum exceeds the slack.
pub fn solve(p: &FeasibilityProblem) -> Result<Option<Vec<f64>>> {
    solve_with_objective(p, None)
}

/// Like [`solve`], then minimises `objective . x` over the feasible set.
pub fn solve_with_objective(
    p: &FeasibilityProblem,
    objective: Option<&[f64]>,
) -> Result<Option<Vec<f64>>> {
    if let Some(c) = objective {
        if c.len() != p.num_vars {
            return Err(Error::ShapeMismatch(format!(
                "objective has {} entries, expected {}",
                c.len(),
                p.num_vars
            )));
        }
    }
    let Some(mut tableau) = Tableau::phase_one_start(p) else {
        return Ok(None);
    };
    tableau.run_phase_one()?;
    if tableau.artificial_mass() > p.slack {
        return Ok(None);
    }
    if let Some(c) = objective {
        tableau.run_phase_two(c)?;
    }
    let x = tableau.solution();
    let residual = p.max_residual(&x);
    if residual > 2.0 * p.slack {
        return Err(Error::NumericalBreakdown(format!(
            "solution violates an equality by {residual:.3e}"
        )));
    }
    Ok(Some(x))
}

/// Dense tableau `[B^-1 A | B^-1 b]` with artificial columns dropped; an
/// artificial that leaves the basis never re-enters during phase one.
struct Tableau {
    n: usize,
    rows: Vec<Vec<f64>>,
    /// Basic variable of each row; `>= n` means artificial `basis - n`.
    basis: Vec<usize>,
    /// Reduced costs of the structural columns followed by `-objective`.
    costs: Vec<f64>,
    max_iterations: usize,
}

impl Tableau {
    /// Returns `None` when an empty row has an out-of-slack right-hand side.
    fn phase_one_start(p: &FeasibilityProblem) -> Option<Self> {
        let n = p.num_vars;
        let mut rows = Vec::with_capacity(p.equalities.len());
        for eq in &p.equalities {
            if eq.coeffs.iter().all(|c| c.abs() <= ZERO_ROW_EPS) {
                if eq.rhs.abs() > p.slack {
                    return None;
                }
                continue;
            }
            let sign = if eq.rhs < 0.0 { -1.0 } else { 1.0 };
            let mut row: Vec<f64> = eq.coeffs.iter().map(|c| c * sign).collect();
            row.push(eq.rhs * sign);
            rows.push(row);
        }
        let m = rows.len();
        let basis = (0..m).map(|i| n + i).collect();
        let mut costs = vec![0.0; n + 1];
        for row in &rows {
            for (c, a) in costs.iter_mut().zip(row) {
                *c -= a;
            }
        }
        Some(Self {
            n,
            rows,
            basis,
            costs,
            max_iterations: 50 * (m + n) + 100,
        })
    }

    fn artificial_mass(&self) -> f64 {
        self.rows
            .iter()
            .zip(&self.basis)
            .filter(|(_, b)| **b >= self.n)
            .map(|(row, _)| row[self.n].max(0.0))
            .sum()
    }

    fn run_phase_one(&mut self) -> Result<()> {
        self.iterate()
    }

    fn run_phase_two(&mut self, objective: &[f64]) -> Result<()> {
        let n = self.n;
        // Drive artificials out of the basis; rows where that is impossible
        // are linear combinations of the others and are dropped.
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < n {
                i += 1;
                continue;
            }
            let col = (0..n)
                .filter(|&j| !self.basis.contains(&j))
                .find(|&j| self.rows[i][j].abs() > PIVOT_EPS);
            match col {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.basis.remove(i);
                }
            }
        }
        for row in &mut self.rows {
            if row[n] < 0.0 {
                row[n] = 0.0;
            }
        }
        let mut costs: Vec<f64> = objective.to_vec();
        costs.push(0.0);
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = objective[b];
            if cb != 0.0 {
                for (c, a) in costs.iter_mut().zip(row) {
                    *c -= cb * a;
                }
            }
        }
        self.costs = costs;
        self.iterate()
    }

    fn iterate(&mut self) -> Result<()> {
        let n = self.n;
        for _ in 0..self.max_iterations {
            let Some((row, col)) = self.choose_pivot() else {
                return Ok(());
            };
            self.pivot(row, col);
        }
        Err(Error::NumericalBreakdown(format!(
            "no optimum after {} pivots ({} rows, {n} columns)",
            self.max_iterations,
            self.rows.len()
        )))
    }

    /// Bland's rule: lowest-index improving column, then the minimum-ratio
    /// row with the lowest-index basic variable.
    fn choose_pivot(&self) -> Option<(usize, usize)> {
        let n = self.n;
        for j in 0..n {
            if self.costs[j] >= -COST_EPS {
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = row[j];
                if a <= PIVOT_EPS {
                    continue;
                }
                let ratio = row[n].max(0.0) / a;
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
                        if ratio < br && !tie || tie && self.basis[i] < self.basis[bi] {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            if let Some((i, _)) = best {
                return Some((i, j));
            }
        }
        None
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = 1.0 / self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v *= inv;
        }
        self.rows[r][c] = 1.0;
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
                row[c] = 0.0;
            }
        }
        let f = self.costs[c];
        if f != 0.0 {
            for (v, p) in self.costs.iter_mut().zip(&pivot_row) {
                *v -= f * p;
            }
            self.costs[c] = 0.0;
        }
        self.basis[r] = c;
    }

    fn solution(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.n {
                x[b] = row[self.n].max(0.0);
            }
        }
        x
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Encodes "E is a kernel image of F" as a feasibility problem.
///
/// Variable `x * |E| + a` is the kernel entry `mu_x(a)` (row-major over F's
/// outcomes `x` and E's outcomes `a`). There is one equality per
/// `(a, i, j, re/im)` stating `sum_x mu_x(a) F(x)[i][j] = E(a)[i][j]`, followed
/// by one row-sum equality per `x`.
pub fn encode_kernel_problem(
    e: &Observable,
    f: &Observable,
    slack: f64,
) -> Result<FeasibilityProblem> {
    if e.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: e.dim(),
        });
    }
    let d = e.dim();
    let n_target = e.len();
    let n_source = f.len();
    let num_vars = n_source * n_target;
    let mut equalities = Vec::with_capacity(n_target * d * d * 2 + n_source);
    for (a, effect) in e.effects().iter().enumerate() {
        for i in 0..d {
            for j in 0..d {
                for part in [Part::Re, Part::Im] {
                    let mut coeffs = vec![0.0; num_vars];
                    for (x, fx) in f.effects().iter().enumerate() {
                        coeffs[x * n_target + a] = part.of(fx.get(i, j));
                    }
                    equalities.push(Equality {
                        coeffs,
                        rhs: part.of(effect.get(i, j)),
                    });
                }
            }
        }
    }
    for x in 0..n_source {
        let mut coeffs = vec![0.0; num_vars];
        for a in 0..n_target {
            coeffs[x * n_target + a] = 1.0;
        }
        equalities.push(Equality { coeffs, rhs: 1.0 });
    }
    FeasibilityProblem::new(num_vars, equalities, slack)
}

/// [`encode_kernel_problem`] with the slack taken from a tolerance.
pub fn encode_kernel_problem_with(
    e: &Observable,
    f: &Observable,
    tol: &Tolerance,
) -> Result<FeasibilityProblem> {
    encode_kernel_problem(e, f, tol.eps_feas)
}

#[derive(Clone, Copy)]
enum Part {
    Re,
    Im,
}

impl Part {
    fn of(self, z: crate::linalg::C64) -> f64 {
        match self {
            Part::Re => z.re,
            Part::Im => z.im,
        }
    }
}
