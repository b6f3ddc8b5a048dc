//! Helpers shared by the integration tests.
#![allow(dead_code)]

use povmlab::feasibility::{Equality, FeasibilityProblem};
use povmlab::linalg::{ComplexMatrix, Tolerance};
use povmlab::observables::Observable;

pub fn tol() -> Tolerance {
    Tolerance::default()
}

/// Decides whether `{x >= 0 : A x = b}` is nonempty by enumerating basic
/// solutions: if the set is nonempty it has a vertex, whose support columns
/// are linearly independent and determine it uniquely.
pub fn oracle_feasible(a: &[Vec<f64>], b: &[f64], num_vars: usize) -> bool {
    const EPS: f64 = 1e-9;
    for mask in 0u32..(1 << num_vars) {
        let support: Vec<usize> = (0..num_vars).filter(|j| mask & (1 << j) != 0).collect();
        let Some(x) = solve_on_support(a, b, &support) else {
            continue;
        };
        if x.iter().all(|v| *v >= -EPS) {
            let residual = a
                .iter()
                .zip(b)
                .map(|(row, rhs)| {
                    let lhs: f64 = support.iter().zip(&x).map(|(&j, v)| row[j] * v).sum();
                    (lhs - rhs).abs()
                })
                .fold(0.0, f64::max);
            if residual <= EPS {
                return true;
            }
        }
    }
    false
}

/// Least-squares solution restricted to `support` when those columns are
/// independent (normal equations, Gauss-Jordan with partial pivoting).
fn solve_on_support(a: &[Vec<f64>], b: &[f64], support: &[usize]) -> Option<Vec<f64>> {
    let s = support.len();
    if s == 0 {
        return Some(Vec::new());
    }
    let mut m = vec![vec![0.0; s + 1]; s];
    for (p, &jp) in support.iter().enumerate() {
        for (q, &jq) in support.iter().enumerate() {
            m[p][q] = a.iter().map(|row| row[jp] * row[jq]).sum();
        }
        m[p][s] = a.iter().zip(b).map(|(row, rhs)| row[jp] * rhs).sum();
    }
    for col in 0..s {
        let pivot = (col..s).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() < 1e-10 {
            return None;
        }
        m.swap(col, pivot);
        for r in 0..s {
            if r != col {
                let f = m[r][col] / m[col][col];
                let pivot_row = m[col].clone();
                for (entry, p) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                    *entry -= f * p;
                }
            }
        }
    }
    Some((0..s).map(|i| m[i][s] / m[i][i]).collect())
}

pub fn problem(a: &[Vec<f64>], b: &[f64], num_vars: usize, slack: f64) -> FeasibilityProblem {
    let equalities = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| Equality {
            coeffs: row.clone(),
            rhs: *rhs,
        })
        .collect();
    FeasibilityProblem::new(num_vars, equalities, slack).expect("well formed")
}

pub fn max_diff(a: &Observable, b: &Observable) -> f64 {
    a.max_effect_diff(b).expect("same shape")
}

/// Whether two families of operators agree as multisets (greedy matching).
pub fn same_up_to_order(a: &[ComplexMatrix], b: &[ComplexMatrix], eps: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(
        |x| match (0..b.len()).find(|&j| !used[j] && x.max_abs_diff(&b[j]) <= eps) {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        },
    )
}

/// Largest commutator entry between members of two families.
pub fn cross_commutator(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> f64 {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x.commutator(y).max_abs()))
        .fold(0.0, f64::max)
}
