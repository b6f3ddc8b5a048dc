use super::eigen::{eig_unchecked, fix_phase};
use super::{ComplexMatrix, Tolerance, C64};
use crate::error::{Error, Result};

/// Common eigenbasis of a commuting Hermitian family.
#[derive(Debug, Clone)]
pub struct SimultaneousBasis {
    /// Unitary; column `v` is the `v`-th common eigenvector.
    pub basis: ComplexMatrix,
    /// `joint_values[v][i]` is the eigenvalue of family member `i` on column `v`.
    pub joint_values: Vec<Vec<f64>>,
}

/// Diagonalises every member of a commuting Hermitian family in one basis.
///
/// The first matrix is diagonalised, its eigenvalues grouped into clusters at
/// `eps_eig_cluster`, the remaining matrices restricted to each cluster's
/// eigenspace, and the procedure repeated on each restriction. Output order
/// follows the cluster order, i.e. ascending eigenvalues of the first matrix,
/// then of the second inside each cluster, and so on.
pub fn simultaneous_diagonalization(
    family: &[ComplexMatrix],
    tol: &Tolerance,
) -> Result<SimultaneousBasis> {
    let first = family.first().ok_or(Error::EmptyFamily)?;
    let d = first.dim();
    for a in family {
        if a.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: a.dim(),
            });
        }
        let deviation = a.hermiticity_defect();
        if deviation > tol.eps_herm {
            return Err(Error::NotHermitian { deviation });
        }
    }
    for i in 0..family.len() {
        for j in (i + 1)..family.len() {
            let norm = family[i].commutator(&family[j]).max_abs();
            if norm > tol.eps_eq {
                return Err(Error::NotCommutingFamily {
                    first: i,
                    second: j,
                    norm,
                });
            }
        }
    }

    let start: Vec<Vec<C64>> = (0..d)
        .map(|j| {
            let mut e = vec![C64::new(0.0, 0.0); d];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();
    let mut columns = Vec::with_capacity(d);
    refine(family, 0, start, tol.eps_eig_cluster, &mut columns)?;
    for col in &mut columns {
        fix_phase(col);
    }

    let joint_values = columns
        .iter()
        .map(|v| family.iter().map(|a| a.quadratic_form(v).re).collect())
        .collect();
    Ok(SimultaneousBasis {
        basis: ComplexMatrix::from_columns(d, &columns),
        joint_values,
    })
}

fn refine(
    family: &[ComplexMatrix],
    level: usize,
    subspace: Vec<Vec<C64>>,
    cluster_eps: f64,
    out: &mut Vec<Vec<C64>>,
) -> Result<()> {
    if level == family.len() || subspace.len() == 1 {
        out.extend(subspace);
        return Ok(());
    }
    let restricted = restrict(&family[level], &subspace);
    let eig = eig_unchecked(&restricted, cluster_eps)?;
    let r = subspace.len();

    let mut start = 0;
    while start < r {
        let mut end = start + 1;
        while end < r && eig.values[end] - eig.values[end - 1] <= cluster_eps {
            end += 1;
        }
        let cluster: Vec<Vec<C64>> = (start..end)
            .map(|k| lift(&subspace, &eig.vectors.column(k)))
            .collect();
        refine(family, level + 1, cluster, cluster_eps, out)?;
        start = end;
    }
    Ok(())
}

/// `Q^* A Q` for the orthonormal columns `Q`.
fn restrict(a: &ComplexMatrix, q: &[Vec<C64>]) -> ComplexMatrix {
    let d = a.dim();
    let r = q.len();
    let aq: Vec<Vec<C64>> = q
        .iter()
        .map(|col| {
            (0..d)
                .map(|i| (0..d).map(|j| a.get(i, j) * col[j]).sum())
                .collect()
        })
        .collect();
    let mut out = ComplexMatrix::zeros(r);
    for (i, qi) in q.iter().enumerate() {
        for (j, aqj) in aq.iter().enumerate() {
            let z: C64 = qi.iter().zip(aqj).map(|(x, y)| x.conj() * y).sum();
            out.set(i, j, z);
        }
    }
    out
}

/// `Q w`.
fn lift(q: &[Vec<C64>], w: &[C64]) -> Vec<C64> {
    let d = q[0].len();
    let mut v = vec![C64::new(0.0, 0.0); d];
    for (col, coeff) in q.iter().zip(w) {
        for (vi, ci) in v.iter_mut().zip(col) {
            *vi += ci * coeff;
        }
    }
    v
}
