use super::{jacobi_rotation, ComplexMatrix, Tolerance, C64};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Spectral decomposition `A = V diag(values) V^*` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unitary; column `k` belongs to `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = self.vectors.dim();
        let mut out = ComplexMatrix::zeros(d);
        for (k, lambda) in self.values.iter().enumerate() {
            out.add_scaled(*lambda, &ComplexMatrix::outer(&self.vectors.column(k)));
        }
        out
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.
///
/// Eigenvalues come back ascending. Each eigenvector has its first
/// non-negligible coordinate rotated to be real positive, and vectors inside
/// one cluster (consecutive eigenvalues within `eps_eig_cluster`) are ordered
/// by the index of that coordinate.
pub fn hermitian_eig(a: &ComplexMatrix, tol: &Tolerance) -> Result<HermitianEigen> {
    let deviation = a.hermiticity_defect();
    if deviation > tol.eps_herm {
        return Err(Error::NotHermitian { deviation });
    }
    eig_unchecked(a, tol.eps_eig_cluster)
}

/// Same as [`hermitian_eig`] without the Hermiticity gate; the input is
/// symmetrised first. Used on restrictions `Q^* A Q` whose asymmetry is pure
/// rounding.
pub(crate) fn eig_unchecked(a: &ComplexMatrix, cluster_eps: f64) -> Result<HermitianEigen> {
    let d = a.dim();
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(d);

    let scale = m.frobenius_norm();
    let mut converged = d < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let off = off_diagonal_norm(&m);
        if off == 0.0 || off <= 4.0 * f64::EPSILON * scale {
            converged = true;
            break;
        }
        let mut rotated = false;
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = m.get(p, q);
                if apq.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                let (jpp, jpq, jqp, jqq) = jacobi_rotation(m.get(p, p).re, m.get(q, q).re, apq);
                // M <- M J
                for k in 0..d {
                    let mkp = m.get(k, p);
                    let mkq = m.get(k, q);
                    m.set(k, p, mkp * jpp + mkq * jqp);
                    m.set(k, q, mkp * jpq + mkq * jqq);
                }
                // M <- J^* M
                for k in 0..d {
                    let mpk = m.get(p, k);
                    let mqk = m.get(q, k);
                    m.set(p, k, jpp.conj() * mpk + jqp.conj() * mqk);
                    m.set(q, k, jpq.conj() * mpk + jqq.conj() * mqk);
                }
                m.set(p, q, C64::new(0.0, 0.0));
                m.set(q, p, C64::new(0.0, 0.0));
                m.set(p, p, C64::new(m.get(p, p).re, 0.0));
                m.set(q, q, C64::new(m.get(q, q).re, 0.0));
                // V <- V J
                for k in 0..d {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * jpp + vkq * jqp);
                    v.set(k, q, vkp * jpq + vkq * jqq);
                }
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        let off = off_diagonal_norm(&m);
        if !(off == 0.0 || off <= 4.0 * f64::EPSILON * scale) {
            return Err(Error::NoConvergence {
                iterations: MAX_SWEEPS,
            });
        }
    }

    let mut columns: Vec<(f64, Vec<C64>)> = (0..d)
        .map(|k| {
            let mut col = v.column(k);
            fix_phase(&mut col);
            (m.get(k, k).re, col)
        })
        .collect();
    columns.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Order vectors within each degenerate cluster by leading coordinate.
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && columns[end].0 - columns[end - 1].0 <= cluster_eps {
            end += 1;
        }
        columns[start..end].sort_by_key(|(_, col)| leading_index(col));
        start = end;
    }

    let values = columns.iter().map(|(l, _)| *l).collect();
    let cols: Vec<Vec<C64>> = columns.into_iter().map(|(_, c)| c).collect();
    Ok(HermitianEigen {
        values,
        vectors: ComplexMatrix::from_columns(d, &cols),
    })
}

const LEADING_EPS: f64 = 1e-10;

pub(crate) fn leading_index(v: &[C64]) -> usize {
    v.iter()
        .position(|z| z.norm() > LEADING_EPS)
        .unwrap_or(v.len())
}

/// Rotates the vector so its first significant coordinate is real positive.
pub(crate) fn fix_phase(v: &mut [C64]) {
    if let Some(lead) = v.iter().find(|z| z.norm() > LEADING_EPS).copied() {
        let phase = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let d = m.dim();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                acc += m.get(i, j).norm_sqr();
            }
        }
    }
    acc.sqrt()
}
