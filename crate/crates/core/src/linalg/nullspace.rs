use super::{jacobi_rotation, RectMatrix, Tolerance, C64};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Orthonormal basis of the right nullspace of `m`.
///
/// One-sided Jacobi: columns of `M V` are rotated until mutually orthogonal,
/// at which point their norms are the singular values. Columns of `V` whose
/// singular value is at most `eps_eig_cluster` span the nullspace.
pub fn nullspace(m: &RectMatrix, tol: &Tolerance) -> Result<Vec<Vec<C64>>> {
    let cutoff = tol.eps_eig_cluster;
    let (a, v) = one_sided_jacobi(m.columns(), m.cols(), cutoff)?;
    Ok(a.iter()
        .zip(v)
        .filter(|(col, _)| norm(col) <= cutoff)
        .map(|(_, basis_vec)| basis_vec)
        .collect())
}

type Columns = Vec<Vec<C64>>;

/// Runs one-sided Jacobi on the given columns. Returns the rotated columns
/// and the accumulated right rotation (as columns).
pub(crate) fn one_sided_jacobi(
    mut a: Vec<Vec<C64>>,
    n: usize,
    cutoff: f64,
) -> Result<(Columns, Columns)> {
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();
    // Two columns this small are both null at the cutoff whatever we do.
    let negligible = 1e-3 * cutoff;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = a[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = a[q].iter().map(|z| z.norm_sqr()).sum();
                if alpha.sqrt() <= negligible && beta.sqrt() <= negligible {
                    continue;
                }
                let gamma: C64 = a[p].iter().zip(&a[q]).map(|(x, y)| x.conj() * y).sum();
                if gamma.norm() <= f64::EPSILON * (alpha * beta).sqrt() || gamma.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                let (jpp, jpq, jqp, jqq) = jacobi_rotation(alpha, beta, gamma);
                rotate_pair(&mut a, p, q, (jpp, jpq, jqp, jqq));
                rotate_pair(&mut v, p, q, (jpp, jpq, jqp, jqq));
            }
        }
        if !rotated {
            return Ok((a, v));
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_SWEEPS,
    })
}

fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, j: (C64, C64, C64, C64)) {
    let (jpp, jpq, jqp, jqq) = j;
    let (left, right) = cols.split_at_mut(q);
    let cp = &mut left[p];
    let cq = &mut right[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = xp * jpp + xq * jqp;
        *y = xp * jpq + xq * jqq;
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
