use super::eigen::hermitian_eig;
use super::nullspace::nullspace;
use super::{ComplexMatrix, RectMatrix, Tolerance, C64};
use crate::error::{Error, Result};

/// Hilbert-Schmidt orthonormal basis of `{X : X A = A X for all A in ops}`.
///
/// The commutant is the joint nullspace of the maps `X -> A X - X A` acting
/// on row-major `d^2`-vectors, intersected one operator at a time. When the
/// first operator is Hermitian, `A = V diag(l) V^*`, the map has singular
/// values `|l_i - l_j|` with singular vectors `v_i v_j^*`, so its nullspace is
/// read off directly instead of running a `d^2 x d^2` decomposition.
pub fn commutant_basis(ops: &[ComplexMatrix], tol: &Tolerance) -> Result<Vec<ComplexMatrix>> {
    let d = ops.first().ok_or(Error::EmptyFamily)?.dim();
    if let Some(bad) = ops.iter().find(|a| a.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: bad.dim(),
        });
    }

    // None stands for the whole of L(C^d).
    let mut current: Option<Vec<Vec<C64>>> = None;
    for a in ops {
        current = Some(match current {
            None if a.is_hermitian(tol.eps_herm) => hermitian_kernel(a, tol)?,
            None => {
                let full: Vec<Vec<C64>> = (0..d * d)
                    .map(|k| {
                        let mut e = vec![C64::new(0.0, 0.0); d * d];
                        e[k] = C64::new(1.0, 0.0);
                        e
                    })
                    .collect();
                intersect_kernel(a, &full, tol)?
            }
            Some(basis) => intersect_kernel(a, &basis, tol)?,
        });
        if current.as_ref().is_some_and(Vec::is_empty) {
            break;
        }
    }

    Ok(current
        .unwrap_or_default()
        .into_iter()
        .map(|v| ComplexMatrix::new(d, v).expect("d^2 finite entries"))
        .collect())
}

fn hermitian_kernel(a: &ComplexMatrix, tol: &Tolerance) -> Result<Vec<Vec<C64>>> {
    let d = a.dim();
    let eig = hermitian_eig(a, tol)?;
    let cols: Vec<Vec<C64>> = (0..d).map(|k| eig.vectors.column(k)).collect();
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if (eig.values[i] - eig.values[j]).abs() <= tol.eps_eig_cluster {
                out.push(ComplexMatrix::outer_pair(&cols[i], &cols[j]).into_vec());
            }
        }
    }
    Ok(out)
}

/// Elements of `span(basis)` annihilated by `X -> A X - X A`.
fn intersect_kernel(
    a: &ComplexMatrix,
    basis: &[Vec<C64>],
    tol: &Tolerance,
) -> Result<Vec<Vec<C64>>> {
    let d = a.dim();
    let r = basis.len();
    let images: Vec<Vec<C64>> = basis
        .iter()
        .map(|v| {
            let x = ComplexMatrix::new(d, v.clone()).expect("finite basis");
            a.commutator(&x).into_vec()
        })
        .collect();
    let mut data = vec![C64::new(0.0, 0.0); d * d * r];
    for (j, img) in images.iter().enumerate() {
        for (i, z) in img.iter().enumerate() {
            data[i * r + j] = *z;
        }
    }
    let map = RectMatrix::new(d * d, r, data)?;
    let coeffs = nullspace(&map, tol)?;
    Ok(coeffs
        .iter()
        .map(|c| {
            let mut v = vec![C64::new(0.0, 0.0); d * d];
            for (b, cj) in basis.iter().zip(c) {
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi += bi * cj;
                }
            }
            v
        })
        .collect())
}
