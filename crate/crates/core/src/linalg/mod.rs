//! Dense complex linear algebra.
//!
//! Everything here works on small square matrices (a few hundred rows at
//! most) stored row-major. The spectral routines are plain Jacobi methods:
//! slow asymptotically, but accurate to working precision and fully
//! deterministic, which matters more for the rank and cluster decisions made
//! downstream.

mod commutant;
mod eigen;
mod matrix;
mod nullspace;
mod simdiag;

pub use commutant::commutant_basis;
pub use eigen::{hermitian_eig, HermitianEigen};
pub use matrix::{ComplexMatrix, RectMatrix, C64};
pub use nullspace::nullspace;
pub use simdiag::{simultaneous_diagonalization, SimultaneousBasis};

/// Absolute thresholds used to turn exact algebraic conditions into
/// floating-point decisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Max entry of `|A - A^*|` accepted as Hermitian.
    pub eps_herm: f64,
    /// Most negative eigenvalue accepted as positive semidefinite.
    pub eps_psd: f64,
    /// Eigenvalues (and joint value tuples) closer than this are one cluster.
    /// Also the singular-value cutoff for nullspaces.
    pub eps_eig_cluster: f64,
    /// Entrywise equality threshold for operators.
    pub eps_eq: f64,
    /// Equality slack handed to the feasibility solver.
    pub eps_feas: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            eps_herm: 1e-9,
            eps_psd: 1e-9,
            eps_eig_cluster: 1e-8,
            eps_eq: 1e-9,
            eps_feas: 1e-7,
        }
    }
}

impl Tolerance {
    /// Returns true when every field is a finite nonnegative number.
    pub fn is_valid(&self) -> bool {
        [
            self.eps_herm,
            self.eps_psd,
            self.eps_eig_cluster,
            self.eps_eq,
            self.eps_feas,
        ]
        .iter()
        .all(|v| v.is_finite() && *v >= 0.0)
    }
}

/// Plane rotation `J` (acting on coordinates `p`, `q`) that diagonalises the
/// Hermitian 2x2 block `[[app, apq], [conj(apq), aqq]]` via `J^* A J`.
///
/// Returned as `(jpp, jpq, jqp, jqq)`.
pub(crate) fn jacobi_rotation(app: f64, aqq: f64, apq: C64) -> (C64, C64, C64, C64) {
    let r = apq.norm();
    let phase = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let conj_phase = phase.conj();
    (
        C64::new(c, 0.0),
        C64::new(s, 0.0),
        conj_phase * (-s),
        conj_phase * c,
    )
}
