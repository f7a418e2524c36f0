//! Dense Hermitian eigendecomposition with explicit quality checks.
//!
//! The decomposition itself is nalgebra's Householder tridiagonalization
//! followed by implicit symmetric QR. Every result is verified against the
//! residual and orthonormality contracts below before it is returned.

use nalgebra::SymmetricEigen;

use crate::operators::{HilbertSpace, Operator, StateVector};
use crate::{CMatrix, CVector, Result, SqaError, C64};

/// Input Hermiticity tolerance (relative to the largest element).
pub const INPUT_HERMITIAN_TOL: f64 = 1e-10;
/// `max_k ‖H v_k − λ_k v_k‖ ≤ RESIDUAL_TOL · max|λ|`.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// `max |V†V − I| ≤ ORTHONORMALITY_TOL`.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;
/// Eigenvalues closer than this are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// QR sweeps allowed per matrix row before declaring non-convergence.
const QR_ITERATIONS_PER_ROW: usize = 100;

/// Ascending eigenvalues and the matching orthonormal eigenvectors (as
/// columns).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    space: HilbertSpace,
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl Spectrum {
    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvector(&self, k: usize) -> StateVector {
        StateVector::new(self.space, self.eigenvectors.column(k).into_owned())
            .expect("eigenvector length matches space")
    }

    /// Spectral norm estimate `max |λ|`.
    pub fn norm_estimate(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, l| m.max(l.abs()))
    }

    /// Matrix of `op` in the eigenbasis, `V† A V`.
    pub fn in_eigenbasis(&self, op: &Operator) -> CMatrix {
        self.eigenvectors.adjoint() * op.matrix() * &self.eigenvectors
    }

    /// `max_k ‖H v_k − λ_k v_k‖₂`.
    pub fn max_residual(&self, h: &Operator) -> f64 {
        let hv = h.matrix() * &self.eigenvectors;
        (0..self.len())
            .map(|k| {
                let lambda = C64::new(self.eigenvalues[k], 0.0);
                (hv.column(k) - self.eigenvectors.column(k) * lambda).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `max |V†V − I|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let d = self.len();
        let gram = self.eigenvectors.adjoint() * &self.eigenvectors;
        (gram - CMatrix::identity(d, d))
            .iter()
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Rebuild a spectrum from explicit parts. Columns must be orthonormal
    /// and eigenvalues non-decreasing; used to test gauge invariance.
    pub fn from_parts(
        space: HilbertSpace,
        eigenvalues: Vec<f64>,
        eigenvectors: CMatrix,
    ) -> Result<Self> {
        let d = space.total_dim();
        if eigenvalues.len() != d || eigenvectors.nrows() != d || eigenvectors.ncols() != d {
            return Err(SqaError::Validation(format!(
                "spectrum parts do not match dimension {d}"
            )));
        }
        if eigenvalues.windows(2).any(|w| w[1] < w[0]) {
            return Err(SqaError::Validation(
                "eigenvalues must be non-decreasing".into(),
            ));
        }
        let s = Self {
            space,
            eigenvalues,
            eigenvectors,
        };
        let defect = s.orthonormality_defect();
        if defect > ORTHONORMALITY_TOL {
            return Err(SqaError::Validation(format!(
                "eigenvectors are not orthonormal (defect {defect:.3e})"
            )));
        }
        Ok(s)
    }
}

/// Diagonalize a Hermitian operator.
pub fn diagonalize(h: &Operator) -> Result<Spectrum> {
    let defect = h.hermiticity_defect();
    if defect > INPUT_HERMITIAN_TOL {
        return Err(SqaError::Validation(format!(
            "matrix is not Hermitian (relative defect {defect:.3e})"
        )));
    }
    let d = h.dim();
    let symmetrized = (h.matrix() + h.matrix().adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::try_new(symmetrized, f64::EPSILON, QR_ITERATIONS_PER_ROW * d.max(1))
        .ok_or_else(|| {
            SqaError::Numerical(format!("eigensolver did not converge for a {d}x{d} matrix"))
        })?;

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = CMatrix::zeros(d, d);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }

    let spectrum = Spectrum {
        space: h.space(),
        eigenvalues,
        eigenvectors,
    };
    let residual = spectrum.max_residual(h);
    let bound = RESIDUAL_TOL * spectrum.norm_estimate();
    if residual > bound && residual > f64::MIN_POSITIVE {
        return Err(SqaError::Numerical(format!(
            "eigen-residual {residual:.3e} exceeds {bound:.3e} for a {d}x{d} matrix"
        )));
    }
    let ortho = spectrum.orthonormality_defect();
    if ortho > ORTHONORMALITY_TOL {
        return Err(SqaError::Numerical(format!(
            "eigenvectors lost orthonormality ({ortho:.3e}) for a {d}x{d} matrix"
        )));
    }
    Ok(spectrum)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    pub state: StateVector,
    /// Set when the first excited level lies within [`DEGENERACY_TOL`].
    pub degenerate: bool,
}

/// Lowest eigenpair. On degeneracy the first column is returned and
/// `degenerate` is set.
pub fn ground_state(s: &Spectrum) -> GroundState {
    let e = s.eigenvalues();
    GroundState {
        energy: e[0],
        state: s.eigenvector(0),
        degenerate: e.len() > 1 && (e[1] - e[0]).abs() <= DEGENERACY_TOL,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapMatch {
    pub index: usize,
    pub energy: f64,
    pub state: StateVector,
    /// `|⟨v_k|ref⟩|²`.
    pub overlap: f64,
}

/// The eigenstate with the largest squared overlap with `reference`.
/// Overlaps within `1e-12` of each other tie, and the lower level wins.
pub fn max_overlap_state(s: &Spectrum, reference: &StateVector) -> Result<OverlapMatch> {
    if reference.space() != s.space() {
        return Err(SqaError::Validation(format!(
            "reference state lives on {} but the spectrum on {}",
            reference.space(),
            s.space()
        )));
    }
    let norm = reference.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(SqaError::Validation(format!(
            "reference state must be normalized (norm {norm})"
        )));
    }
    let overlaps: CVector = s.eigenvectors().adjoint() * reference.amplitudes();
    let mut best = 0;
    let mut best_ov = overlaps[0].norm_sqr();
    for (k, z) in overlaps.iter().enumerate().skip(1) {
        let ov = z.norm_sqr();
        if ov > best_ov + 1e-12 {
            best = k;
            best_ov = ov;
        }
    }
    Ok(OverlapMatch {
        index: best,
        energy: s.eigenvalues()[best],
        state: s.eigenvector(best),
        overlap: best_ov,
    })
}
