//! Operators and states on the tensor-product space of `N` spin-1/2 qubits
//! and an optional truncated bosonic mode.
//!
//! # Basis ordering
//!
//! Qubit 0 is the most significant tensor factor and the Fock index is the
//! least significant (fastest varying):
//!
//! ```text
//! index = (Σ_i b_i · 2^(N-1-i)) · max(photon_dim, 1) + fock
//! ```
//!
//! where `b_i = 0` for `|0⟩` and `1` for `|1⟩`. The computational basis is
//! the σ^z eigenbasis with `σ^z|0⟩ = +|0⟩` and `σ^z|1⟩ = −|1⟩`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::{CMatrix, CVector, Result, SqaError, C64};

/// Largest qubit count accepted when building a space. Dense matrices of
/// dimension `2^N · photon_dim` are materialised, so this is a memory guard.
pub const MAX_QUBITS: usize = 14;

/// Hermiticity tolerance for operators built in this module, relative to
/// the largest matrix element.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// `N` qubits, optionally tensored with a bosonic mode truncated to
/// `photon_dim` Fock states (`photon_dim = 0` means no mode).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HilbertSpace {
    n_qubits: usize,
    photon_dim: usize,
}

impl HilbertSpace {
    pub fn new(n_qubits: usize, photon_dim: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(SqaError::config("n_qubits", "must be at least 1"));
        }
        if n_qubits > MAX_QUBITS {
            return Err(SqaError::config(
                "n_qubits",
                format!("{n_qubits} exceeds the dense-matrix limit of {MAX_QUBITS}"),
            ));
        }
        Ok(Self {
            n_qubits,
            photon_dim,
        })
    }

    /// Qubits only, no bosonic mode.
    pub fn qubits(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, 0)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn photon_dim(&self) -> usize {
        self.photon_dim
    }

    pub fn has_mode(&self) -> bool {
        self.photon_dim > 0
    }

    /// Size of the Fock factor, `max(photon_dim, 1)`.
    pub fn fock_dim(&self) -> usize {
        self.photon_dim.max(1)
    }

    pub fn qubit_dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn total_dim(&self) -> usize {
        self.qubit_dim() * self.fock_dim()
    }

    /// Basis index of the product state with qubit bits `bits` (0 or 1 per
    /// qubit, qubit 0 first) and Fock occupation `fock`.
    pub fn index(&self, bits: &[u8], fock: usize) -> Result<usize> {
        if bits.len() != self.n_qubits {
            return Err(SqaError::Validation(format!(
                "expected {} qubit bits, got {}",
                self.n_qubits,
                bits.len()
            )));
        }
        if fock >= self.fock_dim() {
            return Err(SqaError::Index {
                what: "Fock",
                index: fock,
                limit: self.fock_dim(),
            });
        }
        let mut config = 0usize;
        for (site, &b) in bits.iter().enumerate() {
            if b > 1 {
                return Err(SqaError::Validation(format!(
                    "qubit {site} bit must be 0 or 1, got {b}"
                )));
            }
            config = (config << 1) | b as usize;
        }
        Ok(config * self.fock_dim() + fock)
    }

    /// Split a basis index into (qubit configuration, Fock occupation).
    pub fn split(&self, index: usize) -> (usize, usize) {
        (index / self.fock_dim(), index % self.fock_dim())
    }

    /// Bit of qubit `site` in a qubit configuration.
    pub fn bit(&self, config: usize, site: usize) -> usize {
        (config >> (self.n_qubits - 1 - site)) & 1
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.n_qubits {
            return Err(SqaError::Index {
                what: "qubit",
                index: site,
                limit: self.n_qubits,
            });
        }
        Ok(())
    }
}

impl fmt::Display for HilbertSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.has_mode() {
            write!(
                f,
                "{} qubits ⊗ {} Fock states",
                self.n_qubits, self.photon_dim
            )
        } else {
            write!(f, "{} qubits", self.n_qubits)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ladder {
    Create,
    Annihilate,
}

/// A dense matrix on a [`HilbertSpace`].
///
/// Operators are not forced to be Hermitian (ladder operators are not), but
/// every observable and Hamiltonian term built in this crate goes through
/// [`Operator::hermitian`], which enforces [`HERMITIAN_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    space: HilbertSpace,
    matrix: CMatrix,
}

impl Operator {
    pub fn from_matrix(space: HilbertSpace, matrix: CMatrix) -> Result<Self> {
        let d = space.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(SqaError::Validation(format!(
                "matrix is {}x{} but the space ({space}) has dimension {d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { space, matrix })
    }

    /// Like [`Operator::from_matrix`] but rejects matrices whose relative
    /// Hermiticity defect exceeds [`HERMITIAN_TOL`].
    pub fn hermitian(space: HilbertSpace, matrix: CMatrix) -> Result<Self> {
        let op = Self::from_matrix(space, matrix)?;
        let defect = op.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(SqaError::Validation(format!(
                "operator is not Hermitian (relative defect {defect:.3e})"
            )));
        }
        Ok(op)
    }

    pub fn zeros(space: HilbertSpace) -> Self {
        let d = space.total_dim();
        Self {
            space,
            matrix: CMatrix::zeros(d, d),
        }
    }

    pub fn identity(space: HilbertSpace) -> Self {
        let d = space.total_dim();
        Self {
            space,
            matrix: CMatrix::identity(d, d),
        }
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn adjoint(&self) -> Operator {
        Operator {
            space: self.space,
            matrix: self.matrix.adjoint(),
        }
    }

    /// Largest matrix element magnitude.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `max |A − A†| / max |A|`, or 0 for the zero matrix.
    pub fn hermiticity_defect(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let d = self.dim();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in r..d {
                worst = worst.max((self.matrix[(r, c)] - self.matrix[(c, r)].conj()).norm());
            }
        }
        worst / scale
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Operator) -> CMatrix {
        &self.matrix * &other.matrix - &other.matrix * &self.matrix
    }

    pub fn apply(&self, state: &StateVector) -> CVector {
        &self.matrix * state.amplitudes()
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, state: &StateVector) -> C64 {
        state.amplitudes().dotc(&self.apply(state))
    }

    fn same_space(&self, other: &Operator) {
        assert_eq!(
            self.space, other.space,
            "operators live on different spaces ({} vs {})",
            self.space, other.space
        );
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        self.same_space(rhs);
        Operator {
            space: self.space,
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self.same_space(rhs);
        Operator {
            space: self.space,
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.same_space(rhs);
        Operator {
            space: self.space,
            matrix: &self.matrix * &rhs.matrix,
        }
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        Operator {
            space: self.space,
            matrix: &self.matrix * C64::new(rhs, 0.0),
        }
    }
}

/// A state vector on a [`HilbertSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: HilbertSpace,
    amplitudes: CVector,
}

impl StateVector {
    pub fn new(space: HilbertSpace, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != space.total_dim() {
            return Err(SqaError::Validation(format!(
                "state has {} amplitudes but the space ({space}) has dimension {}",
                amplitudes.len(),
                space.total_dim()
            )));
        }
        Ok(Self { space, amplitudes })
    }

    /// Build and normalize. Fails on the zero vector.
    pub fn normalized(space: HilbertSpace, amplitudes: CVector) -> Result<Self> {
        let mut state = Self::new(space, amplitudes)?;
        let norm = state.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(SqaError::Validation("cannot normalize a zero state".into()));
        }
        state.amplitudes.unscale_mut(norm);
        Ok(state)
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

/// Single-qubit state `(⟨0|ψ⟩, ⟨1|ψ⟩)`.
pub type QubitState = [C64; 2];

fn pauli_action(axis: Axis, bit: usize) -> (usize, C64) {
    let one = C64::new(1.0, 0.0);
    match (axis, bit) {
        (Axis::X, b) => (b ^ 1, one),
        // σ^y|0⟩ = i|1⟩, σ^y|1⟩ = −i|0⟩
        (Axis::Y, 0) => (1, C64::new(0.0, 1.0)),
        (Axis::Y, _) => (0, C64::new(0.0, -1.0)),
        (Axis::Z, 0) => (0, one),
        (Axis::Z, _) => (1, -one),
    }
}

/// Product of single-site Pauli operators on distinct sites, identity on
/// the remaining qubits and on the Fock factor.
pub fn pauli_string(space: HilbertSpace, factors: &[(Axis, usize)]) -> Result<Operator> {
    for (k, &(_, site)) in factors.iter().enumerate() {
        space.check_site(site)?;
        if factors[..k].iter().any(|&(_, s)| s == site) {
            return Err(SqaError::Validation(format!(
                "Pauli string repeats site {site}"
            )));
        }
    }
    let n = space.n_qubits();
    let fock_dim = space.fock_dim();
    let d = space.total_dim();
    let mut matrix = CMatrix::zeros(d, d);
    for config in 0..space.qubit_dim() {
        let mut target = config;
        let mut phase = C64::new(1.0, 0.0);
        for &(axis, site) in factors {
            let shift = n - 1 - site;
            let bit = (target >> shift) & 1;
            let (new_bit, p) = pauli_action(axis, bit);
            target = (target & !(1 << shift)) | (new_bit << shift);
            phase *= p;
        }
        for f in 0..fock_dim {
            matrix[(target * fock_dim + f, config * fock_dim + f)] = phase;
        }
    }
    Operator::hermitian(space, matrix)
}

/// Identity-padded single-site Pauli operator σ^axis_site.
pub fn pauli_site(space: HilbertSpace, axis: Axis, site: usize) -> Result<Operator> {
    pauli_string(space, &[(axis, site)])
}

fn require_mode(space: HilbertSpace) -> Result<()> {
    if space.photon_dim() < 2 {
        return Err(SqaError::config(
            "photon_dim",
            format!(
                "a bosonic mode needs at least 2 Fock states, got {}",
                space.photon_dim()
            ),
        ));
    }
    Ok(())
}

/// Truncated ladder operator, identity on the qubits.
///
/// The annihilator has `√m` at Fock position `(m−1, m)`. Because of the
/// truncation, `[a, a†]` equals the identity on every retained Fock state
/// except the highest one, where it equals `1 − photon_dim`.
pub fn boson_ladder(space: HilbertSpace, kind: Ladder) -> Result<Operator> {
    require_mode(space)?;
    let p = space.photon_dim();
    let d = space.total_dim();
    let mut matrix = CMatrix::zeros(d, d);
    for config in 0..space.qubit_dim() {
        for m in 1..p {
            let amp = C64::new((m as f64).sqrt(), 0.0);
            let (lo, hi) = (config * p + m - 1, config * p + m);
            match kind {
                Ladder::Annihilate => matrix[(lo, hi)] = amp,
                Ladder::Create => matrix[(hi, lo)] = amp,
            }
        }
    }
    Operator::from_matrix(space, matrix)
}

/// Photon number operator `a†a`.
pub fn number_operator(space: HilbertSpace) -> Result<Operator> {
    require_mode(space)?;
    let p = space.photon_dim();
    let d = space.total_dim();
    let mut matrix = CMatrix::zeros(d, d);
    for i in 0..d {
        matrix[(i, i)] = C64::new((i % p) as f64, 0.0);
    }
    Operator::hermitian(space, matrix)
}

/// Field quadrature `a† + a`.
pub fn quadrature(space: HilbertSpace) -> Result<Operator> {
    let a = boson_ladder(space, Ladder::Annihilate)?;
    Operator::hermitian(space, (&a + &a.adjoint()).into_matrix())
}

/// Total polarization `M = Σ_i σ^z_i`.
pub fn total_polarization(space: HilbertSpace) -> Result<Operator> {
    let d = space.total_dim();
    let mut matrix = CMatrix::zeros(d, d);
    for i in 0..d {
        let (config, _) = space.split(i);
        let ones = config.count_ones() as f64;
        matrix[(i, i)] = C64::new(space.n_qubits() as f64 - 2.0 * ones, 0.0);
    }
    Operator::hermitian(space, matrix)
}

/// Normalized tensor product of single-qubit states and an optional Fock
/// state. A Fock occupation is required exactly when the space has a mode.
pub fn product_state(
    space: HilbertSpace,
    per_qubit: &[QubitState],
    fock: Option<usize>,
) -> Result<StateVector> {
    if per_qubit.len() != space.n_qubits() {
        return Err(SqaError::Validation(format!(
            "expected {} single-qubit states, got {}",
            space.n_qubits(),
            per_qubit.len()
        )));
    }
    for (site, q) in per_qubit.iter().enumerate() {
        let norm = (q[0].norm_sqr() + q[1].norm_sqr()).sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(SqaError::Validation(format!(
                "single-qubit state {site} has norm {norm}, expected 1"
            )));
        }
    }
    let fock = match (fock, space.has_mode()) {
        (Some(f), true) if f < space.photon_dim() => f,
        (Some(f), _) => {
            return Err(SqaError::Index {
                what: "Fock",
                index: f,
                limit: space.photon_dim(),
            })
        }
        (None, true) => {
            return Err(SqaError::Validation(
                "space has a bosonic mode; a Fock occupation is required".into(),
            ))
        }
        (None, false) => 0,
    };
    let fock_dim = space.fock_dim();
    let mut amps = CVector::zeros(space.total_dim());
    for config in 0..space.qubit_dim() {
        let amp = per_qubit
            .iter()
            .enumerate()
            .fold(C64::new(1.0, 0.0), |acc, (site, q)| {
                acc * q[space.bit(config, site)]
            });
        amps[config * fock_dim + fock] = amp;
    }
    StateVector::normalized(space, amps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().fold(0.0, |a, z| a.max(z.norm()))
    }

    #[test]
    fn space_dimensions() {
        let s = HilbertSpace::new(3, 0).unwrap();
        assert_eq!(s.total_dim(), 8);
        let s = HilbertSpace::new(3, 4).unwrap();
        assert_eq!(s.total_dim(), 32);
        assert!(HilbertSpace::new(0, 0).is_err());
        assert!(HilbertSpace::new(MAX_QUBITS + 1, 0).is_err());
    }

    #[test]
    fn index_formula() {
        let s = HilbertSpace::new(3, 5).unwrap();
        assert_eq!(s.index(&[1, 0, 1], 3).unwrap(), 0b101 * 5 + 3);
        assert_eq!(s.split(0b101 * 5 + 3), (0b101, 3));
        assert_eq!(s.bit(0b100, 0), 1);
        assert_eq!(s.bit(0b100, 2), 0);
        assert!(s.index(&[1, 0, 1], 5).is_err());
    }

    #[test]
    fn single_qubit_paulis() {
        let s = HilbertSpace::qubits(1).unwrap();
        let z = pauli_site(s, Axis::Z, 0).unwrap();
        assert_eq!(z.matrix()[(0, 0)], c(1.0));
        assert_eq!(z.matrix()[(1, 1)], c(-1.0));
        let x = pauli_site(s, Axis::X, 0).unwrap();
        assert_eq!(x.matrix()[(0, 1)], c(1.0));
        assert_eq!(x.matrix()[(1, 0)], c(1.0));
        assert_eq!(x.matrix()[(0, 0)], c(0.0));
    }

    #[test]
    fn two_qubit_sigma_z_on_site_one() {
        let s = HilbertSpace::qubits(2).unwrap();
        let z1 = pauli_site(s, Axis::Z, 1).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| z1.matrix()[(i, i)].re).collect();
        assert_eq!(diag, vec![1.0, -1.0, 1.0, -1.0]);
        assert_eq!(
            max_abs(&(z1.matrix() - CMatrix::from_diagonal(&z1.matrix().diagonal()))),
            0.0
        );
    }

    #[test]
    fn site_out_of_range() {
        let s = HilbertSpace::qubits(2).unwrap();
        assert!(matches!(
            pauli_site(s, Axis::X, 2),
            Err(SqaError::Index { what: "qubit", .. })
        ));
        assert!(pauli_string(s, &[(Axis::X, 0), (Axis::Z, 0)]).is_err());
    }

    #[test]
    fn paulis_square_to_identity_and_satisfy_algebra() {
        let s = HilbertSpace::new(3, 2).unwrap();
        let id = CMatrix::identity(s.total_dim(), s.total_dim());
        for site in 0..3 {
            let x = pauli_site(s, Axis::X, site).unwrap();
            let y = pauli_site(s, Axis::Y, site).unwrap();
            let z = pauli_site(s, Axis::Z, site).unwrap();
            for p in [&x, &y, &z] {
                assert!(max_abs(&((p * p).into_matrix() - &id)) < 1e-14);
            }
            let i = C64::new(0.0, 1.0);
            assert!(max_abs(&((&x * &y).into_matrix() - z.matrix() * i)) < 1e-14);
            assert!(max_abs(&((&y * &z).into_matrix() - x.matrix() * i)) < 1e-14);
            assert!(max_abs(&((&z * &x).into_matrix() - y.matrix() * i)) < 1e-14);
        }
    }

    #[test]
    fn different_sites_commute() {
        let s = HilbertSpace::new(3, 2).unwrap();
        let axes = [Axis::X, Axis::Y, Axis::Z];
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                for a in axes {
                    for b in axes {
                        let p = pauli_site(s, a, i).unwrap();
                        let q = pauli_site(s, b, j).unwrap();
                        assert!(max_abs(&p.commutator(&q)) <= 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn ladder_matrix_layout() {
        let s = HilbertSpace::new(1, 3).unwrap();
        let a = boson_ladder(s, Ladder::Annihilate).unwrap();
        let block = [[0.0, 1.0, 0.0], [0.0, 0.0, 2f64.sqrt()], [0.0, 0.0, 0.0]];
        for q in 0..2 {
            for (r, row) in block.iter().enumerate() {
                for (col, &v) in row.iter().enumerate() {
                    assert_eq!(a.matrix()[(q * 3 + r, q * 3 + col)], c(v));
                }
            }
        }
        // no qubit-offdiagonal blocks
        assert_eq!(a.matrix()[(0, 4)], c(0.0));
        let ad = boson_ladder(s, Ladder::Create).unwrap();
        assert_eq!(ad, a.adjoint());
    }

    #[test]
    fn number_operator_spectrum() {
        let s = HilbertSpace::new(1, 3).unwrap();
        let a = boson_ladder(s, Ladder::Annihilate).unwrap();
        let n = &a.adjoint() * &a;
        let exact = number_operator(s).unwrap();
        let diag: Vec<f64> = (0..6).map(|i| exact.matrix()[(i, i)].re).collect();
        assert_eq!(diag, vec![0.0, 1.0, 2.0, 0.0, 1.0, 2.0]);
        assert!(max_abs(&(n.matrix() - exact.matrix())) < 1e-14);
    }

    #[test]
    fn truncated_commutator_defect_on_top_state() {
        let s = HilbertSpace::new(2, 4).unwrap();
        let a = boson_ladder(s, Ladder::Annihilate).unwrap();
        let comm = a.commutator(&a.adjoint());
        for i in 0..s.total_dim() {
            let (_, f) = s.split(i);
            let expected = if f == 3 { -3.0 } else { 1.0 };
            assert!((comm[(i, i)] - c(expected)).norm() < 1e-14);
        }
        let off = comm.clone() - CMatrix::from_diagonal(&comm.diagonal());
        assert!(max_abs(&off) < 1e-14);
    }

    #[test]
    fn ladder_requires_two_fock_states() {
        for p in [0, 1] {
            let s = HilbertSpace::new(1, p).unwrap();
            assert!(matches!(
                boson_ladder(s, Ladder::Create),
                Err(SqaError::Config { .. })
            ));
        }
    }

    #[test]
    fn total_polarization_values() {
        let s = HilbertSpace::qubits(1).unwrap();
        let m = total_polarization(s).unwrap();
        assert_eq!(m.matrix()[(0, 0)], c(1.0));
        assert_eq!(m.matrix()[(1, 1)], c(-1.0));
        let s = HilbertSpace::qubits(2).unwrap();
        let m = total_polarization(s).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| m.matrix()[(i, i)].re).collect();
        assert_eq!(diag, vec![2.0, 0.0, 0.0, -2.0]);
        let s = HilbertSpace::qubits(3).unwrap();
        let m = total_polarization(s).unwrap();
        assert_eq!(m.matrix().trace(), c(0.0));
        let max = (0..8)
            .map(|i| m.matrix()[(i, i)].re)
            .fold(f64::MIN, f64::max);
        assert_eq!(max, 3.0);
    }

    #[test]
    fn polarization_equals_sum_of_sites() {
        let s = HilbertSpace::new(3, 2).unwrap();
        let mut sum = Operator::zeros(s);
        for i in 0..3 {
            sum = &sum + &pauli_site(s, Axis::Z, i).unwrap();
        }
        assert_eq!(sum, total_polarization(s).unwrap());
    }

    #[test]
    fn product_states() {
        let s = HilbertSpace::qubits(1).unwrap();
        let psi = product_state(s, &[[c(1.0), c(0.0)]], None).unwrap();
        assert_eq!(psi.amplitudes().as_slice(), &[c(1.0), c(0.0)]);

        let s = HilbertSpace::qubits(2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let minus = [c(h), c(-h)];
        let psi = product_state(s, &[minus, minus], None).unwrap();
        let expected = [0.5, -0.5, -0.5, 0.5];
        for (a, e) in psi.amplitudes().iter().zip(expected) {
            assert!((a - c(e)).norm() < 1e-15);
        }

        let s = HilbertSpace::new(1, 2).unwrap();
        let psi = product_state(s, &[[c(1.0), c(0.0)]], Some(1)).unwrap();
        assert_eq!(
            psi.amplitudes().as_slice(),
            &[c(0.0), c(1.0), c(0.0), c(0.0)]
        );
        assert_eq!(s.index(&[0], 1).unwrap(), 1);
    }

    #[test]
    fn product_state_errors() {
        let s = HilbertSpace::new(1, 2).unwrap();
        let zero = [c(1.0), c(0.0)];
        assert!(matches!(
            product_state(s, &[zero], Some(2)),
            Err(SqaError::Index { what: "Fock", .. })
        ));
        assert!(product_state(s, &[zero], None).is_err());
        assert!(product_state(s, &[[c(1.0), c(1.0)]], Some(0)).is_err());
        let q = HilbertSpace::qubits(1).unwrap();
        assert!(product_state(q, &[zero], Some(0)).is_err());
    }

    #[test]
    fn hermitian_constructor_rejects_non_hermitian() {
        let s = HilbertSpace::new(1, 2).unwrap();
        let a = boson_ladder(s, Ladder::Annihilate).unwrap();
        assert!(Operator::hermitian(s, a.matrix().clone()).is_err());
        assert!(quadrature(s).unwrap().hermiticity_defect() == 0.0);
    }
}
