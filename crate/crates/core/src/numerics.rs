//! Shared numerical primitives: complex 4-vectors, small unitary matrices,
//! Shannon entropy, the tolerance policy, phase canonicalization and seeded
//! randomness.
//!
//! Everything here is a pure function of its inputs. The only source of
//! randomness is [`RngSeed`], which hands out ChaCha streams so that equal
//! seeds reproduce equal outputs bit for bit.

use std::fmt;
use std::ops::{Index, Mul};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type C64 = Complex64;

/// Probabilities below this are treated as exact zeros before taking logs.
pub const PROBABILITY_FLOOR: f64 = 1e-15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("not a probability vector: {0}")]
    NotAProbabilityVector(String),
    #[error("zero vector has no phase")]
    ZeroVector,
    #[error("matrix is not unitary (max deviation {deviation:.3e} from identity)")]
    NotUnitary { deviation: f64 },
    #[error("vector is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid tolerance policy: {0}")]
    InvalidTolerance(String),
    #[error("eigendecomposition did not converge")]
    Decomposition,
}

/// Numerical thresholds used across the crate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub tol_norm: f64,
    pub tol_unitary: f64,
    /// Entropy agreement for closed-form 4-dimensional algebra.
    pub tol_entropy_closed: f64,
    /// Entropy agreement for statevector partial traces.
    pub tol_entropy_lattice: f64,
    /// Distance to the nearest integer below which an entropy counts as quantized.
    pub tol_integer: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            tol_norm: 1e-12,
            tol_unitary: 1e-12,
            tol_entropy_closed: 1e-9,
            tol_entropy_lattice: 1e-7,
            tol_integer: 1e-6,
        }
    }
}

impl TolerancePolicy {
    pub fn validate(&self) -> Result<(), NumericsError> {
        let all = [
            ("tol_norm", self.tol_norm),
            ("tol_unitary", self.tol_unitary),
            ("tol_entropy_closed", self.tol_entropy_closed),
            ("tol_entropy_lattice", self.tol_entropy_lattice),
            ("tol_integer", self.tol_integer),
        ];
        for (name, value) in all {
            if !(value.is_finite() && value > 0.0) {
                return Err(NumericsError::InvalidTolerance(format!(
                    "{name} must be strictly positive, got {value}"
                )));
            }
        }
        if self.tol_integer >= 0.5 {
            return Err(NumericsError::InvalidTolerance(format!(
                "tol_integer must be below 0.5, got {}",
                self.tol_integer
            )));
        }
        Ok(())
    }
}

/// Shannon entropy in bits, `-Σ p log₂ p`.
///
/// Entries down to `-tol_norm` are accepted and clamped to zero; the sum must
/// be within `tol_norm` of one.
pub fn shannon_entropy(p: &[f64], tol_norm: f64) -> Result<f64, NumericsError> {
    if let Some(bad) = p.iter().find(|&&x| !x.is_finite() || x < -tol_norm) {
        return Err(NumericsError::NotAProbabilityVector(format!(
            "entry {bad} is negative or not finite"
        )));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > tol_norm {
        return Err(NumericsError::NotAProbabilityVector(format!(
            "entries sum to {sum}"
        )));
    }
    Ok(entropy_bits(p))
}

/// Entropy kernel without validation. Negative dust and values below
/// [`PROBABILITY_FLOOR`] contribute nothing.
pub(crate) fn entropy_bits(p: &[f64]) -> f64 {
    let h: f64 = p
        .iter()
        .filter(|&&x| x > PROBABILITY_FLOOR)
        .map(|&x| -x * x.log2())
        .sum();
    // -0.0 from a single unit entry
    h.max(0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegerCheck {
    pub is_integer: bool,
    pub nearest: i64,
    pub distance: f64,
}

/// Is `x` within `tol` of an integer? Also reports the nearest integer.
pub fn is_integer(x: f64, tol: f64) -> IntegerCheck {
    let nearest = x.round();
    let distance = (x - nearest).abs();
    IntegerCheck {
        is_integer: distance <= tol,
        nearest: nearest as i64,
        distance,
    }
}

/// Rotates `v` so that its first entry with modulus above `tol` becomes real
/// positive. Works on any flat slice of amplitudes (state vectors or
/// flattened matrices).
pub fn canonical_phase_slice(v: &[C64], tol: f64) -> Result<Vec<C64>, NumericsError> {
    let lead = v
        .iter()
        .find(|z| z.norm() > tol)
        .ok_or(NumericsError::ZeroVector)?;
    let rot = C64::from_polar(1.0, -lead.arg());
    Ok(v.iter().map(|z| z * rot).collect())
}

/// Four complex amplitudes in some fixed basis of a 4-dimensional ground space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexVec4(pub [C64; 4]);

impl ComplexVec4 {
    pub fn new(amplitudes: [C64; 4]) -> Self {
        Self(amplitudes)
    }

    pub fn from_real(values: [f64; 4]) -> Self {
        Self(values.map(|x| C64::new(x, 0.0)))
    }

    /// Basis vector with a single unit entry.
    pub fn delta(index: usize) -> Self {
        let mut a = [C64::new(0.0, 0.0); 4];
        a[index] = C64::new(1.0, 0.0);
        Self(a)
    }

    pub fn amplitudes(&self) -> &[C64; 4] {
        &self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_normalized(&self, tol_norm: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol_norm
    }

    pub fn normalized(&self) -> Result<Self, NumericsError> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(NumericsError::ZeroVector);
        }
        Ok(Self(self.0.map(|z| z / n)))
    }

    pub fn probabilities(&self) -> [f64; 4] {
        self.0.map(|z| z.norm_sqr())
    }

    pub fn scale(&self, c: C64) -> Self {
        Self(self.0.map(|z| z * c))
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Global phase removed and normalized; see [`canonical_phase_slice`].
    pub fn canonical_phase(&self, tol_norm: f64) -> Result<Self, NumericsError> {
        let rotated = canonical_phase_slice(&self.0, tol_norm)?;
        let v = Self([rotated[0], rotated[1], rotated[2], rotated[3]]);
        v.normalized()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_dvector(&self) -> DVector<C64> {
        DVector::from_column_slice(&self.0)
    }

    pub fn from_slice(values: &[C64]) -> Result<Self, NumericsError> {
        if values.len() != 4 {
            return Err(NumericsError::DimensionMismatch {
                expected: 4,
                actual: values.len(),
            });
        }
        Ok(Self([values[0], values[1], values[2], values[3]]))
    }
}

impl Index<usize> for ComplexVec4 {
    type Output = C64;

    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl fmt::Display for ComplexVec4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, z) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:.6}{:+.6}i", z.re, z.im)?;
        }
        write!(f, ")")
    }
}

/// A small dense unitary matrix (dimension 2 to 4 in practice).
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMat(DMatrix<C64>);

impl UnitaryMat {
    /// Validates `U·U† = 1` entrywise within `tol_unitary`.
    pub fn new(m: DMatrix<C64>, tol_unitary: f64) -> Result<Self, NumericsError> {
        if m.nrows() != m.ncols() {
            return Err(NumericsError::DimensionMismatch {
                expected: m.nrows(),
                actual: m.ncols(),
            });
        }
        let deviation = unitarity_deviation(&m);
        if deviation > tol_unitary {
            return Err(NumericsError::NotUnitary { deviation });
        }
        Ok(Self(m))
    }

    /// Row-major constructor.
    pub fn from_rows(dim: usize, entries: &[C64], tol_unitary: f64) -> Result<Self, NumericsError> {
        if entries.len() != dim * dim {
            return Err(NumericsError::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries), tol_unitary)
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn diagonal(entries: &[C64], tol_unitary: f64) -> Result<Self, NumericsError> {
        let d = DVector::from_column_slice(entries);
        Self::new(DMatrix::from_diagonal(&d), tol_unitary)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.dim()), |acc, _| &acc * self)
    }

    pub fn apply(&self, v: &ComplexVec4) -> ComplexVec4 {
        assert_eq!(self.dim(), 4, "apply() needs a 4x4 matrix");
        let out = &self.0 * v.to_dvector();
        ComplexVec4([out[0], out[1], out[2], out[3]])
    }

    /// `self · inner · self†`.
    pub fn conjugate(&self, inner: &Self) -> Self {
        Self(&self.0 * &inner.0 * self.0.adjoint())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn row_major(&self) -> Vec<C64> {
        let d = self.dim();
        (0..d)
            .flat_map(|r| (0..d).map(move |c| (r, c)))
            .map(|(r, c)| self.0[(r, c)])
            .collect()
    }

    /// Row-major entries with the global phase fixed; equal for matrices that
    /// differ only by a phase.
    pub fn projective_key(&self, tol: f64) -> Vec<C64> {
        canonical_phase_slice(&self.row_major(), tol).expect("unitary matrix is nonzero")
    }

    /// Equality up to a global phase.
    pub fn projectively_eq(&self, other: &Self, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let a = self.projective_key(tol);
        let b = other.projective_key(tol);
        a.iter().zip(b.iter()).all(|(x, y)| (x - y).norm() <= tol)
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|r| (0..d).all(|c| r == c || self.0[(r, c)].norm() <= tol))
    }

    /// Exactly one unit-modulus entry per row and column, zeros elsewhere.
    pub fn is_monomial(&self, tol: f64) -> bool {
        let d = self.dim();
        let row_ok = (0..d).all(|r| {
            let big = (0..d).filter(|&c| (self.0[(r, c)].norm() - 1.0).abs() <= tol).count();
            let small = (0..d).filter(|&c| self.0[(r, c)].norm() <= tol).count();
            big == 1 && small == d - 1
        });
        let col_ok = (0..d).all(|c| {
            let big = (0..d).filter(|&r| (self.0[(r, c)].norm() - 1.0).abs() <= tol).count();
            big == 1
        });
        row_ok && col_ok
    }
}

fn unitarity_deviation(m: &DMatrix<C64>) -> f64 {
    let prod = m * m.adjoint();
    let id = DMatrix::<C64>::identity(m.nrows(), m.ncols());
    prod.iter()
        .zip(id.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

impl Mul for &UnitaryMat {
    type Output = UnitaryMat;

    fn mul(self, rhs: &UnitaryMat) -> UnitaryMat {
        UnitaryMat(&self.0 * &rhs.0)
    }
}

impl Serialize for UnitaryMat {
    /// Row-major `[[re, im], ...]` rows.
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let d = self.dim();
        let rows: Vec<Vec<[f64; 2]>> = (0..d)
            .map(|r| (0..d).map(|c| [self.0[(r, c)].re, self.0[(r, c)].im]).collect())
            .collect();
        rows.serialize(serializer)
    }
}

/// Master seed for every random draw in the crate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn rng(&self) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(self.0)
    }

    /// Independent stream `index` derived from this seed by fixed splitting.
    pub fn stream(&self, index: u64) -> ChaCha20Rng {
        let mut rng = self.rng();
        rng.set_stream(index);
        rng
    }
}

/// Eigenvalues of a Hermitian matrix, ascending. Only the lower triangle is read.
pub fn hermitian_eigenvalues(h: &DMatrix<C64>) -> Vec<f64> {
    let n = h.nrows();
    let m = faer::Mat::<C64>::from_fn(n, n, |i, j| h[(i, j)]);
    // the decomposition only fails on non-finite input
    m.self_adjoint_eigenvalues(faer::Side::Lower)
        .unwrap_or_else(|_| vec![f64::NAN; n])
}

/// Eigenvalues (ascending) and eigenvectors (as columns) of a Hermitian matrix.
pub fn hermitian_eigen(h: &DMatrix<C64>) -> Result<(Vec<f64>, DMatrix<C64>), NumericsError> {
    let n = h.nrows();
    let m = faer::Mat::<C64>::from_fn(n, n, |i, j| h[(i, j)]);
    let evd = m
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|_| NumericsError::Decomposition)?;
    let values = (0..n).map(|k| evd.S()[k].re).collect();
    let u = evd.U();
    Ok((values, DMatrix::from_fn(n, n, |i, j| u[(i, j)])))
}

/// Haar-random normalized 4-vector (normalized complex Gaussian).
pub fn haar_state<R: Rng + ?Sized>(rng: &mut R) -> ComplexVec4 {
    loop {
        let mut a = [C64::new(0.0, 0.0); 4];
        for z in a.iter_mut() {
            *z = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
        if let Ok(v) = ComplexVec4(a).normalized() {
            return v;
        }
    }
}

/// Haar-random `d×d` unitary via QR of a complex Ginibre matrix with the
/// diagonal phases of `R` folded back in.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<C64> {
    let g = DMatrix::<C64>::from_fn(d, d, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)) / 2f64.sqrt()
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..d {
        let rc = r[(c, c)];
        let phase = if rc.norm() > 0.0 { rc / rc.norm() } else { C64::new(1.0, 0.0) };
        for row in 0..d {
            q[(row, c)] *= phase;
        }
    }
    q
}
