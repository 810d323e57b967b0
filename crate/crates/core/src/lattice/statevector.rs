use nalgebra::DMatrix;
use serde::Serialize;

use super::geometry::{EdgeRegion, TorusLattice};
use super::pauli::PauliString;
use super::LatticeError;
use crate::numerics::{hermitian_eigenvalues, ComplexVec4, C64};

/// Largest lattice handled as a dense statevector.
pub const MAX_STATEVECTOR_QUBITS: usize = 24;

/// Reduced-density-matrix eigenvalues below this are dropped.
pub const EIGENVALUE_FLOOR: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeState {
    lattice: TorusLattice,
    amps: Vec<C64>,
}

pub(crate) fn check_dense(lat: &TorusLattice) -> Result<(), LatticeError> {
    if lat.n_qubits() > MAX_STATEVECTOR_QUBITS {
        return Err(LatticeError::LatticeTooLarge {
            qubits: lat.n_qubits(),
            max: MAX_STATEVECTOR_QUBITS,
        });
    }
    Ok(())
}

impl LatticeState {
    pub fn from_amplitudes(
        lattice: TorusLattice,
        amps: Vec<C64>,
        tol_norm: f64,
    ) -> Result<Self, LatticeError> {
        check_dense(&lattice)?;
        let dim = 1usize << lattice.n_qubits();
        if amps.len() != dim {
            return Err(LatticeError::DimensionMismatch {
                expected: dim,
                actual: amps.len(),
            });
        }
        let s = Self { lattice, amps };
        let n = s.norm_sqr();
        if (n - 1.0).abs() > tol_norm {
            return Err(LatticeError::NotNormalized { norm_sqr: n });
        }
        Ok(s)
    }

    pub(crate) fn from_raw(lattice: TorusLattice, amps: Vec<C64>) -> Self {
        Self { lattice, amps }
    }

    /// Computational basis state with bit pattern `bits`.
    pub fn basis_state(lattice: TorusLattice, bits: u64) -> Result<Self, LatticeError> {
        check_dense(&lattice)?;
        let mut amps = vec![C64::new(0.0, 0.0); 1usize << lattice.n_qubits()];
        amps[bits as usize] = C64::new(1.0, 0.0);
        Ok(Self { lattice, amps })
    }

    pub fn lattice(&self) -> &TorusLattice {
        &self.lattice
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) -> Result<(), LatticeError> {
        let n = self.norm_sqr().sqrt();
        if n < 1e-12 {
            return Err(LatticeError::DegenerateProjection);
        }
        self.amps.iter_mut().for_each(|a| *a /= n);
        Ok(())
    }

    pub fn inner(&self, other: &LatticeState) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn apply(&self, p: &PauliString) -> LatticeState {
        LatticeState {
            lattice: self.lattice,
            amps: p.apply(&self.amps),
        }
    }

    pub fn expectation(&self, p: &PauliString) -> C64 {
        p.expectation(&self.amps)
    }

    /// Largest `|⟨A_v⟩ - 1|` or `|⟨B_p⟩ - 1|`.
    pub fn stabilizer_violation(&self) -> f64 {
        let stars = self.lattice.star_masks().into_iter().map(PauliString::z_on);
        let plaqs = self.lattice.plaquette_masks().into_iter().map(PauliString::x_on);
        stars
            .chain(plaqs)
            .map(|p| (self.expectation(&p) - 1.0).norm())
            .fold(0.0, f64::max)
    }
}

pub fn x1(lat: &TorusLattice) -> PauliString {
    PauliString::x_on(lat.x1_support())
}

pub fn x2(lat: &TorusLattice) -> PauliString {
    PauliString::x_on(lat.x2_support())
}

pub fn z1(lat: &TorusLattice) -> PauliString {
    PauliString::z_on(lat.z1_support())
}

pub fn z2(lat: &TorusLattice) -> PauliString {
    PauliString::z_on(lat.z2_support())
}

/// `ψ₀ ∝ ∏_p (1 + B_p)/2 |0…0⟩`.
pub fn psi0(lat: &TorusLattice) -> Result<LatticeState, LatticeError> {
    let mut s = LatticeState::basis_state(*lat, 0)?;
    for m in lat.plaquette_masks() {
        PauliString::x_on(m).project_plus(&mut s.amps);
    }
    s.normalize()?;
    Ok(s)
}

/// `|j₁ j₂⟩_L = X̄₁^{j₁} X̄₂^{j₂} ψ₀`, ordered by `j₁ + 2 j₂`.
pub fn build_logical_basis(lat: &TorusLattice) -> Result<[LatticeState; 4], LatticeError> {
    let base = psi0(lat)?;
    let (a, b) = (x1(lat), x2(lat));
    Ok([
        base.clone(),
        base.apply(&a),
        base.apply(&b),
        base.apply(&a).apply(&b),
    ])
}

/// `Σ α_i |i⟩_L` over a precomputed logical basis.
pub fn encode_with_basis(
    basis: &[LatticeState; 4],
    alpha: &ComplexVec4,
    tol_norm: f64,
) -> Result<LatticeState, LatticeError> {
    if !alpha.is_normalized(tol_norm) {
        return Err(LatticeError::NotNormalized {
            norm_sqr: alpha.norm_sqr(),
        });
    }
    let mut amps = vec![C64::new(0.0, 0.0); basis[0].amps.len()];
    for (k, b) in basis.iter().enumerate() {
        let c = alpha[k];
        if c.norm_sqr() == 0.0 {
            continue;
        }
        for (o, &x) in amps.iter_mut().zip(&b.amps) {
            *o += c * x;
        }
    }
    let mut s = LatticeState {
        lattice: basis[0].lattice,
        amps,
    };
    s.normalize()?;
    Ok(s)
}

pub fn encode(
    lat: &TorusLattice,
    alpha: &ComplexVec4,
    tol_norm: f64,
) -> Result<LatticeState, LatticeError> {
    encode_with_basis(&build_logical_basis(lat)?, alpha, tol_norm)
}

/// Matrix of `op` between logical basis states, `⟨i|op|j⟩`.
pub fn logical_action(basis: &[LatticeState; 4], op: &PauliString) -> DMatrix<C64> {
    let images: Vec<LatticeState> = basis.iter().map(|b| b.apply(op)).collect();
    DMatrix::from_fn(4, 4, |i, j| basis[i].inner(&images[j]))
}

/// Reduced density matrix on `qubits`; `qubits[k]` becomes bit `k` of the
/// row index.
pub fn reduced_density_matrix(state: &LatticeState, qubits: &[usize]) -> DMatrix<C64> {
    let m = split_matrix(state, qubits);
    &m * m.adjoint()
}

/// `Tr_rest |ket⟩⟨bra|` on `qubits`, ordered as in [`reduced_density_matrix`].
pub fn reduced_transition(ket: &LatticeState, bra: &LatticeState, qubits: &[usize]) -> DMatrix<C64> {
    split_matrix(ket, qubits) * split_matrix(bra, qubits).adjoint()
}

/// Amplitudes reshaped to rows indexed by `qubits` and columns by the rest.
fn split_matrix(state: &LatticeState, qubits: &[usize]) -> DMatrix<C64> {
    let n = state.lattice.n_qubits();
    let keep = qubits.iter().fold(0u64, |m, &q| m | 1 << q);
    let rest: Vec<usize> = (0..n).filter(|&q| keep >> q & 1 == 0).collect();
    let rows = 1usize << qubits.len();
    let cols = 1usize << rest.len();
    let mut m = DMatrix::<C64>::zeros(rows, cols);
    for (b, &a) in state.amps.iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        let r = gather(b, qubits);
        let c = gather(b, &rest);
        m[(r, c)] = a;
    }
    m
}

fn gather(b: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &q)| acc | ((b >> q) & 1) << k)
}

/// Von Neumann entropy in bits of a density matrix.
pub fn von_neumann_bits(rho: &DMatrix<C64>) -> f64 {
    hermitian_eigenvalues(rho)
        .iter()
        .filter(|&&l| l > EIGENVALUE_FLOOR)
        .map(|&l| -l * l.log2())
        .sum()
}

/// Entanglement entropy of `region`, computed on whichever side of the cut
/// is smaller.
pub fn entropy(state: &LatticeState, region: &EdgeRegion) -> f64 {
    let n = state.lattice.n_qubits();
    if region.is_empty() || region.len() == n {
        return 0.0;
    }
    if 2 * region.len() <= n {
        von_neumann_bits(&reduced_density_matrix(state, region.edges()))
    } else {
        let comp = region.complement(&state.lattice);
        von_neumann_bits(&reduced_density_matrix(state, comp.edges()))
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct MutualInformation {
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
    pub value: f64,
}

pub fn mutual_information_lattice(
    state: &LatticeState,
    a: &EdgeRegion,
    b: &EdgeRegion,
) -> Result<MutualInformation, LatticeError> {
    if !a.is_disjoint(b) {
        return Err(LatticeError::OverlappingRegions);
    }
    let s_a = entropy(state, a);
    let s_b = entropy(state, b);
    let s_ab = entropy(state, &a.union(b));
    Ok(MutualInformation {
        s_a,
        s_b,
        s_ab,
        value: s_a + s_b - s_ab,
    })
}
