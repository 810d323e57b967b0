use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::geometry::{EdgeRegion, TorusLattice};
use super::pauli::PauliString;
use super::statevector::{check_dense, LatticeState};
use super::LatticeError;
use crate::numerics::{RngSeed, C64};

/// `n` independent, commuting, Hermitian Pauli generators with signs `±1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilizerTableau {
    n: usize,
    generators: Vec<PauliString>,
}

fn row(p: &PauliString) -> u128 {
    p.x as u128 | (p.z as u128) << 64
}

/// Rank over GF(2) of bit rows.
pub fn gf2_rank(rows: impl IntoIterator<Item = u128>) -> usize {
    let mut basis: Vec<u128> = Vec::new();
    for mut r in rows {
        for &b in &basis {
            r = r.min(r ^ b);
        }
        if r != 0 {
            basis.push(r);
            // keep the basis sorted by leading bit, highest first
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

impl StabilizerTableau {
    pub fn new(n: usize, generators: Vec<PauliString>) -> Result<Self, LatticeError> {
        if generators.len() != n {
            return Err(LatticeError::InvalidTableau(format!(
                "{} generators for {n} qubits",
                generators.len()
            )));
        }
        let outside = if n == 64 { 0 } else { !0u64 << n };
        for (i, g) in generators.iter().enumerate() {
            if g.support() & outside != 0 {
                return Err(LatticeError::InvalidTableau(format!("generator {i} acts outside {n} qubits")));
            }
            if !g.is_hermitian() || g.phase % 2 == 1 {
                return Err(LatticeError::InvalidTableau(format!("generator {i} has phase ±i")));
            }
            for (j, h) in generators.iter().enumerate().skip(i + 1) {
                if !g.commutes_with(h) {
                    return Err(LatticeError::InvalidTableau(format!(
                        "generators {i} and {j} anticommute"
                    )));
                }
            }
        }
        let rank = gf2_rank(generators.iter().map(row));
        if rank != n {
            return Err(LatticeError::InvalidTableau(format!("rank {rank} < {n}")));
        }
        Ok(Self { n, generators })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    /// Whether `p` (up to sign) lies in the stabilizer group.
    pub fn contains_up_to_sign(&self, p: &PauliString) -> bool {
        gf2_rank(self.generators.iter().map(row).chain([row(p)])) == self.n
    }

    /// Statevector of the stabilized state, obtained by projecting a seeded
    /// random state with `∏ (1 + g)/2`.
    pub fn to_statevector(
        &self,
        lat: &TorusLattice,
        seed: RngSeed,
    ) -> Result<LatticeState, LatticeError> {
        check_dense(lat)?;
        if lat.n_qubits() != self.n {
            return Err(LatticeError::DimensionMismatch {
                expected: lat.n_qubits(),
                actual: self.n,
            });
        }
        let mut rng = seed.rng();
        let amps: Vec<C64> = (0..1usize << self.n)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let mut s = LatticeState::from_raw(*lat, amps);
        for g in &self.generators {
            g.project_plus(s.amplitudes_mut());
        }
        s.normalize()?;
        Ok(s)
    }
}

/// `S(ρ_R) = |R| - log₂|H_R|`, where `H_R` is the subgroup supported inside `R`.
///
/// `log₂|H_R|` is `n` minus the rank of the generators restricted to the
/// complement of `R`.
pub fn tableau_entropy(t: &StabilizerTableau, region: &EdgeRegion) -> usize {
    let outside = !region.mask();
    let rank_out = gf2_rank(t.generators.iter().map(|g| {
        let p = PauliString::new(g.x & outside, g.z & outside, 0);
        row(&p)
    }));
    let inside = t.n - rank_out;
    region.len() - inside
}

fn code_generators(lat: &TorusLattice) -> Vec<PauliString> {
    let stars = lat.star_masks();
    let plaqs = lat.plaquette_masks();
    // one star and one plaquette are products of the others
    stars[1..]
        .iter()
        .map(|&m| PauliString::z_on(m))
        .chain(plaqs[1..].iter().map(|&m| PauliString::x_on(m)))
        .collect()
}

/// MES of the vertical loop in the order `(I, e, m, f)`: `±X̄₁`, `±Z̄₂` with
/// signs `(+,+), (−,+), (+,−), (−,−)`.
pub fn build_mes_tableaus(lat: &TorusLattice) -> Result<[StabilizerTableau; 4], LatticeError> {
    let x1 = PauliString::x_on(lat.x1_support());
    let z2 = PauliString::z_on(lat.z2_support());
    let make = |k: usize| {
        let mut g = code_generators(lat);
        g.push(x1.with_sign(k & 1 == 1));
        g.push(z2.with_sign(k & 2 == 2));
        StabilizerTableau::new(lat.n_qubits(), g)
    };
    Ok([make(0)?, make(1)?, make(2)?, make(3)?])
}

/// Logical basis `|j₁ j₂⟩_L`: `(−1)^{j₁} Z̄₁`, `(−1)^{j₂} Z̄₂`.
pub fn build_logical_tableaus(lat: &TorusLattice) -> Result<[StabilizerTableau; 4], LatticeError> {
    let z1 = PauliString::z_on(lat.z1_support());
    let z2 = PauliString::z_on(lat.z2_support());
    let make = |k: usize| {
        let mut g = code_generators(lat);
        g.push(z1.with_sign(k & 1 == 1));
        g.push(z2.with_sign(k & 2 == 2));
        StabilizerTableau::new(lat.n_qubits(), g)
    };
    Ok([make(0)?, make(1)?, make(2)?, make(3)?])
}
