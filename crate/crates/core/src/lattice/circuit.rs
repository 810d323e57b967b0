use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use serde::Serialize;

use super::geometry::{EdgeRegion, TorusLattice};
use super::statevector::{mutual_information_lattice, LatticeState};
use super::LatticeError;
use crate::numerics::{haar_unitary, RngSeed, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CircuitMode {
    /// Every gate acts inside one of `A`, `B` or their complement.
    Confined,
    /// Gates may cross region boundaries; needs annuli at least `2·depth` columns wide.
    Straddling,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub mode: CircuitMode,
    pub depth: usize,
    pub trials: usize,
    pub seed: u64,
    pub baseline: f64,
    pub max_delta: f64,
    pub deltas: Vec<f64>,
}

/// Applies a two-qubit unitary; local index is `bit(q1) + 2·bit(q2)`.
pub fn apply_two_qubit(state: &mut LatticeState, q1: usize, q2: usize, u: &DMatrix<C64>) {
    let (m1, m2) = (1usize << q1, 1usize << q2);
    let amps = state.amplitudes_mut();
    for idx in 0..amps.len() {
        if idx & (m1 | m2) != 0 {
            continue;
        }
        let ids = [idx, idx | m1, idx | m2, idx | m1 | m2];
        let v = ids.map(|i| amps[i]);
        for (r, &i) in ids.iter().enumerate() {
            amps[i] = (0..4).map(|c| u[(r, c)] * v[c]).sum();
        }
    }
}

/// One layer of disjoint nearest-neighbour gates, chosen greedily from a
/// shuffled list of adjacent edge pairs.
fn random_layer<R: rand::Rng>(
    lat: &TorusLattice,
    part: &[u8],
    mode: CircuitMode,
    rng: &mut R,
) -> Vec<(usize, usize)> {
    let mut pairs = lat.adjacent_pairs();
    pairs.shuffle(rng);
    let mut used = 0u64;
    let mut layer = Vec::new();
    for (p, q) in pairs {
        if used >> p & 1 == 1 || used >> q & 1 == 1 {
            continue;
        }
        if mode == CircuitMode::Confined && part[p] != part[q] {
            continue;
        }
        used |= 1 << p | 1 << q;
        layer.push((p, q));
    }
    layer
}

/// Maximum change of `I_{A,B}` under `trials` random depth-`depth` circuits
/// of Haar two-qubit gates. Trial `k` draws from stream `k` of `seed`.
pub fn shallow_circuit_invariance_test(
    state: &LatticeState,
    a: &EdgeRegion,
    b: &EdgeRegion,
    depth: usize,
    trials: usize,
    seed: RngSeed,
    mode: CircuitMode,
) -> Result<InvarianceReport, LatticeError> {
    if !a.is_disjoint(b) {
        return Err(LatticeError::OverlappingRegions);
    }
    if mode == CircuitMode::Straddling {
        let width = a.width().zip(b.width()).map(|(x, y)| x.min(y)).ok_or_else(|| {
            LatticeError::InvalidRegion("straddling mode needs column annuli".into())
        })?;
        if width < 2 * depth {
            return Err(LatticeError::RegionsTooNarrow {
                width,
                required: 2 * depth,
            });
        }
    }
    let lat = *state.lattice();
    let mut part = vec![0u8; lat.n_qubits()];
    a.edges().iter().for_each(|&q| part[q] = 1);
    b.edges().iter().for_each(|&q| part[q] = 2);

    let baseline = mutual_information_lattice(state, a, b)?.value;
    let mut deltas = Vec::with_capacity(trials);
    for k in 0..trials {
        let mut rng = seed.stream(k as u64);
        let mut s = state.clone();
        for _ in 0..depth {
            for (p, q) in random_layer(&lat, &part, mode, &mut rng) {
                let u = haar_unitary(4, &mut rng);
                apply_two_qubit(&mut s, p, q, &u);
            }
        }
        let mi = mutual_information_lattice(&s, a, b)?.value;
        deltas.push((mi - baseline).abs());
    }
    Ok(InvarianceReport {
        mode,
        depth,
        trials,
        seed: seed.0,
        baseline,
        max_delta: deltas.iter().copied().fold(0.0, f64::max),
        deltas,
    })
}
