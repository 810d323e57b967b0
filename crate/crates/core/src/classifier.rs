//! Two-qubit stabilizer states of the toric-code ground space and the
//! integer-entropy classification of encoded states.
//!
//! All states here are logical amplitudes `α` for `|00⟩, |10⟩, |01⟩, |11⟩`.
//! Per-loop weights come straight from the three two-term expansions of the
//! logical basis into MES; they do not go through the modular matrices.

use serde::Serialize;
use thiserror::Error;

use crate::anyon::Loop;
use crate::numerics::{
    entropy_bits, haar_state, is_integer, ComplexVec4, NumericsError, RngSeed, TolerancePolicy,
    C64,
};

pub const STABILIZER_COUNT: usize = 60;

/// Canonical-phase distance below which a state counts as one of the 60.
pub const MATCH_TOL: f64 = 1e-6;

/// Distance to 2 below which a Maassen–Uffink sum counts as saturated.
pub const SATURATION_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("Clifford orbit has {found} states, expected {STABILIZER_COUNT}")]
    EnumerationMismatch { found: usize },
    #[error("state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("entropy pattern (x, y, xy) = {0:?} is not a (2, 2, 1) arrangement")]
    PreconditionNotMet([f64; 3]),
    #[error("{0}")]
    InvalidRequest(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LoopEntropies {
    pub gamma_x: f64,
    pub gamma_y: f64,
    pub gamma_xy: f64,
}

impl LoopEntropies {
    pub fn get(&self, l: Loop) -> f64 {
        match l {
            Loop::X => self.gamma_x,
            Loop::Y => self.gamma_y,
            Loop::XY => self.gamma_xy,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.gamma_x, self.gamma_y, self.gamma_xy]
    }

    pub fn sum(&self) -> f64 {
        self.gamma_x + self.gamma_y + self.gamma_xy
    }
}

/// MES weights `|ψ_a(γ)|²` from the logical amplitudes.
pub fn loop_weights(alpha: &ComplexVec4, l: Loop) -> [f64; 4] {
    let a = alpha.amplitudes();
    let (p, q, r, s) = match l {
        Loop::Y => (0, 1, 2, 3),
        Loop::X => (0, 2, 1, 3),
        Loop::XY => (0, 3, 2, 1),
    };
    let w = |z: C64| z.norm_sqr() / 2.0;
    [w(a[p] + a[q]), w(a[p] - a[q]), w(a[r] + a[s]), w(a[r] - a[s])]
}

pub fn loop_entropies(alpha: &ComplexVec4) -> LoopEntropies {
    let h = |l| entropy_bits(&loop_weights(alpha, l));
    LoopEntropies {
        gamma_x: h(Loop::X),
        gamma_y: h(Loop::Y),
        gamma_xy: h(Loop::XY),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizerStateSet {
    states: Vec<ComplexVec4>,
    count: usize,
}

impl StabilizerStateSet {
    pub fn states(&self) -> &[ComplexVec4] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Index of the stabilizer state equal to `state` up to phase.
    pub fn find(&self, state: &ComplexVec4, tol: f64) -> Option<usize> {
        let c = state.canonical_phase(1e-9).ok()?;
        self.states.iter().position(|s| s.max_abs_diff(&c) <= tol)
    }
}

fn clifford_generators() -> Vec<[[C64; 4]; 4]> {
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let i = C64::new(0.0, 1.0);
    // bit 0 is logical qubit 1
    let h1 = [[h, h, z, z], [h, -h, z, z], [z, z, h, h], [z, z, h, -h]];
    let h2 = [[h, z, h, z], [z, h, z, h], [h, z, -h, z], [z, h, z, -h]];
    let s1 = [[o, z, z, z], [z, i, z, z], [z, z, o, z], [z, z, z, i]];
    let s2 = [[o, z, z, z], [z, o, z, z], [z, z, i, z], [z, z, z, i]];
    // control qubit 1, target qubit 2: |10⟩ ↔ |11⟩
    let cx = [[o, z, z, z], [z, z, z, o], [z, z, o, z], [z, o, z, z]];
    vec![h1, h2, s1, s2, cx]
}

fn apply(g: &[[C64; 4]; 4], v: &ComplexVec4) -> ComplexVec4 {
    let a = v.amplitudes();
    ComplexVec4::new([0, 1, 2, 3].map(|r| (0..4).map(|c| g[r][c] * a[c]).sum()))
}

/// Orbit of `|00⟩` under `H`, `S` on each qubit and `CNOT`, in canonical phase.
pub fn enumerate_stabilizer_states() -> Result<StabilizerStateSet, ClassifierError> {
    let gens = clifford_generators();
    let mut states = vec![ComplexVec4::delta(0)];
    let mut frontier = 0;
    while frontier < states.len() {
        let v = states[frontier];
        frontier += 1;
        for g in &gens {
            let w = apply(g, &v).canonical_phase(1e-9)?;
            if !states.iter().any(|s| s.max_abs_diff(&w) < 1e-9) {
                states.push(w);
            }
        }
        if states.len() > 10 * STABILIZER_COUNT {
            break;
        }
    }
    if states.len() != STABILIZER_COUNT {
        return Err(ClassifierError::EnumerationMismatch {
            found: states.len(),
        });
    }
    Ok(StabilizerStateSet {
        count: states.len(),
        states,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationResult {
    pub state: ComplexVec4,
    pub per_loop_entropy: LoopEntropies,
    pub all_integer: bool,
    pub matched_stabilizer: Option<usize>,
}

pub fn classify(
    state: &ComplexVec4,
    set: &StabilizerStateSet,
    tol: &TolerancePolicy,
) -> Result<ClassificationResult, ClassifierError> {
    if !state.is_normalized(tol.tol_norm) {
        return Err(ClassifierError::NotNormalized {
            norm_sqr: state.norm_sqr(),
        });
    }
    let e = loop_entropies(state);
    let all_integer = e
        .as_array()
        .iter()
        .all(|&h| is_integer(h, tol.tol_integer).is_integer);
    Ok(ClassificationResult {
        state: state.canonical_phase(tol.tol_norm)?,
        per_loop_entropy: e,
        all_integer,
        matched_stabilizer: set.find(state, MATCH_TOL),
    })
}

/// Whether `state` has integer entropy on every loop but matches no stabilizer state.
pub fn is_converse_violation(
    state: &ComplexVec4,
    set: &StabilizerStateSet,
    tol: &TolerancePolicy,
) -> Result<bool, ClassifierError> {
    let c = classify(state, set, tol)?;
    Ok(c.all_integer && c.matched_stabilizer.is_none())
}

#[derive(Clone, Debug, Serialize)]
pub struct ForwardRecord {
    pub index: usize,
    pub entropies: LoopEntropies,
    pub pass: bool,
}

/// Each enumerated state must have entropies in `{0, 1, 2}` on every loop.
pub fn verify_theorem2_forward(set: &StabilizerStateSet, tol: &TolerancePolicy) -> Vec<ForwardRecord> {
    set.states
        .iter()
        .enumerate()
        .map(|(index, s)| {
            let entropies = loop_entropies(s);
            let pass = entropies.as_array().iter().all(|&h| {
                let c = is_integer(h, tol.tol_entropy_closed);
                c.is_integer && (0..=2).contains(&c.nearest)
            });
            ForwardRecord {
                index,
                entropies,
                pass,
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ConverseScan {
    pub samples: usize,
    pub seed: u64,
    pub all_integer: usize,
    pub matched: usize,
    pub violations: usize,
}

pub fn scan_theorem2_converse(
    samples: usize,
    seed: RngSeed,
    set: &StabilizerStateSet,
    tol: &TolerancePolicy,
) -> Result<ConverseScan, ClassifierError> {
    if samples == 0 {
        return Err(ClassifierError::InvalidRequest("samples must be at least 1".into()));
    }
    let mut rng = seed.rng();
    let mut scan = ConverseScan {
        samples,
        seed: seed.0,
        all_integer: 0,
        matched: 0,
        violations: 0,
    };
    for _ in 0..samples {
        let c = classify(&haar_state(&mut rng), set, tol)?;
        scan.all_integer += c.all_integer as usize;
        scan.matched += c.matched_stabilizer.is_some() as usize;
        scan.violations += (c.all_integer && c.matched_stabilizer.is_none()) as usize;
    }
    Ok(scan)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct MaassenUffink {
    pub sum: f64,
    pub bound_ok: bool,
    pub saturated: bool,
    /// Both distributions uniform on their support; only evaluated when saturated.
    pub flat_if_saturated: Option<bool>,
}

fn is_flat(p: &[f64; 4]) -> bool {
    let nz: Vec<f64> = p.iter().copied().filter(|&x| x > 1e-9).collect();
    nz.iter().all(|&x| (x - nz[0]).abs() <= 1e-6)
}

pub fn maassen_uffink_check(
    state: &ComplexVec4,
    a: Loop,
    b: Loop,
    tol: &TolerancePolicy,
) -> Result<MaassenUffink, ClassifierError> {
    if a == b {
        return Err(ClassifierError::InvalidRequest(format!(
            "Maassen–Uffink check needs two distinct loops, got {a} twice"
        )));
    }
    let (pa, pb) = (loop_weights(state, a), loop_weights(state, b));
    let sum = entropy_bits(&pa) + entropy_bits(&pb);
    let saturated = sum <= 2.0 + SATURATION_TOL;
    Ok(MaassenUffink {
        sum,
        bound_ok: sum >= 2.0 - tol.tol_entropy_closed,
        saturated,
        flat_if_saturated: saturated.then(|| is_flat(&pa) && is_flat(&pb)),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MaassenUffinkSweep {
    pub samples: usize,
    pub seed: u64,
    pub checks: usize,
    pub bound_violations: usize,
    pub saturated: usize,
    pub saturated_not_flat: usize,
    pub min_sum: f64,
}

/// Every loop pair of `samples` Haar states, followed by every loop pair of
/// every stabilizer state in `extra`.
pub fn maassen_uffink_sweep(
    samples: usize,
    seed: RngSeed,
    extra: &[ComplexVec4],
    tol: &TolerancePolicy,
) -> Result<MaassenUffinkSweep, ClassifierError> {
    let mut rng = seed.rng();
    let mut out = MaassenUffinkSweep {
        samples,
        seed: seed.0,
        checks: 0,
        bound_violations: 0,
        saturated: 0,
        saturated_not_flat: 0,
        min_sum: f64::INFINITY,
    };
    let random: Vec<ComplexVec4> = (0..samples).map(|_| haar_state(&mut rng)).collect();
    let pairs = [(Loop::X, Loop::Y), (Loop::X, Loop::XY), (Loop::Y, Loop::XY)];
    for s in random.iter().chain(extra) {
        for &(a, b) in &pairs {
            let m = maassen_uffink_check(s, a, b, tol)?;
            out.checks += 1;
            out.min_sum = out.min_sum.min(m.sum);
            out.bound_violations += !m.bound_ok as usize;
            if m.saturated {
                out.saturated += 1;
                out.saturated_not_flat += (m.flat_if_saturated == Some(false)) as usize;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstraintCheck {
    pub entropies: LoopEntropies,
    pub moduli_ok: bool,
    pub real_count: usize,
    pub imaginary_count: usize,
    pub pass: bool,
}

/// For a state whose entropies are `2, 2, 1` on the three loops (in any
/// order): all `|α_i| = 1/2`, and after rotating `α₁` to the positive reals
/// exactly two amplitudes are `±1/2` and two are `±i/2`.
pub fn constraint_lemma_check(
    state: &ComplexVec4,
    tol: &TolerancePolicy,
) -> Result<ConstraintCheck, ClassifierError> {
    let e = loop_entropies(state);
    let mut pattern: Vec<i64> = e
        .as_array()
        .iter()
        .map(|&h| {
            let c = is_integer(h, tol.tol_integer);
            if c.is_integer {
                c.nearest
            } else {
                -1
            }
        })
        .collect();
    pattern.sort_unstable();
    if pattern != [1, 2, 2] {
        return Err(ClassifierError::PreconditionNotMet(e.as_array()));
    }
    let a = state.amplitudes();
    let moduli_ok = a.iter().all(|z| (z.norm() - 0.5).abs() <= 1e-6);
    let rot = if a[0].norm() > 0.0 {
        a[0].conj() / a[0].norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let rotated: Vec<C64> = a.iter().map(|z| z * rot).collect();
    let real_count = rotated.iter().filter(|z| z.im.abs() <= 1e-6).count();
    let imaginary_count = rotated.iter().filter(|z| z.re.abs() <= 1e-6).count();
    Ok(ConstraintCheck {
        entropies: e,
        moduli_ok,
        real_count,
        imaginary_count,
        pass: moduli_ok && real_count == 2 && imaginary_count == 2,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropySumProbe {
    pub samples: usize,
    pub seed: u64,
    pub best: f64,
    pub best_state: ComplexVec4,
    pub climb_steps: usize,
}

/// Largest `I_x + I_y + I_xy` found by random sampling followed by a
/// shrinking-step hill climb from the best sample. A heuristic estimate.
pub fn max_entropy_sum_probe(samples: usize, seed: RngSeed) -> Result<EntropySumProbe, ClassifierError> {
    if samples == 0 {
        return Err(ClassifierError::InvalidRequest("samples must be at least 1".into()));
    }
    let mut rng = seed.rng();
    let mut best = ComplexVec4::delta(0);
    let mut best_val = f64::NEG_INFINITY;
    for _ in 0..samples {
        let s = haar_state(&mut rng);
        let v = loop_entropies(&s).sum();
        if v > best_val {
            best = s;
            best_val = v;
        }
    }
    let mut step = 0.1;
    let mut climb_steps = 0;
    while step > 1e-7 {
        let mut improved = false;
        for _ in 0..200 {
            let d = haar_state(&mut rng);
            let cand = ComplexVec4::new([0, 1, 2, 3].map(|k| best[k] + d[k] * step)).normalized()?;
            let v = loop_entropies(&cand).sum();
            if v > best_val {
                best = cand;
                best_val = v;
                improved = true;
                climb_steps += 1;
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    Ok(EntropySumProbe {
        samples,
        seed: seed.0,
        best: best_val,
        best_state: best.canonical_phase(1e-12)?,
        climb_steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anyon::{AnyonModel, ModelKind};
    use crate::ground_space::from_logical;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn set() -> StabilizerStateSet {
        enumerate_stabilizer_states().unwrap()
    }

    fn y_state() -> ComplexVec4 {
        let (o, i) = (C64::new(0.5, 0.0), C64::new(0.0, 0.5));
        ComplexVec4::new([o, i, i, o])
    }

    fn t_state() -> ComplexVec4 {
        ComplexVec4::new([
            C64::new(FRAC_1_SQRT_2, 0.0),
            C64::from_polar(FRAC_1_SQRT_2, FRAC_PI_4),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ])
    }

    #[test]
    fn enumeration_examples() {
        let s = set();
        assert_eq!(s.len(), 60);
        assert_eq!(s.find(&ComplexVec4::delta(0), MATCH_TOL), Some(0));
        assert!(s.find(&y_state(), MATCH_TOL).is_some());
        for (i, a) in s.states().iter().enumerate() {
            for b in &s.states()[i + 1..] {
                assert!(a.max_abs_diff(b) > 1e-6);
            }
        }
    }

    #[test]
    fn classify_examples() {
        let s = set();
        let c = classify(&ComplexVec4::delta(0), &s, &tol()).unwrap();
        for h in c.per_loop_entropy.as_array() {
            assert!((h - 1.0).abs() < 1e-12);
        }
        assert!(c.all_integer && c.matched_stabilizer.is_some());

        let c = classify(&t_state(), &s, &tol()).unwrap();
        assert!((c.per_loop_entropy.gamma_y - 0.600_876_036_692_856_1).abs() < 1e-12);
        assert!((c.per_loop_entropy.gamma_x - 2.0).abs() < 1e-12);
        assert!((c.per_loop_entropy.gamma_xy - 2.0).abs() < 1e-12);
        assert!(!c.all_integer && c.matched_stabilizer.is_none());

        let mes = ComplexVec4::from_real([FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0]);
        let c = classify(&mes, &s, &tol()).unwrap();
        let e = c.per_loop_entropy;
        assert!(e.gamma_y.abs() < 1e-12 && (e.gamma_x - 2.0).abs() < 1e-12 && (e.gamma_xy - 2.0).abs() < 1e-12);
        assert!(c.matched_stabilizer.is_some());

        assert!(matches!(
            classify(&ComplexVec4::from_real([1.0, 1.0, 0.0, 0.0]), &s, &tol()),
            Err(ClassifierError::NotNormalized { .. })
        ));
    }

    #[test]
    fn y_state_pattern() {
        let e = loop_entropies(&y_state());
        assert!((e.gamma_xy - 1.0).abs() < 1e-12);
        assert!((e.gamma_x - 2.0).abs() < 1e-12);
        assert!((e.gamma_y - 2.0).abs() < 1e-12);
        assert!(constraint_lemma_check(&y_state(), &tol()).unwrap().pass);
    }

    #[test]
    fn forward_direction_and_patterns() {
        let s = set();
        let recs = verify_theorem2_forward(&s, &tol());
        assert_eq!(recs.len(), 60);
        assert!(recs.iter().all(|r| r.pass));
        let (mut n221, mut n221_flat) = (0, 0);
        for r in &recs {
            let mut p: Vec<i64> = r.entropies.as_array().iter().map(|h| h.round() as i64).collect();
            p.sort_unstable();
            assert_ne!(p, [2, 2, 2]);
            // a zero forces the other two to 2
            if p[0] == 0 {
                assert_eq!(p, [0, 2, 2]);
            }
            if p == [1, 2, 2] {
                n221 += 1;
                let st = &s.states()[r.index];
                let flat = st.amplitudes().iter().all(|z| (z.norm() - 0.5).abs() < 1e-9);
                // the lemma holds on the flat states; states with two vanishing
                // amplitudes also realize the pattern and fail the moduli test
                let c = constraint_lemma_check(st, &tol()).unwrap();
                assert_eq!(c.pass, flat, "{:?}", st.amplitudes());
                n221_flat += flat as usize;
            }
        }
        eprintln!("(2,2,1) states: {n221}, flat: {n221_flat}");
        assert!(n221_flat > 0 && n221_flat < n221);
    }

    #[test]
    fn constraint_precondition() {
        assert!(matches!(
            constraint_lemma_check(&ComplexVec4::delta(0), &tol()),
            Err(ClassifierError::PreconditionNotMet(_))
        ));
        // (|0⟩ + i|1⟩) ⊗ |+⟩ has the pattern with γ_x as the odd loop
        let (o, i) = (C64::new(0.5, 0.0), C64::new(0.0, 0.5));
        let c = constraint_lemma_check(&ComplexVec4::new([o, i, o, i]), &tol()).unwrap();
        assert!((c.entropies.gamma_x - 1.0).abs() < 1e-12);
        assert!(c.pass);
    }

    #[test]
    fn formulas_agree_with_modular_words() {
        let tc = AnyonModel::get(ModelKind::ToricCode);
        let mut rng = RngSeed(77).rng();
        for _ in 0..100 {
            let a = haar_state(&mut rng);
            let g = from_logical(tc, &a, 1e-12).unwrap();
            let e = loop_entropies(&a);
            for l in Loop::ALL {
                assert!((g.mutual_information(l) - e.get(l)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn converse_examples() {
        let s = set();
        let r = scan_theorem2_converse(500, RngSeed(1), &s, &tol()).unwrap();
        assert_eq!(r.violations, 0);
        assert!(!is_converse_violation(&ComplexVec4::delta(0), &s, &tol()).unwrap());
        assert!(!is_converse_violation(&t_state(), &s, &tol()).unwrap());
        assert!(scan_theorem2_converse(0, RngSeed(1), &s, &tol()).is_err());
    }

    #[test]
    fn maassen_uffink_examples() {
        let m = maassen_uffink_check(&ComplexVec4::from_real([FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0]), Loop::Y, Loop::X, &tol())
            .unwrap();
        assert!((m.sum - 2.0).abs() < 1e-12);
        assert!(m.bound_ok && m.saturated);
        assert_eq!(m.flat_if_saturated, Some(true));
        let m = maassen_uffink_check(&t_state(), Loop::Y, Loop::X, &tol()).unwrap();
        assert!((m.sum - 2.600_876_036_692_856).abs() < 1e-12);
        assert!(!m.saturated);
        assert!(maassen_uffink_check(&t_state(), Loop::X, Loop::X, &tol()).is_err());
    }

    #[test]
    fn entropy_sum_probe_bounds() {
        let p = max_entropy_sum_probe(200, RngSeed(3)).unwrap();
        assert!(p.best >= 5.0 - 1e-6, "{}", p.best);
        assert!(p.best < 6.0);
    }

    proptest! {
        #[test]
        fn classify_is_phase_blind(re in prop::array::uniform4(-1.0f64..1.0), im in prop::array::uniform4(-1.0f64..1.0), phi in 0.0f64..6.3) {
            let v = ComplexVec4::new([0, 1, 2, 3].map(|k| C64::new(re[k], im[k])));
            prop_assume!(v.norm_sqr() > 1e-3);
            let v = v.normalized().unwrap();
            let s = set();
            let a = classify(&v, &s, &tol()).unwrap();
            let b = classify(&v.scale(C64::from_polar(1.0, phi)), &s, &tol()).unwrap();
            for (x, y) in a.per_loop_entropy.as_array().iter().zip(b.per_loop_entropy.as_array()) {
                prop_assert!((x - y).abs() < 1e-9);
            }
            prop_assert_eq!(a.all_integer, b.all_integer);
            prop_assert_eq!(a.matched_stabilizer, b.matched_stabilizer);
        }
    }
}
