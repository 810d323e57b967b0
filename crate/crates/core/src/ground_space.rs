//! Ground-space states in minimum-entropy (MES) bases, basis changes by
//! modular words, mutual information as the Shannon entropy of MES weights,
//! the LRN diagnostic and the fault-tolerant gate admissibility check.

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::anyon::{AnyonModel, Letter, LoopLabel, Loop, ModelKind, ModularWord};
use crate::modular_group::{bounded_closure, GroupError, ProjectiveGroup, DEFAULT_CAP};
use crate::numerics::{
    entropy_bits, is_integer, ComplexVec4, NumericsError, TolerancePolicy, UnitaryMat, C64,
};

pub const DEFAULT_MAX_WORD_LEN: usize = 6;

pub const INTEGER_CAVEAT: &str = "entropies within tol_integer of an integer are classified \
as integer; a genuinely non-integer value that close to an integer is reported inconclusive";

#[derive(Debug, Error)]
pub enum GroundSpaceError {
    #[error("coefficients are not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("operation `{op}` is only defined for the toric code, not `{model}`")]
    UnsupportedModel { op: &'static str, model: ModelKind },
    #[error("gate is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error("gate must be 4x4, got {0}x{0}")]
    WrongGateDimension(usize),
    #[error("no group element has a column without zeros; cannot solve monomial phases")]
    NoDenseReference,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// A normalized ground state, stored as its coefficients in the MES basis
/// named by `basis` (a word relative to `γ_y`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroundState {
    model: ModelKind,
    basis: ModularWord,
    coeffs: ComplexVec4,
}

impl GroundState {
    pub fn new(
        model: ModelKind,
        basis: ModularWord,
        coeffs: ComplexVec4,
        tol_norm: f64,
    ) -> Result<Self, GroundSpaceError> {
        if !coeffs.is_normalized(tol_norm) {
            return Err(GroundSpaceError::NotNormalized {
                norm_sqr: coeffs.norm_sqr(),
            });
        }
        Ok(Self {
            model,
            basis,
            coeffs,
        })
    }

    /// State given by its `γ_y`-basis coefficients.
    pub fn in_gamma_y(
        model: ModelKind,
        coeffs: ComplexVec4,
        tol_norm: f64,
    ) -> Result<Self, GroundSpaceError> {
        Self::new(model, ModularWord::empty(), coeffs, tol_norm)
    }

    pub fn model(&self) -> &'static AnyonModel {
        AnyonModel::get(self.model)
    }

    pub fn model_kind(&self) -> ModelKind {
        self.model
    }

    pub fn basis(&self) -> &ModularWord {
        &self.basis
    }

    pub fn coeffs(&self) -> &ComplexVec4 {
        &self.coeffs
    }

    /// Coefficients in the `γ_y` basis.
    pub fn gamma_y_coeffs(&self) -> ComplexVec4 {
        if self.basis.is_empty() {
            return self.coeffs;
        }
        self.model()
            .word_to_matrix(&self.basis)
            .adjoint()
            .apply(&self.coeffs)
    }

    /// Re-expresses the state in the basis named by `target`:
    /// `M(target) · M(basis)⁻¹ · coeffs`.
    pub fn change_basis(&self, target: &ModularWord) -> GroundState {
        let coeffs = if *target == self.basis {
            self.coeffs
        } else {
            self.model().word_to_matrix(target).apply(&self.gamma_y_coeffs())
        };
        GroundState {
            model: self.model,
            basis: target.clone(),
            coeffs,
        }
    }

    /// Multiplies the stored coefficients by `M(word)`, keeping the basis tag.
    /// `s.transform(w2).transform(w1)` equals `s.transform(w1 ++ w2)`.
    pub fn transform(&self, word: &ModularWord) -> GroundState {
        GroundState {
            model: self.model,
            basis: self.basis.clone(),
            coeffs: self.model().word_to_matrix(word).apply(&self.coeffs),
        }
    }

    /// Mutual information between two separated annuli around loop `target`,
    /// in bits: the Shannon entropy of the squared MES coefficients.
    pub fn mutual_information(&self, target: impl Into<LoopLabel>) -> f64 {
        let word = target.into().word();
        entropy_bits(&self.change_basis(&word).coeffs.probabilities())
    }
}

/// Logical computational basis → `γ_y` MES basis for the toric code.
///
/// Logical index `i = j₁ + 2 j₂` for `|j₁ j₂⟩_L`; MES order `(I, e, m, f)`
/// is `(|+,0⟩, |−,0⟩, |+,1⟩, |−,1⟩)`.
pub fn tc_logical_to_mes() -> UnitaryMat {
    let h = 1.0 / 2f64.sqrt();
    let rows = [
        [h, h, 0.0, 0.0],
        [h, -h, 0.0, 0.0],
        [0.0, 0.0, h, h],
        [0.0, 0.0, h, -h],
    ];
    let entries: Vec<C64> = rows.iter().flatten().map(|&x| C64::new(x, 0.0)).collect();
    UnitaryMat::from_rows(4, &entries, 1e-12).expect("orthogonal")
}

/// Toric-code ground state from logical amplitudes
/// `α₁|00⟩ + α₂|10⟩ + α₃|01⟩ + α₄|11⟩`.
pub fn from_logical(
    model: &AnyonModel,
    alpha: &ComplexVec4,
    tol_norm: f64,
) -> Result<GroundState, GroundSpaceError> {
    if model.kind() != ModelKind::ToricCode {
        return Err(GroundSpaceError::UnsupportedModel {
            op: "from_logical",
            model: model.kind(),
        });
    }
    if !alpha.is_normalized(tol_norm) {
        return Err(GroundSpaceError::NotNormalized {
            norm_sqr: alpha.norm_sqr(),
        });
    }
    let psi = tc_logical_to_mes().apply(alpha);
    GroundState::in_gamma_y(ModelKind::ToricCode, psi, tol_norm.max(1e-12))
}

/// Logical-basis operator rewritten in the `γ_y` MES basis.
pub fn tc_logical_gate_to_mes(u_logical: &UnitaryMat) -> UnitaryMat {
    tc_logical_to_mes().conjugate(u_logical)
}

/// Logical `T` gate on the first logical qubit, in the logical basis.
pub fn tc_logical_t_gate() -> UnitaryMat {
    let t = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let one = C64::new(1.0, 0.0);
    UnitaryMat::diagonal(&[one, t, one, t], 1e-12).expect("diagonal phases")
}

/// Logical Pauli `P` on logical qubit `qubit` (1 or 2), in the logical basis.
pub fn tc_logical_pauli(pauli: char, qubit: u8) -> UnitaryMat {
    assert!(qubit == 1 || qubit == 2, "logical qubits are 1 and 2");
    let bit = (qubit - 1) as usize;
    let mut m = nalgebra::DMatrix::<C64>::zeros(4, 4);
    for i in 0..4usize {
        let b = (i >> bit) & 1;
        let sign = if b == 1 { -1.0 } else { 1.0 };
        match pauli {
            'X' => m[(i ^ (1 << bit), i)] = C64::new(1.0, 0.0),
            'Z' => m[(i, i)] = C64::new(sign, 0.0),
            'Y' => m[(i ^ (1 << bit), i)] = C64::new(0.0, sign),
            _ => panic!("unknown Pauli {pauli}"),
        }
    }
    UnitaryMat::new(m, 1e-12).expect("Pauli")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "LRN_certified")]
    LrnCertified,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct WordEntropy {
    #[serde(serialize_with = "word_symbols")]
    pub word: ModularWord,
    pub value: f64,
    pub nearest_int: i64,
    pub is_int: bool,
}

fn word_symbols<S: Serializer>(w: &ModularWord, s: S) -> Result<S::Ok, S::Error> {
    w.symbols().serialize(s)
}

fn opt_word_symbols<S: Serializer>(w: &Option<ModularWord>, s: S) -> Result<S::Ok, S::Error> {
    w.as_ref().map(|w| w.symbols()).serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct LrnReport {
    pub verdict: Verdict,
    #[serde(serialize_with = "opt_word_symbols")]
    pub witness_word: Option<ModularWord>,
    pub entropies: Vec<WordEntropy>,
    pub words_examined: usize,
    pub exhaustive: bool,
    pub tolerances: TolerancePolicy,
    pub caveat: &'static str,
}

impl LrnReport {
    pub fn witness_entropy(&self) -> Option<f64> {
        let w = self.witness_word.as_ref()?;
        self.entropies.iter().find(|e| &e.word == w).map(|e| e.value)
    }
}

/// Sweeps the mutual information over modular transformations.
///
/// With `group`, every element of that projective group is examined (in its
/// shortlex word order). Without it, all projectively distinct matrices
/// reachable by words over `{S, T, S⁻¹, T⁻¹}` of length at most
/// `max_word_len` are examined. The first entropy farther than `tol_integer`
/// from every integer certifies LRN.
pub fn diagnose_lrn(
    state: &GroundState,
    max_word_len: usize,
    group: Option<&ProjectiveGroup>,
    tol: &TolerancePolicy,
) -> Result<LrnReport, GroundSpaceError> {
    let model = state.model();
    let owned;
    let group = match group {
        Some(g) => g,
        None => {
            let gens: Vec<(Letter, UnitaryMat)> = Letter::ALL
                .iter()
                .map(|&l| (l, model.letter_matrix(l)))
                .collect();
            owned = bounded_closure(&gens, max_word_len, DEFAULT_CAP)?;
            &owned
        }
    };
    let psi = state.gamma_y_coeffs();
    let mut entropies = Vec::with_capacity(group.order());
    let mut witness = None;
    for (word, m) in group.iter() {
        let value = entropy_bits(&m.apply(&psi).probabilities());
        let check = is_integer(value, tol.tol_integer);
        if !check.is_integer && witness.is_none() {
            witness = Some(word.clone());
        }
        entropies.push(WordEntropy {
            word: word.clone(),
            value,
            nearest_int: check.nearest,
            is_int: check.is_integer,
        });
    }
    Ok(LrnReport {
        verdict: if witness.is_some() {
            Verdict::LrnCertified
        } else {
            Verdict::Inconclusive
        },
        witness_word: witness,
        words_examined: entropies.len(),
        entropies,
        exhaustive: group.is_closed(),
        tolerances: *tol,
        caveat: INTEGER_CAVEAT,
    })
}

/// `(|i j⟩_L + e^{iπ/4} |i′ j′⟩_L)/√2` as logical amplitudes.
pub fn encoded_t_state(first: (u8, u8), second: (u8, u8)) -> ComplexVec4 {
    let idx = |(i, j): (u8, u8)| (i as usize) + 2 * (j as usize);
    let h = 1.0 / 2f64.sqrt();
    let mut a = [C64::new(0.0, 0.0); 4];
    a[idx(first)] += C64::new(h, 0.0);
    a[idx(second)] += C64::from_polar(h, std::f64::consts::FRAC_PI_4);
    ComplexVec4::new(a)
}

#[derive(Clone, Debug, Serialize)]
pub struct TFamilyRecord {
    pub first: (u8, u8),
    pub second: (u8, u8),
    /// Entropies for `γ_x`, `γ_y`, `γ_xy`.
    pub entropies: [f64; 3],
    pub witnesses: Vec<Loop>,
    pub pass: bool,
}

/// For every ordered pair of distinct logical basis states, checks that the
/// encoded `T` superposition has exactly one named loop with non-integer
/// mutual information.
pub fn exactly_one_witness_for_t_family(tol: &TolerancePolicy) -> Vec<TFamilyRecord> {
    let model = AnyonModel::get(ModelKind::ToricCode);
    let basis: Vec<(u8, u8)> = vec![(0, 0), (1, 0), (0, 1), (1, 1)];
    let mut out = Vec::new();
    for &a in &basis {
        for &b in &basis {
            if a == b {
                continue;
            }
            let s = from_logical(model, &encoded_t_state(a, b), tol.tol_norm)
                .expect("encoded T state is normalized");
            let entropies = Loop::ALL.map(|l| s.mutual_information(l));
            let witnesses: Vec<Loop> = Loop::ALL
                .iter()
                .zip(entropies.iter())
                .filter(|(_, &h)| !is_integer(h, tol.tol_integer).is_integer)
                .map(|(&l, _)| l)
                .collect();
            out.push(TFamilyRecord {
                first: a,
                second: b,
                entropies,
                pass: witnesses.len() == 1,
                witnesses,
            });
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum GateVerdict {
    Admissible,
    Rejected {
        #[serde(serialize_with = "word_symbols")]
        witness_word: ModularWord,
        /// Witness input in `γ_y` coordinates: an MES of the witness basis.
        witness_state: ComplexVec4,
        entropy_before: f64,
        entropy_after: f64,
    },
}

impl GateVerdict {
    pub fn is_admissible(&self) -> bool {
        matches!(self, GateVerdict::Admissible)
    }
}

/// A logical gate `u` (written in the `γ_y` MES basis) can only come from a
/// shallow circuit if `M(γ) · u · M(γ)⁻¹` is monomial for every tested `γ`.
/// A rejection names the first failing word and an MES of that basis whose
/// entropy the gate changes.
pub fn check_ft_gate(
    model: &AnyonModel,
    u: &UnitaryMat,
    words: &[ModularWord],
    tol: &TolerancePolicy,
) -> Result<GateVerdict, GroundSpaceError> {
    if u.dim() != 4 {
        return Err(GroundSpaceError::WrongGateDimension(u.dim()));
    }
    if let Err(NumericsError::NotUnitary { deviation }) =
        UnitaryMat::new(u.matrix().clone(), tol.tol_unitary)
    {
        return Err(GroundSpaceError::NotUnitary { deviation });
    }
    for word in words {
        let m = model.word_to_matrix(word);
        let conj = m.conjugate(u);
        if conj.is_monomial(tol.tol_integer) {
            continue;
        }
        let col = (0..4)
            .find(|&c| {
                let big = (0..4)
                    .filter(|&r| (conj.entry(r, c).norm() - 1.0).abs() <= tol.tol_integer)
                    .count();
                big != 1
            })
            .unwrap_or(0);
        let mes = ComplexVec4::delta(col);
        let out = conj.apply(&mes);
        return Ok(GateVerdict::Rejected {
            witness_word: word.clone(),
            witness_state: m.adjoint().apply(&mes),
            entropy_before: 0.0,
            entropy_after: entropy_bits(&out.probabilities()),
        });
    }
    Ok(GateVerdict::Admissible)
}

#[derive(Clone, Debug, Serialize)]
pub struct MonomialSearch {
    pub candidates_tested: usize,
    /// Admissible gates in the `γ_y` basis, one per projective class.
    pub admissible: Vec<UnitaryMat>,
    pub only_identity: bool,
    /// Admissible gates that map the vacuum MES `e_0` to itself.
    pub vacuum_fixing: Vec<UnitaryMat>,
}

/// Exhaustive search for logical gates that stay monomial in every basis of
/// a closed projective group.
///
/// Such a gate is monomial in `γ_y` (the identity is in the group), so it is
/// `diag(d) · P` for a permutation `P`. For a reference element `g` with a
/// row `j` free of zeros, requiring `g U g⁻¹ e_j ∝ e_r` fixes `d` up to a
/// global phase for each target `r`.
/// All `24 · 4` candidates are then tested against every group element.
pub fn monomial_search(
    model: &AnyonModel,
    group: &ProjectiveGroup,
    tol: &TolerancePolicy,
) -> Result<MonomialSearch, GroundSpaceError> {
    if !group.is_closed() {
        return Err(GroupError::GroupNotClosed.into());
    }
    let dense = 1e-9;
    // need a = P g† e_j with no zero entries: g† e_j is row j of g, conjugated
    let (g_ref, j_ref) = group
        .elements()
        .iter()
        .find_map(|g| {
            (0..4)
                .find(|&j| (0..4).all(|c| g.entry(j, c).norm() > dense))
                .map(|j| (g.clone(), j))
        })
        .ok_or(GroundSpaceError::NoDenseReference)?;
    let g_adj = g_ref.adjoint();
    let column = |m: &UnitaryMat, c: usize| -> [C64; 4] { [0, 1, 2, 3].map(|r| m.entry(r, c)) };
    let words: Vec<ModularWord> = group.words().to_vec();
    let mut admissible: Vec<UnitaryMat> = Vec::new();
    let mut tested = 0;
    for perm in permutations4() {
        // P e_k = e_{perm[k]}
        let src = column(&g_adj, j_ref);
        let mut a = [C64::new(0.0, 0.0); 4];
        for k in 0..4 {
            a[perm[k]] = src[k];
        }
        for r in 0..4 {
            tested += 1;
            let b = column(&g_adj, r);
            let d: Vec<C64> = (0..4).map(|i| b[i] / a[i]).collect();
            if d.iter().any(|z| (z.norm() - 1.0).abs() > tol.tol_integer) {
                continue;
            }
            let mut m = nalgebra::DMatrix::<C64>::zeros(4, 4);
            for k in 0..4 {
                m[(perm[k], k)] = d[perm[k]];
            }
            let u = UnitaryMat::new(m, 1e-9)?;
            if !check_ft_gate(model, &u, &words, tol)?.is_admissible() {
                continue;
            }
            if !admissible.iter().any(|x| x.projectively_eq(&u, 1e-9)) {
                admissible.push(u);
            }
        }
    }
    let only_identity = admissible.len() == 1
        && admissible[0].projectively_eq(&UnitaryMat::identity(4), 1e-9);
    let vacuum_fixing = admissible
        .iter()
        .filter(|u| (u.entry(0, 0).norm() - 1.0).abs() <= tol.tol_integer)
        .cloned()
        .collect();
    Ok(MonomialSearch {
        candidates_tested: tested,
        admissible,
        only_identity,
        vacuum_fixing,
    })
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    if p.iter().all(|&x| !std::mem::replace(&mut seen[x], true)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}
