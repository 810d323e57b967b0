//! Anyon-model registry: labels, modular `S` and `T` matrices, and the
//! loop-change convention that maps the three named torus loops to words in
//! the modular generators.
//!
//! Coefficient convention: if `ψ(γ_y)` holds the coefficients of a state in
//! the `γ_y` minimum-entropy basis, then `word_to_matrix(w) · ψ(γ_y)` holds its
//! coefficients in the basis named by `w`. The named loops are
//! `γ_y ↦ ∅`, `γ_x ↦ S` and `γ_xy ↦ S·T`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{NumericsError, UnitaryMat, C64};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnyonError {
    #[error("unknown anyon model `{0}` (known: tc, dfib)")]
    UnknownModel(String),
    #[error("invalid modular word `{0}`")]
    InvalidWord(String),
    #[error("unknown loop `{0}` (known: x, y, xy)")]
    UnknownLoop(String),
    #[error("model data violates an invariant: {0}")]
    InvalidModel(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Golden ratio in double precision.
pub fn golden_ratio() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    /// Z₂ toric code, labels (I, e, m, f).
    #[serde(rename = "tc")]
    ToricCode,
    /// Doubled Fibonacci, labels (I, τ, τ̄, ττ̄).
    #[serde(rename = "dfib")]
    DoubledFibonacci,
}

impl ModelKind {
    pub const ALL: [ModelKind; 2] = [ModelKind::ToricCode, ModelKind::DoubledFibonacci];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::ToricCode => "tc",
            ModelKind::DoubledFibonacci => "dfib",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = AnyonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tc" => Ok(ModelKind::ToricCode),
            "dfib" => Ok(ModelKind::DoubledFibonacci),
            other => Err(AnyonError::UnknownModel(other.to_string())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AnyonModel {
    kind: ModelKind,
    labels: [&'static str; 4],
    s: UnitaryMat,
    t: UnitaryMat,
}

impl AnyonModel {
    fn build(
        kind: ModelKind,
        labels: [&'static str; 4],
        s: DMatrix<C64>,
        t_diag: [C64; 4],
    ) -> Result<Self, AnyonError> {
        let tol = 1e-12;
        let s = UnitaryMat::new(s, tol)?;
        if let Some(z) = t_diag.iter().find(|z| (z.norm() - 1.0).abs() > tol) {
            return Err(AnyonError::InvalidModel(format!(
                "topological spin {z} is not a phase"
            )));
        }
        let t = UnitaryMat::diagonal(&t_diag, tol)?;
        Ok(Self { kind, labels, s, t })
    }

    pub fn toric_code() -> Self {
        let h = C64::new(0.5, 0.0);
        let signs: [f64; 16] = [
            1., 1., 1., 1., //
            1., 1., -1., -1., //
            1., -1., 1., -1., //
            1., -1., -1., 1.,
        ];
        let entries: Vec<C64> = signs.iter().map(|&s| h * s).collect();
        let one = C64::new(1.0, 0.0);
        Self::build(
            ModelKind::ToricCode,
            ["I", "e", "m", "f"],
            DMatrix::from_row_slice(4, 4, &entries),
            [one, one, one, -one],
        )
        .expect("toric-code data is valid")
    }

    pub fn doubled_fibonacci() -> Self {
        let phi = golden_ratio();
        let d = 1.0 + phi * phi;
        let p2 = phi * phi;
        let rows: [f64; 16] = [
            1., phi, phi, p2, //
            phi, -1., p2, -phi, //
            phi, p2, -1., -phi, //
            p2, -phi, -phi, 1.,
        ];
        let entries: Vec<C64> = rows.iter().map(|&x| C64::new(x / d, 0.0)).collect();
        let theta = 4.0 * std::f64::consts::PI / 5.0;
        let one = C64::new(1.0, 0.0);
        Self::build(
            ModelKind::DoubledFibonacci,
            ["I", "tau", "taubar", "tau_taubar"],
            DMatrix::from_row_slice(4, 4, &entries),
            [one, C64::from_polar(1.0, theta), C64::from_polar(1.0, -theta), one],
        )
        .expect("doubled-Fibonacci data is valid")
    }

    /// Shared immutable instance from the registry.
    pub fn get(kind: ModelKind) -> &'static AnyonModel {
        static TC: OnceLock<AnyonModel> = OnceLock::new();
        static DFIB: OnceLock<AnyonModel> = OnceLock::new();
        match kind {
            ModelKind::ToricCode => TC.get_or_init(AnyonModel::toric_code),
            ModelKind::DoubledFibonacci => DFIB.get_or_init(AnyonModel::doubled_fibonacci),
        }
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn labels(&self) -> &[&'static str; 4] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        4
    }

    pub fn s(&self) -> &UnitaryMat {
        &self.s
    }

    pub fn t(&self) -> &UnitaryMat {
        &self.t
    }

    pub fn letter_matrix(&self, letter: Letter) -> UnitaryMat {
        match letter {
            Letter::S => self.s.clone(),
            Letter::T => self.t.clone(),
            Letter::SInv => self.s.adjoint(),
            Letter::TInv => self.t.adjoint(),
        }
    }

    /// Ordered product of the word's letters; the empty word is the identity.
    pub fn word_to_matrix(&self, word: &ModularWord) -> UnitaryMat {
        word.letters()
            .iter()
            .fold(UnitaryMat::identity(self.dim()), |acc, &l| {
                &acc * &self.letter_matrix(l)
            })
    }

    pub fn dump(&self) -> ModelDump {
        ModelDump {
            name: self.name().to_string(),
            labels: self.labels.iter().map(|s| s.to_string()).collect(),
            s: self.s.clone(),
            t: self.t.clone(),
        }
    }
}

/// Looks a model up by its short name.
pub fn get_model(name: &str) -> Result<&'static AnyonModel, AnyonError> {
    Ok(AnyonModel::get(name.parse()?))
}

/// JSON view of a model: labels plus `S` and `T` as row-major `[re, im]` pairs.
#[derive(Clone, Debug, Serialize)]
pub struct ModelDump {
    pub name: String,
    pub labels: Vec<String>,
    #[serde(rename = "S")]
    pub s: UnitaryMat,
    #[serde(rename = "T")]
    pub t: UnitaryMat,
}

/// A modular generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    #[serde(rename = "S")]
    S,
    #[serde(rename = "T")]
    T,
    #[serde(rename = "S^-1")]
    SInv,
    #[serde(rename = "T^-1")]
    TInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::S, Letter::T, Letter::SInv, Letter::TInv];

    pub fn symbol(self) -> &'static str {
        match self {
            Letter::S => "S",
            Letter::T => "T",
            Letter::SInv => "S^-1",
            Letter::TInv => "T^-1",
        }
    }

    pub fn inverse(self) -> Letter {
        match self {
            Letter::S => Letter::SInv,
            Letter::T => Letter::TInv,
            Letter::SInv => Letter::S,
            Letter::TInv => Letter::T,
        }
    }
}

/// A finite word over `{S, T, S⁻¹, T⁻¹}`; the empty word stays in the `γ_y`
/// basis.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ModularWord(Vec<Letter>);

impl ModularWord {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Self(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn concat(&self, other: &ModularWord) -> ModularWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v)
    }

    /// Letters reversed and inverted; its matrix is the inverse matrix.
    pub fn inverse(&self) -> ModularWord {
        Self(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn symbols(&self) -> Vec<&'static str> {
        self.0.iter().map(|l| l.symbol()).collect()
    }
}

impl fmt::Display for ModularWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("∅");
        }
        let parts = self.symbols();
        f.write_str(&parts.join("·"))
    }
}

impl FromStr for ModularWord {
    type Err = AnyonError;

    /// Accepts `""`, `"e"` or `"∅"` for the empty word, otherwise letters
    /// `S`, `T`, `S^-1`, `T^-1` (also `s`, `t`, `S'`, `T'`) optionally separated
    /// by commas, spaces or `·`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        if trimmed.is_empty() || trimmed == "e" || trimmed == "∅" || trimmed == "id" {
            return Ok(Self::empty());
        }
        let mut letters = Vec::new();
        let chars: Vec<char> = trimmed.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let base = match c {
                'S' | 's' => Letter::S,
                'T' | 't' => Letter::T,
                ',' | ' ' | '·' | '*' => {
                    i += 1;
                    continue;
                }
                _ => return Err(AnyonError::InvalidWord(s.to_string())),
            };
            i += 1;
            let rest: String = chars[i..].iter().collect();
            let inverse = if rest.starts_with("^-1") {
                i += 3;
                true
            } else if rest.starts_with('\'') {
                i += 1;
                true
            } else {
                false
            };
            letters.push(if inverse { base.inverse() } else { base });
        }
        Ok(Self(letters))
    }
}

/// The three inequivalent non-contractible loops on the torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Loop {
    #[serde(rename = "gamma_x")]
    X,
    #[serde(rename = "gamma_y")]
    Y,
    #[serde(rename = "gamma_xy")]
    XY,
}

impl Loop {
    pub const ALL: [Loop; 3] = [Loop::X, Loop::Y, Loop::XY];

    /// Word whose matrix sends `γ_y` coefficients to this loop's coefficients.
    pub fn word(self) -> ModularWord {
        match self {
            Loop::Y => ModularWord::empty(),
            Loop::X => ModularWord::new(vec![Letter::S]),
            Loop::XY => ModularWord::new(vec![Letter::S, Letter::T]),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Loop::X => "gamma_x",
            Loop::Y => "gamma_y",
            Loop::XY => "gamma_xy",
        }
    }
}

impl fmt::Display for Loop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Loop {
    type Err = AnyonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().trim_start_matches("gamma_").trim_start_matches("gamma") {
            "x" => Ok(Loop::X),
            "y" => Ok(Loop::Y),
            "xy" => Ok(Loop::XY),
            _ => Err(AnyonError::UnknownLoop(s.to_string())),
        }
    }
}

/// A basis label: one of the named loops or an arbitrary word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LoopLabel {
    Named(Loop),
    Word(ModularWord),
}

impl LoopLabel {
    pub fn word(&self) -> ModularWord {
        match self {
            LoopLabel::Named(l) => l.word(),
            LoopLabel::Word(w) => w.clone(),
        }
    }
}

impl From<Loop> for LoopLabel {
    fn from(l: Loop) -> Self {
        LoopLabel::Named(l)
    }
}

impl From<ModularWord> for LoopLabel {
    fn from(w: ModularWord) -> Self {
        LoopLabel::Word(w)
    }
}

/// Word for a named loop.
pub fn loop_word(tag: Loop) -> ModularWord {
    tag.word()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn close(a: C64, b: f64) -> bool {
        (a - C64::new(b, 0.0)).norm() < 1e-14
    }

    #[test]
    fn toric_code_data() {
        let m = get_model("tc").unwrap();
        assert_eq!(m.labels(), &["I", "e", "m", "f"]);
        assert!(close(m.s().entry(0, 0), 0.5));
        let t = m.t();
        for (i, &v) in [1.0, 1.0, 1.0, -1.0].iter().enumerate() {
            assert!(close(t.entry(i, i), v));
        }
        assert!(t.is_diagonal(TOL));
        for r in 0..4 {
            for c in 0..4 {
                assert!((m.s().entry(r, c).norm() - 0.5).abs() < 1e-15);
            }
        }
        let id = UnitaryMat::identity(4);
        assert!(m.s().pow(2).max_abs_diff(&id) < TOL);
        assert!(m.t().pow(2).max_abs_diff(&id) < TOL);
    }

    #[test]
    fn fibonacci_data() {
        let m = get_model("dfib").unwrap();
        let phi = golden_ratio();
        assert!(close(m.s().entry(0, 0), 1.0 / (1.0 + phi * phi)));
        assert!((m.s().entry(0, 0).re - 0.276_393_202_250_021).abs() < 1e-14);
        let theta = 4.0 * std::f64::consts::PI / 5.0;
        assert!((m.t().entry(1, 1) - C64::from_polar(1.0, theta)).norm() < 1e-15);
        let id = UnitaryMat::identity(4);
        assert!(m.s().pow(2).max_abs_diff(&id) < TOL);
        assert!(m.t().pow(5).max_abs_diff(&id) < TOL);
        assert!((m.s() * &m.s().adjoint()).max_abs_diff(&id) < TOL);
        for c in 0..4 {
            let col: f64 = (0..4).map(|r| m.s().entry(r, c).norm_sqr()).sum();
            assert!((col - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn unknown_model() {
        assert_eq!(
            get_model("xyz").unwrap_err(),
            AnyonError::UnknownModel("xyz".into())
        );
    }

    #[test]
    fn word_matrices() {
        let m = get_model("tc").unwrap();
        let id = m.word_to_matrix(&ModularWord::empty());
        assert!(id.max_abs_diff(&UnitaryMat::identity(4)) < TOL);
        let s = m.word_to_matrix(&Loop::X.word());
        assert!(s.max_abs_diff(m.s()) < TOL);
        let st = m.word_to_matrix(&Loop::XY.word());
        assert!(st.max_abs_diff(&(m.s() * m.t())) < TOL);
        let w: ModularWord = "S T^-1 S".parse().unwrap();
        let inv = m.word_to_matrix(&w.inverse());
        assert!((&m.word_to_matrix(&w) * &inv).max_abs_diff(&UnitaryMat::identity(4)) < TOL);
    }

    #[test]
    fn loop_words() {
        assert_eq!(loop_word(Loop::Y), ModularWord::empty());
        assert_eq!(loop_word(Loop::X), ModularWord::new(vec![Letter::S]));
        assert_eq!(loop_word(Loop::XY), ModularWord::new(vec![Letter::S, Letter::T]));
    }

    #[test]
    fn word_parsing() {
        assert_eq!("".parse::<ModularWord>().unwrap(), ModularWord::empty());
        assert_eq!(
            "ST".parse::<ModularWord>().unwrap(),
            ModularWord::new(vec![Letter::S, Letter::T])
        );
        assert_eq!(
            "S,T^-1,S'".parse::<ModularWord>().unwrap(),
            ModularWord::new(vec![Letter::S, Letter::TInv, Letter::SInv])
        );
        assert!("SX".parse::<ModularWord>().is_err());
        assert_eq!("xy".parse::<Loop>().unwrap(), Loop::XY);
        assert_eq!("gamma_x".parse::<Loop>().unwrap(), Loop::X);
    }

    #[test]
    fn dump_is_row_major_pairs() {
        let json = serde_json::to_value(get_model("tc").unwrap().dump()).unwrap();
        assert_eq!(json["labels"][3], "f");
        assert_eq!(json["S"][1][2][0], -0.5);
        assert_eq!(json["T"][3][3][0], -1.0);
        assert_eq!(json["S"].as_array().unwrap().len(), 4);
    }
}
