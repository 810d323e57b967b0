//! Finite projective closure of matrix groups generated by `S` and `T`,
//! state orbits under such groups, and the doubled-Fibonacci restriction to
//! the complement of the modular-invariant state.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::anyon::{AnyonModel, Letter, ModelKind, ModularWord};
use crate::numerics::{entropy_bits, is_integer, ComplexVec4, NumericsError, UnitaryMat, C64};

/// Matrix-equality tolerance used when deduplicating group elements.
pub const DEDUP_TOL: f64 = 1e-9;
pub const DEFAULT_CAP: usize = 10_000;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("closure exceeded the cap of {cap} elements")]
    CapExceeded {
        cap: usize,
        partial: Box<ProjectiveGroup>,
    },
    #[error("group is not closed; orbits need the full group")]
    GroupNotClosed,
    #[error("no generators supplied")]
    NoGenerators,
    #[error("restricted {which} deviates from the reference matrix by {deviation:.3e}")]
    RestrictionMismatch { which: &'static str, deviation: f64 },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Elements of a finite matrix group up to global phase, each with one
/// shortlex-minimal generator word.
#[derive(Clone, Debug)]
pub struct ProjectiveGroup {
    elements: Vec<UnitaryMat>,
    keys: Vec<Vec<C64>>,
    words: Vec<ModularWord>,
    closed: bool,
    dim: usize,
}

impl ProjectiveGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[UnitaryMat] {
        &self.elements
    }

    pub fn words(&self) -> &[ModularWord] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ModularWord, &UnitaryMat)> {
        self.words.iter().zip(self.elements.iter())
    }

    /// Index of the element projectively equal to `m`, if any.
    pub fn find(&self, m: &UnitaryMat) -> Option<usize> {
        if m.dim() != self.dim {
            return None;
        }
        let key = m.projective_key(DEDUP_TOL);
        self.find_key(&key)
    }

    fn find_key(&self, key: &[C64]) -> Option<usize> {
        self.keys.iter().position(|k| {
            k.iter()
                .zip(key.iter())
                .all(|(a, b)| (a - b).norm() <= DEDUP_TOL)
        })
    }

    /// Numerical group-axiom check: identity present, closure under products
    /// and inverses.
    pub fn verify_axioms(&self) -> GroupAxioms {
        let identity = self.find(&UnitaryMat::identity(self.dim)).is_some();
        let inverses = self
            .elements
            .iter()
            .all(|g| self.find(&g.adjoint()).is_some());
        let products = self.elements.iter().all(|a| {
            self.elements
                .iter()
                .all(|b| self.find(&(a * b)).is_some())
        });
        GroupAxioms {
            identity,
            inverses,
            products,
        }
    }

    pub fn summary(&self, include_words: bool, include_matrices: bool) -> GroupSummary {
        GroupSummary {
            order: self.order(),
            closed: self.closed,
            dim: self.dim,
            words: include_words.then(|| self.words.iter().map(|w| w.symbols()).collect()),
            matrices: include_matrices.then(|| self.elements.clone()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GroupAxioms {
    pub identity: bool,
    pub inverses: bool,
    pub products: bool,
}

impl GroupAxioms {
    pub fn all(&self) -> bool {
        self.identity && self.inverses && self.products
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupSummary {
    pub order: usize,
    pub closed: bool,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub words: Option<Vec<Vec<&'static str>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<UnitaryMat>>,
}

/// Breadth-first closure of the projective group generated by `generators`.
///
/// Products are formed as `element · generator`, frontier elements in
/// discovery order and generators in the order given, so each element's
/// recorded word is the shortlex-minimal word reaching it.
pub fn projective_closure(
    generators: &[(Letter, UnitaryMat)],
    cap: usize,
) -> Result<ProjectiveGroup, GroupError> {
    closure_impl(generators, None, cap)
}

/// Closure truncated at words of length `max_depth`. The result is marked
/// closed only if no product of a deepest element with a generator is new,
/// i.e. the truncation already saturated the group.
pub fn bounded_closure(
    generators: &[(Letter, UnitaryMat)],
    max_depth: usize,
    cap: usize,
) -> Result<ProjectiveGroup, GroupError> {
    closure_impl(generators, Some(max_depth), cap)
}

fn closure_impl(
    generators: &[(Letter, UnitaryMat)],
    max_depth: Option<usize>,
    cap: usize,
) -> Result<ProjectiveGroup, GroupError> {
    let dim = generators.first().ok_or(GroupError::NoGenerators)?.1.dim();
    if let Some((_, g)) = generators.iter().find(|(_, g)| g.dim() != dim) {
        return Err(GroupError::DimensionMismatch {
            expected: dim,
            actual: g.dim(),
        });
    }
    let identity = UnitaryMat::identity(dim);
    let mut group = ProjectiveGroup {
        keys: vec![identity.projective_key(DEDUP_TOL)],
        elements: vec![identity],
        words: vec![ModularWord::empty()],
        closed: false,
        dim,
    };
    let mut frontier = vec![0usize];
    let mut depth = 0usize;
    while !frontier.is_empty() {
        if max_depth.is_some_and(|d| depth >= d) {
            let saturated = frontier.iter().all(|&idx| {
                generators
                    .iter()
                    .all(|(_, g)| group.find(&(&group.elements[idx] * g)).is_some())
            });
            group.closed = saturated;
            return Ok(group);
        }
        let mut next = Vec::new();
        for &idx in &frontier {
            for (letter, g) in generators {
                let product = &group.elements[idx] * g;
                let key = product.projective_key(DEDUP_TOL);
                if group.find_key(&key).is_some() {
                    continue;
                }
                if group.elements.len() >= cap {
                    return Err(GroupError::CapExceeded {
                        cap,
                        partial: Box::new(group),
                    });
                }
                let mut word = group.words[idx].clone();
                word.push(*letter);
                group.elements.push(product);
                group.keys.push(key);
                group.words.push(word);
                next.push(group.elements.len() - 1);
            }
        }
        frontier = next;
        depth += 1;
    }
    group.closed = true;
    Ok(group)
}

/// Projective image of the modular group generated by the model's `S` and `T`.
pub fn modular_group(model: &AnyonModel) -> Result<ProjectiveGroup, GroupError> {
    projective_closure(
        &[(Letter::S, model.s().clone()), (Letter::T, model.t().clone())],
        DEFAULT_CAP,
    )
}

/// The unique modular-invariant doubled-Fibonacci state `(1, 0, 0, 1)/√2`.
pub fn fibonacci_invariant_state() -> ComplexVec4 {
    let h = 1.0 / 2f64.sqrt();
    ComplexVec4::from_real([h, 0.0, 0.0, h])
}

/// Orthonormal basis of the complement `K` of the invariant state, as the
/// columns of a 4×3 isometry: `(τ + τ̄)/√2`, `i(τ̄ − τ)/√2`, `(I − ττ̄)/√2`.
///
/// The middle vector carries the opposite overall sign to `i(τ − τ̄)/√2`; with
/// that sign the restricted `T` has `+sin(4π/5)` above the diagonal, matching
/// the reference display. A basis vector's sign is a pure phase choice.
pub fn fibonacci_complement_basis() -> DMatrix<C64> {
    let h = 1.0 / 2f64.sqrt();
    let z = C64::new(0.0, 0.0);
    let r = C64::new(h, 0.0);
    let i = C64::new(0.0, h);
    DMatrix::from_row_slice(
        4,
        3,
        &[
            z, z, r, //
            r, -i, z, //
            r, i, z, //
            z, z, -r,
        ],
    )
}

/// Reference 3×3 restricted matrices `S|_K`, `T|_K`.
pub fn fibonacci_restricted_reference() -> (DMatrix<C64>, DMatrix<C64>) {
    let a = 1.0 / 5f64.sqrt();
    let b = 2.0 / 5f64.sqrt();
    let s = DMatrix::from_row_slice(
        3,
        3,
        &[a, 0.0, b, 0.0, -1.0, 0.0, b, 0.0, -a],
    )
    .map(|x| C64::new(x, 0.0));
    let th = 4.0 * std::f64::consts::PI / 5.0;
    let (sn, c) = th.sin_cos();
    let t = DMatrix::from_row_slice(3, 3, &[c, sn, 0.0, -sn, c, 0.0, 0.0, 0.0, 1.0])
        .map(|x| C64::new(x, 0.0));
    (s, t)
}

/// `V† U V` for the complement basis `V`; a homomorphism on the modular
/// group since `K` is invariant.
pub fn restrict_to_complement(u: &UnitaryMat) -> Result<UnitaryMat, GroupError> {
    if u.dim() != 4 {
        return Err(GroupError::DimensionMismatch {
            expected: 4,
            actual: u.dim(),
        });
    }
    let v = fibonacci_complement_basis();
    let m = v.adjoint() * u.matrix() * &v;
    Ok(UnitaryMat::new(m, 1e-10)?)
}

/// Restricted doubled-Fibonacci `S|_K` and `T|_K`, checked entrywise against
/// the reference displays within `tol`.
pub fn restricted_matrices(tol: f64) -> Result<(UnitaryMat, UnitaryMat), GroupError> {
    let model = AnyonModel::get(ModelKind::DoubledFibonacci);
    let s = restrict_to_complement(model.s())?;
    let t = restrict_to_complement(model.t())?;
    let (s_ref, t_ref) = fibonacci_restricted_reference();
    for (which, got, want) in [("S", &s, &s_ref), ("T", &t, &t_ref)] {
        let deviation = got
            .matrix()
            .iter()
            .zip(want.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if deviation > tol {
            return Err(GroupError::RestrictionMismatch { which, deviation });
        }
    }
    Ok((s, t))
}

/// Orthonormal basis of `{v : S v = v and T v = v}`.
///
/// Computed as the null space of the Hermitian form
/// `(S − 1)†(S − 1) + (T − 1)†(T − 1)`; eigenvalues at most `tol` count as zero.
pub fn common_unit_eigenspace(
    s: &UnitaryMat,
    t: &UnitaryMat,
    tol: f64,
) -> Result<Vec<DVector<C64>>, GroupError> {
    if s.dim() != t.dim() {
        return Err(GroupError::DimensionMismatch {
            expected: s.dim(),
            actual: t.dim(),
        });
    }
    let d = s.dim();
    let id = DMatrix::<C64>::identity(d, d);
    let a = s.matrix() - &id;
    let b = t.matrix() - &id;
    let form = a.adjoint() * &a + b.adjoint() * &b;
    let (values, vectors) = crate::numerics::hermitian_eigen(&form)?;
    let mut basis: Vec<(usize, DVector<C64>)> = Vec::new();
    for (k, &lambda) in values.iter().enumerate() {
        if lambda.abs() <= tol {
            let col: Vec<C64> = vectors.column(k).iter().copied().collect();
            let canon = crate::numerics::canonical_phase_slice(&col, 1e-9)?;
            basis.push((k, DVector::from_vec(canon)));
        }
    }
    basis.sort_by_key(|(k, _)| *k);
    Ok(basis.into_iter().map(|(_, v)| v).collect())
}

/// Orbit of a 4-amplitude state (read in the `γ_y` basis) under a closed group.
#[derive(Clone, Debug, Serialize)]
pub struct StateOrbit {
    pub states: Vec<ComplexVec4>,
    /// Shortest word producing each orbit state.
    pub words: Vec<ModularWord>,
    /// `γ_y`-basis entropy of each orbit state, bits.
    pub entropies: Vec<f64>,
    pub size: usize,
    pub all_integer_entropy: bool,
}

pub fn orbit(
    state: &ComplexVec4,
    group: &ProjectiveGroup,
    tol_integer: f64,
) -> Result<StateOrbit, GroupError> {
    if !group.is_closed() {
        return Err(GroupError::GroupNotClosed);
    }
    if group.dim() != 4 {
        return Err(GroupError::DimensionMismatch {
            expected: 4,
            actual: group.dim(),
        });
    }
    let start = state.normalized()?;
    let mut states: Vec<ComplexVec4> = Vec::new();
    let mut words = Vec::new();
    for (word, g) in group.iter() {
        let image = g.apply(&start).canonical_phase(1e-12)?;
        if states.iter().any(|s| s.max_abs_diff(&image) <= DEDUP_TOL) {
            continue;
        }
        states.push(image);
        words.push(word.clone());
    }
    let entropies: Vec<f64> = states.iter().map(|s| entropy_bits(&s.probabilities())).collect();
    let all_integer_entropy = entropies
        .iter()
        .all(|&h| is_integer(h, tol_integer).is_integer);
    Ok(StateOrbit {
        size: states.len(),
        states,
        words,
        entropies,
        all_integer_entropy,
    })
}

/// `(|I⟩ + ω²|τ⟩ + ω²|τ̄⟩ + ω|ττ̄⟩)/2`.
pub fn fibonacci_w_state(omega: C64) -> ComplexVec4 {
    let w2 = omega * omega;
    ComplexVec4::new([C64::new(1.0, 0.0), w2, w2, omega]).scale(C64::new(0.5, 0.0))
}

#[derive(Clone, Debug, Serialize)]
pub struct OmegaOrbit {
    /// `ω = exp(2πi k/6)`.
    pub k: u32,
    pub omega: [f64; 2],
    pub primitive: bool,
    pub size: usize,
    pub all_integer_entropy: bool,
}

/// Orbit of the `w` state for each of the six sixth roots of unity.
pub fn omega_sweep(group: &ProjectiveGroup, tol_integer: f64) -> Result<Vec<OmegaOrbit>, GroupError> {
    (0..6u32)
        .map(|k| {
            let omega = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 6.0);
            let orb = orbit(&fibonacci_w_state(omega), group, tol_integer)?;
            Ok(OmegaOrbit {
                k,
                omega: [omega.re, omega.im],
                primitive: k == 1 || k == 5,
                size: orb.size,
                all_integer_entropy: orb.all_integer_entropy,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::TolerancePolicy;

    fn fib() -> &'static AnyonModel {
        AnyonModel::get(ModelKind::DoubledFibonacci)
    }

    fn tc() -> &'static AnyonModel {
        AnyonModel::get(ModelKind::ToricCode)
    }

    #[test]
    fn identity_generator_gives_trivial_group() {
        let g = projective_closure(&[(Letter::S, UnitaryMat::identity(4))], DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.is_closed());
    }

    #[test]
    fn restricted_fibonacci_group_has_sixty_elements() {
        let (s, t) = restricted_matrices(1e-12).unwrap();
        let g = projective_closure(&[(Letter::S, s), (Letter::T, t)], DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 60);
        assert!(g.verify_axioms().all());
    }

    #[test]
    fn full_fibonacci_group_matches_restriction() {
        let g = modular_group(fib()).unwrap();
        assert_eq!(g.order(), 60);
        let (s, t) = restricted_matrices(1e-12).unwrap();
        let k = projective_closure(&[(Letter::S, s), (Letter::T, t)], DEFAULT_CAP).unwrap();
        // restriction is a homomorphism onto the 3x3 group
        let images: Vec<usize> = g
            .elements()
            .iter()
            .map(|e| k.find(&restrict_to_complement(e).unwrap()).expect("image in group"))
            .collect();
        let mut sorted = images.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 60);
        for (i, a) in g.elements().iter().enumerate().step_by(7) {
            for (j, b) in g.elements().iter().enumerate().step_by(5) {
                let ab = restrict_to_complement(&(a * b)).unwrap();
                let prod = k.elements()[images[i]].clone();
                let expect = &prod * &k.elements()[images[j]];
                assert!(ab.projectively_eq(&expect, 1e-9));
            }
        }
    }

    #[test]
    fn toric_code_group_is_finite_and_valid() {
        let g = modular_group(tc()).unwrap();
        assert!(g.is_closed());
        assert!(g.verify_axioms().all());
        // S and T generate a copy of S3 up to phase
        assert_eq!(g.order(), 6);
        // every element is a real signed-permutation-like matrix with entries of modulus 0, 1/2 or 1
        for e in g.elements() {
            for z in e.row_major() {
                let n = z.norm();
                assert!([0.0, 0.5, 1.0].iter().any(|v| (n - v).abs() < 1e-12), "{n}");
            }
        }
    }

    #[test]
    fn bounded_closure_reports_saturation() {
        let gens = [
            (Letter::S, fib().s().clone()),
            (Letter::T, fib().t().clone()),
            (Letter::SInv, fib().s().adjoint()),
            (Letter::TInv, fib().t().adjoint()),
        ];
        let short = bounded_closure(&gens, 3, DEFAULT_CAP).unwrap();
        assert!(!short.is_closed());
        assert!(short.words().iter().all(|w| w.len() <= 3));
        let long = bounded_closure(&gens, 20, DEFAULT_CAP).unwrap();
        assert!(long.is_closed());
        assert_eq!(long.order(), 60);
        let tc_gens = [(Letter::S, tc().s().clone()), (Letter::T, tc().t().clone())];
        assert!(bounded_closure(&tc_gens, 6, DEFAULT_CAP).unwrap().is_closed());
    }

    #[test]
    fn cap_exceeded_returns_partial() {
        match projective_closure(
            &[(Letter::S, fib().s().clone()), (Letter::T, fib().t().clone())],
            10,
        ) {
            Err(GroupError::CapExceeded { cap, partial }) => {
                assert_eq!(cap, 10);
                assert_eq!(partial.order(), 10);
                assert!(!partial.is_closed());
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn restricted_matrix_entries() {
        let (s, t) = restricted_matrices(1e-12).unwrap();
        assert!((s.entry(0, 0).re - 1.0 / 5f64.sqrt()).abs() < 1e-12);
        assert!((t.entry(2, 2).re - 1.0).abs() < 1e-12);
        // real symmetric involution
        for r in 0..3 {
            for c in 0..3 {
                assert!(s.entry(r, c).im.abs() < 1e-12);
                assert!((s.entry(r, c) - s.entry(c, r)).norm() < 1e-12);
            }
        }
        assert!(s.pow(2).max_abs_diff(&UnitaryMat::identity(3)) < 1e-12);
    }

    #[test]
    fn printed_v3_sign_transposes_t_block() {
        // With v3 = i(τ − τ̄)/√2 the off-diagonal of T|_K flips sign.
        let mut v = fibonacci_complement_basis();
        for r in 0..4 {
            v[(r, 1)] = -v[(r, 1)];
        }
        let t = v.adjoint() * fib().t().matrix() * &v;
        let (_, t_ref) = fibonacci_restricted_reference();
        assert!((t[(0, 1)] + t_ref[(0, 1)]).norm() < 1e-12);
        assert!((t[(1, 0)] + t_ref[(1, 0)]).norm() < 1e-12);
    }

    #[test]
    fn fibonacci_common_eigenspace_is_invariant_state() {
        let basis = common_unit_eigenspace(fib().s(), fib().t(), 1e-10).unwrap();
        assert_eq!(basis.len(), 1);
        let v1 = fibonacci_invariant_state();
        for i in 0..4 {
            assert!((basis[0][i] - v1[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn identity_pair_eigenspace_is_everything() {
        let id = UnitaryMat::identity(4);
        assert_eq!(common_unit_eigenspace(&id, &id, 1e-10).unwrap().len(), 4);
    }

    #[test]
    fn toric_code_common_eigenspace_is_fixed_space() {
        let basis = common_unit_eigenspace(tc().s(), tc().t(), 1e-10).unwrap();
        // independent check: each vector is fixed by S and T, and the count
        // matches the rank deficiency of the stacked system
        for v in &basis {
            let sv = tc().s().matrix() * v;
            let tv = tc().t().matrix() * v;
            assert!((sv - v).norm() < 1e-12);
            assert!((tv - v).norm() < 1e-12);
        }
        let id = DMatrix::<C64>::identity(4, 4);
        let mut stacked = DMatrix::<C64>::zeros(8, 4);
        stacked.view_mut((0, 0), (4, 4)).copy_from(&(tc().s().matrix() - &id));
        stacked.view_mut((4, 0), (4, 4)).copy_from(&(tc().t().matrix() - &id));
        let svd = stacked.svd(false, false);
        let rank = svd.singular_values.iter().filter(|&&x| x > 1e-9).count();
        assert_eq!(basis.len(), 4 - rank);
    }

    #[test]
    fn invariant_state_has_trivial_orbit() {
        let g = modular_group(fib()).unwrap();
        let orb = orbit(&fibonacci_invariant_state(), &g, 1e-6).unwrap();
        assert_eq!(orb.size, 1);
    }

    #[test]
    fn primitive_w_orbit_has_twelve_integer_states() {
        let g = modular_group(fib()).unwrap();
        let omega = C64::from_polar(1.0, std::f64::consts::PI / 3.0);
        let orb = orbit(&fibonacci_w_state(omega), &g, 1e-6).unwrap();
        assert_eq!(orb.size, 12);
        assert!(orb.all_integer_entropy);
        for h in &orb.entropies {
            assert!((h - h.round()).abs() < 1e-9);
        }
        assert_eq!(g.order() % orb.size, 0);
    }

    #[test]
    fn omega_sweep_reports_all_roots() {
        let g = modular_group(fib()).unwrap();
        let sweep = omega_sweep(&g, TolerancePolicy::default().tol_integer).unwrap();
        assert_eq!(sweep.len(), 6);
        for o in &sweep {
            assert_eq!(60 % o.size, 0, "orbit-stabilizer");
            if o.primitive {
                assert_eq!(o.size, 12);
                assert!(o.all_integer_entropy);
            }
        }
    }

    #[test]
    fn trivial_group_orbit() {
        let g = projective_closure(&[(Letter::S, UnitaryMat::identity(4))], DEFAULT_CAP).unwrap();
        let s = ComplexVec4::from_real([0.5, 0.5, 0.5, 0.5]);
        assert_eq!(orbit(&s, &g, 1e-6).unwrap().size, 1);
    }

    #[test]
    fn orbit_needs_closed_group() {
        let partial = match projective_closure(
            &[(Letter::S, fib().s().clone()), (Letter::T, fib().t().clone())],
            5,
        ) {
            Err(GroupError::CapExceeded { partial, .. }) => partial,
            _ => unreachable!(),
        };
        assert!(matches!(
            orbit(&ComplexVec4::delta(0), &partial, 1e-6),
            Err(GroupError::GroupNotClosed)
        ));
    }

    #[test]
    fn entropy_is_constant_on_projective_classes() {
        let g = modular_group(fib()).unwrap();
        let s = crate::numerics::haar_state(&mut crate::numerics::RngSeed(11).rng());
        for e in g.elements().iter().take(20) {
            let phased = UnitaryMat::new(
                e.matrix() * C64::from_polar(1.0, 0.731),
                1e-12,
            )
            .unwrap();
            let a = entropy_bits(&e.apply(&s).probabilities());
            let b = entropy_bits(&phased.apply(&s).probabilities());
            assert!((a - b).abs() < 1e-9);
        }
    }
}
