use nalgebra::DMatrix;
use serde::Serialize;

use super::geometry::{column_gaps, EdgeRegion, TorusLattice};
use super::pauli::PauliString;
use super::statevector::{build_logical_basis, encode_with_basis, reduced_density_matrix, reduced_transition};
use super::tableau::build_mes_tableaus;
use super::LatticeError;
use crate::numerics::{ComplexVec4, RngSeed, C64};

#[derive(Clone, Debug, Serialize)]
pub struct BlockFactorization {
    /// `‖ρ_AB − Σ_a |ψ_a|² ρ_A^a ⊗ ρ_B^a‖_max`.
    pub residual: f64,
    /// Largest `‖ρ_AB^a − ρ_A^a ⊗ ρ_B^a‖_max` over the four MES.
    pub sector_residual: f64,
    /// Largest `‖Tr_C |a⟩⟨b|‖_max` over `a ≠ b`.
    pub off_diagonal: f64,
    /// `|⟨a;γ_y|ψ⟩|²` from the MES statevectors.
    pub coefficient_weights: [f64; 4],
    /// `⟨ψ|P_a|ψ⟩` with `P_a` built from the loop pair inside `A`.
    pub sector_weights: [f64; 4],
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Checks that the reduced state of two separated column annuli is block
/// diagonal in the MES sectors and factorizes within each sector.
///
/// `coeffs` are logical-basis amplitudes.
pub fn verify_block_factorization(
    coeffs: &ComplexVec4,
    lat: &TorusLattice,
    a: &EdgeRegion,
    b: &EdgeRegion,
    tol_norm: f64,
) -> Result<BlockFactorization, LatticeError> {
    let (ca, cb) = match (a.columns(), b.columns()) {
        (Some(ca), Some(cb)) => (ca, cb),
        _ => {
            return Err(LatticeError::InvalidRegion(
                "block factorization needs column annuli".into(),
            ))
        }
    };
    if !a.is_disjoint(b) {
        return Err(LatticeError::OverlappingRegions);
    }
    let (left, right) = column_gaps(lat.lx(), ca, cb);
    if left < 1 || right < 1 {
        return Err(LatticeError::RegionsNotSeparated { left, right });
    }
    let basis = build_logical_basis(lat)?;
    let psi = encode_with_basis(&basis, coeffs, tol_norm)?;
    let mes: Vec<_> = build_mes_tableaus(lat)?
        .iter()
        .enumerate()
        .map(|(k, t)| t.to_statevector(lat, RngSeed(0x6d65_7300 + k as u64)))
        .collect::<Result<_, _>>()?;

    let ab: Vec<usize> = a.edges().iter().chain(b.edges()).copied().collect();
    let mut sector_residual: f64 = 0.0;
    let mut off_diagonal: f64 = 0.0;
    let mut products = Vec::with_capacity(4);
    for (i, s) in mes.iter().enumerate() {
        let rho_ab = reduced_density_matrix(s, &ab);
        // row index of ρ_AB is a_bits + 2^|A| · b_bits
        let prod = reduced_density_matrix(s, b.edges()).kronecker(&reduced_density_matrix(s, a.edges()));
        sector_residual = sector_residual.max(max_abs(&(&rho_ab - &prod)));
        products.push(prod);
        for (j, t) in mes.iter().enumerate() {
            if i != j {
                off_diagonal = off_diagonal.max(max_abs(&reduced_transition(s, t, &ab)));
            }
        }
    }
    let coefficient_weights = [0, 1, 2, 3].map(|k| mes[k].inner(&psi).norm_sqr());
    let mut model = DMatrix::<C64>::zeros(1 << ab.len(), 1 << ab.len());
    for (w, p) in coefficient_weights.iter().zip(&products) {
        model += p * C64::new(*w, 0.0);
    }
    let residual = max_abs(&(reduced_density_matrix(&psi, &ab) - model));

    // loop pair of the leftmost column of A, supported inside A
    let c0 = ca[0];
    let xa = PauliString::x_on((0..lat.ly()).fold(0, |m, r| m | 1u64 << lat.v(c0, r)));
    let za = PauliString::z_on((0..lat.ly()).fold(0, |m, r| m | 1u64 << lat.h(c0, r)));
    debug_assert!(a.contains_mask(xa.support() | za.support()));
    let ex = psi.expectation(&xa).re;
    let ez = psi.expectation(&za).re;
    let exz = psi.expectation(&(xa * za)).re;
    let sector_weights = [0usize, 1, 2, 3].map(|k| {
        let s1 = if k & 1 == 1 { -1.0 } else { 1.0 };
        let s2 = if k & 2 == 2 { -1.0 } else { 1.0 };
        (1.0 + s1 * ex + s2 * ez + s1 * s2 * exz) / 4.0
    });

    Ok(BlockFactorization {
        residual,
        sector_residual,
        off_diagonal,
        coefficient_weights,
        sector_weights,
    })
}
