use std::fmt;
use std::ops::Mul;

use serde::Serialize;

use crate::numerics::C64;

/// `i^phase · X^x · Z^z` on up to 64 qubits (bit `q` of a mask is qubit `q`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PauliString {
    pub x: u64,
    pub z: u64,
    /// Exponent of `i`, taken mod 4.
    pub phase: u8,
}

impl PauliString {
    pub const IDENTITY: PauliString = PauliString {
        x: 0,
        z: 0,
        phase: 0,
    };

    pub fn new(x: u64, z: u64, phase: u8) -> Self {
        Self {
            x,
            z,
            phase: phase % 4,
        }
    }

    pub fn x_on(mask: u64) -> Self {
        Self::new(mask, 0, 0)
    }

    pub fn z_on(mask: u64) -> Self {
        Self::new(0, mask, 0)
    }

    pub fn negated(self) -> Self {
        Self::new(self.x, self.z, self.phase + 2)
    }

    pub fn with_sign(self, negative: bool) -> Self {
        if negative {
            self.negated()
        } else {
            self
        }
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// Hermitian iff the phase cancels the `i` carried by each `XZ = -iY` factor.
    pub fn is_hermitian(&self) -> bool {
        (self.phase as u32 + (self.x & self.z).count_ones()) % 2 == 0
    }

    /// Sign relative to the Hermitian representative, for Hermitian strings
    /// without `Y` factors.
    pub fn is_negative(&self) -> bool {
        self.phase == 2
    }

    fn scalar(&self) -> C64 {
        [
            C64::new(1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, -1.0),
        ][self.phase as usize]
    }

    /// `out = P · input` for a state of `input.len() = 2^n` amplitudes.
    pub fn apply(&self, input: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); input.len()];
        let c = self.scalar();
        for (b, &a) in input.iter().enumerate() {
            let sign = if (self.z & b as u64).count_ones() % 2 == 1 {
                -c
            } else {
                c
            };
            out[b ^ self.x as usize] = sign * a;
        }
        out
    }

    pub fn expectation(&self, state: &[C64]) -> C64 {
        let c = self.scalar();
        state
            .iter()
            .enumerate()
            .map(|(b, &a)| {
                let sign = if (self.z & b as u64).count_ones() % 2 == 1 {
                    -c
                } else {
                    c
                };
                state[b ^ self.x as usize].conj() * sign * a
            })
            .sum()
    }

    /// In-place `v ← (v + P v)/2`, the projector onto the `+1` eigenspace of
    /// a Hermitian `P`.
    pub fn project_plus(&self, v: &mut [C64]) {
        let pv = self.apply(v);
        for (a, b) in v.iter_mut().zip(pv) {
            *a = (*a + b) * 0.5;
        }
    }

    pub fn label(&self, n: usize) -> String {
        let sign = ["+", "+i", "-", "-i"][self.phase as usize];
        let body: String = (0..n)
            .map(|q| match (self.x >> q & 1, self.z >> q & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (0, 1) => 'Z',
                _ => 'Y',
            })
            .collect();
        format!("{sign}{body}")
    }
}

impl Mul for PauliString {
    type Output = PauliString;

    fn mul(self, rhs: PauliString) -> PauliString {
        // Z^{z1} X^{x2} = (-1)^{|z1 & x2|} X^{x2} Z^{z1}
        let swap = 2 * ((self.z & rhs.x).count_ones() % 2) as u8;
        PauliString::new(self.x ^ rhs.x, self.z ^ rhs.z, self.phase + rhs.phase + swap)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = 64 - self.support().leading_zeros() as usize;
        f.write_str(&self.label(n.max(1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense(p: &PauliString, n: usize) -> Vec<Vec<C64>> {
        (0..1usize << n)
            .map(|b| {
                let mut e = vec![C64::new(0.0, 0.0); 1 << n];
                e[b] = C64::new(1.0, 0.0);
                p.apply(&e)
            })
            .collect()
    }

    #[test]
    fn single_qubit_algebra() {
        let x = PauliString::x_on(1);
        let z = PauliString::z_on(1);
        let xz = x * z;
        let zx = z * x;
        assert_eq!(xz.x, 1);
        assert_eq!(xz.z, 1);
        assert_eq!(zx.phase, (xz.phase + 2) % 4);
        assert!(!x.commutes_with(&z));
        // Y = i X Z
        let y = PauliString::new(1, 1, 1);
        assert!(y.is_hermitian());
        assert_eq!(y * y, PauliString::IDENTITY);
        let v = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        let yv = y.apply(&v);
        assert!((yv[1] - C64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn labels() {
        assert_eq!(PauliString::new(0b01, 0b10, 2).label(2), "-XZ");
        assert_eq!(PauliString::new(0b1, 0b1, 1).to_string(), "+iY");
    }

    #[test]
    fn projector_is_idempotent() {
        let p = PauliString::x_on(0b11);
        let mut v = vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
        p.project_plus(&mut v);
        let once = v.clone();
        p.project_plus(&mut v);
        assert_eq!(once, v);
        assert!((p.expectation(&v) - C64::new(0.5, 0.0)).norm() < 1e-15);
    }

    fn pauli3() -> impl Strategy<Value = PauliString> {
        (0u64..8, 0u64..8, 0u8..4).prop_map(|(x, z, k)| PauliString::new(x, z, k))
    }

    proptest! {
        #[test]
        fn product_matches_matrix_product(a in pauli3(), b in pauli3()) {
            let n = 3;
            let ab = dense(&(a * b), n);
            let da = dense(&a, n);
            for (col, e_b) in dense(&b, n).iter().enumerate() {
                // (a·b) e_col = a (b e_col)
                let mut lhs = vec![C64::new(0.0, 0.0); 1 << n];
                for (k, &c) in e_b.iter().enumerate() {
                    for (r, &v) in da[k].iter().enumerate() {
                        lhs[r] += c * v;
                    }
                }
                for r in 0..1 << n {
                    prop_assert!((lhs[r] - ab[col][r]).norm() < 1e-12);
                }
            }
            prop_assert_eq!(a.commutes_with(&b), (a * b) == (b * a));
        }
    }
}
