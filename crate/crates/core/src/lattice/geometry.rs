use serde::Serialize;

use super::LatticeError;

/// Largest torus representable with `u64` Pauli masks.
pub const MAX_QUBITS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Horizontal,
    Vertical,
}

/// Edge `Horizontal (c, r)` joins vertices `(c, r)` and `(c+1, r)`;
/// `Vertical (c, r)` joins `(c, r)` and `(c, r+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub kind: EdgeKind,
    pub col: usize,
    pub row: usize,
}

/// Periodic `lx × ly` square lattice with one qubit per edge.
///
/// Horizontal edges are numbered `r·lx + c`, vertical edges
/// `lx·ly + r·lx + c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TorusLattice {
    lx: usize,
    ly: usize,
}

impl TorusLattice {
    pub fn new(lx: usize, ly: usize) -> Result<Self, LatticeError> {
        if lx < 2 || ly < 2 {
            return Err(LatticeError::InvalidDimensions { lx, ly });
        }
        let n = 2 * lx * ly;
        if n > MAX_QUBITS {
            return Err(LatticeError::LatticeTooLarge {
                qubits: n,
                max: MAX_QUBITS,
            });
        }
        Ok(Self { lx, ly })
    }

    pub fn lx(&self) -> usize {
        self.lx
    }

    pub fn ly(&self) -> usize {
        self.ly
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.lx * self.ly
    }

    /// Index of the horizontal edge leaving `(c, r)` to the right (coordinates wrap).
    pub fn h(&self, c: usize, r: usize) -> usize {
        (r % self.ly) * self.lx + (c % self.lx)
    }

    /// Index of the vertical edge leaving `(c, r)` upward (coordinates wrap).
    pub fn v(&self, c: usize, r: usize) -> usize {
        self.lx * self.ly + self.h(c, r)
    }

    pub fn edge(&self, index: usize) -> Edge {
        let cell = self.lx * self.ly;
        assert!(index < 2 * cell, "edge {index} out of range");
        let (kind, rem) = if index < cell {
            (EdgeKind::Horizontal, index)
        } else {
            (EdgeKind::Vertical, index - cell)
        };
        Edge {
            kind,
            col: rem % self.lx,
            row: rem / self.lx,
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n_qubits()).map(|i| self.edge(i))
    }

    /// The four edges incident to vertex `(c, r)`.
    pub fn star(&self, c: usize, r: usize) -> [usize; 4] {
        let cm = (c + self.lx - 1) % self.lx;
        let rm = (r + self.ly - 1) % self.ly;
        [self.h(c, r), self.h(cm, r), self.v(c, r), self.v(c, rm)]
    }

    /// The four boundary edges of the plaquette whose lower-left corner is `(c, r)`.
    pub fn plaquette(&self, c: usize, r: usize) -> [usize; 4] {
        [self.h(c, r), self.h(c, r + 1), self.v(c, r), self.v(c + 1, r)]
    }

    /// Vertices (and plaquettes) in the order `(0,0), (1,0), …`.
    pub fn sites(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.ly).flat_map(move |r| (0..self.lx).map(move |c| (c, r)))
    }

    pub fn star_masks(&self) -> Vec<u64> {
        self.sites().map(|(c, r)| mask_of(&self.star(c, r))).collect()
    }

    pub fn plaquette_masks(&self) -> Vec<u64> {
        self.sites().map(|(c, r)| mask_of(&self.plaquette(c, r))).collect()
    }

    /// Support of `X̄₁`: the vertical primal loop through the edges `v(0, ·)`.
    pub fn x1_support(&self) -> u64 {
        mask_of(&(0..self.ly).map(|r| self.v(0, r)).collect::<Vec<_>>())
    }

    /// Support of `X̄₂`: the horizontal primal loop through `h(·, 0)`.
    pub fn x2_support(&self) -> u64 {
        mask_of(&(0..self.lx).map(|c| self.h(c, 0)).collect::<Vec<_>>())
    }

    /// Support of `Z̄₁`: the horizontal dual loop crossing `v(·, 0)`.
    pub fn z1_support(&self) -> u64 {
        mask_of(&(0..self.lx).map(|c| self.v(c, 0)).collect::<Vec<_>>())
    }

    /// Support of `Z̄₂`: the vertical dual loop crossing `h(0, ·)`.
    pub fn z2_support(&self) -> u64 {
        mask_of(&(0..self.ly).map(|r| self.h(0, r)).collect::<Vec<_>>())
    }

    /// Edges sharing a vertex, each unordered pair once.
    pub fn adjacent_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<(usize, usize)> = self
            .sites()
            .flat_map(|(c, r)| {
                let s = self.star(c, r);
                let mut out = Vec::with_capacity(6);
                for i in 0..4 {
                    for j in i + 1..4 {
                        out.push((s[i].min(s[j]), s[i].max(s[j])));
                    }
                }
                out
            })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }
}

pub fn mask_of(edges: &[usize]) -> u64 {
    edges.iter().fold(0, |m, &e| m | (1u64 << e))
}

pub fn mask_edges(mask: u64) -> Vec<usize> {
    (0..64).filter(|&q| mask >> q & 1 == 1).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum RegionDescriptor {
    ColumnAnnulus(Vec<usize>),
    Explicit,
}

/// A set of edges. Column annuli wrap the torus vertically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeRegion {
    edges: Vec<usize>,
    descriptor: RegionDescriptor,
}

impl EdgeRegion {
    /// All vertical edges of the listed columns plus, for each listed column
    /// `c`, the horizontal edges `h(c, ·)` leaving it to the right. A single
    /// column therefore carries both the primal loop `v(c, ·)` and the dual
    /// loop crossing `h(c, ·)`.
    pub fn column_annulus(lat: &TorusLattice, columns: &[usize]) -> Result<Self, LatticeError> {
        if columns.is_empty() {
            return Err(LatticeError::InvalidRegion("empty column list".into()));
        }
        let mut cols = columns.to_vec();
        cols.sort_unstable();
        cols.dedup();
        if let Some(&c) = cols.iter().find(|&&c| c >= lat.lx()) {
            return Err(LatticeError::InvalidRegion(format!(
                "column {c} outside 0..{}",
                lat.lx()
            )));
        }
        let mut edges: Vec<usize> = cols
            .iter()
            .flat_map(|&c| (0..lat.ly()).flat_map(move |r| [lat.v(c, r), lat.h(c, r)]))
            .collect();
        edges.sort_unstable();
        Ok(Self {
            edges,
            descriptor: RegionDescriptor::ColumnAnnulus(cols),
        })
    }

    pub fn explicit(lat: &TorusLattice, edges: &[usize]) -> Result<Self, LatticeError> {
        let mut edges = edges.to_vec();
        edges.sort_unstable();
        edges.dedup();
        if let Some(&e) = edges.iter().find(|&&e| e >= lat.n_qubits()) {
            return Err(LatticeError::InvalidRegion(format!("edge {e} out of range")));
        }
        Ok(Self {
            edges,
            descriptor: RegionDescriptor::Explicit,
        })
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn mask(&self) -> u64 {
        mask_of(&self.edges)
    }

    pub fn descriptor(&self) -> &RegionDescriptor {
        &self.descriptor
    }

    pub fn columns(&self) -> Option<&[usize]> {
        match &self.descriptor {
            RegionDescriptor::ColumnAnnulus(c) => Some(c),
            RegionDescriptor::Explicit => None,
        }
    }

    /// Number of columns of an annulus; `None` for explicit regions.
    pub fn width(&self) -> Option<usize> {
        self.columns().map(|c| c.len())
    }

    pub fn is_disjoint(&self, other: &EdgeRegion) -> bool {
        self.mask() & other.mask() == 0
    }

    pub fn union(&self, other: &EdgeRegion) -> EdgeRegion {
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        edges.sort_unstable();
        edges.dedup();
        let descriptor = match (&self.descriptor, &other.descriptor) {
            (RegionDescriptor::ColumnAnnulus(a), RegionDescriptor::ColumnAnnulus(b)) => {
                let mut c = a.clone();
                c.extend_from_slice(b);
                c.sort_unstable();
                c.dedup();
                RegionDescriptor::ColumnAnnulus(c)
            }
            _ => RegionDescriptor::Explicit,
        };
        EdgeRegion { edges, descriptor }
    }

    pub fn complement(&self, lat: &TorusLattice) -> EdgeRegion {
        let m = self.mask();
        EdgeRegion {
            edges: (0..lat.n_qubits()).filter(|&q| m >> q & 1 == 0).collect(),
            descriptor: RegionDescriptor::Explicit,
        }
    }

    /// Whether every edge of `mask` lies in the region.
    pub fn contains_mask(&self, mask: u64) -> bool {
        mask & !self.mask() == 0
    }
}

/// Fewest full columns between two column sets going either way round.
pub fn column_gaps(lx: usize, a: &[usize], b: &[usize]) -> (usize, usize) {
    let mut owner = vec![0u8; lx];
    for &c in a {
        owner[c] |= 1;
    }
    for &c in b {
        owner[c] |= 2;
    }
    // walk right from A until B, and right from B until A
    let gap = |from: u8, to: u8| -> usize {
        let mut best = usize::MAX;
        for start in 0..lx {
            if owner[start] & from == 0 || owner[(start + 1) % lx] & from != 0 {
                continue;
            }
            let mut k = 0;
            while k < lx && owner[(start + 1 + k) % lx] == 0 {
                k += 1;
            }
            if owner[(start + 1 + k) % lx] & to != 0 {
                best = best.min(k);
            }
        }
        best
    };
    (gap(1, 2), gap(2, 1))
}
