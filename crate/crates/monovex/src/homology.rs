//! Cubical homology over GF(2): the independent topological oracle.
//!
//! A closed, lattice-aligned box union is turned into the set of
//! elementary cubes it contains (all dimensions, face-closed by
//! construction), boundary matrices are assembled over GF(2), and Betti
//! numbers come from sparse column reduction. GF(2) suffices here: the
//! only obstruction these sets exhibit is the circle class, and ranks
//! detect it without orientation bookkeeping.

use std::collections::{BTreeSet, HashMap};

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::geom::{GeomError, Lattice, SpanComplex};
use crate::num::Dyadic;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomologyError {
    #[error("input complex must be closed (all interval ends closed)")]
    NotClosed,
    #[error("box endpoint {0} is not aligned to the grid")]
    NotAligned(String),
    #[error("boundary-of-boundary is nonzero at cube {0:?}")]
    BoundarySquare(Cube),
    #[error(
        "Euler characteristic mismatch: cells give {from_cells}, Betti numbers give {from_betti}"
    )]
    EulerMismatch { from_cells: i64, from_betti: i64 },
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

/// An elementary cube of the grid: anchor indices plus the bitmask of
/// extended axes. Canonical cell identity.
pub type Cube = (Vec<i64>, u32);

/// Elementary-cube chain complex of a lattice-aligned closed box union.
#[derive(Clone, Debug)]
pub struct CubicalComplex {
    dim: usize,
    /// cells grouped by geometric dimension, each sorted
    cells: Vec<Vec<Cube>>,
    index: Vec<HashMap<Cube, u32>>,
}

impl CubicalComplex {
    /// All elementary cubes of the grid contained in the union. The input
    /// must be closed and every box endpoint must lie on the grid.
    pub fn from_complex(
        a: &SpanComplex<Dyadic>,
        grid: &Lattice<Dyadic>,
    ) -> Result<Self, HomologyError> {
        let dim = a.dim();
        if grid.dim() != dim {
            return Err(GeomError::DimensionMismatch {
                expected: dim,
                got: grid.dim(),
            }
            .into());
        }
        if !a.is_closed() {
            return Err(HomologyError::NotClosed);
        }
        for b in a.boxes() {
            for (axis, iv) in b.intervals().iter().enumerate() {
                for end in [iv.lo(), iv.hi()] {
                    if !grid.on_axis(axis, end) {
                        return Err(HomologyError::NotAligned(end.to_string()));
                    }
                }
            }
        }

        // aligned boxes are unions of whole grid cubes, so a cube lies in
        // the union iff it lies in a single box
        let mut sets: Vec<BTreeSet<Cube>> = vec![BTreeSet::new(); dim + 1];
        for b in a.boxes() {
            let lo: Vec<i64> = (0..dim)
                .map(|axis| grid.floor_index(axis, b.interval(axis).lo()))
                .collect();
            let hi: Vec<i64> = (0..dim)
                .map(|axis| grid.floor_index(axis, b.interval(axis).hi()))
                .collect();
            for mask in 0u32..(1 << dim) {
                // anchor ranges: extended axes need k..=k+1 inside the box
                let ranges: Vec<(i64, i64)> = (0..dim)
                    .map(|axis| {
                        if mask & (1 << axis) != 0 {
                            (lo[axis], hi[axis] - 1)
                        } else {
                            (lo[axis], hi[axis])
                        }
                    })
                    .collect();
                if ranges.iter().any(|&(l, h)| l > h) {
                    continue;
                }
                let l = mask.count_ones() as usize;
                let mut anchor: Vec<i64> = ranges.iter().map(|&(l, _)| l).collect();
                'outer: loop {
                    sets[l].insert((anchor.clone(), mask));
                    for axis in (0..dim).rev() {
                        if anchor[axis] < ranges[axis].1 {
                            anchor[axis] += 1;
                            for (a2, slot) in anchor.iter_mut().enumerate().skip(axis + 1) {
                                *slot = ranges[a2].0;
                            }
                            continue 'outer;
                        }
                    }
                    break;
                }
            }
        }

        let cells: Vec<Vec<Cube>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = cells
            .iter()
            .map(|list| {
                list.iter()
                    .enumerate()
                    .map(|(i, c)| (c.clone(), i as u32))
                    .collect()
            })
            .collect();
        let complex = CubicalComplex { dim, cells, index };
        debug_assert!(complex.is_face_closed());
        Ok(complex)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cell_count(&self, k: usize) -> usize {
        self.cells.get(k).map_or(0, Vec::len)
    }

    pub fn cells(&self, k: usize) -> &[Cube] {
        &self.cells[k]
    }

    fn is_face_closed(&self) -> bool {
        for k in 1..=self.dim {
            for cube in &self.cells[k] {
                for face in faces(cube) {
                    if !self.index[k - 1].contains_key(&face) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Boundary matrix from `k`-cells to `(k-1)`-cells over GF(2), sparse
    /// columns of row indices.
    pub fn boundary_matrix(&self, k: usize) -> BoundaryMatrix {
        if k == 0 || k > self.dim {
            return BoundaryMatrix {
                rows: self.cell_count(k.wrapping_sub(1)),
                columns: vec![Vec::new(); self.cell_count(k)],
            };
        }
        let columns = self.cells[k]
            .iter()
            .map(|cube| {
                let mut rows: Vec<u32> = faces(cube)
                    .into_iter()
                    .map(|f| self.index[k - 1][&f])
                    .collect();
                rows.sort_unstable();
                rows
            })
            .collect();
        BoundaryMatrix {
            rows: self.cell_count(k - 1),
            columns,
        }
    }

    /// Checks that consecutive boundaries compose to zero.
    pub fn verify_boundary_square(&self) -> Result<(), HomologyError> {
        for k in 2..=self.dim {
            for cube in &self.cells[k] {
                let mut count: HashMap<Cube, u32> = HashMap::new();
                for f in faces(cube) {
                    for ff in faces(&f) {
                        *count.entry(ff).or_insert(0) += 1;
                    }
                }
                if count.values().any(|&c| c % 2 != 0) {
                    return Err(HomologyError::BoundarySquare(cube.clone()));
                }
            }
        }
        Ok(())
    }

    /// Betti numbers over GF(2), cross-checked against the Euler
    /// characteristic computed from raw cell counts.
    pub fn betti_numbers(&self) -> Result<Vec<usize>, HomologyError> {
        self.verify_boundary_square()?;
        let mut ranks = Vec::with_capacity(self.dim + 2);
        ranks.push(0usize); // rank of the zero map out of 0-cells
        for k in 1..=self.dim {
            ranks.push(self.boundary_matrix(k).rank());
        }
        ranks.push(0); // above top dimension

        let betti: Vec<usize> = (0..=self.dim)
            .map(|k| self.cell_count(k) - ranks[k] - ranks[k + 1])
            .collect();

        let from_cells: i64 = (0..=self.dim)
            .map(|k| {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                sign * self.cell_count(k).to_i64().expect("cell counts fit i64")
            })
            .sum();
        let from_betti: i64 = betti
            .iter()
            .enumerate()
            .map(|(k, &b)| {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                sign * b.to_i64().expect("betti numbers fit i64")
            })
            .sum();
        if from_cells != from_betti {
            return Err(HomologyError::EulerMismatch {
                from_cells,
                from_betti,
            });
        }
        Ok(betti)
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dim)
            .map(|k| {
                let sign = if k % 2 == 0 { 1i64 } else { -1 };
                sign * self.cell_count(k) as i64
            })
            .sum()
    }
}

/// The `2k` faces of a `k`-cube: drop one extended axis at either end.
fn faces(cube: &Cube) -> Vec<Cube> {
    let (anchor, mask) = cube;
    let mut out = Vec::new();
    for axis in 0..anchor.len() {
        let bit = 1u32 << axis;
        if mask & bit != 0 {
            let low = (anchor.clone(), mask & !bit);
            let mut shifted = anchor.clone();
            shifted[axis] += 1;
            let high = (shifted, mask & !bit);
            out.push(low);
            out.push(high);
        }
    }
    out
}

/// Sparse GF(2) boundary matrix; columns list their nonzero row indices.
#[derive(Clone, Debug, Serialize)]
pub struct BoundaryMatrix {
    pub rows: usize,
    pub columns: Vec<Vec<u32>>,
}

impl BoundaryMatrix {
    /// Rank by column reduction: each column is reduced against the
    /// columns owning smaller pivots until it claims a pivot row or
    /// vanishes.
    pub fn rank(&self) -> usize {
        let mut pivot_owner: HashMap<u32, usize> = HashMap::new();
        let mut reduced: Vec<Vec<u32>> = Vec::with_capacity(self.columns.len());
        for col in &self.columns {
            let mut cur = col.clone();
            while let Some(&low) = cur.last() {
                match pivot_owner.get(&low) {
                    Some(&owner) => cur = xor_sparse(&cur, &reduced[owner]),
                    None => {
                        pivot_owner.insert(low, reduced.len());
                        break;
                    }
                }
            }
            reduced.push(cur);
        }
        pivot_owner.len()
    }
}

/// Symmetric difference of two sorted index vectors.
fn xor_sparse(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(&x), Some(&y)) if x < y => {
                out.push(x);
                i += 1;
            }
            (Some(_), Some(&y)) => {
                out.push(y);
                j += 1;
            }
            (Some(&x), None) => {
                out.push(x);
                i += 1;
            }
            (None, Some(&y)) => {
                out.push(y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Betti report as exposed by the command-line surface.
#[derive(Clone, Debug, Serialize)]
pub struct BettiReport {
    pub betti: Vec<usize>,
    pub cell_counts: Vec<usize>,
    pub euler_characteristic: i64,
}

/// Convenience wrapper: build the cubical complex and return its report.
pub fn betti_report(
    a: &SpanComplex<Dyadic>,
    grid: &Lattice<Dyadic>,
) -> Result<BettiReport, HomologyError> {
    let complex = CubicalComplex::from_complex(a, grid)?;
    let betti = complex.betti_numbers()?;
    Ok(BettiReport {
        cell_counts: (0..=complex.dim()).map(|k| complex.cell_count(k)).collect(),
        euler_characteristic: complex.euler_characteristic(),
        betti,
    })
}

/// The finest power-of-two grid step (not below `2^-max_exp`) aligning
/// every endpoint of the complex, for a sensible default grid.
pub fn inferred_grid(a: &SpanComplex<Dyadic>, max_exp: u32) -> Option<Lattice<Dyadic>> {
    let mut exp = 0u32;
    for b in a.boxes() {
        for iv in b.intervals() {
            for end in [iv.lo(), iv.hi()] {
                exp = exp.max(end.exponent());
            }
        }
    }
    if exp > max_exp {
        return None;
    }
    Some(Lattice::uniform(a.dim(), Dyadic::pow2(-(exp as i32))))
}
