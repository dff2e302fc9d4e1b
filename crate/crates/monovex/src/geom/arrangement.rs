use std::collections::{HashMap, HashSet};

use super::{BoxRegion, Interval, Point, SpanComplex};
use crate::num::Coord;

/// Cell identifier: one piece index per axis. On an axis with breakpoints
/// `b_0 < b_1 < ...`, piece `2k` is the point `{b_k}` and piece `2k+1` the
/// open interval `(b_k, b_{k+1})`.
pub type CellKey = Vec<u16>;

/// The endpoint arrangement of a box complex: per-axis breakpoints and the
/// set of cells (products of points and open intervals) lying inside the
/// union. Membership of any point in the union is decided by locating its
/// cell. Built once and shared by reachability queries.
#[derive(Clone, Debug)]
pub struct Arrangement<S> {
    dim: usize,
    breakpoints: Vec<Vec<S>>,
    cells: Vec<CellKey>,
    index: HashMap<CellKey, u32>,
}

impl<S: Coord> Arrangement<S> {
    pub fn build(complex: &SpanComplex<S>) -> Self {
        let dim = complex.dim();
        let mut breakpoints: Vec<Vec<S>> = vec![Vec::new(); dim];
        for b in complex.boxes() {
            for (axis, iv) in b.intervals().iter().enumerate() {
                breakpoints[axis].push(iv.lo().clone());
                breakpoints[axis].push(iv.hi().clone());
            }
        }
        for bp in &mut breakpoints {
            bp.sort();
            bp.dedup();
        }

        // Enumerate in-cells box by box: a cell lies inside a box iff each
        // of its pieces is inside the corresponding interval, so the union
        // of the per-box products is exactly the set of in-cells.
        let mut set: HashSet<CellKey> = HashSet::new();
        for b in complex.boxes() {
            let ranges: Vec<(u16, u16)> = b
                .intervals()
                .iter()
                .enumerate()
                .map(|(axis, iv)| {
                    let lo_idx = breakpoints[axis].binary_search(iv.lo()).expect("endpoint") as u16;
                    let hi_idx = breakpoints[axis].binary_search(iv.hi()).expect("endpoint") as u16;
                    let start = if iv.lo_closed() {
                        2 * lo_idx
                    } else {
                        2 * lo_idx + 1
                    };
                    let end = if iv.hi_closed() {
                        2 * hi_idx
                    } else {
                        2 * hi_idx - 1
                    };
                    (start, end)
                })
                .collect();
            let mut key: CellKey = ranges.iter().map(|&(s, _)| s).collect();
            'outer: loop {
                set.insert(key.clone());
                for axis in (0..dim).rev() {
                    if key[axis] < ranges[axis].1 {
                        key[axis] += 1;
                        for (a, slot) in key.iter_mut().enumerate().skip(axis + 1) {
                            *slot = ranges[a].0;
                        }
                        continue 'outer;
                    }
                }
                break;
            }
        }

        let mut cells: Vec<CellKey> = set.into_iter().collect();
        cells.sort();
        let index = cells
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i as u32))
            .collect();
        Arrangement {
            dim,
            breakpoints,
            cells,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn breakpoints(&self, axis: usize) -> &[S] {
        &self.breakpoints[axis]
    }

    pub fn cells(&self) -> &[CellKey] {
        &self.cells
    }

    pub fn cell_index(&self, key: &CellKey) -> Option<u32> {
        self.index.get(key).copied()
    }

    /// Number of pieces on an axis (`2·breakpoints − 1`), zero when the
    /// axis has no breakpoints at all.
    pub fn piece_count(&self, axis: usize) -> u16 {
        let n = self.breakpoints[axis].len() as u16;
        if n == 0 {
            0
        } else {
            2 * n - 1
        }
    }

    /// Piece index of a coordinate value, `None` outside the breakpoint
    /// hull of the axis.
    pub fn piece_of(&self, axis: usize, v: &S) -> Option<u16> {
        let bp = &self.breakpoints[axis];
        if bp.is_empty() {
            return None;
        }
        match bp.binary_search(v) {
            Ok(k) => Some(2 * k as u16),
            Err(pos) => {
                if pos == 0 || pos == bp.len() {
                    None
                } else {
                    Some(2 * pos as u16 - 1)
                }
            }
        }
    }

    pub fn cell_of(&self, p: &Point<S>) -> Option<CellKey> {
        let mut key = Vec::with_capacity(self.dim);
        for axis in 0..self.dim {
            key.push(self.piece_of(axis, p.coord(axis))?);
        }
        Some(key)
    }

    /// Exact membership of a point in the underlying union.
    pub fn contains_point(&self, p: &Point<S>) -> bool {
        match self.cell_of(p) {
            Some(key) => self.index.contains_key(&key),
            None => false,
        }
    }

    pub fn is_in_cell(&self, key: &CellKey) -> bool {
        self.index.contains_key(key)
    }

    /// Canonical interior point of a cell: the breakpoint on point pieces,
    /// the midpoint on open pieces.
    pub fn representative(&self, key: &CellKey) -> Point<S> {
        Point::new(
            key.iter()
                .enumerate()
                .map(|(axis, &p)| self.piece_representative(axis, p))
                .collect(),
        )
    }

    pub fn piece_representative(&self, axis: usize, piece: u16) -> S {
        let bp = &self.breakpoints[axis];
        if piece.is_multiple_of(2) {
            bp[(piece / 2) as usize].clone()
        } else {
            S::midpoint(&bp[(piece / 2) as usize], &bp[(piece / 2 + 1) as usize])
        }
    }

    /// The piece as an interval.
    pub fn piece_interval(&self, axis: usize, piece: u16) -> Interval<S> {
        let bp = &self.breakpoints[axis];
        if piece.is_multiple_of(2) {
            Interval::point(bp[(piece / 2) as usize].clone())
        } else {
            Interval::open(
                bp[(piece / 2) as usize].clone(),
                bp[(piece / 2 + 1) as usize].clone(),
            )
            .expect("breakpoints strictly sorted")
        }
    }

    pub fn cell_box(&self, key: &CellKey) -> BoxRegion<S> {
        BoxRegion::new(
            key.iter()
                .enumerate()
                .map(|(axis, &p)| self.piece_interval(axis, p))
                .collect(),
        )
    }

    /// Geometric dimension of a cell (number of open pieces).
    pub fn cell_dim(&self, key: &CellKey) -> usize {
        key.iter().filter(|&&p| p % 2 == 1).count()
    }
}
