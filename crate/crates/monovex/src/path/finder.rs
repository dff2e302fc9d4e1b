use std::collections::{HashMap, VecDeque};

use super::{MonotonePath, PathError, SignPattern};
use crate::geom::{Arrangement, CellKey, Point, SpanComplex};
use crate::num::Coord;

/// Reachability engine over one complex: holds the endpoint arrangement so
/// repeated queries share it.
#[derive(Clone)]
pub struct PathFinder<S> {
    complex: SpanComplex<S>,
    arr: Arrangement<S>,
}

impl<S: Coord> std::fmt::Debug for PathFinder<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PathFinder({} cells)", self.arr.cells().len())
    }
}

impl<S: Coord> PathFinder<S> {
    pub fn new(complex: SpanComplex<S>) -> Self {
        let arr = Arrangement::build(&complex);
        PathFinder { complex, arr }
    }

    pub fn complex(&self) -> &SpanComplex<S> {
        &self.complex
    }

    pub fn arrangement(&self) -> &Arrangement<S> {
        &self.arr
    }

    pub fn contains(&self, p: &Point<S>) -> bool {
        self.arr.contains_point(p)
    }

    /// Monotone path from `x` to `y`, or `None` when no monotone cell walk
    /// exists. Deterministic: among shortest walks the lexicographically
    /// smallest cell sequence is realized.
    pub fn reachable(
        &self,
        x: &Point<S>,
        y: &Point<S>,
    ) -> Result<Option<MonotonePath<S>>, PathError> {
        if x.dim() != self.complex.dim() || !self.contains(x) {
            return Err(PathError::EndpointOutsideComplex(format!("{x:?}")));
        }
        if y.dim() != self.complex.dim() || !self.contains(y) {
            return Err(PathError::EndpointOutsideComplex(format!("{y:?}")));
        }
        if x == y {
            return Ok(Some(MonotonePath::constant(x.clone())));
        }

        let sigma = SignPattern::between(x, y);
        let start = self.arr.cell_of(x).expect("contained point has a cell");
        let goal = self.arr.cell_of(y).expect("contained point has a cell");

        // Piece range per axis: monotone walks stay within the pieces
        // spanned by the endpoints (the b-hull restriction).
        let ranges: Vec<(u16, u16)> = start
            .iter()
            .zip(&goal)
            .map(|(&a, &b)| (a.min(b), a.max(b)))
            .collect();

        let Some(walk) = self.search(&start, &goal, &sigma, &ranges) else {
            return Ok(None);
        };
        let path = self.realize(&walk, x, y, &sigma);
        debug_assert!(
            super::validate_monotone(&path, &self.complex),
            "realized path failed validation"
        );
        Ok(Some(path))
    }

    /// BFS over the cell graph. Distances are computed from the goal over
    /// reversed edges; the walk is then rebuilt greedily from the start,
    /// always taking the smallest admissible next cell.
    fn search(
        &self,
        start: &CellKey,
        goal: &CellKey,
        sigma: &SignPattern,
        ranges: &[(u16, u16)],
    ) -> Option<Vec<CellKey>> {
        let mut dist: HashMap<CellKey, u32> = HashMap::new();
        dist.insert(goal.clone(), 0);
        let mut queue = VecDeque::new();
        queue.push_back(goal.clone());
        let reversed: Vec<i8> = sigma.signs().iter().map(|s| -s).collect();
        while let Some(cell) = queue.pop_front() {
            if cell == *start {
                break;
            }
            let d = dist[&cell];
            for next in self.neighbors(&cell, &reversed, ranges) {
                if !dist.contains_key(&next) {
                    dist.insert(next.clone(), d + 1);
                    queue.push_back(next);
                }
            }
        }
        let total = *dist.get(start)?;

        let mut walk = Vec::with_capacity(total as usize + 1);
        walk.push(start.clone());
        let mut cur = start.clone();
        let mut remaining = total;
        while remaining > 0 {
            let mut next_cells = self.neighbors(&cur, sigma.signs(), ranges);
            next_cells.retain(|c| dist.get(c) == Some(&(remaining - 1)));
            next_cells.sort();
            cur = next_cells
                .into_iter()
                .next()
                .expect("distance map guarantees a predecessor");
            walk.push(cur.clone());
            remaining -= 1;
        }
        Some(walk)
    }

    /// Face and coface steps from a cell: a single step either moves a
    /// nonempty set of open pieces to adjacent breakpoints (into a face) or
    /// a nonempty set of breakpoint pieces into adjacent open pieces (into
    /// a coface). Mixed steps factor through the shared lower cell. Every
    /// per-axis move follows the sign pattern, stays within the piece
    /// ranges, and the target cell must lie inside the union.
    fn neighbors(&self, cell: &CellKey, signs: &[i8], ranges: &[(u16, u16)]) -> Vec<CellKey> {
        let dim = cell.len();
        let mut out = Vec::new();
        for parity in [1u16, 0u16] {
            // axes eligible to move in this phase (1 = faces of open pieces,
            // 0 = cofaces of point pieces)
            let movable: Vec<usize> = (0..dim)
                .filter(|&a| {
                    cell[a] % 2 == parity && signs[a] != 0 && {
                        let target = if signs[a] > 0 {
                            cell[a].checked_add(1)
                        } else {
                            cell[a].checked_sub(1)
                        };
                        match target {
                            Some(t) => t >= ranges[a].0 && t <= ranges[a].1,
                            None => false,
                        }
                    }
                })
                .collect();
            if movable.is_empty() {
                continue;
            }
            // all nonempty subsets of the movable axes
            for mask in 1u32..(1u32 << movable.len()) {
                let mut key = cell.clone();
                for (bit, &axis) in movable.iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        if signs[axis] > 0 {
                            key[axis] += 1;
                        } else {
                            key[axis] -= 1;
                        }
                    }
                }
                if self.arr.is_in_cell(&key) {
                    out.push(key);
                }
            }
        }
        out
    }

    /// Turns a cell walk into concrete waypoints: one point per
    /// intermediate cell, lying exactly in that cell (strictly inside open
    /// pieces), with every coordinate monotone from `x` to `y`.
    fn realize(
        &self,
        walk: &[CellKey],
        x: &Point<S>,
        y: &Point<S>,
        sigma: &SignPattern,
    ) -> MonotonePath<S> {
        let dim = x.dim();
        let mut waypoints: Vec<Point<S>> = Vec::with_capacity(walk.len());
        waypoints.push(x.clone());
        let mut cur: Vec<S> = x.coords().to_vec();

        for (k, cell) in walk.iter().enumerate().skip(1) {
            if k == walk.len() - 1 {
                break;
            }
            let mut coords = Vec::with_capacity(dim);
            for axis in 0..dim {
                let piece = cell[axis];
                let value = if piece % 2 == 0 {
                    self.arr.piece_representative(axis, piece)
                } else {
                    let lo = self.arr.breakpoints(axis)[(piece / 2) as usize].clone();
                    let hi = self.arr.breakpoints(axis)[(piece / 2 + 1) as usize].clone();
                    match sigma.sign(axis) {
                        0 => cur[axis].clone(),
                        1 => {
                            if cur[axis] > lo {
                                cur[axis].clone()
                            } else if self.next_pin(walk, k, axis) == Some(hi.clone()) {
                                S::midpoint(&lo, &hi)
                            } else {
                                y.coord(axis).clone()
                            }
                        }
                        _ => {
                            if cur[axis] < hi {
                                cur[axis].clone()
                            } else if self.next_pin(walk, k, axis) == Some(lo.clone()) {
                                S::midpoint(&lo, &hi)
                            } else {
                                y.coord(axis).clone()
                            }
                        }
                    }
                };
                coords.push(value);
            }
            cur = coords.clone();
            let p = Point::new(coords);
            if waypoints.last() != Some(&p) {
                waypoints.push(p);
            }
        }
        if waypoints.last() != Some(y) {
            waypoints.push(y.clone());
        }
        MonotonePath::new(waypoints).expect("realized walk is monotone by construction")
    }

    /// The next breakpoint the walk pins on the axis at or after step `k`,
    /// or `None` when the axis is never pinned again (the coordinate is
    /// free to take its final value).
    fn next_pin(&self, walk: &[CellKey], k: usize, axis: usize) -> Option<S> {
        walk[k..].iter().find_map(|cell| {
            if cell[axis] % 2 == 0 {
                Some(self.arr.breakpoints(axis)[(cell[axis] / 2) as usize].clone())
            } else {
                None
            }
        })
    }
}
