use super::{MonovexVerdict, PathFinder};
use crate::geom::{Arrangement, SpanComplex};
use crate::num::Coord;

/// Decides monovexity of a complex exactly.
///
/// Every ordered pair of arrangement-cell representative points (which
/// include all in-set cell corners, the zero-dimensional cells) must be
/// joined by a monotone cell walk. Pairs whose representatives differ on
/// every axis are checked through per-orientation reachability closures;
/// pairs agreeing on some axis freeze it and recurse into the slice. The
/// first failing pair, in a fixed deterministic order, is returned as the
/// witness.
pub fn is_monovex<S: Coord>(complex: &SpanComplex<S>) -> MonovexVerdict<S> {
    let finder = PathFinder::new(complex.clone());
    let arr = finder.arrangement();
    let cells = arr.cells();
    if cells.len() <= 1 {
        return MonovexVerdict {
            is_monovex: true,
            witness: None,
        };
    }

    let dim = complex.dim();
    let adjacency = build_adjacency(arr);
    let all: Vec<u32> = (0..cells.len() as u32).collect();
    let active: Vec<usize> = (0..dim).collect();

    match check_region(arr, &adjacency, &all, &active, 0) {
        None => MonovexVerdict {
            is_monovex: true,
            witness: None,
        },
        Some((a, b)) => {
            let x = arr.representative(&cells[a as usize]);
            let y = arr.representative(&cells[b as usize]);
            debug_assert!(finder
                .reachable(&x, &y)
                .expect("reps are in the set")
                .is_none());
            MonovexVerdict {
                is_monovex: false,
                witness: Some((x, y)),
            }
        }
    }
}

/// Directed cell adjacency: for each cell, the face/coface steps, with the
/// per-axis piece deltas (each in {-1, 0, +1}).
struct Adjacency {
    edges: Vec<Vec<(u32, Vec<i8>)>>,
}

fn build_adjacency<S: Coord>(arr: &Arrangement<S>) -> Adjacency {
    let cells = arr.cells();
    let dim = arr.dim();
    let mut edges = Vec::with_capacity(cells.len());
    for cell in cells {
        let mut out = Vec::new();
        for parity in [1u16, 0u16] {
            let movable: Vec<usize> = (0..dim).filter(|&a| cell[a] % 2 == parity).collect();
            if movable.is_empty() {
                continue;
            }
            // each movable axis goes down, up, or stays; at least one moves
            let combos = 3u32.pow(movable.len() as u32);
            for m in 1..combos {
                let mut key = cell.clone();
                let mut delta = vec![0i8; dim];
                let mut rest = m;
                let mut valid = true;
                let mut moved = false;
                for &axis in &movable {
                    let digit = rest % 3;
                    rest /= 3;
                    match digit {
                        0 => {}
                        1 => {
                            key[axis] += 1;
                            delta[axis] = 1;
                            moved = true;
                            if key[axis] >= arr.piece_count(axis) {
                                valid = false;
                                break;
                            }
                        }
                        _ => {
                            if key[axis] == 0 {
                                valid = false;
                                break;
                            }
                            key[axis] -= 1;
                            delta[axis] = -1;
                            moved = true;
                        }
                    }
                }
                if !valid || !moved {
                    continue;
                }
                if let Some(target) = arr.cell_index(&key) {
                    out.push((target, delta));
                }
            }
        }
        edges.push(out);
    }
    Adjacency { edges }
}

/// Checks all representative pairs within the cell subset, with the given
/// axes still active (all others frozen by the enclosing slices). Returns
/// the first failing ordered pair of global cell indices.
fn check_region<S: Coord>(
    arr: &Arrangement<S>,
    adjacency: &Adjacency,
    subset: &[u32],
    active: &[usize],
    slice_from: usize,
) -> Option<(u32, u32)> {
    if subset.len() <= 1 {
        return None;
    }
    if active.is_empty() {
        return None;
    }

    if let Some(pair) = check_strict_pairs(arr, adjacency, subset, active) {
        return Some(pair);
    }

    // pairs agreeing on an active axis: freeze the smallest such axis and
    // recurse into its slices
    for (pos, &axis) in active.iter().enumerate() {
        if axis < slice_from {
            continue;
        }
        let mut groups: std::collections::BTreeMap<u16, Vec<u32>> = Default::default();
        for &c in subset {
            let key = &arr.cells()[c as usize];
            groups.entry(key[axis]).or_default().push(c);
        }
        let remaining: Vec<usize> = active.iter().copied().filter(|&a| a != axis).collect();
        let _ = pos;
        for group in groups.values() {
            if group.len() > 1 {
                if let Some(pair) = check_region(arr, adjacency, group, &remaining, axis + 1) {
                    return Some(pair);
                }
            }
        }
    }
    None
}

/// All ordered pairs of the subset whose pieces differ on every active
/// axis, via one reachability closure per orientation class. Closures are
/// built one orientation at a time so the quadratic bitset footprint is
/// bounded by a single matrix; the reported pair is the smallest failing
/// one across orientations, which keeps the witness deterministic.
fn check_strict_pairs<S: Coord>(
    arr: &Arrangement<S>,
    adjacency: &Adjacency,
    subset: &[u32],
    active: &[usize],
) -> Option<(u32, u32)> {
    let n = subset.len();
    let cells = arr.cells();
    let local: std::collections::HashMap<u32, usize> =
        subset.iter().enumerate().map(|(i, &c)| (c, i)).collect();

    // orientations over the active axes with the first fixed to +1
    let orientation_count = 1usize << (active.len() - 1);
    let words = n.div_ceil(64);
    let mut first_failure: Option<(usize, usize, bool)> = None;

    for o in 0..orientation_count {
        let mut sigma = vec![0i8; arr.dim()];
        for (bit, &axis) in active.iter().enumerate() {
            sigma[axis] = if bit == 0 {
                1
            } else if o & (1 << (bit - 1)) != 0 {
                -1
            } else {
                1
            };
        }

        // topological order: the weighted piece sum strictly increases
        // along every admissible edge
        let mut order: Vec<usize> = (0..n).collect();
        let score = |i: usize| -> i64 {
            let key = &cells[subset[i] as usize];
            active
                .iter()
                .map(|&a| key[a] as i64 * sigma[a] as i64)
                .sum()
        };
        order.sort_by_key(|&i| score(i));

        let mut reach = vec![0u64; n * words];
        for &i in order.iter().rev() {
            let base = i * words;
            reach[base + i / 64] |= 1u64 << (i % 64);
            for (target, delta) in &adjacency.edges[subset[i] as usize] {
                // admissible: inactive axes frozen, active axes follow sigma
                let ok = delta.iter().enumerate().all(|(a, &d)| {
                    if d == 0 {
                        true
                    } else {
                        sigma[a] != 0 && d == sigma[a]
                    }
                });
                if !ok {
                    continue;
                }
                if let Some(&j) = local.get(target) {
                    for w in 0..words {
                        let v = reach[j * words + w];
                        reach[base + w] |= v;
                    }
                }
            }
        }

        // scan this orientation's pairs in index order; the first hit is
        // its minimal failing pair, and only pairs before the best known
        // failure matter
        'scan: for i in 0..n {
            let ki = &cells[subset[i] as usize];
            'pair: for j in (i + 1)..n {
                if let Some((fi, fj, _)) = first_failure {
                    if (i, j) >= (fi, fj) {
                        break 'scan;
                    }
                }
                let kj = &cells[subset[j] as usize];
                let mut orientation = 0usize;
                let mut flip = false;
                for (bit, &axis) in active.iter().enumerate() {
                    let d = kj[axis].cmp(&ki[axis]);
                    if d == std::cmp::Ordering::Equal {
                        continue 'pair; // handled in a slice
                    }
                    let positive = d == std::cmp::Ordering::Greater;
                    if bit == 0 {
                        flip = !positive;
                    } else {
                        let sign_towards_j = positive != flip;
                        if !sign_towards_j {
                            orientation |= 1 << (bit - 1);
                        }
                    }
                }
                if orientation != o {
                    continue;
                }
                // query source -> destination under the normalized orientation
                let (src, dst) = if flip { (j, i) } else { (i, j) };
                if reach[src * words + dst / 64] & (1u64 << (dst % 64)) == 0 {
                    first_failure = Some((i, j, flip));
                    break 'scan;
                }
            }
        }
    }
    first_failure.map(|(i, j, flip)| {
        let (src, dst) = if flip { (j, i) } else { (i, j) };
        (subset[src], subset[dst])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{BoxRegion, Interval, Point};
    use crate::num::Dyadic;

    type P = Point<Dyadic>;

    fn boxes_2d(spec: &[(i64, i64, i64, i64)]) -> SpanComplex<Dyadic> {
        SpanComplex::new(
            2,
            spec.iter()
                .map(|&(x0, y0, x1, y1)| {
                    BoxRegion::closed_from_corners(
                        &P::from_ints(&[x0, y0]),
                        &P::from_ints(&[x1, y1]),
                    )
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn l_shape_is_monovex() {
        let l = boxes_2d(&[(0, 0, 2, 1), (0, 0, 1, 2)]);
        assert!(is_monovex(&l).is_monovex);
    }

    #[test]
    fn s_shape_is_not_monovex() {
        let s = boxes_2d(&[(0, 0, 3, 1), (2, 1, 3, 2), (0, 2, 3, 3)]);
        let verdict = is_monovex(&s);
        assert!(!verdict.is_monovex);
        let (x, y) = verdict.witness.unwrap();
        assert!(super::super::monotone_reachable(&s, &x, &y)
            .unwrap()
            .is_none());
    }

    #[test]
    fn disconnected_slice_detected_through_frozen_axis() {
        // two vertical segments on the same line: every pair freezes axis 0
        let c = SpanComplex::new(
            2,
            vec![
                BoxRegion::new(vec![
                    Interval::point(Dyadic::from(0)),
                    Interval::closed(Dyadic::from(0), Dyadic::from(1)),
                ]),
                BoxRegion::new(vec![
                    Interval::point(Dyadic::from(0)),
                    Interval::closed(Dyadic::from(2), Dyadic::from(3)),
                ]),
            ],
        )
        .unwrap();
        let verdict = is_monovex(&c);
        assert!(!verdict.is_monovex);
    }

    #[test]
    fn corner_touching_squares_are_monovex() {
        let c = boxes_2d(&[(0, 0, 1, 1), (1, 1, 2, 2)]);
        assert!(is_monovex(&c).is_monovex);
    }

    #[test]
    fn empty_and_single_point_are_monovex() {
        assert!(is_monovex(&SpanComplex::<Dyadic>::empty(2)).is_monovex);
        let pt = SpanComplex::from_box(BoxRegion::point_box(&P::from_ints(&[1, 1])));
        assert!(is_monovex(&pt).is_monovex);
    }
}
