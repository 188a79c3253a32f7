//! Reflex vertices of a traced boundary loop.

use crate::grid::CellIndex;

use super::{CellSet, IntersectionBorder};

/// Loop vertices with interior angle above pi.
///
/// Collinear runs are collapsed first; a vertex is reflex when the turn from
/// its incoming to its outgoing direction goes against the loop orientation.
/// An inner corner of a rectilinear region is traced as two 45 degree reflex
/// turns around a single diagonal step; such a pair is reported as the member
/// cell in the corner between them when there is one.
pub fn concave_points<M: CellSet>(border: &IntersectionBorder, m: &M) -> Vec<CellIndex> {
    let cells = &border.cells;
    let n = cells.len();
    if n < 3 || border.doubled_area() == 0 {
        return Vec::new();
    }
    let orientation = if border.doubled_area() < 0 { 1 } else { -1 };
    let step = |k: usize| {
        let a = cells[k % n];
        let b = cells[(k + 1) % n];
        (b.i - a.i, b.j - a.j)
    };
    // (loop index, incoming, outgoing) for every direction change.
    let mut corners = Vec::new();
    for k in 0..n {
        let d_in = step(k + n - 1);
        let d_out = step(k);
        if d_in != d_out {
            corners.push((k, d_in, d_out));
        }
    }
    let cross = |a: (isize, isize), b: (isize, isize)| a.0 * b.1 - a.1 * b.0;
    let reflex: Vec<bool> = corners.iter().map(|&(_, a, b)| cross(a, b) * orientation > 0).collect();

    let count = corners.len();
    let pairs = |idx: usize| {
        let next = (idx + 1) % count;
        let (k, _, d_out) = corners[idx];
        count > 1
            && reflex[idx]
            && reflex[next]
            && d_out.0 != 0
            && d_out.1 != 0
            && corners[next].0 == (k + 1) % n
    };
    // Start on a corner that does not close a pair begun by its predecessor.
    let first = (0..count).find(|&idx| !pairs((idx + count - 1) % count)).unwrap_or(0);
    let mut out: Vec<CellIndex> = Vec::new();
    let mut consumed = vec![false; count];
    for offset in 0..count {
        let idx = (first + offset) % count;
        if consumed[idx] || !reflex[idx] {
            continue;
        }
        consumed[idx] = true;
        let (k, _, d_out) = corners[idx];
        let next = (idx + 1) % count;
        let found = if pairs(idx) && !consumed[next] {
            consumed[next] = true;
            let a = cells[k];
            match [a.offset(d_out.0, 0), a.offset(0, d_out.1)].into_iter().find(|c| m.is_member(*c)) {
                Some(c) => vec![c],
                None => vec![a, cells[corners[next].0]],
            }
        } else {
            vec![cells[k]]
        };
        for c in found {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out
}
