//! Conservative line-of-sight between cell centers.

use crate::grid::CellIndex;

use super::CellSet;

/// Visits every cell the segment between the centers of `a` and `b`
/// touches, in order. Where the segment passes exactly through a lattice
/// corner all four cells around it are visited. Stops early when `f` returns
/// false and reports whether the walk completed.
pub fn walk_supercover(a: CellIndex, b: CellIndex, mut f: impl FnMut(CellIndex) -> bool) -> bool {
    if !f(a) {
        return false;
    }
    let (dx, dy) = (b.i - a.i, b.j - a.j);
    let (nx, ny) = (dx.abs(), dy.abs());
    let (sx, sy) = (dx.signum(), dy.signum());
    let (mut i, mut j) = (a.i, a.j);
    let (mut ix, mut iy) = (0, 0);
    while ix < nx || iy < ny {
        // Compare the parameters at which the next vertical and horizontal
        // cell edges are crossed.
        let tx = (1 + 2 * ix) * ny;
        let ty = (1 + 2 * iy) * nx;
        if tx == ty {
            if !f(CellIndex::new(i + sx, j)) || !f(CellIndex::new(i, j + sy)) {
                return false;
            }
            i += sx;
            j += sy;
            ix += 1;
            iy += 1;
        } else if tx < ty {
            i += sx;
            ix += 1;
        } else {
            j += sy;
            iy += 1;
        }
        if !f(CellIndex::new(i, j)) {
            return false;
        }
    }
    true
}

pub fn supercover(a: CellIndex, b: CellIndex) -> Vec<CellIndex> {
    let mut out = Vec::new();
    walk_supercover(a, b, |c| {
        out.push(c);
        true
    });
    out
}

/// Whether every cell touched by the segment is a member.
pub fn visible<M: CellSet>(m: &M, a: CellIndex, b: CellIndex) -> bool {
    walk_supercover(a, b, |c| m.is_member(c))
}
