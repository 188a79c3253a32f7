//! Moore-neighbor boundary tracing of the component containing a seed cell.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::grid::{CellIndex, MOORE_CLOCKWISE};

use super::CellSet;

/// Closed boundary loop of member cells, clockwise (x right, y up). The
/// first cell is not repeated at the end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntersectionBorder {
    pub cells: Vec<CellIndex>,
    /// Fewer than three cells or zero enclosed area.
    pub degenerate: bool,
    /// Some traced loop steps diagonally between two non-member cells, so
    /// consecutive loop cells are not necessarily edge-connected.
    pub pinched: bool,
    /// Hole boundaries passed while searching for the outer boundary.
    pub holes_skipped: usize,
}

impl IntersectionBorder {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Twice the signed area of the loop polygon through cell centers
    /// (negative for clockwise loops).
    pub fn doubled_area(&self) -> i64 {
        doubled_area(&self.cells)
    }

    /// Winding number of the loop around the center of `c`. Only meaningful
    /// for cells that are not on the loop.
    pub fn winding(&self, c: CellIndex) -> i32 {
        winding(&self.cells, c)
    }
}

fn doubled_area(cells: &[CellIndex]) -> i64 {
    let n = cells.len();
    (0..n)
        .map(|k| {
            let a = cells[k];
            let b = cells[(k + 1) % n];
            (a.i * b.j - b.i * a.j) as i64
        })
        .sum()
}

fn winding(cells: &[CellIndex], p: CellIndex) -> i32 {
    let n = cells.len();
    let mut w = 0;
    for k in 0..n {
        let a = cells[k];
        let b = cells[(k + 1) % n];
        let side = (b.i - a.i) * (p.j - a.j) - (p.i - a.i) * (b.j - a.j);
        if a.j <= p.j {
            if b.j > p.j && side > 0 {
                w += 1;
            }
        } else if b.j <= p.j && side < 0 {
            w -= 1;
        }
    }
    w
}

fn direction_index(d: (isize, isize)) -> usize {
    MOORE_CLOCKWISE.iter().position(|m| *m == d).expect("unit neighbor offset")
}

/// One Moore trace starting at `start`, whose +x neighbor is not a member.
/// Stops when the first step repeats. Returns the loop and whether it pinches.
fn moore_trace<M: CellSet>(m: &M, start: CellIndex) -> (Vec<CellIndex>, bool) {
    let mut cells = vec![start];
    let mut cur = start;
    let mut back = 0usize;
    let mut first_step: Option<CellIndex> = None;
    let cap = 4 * m.geometry().len() + 16;
    for _ in 0..cap {
        let Some(d) = (1..=8).map(|k| (back + k) % 8).find(|&d| {
            let (di, dj) = MOORE_CLOCKWISE[d];
            m.is_member(cur.offset(di, dj))
        }) else {
            return (cells, false);
        };
        let (di, dj) = MOORE_CLOCKWISE[d];
        let next = cur.offset(di, dj);
        if cur == start {
            match first_step {
                Some(s) if s == next => {
                    cells.pop();
                    break;
                }
                None => first_step = Some(next),
                _ => {}
            }
        }
        let (pi, pj) = MOORE_CLOCKWISE[(d + 7) % 8];
        let previous = cur.offset(pi, pj);
        back = direction_index((previous.i - next.i, previous.j - next.j));
        cells.push(next);
        cur = next;
    }
    let pinched = has_pinch(m, &cells);
    (cells, pinched)
}

fn has_pinch<M: CellSet>(m: &M, cells: &[CellIndex]) -> bool {
    let n = cells.len();
    if n < 2 {
        return false;
    }
    (0..n).any(|k| {
        let a = cells[k];
        let b = cells[(k + 1) % n];
        let (di, dj) = (b.i - a.i, b.j - a.j);
        di != 0 && dj != 0 && !m.is_member(a.offset(di, 0)) && !m.is_member(a.offset(0, dj))
    })
}

/// Outer boundary of the 8-connected component containing `seed`.
///
/// The trace starts at the last member reached by marching from `seed` in +x.
/// A loop that is not clockwise or does not enclose the seed bounds a hole or
/// another component; the march then continues past it.
pub fn trace_border<M: CellSet>(m: &M, seed: CellIndex) -> Result<IntersectionBorder> {
    if !m.is_member(seed) {
        return Err(invalid(format!("border seed ({}, {}) is not a region member", seed.i, seed.j)));
    }
    let g = m.geometry();
    let mut cursor = seed;
    let mut holes_skipped = 0;
    let mut pinched = false;
    loop {
        while m.is_member(cursor.offset(1, 0)) {
            cursor = cursor.offset(1, 0);
        }
        let (cells, loop_pinched) = moore_trace(m, cursor);
        let area = doubled_area(&cells);
        let on_loop = cells.contains(&seed);
        let accept = if cells.len() < 3 || area == 0 {
            on_loop
        } else {
            area < 0 && (on_loop || winding(&cells, seed) != 0)
        };
        if accept {
            let degenerate = cells.len() < 3 || area == 0;
            return Ok(IntersectionBorder { cells, degenerate, pinched: pinched || loop_pinched, holes_skipped });
        }
        pinched |= loop_pinched;
        holes_skipped += 1;
        cursor = cursor.offset(1, 0);
        while !m.is_member(cursor) {
            if cursor.i >= g.rows as isize {
                // Unreachable for a consistent membership oracle.
                return Ok(IntersectionBorder { cells: vec![seed], degenerate: true, pinched: true, holes_skipped });
            }
            cursor = cursor.offset(1, 0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridGeometry;
    use crate::reach::BoolGrid;

    fn grid_from(rows: &[&str]) -> BoolGrid {
        // Text rows are printed top (high j) to bottom; columns are i.
        let cols = rows.len();
        let width = rows[0].len();
        let g = GridGeometry::new(1.0, [0.0, 0.0], width, cols).unwrap();
        BoolGrid::from_fn(g, |c| rows[cols - 1 - c.j as usize].as_bytes()[c.i as usize] == b'#')
    }

    #[test]
    fn full_rectangle_perimeter() {
        let g = GridGeometry::new(1.0, [0.0, 0.0], 7, 5).unwrap();
        let m = BoolGrid::from_fn(g, |_| true);
        let b = trace_border(&m, CellIndex::new(3, 2)).unwrap();
        assert_eq!(b.len(), 2 * 7 + 2 * 5 - 4);
        assert!(b.doubled_area() < 0);
        assert!(!b.degenerate && !b.pinched);
    }

    #[test]
    fn block_3x3() {
        let m = grid_from(&[".....", ".###.", ".###.", ".###.", "....."]);
        let b = trace_border(&m, CellIndex::new(2, 2)).unwrap();
        assert_eq!(b.len(), 8);
        assert!(!b.cells.contains(&CellIndex::new(2, 2)));
    }

    #[test]
    fn single_cell_is_degenerate() {
        let m = grid_from(&["...", ".#.", "..."]);
        let b = trace_border(&m, CellIndex::new(1, 1)).unwrap();
        assert!(b.degenerate);
        assert_eq!(b.cells, vec![CellIndex::new(1, 1)]);
    }

    #[test]
    fn non_member_seed_is_an_error() {
        let m = grid_from(&["...", ".#.", "..."]);
        assert!(trace_border(&m, CellIndex::new(0, 0)).is_err());
    }

    #[test]
    fn hole_is_skipped() {
        let m = grid_from(&[
            "#########",
            "#########",
            "##...####",
            "##...####",
            "#########",
            "#########",
        ]);
        // Seed just left of the hole: the first loop found is the hole's.
        let b = trace_border(&m, CellIndex::new(0, 3)).unwrap();
        assert_eq!(b.holes_skipped, 1);
        assert_eq!(b.len(), 2 * 9 + 2 * 6 - 4);
    }

    #[test]
    fn island_in_hole_is_skipped() {
        let m = grid_from(&[
            "###########",
            "#.........#",
            "#..###....#",
            "#..###....#",
            "#.........#",
            "###########",
        ]);
        let b = trace_border(&m, CellIndex::new(0, 2)).unwrap();
        assert_eq!(b.len(), 2 * 11 + 2 * 6 - 4);
        assert!(b.holes_skipped >= 2);
    }

    #[test]
    fn diagonal_pinch_is_flagged() {
        let m = grid_from(&["......", ".##...", ".##...", "...##.", "...##.", "......"]);
        let b = trace_border(&m, CellIndex::new(1, 3)).unwrap();
        assert!(b.pinched);
        // The two touching corner cells are visited on the way out and back.
        assert_eq!(b.len(), 10);
        let mut distinct = b.cells.clone();
        distinct.sort_by_key(|c| (c.i, c.j));
        distinct.dedup();
        assert_eq!(distinct.len(), 8);
    }

    #[test]
    fn loop_cells_touch_non_members() {
        let m = grid_from(&[
            "..........",
            ".####.###.",
            ".########.",
            ".##..####.",
            ".#######..",
            "....###...",
        ]);
        let b = trace_border(&m, CellIndex::new(2, 2)).unwrap();
        for c in &b.cells {
            assert!(m.is_member(*c));
            assert!(MOORE_CLOCKWISE.iter().any(|(di, dj)| !m.is_member(c.offset(*di, *dj))));
        }
    }
}
