//! Visibility graph over start, goal and concave border points.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::grid::CellIndex;

use super::{visible, CellSet};

/// Node 0 is the start, node 1 the goal, the rest are concave points.
#[derive(Debug, Clone)]
pub struct VisibilityGraph {
    pub nodes: Vec<CellIndex>,
    /// Adjacency lists with Euclidean edge lengths in cells.
    pub edges: Vec<Vec<(usize, f64)>>,
}

fn length(a: CellIndex, b: CellIndex) -> f64 {
    (((a.i - b.i) * (a.i - b.i) + (a.j - b.j) * (a.j - b.j)) as f64).sqrt()
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl VisibilityGraph {
    pub fn build<M: CellSet>(m: &M, start: CellIndex, goal: CellIndex, concave: &[CellIndex]) -> Self {
        let mut nodes = vec![start, goal];
        nodes.extend(concave.iter().filter(|c| **c != start && **c != goal).copied());
        let n = nodes.len();
        let mut edges = vec![Vec::new(); n];
        for a in 0..n {
            for b in a + 1..n {
                if visible(m, nodes[a], nodes[b]) {
                    let d = length(nodes[a], nodes[b]);
                    edges[a].push((b, d));
                    edges[b].push((a, d));
                }
            }
        }
        Self { nodes, edges }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges[a].iter().any(|(n, _)| *n == b)
    }

    /// A* from start to goal with the straight-line heuristic. Returns the
    /// node cells along the path.
    pub fn shortest_path(&self) -> Option<Vec<CellIndex>> {
        let goal = self.nodes[1];
        let n = self.nodes.len();
        let mut best = vec![f64::INFINITY; n];
        let mut parent = vec![usize::MAX; n];
        let mut heap = BinaryHeap::new();
        best[0] = 0.0;
        heap.push(Entry(length(self.nodes[0], goal), 0));
        while let Some(Entry(_, u)) = heap.pop() {
            if u == 1 {
                let mut path = vec![self.nodes[1]];
                let mut cur = 1;
                while parent[cur] != usize::MAX {
                    cur = parent[cur];
                    path.push(self.nodes[cur]);
                }
                path.reverse();
                return Some(path);
            }
            for &(v, d) in &self.edges[u] {
                let cand = best[u] + d;
                if cand < best[v] {
                    best[v] = cand;
                    parent[v] = u;
                    heap.push(Entry(cand + length(self.nodes[v], goal), v));
                }
            }
        }
        None
    }
}

/// Total Euclidean length of a cell polyline, in cells.
pub fn polyline_length(path: &[CellIndex]) -> f64 {
    path.windows(2).map(|w| length(w[0], w[1])).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridGeometry;
    use crate::reach::{concave_points, trace_border, BoolGrid};

    #[test]
    fn direct_edge_gives_single_segment() {
        let g = GridGeometry::new(1.0, [0.0, 0.0], 10, 10).unwrap();
        let m = BoolGrid::from_fn(g, |_| true);
        let graph = VisibilityGraph::build(&m, CellIndex::new(1, 1), CellIndex::new(8, 5), &[]);
        assert_eq!(graph.shortest_path().unwrap().len(), 2);
    }

    #[test]
    fn l_path_through_corner() {
        let g = GridGeometry::new(1.0, [0.0, 0.0], 12, 12).unwrap();
        // L: bottom arm j in 1..=3, left arm i in 1..=3.
        let m = BoolGrid::from_fn(g, |c| (1..=10).contains(&c.i) && (1..=3).contains(&c.j) || (1..=3).contains(&c.i) && (1..=10).contains(&c.j));
        let border = trace_border(&m, CellIndex::new(5, 2)).unwrap();
        let concave = concave_points(&border, &m);
        assert_eq!(concave, vec![CellIndex::new(3, 3)]);
        let graph = VisibilityGraph::build(&m, CellIndex::new(10, 2), CellIndex::new(2, 10), &concave);
        let path = graph.shortest_path().unwrap();
        assert_eq!(path, vec![CellIndex::new(10, 2), CellIndex::new(3, 3), CellIndex::new(2, 10)]);
    }
}
