//! Distances and metric invariants of an undirected graph, by breadth-first
//! search from every vertex.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::regular::UnderlyingGraph;
use crate::ring::ProductRing;

const UNREACHED: u16 = u16::MAX;

/// All-pairs hop counts plus the invariants derived from them.
///
/// Eccentricities are taken over finite distances only; radius, diameter and
/// center are reported for connected graphs only.
#[derive(Clone, Debug, Serialize)]
pub struct MetricReport {
    #[serde(serialize_with = "serialize_matrix")]
    #[serde(rename = "distances")]
    matrix: DistanceMatrix,
    eccentricities: Vec<u32>,
    radius: Option<u32>,
    diameter: Option<u32>,
    center: Vec<usize>,
    connected: bool,
}

#[derive(Clone, Debug)]
struct DistanceMatrix {
    n: usize,
    cells: Vec<u16>,
}

fn serialize_matrix<S: Serializer>(m: &DistanceMatrix, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(m.n))?;
    for row in m.cells.chunks(m.n.max(1)).take(m.n) {
        let row: Vec<Option<u16>> = row.iter().map(|&d| (d != UNREACHED).then_some(d)).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

impl MetricReport {
    pub fn len(&self) -> usize {
        self.matrix.n
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.n == 0
    }

    /// Hop count between `a` and `b`; `None` when no path exists.
    pub fn distance(&self, a: usize, b: usize) -> Option<u32> {
        let d = self.matrix.cells[a * self.matrix.n + b];
        (d != UNREACHED).then_some(d as u32)
    }

    pub fn eccentricity(&self, v: usize) -> u32 {
        self.eccentricities[v]
    }

    pub fn eccentricities(&self) -> &[u32] {
        &self.eccentricities
    }

    pub fn radius(&self) -> Option<u32> {
        self.radius
    }

    pub fn diameter(&self) -> Option<u32> {
        self.diameter
    }

    pub fn center(&self) -> &[usize] {
        &self.center
    }

    pub fn is_central(&self, v: usize) -> bool {
        self.center.binary_search(&v).is_ok()
    }

    pub fn connected(&self) -> bool {
        self.connected
    }
}

fn bfs_levels(g: &UnderlyingGraph, source: usize) -> Vec<u16> {
    let n = g.len();
    let mut dist = vec![UNREACHED; n];
    dist[source] = 0;
    let mut visited = FixedBitSet::with_capacity(n);
    visited.insert(source);
    let mut frontier = vec![source];
    let mut level = 0u16;
    while !frontier.is_empty() {
        level += 1;
        let mut next = FixedBitSet::with_capacity(n);
        for &v in &frontier {
            next.union_with(g.neighbours(v));
        }
        next.difference_with(&visited);
        visited.union_with(&next);
        frontier = next.ones().collect();
        for &v in &frontier {
            dist[v] = level;
        }
    }
    dist
}

/// BFS from every vertex.
pub fn all_pairs_distances(g: &UnderlyingGraph) -> MetricReport {
    let n = g.len();
    let rows: Vec<Vec<u16>> = (0..n).into_par_iter().map(|s| bfs_levels(g, s)).collect();
    let connected = rows.iter().all(|row| row.iter().all(|&d| d != UNREACHED));
    let eccentricities: Vec<u32> = rows
        .iter()
        .map(|row| row.iter().filter(|&&d| d != UNREACHED).max().copied().unwrap_or(0) as u32)
        .collect();
    let (radius, diameter, center) = if connected && n > 0 {
        let radius = *eccentricities.iter().min().expect("non-empty");
        let diameter = *eccentricities.iter().max().expect("non-empty");
        let center = (0..n).filter(|&v| eccentricities[v] == radius).collect();
        (Some(radius), Some(diameter), center)
    } else {
        (None, None, Vec::new())
    };
    MetricReport {
        matrix: DistanceMatrix {
            n,
            cells: rows.into_iter().flatten().collect(),
        },
        eccentricities,
        radius,
        diameter,
        center,
        connected,
    }
}

/// One shortest path from `from` to `to`, inclusive of both ends.
pub fn shortest_path(g: &UnderlyingGraph, from: usize, to: usize) -> Option<Vec<usize>> {
    let n = g.len();
    let mut parent = vec![usize::MAX; n];
    parent[from] = from;
    let mut frontier = vec![from];
    while !frontier.is_empty() && parent[to] == usize::MAX {
        let mut next = Vec::new();
        for &v in &frontier {
            for w in g.neighbours(v).ones() {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    if parent[to] == usize::MAX {
        return None;
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    Some(path)
}

/// The known necessary condition for a connected regular graph: at least
/// three maximal ideals and a field among the factors.
pub fn is_connected_predicate(ring: &ProductRing) -> bool {
    ring.max_ideal_count() >= 3 && ring.n_fields() >= 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ideal;

    fn graph(n: usize, edges: &[(usize, usize)]) -> UnderlyingGraph {
        let mut adjacency = vec![FixedBitSet::with_capacity(n); n];
        for &(a, b) in edges {
            adjacency[a].insert(b);
            adjacency[b].insert(a);
        }
        let vertices = (0..n).map(|i| Ideal::new(vec![i])).collect();
        UnderlyingGraph::from_adjacency(vertices, adjacency)
    }

    #[test]
    fn path_graph() {
        let g = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let m = all_pairs_distances(&g);
        assert!(m.connected());
        assert_eq!(m.distance(0, 4), Some(4));
        assert_eq!(m.eccentricities(), &[4, 3, 2, 3, 4]);
        assert_eq!((m.radius(), m.diameter()), (Some(2), Some(4)));
        assert_eq!(m.center(), &[2]);
        assert_eq!(shortest_path(&g, 0, 3), Some(vec![0, 1, 2, 3]));
    }

    #[test]
    fn disconnected_graph_has_no_radius() {
        let g = graph(4, &[(0, 1), (2, 3)]);
        let m = all_pairs_distances(&g);
        assert!(!m.connected());
        assert_eq!(m.distance(0, 2), None);
        assert_eq!(m.eccentricity(0), 1);
        assert_eq!(m.radius(), None);
        assert!(m.center().is_empty());
        assert_eq!(shortest_path(&g, 0, 3), None);
    }

    #[test]
    fn single_vertex() {
        let m = all_pairs_distances(&graph(1, &[]));
        assert!(m.connected());
        assert_eq!(m.radius(), Some(0));
        assert_eq!(m.center(), &[0]);
    }

    #[test]
    fn serializes_unreached_as_null() {
        let m = all_pairs_distances(&graph(2, &[]));
        let json = serde_json::to_value(&m).unwrap();
        assert_eq!(json["distances"], serde_json::json!([[0, null], [null, 0]]));
    }
}
