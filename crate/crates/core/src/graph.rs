//! Simple connected graphs with precomputed shortest-path distances.
//!
//! Every structure downstream of this module (multiset partitions, the
//! solver, the MILP export) assumes a connected graph on at least two
//! vertices, so `Graph::from_edges` enforces both up front.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

/// Errors raised while building or parsing a graph.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph needs at least 2 vertices, got {n}")]
    TooSmall { n: usize },
    #[error("self-loop at vertex {v}")]
    SelfLoop { v: usize },
    #[error("vertex {v} out of range for n = {n}")]
    IndexOutOfRange { v: usize, n: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("edge list parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// An undirected simple connected graph on vertices `0..n`.
///
/// Adjacency lists are kept sorted; duplicate input edges are accepted and
/// deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// Builds a graph from an edge list, validating simplicity and
    /// connectivity.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::TooSmall { n });
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop { v: u });
            }
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::IndexOutOfRange { v: w, n });
                }
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut m = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            m += list.len();
        }
        debug_assert!(m % 2 == 0);
        let g = Graph { adj, m: m / 2 };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// All edges as `(u, v)` pairs with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Lowest-index vertex adjacent to everything else, if any.
    pub fn universal_vertex(&self) -> Option<usize> {
        let n = self.n();
        (0..n).find(|&v| self.degree(v) == n - 1)
    }

    /// A connected graph is a tree exactly when m = n - 1.
    pub fn is_tree(&self) -> bool {
        self.m == self.n() - 1
    }

    fn is_connected(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        seen[0] = true;
        queue.push_back(0);
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == n
    }

    /// Whether the subgraph induced by `verts` is connected.
    /// An empty set counts as connected.
    pub fn induced_connected(&self, verts: &[usize]) -> bool {
        if verts.is_empty() {
            return true;
        }
        let n = self.n();
        let mut inside = vec![false; n];
        for &v in verts {
            inside[v] = true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        seen[verts[0]] = true;
        queue.push_back(verts[0]);
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if inside[v] && !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == verts.iter().collect::<std::collections::HashSet<_>>().len()
    }

    /// Parses the plain edge-list format.
    ///
    /// One `u v` pair per line; `#` starts a comment; an optional `n <count>`
    /// header fixes the vertex count (otherwise it is `max index + 1`).
    /// CRLF line endings are accepted.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut declared_n: Option<usize> = None;
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.split('#').next() {
                Some(s) => s.trim(),
                None => "",
            };
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let first = parts.next().unwrap();
            if first == "n" {
                let count = parts.next().ok_or_else(|| GraphError::Parse {
                    line: line_no,
                    reason: "header needs a vertex count".into(),
                })?;
                if parts.next().is_some() {
                    return Err(GraphError::Parse {
                        line: line_no,
                        reason: "trailing tokens after vertex count".into(),
                    });
                }
                let count: usize = count.parse().map_err(|_| GraphError::Parse {
                    line: line_no,
                    reason: format!("bad vertex count `{count}`"),
                })?;
                if declared_n.replace(count).is_some() {
                    return Err(GraphError::Parse {
                        line: line_no,
                        reason: "duplicate `n` header".into(),
                    });
                }
                continue;
            }
            let second = parts.next().ok_or_else(|| GraphError::Parse {
                line: line_no,
                reason: "expected two endpoints".into(),
            })?;
            if parts.next().is_some() {
                return Err(GraphError::Parse {
                    line: line_no,
                    reason: "trailing tokens after edge".into(),
                });
            }
            let parse = |tok: &str| -> Result<usize, GraphError> {
                tok.parse().map_err(|_| GraphError::Parse {
                    line: line_no,
                    reason: format!("bad vertex index `{tok}`"),
                })
            };
            edges.push((parse(first)?, parse(second)?));
        }
        let n = match declared_n {
            Some(c) => c,
            None => {
                let max = edges
                    .iter()
                    .map(|&(u, v)| u.max(v))
                    .max()
                    .ok_or(GraphError::Parse {
                        line: 0,
                        reason: "no edges found".into(),
                    })?;
                max + 1
            }
        };
        Self::from_edges(n, &edges)
    }

    /// Serializes to the edge-list format read by [`Graph::parse_edge_list`]:
    /// an `n` header followed by one `u v` line per edge with `u < v`.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n {}", self.n());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// All-pairs shortest-path distances of a connected graph, plus the derived
/// eccentricities, radius, and diameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<u32>,
    ecc: Vec<u32>,
    radius: u32,
    diameter: u32,
}

impl DistanceMatrix {
    /// Runs one BFS per source vertex.
    pub fn from_graph(g: &Graph) -> Self {
        let n = g.n();
        let mut dist = vec![0u32; n * n];
        let mut ecc = vec![0u32; n];
        let mut queue = VecDeque::new();
        for src in 0..n {
            let row = &mut dist[src * n..(src + 1) * n];
            const UNSEEN: u32 = u32::MAX;
            row.fill(UNSEEN);
            row[src] = 0;
            queue.clear();
            queue.push_back(src);
            let mut far = 0;
            while let Some(u) = queue.pop_front() {
                let du = row[u];
                for &v in g.neighbors(u) {
                    if row[v] == UNSEEN {
                        row[v] = du + 1;
                        far = far.max(du + 1);
                        queue.push_back(v);
                    }
                }
            }
            ecc[src] = far;
        }
        let radius = *ecc.iter().min().expect("n >= 2");
        let diameter = *ecc.iter().max().expect("n >= 2");
        DistanceMatrix {
            n,
            dist,
            ecc,
            radius,
            diameter,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dist(&self, u: usize, v: usize) -> u32 {
        self.dist[u * self.n + v]
    }

    /// Row of distances from `u` to every vertex.
    #[inline]
    pub fn row(&self, u: usize) -> &[u32] {
        &self.dist[u * self.n..(u + 1) * self.n]
    }

    pub fn eccentricity(&self, v: usize) -> u32 {
        self.ecc[v]
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn diameter(&self) -> u32 {
        self.diameter
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn rejects_self_loop() {
        let err = Graph::from_edges(3, &[(0, 0), (0, 1), (1, 2)]).unwrap_err();
        assert_eq!(err, GraphError::SelfLoop { v: 0 });
    }

    #[test]
    fn rejects_out_of_range() {
        let err = Graph::from_edges(3, &[(0, 3)]).unwrap_err();
        assert_eq!(err, GraphError::IndexOutOfRange { v: 3, n: 3 });
    }

    #[test]
    fn rejects_disconnected() {
        let err = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap_err();
        assert_eq!(err, GraphError::Disconnected);
    }

    #[test]
    fn rejects_single_vertex() {
        let err = Graph::from_edges(1, &[]).unwrap_err();
        assert_eq!(err, GraphError::TooSmall { n: 1 });
    }

    #[test]
    fn deduplicates_edges() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 0), (1, 2), (1, 2)]).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn path_distances() {
        let g = path(5);
        let dm = DistanceMatrix::from_graph(&g);
        assert_eq!(dm.dist(0, 4), 4);
        assert_eq!(dm.dist(2, 2), 0);
        assert_eq!(dm.diameter(), 4);
        assert_eq!(dm.radius(), 2);
        assert_eq!(dm.eccentricity(2), 2);
    }

    #[test]
    fn wheel_distances() {
        // Hub-and-rim graph on 9 vertices: hub 0, rim cycle 1..=8.
        let mut edges = vec![];
        for i in 1..=8 {
            edges.push((0, i));
            edges.push((i, if i == 8 { 1 } else { i + 1 }));
        }
        let g = Graph::from_edges(9, &edges).unwrap();
        let dm = DistanceMatrix::from_graph(&g);
        assert_eq!(dm.diameter(), 2);
        assert_eq!(dm.eccentricity(0), 1);
        assert_eq!(g.universal_vertex(), Some(0));
    }

    #[test]
    fn tree_detection() {
        assert!(path(6).is_tree());
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(!g.is_tree());
    }

    #[test]
    fn induced_connectivity() {
        let g = path(6);
        assert!(g.induced_connected(&[1, 2, 3]));
        assert!(!g.induced_connected(&[0, 2]));
        assert!(g.induced_connected(&[]));
        assert!(g.induced_connected(&[4]));
    }

    #[test]
    fn edge_list_round_trip_p3() {
        let g = path(3);
        let text = g.to_edge_list();
        assert_eq!(text, "n 3\n0 1\n1 2\n");
        let back = Graph::parse_edge_list(&text).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn parse_accepts_comments_crlf_and_no_header() {
        let text = "# a triangle\r\n0 1\r\n1 2 # back edge follows\r\n0 2\r\n";
        let g = Graph::parse_edge_list(text).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 3);
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err = Graph::parse_edge_list("0 1\nbogus\n").unwrap_err();
        match err {
            GraphError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_propagates_build_errors() {
        assert_eq!(
            Graph::parse_edge_list("n 5\n0 1\n1 2\n3 4\n").unwrap_err(),
            GraphError::Disconnected
        );
    }
}
