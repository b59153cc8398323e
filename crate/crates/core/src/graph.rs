//! Undirected simple graphs on dense integer vertex ids, plus the handful of
//! structural queries the solvers need (BFS distances, girth, bipartiteness,
//! Petersen recognition, named constructions).

use crate::bitset::BitSet;
use crate::error::{Error, Result};

pub type Vertex = usize;

/// Distance value for "unreachable".
pub const INFINITY: u32 = u32::MAX;

/// An undirected simple graph. Vertices are `0..n`; adjacency lists are kept
/// sorted and mirrored into per-vertex bitsets.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    m: usize,
    adj: Vec<Vec<Vertex>>,
    adj_bits: Vec<BitSet>,
}

impl Graph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            m: 0,
            adj: vec![Vec::new(); n],
            adj_bits: vec![BitSet::new(n); n],
        }
    }

    /// Builds a graph from an edge list. Loops and repeated edges are
    /// rejected rather than silently dropped — generators are expected to be
    /// clean, and a duplicate in a hand-written file is usually a typo.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.insert_edge(u, v)?;
        }
        for list in &mut g.adj {
            list.sort_unstable();
        }
        Ok(g)
    }

    fn insert_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::invalid(format!(
                "edge ({u},{v}) out of range for {} vertices",
                self.n
            )));
        }
        if u == v {
            return Err(Error::invalid(format!("loop at vertex {u}")));
        }
        if self.adj_bits[u].contains(v) {
            return Err(Error::invalid(format!("duplicate edge ({u},{v})")));
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
        self.adj_bits[u].insert(v);
        self.adj_bits[v].insert(u);
        self.m += 1;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_subcubic(&self) -> bool {
        self.max_degree() <= 3
    }

    pub fn is_cubic(&self) -> bool {
        self.n > 0 && self.adj.iter().all(|a| a.len() == 3)
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn neighbor_set(&self, v: Vertex) -> &BitSet {
        &self.adj_bits[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && v < self.n && self.adj_bits[u].contains(v)
    }

    /// All edges as `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// BFS distances from `source`; unreachable vertices get [`INFINITY`].
    pub fn bfs_distances(&self, source: Vertex) -> Vec<u32> {
        assert!(source < self.n, "vertex {source} out of range");
        let mut dist = vec![INFINITY; self.n];
        dist[source] = 0;
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == INFINITY {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest-path distance, or `None` if `u` and `v` are in different
    /// components. Panics on out-of-range ids (validate at the boundary).
    pub fn distance(&self, u: Vertex, v: Vertex) -> Option<u32> {
        assert!(u < self.n && v < self.n, "vertex out of range");
        if u == v {
            return Some(0);
        }
        // Plain BFS; callers with many queries should use a DistanceOracle.
        let d = self.bfs_distances(u)[v];
        (d != INFINITY).then_some(d)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        self.bfs_distances(0).iter().all(|&d| d != INFINITY)
    }

    /// Vertex sets of the connected components, each sorted, ordered by their
    /// smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = std::collections::VecDeque::from([s]);
            seen[s] = true;
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// The subgraph induced by `vertices` (which must be distinct and in
    /// range). Returns the subgraph and the map from new ids to old ids.
    pub fn induced_subgraph(&self, vertices: &[Vertex]) -> Result<(Graph, Vec<Vertex>)> {
        let mut old_to_new = vec![usize::MAX; self.n];
        for (new, &old) in vertices.iter().enumerate() {
            if old >= self.n {
                return Err(Error::invalid(format!("vertex {old} out of range")));
            }
            if old_to_new[old] != usize::MAX {
                return Err(Error::invalid(format!("vertex {old} listed twice")));
            }
            old_to_new[old] = new;
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges() {
            if old_to_new[u] != usize::MAX && old_to_new[v] != usize::MAX {
                edges.push((old_to_new[u], old_to_new[v]));
            }
        }
        Ok((
            Graph::from_edges(vertices.len(), &edges)?,
            vertices.to_vec(),
        ))
    }

    /// Two-colors the graph if it is bipartite, returning the side of each
    /// vertex (sides are per-component: the lowest vertex of each component
    /// goes on side `false`).
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut side = vec![None; self.n];
        for s in 0..self.n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let su = side[u].unwrap();
                for &w in &self.adj[u] {
                    match side[w] {
                        None => {
                            side[w] = Some(!su);
                            queue.push_back(w);
                        }
                        Some(sw) if sw == su => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap()).collect())
    }

    /// Length of a shortest cycle, or `None` for forests.
    ///
    /// Runs the classic BFS bound from every root: for a root on some
    /// shortest cycle the bound is tight, so the minimum over all roots is
    /// the girth.
    pub fn girth(&self) -> Option<u32> {
        let mut best: Option<u32> = None;
        for s in 0..self.n {
            let mut dist = vec![INFINITY; self.n];
            let mut parent = vec![usize::MAX; self.n];
            dist[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if let Some(b) = best {
                    // No cycle through s seen from depth d can beat b once
                    // 2d + 1 >= b fails to improve; cheap cutoff.
                    if 2 * dist[u] + 1 > b {
                        break;
                    }
                }
                for &w in &self.adj[u] {
                    if dist[w] == INFINITY {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        if best.is_none_or(|b| len < b) {
                            best = Some(len);
                        }
                    }
                }
            }
        }
        best
    }

    /// Recognizes the Petersen graph: the unique 3-regular graph on 10
    /// vertices with girth 5. Cross-checked against explicit isomorphism
    /// search in the test suite.
    pub fn is_petersen(&self) -> bool {
        self.n == 10 && self.is_cubic() && self.girth() == Some(5)
    }

    /// For each vertex, the set of vertices at distance 1 or 2 (not the
    /// vertex itself).
    pub fn second_neighborhoods(&self) -> Vec<BitSet> {
        (0..self.n)
            .map(|v| {
                let mut ball = self.adj_bits[v].clone();
                for &w in &self.adj[v] {
                    ball.union_with(&self.adj_bits[w]);
                }
                ball.remove(v);
                ball
            })
            .collect()
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// All-pairs distance answers. For graphs up to [`DistanceOracle::TABLE_CAP`]
/// vertices the table is materialized once; larger graphs fall back to a BFS
/// per query source.
pub struct DistanceOracle<'g> {
    g: &'g Graph,
    table: Option<Vec<u16>>,
}

impl<'g> DistanceOracle<'g> {
    pub const TABLE_CAP: usize = 512;

    pub fn new(g: &'g Graph) -> Self {
        let table = (g.n <= Self::TABLE_CAP && g.n > 0).then(|| {
            let mut t = vec![u16::MAX; g.n * g.n];
            for s in 0..g.n {
                for (v, &d) in g.bfs_distances(s).iter().enumerate() {
                    if d != INFINITY {
                        t[s * g.n + v] = d as u16;
                    }
                }
            }
            t
        });
        DistanceOracle { g, table }
    }

    pub fn distance(&self, u: Vertex, v: Vertex) -> Option<u32> {
        match &self.table {
            Some(t) => {
                assert!(u < self.g.n && v < self.g.n, "vertex out of range");
                let d = t[u * self.g.n + v];
                (d != u16::MAX).then_some(d as u32)
            }
            None => self.g.distance(u, v),
        }
    }
}

// --- named constructions ---------------------------------------------------

pub fn petersen() -> Graph {
    // Outer 5-cycle 0..4, inner pentagram 5..9, spokes i <-> i+5.
    let mut edges = vec![(5, 7), (7, 9), (9, 6), (6, 8), (8, 5)];
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
    }
    Graph::from_edges(10, &edges).unwrap()
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn k33() -> Graph {
    let mut edges = Vec::new();
    for u in 0..3 {
        for v in 3..6 {
            edges.push((u, v));
        }
    }
    Graph::from_edges(6, &edges).unwrap()
}

pub fn cycle(k: usize) -> Result<Graph> {
    if k < 3 {
        return Err(Error::invalid("cycle needs at least 3 vertices"));
    }
    let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
    Graph::from_edges(k, &edges)
}

pub fn path(k: usize) -> Result<Graph> {
    if k == 0 {
        return Err(Error::invalid("path needs at least 1 vertex"));
    }
    let edges: Vec<_> = (0..k.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    Graph::from_edges(k, &edges)
}

/// Two k-cycles `0..k` and `k..2k` joined by rungs.
pub fn prism(k: usize) -> Result<Graph> {
    if k < 3 {
        return Err(Error::invalid("prism needs cycles of length at least 3"));
    }
    let mut edges = Vec::new();
    for i in 0..k {
        edges.push((i, (i + 1) % k));
        edges.push((k + i, k + (i + 1) % k));
        edges.push((i, k + i));
    }
    Graph::from_edges(2 * k, &edges)
}

/// Looks up a graph by name: `petersen`, `k4`, `k33`, or parameterized
/// `cycle(k)`, `path(k)`, `prism(k)`.
pub fn named_graph(name: &str) -> Result<Graph> {
    let name = name.trim();
    match name {
        "petersen" => return Ok(petersen()),
        "k4" => return Ok(complete(4)),
        "k33" => return Ok(k33()),
        _ => {}
    }
    if let Some((family, rest)) = name.split_once('(') {
        let arg = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::invalid(format!("missing ')' in graph name '{name}'")))?;
        let k: usize = arg
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad parameter '{arg}' in graph name")))?;
        return match family {
            "cycle" => cycle(k),
            "path" => path(k),
            "prism" => prism(k),
            other => Err(Error::invalid(format!("unknown graph family '{other}'"))),
        };
    }
    Err(Error::invalid(format!("unknown graph name '{name}'")))
}

// --- isomorphism (small graphs) ---------------------------------------------

/// Backtracking isomorphism test. Exponential in the worst case; intended for
/// the desk-scale graphs this crate works with (tests, Petersen recognition
/// cross-checks).
pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n != b.n || a.m != b.m {
        return false;
    }
    let mut da: Vec<usize> = (0..a.n).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..b.n).map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    // Map vertices of `a` in an order that keeps the mapped part connected
    // where possible, so adjacency constraints bite early.
    let order = {
        let mut order = Vec::with_capacity(a.n);
        let mut seen = vec![false; a.n];
        for s in 0..a.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                order.push(u);
                for &w in a.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        order
    };
    let mut map = vec![usize::MAX; a.n];
    let mut used = vec![false; b.n];
    extend_isomorphism(a, b, &order, 0, &mut map, &mut used)
}

fn extend_isomorphism(
    a: &Graph,
    b: &Graph,
    order: &[Vertex],
    idx: usize,
    map: &mut Vec<Vertex>,
    used: &mut Vec<bool>,
) -> bool {
    if idx == order.len() {
        return true;
    }
    let u = order[idx];
    'candidates: for cand in 0..b.n {
        if used[cand] || b.degree(cand) != a.degree(u) {
            continue;
        }
        for &w in a.neighbors(u) {
            if map[w] != usize::MAX && !b.has_edge(cand, map[w]) {
                continue 'candidates;
            }
        }
        // Also reject extra adjacencies: cand must not touch the image of a
        // mapped non-neighbor.
        for prev in &order[..idx] {
            let mapped = map[*prev];
            if b.has_edge(cand, mapped) && !a.has_edge(u, *prev) {
                continue 'candidates;
            }
        }
        map[u] = cand;
        used[cand] = true;
        if extend_isomorphism(a, b, order, idx + 1, map, used) {
            return true;
        }
        map[u] = usize::MAX;
        used[cand] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(Graph::from_edges(3, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 3)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn distances_on_a_path() {
        let p4 = path(4).unwrap();
        assert_eq!(p4.distance(0, 0), Some(0));
        assert_eq!(p4.distance(0, 3), Some(3));
        assert_eq!(p4.distance(2, 1), Some(1));
    }

    #[test]
    fn distance_in_disconnected_graph_is_none() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.distance(0, 3), None);
        assert!(!g.is_connected());
        assert_eq!(g.connected_components(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn oracle_matches_bfs() {
        let g = petersen();
        let oracle = DistanceOracle::new(&g);
        for u in 0..10 {
            let dist = g.bfs_distances(u);
            for v in 0..10 {
                assert_eq!(oracle.distance(u, v), Some(dist[v]));
            }
        }
    }

    #[test]
    fn petersen_shape() {
        let g = petersen();
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.edge_count(), 15);
        assert!(g.is_cubic());
        assert_eq!(g.girth(), Some(5));
        // Diameter 2: every pair is adjacent or shares a neighbor.
        for u in 0..10 {
            for v in 0..10 {
                assert!(g.distance(u, v).unwrap() <= 2);
            }
        }
    }

    #[test]
    fn girth_values() {
        assert_eq!(path(5).unwrap().girth(), None);
        assert_eq!(complete(4).girth(), Some(3));
        assert_eq!(cycle(7).unwrap().girth(), Some(7));
        assert_eq!(k33().girth(), Some(4));
        assert_eq!(prism(5).unwrap().girth(), Some(4));
    }

    #[test]
    fn petersen_recognition_against_isomorphism_search() {
        // The fast path (order, regularity, girth) must agree with explicit
        // isomorphism against the pentagram construction.
        let reference = petersen();
        let candidates: Vec<(Graph, &str)> = vec![
            (petersen(), "petersen"),
            (prism(5).unwrap(), "prism(5)"),
            (complete(4), "k4"),
            (k33(), "k33"),
            (cycle(10).unwrap(), "cycle(10)"),
        ];
        for (g, name) in &candidates {
            assert_eq!(
                g.is_petersen(),
                are_isomorphic(g, &reference),
                "mismatch on {name}"
            );
        }
    }

    #[test]
    fn petersen_recognition_on_relabelled_copy() {
        // Reverse the vertex ids; recognition must not depend on labels.
        let g = petersen();
        let edges: Vec<_> = g.edges().iter().map(|&(u, v)| (9 - u, 9 - v)).collect();
        let relabelled = Graph::from_edges(10, &edges).unwrap();
        assert!(relabelled.is_petersen());
        assert!(are_isomorphic(&relabelled, &g));
    }

    #[test]
    fn isomorphism_distinguishes_same_degree_sequence() {
        // C6 and 2*C3 share the degree sequence but are not isomorphic.
        let c6 = cycle(6).unwrap();
        let two_triangles =
            Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(!are_isomorphic(&c6, &two_triangles));
        assert!(are_isomorphic(&c6, &cycle(6).unwrap()));
    }

    #[test]
    fn named_graph_lookup() {
        assert!(named_graph("petersen").unwrap().is_petersen());
        assert_eq!(named_graph("cycle(5)").unwrap().vertex_count(), 5);
        assert_eq!(named_graph("prism(4)").unwrap().edge_count(), 12);
        assert_eq!(named_graph("path(1)").unwrap().vertex_count(), 1);
        assert!(named_graph("cycle(2)").is_err());
        assert!(named_graph("blorp").is_err());
        assert!(named_graph("cycle(x)").is_err());
    }

    #[test]
    fn bipartition_sides() {
        let side = k33().bipartition().unwrap();
        assert_eq!(side, vec![false, false, false, true, true, true]);
        assert!(cycle(5).unwrap().bipartition().is_none());
        assert!(petersen().bipartition().is_none());
        assert!(path(6).unwrap().bipartition().is_some());
    }

    #[test]
    fn second_neighborhoods_match_distances() {
        let g = prism(6).unwrap();
        let balls = g.second_neighborhoods();
        for u in 0..g.vertex_count() {
            for v in 0..g.vertex_count() {
                let within = u != v && g.distance(u, v).unwrap() <= 2;
                assert_eq!(balls[u].contains(v), within, "u={u} v={v}");
            }
        }
    }
}
