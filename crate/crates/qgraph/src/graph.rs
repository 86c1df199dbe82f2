//! In-memory representation of the three digraph flavors and their structural
//! queries (components, simple paths, cycles, degrees).
//!
//! Three kinds are supported:
//! - `EdgeUnit`: directed edges with unit-modulus complex weights;
//! - `VertexWeighted`: nonzero complex weight per vertex, edges carry only a
//!   direction (the effective edge weight is derived in `laplacians`);
//! - `EdgeLoop`: directed edges with nonzero complex weights of any modulus,
//!   plus loops with positive real weights.
//!
//! Vertices are 1-based in every public interface. Graphs are immutable after
//! construction and safe to share across threads; degrees are computed once.

use crate::spectra::Complex;
use thiserror::Error;

pub const UNIT_MODULUS_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("vertex {0} out of range 1..={1}")]
    VertexOutOfRange(usize, usize),
    #[error("self-edge {0}->{0} is not allowed (use a loop)")]
    SelfEdge(usize),
    #[error("duplicate edge between {0} and {1}")]
    DuplicateEdge(usize, usize),
    #[error("duplicate loop at vertex {0}")]
    DuplicateLoop(usize),
    #[error("edge weight has modulus {0} but kind edge-unit requires modulus 1")]
    NotUnitModulus(f64),
    #[error("edge weight must be nonzero")]
    ZeroEdgeWeight,
    #[error("loop weight {0} must be positive")]
    NonPositiveLoop(f64),
    #[error("vertex {0} is missing a vertex weight")]
    MissingVertexWeight(usize),
    #[error("vertex weight at {0} must be nonzero")]
    ZeroVertexWeight(usize),
    #[error("weight is not finite")]
    NonFiniteWeight,
    #[error("{0} not allowed for graph kind {1:?}")]
    KindMismatch(&'static str, GraphKind),
    #[error("graph must have at least one vertex")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    EdgeUnit,
    VertexWeighted,
    EdgeLoop,
}

/// Directed edge `from -> to` with its complex weight. For vertex-weighted
/// graphs the weight field is ignored (direction only).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: Complex,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Loop {
    pub vertex: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDigraph {
    kind: GraphKind,
    n: usize,
    edges: Vec<Edge>,
    loops: Vec<Loop>,
    vertex_weights: Vec<Complex>,
    degrees: Vec<f64>,
}

impl WeightedDigraph {
    pub fn edge_unit(n: usize, edges: Vec<(usize, usize, Complex)>) -> Result<Self, GraphError> {
        let edges = edges
            .into_iter()
            .map(|(from, to, weight)| Edge { from, to, weight })
            .collect();
        Self::build(GraphKind::EdgeUnit, n, edges, vec![], vec![])
    }

    pub fn vertex_weighted(
        n: usize,
        edges: Vec<(usize, usize)>,
        weights: Vec<Complex>,
    ) -> Result<Self, GraphError> {
        let one = Complex::new(1.0, 0.0);
        let edges = edges
            .into_iter()
            .map(|(from, to)| Edge {
                from,
                to,
                weight: one,
            })
            .collect();
        Self::build(GraphKind::VertexWeighted, n, edges, vec![], weights)
    }

    pub fn edge_loop(
        n: usize,
        edges: Vec<(usize, usize, Complex)>,
        loops: Vec<(usize, f64)>,
    ) -> Result<Self, GraphError> {
        let edges = edges
            .into_iter()
            .map(|(from, to, weight)| Edge { from, to, weight })
            .collect();
        let loops = loops
            .into_iter()
            .map(|(vertex, weight)| Loop { vertex, weight })
            .collect();
        Self::build(GraphKind::EdgeLoop, n, edges, loops, vec![])
    }

    fn build(
        kind: GraphKind,
        n: usize,
        edges: Vec<Edge>,
        loops: Vec<Loop>,
        vertex_weights: Vec<Complex>,
    ) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut seen_pairs = std::collections::HashSet::new();
        for e in &edges {
            for v in [e.from, e.to] {
                if v < 1 || v > n {
                    return Err(GraphError::VertexOutOfRange(v, n));
                }
            }
            if e.from == e.to {
                return Err(GraphError::SelfEdge(e.from));
            }
            let key = (e.from.min(e.to), e.from.max(e.to));
            if !seen_pairs.insert(key) {
                return Err(GraphError::DuplicateEdge(key.0, key.1));
            }
            if !e.weight.re.is_finite() || !e.weight.im.is_finite() {
                return Err(GraphError::NonFiniteWeight);
            }
            match kind {
                GraphKind::EdgeUnit => {
                    let m = e.weight.norm();
                    if (m - 1.0).abs() > UNIT_MODULUS_TOL {
                        return Err(GraphError::NotUnitModulus(m));
                    }
                }
                GraphKind::VertexWeighted => {}
                GraphKind::EdgeLoop => {
                    if e.weight.norm() == 0.0 {
                        return Err(GraphError::ZeroEdgeWeight);
                    }
                }
            }
        }
        if !loops.is_empty() && kind != GraphKind::EdgeLoop {
            return Err(GraphError::KindMismatch("loops", kind));
        }
        let mut seen_loops = std::collections::HashSet::new();
        for l in &loops {
            if l.vertex < 1 || l.vertex > n {
                return Err(GraphError::VertexOutOfRange(l.vertex, n));
            }
            if !l.weight.is_finite() {
                return Err(GraphError::NonFiniteWeight);
            }
            if l.weight <= 0.0 {
                return Err(GraphError::NonPositiveLoop(l.weight));
            }
            if !seen_loops.insert(l.vertex) {
                return Err(GraphError::DuplicateLoop(l.vertex));
            }
        }
        match kind {
            GraphKind::VertexWeighted => {
                if vertex_weights.len() < n {
                    return Err(GraphError::MissingVertexWeight(vertex_weights.len() + 1));
                }
                for (i, w) in vertex_weights.iter().enumerate() {
                    if !w.re.is_finite() || !w.im.is_finite() {
                        return Err(GraphError::NonFiniteWeight);
                    }
                    if w.norm() == 0.0 {
                        return Err(GraphError::ZeroVertexWeight(i + 1));
                    }
                }
            }
            _ => {
                if !vertex_weights.is_empty() {
                    return Err(GraphError::KindMismatch("vertex weights", kind));
                }
            }
        }

        // Canonical storage order: structural equality and serialization
        // ignore the order directives appeared in.
        let mut edges = edges;
        edges.sort_by_key(|e| (e.from, e.to));
        let mut loops = loops;
        loops.sort_by_key(|l| l.vertex);

        let mut g = Self {
            kind,
            n,
            edges,
            loops,
            vertex_weights,
            degrees: vec![],
        };
        g.degrees = g.compute_degrees();
        Ok(g)
    }

    fn compute_degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        match self.kind {
            // d(v) = sum of |w| over incident edges (in-degree + out-degree).
            GraphKind::EdgeUnit | GraphKind::EdgeLoop => {
                for e in &self.edges {
                    let m = e.weight.norm();
                    d[e.from - 1] += m;
                    d[e.to - 1] += m;
                }
                // A loop contributes its weight once: the row sum of |a_ij|.
                for l in &self.loops {
                    d[l.vertex - 1] += l.weight;
                }
            }
            // d_i = sum of |w_j| over neighbors j.
            GraphKind::VertexWeighted => {
                for e in &self.edges {
                    d[e.from - 1] += self.vertex_weights[e.to - 1].norm();
                    d[e.to - 1] += self.vertex_weights[e.from - 1].norm();
                }
            }
        }
        d
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn loops(&self) -> &[Loop] {
        &self.loops
    }

    pub fn vertex_weights(&self) -> &[Complex] {
        &self.vertex_weights
    }

    pub fn loop_at(&self, v: usize) -> Option<f64> {
        self.loops.iter().find(|l| l.vertex == v).map(|l| l.weight)
    }

    /// Degree of `v` per the graph kind's rule. 1-based.
    pub fn degree(&self, v: usize) -> Result<f64, GraphError> {
        if v < 1 || v > self.n {
            return Err(GraphError::VertexOutOfRange(v, self.n));
        }
        Ok(self.degrees[v - 1])
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn total_degree(&self) -> f64 {
        self.degrees.iter().sum()
    }

    fn skeleton_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n + 1];
        for e in &self.edges {
            adj[e.from].push(e.to);
            adj[e.to].push(e.from);
        }
        adj
    }

    /// Connected components of the undirected skeleton (loops ignored),
    /// sorted by smallest member.
    pub fn underlying_components(&self) -> Vec<Vec<usize>> {
        let adj = self.skeleton_adjacency();
        let mut seen = vec![false; self.n + 1];
        let mut comps = Vec::new();
        for start in 1..=self.n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![];
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.underlying_components().len() == 1
    }

    /// True iff the undirected skeleton is non-bipartite (loops excluded).
    pub fn has_odd_cycle(&self) -> bool {
        let adj = self.skeleton_adjacency();
        let mut color = vec![-1i8; self.n + 1];
        for start in 1..=self.n {
            if color[start] >= 0 {
                continue;
            }
            color[start] = 0;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if color[v] < 0 {
                        color[v] = 1 - color[u];
                        stack.push(v);
                    } else if color[v] == color[u] {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Weight picked up walking one skeleton step from `a` to `b`: the stored
    /// weight when the step follows the edge direction, its conjugate against
    /// it. Vertex-weighted graphs use the derived entry conj(sqrt(w_a))*sqrt(w_b).
    pub fn traversal_weight(&self, a: usize, b: usize) -> Option<Complex> {
        if self.kind == GraphKind::VertexWeighted {
            self.edges
                .iter()
                .find(|e| (e.from == a && e.to == b) || (e.from == b && e.to == a))?;
            let sa = crate::spectra::principal_sqrt(self.vertex_weights[a - 1]);
            let sb = crate::spectra::principal_sqrt(self.vertex_weights[b - 1]);
            return Some(sa.conj() * sb);
        }
        for e in &self.edges {
            if e.from == a && e.to == b {
                return Some(e.weight);
            }
            if e.from == b && e.to == a {
                return Some(e.weight.conj());
            }
        }
        None
    }

    /// All simple paths from `u` to `v` in the undirected skeleton with at
    /// most `max_len` steps, each carrying the product of traversal weights.
    /// Empty when `u`, `v` are disconnected; loops never participate.
    pub fn enumerate_simple_paths(
        &self,
        u: usize,
        v: usize,
        max_len: usize,
    ) -> Result<Vec<SimplePath>, GraphError> {
        for x in [u, v] {
            if x < 1 || x > self.n {
                return Err(GraphError::VertexOutOfRange(x, self.n));
            }
        }
        let adj = self.skeleton_adjacency();
        let mut out = Vec::new();
        let mut visited = vec![false; self.n + 1];
        let mut path = vec![u];
        visited[u] = true;
        self.dfs_paths(
            &adj,
            u,
            v,
            max_len,
            Complex::new(1.0, 0.0),
            &mut visited,
            &mut path,
            &mut out,
        );
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs_paths(
        &self,
        adj: &[Vec<usize>],
        cur: usize,
        target: usize,
        max_len: usize,
        weight: Complex,
        visited: &mut Vec<bool>,
        path: &mut Vec<usize>,
        out: &mut Vec<SimplePath>,
    ) {
        if cur == target && path.len() > 1 {
            out.push(SimplePath {
                vertices: path.clone(),
                weight,
            });
            return;
        }
        if path.len() > max_len {
            return;
        }
        for &next in &adj[cur] {
            if visited[next] {
                continue;
            }
            let step = self.traversal_weight(cur, next).expect("edge exists");
            visited[next] = true;
            path.push(next);
            self.dfs_paths(
                adj,
                next,
                target,
                max_len,
                weight * step,
                visited,
                path,
                out,
            );
            path.pop();
            visited[next] = false;
        }
    }

    /// Subgraph induced by `vertices` (1-based ids of this graph), with
    /// vertices relabeled 1..=k in the given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Self, GraphError> {
        let mut index = std::collections::HashMap::new();
        for (k, &v) in vertices.iter().enumerate() {
            if v < 1 || v > self.n {
                return Err(GraphError::VertexOutOfRange(v, self.n));
            }
            index.insert(v, k + 1);
        }
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .filter_map(|e| {
                let (&f, &t) = (index.get(&e.from)?, index.get(&e.to)?);
                Some(Edge {
                    from: f,
                    to: t,
                    weight: e.weight,
                })
            })
            .collect();
        let loops: Vec<Loop> = self
            .loops
            .iter()
            .filter_map(|l| {
                index.get(&l.vertex).map(|&v| Loop {
                    vertex: v,
                    weight: l.weight,
                })
            })
            .collect();
        let vertex_weights = if self.kind == GraphKind::VertexWeighted {
            vertices
                .iter()
                .map(|&v| self.vertex_weights[v - 1])
                .collect()
        } else {
            vec![]
        };
        Self::build(self.kind, vertices.len(), edges, loops, vertex_weights)
    }
}

/// A simple skeleton path with its accumulated traversal weight.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplePath {
    pub vertices: Vec<usize>,
    pub weight: Complex,
}

impl SimplePath {
    /// Number of steps.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    pub(crate) fn example_2_2() -> WeightedDigraph {
        WeightedDigraph::edge_unit(
            4,
            vec![
                (1, 2, c(1.0, 0.0)),
                (1, 4, c(0.0, 1.0)),
                (2, 3, c(0.0, 1.0)),
                (4, 2, c(0.0, 1.0)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn k2_components() {
        let g = WeightedDigraph::edge_unit(2, vec![(1, 2, c(1.0, 0.0))]).unwrap();
        assert_eq!(g.underlying_components(), vec![vec![1, 2]]);
    }

    #[test]
    fn k2_hat_components() {
        // K2 plus two isolated vertices on n = 4.
        let g = WeightedDigraph::edge_unit(4, vec![(1, 2, c(1.0, 0.0))]).unwrap();
        assert_eq!(
            g.underlying_components(),
            vec![vec![1, 2], vec![3], vec![4]]
        );
    }

    #[test]
    fn example_graph_is_one_component() {
        assert_eq!(
            example_2_2().underlying_components(),
            vec![vec![1, 2, 3, 4]]
        );
    }

    #[test]
    fn degrees() {
        let g = example_2_2();
        assert_eq!(g.degree(2).unwrap(), 3.0);
        assert_eq!(g.degree(3).unwrap(), 1.0);
        let iso = WeightedDigraph::edge_unit(3, vec![(1, 2, c(1.0, 0.0))]).unwrap();
        assert_eq!(iso.degree(3).unwrap(), 0.0);
        assert!(iso.degree(4).is_err());
        // Loop contributes once to its own row.
        let gl = WeightedDigraph::edge_loop(2, vec![(1, 2, c(1.0, 0.0))], vec![(1, 0.7)]).unwrap();
        assert!((gl.degree(1).unwrap() - 1.7).abs() < 1e-15);
        assert_eq!(gl.degree(2).unwrap(), 1.0);
    }

    #[test]
    fn degree_sum_identity_edge_loop() {
        let gl = WeightedDigraph::edge_loop(
            3,
            vec![(1, 2, c(0.0, 2.0)), (2, 3, c(-0.5, 0.0))],
            vec![(2, 1.25), (3, 0.5)],
        )
        .unwrap();
        let edge_total: f64 = gl.edges().iter().map(|e| e.weight.norm()).sum();
        let loop_total: f64 = gl.loops().iter().map(|l| l.weight).sum();
        assert!((gl.total_degree() - (2.0 * edge_total + loop_total)).abs() < 1e-12);
        // Each loop shows up twice on the signless diagonal.
        let q = crate::laplacians::laplacian(&gl, crate::laplacians::MatrixFlavor::Signless);
        assert!((q.trace().re - (2.0 * edge_total + 2.0 * loop_total)).abs() < 1e-12);
    }

    #[test]
    fn simple_paths() {
        let g = WeightedDigraph::edge_unit(2, vec![(1, 2, c(1.0, 0.0))]).unwrap();
        let paths = g.enumerate_simple_paths(1, 2, 2).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].vertices, vec![1, 2]);

        let cyc = WeightedDigraph::edge_unit(
            4,
            vec![
                (1, 2, c(1.0, 0.0)),
                (2, 3, c(1.0, 0.0)),
                (3, 4, c(1.0, 0.0)),
                (4, 1, c(1.0, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(cyc.enumerate_simple_paths(1, 3, 4).unwrap().len(), 2);

        let ex = example_2_2();
        let mut paths = ex.enumerate_simple_paths(1, 2, 4).unwrap();
        paths.sort_by_key(|p| p.vertices.len());
        assert_eq!(paths.len(), 2);
        assert_eq!(paths[0].vertices, vec![1, 2]);
        assert_eq!(paths[1].vertices, vec![1, 4, 2]);
        // 1->4 along i, then 4->2 along i: weight i*i = -1.
        assert!((paths[1].weight - c(-1.0, 0.0)).norm() < 1e-15);
        // Against the direction the conjugate is picked up.
        let back = ex.enumerate_simple_paths(2, 1, 1).unwrap();
        assert!((back[0].weight - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn odd_cycles() {
        let tri = WeightedDigraph::edge_unit(
            3,
            vec![
                (1, 2, c(1.0, 0.0)),
                (2, 3, c(1.0, 0.0)),
                (3, 1, c(1.0, 0.0)),
            ],
        )
        .unwrap();
        assert!(tri.has_odd_cycle());
        let k2 = WeightedDigraph::edge_unit(2, vec![(1, 2, c(1.0, 0.0))]).unwrap();
        assert!(!k2.has_odd_cycle());
        assert!(example_2_2().has_odd_cycle());
    }

    // Oracle: exhaustive cycle enumeration agrees with the 2-coloring route.
    #[test]
    fn odd_cycle_matches_exhaustive_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let n = rng.gen_range(2..=7usize);
            let mut edges = vec![];
            for i in 1..=n {
                for j in (i + 1)..=n {
                    if rng.gen_bool(0.4) {
                        edges.push((i, j, c(1.0, 0.0)));
                    }
                }
            }
            let g = WeightedDigraph::edge_unit(n, edges.clone()).unwrap();
            // Brute force: any odd closed walk exists iff some DFS over all
            // simple cycles finds odd length; enumerate via path pairs.
            let mut brute = false;
            'outer: for a in 1..=n {
                for b in (a + 1)..=n {
                    let paths = g.enumerate_simple_paths(a, b, n).unwrap();
                    for p in &paths {
                        for q in &paths {
                            if (p.len() + q.len()) % 2 == 1
                                && p.vertices[1..p.vertices.len() - 1]
                                    .iter()
                                    .all(|x| !q.vertices[1..q.vertices.len() - 1].contains(x))
                            {
                                brute = true;
                                break 'outer;
                            }
                        }
                    }
                }
            }
            assert_eq!(g.has_odd_cycle(), brute, "n={n} edges={edges:?}");
        }
    }

    #[test]
    fn invariant_violations_rejected() {
        assert!(matches!(
            WeightedDigraph::edge_unit(2, vec![(1, 2, c(0.5, 0.0))]),
            Err(GraphError::NotUnitModulus(_))
        ));
        assert!(matches!(
            WeightedDigraph::edge_unit(2, vec![(1, 1, c(1.0, 0.0))]),
            Err(GraphError::SelfEdge(1))
        ));
        assert!(matches!(
            WeightedDigraph::edge_unit(2, vec![(1, 2, c(1.0, 0.0)), (2, 1, c(1.0, 0.0))]),
            Err(GraphError::DuplicateEdge(1, 2))
        ));
        assert!(matches!(
            WeightedDigraph::vertex_weighted(2, vec![(1, 2)], vec![c(1.0, 0.0)]),
            Err(GraphError::MissingVertexWeight(2))
        ));
        assert!(matches!(
            WeightedDigraph::vertex_weighted(2, vec![(1, 2)], vec![c(1.0, 0.0), c(0.0, 0.0)]),
            Err(GraphError::ZeroVertexWeight(2))
        ));
        assert!(matches!(
            WeightedDigraph::edge_loop(2, vec![], vec![(1, -0.5)]),
            Err(GraphError::NonPositiveLoop(_))
        ));
        assert!(matches!(
            WeightedDigraph::edge_loop(2, vec![], vec![(1, 0.5), (1, 0.7)]),
            Err(GraphError::DuplicateLoop(1))
        ));
        assert!(matches!(
            WeightedDigraph::edge_unit(0, vec![]),
            Err(GraphError::Empty)
        ));
    }
}
