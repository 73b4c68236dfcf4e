//! Simple undirected graphs on `L` labelled vertices.
//!
//! A graph is stored as the upper triangle of its adjacency matrix packed
//! into a bitmask. Pair `(u, v)` with `u < v` occupies bit
//! `u * (2L - u - 1) / 2 + (v - u - 1)`, i.e. the upper triangle is read row
//! by row: `(0,1), (0,2), .., (0,L-1), (1,2), ..`. For `L <= 11` the whole
//! mask fits into one `u64`, which is what [`enumerate_graphs`] iterates over.
//!
//! Vertices are 0-indexed. The star centre is vertex 0.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Default largest `L` accepted by [`enumerate_graphs`] (2^21 labelled graphs).
pub const DEFAULT_ENUMERATION_CAP: usize = 7;

/// Largest `L` whose upper triangle fits in a single `u64`.
pub const MAX_SINGLE_WORD_VERTICES: usize = 11;

/// Undirected simple graph, immutable once built.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    vertex_count: usize,
    bits: Box<[u64]>,
}

#[inline]
fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

#[inline]
fn pair_index(n: usize, u: usize, v: usize) -> usize {
    let (u, v) = if u < v { (u, v) } else { (v, u) };
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

impl Graph {
    /// Graph on `vertex_count` vertices with no edges.
    ///
    /// Panics if `vertex_count == 0`.
    pub fn empty(vertex_count: usize) -> Self {
        assert!(vertex_count >= 1, "a graph needs at least one vertex");
        let words = pair_count(vertex_count).div_ceil(64).max(1);
        Graph {
            vertex_count,
            bits: vec![0u64; words].into_boxed_slice(),
        }
    }

    /// Builds a graph from explicit edges. Duplicates (in either orientation)
    /// collapse to one edge.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if vertex_count == 0 {
            return Err(Error::TooFewVertices {
                kind: "any",
                min: 1,
                got: 0,
            });
        }
        let mut g = Graph::empty(vertex_count);
        for (u, v) in edges {
            if u == v || u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidEdge { u, v, vertex_count });
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    /// Graph whose single-word upper-triangle mask is `mask`.
    ///
    /// Panics if `vertex_count` is 0 or above [`MAX_SINGLE_WORD_VERTICES`],
    /// or if `mask` has bits beyond the `L(L-1)/2` pairs.
    pub fn from_mask(vertex_count: usize, mask: u64) -> Self {
        assert!((1..=MAX_SINGLE_WORD_VERTICES).contains(&vertex_count));
        let pairs = pair_count(vertex_count);
        assert!(pairs == 64 || mask >> pairs == 0, "mask has stray bits");
        Graph {
            vertex_count,
            bits: vec![mask].into_boxed_slice(),
        }
    }

    fn set_edge(&mut self, u: usize, v: usize) {
        let k = pair_index(self.vertex_count, u, v);
        self.bits[k / 64] |= 1u64 << (k % 64);
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// The upper-triangle bitmask, when it fits into one word.
    pub fn mask(&self) -> Option<u64> {
        (self.bits.len() == 1).then(|| self.bits[0])
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u == v || u >= self.vertex_count || v >= self.vertex_count {
            return false;
        }
        let k = pair_index(self.vertex_count, u, v);
        self.bits[k / 64] >> (k % 64) & 1 == 1
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Edges as `(u, v)` with `u < v`, in bit order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertex_count;
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..n {
            for v in (u + 1)..n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count).filter(move |&u| self.has_edge(u, v))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).count()
    }

    /// `Some(r)` if every vertex has degree `r`.
    pub fn regular_degree(&self) -> Option<usize> {
        let r = self.degree(0);
        (1..self.vertex_count)
            .all(|v| self.degree(v) == r)
            .then_some(r)
    }

    /// Dense symmetric 0/1 adjacency matrix.
    pub fn adjacency(&self) -> DMatrix<f64> {
        let n = self.vertex_count;
        let mut a = DMatrix::zeros(n, n);
        for (u, v) in self.edges() {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        a
    }

    /// True iff every vertex is reachable from vertex 0.
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count;
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for w in self.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == n
    }

    /// A 2-colouring if one exists. The lowest vertex of each component
    /// gets label 0.
    pub fn bipartition(&self) -> Option<Bipartition> {
        let n = self.vertex_count;
        let mut side: Vec<Option<u8>> = vec![None; n];
        let mut queue = VecDeque::new();
        for start in 0..n {
            if side[start].is_some() {
                continue;
            }
            side[start] = Some(0);
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                let su = side[u].unwrap();
                for w in self.neighbors(u) {
                    match side[w] {
                        None => {
                            side[w] = Some(1 - su);
                            queue.push_back(w);
                        }
                        Some(sw) if sw == su => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(Bipartition {
            sides: side.into_iter().map(Option::unwrap).collect(),
        })
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Star with centre 0 joined to every other vertex. `L >= 1`.
    pub fn star(vertex_count: usize) -> Result<Self> {
        Self::generate(GraphKind::Star, vertex_count)
    }

    /// The `L`-cycle. `L >= 3`.
    pub fn ring(vertex_count: usize) -> Result<Self> {
        Self::generate(GraphKind::Ring, vertex_count)
    }

    /// Path `0 - 1 - .. - (L-1)`. `L >= 1`.
    pub fn path(vertex_count: usize) -> Result<Self> {
        Self::generate(GraphKind::Path, vertex_count)
    }

    /// All `L(L-1)/2` edges. `L >= 1`.
    pub fn complete(vertex_count: usize) -> Result<Self> {
        Self::generate(GraphKind::Complete, vertex_count)
    }

    pub fn generate(kind: GraphKind, vertex_count: usize) -> Result<Self> {
        let min = kind.min_vertices();
        if vertex_count < min {
            return Err(Error::TooFewVertices {
                kind: kind.name(),
                min,
                got: vertex_count,
            });
        }
        let n = vertex_count;
        let mut g = Graph::empty(n);
        match kind {
            GraphKind::Star => (1..n).for_each(|v| g.set_edge(0, v)),
            GraphKind::Path => (1..n).for_each(|v| g.set_edge(v - 1, v)),
            GraphKind::Ring => (0..n).for_each(|v| g.set_edge(v, (v + 1) % n)),
            GraphKind::Complete => {
                for u in 0..n {
                    for v in (u + 1)..n {
                        g.set_edge(u, v);
                    }
                }
            }
        }
        Ok(g)
    }

    /// Parses an edge-list document: one whitespace-separated `u v` pair per
    /// line, `#` starts a comment, blank lines are skipped.
    pub fn from_edge_list(text: &str, vertex_count: usize) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::TooFewVertices {
                kind: "edge-list",
                min: 1,
                got: 0,
            });
        }
        let mut g = Graph::empty(vertex_count);
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let fields: Vec<&str> = body.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line,
                    message: format!("expected two vertex ids, found {}", fields.len()),
                });
            }
            let mut ends = [0usize; 2];
            for (slot, field) in ends.iter_mut().zip(&fields) {
                *slot = field.parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("`{field}` is not a vertex id"),
                })?;
                if *slot >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        line,
                        vertex: *slot,
                        vertex_count,
                    });
                }
            }
            if ends[0] == ends[1] {
                return Err(Error::SelfLoop {
                    line,
                    vertex: ends[0],
                });
            }
            g.set_edge(ends[0], ends[1]);
        }
        Ok(g)
    }

    /// Edge-list text accepted by [`Graph::from_edge_list`].
    pub fn to_edge_list(&self) -> String {
        self.edges()
            .into_iter()
            .map(|(u, v)| format!("{u} {v}\n"))
            .collect()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertex_count", &self.vertex_count)
            .field("edges", &self.edges())
            .finish()
    }
}

/// Per-vertex side label of a bipartite graph: `label(j)` is the
/// characteristic function of part A.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    sides: Vec<u8>,
}

impl Bipartition {
    pub fn label(&self, v: usize) -> u8 {
        self.sides[v]
    }

    pub fn labels(&self) -> &[u8] {
        &self.sides
    }

    /// Checks that every edge of `g` joins opposite sides.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        self.sides.len() == g.vertex_count()
            && g.edges()
                .iter()
                .all(|&(u, v)| self.sides[u] != self.sides[v])
    }
}

/// Named graph families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    Star,
    Ring,
    Path,
    Complete,
}

impl GraphKind {
    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Star => "star",
            GraphKind::Ring => "ring",
            GraphKind::Path => "path",
            GraphKind::Complete => "complete",
        }
    }

    pub fn min_vertices(self) -> usize {
        match self {
            GraphKind::Ring => 3,
            _ => 1,
        }
    }
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "star" => Ok(GraphKind::Star),
            "ring" => Ok(GraphKind::Ring),
            "path" => Ok(GraphKind::Path),
            "complete" => Ok(GraphKind::Complete),
            other => Err(Error::UnknownGraphKind(other.to_string())),
        }
    }
}

/// Number of labelled graphs on `L` vertices, `2^(L(L-1)/2)`.
pub fn graph_count(vertex_count: usize) -> u64 {
    1u64 << pair_count(vertex_count)
}

/// Iterator over labelled graphs in increasing mask order.
#[derive(Clone, Debug)]
pub struct GraphIter {
    vertex_count: usize,
    next: u64,
    end: u64,
    connected_only: bool,
}

impl GraphIter {
    /// Restricts iteration to masks in `start..end` (clamped to the valid range).
    pub fn with_range(mut self, start: u64, end: u64) -> Self {
        let total = graph_count(self.vertex_count);
        self.next = start.min(total);
        self.end = end.min(total);
        self
    }
}

impl Iterator for GraphIter {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        while self.next < self.end {
            let g = Graph::from_mask(self.vertex_count, self.next);
            self.next += 1;
            if !self.connected_only || g.is_connected() {
                return Some(g);
            }
        }
        None
    }
}

/// Every labelled graph on `vertex_count` vertices, exactly once, in
/// increasing upper-triangle mask order. Refuses `L` above
/// [`DEFAULT_ENUMERATION_CAP`].
pub fn enumerate_graphs(vertex_count: usize, connected_only: bool) -> Result<GraphIter> {
    enumerate_graphs_with_cap(vertex_count, connected_only, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_graphs_with_cap(
    vertex_count: usize,
    connected_only: bool,
    cap: usize,
) -> Result<GraphIter> {
    let cap = cap.min(MAX_SINGLE_WORD_VERTICES);
    if vertex_count > cap {
        return Err(Error::EnumerationCap { vertex_count, cap });
    }
    if vertex_count == 0 {
        return Err(Error::TooFewVertices {
            kind: "enumerated",
            min: 1,
            got: 0,
        });
    }
    Ok(GraphIter {
        vertex_count,
        next: 0,
        end: graph_count(vertex_count),
        connected_only,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    #[test]
    fn parses_path() {
        let g = Graph::from_edge_list("0 1\n1 2", 3).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(g, Graph::path(3).unwrap());
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = Graph::from_edge_list("0 1\n1 0", 2).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# triangle\n\n0 1  # first\n1\t2\n   \n2 0\n";
        let g = Graph::from_edge_list(text, 3).unwrap();
        assert_eq!(g, Graph::complete(3).unwrap());
    }

    #[test]
    fn edge_list_errors_name_the_line() {
        assert_eq!(
            Graph::from_edge_list("0 0", 2),
            Err(Error::SelfLoop { line: 1, vertex: 0 })
        );
        assert_eq!(
            Graph::from_edge_list("0 1\n\n1 3", 3),
            Err(Error::VertexOutOfRange {
                line: 3,
                vertex: 3,
                vertex_count: 3
            })
        );
        assert!(matches!(
            Graph::from_edge_list("0 1 2", 3),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Graph::from_edge_list("0 x", 3),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Graph::from_edge_list("-1 2", 3),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn named_generators() {
        let star = Graph::star(5).unwrap();
        assert_eq!(star.edge_count(), 4);
        assert!(star.edges().iter().all(|&(u, _)| u == 0));
        assert_eq!(Graph::complete(4).unwrap().edge_count(), 6);
        assert_eq!(Graph::ring(3).unwrap(), Graph::complete(3).unwrap());
        assert_eq!(Graph::ring(5).unwrap().regular_degree(), Some(2));
        assert!(matches!(
            Graph::ring(2),
            Err(Error::TooFewVertices { min: 3, .. })
        ));
        assert!(Graph::star(0).is_err());
        assert_eq!(Graph::star(1).unwrap().edge_count(), 0);
    }

    #[test]
    fn large_graphs_span_words() {
        let g = Graph::complete(20).unwrap();
        assert_eq!(g.edge_count(), 190);
        assert!(g.mask().is_none());
        assert!(g.has_edge(18, 19) && g.has_edge(19, 0));
    }

    #[test]
    fn connectivity() {
        assert!(Graph::star(5).unwrap().is_connected());
        assert!(!Graph::empty(2).is_connected());
        let broken = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!broken.is_connected());
        assert!(Graph::empty(1).is_connected());
    }

    #[test]
    fn bipartitions() {
        let ring4 = Graph::ring(4).unwrap().bipartition().unwrap();
        assert_eq!(ring4.labels(), &[0, 1, 0, 1]);
        assert!(Graph::ring(3).unwrap().bipartition().is_none());
        let star = Graph::star(5).unwrap().bipartition().unwrap();
        assert_eq!(star.labels(), &[0, 1, 1, 1, 1]);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_graphs(3, false).unwrap().count(), 8);
        assert_eq!(enumerate_graphs(4, false).unwrap().count(), 64);
        assert_eq!(enumerate_graphs(4, true).unwrap().count(), 38);
        assert_eq!(
            enumerate_graphs(8, false).unwrap_err(),
            Error::EnumerationCap {
                vertex_count: 8,
                cap: 7
            }
        );
    }

    #[test]
    fn enumeration_is_mask_ordered() {
        let masks: Vec<u64> = enumerate_graphs(4, false)
            .unwrap()
            .map(|g| g.mask().unwrap())
            .collect();
        assert_eq!(masks, (0..64).collect::<Vec<_>>());
        let part: Vec<u64> = enumerate_graphs(4, false)
            .unwrap()
            .with_range(10, 20)
            .map(|g| g.mask().unwrap())
            .collect();
        assert_eq!(part, (10..20).collect::<Vec<_>>());
    }

    #[test]
    fn enumeration_yields_unique_graphs() {
        let seen: HashSet<Graph> = enumerate_graphs(5, false).unwrap().collect();
        assert_eq!(seen.len(), 1 << 10);
    }

    fn has_odd_cycle(g: &Graph) -> bool {
        // Odd closed walk from v to v of length <= 2L-1 exists iff an odd cycle exists.
        let n = g.vertex_count();
        (0..n).any(|start| {
            let mut reach = vec![false; n];
            reach[start] = true;
            (1..2 * n).any(|len| {
                let mut next = vec![false; n];
                for u in (0..n).filter(|&u| reach[u]) {
                    for w in g.neighbors(u) {
                        next[w] = true;
                    }
                }
                reach = next;
                len % 2 == 1 && reach[start]
            })
        })
    }

    #[test]
    fn bipartite_iff_no_odd_cycle() {
        for l in 1..=5 {
            for g in enumerate_graphs(l, false).unwrap() {
                match g.bipartition() {
                    Some(b) => {
                        assert!(b.is_valid_for(&g));
                        assert!(!has_odd_cycle(&g), "{g:?}");
                    }
                    None => assert!(has_odd_cycle(&g), "{g:?}"),
                }
            }
        }
    }

    proptest! {
        #[test]
        fn adjacency_is_symmetric_zero_diagonal(l in 1usize..=11, seed in any::<u64>()) {
            let pairs = l * (l - 1) / 2;
            let mask = if pairs == 64 { seed } else { seed & ((1u64 << pairs) - 1) };
            let g = Graph::from_mask(l, mask);
            let a = g.adjacency();
            for u in 0..l {
                prop_assert_eq!(a[(u, u)], 0.0);
                for v in 0..l {
                    prop_assert_eq!(a[(u, v)], a[(v, u)]);
                    prop_assert!(a[(u, v)] == 0.0 || a[(u, v)] == 1.0);
                }
            }
            let rebuilt = Graph::from_edge_list(&g.to_edge_list(), l).unwrap();
            prop_assert_eq!(rebuilt, g);
        }

        #[test]
        fn stars_are_connected_and_bipartite(l in 2usize..40) {
            let g = Graph::star(l).unwrap();
            prop_assert!(g.is_connected());
            prop_assert!(g.is_bipartite());
        }
    }
}
