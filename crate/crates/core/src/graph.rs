//! Simple undirected graphs on dense vertex ids, layouts, and their text formats.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::GraphError;

pub type Vertex = usize;

/// Hop distance marker for unreachable vertices.
pub const UNREACHABLE: usize = usize::MAX;

/// Immutable simple graph. Adjacency lists are sorted and symmetric.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
}

impl Graph {
    /// Builds a graph from an edge list, dropping duplicate edges.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n] }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.adj.len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().copied().filter(move |&v| u < v).map(move |v| (u, v)))
    }

    /// Vertices of degree one.
    pub fn leaves(&self) -> Vec<Vertex> {
        self.vertices().filter(|&v| self.degree(v) == 1).collect()
    }

    /// Returns a copy with `extra` new isolated-then-attached vertices: each
    /// `(parent)` entry becomes a new vertex adjacent to `parent`.
    pub fn with_pendants(&self, parents: &[Vertex]) -> Graph {
        let mut adj = self.adj.clone();
        for &p in parents {
            let id = adj.len();
            adj.push(vec![p]);
            adj[p].push(id);
        }
        Graph { adj }
    }

    /// Subgraph induced by `keep`; vertex `keep[i]` becomes `i`.
    pub fn induced(&self, keep: &[Vertex]) -> Graph {
        let mut index = vec![UNREACHABLE; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let adj = keep
            .iter()
            .map(|&v| {
                let mut list: Vec<Vertex> = self.adj[v]
                    .iter()
                    .filter_map(|&u| (index[u] != UNREACHABLE).then_some(index[u]))
                    .collect();
                list.sort_unstable();
                list
            })
            .collect();
        Graph { adj }
    }

    /// Breadth-first hop distances; [`UNREACHABLE`] marks other components.
    pub fn distances_from(&self, source: Vertex) -> Vec<usize> {
        let mut dist = vec![UNREACHABLE; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == UNREACHABLE {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.distances_from(0).iter().all(|&d| d != UNREACHABLE)
    }

    pub fn eccentricity(&self, v: Vertex) -> Result<usize, GraphError> {
        let dist = self.distances_from(v);
        if dist.contains(&UNREACHABLE) {
            return Err(GraphError::Disconnected);
        }
        Ok(dist.into_iter().max().unwrap_or(0))
    }

    pub fn diameter(&self) -> Result<usize, GraphError> {
        let mut best = 0;
        for v in self.vertices() {
            best = best.max(self.eccentricity(v)?);
        }
        Ok(best)
    }

    /// All-pairs hop distances (row per source).
    pub fn distance_matrix(&self) -> Vec<Vec<usize>> {
        self.vertices().map(|v| self.distances_from(v)).collect()
    }
}

/// Injective map from vertices to integer positions. Positions need not be
/// consecutive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Layout {
    position: Vec<i64>,
}

impl Layout {
    /// Wraps a position vector, rejecting repeated positions.
    pub fn new(position: Vec<i64>) -> Result<Self, GraphError> {
        let mut order: Vec<Vertex> = (0..position.len()).collect();
        order.sort_by_key(|&v| position[v]);
        for w in order.windows(2) {
            if position[w[0]] == position[w[1]] {
                return Err(GraphError::DuplicatePosition {
                    first: w[0].min(w[1]),
                    second: w[0].max(w[1]),
                    position: position[w[0]],
                });
            }
        }
        Ok(Layout { position })
    }

    /// Layout placing `order[i]` at position `i`.
    pub fn from_order(order: &[Vertex]) -> Result<Self, GraphError> {
        let mut position = vec![None; order.len()];
        for (i, &v) in order.iter().enumerate() {
            if v >= order.len() {
                return Err(GraphError::VertexOutOfRange { vertex: v, n: order.len() });
            }
            if position[v].is_some() {
                return Err(GraphError::DuplicateVertex(v));
            }
            position[v] = Some(i as i64);
        }
        Ok(Layout {
            position: position.into_iter().map(|p| p.expect("permutation")).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.position.len()
    }

    pub fn is_empty(&self) -> bool {
        self.position.is_empty()
    }

    pub fn position(&self, v: Vertex) -> i64 {
        self.position[v]
    }

    pub fn positions(&self) -> &[i64] {
        &self.position
    }

    /// Vertices sorted by position.
    pub fn order(&self) -> Vec<Vertex> {
        let mut order: Vec<Vertex> = (0..self.position.len()).collect();
        order.sort_by_key(|&v| self.position[v]);
        order
    }

    /// Realized bandwidth against `g`; panics if sizes differ.
    pub fn bandwidth(&self, g: &Graph) -> u64 {
        g.edges()
            .map(|(u, v)| self.position[u].abs_diff(self.position[v]))
            .max()
            .unwrap_or(0)
    }

    /// Mirror image: position `p` becomes `max - p`.
    pub fn mirrored(&self) -> Layout {
        let max = self.position.iter().copied().max().unwrap_or(0);
        Layout {
            position: self.position.iter().map(|&p| max - p).collect(),
        }
    }

    /// Keeps the first `n` vertices.
    pub fn truncated(&self, n: usize) -> Layout {
        Layout {
            position: self.position[..n].to_vec(),
        }
    }
}

/// Computes `B(f)`, the largest edge stretch of `f` on `g`.
pub fn verify_layout(g: &Graph, f: &Layout) -> Result<u64, GraphError> {
    if f.len() != g.vertex_count() {
        return Err(GraphError::LayoutSize {
            expected: g.vertex_count(),
            got: f.len(),
        });
    }
    // Injectivity is enforced by the constructor.
    Ok(f.bandwidth(g))
}

/// Order-preserving squash of positions onto `0..n`.
pub fn condense(f: &Layout) -> Layout {
    let mut position = vec![0; f.len()];
    for (rank, v) in f.order().into_iter().enumerate() {
        position[v] = rank as i64;
    }
    Layout { position }
}

/// Parses the line-oriented graph format: `#` comments, a vertex count, then
/// one `u v` edge per line.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines = data_lines(text);
    let (first_no, first) = lines.next().ok_or(GraphError::Parse {
        line: 0,
        message: "missing vertex count".into(),
    })?;
    let mut fields = first.split_whitespace();
    let n: usize = parse_field(fields.next(), first_no, "vertex count")?;
    if fields.next().is_some() {
        return Err(GraphError::Parse {
            line: first_no,
            message: "vertex count line has extra fields".into(),
        });
    }
    let mut edges = Vec::new();
    for (no, line) in lines {
        let mut fields = line.split_whitespace();
        let u: usize = parse_field(fields.next(), no, "edge endpoint")?;
        let v: usize = parse_field(fields.next(), no, "edge endpoint")?;
        if fields.next().is_some() {
            return Err(GraphError::Parse {
                line: no,
                message: "edge line has extra fields".into(),
            });
        }
        if u >= n || v >= n {
            return Err(GraphError::Parse {
                line: no,
                message: format!("vertex id {} out of range for n = {n}", u.max(v)),
            });
        }
        if u == v {
            return Err(GraphError::Parse {
                line: no,
                message: format!("self-loop at vertex {u}"),
            });
        }
        edges.push((u, v));
    }
    Graph::from_edges(n, edges)
}

/// Canonical text form: sorted edges, `u < v`.
pub fn serialize_graph(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "{}", g.vertex_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// Parses `vertex position` pairs; every vertex `0..k` must appear exactly once.
pub fn parse_layout(text: &str) -> Result<Layout, GraphError> {
    let mut pairs: Vec<(usize, Vertex, i64)> = Vec::new();
    for (no, line) in data_lines(text) {
        let mut fields = line.split_whitespace();
        let v: usize = parse_field(fields.next(), no, "vertex")?;
        let p: i64 = parse_field(fields.next(), no, "position")?;
        if fields.next().is_some() {
            return Err(GraphError::Parse {
                line: no,
                message: "layout line has extra fields".into(),
            });
        }
        pairs.push((no, v, p));
    }
    let n = pairs.len();
    let mut position = vec![None; n];
    for (no, v, p) in pairs {
        if v >= n {
            return Err(GraphError::Parse {
                line: no,
                message: format!("vertex {v} out of range for {n} entries"),
            });
        }
        if position[v].replace(p).is_some() {
            return Err(GraphError::Parse {
                line: no,
                message: format!("vertex {v} listed twice"),
            });
        }
    }
    // n entries, none out of range, none repeated: all present.
    Layout::new(position.into_iter().map(Option::unwrap).collect())
}

pub fn serialize_layout(f: &Layout) -> String {
    let mut out = String::new();
    for (v, p) in f.positions().iter().enumerate() {
        writeln!(out, "{v} {p}").unwrap();
    }
    out
}

/// Non-empty, comment-stripped lines with 1-based line numbers.
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

pub(crate) fn parse_field<T: std::str::FromStr>(
    field: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, GraphError> {
    let field = field.ok_or_else(|| GraphError::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    field.parse().map_err(|_| GraphError::Parse {
        line,
        message: format!("invalid {what} `{field}`"),
    })
}
