//! Block decomposition and block-caterpillar recognition.
//!
//! A block caterpillar is a block graph (every biconnected component is a
//! clique) whose leaf-deleted graph is a block path. The recognized structure
//! lists the spine cliques `Q_1..Q_k` in path order together with the leaf
//! sets `L(v)`. [`anchor_and_augment`] then fixes the distinguished path
//! `v_0..v_{k+2}` that the layout engine pins to multiples of `m`.

use crate::error::{GraphError, Rejection};
use crate::graph::{Graph, Vertex};

/// Biconnected components of a connected graph. Bridges are 2-vertex blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Sorted vertex sets, one per block.
    pub blocks: Vec<Vec<Vertex>>,
    /// Number of edges inside each block.
    pub block_edges: Vec<usize>,
    /// Vertices lying in two or more blocks, sorted.
    pub cutvertices: Vec<Vertex>,
    /// Block ids containing each vertex.
    pub vertex_blocks: Vec<Vec<usize>>,
}

impl BlockDecomposition {
    pub fn is_clique(&self, block: usize) -> bool {
        let s = self.blocks[block].len();
        self.block_edges[block] == s * (s - 1) / 2
    }
}

/// Hopcroft-Tarjan biconnected components, iterative.
pub fn block_decomposition(g: &Graph) -> Result<BlockDecomposition, GraphError> {
    let n = g.vertex_count();
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    const UNSET: usize = usize::MAX;
    let mut disc = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut blocks: Vec<Vec<Vertex>> = Vec::new();
    let mut block_edges = Vec::new();
    let mut edge_stack: Vec<(Vertex, Vertex)> = Vec::new();
    // (vertex, parent, next neighbor index)
    let mut stack: Vec<(Vertex, Vertex, usize)> = Vec::new();
    let mut timer = 0;

    if n == 1 {
        blocks.push(vec![0]);
        block_edges.push(0);
    }
    if n > 1 {
        disc[0] = 0;
        low[0] = 0;
        timer = 1;
        stack.push((0, UNSET, 0));
    }
    while let Some(frame) = stack.last_mut() {
        let (v, parent, idx) = *frame;
        if idx < g.degree(v) {
            frame.2 += 1;
            let w = g.neighbors(v)[idx];
            if disc[w] == UNSET {
                disc[w] = timer;
                low[w] = timer;
                timer += 1;
                edge_stack.push((v, w));
                stack.push((w, v, 0));
            } else if w != parent && disc[w] < disc[v] {
                edge_stack.push((v, w));
                low[v] = low[v].min(disc[w]);
            }
            continue;
        }
        stack.pop();
        if parent == UNSET {
            continue;
        }
        low[parent] = low[parent].min(low[v]);
        if low[v] >= disc[parent] {
            let mut verts = Vec::new();
            let mut count = 0;
            while let Some((a, b)) = edge_stack.pop() {
                verts.push(a);
                verts.push(b);
                count += 1;
                if (a, b) == (parent, v) {
                    break;
                }
            }
            verts.sort_unstable();
            verts.dedup();
            blocks.push(verts);
            block_edges.push(count);
        }
    }

    let mut vertex_blocks = vec![Vec::new(); n];
    for (id, block) in blocks.iter().enumerate() {
        for &v in block {
            vertex_blocks[v].push(id);
        }
    }
    let cutvertices = (0..n).filter(|&v| vertex_blocks[v].len() >= 2).collect();
    Ok(BlockDecomposition {
        blocks,
        block_edges,
        cutvertices,
        vertex_blocks,
    })
}

/// True iff every block of the connected graph `g` is a clique.
pub fn is_block_graph(g: &Graph) -> Result<bool, GraphError> {
    let dec = block_decomposition(g)?;
    Ok((0..dec.blocks.len()).all(|b| dec.is_clique(b)))
}

/// A recognized block caterpillar, optionally anchored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaterpillarStructure {
    pub vertex_count: usize,
    /// Spine cliques `Q_1..Q_k` in path order, each sorted. Empty for a star.
    pub spine: Vec<Vec<Vertex>>,
    /// Center of a star (`k = 0`).
    pub center: Option<Vertex>,
    /// `v_2..v_k`: the vertex shared by consecutive spine cliques.
    pub cut_sequence: Vec<Vertex>,
    /// `L(v)` per vertex, sorted. Empty for leaves themselves.
    pub leaves: Vec<Vec<Vertex>>,
    /// `v_0..v_{k+2}` once anchored, otherwise empty.
    pub anchors: Vec<Vertex>,
    /// Vertices added by [`anchor_and_augment`]; always the highest ids.
    pub helpers: Vec<Vertex>,
}

impl CaterpillarStructure {
    /// Number of spine cliques.
    pub fn k(&self) -> usize {
        self.spine.len()
    }

    pub fn is_anchored(&self) -> bool {
        !self.anchors.is_empty()
    }

    /// `v_i` for `0 <= i <= k+2`.
    pub fn v(&self, i: usize) -> Vertex {
        self.anchors[i]
    }

    pub fn leaf_count(&self, v: Vertex) -> usize {
        self.leaves[v].len()
    }

    /// Clique `C_i` for `0 <= i <= k+1`, with the synthetic end blocks
    /// `C_0 = {v_0, v_1}` and `C_{k+1} = {v_{k+1}, v_{k+2}}`.
    pub fn clique(&self, i: usize) -> Vec<Vertex> {
        let k = self.k();
        if i == 0 {
            vec![self.v(0), self.v(1)]
        } else if i == k + 1 {
            vec![self.v(k + 1), self.v(k + 2)]
        } else {
            self.spine[i - 1].clone()
        }
    }

    /// Vertices of the spine cliques (or the star center).
    pub fn spine_vertices(&self) -> Vec<Vertex> {
        let mut all: Vec<Vertex> = self.spine.iter().flatten().copied().chain(self.center).collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    /// Indented text description used by the CLI.
    pub fn describe(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        writeln!(out, "k={}", self.k()).unwrap();
        if let Some(c) = self.center {
            writeln!(out, "center={c} leaves={}", self.leaf_count(c)).unwrap();
        }
        for (i, q) in self.spine.iter().enumerate() {
            writeln!(out, "Q{}:", i + 1).unwrap();
            for &v in q {
                writeln!(out, "  {v} leaves={}", self.leaf_count(v)).unwrap();
            }
        }
        if self.is_anchored() {
            let list: Vec<String> = self.anchors.iter().map(ToString::to_string).collect();
            writeln!(out, "anchors={}", list.join(",")).unwrap();
        }
        if !self.helpers.is_empty() {
            let list: Vec<String> = self.helpers.iter().map(ToString::to_string).collect();
            writeln!(out, "helpers={}", list.join(",")).unwrap();
        }
        out
    }
}

/// Tests membership and, on success, returns the (unanchored) structure.
pub fn recognize_block_caterpillar(g: &Graph) -> Result<CaterpillarStructure, Rejection> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Rejection::Empty);
    }
    let dec = block_decomposition(g).map_err(|_| Rejection::Disconnected)?;
    if let Some(b) = (0..dec.blocks.len()).find(|&b| !dec.is_clique(b)) {
        return Err(Rejection::NotBlockGraph {
            block: dec.blocks[b].clone(),
        });
    }

    let is_leaf: Vec<bool> = g.vertices().map(|v| g.degree(v) == 1).collect();
    let mut leaves = vec![Vec::new(); n];
    if n == 2 {
        leaves[0].push(1);
        return Ok(star(n, 0, leaves));
    }
    for v in g.vertices().filter(|&v| is_leaf[v]) {
        leaves[g.neighbors(v)[0]].push(v);
    }
    let core: Vec<Vertex> = g.vertices().filter(|&v| !is_leaf[v]).collect();
    if core.len() == 1 {
        return Ok(star(n, core[0], leaves));
    }

    // Blocks of the leaf-deleted graph are the blocks of g without leaves.
    let core_blocks: Vec<usize> = (0..dec.blocks.len())
        .filter(|&b| dec.blocks[b].iter().all(|&v| !is_leaf[v]))
        .collect();
    let mut local = vec![usize::MAX; dec.blocks.len()];
    for (i, &b) in core_blocks.iter().enumerate() {
        local[b] = i;
    }
    let mut shared: Vec<Vec<(Vertex, usize)>> = vec![Vec::new(); core_blocks.len()];
    for &v in &core {
        let mine: Vec<usize> = dec.vertex_blocks[v]
            .iter()
            .filter_map(|&b| (local[b] != usize::MAX).then_some(local[b]))
            .collect();
        match mine.len() {
            0 | 1 => {}
            2 => {
                shared[mine[0]].push((v, mine[1]));
                shared[mine[1]].push((v, mine[0]));
            }
            c => {
                return Err(Rejection::SpineNotPath {
                    reason: format!("vertex {v} lies in {c} spine blocks"),
                })
            }
        }
    }
    if let Some(b) = shared.iter().position(|s| s.len() > 2) {
        return Err(Rejection::SpineNotPath {
            reason: format!(
                "block {:?} meets {} other spine blocks",
                dec.blocks[core_blocks[b]],
                shared[b].len()
            ),
        });
    }

    // The block-cut tree of a connected graph is a tree; with all degrees at
    // most two it is a path. Walk it from an end.
    let k = core_blocks.len();
    let start = (0..k).find(|&b| shared[b].len() <= 1).expect("a path has an end");
    let mut order = vec![start];
    let mut cuts = Vec::new();
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&(v, next)) = shared[cur].iter().find(|&&(_, nb)| nb != prev) {
        cuts.push(v);
        order.push(next);
        prev = cur;
        cur = next;
    }
    debug_assert_eq!(order.len(), k);

    let mut spine: Vec<Vec<Vertex>> = order.iter().map(|&b| dec.blocks[core_blocks[b]].clone()).collect();
    if spine.last().unwrap()[0] < spine[0][0] {
        spine.reverse();
        cuts.reverse();
    }
    Ok(CaterpillarStructure {
        vertex_count: n,
        spine,
        center: None,
        cut_sequence: cuts,
        leaves,
        anchors: Vec::new(),
        helpers: Vec::new(),
    })
}

fn star(n: usize, center: Vertex, leaves: Vec<Vec<Vertex>>) -> CaterpillarStructure {
    CaterpillarStructure {
        vertex_count: n,
        spine: Vec::new(),
        center: Some(center),
        cut_sequence: Vec::new(),
        leaves,
        anchors: Vec::new(),
        helpers: Vec::new(),
    }
}

/// Chooses the anchors `v_0..v_{k+2}`, adding pendant helper vertices where
/// an end clique lacks a suitable leaf-bearing vertex.
///
/// Helpers receive ids `n, n+1, ...` so stripping them is a truncation. A
/// helper hangs off a clique vertex with no other outside neighbors, which
/// leaves the local density unchanged whenever `g` has an edge.
pub fn anchor_and_augment(s: &CaterpillarStructure, g: &Graph) -> (Graph, CaterpillarStructure) {
    let mut out = s.clone();
    out.anchors.clear();
    out.helpers.clear();
    let mut parents: Vec<Vertex> = Vec::new();
    let mut attach = |out: &mut CaterpillarStructure, parent: Vertex| -> Vertex {
        let id = out.vertex_count + parents.len();
        parents.push(parent);
        out.leaves[parent].push(id);
        out.helpers.push(id);
        id
    };

    let k = s.k();
    if k == 0 {
        let c = s.center.expect("star has a center");
        while out.leaves[c].len() < 2 {
            attach(&mut out, c);
        }
        out.anchors = vec![out.leaves[c][0], c, out.leaves[c][1]];
    } else if k == 1 {
        let q = &s.spine[0];
        let mut bearing: Vec<Vertex> = q.iter().copied().filter(|&v| !s.leaves[v].is_empty()).collect();
        let mut bare = q.iter().copied().filter(|&v| s.leaves[v].is_empty());
        while bearing.len() < 2 {
            let v = bare.next().expect("clique has at least two vertices");
            attach(&mut out, v);
            bearing.push(v);
        }
        bearing.sort_unstable();
        let (v1, v2) = (bearing[0], bearing[1]);
        out.anchors = vec![out.leaves[v1][0], v1, v2, out.leaves[v2][0]];
    } else {
        let first = end_anchor(&s.spine[0], s.cut_sequence[0], s);
        let last = end_anchor(&s.spine[k - 1], s.cut_sequence[k - 2], s);
        let v1 = match first {
            Ok(v) => v,
            Err(v) => {
                attach(&mut out, v);
                v
            }
        };
        let vk1 = match last {
            Ok(v) => v,
            Err(v) => {
                attach(&mut out, v);
                v
            }
        };
        let mut anchors = vec![out.leaves[v1][0], v1];
        anchors.extend_from_slice(&s.cut_sequence);
        anchors.push(vk1);
        anchors.push(out.leaves[vk1][0]);
        out.anchors = anchors;
    }

    out.vertex_count = s.vertex_count + parents.len();
    out.leaves.resize(out.vertex_count, Vec::new());
    let augmented = if parents.is_empty() { g.clone() } else { g.with_pendants(&parents) };
    (augmented, out)
}

/// `Ok(v)`: smallest leaf-bearing vertex of the end clique other than the
/// shared cut vertex. `Err(v)`: none exists; `v` should receive a helper leaf.
fn end_anchor(q: &[Vertex], shared: Vertex, s: &CaterpillarStructure) -> Result<Vertex, Vertex> {
    let candidates = q.iter().copied().filter(|&v| v != shared);
    candidates
        .clone()
        .find(|&v| !s.leaves[v].is_empty())
        .ok_or_else(|| candidates.min().expect("end clique has a non-shared vertex"))
}
