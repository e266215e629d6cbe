//! Named graphs: the counterexamples `H_k` and `T_k`, the reflector `R_p`
//! with its optimal numbering, the near-caterpillar `R_b′`, and the bug built
//! from a scheduling instance.

mod reduction;
mod roles;

pub use reduction::{
    build_bug, numbering_to_schedule, pad_schedule, parse_schedule, parse_tasks, schedule_to_numbering,
    BugArtifacts, Schedule, SchedulingInstance, Segment,
};
pub use roles::{Metadata, RoleMap};

use crate::error::GadgetError;
use crate::graph::{Graph, Layout, Vertex};

/// Accumulates vertices, edges and role names.
#[derive(Default)]
pub(crate) struct Builder {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    roles: RoleMap,
}

impl Builder {
    pub fn vertex(&mut self, name: impl Into<String>) -> Vertex {
        let v = self.n;
        self.n += 1;
        self.roles.bind(name, v);
        v
    }

    pub fn anonymous(&mut self) -> Vertex {
        self.n += 1;
        self.n - 1
    }

    pub fn edge(&mut self, u: Vertex, v: Vertex) {
        self.edges.push((u, v));
    }

    pub fn clique(&mut self, vs: &[Vertex]) {
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                self.edge(u, v);
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn finish(self) -> (Graph, RoleMap) {
        let g = Graph::from_edges(self.n, self.edges).expect("builders emit valid edges");
        (g, self.roles)
    }
}

fn require(name: &'static str, value: usize, ok: bool, requirement: &'static str) -> Result<(), GadgetError> {
    if ok {
        Ok(())
    } else {
        Err(GadgetError::Parameter {
            name,
            value,
            requirement,
        })
    }
}

/// Three disjoint `K_k` on `X ∋ x`, `Y ∋ y`, `Z ∋ z` plus a `K_4` on
/// `{x, y, z, w}`. Diameter 3, local density `k` for `k ≥ 3`.
pub fn build_hk(k: usize) -> Result<(Graph, RoleMap), GadgetError> {
    require("k", k, k >= 2, "k >= 2")?;
    let mut bld = Builder::default();
    let hub: Vec<Vertex> = ["x", "y", "z", "w"].iter().map(|s| bld.vertex(*s)).collect();
    bld.clique(&hub);
    for (c, &center) in ["X", "Y", "Z"].iter().zip(&hub) {
        let mut set = vec![center];
        for i in 1..k {
            set.push(bld.vertex(format!("{c}{i}")));
        }
        bld.clique(&set);
    }
    debug_assert_eq!(bld.vertex_count(), 3 * k + 1);
    Ok(bld.finish())
}

fn spider(leaf_counts: [usize; 4]) -> (Graph, RoleMap) {
    let mut bld = Builder::default();
    let hub: Vec<Vertex> = ["x", "y", "z", "w"].iter().map(|s| bld.vertex(*s)).collect();
    for &v in &hub[..3] {
        bld.edge(v, hub[3]);
    }
    for ((c, &center), &count) in ["X", "Y", "Z", "W"].iter().zip(&hub).zip(&leaf_counts) {
        for i in 1..=count {
            let u = bld.vertex(format!("{c}{i}"));
            bld.edge(center, u);
        }
    }
    bld.finish()
}

/// Tree of diameter 4: `w` adjacent to `x, y, z`, with `k − 1` leaves on
/// each of `x, y, z` and `k` leaves on `w`.
pub fn build_tk(k: usize) -> Result<(Graph, RoleMap), GadgetError> {
    require("k", k, k >= 2, "k >= 2")?;
    let out = spider([k - 1, k - 1, k - 1, k]);
    debug_assert_eq!(out.0.vertex_count(), 4 * k + 1);
    Ok(out)
}

/// `T`-shaped tree with `|X| = |Z| = b/2`, `|Y| = b`, `|W| = 2b − 3`.
pub fn build_near_reflector(b: usize) -> Result<(Graph, RoleMap), GadgetError> {
    require("b", b, b >= 4 && b.is_multiple_of(2), "even and >= 4")?;
    let out = spider([b / 2, b, b / 2, 2 * b - 3]);
    debug_assert_eq!(out.0.vertex_count(), 4 * b + 1);
    Ok(out)
}

/// Bandwidth-`b` numbering of [`build_near_reflector`] with `x, z, w, y` at
/// `b, b+1, 2b, 3b` and `X ∪ Z` below `b`.
pub fn near_reflector_numbering(b: usize) -> Result<Layout, GadgetError> {
    let (g, roles) = build_near_reflector(b)?;
    let mut pos = vec![0i64; g.vertex_count()];
    let b = b as i64;
    let mut next = 0;
    for v in roles.members("X").into_iter().chain(roles.members("Z")) {
        pos[v] = next;
        next += 1;
    }
    for (name, at) in [("x", b), ("z", b + 1), ("w", 2 * b), ("y", 3 * b)] {
        pos[roles.expect(name)] = at;
    }
    let free = (b + 2..2 * b).chain(2 * b + 1..3 * b);
    for (v, at) in roles.members("W").into_iter().zip(free) {
        pos[v] = at;
    }
    for (v, at) in roles.members("Y").into_iter().zip(3 * b + 1..) {
        pos[v] = at;
    }
    Ok(Layout::new(pos)?)
}

/// Adds a reflector of thickness `p` to `bld`, naming roles with `prefix`.
pub(crate) fn add_reflector(bld: &mut Builder, p: usize, prefix: &str) {
    let name = |s: &str| format!("{prefix}{s}");
    let spine: Vec<Vertex> = ["a", "b", "c0", "w", "x", "y", "z"]
        .iter()
        .map(|s| bld.vertex(name(s)))
        .collect();
    for pair in spine.windows(2) {
        bld.edge(pair[0], pair[1]);
    }
    let [_, b, c0, w, x, _, _] = spine[..] else { unreachable!() };
    for i in 1..=p - 2 {
        let u = bld.vertex(name(&format!("a{i}")));
        bld.edge(b, u);
    }
    let mut clique = vec![c0, w];
    for i in 1..=p - 2 {
        clique.push(bld.vertex(name(&format!("c{i}"))));
    }
    bld.clique(&clique);
    for i in 1..=p - 2 {
        let u = bld.vertex(name(&format!("y{i}")));
        bld.edge(x, u);
    }
    let hairs: Vec<Vertex> = (1..=p).map(|i| bld.vertex(name(&format!("w{i}")))).collect();
    for (i, &h) in hairs.iter().enumerate() {
        let tip = bld.vertex(name(&format!("w'{}", i + 1)));
        bld.edge(w, h);
        bld.edge(h, tip);
    }
}

/// The reflector `R_p`: spine `a b c0 w x y z` with `p − 2` extra leaves on
/// `b` and on `x`, a clique `c1..c{p-2}` joined to both `c0` and `w`, and
/// `p` paths of length two hanging from `w`.
pub fn build_reflector(p: usize) -> Result<(Graph, RoleMap), GadgetError> {
    require("p", p, p >= 4, "p >= 4")?;
    let mut bld = Builder::default();
    add_reflector(&mut bld, p, "");
    debug_assert_eq!(bld.vertex_count(), 5 * p + 1);
    Ok(bld.finish())
}

/// Reflector roles in placement order. `a_first` swaps the roles of the
/// pairs `(z, a)`, `(y, b)` and `(x, c0)` so that `a` sits at the bottom.
pub(crate) fn reflector_order(roles: &RoleMap, p: usize, prefix: &str, a_first: bool) -> Vec<Vertex> {
    let get = |s: &str| roles.expect(&format!("{prefix}{s}"));
    fn series(s: &'static str, hi: usize) -> impl Iterator<Item = String> {
        (1..=hi).map(move |i| format!("{s}{i}"))
    }
    let pairs = if a_first {
        [("a", "z"), ("b", "y"), ("c0", "x")]
    } else {
        [("z", "a"), ("y", "b"), ("x", "c0")]
    };
    let mut order = vec![get(pairs[0].0), get(pairs[0].1)];
    order.extend(series("a", p - 2).map(|s| get(&s)));
    order.extend([get(pairs[1].0), get(pairs[1].1)]);
    order.extend(series("y", p - 2).map(|s| get(&s)));
    order.extend([get(pairs[2].0), get(pairs[2].1)]);
    order.extend(series("c", p - 2).map(|s| get(&s)));
    order.push(get("w"));
    order.extend(series("w", p).map(|s| get(&s)));
    order.extend(series("w'", p).map(|s| get(&s)));
    order
}

/// Optimal numbering of `R_p`: `z, a, a1.., y, b, y1.., x, c0, c1.., w,
/// w1..wp, w'1..w'p` at positions `0..=5p`.
pub fn reflector_numbering(p: usize) -> Result<Layout, GadgetError> {
    let (_, roles) = build_reflector(p)?;
    Ok(Layout::from_order(&reflector_order(&roles, p, "", false))?)
}

/// Vertices of maximum eccentricity.
pub fn peripheral_vertices(g: &Graph) -> Result<Vec<Vertex>, GadgetError> {
    let ecc: Vec<usize> = g.vertices().map(|v| g.eccentricity(v)).collect::<Result<_, _>>()?;
    let top = ecc.iter().copied().max().unwrap_or(0);
    Ok(g.vertices().filter(|&v| ecc[v] == top).collect())
}

/// Lower-bound certificate for a reflector: deleting the peripheral
/// vertices leaves a subgraph with `n′` vertices and diameter `d`, so
/// `B ≥ ⌈(n′ − 1)/d⌉`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DensityCertificate {
    pub vertices: usize,
    pub diameter: usize,
    pub bound: usize,
}

pub fn reflector_certificate(g: &Graph) -> Result<DensityCertificate, GadgetError> {
    let drop = peripheral_vertices(g)?;
    let keep: Vec<Vertex> = g.vertices().filter(|v| !drop.contains(v)).collect();
    let sub = g.induced(&keep);
    let diameter = sub.diameter()?;
    let vertices = sub.vertex_count();
    Ok(DensityCertificate {
        vertices,
        diameter,
        bound: (vertices - 1).div_ceil(diameter.max(1)),
    })
}

/// True iff every listed vertex sits below `low`, or every one above `high`.
pub fn check_end_anchoring(f: &Layout, roles: &[Vertex], low: i64, high: i64) -> bool {
    roles.iter().all(|&v| f.position(v) < low) || roles.iter().all(|&v| f.position(v) > high)
}
