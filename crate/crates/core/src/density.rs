//! Local density `β(G) = max ⌈(n(H) − 1) / diam H⌉` over connected subgraphs.
//!
//! Two routes: exhaustive subset enumeration for small graphs, and the closed
//! form `max{β₁, β₂, β′}` for anchored block caterpillars, where `β′` ranges
//! over the maximal subgraphs `G(h, i)` spanned by consecutive cliques.

use crate::error::DensityError;
use crate::graph::{Graph, Vertex};
use crate::recognition::CaterpillarStructure;

pub const DEFAULT_CAP: usize = 16;

/// Components of the structured density formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub beta: usize,
    /// Largest clique order minus one.
    pub beta1: usize,
    /// Largest `⌈d(v)/2⌉`.
    pub beta2: usize,
    pub beta_prime: usize,
    /// `(h, i)` attaining `beta_prime`, lexicographically first.
    pub witness: (usize, usize),
}

impl std::fmt::Display for DensityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "beta={} beta1={} beta2={} beta_prime={} witness=({},{})",
            self.beta, self.beta1, self.beta2, self.beta_prime, self.witness.0, self.witness.1
        )
    }
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Exact local density by enumerating vertex subsets.
///
/// Only induced subgraphs are considered: extra edges never increase the
/// diameter on a fixed vertex set. Subsets that cannot beat the current best
/// are skipped before their diameter is computed.
pub fn local_density_bruteforce(g: &Graph, cap: usize) -> Result<usize, DensityError> {
    let n = g.vertex_count();
    if n > cap || n > 30 {
        return Err(DensityError::TooLarge { n, cap: cap.min(30) });
    }
    if n == 0 {
        return Ok(0);
    }
    if !g.is_connected() {
        return Err(DensityError::Disconnected);
    }
    if g.edge_count() == 0 {
        return Ok(0);
    }
    let adj: Vec<u32> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();

    let mut best = 1usize;
    for mask in 1u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        // (size - 1) / d > best needs d <= (size - 2) / best.
        if size < 2 + best {
            continue;
        }
        let dmax = (size - 2) / best;
        if let Some(d) = bounded_diameter(&adj, mask, dmax) {
            best = best.max(ceil_div(size - 1, d));
        }
    }
    Ok(best)
}

/// Diameter of the subgraph induced by `mask` if it is connected with
/// diameter at most `limit`.
fn bounded_diameter(adj: &[u32], mask: u32, limit: usize) -> Option<usize> {
    let mut diam = 0;
    let mut rest = mask;
    while rest != 0 {
        let s = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let mut seen = 1u32 << s;
        let mut frontier = seen;
        let mut steps = 0;
        while seen != mask {
            if steps == limit {
                return None;
            }
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= adj[v];
            }
            next &= mask & !seen;
            if next == 0 {
                return None;
            }
            seen |= next;
            frontier = next;
            steps += 1;
        }
        diam = diam.max(steps);
    }
    Some(diam)
}

/// One clique vertex of a spine profile: it lies in cliques `lo..=hi`
/// (`hi <= lo + 1`) and carries `leaves` pendant vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Member {
    pub lo: usize,
    pub hi: usize,
    pub leaves: usize,
}

/// Clique sizes `|C_0|..|C_K|` and the clique vertices with their leaf
/// counts. Enough to evaluate the structured formula on any block path with
/// pendant leaves, including the auxiliary graphs built during layout.
#[derive(Clone, Debug, Default)]
pub(crate) struct SpineProfile {
    pub clique_sizes: Vec<usize>,
    pub members: Vec<Member>,
}

impl SpineProfile {
    pub fn vertex_count(&self) -> usize {
        self.members.iter().map(|m| 1 + m.leaves).sum()
    }

    pub fn degree(&self, m: &Member) -> usize {
        (m.lo..=m.hi).map(|j| self.clique_sizes[j] - 1).sum::<usize>() + m.leaves
    }

    pub fn report(&self) -> DensityReport {
        let last = self.clique_sizes.len() - 1;
        let beta1 = self.clique_sizes.iter().map(|s| s - 1).max().unwrap_or(0);
        let any_leaf = self.members.iter().any(|m| m.leaves > 0);
        let beta2 = self
            .members
            .iter()
            .map(|m| ceil_div(self.degree(m), 2))
            .max()
            .unwrap_or(0)
            .max(usize::from(any_leaf));

        // Vertices meeting G(h, i): clique vertices whose clique range, widened
        // by one on each side, meets [h, i]; leaves whose parent's range does.
        // below[h]: spans ending before h; above[i]: spans starting after i.
        let mut end_count = vec![0usize; last + 2];
        let mut start_count = vec![0usize; last + 2];
        let mut total = 0;
        for m in &self.members {
            let spans = [
                (m.lo.saturating_sub(1), (m.hi + 1).min(last), 1),
                (m.lo, m.hi, m.leaves),
            ];
            for (a, b, c) in spans {
                total += c;
                end_count[b] += c;
                start_count[a] += c;
            }
        }
        let mut below = vec![0usize; last + 1];
        for h in 1..=last {
            below[h] = below[h - 1] + end_count[h - 1];
        }
        let mut above = vec![0usize; last + 1];
        for i in (0..last).rev() {
            above[i] = above[i + 1] + start_count[i + 1];
        }

        let mut beta_prime = 0;
        let mut witness = (0, 0);
        for h in 0..=last {
            for i in h..=last {
                let count = total - below[h] - above[i];
                let value = ceil_div(count.saturating_sub(1), i - h + 3);
                if value > beta_prime {
                    beta_prime = value;
                    witness = (h, i);
                }
            }
        }
        DensityReport {
            beta: beta1.max(beta2).max(beta_prime),
            beta1,
            beta2,
            beta_prime,
            witness,
        }
    }
}

/// Profile of an anchored structure: `C_0 = {v_0, v_1}`, `C_j = Q_j`,
/// `C_{k+1} = {v_{k+1}, v_{k+2}}`. Anchor leaves count as clique vertices.
pub(crate) fn structure_profile(s: &CaterpillarStructure) -> SpineProfile {
    let k = s.k();
    let cliques: Vec<Vec<Vertex>> = (0..=k + 1).map(|i| s.clique(i)).collect();
    let v0 = s.v(0);
    let vend = s.v(k + 2);
    let mut members = Vec::new();
    let mut range: std::collections::BTreeMap<Vertex, (usize, usize)> = Default::default();
    for (j, c) in cliques.iter().enumerate() {
        for &v in c {
            range.entry(v).and_modify(|r| r.1 = j).or_insert((j, j));
        }
    }
    for (&v, &(lo, hi)) in &range {
        let leaves = s.leaves[v].iter().filter(|&&u| u != v0 && u != vend).count();
        members.push(Member { lo, hi, leaves });
    }
    SpineProfile {
        clique_sizes: cliques.iter().map(Vec::len).collect(),
        members,
    }
}

/// Structured local density of an anchored block caterpillar in
/// `O(n + k²)`.
pub fn local_density_structured(s: &CaterpillarStructure, g: &Graph) -> Result<DensityReport, DensityError> {
    if !s.is_anchored() {
        return Err(DensityError::Mismatch("structure is not anchored".into()));
    }
    if s.vertex_count != g.vertex_count() {
        return Err(DensityError::Mismatch(format!(
            "structure has {} vertices, graph has {}",
            s.vertex_count,
            g.vertex_count()
        )));
    }
    let profile = structure_profile(s);
    if profile.vertex_count() != g.vertex_count() {
        return Err(DensityError::Mismatch(format!(
            "structure covers {} vertices, graph has {}",
            profile.vertex_count(),
            g.vertex_count()
        )));
    }
    let edges: usize = profile
        .members
        .iter()
        .map(|m| profile.degree(m) + m.leaves)
        .sum::<usize>();
    if edges != 2 * g.edge_count() {
        return Err(DensityError::Mismatch(format!(
            "structure implies {} edges, graph has {}",
            edges / 2,
            g.edge_count()
        )));
    }
    if g.vertex_count() - s.helpers.len() <= 1 {
        // A lone vertex: the anchors are all helpers and carry no density.
        return Ok(DensityReport {
            beta: 0,
            beta1: 0,
            beta2: 0,
            beta_prime: 0,
            witness: (0, 0),
        });
    }
    Ok(profile.report())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{build_hk, build_near_reflector, build_tk};
    use crate::recognition::{anchor_and_augment, recognize_block_caterpillar};

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    fn structured(g: &Graph) -> DensityReport {
        let s = recognize_block_caterpillar(g).unwrap();
        let (aug, a) = anchor_and_augment(&s, g);
        local_density_structured(&a, &aug).unwrap()
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(local_density_bruteforce(&path(9), 16).unwrap(), 1);
        assert_eq!(local_density_bruteforce(&build_hk(3).unwrap().0, 16).unwrap(), 3);
        // At k = 2 the star at w (degree 5) dominates; from k = 3 on it is k.
        assert_eq!(local_density_bruteforce(&build_tk(2).unwrap().0, 16).unwrap(), 3);
        assert_eq!(local_density_bruteforce(&build_tk(3).unwrap().0, 16).unwrap(), 3);
        assert_eq!(local_density_bruteforce(&complete(6), 16).unwrap(), 5);
        assert_eq!(local_density_bruteforce(&Graph::empty(1), 16).unwrap(), 0);
        assert!(matches!(
            local_density_bruteforce(&path(17), 16),
            Err(DensityError::TooLarge { n: 17, cap: 16 })
        ));
    }

    #[test]
    fn structured_examples() {
        assert_eq!(structured(&build_hk(2).unwrap().0).beta, 3);
        let star = Graph::from_edges(6, (1..6).map(|i| (0, i))).unwrap();
        let r = structured(&star);
        assert_eq!((r.beta, r.beta2), (3, 3));
        let r = structured(&complete(6));
        assert_eq!((r.beta, r.beta1), (5, 5));
        assert_eq!(structured(&path(12)).beta, 1);
    }

    #[test]
    fn near_reflector_density() {
        let (g, _) = build_near_reflector(4).unwrap();
        assert_eq!(g.vertex_count(), 17);
        // Too large for the default cap but cheap enough at 17 vertices.
        assert_eq!(local_density_bruteforce(&g, 17).unwrap(), 4);
    }

    #[test]
    fn mismatch_is_reported() {
        let g = path(5);
        let s = recognize_block_caterpillar(&g).unwrap();
        let (aug, a) = anchor_and_augment(&s, &g);
        assert!(local_density_structured(&s, &g).is_err());
        assert!(local_density_structured(&a, &path(aug.vertex_count() + 1)).is_err());
    }

    #[test]
    fn report_display() {
        let r = structured(&build_hk(2).unwrap().0);
        assert!(r.to_string().starts_with("beta=3 beta1=3"));
    }
}
