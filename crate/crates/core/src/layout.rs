//! Optimal layouts for block caterpillars.
//!
//! The construction works on an anchored structure with target width `m`
//! and pins `v_i` to position `i·m`. The open intervals
//! `J_i = {im+1, …, (i+1)m−1}` between anchors fill from the left. Each
//! spine clique is handled by a clique-star placement on `[(i−1)m, (i+2)m]`
//! that keeps the positions already fixed by the previous phase.

use std::collections::HashSet;

use crate::density::{local_density_structured, Member, SpineProfile};
use crate::error::{LayoutError, Rejection};
use crate::graph::{condense, verify_layout, Graph, Layout, Vertex};
use crate::recognition::{anchor_and_augment, recognize_block_caterpillar, CaterpillarStructure};

/// Which placement rule a clique-star phase used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CliqueStarCase {
    /// Leaves of `X′` fit below `m`.
    SmallLeafMass,
    /// `J_0` is full of leaves and `x_r` keeps its remaining leaves below `2m`.
    MediumMass,
    /// The leaves of `x_r` straddle the clique block.
    Straddle,
}

/// Bookkeeping of one clique-star placement, in local positions `0..=3m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueStarPlan {
    /// Leaf-bearing clique vertices `x_0..x_t`, entry first and exit last.
    pub x: Vec<Vertex>,
    /// `|Q| − 1`.
    pub q: usize,
    /// Vertex count of the clique-star minus one.
    pub n_minus_one: usize,
    /// Leaves of `x_0..x_{t−1}`.
    pub l_prime: usize,
    /// Least index whose cumulative leaf count reaches `m`.
    pub r: Option<usize>,
    pub p: usize,
    pub p_prime: usize,
    /// Position of `x_r` (straddle), top of the clique block (medium) or `m`.
    pub s: i64,
    pub case: CliqueStarCase,
}

/// A left-justified `m`-representation with its interval bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JustifiedLayout {
    pub layout: Layout,
    pub m: usize,
    /// `f(v_i)` for `i = 0..=k+2`.
    pub anchor_positions: Vec<i64>,
    /// Filled prefix length of each `J_i`, `i = 0..=k+1`.
    pub filled: Vec<usize>,
    pub plans: Vec<CliqueStarPlan>,
    /// Leaf edges longer than `m` observed after any phase.
    pub leaf_edge_violations: usize,
}

/// Moves leaves between leaf positions so that leaf order follows parent
/// order. Non-leaf positions are untouched and the bandwidth never grows.
pub fn repair_faithful(g: &Graph, f: &Layout) -> Layout {
    let leaves = pendant_leaves(g);
    if leaves.is_empty() {
        return f.clone();
    }
    let mut slots: Vec<i64> = leaves.iter().map(|&(u, _)| f.position(u)).collect();
    slots.sort_unstable();
    let mut ordered = leaves;
    ordered.sort_by_key(|&(u, parent)| (f.position(parent), f.position(u)));
    let mut position = f.positions().to_vec();
    for ((u, _), slot) in ordered.into_iter().zip(slots) {
        position[u] = slot;
    }
    Layout::new(position).expect("leaf positions are permuted among themselves")
}

/// True iff leaves appear in the same order as their parents.
pub fn is_faithful(g: &Graph, f: &Layout) -> bool {
    let mut leaves = pendant_leaves(g);
    leaves.sort_by_key(|&(u, parent)| (f.position(parent), f.position(u)));
    leaves.windows(2).all(|w| {
        f.position(w[0].0) < f.position(w[1].0) || f.position(w[0].1) == f.position(w[1].1)
    })
}

/// `(leaf, parent)` pairs; the two ends of an isolated edge are skipped.
fn pendant_leaves(g: &Graph) -> Vec<(Vertex, Vertex)> {
    g.vertices()
        .filter(|&u| g.degree(u) == 1 && g.degree(g.neighbors(u)[0]) > 1)
        .map(|u| (u, g.neighbors(u)[0]))
        .collect()
}

/// A clique with pendant leaves, given in placement order.
struct StarSpec {
    members: Vec<Vertex>,
    /// `(x_j, leaves)` for every leaf-bearing member. The entry comes first
    /// and its list starts with the low anchor; the exit comes last and its
    /// list ends with the high anchor.
    leaves: Vec<(Vertex, Vec<Vertex>)>,
}

impl StarSpec {
    fn profile(&self) -> SpineProfile {
        let t = self.leaves.len() - 1;
        let mut members = vec![
            Member { lo: 0, hi: 0, leaves: 0 },
            Member { lo: 2, hi: 2, leaves: 0 },
        ];
        let bearing: HashSet<Vertex> = self.leaves.iter().map(|(x, _)| *x).collect();
        for (j, (_, l)) in self.leaves.iter().enumerate() {
            let (lo, hi) = match j {
                0 => (0, 1),
                _ if j == t => (1, 2),
                _ => (1, 1),
            };
            let extra = if j == 0 || j == t { l.len() - 1 } else { l.len() };
            members.push(Member { lo, hi, leaves: extra });
        }
        for &v in &self.members {
            if !bearing.contains(&v) {
                members.push(Member { lo: 1, hi: 1, leaves: 0 });
            }
        }
        SpineProfile {
            clique_sizes: vec![2, self.members.len(), 2],
            members,
        }
    }
}

struct Slots {
    taken: Vec<bool>,
    placed: Vec<(Vertex, i64)>,
}

impl Slots {
    fn new(m: usize) -> Self {
        Slots {
            taken: vec![false; 3 * m + 1],
            placed: Vec::new(),
        }
    }

    fn put(&mut self, v: Vertex, pos: i64) -> Result<(), LayoutError> {
        let idx = usize::try_from(pos)
            .ok()
            .filter(|&i| i < self.taken.len())
            .ok_or_else(|| LayoutError::Internal(format!("vertex {v} placed outside the window at {pos}")))?;
        if self.taken[idx] {
            return Err(LayoutError::Internal(format!("vertex {v} collides at local position {pos}")));
        }
        self.taken[idx] = true;
        self.placed.push((v, pos));
        Ok(())
    }

    /// `count` free positions from `start` upward, in increasing order.
    fn free_from(&self, start: i64, count: usize) -> Result<Vec<i64>, LayoutError> {
        let mut out = Vec::with_capacity(count);
        let mut pos = start.max(0) as usize;
        while out.len() < count {
            if pos >= self.taken.len() {
                return Err(LayoutError::Internal("leaves overflow the clique-star window".into()));
            }
            if !self.taken[pos] {
                out.push(pos as i64);
            }
            pos += 1;
        }
        Ok(out)
    }
}

/// Places a clique-star of local density at most `m` on `0..=3m` with the
/// entry at `m`, the exit at `2m` and the two anchor leaves at `0` and `3m`.
fn place_clique_star(spec: &StarSpec, m: usize) -> Result<(Vec<(Vertex, i64)>, CliqueStarPlan), LayoutError> {
    let xs: Vec<Vertex> = spec.leaves.iter().map(|(x, _)| *x).collect();
    let t = xs.len() - 1;
    let l: Vec<usize> = spec.leaves.iter().map(|(_, ls)| ls.len()).collect();
    let bearing: HashSet<Vertex> = xs.iter().copied().collect();
    let mut others: Vec<Vertex> = spec.members.iter().copied().filter(|v| !bearing.contains(v)).collect();
    others.sort_unstable();
    let q = spec.members.len() - 1;
    let total_leaves: usize = l.iter().sum();
    let n_minus_one = spec.members.len() + total_leaves - 1;
    let l_prime: usize = l[..t].iter().sum();
    let mi = m as i64;

    let leaf_order: Vec<Vertex> = spec.leaves.iter().flat_map(|(_, ls)| ls.iter().copied()).collect();
    let (&far, inner) = leaf_order.split_last().expect("exit carries the high anchor");

    let mut slots = Slots::new(m);
    slots.put(xs[t], 2 * mi)?;
    slots.put(far, 3 * mi)?;
    let mut plan = CliqueStarPlan {
        x: xs.clone(),
        q,
        n_minus_one,
        l_prime,
        r: None,
        p: 0,
        p_prime: 0,
        s: mi,
        case: CliqueStarCase::SmallLeafMass,
    };

    let leaf_slots = if l_prime <= m {
        let mut cursor = mi;
        for &v in xs[..t].iter().chain(&others) {
            slots.put(v, cursor)?;
            cursor += 1;
        }
        let mut out: Vec<i64> = (0..l_prime as i64).collect();
        out.extend(slots.free_from(cursor, inner.len() - l_prime)?);
        out
    } else {
        let mut acc = 0;
        let r = (0..t)
            .find(|&j| {
                acc += l[j];
                acc >= m
            })
            .expect("l_prime > m");
        let p: usize = l[..r].iter().sum();
        plan.r = Some(r);
        plan.p = p;
        plan.p_prime = l[r + 1..].iter().sum();
        let ri = r as i64;
        let ti = t as i64;

        if p + l[r] + q <= 2 * m {
            plan.case = CliqueStarCase::MediumMass;
            for (j, &v) in xs[..=r].iter().enumerate() {
                slots.put(v, mi + j as i64)?;
            }
            let gap = (l_prime - m) as i64;
            let block: Vec<Vertex> = others.iter().chain(&xs[r + 1..t]).copied().collect();
            let end = (2 * mi).min(mi + gap + q as i64);
            plan.s = end;
            for (j, &v) in block.iter().enumerate() {
                slots.put(v, end - block.len() as i64 + j as i64)?;
            }
            let mut out: Vec<i64> = (0..mi).collect();
            out.extend(slots.free_from(mi + ri + 1, inner.len() - m)?);
            out
        } else {
            plan.case = CliqueStarCase::Straddle;
            let p_prime = plan.p_prime as i64;
            for (j, &v) in xs[..r].iter().enumerate() {
                slots.put(v, mi + j as i64)?;
            }
            for (j, &v) in xs[r + 1..t].iter().enumerate() {
                slots.put(v, 2 * mi - ti + ri + 1 + j as i64)?;
            }
            let lo = (mi + ri).max(n_minus_one as i64 - p_prime - mi);
            let hi = (2 * mi - ti + ri).min(p as i64 + mi);
            if lo > hi {
                return Err(LayoutError::Internal(format!(
                    "no room for x_r: lower bound {lo} exceeds upper bound {hi}"
                )));
            }
            plan.s = lo;
            slots.put(xs[r], lo)?;
            let range: Vec<i64> = (mi + ri..=2 * mi - ti + ri).filter(|&x| x != lo).collect();
            let middle = m - q;
            for (&v, &pos) in others.iter().zip(&range[middle..]) {
                slots.put(v, pos)?;
            }
            let mut out: Vec<i64> = (0..mi).collect();
            out.extend_from_slice(&range[..middle]);
            let rest = inner.len() - out.len();
            out.extend(slots.free_from(2 * mi + 1, rest)?);
            out
        }
    };

    if leaf_slots.len() != inner.len() {
        return Err(LayoutError::Internal(format!(
            "{} leaf slots for {} leaves",
            leaf_slots.len(),
            inner.len()
        )));
    }
    for (&u, &pos) in inner.iter().zip(&leaf_slots) {
        slots.put(u, pos)?;
    }
    Ok((slots.placed, plan))
}

fn check_anchored(s: &CaterpillarStructure, g: &Graph, m: usize) -> Result<(), LayoutError> {
    if !s.is_anchored() {
        return Err(LayoutError::NotAnchored);
    }
    let report = local_density_structured(s, g)?;
    if report.beta > m {
        return Err(LayoutError::DensityExceeds { beta: report.beta, m });
    }
    Ok(())
}

/// Left-justified layout of an anchored structure with at most one spine
/// clique (stars and clique-stars).
pub fn layout_clique_star(s: &CaterpillarStructure, g: &Graph, m: usize) -> Result<JustifiedLayout, LayoutError> {
    if s.k() > 1 {
        return Err(LayoutError::Internal(format!(
            "clique-star layout needs at most one spine clique, got {}",
            s.k()
        )));
    }
    layout_block_caterpillar(s, g, m)
}

/// Left-justified `m`-representation of an anchored block caterpillar with
/// local density at most `m`.
pub fn layout_block_caterpillar(
    s: &CaterpillarStructure,
    g: &Graph,
    m: usize,
) -> Result<JustifiedLayout, LayoutError> {
    check_anchored(s, g, m)?;
    let n = s.vertex_count;
    let k = s.k();
    let mi = m as i64;
    let mut pos: Vec<Option<i64>> = vec![None; n];
    let mut plans = Vec::new();
    let mut violations = 0;

    if k == 0 {
        let c = s.v(1);
        let (v0, v2) = (s.v(0), s.v(2));
        pos[v0] = Some(0);
        pos[c] = Some(mi);
        pos[v2] = Some(2 * mi);
        let rest = s.leaves[c].iter().filter(|&&u| u != v0 && u != v2);
        let free = (1..mi).chain(mi + 1..2 * mi);
        let mut placed = 0;
        for (&u, slot) in rest.zip(free) {
            pos[u] = Some(slot);
            placed += 1;
        }
        if placed + 2 != s.leaves[c].len() {
            return Err(LayoutError::Internal("star leaves overflow".into()));
        }
        violations += leaf_edge_violations(s.leaves[c].iter().map(|&u| (u, c)), &pos, m);
    }

    let mut window: Vec<Vertex> = Vec::new();
    for i in 1..=k {
        let shift = (i as i64 - 1) * mi;
        let q = &s.spine[i - 1];
        let (entry, exit) = (s.v(i), s.v(i + 1));

        let mut entry_leaves: Vec<Vertex>;
        let mut inherited: Vec<(Vertex, i64)> = Vec::new();
        if i == 1 {
            entry_leaves = vec![s.v(0)];
        } else {
            let renewed: HashSet<Vertex> = q.iter().chain(&s.leaves[entry]).copied().collect();
            inherited = window
                .iter()
                .filter(|&&u| !renewed.contains(&u))
                .filter_map(|&u| pos[u].filter(|&x| x >= shift).map(|x| (u, x)))
                .collect();
            inherited.sort_by_key(|&(_, x)| x);
            entry_leaves = inherited.iter().map(|&(u, _)| u).collect();
        }
        let first = entry_leaves[0];
        entry_leaves.extend(s.leaves[entry].iter().copied().filter(|&u| u != first));

        let far = s.v(i + 2);
        let mut exit_leaves: Vec<Vertex> = s.leaves[exit].iter().copied().filter(|&u| u != far).collect();
        if i < k {
            exit_leaves.extend(s.spine[i].iter().copied().filter(|&u| u != exit && u != far));
        }
        exit_leaves.push(far);

        let mut leaves = vec![(entry, entry_leaves)];
        for &x in q {
            if x != entry && x != exit && !s.leaves[x].is_empty() {
                leaves.push((x, s.leaves[x].clone()));
            }
        }
        leaves.push((exit, exit_leaves));
        let spec = StarSpec {
            members: q.clone(),
            leaves,
        };

        let beta = spec.profile().report().beta;
        if beta > m {
            return Err(LayoutError::Internal(format!(
                "phase {i}: auxiliary clique-star has local density {beta} > {m}"
            )));
        }
        let (local, plan) = place_clique_star(&spec, m)?;
        let moved: std::collections::HashMap<Vertex, i64> = local.iter().map(|&(v, x)| (v, x + shift)).collect();
        for &(u, x) in &inherited {
            if moved[&u] != x {
                return Err(LayoutError::Internal(format!(
                    "phase {i}: inherited vertex {u} moved from {x} to {}",
                    moved[&u]
                )));
            }
        }
        for (&v, &x) in &moved {
            pos[v] = Some(x);
        }
        violations += leaf_edge_violations(
            spec.leaves.iter().flat_map(|(x, ls)| ls.iter().map(move |&u| (u, *x))),
            &pos,
            m,
        );
        window = local.iter().map(|&(v, _)| v).collect();
        plans.push(plan);
    }

    if violations > 0 {
        return Err(LayoutError::Internal(format!("{violations} leaf edges exceed {m}")));
    }
    let position: Vec<i64> = pos
        .iter()
        .enumerate()
        .map(|(v, x)| x.ok_or_else(|| LayoutError::Internal(format!("vertex {v} never placed"))))
        .collect::<Result<_, _>>()?;
    let layout = Layout::new(position).map_err(|e| LayoutError::Internal(e.to_string()))?;
    let anchor_positions = s.anchors.iter().map(|&v| layout.position(v)).collect();
    let filled = filled_prefixes(&layout, k, m);
    Ok(JustifiedLayout {
        layout,
        m,
        anchor_positions,
        filled,
        plans,
        leaf_edge_violations: violations,
    })
}

fn leaf_edge_violations(
    pairs: impl Iterator<Item = (Vertex, Vertex)>,
    pos: &[Option<i64>],
    m: usize,
) -> usize {
    pairs
        .filter(|&(u, x)| match (pos[u], pos[x]) {
            (Some(a), Some(b)) => a.abs_diff(b) > m as u64,
            _ => true,
        })
        .count()
}

/// Number of occupied positions in each `J_i`, `i = 0..=k+1`.
fn filled_prefixes(f: &Layout, k: usize, m: usize) -> Vec<usize> {
    let mut filled = vec![0; k + 2];
    if m < 2 {
        return filled;
    }
    for &x in f.positions() {
        if x > 0 && x % m as i64 != 0 {
            let i = (x / m as i64) as usize;
            if i < filled.len() {
                filled[i] += 1;
            }
        }
    }
    filled
}

/// A failed left-justification condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// 0-3 for the numbered properties, 4 for faithfulness, 5 for width.
    pub property: u8,
    /// Offending interval or anchor index.
    pub interval: usize,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.property {
            4 => write!(f, "faithfulness: {}", self.detail),
            5 => write!(f, "width: {}", self.detail),
            p => write!(f, "property {p} at J_{}: {}", self.interval, self.detail),
        }
    }
}

/// Checks the left-justified conditions; an empty list means pass.
pub fn check_left_justified(j: &JustifiedLayout, s: &CaterpillarStructure, g: &Graph) -> Vec<Violation> {
    let mut out = Vec::new();
    let f = &j.layout;
    let m = j.m as i64;
    let k = s.k();
    let mut violate = |property: u8, interval: usize, detail: String| {
        out.push(Violation {
            property,
            interval,
            detail,
        })
    };
    if f.len() != g.vertex_count() || s.vertex_count != g.vertex_count() || !s.is_anchored() {
        violate(5, 0, "layout, structure and graph sizes differ".into());
        return out;
    }
    let b = f.bandwidth(g);
    if b > j.m as u64 {
        violate(5, 0, format!("bandwidth {b} exceeds {m}"));
    }

    for i in 0..=k + 2 {
        let x = f.position(s.v(i));
        if x != i as i64 * m {
            violate(0, i, format!("v_{i} at {x}, expected {}", i as i64 * m));
        }
    }

    let top = (k as i64 + 2) * m;
    let mut at: Vec<Option<Vertex>> = vec![None; (top + 1) as usize];
    for v in g.vertices() {
        let x = f.position(v);
        if x < 0 || x > top {
            violate(1, 0, format!("vertex {v} at {x} outside 0..={top}"));
        } else {
            at[x as usize] = Some(v);
        }
    }
    let interval = |i: usize| (i as i64 * m + 1)..((i as i64 + 1) * m);
    let mut full = vec![true; k + 2];
    for (i, is_full) in full.iter_mut().enumerate() {
        let mut seen_gap = false;
        for x in interval(i) {
            match at[x as usize] {
                None => seen_gap = true,
                Some(v) if seen_gap => {
                    violate(1, i, format!("vertex {v} at {x} follows an unfilled position"));
                    break;
                }
                Some(_) => {}
            }
        }
        *is_full = !seen_gap;
    }

    for i in 0..=k + 1 {
        let clique = s.clique(i);
        let next = s.v(i + 1);
        let early: Vec<Vertex> = clique.iter().copied().filter(|&v| v != next).collect();
        if !full[i] && i < k + 1 {
            let spill = interval(i + 1);
            for &v in &early {
                if let Some(&u) = s.leaves[v].iter().find(|&&u| spill.contains(&f.position(u))) {
                    violate(2, i, format!("leaf {u} of {v} spills into J_{}", i + 1));
                }
            }
        }
        let clique_max = early.iter().map(|&v| f.position(v)).max();
        let leaf_min = s.leaves[next]
            .iter()
            .filter(|u| !clique.contains(u))
            .map(|&u| f.position(u))
            .min();
        if let (Some(a), Some(b)) = (clique_max, leaf_min) {
            if a > b {
                violate(3, i, format!("clique position {a} follows leaf position {b} of v_{}", i + 1));
            }
        }
    }

    if !is_faithful(g, f) {
        violate(4, 0, "leaf order disagrees with parent order".into());
    }
    out
}

/// Recognizes, lays out at `m = β` and strips helpers. Returns the layout
/// on positions `0..n` and its bandwidth, which equals the local density.
pub fn optimal_layout(g: &Graph) -> Result<(Layout, usize), LayoutError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Rejection::Empty.into());
    }
    if n == 1 {
        return Ok((Layout::from_order(&[0]).expect("single vertex"), 0));
    }
    let s = recognize_block_caterpillar(g)?;
    let (aug, anchored) = anchor_and_augment(&s, g);
    let beta = local_density_structured(&anchored, &aug)?.beta;
    let j = layout_block_caterpillar(&anchored, &aug, beta)?;
    let layout = condense(&j.layout.truncated(n));
    let b = verify_layout(g, &layout).map_err(|e| LayoutError::Internal(e.to_string()))?;
    if b != beta as u64 {
        return Err(LayoutError::Internal(format!("layout has bandwidth {b}, local density is {beta}")));
    }
    Ok((layout, beta))
}
