//! Exact bandwidth for small graphs by branch and bound.
//!
//! Positions `0..n` are filled left to right. A partial layout is cut when a
//! vertex that has fallen out of the window still has unplaced neighbors,
//! when an active vertex has more unplaced neighbors than positions left in
//! its reach, or when the distance deadlines of the unplaced vertices cannot
//! all be met. Dead states are memoized on (placed set, active window).

use std::collections::HashSet;

use thiserror::Error;

use crate::graph::{Graph, Layout, Vertex, UNREACHABLE};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_vertices: usize,
    pub max_nodes: u64,
    pub max_solutions: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_vertices: 24,
            max_nodes: 100_000_000,
            max_solutions: u64::MAX,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {n} vertices, the oracle is limited to {max}")]
    TooLarge { n: usize, max: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("search budget of {nodes} nodes exhausted")]
    BudgetExhausted { nodes: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Feasible(Layout),
    Infeasible,
    BudgetExhausted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Enumeration {
    /// Every layout was visited.
    Complete { count: u64, nodes: u64 },
    /// Stopped at `max_solutions`.
    Truncated { count: u64, nodes: u64 },
    /// Ran out of nodes; `count` layouts were visited.
    BudgetExhausted { count: u64, nodes: u64 },
}

impl Enumeration {
    pub fn count(&self) -> u64 {
        match *self {
            Enumeration::Complete { count, .. }
            | Enumeration::Truncated { count, .. }
            | Enumeration::BudgetExhausted { count, .. } => count,
        }
    }
}

/// The memo key packs the active window into 128 bits, five bits per slot.
pub const HARD_CAP: usize = 26;

fn check_input(g: &Graph, budget: &SearchBudget) -> Result<(), OracleError> {
    let n = g.vertex_count();
    let max = budget.max_vertices.min(HARD_CAP);
    if n > max {
        return Err(OracleError::TooLarge { n, max });
    }
    if !g.is_connected() {
        return Err(OracleError::Disconnected);
    }
    Ok(())
}

/// Looks for a layout of bandwidth at most `b`.
pub fn decide_bandwidth(g: &Graph, b: usize, budget: SearchBudget) -> Result<Decision, OracleError> {
    check_input(g, &budget)?;
    let n = g.vertex_count();
    if n <= 1 || b + 1 >= n {
        let order: Vec<Vertex> = g.vertices().collect();
        return Ok(Decision::Feasible(Layout::from_order(&order).expect("identity order")));
    }
    if b == 0 {
        return Ok(Decision::Infeasible);
    }
    let mut search = Search::new(g, b, budget, false);
    let mut found = None;
    let outcome = search.run(&mut |order: &[Vertex]| {
        found = Some(Layout::from_order(order).expect("search emits permutations"));
        false
    });
    Ok(match outcome {
        Outcome::Aborted => Decision::BudgetExhausted,
        _ => found.map_or(Decision::Infeasible, Decision::Feasible),
    })
}

/// Lower bound `max(⌈(n−1)/diam⌉, max ⌈d/2⌉)`.
pub fn simple_lower_bound(g: &Graph) -> usize {
    let n = g.vertex_count();
    if n <= 1 {
        return 0;
    }
    let diam = g.diameter().unwrap_or(1).max(1);
    (n - 1).div_ceil(diam).max(g.max_degree().div_ceil(2))
}

/// Smallest `b` for which [`decide_bandwidth`] succeeds.
pub fn exact_bandwidth(g: &Graph, budget: SearchBudget) -> Result<usize, OracleError> {
    check_input(g, &budget)?;
    exact_bandwidth_with_layout(g, budget).map(|(b, _)| b)
}

/// Like [`exact_bandwidth`], also returning a witness layout.
pub fn exact_bandwidth_with_layout(g: &Graph, budget: SearchBudget) -> Result<(usize, Layout), OracleError> {
    check_input(g, &budget)?;
    let mut b = simple_lower_bound(g);
    loop {
        match decide_bandwidth(g, b, budget)? {
            Decision::Feasible(f) => return Ok((b, f)),
            Decision::Infeasible => b += 1,
            Decision::BudgetExhausted => return Err(OracleError::BudgetExhausted { nodes: budget.max_nodes }),
        }
    }
}

/// Visits every layout onto `0..n` with bandwidth at most `b`, one per
/// mirror pair (the end vertex with the smaller id takes position 0). With
/// `b` equal to the bandwidth these are exactly the optimal layouts.
pub fn enumerate_optimal<F>(g: &Graph, b: usize, budget: SearchBudget, mut visitor: F) -> Result<Enumeration, OracleError>
where
    F: FnMut(&Layout),
{
    check_input(g, &budget)?;
    let n = g.vertex_count();
    if n <= 1 {
        if n == 1 {
            visitor(&Layout::from_order(&[0]).expect("single vertex"));
        }
        return Ok(Enumeration::Complete {
            count: n as u64,
            nodes: 0,
        });
    }
    let mut search = Search::new(g, b, budget, true);
    let mut count = 0u64;
    let limit = budget.max_solutions;
    let outcome = search.run(&mut |order: &[Vertex]| {
        if order[0] > order[order.len() - 1] {
            return true;
        }
        count += 1;
        visitor(&Layout::from_order(order).expect("search emits permutations"));
        count < limit
    });
    let nodes = search.nodes;
    Ok(match outcome {
        Outcome::Aborted => Enumeration::BudgetExhausted { count, nodes },
        Outcome::Stopped => Enumeration::Truncated { count, nodes },
        Outcome::Exhausted => Enumeration::Complete { count, nodes },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    /// Whole tree explored.
    Exhausted,
    /// The visitor asked to stop.
    Stopped,
    /// Node budget ran out.
    Aborted,
}

struct Search {
    n: usize,
    b: usize,
    adj: Vec<Vec<Vertex>>,
    dist: Vec<Vec<usize>>,
    order: Vec<Vertex>,
    pos: Vec<usize>,
    unplaced_nbrs: Vec<usize>,
    placed: u32,
    nodes: u64,
    max_nodes: u64,
    enumerate: bool,
    dead: HashSet<(u32, u128)>,
}

const UNSET: usize = usize::MAX;

impl Search {
    fn new(g: &Graph, b: usize, budget: SearchBudget, enumerate: bool) -> Self {
        let n = g.vertex_count();
        Search {
            n,
            b: b.min(n.saturating_sub(1)),
            adj: g.vertices().map(|v| g.neighbors(v).to_vec()).collect(),
            dist: g.distance_matrix(),
            order: Vec::with_capacity(n),
            pos: vec![UNSET; n],
            unplaced_nbrs: g.vertices().map(|v| g.degree(v)).collect(),
            placed: 0,
            nodes: 0,
            max_nodes: budget.max_nodes,
            enumerate,
            dead: HashSet::new(),
        }
    }

    /// The visitor returns false to stop the search.
    fn run(&mut self, visit: &mut dyn FnMut(&[Vertex]) -> bool) -> Outcome {
        match self.extend(visit) {
            Step::Continue(_) => Outcome::Exhausted,
            Step::Stop => Outcome::Stopped,
            Step::Abort => Outcome::Aborted,
        }
    }

    fn key(&self) -> (u32, u128) {
        let i = self.order.len();
        let mut sig = 0u128;
        for j in i.saturating_sub(self.b)..i {
            let v = self.order[j];
            let slot = if self.unplaced_nbrs[v] > 0 { v as u128 + 1 } else { 0 };
            sig = (sig << 5) | slot;
        }
        (self.placed, sig)
    }

    fn place(&mut self, v: Vertex) {
        self.pos[v] = self.order.len();
        self.order.push(v);
        self.placed |= 1 << v;
        for &u in &self.adj[v] {
            self.unplaced_nbrs[u] -= 1;
        }
    }

    fn unplace(&mut self) {
        let v = self.order.pop().expect("nonempty");
        self.pos[v] = UNSET;
        self.placed &= !(1 << v);
        for &u in &self.adj[v] {
            self.unplaced_nbrs[u] += 1;
        }
    }

    /// Whether the current prefix can still be completed, as far as the
    /// cheap tests can tell.
    fn viable(&self) -> bool {
        let i = self.order.len();
        if i == self.n {
            return true;
        }
        // The vertex leaving the window must be finished.
        if i > self.b && self.unplaced_nbrs[self.order[i - 1 - self.b]] > 0 {
            return false;
        }
        let lo = i.saturating_sub(self.b);
        let mut deadlines: Vec<usize> = Vec::new();
        for j in lo..i {
            let u = self.order[j];
            let need = self.unplaced_nbrs[u];
            if need == 0 {
                continue;
            }
            // Free positions i..=j+b.
            if need > j + self.b + 1 - i {
                return false;
            }
        }
        for w in 0..self.n {
            if self.pos[w] != UNSET {
                continue;
            }
            let mut deadline = usize::MAX;
            for j in lo..i {
                let u = self.order[j];
                if self.unplaced_nbrs[u] > 0 {
                    let d = self.dist[u][w];
                    if d != UNREACHABLE {
                        deadline = deadline.min(j + d * self.b);
                    }
                }
            }
            deadlines.push(deadline);
        }
        deadlines.sort_unstable();
        deadlines.iter().enumerate().all(|(r, &d)| d >= i + r)
    }

    fn extend(&mut self, visit: &mut dyn FnMut(&[Vertex]) -> bool) -> Step {
        let i = self.order.len();
        if i == self.n {
            return if visit(&self.order) { Step::Continue(true) } else { Step::Stop };
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Step::Abort;
        }
        let key = self.key();
        if self.dead.contains(&key) {
            return Step::Continue(false);
        }
        let mut any = false;
        for v in 0..self.n {
            if self.pos[v] != UNSET {
                continue;
            }
            if self.adj[v].iter().any(|&u| self.pos[u] != UNSET && i - self.pos[u] > self.b) {
                continue;
            }
            self.place(v);
            let step = if self.viable() { self.extend(visit) } else { Step::Continue(false) };
            self.unplace();
            match step {
                Step::Continue(found) => {
                    any |= found;
                    if found && !self.enumerate {
                        return Step::Stop;
                    }
                }
                other => return other,
            }
        }
        if !any {
            self.dead.insert(key);
        }
        Step::Continue(any)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    /// Subtree finished; true if it produced a layout.
    Continue(bool),
    Stop,
    Abort,
}
