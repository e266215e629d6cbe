#![allow(dead_code)]

use blockcat::Graph;
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_vertices: usize,
    pub max_clique: usize,
    pub max_leaves: usize,
}

/// Random block caterpillar: a path of cliques sharing one vertex between
/// neighbours, random pendant leaves, ids shuffled.
pub fn random_caterpillar<R: Rng>(rng: &mut R, shape: Shape) -> Graph {
    let budget = rng.gen_range(1..=shape.max_vertices);
    let spine_budget = rng.gen_range(1..=budget);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut spine: Vec<usize> = Vec::new();
    let mut n = 1;
    let mut free_end = 0;
    let mut prev_shared = usize::MAX;
    while n < spine_budget {
        let room = spine_budget - n;
        let size = rng.gen_range(2..=shape.max_clique).min(room + 1);
        let mut clique = vec![free_end];
        for _ in 1..size {
            clique.push(n);
            n += 1;
        }
        for i in 0..clique.len() {
            for j in i + 1..clique.len() {
                edges.push((clique[i], clique[j]));
            }
        }
        spine.extend_from_slice(&clique);
        let candidates: Vec<usize> = clique[1..].iter().copied().filter(|&v| v != prev_shared).collect();
        prev_shared = free_end;
        free_end = candidates[rng.gen_range(0..candidates.len())];
    }
    spine.sort_unstable();
    spine.dedup();
    if spine.is_empty() {
        spine.push(0);
    }
    for &v in &spine {
        if n >= budget {
            break;
        }
        if rng.gen_bool(0.45) {
            continue;
        }
        let count = rng.gen_range(1..=shape.max_leaves).min(budget - n);
        for _ in 0..count {
            edges.push((v, n));
            n += 1;
        }
    }
    let mut relabel: Vec<usize> = (0..n).collect();
    relabel.shuffle(rng);
    Graph::from_edges(n, edges.into_iter().map(|(u, v)| (relabel[u], relabel[v]))).unwrap()
}

pub const SMALL: Shape = Shape {
    max_vertices: 14,
    max_clique: 5,
    max_leaves: 4,
};

pub const LARGE: Shape = Shape {
    max_vertices: 300,
    max_clique: 12,
    max_leaves: 12,
};
