mod common;

use blockcat::density::local_density_bruteforce;
use blockcat::layout::is_faithful;
use blockcat::recognition::is_block_graph;
use blockcat::{
    anchor_and_augment, check_left_justified, condense, exact_bandwidth, layout_block_caterpillar,
    local_density_structured, optimal_layout, recognize_block_caterpillar, repair_faithful, Graph, Layout,
    SearchBudget,
};
use common::{random_caterpillar, Shape, SMALL};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn structure_partitions_vertices() {
    let mut rng = rng(1);
    for _ in 0..400 {
        let g = random_caterpillar(&mut rng, SMALL);
        let s = recognize_block_caterpillar(&g).unwrap();
        assert!(is_block_graph(&g).unwrap());
        let mut seen = vec![0; g.vertex_count()];
        for v in s.spine_vertices() {
            seen[v] += 1;
        }
        for leaves in &s.leaves {
            for &u in leaves {
                seen[u] += 1;
            }
        }
        if g.vertex_count() > 1 {
            assert!(seen.iter().all(|&c| c == 1), "{seen:?}");
        }
        for w in s.spine.windows(2) {
            let shared = w[0].iter().filter(|v| w[1].contains(v)).count();
            assert_eq!(shared, 1);
        }
        for (i, a) in s.spine.iter().enumerate() {
            for b in s.spine.iter().skip(i + 2) {
                assert!(a.iter().all(|v| !b.contains(v)));
            }
        }
    }
}

#[test]
fn augmentation_keeps_density_and_spans_diameter() {
    let mut rng = rng(2);
    for _ in 0..300 {
        let g = random_caterpillar(&mut rng, SMALL);
        let s = recognize_block_caterpillar(&g).unwrap();
        let (aug, a) = anchor_and_augment(&s, &g);
        assert!(a.helpers.len() <= 4);
        assert_eq!(aug.vertex_count(), g.vertex_count() + a.helpers.len());
        if g.edge_count() > 0 {
            assert_eq!(
                local_density_bruteforce(&aug, 18).unwrap(),
                local_density_bruteforce(&g, 16).unwrap()
            );
        }
        let k = a.k();
        if k >= 1 {
            let d = aug.distances_from(a.v(0));
            assert_eq!(d[a.v(k + 2)], k + 2);
            assert_eq!(aug.diameter().unwrap(), k + 2);
        }
    }
}

#[test]
fn structured_density_matches_bruteforce() {
    let mut rng = rng(3);
    for _ in 0..600 {
        let g = random_caterpillar(&mut rng, SMALL);
        if g.vertex_count() < 2 {
            continue;
        }
        let s = recognize_block_caterpillar(&g).unwrap();
        let (aug, a) = anchor_and_augment(&s, &g);
        let report = local_density_structured(&a, &aug).unwrap();
        let brute = local_density_bruteforce(&g, 16).unwrap();
        assert_eq!(report.beta, brute, "{:?}", g);
        assert_eq!(report.beta, report.beta1.max(report.beta2).max(report.beta_prime));
        assert!(report.witness.0 <= report.witness.1);
    }
}

#[test]
fn density_lower_bounds_and_monotonicity() {
    let mut rng = rng(4);
    for _ in 0..150 {
        let g = random_caterpillar(&mut rng, SMALL);
        let n = g.vertex_count();
        if n < 3 {
            continue;
        }
        let beta = local_density_bruteforce(&g, 16).unwrap();
        let diam = g.diameter().unwrap();
        assert!(beta >= (n - 1).div_ceil(diam));
        assert!(beta >= g.max_degree().div_ceil(2));
        // Induced connected subgraph: a BFS ball.
        let root = rng_pick(&mut rng, n);
        let dist = g.distances_from(root);
        let keep: Vec<usize> = (0..n).filter(|&v| dist[v] <= 2).collect();
        let h = g.induced(&keep);
        assert!(local_density_bruteforce(&h, 16).unwrap() <= beta);
    }
}

fn rng_pick(rng: &mut ChaCha8Rng, n: usize) -> usize {
    use rand::Rng;
    rng.gen_range(0..n)
}

#[test]
fn layouts_are_left_justified() {
    let mut rng = rng(5);
    let shape = Shape {
        max_vertices: 60,
        max_clique: 7,
        max_leaves: 8,
    };
    for _ in 0..600 {
        let g = random_caterpillar(&mut rng, shape);
        if g.vertex_count() < 2 {
            continue;
        }
        let s = recognize_block_caterpillar(&g).unwrap();
        let (aug, a) = anchor_and_augment(&s, &g);
        let beta = local_density_structured(&a, &aug).unwrap().beta;
        for m in [beta, beta + 1] {
            let j = layout_block_caterpillar(&a, &aug, m).unwrap();
            let v = check_left_justified(&j, &a, &aug);
            assert!(v.is_empty(), "m={m} {:?}\n{}", g, v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("\n"));
            assert_eq!(j.leaf_edge_violations, 0);
        }
    }
}

#[test]
fn optimal_layout_is_sound_and_deterministic() {
    let mut rng = rng(6);
    for _ in 0..300 {
        let g = random_caterpillar(&mut rng, Shape { max_vertices: 120, ..common::LARGE });
        let (f, b) = optimal_layout(&g).unwrap();
        assert_eq!(f.bandwidth(&g), b as u64);
        assert_eq!(condense(&f), f);
        assert_eq!(optimal_layout(&g).unwrap(), (f, b));
    }
}

#[test]
fn oracle_agrees_on_small_caterpillars() {
    let mut rng = rng(7);
    for _ in 0..120 {
        let g = random_caterpillar(&mut rng, SMALL);
        let (_, b) = optimal_layout(&g).unwrap();
        assert_eq!(exact_bandwidth(&g, SearchBudget::default()).unwrap(), b, "{g:?}");
    }
}

fn shuffled_layout(rng: &mut ChaCha8Rng, n: usize) -> Layout {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    Layout::from_order(&order).unwrap()
}

fn leaf_positions(g: &Graph, f: &Layout) -> Vec<i64> {
    let mut out: Vec<i64> = g
        .vertices()
        .filter(|&u| g.degree(u) == 1 && g.degree(g.neighbors(u)[0]) > 1)
        .map(|u| f.position(u))
        .collect();
    out.sort_unstable();
    out
}

#[test]
fn repair_properties() {
    let mut rng = rng(8);
    for _ in 0..500 {
        let g = random_caterpillar(&mut rng, Shape { max_vertices: 20, ..SMALL });
        let f = shuffled_layout(&mut rng, g.vertex_count());
        let r = repair_faithful(&g, &f);
        assert!(is_faithful(&g, &r));
        assert!(r.bandwidth(&g) <= f.bandwidth(&g));
        assert_eq!(leaf_positions(&g, &r), leaf_positions(&g, &f));
        for v in g.vertices() {
            if g.degree(v) != 1 {
                assert_eq!(r.position(v), f.position(v));
            }
        }
        assert_eq!(repair_faithful(&g, &r), r);
    }
}
