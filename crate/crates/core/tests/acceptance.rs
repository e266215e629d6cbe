//! End-to-end acceptance checks. Each test prints one `criterion N: PASS|FAIL`
//! line before asserting.

mod common;

use std::time::{Duration, Instant};

use blockcat::gadgets::{
    build_bug, build_hk, build_near_reflector, build_reflector, check_end_anchoring, near_reflector_numbering,
    numbering_to_schedule, reflector_certificate, reflector_numbering, schedule_to_numbering, Schedule,
    SchedulingInstance,
};
use blockcat::layout::is_faithful;
use blockcat::{
    anchor_and_augment, check_left_justified, decide_bandwidth, enumerate_optimal, exact_bandwidth,
    layout_block_caterpillar, local_density_bruteforce, local_density_structured, optimal_layout,
    recognize_block_caterpillar, repair_faithful, verify_layout, Decision, Enumeration, Graph, Layout, SearchBudget,
    Vertex,
};
use common::{random_caterpillar, LARGE, SMALL};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Exact bandwidth of H_3, frozen from the first oracle run.
const H3_BANDWIDTH: usize = 4;

fn report(n: usize, ok: bool, elapsed: Duration, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("criterion {n}: {verdict} ({:.2?}) {detail}", elapsed);
}

fn structured_beta(g: &Graph) -> usize {
    let s = recognize_block_caterpillar(g).unwrap();
    let (aug, a) = anchor_and_augment(&s, g);
    local_density_structured(&a, &aug).unwrap().beta
}

#[test]
fn criterion_1_caterpillars_at_scale() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xb10c);
    let mut failures = Vec::new();
    let mut largest = 0;
    for trial in 0..1000 {
        let g = random_caterpillar(&mut rng, LARGE);
        largest = largest.max(g.vertex_count());
        let beta = structured_beta(&g);
        let (f, b) = optimal_layout(&g).unwrap();
        if b != beta || verify_layout(&g, &f).unwrap() != beta as u64 {
            failures.push(format!("trial {trial}: B={b} beta={beta}"));
            continue;
        }
        if g.vertex_count() < 2 {
            continue;
        }
        let s = recognize_block_caterpillar(&g).unwrap();
        let (aug, a) = anchor_and_augment(&s, &g);
        let j = layout_block_caterpillar(&a, &aug, beta).unwrap();
        let v = check_left_justified(&j, &a, &aug);
        if !v.is_empty() {
            failures.push(format!("trial {trial}: {}", v[0]));
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(10);
    report(1, ok, elapsed, &format!("1000 graphs, n<={largest}, {} failures", failures.len()));
    assert!(failures.is_empty(), "{failures:?}");
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
}

#[test]
fn criterion_2_oracle_agreement() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c1e);
    let mut failures = Vec::new();
    for trial in 0..300 {
        let g = random_caterpillar(&mut rng, SMALL);
        let structured = structured_beta(&g);
        let brute = local_density_bruteforce(&g, 16).unwrap();
        let exact = exact_bandwidth(&g, SearchBudget::default()).unwrap();
        if !(exact == structured && structured == brute) {
            failures.push(format!("trial {trial}: exact={exact} structured={structured} brute={brute}"));
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(60);
    report(2, ok, elapsed, &format!("300 graphs, {} disagreements", failures.len()));
    assert!(failures.is_empty(), "{failures:?}");
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
}

#[test]
fn criterion_3_hk_counterexample() {
    let start = Instant::now();
    let (g, _) = build_hk(3).unwrap();
    let beta = local_density_bruteforce(&g, 16).unwrap();
    let decision = decide_bandwidth(&g, 3, SearchBudget::default()).unwrap();
    let exact = exact_bandwidth(&g, SearchBudget::default()).unwrap();
    let elapsed = start.elapsed();
    let ok = g.vertex_count() == 10
        && beta == 3
        && decision == Decision::Infeasible
        && exact == H3_BANDWIDTH
        && elapsed < Duration::from_secs(30);
    report(3, ok, elapsed, &format!("n=10 beta={beta} B={exact}"));
    assert_eq!(beta, 3);
    assert_eq!(decision, Decision::Infeasible);
    assert_eq!(exact, H3_BANDWIDTH);
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
}

#[test]
fn criterion_4_tk_counterexample() {
    let start = Instant::now();
    let (g, _) = blockcat::gadgets::build_tk(2).unwrap();
    let beta = local_density_bruteforce(&g, 16).unwrap();
    let decision = decide_bandwidth(&g, 2, SearchBudget::default()).unwrap();
    let elapsed = start.elapsed();
    let ok = g.vertex_count() == 9
        && beta == 2
        && decision == Decision::Infeasible
        && elapsed < Duration::from_secs(5);
    let detail = format!(
        "n=9 beta={beta} (star at w has degree {}, forcing beta>=3) b=2 {}",
        g.max_degree(),
        if decision == Decision::Infeasible { "infeasible" } else { "not infeasible" }
    );
    report(4, ok, elapsed, &detail);
    assert_eq!(decision, Decision::Infeasible);
    assert_eq!(beta, 2, "beta(T_2) is {beta}: the center has degree {}", g.max_degree());
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
}

/// The gap the T_k family is meant to show does hold from k = 3 on.
#[test]
fn tk_gap_from_three() {
    let (g, _) = blockcat::gadgets::build_tk(3).unwrap();
    assert_eq!(local_density_bruteforce(&g, 16).unwrap(), 3);
    assert_eq!(decide_bandwidth(&g, 3, SearchBudget::default()).unwrap(), Decision::Infeasible);
}

#[test]
fn criterion_5_reflector() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for p in 4..=8 {
        let (g, roles) = build_reflector(p).unwrap();
        let f = reflector_numbering(p).unwrap();
        let width = verify_layout(&g, &f).unwrap();
        let cert = reflector_certificate(&g).unwrap();
        if width != p as u64 || cert.vertices != 4 * p + 1 || cert.diameter != 4 || cert.bound != p {
            failures.push(format!("p={p}: B(f)={width} cert={cert:?}"));
        }
        // Only a and z: too many vertices remain for a tight certificate.
        let keep: Vec<Vertex> = g
            .vertices()
            .filter(|&v| v != roles.expect("a") && v != roles.expect("z"))
            .collect();
        let sub = g.induced(&keep);
        println!(
            "reflector p={p}: without a,z n={} diam={}; without peripheral n={} diam={}",
            sub.vertex_count(),
            sub.diameter().unwrap(),
            cert.vertices,
            cert.diameter
        );
    }
    let elapsed = start.elapsed();
    report(5, failures.is_empty(), elapsed, &format!("p=4..8, {} failures", failures.len()));
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_6_near_reflector_anchoring() {
    let start = Instant::now();
    let (g, roles) = build_near_reflector(4).unwrap();
    let xz: Vec<Vertex> = roles.members("X").into_iter().chain(roles.members("Z")).collect();
    let budget = SearchBudget {
        max_vertices: 24,
        max_nodes: 100_000_000,
        max_solutions: u64::MAX,
    };
    let b = exact_bandwidth(&g, budget).unwrap();
    let mut bad = 0u64;
    let outcome = enumerate_optimal(&g, b, budget, |f: &Layout| {
        if !check_end_anchoring(f, &xz, 4, 12) {
            bad += 1;
        }
    })
    .unwrap();
    let elapsed = start.elapsed();
    let complete = matches!(outcome, Enumeration::Complete { .. });
    let ok = g.vertex_count() == 17 && b == 4 && complete && bad == 0 && outcome.count() > 0;
    report(6, ok, elapsed, &format!("B={b} {outcome:?} violating={bad}"));
    assert_eq!(b, 4);
    assert!(complete, "{outcome:?}");
    assert!(outcome.count() > 0);
    assert_eq!(bad, 0);
    let f = near_reflector_numbering(4).unwrap();
    assert!(check_end_anchoring(&f, &xz, 4, 12));
}

#[test]
fn criterion_7_reduction_certificate() {
    let start = Instant::now();
    let inst = SchedulingInstance::new(2, 2, vec![2, 1, 1]).unwrap();
    let bug = build_bug(&inst);
    let sched = Schedule {
        machines: vec![vec![1], vec![2, 3]],
    };
    let f = schedule_to_numbering(&bug, &sched).unwrap();
    let width = verify_layout(&bug.graph, &f).unwrap();
    let cert = reflector_certificate(&bug.reflector_subgraph()).unwrap();
    let back = numbering_to_schedule(&bug, &f).unwrap();
    let valid = back.validate(&inst).is_ok();
    let loads = back.loads(&inst);
    let elapsed = start.elapsed();
    let ok = bug.p == 37
        && bug.b == 44
        && bug.graph.vertex_count() == 573
        && width == 44
        && cert.bound == 44
        && valid
        && loads.iter().all(|&l| l <= 2)
        && elapsed < Duration::from_secs(5);
    report(
        7,
        ok,
        elapsed,
        &format!("p={} b={} n={} B(f)={width} bound={} back={back}", bug.p, bug.b, bug.graph.vertex_count(), cert.bound),
    );
    assert_eq!((bug.p, bug.b, bug.graph.vertex_count()), (37, 44, 573));
    assert_eq!(width, 44);
    assert_eq!(cert.bound, 44);
    assert!(valid, "{back}");
    assert!(loads.iter().all(|&l| l <= 2));
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
}

#[test]
fn criterion_8_faithful_repair_and_leaf_edges() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xfa17);
    let shape = common::Shape {
        max_vertices: 20,
        ..SMALL
    };
    let mut worse = 0;
    let mut unfaithful = 0;
    for _ in 0..10_000 {
        let g = random_caterpillar(&mut rng, shape);
        let mut order: Vec<Vertex> = g.vertices().collect();
        order.shuffle(&mut rng);
        let f = Layout::from_order(&order).unwrap();
        let r = repair_faithful(&g, &f);
        if r.bandwidth(&g) > f.bandwidth(&g) {
            worse += 1;
        }
        if !is_faithful(&g, &r) {
            unfaithful += 1;
        }
    }
    // Every phase asserts the leaf-edge bound internally and records misses.
    let mut violations = 0;
    for _ in 0..500 {
        let g = random_caterpillar(&mut rng, LARGE);
        if g.vertex_count() < 2 {
            continue;
        }
        let s = recognize_block_caterpillar(&g).unwrap();
        let (aug, a) = anchor_and_augment(&s, &g);
        let beta = local_density_structured(&a, &aug).unwrap().beta;
        violations += layout_block_caterpillar(&a, &aug, beta).unwrap().leaf_edge_violations;
    }
    let elapsed = start.elapsed();
    let ok = worse == 0 && unfaithful == 0 && violations == 0;
    report(
        8,
        ok,
        elapsed,
        &format!("10000 repairs: {worse} wider, {unfaithful} unfaithful; leaf-edge violations {violations}"),
    );
    assert_eq!(worse, 0);
    assert_eq!(unfaithful, 0);
    assert_eq!(violations, 0);
}
