//! Multiprocessor Scheduling to bandwidth of a bug-shaped tree.
//!
//! The graph has three parts. `C` is a caterpillar whose spine is pinned to
//! multiples of `b` and whose heavy spine vertices wall off one block of
//! `D` intervals per machine. `C′` is a caterpillar with one segment per
//! task: `t_i` heavy task vertices followed by a long bare path. A
//! reflector of thickness `b` joins the far ends of `C` and `C′`.

use std::fmt;

use super::{add_reflector, reflector_order, Builder, Metadata, RoleMap};
use crate::error::GadgetError;
use crate::graph::{Graph, Layout, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchedulingInstance {
    pub machines: usize,
    pub deadline: usize,
    pub tasks: Vec<usize>,
}

impl SchedulingInstance {
    pub fn new(machines: usize, deadline: usize, tasks: Vec<usize>) -> Result<Self, GadgetError> {
        let bad = |name, value, requirement| GadgetError::Parameter {
            name,
            value,
            requirement,
        };
        if machines == 0 {
            return Err(bad("machines", machines, "at least one machine"));
        }
        if deadline == 0 {
            return Err(bad("deadline", deadline, "positive"));
        }
        if tasks.is_empty() {
            return Err(bad("tasks", 0, "at least one task"));
        }
        if let Some(&t) = tasks.iter().find(|&&t| t == 0) {
            return Err(bad("task time", t, "positive"));
        }
        Ok(SchedulingInstance {
            machines,
            deadline,
            tasks,
        })
    }

    pub fn task_count(&self) -> usize {
        self.tasks.len()
    }

    /// Smallest integer above `2n(D+4)`.
    pub fn p(&self) -> usize {
        2 * self.task_count() * (self.deadline + 4) + 1
    }

    pub fn b(&self) -> usize {
        self.p() + 1 + 2 * self.task_count()
    }

    pub fn lambda(&self) -> usize {
        self.machines * (self.deadline + 2)
    }

    pub fn d_prime(&self) -> usize {
        2 * self.lambda() - 4
    }
}

/// Machine groups of 1-based task indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    pub machines: Vec<Vec<usize>>,
}

impl Schedule {
    pub fn loads(&self, inst: &SchedulingInstance) -> Vec<usize> {
        self.machines
            .iter()
            .map(|group| group.iter().map(|&i| inst.tasks.get(i.wrapping_sub(1)).copied().unwrap_or(0)).sum())
            .collect()
    }

    /// Partition of `1..=n` into `m` groups with every load at most `D`.
    pub fn validate(&self, inst: &SchedulingInstance) -> Result<(), GadgetError> {
        if self.machines.len() != inst.machines {
            return Err(GadgetError::Schedule(format!(
                "{} machine groups for {} machines",
                self.machines.len(),
                inst.machines
            )));
        }
        let n = inst.task_count();
        let mut seen = vec![false; n];
        for &i in self.machines.iter().flatten() {
            if i == 0 || i > n {
                return Err(GadgetError::Schedule(format!("task {i} out of range 1..={n}")));
            }
            if std::mem::replace(&mut seen[i - 1], true) {
                return Err(GadgetError::Schedule(format!("task {i} assigned twice")));
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(GadgetError::Schedule(format!("task {} unassigned", i + 1)));
        }
        for (j, load) in self.loads(inst).into_iter().enumerate() {
            if load > inst.deadline {
                return Err(GadgetError::Schedule(format!(
                    "machine {} has load {load} > deadline {}",
                    j + 1,
                    inst.deadline
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let groups: Vec<String> = self
            .machines
            .iter()
            .map(|g| g.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
            .collect();
        f.write_str(&groups.join(";"))
    }
}

/// Comma-separated positive integers.
pub fn parse_tasks(text: &str) -> Result<Vec<usize>, GadgetError> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<usize>()
                .ok()
                .filter(|&t| t > 0)
                .ok_or_else(|| GadgetError::Schedule(format!("invalid task time `{s}`")))
        })
        .collect()
}

/// Semicolon-separated machine groups of comma-separated task indices;
/// an empty group is an idle machine.
pub fn parse_schedule(text: &str) -> Result<Schedule, GadgetError> {
    let machines = text
        .split(';')
        .map(|group| {
            let group = group.trim();
            if group.is_empty() {
                return Ok(Vec::new());
            }
            group
                .split(',')
                .map(|s| {
                    let s = s.trim();
                    s.parse::<usize>()
                        .ok()
                        .filter(|&i| i > 0)
                        .ok_or_else(|| GadgetError::Schedule(format!("invalid task index `{s}`")))
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    Ok(Schedule { machines })
}

/// Raises the last task time on each machine until every load equals `D`.
/// Fails when a machine is idle, since it has no task to stretch.
pub fn pad_schedule(
    inst: &SchedulingInstance,
    sched: &Schedule,
) -> Result<(SchedulingInstance, Schedule), GadgetError> {
    sched.validate(inst)?;
    let mut tasks = inst.tasks.clone();
    for (j, (group, load)) in sched.machines.iter().zip(sched.loads(inst)).enumerate() {
        let &last = group
            .last()
            .ok_or_else(|| GadgetError::Schedule(format!("machine {} is idle and cannot be padded", j + 1)))?;
        tasks[last - 1] += inst.deadline - load;
    }
    Ok((SchedulingInstance::new(inst.machines, inst.deadline, tasks)?, sched.clone()))
}

/// One task's part of `C′`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub tasks: Vec<Vertex>,
    pub task_leaves: Vec<Vec<Vertex>>,
    pub path: Vec<Vertex>,
}

#[derive(Clone, Debug)]
pub struct BugArtifacts {
    pub instance: SchedulingInstance,
    pub graph: Graph,
    pub roles: RoleMap,
    pub b: usize,
    pub p: usize,
    pub d_prime: usize,
    pub lambda: usize,
    /// Spine of `C`, `c_1..c_λ`.
    pub c_spine: Vec<Vertex>,
    /// Leaves of each spine vertex of `C`.
    pub c_leaves: Vec<Vec<Vertex>>,
    pub segments: Vec<Segment>,
    /// Reflector vertices occupy ids `reflector_start..n`.
    pub reflector_start: Vertex,
    /// `z_j = (1 + j(D+2))·b` for `j = 0..=m`.
    pub boundaries: Vec<i64>,
}

impl BugArtifacts {
    /// The spine vertex of `C` with degree `2b`.
    pub fn heavy_vertex(&self) -> Vertex {
        self.c_spine[1]
    }

    pub fn reflector_subgraph(&self) -> Graph {
        let keep: Vec<Vertex> = (self.reflector_start..self.graph.vertex_count()).collect();
        self.graph.induced(&keep)
    }

    pub fn metadata(&self) -> Metadata {
        let mut meta = Metadata::default();
        meta.set("machines", self.instance.machines);
        meta.set("deadline", self.instance.deadline);
        let tasks: Vec<String> = self.instance.tasks.iter().map(ToString::to_string).collect();
        meta.set("tasks", tasks.join(","));
        meta.set("n", self.graph.vertex_count());
        meta.set("b", self.b);
        meta.set("p", self.p);
        meta.set("D_prime", self.d_prime);
        meta.set("lambda", self.lambda);
        let z: Vec<String> = self.boundaries.iter().map(ToString::to_string).collect();
        meta.set("z", z.join(","));
        meta
    }
}

/// Builds the reduction graph. Ids: spine of `C`, leaves of `C`, `C′`
/// segment by segment (each task vertex followed by its leaves, then the
/// path), then the reflector.
pub fn build_bug(inst: &SchedulingInstance) -> BugArtifacts {
    let n = inst.task_count();
    let (m, d) = (inst.machines, inst.deadline);
    let (p, b, lambda, d_prime) = (inst.p(), inst.b(), inst.lambda(), inst.d_prime());
    let mut bld = Builder::default();

    let c_spine: Vec<Vertex> = (1..=lambda).map(|i| bld.vertex(format!("c{i}"))).collect();
    for w in c_spine.windows(2) {
        bld.edge(w[0], w[1]);
    }
    let mut c_leaves = vec![Vec::new(); lambda];
    for j in 0..m {
        let idx = 1 + j * (d + 2);
        let count = if j == 0 { 2 * p + 4 * n } else { 2 * p };
        for _ in 0..count {
            let u = bld.anonymous();
            bld.edge(c_spine[idx], u);
            c_leaves[idx].push(u);
        }
    }

    let mut segments = Vec::with_capacity(n);
    let mut prev: Option<Vertex> = None;
    let mut link = |bld: &mut Builder, v: Vertex| {
        if let Some(u) = prev.replace(v) {
            bld.edge(u, v);
        }
    };
    for (i, &t) in inst.tasks.iter().enumerate() {
        let mut seg = Segment {
            tasks: Vec::new(),
            task_leaves: Vec::new(),
            path: Vec::new(),
        };
        for j in 1..=t {
            let v = bld.vertex(format!("T{}.{j}", i + 1));
            link(&mut bld, v);
            let leaves: Vec<Vertex> = (1..p).map(|_| bld.anonymous()).collect();
            for &u in &leaves {
                bld.edge(v, u);
            }
            seg.tasks.push(v);
            seg.task_leaves.push(leaves);
        }
        for _ in 0..d_prime {
            let v = bld.anonymous();
            link(&mut bld, v);
            seg.path.push(v);
        }
        segments.push(seg);
    }
    let c_prime_end = prev.expect("at least one task");

    let reflector_start = bld.vertex_count();
    add_reflector(&mut bld, b, "R.");
    let (graph, roles) = {
        let a = reflector_start;
        let z = reflector_start + 6;
        bld.edge(a, c_spine[lambda - 1]);
        bld.edge(z, c_prime_end);
        bld.finish()
    };
    debug_assert_eq!(roles.expect("R.a"), reflector_start);
    debug_assert_eq!(roles.expect("R.z"), reflector_start + 6);

    let c_size = m * (d + 2 + 2 * p) + 4 * n;
    let c_prime_size = p * inst.tasks.iter().sum::<usize>() + n * d_prime;
    assert_eq!(graph.vertex_count(), c_size + c_prime_size + 5 * b + 1);
    assert_eq!(graph.degree(c_spine[1]), 2 * b);
    let boundaries = (0..=m).map(|j| ((1 + j * (d + 2)) * b) as i64).collect();

    BugArtifacts {
        instance: inst.clone(),
        graph,
        roles,
        b,
        p,
        d_prime,
        lambda,
        c_spine,
        c_leaves,
        segments,
        reflector_start,
        boundaries,
    }
}

/// Path positions for segment `k` (1-based) between intervals `lo <= hi`,
/// starting next to `hi` and ending next to `lo`. Two tracks per interval:
/// `L_J = Jb + p + 2k − 1` and `U_J = Jb + p + 2k`.
fn thread_path(lo: usize, hi: usize, k: usize, lambda: usize, b: usize, p: usize) -> Vec<i64> {
    let l = |j: usize| (j * b + p + 2 * k - 1) as i64;
    let u = |j: usize| (j * b + p + 2 * k) as i64;
    let mut seq = Vec::with_capacity(2 * (lambda - 2));
    if hi < lambda {
        seq.extend((hi..lambda).map(l));
        seq.extend((hi..lambda).rev().map(u));
    }
    for j in (lo + 1..hi.min(lambda)).rev() {
        seq.push(u(j));
        seq.push(l(j));
    }
    seq.extend((2..=lo).rev().map(u));
    seq.extend((2..=lo).map(l));
    seq
}

/// Bandwidth-`b` numbering from a schedule with loads at most `D`. With
/// every load exactly `D` the positions are exactly `0..=(λ+5)b`; lighter
/// machines leave unused positions.
pub fn schedule_to_numbering(bug: &BugArtifacts, sched: &Schedule) -> Result<Layout, GadgetError> {
    let inst = &bug.instance;
    sched.validate(inst)?;
    let (b, p, lambda) = (bug.b, bug.p, bug.lambda);
    let bi = b as i64;
    let d = inst.deadline;
    let mut pos: Vec<Option<i64>> = vec![None; bug.graph.vertex_count()];

    for (i, &c) in bug.c_spine.iter().enumerate() {
        pos[c] = Some(i as i64 * bi);
    }
    for (idx, leaves) in bug.c_leaves.iter().enumerate() {
        if leaves.is_empty() {
            continue;
        }
        let below = ((idx as i64 - 1) * bi + 1..).take(if idx == 1 { b - 1 } else { p });
        let above = (idx as i64 * bi + 1..).take(if idx == 1 { b - 1 } else { p });
        for (&u, x) in leaves.iter().zip(below.chain(above)) {
            pos[u] = Some(x);
        }
    }

    let mut interval_of = vec![0usize; bug.graph.vertex_count()];
    for (j, group) in sched.machines.iter().enumerate() {
        let mut interval = j * (d + 2) + 2;
        for &task in group {
            let seg = &bug.segments[task - 1];
            for (&v, leaves) in seg.tasks.iter().zip(&seg.task_leaves) {
                let base = (interval * b) as i64;
                pos[v] = Some(base + 1);
                interval_of[v] = interval;
                for (&u, off) in leaves.iter().zip(2..) {
                    pos[u] = Some(base + off);
                }
                interval += 1;
            }
        }
    }

    for (k, seg) in bug.segments.iter().enumerate() {
        let alpha = interval_of[*seg.tasks.last().expect("tasks are positive")];
        let beta = match bug.segments.get(k + 1) {
            Some(next) => interval_of[next.tasks[0]],
            None => lambda,
        };
        let (lo, hi) = (alpha.min(beta), alpha.max(beta));
        let mut seq = thread_path(lo, hi, k + 1, lambda, b, p);
        if alpha != hi {
            seq.reverse();
        }
        for (&v, x) in seg.path.iter().zip(seq) {
            pos[v] = Some(x);
        }
    }

    let base = (lambda * b) as i64;
    for (v, x) in reflector_order(&bug.roles, b, "R.", true).into_iter().zip(base..) {
        pos[v] = Some(x);
    }

    let position: Vec<i64> = pos
        .into_iter()
        .enumerate()
        .map(|(v, x)| x.ok_or_else(|| GadgetError::Schedule(format!("vertex {v} left unplaced"))))
        .collect::<Result<_, _>>()?;
    Ok(Layout::new(position)?)
}

/// Reads a schedule off a bandwidth-`b` numbering: task `i` goes to machine
/// `j` when its task vertices lie strictly between `z_{j−1}` and `z_j`.
pub fn numbering_to_schedule(bug: &BugArtifacts, f: &Layout) -> Result<Schedule, GadgetError> {
    if f.len() != bug.graph.vertex_count() {
        return Err(GadgetError::Extraction(format!(
            "layout has {} vertices, graph has {}",
            f.len(),
            bug.graph.vertex_count()
        )));
    }
    let width = f.bandwidth(&bug.graph);
    if width > bug.b as u64 {
        return Err(GadgetError::Extraction(format!("bandwidth {width} exceeds b = {}", bug.b)));
    }
    if width < bug.b as u64 {
        return Err(GadgetError::Extraction(format!(
            "bandwidth {width} is below the reflector bound b = {}",
            bug.b
        )));
    }
    let lo = f.positions().iter().copied().min().unwrap_or(0);
    let hi = f.positions().iter().copied().max().unwrap_or(0);
    let mut normal: Vec<i64> = f.positions().iter().map(|&x| x - lo).collect();
    if normal[bug.heavy_vertex()] > (hi - lo) / 2 {
        for x in &mut normal {
            *x = hi - lo - *x;
        }
    }
    assign_by_boundaries(bug, &normal)
}

pub(crate) fn assign_by_boundaries(bug: &BugArtifacts, pos: &[i64]) -> Result<Schedule, GadgetError> {
    let z = &bug.boundaries;
    let m = bug.instance.machines;
    let mut machines = vec![Vec::new(); m];
    for (i, seg) in bug.segments.iter().enumerate() {
        let task = i + 1;
        let mut machine = None;
        for &v in &seg.tasks {
            let x = pos[v];
            let j = (1..=m).find(|&j| z[j - 1] < x && x < z[j]).ok_or_else(|| {
                GadgetError::Extraction(format!("task {task}: vertex {v} at {x} is outside every machine block"))
            })?;
            if *machine.get_or_insert(j) != j {
                return Err(GadgetError::Extraction(format!(
                    "task {task} straddles boundary z_{}",
                    machine.unwrap().min(j)
                )));
            }
        }
        machines[machine.expect("tasks are positive") - 1].push(task);
    }
    let sched = Schedule { machines };
    for (j, load) in sched.loads(&bug.instance).into_iter().enumerate() {
        if load > bug.instance.deadline {
            return Err(GadgetError::Extraction(format!(
                "machine {} receives load {load} > {}",
                j + 1,
                bug.instance.deadline
            )));
        }
    }
    Ok(sched)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::reflector_certificate;
    use crate::graph::verify_layout;

    fn inst(m: usize, d: usize, t: &[usize]) -> SchedulingInstance {
        SchedulingInstance::new(m, d, t.to_vec()).unwrap()
    }

    #[test]
    fn sizes() {
        let bug = build_bug(&inst(1, 1, &[1]));
        assert_eq!((bug.p, bug.b, bug.graph.vertex_count()), (11, 14, 113));
        let bug = build_bug(&inst(2, 2, &[2, 1, 1]));
        assert_eq!((bug.p, bug.b, bug.graph.vertex_count()), (37, 44, 573));
        assert_eq!(bug.d_prime, 2 * 8 - 4);
        assert_eq!(bug.graph.degree(bug.heavy_vertex()), 88);
        assert_eq!(bug.boundaries, vec![44, 220, 396]);
        assert!(bug.graph.is_connected());
    }

    #[test]
    fn small_round_trip() {
        let i = inst(1, 1, &[1]);
        let bug = build_bug(&i);
        let s = parse_schedule("1").unwrap();
        let f = schedule_to_numbering(&bug, &s).unwrap();
        assert_eq!(verify_layout(&bug.graph, &f).unwrap(), 14);
        let mut sorted = f.positions().to_vec();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..113).collect::<Vec<i64>>());
        assert_eq!(numbering_to_schedule(&bug, &f).unwrap(), s);
        assert_eq!(numbering_to_schedule(&bug, &f.mirrored()).unwrap(), s);
    }

    #[test]
    fn reflector_part_certifies_b() {
        let bug = build_bug(&inst(2, 2, &[2, 1, 1]));
        let cert = reflector_certificate(&bug.reflector_subgraph()).unwrap();
        assert_eq!(cert.bound, 44);
    }

    #[test]
    fn light_loads_leave_gaps() {
        let i = inst(2, 3, &[1, 2]);
        let bug = build_bug(&i);
        let s = parse_schedule("1;2").unwrap();
        let f = schedule_to_numbering(&bug, &s).unwrap();
        assert_eq!(verify_layout(&bug.graph, &f).unwrap(), bug.b as u64);
        assert_eq!(numbering_to_schedule(&bug, &f).unwrap(), s);
        let idle = parse_schedule("1,2;").unwrap();
        let f = schedule_to_numbering(&bug, &idle).unwrap();
        assert_eq!(verify_layout(&bug.graph, &f).unwrap(), bug.b as u64);
    }

    #[test]
    fn padding() {
        let i = inst(2, 3, &[1, 2]);
        let s = parse_schedule("1;2").unwrap();
        let (padded, ps) = pad_schedule(&i, &s).unwrap();
        assert_eq!(padded.tasks, vec![3, 3]);
        assert_eq!(ps.loads(&padded), vec![3, 3]);
        let bug = build_bug(&padded);
        assert_eq!(bug.graph.vertex_count(), (bug.lambda + 5) * bug.b + 1);
        let f = schedule_to_numbering(&bug, &ps).unwrap();
        assert_eq!(verify_layout(&bug.graph, &f).unwrap(), bug.b as u64);
        assert!(pad_schedule(&i, &parse_schedule("1,2;").unwrap()).is_err());
    }

    #[test]
    fn schedule_validation() {
        let i = inst(2, 2, &[2, 1, 1]);
        assert!(parse_schedule("1;2,3").unwrap().validate(&i).is_ok());
        assert!(parse_schedule("1,2;3").unwrap().validate(&i).is_err());
        assert!(parse_schedule("1;2").unwrap().validate(&i).is_err());
        assert!(parse_schedule("1;2,3;").unwrap().validate(&i).is_err());
        assert!(parse_schedule("1;2,2,3").unwrap().validate(&i).is_err());
        assert!(parse_schedule("1;2,x").is_err());
        assert!(parse_schedule("0").is_err());
        assert_eq!(parse_tasks("2, 1,1").unwrap(), vec![2, 1, 1]);
        assert!(parse_tasks("2,,1").is_err());
        assert!(parse_tasks("0").is_err());
        assert_eq!(parse_schedule("1;2,3").unwrap().to_string(), "1;2,3");
        assert!(SchedulingInstance::new(0, 1, vec![1]).is_err());
        assert!(SchedulingInstance::new(1, 1, vec![]).is_err());
    }

    #[test]
    fn boundary_rule_rejections() {
        let i = inst(2, 2, &[2, 1, 1]);
        let bug = build_bug(&i);
        let f = schedule_to_numbering(&bug, &parse_schedule("1;2,3").unwrap()).unwrap();
        let mut pos = f.positions().to_vec();
        let t1 = &bug.segments[0].tasks;
        pos[t1[1]] = bug.boundaries[1] + 1;
        let err = assign_by_boundaries(&bug, &pos).unwrap_err();
        assert!(err.to_string().contains("task 1 straddles"), "{err}");
        pos[t1[1]] = bug.boundaries[1];
        let err = assign_by_boundaries(&bug, &pos).unwrap_err();
        assert!(err.to_string().contains("task 1"), "{err}");

        // Two tasks of total time 3 on one machine exceed D = 2.
        let mut pos = f.positions().to_vec();
        pos[bug.segments[1].tasks[0]] = bug.boundaries[0] + 1;
        let err = assign_by_boundaries(&bug, &pos).unwrap_err();
        assert!(err.to_string().contains("load 3"), "{err}");

        // A layout stretched past b is refused before any assignment.
        let stretched = Layout::new(f.positions().iter().map(|x| 2 * x).collect()).unwrap();
        assert!(numbering_to_schedule(&bug, &stretched).is_err());
    }
}
