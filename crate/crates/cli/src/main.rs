use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use blockcat::density::DEFAULT_CAP;
use blockcat::gadgets::{
    build_bug, build_hk, build_near_reflector, build_reflector, build_tk, near_reflector_numbering,
    numbering_to_schedule, parse_schedule, parse_tasks, reflector_numbering, schedule_to_numbering, Metadata, RoleMap,
    SchedulingInstance,
};
use blockcat::{
    anchor_and_augment, decide_bandwidth, enumerate_optimal, layout_block_caterpillar, local_density_bruteforce,
    local_density_structured, optimal_layout, parse_graph, parse_layout, recognize_block_caterpillar,
    serialize_graph, serialize_layout, verify_layout, Decision, Enumeration, Graph, Layout, LayoutError,
    OracleError, SearchBudget,
};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "blockcat", version, about = "Bandwidth of block caterpillars and related gadgets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test whether a graph is a block caterpillar and print its spine.
    Recognize { graph: PathBuf },
    /// Local density of a block caterpillar.
    Density {
        graph: PathBuf,
        /// Cross-check against exhaustive subset enumeration.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Optimal layout of a block caterpillar.
    Layout {
        graph: PathBuf,
        /// Build an m-representation for this m instead of the optimum.
        #[arg(short)]
        m: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Bandwidth of a layout.
    Verify { graph: PathBuf, layout: PathBuf },
    /// Exact bandwidth of a small graph by branch and bound.
    Oracle {
        graph: PathBuf,
        #[arg(long)]
        max_b: Option<usize>,
        #[arg(long, default_value_t = 100_000_000)]
        max_nodes: u64,
        /// Also count optimal layouts up to reversal.
        #[arg(long)]
        enumerate: bool,
    },
    /// Write a named gadget graph with its roles and metadata.
    Gadget {
        kind: GadgetKind,
        #[arg(long)]
        param: usize,
        /// Output prefix; files get .graph, .roles, .meta and .layout suffixes.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Build the bug graph of a scheduling instance.
    Reduce {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Schedule to numbering and back, with certificates.
    Roundtrip {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        schedule: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GadgetKind {
    Hk,
    Tk,
    Reflector,
    NearReflector,
}

#[derive(clap::Args)]
struct InstanceArgs {
    #[arg(long)]
    machines: usize,
    #[arg(long)]
    deadline: usize,
    /// Comma-separated task times.
    #[arg(long)]
    tasks: String,
}

enum Failure {
    /// Bad input: exit 2.
    Usage(String),
    /// Input understood, answer is negative: exit 1.
    Rejected(String),
}

type Outcome = Result<String, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn rejected(e: impl std::fmt::Display) -> Failure {
    Failure::Rejected(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    parse_graph(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn recognize(path: &Path) -> Outcome {
    let g = load_graph(path)?;
    let s = recognize_block_caterpillar(&g).map_err(rejected)?;
    let mut out = String::new();
    writeln!(out, "block_caterpillar=yes").unwrap();
    writeln!(out, "n={}", g.vertex_count()).unwrap();
    writeln!(out, "k={}", s.k()).unwrap();
    if let Some(c) = s.center {
        writeln!(out, "center={c}").unwrap();
    }
    writeln!(out, "cutvertices={}", join(&s.cut_sequence)).unwrap();
    for (i, q) in s.spine.iter().enumerate() {
        writeln!(out, "clique{}={}", i + 1, join(q)).unwrap();
    }
    let counts: Vec<String> = s
        .spine_vertices()
        .into_iter()
        .filter(|&v| s.leaf_count(v) > 0)
        .map(|v| format!("{v}:{}", s.leaf_count(v)))
        .collect();
    writeln!(out, "leaves={}", counts.join(",")).unwrap();
    Ok(out)
}

fn density(path: &Path, exact: bool, cap: usize) -> Outcome {
    let g = load_graph(path)?;
    let s = recognize_block_caterpillar(&g).map_err(rejected)?;
    let (aug, a) = anchor_and_augment(&s, &g);
    let report = local_density_structured(&a, &aug).map_err(rejected)?;
    let mut out = String::new();
    for field in report.to_string().split(' ') {
        writeln!(out, "{field}").unwrap();
    }
    if exact {
        if g.vertex_count() > cap {
            writeln!(out, "brute_force=skipped").unwrap();
        } else {
            let brute = local_density_bruteforce(&g, cap).map_err(rejected)?;
            writeln!(out, "brute_force={brute}").unwrap();
            if brute != report.beta {
                return Err(rejected(format!("structured {} disagrees with brute force {brute}", report.beta)));
            }
        }
    }
    Ok(out)
}

fn layout(path: &Path, m: Option<usize>, output: Option<&Path>) -> Outcome {
    let g = load_graph(path)?;
    let to_failure = |e: LayoutError| match e {
        LayoutError::Internal(_) => usage(e),
        _ => rejected(e),
    };
    let f = match m {
        None => optimal_layout(&g).map_err(to_failure)?.0,
        Some(0) => return Err(usage("m must be positive")),
        Some(m) => {
            let s = recognize_block_caterpillar(&g).map_err(rejected)?;
            let (aug, a) = anchor_and_augment(&s, &g);
            let j = layout_block_caterpillar(&a, &aug, m).map_err(to_failure)?;
            // Helpers come after the original ids; drop them and close the gaps.
            let own = j.layout.positions()[..g.vertex_count()].to_vec();
            blockcat::condense(&Layout::new(own).map_err(usage)?)
        }
    };
    let b = verify_layout(&g, &f).map_err(usage)?;
    if let Some(path) = output {
        write(path, &serialize_layout(&f))?;
    }
    Ok(format!("n={}\nbandwidth={b}\n", g.vertex_count()))
}

fn verify(graph: &Path, layout: &Path) -> Outcome {
    let g = load_graph(graph)?;
    let f = parse_layout(&read(layout)?).map_err(|e| usage(format!("{}: {e}", layout.display())))?;
    let b = verify_layout(&g, &f).map_err(usage)?;
    Ok(format!("bandwidth={b}\n"))
}

fn oracle_failure(e: OracleError) -> Failure {
    match e {
        OracleError::TooLarge { .. } | OracleError::Disconnected => usage(e),
        OracleError::BudgetExhausted { .. } => rejected(e),
    }
}

fn oracle(path: &Path, max_b: Option<usize>, max_nodes: u64, enumerate: bool) -> Outcome {
    let g = load_graph(path)?;
    let budget = SearchBudget {
        max_nodes,
        ..SearchBudget::default()
    };
    let n = g.vertex_count();
    let top = max_b.unwrap_or(n.saturating_sub(1)).min(n.saturating_sub(1));
    let mut b = blockcat::oracle::simple_lower_bound(&g);
    let f = loop {
        if b > top {
            return Err(rejected(format!("bandwidth exceeds {top}")));
        }
        match decide_bandwidth(&g, b, budget).map_err(oracle_failure)? {
            Decision::Feasible(f) => break f,
            Decision::Infeasible => b += 1,
            Decision::BudgetExhausted => return Err(rejected(format!("node budget exhausted at b={b}"))),
        }
    };
    let mut out = format!("n={n}\nbandwidth={b}\nwitness={}\n", join(&f.order()));
    if enumerate {
        let result = enumerate_optimal(&g, b, budget, |_| {}).map_err(oracle_failure)?;
        let status = match result {
            Enumeration::Complete { .. } => "complete",
            Enumeration::Truncated { .. } => "truncated",
            Enumeration::BudgetExhausted { .. } => "budget_exhausted",
        };
        writeln!(out, "optimal_layouts={}\nenumeration={status}", result.count()).unwrap();
    }
    Ok(out)
}

fn write_bundle(prefix: &Path, g: &Graph, roles: &RoleMap, meta: &Metadata, f: Option<&Layout>) -> Result<(), Failure> {
    write(&with_suffix(prefix, ".graph"), &serialize_graph(g))?;
    write(&with_suffix(prefix, ".roles"), &roles.serialize())?;
    write(&with_suffix(prefix, ".meta"), &meta.serialize())?;
    if let Some(f) = f {
        write(&with_suffix(prefix, ".layout"), &serialize_layout(f))?;
    }
    Ok(())
}

fn gadget(kind: GadgetKind, param: usize, output: &Path) -> Outcome {
    let (name, built, f) = match kind {
        GadgetKind::Hk => ("hk", build_hk(param), None),
        GadgetKind::Tk => ("tk", build_tk(param), None),
        GadgetKind::Reflector => ("reflector", build_reflector(param), reflector_numbering(param).ok()),
        GadgetKind::NearReflector => (
            "near-reflector",
            build_near_reflector(param),
            near_reflector_numbering(param).ok(),
        ),
    };
    let (g, roles) = built.map_err(usage)?;
    let mut meta = Metadata::default();
    meta.set("gadget", name);
    meta.set("param", param);
    meta.set("n", g.vertex_count());
    meta.set("edges", g.edge_count());
    if let Some(f) = &f {
        meta.set("layout_bandwidth", f.bandwidth(&g));
    }
    write_bundle(output, &g, &roles, &meta, f.as_ref())?;
    Ok(meta.serialize())
}

fn instance(args: &InstanceArgs) -> Result<SchedulingInstance, Failure> {
    let tasks = parse_tasks(&args.tasks).map_err(usage)?;
    SchedulingInstance::new(args.machines, args.deadline, tasks).map_err(usage)
}

fn reduce(args: &InstanceArgs, output: &Path) -> Outcome {
    let bug = build_bug(&instance(args)?);
    let meta = bug.metadata();
    write_bundle(output, &bug.graph, &bug.roles, &meta, None)?;
    Ok(meta.serialize())
}

fn roundtrip(args: &InstanceArgs, schedule: &str, output: Option<&Path>) -> Outcome {
    let inst = instance(args)?;
    let sched = parse_schedule(schedule).map_err(usage)?;
    sched.validate(&inst).map_err(rejected)?;
    let bug = build_bug(&inst);
    let f = schedule_to_numbering(&bug, &sched).map_err(rejected)?;
    let width = verify_layout(&bug.graph, &f).map_err(usage)?;
    let back = numbering_to_schedule(&bug, &f).map_err(rejected)?;
    let pass = width == bug.b as u64 && back.validate(&inst).is_ok();
    if let Some(prefix) = output {
        write_bundle(prefix, &bug.graph, &bug.roles, &bug.metadata(), Some(&f))?;
    }
    let loads = back.loads(&inst);
    let out = format!(
        "n={}\nb={}\nbandwidth={width}\nschedule={sched}\nextracted={back}\nloads={}\nresult={}\n",
        bug.graph.vertex_count(),
        bug.b,
        join(&loads),
        if pass { "PASS" } else { "FAIL" }
    );
    if pass {
        Ok(out)
    } else {
        print!("{out}");
        Err(rejected("round trip failed"))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Recognize { graph } => recognize(&graph),
        Command::Density { graph, exact, cap } => density(&graph, exact, cap),
        Command::Layout { graph, m, output } => layout(&graph, m, output.as_deref()),
        Command::Verify { graph, layout } => verify(&graph, &layout),
        Command::Oracle {
            graph,
            max_b,
            max_nodes,
            enumerate,
        } => oracle(&graph, max_b, max_nodes, enumerate),
        Command::Gadget { kind, param, output } => gadget(kind, param, &output),
        Command::Reduce { instance, output } => reduce(&instance, &output),
        Command::Roundtrip {
            instance,
            schedule,
            output,
        } => roundtrip(&instance, &schedule, output.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Rejected(msg)) => {
            eprintln!("rejected: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
