use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use swapdiv::constructions::{
    gstar_assignment, optimal_assignment, worst_assignment, Family, GStarWhich, Target,
};
use swapdiv::dynamics::default_max_steps;
use swapdiv::oracle::{brute_force_optimum, enumerate_equilibria, labeling_count, DEFAULT_CAP};
use swapdiv::{
    equitable_partition, load_edge_list, random_assignment, run_experiment, run_to_equilibrium,
    verify_equilibrium, Assignment, Error, ExperimentConfig, GStar, Graph, Measure, MeasureReport,
    RandomMode, TypePartition, UtilityKind,
};

#[derive(Parser)]
#[command(
    name = "swapdiv",
    version,
    about = "Diversity-seeking swap games on graphs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a graph and an optimal or worst-case assignment on it.
    Construct(ConstructArgs),
    /// Print the diversity measures of an assignment.
    Measure(MeasureArgs),
    /// Run swap dynamics to equilibrium.
    Simulate(SimulateArgs),
    /// Check whether an assignment is an equilibrium.
    Verify(VerifyArgs),
    /// Exhaustive enumeration on a small graph.
    Oracle(OracleArgs),
    /// Seeded batch of runs on the torus, written as CSV.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct ConstructArgs {
    /// cycle, cylinder, torus or gstar.
    #[arg(long)]
    family: String,
    /// Number of vertices (ignored for gstar).
    #[arg(short = 'n', long, default_value_t = 0)]
    n: usize,
    #[arg(short = 't', long)]
    t: usize,
    /// Utility the worst case is built against.
    #[arg(long, default_value = "binary")]
    utility: UtilityKind,
    /// sw or ce.
    #[arg(long, default_value = "sw")]
    measure: String,
    /// worst or optimal.
    #[arg(long, default_value = "worst")]
    which: String,
    /// Degree of the gstar gadget.
    #[arg(long)]
    delta: Option<usize>,
    /// Gadget size k of gstar.
    #[arg(short = 'k', long)]
    k: Option<usize>,
    #[arg(long, default_value = "graph.edges")]
    graph_out: PathBuf,
    #[arg(long, default_value = "assignment.txt")]
    assignment_out: PathBuf,
}

/// Graph as an edge-list path or `family:n`, e.g. `torus:900`.
#[derive(Args)]
struct GraphArg {
    graph: String,
}

#[derive(Args)]
struct MeasureArgs {
    #[command(flatten)]
    graph: GraphArg,
    assignment: PathBuf,
    /// Number of types (defaults to the largest label).
    #[arg(short = 't', long)]
    t: Option<usize>,
    /// Also print a CSV header and row.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Starting assignment; omit to draw one from --seed.
    assignment: Option<PathBuf>,
    #[arg(long)]
    utility: UtilityKind,
    #[arg(short = 't', long)]
    t: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "uniform-per-vertex")]
    mode: RandomMode,
    #[arg(long)]
    max_steps: Option<usize>,
    /// Write the move log (step,u,v,potential) here.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Write the final assignment here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    graph: GraphArg,
    assignment: PathBuf,
    #[arg(long)]
    utility: UtilityKind,
    #[arg(short = 't', long)]
    t: Option<usize>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long)]
    utility: UtilityKind,
    /// Type counts, e.g. 3,3. Defaults to the equitable split for -t.
    #[arg(long, value_delimiter = ',')]
    counts: Vec<usize>,
    #[arg(short = 't', long)]
    t: Option<usize>,
    /// doi, doic:J, doit:J, ce, nv or ev.
    #[arg(long, default_value = "doi")]
    measure: Measure,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u128,
    /// Directory for witness files.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// key=value file; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    side: Option<usize>,
    /// Range such as 2..9.
    #[arg(short = 't', long)]
    t: Option<String>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma list of random, schelling.
    #[arg(long)]
    inputs: Option<String>,
    /// Comma list of binary, diff, variety.
    #[arg(long)]
    utilities: Option<String>,
    #[arg(long)]
    mode: Option<String>,
    /// Per-run rows; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Per-(input, utility, t) means.
    #[arg(long)]
    aggregate: Option<PathBuf>,
}

fn load_graph(arg: &GraphArg) -> anyhow::Result<Graph> {
    let s = &arg.graph;
    if !Path::new(s).exists() {
        if let Some((fam, n)) = s.split_once(':') {
            let family: Family = fam.parse()?;
            let n = n
                .parse()
                .with_context(|| format!("bad vertex count in {s:?}"))?;
            return Ok(family.graph(n)?);
        }
    }
    load_edge_list(s).with_context(|| format!("reading {s}"))
}

fn read_assignment<'g>(
    g: &'g Graph,
    path: &Path,
    t: Option<usize>,
) -> anyhow::Result<Assignment<'g>> {
    let text = fs::read_to_string(path).map_err(Error::from)?;
    Assignment::parse(g, &text, t).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text)
        .map_err(Error::from)
        .with_context(|| format!("writing {}", path.display()))
}

fn print_verdicts(out: &mut String, a: &Assignment<'_>) -> std::fmt::Result {
    for kind in UtilityKind::DIVERSITY {
        match verify_equilibrium(kind, a).witness {
            None => writeln!(out, "equilibrium.{kind}=true"),
            Some((u, v)) => writeln!(out, "equilibrium.{kind}=false swap={u},{v}"),
        }?;
    }
    Ok(())
}

fn construct(args: ConstructArgs) -> anyhow::Result<String> {
    let mut out = String::new();
    let which: GStarWhich = args.which.parse()?;
    let gstar;
    let graph;
    let c = if args.family == "gstar" {
        let (Some(delta), Some(k)) = (args.delta, args.k) else {
            bail!(Error::InvalidParameter("gstar needs --delta and -k".into()));
        };
        gstar = GStar::build(args.t, delta, k)?;
        gstar_assignment(&gstar, which)?
    } else {
        let family: Family = args.family.parse()?;
        graph = family.graph(args.n)?;
        match which {
            GStarWhich::Optimal => {
                let a = optimal_assignment(&graph, family, args.t)?;
                swapdiv::Construction {
                    name: format!("optimal {family}"),
                    assignment: a,
                    stitch: String::new(),
                    verified: Vec::new(),
                }
            }
            GStarWhich::Worst => {
                let target: Target = args.measure.parse()?;
                worst_assignment(&graph, family, args.utility, target, args.t)?
            }
        }
    };
    let a = &c.assignment;
    write(&args.graph_out, &a.graph().to_edge_list())?;
    write(&args.assignment_out, &a.to_line())?;
    writeln!(out, "construction={}", c.name)?;
    if !c.stitch.is_empty() {
        writeln!(out, "stitch={}", c.stitch)?;
    }
    write!(out, "{}", MeasureReport::compute(a).to_key_values())?;
    print_verdicts(&mut out, a)?;
    Ok(out)
}

fn measure(args: MeasureArgs) -> anyhow::Result<String> {
    let mut out = String::new();
    let g = load_graph(&args.graph)?;
    let a = read_assignment(&g, &args.assignment, args.t)?;
    let r = MeasureReport::compute(&a);
    write!(out, "{}", r.to_key_values())?;
    if args.csv {
        writeln!(out, "{}", MeasureReport::CSV_HEADER)?;
        writeln!(out, "{}", r.to_csv_row())?;
    }
    Ok(out)
}

fn simulate(args: SimulateArgs) -> anyhow::Result<String> {
    let mut out = String::new();
    let g = load_graph(&args.graph)?;
    let start = match &args.assignment {
        Some(p) => read_assignment(&g, p, args.t)?,
        None => {
            let Some(t) = args.t else {
                bail!(Error::InvalidParameter("a random start needs -t".into()));
            };
            random_assignment(&g, t, args.seed, args.mode)?
        }
    };
    let cap = args
        .max_steps
        .unwrap_or_else(|| default_max_steps(args.utility, &g));
    let trace = run_to_equilibrium(args.utility, &start, cap)?;
    writeln!(out, "utility={}", args.utility)?;
    writeln!(out, "swaps={}", trace.swap_count())?;
    writeln!(out, "initial_potential={}", swapdiv::potential(&start))?;
    writeln!(out, "final_potential={}", trace.final_potential())?;
    writeln!(out, "equilibrium={}", trace.at_equilibrium)?;
    writeln!(out, "truncated={}", trace.truncated())?;
    if let Some(p) = &args.log {
        write(p, &trace.move_log_csv())?;
    }
    if let Some(p) = &args.out {
        write(p, &trace.final_assignment.to_line())?;
    }
    Ok(out)
}

fn verify(args: VerifyArgs) -> anyhow::Result<String> {
    let mut out = String::new();
    let g = load_graph(&args.graph)?;
    let a = read_assignment(&g, &args.assignment, args.t)?;
    match verify_equilibrium(args.utility, &a).witness {
        None => writeln!(out, "equilibrium=true")?,
        Some((u, v)) => {
            writeln!(out, "equilibrium=false")?;
            writeln!(out, "improving_swap={u},{v}")?;
        }
    }
    Ok(out)
}

fn oracle(args: OracleArgs) -> anyhow::Result<String> {
    let mut out = String::new();
    let g = load_graph(&args.graph)?;
    let partition = match (args.counts.is_empty(), args.t) {
        (false, _) => TypePartition::new(args.counts.clone())?,
        (true, Some(t)) => equitable_partition(g.n(), t)?,
        (true, None) => bail!(Error::InvalidParameter("give --counts or -t".into())),
    };
    let eqs = enumerate_equilibria(&g, &partition, args.utility, args.cap)?;
    let (best, witness) = brute_force_optimum(&g, &partition, args.measure, args.cap)?;
    let worst = eqs
        .iter()
        .map(|a| (args.measure.value(a), a))
        .min_by_key(|(x, _)| *x);
    writeln!(out, "labelings={}", labeling_count(&partition))?;
    writeln!(out, "equilibria={}", eqs.len())?;
    writeln!(out, "optimum={best}")?;
    writeln!(out, "optimum_witness={}", witness.to_line().trim_end())?;
    if let Some((x, a)) = &worst {
        writeln!(out, "worst_equilibrium={x}")?;
        writeln!(out, "worst_equilibrium_witness={}", a.to_line().trim_end())?;
    }
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).map_err(Error::from)?;
        let all: String = eqs.iter().map(|a| a.to_line()).collect();
        write(&dir.join("equilibria.txt"), &all)?;
        write(&dir.join("optimum.txt"), &witness.to_line())?;
        if let Some((_, a)) = &worst {
            write(&dir.join("worst_equilibrium.txt"), &a.to_line())?;
        }
    }
    Ok(out)
}

fn experiment(args: ExperimentArgs) -> anyhow::Result<String> {
    let mut out = String::new();
    let (mut cfg, rest) = match &args.config {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(Error::from)
                .with_context(|| format!("reading {}", p.display()))?;
            ExperimentConfig::parse_file(&text, &["output", "aggregate"])?
        }
        None => (ExperimentConfig::default(), Vec::new()),
    };
    let mut output = None;
    let mut aggregate = None;
    for (k, v) in rest {
        match k.as_str() {
            "output" => output = Some(PathBuf::from(v)),
            _ => aggregate = Some(PathBuf::from(v)),
        }
    }
    let flags = [
        ("side", args.side.map(|x| x.to_string())),
        ("t", args.t),
        ("runs", args.runs.map(|x| x.to_string())),
        ("seed", args.seed.map(|x| x.to_string())),
        ("inputs", args.inputs),
        ("utilities", args.utilities),
        ("mode", args.mode),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.set(k, &v)?;
        }
    }
    output = args.output.or(output);
    aggregate = args.aggregate.or(aggregate);

    let res = run_experiment(&cfg)?;
    match &output {
        Some(p) => write(p, &res.rows_csv())?,
        None => out = res.rows_csv(),
    }
    if let Some(p) = &aggregate {
        write(p, &res.aggregate_csv())?;
    }
    Ok(out)
}

fn run(cli: Cli) -> anyhow::Result<String> {
    match cli.cmd {
        Cmd::Construct(a) => construct(a),
        Cmd::Measure(a) => measure(a),
        Cmd::Simulate(a) => simulate(a),
        Cmd::Verify(a) => verify(a),
        Cmd::Oracle(a) => oracle(a),
        Cmd::Experiment(a) => experiment(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(out) => {
            // a closed pipe downstream is not an error
            let _ = io::stdout().lock().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let internal = e
                .downcast_ref::<Error>()
                .is_some_and(|err| !err.is_user_error());
            ExitCode::from(if internal { 2 } else { 1 })
        }
    }
}
