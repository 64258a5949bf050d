//! Implementations of the subcommands.

use crate::format::{
    parse_instance, parse_schedule, write_instance, write_instance_json, write_schedule, write_truth, ParseError,
};
use crate::{
    Algo, Command, Corpus, GenCommand, OracleArgs, Output, SolveArgs, TableFormat, EXIT_NO, EXIT_SOFTWARE,
    EXIT_UNKNOWN, EXIT_USAGE, EXIT_YES,
};
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use tedsc::approx::approx_min_walks;
use tedsc::constrained::{solve_fpt_kh_with, solve_star_fpt, solve_xp_k_with, FptOptions, XpOptions};
use tedsc::corpus::{sweep, SweepConfig, SweepReport};
use tedsc::generators::{
    gen_from_3sat, gen_from_bin_packing, gen_from_edp_dag, gen_random, Cnf, GroundTruth, RandomParams,
};
use tedsc::oracle::{oracle_decide_with, oracle_min_walks_with, OracleCaps};
use tedsc::unconstrained::solve_tedsc;
use tedsc::{validate_schedule, Decision, DirectedGraph, GenError, Instance, Schedule, SolveError, Variant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{err}")]
    Parse { path: PathBuf, err: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solve(SolveError::Internal(_) | SolveError::Expansion(_)) => EXIT_SOFTWARE,
            _ => EXIT_USAGE,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    if path == Path::new("-") {
        print!("{text}");
        return Ok(());
    }
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn load_instance(path: &Path) -> Result<Instance, CliError> {
    parse_instance(&read(path)?).map_err(|err| CliError::Parse { path: path.to_path_buf(), err })
}

pub fn load_schedule(path: &Path) -> Result<Schedule, CliError> {
    parse_schedule(&read(path)?).map_err(|err| CliError::Parse { path: path.to_path_buf(), err })
}

pub fn execute(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::Solve(args) => solve(&args),
        Command::Validate { instance, schedule } => validate(&instance, &schedule),
        Command::Gen(g) => generate(g),
        Command::Approx { instance, schedule } => approx(&instance, schedule.as_deref()),
        Command::Oracle(args) => oracle(&args),
        Command::Bench { corpus, format } => bench(corpus, format),
    }
}

/// Prints the verdict, writes the witness and maps the decision to its
/// exit code.
fn report(d: &Decision, schedule: Option<&Path>) -> Result<i32, CliError> {
    println!("{}", d.label());
    match d {
        Decision::Yes(s) => {
            if let Some(path) = schedule {
                write(path, &write_schedule(s))?;
            }
            Ok(EXIT_YES)
        }
        Decision::No => Ok(EXIT_NO),
        Decision::Unknown(why) => {
            eprintln!("{why}");
            Ok(EXIT_UNKNOWN)
        }
    }
}

fn solve(args: &SolveArgs) -> Result<i32, CliError> {
    let inst = load_instance(&args.instance)?;
    let algo = match args.algo {
        Algo::Auto if inst.variant() == Variant::Unconstrained => Algo::Flow,
        Algo::Auto => Algo::FptKh,
        a => a,
    };
    let d = match algo {
        Algo::Auto | Algo::Flow => solve_tedsc(&inst)?,
        Algo::FptKh => {
            let mut opts = FptOptions::default();
            if let Some(b) = args.budget {
                opts.edp_budget = b;
                opts.assignment_budget = b;
            }
            solve_fpt_kh_with(&inst, &opts)?
        }
        Algo::XpK => {
            let mut opts = XpOptions::default();
            if let Some(b) = args.budget {
                opts.state_budget = b;
            }
            solve_xp_k_with(&inst, &opts)?
        }
        Algo::Star => solve_star_fpt(&inst)?,
        Algo::Oracle => oracle_decide_with(&inst, &OracleCaps::default()),
        Algo::Approx => decide_by_approx(&inst)?,
    };
    report(&d, args.schedule.as_deref())
}

/// YES when the approximation fits within `k` walks, NO when `k` is below
/// its lower bound on the optimum, UNKNOWN in between.
fn decide_by_approx(inst: &Instance) -> Result<Decision, CliError> {
    let r = approx_min_walks(inst)?;
    Ok(if r.schedule.len() <= inst.k() {
        Decision::Yes(r.schedule)
    } else if inst.k() < r.k_star {
        Decision::No
    } else {
        Decision::Unknown(format!(
            "the approximation needs {} walks and proves at least {} necessary, k = {}",
            r.schedule.len(),
            r.k_star,
            inst.k()
        ))
    })
}

fn validate(instance: &Path, schedule: &Path) -> Result<i32, CliError> {
    let inst = load_instance(instance)?;
    let sched = load_schedule(schedule)?;
    let report = match validate_schedule(&inst, &sched) {
        Ok(r) => r,
        Err(e) => {
            println!("INVALID structure: {e}");
            return Ok(EXIT_NO);
        }
    };
    if report.is_valid() {
        println!("VALID: {} walks cover all {} demands", sched.len(), inst.demands().len());
        return Ok(EXIT_YES);
    }
    for v in [&report.ted, &report.coverage, &report.walk_count, &report.bound].into_iter().flatten() {
        println!("INVALID {v}");
    }
    Ok(EXIT_NO)
}

fn pairs(text: &str, what: &str) -> Result<Vec<(usize, usize)>, CliError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|p| {
            let (a, b) = p.trim().split_once('-').ok_or_else(|| CliError::Usage(format!("{what} `{p}` is not `u-v`")))?;
            let num = |s: &str| s.trim().parse().map_err(|_| CliError::Usage(format!("bad vertex in {what} `{p}`")));
            Ok((num(a)?, num(b)?))
        })
        .collect()
}

fn emit(inst: &Instance, truth: GroundTruth, out: &Output) -> Result<i32, CliError> {
    let text = if out.json { write_instance_json(inst) } else { write_instance(inst) };
    match &out.output {
        Some(path) => {
            write(path, &text)?;
            write(&path.with_extension("truth"), &write_truth(truth))?;
        }
        None => {
            print!("{text}");
            let _ = std::io::stdout().flush();
            eprint!("{}", write_truth(truth));
        }
    }
    Ok(EXIT_YES)
}

fn generate(cmd: GenCommand) -> Result<i32, CliError> {
    match cmd {
        GenCommand::Sat { cnf, variant, out } => {
            let formula = Cnf::parse_dimacs(&read(&cnf)?)?;
            let (inst, truth) = gen_from_3sat(&formula, variant.into())?;
            emit(&inst, truth, &out)
        }
        GenCommand::Edp { n, edges, pairs: terminals, variant, out } => {
            let dag = DirectedGraph::new(n, pairs(&edges, "edge")?).map_err(GenError::from)?;
            let (inst, truth) = gen_from_edp_dag(&dag, &pairs(&terminals, "pair")?, variant.into())?;
            emit(&inst, truth, &out)
        }
        GenCommand::Binpack { sizes, bins, cap, out } => {
            let sizes: Vec<u64> = sizes
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| CliError::Usage(format!("bad item size `{s}`"))))
                .collect::<Result<_, _>>()?;
            let b = gen_from_bin_packing(&sizes, bins, cap)?;
            emit(&b.instance, b.truth, &out)
        }
        GenCommand::Random { n, m, demands, lambda, k, h, variant, seed, out } => {
            let p = RandomParams { n, m, demands, lambda, k, h, variant: variant.into(), seed };
            let inst = gen_random(&p)?;
            let truth = match oracle_decide_with(&inst, &OracleCaps::default()).verdict() {
                Some(v) => GroundTruth::from(v),
                None => GroundTruth::Unknown,
            };
            emit(&inst, truth, &out)
        }
    }
}

fn approx(instance: &Path, schedule: Option<&Path>) -> Result<i32, CliError> {
    let inst = load_instance(instance)?;
    let r = approx_min_walks(&inst)?;
    let h = inst.h().expect("the approximation only accepts bounded variants");
    for step in &r.trace {
        let cost = step.cost.map_or("none".to_string(), |c| c.to_string());
        let verdict = if step.accepted { "accepted" } else { "rejected" };
        println!("probe k={} cost={cost} limit={} {verdict}", step.k, step.k as u64 * h);
    }
    println!("walks {}", r.schedule.len());
    println!("lower_bound {}", r.k_star);
    println!("flow_cost {}", r.total_cost);
    println!("segments big={} little={}", r.big, r.little);
    if let Some(path) = schedule {
        write(path, &write_schedule(&r.schedule))?;
    }
    Ok(EXIT_YES)
}

fn oracle(args: &OracleArgs) -> Result<i32, CliError> {
    let inst = load_instance(&args.instance)?;
    let d = OracleCaps::default();
    let caps = OracleCaps {
        max_vertices: args.max_vertices.unwrap_or(d.max_vertices),
        max_span: args.max_span.unwrap_or(d.max_span),
        max_demands: args.max_demands.unwrap_or(d.max_demands),
        max_walks: args.max_walks.unwrap_or(d.max_walks),
    };
    if args.min_walks {
        return Ok(match oracle_min_walks_with(&inst, &caps) {
            Some(k) => {
                println!("{k}");
                EXIT_YES
            }
            None => {
                println!("UNKNOWN");
                eprintln!("{}", caps.refusal(&inst).unwrap_or_else(|| "beyond the oracle caps".into()));
                EXIT_UNKNOWN
            }
        });
    }
    report(&oracle_decide_with(&inst, &caps), None)
}

fn bench(corpus: Corpus, format: TableFormat) -> Result<i32, CliError> {
    let cfg = match corpus {
        Corpus::Small => SweepConfig::small(),
        Corpus::Exhaustive => SweepConfig::exhaustive(),
    };
    let r = sweep(&cfg);
    match format {
        TableFormat::Table => print!("{}", bench_table(&r)),
        TableFormat::Json => println!("{}", bench_json(&r)),
    }
    for f in &r.failures {
        eprintln!("{f}");
    }
    Ok(if r.all_agree() { EXIT_YES } else { EXIT_NO })
}

/// Tab-separated table, one row per solver and one for the approximation.
pub fn bench_table(r: &SweepReport) -> String {
    let mut s = String::from("solver\tcompared\tagreed\tunknown\terrors\tagreement\ttime_ms\n");
    for t in &r.tallies {
        s.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{:.2}%\t{}\n",
            t.name,
            t.compared,
            t.agreed,
            t.unknown,
            t.errors,
            100.0 * t.agreement(),
            t.time.as_millis()
        ));
    }
    let ok = r.approx_checked - r.approx_failures;
    let pct = if r.approx_checked == 0 { 100.0 } else { 100.0 * ok as f64 / r.approx_checked as f64 };
    s.push_str(&format!("approx\t{}\t{ok}\t0\t0\t{pct:.2}%\t-\n", r.approx_checked));
    s
}

pub fn bench_json(r: &SweepReport) -> String {
    let solvers: Vec<serde_json::Value> = r
        .tallies
        .iter()
        .map(|t| {
            serde_json::json!({
                "solver": t.name,
                "compared": t.compared,
                "agreed": t.agreed,
                "unknown": t.unknown,
                "errors": t.errors,
                "agreement": t.agreement(),
                "time_ms": t.time.as_millis() as u64,
            })
        })
        .collect();
    serde_json::json!({
        "instances": r.instances,
        "oracle_unknown": r.oracle_unknown,
        "solvers": solvers,
        "approx": { "checked": r.approx_checked, "failures": r.approx_failures },
        "elapsed_ms": r.elapsed.as_millis() as u64,
    })
    .to_string()
}
