//! The `permsearch` command line.
//!
//! Exit codes: 0 success, 1 a node limit stopped some search (or a selftest
//! check failed), 2 bad input.

pub mod problem_file;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};
use permsearch::batch::{grid_problem, solve_batch, wreath_problem, GridVariant};
use permsearch::{
    equitable, orbital_base, orbital_graph, orbital::is_futile_by_counts, set_stabilizer,
    solve_with, GeneratedGroup, OrderedPartition, Permutation, Problem, RefinerMode,
    SearchOptions,
};

use crate::report::{emit_stats, Format, Record, CSV_HEADER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_LIMIT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// One or more refiner modes: `all`, or a comma-separated list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Modes(pub Vec<RefinerMode>);

impl FromStr for Modes {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all" {
            return Ok(Modes(RefinerMode::ALL.to_vec()));
        }
        s.split(',')
            .map(|m| RefinerMode::from_str(m.trim()))
            .collect::<Result<Vec<_>, _>>()
            .map(Modes)
    }
}

#[derive(Parser, Debug)]
#[command(name = "permsearch", version, about = "Partition backtrack with orbital graph refiners")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the problem described in a problem file.
    Solve {
        file: PathBuf,
        /// Overrides the file's `option mode`.
        #[arg(long)]
        mode: Option<RefinerMode>,
        /// Print the leftmost-branch refinement trace.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        node_limit: Option<u64>,
        #[arg(long)]
        size_limit: Option<usize>,
        /// Format of the stats line.
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Set stabilizers in the m x m grid group.
    BenchGrid {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "random")]
        variant: GridVariant,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value = "preorbital")]
        mode: Modes,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "csv")]
        format: Format,
        #[arg(long, default_value_t = 10_000_000)]
        node_limit: u64,
        #[arg(long)]
        size_limit: Option<usize>,
    },
    /// Intersections of a group with random conjugates of a wreath product.
    BenchIntersect {
        /// Problem file defining the group (its directive is ignored).
        #[arg(long)]
        group_file: PathBuf,
        /// Group name in the file; the first group by default.
        #[arg(long)]
        group: Option<String>,
        /// Wreath product parameters `a,b` for `S_a wr S_b`.
        #[arg(long)]
        wreath: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value = "preorbital")]
        mode: Modes,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "csv")]
        format: Format,
        #[arg(long, default_value_t = 10_000_000)]
        node_limit: u64,
        #[arg(long)]
        size_limit: Option<usize>,
    },
    /// Run built-in sanity checks.
    Selftest,
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Solve {
            file,
            mode,
            trace,
            node_limit,
            size_limit,
            format,
        } => cmd_solve(&file, mode, trace, node_limit, size_limit, format, out),
        Command::BenchGrid {
            m,
            variant,
            count,
            mode,
            seed,
            format,
            node_limit,
            size_limit,
        } => {
            if m == 0 {
                Err("--m must be positive".to_string())
            } else {
                let opts = bench_options(node_limit, size_limit);
                let mut problems = Vec::new();
                for &md in &mode.0 {
                    for i in 0..count {
                        let s = seed.wrapping_add(i as u64);
                        problems.push((i, s, grid_problem(m, variant, s, md)));
                    }
                }
                Ok(run_bench(&problems, &opts, format, out))
            }
        }
        Command::BenchIntersect {
            group_file,
            group,
            wreath,
            count,
            mode,
            seed,
            format,
            node_limit,
            size_limit,
        } => bench_intersect(
            &group_file,
            group.as_deref(),
            &wreath,
            count,
            &mode,
            seed,
            format,
            bench_options(node_limit, size_limit),
            out,
        ),
        Command::Selftest => Ok(selftest(out)),
    };
    match outcome {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn bench_options(node_limit: u64, size_limit: Option<usize>) -> SearchOptions {
    SearchOptions {
        node_limit: Some(node_limit),
        size_limit,
        ..Default::default()
    }
}

fn read_problem_file(path: &Path) -> Result<problem_file::ProblemFile, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    problem_file::parse(&text, &path.display().to_string()).map_err(|e| e.to_string())
}

fn cmd_solve(
    file: &Path,
    mode: Option<RefinerMode>,
    trace: bool,
    node_limit: Option<u64>,
    size_limit: Option<usize>,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, String> {
    let pf = read_problem_file(file)?;
    let problem = pf
        .problem(mode)
        .ok_or_else(|| format!("{}: no directive (stab-set, stab-partition or intersect)", file.display()))?;
    let mut opts = pf.search_options();
    opts.trace |= trace;
    opts.node_limit = node_limit.or(opts.node_limit);
    opts.size_limit = size_limit.or(opts.size_limit);
    let start = std::time::Instant::now();
    let result = solve_with(&problem, &opts);
    let wall = start.elapsed();
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(|e| e.to_string());
    if opts.trace {
        w(out, "trace:".into())?;
        for line in &result.trace {
            w(out, format!("  {line}"))?;
        }
    }
    if !result.complete {
        w(out, format!("limit hit: stopped after {} nodes", result.stats.nodes_visited))?;
    }
    w(out, format!("order: {}", result.order))?;
    w(out, format!("generators: {}", result.generators.len()))?;
    for g in &result.generators {
        w(out, format!("  {g}"))?;
    }
    let record = Record {
        instance: 0,
        seed: pf.options.seed,
        mode: problem.mode(),
        degree: problem.degree(),
        result,
        wall,
    };
    if format == Format::Csv {
        w(out, CSV_HEADER.to_string())?;
    }
    w(out, emit_stats(&record, format))?;
    Ok(if record.result.complete { EXIT_OK } else { EXIT_LIMIT })
}

fn run_bench(
    problems: &[(usize, u64, Problem)],
    opts: &SearchOptions,
    format: Format,
    out: &mut dyn Write,
) -> i32 {
    let list: Vec<Problem> = problems.iter().map(|p| p.2.clone()).collect();
    let results = solve_batch(&list, opts);
    if format == Format::Csv {
        let _ = writeln!(out, "{CSV_HEADER}");
    }
    let mut code = EXIT_OK;
    for ((instance, seed, problem), timed) in problems.iter().zip(results) {
        if !timed.result.complete {
            code = EXIT_LIMIT;
        }
        let record = Record {
            instance: *instance,
            seed: *seed,
            mode: problem.mode(),
            degree: problem.degree(),
            result: timed.result,
            wall: timed.elapsed,
        };
        let _ = writeln!(out, "{}", emit_stats(&record, format));
    }
    code
}

#[allow(clippy::too_many_arguments)]
fn bench_intersect(
    group_file: &Path,
    group: Option<&str>,
    wreath: &str,
    count: usize,
    modes: &Modes,
    seed: u64,
    format: Format,
    opts: SearchOptions,
    out: &mut dyn Write,
) -> Result<i32, String> {
    let pf = read_problem_file(group_file)?;
    let g = match group {
        Some(name) => pf
            .group(name)
            .ok_or_else(|| format!("undefined group `{name}` in {}", group_file.display()))?,
        None => pf
            .groups
            .first()
            .map(|(_, g)| g)
            .ok_or_else(|| format!("{} defines no group", group_file.display()))?,
    };
    let (a, b) = wreath
        .split_once(',')
        .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
        .filter(|&(a, b)| a > 0 && b > 0)
        .ok_or_else(|| format!("--wreath expects `a,b` with positive integers, got `{wreath}`"))?;
    let mut problems = Vec::new();
    for &md in &modes.0 {
        for i in 0..count {
            let s = seed.wrapping_add(i as u64);
            let p = wreath_problem(g, a, b, s, md).map_err(|e| {
                format!("wreath product S_{a} wr S_{b} does not match the group: {e}")
            })?;
            problems.push((i, s, p));
        }
    }
    Ok(run_bench(&problems, &opts, format, out))
}

/// Built-in checks against known small answers; prints one line per check.
pub fn selftest(out: &mut dyn Write) -> i32 {
    let h1 = GeneratedGroup::from_cycle_strings(
        10,
        &["(1,2,3,4,5,6,7,8,9,10)", "(2,10)(3,9)(4,8)(5,7)"],
    )
    .unwrap();
    let h43 = GeneratedGroup::from_cycle_strings(6, &["(1,2,3)", "(4,5)", "(4,6)"]).unwrap();
    let part = |s: &str, n| OrderedPartition::parse(s, n).unwrap();
    type Check = (&'static str, Box<dyn Fn() -> bool>);
    let checks: Vec<Check> = vec![
        (
            "meet",
            Box::new(move || {
                part("[1,2,3,4|5,6,7]", 7).meet(&part("[1,2|5,3|7,4,6]", 7))
                    == part("[1,2|3|4|5|6,7]", 7)
            }),
        ),
        (
            "compose",
            Box::new(|| {
                let p = Permutation::parse_cycles("(1,2,3)", 3).unwrap();
                let q = Permutation::parse_cycles("(1,2)", 3).unwrap();
                p.compose(&q).unwrap().to_string() == "(2,3)"
            }),
        ),
        (
            "orbital graphs",
            Box::new({
                let h = h43.clone();
                move || {
                    let c = h.stabilizer_chain();
                    [(0, 1, 3, false), (4, 5, 6, true), (1, 3, 9, true)]
                        .iter()
                        .all(|&(a, b, arcs, futile)| {
                            orbital_graph(&c, a, b).unwrap().num_arcs() == arcs
                                && is_futile_by_counts(&c, a, b) == futile
                        })
                }
            }),
        ),
        (
            "equitable",
            Box::new({
                let h = h1.clone();
                move || {
                    let graphs = orbital_base(&h, None);
                    equitable(&graphs, &part("[1,6|2,3,4,5,7,8,9,10]", 10))
                        .sym_order()
                        == 1152u32.into()
                }
            }),
        ),
        (
            "set stabilizers",
            Box::new({
                let h = h1.clone();
                move || {
                    RefinerMode::ALL.iter().all(|&m| {
                        set_stabilizer(&h, &[0, 4], m).order == 2u32.into()
                            && set_stabilizer(&h, &[0, 5], m).order == 4u32.into()
                    })
                }
            }),
        ),
        (
            "two-transitive",
            Box::new(|| (2..=8).all(|n| orbital_base(&GeneratedGroup::symmetric(n), None).is_empty())),
        ),
    ];
    let mut code = EXIT_OK;
    for (name, check) in checks {
        let ok = check();
        if !ok {
            code = EXIT_LIMIT;
        }
        let _ = writeln!(out, "{} {name}", if ok { "ok" } else { "FAIL" });
    }
    code
}
