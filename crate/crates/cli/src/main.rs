use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use twostripe::materialize::emit_tour_stream;
use twostripe::oracle::{check_cylinder, held_karp, sweep_grids, ReachRecord, HELD_KARP_MAX_N};
use twostripe::solver::solve_cost;
use twostripe::{
    decide, solve, solve_via_gg_formula, validate_tour, Branch, Direction, SolveResult, TourCheck,
    TourDescriptor, TwoStripeInstance,
};

#[derive(Parser)]
#[command(
    name = "twostripe",
    version,
    about = "Exact solver for two-stripe circulant TSP instances"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance.
    Solve(SolveArgs),
    /// Run a verification sweep against a brute-force oracle.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    n: u64,
    /// Cheap stripe.
    #[arg(long)]
    a1: u64,
    /// Expensive stripe.
    #[arg(long)]
    a2: u64,
    #[arg(long, default_value_t = 0)]
    c1: u64,
    #[arg(long, default_value_t = 1)]
    c2: u64,
    /// Print a JSON record instead of a text summary.
    #[arg(long)]
    json: bool,
    /// Stream the tour, one label per line, after the record.
    #[arg(long)]
    emit_tour: bool,
    /// Validate the tour while streaming it; exit 1 if it is not optimal.
    #[arg(long)]
    check: bool,
    /// Decision mode: print yes/no for "optimal cost <= BUDGET".
    #[arg(long)]
    budget: Option<u128>,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Solver cost vs Held-Karp for all unit-cost instances up to --max-n.
    HeldKarp {
        #[arg(long, default_value_t = 16)]
        max_n: u64,
    },
    /// Exhaustive cylinder reachability vs the closed form.
    Cylinder {
        #[arg(long, default_value_t = 20)]
        max_cells: u64,
    },
    /// Column-sweep formula vs solver for all instances up to --max-n.
    GgFormula {
        #[arg(long, default_value_t = 2000)]
        max_n: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct ParamsRecord {
    m: u64,
    first_col_dir: Direction,
    second_col_end: u64,
    k: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct OutputRecord {
    feasible: bool,
    n: u64,
    a1: u64,
    a2: u64,
    cost1: u64,
    cost2: u64,
    g1: u64,
    g2: u64,
    r: u64,
    c: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m_star: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    branch: Option<Branch>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    h_star: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cost: Option<u128>,
    tour_class: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<ParamsRecord>,
}

fn descriptor_class(d: &TourDescriptor) -> (String, Option<ParamsRecord>) {
    match d {
        TourDescriptor::Infeasible => ("infeasible".into(), None),
        TourDescriptor::AllCheapCycle => ("all_cheap_cycle".into(), None),
        TourDescriptor::EqualCostAny { inner } => {
            let (inner, params) = descriptor_class(inner);
            (format!("equal_cost_any:{inner}"), params)
        }
        TourDescriptor::GgPlusWrap { params, .. } => (
            "gg_plus_wrap".into(),
            Some(ParamsRecord {
                m: params.m,
                first_col_dir: params.first_col_dir,
                second_col_end: params.second_col_end,
                k: params.k,
            }),
        ),
        TourDescriptor::UpperBoundSerpentine => ("upper_bound_serpentine".into(), None),
    }
}

impl OutputRecord {
    fn new(inst: &TwoStripeInstance, res: &SolveResult) -> Self {
        let d = res.decomposition;
        let (tour_class, params) = descriptor_class(&res.descriptor);
        Self {
            feasible: res.is_feasible(),
            n: inst.n(),
            a1: inst.a1(),
            a2: inst.a2(),
            cost1: inst.cost1(),
            cost2: inst.cost2(),
            g1: d.g1,
            g2: d.g2,
            r: d.r,
            c: d.c,
            x: res.x,
            m_star: res.m_star.and_then(|m| m.value),
            branch: res.m_star.and_then(|m| m.branch),
            h_star: res.h_star,
            cost: res.total_cost,
            tour_class,
            params,
        }
    }

    fn summary(&self) -> String {
        let mut s = format!(
            "n={} a1={} a2={} c1={} c2={}",
            self.n, self.a1, self.a2, self.cost1, self.cost2
        );
        if !self.feasible {
            s += &format!(" infeasible (g2={})", self.g2);
            return s;
        }
        s += &format!(" g1={} grid={}x{}", self.g1, self.r, self.c);
        if let Some(x) = self.x {
            s += &format!(" x={x}");
        }
        if let Some(m) = self.m_star {
            s += &format!(" m*={m}");
        }
        if let (Some(h), Some(cost)) = (self.h_star, self.cost) {
            s += &format!(" h*={h} cost={cost}");
        }
        s + &format!(" tour={}", self.tour_class)
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<ExitCode> {
    let inst = match TwoStripeInstance::new(args.n, args.a1, args.c1, args.a2, args.c2) {
        Ok(inst) => inst,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(2));
        }
    };
    if let Some(budget) = args.budget {
        let yes = decide(&inst, budget);
        println!("{}", if yes { "yes" } else { "no" });
        return Ok(if yes {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        });
    }

    let res = solve(&inst);
    let record = OutputRecord::new(&inst, &res);
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    if args.json {
        writeln!(out, "{}", serde_json::to_string(&record)?)?;
    } else {
        writeln!(out, "{}", record.summary())?;
    }
    if !(args.emit_tour || args.check) || !res.is_feasible() {
        out.flush()?;
        return Ok(ExitCode::SUCCESS);
    }

    let stream = emit_tour_stream(&inst, &res.descriptor).context("building tour")?;
    let mut write_err = None;
    let check = if args.emit_tour {
        validate_tour(
            &inst,
            stream.inspect(|label| {
                if write_err.is_none() {
                    write_err = writeln!(out, "{label}").err();
                }
            }),
        )
    } else {
        validate_tour(&inst, stream)
    };
    if let Some(e) = write_err {
        return Err(e.into());
    }
    let mut ok = true;
    if args.check {
        ok = check.hamiltonian
            && Some(check.count_a2) == res.h_star
            && Some(check.cost) == res.total_cost;
        report_check(&mut out, args.json, &check, ok)?;
    }
    out.flush()?;
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn report_check(out: &mut impl Write, json: bool, check: &TourCheck, ok: bool) -> Result<()> {
    if json {
        #[derive(Serialize)]
        struct CheckLine<'a> {
            check: &'a TourCheck,
            ok: bool,
        }
        writeln!(out, "{}", serde_json::to_string(&CheckLine { check, ok })?)?;
    } else {
        writeln!(
            out,
            "check: {} hamiltonian={} a1_edges={} a2_edges={} cost={}",
            if ok { "ok" } else { "FAILED" },
            check.hamiltonian,
            check.count_a1,
            check.count_a2,
            check.cost
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct Mismatch {
    n: u64,
    a1: u64,
    a2: u64,
    solver: Option<u128>,
    oracle: Option<u128>,
    ok: bool,
}

#[derive(Serialize)]
struct Summary {
    sweep: &'static str,
    checked: u64,
    mismatches: u64,
    ok: bool,
}

fn print_lines<T: Serialize>(items: &[T]) -> Result<()> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    for item in items {
        writeln!(out, "{}", serde_json::to_string(item)?)?;
    }
    out.flush()?;
    Ok(())
}

fn finish(sweep: &'static str, checked: u64, mismatches: u64) -> Result<ExitCode> {
    let ok = mismatches == 0;
    print_lines(&[Summary {
        sweep,
        checked,
        mismatches,
        ok,
    }])?;
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn stripe_pairs(n: u64) -> impl Iterator<Item = (u64, u64)> {
    (1..=n / 2)
        .flat_map(move |a1| (1..=n / 2).map(move |a2| (a1, a2)))
        .filter(|(a1, a2)| a1 != a2)
}

fn verify_held_karp(max_n: u64) -> Result<ExitCode> {
    if !(4..=HELD_KARP_MAX_N).contains(&max_n) {
        eprintln!("error: --max-n must be between 4 and {HELD_KARP_MAX_N}");
        return Ok(ExitCode::from(2));
    }
    let instances: Vec<_> = (4..=max_n)
        .flat_map(|n| stripe_pairs(n).map(move |(a1, a2)| (n, a1, a2)))
        .collect();
    let results: Vec<Mismatch> = instances
        .par_iter()
        .map(|&(n, a1, a2)| {
            let inst = TwoStripeInstance::unit(n, a1, a2).expect("valid stripes");
            let solver = solve(&inst).total_cost;
            let oracle = held_karp(&inst).expect("n within limit").map(|t| t.cost);
            Mismatch {
                n,
                a1,
                a2,
                solver,
                oracle,
                ok: solver == oracle,
            }
        })
        .collect();
    let bad: Vec<&Mismatch> = results.iter().filter(|m| !m.ok).collect();
    print_lines(&bad)?;
    finish("held_karp", results.len() as u64, bad.len() as u64)
}

fn verify_cylinder(max_cells: u64) -> Result<ExitCode> {
    if !(4..=24).contains(&max_cells) {
        eprintln!("error: --max-cells must be between 4 and 24");
        return Ok(ExitCode::from(2));
    }
    let grids = sweep_grids(max_cells / 2, max_cells / 2, max_cells);
    let reports = grids
        .par_iter()
        .map(|&(r, c)| check_cylinder(r, c))
        .collect::<Result<Vec<_>, _>>()?;
    let records: Vec<ReachRecord> = reports
        .iter()
        .flat_map(|rep| rep.records.iter().copied())
        .collect();
    print_lines(&records)?;
    let mismatches = reports.iter().map(|rep| rep.violations() as u64).sum();
    for rep in &reports {
        for &(r, c, m, row) in &rep.first_cut_violations {
            eprintln!(
                "first-cut path on {r}x{c} with m={m} ended at row {row}, outside A(r, c, m)"
            );
        }
    }
    finish("cylinder", records.len() as u64, mismatches)
}

fn verify_gg_formula(max_n: u64) -> Result<ExitCode> {
    if max_n < 4 {
        eprintln!("error: --max-n must be at least 4");
        return Ok(ExitCode::from(2));
    }
    let per_n: Vec<(u64, Vec<Mismatch>)> = (4..=max_n)
        .into_par_iter()
        .map(|n| {
            let mut checked = 0;
            let mut bad = Vec::new();
            for (a1, a2) in stripe_pairs(n) {
                let inst = TwoStripeInstance::unit(n, a1, a2).expect("valid stripes");
                let d = inst.decompose();
                if d.g2 != 1 || d.g1 == 1 {
                    continue;
                }
                checked += 1;
                let h = solve_cost(&inst).map(|(h, _)| h as u128);
                let alt = solve_via_gg_formula(&inst).map(u128::from);
                if h != alt {
                    bad.push(Mismatch {
                        n,
                        a1,
                        a2,
                        solver: h,
                        oracle: alt,
                        ok: false,
                    });
                }
            }
            (checked, bad)
        })
        .collect();
    let bad: Vec<&Mismatch> = per_n.iter().flat_map(|(_, b)| b).collect();
    print_lines(&bad)?;
    let checked = per_n.iter().map(|(k, _)| k).sum();
    finish("gg_formula", checked, bad.len() as u64)
}

fn configure_threads() -> Result<()> {
    if let Ok(raw) = std::env::var("TWO_STRIPE_THREADS") {
        let threads: usize = raw
            .parse()
            .with_context(|| format!("TWO_STRIPE_THREADS={raw:?} is not a thread count"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the worker pool")?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || -> Result<ExitCode> {
        match &cli.command {
            Command::Solve(args) => cmd_solve(args),
            Command::Verify(v) => {
                configure_threads()?;
                match *v {
                    VerifyCommand::HeldKarp { max_n } => verify_held_karp(max_n),
                    VerifyCommand::Cylinder { max_cells } => verify_cylinder(max_cells),
                    VerifyCommand::GgFormula { max_n } => verify_gg_formula(max_n),
                }
            }
        }
    };
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_round_trips_through_json() {
        for (n, a1, a2) in [(45, 5, 2), (12, 3, 6), (7, 2, 3), (12, 3, 2)] {
            let inst = TwoStripeInstance::unit(n, a1, a2).unwrap();
            let rec = OutputRecord::new(&inst, &solve(&inst));
            let text = serde_json::to_string(&rec).unwrap();
            assert!(!text.contains("null"));
            let back: OutputRecord = serde_json::from_str(&text).unwrap();
            assert_eq!(back, rec);
        }
    }

    #[test]
    fn infeasible_record_omits_solution_fields() {
        let inst = TwoStripeInstance::unit(12, 3, 6).unwrap();
        let rec = OutputRecord::new(&inst, &solve(&inst));
        let v: serde_json::Value = serde_json::to_value(&rec).unwrap();
        assert_eq!(v["feasible"], false);
        for key in ["x", "m_star", "h_star", "cost", "params"] {
            assert!(v.get(key).is_none(), "{key}");
        }
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
