//! Acceptance suite. Runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line per criterion; exits non-zero if any fails.

mod common;

use std::time::{Duration, Instant};

use common::oracle::{example_oracle, Oracle};
use skewchain::chain::{
    kraus_invariance_check, lattice_steps, mixed_bound, optimize_permutations, verify_frames, BoundChain, FrameSet,
    SReading, SearchStrategy, VerifyOptions,
};
use skewchain::cli::plan_instances;
use skewchain::example::{
    closed_forms, default_figures, discrepancy_report, example_channels, rho_theta, sweep, ExampleParams,
    GridOverrides, SweepRow, DISCREPANCY_TARGETS,
};
use skewchain::quantum::RandomSeed;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn example_frames(theta: f64, p: f64, q: f64) -> FrameSet {
    let (n1, n2) = example_channels(p, q).unwrap();
    FrameSet::new(&rho_theta(theta).unwrap(), &n1, &n2).unwrap()
}

fn worked_example_golden() -> Outcome {
    let tol = 1e-8;
    let fs = example_frames(1.0, 0.5, 0.5);
    let o = example_oracle(1.0, 0.5, 0.5);
    let checks = [
        ("product", fs.product(), o.product, 0.021_446_61),
        ("lemma1", fs.lemma1(), o.lemma1, 0.003_140_78),
        ("I(N1)", fs.skew_first(), o.skew1, 0.146_446_61),
        ("I(N2)", fs.skew_second(), o.skew2, 0.146_446_61),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, numeric, oracle, quoted) in checks {
        let dev = (numeric - oracle).abs().max((numeric - quoted).abs());
        ok &= dev <= tol;
        detail.push(format!("{name}={numeric:.10}"));
    }
    let cf = closed_forms(&ExampleParams::new(1.0, 0.5, 0.5, 0.0).unwrap());
    ok &= (cf.eq20 - fs.product()).abs() <= tol && (cf.eq22 - fs.lemma1()).abs() <= tol;
    outcome(ok, detail.join(" "))
}

fn figure_rows() -> (Vec<SweepRow>, Vec<SweepRow>) {
    let figs = default_figures(&GridOverrides::default());
    let fig1 = sweep(&figs[0].spec).unwrap().rows;
    let fig3 = sweep(&figs[2].spec).unwrap().rows;
    (fig1, fig3)
}

fn closed_form_surfaces(fig1: &[SweepRow], fig3: &[SweepRow]) -> Outcome {
    let tol = 1e-9;
    let mut worst20 = 0.0f64;
    let mut worst22 = 0.0f64;
    for row in fig1.iter().chain(fig3) {
        worst20 = worst20.max((row.product - row.closed.eq20).abs());
        worst22 = worst22.max((row.lemma1 - row.closed.eq22).abs());
    }
    let ok = fig1.len() == 51 * 51 && fig3.len() == 101 && worst20 <= tol && worst22 <= tol;
    outcome(
        ok,
        format!(
            "{} points, max |product-eq20|={worst20:.2e}, max |lemma1-eq22|={worst22:.2e}",
            fig1.len() + fig3.len()
        ),
    )
}

fn i_chain_suite() -> (Outcome, Outcome) {
    let plans = plan_instances(&[2, 3, 4], 200, 2024);
    let mut chain_violations = 0;
    let mut sum_violations = 0;
    let mut worst_endpoint = 0.0f64;
    let mut worst_oracle = 0.0f64;
    for plan in &plans {
        let (st, n1, n2) = plan.build().unwrap();
        let chain = BoundChain::compute(&st, &n1, &n2, SReading::PairResolved).unwrap();
        if chain.product < chain.i_values[0] - 1e-10 {
            chain_violations += 1;
        }
        chain_violations += chain.i_values.windows(2).filter(|w| w[0] < w[1] - 1e-10).count();
        let endpoint = (chain.i_values[plan.dim - 1] - chain.lemma1).abs();
        worst_endpoint = worst_endpoint.max(endpoint);
        if endpoint > 1e-12 {
            chain_violations += 1;
        }
        let oracle = Oracle::new(&st, &n1, &n2);
        for m in 1..=plan.dim {
            worst_oracle = worst_oracle.max((chain.i_values[m - 1] - oracle.i_m(m)).abs());
        }
        sum_violations += chain.i_values.iter().filter(|im| chain.sum < 2.0 * im.max(0.0).sqrt() - 1e-10).count();
    }
    let chain_ok = chain_violations == 0 && worst_oracle <= 1e-10;
    (
        outcome(
            chain_ok,
            format!(
                "{} instances, {chain_violations} violations, max |I_d-lemma1|={worst_endpoint:.2e}, max |I_m-oracle|={worst_oracle:.2e}",
                plans.len()
            ),
        ),
        outcome(sum_violations == 0, format!("{} instances, {sum_violations} violations", plans.len())),
    )
}

fn mixing_invariance() -> Outcome {
    let plans = plan_instances(&[2, 3, 4], 17, 77);
    let mut worst = 0.0f64;
    let mut worst_name = String::new();
    for plan in plans.iter().take(50) {
        let (st, n1, n2) = plan.build().unwrap();
        let report = kraus_invariance_check(&st, &n1, &n2, 10, RandomSeed(plan.mixing_seed), 1e-10).unwrap();
        for (name, dev) in &report.deviations {
            if *dev > worst {
                worst = *dev;
                worst_name.clone_from(name);
            }
        }
    }
    outcome(worst <= 1e-10, format!("50 instances x 10 mixings, max deviation {worst:.2e} ({worst_name})"))
}

fn mixed_sandwich() -> Outcome {
    let fs = example_frames(1.0, 0.5, 0.5);
    let chain = BoundChain::from_frames(&fs, SReading::PairResolved);
    let mut ok = true;
    let mut slowest = Duration::ZERO;
    let mut gains = Vec::new();
    for (p, q) in lattice_steps(4) {
        let start = Instant::now();
        let best =
            optimize_permutations(&fs, p, q, SearchStrategy::Exhaustive, 576, RandomSeed(0), SReading::PairResolved)
                .unwrap();
        ok &= best.evaluations == 576 && best.value >= best.identity_value;
        for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let m = mixed_bound(&chain, &best, t).unwrap();
            ok &= chain.lemma1 - 1e-10 <= m.product && m.product <= chain.product + 1e-10;
        }
        slowest = slowest.max(start.elapsed());
        gains.push(format!("S{p},{q}:{:.3e}", best.value - best.identity_value));
    }
    ok &= slowest < Duration::from_secs(10);
    outcome(ok, format!("6 targets x 576 pairs, slowest {slowest:.2?}, gain over identity [{}]", gains.join(" ")))
}

fn anchor_report() -> Outcome {
    let plans = plan_instances(&[2, 3, 4], 200, 42);
    let mut stats = [[0.0f64; 3]; 3];
    for plan in &plans {
        let (st, n1, n2) = plan.build().unwrap();
        let fs = FrameSet::new(&st, &n1, &n2).unwrap();
        let verdict = verify_frames(&fs, &VerifyOptions { tol: 1e-10, ..VerifyOptions::default() }).unwrap();
        for (r, reading) in SReading::ALL.iter().enumerate() {
            for c in verdict.find(&format!("S_anchor_I[{reading}]")) {
                match c.detail.as_str() {
                    "S2,1=I2" => stats[r][0] = stats[r][0].max(c.deviation),
                    "S3,2=I3" => stats[r][1] = stats[r][1].max(c.deviation),
                    _ => {}
                }
            }
            if let Some(dev) = verdict.max_deviation(&format!("S_anchor_lemma1[{reading}]")) {
                stats[r][2] = stats[r][2].max(dev);
            }
        }
    }
    for (r, reading) in SReading::ALL.iter().enumerate() {
        println!(
            "    reading {reading:<13} max|S21-I2|={:.3e} max|S32-I3|={:.3e} max|Sdd1-lemma1|={:.3e}",
            stats[r][0], stats[r][1], stats[r][2]
        );
    }
    let anchored: Vec<String> =
        SReading::ALL.iter().zip(&stats).filter(|(_, s)| s[2] <= 1e-10).map(|(r, _)| r.to_string()).collect();
    outcome(!anchored.is_empty(), format!("{} instances; endpoint anchor met by: {}", plans.len(), anchored.join(", ")))
}

fn discrepancy_columns(fig1: &[SweepRow], fig3: &[SweepRow]) -> Outcome {
    let rows: Vec<SweepRow> = fig1.iter().chain(fig3).cloned().collect();
    let report = discrepancy_report(&rows);
    let csv = report.to_csv();
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let mut ok = true;
    for (f, _) in DISCREPANCY_TARGETS {
        for suffix in ["numeric", "printed", "abs_dev", "rel_dev", "ratio"] {
            ok &= header.contains(&format!("{f}_{suffix}").as_str());
        }
    }
    ok &= csv.lines().count() == 1 + report.points.len();
    let eq21 = report.summary.iter().find(|s| s.formula == "eq21").unwrap();
    outcome(ok, format!("{} points, eq21 printed/numeric fitted ratio {:.6}", report.points.len(), eq21.fitted_ratio))
}

fn verify_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.txt"), dir.path().join("b.txt")];
    let mut codes = Vec::new();
    for p in &paths {
        codes.push(skewchain::cli::run(["skewchain", "verify", "--seed", "42", "--out", p.to_str().unwrap()]));
    }
    let a = std::fs::read(&paths[0]).unwrap();
    let b = std::fs::read(&paths[1]).unwrap();
    outcome(a == b && codes == [0, 0], format!("{} bytes, exit codes {codes:?}", a.len()))
}

type Record = (u32, &'static str, Outcome, Duration);

fn timed(results: &mut Vec<Record>, id: u32, name: &'static str, f: impl FnOnce() -> Outcome) {
    let start = Instant::now();
    let o = f();
    results.push((id, name, o, start.elapsed()));
}

fn main() {
    let mut results: Vec<Record> = Vec::new();
    timed(&mut results, 1, "worked-example golden values", worked_example_golden);

    let start = Instant::now();
    let (fig1, fig3) = figure_rows();
    let sweep_time = start.elapsed();
    let mut c2 = closed_form_surfaces(&fig1, &fig3);
    c2.passed &= sweep_time < Duration::from_secs(30);
    results.push((2, "closed-form surfaces", c2, sweep_time));

    let start = Instant::now();
    let (c3, c4) = i_chain_suite();
    let elapsed = start.elapsed();
    results.push((3, "I-chain on random instances", c3, elapsed));
    results.push((4, "sum-form transfer", c4, elapsed));

    timed(&mut results, 5, "Kraus remixing invariance", mixing_invariance);
    timed(&mut results, 6, "mixed-bound sandwich", mixed_sandwich);
    timed(&mut results, 7, "S-lattice anchor report", anchor_report);
    timed(&mut results, 8, "discrepancy report columns", || discrepancy_columns(&fig1, &fig3));
    timed(&mut results, 9, "verify determinism", verify_determinism);

    let mut failed = 0;
    for (id, name, o, elapsed) in &results {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        if !o.passed {
            failed += 1;
        }
        println!("{tag} criterion {id}: {name} [{elapsed:.2?}] {}", o.detail);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
