//! Exit criteria. Runs every check, prints one line each, and exits non-zero
//! if any fails. Wall-clock limits are part of each check.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use lbesync::csv::{read_lbe_csv, write_lbe_csv};
use lbesync::dynamics::{DuffingParams, SystemSpec, Variant};
use lbesync::integrator::{integrate, IntegrationConfig};
use lbesync::lbe::{first_crossing, run_lbe_between, run_lbe_experiment};
use lbesync::sweep::{builtin_case_study, run_sweep, SweepRecord};
use lbesync::sync::auxiliary_check;
use lbesync::{LbeSeries, StateVector};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const THRESHOLD: f64 = -0.3;
const HORIZON: usize = 30_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

type Check = fn() -> Result<Outcome, Box<dyn std::error::Error>>;

fn fmt_crossing(c: Option<usize>) -> String {
    c.map(|c| c.to_string()).unwrap_or_else(|| "never".into())
}

/// Orders crossing steps with "never crossed" above every finite step.
fn later(larger_k: Option<usize>, smaller_k: Option<usize>) -> bool {
    match (larger_k, smaller_k) {
        (Some(b), Some(a)) => b > a,
        (None, Some(_)) => true,
        (_, None) => false,
    }
}

fn record(records: &[SweepRecord], k: f64) -> &SweepRecord {
    records.iter().find(|r| r.k == k).expect("K in grid")
}

fn integrator_order() -> Result<Outcome, Box<dyn std::error::Error>> {
    let error = |h: f64| -> Result<f64, lbesync::Error> {
        let n = (1.0 / h).round() as usize;
        let o = integrate(|_, x, dx| dx[0] = x[0], &StateVector::at_origin(vec![1.0]), &IntegrationConfig::new(h, n))?;
        Ok((o.last().unwrap()[0] - std::f64::consts::E).abs())
    };
    let errors = [8e-3, 4e-3, 2e-3, 1e-3].map(|h| error(h).unwrap());
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
    let order = (error(1e-2)? / errors[3]).log10();
    let pass = ratios.iter().all(|r| (14.0..=18.0).contains(r)) && (3.9..=4.1).contains(&order);
    Ok(outcome(pass, format!("halving ratios {ratios:.2?}, order over a decade {order:.3}")))
}

fn q(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap()
}

fn formulation_equivalence() -> Result<Outcome, Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let p = DuffingParams::default();
    let duffing = SystemSpec::Duffing(p);
    let (mut lorenz_diff, mut duffing_diff, mut exact_ok) = (0, 0, true);
    for _ in 0..10_000 {
        let y: Vec<f64> = (0..3).map(|_| rng.gen_range(-40.0..40.0)).collect();
        let (y1, y2) = (q(y[0]), q(y[1]));
        let s = q(10.0);
        exact_ok &= -(&s * &y1) + &s * &y2 == &s * (&y2 - &y1);
        let (mut a, mut b) = ([0.0; 3], [0.0; 3]);
        SystemSpec::Lorenz.eval_into(Variant::A, 0.0, &y, None, &mut a);
        SystemSpec::Lorenz.eval_into(Variant::B, 0.0, &y, None, &mut b);
        lorenz_diff += usize::from(a[0].to_bits() != b[0].to_bits());

        let x: Vec<f64> = (0..2).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let t = rng.gen_range(0.0..300.0);
        let x1 = q(x[0]);
        let rest = q(p.gamma * (p.omega * t).cos()) - q(p.delta) * q(x[1]);
        exact_ok &= &x1 - x1.pow(3) + &rest == &x1 - &x1 * &x1 * &x1 + &rest;
        let (mut a, mut b) = ([0.0; 2], [0.0; 2]);
        duffing.eval_into(Variant::A, t, &x, None, &mut a);
        duffing.eval_into(Variant::B, t, &x, None, &mut b);
        duffing_diff += usize::from(a[1].to_bits() != b[1].to_bits());
    }
    Ok(outcome(
        exact_ok && lorenz_diff >= 1 && duffing_diff >= 1,
        format!("exact agreement {exact_ok}; double-precision differences: Lorenz {lorenz_diff}, Duffing {duffing_diff} of 10000"),
    ))
}

fn lbe_identity() -> Result<Outcome, Box<dyn std::error::Error>> {
    let mut details = vec![];
    let mut pass = true;
    for name in ["duffing-lorenz", "rossler-duffing"] {
        let plan = builtin_case_study(name)?;
        let cfg = IntegrationConfig::new(plan.cfg.step_size, HORIZON);
        let s = run_lbe_between(&plan.pair, &plan.ics, &cfg, plan.component, Variant::A, Variant::A)?;
        let zero = s.len() == HORIZON + 1 && s.values.iter().all(|d| *d == 0.0);
        pass &= zero;
        details.push(format!("{name}: {} samples, all zero {zero}", s.len()));
    }
    Ok(outcome(pass, details.join("; ")))
}

fn zero_coupling_crossing() -> Result<Outcome, Box<dyn std::error::Error>> {
    let plan = builtin_case_study("duffing-lorenz")?;
    let s = run_lbe_experiment(&plan.pair, &plan.ics, &IntegrationConfig::new(plan.cfg.step_size, HORIZON), plan.component)?;
    let c = first_crossing(&s, THRESHOLD).crossing_index;
    Ok(outcome(c.is_some_and(|c| c <= HORIZON), format!("K=0 crosses {THRESHOLD} at step {}", fmt_crossing(c))))
}

fn ordering_with_coupling() -> Result<Outcome, Box<dyn std::error::Error>> {
    let mut plan = builtin_case_study("duffing-lorenz")?;
    plan.workers = 1;
    let result = run_sweep(&plan)?;
    let c = |k| record(&result.records, k).crossing.crossing_index;
    let (c0, c25, c30) = (c(0.0), c(25.0), c(30.0));
    let pass = c0.is_some() && later(c25, c0) && later(c30, c25);
    Ok(outcome(
        pass,
        format!("crossing K=0 {}, K=25 {}, K=30 {}", fmt_crossing(c0), fmt_crossing(c25), fmt_crossing(c30)),
    ))
}

fn strong_coupling_saturation() -> Result<Outcome, Box<dyn std::error::Error>> {
    let mut details = vec![];
    let mut pass = true;
    for (name, k) in [("duffing-lorenz", 40.0), ("rossler-duffing", 400.0)] {
        let plan = builtin_case_study(name)?;
        let s = run_lbe_experiment(&plan.pair.with_k(k)?, &plan.ics, &plan.cfg, plan.component)?;
        let crossed = first_crossing(&s, THRESHOLD).crossing_index;
        let max = s.max_log10();
        let ok = s.saturated || (crossed.is_none() && max.is_some_and(|m| m < -10.0));
        pass &= ok;
        details.push(format!(
            "{name} K={k}: saturated {}, crossing {}, max log10(2 delta) {}",
            s.saturated,
            fmt_crossing(crossed),
            max.map(|m| format!("{m:.2}")).unwrap_or_else(|| "-inf".into())
        ));
    }
    Ok(outcome(pass, details.join("; ")))
}

fn auxiliary_verdicts() -> Result<Outcome, Box<dyn std::error::Error>> {
    let dl = builtin_case_study("duffing-lorenz")?;
    let check = |plan: &lbesync::SweepPlan, k: f64| {
        auxiliary_check(&plan.pair.with_k(k).unwrap(), &plan.ics, Variant::A, &plan.cfg, &plan.sync)
    };
    let free = check(&dl, 0.0)?;
    let coupled = check(&dl, 40.0)?;
    let rd = builtin_case_study("rossler-duffing")?;
    let rd400 = check(&rd, 400.0)?;
    let ratio = coupled.metric / free.metric;
    let pass = !free.synchronized && coupled.synchronized && rd400.synchronized && ratio < 1e-3;
    Ok(outcome(
        pass,
        format!(
            "duffing-lorenz K=0 {} (metric {:.3e}), K=40 {} (metric {:.3e}), ratio {ratio:.3e}; rossler-duffing K=400 {} (metric {:.3e} < {:.3e})",
            free.synchronized, free.metric, coupled.synchronized, coupled.metric, rd400.synchronized, rd400.metric, rd400.epsilon
        ),
    ))
}

fn csv_files(dir: &Path) -> std::io::Result<Vec<(String, Vec<u8>)>> {
    let mut files = vec![];
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "csv") {
            files.push((path.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&path)?));
        }
    }
    files.sort();
    Ok(files)
}

fn sweep_determinism() -> Result<Outcome, Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    for out in ["first", "second"] {
        let status = Command::new(env!("CARGO_BIN_EXE_lbesync"))
            .args(["sweep", "--case", "duffing-lorenz", "--out", out])
            .current_dir(dir.path())
            .env_remove("LBESYNC_WORKERS")
            .output()?;
        if !status.status.success() {
            return Ok(outcome(false, format!("sweep failed: {}", String::from_utf8_lossy(&status.stderr))));
        }
    }
    let a = csv_files(&dir.path().join("first"))?;
    let b = csv_files(&dir.path().join("second"))?;
    let identical = !a.is_empty() && a == b;
    Ok(outcome(identical, format!("{} CSV files compared, identical {identical}", a.len())))
}

fn rossler_duffing_pattern() -> Result<Outcome, Box<dyn std::error::Error>> {
    let mut plan = builtin_case_study("rossler-duffing")?;
    plan.k_values = vec![0.0, 100.0, 200.0, 300.0];
    plan.workers = 1;
    let result = run_sweep(&plan)?;
    let flagged_or_finite = result
        .records
        .iter()
        .all(|r| r.crossing.crossing_index.is_some() || r.crossing.never_crossed || r.diverged_at.is_some());
    let c = |k| record(&result.records, k).crossing.crossing_index;
    let rises = later(c(300.0), c(100.0));
    let measured: Vec<String> =
        result.records.iter().map(|r| format!("K={} {}", r.k, fmt_crossing(r.crossing.crossing_index))).collect();
    Ok(outcome(
        flagged_or_finite && rises,
        format!("crossings {}; K=300 after K=100: {rises}", measured.join(", ")),
    ))
}

fn csv_round_trip() -> Result<Outcome, Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let n = 10_000;
    let values: Vec<f64> = (0..n)
        .map(|i| match i % 4 {
            0 => 0.0,
            1 => rng.gen::<f64>() * 10f64.powi(rng.gen_range(-300..300)),
            2 => f64::from_bits(rng.gen_range(1..0x7fef_ffff_ffff_ffffu64)),
            _ => rng.gen_range(0.0..5.0),
        })
        .collect();
    let times: Vec<f64> = (0..n).map(|i| i as f64 * 0.01).collect();
    let series = LbeSeries::from_deltas(1, (0..n).collect(), times, values);
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("lbe.csv");
    write_lbe_csv(&series, &path)?;
    let back = read_lbe_csv(&path)?;
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    let same = back.len() == n
        && back.steps == series.steps
        && bits(&back.times) == bits(&series.times)
        && bits(&back.values) == bits(&series.values)
        && back.log10_values.iter().zip(&series.log10_values).all(|(a, b)| a.map(f64::to_bits) == b.map(f64::to_bits));
    Ok(outcome(same, format!("{n} rows, bitwise equal {same}")))
}

fn main() -> ExitCode {
    let checks: [(&str, Duration, Check); 10] = [
        ("integrator order", Duration::from_secs(1), integrator_order),
        ("formulation equivalence", Duration::from_secs(5), formulation_equivalence),
        ("self-comparison LBE is zero", Duration::from_secs(10), lbe_identity),
        ("uncoupled LBE crosses threshold", Duration::from_secs(10), zero_coupling_crossing),
        ("coupling delays the crossing", Duration::from_secs(120), ordering_with_coupling),
        ("strong coupling saturates", Duration::from_secs(60), strong_coupling_saturation),
        ("auxiliary-system verdicts", Duration::from_secs(60), auxiliary_verdicts),
        ("sweep determinism", Duration::from_secs(240), sweep_determinism),
        ("rossler-duffing crossing pattern", Duration::from_secs(0), rossler_duffing_pattern),
        ("CSV round trip", Duration::from_secs(1), csv_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = limit.is_zero() || elapsed <= *limit;
        let ok = pass && in_time;
        failed += usize::from(!ok);
        let timing = if in_time { String::new() } else { format!(" (over the {limit:?} limit)") };
        println!(
            "criterion {:>2} {} {name} [{:.2?}]{timing}: {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed
        );
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
