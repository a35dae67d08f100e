use std::fs;

use anyhow::{Context, Result};
use lbesync::csv::{
    emit_plot_script, lbe_file_name, phase_file_name, write_lbe_csv, write_orbits_csv, write_phase_csv,
    write_sweep_csv, PlotInput,
};
use lbesync::integrator::integrate_pair;
use lbesync::lbe::{first_crossing, run_lbe_experiment};
use lbesync::sweep::{case_study, run_sweep, CASE_NAMES};
use lbesync::sync::{auxiliary_run, SyncStatus, SyncVerdict};

use crate::config::RunConfig;

pub const PROVENANCE_FILE: &str = "run_config.txt";

/// Creates the run directory and writes the provenance file into it.
pub fn prepare_output(rc: &RunConfig, command: &str, created: &str) -> Result<()> {
    fs::create_dir_all(&rc.out).with_context(|| format!("cannot create {}", rc.out.display()))?;
    let path = rc.out.join(PROVENANCE_FILE);
    fs::write(&path, rc.provenance(command, created)).with_context(|| format!("cannot write {}", path.display()))
}

fn label(k: f64) -> String {
    format!("K = {k}")
}

fn log_or_marker(v: Option<f64>) -> String {
    v.map(|l| format!("{l:.3}")).unwrap_or_else(|| "-inf".into())
}

fn verdict_text(v: &SyncVerdict) -> String {
    match v.status {
        SyncStatus::Synchronized => "synchronized".into(),
        SyncStatus::NotSynchronized => "not synchronized".into(),
        SyncStatus::Undetermined { diverged_at } => format!("undetermined (diverged at step {diverged_at})"),
    }
}

pub fn list_cases() {
    for name in CASE_NAMES {
        let case = case_study(name).expect("built-in case");
        let ks: Vec<String> = case.k_values.iter().map(|k| k.to_string()).collect();
        println!("{name}");
        println!("    {}", case.description);
        println!("    master {:?} slave {:?} aux {:?}", case.ics.master.components, case.ics.slave.components, case.ics.aux.components);
        println!("    K grid {}; compared component {}; sync demo at K = {}", ks.join(", "), case.component, case.sync_demo_k);
    }
}

pub fn simulate(rc: &RunConfig) -> Result<()> {
    let p = &rc.plan;
    let pair = p.pair.with_k(rc.single_k()?)?;
    let (master, slave) = integrate_pair(&pair, &p.ics.master, &p.ics.slave, rc.variant, &p.cfg)?;
    let path = rc.out.join("orbits.csv");
    write_orbits_csv(&master, &slave, &path)?;
    match slave.diverged_at {
        Some(step) => println!("diverged at step {step}; {} samples written to {}", slave.len(), path.display()),
        None => println!("{} samples written to {}", slave.len(), path.display()),
    }
    Ok(())
}

pub fn lbe(rc: &RunConfig) -> Result<()> {
    let p = &rc.plan;
    let k = rc.single_k()?;
    let pair = p.pair.with_k(k)?;
    let series = run_lbe_experiment(&pair, &p.ics, &p.cfg, p.component)?;
    let crossing = first_crossing(&series, p.threshold_log10);
    let csv = rc.out.join(lbe_file_name(k));
    write_lbe_csv(&series, &csv)?;
    emit_plot_script(&[PlotInput::new(label(k), &csv)], &[], &rc.out.join("plot_lbe.gp"))?;

    match crossing.crossing_index {
        Some(step) => println!("K = {k}: log10(2 delta) reaches {} at step {step}", p.threshold_log10),
        None => println!("K = {k}: never reaches {} within {} steps", p.threshold_log10, p.cfg.n_steps),
    }
    println!("saturated: {}; max log10(2 delta): {}", series.saturated, log_or_marker(series.max_log10()));
    if let Some(step) = series.diverged_at {
        println!("diverged at step {step}");
    }
    println!("wrote {}", csv.display());
    Ok(())
}

pub fn sync(rc: &RunConfig) -> Result<()> {
    let p = &rc.plan;
    let k = rc.single_k()?;
    let pair = p.pair.with_k(k)?;
    let run = auxiliary_run(&pair, &p.ics, rc.variant, &p.cfg, &p.sync)?;
    let csv = rc.out.join(phase_file_name(k));
    write_phase_csv(&run.slave, &run.aux, p.component, &csv)?;
    emit_plot_script(&[], &[PlotInput::new(label(k), &csv)], &rc.out.join("plot_phase.gp"))?;

    let v = &run.verdict;
    println!("K = {k}: {}", verdict_text(v));
    println!(
        "metric {:e} vs tolerance {:e} (attractor diameter {}, window of {} steps)",
        v.metric, v.epsilon, v.diameter, v.window_steps
    );
    println!("wrote {}", csv.display());
    Ok(())
}

pub fn sweep(rc: &RunConfig) -> Result<()> {
    let result = run_sweep(&rc.plan)?;
    let summary = rc.out.join("sweep_summary.csv");
    write_sweep_csv(&result, &summary)?;
    let mut inputs = Vec::with_capacity(result.records.len());
    for r in &result.records {
        let path = rc.out.join(lbe_file_name(r.k));
        write_lbe_csv(&r.series, &path)?;
        inputs.push(PlotInput::new(label(r.k), path));
    }
    emit_plot_script(&inputs, &[], &rc.out.join("plot_sweep.gp"))?;
    print_table(&result.records);
    println!("config hash {}", result.provenance.config_hash);
    println!("wrote {}", rc.out.display());
    Ok(())
}

fn print_table(records: &[lbesync::SweepRecord]) {
    println!("{:>10} {:>10} {:>10} {:>18} {:>12}", "K", "crossing", "saturated", "sync", "max log");
    for r in records {
        let crossing = r.crossing.crossing_index.map(|c| c.to_string()).unwrap_or_else(|| "never".into());
        println!(
            "{:>10} {:>10} {:>10} {:>18} {:>12}",
            r.k,
            crossing,
            r.saturated,
            verdict_text(&r.sync),
            log_or_marker(r.max_log10)
        );
    }
}
