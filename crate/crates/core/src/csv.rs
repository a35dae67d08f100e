//! CSV schemas and gnuplot script generation.
//!
//! All files are comma-delimited with LF line endings and an ASCII header.
//! Reals use the shortest decimal that parses back to the same double, so
//! every emitted value round-trips bit for bit. Missing values are empty
//! fields.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::integrator::PseudoOrbit;
use crate::lbe::LbeSeries;
use crate::sweep::SweepResult;

pub const LBE_HEADER: &str = "step,t,delta,log10_2delta";
pub const SWEEP_HEADER: &str = "k,crossing_index,never_crossed,saturated,sync,sync_metric,diverged_at";
pub const PHASE_HEADER: &str = "step,t,y,y_aux";

/// Shortest round-trip rendering; exponent form outside `[1e-5, 1e16)`.
pub fn format_f64(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) || !a.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).map_err(|e| Error::io(path, e))
}

pub fn lbe_csv_string(series: &LbeSeries) -> String {
    let mut out = String::with_capacity(32 * (series.len() + 1));
    out.push_str(LBE_HEADER);
    out.push('\n');
    for i in 0..series.len() {
        let log = series.log10_values[i].map(format_f64).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            series.steps[i],
            format_f64(series.times[i]),
            format_f64(series.values[i]),
            log
        );
    }
    out
}

pub fn write_lbe_csv(series: &LbeSeries, path: &Path) -> Result<()> {
    write_file(path, &lbe_csv_string(series))
}

fn parse_field<T: std::str::FromStr>(field: &str, line: usize, what: &str) -> Result<T> {
    field
        .parse()
        .map_err(|_| Error::config(format!("line {line}: cannot parse {what} `{field}`")))
}

/// Parses a file written by [`write_lbe_csv`]. The compared component and
/// divergence flag are not part of the schema and come back as `0`/`None`.
pub fn parse_lbe_csv(text: &str) -> Result<LbeSeries> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == LBE_HEADER => {}
        other => return Err(Error::config(format!("unexpected LBE header {other:?}"))),
    }
    let (mut steps, mut times, mut values) = (vec![], vec![], vec![]);
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::config(format!("line {lineno}: expected 4 fields, got {}", fields.len())));
        }
        steps.push(parse_field(fields[0], lineno, "step")?);
        times.push(parse_field(fields[1], lineno, "time")?);
        values.push(parse_field(fields[2], lineno, "delta")?);
    }
    Ok(LbeSeries::from_deltas(0, steps, times, values))
}

pub fn read_lbe_csv(path: &Path) -> Result<LbeSeries> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_lbe_csv(&text)
}

pub fn sweep_csv_string(result: &SweepResult) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in &result.records {
        let sync = match r.sync.diverged_at() {
            Some(_) => String::new(),
            None => r.sync.synchronized.to_string(),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            format_f64(r.k),
            opt(r.crossing.crossing_index),
            r.crossing.never_crossed,
            r.saturated,
            sync,
            format_f64(r.sync.metric),
            opt(r.diverged_at)
        );
    }
    out
}

pub fn write_sweep_csv(result: &SweepResult, path: &Path) -> Result<()> {
    write_file(path, &sweep_csv_string(result))
}

/// `step,t,<master components>,<slave components>` for a coupled run.
pub fn write_orbits_csv(master: &PseudoOrbit, slave: &PseudoOrbit, path: &Path) -> Result<()> {
    if master.len() != slave.len() {
        return Err(Error::LengthMismatch { left: master.len(), right: slave.len() });
    }
    let mut out = String::from("step,t");
    for j in 0..master.dimension() {
        let _ = write!(out, ",master_{j}");
    }
    for j in 0..slave.dimension() {
        let _ = write!(out, ",slave_{j}");
    }
    out.push('\n');
    for i in 0..master.len() {
        let _ = write!(out, "{},{}", master.steps[i], format_f64(master.times[i]));
        for v in master.state(i).iter().chain(slave.state(i)) {
            out.push(',');
            out.push_str(&format_f64(*v));
        }
        out.push('\n');
    }
    write_file(path, &out)
}

/// Phase-portrait samples of one component of slave and auxiliary slave.
pub fn write_phase_csv(slave: &PseudoOrbit, aux: &PseudoOrbit, component: usize, path: &Path) -> Result<()> {
    let pairs = crate::sync::phase_portrait_data(slave, aux, component)?;
    let mut out = String::from(PHASE_HEADER);
    out.push('\n');
    for (i, (y, y_aux)) in pairs.into_iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            slave.steps[i],
            format_f64(slave.times[i]),
            format_f64(y),
            format_f64(y_aux)
        );
    }
    write_file(path, &out)
}

/// File name used for the LBE series of coupling `k`.
pub fn lbe_file_name(k: f64) -> String {
    format!("lbe_k{}.csv", format_f64(k))
}

pub fn phase_file_name(k: f64) -> String {
    format!("phase_k{}.csv", format_f64(k))
}

/// A labelled CSV to be plotted.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotInput {
    pub label: String,
    pub path: PathBuf,
}

impl PlotInput {
    pub fn new(label: impl Into<String>, path: impl Into<PathBuf>) -> Self {
        PlotInput { label: label.into(), path: path.into() }
    }
}

fn gp_quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', "''"))
}

/// Path of `file` as seen from the directory holding `script`.
fn relative_to_script(file: &Path, script: &Path) -> String {
    let dir = script.parent().unwrap_or(Path::new(""));
    file.strip_prefix(dir).unwrap_or(file).display().to_string()
}

/// Builds a gnuplot script that draws `log10(2 delta)` against iteration for
/// every LBE file (one curve each) and a `y` vs `y'` portrait, with the
/// diagonal for reference, for every phase file. Data paths are written
/// relative to the script's directory; run gnuplot from there.
pub fn plot_script_string(lbe: &[PlotInput], phase: &[PlotInput], script_path: &Path) -> Result<String> {
    if lbe.is_empty() && phase.is_empty() {
        return Err(Error::config("no data files to plot"));
    }
    let mut s = String::new();
    s.push_str("# gnuplot script generated by lbesync; run from this directory: gnuplot <script>\n");
    s.push_str("set datafile separator ','\n");
    s.push_str("set terminal pngcairo size 1200,420\n");
    if !lbe.is_empty() {
        s.push_str("\nset output 'lbe.png'\n");
        s.push_str("set title 'Lower bound error by coupling constant'\n");
        s.push_str("set xlabel 'iteration'\nset ylabel 'log10(2 delta)'\nset key outside right\n");
        let curves: Vec<String> = lbe
            .iter()
            .map(|p| {
                format!(
                    "{} every ::1 using 1:4 with lines title {}",
                    gp_quote(&relative_to_script(&p.path, script_path)),
                    gp_quote(&p.label)
                )
            })
            .collect();
        let _ = writeln!(s, "plot {}", curves.join(", \\\n     "));
    }
    for (i, p) in phase.iter().enumerate() {
        let _ = write!(
            s,
            "\nset output 'phase_{i}.png'\nset size square\nset title {}\nset xlabel 'y'\nset ylabel \"y'\"\nunset key\n",
            gp_quote(&p.label)
        );
        let _ = writeln!(
            s,
            "plot {} every ::1 using 3:4 with dots, x with lines dashtype 2",
            gp_quote(&relative_to_script(&p.path, script_path))
        );
        s.push_str("set size noratio\n");
    }
    Ok(s)
}

pub fn emit_plot_script(lbe: &[PlotInput], phase: &[PlotInput], out: &Path) -> Result<()> {
    let script = plot_script_string(lbe, phase, out)?;
    write_file(out, &script)
}
