//! Serialization of results: CSV for plotting, JSON mirrors for programs.
//! Floats are printed with 17 significant digits so files round-trip the
//! exact computed values.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use ffl_core::sde::Trajectory;
use ffl_core::sweep::{IsiDensity, LambdaSweepResult, MetricStat, SweepResult};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Round-trip-exact float rendering (17 significant digits).
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

fn json_opt(v: Option<f64>) -> Value {
    v.map_or(Value::Null, |x| json!(x))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

pub fn write_trajectory(
    dir: &Path,
    format: OutputFormat,
    traj: &Trajectory,
) -> Result<PathBuf> {
    const COLUMNS: [&str; 7] = ["t", "x1", "y1", "x2", "y2", "x3", "y3"];
    match format {
        OutputFormat::Csv => {
            let path = dir.join("trajectory.csv");
            let mut w = create(&path)?;
            writeln!(w, "{}", COLUMNS.join(","))?;
            for (t, s) in traj.times.iter().zip(&traj.states) {
                let mut fields = Vec::with_capacity(7);
                fields.push(fmt_float(*t));
                fields.extend(s.iter().map(|v| fmt_float(*v)));
                writeln!(w, "{}", fields.join(","))?;
            }
            w.flush()?;
            Ok(path)
        }
        OutputFormat::Json => {
            let path = dir.join("trajectory.json");
            let data: Vec<Vec<f64>> = traj
                .times
                .iter()
                .zip(&traj.states)
                .map(|(t, s)| {
                    let mut row = Vec::with_capacity(7);
                    row.push(*t);
                    row.extend_from_slice(s);
                    row
                })
                .collect();
            let doc = json!({ "columns": COLUMNS, "data": data });
            serde_json::to_writer_pretty(create(&path)?, &doc)?;
            Ok(path)
        }
    }
}

/// One motif's sweep product: a plain grid, or a grid with per-lambda0
/// reductions attached.
pub enum SweepOutcome {
    Grid(SweepResult),
    Lambda(LambdaSweepResult),
}

impl SweepOutcome {
    pub fn grid(&self) -> &SweepResult {
        match self {
            SweepOutcome::Grid(g) => g,
            SweepOutcome::Lambda(l) => &l.sweep,
        }
    }
}

const POINT_METRICS: [&str; 7] = [
    "amplitude1",
    "amplitude2",
    "amplitude3",
    "sigma",
    "gamma_pc",
    "r_cv",
    "spike_count",
];

struct PointRow {
    motif: String,
    coords: Vec<f64>,
    metric: &'static str,
    mean: Option<f64>,
    stderr: Option<f64>,
    n_defined: usize,
}

fn point_rows(runs: &[(String, SweepOutcome)]) -> Vec<PointRow> {
    let mut rows = Vec::new();
    for (label, outcome) in runs {
        let grid = outcome.grid();
        let inner = grid.axes.last().expect("sweep has at least one axis");
        let n_inner = inner.values.len();
        for (idx, point) in grid.points.iter().enumerate() {
            let coords: Vec<f64> = if grid.axes.len() == 2 {
                vec![grid.axes[0].values[idx / n_inner], inner.values[idx % n_inner]]
            } else {
                vec![inner.values[idx]]
            };
            let stat_fields = |s: Option<MetricStat>| match s {
                Some(s) => (Some(s.mean), Some(s.stderr), s.n_defined),
                None => (None, None, 0),
            };
            let mut push = |metric: &'static str, fields: (Option<f64>, Option<f64>, usize)| {
                rows.push(PointRow {
                    motif: label.clone(),
                    coords: coords.clone(),
                    metric,
                    mean: fields.0,
                    stderr: fields.1,
                    n_defined: fields.2,
                });
            };
            for (i, name) in POINT_METRICS[..3].iter().enumerate() {
                push(name, stat_fields(Some(point.amplitudes[i])));
            }
            push("sigma", stat_fields(point.sigma));
            push("gamma_pc", stat_fields(point.gamma_pc));
            push("r_cv", stat_fields(point.r_cv));
            push(
                "spike_count",
                (Some(point.mean_spike_count), None, point.n_trials),
            );
        }
    }
    rows
}

pub fn write_sweep(
    dir: &Path,
    format: OutputFormat,
    runs: &[(String, SweepOutcome)],
) -> Result<Vec<PathBuf>> {
    let axes = runs[0].1.grid().axes.clone();
    let params: Vec<&str> = axes.iter().map(|a| a.parameter.as_str()).collect();
    let rows = point_rows(runs);
    let mut written = Vec::new();

    match format {
        OutputFormat::Csv => {
            let path = dir.join("sweep.csv");
            let mut w = create(&path)?;
            writeln!(w, "motif,{},metric,mean,stderr,n_defined", params.join(","))?;
            for r in &rows {
                let coords: Vec<String> = r.coords.iter().map(|v| fmt_float(*v)).collect();
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    r.motif,
                    coords.join(","),
                    r.metric,
                    fmt_opt(r.mean),
                    fmt_opt(r.stderr),
                    r.n_defined
                )?;
            }
            w.flush()?;
            written.push(path);
        }
        OutputFormat::Json => {
            let path = dir.join("sweep.json");
            let json_rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut obj = serde_json::Map::new();
                    obj.insert("motif".into(), json!(r.motif));
                    for (p, v) in params.iter().zip(&r.coords) {
                        obj.insert((*p).into(), json!(v));
                    }
                    obj.insert("metric".into(), json!(r.metric));
                    obj.insert("mean".into(), json_opt(r.mean));
                    obj.insert("stderr".into(), json_opt(r.stderr));
                    obj.insert("n_defined".into(), json!(r.n_defined));
                    Value::Object(obj)
                })
                .collect();
            let doc = json!({ "axes": axes, "rows": json_rows });
            serde_json::to_writer_pretty(create(&path)?, &doc)?;
            written.push(path);
        }
    }

    written.push(write_optima(dir, format, runs, &params)?);
    if runs.iter().any(|(_, o)| matches!(o, SweepOutcome::Lambda(_))) {
        written.push(write_lambda_summary(dir, format, runs)?);
    }
    Ok(written)
}

fn write_optima(
    dir: &Path,
    format: OutputFormat,
    runs: &[(String, SweepOutcome)],
    params: &[&str],
) -> Result<PathBuf> {
    // Optima are located along the innermost axis; a two-axis sweep gets a
    // slice column named after the outer parameter.
    let slice_header = (params.len() == 2).then(|| params[0]);
    match format {
        OutputFormat::Csv => {
            let path = dir.join("optima.csv");
            let mut w = create(&path)?;
            match slice_header {
                Some(outer) => writeln!(w, "motif,metric,{outer},x,value")?,
                None => writeln!(w, "motif,metric,x,value")?,
            }
            for (label, outcome) in runs {
                for rec in &outcome.grid().optima {
                    let mut fields = vec![label.clone(), rec.metric.as_str().to_string()];
                    if slice_header.is_some() {
                        fields.push(fmt_opt(rec.slice));
                    }
                    fields.push(fmt_opt(rec.optimum.map(|o| o.x)));
                    fields.push(fmt_opt(rec.optimum.map(|o| o.value)));
                    writeln!(w, "{}", fields.join(","))?;
                }
            }
            w.flush()?;
            Ok(path)
        }
        OutputFormat::Json => {
            let path = dir.join("optima.json");
            let rows: Vec<Value> = runs
                .iter()
                .flat_map(|(label, outcome)| {
                    outcome.grid().optima.iter().map(move |rec| {
                        json!({
                            "motif": label,
                            "metric": rec.metric.as_str(),
                            "slice": json_opt(rec.slice),
                            "x": json_opt(rec.optimum.map(|o| o.x)),
                            "value": json_opt(rec.optimum.map(|o| o.value)),
                        })
                    })
                })
                .collect();
            serde_json::to_writer_pretty(create(&path)?, &rows)?;
            Ok(path)
        }
    }
}

fn write_lambda_summary(
    dir: &Path,
    format: OutputFormat,
    runs: &[(String, SweepOutcome)],
) -> Result<PathBuf> {
    let summaries = runs.iter().filter_map(|(label, o)| match o {
        SweepOutcome::Lambda(l) => Some((label, &l.summary)),
        SweepOutcome::Grid(_) => None,
    });
    match format {
        OutputFormat::Csv => {
            let path = dir.join("lambda_summary.csv");
            let mut w = create(&path)?;
            writeln!(
                w,
                "motif,lambda0,sigma_noise_avg,sigma_points,r_noise_avg,r_points,\
                 sigma_opt_x,sigma_opt_value,r_opt_x,r_opt_value"
            )?;
            for (label, rows) in summaries {
                for s in rows {
                    writeln!(
                        w,
                        "{},{},{},{},{},{},{},{},{},{}",
                        label,
                        fmt_float(s.lambda0),
                        fmt_opt(s.sigma_noise_avg),
                        s.sigma_points,
                        fmt_opt(s.r_noise_avg),
                        s.r_points,
                        fmt_opt(s.sigma_opt.map(|o| o.x)),
                        fmt_opt(s.sigma_opt.map(|o| o.value)),
                        fmt_opt(s.r_opt.map(|o| o.x)),
                        fmt_opt(s.r_opt.map(|o| o.value)),
                    )?;
                }
            }
            w.flush()?;
            Ok(path)
        }
        OutputFormat::Json => {
            let path = dir.join("lambda_summary.json");
            let rows: Vec<Value> = summaries
                .flat_map(|(label, rows)| {
                    rows.iter()
                        .map(move |s| json!({ "motif": label, "summary": s }))
                })
                .collect();
            serde_json::to_writer_pretty(create(&path)?, &rows)?;
            Ok(path)
        }
    }
}

pub fn write_density(
    dir: &Path,
    format: OutputFormat,
    label: &str,
    delta1: f64,
    density: &IsiDensity,
) -> Result<PathBuf> {
    match format {
        OutputFormat::Csv => {
            let path = dir.join(format!("density_{label}_{delta1}.csv"));
            let mut w = create(&path)?;
            writeln!(w, "bin_left,bin_right,density")?;
            for (d, e) in density.densities.iter().zip(density.bin_edges.windows(2)) {
                writeln!(w, "{},{},{}", fmt_float(e[0]), fmt_float(e[1]), fmt_float(*d))?;
            }
            w.flush()?;
            Ok(path)
        }
        OutputFormat::Json => {
            let path = dir.join(format!("density_{label}_{delta1}.json"));
            let doc = json!({
                "motif": label,
                "delta1": delta1,
                "bin_edges": density.bin_edges,
                "densities": density.densities,
                "pooled_isis": density.pooled_isis,
                "binned_isis": density.binned_isis,
            });
            serde_json::to_writer_pretty(create(&path)?, &doc)?;
            Ok(path)
        }
    }
}
