//! CSV writers for snapshots, diagnostics logs and sweep tables.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::app::runner::{LogRow, RunOutput, Snapshot};
use crate::app::scenario::SNAPSHOT_COLUMNS;
use crate::error::{Error, Result};

/// Shortest decimal with 17 significant digits; `nan` for missing values.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:.16e}")
    }
}

/// Node indices written to snapshots: the interior `|x| <= L`, in increasing x.
pub fn interior_nodes(run: &RunOutput) -> Vec<usize> {
    let l = run.scenario.domain.half_width;
    let coords = run.setup.mesh.coords();
    let mut idx: Vec<usize> = (0..coords.len())
        .filter(|&j| coords[j].abs() <= l * (1.0 + 1e-12))
        .collect();
    idx.sort_by(|&a, &b| coords[a].total_cmp(&coords[b]));
    idx
}

/// Renders one snapshot with the scenario's selected columns.
pub fn snapshot_csv(run: &RunOutput, snap: &Snapshot) -> String {
    let columns: Vec<&str> = SNAPSHOT_COLUMNS
        .iter()
        .copied()
        .filter(|c| *c == "x" || run.scenario.output.fields.iter().any(|f| f == c))
        .collect();
    let coords = run.setup.mesh.coords();
    let t = snap.hydro.time;
    let mut out = columns.join(",");
    out.push('\n');
    for j in interior_nodes(run) {
        let x = coords[j];
        let b = run.setup.bathymetry[j];
        let r = run.reference.as_ref().map(|r| r.eval(x, t));
        let h = snap.hydro.h[j];
        for (i, c) in columns.iter().enumerate() {
            let v = match *c {
                "x" => x,
                "h_num" => h,
                "h_ref" => r.map_or(f64::NAN, |r| r.h),
                "q_num" => snap.hydro.q[j],
                "q_ref" => r.map_or(f64::NAN, |r| r.q),
                "re_psi" => snap.field.psi[j].re,
                "im_psi" => snap.field.psi[j].im,
                "b" => b,
                "eta_num" => h + b,
                "eta_ref" => r.map_or(f64::NAN, |r| r.eta),
                _ => unreachable!(),
            };
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format_value(v));
        }
        out.push('\n');
    }
    out
}

/// Diagnostics at t = 0 and at every output time.
pub fn output_rows(run: &RunOutput) -> Vec<LogRow> {
    let mut rows = Vec::with_capacity(run.snapshots.len() + 1);
    if run.snapshots.first().is_none_or(|s| s.field.time > 0.0) {
        rows.push(run.log[0]);
    }
    rows.extend(run.snapshots.iter().map(|s| LogRow {
        step: 0,
        t: s.field.time,
        mass: s.energy.mass,
        energy_total: s.energy.total,
        energy_fisher: s.energy.fisher,
        energy_potential: s.energy.potential,
    }));
    rows
}

pub fn log_csv(rows: &[LogRow]) -> String {
    let mut out = String::from("t,mass,energy_total,energy_fisher,energy_potential\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            format_value(r.t),
            format_value(r.mass),
            format_value(r.energy_total),
            format_value(r.energy_fisher),
            format_value(r.energy_potential)
        );
    }
    out
}

pub fn sweep_csv(rows: &[(f64, f64)]) -> String {
    let mut out = String::from("eps,error\n");
    for (eps, err) in rows {
        let _ = writeln!(out, "{},{}", format_value(*eps), format_value(*err));
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes `<name>_t<time>.csv` per snapshot, `<name>_log.csv` and
/// `<name>_settings.toml` into `dir`. Returns the paths written.
pub fn write_run(run: &RunOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    let name = &run.scenario.name;
    let mut paths = Vec::new();
    for snap in &run.snapshots {
        let path = dir.join(format!("{name}_t{:.6}.csv", snap.hydro.time));
        write_file(&path, &snapshot_csv(run, snap))?;
        paths.push(path);
    }
    let path = dir.join(format!("{name}_log.csv"));
    write_file(&path, &log_csv(&output_rows(run)))?;
    paths.push(path);
    let path = dir.join(format!("{name}_settings.toml"));
    write_file(&path, &run.scenario.describe())?;
    paths.push(path);
    Ok(paths)
}
