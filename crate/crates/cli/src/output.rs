//! CSV and JSON serialization of result records and atomic file writes.

use std::io::Write;
use std::path::Path;

use crate::config::Format;
use crate::error::CliError;
use crate::record::{ResultRecord, Rows};

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes `bytes` to a temporary file beside `path`, then renames it.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(path))?;
    tmp.write_all(bytes).map_err(io_err(path))?;
    tmp.as_file().sync_all().map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| io_err(path)(e.error))?;
    Ok(())
}

fn table(rows: &Rows) -> (Vec<&'static str>, Vec<Vec<String>>) {
    let f = fmt_f64;
    match rows {
        Rows::BoundStates { states } => (
            vec!["ell", "energy", "kappa", "multiplicity", "residual", "shallow"],
            states
                .iter()
                .map(|s| {
                    vec![
                        s.ell.to_string(),
                        f(s.energy),
                        f(s.kappa),
                        s.multiplicity.to_string(),
                        f(s.residual),
                        s.shallow.to_string(),
                    ]
                })
                .collect(),
        ),
        Rows::StarkShift { shifts } => (
            vec![
                "E0",
                "a1",
                "a2",
                "m1_elem",
                "m2_elem",
                "mu1_at_e0",
                "mu0_prime",
                "oracle_rel_err",
                "verified",
            ],
            shifts
                .iter()
                .map(|s| {
                    vec![
                        f(s.e0),
                        f(s.a1),
                        f(s.a2),
                        f(s.m1_elem),
                        f(s.m2_elem),
                        f(s.mu1_at_e0),
                        f(s.mu0_prime),
                        f(s.oracle_rel_err),
                        s.verified.to_string(),
                    ]
                })
                .collect(),
        ),
        Rows::Resonance1d { trajectory, .. } => (
            vec!["F", "re_z", "im_z", "width", "newton_residual", "iterations", "method"],
            trajectory
                .iter()
                .map(|p| {
                    vec![
                        f(p.field),
                        f(p.z.re),
                        f(p.z.im),
                        f(p.width),
                        f(p.newton_residual),
                        p.iterations.to_string(),
                        p.method.clone(),
                    ]
                })
                .collect(),
        ),
        Rows::DetScan3d { samples } => (
            vec!["re_z", "im_z", "re_det", "im_det", "abs_det"],
            samples
                .iter()
                .map(|s| vec![f(s.z.re), f(s.z.im), f(s.det.re), f(s.det.im), f(s.det.norm())])
                .collect(),
        ),
        Rows::Resonance3d { resonances } => (
            vec![
                "F",
                "re_z",
                "im_z",
                "width",
                "det_residual",
                "iterations",
                "E0",
                "a2",
                "predicted",
                "l_max",
                "theta",
            ],
            resonances
                .iter()
                .map(|r| {
                    vec![
                        f(r.field),
                        f(r.z.re),
                        f(r.z.im),
                        f(r.width),
                        f(r.det_residual),
                        r.iterations.to_string(),
                        f(r.e0),
                        f(r.a2),
                        f(r.predicted),
                        r.l_max.to_string(),
                        f(r.theta),
                    ]
                })
                .collect(),
        ),
        Rows::WidthFit { fits } => (
            vec!["c", "b", "logC", "rms_residual", "F_min", "F_max", "n_points", "c_expected"],
            fits.iter()
                .map(|w| {
                    vec![
                        f(w.c),
                        f(w.b),
                        f(w.log_c),
                        f(w.rms_residual),
                        f(w.f_window.0),
                        f(w.f_window.1),
                        w.n_points.to_string(),
                        f(w.c_expected),
                    ]
                })
                .collect(),
        ),
        Rows::Validate { checks } => (
            vec!["name", "passed", "metric", "tolerance", "detail"],
            checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.clone(),
                        c.passed.to_string(),
                        f(c.metric),
                        f(c.tolerance),
                        c.detail.clone(),
                    ]
                })
                .collect(),
        ),
    }
}

/// CSV text: `#` comments (schema version, config echo, diagnostics),
/// a header line and one line per row. Contains no wall-clock time.
pub fn to_csv(record: &ResultRecord) -> Result<String, CliError> {
    let mut out = String::new();
    let p = &record.provenance;
    out.push_str(&format!("# {} {}\n", p.tool, p.version));
    out.push_str(&format!("# schema_version = {}\n", record.schema_version));
    out.push_str(&format!("# command = {}\n", record.config_echo.command.name()));
    let echo = serde_json::to_string(&record.config_echo).map_err(|e| CliError::Usage(e.to_string()))?;
    out.push_str(&format!("# config = {echo}\n"));
    for d in &p.diagnostics {
        out.push_str(&format!("# diagnostic: {d}\n"));
    }
    for n in &p.notes {
        out.push_str(&format!("# note: {n}\n"));
    }
    if let Some(fl) = &p.failure {
        out.push_str(&format!("# failure: {fl}\n"));
        out.push_str("# status = partial\n");
    } else {
        out.push_str("# status = complete\n");
    }
    if let Rows::Resonance1d { fit: Some(w), .. } = &record.rows {
        out.push_str(&format!(
            "# fit: c = {}, b = {}, logC = {}, rms_residual = {}, F_window = [{}, {}], n_points = {}, c_expected = {}\n",
            fmt_f64(w.c),
            fmt_f64(w.b),
            fmt_f64(w.log_c),
            fmt_f64(w.rms_residual),
            fmt_f64(w.f_window.0),
            fmt_f64(w.f_window.1),
            w.n_points,
            fmt_f64(w.c_expected)
        ));
    }
    let (header, rows) = table(&record.rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Usage(e.to_string());
    w.write_record(&header).map_err(csv_err)?;
    for r in rows {
        w.write_record(&r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    out.push_str(&String::from_utf8_lossy(&bytes));
    Ok(out)
}

pub fn to_json(record: &ResultRecord) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(record).map_err(|e| CliError::Usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Persists the record in the configured format(s); standard output when
/// no path is set.
pub fn write_record(record: &ResultRecord) -> Result<(), CliError> {
    let out = &record.config_echo.output;
    match (&out.path, out.format) {
        (None, Format::Json) => print!("{}", to_json(record)?),
        (None, _) => print!("{}", to_csv(record)?),
        (Some(p), Format::Csv) => write_atomic(p, to_csv(record)?.as_bytes())?,
        (Some(p), Format::Json) => write_atomic(p, to_json(record)?.as_bytes())?,
        (Some(p), Format::Both) => {
            write_atomic(p, to_csv(record)?.as_bytes())?;
            write_atomic(&p.with_extension("json"), to_json(record)?.as_bytes())?;
        }
    }
    Ok(())
}

/// Reads a JSON result record.
pub fn read_record(path: &Path) -> Result<ResultRecord, CliError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        let s = fmt_f64(std::f64::consts::PI);
        assert_eq!(s, "3.1415926535897931e0");
        assert_eq!(s.parse::<f64>().unwrap(), std::f64::consts::PI);
        let x = 0.1 + 0.2;
        assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
