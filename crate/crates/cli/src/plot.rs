//! Plain columnar plot data derived from result records.

use std::path::Path;

use crate::config::PlotKind;
use crate::error::CliError;
use crate::output::{fmt_f64, write_atomic};
use crate::record::{ResultRecord, Rows};

/// `(F, Re z, Im z, Γ)` from a 1D or 3D trajectory.
fn trajectory(rows: &Rows) -> Option<Vec<[f64; 4]>> {
    match rows {
        Rows::Resonance1d { trajectory, .. } => {
            Some(trajectory.iter().map(|p| [p.field, p.z.re, p.z.im, p.width]).collect())
        }
        Rows::Resonance3d { resonances } => Some(resonances.iter().map(|r| [r.field, r.z.re, r.z.im, r.width]).collect()),
        _ => None,
    }
}

/// Plot data text for `kind`; errors when the record holds other rows.
pub fn plotdata(record: &ResultRecord, kind: PlotKind) -> Result<String, CliError> {
    let cmd = record.config_echo.command.name();
    let incompatible = || CliError::Usage(format!("plot kind '{}' cannot be drawn from a '{cmd}' record", kind.name()));
    let mut out = format!(
        "# stark-shell plot data, kind = {}, source = {cmd}, schema_version = {}\n",
        kind.name(),
        record.schema_version
    );
    match kind {
        PlotKind::Trajectory => {
            let t = trajectory(&record.rows).ok_or_else(incompatible)?;
            out.push_str("# columns: F [field strength], Re z [energy], Im z [energy], Gamma = -2 Im z [energy]\n");
            out.push_str("F Re_z Im_z Gamma\n");
            for r in t {
                out.push_str(&format!("{} {} {} {}\n", fmt_f64(r[0]), fmt_f64(r[1]), fmt_f64(r[2]), fmt_f64(r[3])));
            }
        }
        PlotKind::WidthLoglog => {
            let t = trajectory(&record.rows).ok_or_else(incompatible)?;
            out.push_str("# columns: 1/F [1/field strength], ln Gamma [ln energy]; points with Gamma <= 0 omitted\n");
            out.push_str("inv_F ln_Gamma\n");
            for r in t.iter().filter(|r| r[3] > 0.0) {
                out.push_str(&format!("{} {}\n", fmt_f64(1.0 / r[0]), fmt_f64(r[3].ln())));
            }
        }
        PlotKind::DetHeatmap => {
            let Rows::DetScan3d { samples } = &record.rows else {
                return Err(incompatible());
            };
            out.push_str("# columns: Re z [energy], Im z [energy], |det_p| [dimensionless]\n");
            out.push_str("Re_z Im_z abs_det\n");
            for s in samples {
                out.push_str(&format!("{} {} {}\n", fmt_f64(s.z.re), fmt_f64(s.z.im), fmt_f64(s.det.norm())));
            }
        }
    }
    Ok(out)
}

/// Writes the plot data for `kind` to `path` atomically.
pub fn emit_plotdata(record: &ResultRecord, kind: PlotKind, path: &Path) -> Result<(), CliError> {
    write_atomic(path, plotdata(record, kind)?.as_bytes())
}
