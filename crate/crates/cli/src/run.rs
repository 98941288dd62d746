//! Dispatch of a [`RunConfig`] to the computation it names.

use stark_shell::resonance1d::{bound_energy_1d, sweep_partial_with, width_fit, width_fit_points};
use stark_shell::starkshift::a2_coefficient_with;
use stark_shell::validate::run_all;
use stark_shell::weyl3d::{det_scan, find_resonance_3d_with};
use stark_shell::zerofield::{critical_strength, find_bound_states, PartialWaveBoundState};
use stark_shell::{Complex64, ShellParams};

use crate::config::{Command, RunConfig};
use crate::error::{is_input_error, CliError, EXIT_CHECKS_FAILED, EXIT_NO_CONVERGENCE};
use crate::output::read_record;
use crate::record::{Provenance, Resonance3dRow, ResultRecord, Rows};

/// A finished run: the record to persist and the process exit status.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub record: ResultRecord,
    pub exit_code: i32,
}

/// Runs a validated configuration. Numerical failures after partial
/// progress come back as an [`Outcome`] with exit code 3 and the failure
/// in the provenance; failures before any output are errors.
pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let mut prov = Provenance::new();
    let mut exit_code = 0;
    let rows = match config.command {
        Command::BoundStates => bound_states(config, &mut prov)?,
        Command::StarkShift => {
            let s = a2_coefficient_with(&config.params, &config.numerics.shift)?;
            prov.diagnostics.push(format!(
                "matrix-element refinement change {:e} (verified: {})",
                s.oracle_rel_err, s.verified
            ));
            Rows::StarkShift { shifts: vec![s] }
        }
        Command::Resonance1d => resonance_1d(config, &mut prov)?,
        Command::DetScan3d => {
            let n = &config.numerics;
            let samples = det_scan(
                &config.params,
                n.theta,
                n.l_max,
                &n.contour,
                n.p,
                n.scan.re.tuple(),
                n.scan.im.tuple(),
            )?;
            Rows::DetScan3d { samples }
        }
        Command::Resonance3d => resonance_3d(config, &mut prov)?,
        Command::WidthFit => {
            let path = config.input.as_ref().expect("validated");
            let input = read_record(path)?;
            let Rows::Resonance1d { trajectory, .. } = &input.rows else {
                return Err(CliError::Usage(format!("{} does not hold a resonance-1d trajectory", path.display())));
            };
            let e0 = bound_energy_1d(input.config_echo.params.alpha)?;
            let pts: Vec<(f64, f64)> = trajectory.iter().map(|p| (p.field, p.width)).collect();
            let fit = width_fit_points(&pts, None, e0)?;
            prov.notes.push(format!("input {}", path.display()));
            Rows::WidthFit { fits: vec![fit] }
        }
        Command::Validate => {
            let checks = run_all();
            for c in checks.iter().filter(|c| !c.passed) {
                prov.diagnostics.push(format!("FAILED {}: {:e} >= {:e}", c.name, c.metric, c.tolerance));
            }
            if checks.iter().any(|c| !c.passed) {
                exit_code = EXIT_CHECKS_FAILED;
            }
            Rows::Validate { checks }
        }
    };
    if prov.failure.is_some() {
        exit_code = EXIT_NO_CONVERGENCE;
    }
    Ok(Outcome {
        record: ResultRecord {
            schema_version: crate::record::SCHEMA_VERSION,
            config_echo: config.clone(),
            rows,
            provenance: prov,
        },
        exit_code,
    })
}

fn bound_states(config: &RunConfig, prov: &mut Provenance) -> Result<Rows, CliError> {
    let states: Vec<PartialWaveBoundState> = find_bound_states(&config.params, config.numerics.ell_max)?;
    if states.is_empty() {
        prov.notes.push(format!(
            "no channel binds (alpha >= -1/a = {})",
            critical_strength(0, config.params.a)
        ));
    }
    for s in states.iter().filter(|s| s.shallow) {
        prov.diagnostics.push(format!("channel l = {} is within the shallow-state threshold", s.ell));
    }
    Ok(Rows::BoundStates { states })
}

fn resonance_1d(config: &RunConfig, prov: &mut Provenance) -> Result<Rows, CliError> {
    let f_values = config.sweep.as_ref().expect("validated").values();
    let out = sweep_partial_with(&config.params, &f_values, &config.numerics.newton);
    if let Some(e) = &out.failure {
        if out.trajectory.points.is_empty() && is_input_error(e) {
            return Err(e.clone().into());
        }
        prov.failure = Some(e.to_string());
    }
    let max_iter = out.trajectory.points.iter().map(|p| p.iterations).max().unwrap_or(0);
    prov.diagnostics.push(format!(
        "{} of {} field values converged, at most {max_iter} Newton iterations",
        out.trajectory.points.len(),
        f_values.len()
    ));
    let mut fit = None;
    if config.numerics.fit && out.failure.is_none() {
        let e0 = bound_energy_1d(config.params.alpha)?;
        let w = width_fit(&out.trajectory, e0)?;
        prov.diagnostics.push(format!("width fit rms residual {:e}", w.rms_residual));
        fit = Some(w);
    }
    Ok(Rows::Resonance1d {
        trajectory: out.trajectory.points,
        fit,
    })
}

fn resonance_3d(config: &RunConfig, prov: &mut Provenance) -> Result<Rows, CliError> {
    let n = &config.numerics;
    let base = config.params;
    let zero = ShellParams { field: 0.0, ..base };
    let ground = find_bound_states(&zero, 0)?
        .into_iter()
        .next()
        .ok_or_else(|| CliError::Config(format!("alpha = {} binds no s-wave state, nothing to continue", base.alpha)))?;
    let shift = a2_coefficient_with(&base, &n.shift)?;
    let fields = match &config.sweep {
        Some(s) => s.values(),
        None => vec![base.field],
    };
    let mut resonances = Vec::with_capacity(fields.len());
    for f in fields {
        let predicted = ground.energy + f * f * shift.a2;
        let seed = match (n.seed_re, n.seed_im, resonances.last()) {
            (Some(re), im, _) => Complex64::new(re, im.unwrap_or(0.0)),
            (None, _, Some(prev)) => {
                let prev: &Resonance3dRow = prev;
                prev.z + (predicted - prev.predicted)
            }
            (None, _, None) => Complex64::new(predicted, 0.0),
        };
        let params = base.with_field(f);
        match find_resonance_3d_with(seed, n.theta, &params, n.l_max, &n.contour, n.p) {
            Ok(p) => resonances.push(Resonance3dRow {
                field: f,
                z: p.z,
                width: p.width,
                det_residual: p.newton_residual,
                iterations: p.iterations,
                e0: ground.energy,
                a2: shift.a2,
                predicted,
                l_max: n.l_max,
                theta: n.theta,
            }),
            Err(e) if resonances.is_empty() && is_input_error(&e) => return Err(e.into()),
            Err(e) => {
                prov.failure = Some(format!("F = {f}: {e}"));
                break;
            }
        }
    }
    prov.diagnostics.push(format!(
        "a2 = {:e} from matrix elements with refinement change {:e}",
        shift.a2, shift.oracle_rel_err
    ));
    Ok(Rows::Resonance3d { resonances })
}
