//! Run configuration: defaults, config file, command-line overrides and
//! validation.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use stark_shell::resonance1d::NewtonOptions;
use stark_shell::starkshift::QuadratureSpec;
use stark_shell::weyl3d::{ContourQuadrature, MAX_L};
use stark_shell::ShellParams;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Command {
    #[serde(rename = "bound-states")]
    BoundStates,
    #[serde(rename = "stark-shift")]
    StarkShift,
    #[serde(rename = "resonance-1d")]
    Resonance1d,
    #[serde(rename = "det-scan-3d")]
    DetScan3d,
    #[serde(rename = "resonance-3d")]
    Resonance3d,
    #[serde(rename = "width-fit")]
    WidthFit,
    #[serde(rename = "validate")]
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::BoundStates => "bound-states",
            Self::StarkShift => "stark-shift",
            Self::Resonance1d => "resonance-1d",
            Self::DetScan3d => "det-scan-3d",
            Self::Resonance3d => "resonance-3d",
            Self::WidthFit => "width-fit",
            Self::Validate => "validate",
        }
    }

    /// Commands that need a shell of positive radius.
    fn is_3d(self) -> bool {
        matches!(self, Self::BoundStates | Self::StarkShift | Self::DetScan3d | Self::Resonance3d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Log,
    Linear,
}

/// Field grid `start..=stop` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl FGrid {
    /// Parses `start:stop:count[:log|linear]`.
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Config(format!("invalid F grid '{s}': expected start:stop:count[:log|linear]"));
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(bad());
        }
        let start = parts[0].trim().parse().map_err(|_| bad())?;
        let stop = parts[1].trim().parse().map_err(|_| bad())?;
        let count = parts[2].trim().parse().map_err(|_| bad())?;
        let spacing = match parts.get(3).map(|p| p.trim()) {
            None | Some("log") => Spacing::Log,
            Some("linear") | Some("lin") => Spacing::Linear,
            Some(_) => return Err(bad()),
        };
        Ok(Self {
            start,
            stop,
            count,
            spacing,
        })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.count == 0 {
            return Err(CliError::Config("F grid must contain at least one point".into()));
        }
        if !(self.start > 0.0 && self.start.is_finite() && self.stop.is_finite()) {
            return Err(CliError::Config(format!("F grid start {} must be finite and > 0", self.start)));
        }
        if self.count > 1 && !(self.stop > self.start) {
            return Err(CliError::Config(format!("F grid stop {} must exceed start {}", self.stop, self.start)));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                let s = k as f64 / n;
                if k == 0 {
                    return self.start;
                }
                if k + 1 == self.count {
                    return self.stop;
                }
                match self.spacing {
                    Spacing::Log => (self.start.ln() + s * (self.stop.ln() - self.start.ln())).exp(),
                    Spacing::Linear => self.start + s * (self.stop - self.start),
                }
            })
            .collect()
    }
}

/// Axis `lo..=hi` with `n` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    /// Parses `lo:hi:n`.
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Config(format!("invalid axis '{s}': expected lo:hi:n"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        Ok(Self {
            lo: parts[0].trim().parse().map_err(|_| bad())?,
            hi: parts[1].trim().parse().map_err(|_| bad())?,
            n: parts[2].trim().parse().map_err(|_| bad())?,
        })
    }

    fn validate(&self, name: &str) -> Result<(), CliError> {
        if self.n == 0 || !(self.lo.is_finite() && self.hi.is_finite()) || (self.n > 1 && !(self.hi > self.lo)) {
            return Err(CliError::Config(format!(
                "{name} axis {}:{}:{} needs n >= 1 and lo < hi",
                self.lo, self.hi, self.n
            )));
        }
        Ok(())
    }

    pub fn tuple(&self) -> (f64, f64, usize) {
        (self.lo, self.hi, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanGrid {
    pub re: Axis,
    pub im: Axis,
}

impl Default for ScanGrid {
    fn default() -> Self {
        Self {
            re: Axis { lo: -1.5, hi: -0.5, n: 41 },
            im: Axis { lo: -0.2, hi: 0.05, n: 41 },
        }
    }
}

/// Quadrature and truncation knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Numerics {
    /// Highest partial wave searched by `bound-states`.
    pub ell_max: usize,
    /// Spherical-harmonic truncation of the Weyl matrix.
    pub l_max: usize,
    /// Contour rotation angle, `0 < theta < pi/3`.
    pub theta: f64,
    /// Order of the regularized determinant.
    pub p: usize,
    pub contour: ContourQuadrature,
    pub shift: QuadratureSpec,
    /// Stopping rule of the 1D Newton iteration.
    pub newton: NewtonOptions,
    /// Fit the width law after a `resonance-1d` sweep.
    pub fit: bool,
    /// Start of the 3D secant search; defaults to `E₀ + F² a₂`.
    pub seed_re: Option<f64>,
    pub seed_im: Option<f64>,
    pub scan: ScanGrid,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            ell_max: 10,
            l_max: 6,
            theta: 0.6,
            p: 3,
            contour: ContourQuadrature::default(),
            shift: QuadratureSpec::default(),
            newton: NewtonOptions::default(),
            fit: false,
            seed_re: None,
            seed_im: None,
            scan: ScanGrid::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
    /// CSV at the given path and JSON next to it with extension `.json`.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlotKind {
    #[serde(rename = "trajectory")]
    Trajectory,
    #[serde(rename = "width-loglog")]
    WidthLoglog,
    #[serde(rename = "det-heatmap")]
    DetHeatmap,
}

impl PlotKind {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "trajectory" => Ok(Self::Trajectory),
            "width-loglog" => Ok(Self::WidthLoglog),
            "det-heatmap" => Ok(Self::DetHeatmap),
            _ => Err(CliError::Config(format!(
                "unknown plot kind '{s}' (expected trajectory, width-loglog or det-heatmap)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Trajectory => "trajectory",
            Self::WidthLoglog => "width-loglog",
            Self::DetHeatmap => "det-heatmap",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputSpec {
    /// Result file; standard output when absent.
    pub path: Option<PathBuf>,
    pub format: Format,
    pub plot: Option<PlotKind>,
    /// Plot data file; defaults to `<path>.<kind>.dat`.
    pub plot_path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub params: ShellParams,
    pub sweep: Option<FGrid>,
    pub numerics: Numerics,
    pub output: OutputSpec,
    /// Result record re-read by `width-fit`.
    pub input: Option<PathBuf>,
}

/// Parameters as read from a config file; every field optional.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PartialParams {
    pub a: Option<f64>,
    pub alpha: Option<f64>,
    #[serde(rename = "F")]
    pub field: Option<f64>,
}

/// Contents of a `--config` file, mirroring [`RunConfig`].
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub command: Option<Command>,
    pub params: PartialParams,
    pub sweep: Option<FGrid>,
    pub numerics: Numerics,
    pub output: OutputSpec,
    pub input: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config file {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("config file {}: {e}", path.display())))
    }
}

impl RunConfig {
    /// Combines a config file with the command; `a` defaults to 1 and `F`
    /// to 0, `alpha` is required except for `validate` and `width-fit`.
    pub fn from_parts(command: Command, file: ConfigFile, params: PartialParams) -> Result<Self, CliError> {
        if let Some(c) = file.command {
            if c != command {
                return Err(CliError::Config(format!(
                    "config file is for '{}' but the command is '{}'",
                    c.name(),
                    command.name()
                )));
            }
        }
        let pick = |cli: Option<f64>, f: Option<f64>| cli.or(f);
        let alpha = match pick(params.alpha, file.params.alpha) {
            Some(a) => a,
            None if matches!(command, Command::Validate | Command::WidthFit) => 0.0,
            None => return Err(CliError::Config(format!("'{}' needs --alpha", command.name()))),
        };
        let cfg = Self {
            command,
            params: ShellParams {
                a: pick(params.a, file.params.a).unwrap_or(1.0),
                alpha,
                field: pick(params.field, file.params.field).unwrap_or(0.0),
            },
            sweep: file.sweep,
            numerics: file.numerics,
            output: file.output,
            input: file.input,
        };
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let p = &self.params;
        let check = if self.command.is_3d() { p.require_shell() } else { p.validate() };
        check.map_err(|e| CliError::Config(e.to_string()))?;
        let n = &self.numerics;
        if n.l_max > MAX_L {
            return Err(CliError::Config(format!("l_max = {} exceeds {MAX_L}", n.l_max)));
        }
        if n.p < 3 {
            return Err(CliError::Config(format!("determinant order p = {} must be >= 3", n.p)));
        }
        if !(n.theta > 0.0 && n.theta < std::f64::consts::FRAC_PI_3) {
            return Err(CliError::Config(format!("theta = {} must lie in (0, pi/3)", n.theta)));
        }
        let q = &n.contour;
        if q.nodes_per_panel == 0 || q.angular_nodes == 0 || !(q.panel_width > 0.0) || !(q.decay > 0.0) {
            return Err(CliError::Config("contour quadrature knobs must be positive".into()));
        }
        n.shift.validate().map_err(|e| CliError::Config(e.to_string()))?;
        let nw = &n.newton;
        if nw.max_iterations == 0 || !(nw.residual_tolerance > 0.0) || !(nw.step_tolerance > 0.0) {
            return Err(CliError::Config("newton knobs must be positive".into()));
        }
        n.scan.re.validate("re")?;
        n.scan.im.validate("im")?;
        if let Some(s) = &self.sweep {
            s.validate()?;
        }
        match self.command {
            Command::Resonance1d if self.sweep.is_none() => {
                return Err(CliError::Config("resonance-1d needs an F grid (--f-grid start:stop:count)".into()))
            }
            Command::Resonance1d if !(p.alpha < 0.0) => {
                return Err(CliError::Config(format!("resonance-1d needs alpha < 0, got {}", p.alpha)))
            }
            Command::WidthFit if self.input.is_none() => {
                return Err(CliError::Config("width-fit needs --input <record.json>".into()))
            }
            _ => {}
        }
        for path in [&self.output.path, &self.output.plot_path].into_iter().flatten() {
            check_writable(path)?;
        }
        if self.output.plot.is_some() && self.output.path.is_none() && self.output.plot_path.is_none() {
            return Err(CliError::Config("--plot needs --output or --plot-out".into()));
        }
        Ok(())
    }

    /// Plot file path: explicit, or derived from the output path.
    pub fn plot_path(&self) -> Option<PathBuf> {
        let kind = self.output.plot?;
        if let Some(p) = &self.output.plot_path {
            return Some(p.clone());
        }
        let out = self.output.path.as_ref()?;
        let mut name = out.file_stem().unwrap_or_default().to_os_string();
        name.push(format!(".{}.dat", kind.name()));
        Some(out.with_file_name(name))
    }
}

fn check_writable(path: &Path) -> Result<(), CliError> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    if !parent.is_dir() {
        return Err(CliError::Config(format!("output directory {} does not exist", parent.display())));
    }
    if path.is_dir() {
        return Err(CliError::Config(format!("output path {} is a directory", path.display())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid() {
        let g = FGrid::parse("0.03:0.12:10").unwrap();
        let v = g.values();
        assert_eq!(v.len(), 10);
        assert!((v[0] - 0.03).abs() < 1e-15 && (v[9] - 0.12).abs() < 1e-15);
        let r: Vec<f64> = v.windows(2).map(|w| w[1] / w[0]).collect();
        assert!(r.iter().all(|x| (x - r[0]).abs() < 1e-12));
        assert_eq!(FGrid::parse("1:2:3:linear").unwrap().values(), vec![1.0, 1.5, 2.0]);
    }

    #[test]
    fn bad_grids_rejected() {
        assert!(FGrid::parse("0.1:0.2").is_err());
        assert!(FGrid::parse("a:0.2:3").is_err());
        assert!(FGrid::parse("0.1:0.2:0").unwrap().validate().is_err());
        assert!(FGrid::parse("0.2:0.1:3").unwrap().validate().is_err());
        assert!(FGrid::parse("-0.1:0.1:3").unwrap().validate().is_err());
    }

    #[test]
    fn alpha_is_required() {
        let e = RunConfig::from_parts(Command::BoundStates, ConfigFile::default(), PartialParams::default());
        assert!(matches!(e, Err(CliError::Config(_))));
        assert!(RunConfig::from_parts(Command::Validate, ConfigFile::default(), PartialParams::default()).is_ok());
    }

    #[test]
    fn command_line_overrides_file() {
        let file: ConfigFile = toml::from_str("[params]\na = 2.0\nalpha = -3.0\n[numerics]\nl_max = 4\n").unwrap();
        let cli = PartialParams {
            alpha: Some(-5.0),
            ..Default::default()
        };
        let cfg = RunConfig::from_parts(Command::BoundStates, file, cli).unwrap();
        assert_eq!(cfg.params, ShellParams { a: 2.0, alpha: -5.0, field: 0.0 });
        assert_eq!(cfg.numerics.l_max, 4);
        assert_eq!(cfg.numerics.theta, 0.6);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(toml::from_str::<ConfigFile>("[params]\nbeta = 1.0\n").is_err());
    }
}
