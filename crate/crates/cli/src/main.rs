use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stark_shell_cli::{
    emit_plotdata, init_threads, run, write_record, Axis, CliError, Command, ConfigFile, FGrid, Format, PartialParams,
    PlotKind, RunConfig,
};

#[derive(Parser)]
#[command(name = "stark-shell", version, about = "δ-shell Stark resonances: bound states, shifts, widths")]
struct Cli {
    /// TOML file mirroring the run configuration; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Result file (standard output when omitted).
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Also write plot data: trajectory, width-loglog or det-heatmap.
    #[arg(long, global = true)]
    plot: Option<String>,
    /// Plot data file (default `<output stem>.<kind>.dat`).
    #[arg(long, global = true)]
    plot_out: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Both,
}

#[derive(Args, Default)]
struct ParamArgs {
    /// Shell radius (1D: position of the point interaction).
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Interaction strength; negative is attractive.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Field strength F >= 0.
    #[arg(long = "field", visible_alias = "F")]
    field: Option<f64>,
}

#[derive(Args, Default)]
struct ContourArgs {
    /// Spherical-harmonic truncation.
    #[arg(long)]
    l_max: Option<usize>,
    /// Contour rotation angle in (0, pi/3).
    #[arg(long)]
    theta: Option<f64>,
    /// Order of the regularized determinant (>= 3).
    #[arg(long)]
    p: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Zero-field bound states per partial wave.
    BoundStates {
        #[command(flatten)]
        params: ParamArgs,
        /// Highest partial wave searched.
        #[arg(long)]
        ell_max: Option<usize>,
    },
    /// Quadratic Stark coefficient of the s-wave ground state.
    StarkShift {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Resonance continuation of the 1D model over a field grid.
    #[command(name = "resonance-1d")]
    Resonance1d {
        #[command(flatten)]
        params: ParamArgs,
        /// start:stop:count[:log|linear]
        #[arg(long)]
        f_grid: Option<String>,
        /// Fit the exponential width law.
        #[arg(long)]
        fit: bool,
    },
    /// |det_p| of the 3D boundary operator on a complex energy grid.
    #[command(name = "det-scan-3d")]
    DetScan3d {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        contour: ContourArgs,
        /// Re z axis lo:hi:n.
        #[arg(long, allow_hyphen_values = true)]
        re: Option<String>,
        /// Im z axis lo:hi:n.
        #[arg(long, allow_hyphen_values = true)]
        im: Option<String>,
    },
    /// 3D resonance from the zero of det_p, seeded perturbatively.
    #[command(name = "resonance-3d")]
    Resonance3d {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        contour: ContourArgs,
        /// Optional field grid start:stop:count[:log|linear].
        #[arg(long)]
        f_grid: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        seed_re: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        seed_im: Option<f64>,
    },
    /// Width-law fit of a saved resonance-1d JSON record.
    WidthFit {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Oracle and identity checks.
    Validate,
}

fn partial(p: &ParamArgs) -> PartialParams {
    PartialParams {
        a: p.a,
        alpha: p.alpha,
        field: p.field,
    }
}

fn apply_contour(cfg: &mut RunConfig, c: &ContourArgs) {
    let n = &mut cfg.numerics;
    n.l_max = c.l_max.unwrap_or(n.l_max);
    n.theta = c.theta.unwrap_or(n.theta);
    n.p = c.p.unwrap_or(n.p);
}

fn build(cli: &Cli) -> Result<RunConfig, CliError> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let none = ParamArgs::default();
    let (command, params) = match &cli.command {
        Cmd::BoundStates { params, .. } => (Command::BoundStates, params),
        Cmd::StarkShift { params } => (Command::StarkShift, params),
        Cmd::Resonance1d { params, .. } => (Command::Resonance1d, params),
        Cmd::DetScan3d { params, .. } => (Command::DetScan3d, params),
        Cmd::Resonance3d { params, .. } => (Command::Resonance3d, params),
        Cmd::WidthFit { .. } => (Command::WidthFit, &none),
        Cmd::Validate => (Command::Validate, &none),
    };
    let mut cfg = RunConfig::from_parts(command, file, partial(params))?;
    match &cli.command {
        Cmd::BoundStates { ell_max, .. } => {
            cfg.numerics.ell_max = ell_max.unwrap_or(cfg.numerics.ell_max);
        }
        Cmd::Resonance1d { f_grid, fit, .. } => {
            if let Some(g) = f_grid {
                cfg.sweep = Some(FGrid::parse(g)?);
            }
            cfg.numerics.fit |= *fit;
        }
        Cmd::DetScan3d { contour, re, im, .. } => {
            apply_contour(&mut cfg, contour);
            if let Some(r) = re {
                cfg.numerics.scan.re = Axis::parse(r)?;
            }
            if let Some(i) = im {
                cfg.numerics.scan.im = Axis::parse(i)?;
            }
        }
        Cmd::Resonance3d {
            contour,
            f_grid,
            seed_re,
            seed_im,
            ..
        } => {
            apply_contour(&mut cfg, contour);
            if let Some(g) = f_grid {
                cfg.sweep = Some(FGrid::parse(g)?);
            }
            cfg.numerics.seed_re = seed_re.or(cfg.numerics.seed_re);
            cfg.numerics.seed_im = seed_im.or(cfg.numerics.seed_im);
        }
        Cmd::WidthFit { input } => {
            if input.is_some() {
                cfg.input = input.clone();
            }
        }
        Cmd::StarkShift { .. } | Cmd::Validate => {}
    }
    if let Some(o) = &cli.output {
        cfg.output.path = Some(o.clone());
    }
    if let Some(f) = cli.format {
        cfg.output.format = match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
            FormatArg::Both => Format::Both,
        };
    }
    if let Some(k) = &cli.plot {
        cfg.output.plot = Some(PlotKind::parse(k)?);
    }
    if let Some(p) = &cli.plot_out {
        cfg.output.plot_path = Some(p.clone());
    }
    Ok(cfg)
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("stark-shell: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        return fail(e);
    }
    let cfg = match build(&cli).and_then(|c| c.validate().map(|_| c)) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    let rec = &outcome.record;
    if let Err(e) = write_record(rec) {
        return fail(e);
    }
    if let (Some(kind), Some(path)) = (cfg.output.plot, cfg.plot_path()) {
        if let Err(e) = emit_plotdata(rec, kind, &path) {
            return fail(e);
        }
    }
    for n in &rec.provenance.notes {
        eprintln!("note: {n}");
    }
    for d in &rec.provenance.diagnostics {
        eprintln!("diagnostic: {d}");
    }
    if let Some(f) = &rec.provenance.failure {
        eprintln!("stark-shell: stopped early, partial results written: {f}");
    }
    ExitCode::from(outcome.exit_code as u8)
}
