use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mslv::io::{load_gas, Context, CurveSeries, Format, Plane, Quantity, Units};
use mslv::phase::PhasePair;
use mslv::stability::Spacing;
use mslv::{MslvError, Result};

#[derive(Parser, Debug)]
#[command(name = "mslv", version, about = "Phase diagrams from the modified solid-liquid-vapor equation of state")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Built-in gas name or path to a gas file.
    #[arg(long, global = true, default_value = "methane")]
    gas: String,

    /// Arguments and output in critical-point units (default).
    #[arg(long, global = true, conflicts_with = "dimensional")]
    reduced: bool,

    /// Arguments and output in K, MPa and cm3/mol.
    #[arg(long, global = true)]
    dimensional: bool,

    #[arg(long, global = true, default_value = "csv", value_parser = parse::<Format>)]
    format: Format,

    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Add log10 columns for every column that is positive throughout.
    #[arg(long, global = true)]
    log: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pressure, phi_vv and applicability along one isotherm.
    Isotherm {
        #[arg(long = "t")]
        t: f64,
        #[command(flatten)]
        v: VolumeRange,
    },
    /// Singularity (spinodal) curve on both branches.
    Singularity {
        #[command(flatten)]
        v: VolumeRange,
        #[arg(long, default_value = "vT", value_parser = parse::<Plane>)]
        plane: Plane,
    },
    /// Coexistence curve of one phase pair.
    Binodal {
        #[arg(long, default_value = "lv", value_parser = parse::<PhasePair>)]
        pair: PhasePair,
        /// Default 0.35 T_c.
        #[arg(long)]
        t_min: Option<f64>,
        /// Default T_c for pairs with a vapor, 1.5 T_c for solid-liquid.
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long, default_value = "Tp", value_parser = parse::<Plane>)]
        plane: Plane,
    },
    /// Critical point.
    Critical,
    /// Solid-liquid-vapor triple point.
    Triple,
    /// Two-phase solution at one temperature with its residuals.
    MaxwellCheck {
        #[arg(long, default_value = "lv", value_parser = parse::<PhasePair>)]
        pair: PhasePair,
        #[arg(long = "t")]
        t: f64,
    },
    /// (v, T, p) mesh of both branches.
    Manifold {
        #[command(flatten)]
        v: VolumeRange,
        /// Default 0.35 T_c.
        #[arg(long)]
        t_min: Option<f64>,
        /// Default 1.5 T_c.
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long, default_value_t = 40)]
        nt: usize,
        /// Append singularity and coexistence curves as tagged segments.
        #[arg(long)]
        overlays: bool,
    },
    /// Closed-form singularity roots in sqrt(T / T_c).
    SpinodalRoots {
        #[command(flatten)]
        v: VolumeRange,
    },
    /// Temperature at which an isotherm takes equal pressures at two volumes.
    TauRoots {
        #[arg(long)]
        v1: f64,
        #[arg(long)]
        v2: f64,
    },
}

#[derive(Args, Debug)]
struct VolumeRange {
    /// Default just above the covolume b.
    #[arg(long)]
    v_min: Option<f64>,
    /// Default 10 v_c.
    #[arg(long)]
    v_max: Option<f64>,
    /// Number of sample volumes.
    #[arg(long, alias = "nv", default_value_t = 200)]
    n: usize,
    #[arg(long, default_value = "log", value_parser = parse::<Spacing>)]
    spacing: Spacing,
}

fn parse<T: std::str::FromStr<Err = MslvError>>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|e: MslvError| e.to_string())
}

impl VolumeRange {
    fn bounds(&self, ctx: &Context) -> (f64, f64) {
        let b = ctx.eos.covolume();
        (
            self.v_min.unwrap_or_else(|| ctx.output(Quantity::Volume, b * (1.0 + 1e-3))),
            self.v_max.unwrap_or_else(|| ctx.output(Quantity::Volume, 10.0)),
        )
    }
}

fn run(cli: Cli) -> Result<()> {
    let (gas, warnings) = load_gas(&cli.global.gas)?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let units = if cli.global.dimensional { Units::Dimensional } else { Units::Reduced };
    let mut ctx = Context::new(gas, units)?;
    ctx.log_columns = cli.global.log;
    let temp = |x: Option<f64>, reduced: f64| x.unwrap_or_else(|| ctx.output(Quantity::Temperature, reduced));

    let series: CurveSeries = match &cli.command {
        Command::Isotherm { t, v } => {
            let (lo, hi) = v.bounds(&ctx);
            ctx.isotherm(*t, lo, hi, v.n, v.spacing)?
        }
        Command::Singularity { v, plane } => {
            let (lo, hi) = v.bounds(&ctx);
            ctx.singularity(lo, hi, v.n, v.spacing, *plane)?
        }
        Command::Binodal { pair, t_min, t_max, n, plane } => {
            let top = if *pair == PhasePair::SolidLiquid { 1.5 } else { 1.0 };
            ctx.binodal(*pair, temp(*t_min, 0.35), temp(*t_max, top), *n, *plane)?
        }
        Command::Critical => ctx.critical()?,
        Command::Triple => ctx.triple()?,
        Command::MaxwellCheck { pair, t } => ctx.maxwell_check(*pair, *t)?,
        Command::Manifold { v, t_min, t_max, nt, overlays } => {
            let range = v.bounds(&ctx);
            let t_range = (temp(*t_min, 0.35), temp(*t_max, 1.5));
            ctx.manifold(range, t_range, v.n, *nt, v.spacing, *overlays)?
        }
        Command::SpinodalRoots { v } => {
            let (lo, hi) = v.bounds(&ctx);
            ctx.spinodal_roots(lo, hi, v.n, v.spacing)?
        }
        Command::TauRoots { v1, v2 } => ctx.tau_roots(*v1, *v2)?,
    };

    if let Some(skipped) = series.meta_value("skipped").filter(|s| *s != "0") {
        eprintln!("warning: {skipped} sample volumes outside both branches were skipped");
    }
    match &cli.global.out {
        Some(path) => series.write(path, cli.global.format),
        None => std::io::stdout()
            .write_all(series.render(cli.global.format).as_bytes())
            .map_err(MslvError::from),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
