//! `nua-sweep`: negativity and mutual information against T₀ for one or more
//! (m, w, K) scenarios.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};

use nua_core::entanglement::DEFAULT_TAIL_TOL;
use nua_core::output::{create, manifest_path, write_csv, write_json, write_manifest};
use nua_core::plot::{write_svg, Measure};
use nua_core::specfun::Precision;
use nua_core::sweep::{
    figure_scenarios, rindler_measures, run_sweep, Format, PlotKind, Scenario, SweepConfig,
    SweepResult,
};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PlotArg {
    #[value(name = "N")]
    N,
    #[value(name = "I")]
    I,
    Both,
}

/// Sweep the hypersurface time T₀ and record |q|, the logarithmic negativity N
/// and the mutual information I of the Alice–Vic state.
///
/// All quantities are in natural units (c = ħ = 1). Each scenario is a triple
/// (m, w, K): field mass, the observer's acceleration scale w, and the
/// separation constant K (ν = K/w).
#[derive(Debug, Parser)]
#[command(name = "nua-sweep", version, about, long_about)]
struct Args {
    /// Separation constant K of a scenario (repeat once per scenario).
    #[arg(long = "K", value_name = "F")]
    k: Vec<f64>,

    /// Acceleration scale w of a scenario (repeat once per scenario).
    #[arg(long = "w", value_name = "F")]
    w: Vec<f64>,

    /// Field mass m; give one value for all scenarios or one per scenario.
    /// Defaults to 1.
    #[arg(long = "m", value_name = "F")]
    m: Vec<f64>,

    /// Add the four reference scenarios
    /// (K, w) = (0.1, 1), (0.3, 1), (0.1, 5), (0.3, 5) with m = 1.
    #[arg(long)]
    defaults_fig12: bool,

    #[arg(long, value_name = "F", default_value_t = -8.0, allow_negative_numbers = true)]
    t0_min: f64,

    #[arg(
        long,
        value_name = "F",
        default_value_t = 10.0,
        allow_negative_numbers = true
    )]
    t0_max: f64,

    /// Number of T₀ grid points, endpoints included.
    #[arg(long, value_name = "N", default_value_t = 200)]
    steps: usize,

    /// Largest probability weight the Fock truncation may drop.
    #[arg(long, value_name = "F", default_value_t = DEFAULT_TAIL_TOL)]
    tail_tol: f64,

    /// Relative tolerance for the Bessel-function evaluations.
    #[arg(long, value_name = "F", default_value_t = Precision::default().rel_tol)]
    spec_tol: f64,

    /// Output file; the run manifest goes next to it as
    /// `<out>.manifest.json`.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,

    /// Also write SVG charts `<out stem>_N.svg` and/or `<out stem>_I.svg`.
    #[arg(long, value_enum)]
    plot: Option<PlotArg>,

    /// Draw the uniform-acceleration plateau of each curve on the charts.
    #[arg(long)]
    compare_rindler: bool,

    /// Worker threads (defaults to the number of cores).
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
}

fn scenarios(args: &Args) -> Result<Vec<Scenario>> {
    let mut out = if args.defaults_fig12 {
        figure_scenarios()
    } else {
        Vec::new()
    };
    if args.k.len() != args.w.len() {
        bail!(
            "--K and --w must be given the same number of times ({} vs {})",
            args.k.len(),
            args.w.len()
        );
    }
    let n = args.k.len();
    let masses = match args.m.len() {
        0 => vec![1.0; n],
        1 => vec![args.m[0]; n],
        len if len == n => args.m.clone(),
        len => {
            bail!("--m must be given once or once per scenario ({len} values for {n} scenarios)")
        }
    };
    for i in 0..n {
        out.push(Scenario::new(masses[i], args.w[i], args.k[i]));
    }
    Ok(out)
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sweep".into());
    out.with_file_name(format!("{stem}_{suffix}.svg"))
}

fn plots(
    result: &SweepResult,
    out: &Path,
    kind: PlotKind,
    rindler: bool,
    tail_tol: f64,
) -> Result<Vec<PathBuf>> {
    let measures: &[Measure] = match kind {
        PlotKind::Negativity => &[Measure::Negativity],
        PlotKind::MutualInfo => &[Measure::MutualInfo],
        PlotKind::Both => &[Measure::Negativity, Measure::MutualInfo],
    };
    let plateaus = if rindler {
        Some(
            result
                .curves
                .iter()
                .map(|c| rindler_measures(&c.scenario, tail_tol))
                .collect::<nua_core::Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    let mut written = Vec::new();
    for &m in measures {
        let asym: Option<Vec<f64>> = plateaus.as_ref().map(|p| {
            p.iter()
                .map(|x| match m {
                    Measure::Negativity => x.negativity,
                    Measure::MutualInfo => x.mutual_info,
                })
                .collect()
        });
        let path = sibling(out, m.short());
        write_svg(create(&path)?, &result.curves, m, asym.as_deref())
            .with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
    }
    Ok(written)
}

fn main() -> Result<()> {
    let args = Args::parse();
    let format = match args.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    let out = args.out.clone().unwrap_or_else(|| match format {
        Format::Csv => PathBuf::from("nua_sweep.csv"),
        Format::Json => PathBuf::from("nua_sweep.json"),
    });
    let config = SweepConfig {
        scenarios: scenarios(&args)?,
        t0_min: args.t0_min,
        t0_max: args.t0_max,
        steps: args.steps,
        tail_tol: args.tail_tol,
        spec_tol: args.spec_tol,
        output_path: Some(out.clone()),
        format,
        plot: args.plot.map(|p| match p {
            PlotArg::N => PlotKind::Negativity,
            PlotArg::I => PlotKind::MutualInfo,
            PlotArg::Both => PlotKind::Both,
        }),
        compare_rindler: args.compare_rindler,
        threads: args.threads,
    };

    let result = run_sweep(&config)?;
    let file = create(&out)?;
    match format {
        Format::Csv => write_csv(file, &result)?,
        Format::Json => write_json(file, &result)?,
    }
    let side = manifest_path(&out);
    write_manifest(create(&side)?, &result.manifest)?;
    eprintln!("wrote {} and {}", out.display(), side.display());
    if let Some(kind) = config.plot {
        for p in plots(&result, &out, kind, config.compare_rindler, config.tail_tol)? {
            eprintln!("wrote {}", p.display());
        }
    }
    for c in &result.curves {
        if !c.failures.is_empty() {
            eprintln!(
                "scenario {} ({}): {} point(s) failed, see manifest",
                c.index,
                c.scenario.label(),
                c.failures.len()
            );
        }
    }
    Ok(())
}
