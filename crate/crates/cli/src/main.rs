mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ringspec::analytic::{enumerate_analytic, weyl_energy, AnalyticModel};
use ringspec::berry::{area_approximant, estimate_geometry, HeatSumSeries};
use ringspec::ccm::{self, balanced_nx, CcmConfig, LsfCache};
use ringspec::conformal::{PowerSeriesMap, DEFAULT_QUAD_N};
use ringspec::exact::annulus_spectrum;
use ringspec::variational::{
    variational_ground_annulus, variational_ground_general, BasisKind, TrialBasis,
};
use ringspec::Spectrum;
use serde_json::json;

use output::{Format, RunManifest};

/// Largest collocation matrix the CLI agrees to build.
const MAX_DIM: usize = 12_000;

#[derive(Parser)]
#[command(
    name = "ringspec",
    version,
    about = "Spectra of quantum rings and annular drums"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact circular-annulus spectrum from cross-product Bessel zeros.
    Exact(ExactArgs),
    /// Conformal collocation spectrum (optionally with eigenfunctions).
    Ccm(CcmArgs),
    /// Resummed analytic spectrum.
    Analytic(AnalyticArgs),
    /// Variational ground-state estimates for growing trial bases.
    Variational(VariationalArgs),
    /// Area, perimeter and constant from a spectrum file.
    Berry(BerryArgs),
    /// Exact area and perimeter of a ring from its map.
    Geometry(GeometryArgs),
    /// Weyl-law energies E_n for n = 1..count.
    Weyl(WeylArgs),
    /// State-by-state relative difference of two spectrum files.
    Compare(CompareArgs),
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct Shape {
    /// Inner radius of the circular annulus a < r < 1.
    #[arg(long)]
    a: Option<f64>,
    /// Map file: {"lx": .., "c": .., "eta": [..]}.
    #[arg(long)]
    map: Option<PathBuf>,
}

impl Shape {
    fn map(&self) -> Result<PowerSeriesMap, Failure> {
        match (&self.a, &self.map) {
            (Some(a), _) => Ok(PowerSeriesMap::annulus(*a)?),
            (_, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                Ok(PowerSeriesMap::from_json(&text)?)
            }
            _ => Err(Failure::usage("either --a or --map is required")),
        }
    }

    fn describe(&self) -> serde_json::Value {
        json!({ "a": self.a, "map": self.map.as_ref().map(|p| p.display().to_string()) })
    }
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    /// Number of states, multiplicity counted.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    count: u64,
    /// Output file; `.json` selects JSON, anything else CSV. Stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CcmArgs {
    #[command(flatten)]
    shape: Shape,
    /// Even; defaults to the grid-balance rule for the chosen ny.
    #[arg(long)]
    nx: Option<u32>,
    #[arg(long, default_value_t = 120)]
    ny: u32,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    count: u64,
    /// Directory for the cached derivative blocks (overrides RINGSPEC_CACHE_DIR).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Write the first K eigenfunctions as `<out>.psi<i>.csv` (u, v, psi).
    #[arg(long, default_value_t = 0)]
    vectors: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyticArgs {
    #[command(flatten)]
    shape: Shape,
    /// Robnik deformation; only with --a.
    #[arg(long, requires = "a")]
    alpha: Option<f64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    count: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Radial,
    Angular,
}

#[derive(Args)]
struct VariationalArgs {
    #[command(flatten)]
    shape: Shape,
    #[arg(long, value_enum)]
    basis: BasisArg,
    /// Largest basis size; every size 1..=n is reported.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    /// Reference ground energy for the gap column (the exact value is used
    /// for --a when absent).
    #[arg(long)]
    reference: Option<f64>,
    #[arg(long, default_value_t = ringspec::variational::DEFAULT_QUAD_N)]
    quad_n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BerryArgs {
    /// Spectrum file (CSV or JSON from this tool, or one energy per line).
    spectrum: PathBuf,
    /// Use only the first N states.
    #[arg(long)]
    states: Option<usize>,
    #[arg(long)]
    area_exact: Option<f64>,
    #[arg(long)]
    perimeter_exact: Option<f64>,
    /// Summary JSON; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Approximant curves A_0..A_3 on a log t-grid around t*.
    #[arg(long)]
    curves: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    curve_points: usize,
}

#[derive(Args)]
struct GeometryArgs {
    #[command(flatten)]
    shape: Shape,
    #[arg(long, default_value_t = DEFAULT_QUAD_N)]
    quad_n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WeylArgs {
    #[command(flatten)]
    shape: Shape,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    count: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Spectrum under test.
    test: PathBuf,
    /// Reference spectrum.
    reference: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Error with its exit status.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<ringspec::Error> for Failure {
    fn from(e: ringspec::Error) -> Self {
        use ringspec::Error::*;
        let code = match &e {
            Input(_) | Domain(_) | Index { .. } => 2,
            Degeneracy(_) => 3,
            Io(_) => 2,
            Accuracy(_) | State(_) | Internal(_) => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<String> for Failure {
    fn from(message: String) -> Self {
        Self::usage(message)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Exact(a) => cmd_exact(a),
        Command::Ccm(a) => cmd_ccm(a),
        Command::Analytic(a) => cmd_analytic(a),
        Command::Variational(a) => cmd_variational(a),
        Command::Berry(a) => cmd_berry(a),
        Command::Geometry(a) => cmd_geometry(a),
        Command::Weyl(a) => cmd_weyl(a),
        Command::Compare(a) => cmd_compare(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("ringspec: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Writes `bytes` to `out` with a manifest sidecar, or to stdout.
fn emit(out: Option<&Path>, bytes: &[u8], mut manifest: RunManifest, embedded: bool) -> Outcome {
    match out {
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes)?;
        }
        Some(path) => {
            output::write_atomic(path, bytes)?;
            if !embedded {
                manifest.outputs.push(path.display().to_string());
                let text = serde_json::to_vec_pretty(&manifest).map_err(|e| e.to_string())?;
                output::write_atomic(&output::manifest_path(path), &text)?;
            }
        }
    }
    Ok(())
}

fn emit_spectrum(out: Option<&Path>, spectrum: &Spectrum, mut manifest: RunManifest) -> Outcome {
    if let Some(path) = out {
        manifest.outputs.push(path.display().to_string());
    }
    match out.map(Format::of) {
        Some(Format::Json) => {
            let bytes = output::spectrum_json(spectrum, &manifest)?;
            emit(out, &bytes, manifest, true)
        }
        _ => {
            let bytes = output::spectrum_csv(spectrum)?;
            emit(out, &bytes, manifest, false)
        }
    }
}

fn cmd_exact(args: ExactArgs) -> Outcome {
    let spectrum = annulus_spectrum(args.a, args.b, args.count as usize)?;
    let manifest = RunManifest::new(
        "exact",
        json!({ "a": args.a, "b": args.b, "count": args.count }),
    );
    emit_spectrum(args.out.as_deref(), &spectrum, manifest)
}

fn cmd_ccm(args: CcmArgs) -> Outcome {
    let map = args.shape.map()?;
    let nx = args.nx.unwrap_or_else(|| balanced_nx(map.lx(), args.ny));
    if nx < 2 || !nx.is_multiple_of(2) || args.ny < 2 || !args.ny.is_multiple_of(2) {
        return Err(Failure::usage(format!(
            "nx and ny must be even and >= 2, got {nx} x {}",
            args.ny
        )));
    }
    let dim = (nx as usize - 1) * (args.ny as usize + 1);
    if dim > MAX_DIM {
        return Err(Failure {
            code: 4,
            message: format!("matrix dimension {dim} exceeds the limit {MAX_DIM}"),
        });
    }
    if args.vectors > 0 && args.out.is_none() {
        return Err(Failure::usage("--vectors needs --out"));
    }
    let cache = match &args.cache_dir {
        Some(dir) => LsfCache::in_dir(dir),
        None => LsfCache::from_env(),
    };
    let config = CcmConfig::new(nx, args.ny, map.clone())?;
    let count = args.count as usize;
    let result = ccm::solve(&config, count, args.vectors > 0, &cache)?;
    eprintln!(
        "ccm: {nx} x {} grid, dimension {dim}, derivative blocks {}",
        args.ny,
        if result.cache_hit {
            "from cache"
        } else {
            "computed"
        }
    );

    let mut manifest = RunManifest::new(
        "ccm",
        json!({
            "shape": args.shape.describe(), "map": map, "nx": nx, "ny": args.ny,
            "count": count, "vectors": args.vectors,
            "cache_dir": cache.dir().map(|d| d.display().to_string()),
        }),
    );
    manifest.cache_hit = Some(result.cache_hit);
    if let Some(p) = &args.shape.map {
        manifest.inputs.push(p.display().to_string());
    }
    if let Some(out) = &args.out {
        for state in 0..args.vectors.min(count) {
            let samples = ccm::sample_wavefunction(&result, state)?;
            let path = out.with_file_name(format!(
                "{}.psi{}.csv",
                out.file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default(),
                state + 1
            ));
            let bytes = output::series_csv(
                &["u", "v", "psi"],
                samples.into_iter().map(|(u, v, p)| vec![u, v, p]),
            );
            output::write_atomic(&path, &bytes)?;
            manifest.outputs.push(path.display().to_string());
        }
    }
    emit_spectrum(args.out.as_deref(), &result.spectrum(), manifest)
}

fn cmd_analytic(args: AnalyticArgs) -> Outcome {
    let model = match (args.shape.a, args.alpha) {
        (Some(a), Some(alpha)) => AnalyticModel::Robnik { a, alpha },
        (Some(a), None) => AnalyticModel::Annulus { a },
        (None, _) => AnalyticModel::Map(args.shape.map()?),
    };
    let spectrum = enumerate_analytic(&model, args.count as usize)?;
    let mut manifest = RunManifest::new(
        "analytic",
        json!({ "shape": args.shape.describe(), "alpha": args.alpha, "count": args.count }),
    );
    if let Some(p) = &args.shape.map {
        manifest.inputs.push(p.display().to_string());
    }
    emit_spectrum(args.out.as_deref(), &spectrum, manifest)
}

fn cmd_variational(args: VariationalArgs) -> Outcome {
    let map = args.shape.map()?;
    let reference = match (args.reference, args.shape.a) {
        (Some(r), _) => Some(r),
        (None, Some(a)) => Some(annulus_spectrum(a, 1.0, 1)?.levels()[0].energy),
        _ => None,
    };
    let mut rows = Vec::new();
    for size in 1..=args.n as usize {
        let basis = match args.basis {
            BasisArg::Radial => TrialBasis::radial(size)?,
            BasisArg::Angular => TrialBasis::angular(size),
        };
        let energy = match args.shape.a {
            Some(a) => variational_ground_annulus(a, basis)?,
            None => variational_ground_general(&map, basis, args.quad_n)?,
        };
        rows.push((size, energy));
    }
    let monotone = rows.windows(2).all(|w| w[1].1 <= w[0].1 * (1.0 + 1e-10));
    eprintln!(
        "variational: {} sizes, non-increasing: {monotone}",
        rows.len()
    );

    let mut text = String::from("n,energy,gap\n");
    for (size, energy) in &rows {
        let gap = reference
            .map(|r| format!("{:?}", (energy - r) / r))
            .unwrap_or_default();
        text.push_str(&format!("{size},{energy:?},{gap}\n"));
    }
    let kind = match args.basis {
        BasisArg::Radial => BasisKind::Radial,
        BasisArg::Angular => BasisKind::Angular,
    };
    let mut manifest = RunManifest::new(
        "variational",
        json!({ "shape": args.shape.describe(), "basis": kind, "n": args.n, "reference": reference, "quad_n": args.quad_n }),
    );
    if let Some(p) = &args.shape.map {
        manifest.inputs.push(p.display().to_string());
    }
    emit(args.out.as_deref(), text.as_bytes(), manifest, false)
}

fn cmd_berry(args: BerryArgs) -> Outcome {
    let spectrum = output::read_spectrum(&args.spectrum)?;
    let mut energies = spectrum.expanded();
    if let Some(n) = args.states {
        energies.truncate(n);
    }
    let series = HeatSumSeries::new(energies)?;
    let est = estimate_geometry(&series)?;
    let rel = |x: f64, exact: Option<f64>| exact.map(|e| (x - e) / e);

    let mut manifest = RunManifest::new(
        "berry",
        json!({
            "spectrum": args.spectrum.display().to_string(), "states": series.energies().len(),
            "area_exact": args.area_exact, "perimeter_exact": args.perimeter_exact,
            "curve_points": args.curve_points,
        }),
    );
    manifest.inputs.push(args.spectrum.display().to_string());

    if let Some(path) = &args.curves {
        let n = args.curve_points.max(2);
        let (lo, hi) = ((est.t_star / 20.0).ln(), (20.0 * est.t_star).ln());
        let mut ts: Vec<f64> = (0..n)
            .map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp())
            .collect();
        ts.push(est.t_star);
        ts.sort_by(f64::total_cmp);
        let mut rows = Vec::with_capacity(ts.len());
        for t in ts {
            let mut row = vec![t];
            for m in 0..4 {
                row.push(area_approximant(&series, m, t)?);
            }
            row.push(if t == est.t_star { 1.0 } else { 0.0 });
            rows.push(row);
        }
        output::write_atomic(
            path,
            &output::series_csv(&["t", "a0", "a1", "a2", "a3", "t_star"], rows),
        )?;
        manifest.outputs.push(path.display().to_string());
    }
    if let Some(path) = &args.out {
        manifest.outputs.push(path.display().to_string());
    }
    let summary = json!({
        "manifest": manifest,
        "t_star": est.t_star,
        "area_approximants": est.area_approximants,
        "area": est.area,
        "perimeter": est.perimeter,
        "constant": est.constant,
        "area_rel_error": rel(est.area, args.area_exact),
        "perimeter_rel_error": rel(est.perimeter, args.perimeter_exact),
    });
    let mut bytes = serde_json::to_vec_pretty(&summary).map_err(|e| e.to_string())?;
    bytes.push(b'\n');
    emit(args.out.as_deref(), &bytes, manifest, true)
}

fn cmd_geometry(args: GeometryArgs) -> Outcome {
    let map = args.shape.map()?;
    let geom = map.geometry(args.quad_n)?;
    let mut manifest = RunManifest::new(
        "geometry",
        json!({ "shape": args.shape.describe(), "quad_n": args.quad_n }),
    );
    if let Some(p) = &args.shape.map {
        manifest.inputs.push(p.display().to_string());
    }
    if let Some(path) = &args.out {
        manifest.outputs.push(path.display().to_string());
    }
    let summary = json!({
        "manifest": manifest,
        "map": map,
        "area": geom.area,
        "perimeter": geom.perimeter_total,
        "perimeter_outer": geom.perimeter_outer,
        "perimeter_inner": geom.perimeter_inner,
        "constant": geom.euler_constant,
    });
    let mut bytes = serde_json::to_vec_pretty(&summary).map_err(|e| e.to_string())?;
    bytes.push(b'\n');
    emit(args.out.as_deref(), &bytes, manifest, true)
}

fn cmd_weyl(args: WeylArgs) -> Outcome {
    let geom = args.shape.map()?.geometry(DEFAULT_QUAD_N)?;
    let rows = (1..=args.count).map(|n| (n as usize, vec![weyl_energy(n, &geom)]));
    let bytes = output::indexed_csv(&["index", "energy"], rows);
    let manifest = RunManifest::new(
        "weyl",
        json!({ "shape": args.shape.describe(), "count": args.count }),
    );
    emit(args.out.as_deref(), &bytes, manifest, false)
}

fn cmd_compare(args: CompareArgs) -> Outcome {
    let test = output::read_spectrum(&args.test)?.expanded();
    let reference = output::read_spectrum(&args.reference)?.expanded();
    let rows = test
        .iter()
        .zip(&reference)
        .enumerate()
        .map(|(i, (t, r))| (i + 1, vec![*t, *r, (t - r) / r]));
    let bytes = output::indexed_csv(&["index", "energy", "reference", "rel_error"], rows);
    let mut manifest = RunManifest::new(
        "compare",
        json!({ "test": args.test, "reference": args.reference }),
    );
    manifest.inputs = vec![
        args.test.display().to_string(),
        args.reference.display().to_string(),
    ];
    emit(args.out.as_deref(), &bytes, manifest, false)
}
