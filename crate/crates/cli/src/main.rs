//! `landscan` command-line interface.
//!
//! Subcommands wire the library end to end: `detect` runs the full
//! pipeline on a DSM/DTM pair, `baseline` runs the quadtree-variance
//! comparison method, `synth` generates seeded synthetic terrain with
//! ground truth, `eval` scores a prediction, `slope` exports a slope
//! raster, and `render` turns a class map into a PPM image.
//!
//! Every run echoes its fully resolved parameter set to standard error so
//! results stay auditable. Failures exit with status 1 and a message
//! naming the failing stage (parse/align/compute/write).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use landscan_core::{
    baseline_detect, detect, evaluate, generate, parse_asc, slope_degrees, sweep_var_thresh,
    timed_run, write_asc, BaselineParams, BitMask, DemGrid, DetectionParams, LandingMap,
    SynthParams,
};

#[derive(Parser)]
#[command(
    name = "landscan",
    version,
    about = "Potential landing-site detection from digital elevation models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect landing sites from a DSM/DTM pair
    Detect(DetectArgs),
    /// Run the quadtree-variance baseline detector on a DEM
    Baseline(BaselineArgs),
    /// Generate synthetic DTM/DSM/ground-truth rasters
    Synth(SynthArgs),
    /// Score a prediction map against a ground-truth mask
    Eval(EvalArgs),
    /// Export the slope map of a DEM in degrees
    Slope(SlopeArgs),
    /// Render a class map as a binary PPM image
    Render(RenderArgs),
}

#[derive(Args)]
struct DetectArgs {
    /// Surface model (Esri ASCII grid)
    #[arg(long)]
    dsm: PathBuf,
    /// Bare-earth terrain model, aligned with the DSM
    #[arg(long)]
    dtm: PathBuf,
    /// Output class map (0 terrain, 1 landing, 2 obstacle)
    #[arg(long)]
    out: PathBuf,
    /// Maximum landable slope in degrees (inclusive)
    #[arg(long, default_value_t = 5.0)]
    slope_thresh: f64,
    /// Minimum obstacle height above bare terrain in meters
    #[arg(long, default_value_t = 0.5)]
    height_thresh: f64,
    /// Minimum landing-region area in square meters
    #[arg(long, default_value_t = 25.0)]
    min_area: f64,
    /// Skip the re-filter after obstacle removal (fragments below the
    /// area floor may then survive)
    #[arg(long)]
    no_strict_area: bool,
    /// Also render the map to this PPM path
    #[arg(long)]
    render: Option<PathBuf>,
}

#[derive(Args)]
struct BaselineArgs {
    /// Input DEM (the baseline has no obstacle notion; pass the DSM for a
    /// fair comparison)
    #[arg(long)]
    dsm: PathBuf,
    /// Output class map (0 terrain, 1 landing; never 2)
    #[arg(long)]
    out: PathBuf,
    /// Partition acceptance: maximum height variance in square meters
    #[arg(long, default_value_t = 1.0)]
    var_thresh: f64,
    /// Candidate variance thresholds; the best-precision one (ties to the
    /// smaller) is chosen against --gt
    #[arg(long, value_delimiter = ',', num_args = 1.., requires = "gt", conflicts_with = "var_thresh")]
    var_sweep: Option<Vec<f64>>,
    /// Merge tolerance on partition mean heights, meters
    #[arg(long, default_value_t = 1.0)]
    height_tol: f64,
    /// Stop splitting once a partition side is at most this many pixels
    #[arg(long, default_value_t = 4)]
    min_leaf: usize,
    /// Minimum landing-region area in square meters
    #[arg(long, default_value_t = 25.0)]
    min_area: f64,
    /// Ground-truth mask (0/1 grid); enables scoring and the sweep
    #[arg(long)]
    gt: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// Generator seed; equal seeds give byte-identical outputs
    #[arg(long)]
    seed: u64,
    /// Pixels per side (at least 9)
    #[arg(long)]
    size: usize,
    /// Output prefix; writes <prefix>_dtm.asc, <prefix>_dsm.asc, <prefix>_gt.asc
    #[arg(long)]
    out_prefix: String,
    /// Meters per pixel
    #[arg(long, default_value_t = 1.2)]
    cellsize: f64,
    /// Relief amplitude of the coarsest octave, meters
    #[arg(long, default_value_t = 80.0)]
    relief: f64,
    /// Per-octave amplitude decay in (0,1); higher is rougher
    #[arg(long, default_value_t = 0.55)]
    roughness: f64,
    /// Expected fraction of the map under vegetation, in [0,1]
    #[arg(long, default_value_t = 0.1)]
    veg_density: f64,
    /// Canopy height range min,max in meters
    #[arg(long, value_parser = parse_height_range, default_value = "2.0,15.0")]
    veg_height: (f64, f64),
    /// Ground-truth slope ceiling, degrees
    #[arg(long, default_value_t = 5.0)]
    gt_slope: f64,
    /// Ground-truth minimum region area, square meters
    #[arg(long, default_value_t = 25.0)]
    gt_min_area: f64,
}

#[derive(Args)]
struct EvalArgs {
    /// Prediction class map (0/1/2 grid)
    #[arg(long)]
    pred: PathBuf,
    /// Ground-truth mask (0/1 grid)
    #[arg(long)]
    gt: PathBuf,
}

#[derive(Args)]
struct SlopeArgs {
    /// Input DEM
    #[arg(long)]
    dem: PathBuf,
    /// Output slope raster (degrees; undefined cells as nodata)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RenderArgs {
    /// Input class map (0/1/2 grid)
    #[arg(long)]
    map: PathBuf,
    /// Output PPM path
    #[arg(long)]
    out: PathBuf,
}

fn parse_height_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| format!("expected min,max but got `{s}`"))?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("bad min: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("bad max: {e}"))?;
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Detect(args) => cmd_detect(args),
        Command::Baseline(args) => cmd_baseline(args),
        Command::Synth(args) => cmd_synth(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Slope(args) => cmd_slope(args),
        Command::Render(args) => cmd_render(args),
    }
}

fn read_grid(path: &Path) -> anyhow::Result<DemGrid> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("parse: cannot read {}", path.display()))?;
    parse_asc(&text).with_context(|| format!("parse: {}", path.display()))
}

fn write_grid(path: &Path, grid: &DemGrid) -> anyhow::Result<()> {
    fs::write(path, write_asc(grid)).with_context(|| format!("write: {}", path.display()))
}

fn read_class_map(path: &Path) -> anyhow::Result<LandingMap> {
    let grid = read_grid(path)?;
    LandingMap::from_grid(&grid).with_context(|| format!("parse: {}", path.display()))
}

fn read_mask(path: &Path) -> anyhow::Result<BitMask> {
    let grid = read_grid(path)?;
    BitMask::from_grid(&grid).with_context(|| format!("parse: {}", path.display()))
}

fn cmd_detect(args: DetectArgs) -> anyhow::Result<()> {
    let params = DetectionParams {
        slope_thresh: args.slope_thresh,
        height_thresh: args.height_thresh,
        min_area: args.min_area,
        strict_area: !args.no_strict_area,
    };
    eprintln!(
        "config: detect dsm={} dtm={} out={} slope_thresh={} height_thresh={} min_area={} strict_area={} render={}",
        args.dsm.display(),
        args.dtm.display(),
        args.out.display(),
        params.slope_thresh,
        params.height_thresh,
        params.min_area,
        params.strict_area,
        args.render.as_ref().map_or_else(|| "-".into(), |p| p.display().to_string()),
    );

    let dsm = read_grid(&args.dsm)?;
    let dtm = read_grid(&args.dtm)?;
    dsm.header()
        .ensure_aligned(dtm.header())
        .context("align: dsm vs dtm")?;

    let (map, seconds) = timed_run(|| detect(&dsm, &dtm, &params)).context("compute")?;
    write_grid(&args.out, &map.to_grid())?;
    if let Some(ppm) = &args.render {
        fs::write(ppm, map.to_ppm()).with_context(|| format!("write: {}", ppm.display()))?;
    }
    println!("seconds={seconds}");
    Ok(())
}

fn cmd_baseline(args: BaselineArgs) -> anyhow::Result<()> {
    let base = BaselineParams {
        var_thresh: args.var_thresh,
        height_tol: args.height_tol,
        min_leaf: args.min_leaf,
        min_area: args.min_area,
    };
    eprintln!(
        "config: baseline dsm={} out={} var_thresh={} var_sweep={} height_tol={} min_leaf={} min_area={} gt={}",
        args.dsm.display(),
        args.out.display(),
        base.var_thresh,
        args.var_sweep.as_ref().map_or_else(
            || "-".into(),
            |v| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
        ),
        base.height_tol,
        base.min_leaf,
        base.min_area,
        args.gt.as_ref().map_or_else(|| "-".into(), |p| p.display().to_string()),
    );

    let dem = read_grid(&args.dsm)?;
    let gt = args.gt.as_deref().map(read_mask).transpose()?;
    if let Some(gt) = &gt {
        dem.header()
            .ensure_aligned(gt.header())
            .context("align: dem vs gt")?;
    }

    let map = if let Some(candidates) = &args.var_sweep {
        let gt = gt.as_ref().expect("clap enforces --gt with --var-sweep");
        let (outcome, seconds) =
            timed_run(|| sweep_var_thresh(&dem, gt, candidates, &base)).context("compute")?;
        for (var_thresh, report) in &outcome.reports {
            println!(
                "candidate var_thresh={} {}",
                var_thresh,
                report.machine_line()
            );
        }
        println!("chosen var_thresh={}", outcome.chosen);
        println!("seconds={seconds}");
        outcome.chosen_map
    } else {
        let (map, seconds) = timed_run(|| baseline_detect(&dem, &base)).context("compute")?;
        if let Some(gt) = &gt {
            let mut report = evaluate(&map, gt).context("compute")?;
            report.elapsed_seconds = seconds;
            println!("{}", report.machine_line());
        }
        println!("seconds={seconds}");
        map
    };
    write_grid(&args.out, &map.to_grid())
}

fn cmd_synth(args: SynthArgs) -> anyhow::Result<()> {
    let params = SynthParams {
        seed: args.seed,
        size: args.size,
        cellsize: args.cellsize,
        relief_amplitude: args.relief,
        roughness: args.roughness,
        vegetation_density: args.veg_density,
        vegetation_height: args.veg_height,
        gt_slope_thresh: args.gt_slope,
        gt_min_area: args.gt_min_area,
    };
    eprintln!(
        "config: synth seed={} size={} out_prefix={} cellsize={} relief={} roughness={} veg_density={} veg_height={},{} gt_slope={} gt_min_area={}",
        params.seed,
        params.size,
        args.out_prefix,
        params.cellsize,
        params.relief_amplitude,
        params.roughness,
        params.vegetation_density,
        params.vegetation_height.0,
        params.vegetation_height.1,
        params.gt_slope_thresh,
        params.gt_min_area,
    );

    let (dtm, dsm, gt) = generate::<f64>(&params).context("compute")?;
    write_grid(&PathBuf::from(format!("{}_dtm.asc", args.out_prefix)), &dtm)?;
    write_grid(&PathBuf::from(format!("{}_dsm.asc", args.out_prefix)), &dsm)?;
    write_grid(
        &PathBuf::from(format!("{}_gt.asc", args.out_prefix)),
        &gt.to_grid(),
    )?;
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> anyhow::Result<()> {
    let echo = format!("eval pred={} gt={}", args.pred.display(), args.gt.display());
    eprintln!("config: {echo}");

    let pred = read_class_map(&args.pred)?;
    let gt = read_mask(&args.gt)?;
    pred.header()
        .ensure_aligned(gt.header())
        .context("align: pred vs gt")?;

    let (mut report, seconds) = timed_run(|| evaluate(&pred, &gt)).context("compute")?;
    report.elapsed_seconds = seconds;
    report.params_echo = echo;
    println!("{}", report.human_text());
    println!("{}", report.machine_line());
    Ok(())
}

fn cmd_slope(args: SlopeArgs) -> anyhow::Result<()> {
    eprintln!(
        "config: slope dem={} out={}",
        args.dem.display(),
        args.out.display()
    );
    let dem = read_grid(&args.dem)?;
    let (slope, seconds) = timed_run(|| slope_degrees(&dem)).context("compute")?;
    write_grid(&args.out, &slope.to_grid())?;
    println!("seconds={seconds}");
    Ok(())
}

fn cmd_render(args: RenderArgs) -> anyhow::Result<()> {
    eprintln!(
        "config: render map={} out={}",
        args.map.display(),
        args.out.display()
    );
    let map = read_class_map(&args.map)?;
    fs::write(&args.out, map.to_ppm()).with_context(|| format!("write: {}", args.out.display()))?;
    Ok(())
}
