//! The `edgeaware` command-line tool: reproducible generation, filtering,
//! parameter sweeps and metric reports.
//!
//! Every run that writes an image also writes a `.manifest` sidecar naming
//! the exact parameters, seeds and filter statistics that produced it, so an
//! output can always be traced back to its command line. Outputs are
//! deterministic for fixed flags and seeds (manifests record wall time,
//! which is the one line expected to vary between reruns).
//!
//! `EDGEAWARE_THREADS` caps worker parallelism; `0` forces sequential
//! execution. Parameter names mirror the usual symbols (`--lambda`,
//! `--sigma-s`, `--sigma-r`, `--hs`, `--hr`, `--tau`, `--iters`).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::bilateral::{self, BilateralConfig, PathMetric};
use crate::diffusion::{self, DiffusionConfig, Preconditioner};
use crate::error::{Error, Result};
use crate::imgcore::{
    generate_challenge, load_png, regions_from_sidecar, regions_to_sidecar, save_png,
    ChallengeSpec, Image, Region,
};
use crate::meanshift::{self, MeanShiftConfig};
use crate::metrics::{metric_report, MetricReport, DEFAULT_NOVEL_TOLERANCE};
use crate::report::FilterReport;

#[derive(Debug, Parser)]
#[command(name = "edgeaware", version, about = "Discontinuity-preserving smoothing filters with edge-aware variants")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate the synthetic challenge test image.
    Generate(GenerateArgs),
    /// Run one filter over an input PNG.
    Filter(FilterArgs),
    /// Run a parameter grid, producing per-cell images, a montage and a CSV.
    Sweep(SweepArgs),
    /// Compute quality metrics for an image.
    Metrics(MetricsArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// Square size; shorthand for equal --width and --height.
    #[arg(long)]
    size: Option<usize>,
    #[arg(long, default_value_t = 256)]
    width: usize,
    #[arg(long, default_value_t = 256)]
    height: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Noise std-dev in the six control rectangles.
    #[arg(long, default_value_t = 6.0)]
    noise_control: f64,
    /// Noise amplitude in the noisy rectangles and background blobs.
    #[arg(long, default_value_t = 55.0)]
    noise_blocks: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct IoArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MetricArg {
    Sum,
    Max,
}

impl From<MetricArg> for PathMetric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Sum => PathMetric::SumPath,
            MetricArg::Max => PathMetric::MaxPath,
        }
    }
}

#[derive(Debug, Args)]
struct FilterArgs {
    #[command(subcommand)]
    algorithm: FilterCommand,
}

#[derive(Debug, Subcommand)]
enum FilterCommand {
    /// Variable conductance diffusion.
    Diffuse(DiffuseArgs),
    /// Bilateral filter (standard or shortest-path).
    Bilateral(BilateralArgs),
    /// Mean shift filter.
    Meanshift(MeanShiftArgs),
}

#[derive(Debug, Args)]
struct DiffuseArgs {
    #[arg(long, default_value_t = 0.002)]
    lambda: f64,
    #[arg(long, default_value_t = 5)]
    iters: u32,
    /// Spatial std-dev of the derivative preconditioner.
    #[arg(long, default_value_t = 0.5)]
    sigma_s: f64,
    /// Use the bilateral preconditioner instead of the Gaussian.
    #[arg(long)]
    edge_aware: bool,
    /// Range std-dev of the bilateral preconditioner (edge-aware only).
    #[arg(long, default_value_t = 55.0)]
    sigma_r: f64,
    /// Bilateral preconditioner window (edge-aware only).
    #[arg(long, default_value_t = 5)]
    window: usize,
    #[arg(long, default_value_t = 0.25)]
    time_step: f64,
    #[command(flatten)]
    io: IoArgs,
}

impl DiffuseArgs {
    fn config(&self) -> DiffusionConfig {
        DiffusionConfig {
            lambda: self.lambda,
            iterations: self.iters,
            preconditioner: if self.edge_aware {
                Preconditioner::Bilateral {
                    sigma_s: self.sigma_s,
                    sigma_r: self.sigma_r,
                    window: self.window,
                }
            } else {
                Preconditioner::Gaussian { sigma_s: self.sigma_s }
            },
            time_step: self.time_step,
        }
    }

    fn params(&self) -> Vec<(String, String)> {
        vec![
            ("algorithm".into(), "diffuse".into()),
            ("edge_aware".into(), self.edge_aware.to_string()),
            ("lambda".into(), self.lambda.to_string()),
            ("iters".into(), self.iters.to_string()),
            ("sigma_s".into(), self.sigma_s.to_string()),
            ("sigma_r".into(), self.sigma_r.to_string()),
            ("window".into(), self.window.to_string()),
            ("time_step".into(), self.time_step.to_string()),
        ]
    }
}

#[derive(Debug, Args)]
struct BilateralArgs {
    #[arg(long, default_value_t = 10.0)]
    sigma_s: f64,
    #[arg(long, default_value_t = 55.0)]
    sigma_r: f64,
    /// Window half-width; defaults to ceil(3 sigma-s) in standard mode and
    /// 20 in edge-aware mode.
    #[arg(long)]
    cutoff: Option<usize>,
    /// Use the shortest-path filter instead of the standard one.
    #[arg(long)]
    edge_aware: bool,
    /// Passes of the edge-aware filter.
    #[arg(long, default_value_t = 1)]
    iters: u32,
    /// Path cost: sum of edge weights, or the maximum single edge.
    #[arg(long, value_enum, default_value_t = MetricArg::Sum)]
    metric: MetricArg,
    #[command(flatten)]
    io: IoArgs,
}

impl BilateralArgs {
    fn config(&self) -> BilateralConfig {
        let mut cfg = if self.edge_aware {
            BilateralConfig::edge_aware(self.sigma_r)
        } else {
            BilateralConfig::standard(self.sigma_s, self.sigma_r)
        };
        cfg.sigma_s = self.sigma_s;
        cfg.iterations = self.iters;
        cfg.metric = self.metric.into();
        if let Some(c) = self.cutoff {
            cfg.spatial_cutoff = c;
        }
        cfg
    }

    fn params(&self) -> Vec<(String, String)> {
        let cfg = self.config();
        vec![
            ("algorithm".into(), "bilateral".into()),
            ("edge_aware".into(), self.edge_aware.to_string()),
            ("sigma_s".into(), self.sigma_s.to_string()),
            ("sigma_r".into(), self.sigma_r.to_string()),
            ("cutoff".into(), cfg.spatial_cutoff.to_string()),
            ("iters".into(), self.iters.to_string()),
            (
                "metric".into(),
                match cfg.metric {
                    PathMetric::SumPath => "sum".into(),
                    PathMetric::MaxPath => "max".into(),
                },
            ),
        ]
    }
}

#[derive(Debug, Args)]
struct MeanShiftArgs {
    #[arg(long)]
    hs: f64,
    #[arg(long)]
    hr: f64,
    #[arg(long, default_value_t = 0.5)]
    tau: f64,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    #[arg(long, default_value_t = 100)]
    max_iters: u32,
    /// Snap the spatial mean to the nearest similar-color pixel each step.
    #[arg(long)]
    edge_aware: bool,
    /// Disable the (order-dependent) mode path cache.
    #[arg(long)]
    no_cache: bool,
    #[command(flatten)]
    io: IoArgs,
}

impl MeanShiftArgs {
    fn config(&self) -> MeanShiftConfig {
        MeanShiftConfig {
            h_s: self.hs,
            h_r: self.hr,
            tau: self.tau,
            convergence_eps: self.eps,
            max_iterations: self.max_iters,
            edge_aware: self.edge_aware,
            use_cache: !self.no_cache,
        }
    }

    fn params(&self) -> Vec<(String, String)> {
        vec![
            ("algorithm".into(), "meanshift".into()),
            ("edge_aware".into(), self.edge_aware.to_string()),
            ("hs".into(), self.hs.to_string()),
            ("hr".into(), self.hr.to_string()),
            ("tau".into(), self.tau.to_string()),
            ("eps".into(), self.eps.to_string()),
            ("max_iters".into(), self.max_iters.to_string()),
            ("use_cache".into(), (!self.no_cache).to_string()),
        ]
    }
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(subcommand)]
    grid: SweepCommand,
}

#[derive(Debug, Subcommand)]
enum SweepCommand {
    /// Grid over lambda (rows) x iterations (columns).
    Diffuse(DiffuseSweepArgs),
    /// Grid over sigma-s or iters (rows) x sigma-r (columns).
    Bilateral(BilateralSweepArgs),
    /// Grid over hr (rows) x hs (columns).
    Meanshift(MeanShiftSweepArgs),
}

#[derive(Debug, Args)]
struct SweepIoArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct DiffuseSweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.0005,0.0105,0.05")]
    lambdas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
    iters_list: Vec<u32>,
    #[arg(long, default_value_t = 0.5)]
    sigma_s: f64,
    #[arg(long)]
    edge_aware: bool,
    #[arg(long, default_value_t = 55.0)]
    sigma_r: f64,
    #[arg(long, default_value_t = 5)]
    window: usize,
    #[command(flatten)]
    io: SweepIoArgs,
}

#[derive(Debug, Args)]
struct BilateralSweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "20,35,50,65,80")]
    sigma_r_list: Vec<f64>,
    /// Row parameter in standard mode.
    #[arg(long, value_delimiter = ',', default_value = "5,10,15")]
    sigma_s_list: Vec<f64>,
    /// Row parameter in edge-aware mode.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    iters_list: Vec<u32>,
    #[arg(long)]
    edge_aware: bool,
    #[arg(long, value_enum, default_value_t = MetricArg::Sum)]
    metric: MetricArg,
    #[command(flatten)]
    io: SweepIoArgs,
}

#[derive(Debug, Args)]
struct MeanShiftSweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "30,60,90")]
    hr_list: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "3,5,7,9")]
    hs_list: Vec<f64>,
    #[arg(long)]
    edge_aware: bool,
    #[arg(long)]
    no_cache: bool,
    #[command(flatten)]
    io: SweepIoArgs,
}

#[derive(Debug, Args)]
struct MetricsArgs {
    #[arg(long)]
    test: PathBuf,
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Region sidecar (`name = x,y,w,h` lines) for per-region scores.
    #[arg(long)]
    regions: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_NOVEL_TOLERANCE)]
    novel_tolerance: f64,
    /// Output base path; writes `<out>.txt` and `<out>.csv`. Defaults to the
    /// test image path with its extension dropped plus `.metrics`.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Entry point for the `edgeaware` binary.
pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    init_thread_pool();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn init_thread_pool() {
    if let Ok(v) = std::env::var("EDGEAWARE_THREADS") {
        let n: usize = v.trim().parse().unwrap_or(0);
        // 0 means sequential; rayon wants at least one worker.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(args) => cmd_generate(&args),
        Command::Filter(args) => cmd_filter(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Metrics(args) => cmd_metrics(&args),
    }
}

/// Manifest sidecar accompanying every generated or filtered image.
struct RunManifest {
    command_line: String,
    params: Vec<(String, String)>,
    input: Option<PathBuf>,
    output: PathBuf,
    wall_time: Duration,
    stats: Vec<(String, String)>,
}

impl RunManifest {
    fn write(&self) -> Result<()> {
        let path = sibling(&self.output, "manifest");
        let mut text = String::new();
        text.push_str(&format!("command = {}\n", self.command_line));
        for (k, v) in &self.params {
            text.push_str(&format!("{k} = {v}\n"));
        }
        if let Some(input) = &self.input {
            text.push_str(&format!("input = {}\n", input.display()));
        }
        text.push_str(&format!("output = {}\n", self.output.display()));
        for (k, v) in &self.stats {
            text.push_str(&format!("stat.{k} = {v}\n"));
        }
        text.push_str(&format!("wall_time_ms = {:.3}\n", self.wall_time.as_secs_f64() * 1e3));
        std::fs::write(&path, text).map_err(|e| Error::io(path, e))
    }
}

/// Replaces the extension of `path` with `ext`.
fn sibling(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

fn command_line() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

fn cmd_generate(args: &GenerateArgs) -> Result<()> {
    let (width, height) = match args.size {
        Some(s) => (s, s),
        None => (args.width, args.height),
    };
    let spec = ChallengeSpec {
        width,
        height,
        seed: args.seed,
        noise_sigma_control: args.noise_control,
        noise_amplitude_blocks: args.noise_blocks,
    };
    let started = std::time::Instant::now();
    let challenge = generate_challenge(&spec)?;
    save_png(&challenge.image, &args.out)?;
    let regions_path = sibling(&args.out, "regions");
    std::fs::write(&regions_path, regions_to_sidecar(&challenge.regions))
        .map_err(|e| Error::io(&regions_path, e))?;
    RunManifest {
        command_line: command_line(),
        params: vec![
            ("width".into(), width.to_string()),
            ("height".into(), height.to_string()),
            ("seed".into(), args.seed.to_string()),
            ("noise_control".into(), args.noise_control.to_string()),
            ("noise_blocks".into(), args.noise_blocks.to_string()),
        ],
        input: None,
        output: args.out.clone(),
        wall_time: started.elapsed(),
        stats: vec![("regions".into(), challenge.regions.len().to_string())],
    }
    .write()?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn run_filter_command(cmd: &FilterCommand, input: &Image) -> Result<(FilterReport, Vec<(String, String)>)> {
    match cmd {
        FilterCommand::Diffuse(a) => Ok((diffusion::diffuse(input, &a.config())?, a.params())),
        FilterCommand::Bilateral(a) => {
            let report = if a.edge_aware {
                bilateral::bilateral_edge_aware(input, &a.config())?
            } else {
                bilateral::bilateral_standard(input, &a.config())?
            };
            Ok((report, a.params()))
        }
        FilterCommand::Meanshift(a) => {
            Ok((meanshift::mean_shift_filter(input, &a.config())?, a.params()))
        }
    }
}

fn cmd_filter(args: &FilterArgs) -> Result<()> {
    let io = match &args.algorithm {
        FilterCommand::Diffuse(a) => &a.io,
        FilterCommand::Bilateral(a) => &a.io,
        FilterCommand::Meanshift(a) => &a.io,
    };
    let input = load_png(&io.input)?;
    let (report, params) = run_filter_command(&args.algorithm, &input)?;
    save_png(&report.image, &io.out)?;
    RunManifest {
        command_line: command_line(),
        params,
        input: Some(io.input.clone()),
        output: io.out.clone(),
        wall_time: report.elapsed,
        stats: report.stats.manifest_lines(),
    }
    .write()?;
    println!("wrote {}", io.out.display());
    Ok(())
}

/// One sweep cell: axis labels/values plus the filter run for them.
struct SweepCell {
    row_label: (String, String),
    col_label: (String, String),
    file_stem: String,
    report: FilterReport,
}

fn require_grid<T>(name: &str, list: &[T]) -> Result<()> {
    if list.is_empty() {
        return Err(Error::Param(format!("{name} must list at least one value")));
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let (io, rows, cols): (&SweepIoArgs, usize, usize) = match &args.grid {
        SweepCommand::Diffuse(a) => {
            require_grid("--lambdas", &a.lambdas)?;
            require_grid("--iters-list", &a.iters_list)?;
            (&a.io, a.lambdas.len(), a.iters_list.len())
        }
        SweepCommand::Bilateral(a) => {
            require_grid("--sigma-r-list", &a.sigma_r_list)?;
            if a.edge_aware {
                require_grid("--iters-list", &a.iters_list)?;
                (&a.io, a.iters_list.len(), a.sigma_r_list.len())
            } else {
                require_grid("--sigma-s-list", &a.sigma_s_list)?;
                (&a.io, a.sigma_s_list.len(), a.sigma_r_list.len())
            }
        }
        SweepCommand::Meanshift(a) => {
            require_grid("--hr-list", &a.hr_list)?;
            require_grid("--hs-list", &a.hs_list)?;
            (&a.io, a.hr_list.len(), a.hs_list.len())
        }
    };

    let input = load_png(&io.input)?;
    std::fs::create_dir_all(&io.out_dir).map_err(|e| Error::io(&io.out_dir, e))?;
    let started = std::time::Instant::now();

    // Run the grid cells in parallel; the indexed collect keeps them in
    // row-major grid order.
    let jobs: Vec<(usize, usize)> = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| (r, c)))
        .collect();
    let cells: Vec<SweepCell> = jobs
        .par_iter()
        .map(|&(r, c)| run_sweep_cell(&args.grid, &input, r, c))
        .collect::<Result<Vec<_>>>()?;

    // Per-cell PNGs + metrics CSV, in grid order.
    let csv_path = io.out_dir.join("metrics.csv");
    let mut csv = csv::Writer::from_path(&csv_path).map_err(csv_error(&csv_path))?;
    let mut header = vec!["row_param".to_string(), "row_value".to_string(), "col_param".to_string(), "col_value".to_string()];
    header.extend(MetricReport::csv_header());
    csv.write_record(&header).map_err(csv_error(&csv_path))?;
    for cell in &cells {
        let png = io.out_dir.join(format!("{}.png", cell.file_stem));
        save_png(&cell.report.image, &png)?;
        let metrics = metric_report(&cell.report.image, Some(&input), None, DEFAULT_NOVEL_TOLERANCE)?;
        let mut record = vec![
            cell.row_label.0.clone(),
            cell.row_label.1.clone(),
            cell.col_label.0.clone(),
            cell.col_label.1.clone(),
        ];
        record.extend(metrics.csv_row());
        csv.write_record(&record).map_err(csv_error(&csv_path))?;
    }
    csv.flush().map_err(|e| Error::io(&csv_path, e))?;

    // Contact-sheet montage, rows = first swept parameter.
    let montage = montage(
        &cells.iter().map(|c| &c.report.image).collect::<Vec<_>>(),
        rows,
        cols,
    );
    let montage_path = io.out_dir.join("montage.png");
    save_png(&montage, &montage_path)?;

    RunManifest {
        command_line: command_line(),
        params: vec![
            ("rows".into(), rows.to_string()),
            ("cols".into(), cols.to_string()),
        ],
        input: Some(io.input.clone()),
        output: montage_path,
        wall_time: started.elapsed(),
        stats: vec![("cells".into(), (rows * cols).to_string())],
    }
    .write()?;
    println!("wrote {} cells + montage + metrics.csv to {}", rows * cols, io.out_dir.display());
    Ok(())
}

fn csv_error(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Param(format!("csv write failed: {other:?}")),
    }
}

fn sweep_cell_stem(grid: &SweepCommand, r: usize, c: usize) -> String {
    match grid {
        SweepCommand::Diffuse(a) => {
            format!("diffuse_lambda{}_i{}", a.lambdas[r], a.iters_list[c])
        }
        SweepCommand::Bilateral(a) => {
            if a.edge_aware {
                format!("bilateral_i{}_sigmaR{}", a.iters_list[r], a.sigma_r_list[c])
            } else {
                format!("bilateral_sigmaS{}_sigmaR{}", a.sigma_s_list[r], a.sigma_r_list[c])
            }
        }
        SweepCommand::Meanshift(a) => {
            format!("meanshift_hr{}_hs{}", a.hr_list[r], a.hs_list[c])
        }
    }
}

fn run_sweep_cell(grid: &SweepCommand, input: &Image, r: usize, c: usize) -> Result<SweepCell> {
    let stem = sweep_cell_stem(grid, r, c);
    let (row_label, col_label, report) = match grid {
        SweepCommand::Diffuse(a) => {
            let cfg = DiffusionConfig {
                lambda: a.lambdas[r],
                iterations: a.iters_list[c],
                preconditioner: if a.edge_aware {
                    Preconditioner::Bilateral {
                        sigma_s: a.sigma_s,
                        sigma_r: a.sigma_r,
                        window: a.window,
                    }
                } else {
                    Preconditioner::Gaussian { sigma_s: a.sigma_s }
                },
                time_step: 0.25,
            };
            (
                ("lambda".to_string(), a.lambdas[r].to_string()),
                ("iters".to_string(), a.iters_list[c].to_string()),
                diffusion::diffuse(input, &cfg)?,
            )
        }
        SweepCommand::Bilateral(a) => {
            if a.edge_aware {
                let mut cfg = BilateralConfig::edge_aware(a.sigma_r_list[c]);
                cfg.iterations = a.iters_list[r];
                cfg.metric = a.metric.into();
                (
                    ("iters".to_string(), a.iters_list[r].to_string()),
                    ("sigma_r".to_string(), a.sigma_r_list[c].to_string()),
                    bilateral::bilateral_edge_aware(input, &cfg)?,
                )
            } else {
                let cfg = BilateralConfig::standard(a.sigma_s_list[r], a.sigma_r_list[c]);
                (
                    ("sigma_s".to_string(), a.sigma_s_list[r].to_string()),
                    ("sigma_r".to_string(), a.sigma_r_list[c].to_string()),
                    bilateral::bilateral_standard(input, &cfg)?,
                )
            }
        }
        SweepCommand::Meanshift(a) => {
            let cfg = MeanShiftConfig {
                edge_aware: a.edge_aware,
                use_cache: !a.no_cache,
                ..MeanShiftConfig::new(a.hs_list[c], a.hr_list[r])
            };
            (
                ("hr".to_string(), a.hr_list[r].to_string()),
                ("hs".to_string(), a.hs_list[c].to_string()),
                meanshift::mean_shift_filter(input, &cfg)?,
            )
        }
    };
    Ok(SweepCell {
        row_label,
        col_label,
        file_stem: stem,
        report,
    })
}

const MONTAGE_GUTTER: usize = 2;

/// Tiles equally sized images into a rows x cols contact sheet with thin
/// mid-gray gutters.
fn montage(images: &[&Image], rows: usize, cols: usize) -> Image {
    assert_eq!(images.len(), rows * cols);
    let (cw, ch) = (images[0].width(), images[0].height());
    let w = cols * cw + (cols - 1) * MONTAGE_GUTTER;
    let h = rows * ch + (rows - 1) * MONTAGE_GUTTER;
    let mut out = Image::constant(w, h, [128.0; 3]);
    for (i, img) in images.iter().enumerate() {
        let (r, c) = (i / cols, i % cols);
        let ox = c * (cw + MONTAGE_GUTTER);
        let oy = r * (ch + MONTAGE_GUTTER);
        for y in 0..ch {
            for x in 0..cw {
                out.set(ox + x, oy + y, img.get(x, y));
            }
        }
    }
    out
}

fn cmd_metrics(args: &MetricsArgs) -> Result<()> {
    let test = load_png(&args.test)?;
    let reference = args.reference.as_ref().map(load_png).transpose()?;
    let regions: Option<Vec<Region>> = args
        .regions
        .as_ref()
        .map(|p| -> Result<Vec<Region>> {
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            regions_from_sidecar(&text)
        })
        .transpose()?;

    let report = metric_report(
        &test,
        reference.as_ref(),
        regions.as_deref(),
        args.novel_tolerance,
    )?;

    let base = args
        .out
        .clone()
        .unwrap_or_else(|| sibling(&args.test, "metrics"));
    let txt_path = base.with_extension("txt");
    let csv_path = base.with_extension("csv");
    std::fs::write(&txt_path, report.to_text()).map_err(|e| Error::io(&txt_path, e))?;

    let mut csv = csv::Writer::from_path(&csv_path).map_err(csv_error(&csv_path))?;
    csv.write_record(MetricReport::csv_header()).map_err(csv_error(&csv_path))?;
    csv.write_record(report.csv_row()).map_err(csv_error(&csv_path))?;
    csv.flush().map_err(|e| Error::io(&csv_path, e))?;

    print!("{}", report.to_text());
    Ok(())
}
