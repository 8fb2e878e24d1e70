use std::{
    fs,
    path::{Path, PathBuf},
    process::ExitCode,
};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gauge_dehaze::{
    codec::{load_image, save_image, save_scalar_png16, write_sidecar},
    dataset::{corrupt_directory, generate_dataset, split_manifest, GenerateConfig, DEFAULT_SIZE},
    harness::{default_methods, evaluate, score_external, MethodSpec},
    kernels::{
        bccr::{dehaze_bccr, BccrParams},
        dcp::{dehaze_dcp, DcpParams},
        metrics::{MetricParams, SsimChannels, SsimConstants},
        scatter::DEFAULT_HAZE_LADDER,
        split::DEFAULT_RATIOS,
        AtmosphericLight, ScalarMap,
    },
    manifest::{manifest_path, validate_manifest, DatasetManifest, Kind},
    report::{emit_report, markdown_table, MetricReport, ReportFormats},
    Error, Result,
};

/// Synthetic analog-gauge datasets, classical dehazing and benchmark reports.
#[derive(Debug, Parser)]
#[command(name = "gauge-dehaze", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Render scenes, corrupt them at every level, split and write a manifest.
    Generate(GenerateArgs),
    /// Corrupt existing `clear/` + `depth/` pairs under a root.
    Corrupt(CorruptArgs),
    /// Restore one image or every image in a directory.
    Dehaze(DehazeArgs),
    /// Score methods on the test split of a manifest.
    Evaluate(EvaluateArgs),
    /// Re-emit CSV and markdown from one or more JSON reports.
    Report(ReportArgs),
    /// Check a manifest against the files under its root.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Haze,
    Smoke,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Haze => Kind::Haze,
            KindArg::Smoke => Kind::Smoke,
        }
    }
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// Dataset root.
    #[arg(long, env = "GAUGE_DEHAZE_ROOT")]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "haze")]
    kind: KindArg,
    #[arg(long, default_value_t = 20)]
    scenes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Split permutation seed; defaults to `--seed`.
    #[arg(long)]
    split_seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SIZE)]
    width: usize,
    #[arg(long, default_value_t = DEFAULT_SIZE)]
    height: usize,
    /// Comma-separated extinction ladder, lightest first.
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<f64>>,
    /// Airlight as `r,g,b`.
    #[arg(long, value_delimiter = ',')]
    airlight: Option<Vec<f32>>,
    /// Manifest path; defaults to `<out>/manifest-<kind>.json`.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct CorruptArgs {
    /// Root holding `clear/` and `depth/`.
    #[arg(long, env = "GAUGE_DEHAZE_ROOT")]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "haze")]
    kind: KindArg,
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    airlight: Option<Vec<f32>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DehazeMethod {
    Dcp,
    Bccr,
}

#[derive(Debug, Args)]
struct DehazeArgs {
    /// Input image or directory of images.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "dcp")]
    method: DehazeMethod,
    /// Output file (single input) or directory.
    #[arg(long)]
    out: PathBuf,
    /// Also write the transmission estimate as `<stem>.t.f32` and `<stem>.t.png`.
    #[arg(long)]
    dump_t: bool,
    #[command(flatten)]
    dcp: DcpFlags,
    #[command(flatten)]
    bccr: BccrFlags,
}

#[derive(Debug, Args)]
struct DcpFlags {
    #[arg(long, default_value_t = DcpParams::default().patch_radius)]
    dcp_patch_radius: usize,
    #[arg(long, default_value_t = DcpParams::default().omega)]
    dcp_omega: f32,
    #[arg(long, default_value_t = DcpParams::default().airlight_fraction)]
    dcp_airlight_fraction: f64,
    #[arg(long, default_value_t = DcpParams::default().t_floor)]
    dcp_t_floor: f32,
    #[arg(long, default_value_t = DcpParams::default().guided_radius)]
    dcp_guided_radius: usize,
    #[arg(long, default_value_t = DcpParams::default().guided_eps)]
    dcp_guided_eps: f64,
}

impl DcpFlags {
    fn params(&self) -> DcpParams {
        DcpParams {
            patch_radius: self.dcp_patch_radius,
            omega: self.dcp_omega,
            airlight_fraction: self.dcp_airlight_fraction,
            t_floor: self.dcp_t_floor,
            guided_radius: self.dcp_guided_radius,
            guided_eps: self.dcp_guided_eps,
        }
    }
}

#[derive(Debug, Args)]
struct BccrFlags {
    /// Radiance cube lower corner `r,g,b`.
    #[arg(long, value_delimiter = ',', default_values_t = BccrParams::default().c0)]
    bccr_c0: Vec<f32>,
    /// Radiance cube upper corner `r,g,b`.
    #[arg(long, value_delimiter = ',', default_values_t = BccrParams::default().c1)]
    bccr_c1: Vec<f32>,
    #[arg(long, default_value_t = BccrParams::default().patch_radius)]
    bccr_patch_radius: usize,
    #[arg(long, default_value_t = BccrParams::default().lambda)]
    bccr_lambda: f64,
    #[arg(long, default_value_t = BccrParams::default().sigma)]
    bccr_sigma: f64,
    #[arg(long, default_value_t = BccrParams::default().outer_iters)]
    bccr_outer_iters: usize,
    #[arg(long, default_value_t = BccrParams::default().penalty_init)]
    bccr_penalty_init: f64,
    #[arg(long, default_value_t = BccrParams::default().penalty_growth)]
    bccr_penalty_growth: f64,
    #[arg(long, default_value_t = BccrParams::default().t_floor)]
    bccr_t_floor: f32,
}

impl BccrFlags {
    fn params(&self) -> Result<BccrParams> {
        Ok(BccrParams {
            c0: rgb(&self.bccr_c0, "--bccr-c0")?,
            c1: rgb(&self.bccr_c1, "--bccr-c1")?,
            patch_radius: self.bccr_patch_radius,
            lambda: self.bccr_lambda,
            sigma: self.bccr_sigma,
            outer_iters: self.bccr_outer_iters,
            penalty_init: self.bccr_penalty_init,
            penalty_growth: self.bccr_penalty_growth,
            t_floor: self.bccr_t_floor,
        })
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConstantsArg {
    Scaled,
    Raw,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ChannelsArg {
    Luminance,
    PerChannel,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Comma-separated methods: identity, dcp, bccr, oracle.
    #[arg(long, value_delimiter = ',')]
    method: Option<Vec<String>>,
    /// Score pre-computed outputs from this directory as method `external`.
    #[arg(long)]
    external: Option<PathBuf>,
    /// Report directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value = "scaled")]
    ssim_constants: ConstantsArg,
    #[arg(long, value_enum, default_value = "luminance")]
    ssim_channels: ChannelsArg,
    #[command(flatten)]
    dcp: DcpFlags,
    #[command(flatten)]
    bccr: BccrFlags,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// JSON reports, e.g. one haze and one smoke run.
    #[arg(required = true)]
    reports: Vec<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    manifest: PathBuf,
}

fn rgb(v: &[f32], flag: &str) -> Result<[f32; 3]> {
    <[f32; 3]>::try_from(v).map_err(|_| Error::Usage(format!("{flag} takes three comma-separated values")))
}

fn airlight(v: &Option<Vec<f32>>, kind: Kind) -> Result<AtmosphericLight> {
    match v {
        Some(v) => Ok(AtmosphericLight::new(rgb(v, "--airlight")?)?),
        None => Ok(kind.default_airlight()),
    }
}

fn manifest_root(manifest: &Path) -> &Path {
    manifest.parent().unwrap_or(Path::new("."))
}

fn generate(args: GenerateArgs) -> Result<()> {
    let kind = Kind::from(args.kind);
    let config = GenerateConfig {
        n_scenes: args.scenes,
        kind,
        seed: args.seed,
        width: args.width,
        height: args.height,
        ladder: args.levels.unwrap_or_else(|| DEFAULT_HAZE_LADDER.to_vec()),
        airlight: airlight(&args.airlight, kind)?,
        jobs: args.jobs,
    };
    let manifest = generate_dataset(&config, &args.out)?;
    let manifest = split_manifest(&manifest, DEFAULT_RATIOS, args.split_seed.unwrap_or(args.seed))?;
    let path = args.manifest.unwrap_or_else(|| manifest_path(&args.out, kind));
    manifest.save(&path)?;
    println!(
        "{} scenes, {} corrupted images -> {}",
        manifest.entries.len(),
        manifest.corrupted_count(),
        path.display()
    );
    Ok(())
}

fn corrupt(args: CorruptArgs) -> Result<()> {
    let kind = Kind::from(args.kind);
    let ladder = args.levels.unwrap_or_else(|| DEFAULT_HAZE_LADDER.to_vec());
    let n = corrupt_directory(
        &args.out,
        kind,
        &ladder,
        &airlight(&args.airlight, kind)?,
        args.seed,
        args.jobs,
    )?;
    println!("{n} scenes x {} levels -> {}", ladder.len(), args.out.join(kind.as_str()).display());
    Ok(())
}

fn dehaze_one(input: &Path, out: &Path, args: &DehazeArgs) -> Result<()> {
    let image = load_image(input)?;
    let restored = match args.method {
        DehazeMethod::Dcp => dehaze_dcp(&image, &args.dcp.params())?,
        DehazeMethod::Bccr => dehaze_bccr(&image, &args.bccr.params()?)?,
    };
    save_image(out, &restored.image)?;
    if args.dump_t {
        let t: &ScalarMap = &restored.transmission;
        write_sidecar(out.with_extension("t.f32"), t)?;
        save_scalar_png16(out.with_extension("t.png"), t)?;
    }
    Ok(())
}

fn dehaze(args: DehazeArgs) -> Result<()> {
    if !args.input.is_dir() {
        return dehaze_one(&args.input, &args.out, &args);
    }
    let mut inputs: Vec<PathBuf> = fs::read_dir(&args.input)
        .map_err(|e| Error::Io {
            path: args.input.clone(),
            source: e,
        })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .is_some_and(|x| ["png", "jpg", "jpeg"].contains(&x.to_string_lossy().to_ascii_lowercase().as_str()))
        })
        .collect();
    inputs.sort();
    for input in &inputs {
        let stem = input.file_stem().unwrap_or_default();
        dehaze_one(input, &args.out.join(stem).with_extension("png"), &args)?;
    }
    println!("{} images -> {}", inputs.len(), args.out.display());
    Ok(())
}

fn run_evaluate(args: EvaluateArgs) -> Result<()> {
    let manifest = DatasetManifest::load(&args.manifest)?;
    let root = manifest_root(&args.manifest);
    let metric = MetricParams {
        constants: match args.ssim_constants {
            ConstantsArg::Scaled => SsimConstants::Scaled,
            ConstantsArg::Raw => SsimConstants::Raw,
        },
        channels: match args.ssim_channels {
            ChannelsArg::Luminance => SsimChannels::Luminance,
            ChannelsArg::PerChannel => SsimChannels::PerChannel,
        },
        ..MetricParams::default()
    };
    let report = match (&args.external, &args.method) {
        (Some(dir), None) => score_external(&manifest, root, dir, &metric, args.jobs)?,
        (external, names) => {
            let mut methods = match names {
                Some(names) => names
                    .iter()
                    .map(|n| {
                        Ok(match n.as_str() {
                            "dcp" => MethodSpec::Dcp { params: args.dcp.params() },
                            "bccr" => MethodSpec::Bccr {
                                params: args.bccr.params()?,
                            },
                            other => MethodSpec::parse(other)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
                None => default_methods(),
            };
            if let Some(dir) = external {
                methods.push(MethodSpec::External { dir: dir.clone() });
            }
            evaluate(&manifest, root, &methods, &metric, args.jobs)?
        }
    };
    emit_report(&report, &args.out, ReportFormats::ALL)?;
    print!("{}", markdown_table(&[&report]));
    for x in &report.exclusions {
        eprintln!("excluded: {} {} level {}: {}", x.method, x.id, x.level, x.reason);
    }
    for u in &report.unmatched {
        eprintln!("unmatched: {u}");
    }
    Ok(())
}

fn report(args: ReportArgs) -> Result<()> {
    let reports = args
        .reports
        .iter()
        .map(MetricReport::load)
        .collect::<Result<Vec<_>>>()?;
    if let [single] = reports.as_slice() {
        emit_report(single, &args.out, ReportFormats { json: false, ..ReportFormats::ALL })?;
    } else {
        fs::create_dir_all(&args.out).map_err(|e| Error::Io {
            path: args.out.clone(),
            source: e,
        })?;
        for r in &reports {
            let path = args.out.join(format!("report-{}.csv", r.provenance.kind));
            fs::write(&path, r.to_csv()).map_err(|e| Error::Io { path, source: e })?;
        }
    }
    let table = markdown_table(&reports.iter().collect::<Vec<_>>());
    let path = args.out.join("report.md");
    fs::write(&path, &table).map_err(|e| Error::Io { path, source: e })?;
    print!("{table}");
    Ok(())
}

fn validate(args: ValidateArgs) -> Result<()> {
    let manifest = DatasetManifest::load(&args.manifest)?;
    let violations = validate_manifest(&manifest, manifest_root(&args.manifest));
    for v in &violations {
        println!("{v}");
    }
    if violations.is_empty() {
        println!("ok: {} scenes, {} corrupted images", manifest.entries.len(), manifest.corrupted_count());
        Ok(())
    } else {
        Err(Error::InvalidManifest(violations))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Corrupt(a) => corrupt(a),
        Command::Dehaze(a) => dehaze(a),
        Command::Evaluate(a) => run_evaluate(a),
        Command::Report(a) => report(a),
        Command::Validate(a) => validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
