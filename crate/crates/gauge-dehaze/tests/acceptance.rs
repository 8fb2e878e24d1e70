//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::{
    fs,
    path::Path,
    process::ExitCode,
    time::{Duration, Instant},
};

use gauge_dehaze::{
    codec::load_image,
    dataset::{generate_dataset, split_default, GenerateConfig},
    harness::{evaluate, MethodSpec},
    kernels::{
        bccr::{boundary_transmission, contextual_weights, optimize_transmission_traced, BccrParams, OperatorBank},
        metrics::{mse, psnr, psnr_from_mse, ssim_windowed, MetricParams},
        scatter::{apply_scattering, default_haze_levels, invert_scattering, AtmosphericLight, DEFAULT_HAZE_LADDER},
        scene::{random_scene, render_gauge},
        split::Split,
        ImageBuffer, ScalarMap,
    },
    manifest::{DatasetManifest, Kind},
    report::MetricReport,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DESK_SCENES: usize = 20;
const DESK_SEED: u64 = 1;
const SIZE: usize = 256;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

// ---- independent oracles ----

fn luma_rows(image: &ImageBuffer) -> Vec<Vec<f64>> {
    (0..image.height())
        .map(|y| {
            (0..image.width())
                .map(|x| {
                    let [r, g, b] = image.pixel(x, y);
                    f64::from(0.299f32 * r + 0.587f32 * g + 0.114f32 * b)
                })
                .collect()
        })
        .collect()
}

fn mse_oracle(a: &ImageBuffer, b: &ImageBuffer) -> f64 {
    let mut sum = 0.0;
    for (x, y) in a.data().iter().zip(b.data()) {
        let d = f64::from(*x) - f64::from(*y);
        sum += d * d;
    }
    sum / a.data().len() as f64
}

fn ssim_oracle(a: &ImageBuffer, b: &ImageBuffer) -> f64 {
    let (x, y) = (luma_rows(a), luma_rows(b));
    let (radius, sigma) = (5usize, 1.5f64);
    let size = 2 * radius + 1;
    let mut k = vec![vec![0.0; size]; size];
    let mut norm = 0.0;
    for (i, row) in k.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let (di, dj) = (i as f64 - radius as f64, j as f64 - radius as f64);
            *v = (-(di * di + dj * dj) / (2.0 * sigma * sigma)).exp();
            norm += *v;
        }
    }
    let (c1, c2) = (0.01f64.powi(2), 0.03f64.powi(2));
    let (w, h) = a.dims();
    let (mut total, mut count) = (0.0, 0usize);
    for oy in 0..=h - size {
        for ox in 0..=w - size {
            let (mut mx, mut my, mut xx, mut yy, mut xy) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for i in 0..size {
                for j in 0..size {
                    let wt = k[i][j] / norm;
                    let (p, q) = (x[oy + i][ox + j], y[oy + i][ox + j]);
                    mx += wt * p;
                    my += wt * q;
                    xx += wt * p * p;
                    yy += wt * q * q;
                    xy += wt * p * q;
                }
            }
            let (vx, vy, cv) = (xx - mx * mx, yy - my * my, xy - mx * my);
            total += (2.0 * mx * my + c1) * (2.0 * cv + c2) / ((mx * mx + my * my + c1) * (vx + vy + c2));
            count += 1;
        }
    }
    total / count as f64
}

fn objective_oracle(t: &ScalarMap, t_b: &ScalarMap, weights: &[ScalarMap], lambda: f64) -> f64 {
    let (w, h) = t.dims();
    let at = |x: isize, y: isize| f64::from(t.get(x.clamp(0, w as isize - 1) as usize, y.clamp(0, h as isize - 1) as usize));
    let dirs = [(1isize, 0isize), (0, 1), (1, 1), (-1, 1)];
    let (mut fid, mut reg) = (0.0, 0.0);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let d = at(x, y) - f64::from(t_b.get(x as usize, y as usize));
            fid += d * d;
            for (j, &(dx, dy)) in dirs.iter().enumerate() {
                let first = at(x + dx, y + dy) - at(x, y);
                let second = at(x - dx, y - dy) - 2.0 * at(x, y) + at(x + dx, y + dy);
                reg += f64::from(weights[j].get(x as usize, y as usize)) * first.abs();
                reg += f64::from(weights[j + 4].get(x as usize, y as usize)) * second.abs();
            }
        }
    }
    lambda / 2.0 * fid + reg
}

// ---- criteria ----

fn round_trip() -> Outcome {
    let start = Instant::now();
    let airlight = AtmosphericLight::HAZE_DEFAULT;
    let mut worst = 0.0f32;
    let mut checked = 0usize;
    for seed in 0..100 {
        let (clear, depth) = render_gauge(&random_scene(seed), SIZE, SIZE).unwrap();
        for level in default_haze_levels() {
            let t = level.transmission(&depth).unwrap();
            let hazy = apply_scattering(&clear, &t, &airlight).unwrap();
            let back = invert_scattering(&hazy, &t, &airlight, 0.05).unwrap();
            for (i, (a, b)) in clear.data().iter().zip(back.data()).enumerate() {
                if t.data()[i / 3] >= 0.05 {
                    worst = worst.max((a - b).abs());
                    checked += 1;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-6 && secs < 60.0,
        format!("max |J' - J| = {worst:.2e} over {checked} values with t >= 0.05, {secs:.1} s"),
    )
}

fn metric_oracles() -> Outcome {
    let params = MetricParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst_ssim, mut worst_rel) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let mut img = || ImageBuffer::from_fn(32, 32, |_, _| [rng.random(), rng.random(), rng.random()]).unwrap();
        let (a, noise) = (img(), img());
        let b = ImageBuffer::from_fn(32, 32, |x, y| {
            let (p, q) = (a.pixel(x, y), noise.pixel(x, y));
            [0, 1, 2].map(|c| 0.6 * p[c] + 0.4 * q[c])
        })
        .unwrap();
        let m = mse_oracle(&a, &b);
        worst_rel = worst_rel.max((mse(&a, &b).unwrap() - m).abs() / m);
        let db = 10.0 * (1.0 / m).log10();
        worst_rel = worst_rel.max((psnr(&a, &b, &params).unwrap().db - db).abs() / db);
        worst_ssim = worst_ssim.max((ssim_windowed(&a, &b, &params).unwrap() - ssim_oracle(&a, &b)).abs());
    }
    let twenty = format!("{:.6}", psnr_from_mse(0.01, &params).db);
    outcome(
        worst_ssim <= 1e-9 && worst_rel <= 1e-12 && twenty == "20.000000",
        format!("ssim max abs err {worst_ssim:.1e}, mse/psnr max rel err {worst_rel:.1e}, PSNR(0.01) = {twenty} dB"),
    )
}

fn identity_ssim_by_level(manifest: &DatasetManifest, root: &Path) -> Vec<f64> {
    let params = MetricParams::default();
    let mut sums = vec![0.0; DEFAULT_HAZE_LADDER.len()];
    for entry in &manifest.entries {
        let clear = load_image(root.join(&entry.clear_path)).unwrap();
        for r in &entry.corrupted {
            let hazy = load_image(root.join(&r.path)).unwrap();
            sums[r.level_index - 1] += ssim_windowed(&clear, &hazy, &params).unwrap();
        }
    }
    sums.iter().map(|s| s / manifest.entries.len() as f64).collect()
}

fn corruption_monotonicity(desk: &Desk) -> Outcome {
    let means = identity_ssim_by_level(&desk.haze, &desk.root);
    let pass = means.windows(2).all(|w| w[1] < w[0]);
    let list: Vec<String> = means.iter().map(|v| format!("{v:.3}")).collect();
    outcome(pass, format!("identity SSIM by level over {DESK_SCENES} scenes: {}", list.join(" ")))
}

fn solver_monotonicity() -> Outcome {
    let params = BccrParams::default();
    let bank = OperatorBank::default();
    let mut worst_rise = f64::NEG_INFINITY;
    for seed in 0..25 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let image = ImageBuffer::from_fn(16, 16, |_, _| {
            let base: f32 = rng.random_range(0.2..0.9);
            [base, base * rng.random_range(0.6..1.0), base * rng.random_range(0.6..1.0)]
        })
        .unwrap();
        let t_b = boundary_transmission(&image, &AtmosphericLight::HAZE_DEFAULT, &params).unwrap();
        let weights = contextual_weights(&image, &bank, params.sigma).unwrap();
        let trace = optimize_transmission_traced(&t_b, &weights, &bank, &params).unwrap();
        let mut previous = objective_oracle(&t_b, &t_b, &weights, params.lambda);
        for t in &trace.iterates {
            let value = objective_oracle(t, &t_b, &weights, params.lambda);
            worst_rise = worst_rise.max(value - previous);
            previous = value;
        }
    }
    outcome(
        worst_rise <= 1e-6,
        format!("largest step-to-step objective change {worst_rise:.3e} over 25 problems x 8 iterations"),
    )
}

struct Desk {
    _dir: tempfile::TempDir,
    root: std::path::PathBuf,
    haze: DatasetManifest,
    smoke: DatasetManifest,
    haze_report: MetricReport,
    smoke_report: MetricReport,
    seconds: f64,
}

fn desk_pipeline(root: &Path) -> (DatasetManifest, DatasetManifest, MetricReport, MetricReport) {
    let params = MetricParams::default();
    let mut manifests = Vec::new();
    for kind in [Kind::Haze, Kind::Smoke] {
        let m = generate_dataset(&GenerateConfig::new(DESK_SCENES, kind, DESK_SEED), root).unwrap();
        let m = split_default(&m, DESK_SEED).unwrap();
        m.save(root.join(format!("manifest-{kind}.json"))).unwrap();
        manifests.push(m);
    }
    let methods = [MethodSpec::Identity, MethodSpec::dcp(), MethodSpec::bccr(), MethodSpec::oracle()];
    let haze_report = evaluate(&manifests[0], root, &methods, &params, None).unwrap();
    let smoke_report = evaluate(&manifests[1], root, &[MethodSpec::Identity], &params, None).unwrap();
    let smoke = manifests.pop().unwrap();
    let haze = manifests.pop().unwrap();
    (haze, smoke, haze_report, smoke_report)
}

fn desk() -> Desk {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().to_path_buf();
    let start = Instant::now();
    let (haze, smoke, haze_report, smoke_report) = desk_pipeline(&root);
    Desk {
        _dir: dir,
        root,
        haze,
        smoke,
        haze_report,
        smoke_report,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn mean_psnr(report: &MetricReport, method: &str, max_level: usize) -> f64 {
    let rows: Vec<f64> = report
        .records
        .iter()
        .filter(|r| r.method == method && r.level <= max_level)
        .map(|r| r.psnr_db)
        .collect();
    rows.iter().sum::<f64>() / rows.len() as f64
}

fn directional(desk: &Desk) -> Vec<(&'static str, Outcome)> {
    let light = DEFAULT_HAZE_LADDER.iter().filter(|&&b| b <= 0.6).count();
    let r = &desk.haze_report;
    let (id, dcp, bccr) = (
        mean_psnr(r, "identity", light),
        mean_psnr(r, "dcp", light),
        mean_psnr(r, "bccr", light),
    );
    let timing = desk.seconds < 300.0;
    let haze_id = r.overall("identity").unwrap().ssim_mean;
    let smoke_id = desk.smoke_report.overall("identity").unwrap().ssim_mean;
    let bccr_ssim = r.overall("bccr").unwrap().ssim_mean;
    vec![
        (
            "5a",
            outcome(
                dcp > id && bccr > id && timing,
                format!(
                    "haze test split, beta <= 0.6: PSNR identity {id:.2}, dcp {dcp:.2}, bccr {bccr:.2} dB; desk run {:.0} s",
                    desk.seconds
                ),
            ),
        ),
        (
            "5b",
            outcome(
                smoke_id < haze_id,
                format!("identity SSIM over all levels: smoke {smoke_id:.4} < haze {haze_id:.4}"),
            ),
        ),
        (
            "5c",
            outcome(
                (0.45..=0.85).contains(&bccr_ssim),
                format!("bccr mean SSIM on haze test split {bccr_ssim:.4} in [0.45, 0.85]"),
            ),
        ),
    ]
}

fn split_counts(m: &DatasetManifest) -> ([usize; 3], [usize; 3]) {
    let clear = Split::ALL.map(|s| m.entries_in(s).count());
    let corrupted = Split::ALL.map(|s| m.entries_in(s).map(|e| e.corrupted.len()).sum());
    (clear, corrupted)
}

fn dataset_invariants() -> Outcome {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut pass = true;
    let cases = [
        (Kind::Haze, 436, [350, 43, 43]),
        (Kind::Smoke, 959, [769, 95, 95]),
        (Kind::Haze, 40, [32, 4, 4]),
    ];
    for (kind, n, expected) in cases {
        let dir = tempfile::tempdir().unwrap();
        let m = generate_dataset(&GenerateConfig::new(n, kind, 17), dir.path()).unwrap();
        let m = split_default(&m, 17).unwrap();
        let (clear, corrupted) = split_counts(&m);
        let ok = clear == expected && corrupted == expected.map(|c| 10 * c);
        pass &= ok;
        details.push(format!("{kind} {n}: {clear:?} / {corrupted:?}"));
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < 600.0;
    outcome(pass, format!("{}; {secs:.0} s", details.join("; ")))
}

fn oracle_dominance(desk: &Desk) -> Outcome {
    let r = &desk.haze_report;
    let mut margin = f64::INFINITY;
    for level in 1..=DEFAULT_HAZE_LADDER.len() {
        let oracle = r.at_level("oracle", level).unwrap().psnr_mean;
        for m in ["dcp", "bccr"] {
            margin = margin.min(oracle - r.at_level(m, level).unwrap().psnr_mean);
        }
    }
    outcome(margin >= 0.0, format!("smallest per-level oracle PSNR lead {margin:.2} dB"))
}

fn determinism(desk: &Desk) -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let (haze, smoke, haze_report, smoke_report) = desk_pipeline(dir.path());
    let read = |root: &Path, kind: &str| fs::read(root.join(format!("manifest-{kind}.json"))).unwrap();
    let same = read(&desk.root, "haze") == read(dir.path(), "haze")
        && read(&desk.root, "smoke") == read(dir.path(), "smoke")
        && haze.to_json() == desk.haze.to_json()
        && smoke.to_json() == desk.smoke.to_json()
        && haze_report.to_csv() == desk.haze_report.to_csv()
        && smoke_report.to_csv() == desk.smoke_report.to_csv();
    outcome(
        same,
        format!(
            "second run: manifests and CSV ({} + {} rows) byte-identical = {same}",
            haze_report.records.len(),
            smoke_report.records.len()
        ),
    )
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    if args.iter().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let total = Instant::now();
    let mut results: Vec<(String, Outcome)> = Vec::new();
    let mut report = |name: &str, o: Outcome| {
        println!("criterion {name}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((name.to_string(), o));
    };
    report("1", round_trip());
    report("2", metric_oracles());
    let desk = desk();
    report("3", corruption_monotonicity(&desk));
    report("4", solver_monotonicity());
    for (name, o) in directional(&desk) {
        report(name, o);
    }
    report("6", dataset_invariants());
    report("7", oracle_dominance(&desk));
    report("8", determinism(&desk));
    let failed: Vec<&str> = results.iter().filter(|(_, o)| !o.pass).map(|(n, _)| n.as_str()).collect();
    println!(
        "acceptance: {}/{} passed in {:.0?}",
        results.len() - failed.len(),
        results.len(),
        Duration::from_secs(total.elapsed().as_secs())
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed: {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
