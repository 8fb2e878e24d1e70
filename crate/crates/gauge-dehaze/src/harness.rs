//! Benchmark driver: restores every test-split corrupted image with each
//! method and scores it against its clear image.

use std::{
    collections::{BTreeMap, BTreeSet},
    fs,
    path::{Path, PathBuf},
    time::Instant,
};

use gauge_dehaze_core::{
    bccr::{dehaze_bccr, BccrParams},
    dcp::{dehaze_dcp, DcpParams},
    metrics::{psnr, ssim_windowed, MetricParams},
    scatter::invert_scattering,
    split::Split,
    ImageBuffer,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Division guard for the oracle. Only a guard: at the densest default level
/// most of a far wall has true `t` between 0.02 and 0.05 and is still
/// recoverable from 8-bit input.
pub const ORACLE_T_FLOOR: f32 = 0.01;

use crate::{
    codec::{load_image, read_sidecar},
    manifest::{validate_manifest, CorruptedRecord, DatasetManifest, Entry},
    report::{aggregate, Exclusion, ImageRecord, ImageTiming, MethodTiming, MetricReport, ReportProvenance, Timing},
    with_pool, Error, Result, GENERATOR, STATISTICS_NOTE,
};

/// Extensions accepted for external outputs.
pub const EXTERNAL_EXTENSIONS: [&str; 3] = ["png", "jpg", "jpeg"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum MethodSpec {
    /// The corrupted input, untreated.
    Identity,
    Dcp { params: DcpParams },
    Bccr { params: BccrParams },
    /// Pre-computed outputs named `<corrupted stem>.<png|jpg|jpeg>`.
    External { dir: PathBuf },
    /// Exact inversion with the true transmission and airlight.
    Oracle { t_floor: f32 },
}

impl MethodSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::Dcp { .. } => "dcp",
            Self::Bccr { .. } => "bccr",
            Self::External { .. } => "external",
            Self::Oracle { .. } => "oracle",
        }
    }

    pub fn dcp() -> Self {
        Self::Dcp {
            params: DcpParams::default(),
        }
    }

    pub fn bccr() -> Self {
        Self::Bccr {
            params: BccrParams::default(),
        }
    }

    pub fn oracle() -> Self {
        Self::Oracle {
            t_floor: ORACLE_T_FLOOR,
        }
    }

    /// Parses a built-in method name with default parameters.
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "identity" => Ok(Self::Identity),
            "dcp" => Ok(Self::dcp()),
            "bccr" => Ok(Self::bccr()),
            "oracle" => Ok(Self::oracle()),
            other => Err(Error::Usage(format!(
                "unknown method `{other}` (expected identity, dcp, bccr or oracle)"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Dcp { params } => params.validate()?,
            Self::Bccr { params } => params.validate()?,
            Self::Oracle { t_floor } if !(*t_floor > 0.0 && *t_floor <= 1.0) => {
                return Err(Error::Usage("oracle t_floor must lie in (0, 1]".into()))
            }
            _ => {}
        }
        Ok(())
    }
}

/// Methods run when none are requested; the oracle is opt-in.
pub fn default_methods() -> Vec<MethodSpec> {
    vec![MethodSpec::Identity, MethodSpec::dcp(), MethodSpec::bccr()]
}

/// Restores one corrupted image; `None` when an external output is absent.
pub fn restore(
    method: &MethodSpec,
    corrupted: &ImageBuffer,
    manifest: &DatasetManifest,
    root: &Path,
    entry: &Entry,
    record: &CorruptedRecord,
    external: &BTreeMap<String, PathBuf>,
) -> Result<Option<ImageBuffer>> {
    Ok(Some(match method {
        MethodSpec::Identity => corrupted.clone(),
        MethodSpec::Dcp { params } => dehaze_dcp(corrupted, params)?.image,
        MethodSpec::Bccr { params } => dehaze_bccr(corrupted, params)?.image,
        MethodSpec::External { .. } => match external.get(&stem_of(&record.path)) {
            Some(path) => load_image(path)?,
            None => return Ok(None),
        },
        MethodSpec::Oracle { t_floor } => {
            let depth = read_sidecar(root.join(&entry.depth_path))?;
            let t = record.level_params.transmission(&depth)?;
            invert_scattering(corrupted, &t, &manifest.provenance.airlight, *t_floor)?
        }
    }))
}

fn stem_of(path: &str) -> String {
    Path::new(path)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Stem → file for every image in `dir`. When several extensions share a
/// stem, the first in [`EXTERNAL_EXTENSIONS`] order wins.
fn index_external(dir: &Path) -> Result<BTreeMap<String, PathBuf>> {
    let mut found: BTreeMap<String, (usize, PathBuf)> = BTreeMap::new();
    for item in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = item.map_err(|e| Error::io(dir, e))?.path();
        let ext = path
            .extension()
            .map(|e| e.to_string_lossy().to_ascii_lowercase())
            .unwrap_or_default();
        let Some(rank) = EXTERNAL_EXTENSIONS.iter().position(|e| *e == ext) else {
            continue;
        };
        let stem = stem_of(&path.to_string_lossy());
        match found.get(&stem) {
            Some((r, _)) if *r <= rank => {}
            _ => {
                found.insert(stem, (rank, path));
            }
        }
    }
    Ok(found.into_iter().map(|(k, (_, p))| (k, p)).collect())
}

struct Outcome {
    records: Vec<(usize, ImageRecord, f64)>,
    exclusions: Vec<(usize, Exclusion)>,
}

fn score_pair(
    manifest: &DatasetManifest,
    root: &Path,
    entry: &Entry,
    record: &CorruptedRecord,
    methods: &[MethodSpec],
    externals: &[BTreeMap<String, PathBuf>],
    metric: &MetricParams,
) -> Result<Outcome> {
    let clear = load_image(root.join(&entry.clear_path))?;
    let corrupted = load_image(root.join(&record.path))?;
    let mut out = Outcome {
        records: Vec::new(),
        exclusions: Vec::new(),
    };
    for (m, method) in methods.iter().enumerate() {
        let exclude = |reason: String| Exclusion {
            method: method.name().to_string(),
            id: entry.clear_id.clone(),
            level: record.level_index,
            reason,
        };
        let start = Instant::now();
        let restored = match restore(method, &corrupted, manifest, root, entry, record, &externals[m]) {
            Ok(Some(image)) => image,
            Ok(None) => {
                out.exclusions.push((m, exclude("missing output".into())));
                continue;
            }
            Err(e) if matches!(method, MethodSpec::External { .. }) => {
                out.exclusions.push((m, exclude(e.to_string())));
                continue;
            }
            Err(e) => return Err(e),
        };
        let seconds = start.elapsed().as_secs_f64();
        let scored = psnr(&clear, &restored, metric).and_then(|p| Ok((p, ssim_windowed(&clear, &restored, metric)?)));
        let (p, s) = match scored {
            Ok(v) => v,
            Err(e) if matches!(method, MethodSpec::External { .. }) => {
                out.exclusions.push((m, exclude(e.to_string())));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        out.records.push((
            m,
            ImageRecord {
                id: entry.clear_id.clone(),
                level: record.level_index,
                method: method.name().to_string(),
                psnr_db: p.db,
                ssim: s,
                exact: p.exact,
            },
            seconds,
        ));
    }
    Ok(out)
}

/// Scores every method on every corrupted test-split image of a valid
/// manifest rooted at `root`. Rows are sorted by (method position, clear id,
/// level); results do not depend on `jobs`.
pub fn evaluate(
    manifest: &DatasetManifest,
    root: &Path,
    methods: &[MethodSpec],
    metric: &MetricParams,
    jobs: Option<usize>,
) -> Result<MetricReport> {
    metric.validate()?;
    for m in methods {
        m.validate()?;
    }
    let violations = validate_manifest(manifest, root);
    if !violations.is_empty() {
        return Err(Error::InvalidManifest(violations));
    }
    let pairs: Vec<(&Entry, &CorruptedRecord)> = manifest
        .entries_in(Split::Test)
        .flat_map(|e| e.corrupted.iter().map(move |r| (e, r)))
        .collect();
    if pairs.is_empty() {
        return Err(Error::EmptyTestSplit);
    }
    let externals = methods
        .iter()
        .map(|m| match m {
            MethodSpec::External { dir } => index_external(dir),
            _ => Ok(BTreeMap::new()),
        })
        .collect::<Result<Vec<_>>>()?;
    let test_stems: BTreeSet<String> = pairs.iter().map(|(_, r)| stem_of(&r.path)).collect();
    let unmatched = externals
        .iter()
        .flat_map(|index| index.iter())
        .filter(|(stem, _)| !test_stems.contains(*stem))
        .map(|(_, path)| path.to_string_lossy().into_owned())
        .collect();

    let outcomes = with_pool(jobs, || {
        pairs
            .par_iter()
            .map(|(e, r)| score_pair(manifest, root, e, r, methods, &externals, metric))
            .collect::<Result<Vec<_>>>()
    })??;

    let mut rows = Vec::new();
    let mut excluded = Vec::new();
    for o in outcomes {
        rows.extend(o.records);
        excluded.extend(o.exclusions);
    }
    rows.sort_by(|a, b| (a.0, &a.1.id, a.1.level).cmp(&(b.0, &b.1.id, b.1.level)));
    excluded.sort_by(|a, b| (a.0, &a.1.id, a.1.level).cmp(&(b.0, &b.1.id, b.1.level)));

    let per_image: Vec<ImageTiming> = rows
        .iter()
        .map(|(_, r, s)| ImageTiming {
            method: r.method.clone(),
            id: r.id.clone(),
            level: r.level,
            seconds: *s,
        })
        .collect();
    let per_method = methods
        .iter()
        .map(|m| {
            let times: Vec<f64> = per_image
                .iter()
                .filter(|t| t.method == m.name())
                .map(|t| t.seconds)
                .collect();
            MethodTiming {
                method: m.name().to_string(),
                images: times.len(),
                total_seconds: times.iter().sum(),
            }
        })
        .collect();
    let records: Vec<ImageRecord> = rows.into_iter().map(|(_, r, _)| r).collect();
    Ok(MetricReport {
        provenance: ReportProvenance {
            generator: GENERATOR.to_string(),
            kind: manifest.kind,
            manifest_seed: manifest.provenance.seed,
            split_seed: manifest.provenance.split_seed,
            test_pairs: pairs.len(),
            metric: *metric,
            methods: methods.to_vec(),
            note: STATISTICS_NOTE.to_string(),
        },
        aggregates: aggregate(&records),
        records,
        exclusions: excluded.into_iter().map(|(_, x)| x).collect(),
        unmatched,
        timing: Timing {
            per_method,
            per_image,
        },
    })
}

/// Scores pre-computed outputs in `dir` against the test split. Errors when no
/// file matches a test image.
pub fn score_external(
    manifest: &DatasetManifest,
    root: &Path,
    dir: &Path,
    metric: &MetricParams,
    jobs: Option<usize>,
) -> Result<MetricReport> {
    let report = evaluate(
        manifest,
        root,
        &[MethodSpec::External { dir: dir.to_path_buf() }],
        metric,
        jobs,
    )?;
    if report.records.is_empty() {
        return Err(Error::NoExternalMatches { dir: dir.to_path_buf() });
    }
    Ok(report)
}
