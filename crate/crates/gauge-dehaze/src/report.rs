//! Metric reports: per-image rows, aggregates and their serializations.

use std::{
    fmt::Write as _,
    fs,
    path::{Path, PathBuf},
};

use gauge_dehaze_core::metrics::MetricParams;
use serde::{Deserialize, Serialize};

use crate::{harness::MethodSpec, manifest::Kind, Error, Result};

pub const CSV_HEADER: &str = "id,level,method,psnr_db,ssim,exact";

/// Statistics are computed once over the evaluated test images; they are not
/// maxima over training epochs.
pub const STATISTICS_NOTE: &str =
    "evaluation-time statistics over the test split (mean/min/max over images), not training-time maxima";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageRecord {
    pub id: String,
    pub level: usize,
    pub method: String,
    pub psnr_db: f64,
    pub ssim: f64,
    /// Output matched the reference exactly; `psnr_db` holds the cap.
    pub exact: bool,
}

/// Mean, min and max for one method, over one level or (`level: None`) all.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub method: String,
    pub level: Option<usize>,
    pub count: usize,
    pub psnr_mean: f64,
    pub psnr_min: f64,
    pub psnr_max: f64,
    pub ssim_mean: f64,
    pub ssim_min: f64,
    pub ssim_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exclusion {
    pub method: String,
    pub id: String,
    pub level: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportProvenance {
    pub generator: String,
    pub kind: Kind,
    pub manifest_seed: u64,
    pub split_seed: Option<u64>,
    pub test_pairs: usize,
    pub metric: MetricParams,
    pub methods: Vec<MethodSpec>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageTiming {
    pub method: String,
    pub id: String,
    pub level: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodTiming {
    pub method: String,
    pub images: usize,
    pub total_seconds: f64,
}

/// Wall-clock data; the only run-dependent part of a report.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Timing {
    pub per_method: Vec<MethodTiming>,
    pub per_image: Vec<ImageTiming>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub provenance: ReportProvenance,
    pub records: Vec<ImageRecord>,
    pub aggregates: Vec<Aggregate>,
    pub exclusions: Vec<Exclusion>,
    /// Files in an external directory that matched no test image.
    pub unmatched: Vec<String>,
    pub timing: Timing,
}

fn summarize(method: &str, level: Option<usize>, rows: &[&ImageRecord]) -> Aggregate {
    let n = rows.len() as f64;
    let fold = |f: fn(&ImageRecord) -> f64| {
        let mut sum = 0.0;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for r in rows {
            let v = f(r);
            sum += v;
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (sum / n, lo, hi)
    };
    let (psnr_mean, psnr_min, psnr_max) = fold(|r| r.psnr_db);
    let (ssim_mean, ssim_min, ssim_max) = fold(|r| r.ssim);
    Aggregate {
        method: method.to_string(),
        level,
        count: rows.len(),
        psnr_mean,
        psnr_min,
        psnr_max,
        ssim_mean,
        ssim_min,
        ssim_max,
    }
}

/// Per method (in first-appearance order): one row per level, ascending,
/// then one row over all levels. Sums run in record order.
pub fn aggregate(records: &[ImageRecord]) -> Vec<Aggregate> {
    let mut methods: Vec<&str> = Vec::new();
    for r in records {
        if !methods.contains(&r.method.as_str()) {
            methods.push(&r.method);
        }
    }
    let mut out = Vec::new();
    for method in methods {
        let rows: Vec<&ImageRecord> = records.iter().filter(|r| r.method == method).collect();
        let mut levels: Vec<usize> = rows.iter().map(|r| r.level).collect();
        levels.sort_unstable();
        levels.dedup();
        for level in levels {
            let at: Vec<&ImageRecord> = rows.iter().copied().filter(|r| r.level == level).collect();
            out.push(summarize(method, Some(level), &at));
        }
        out.push(summarize(method, None, &rows));
    }
    out
}

impl MetricReport {
    /// Methods in report order.
    pub fn methods(&self) -> Vec<&str> {
        self.aggregates
            .iter()
            .filter(|a| a.level.is_none())
            .map(|a| a.method.as_str())
            .collect()
    }

    pub fn overall(&self, method: &str) -> Option<&Aggregate> {
        self.aggregates
            .iter()
            .find(|a| a.method == method && a.level.is_none())
    }

    pub fn at_level(&self, method: &str, level: usize) -> Option<&Aggregate> {
        self.aggregates
            .iter()
            .find(|a| a.method == method && a.level == Some(level))
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.records {
            let _ = writeln!(s, "{},{},{},{},{},{}", r.id, r.level, r.method, r.psnr_db, r.ssim, r.exact);
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str, path: &Path) -> Result<Self> {
        serde_json::from_str(text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text, path)
    }
}

/// Parses rows written by [`MetricReport::to_csv`].
pub fn parse_csv(text: &str) -> std::result::Result<Vec<ImageRecord>, String> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err("unexpected CSV header".into());
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            let bad = |what: &str| format!("line {}: bad {what}", i + 2);
            if f.len() != 6 {
                return Err(bad("field count"));
            }
            Ok(ImageRecord {
                id: f[0].to_string(),
                level: f[1].parse().map_err(|_| bad("level"))?,
                method: f[2].to_string(),
                psnr_db: f[3].parse().map_err(|_| bad("psnr_db"))?,
                ssim: f[4].parse().map_err(|_| bad("ssim"))?,
                exact: f[5].parse().map_err(|_| bad("exact"))?,
            })
        })
        .collect()
}

/// Rows are methods; each report contributes PSNR_mean, PSNR_max, SSIM_mean
/// and SSIM_max columns for its dataset kind.
pub fn markdown_table(reports: &[&MetricReport]) -> String {
    let mut methods: Vec<&str> = Vec::new();
    for report in reports {
        for m in report.methods() {
            if !methods.contains(&m) {
                methods.push(m);
            }
        }
    }
    let mut s = format!("<!-- {STATISTICS_NOTE} -->\n| method |");
    for report in reports {
        let k = report.provenance.kind;
        let _ = write!(s, " {k} PSNR_mean | {k} PSNR_max | {k} SSIM_mean | {k} SSIM_max |");
    }
    s.push_str("\n|---|");
    s.push_str(&"---:|".repeat(4 * reports.len()));
    s.push('\n');
    for m in methods {
        let _ = write!(s, "| {m} |");
        for report in reports {
            match report.overall(m) {
                Some(a) => {
                    let _ = write!(
                        s,
                        " {:.2} | {:.2} | {:.4} | {:.4} |",
                        a.psnr_mean, a.psnr_max, a.ssim_mean, a.ssim_max
                    );
                }
                None => s.push_str(" - | - | - | - |"),
            }
        }
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportFormats {
    pub csv: bool,
    pub json: bool,
    pub markdown: bool,
}

impl ReportFormats {
    pub const ALL: Self = Self {
        csv: true,
        json: true,
        markdown: true,
    };
}

/// Writes `report.csv`, `report.json` and `report.md` under `dir` as
/// selected. Returns the written paths.
pub fn emit_report(report: &MetricReport, dir: &Path, formats: ReportFormats) -> Result<Vec<PathBuf>> {
    if report.records.is_empty() {
        return Err(Error::Usage("report has no records".into()));
    }
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    let mut put = |name: &str, body: String| -> Result<()> {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        written.push(path);
        Ok(())
    };
    if formats.csv {
        put("report.csv", report.to_csv())?;
    }
    if formats.json {
        put("report.json", report.to_json())?;
    }
    if formats.markdown {
        put("report.md", markdown_table(&[report]))?;
    }
    Ok(written)
}
