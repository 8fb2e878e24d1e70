//! Dataset manifest: one JSON document listing every clear scene, its depth
//! map and its corrupted variants, with paths relative to the dataset root.

use std::{
    collections::{BTreeMap, BTreeSet},
    fmt, fs,
    path::{Path, PathBuf},
};

use gauge_dehaze_core::{
    scatter::{haze_levels, smoke_levels, Corruption},
    scene::GaugeSceneSpec,
    split::Split,
    AtmosphericLight,
};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const LEVELS_PER_SCENE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Haze,
    Smoke,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Haze => "haze",
            Kind::Smoke => "smoke",
        }
    }

    pub fn default_airlight(&self) -> AtmosphericLight {
        match self {
            Kind::Haze => AtmosphericLight::HAZE_DEFAULT,
            Kind::Smoke => AtmosphericLight::SMOKE_DEFAULT,
        }
    }

    /// Corruption levels for one scene; `seed` only affects smoke fields.
    pub fn levels(&self, ladder: &[f64], seed: u64) -> Vec<Corruption> {
        match self {
            Kind::Haze => haze_levels(ladder),
            Kind::Smoke => smoke_levels(ladder, seed),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub seed: u64,
    pub ladder: Vec<f64>,
    pub airlight: AtmosphericLight,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split_ratios: Option<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorruptedRecord {
    pub path: String,
    /// 1-based, lightest first.
    pub level_index: usize,
    pub level_params: Corruption,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<Split>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub clear_id: String,
    pub clear_path: String,
    pub depth_path: String,
    pub scene: GaugeSceneSpec,
    pub corrupted: Vec<CorruptedRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub schema_version: u32,
    pub kind: Kind,
    pub width: usize,
    pub height: usize,
    pub provenance: Provenance,
    pub entries: Vec<Entry>,
    #[serde(default)]
    pub split_assignment: BTreeMap<String, Split>,
}

/// Default manifest location for a dataset kind under `root`.
pub fn manifest_path(root: &Path, kind: Kind) -> PathBuf {
    root.join(format!("manifest-{kind}.json"))
}

/// Corrupted image path relative to the root: `<kind>/<id>_<level>.png`.
pub fn corrupted_rel_path(kind: Kind, clear_id: &str, level_index: usize) -> String {
    format!("{kind}/{clear_id}_{level_index:02}.png")
}

pub fn clear_rel_path(clear_id: &str) -> String {
    format!("clear/{clear_id}.png")
}

pub fn depth_rel_path(clear_id: &str) -> String {
    format!("depth/{clear_id}.f32")
}

impl DatasetManifest {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_slice(&bytes).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn split_of(&self, clear_id: &str) -> Option<Split> {
        self.split_assignment.get(clear_id).copied()
    }

    pub fn entries_in(&self, split: Split) -> impl Iterator<Item = &Entry> {
        self.entries
            .iter()
            .filter(move |e| self.split_of(&e.clear_id) == Some(split))
    }

    pub fn corrupted_count(&self) -> usize {
        self.entries.iter().map(|e| e.corrupted.len()).sum()
    }
}

/// One problem found by [`validate_manifest`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    SchemaVersion { found: u32 },
    DuplicateId { clear_id: String },
    MissingFile { path: String },
    LevelCount { clear_id: String, found: usize },
    LevelIndex { clear_id: String, position: usize, found: usize },
    KindMismatch { clear_id: String, level_index: usize },
    NonMonotoneLevels { clear_id: String, level_index: usize },
    Unassigned { clear_id: String },
    UnknownAssignment { clear_id: String },
    Straddling { clear_id: String, level_index: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SchemaVersion { found } => write!(f, "unsupported schema_version {found}"),
            Self::DuplicateId { clear_id } => write!(f, "{clear_id}: duplicate clear id"),
            Self::MissingFile { path } => write!(f, "{path}: file missing"),
            Self::LevelCount { clear_id, found } => {
                write!(f, "{clear_id}: {found} corrupted images, expected {LEVELS_PER_SCENE}")
            }
            Self::LevelIndex {
                clear_id,
                position,
                found,
            } => write!(f, "{clear_id}: record {position} has level_index {found}"),
            Self::KindMismatch { clear_id, level_index } => {
                write!(f, "{clear_id} level {level_index}: parameters do not match dataset kind")
            }
            Self::NonMonotoneLevels { clear_id, level_index } => {
                write!(f, "{clear_id} level {level_index}: density not above previous level")
            }
            Self::Unassigned { clear_id } => write!(f, "{clear_id}: no split assigned"),
            Self::UnknownAssignment { clear_id } => {
                write!(f, "{clear_id}: split assigned to an unknown id")
            }
            Self::Straddling { clear_id, level_index } => {
                write!(f, "{clear_id} level {level_index}: split differs from its clear image")
            }
        }
    }
}

/// Checks files under `root`, pairing, level metadata and the split
/// partition. An unsplit manifest (no assignment, no record splits) passes the
/// split checks.
pub fn validate_manifest(manifest: &DatasetManifest, root: &Path) -> Vec<Violation> {
    let mut out = Vec::new();
    if manifest.schema_version != SCHEMA_VERSION {
        out.push(Violation::SchemaVersion {
            found: manifest.schema_version,
        });
    }
    let missing = |rel: &str, out: &mut Vec<Violation>| {
        if !root.join(rel).is_file() {
            out.push(Violation::MissingFile { path: rel.to_string() });
        }
    };
    let split_mode = !manifest.split_assignment.is_empty()
        || manifest
            .entries
            .iter()
            .any(|e| e.corrupted.iter().any(|c| c.split.is_some()));
    let mut seen = BTreeSet::new();
    for entry in &manifest.entries {
        let id = &entry.clear_id;
        if !seen.insert(id.as_str()) {
            out.push(Violation::DuplicateId { clear_id: id.clone() });
        }
        missing(&entry.clear_path, &mut out);
        missing(&entry.depth_path, &mut out);
        if entry.corrupted.len() != LEVELS_PER_SCENE {
            out.push(Violation::LevelCount {
                clear_id: id.clone(),
                found: entry.corrupted.len(),
            });
        }
        let clear_split = manifest.split_of(id);
        if split_mode && clear_split.is_none() {
            out.push(Violation::Unassigned { clear_id: id.clone() });
        }
        let mut previous: Option<f64> = None;
        for (position, record) in entry.corrupted.iter().enumerate() {
            missing(&record.path, &mut out);
            if record.level_index != position + 1 {
                out.push(Violation::LevelIndex {
                    clear_id: id.clone(),
                    position: position + 1,
                    found: record.level_index,
                });
            }
            let kind_ok = matches!(
                (manifest.kind, &record.level_params),
                (Kind::Haze, Corruption::Haze(_)) | (Kind::Smoke, Corruption::Smoke(_))
            );
            if !kind_ok {
                out.push(Violation::KindMismatch {
                    clear_id: id.clone(),
                    level_index: record.level_index,
                });
            }
            let beta = record.level_params.base_beta();
            if previous.is_some_and(|p| !(beta > p)) {
                out.push(Violation::NonMonotoneLevels {
                    clear_id: id.clone(),
                    level_index: record.level_index,
                });
            }
            previous = Some(beta);
            if split_mode && clear_split.is_some() && record.split != clear_split {
                out.push(Violation::Straddling {
                    clear_id: id.clone(),
                    level_index: record.level_index,
                });
            }
        }
    }
    for id in manifest.split_assignment.keys() {
        if !seen.contains(id.as_str()) {
            out.push(Violation::UnknownAssignment { clear_id: id.clone() });
        }
    }
    out
}
