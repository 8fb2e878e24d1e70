//! Paired dataset generation, corruption of existing clear sets, splitting.

use std::{fs, path::Path};

use gauge_dehaze_core::{
    scatter::{corrupt_levels, Corruption, DEFAULT_HAZE_LADDER},
    scene::{random_scene, render_gauge},
    split::{assign_splits, DEFAULT_RATIOS},
    AtmosphericLight, ImageBuffer, ScalarMap,
};
use rayon::prelude::*;

use crate::{
    codec::{load_image, read_sidecar, save_image, write_sidecar},
    manifest::{
        clear_rel_path, corrupted_rel_path, depth_rel_path, manifest_path, CorruptedRecord, DatasetManifest,
        Entry, Kind, Provenance, SCHEMA_VERSION,
    },
    with_pool, Error, Result,
};

pub const MIN_SCENES: usize = 10;
pub const DEFAULT_SIZE: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct GenerateConfig {
    pub n_scenes: usize,
    pub kind: Kind,
    pub seed: u64,
    pub width: usize,
    pub height: usize,
    pub ladder: Vec<f64>,
    pub airlight: AtmosphericLight,
    /// Worker threads; `None` uses every core.
    pub jobs: Option<usize>,
}

impl GenerateConfig {
    pub fn new(n_scenes: usize, kind: Kind, seed: u64) -> Self {
        Self {
            n_scenes,
            kind,
            seed,
            width: DEFAULT_SIZE,
            height: DEFAULT_SIZE,
            ladder: DEFAULT_HAZE_LADDER.to_vec(),
            airlight: kind.default_airlight(),
            jobs: None,
        }
    }
}

/// Per-scene seed for scene `index` of a run seeded with `seed` (splitmix64).
pub fn scene_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn clear_id(index: usize) -> String {
    format!("scene_{index:05}")
}

fn write_levels(
    root: &Path,
    kind: Kind,
    clear_id: &str,
    clear: &ImageBuffer,
    depth: &ScalarMap,
    airlight: &AtmosphericLight,
    levels: &[Corruption],
) -> Result<Vec<CorruptedRecord>> {
    let corrupted = corrupt_levels(clear, depth, airlight, levels)?;
    corrupted
        .iter()
        .zip(levels)
        .enumerate()
        .map(|(k, (level, params))| {
            let path = corrupted_rel_path(kind, clear_id, k + 1);
            save_image(root.join(&path), &level.image)?;
            Ok(CorruptedRecord {
                path,
                level_index: k + 1,
                level_params: *params,
                split: None,
            })
        })
        .collect()
}

fn generate_scene(config: &GenerateConfig, root: &Path, index: usize) -> Result<Entry> {
    let spec = random_scene(scene_seed(config.seed, index));
    let (clear, depth) = render_gauge(&spec, config.width, config.height)?;
    let id = clear_id(index);
    let clear_path = clear_rel_path(&id);
    let depth_path = depth_rel_path(&id);
    save_image(root.join(&clear_path), &clear)?;
    write_sidecar(root.join(&depth_path), &depth)?;
    let levels = config.kind.levels(&config.ladder, spec.seed);
    let corrupted = write_levels(root, config.kind, &id, &clear, &depth, &config.airlight, &levels)?;
    Ok(Entry {
        clear_id: id,
        clear_path,
        depth_path,
        scene: spec,
        corrupted,
    })
}

/// Renders `n_scenes` scenes, corrupts each at every ladder level, writes
/// images, depth sidecars and the (unsplit) manifest under `root`.
pub fn generate_dataset(config: &GenerateConfig, root: &Path) -> Result<DatasetManifest> {
    if config.n_scenes < MIN_SCENES {
        return Err(Error::Usage(format!(
            "need at least {MIN_SCENES} scenes, got {}",
            config.n_scenes
        )));
    }
    fs::create_dir_all(root).map_err(|e| Error::io(root, e))?;
    let entries = with_pool(config.jobs, || {
        (0..config.n_scenes)
            .into_par_iter()
            .map(|i| generate_scene(config, root, i))
            .collect::<Result<Vec<_>>>()
    })??;
    let manifest = DatasetManifest {
        schema_version: SCHEMA_VERSION,
        kind: config.kind,
        width: config.width,
        height: config.height,
        provenance: Provenance {
            generator: crate::GENERATOR.to_string(),
            seed: config.seed,
            ladder: config.ladder.clone(),
            airlight: config.airlight,
            split_seed: None,
            split_ratios: None,
        },
        entries,
        split_assignment: Default::default(),
    };
    manifest.save(manifest_path(root, config.kind))?;
    Ok(manifest)
}

/// Assigns every clear scene, and with it all of its corrupted images, to
/// train, val or test.
pub fn split_manifest(manifest: &DatasetManifest, ratios: [f64; 3], seed: u64) -> Result<DatasetManifest> {
    let splits = assign_splits(manifest.entries.len(), ratios, seed)?;
    let mut out = manifest.clone();
    out.split_assignment.clear();
    for (entry, split) in out.entries.iter_mut().zip(splits) {
        out.split_assignment.insert(entry.clear_id.clone(), split);
        for record in &mut entry.corrupted {
            record.split = Some(split);
        }
    }
    out.provenance.split_seed = Some(seed);
    out.provenance.split_ratios = Some(ratios);
    Ok(out)
}

pub fn split_default(manifest: &DatasetManifest, seed: u64) -> Result<DatasetManifest> {
    split_manifest(manifest, DEFAULT_RATIOS, seed)
}

/// Corrupts every `clear/<id>.png` under `root` that has a matching
/// `depth/<id>.f32`, writing `<kind>/<id>_<level>.png`. Returns the number of
/// scenes processed.
pub fn corrupt_directory(
    root: &Path,
    kind: Kind,
    ladder: &[f64],
    airlight: &AtmosphericLight,
    seed: u64,
    jobs: Option<usize>,
) -> Result<usize> {
    let clear_dir = root.join("clear");
    let mut ids: Vec<String> = fs::read_dir(&clear_dir)
        .map_err(|e| Error::io(&clear_dir, e))?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "png"))
        .filter_map(|p| p.file_stem().map(|s| s.to_string_lossy().into_owned()))
        .collect();
    ids.sort();
    with_pool(jobs, || {
        ids.par_iter()
            .enumerate()
            .map(|(i, id)| {
                let clear = load_image(root.join(clear_rel_path(id)))?;
                let depth = read_sidecar(root.join(depth_rel_path(id)))?;
                let levels = kind.levels(ladder, scene_seed(seed, i));
                write_levels(root, kind, id, &clear, &depth, airlight, &levels).map(|_| ())
            })
            .collect::<Result<Vec<()>>>()
    })??;
    Ok(ids.len())
}
