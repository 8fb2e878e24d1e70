use std::{collections::BTreeSet, fs};

use gauge_dehaze::{
    dataset::{generate_dataset, split_default, split_manifest, GenerateConfig},
    kernels::{scatter::Corruption, split::Split},
    manifest::{manifest_path, validate_manifest, DatasetManifest, Kind, Violation},
};

fn small(kind: Kind, n: usize, seed: u64) -> GenerateConfig {
    GenerateConfig {
        width: 64,
        height: 64,
        ..GenerateConfig::new(n, kind, seed)
    }
}

fn count_files(dir: &std::path::Path) -> usize {
    fs::read_dir(dir).map(|d| d.count()).unwrap_or(0)
}

#[test]
fn ten_scenes_write_one_hundred_corrupted_files() {
    let dir = tempfile::tempdir().unwrap();
    let m = generate_dataset(&small(Kind::Haze, 10, 3), dir.path()).unwrap();
    assert_eq!(m.entries.len(), 10);
    assert_eq!(m.corrupted_count(), 100);
    assert_eq!(count_files(&dir.path().join("haze")), 100);
    assert_eq!(count_files(&dir.path().join("clear")), 10);
    assert_eq!(count_files(&dir.path().join("depth")), 10);
    assert_eq!(DatasetManifest::load(manifest_path(dir.path(), Kind::Haze)).unwrap(), m);
    assert!(validate_manifest(&m, dir.path()).is_empty());
}

#[test]
fn generation_is_byte_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = GenerateConfig {
        jobs: Some(2),
        ..small(Kind::Smoke, 10, 9)
    };
    let ma = generate_dataset(&cfg, a.path()).unwrap();
    let mb = generate_dataset(&GenerateConfig { jobs: Some(1), ..cfg }, b.path()).unwrap();
    assert_eq!(ma.to_json(), mb.to_json());
    let rel = &ma.entries[4].corrupted[6].path;
    assert_eq!(fs::read(a.path().join(rel)).unwrap(), fs::read(b.path().join(rel)).unwrap());
}

#[test]
fn smoke_levels_carry_distinct_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let m = generate_dataset(&small(Kind::Smoke, 10, 1), dir.path()).unwrap();
    for entry in &m.entries {
        let seeds: BTreeSet<u64> = entry
            .corrupted
            .iter()
            .map(|r| match r.level_params {
                Corruption::Smoke(s) => s.seed,
                Corruption::Haze(_) => panic!("haze level in smoke set"),
            })
            .collect();
        assert_eq!(seeds.len(), 10);
    }
}

#[test]
fn split_sizes_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let m = generate_dataset(&small(Kind::Haze, 10, 5), dir.path()).unwrap();
    let s = split_default(&m, 42).unwrap();
    let sizes = Split::ALL.map(|k| s.entries_in(k).count());
    assert_eq!(sizes, [8, 1, 1]);
    assert_eq!(split_default(&m, 42).unwrap(), s);
    let other = split_default(&m, 43).unwrap();
    assert_eq!(Split::ALL.map(|k| other.entries_in(k).count()), sizes);
    let order = |m: &DatasetManifest| -> Vec<Split> { m.entries.iter().map(|e| m.split_of(&e.clear_id).unwrap()).collect() };
    assert_ne!(order(&s), order(&other));
    for entry in &s.entries {
        let split = s.split_of(&entry.clear_id);
        assert!(entry.corrupted.iter().all(|r| r.split == split));
    }
    assert!(validate_manifest(&s, dir.path()).is_empty());
    assert!(split_manifest(&m, [0.5, 0.4, 0.2], 1).is_err());
}

#[test]
fn fault_injection_is_reported_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let m = generate_dataset(&small(Kind::Haze, 10, 6), dir.path()).unwrap();
    let m = split_default(&m, 6).unwrap();

    fs::remove_file(dir.path().join(&m.entries[2].corrupted[3].path)).unwrap();
    let v = validate_manifest(&m, dir.path());
    assert_eq!(v.len(), 1);
    assert!(matches!(&v[0], Violation::MissingFile { path } if path == &m.entries[2].corrupted[3].path));

    let dir = tempfile::tempdir().unwrap();
    let m = split_default(&generate_dataset(&small(Kind::Haze, 10, 6), dir.path()).unwrap(), 6).unwrap();
    let mut moved = m.clone();
    let record = &mut moved.entries[0].corrupted[5];
    record.split = Some(match record.split.unwrap() {
        Split::Test => Split::Train,
        _ => Split::Test,
    });
    let v = validate_manifest(&moved, dir.path());
    assert_eq!(v.len(), 1);
    assert!(matches!(v[0], Violation::Straddling { level_index: 6, .. }));

    let mut short = m.clone();
    short.entries[1].corrupted.pop();
    assert!(matches!(validate_manifest(&short, dir.path())[..], [Violation::LevelCount { found: 9, .. }]));

    let mut swapped = m;
    swapped.entries[3].corrupted.swap(1, 2);
    assert!(validate_manifest(&swapped, dir.path())
        .iter()
        .any(|v| matches!(v, Violation::NonMonotoneLevels { .. })));
}

#[test]
fn too_few_scenes_rejected() {
    let dir = tempfile::tempdir().unwrap();
    assert!(generate_dataset(&small(Kind::Haze, 9, 0), dir.path()).is_err());
}
