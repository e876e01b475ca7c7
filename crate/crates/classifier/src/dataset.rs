//! Dataset synthesis: random part variants per class, orientation
//! augmentation, and on-disk shards.
//!
//! A shard is a directory of dense voxel files plus a `manifest.tsv`
//! describing one sample per line. Samples are ordered by
//! (class, variant, invariant) and the split is stratified per class and
//! disjoint by variant: every orientation of a variant lands on the same
//! side, so voted evaluation never sees a variant it trained on.

use std::fs;
use std::io::{BufWriter, Read, Write};
use std::ops::Range;
use std::path::{Path, PathBuf};

use geomcore::rng::{below_u64, choose, seeded};
use geomcore::{DimensionRow, DimensionTable, PartModel, StandardClass};
use meshkit::{tessellate, DEFAULT_CHORD_TOL};
use rayon::prelude::*;
use voxelizer::{make_invariants, read_dense_file, write_dense_file, VoxelGrid};

use crate::error::DatasetError;

/// Decorrelated stream seed for (master, domain, index). Splitmix-style
/// finalizer; collisions between distinct triples are as unlikely as random
/// 64-bit collisions.
pub(crate) fn sub_seed(master: u64, domain: u64, index: u64) -> u64 {
    let mut z = master
        ^ domain.wrapping_mul(0x9e37_79b9_7f4a_7c15)
        ^ index.wrapping_mul(0xd1b5_4a32_d192_ed03);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const DOMAIN_PART: u64 = 1;
const DOMAIN_ORIENT: u64 = 2;
const DOMAIN_SPLIT: u64 = 3;

/// How much data to generate and how to cut it.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    /// Random variants per standard class (classes 1–9).
    pub variants_per_class: usize,
    /// Variants of the non-standard catch-all class.
    pub other_variants: usize,
    /// Orientations voxelized per variant.
    pub invariants: usize,
    pub resolution: usize,
    /// Fraction of each class's variants held out for testing; in (0, 1).
    pub test_fraction: f64,
    pub master_seed: u64,
}

impl DatasetSpec {
    /// Desk-scale defaults: 20 variants per standard class plus the
    /// catch-all at 4x, 10 orientations each, 32^3 — 2600 samples total.
    pub fn desk(master_seed: u64) -> DatasetSpec {
        DatasetSpec {
            variants_per_class: 20,
            other_variants: 80,
            invariants: 10,
            resolution: 32,
            test_fraction: 0.2,
            master_seed,
        }
    }

    pub fn validate(&self) -> Result<(), DatasetError> {
        let bad = |m: &str| Err(DatasetError::BadSpec(m.into()));
        if self.variants_per_class == 0 || self.other_variants == 0 {
            return bad("every class needs at least one variant");
        }
        if self.invariants == 0 {
            return bad("need at least one orientation per variant");
        }
        if self.resolution < 8 {
            return bad("resolution below 8 cannot carry shape information");
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return bad("test fraction must lie strictly between 0 and 1");
        }
        Ok(())
    }

    pub fn total_samples(&self) -> usize {
        (9 * self.variants_per_class + self.other_variants) * self.invariants
    }
}

/// Random parametric variant of one class: a uniformly chosen tabulated row
/// (across all standards of the family) with a uniformly chosen admissible
/// length and strength grade where the family has one.
pub fn synth_variant(class: StandardClass, seed: u64) -> Result<PartModel, geomcore::GeomError> {
    let mut rng = seeded(seed);
    let table = DimensionTable::global();
    let strengths = ["8.8", "10.9", "12.9"];

    // (standards, needs length, takes strength)
    let (standards, with_len, with_strength): (&[&str], bool, bool) = match class {
        StandardClass::HexHeadScrew => (&["ISO 4014", "ISO 4017", "ISO 8676"], true, true),
        StandardClass::HexSocketHeadCapScrew => (&["ISO 4762"], true, true),
        StandardClass::HexSocketCountersunkScrew => (&["ISO 10642"], true, true),
        StandardClass::HexNut => (
            &["ISO 4032", "ISO 4033", "ISO 4035", "ISO 8673", "ISO 8674", "ISO 8675"],
            false,
            true,
        ),
        StandardClass::RetainingRingShaft => (&["DIN 471"], false, false),
        StandardClass::RetainingRingBore => (&["DIN 472"], false, false),
        StandardClass::ParallelKeyA | StandardClass::ParallelKeyC => (&["DIN 6885"], true, false),
        StandardClass::ChamferedPlainWasher => (&["ISO 7090"], false, false),
        StandardClass::Other => return Ok(geomcore::random::make_random_part(seed)),
    };

    let key_prefix = match class {
        StandardClass::ParallelKeyA => Some("A-"),
        StandardClass::ParallelKeyC => Some("C-"),
        _ => None,
    };
    let mut rows: Vec<(&str, &DimensionRow)> = Vec::new();
    for std_name in standards {
        for row in table.rows_for(std_name) {
            if let Some(p) = key_prefix {
                if !row.size.starts_with(p) {
                    continue;
                }
            }
            if with_len && row.lengths().is_empty() {
                continue;
            }
            rows.push((std_name, row));
        }
    }
    assert!(!rows.is_empty(), "embedded table covers every family");
    let &(std_name, row) = choose(&mut rng, &rows);
    let length = if with_len {
        Some(*choose(&mut rng, &row.lengths()))
    } else {
        None
    };
    let strength = if with_strength {
        Some(*choose(&mut rng, &strengths))
    } else {
        None
    };
    geomcore::build::make_from_standard(std_name, &row.size, length, strength)
}

#[derive(Debug, Clone)]
struct PlannedVariant {
    class: u8,
    /// Globally unique variant id (stable across the whole dataset).
    variant: u32,
    part_seed: u64,
    orient_seed: u64,
    test: bool,
}

fn plan_variants(spec: &DatasetSpec) -> Vec<PlannedVariant> {
    let mut plan = Vec::new();
    let mut vid = 0u32;
    for code in 1..=10u8 {
        let count = if code == 10 {
            spec.other_variants
        } else {
            spec.variants_per_class
        };
        for _ in 0..count {
            plan.push(PlannedVariant {
                class: code,
                variant: vid,
                part_seed: sub_seed(spec.master_seed, DOMAIN_PART, vid as u64),
                orient_seed: sub_seed(spec.master_seed, DOMAIN_ORIENT, vid as u64),
                test: false,
            });
            vid += 1;
        }
    }
    // Global variant-level split: shuffle all variant slots once and hold
    // out the first round(total * fraction), at least one. Whole variants
    // move as a unit; classes keep their 1..4x proportions in expectation.
    let mut order: Vec<usize> = (0..plan.len()).collect();
    let mut rng = seeded(sub_seed(spec.master_seed, DOMAIN_SPLIT, 0));
    for i in (1..order.len()).rev() {
        order.swap(i, below_u64(&mut rng, i as u64 + 1) as usize);
    }
    let test_k = ((plan.len() as f64 * spec.test_fraction).round() as usize).max(1);
    for &slot in order.iter().take(test_k) {
        plan[slot].test = true;
    }
    plan
}

/// One sample's manifest row.
#[derive(Debug, Clone, PartialEq)]
pub struct ShardSample {
    pub file: String,
    pub class: u8,
    pub variant: u32,
    pub invariant: u32,
    pub part_seed: u64,
    pub orient_seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetPaths {
    pub root: PathBuf,
    pub train: PathBuf,
    pub test: PathBuf,
}

struct ShardWriter {
    dir: PathBuf,
    rows: Vec<ShardSample>,
}

impl ShardWriter {
    fn new(dir: PathBuf) -> Result<ShardWriter, DatasetError> {
        fs::create_dir_all(&dir)?;
        Ok(ShardWriter { dir, rows: Vec::new() })
    }

    fn push(&mut self, v: &PlannedVariant, invariant: u32, grid: &VoxelGrid) -> Result<(), DatasetError> {
        let file = format!("{:06}.vox", self.rows.len());
        write_dense_file(grid, self.dir.join(&file))?;
        self.rows.push(ShardSample {
            file,
            class: v.class,
            variant: v.variant,
            invariant,
            part_seed: v.part_seed,
            orient_seed: v.orient_seed,
        });
        Ok(())
    }

    fn finish(self, resolution: usize) -> Result<(), DatasetError> {
        let mut w = BufWriter::new(fs::File::create(self.dir.join("manifest.tsv"))?);
        writeln!(w, "# shard v1")?;
        writeln!(w, "# resolution {resolution}")?;
        writeln!(w, "# samples {}", self.rows.len())?;
        writeln!(w, "# columns file class label variant invariant part_seed orient_seed")?;
        for r in &self.rows {
            let label = StandardClass::from_code(r.class).expect("valid code").label();
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.file, r.class, label, r.variant, r.invariant, r.part_seed, r.orient_seed
            )?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Generate the full dataset under `root` as `root/train` and `root/test`.
/// Deterministic in the master seed: the same spec writes byte-identical
/// shards every time, independent of thread count.
pub fn build_dataset(spec: &DatasetSpec, root: &Path) -> Result<DatasetPaths, DatasetError> {
    spec.validate()?;
    let plan = plan_variants(spec);
    let paths = DatasetPaths {
        root: root.to_path_buf(),
        train: root.join("train"),
        test: root.join("test"),
    };
    let mut train = ShardWriter::new(paths.train.clone())?;
    let mut test = ShardWriter::new(paths.test.clone())?;

    // Variants are independent, so synthesize and voxelize in parallel but
    // write in plan order; chunking bounds peak memory at any resolution.
    for chunk in plan.chunks(16) {
        let grids: Vec<Result<Vec<VoxelGrid>, DatasetError>> = chunk
            .par_iter()
            .map(|v| {
                let class = StandardClass::from_code(v.class).expect("valid code");
                let part = synth_variant(class, v.part_seed)?;
                let mesh = tessellate(&part, DEFAULT_CHORD_TOL)?;
                Ok(make_invariants(&mesh, spec.resolution, spec.invariants, v.orient_seed)?)
            })
            .collect();
        for (v, grids) in chunk.iter().zip(grids) {
            let sink = if v.test { &mut test } else { &mut train };
            for (k, g) in grids?.iter().enumerate() {
                sink.push(v, k as u32, g)?;
            }
        }
    }
    train.finish(spec.resolution)?;
    test.finish(spec.resolution)?;
    Ok(paths)
}

/// A shard held in memory: occupancy bytes (one per voxel) plus metadata,
/// in manifest order.
#[derive(Debug, Clone)]
pub struct LoadedShard {
    pub resolution: usize,
    pub samples: Vec<ShardSample>,
    voxels: Vec<Vec<u8>>,
}

impl LoadedShard {
    /// Assemble a shard without touching disk (smoke runs, tests).
    pub fn from_parts(resolution: usize, samples: Vec<ShardSample>, voxels: Vec<Vec<u8>>) -> LoadedShard {
        assert_eq!(samples.len(), voxels.len());
        for v in &voxels {
            assert_eq!(v.len(), resolution.pow(3), "voxel buffer must be r^3 bytes");
        }
        LoadedShard { resolution, samples, voxels }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn tensor<F: cnn::Scalar>(&self, i: usize) -> cnn::Tensor4<F> {
        let r = self.resolution;
        cnn::Tensor4::new(
            [1, r, r, r],
            self.voxels[i].iter().map(|&b| F::of(b as f64)).collect(),
        )
    }

    pub fn target<F: cnn::Scalar>(&self, i: usize) -> Vec<F> {
        one_hot(self.samples[i].class)
    }

    /// Consecutive runs of one variant: (class, variant, sample range).
    pub fn variant_groups(&self) -> Vec<(u8, u32, Range<usize>)> {
        let mut out: Vec<(u8, u32, Range<usize>)> = Vec::new();
        for (i, s) in self.samples.iter().enumerate() {
            match out.last_mut() {
                Some((c, v, r)) if *c == s.class && *v == s.variant => r.end = i + 1,
                _ => out.push((s.class, s.variant, i..i + 1)),
            }
        }
        out
    }
}

/// One-hot target over the ten class codes; code 10 (the catch-all) is the
/// last slot.
pub fn one_hot<F: cnn::Scalar>(class_code: u8) -> Vec<F> {
    assert!((1..=10).contains(&class_code), "class codes are 1..=10");
    let mut t = vec![F::zero(); 10];
    t[class_code as usize - 1] = F::one();
    t
}

fn manifest_err(line: usize, reason: impl Into<String>) -> DatasetError {
    DatasetError::Manifest { line, reason: reason.into() }
}

/// Read a shard directory (manifest + voxel files) back into memory.
pub fn load_shard(dir: &Path) -> Result<LoadedShard, DatasetError> {
    let text = fs::read_to_string(dir.join("manifest.tsv"))?;
    let mut lines = text.lines().enumerate();
    let (_, first) = lines.next().ok_or_else(|| manifest_err(1, "empty manifest"))?;
    if first != "# shard v1" {
        return Err(manifest_err(1, format!("unknown shard format {first:?}")));
    }
    let mut resolution = None;
    let mut samples = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if let Some(rest) = line.strip_prefix('#') {
            let mut it = rest.split_whitespace();
            if it.next() == Some("resolution") {
                let r = it
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| manifest_err(line_no, "bad resolution header"))?;
                resolution = Some(r);
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 7 {
            return Err(manifest_err(line_no, format!("expected 7 columns, got {}", cols.len())));
        }
        let parse = |s: &str, what: &str| -> Result<u64, DatasetError> {
            s.parse::<u64>().map_err(|_| manifest_err(line_no, format!("bad {what} {s:?}")))
        };
        let class = parse(cols[1], "class")? as u8;
        if StandardClass::from_code(class).is_none() {
            return Err(manifest_err(line_no, format!("class code {class} out of range")));
        }
        samples.push(ShardSample {
            file: cols[0].to_string(),
            class,
            variant: parse(cols[3], "variant")? as u32,
            invariant: parse(cols[4], "invariant")? as u32,
            part_seed: parse(cols[5], "part seed")?,
            orient_seed: parse(cols[6], "orient seed")?,
        });
    }
    let resolution = resolution.ok_or_else(|| manifest_err(1, "missing resolution header"))?;

    let voxels: Vec<Vec<u8>> = samples
        .par_iter()
        .map(|s| -> Result<Vec<u8>, DatasetError> {
            let grid = read_dense_file(dir.join(&s.file))?;
            if grid.resolution() != resolution {
                return Err(manifest_err(
                    0,
                    format!("{} is {}^3, manifest says {}^3", s.file, grid.resolution(), resolution),
                ));
            }
            Ok(grid.data().to_vec())
        })
        .collect::<Result<_, _>>()?;
    Ok(LoadedShard { resolution, samples, voxels })
}

/// FNV-1a over the manifest bytes and every voxel file in manifest order.
/// Not cryptographic; it exists so determinism tests can compare shards
/// without hauling both trees around.
pub fn shard_checksum(dir: &Path) -> Result<u64, DatasetError> {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    let eat = |bytes: &[u8], h: &mut u64| {
        for &b in bytes {
            *h ^= b as u64;
            *h = h.wrapping_mul(PRIME);
        }
    };
    let manifest = fs::read(dir.join("manifest.tsv"))?;
    eat(&manifest, &mut h);
    for line in String::from_utf8_lossy(&manifest).lines() {
        if line.starts_with('#') || line.is_empty() {
            continue;
        }
        let file = line.split('\t').next().expect("split yields at least one");
        let mut f = fs::File::open(dir.join(file))?;
        let mut buf = Vec::new();
        f.read_to_end(&mut buf)?;
        eat(&buf, &mut h);
    }
    Ok(h)
}
