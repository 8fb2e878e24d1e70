//! Forward atmospheric scattering and its inversion.
//!
//! An observation is a per-pixel blend of scene radiance and airlight,
//! `I = t·J + (1 − t)·A`, with transmission `t = exp(−β·d)` for extinction
//! `β` and depth `d`. Homogeneous haze uses one `β`; smoke modulates `β` per
//! pixel with a seeded fBm field.

use alloc::vec::Vec;

use crate::{
    error::{invalid, Error},
    image::ensure_dims,
    noise::Fbm,
    ImageBuffer, Result, ScalarMap,
};

/// Extinction ladder (1/m) for the ten default haze levels, lightest first.
pub const DEFAULT_HAZE_LADDER: [f64; 10] = [0.05, 0.10, 0.20, 0.30, 0.45, 0.60, 0.80, 1.00, 1.30, 1.60];

/// Lower bound on transmission used when inverting.
pub const DEFAULT_T_FLOOR: f32 = 0.05;

/// Smoke noise cells across the shorter image side at the first octave.
pub const SMOKE_BASE_CELLS: f64 = 4.0;

/// Global airlight colour. Every channel lies in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "[f32; 3]", into = "[f32; 3]"))]
pub struct AtmosphericLight([f32; 3]);

impl AtmosphericLight {
    pub const HAZE_DEFAULT: Self = Self([0.85, 0.85, 0.85]);
    pub const SMOKE_DEFAULT: Self = Self([0.70, 0.68, 0.66]);

    pub fn new(rgb: [f32; 3]) -> Result<Self> {
        if rgb.iter().all(|v| v.is_finite() && *v > 0.0 && *v <= 1.0) {
            Ok(Self(rgb))
        } else {
            Err(invalid("airlight", "every channel must lie in (0, 1]"))
        }
    }

    pub fn gray(v: f32) -> Result<Self> {
        Self::new([v; 3])
    }

    #[inline]
    pub fn rgb(&self) -> [f32; 3] {
        self.0
    }
}

impl TryFrom<[f32; 3]> for AtmosphericLight {
    type Error = Error;

    fn try_from(rgb: [f32; 3]) -> Result<Self> {
        Self::new(rgb)
    }
}

impl From<AtmosphericLight> for [f32; 3] {
    fn from(a: AtmosphericLight) -> Self {
        a.0
    }
}

/// Homogeneous haze.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HazeSpec {
    /// Extinction coefficient in 1/m.
    pub beta: f64,
}

impl HazeSpec {
    pub fn new(beta: f64) -> Result<Self> {
        let spec = Self { beta };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(invalid("beta", "must be finite and non-negative"));
        }
        Ok(())
    }
}

/// Inhomogeneous smoke: `β(x) = base_beta · (1 + density_scale · fbm(x))`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SmokeSpec {
    pub base_beta: f64,
    pub octaves: u32,
    pub lacunarity: f64,
    pub gain: f64,
    pub density_scale: f64,
    pub seed: u64,
}

impl SmokeSpec {
    /// Five-octave smoke whose extinction ranges over `[base_beta, 3·base_beta]`.
    pub fn with_defaults(base_beta: f64, seed: u64) -> Self {
        Self {
            base_beta,
            octaves: 5,
            lacunarity: 2.0,
            gain: 0.5,
            density_scale: 2.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.base_beta.is_finite() && self.base_beta >= 0.0) {
            return Err(invalid("base_beta", "must be finite and non-negative"));
        }
        if self.octaves < 1 {
            return Err(invalid("octaves", "must be at least 1"));
        }
        if !(self.lacunarity > 1.0 && self.lacunarity.is_finite()) {
            return Err(invalid("lacunarity", "must be greater than 1"));
        }
        if !(self.gain > 0.0 && self.gain < 1.0) {
            return Err(invalid("gain", "must lie in (0, 1)"));
        }
        if !(self.density_scale.is_finite() && self.density_scale >= 0.0) {
            return Err(invalid("density_scale", "must be finite and non-negative"));
        }
        Ok(())
    }

    fn fbm(&self) -> Fbm {
        Fbm {
            octaves: self.octaves,
            lacunarity: self.lacunarity,
            gain: self.gain,
            seed: self.seed,
        }
    }

    /// Per-pixel extinction field for a `width × height` frame.
    pub fn beta_field(&self, width: usize, height: usize) -> Result<ScalarMap> {
        self.validate()?;
        let fbm = self.fbm();
        let scale = SMOKE_BASE_CELLS / width.min(height).max(1) as f64;
        ScalarMap::from_fn(width, height, |x, y| {
            let n = fbm.sample((x as f64 + 0.5) * scale, (y as f64 + 0.5) * scale);
            (self.base_beta * (1.0 + self.density_scale * n)) as f32
        })
    }
}

/// One corruption level.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "lowercase"))]
pub enum Corruption {
    Haze(HazeSpec),
    Smoke(SmokeSpec),
}

impl Corruption {
    /// Nominal density used to order levels.
    pub fn base_beta(&self) -> f64 {
        match self {
            Self::Haze(h) => h.beta,
            Self::Smoke(s) => s.base_beta,
        }
    }

    pub fn transmission(&self, depth: &ScalarMap) -> Result<ScalarMap> {
        match self {
            Self::Haze(h) => transmission_from_depth(depth, h),
            Self::Smoke(s) => smoke_transmission(depth, s),
        }
    }
}

fn check_depth(depth: &ScalarMap) -> Result<()> {
    match depth
        .data()
        .iter()
        .enumerate()
        .find(|(_, d)| !(d.is_finite() && **d > 0.0))
    {
        Some((index, &value)) => Err(Error::NonPositiveDepth { index, value }),
        None => Ok(()),
    }
}

#[inline]
fn attenuate(beta: f64, depth: f32) -> f32 {
    (libm::exp(-beta * f64::from(depth)) as f32).max(f32::MIN_POSITIVE)
}

/// `t(x) = exp(−β·d(x))`.
pub fn transmission_from_depth(depth: &ScalarMap, spec: &HazeSpec) -> Result<ScalarMap> {
    spec.validate()?;
    check_depth(depth)?;
    Ok(depth.map(|d| attenuate(spec.beta, d)))
}

/// `t(x) = exp(−β(x)·d(x))` with `β(x)` from the seeded smoke field.
pub fn smoke_transmission(depth: &ScalarMap, spec: &SmokeSpec) -> Result<ScalarMap> {
    check_depth(depth)?;
    if spec.density_scale == 0.0 {
        return transmission_from_depth(depth, &HazeSpec { beta: spec.base_beta });
    }
    let (w, h) = depth.dims();
    let beta = spec.beta_field(w, h)?;
    let data = depth
        .data()
        .iter()
        .zip(beta.data())
        .map(|(&d, &b)| attenuate(f64::from(b), d))
        .collect();
    ScalarMap::new(w, h, data)
}

/// `I_c = t·J_c + (1 − t)·a_c`.
pub fn apply_scattering(
    radiance: &ImageBuffer,
    transmission: &ScalarMap,
    airlight: &AtmosphericLight,
) -> Result<ImageBuffer> {
    ensure_dims(radiance.dims(), transmission.dims())?;
    let a = airlight.rgb().map(f64::from);
    let mut out = Vec::with_capacity(radiance.data().len());
    for (px, &t) in radiance.data().chunks_exact(3).zip(transmission.data()) {
        let t = f64::from(t);
        for c in 0..3 {
            out.push((t * f64::from(px[c]) + (1.0 - t) * a[c]) as f32);
        }
    }
    ImageBuffer::from_clamped(radiance.width(), radiance.height(), out)
}

/// `J_c = (I_c − a_c) / max(t, t_floor) + a_c`, clamped to `[0, 1]`.
pub fn invert_scattering(
    observed: &ImageBuffer,
    transmission: &ScalarMap,
    airlight: &AtmosphericLight,
    t_floor: f32,
) -> Result<ImageBuffer> {
    if !(t_floor > 0.0 && t_floor <= 1.0) {
        return Err(invalid("t_floor", "must lie in (0, 1]"));
    }
    ensure_dims(observed.dims(), transmission.dims())?;
    let a = airlight.rgb().map(f64::from);
    let mut out = Vec::with_capacity(observed.data().len());
    for (px, &t) in observed.data().chunks_exact(3).zip(transmission.data()) {
        let t = f64::from(t.max(t_floor));
        for c in 0..3 {
            out.push(((f64::from(px[c]) - a[c]) / t + a[c]) as f32);
        }
    }
    ImageBuffer::from_clamped(observed.width(), observed.height(), out)
}

/// One corrupted observation and the transmission that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct CorruptedLevel {
    pub image: ImageBuffer,
    pub transmission: ScalarMap,
}

/// Corrupts `radiance` once per level. Levels must be strictly increasing in
/// base extinction.
pub fn corrupt_levels(
    radiance: &ImageBuffer,
    depth: &ScalarMap,
    airlight: &AtmosphericLight,
    levels: &[Corruption],
) -> Result<Vec<CorruptedLevel>> {
    ensure_dims(radiance.dims(), depth.dims())?;
    for (index, pair) in levels.windows(2).enumerate() {
        if !(pair[1].base_beta() > pair[0].base_beta()) {
            return Err(Error::NonMonotoneLevels { index: index + 1 });
        }
    }
    levels
        .iter()
        .map(|level| {
            let transmission = level.transmission(depth)?;
            let image = apply_scattering(radiance, &transmission, airlight)?;
            Ok(CorruptedLevel {
                image,
                transmission,
            })
        })
        .collect()
}

/// One homogeneous haze level per extinction in `ladder`.
pub fn haze_levels(ladder: &[f64]) -> Vec<Corruption> {
    ladder
        .iter()
        .map(|&beta| Corruption::Haze(HazeSpec { beta }))
        .collect()
}

/// One smoke level per base extinction in `ladder`, each with its own field
/// seed derived from `seed`.
pub fn smoke_levels(ladder: &[f64], seed: u64) -> Vec<Corruption> {
    ladder
        .iter()
        .enumerate()
        .map(|(k, &beta)| {
            let level_seed = seed
                .wrapping_mul(0x2545_F491_4F6C_DD1D)
                .wrapping_add(k as u64 + 1);
            Corruption::Smoke(SmokeSpec::with_defaults(beta, level_seed))
        })
        .collect()
}

/// The default ten-level homogeneous haze ladder.
pub fn default_haze_levels() -> Vec<Corruption> {
    haze_levels(&DEFAULT_HAZE_LADDER)
}

/// Ten smoke levels on the default ladder with distinct per-level seeds.
pub fn default_smoke_levels(seed: u64) -> Vec<Corruption> {
    smoke_levels(&DEFAULT_HAZE_LADDER, seed)
}
