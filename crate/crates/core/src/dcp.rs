//! Dark channel prior restoration.
//!
//! In clear imagery most local patches hold some pixel that is nearly black
//! in at least one channel. Under haze that minimum is lifted toward the
//! airlight, so the normalized dark channel of the observation estimates
//! `1 − t`.

use alloc::vec::Vec;

use crate::{
    error::invalid,
    filter::{guided_filter, min_filter},
    image::{ensure_dims, luma},
    scatter::{invert_scattering, AtmosphericLight},
    ImageBuffer, Result, ScalarMap,
};

/// Lower clamp applied to every estimated airlight channel.
pub const MIN_AIRLIGHT: f32 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DcpParams {
    pub patch_radius: usize,
    /// Fraction of haze removed; values below 1 keep a trace for depth cues.
    pub omega: f32,
    /// Brightest fraction of dark-channel pixels searched for the airlight.
    pub airlight_fraction: f64,
    pub t_floor: f32,
    pub guided_radius: usize,
    pub guided_eps: f64,
}

impl Default for DcpParams {
    fn default() -> Self {
        Self {
            patch_radius: 7,
            omega: 0.95,
            airlight_fraction: 0.001,
            t_floor: 0.1,
            guided_radius: 30,
            guided_eps: 1e-3,
        }
    }
}

impl DcpParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega >= 0.0 && self.omega <= 1.0) {
            return Err(invalid("omega", "must lie in [0, 1]"));
        }
        check_fraction(self.airlight_fraction)?;
        if !(self.t_floor > 0.0 && self.t_floor <= 1.0) {
            return Err(invalid("t_floor", "must lie in (0, 1]"));
        }
        if !(self.guided_eps > 0.0) {
            return Err(invalid("guided_eps", "must be positive"));
        }
        Ok(())
    }
}

fn check_fraction(fraction: f64) -> Result<()> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(invalid("airlight_fraction", "must lie in (0, 1]"));
    }
    Ok(())
}

/// Restored radiance together with the estimates that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Restoration {
    pub image: ImageBuffer,
    pub transmission: ScalarMap,
    pub airlight: AtmosphericLight,
}

/// Channel minimum followed by a patch minimum.
pub fn dark_channel(image: &ImageBuffer, patch_radius: usize) -> ScalarMap {
    min_filter(&image.channel_min(), patch_radius)
}

/// Picks the most luminous pixel among the brightest `fraction` of the dark
/// channel (at least one pixel). Each channel is clamped to `[0.05, 1]`.
///
/// When the dark channel is flat the candidate set carries no information and
/// the globally most luminous pixel is used instead.
pub fn estimate_airlight(image: &ImageBuffer, dark: &ScalarMap, fraction: f64) -> Result<AtmosphericLight> {
    check_fraction(fraction)?;
    ensure_dims(image.dims(), dark.dims())?;
    let n = image.pixel_count();
    let count = (libm::ceil(fraction * n as f64) as usize).clamp(1, n);

    let flat = dark.min_value() == dark.max_value();
    let candidates: Vec<usize> = if flat || count == n {
        (0..n).collect()
    } else {
        let mut order: Vec<usize> = (0..n).collect();
        let d = dark.data();
        // brightest first, ties broken by raster order
        order.select_nth_unstable_by(count - 1, |&a, &b| d[b].total_cmp(&d[a]).then(a.cmp(&b)));
        order.truncate(count);
        order
    };

    let data = image.data();
    let pixel = |i: usize| [data[3 * i], data[3 * i + 1], data[3 * i + 2]];
    let best = candidates
        .iter()
        .copied()
        .max_by(|&a, &b| luma(pixel(a)).total_cmp(&luma(pixel(b))).then(b.cmp(&a)))
        .unwrap_or(0);
    AtmosphericLight::new(pixel(best).map(|v| v.clamp(MIN_AIRLIGHT, 1.0)))
}

/// Coarse `1 − ω·dark(I/A)` clamped to `[t_floor, 1]`, refined by a guided
/// filter against the observation and clamped again.
pub fn estimate_transmission(
    image: &ImageBuffer,
    airlight: &AtmosphericLight,
    params: &DcpParams,
) -> Result<ScalarMap> {
    params.validate()?;
    let a = airlight.rgb();
    let normalized_min: Vec<f32> = image
        .pixels()
        .map(|[r, g, b]| (r / a[0]).min(g / a[1]).min(b / a[2]))
        .collect();
    let (w, h) = image.dims();
    let dark = min_filter(&ScalarMap::new(w, h, normalized_min)?, params.patch_radius);
    let coarse = dark.map(|d| (1.0 - params.omega * d).clamp(params.t_floor, 1.0));
    let refined = guided_filter(image, &coarse, params.guided_radius, params.guided_eps)?;
    Ok(refined.clamp(params.t_floor, 1.0))
}

/// Full dark channel prior pipeline.
pub fn dehaze_dcp(image: &ImageBuffer, params: &DcpParams) -> Result<Restoration> {
    params.validate()?;
    let dark = dark_channel(image, params.patch_radius);
    let airlight = estimate_airlight(image, &dark, params.airlight_fraction)?;
    let transmission = estimate_transmission(image, &airlight, params)?;
    let restored = invert_scattering(image, &transmission, &airlight, params.t_floor)?;
    Ok(Restoration {
        image: restored,
        transmission,
        airlight,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scatter::{apply_scattering, transmission_from_depth, HazeSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_image(seed: u64, w: usize, h: usize) -> ImageBuffer {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ImageBuffer::from_fn(w, h, |_, _| [rng.random(), rng.random(), rng.random()]).unwrap()
    }

    #[test]
    fn dark_channel_constant_cases() {
        let white = ImageBuffer::filled(9, 9, [1.0; 3]).unwrap();
        assert!(dark_channel(&white, 2).data().iter().all(|&v| v == 1.0));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let no_blue = ImageBuffer::from_fn(9, 9, |_, _| [rng.random(), rng.random(), 0.0]).unwrap();
        assert!(dark_channel(&no_blue, 2).data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn dark_channel_matches_triple_loop() {
        let img = random_image(4, 8, 8);
        let out = dark_channel(&img, 1);
        for y in 0..8usize {
            for x in 0..8usize {
                let mut m = f32::INFINITY;
                for sy in y.saturating_sub(1)..=(y + 1).min(7) {
                    for sx in x.saturating_sub(1)..=(x + 1).min(7) {
                        for c in img.pixel(sx, sy) {
                            m = m.min(c);
                        }
                    }
                }
                assert_eq!(out.get(x, y), m);
            }
        }
    }

    #[test]
    fn dark_channel_never_exceeds_channel_minimum() {
        let img = random_image(5, 20, 13);
        let dark = dark_channel(&img, 3);
        for (d, m) in dark.data().iter().zip(img.channel_min().data()) {
            assert!(d <= m);
        }
    }

    #[test]
    fn airlight_of_constant_image() {
        let img = ImageBuffer::filled(10, 10, [0.6, 0.5, 0.02]).unwrap();
        let dark = dark_channel(&img, 1);
        let a = estimate_airlight(&img, &dark, 0.01).unwrap();
        assert_eq!(a.rgb(), [0.6, 0.5, 0.05]);
    }

    #[test]
    fn airlight_full_fraction_is_global_brightest() {
        let mut img = random_image(6, 12, 12).into_data();
        let k = 3 * (5 * 12 + 7);
        img[k..k + 3].copy_from_slice(&[1.0, 1.0, 0.99]);
        let img = ImageBuffer::new(12, 12, img).unwrap();
        let dark = dark_channel(&img, 2);
        let a = estimate_airlight(&img, &dark, 1.0).unwrap();
        assert_eq!(a.rgb(), [1.0, 1.0, 0.99]);
    }

    #[test]
    fn airlight_recovered_under_dense_haze() {
        let j = random_image(7, 64, 64);
        let depth = ScalarMap::from_fn(64, 64, |x, y| 1.0 + 0.03 * (x + y) as f32).unwrap();
        let t = transmission_from_depth(&depth, &HazeSpec { beta: 1.5 }).unwrap();
        let truth = AtmosphericLight::gray(0.8).unwrap();
        let hazy = apply_scattering(&j, &t, &truth).unwrap();
        let dark = dark_channel(&hazy, 7);
        let a = estimate_airlight(&hazy, &dark, 0.001).unwrap();
        for c in a.rgb() {
            assert!((c - 0.8).abs() <= 0.05, "estimated {c}");
        }
    }

    #[test]
    fn transmission_bounds_and_degeneracies() {
        let img = random_image(8, 40, 30);
        let a = AtmosphericLight::gray(0.9).unwrap();
        let params = DcpParams {
            guided_radius: 5,
            ..DcpParams::default()
        };
        let t = estimate_transmission(&img, &a, &params).unwrap();
        assert!(t.data().iter().all(|&v| (params.t_floor..=1.0).contains(&v)));

        let no_haze = DcpParams { omega: 0.0, ..params };
        let t = estimate_transmission(&img, &a, &no_haze).unwrap();
        assert!(t.data().iter().all(|&v| v == 1.0));

        // true dark channel of zero everywhere
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let dark_img = ImageBuffer::from_fn(40, 30, |_, _| [rng.random(), 0.0, rng.random()]).unwrap();
        let t = estimate_transmission(&dark_img, &a, &params).unwrap();
        assert!(t.data().iter().all(|&v| v >= 1.0 - params.omega - 1e-6));
    }

    #[test]
    fn black_input_is_survivable() {
        let img = ImageBuffer::filled(32, 32, [0.0; 3]).unwrap();
        let out = dehaze_dcp(&img, &DcpParams::default()).unwrap();
        assert!(out.image.data().iter().all(|v| v.is_finite()));
    }

    #[test]
    fn params_are_validated() {
        let img = random_image(1, 16, 16);
        for bad in [
            DcpParams { omega: 1.5, ..DcpParams::default() },
            DcpParams { t_floor: 0.0, ..DcpParams::default() },
            DcpParams { airlight_fraction: 0.0, ..DcpParams::default() },
            DcpParams { guided_eps: 0.0, ..DcpParams::default() },
        ] {
            assert!(dehaze_dcp(&img, &bad).is_err());
        }
    }
}
