//! Procedural analog-gauge scenes with paired depth.
//!
//! A gauge is a dark mounting plate carrying a round dial: dark bezel,
//! white face, major and minor ticks, a red zone near the top of the scale,
//! a dark-red needle and a hub. A supply pipe drops from the plate to the
//! bottom edge. The wall behind is painted in a saturated colour with a
//! low-frequency texture. Camera yaw foreshortens the gauge horizontally.
//! All gauge geometry is drawn in dial-local coordinates, so a symmetric
//! sweep renders mirror-symmetric about the vertical bisector.
//!
//! Angles are in degrees, measured clockwise from twelve o'clock.

use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{error::invalid, noise::value_noise, ImageBuffer, Result, ScalarMap};

pub const MIN_CAMERA_DISTANCE: f64 = 0.5;
pub const MAX_CAMERA_DISTANCE: f64 = 10.0;
pub const MIN_RENDER_SIZE: usize = 64;

/// Fractional depth increase of the wall at the image corners.
pub const WALL_DEPTH_GRADIENT: f64 = 0.15;
/// Fractional depth tilt across the wall induced by camera yaw.
pub const WALL_DEPTH_TILT: f64 = 0.05;

const BEZEL_INNER: f64 = 0.88;
const PLATE_HALF: f64 = 1.15;
const PIPE_HALF: f64 = 0.18;
const HUB_RADIUS: f64 = 0.07;
const NEEDLE_LENGTH: f64 = 0.80;
const NEEDLE_TAIL: f64 = 0.15;
const NEEDLE_HALF_WIDTH: f64 = 0.028;

const FACE: [f64; 3] = [0.95, 0.95, 0.94];
const TICK: [f64; 3] = [0.06, 0.06, 0.07];
const RED_ZONE: [f64; 3] = [0.78, 0.14, 0.10];
const NEEDLE: [f64; 3] = [0.55, 0.05, 0.04];
const HUB: [f64; 3] = [0.10, 0.10, 0.11];
const BEZEL: [f64; 3] = [0.18, 0.18, 0.20];
const PLATE: [f64; 3] = [0.11, 0.11, 0.12];
const PIPE: [f64; 3] = [0.19, 0.19, 0.21];

/// Parameters of one gauge scene.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GaugeSceneSpec {
    pub seed: u64,
    pub needle_angle: f64,
    /// `(start, end)` of the dial scale.
    pub dial_sweep: (f64, f64),
    pub tick_count: u32,
    pub scale_range: (f64, f64),
    /// Metres from the camera to the gauge face.
    pub camera_distance: f64,
    pub camera_yaw: f64,
    pub background_brightness: f64,
    /// Dial radius as a fraction of half the shorter image side.
    pub gauge_radius: f64,
}

impl GaugeSceneSpec {
    pub fn validate(&self) -> Result<()> {
        let (start, end) = self.dial_sweep;
        if !(start.is_finite() && end.is_finite() && start < end && end - start <= 360.0) {
            return Err(invalid("dial_sweep", "start must precede end within one turn"));
        }
        if !(self.needle_angle >= start && self.needle_angle <= end) {
            return Err(invalid("needle_angle", "must lie within the dial sweep"));
        }
        if self.tick_count < 2 {
            return Err(invalid("tick_count", "must be at least 2"));
        }
        if !(self.scale_range.0 < self.scale_range.1) {
            return Err(invalid("scale_range", "min must be below max"));
        }
        if !(self.camera_distance >= MIN_CAMERA_DISTANCE && self.camera_distance <= MAX_CAMERA_DISTANCE) {
            return Err(invalid("camera_distance", "must lie in [0.5, 10] metres"));
        }
        if !(self.camera_yaw.abs() < 80.0) {
            return Err(invalid("camera_yaw", "must lie in (-80, 80) degrees"));
        }
        if !(0.0..=1.0).contains(&self.background_brightness) {
            return Err(invalid("background_brightness", "must lie in [0, 1]"));
        }
        if !(self.gauge_radius > 0.0 && self.gauge_radius * PLATE_HALF <= 1.0) {
            return Err(invalid("gauge_radius", "mounting plate must fit inside the frame"));
        }
        Ok(())
    }

    /// Number of minor subdivisions between major ticks, from the scale step.
    pub fn minor_divisions(&self) -> u32 {
        let step = (self.scale_range.1 - self.scale_range.0) / f64::from(self.tick_count - 1);
        let mantissa = step / libm::pow(10.0, libm::floor(libm::log10(step)));
        let m = libm::round(mantissa * 1000.0) / 1000.0;
        if m == 1.0 || m == 5.0 {
            5
        } else if m == 2.0 || m == 4.0 || m == 8.0 {
            4
        } else if m == 2.5 {
            5
        } else {
            2
        }
    }
}

/// Samples a scene with every field inside its valid range.
pub fn random_scene(seed: u64) -> GaugeSceneSpec {
    const SCALE_MAXIMA: [f64; 12] = [1.0, 1.6, 2.5, 4.0, 6.0, 10.0, 16.0, 25.0, 40.0, 60.0, 100.0, 250.0];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half_sweep = rng.random_range(100.0..=150.0);
    let needle_angle = rng.random_range(-half_sweep..=half_sweep);
    let tick_count = rng.random_range(5..=13);
    let scale_max = SCALE_MAXIMA[rng.random_range(0..SCALE_MAXIMA.len())];
    GaugeSceneSpec {
        seed,
        needle_angle,
        dial_sweep: (-half_sweep, half_sweep),
        tick_count,
        scale_range: (0.0, scale_max),
        camera_distance: rng.random_range(1.5..=2.5),
        camera_yaw: rng.random_range(-30.0..=30.0),
        background_brightness: rng.random_range(0.25..=0.75),
        gauge_radius: rng.random_range(0.45..=0.8),
    }
}

struct Geometry {
    cx: f64,
    cy: f64,
    radius: f64,
    squash: f64,
    half_diag: f64,
    ticks: alloc::vec::Vec<Tick>,
    needle_dir: (f64, f64),
    red_zone: (f64, f64),
    wall_tint: [f64; 3],
    wall_seed: u64,
    spec: GaugeSceneSpec,
}

struct Tick {
    dir: (f64, f64),
    inner: f64,
    half_width: f64,
}

#[derive(PartialEq)]
enum Layer {
    Wall,
    Pipe,
    Plate,
    Bezel,
    Face,
    RedZone,
    Tick,
    Needle,
    Hub,
}

#[inline]
fn direction(angle_deg: f64) -> (f64, f64) {
    let a = angle_deg * PI / 180.0;
    (libm::sin(a), -libm::cos(a))
}

impl Geometry {
    fn new(spec: &GaugeSceneSpec, width: usize, height: usize) -> Self {
        let (start, end) = spec.dial_sweep;
        let majors = spec.tick_count as usize;
        let minors = spec.minor_divisions() as usize;
        let steps = (majors - 1) * minors;
        let ticks = (0..=steps)
            .map(|k| {
                let angle = start + (end - start) * k as f64 / steps as f64;
                let major = k % minors == 0;
                Tick {
                    dir: direction(angle),
                    inner: if major { 0.70 } else { 0.78 },
                    half_width: if major { 0.022 } else { 0.010 },
                }
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x5CE7_E0F0_0D15_EA5E);
        let wall_tint = hsv_to_rgb(
            rng.random_range(0.0..360.0),
            rng.random_range(0.6..=0.9),
            spec.background_brightness,
        );
        let sweep = end - start;
        Self {
            cx: width as f64 / 2.0,
            cy: height as f64 / 2.0,
            radius: spec.gauge_radius * width.min(height) as f64 / 2.0,
            squash: libm::cos(spec.camera_yaw * PI / 180.0),
            half_diag: libm::sqrt((width * width + height * height) as f64) / 2.0,
            ticks,
            needle_dir: direction(spec.needle_angle),
            red_zone: (start + 0.8 * sweep, end),
            wall_tint,
            wall_seed: rng.random(),
            spec: *spec,
        }
    }

    /// Image position to dial-local coordinates in units of the dial radius.
    #[inline]
    fn local(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.cx) / (self.squash * self.radius), (y - self.cy) / self.radius)
    }

    fn layer(&self, u: f64, v: f64) -> Layer {
        let r = libm::sqrt(u * u + v * v);
        if r <= 1.0 {
            if r <= HUB_RADIUS {
                return Layer::Hub;
            }
            let (nx, ny) = self.needle_dir;
            let along = u * nx + v * ny;
            let across = (u * ny - v * nx).abs();
            let taper = NEEDLE_HALF_WIDTH * (1.0 - 0.6 * (along / NEEDLE_LENGTH).max(0.0));
            if along >= -NEEDLE_TAIL && along <= NEEDLE_LENGTH && across <= taper {
                return Layer::Needle;
            }
            if r > BEZEL_INNER {
                return Layer::Bezel;
            }
            for tick in &self.ticks {
                let along = u * tick.dir.0 + v * tick.dir.1;
                let across = (u * tick.dir.1 - v * tick.dir.0).abs();
                if along >= tick.inner && along <= 0.85 && across <= tick.half_width {
                    return Layer::Tick;
                }
            }
            if (0.80..=0.85).contains(&r) {
                let angle = libm::atan2(u, -v) * 180.0 / PI;
                if angle >= self.red_zone.0 && angle <= self.red_zone.1 {
                    return Layer::RedZone;
                }
            }
            return Layer::Face;
        }
        if u.abs() <= PLATE_HALF && v.abs() <= PLATE_HALF {
            return Layer::Plate;
        }
        if v > 0.0 && u.abs() <= PIPE_HALF {
            return Layer::Pipe;
        }
        Layer::Wall
    }

    fn color(&self, layer: &Layer, x: f64, y: f64, v: f64) -> [f64; 3] {
        // light from above
        let shade = 1.0 - 0.015 * (v + 1.0);
        let base = match layer {
            Layer::Face => FACE,
            Layer::Tick => TICK,
            Layer::RedZone => RED_ZONE,
            Layer::Needle => NEEDLE,
            Layer::Hub => HUB,
            Layer::Bezel => BEZEL,
            Layer::Plate => PLATE,
            Layer::Pipe => PIPE,
            Layer::Wall => {
                let scale = 6.0 / (2.0 * self.half_diag);
                let n = value_noise(x * scale, y * scale, self.wall_seed);
                let s = 0.85 + 0.3 * n;
                return self.wall_tint.map(|c| c * s);
            }
        };
        base.map(|c| c * shade)
    }

    fn wall_depth(&self, x: f64, y: f64) -> f64 {
        let dx = x - self.cx;
        let dy = y - self.cy;
        let rho2 = (dx * dx + dy * dy) / (self.half_diag * self.half_diag);
        let tilt = libm::sin(self.spec.camera_yaw * PI / 180.0) * dx / self.cx;
        self.spec.camera_distance * (1.0 + WALL_DEPTH_GRADIENT * rho2 + WALL_DEPTH_TILT * tilt)
    }
}

fn hsv_to_rgb(hue: f64, saturation: f64, value: f64) -> [f64; 3] {
    let c = value * saturation;
    let h = hue / 60.0;
    let x = c * (1.0 - (h % 2.0 - 1.0).abs());
    let (r, g, b) = match h as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = value - c;
    [r + m, g + m, b + m]
}

const SUBSAMPLES: [f64; 2] = [0.25, 0.75];

fn check_size(width: usize, height: usize) -> Result<()> {
    if width < MIN_RENDER_SIZE || height < MIN_RENDER_SIZE {
        return Err(invalid("size", "width and height must be at least 64"));
    }
    Ok(())
}

/// Renders the clear gauge image (2×2 supersampled) and its depth map.
///
/// Depth equals `camera_distance` on the gauge body (dial, plate, pipe) and
/// recedes smoothly on the wall toward the borders.
pub fn render_gauge(spec: &GaugeSceneSpec, width: usize, height: usize) -> Result<(ImageBuffer, ScalarMap)> {
    spec.validate()?;
    check_size(width, height)?;
    let geo = Geometry::new(spec, width, height);
    let image = ImageBuffer::from_fn(width, height, |px, py| {
        let mut acc = [0.0f64; 3];
        for sy in SUBSAMPLES {
            for sx in SUBSAMPLES {
                let (x, y) = (px as f64 + sx, py as f64 + sy);
                let (u, v) = geo.local(x, y);
                let c = geo.color(&geo.layer(u, v), x, y, v);
                for k in 0..3 {
                    acc[k] += c[k];
                }
            }
        }
        acc.map(|c| (c / 4.0) as f32)
    })?;
    let depth = ScalarMap::from_fn(width, height, |px, py| {
        let (x, y) = (px as f64 + 0.5, py as f64 + 0.5);
        let (u, v) = geo.local(x, y);
        let d = if geo.layer(u, v) == Layer::Wall {
            geo.wall_depth(x, y)
        } else {
            spec.camera_distance
        };
        d as f32
    })?;
    Ok((image, depth))
}

/// Fraction of each pixel's subsamples covered by the visible needle.
pub fn needle_coverage(spec: &GaugeSceneSpec, width: usize, height: usize) -> Result<ScalarMap> {
    spec.validate()?;
    check_size(width, height)?;
    let geo = Geometry::new(spec, width, height);
    ScalarMap::from_fn(width, height, |px, py| {
        let mut hits = 0u32;
        for sy in SUBSAMPLES {
            for sx in SUBSAMPLES {
                let (u, v) = geo.local(px as f64 + sx, py as f64 + sy);
                if geo.layer(u, v) == Layer::Needle {
                    hits += 1;
                }
            }
        }
        hits as f32 / 4.0
    })
}

/// Pixels whose centre falls on the round dial (bezel included).
pub fn dial_mask(spec: &GaugeSceneSpec, width: usize, height: usize) -> Result<ScalarMap> {
    spec.validate()?;
    check_size(width, height)?;
    let geo = Geometry::new(spec, width, height);
    ScalarMap::from_fn(width, height, |px, py| {
        let (u, v) = geo.local(px as f64 + 0.5, py as f64 + 0.5);
        if u * u + v * v <= 1.0 {
            1.0
        } else {
            0.0
        }
    })
}
