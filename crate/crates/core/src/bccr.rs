//! Boundary-constrained transmission refined by weighted L1 contextual
//! regularization.
//!
//! Requiring the recovered radiance to stay inside the cube `[C0, C1]³` gives
//! a per-pixel lower bound `t_b` on transmission. The final map minimizes
//!
//! ```text
//! λ/2 · ‖t − t_b‖² + Σ_j ‖W_j ∘ (D_j ⊛ t)‖₁
//! ```
//!
//! where the `D_j` are small differencing kernels and the weights `W_j`
//! suppress smoothing across image edges. The solver splits each `D_j ⊛ t`
//! into an auxiliary `u_j`, alternating closed-form soft shrinkage with a
//! diagonal solve for `t` in the frequency domain, and grows the splitting
//! penalty geometrically.

use alloc::{vec, vec::Vec};
use core::f64::consts::SQRT_2;

use num_complex::Complex64;

use crate::{
    dcp::{dark_channel, estimate_airlight, DcpParams},
    error::{invalid, Error},
    fft::Fft2d,
    filter::{max_filter, min_filter},
    image::ensure_dims,
    scatter::{invert_scattering, AtmosphericLight},
    ImageBuffer, Result, ScalarMap,
};

pub use crate::dcp::Restoration;

/// Minimum reflective margin added on every side before the periodic solve.
pub const MIN_SOLVER_PAD: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BccrParams {
    /// Per-channel lower bound of the radiance cube.
    pub c0: [f32; 3],
    /// Per-channel upper bound of the radiance cube.
    pub c1: [f32; 3],
    /// Radius of the morphological closing applied to the bound.
    pub patch_radius: usize,
    /// Data-fidelity weight.
    pub lambda: f64,
    /// Bandwidth of the contextual edge weights.
    pub sigma: f64,
    pub outer_iters: usize,
    pub penalty_init: f64,
    pub penalty_growth: f64,
    pub t_floor: f32,
}

impl Default for BccrParams {
    fn default() -> Self {
        Self {
            c0: [0.08; 3],
            c1: [0.95; 3],
            patch_radius: 3,
            lambda: 2.0,
            sigma: 0.5,
            outer_iters: 8,
            penalty_init: 1.0,
            penalty_growth: 2.0 * SQRT_2,
            t_floor: 0.05,
        }
    }
}

impl BccrParams {
    pub fn validate(&self) -> Result<()> {
        for c in 0..3 {
            if !(0.0 <= self.c0[c] && self.c0[c] < self.c1[c] && self.c1[c] <= 1.0) {
                return Err(invalid("c0/c1", "need 0 <= C0 < C1 <= 1 in every channel"));
            }
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(invalid("lambda", "must be positive"));
        }
        if !(self.sigma > 0.0) {
            return Err(invalid("sigma", "must be positive"));
        }
        if self.outer_iters < 1 {
            return Err(invalid("outer_iters", "must be at least 1"));
        }
        if !(self.penalty_init > 0.0 && self.penalty_init.is_finite()) {
            return Err(invalid("penalty_init", "must be positive"));
        }
        if !(self.penalty_growth > 1.0 && self.penalty_growth.is_finite()) {
            return Err(invalid("penalty_growth", "must exceed 1"));
        }
        if !(self.t_floor > 0.0 && self.t_floor <= 1.0) {
            return Err(invalid("t_floor", "must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// A differencing kernel as `(dx, dy, weight)` taps, applied as
/// `(D ⊛ f)(x, y) = Σ weight · f(x + dx, y + dy)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    pub taps: Vec<(isize, isize, f64)>,
}

impl Kernel {
    fn new(taps: &[(isize, isize, f64)]) -> Self {
        Self { taps: taps.to_vec() }
    }

    pub fn weight_sum(&self) -> f64 {
        self.taps.iter().map(|t| t.2).sum()
    }

    /// Applies the kernel with replicated borders.
    pub fn apply(&self, map: &ScalarMap) -> Vec<f64> {
        let (w, h) = map.dims();
        let mut out = vec![0.0f64; w * h];
        for y in 0..h {
            for x in 0..w {
                out[y * w + x] = self
                    .taps
                    .iter()
                    .map(|&(dx, dy, k)| {
                        let sx = (x as isize + dx).clamp(0, w as isize - 1) as usize;
                        let sy = (y as isize + dy).clamp(0, h as isize - 1) as usize;
                        k * f64::from(map.get(sx, sy))
                    })
                    .sum();
            }
        }
        out
    }
}

/// The differencing kernels the regularizer acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorBank {
    kernels: Vec<Kernel>,
}

impl Default for OperatorBank {
    /// First differences along the horizontal, vertical and both diagonals,
    /// then second differences along the same four directions.
    fn default() -> Self {
        let first = [(1, 0), (0, 1), (1, 1), (-1, 1)];
        let mut kernels: Vec<Kernel> = first
            .iter()
            .map(|&(dx, dy)| Kernel::new(&[(0, 0, -1.0), (dx, dy, 1.0)]))
            .collect();
        kernels.extend(
            first
                .iter()
                .map(|&(dx, dy)| Kernel::new(&[(-dx, -dy, 1.0), (0, 0, -2.0), (dx, dy, 1.0)])),
        );
        Self { kernels }
    }
}

impl OperatorBank {
    /// Every kernel must sum to zero so that constants are annihilated.
    pub fn new(kernels: Vec<Kernel>) -> Result<Self> {
        if kernels.is_empty() {
            return Err(invalid("bank", "needs at least one kernel"));
        }
        if kernels.iter().any(|k| k.weight_sum() != 0.0 || k.taps.is_empty()) {
            return Err(invalid("bank", "every kernel must sum to zero"));
        }
        Ok(Self { kernels })
    }

    pub fn kernels(&self) -> &[Kernel] {
        &self.kernels
    }

    pub fn len(&self) -> usize {
        self.kernels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kernels.is_empty()
    }
}

/// Per-pixel lower bound on transmission from the radiance cube, clamped to
/// `[t_floor, 1]` and closed morphologically with `patch_radius`.
pub fn boundary_transmission(
    image: &ImageBuffer,
    airlight: &AtmosphericLight,
    params: &BccrParams,
) -> Result<ScalarMap> {
    let raw = raw_boundary(image, airlight, params)?;
    let clamped = raw.clamp(params.t_floor, 1.0);
    Ok(min_filter(&max_filter(&clamped, params.patch_radius), params.patch_radius))
}

/// The unclamped per-pixel bound, before closing.
pub fn raw_boundary(image: &ImageBuffer, airlight: &AtmosphericLight, params: &BccrParams) -> Result<ScalarMap> {
    params.validate()?;
    let a = airlight.rgb();
    for c in 0..3 {
        if (a[c] - params.c0[c]).abs() < 1e-6 || (a[c] - params.c1[c]).abs() < 1e-6 {
            return Err(invalid("airlight", "coincides with a radiance bound"));
        }
    }
    let data = image
        .pixels()
        .map(|px| {
            (0..3)
                .map(|c| {
                    let diff = a[c] - px[c];
                    (diff / (a[c] - params.c0[c])).max(diff / (a[c] - params.c1[c]))
                })
                .fold(f32::NEG_INFINITY, f32::max)
        })
        .collect();
    ScalarMap::new(image.width(), image.height(), data)
}

/// `W_j = exp(−‖D_j ⊛ I‖² / 2σ²)` with the squared response summed over channels.
pub fn contextual_weights(image: &ImageBuffer, bank: &OperatorBank, sigma: f64) -> Result<Vec<ScalarMap>> {
    if !(sigma > 0.0) {
        return Err(invalid("sigma", "must be positive"));
    }
    let (w, h) = image.dims();
    let channels = [image.channel(0), image.channel(1), image.channel(2)];
    let denom = 2.0 * sigma * sigma;
    bank.kernels()
        .iter()
        .map(|kernel| {
            let mut energy = vec![0.0f64; w * h];
            for channel in &channels {
                for (e, r) in energy.iter_mut().zip(kernel.apply(channel)) {
                    *e += r * r;
                }
            }
            ScalarMap::new(w, h, energy.iter().map(|e| libm::exp(-e / denom) as f32).collect())
        })
        .collect()
}

/// `λ/2·‖t − t_b‖² + Σ_j ‖W_j ∘ (D_j ⊛ t)‖₁` with replicated borders.
pub fn objective(
    t: &ScalarMap,
    t_b: &ScalarMap,
    weights: &[ScalarMap],
    bank: &OperatorBank,
    lambda: f64,
) -> Result<f64> {
    ensure_dims(t.dims(), t_b.dims())?;
    let fidelity: f64 = t
        .data()
        .iter()
        .zip(t_b.data())
        .map(|(&a, &b)| {
            let d = f64::from(a) - f64::from(b);
            d * d
        })
        .sum();
    let mut penalty = 0.0;
    for (kernel, weight) in bank.kernels().iter().zip(weights) {
        ensure_dims(t.dims(), weight.dims())?;
        penalty += kernel
            .apply(t)
            .iter()
            .zip(weight.data())
            .map(|(r, &w)| f64::from(w) * r.abs())
            .sum::<f64>();
    }
    Ok(0.5 * lambda * fidelity + penalty)
}

/// `sign(v) · max(|v| − threshold, 0)`.
#[inline]
pub fn soft_shrink(v: f64, threshold: f64) -> f64 {
    let m = v.abs() - threshold;
    if m > 0.0 {
        m.copysign(v)
    } else {
        0.0
    }
}

/// Output of [`optimize_transmission_traced`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolverTrace {
    /// Clamped estimate after every outer iteration; the last one is the result.
    pub iterates: Vec<ScalarMap>,
    /// Penalty weight used in each outer iteration.
    pub penalties: Vec<f64>,
}

/// Half-quadratic minimization of the contextual objective.
pub fn optimize_transmission(
    t_b: &ScalarMap,
    weights: &[ScalarMap],
    bank: &OperatorBank,
    params: &BccrParams,
) -> Result<ScalarMap> {
    let mut trace = optimize_transmission_traced(t_b, weights, bank, params)?;
    Ok(trace.iterates.pop().expect("at least one outer iteration"))
}

/// Like [`optimize_transmission`], keeping every outer iterate.
pub fn optimize_transmission_traced(
    t_b: &ScalarMap,
    weights: &[ScalarMap],
    bank: &OperatorBank,
    params: &BccrParams,
) -> Result<SolverTrace> {
    params.validate()?;
    if weights.len() != bank.len() {
        return Err(invalid("weights", "need one weight map per kernel"));
    }
    for w in weights {
        ensure_dims(t_b.dims(), w.dims())?;
    }
    let grid = PaddedGrid::new(t_b.width(), t_b.height());
    let plan = Fft2d::new(grid.width, grid.height);
    let n = grid.width * grid.height;

    let target = grid.pad(t_b);
    let padded_weights: Vec<Vec<f64>> = weights.iter().map(|w| grid.pad(w)).collect();

    let spectra: Vec<Vec<Complex64>> = bank
        .kernels()
        .iter()
        .map(|k| {
            let mut spec = vec![Complex64::new(0.0, 0.0); n];
            for &(dx, dy, v) in &k.taps {
                // D ⊛ t is a correlation; as a circular convolution the tap sits at -offset.
                let x = (-dx).rem_euclid(grid.width as isize) as usize;
                let y = (-dy).rem_euclid(grid.height as isize) as usize;
                spec[y * grid.width + x] += v;
            }
            plan.forward(&mut spec);
            spec
        })
        .collect();
    let gram: Vec<f64> = (0..n)
        .map(|i| spectra.iter().map(|s| s[i].norm_sqr()).sum())
        .collect();

    let mut target_hat: Vec<Complex64> = target.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    plan.forward(&mut target_hat);

    let lambda = params.lambda;
    let mut t = target.clone();
    let mut rho = params.penalty_init;
    let mut iterates = Vec::with_capacity(params.outer_iters);
    let mut penalties = Vec::with_capacity(params.outer_iters);
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    let mut aux = vec![Complex64::new(0.0, 0.0); n];

    for iteration in 0..params.outer_iters {
        rhs.iter_mut()
            .zip(&target_hat)
            .for_each(|(r, &b)| *r = b * lambda);
        for ((kernel, weight), spectrum) in bank.kernels().iter().zip(&padded_weights).zip(&spectra) {
            let response = grid.correlate_periodic(&t, kernel);
            for i in 0..n {
                aux[i] = Complex64::new(soft_shrink(response[i], weight[i] / rho), 0.0);
            }
            plan.forward(&mut aux);
            for i in 0..n {
                rhs[i] += spectrum[i].conj() * aux[i] * rho;
            }
        }
        for i in 0..n {
            rhs[i] /= lambda + rho * gram[i];
        }
        plan.inverse(&mut rhs);
        for (dst, src) in t.iter_mut().zip(&rhs) {
            *dst = src.re;
        }
        if t.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                iteration,
                penalty: rho,
            });
        }
        iterates.push(grid.crop(&t, params.t_floor));
        penalties.push(rho);
        rho *= params.penalty_growth;
    }
    Ok(SolverTrace { iterates, penalties })
}

/// Reflect-padded periodic working grid with power-of-two sides.
struct PaddedGrid {
    inner_w: usize,
    inner_h: usize,
    width: usize,
    height: usize,
    pad_x: usize,
    pad_y: usize,
}

impl PaddedGrid {
    fn new(inner_w: usize, inner_h: usize) -> Self {
        let width = (inner_w + 2 * MIN_SOLVER_PAD).next_power_of_two();
        let height = (inner_h + 2 * MIN_SOLVER_PAD).next_power_of_two();
        Self {
            inner_w,
            inner_h,
            width,
            height,
            pad_x: (width - inner_w) / 2,
            pad_y: (height - inner_h) / 2,
        }
    }

    /// Half-sample symmetric index into `0..n`.
    fn reflect(i: isize, n: usize) -> usize {
        let period = 2 * n as isize;
        let m = i.rem_euclid(period);
        if m < n as isize {
            m as usize
        } else {
            (period - 1 - m) as usize
        }
    }

    fn pad(&self, map: &ScalarMap) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.width * self.height);
        for y in 0..self.height {
            let sy = Self::reflect(y as isize - self.pad_y as isize, self.inner_h);
            for x in 0..self.width {
                let sx = Self::reflect(x as isize - self.pad_x as isize, self.inner_w);
                out.push(f64::from(map.get(sx, sy)));
            }
        }
        out
    }

    fn crop(&self, data: &[f64], floor: f32) -> ScalarMap {
        let mut out = Vec::with_capacity(self.inner_w * self.inner_h);
        for y in 0..self.inner_h {
            let row = (y + self.pad_y) * self.width + self.pad_x;
            out.extend(data[row..row + self.inner_w].iter().map(|&v| (v as f32).clamp(floor, 1.0)));
        }
        ScalarMap::from_raw_unchecked(self.inner_w, self.inner_h, out)
    }

    fn correlate_periodic(&self, data: &[f64], kernel: &Kernel) -> Vec<f64> {
        let (w, h) = (self.width, self.height);
        let mut out = vec![0.0f64; w * h];
        for &(dx, dy, k) in &kernel.taps {
            for y in 0..h {
                let sy = (y as isize + dy).rem_euclid(h as isize) as usize;
                for x in 0..w {
                    let sx = (x as isize + dx).rem_euclid(w as isize) as usize;
                    out[y * w + x] += k * data[sy * w + sx];
                }
            }
        }
        out
    }
}

/// Full pipeline: shared airlight estimate, boundary bound, contextual
/// refinement, inversion.
pub fn dehaze_bccr(image: &ImageBuffer, params: &BccrParams) -> Result<Restoration> {
    params.validate()?;
    let dcp = DcpParams::default();
    let dark = dark_channel(image, dcp.patch_radius);
    let airlight = estimate_airlight(image, &dark, dcp.airlight_fraction)?;
    let bank = OperatorBank::default();
    let t_b = boundary_transmission(image, &airlight, params)?;
    let weights = contextual_weights(image, &bank, params.sigma)?;
    let transmission = optimize_transmission(&t_b, &weights, &bank, params)?;
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
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_image(seed: u64, w: usize, h: usize) -> ImageBuffer {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ImageBuffer::from_fn(w, h, |_, _| [rng.random(), rng.random(), rng.random()]).unwrap()
    }

    #[test]
    fn airlight_pixel_hits_the_floor() {
        let a = AtmosphericLight::new([0.8, 0.75, 0.7]).unwrap();
        let img = ImageBuffer::filled(6, 6, a.rgb()).unwrap();
        let params = BccrParams::default();
        let raw = raw_boundary(&img, &a, &params).unwrap();
        assert!(raw.data().iter().all(|&v| v == 0.0));
        let t = boundary_transmission(&img, &a, &params).unwrap();
        assert!(t.data().iter().all(|&v| v == params.t_floor));
    }

    #[test]
    fn channel_at_lower_bound_gives_unit_ratio() {
        let params = BccrParams {
            c1: [0.8; 3],
            ..BccrParams::default()
        };
        let a = AtmosphericLight::gray(0.9).unwrap();
        let img = ImageBuffer::new(1, 1, alloc::vec![0.08, 0.5, 0.85]).unwrap();
        let first = (0.9f32 - 0.08) / (0.9 - params.c0[0]);
        assert!((first - 1.0).abs() < 1e-6);
        let raw = raw_boundary(&img, &a, &params).unwrap();
        assert!(raw.get(0, 0) >= first);
        let t = boundary_transmission(&img, &a, &BccrParams { patch_radius: 0, ..params }).unwrap();
        assert!(t.get(0, 0) <= 1.0);
    }

    #[test]
    fn bound_matches_pointwise_formula() {
        let img = random_image(3, 16, 16);
        let a = AtmosphericLight::new([0.85, 0.8, 0.9]).unwrap();
        let p = BccrParams::default();
        let raw = raw_boundary(&img, &a, &p).unwrap();
        for y in 0..16 {
            for x in 0..16 {
                let px = img.pixel(x, y);
                let mut expected = f32::NEG_INFINITY;
                for c in 0..3 {
                    let lo = (a.rgb()[c] - px[c]) / (a.rgb()[c] - p.c0[c]);
                    let hi = (a.rgb()[c] - px[c]) / (a.rgb()[c] - p.c1[c]);
                    expected = expected.max(lo.max(hi));
                }
                assert_eq!(raw.get(x, y), expected);
            }
        }
        let t = boundary_transmission(&img, &a, &p).unwrap();
        assert!(t.data().iter().all(|&v| (p.t_floor..=1.0).contains(&v)));
    }

    #[test]
    fn airlight_on_a_bound_is_rejected() {
        let img = random_image(1, 4, 4);
        let a = AtmosphericLight::gray(0.95).unwrap();
        assert!(boundary_transmission(&img, &a, &BccrParams::default()).is_err());
    }

    #[test]
    fn kernels_annihilate_constants() {
        let bank = OperatorBank::default();
        assert_eq!(bank.len(), 8);
        let c = ScalarMap::filled(9, 7, 0.37).unwrap();
        for k in bank.kernels() {
            assert_eq!(k.weight_sum(), 0.0);
            assert!(k.apply(&c).iter().all(|&v| v == 0.0));
        }
        assert!(OperatorBank::new(alloc::vec![Kernel::new(&[(0, 0, 1.0)])]).is_err());
    }

    #[test]
    fn weights_of_flat_and_edge_images() {
        let bank = OperatorBank::default();
        let flat = ImageBuffer::filled(8, 8, [0.3, 0.4, 0.5]).unwrap();
        for w in contextual_weights(&flat, &bank, 0.5).unwrap() {
            assert!(w.data().iter().all(|&v| v == 1.0));
        }
        // gray step 0 -> 1 between columns 3 and 4
        let edge = ImageBuffer::from_fn(8, 8, |x, _| if x < 4 { [0.0; 3] } else { [1.0; 3] }).unwrap();
        let weights = contextual_weights(&edge, &bank, 0.5).unwrap();
        let horizontal = &weights[0];
        let at_edge = horizontal.get(3, 4);
        assert!(f64::from(at_edge) < libm::exp(-2.0), "weight {at_edge}");
        assert_eq!(horizontal.get(0, 4), 1.0);
        for w in contextual_weights(&edge, &bank, 1e6).unwrap() {
            assert!(w.data().iter().all(|&v| v > 0.999_999));
        }
    }

    #[test]
    fn shrinkage_properties() {
        for &(v, th) in &[(0.3, 0.1), (-0.3, 0.1), (0.05, 0.1), (-2.0, 0.0), (0.0, 0.5)] {
            let u = soft_shrink(v, th);
            assert!(u.abs() <= v.abs());
            assert!(u == 0.0 || u.signum() == v.signum());
        }
        assert!((soft_shrink(0.3, 0.1) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn zero_weights_return_the_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t_b = ScalarMap::from_fn(12, 10, |_, _| rng.random_range(0.0f32..1.2)).unwrap();
        let bank = OperatorBank::default();
        let zeros: Vec<ScalarMap> = (0..bank.len()).map(|_| ScalarMap::filled(12, 10, 0.0).unwrap()).collect();
        let p = BccrParams::default();
        let out = optimize_transmission(&t_b, &zeros, &bank, &p).unwrap();
        for (a, b) in out.data().iter().zip(t_b.data()) {
            assert!((a - b.clamp(p.t_floor, 1.0)).abs() < 1e-5);
        }
    }

    #[test]
    fn constant_bound_is_a_fixed_point() {
        let t_b = ScalarMap::filled(20, 13, 0.6).unwrap();
        let bank = OperatorBank::default();
        let ones: Vec<ScalarMap> = (0..bank.len()).map(|_| ScalarMap::filled(20, 13, 1.0).unwrap()).collect();
        let out = optimize_transmission(&t_b, &ones, &bank, &BccrParams::default()).unwrap();
        assert!(out.data().iter().all(|&v| (v - 0.6).abs() < 1e-6));
    }

    #[test]
    fn solver_lowers_the_objective() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let img = random_image(6, 16, 16);
        let t_b = ScalarMap::from_fn(16, 16, |_, _| rng.random_range(0.05f32..1.0)).unwrap();
        let bank = OperatorBank::default();
        let weights = contextual_weights(&img, &bank, 0.5).unwrap();
        let p = BccrParams::default();
        let trace = optimize_transmission_traced(&t_b, &weights, &bank, &p).unwrap();
        assert_eq!(trace.iterates.len(), p.outer_iters);
        let mut prev = objective(&t_b, &t_b, &weights, &bank, p.lambda).unwrap();
        for it in &trace.iterates {
            let f = objective(it, &t_b, &weights, &bank, p.lambda).unwrap();
            assert!(f <= prev + 1e-6, "{f} > {prev}");
            prev = f;
        }
    }

    #[test]
    fn params_are_validated() {
        let bad = [
            BccrParams { c0: [0.9; 3], c1: [0.5; 3], ..BccrParams::default() },
            BccrParams { lambda: 0.0, ..BccrParams::default() },
            BccrParams { outer_iters: 0, ..BccrParams::default() },
            BccrParams { penalty_growth: 1.0, ..BccrParams::default() },
            BccrParams { sigma: 0.0, ..BccrParams::default() },
        ];
        let img = random_image(1, 16, 16);
        for p in bad {
            assert!(dehaze_bccr(&img, &p).is_err());
        }
    }

    #[test]
    fn reflect_index() {
        let idx: Vec<usize> = (-4..8).map(|i| PaddedGrid::reflect(i, 3)).collect();
        assert_eq!(idx, [2, 2, 1, 0, 0, 1, 2, 2, 1, 0, 0, 1]);
    }
}
