//! Full-reference quality metrics: MSE, PSNR and SSIM.
//!
//! All reductions run in `f64`.

use alloc::vec::Vec;

use crate::{error::Error, error::invalid, image::ensure_dims, ImageBuffer, Result, ScalarMap};

/// How the SSIM stabilizers are derived from `k1`, `k2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SsimConstants {
    /// `c_i = (k_i · MAX)²`.
    #[default]
    Scaled,
    /// `c_i = k_i`, taken literally.
    Raw,
}

/// Which signal SSIM is computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SsimChannels {
    #[default]
    Luminance,
    /// Mean of the three per-channel scores.
    PerChannel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricParams {
    /// Intensity ceiling, `MAX` in the PSNR formula.
    pub max_value: f64,
    pub ssim_k1: f64,
    pub ssim_k2: f64,
    pub window_radius: usize,
    pub window_sigma: f64,
    /// PSNR reported for an exact match.
    pub psnr_cap_db: f64,
    pub constants: SsimConstants,
    pub channels: SsimChannels,
}

impl Default for MetricParams {
    fn default() -> Self {
        Self {
            max_value: 1.0,
            ssim_k1: 0.01,
            ssim_k2: 0.03,
            window_radius: 5,
            window_sigma: 1.5,
            psnr_cap_db: 99.0,
            constants: SsimConstants::Scaled,
            channels: SsimChannels::Luminance,
        }
    }
}

impl MetricParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.max_value > 0.0) {
            return Err(invalid("max_value", "must be positive"));
        }
        if !(self.ssim_k1 > 0.0 && self.ssim_k2 > 0.0) {
            return Err(invalid("ssim_k1/ssim_k2", "must be positive"));
        }
        if !(self.window_sigma > 0.0) {
            return Err(invalid("window_sigma", "must be positive"));
        }
        Ok(())
    }

    /// `(c1, c2)` according to [`SsimConstants`].
    pub fn stabilizers(&self) -> (f64, f64) {
        match self.constants {
            SsimConstants::Scaled => {
                let (c1, c2) = (self.ssim_k1 * self.max_value, self.ssim_k2 * self.max_value);
                (c1 * c1, c2 * c2)
            }
            SsimConstants::Raw => (self.ssim_k1, self.ssim_k2),
        }
    }
}

/// A PSNR value; `exact` marks a zero-error match reported at the cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Psnr {
    pub db: f64,
    pub exact: bool,
}

/// Mean squared error over all `H·W·3` values.
pub fn mse(gt: &ImageBuffer, out: &ImageBuffer) -> Result<f64> {
    ensure_dims(gt.dims(), out.dims())?;
    let sum: f64 = gt
        .data()
        .iter()
        .zip(out.data())
        .map(|(&a, &b)| {
            let d = f64::from(a) - f64::from(b);
            d * d
        })
        .sum();
    Ok(sum / gt.data().len() as f64)
}

/// `10·log10(MAX² / MSE)`, or the cap with `exact` set when MSE is zero.
pub fn psnr(gt: &ImageBuffer, out: &ImageBuffer, params: &MetricParams) -> Result<Psnr> {
    params.validate()?;
    Ok(psnr_from_mse(mse(gt, out)?, params))
}

pub fn psnr_from_mse(mse: f64, params: &MetricParams) -> Psnr {
    if mse == 0.0 {
        Psnr {
            db: params.psnr_cap_db,
            exact: true,
        }
    } else {
        Psnr {
            db: 10.0 * libm::log10(params.max_value * params.max_value / mse),
            exact: false,
        }
    }
}

fn signals(image: &ImageBuffer, channels: SsimChannels) -> Vec<ScalarMap> {
    match channels {
        SsimChannels::Luminance => alloc::vec![image.luminance()],
        SsimChannels::PerChannel => (0..3).map(|c| image.channel(c)).collect(),
    }
}

#[inline]
fn ssim_formula(mu_x: f64, mu_y: f64, var_x: f64, var_y: f64, cov: f64, c1: f64, c2: f64) -> f64 {
    ((2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2)) / ((mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2))
}

/// Single-window SSIM using whole-image statistics.
pub fn ssim_global(gt: &ImageBuffer, out: &ImageBuffer, params: &MetricParams) -> Result<f64> {
    params.validate()?;
    ensure_dims(gt.dims(), out.dims())?;
    let (c1, c2) = params.stabilizers();
    let xs = signals(gt, params.channels);
    let ys = signals(out, params.channels);
    let scores: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let n = x.data().len() as f64;
            let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for (&a, &b) in x.data().iter().zip(y.data()) {
                let (a, b) = (f64::from(a), f64::from(b));
                sx += a;
                sy += b;
                sxx += a * a;
                syy += b * b;
                sxy += a * b;
            }
            let (mx, my) = (sx / n, sy / n);
            ssim_formula(mx, my, sxx / n - mx * mx, syy / n - my * my, sxy / n - mx * my, c1, c2)
        })
        .sum();
    Ok(scores / xs.len() as f64)
}

/// Normalized 1-D Gaussian taps of length `2r + 1`.
pub fn gaussian_taps(radius: usize, sigma: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..=2 * radius)
        .map(|i| {
            let d = i as f64 - radius as f64;
            libm::exp(-d * d / (2.0 * sigma * sigma))
        })
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

/// Gaussian-weighted local SSIM averaged over every position where the
/// window fits entirely inside the image.
pub fn ssim_windowed(gt: &ImageBuffer, out: &ImageBuffer, params: &MetricParams) -> Result<f64> {
    params.validate()?;
    ensure_dims(gt.dims(), out.dims())?;
    let (w, h) = gt.dims();
    let size = 2 * params.window_radius + 1;
    if w < size || h < size {
        return Err(Error::ImageTooSmall {
            width: w,
            height: h,
            window: size,
        });
    }
    let taps = gaussian_taps(params.window_radius, params.window_sigma);
    let (c1, c2) = params.stabilizers();
    let xs = signals(gt, params.channels);
    let ys = signals(out, params.channels);
    let total: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| ssim_map_mean(x, y, &taps, c1, c2))
        .sum();
    Ok(total / xs.len() as f64)
}

fn ssim_map_mean(x: &ScalarMap, y: &ScalarMap, taps: &[f64], c1: f64, c2: f64) -> f64 {
    let (w, h) = x.dims();
    let xv: Vec<f64> = x.data().iter().map(|&v| f64::from(v)).collect();
    let yv: Vec<f64> = y.data().iter().map(|&v| f64::from(v)).collect();
    let xx: Vec<f64> = xv.iter().map(|v| v * v).collect();
    let yy: Vec<f64> = yv.iter().map(|v| v * v).collect();
    let xy: Vec<f64> = xv.iter().zip(&yv).map(|(a, b)| a * b).collect();

    let mu_x = valid_blur(&xv, w, h, taps);
    let mu_y = valid_blur(&yv, w, h, taps);
    let e_xx = valid_blur(&xx, w, h, taps);
    let e_yy = valid_blur(&yy, w, h, taps);
    let e_xy = valid_blur(&xy, w, h, taps);

    let sum: f64 = (0..mu_x.len())
        .map(|i| {
            let (mx, my) = (mu_x[i], mu_y[i]);
            ssim_formula(mx, my, e_xx[i] - mx * mx, e_yy[i] - my * my, e_xy[i] - mx * my, c1, c2)
        })
        .sum();
    sum / mu_x.len() as f64
}

/// Separable correlation restricted to positions where the window fits.
fn valid_blur(src: &[f64], w: usize, h: usize, taps: &[f64]) -> Vec<f64> {
    let k = taps.len();
    let (ow, oh) = (w - k + 1, h - k + 1);
    let mut rows = Vec::with_capacity(ow * h);
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        for x in 0..ow {
            rows.push(taps.iter().zip(&row[x..x + k]).map(|(t, v)| t * v).sum::<f64>());
        }
    }
    let mut out = Vec::with_capacity(ow * oh);
    for y in 0..oh {
        for x in 0..ow {
            out.push((0..k).map(|j| taps[j] * rows[(y + j) * ow + x]).sum::<f64>());
        }
    }
    out
}
