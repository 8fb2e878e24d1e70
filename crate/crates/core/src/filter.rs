//! Sliding-window filters. Every window op replicates border pixels.

use alloc::{collections::VecDeque, vec, vec::Vec};

use crate::{error::invalid, ImageBuffer, Result, ScalarMap};

/// Minimum over the `(2r+1)²` window centred at each pixel.
pub fn min_filter(map: &ScalarMap, radius: usize) -> ScalarMap {
    extreme_filter(map, radius, |candidate, kept| candidate <= kept)
}

/// Maximum over the `(2r+1)²` window centred at each pixel.
pub fn max_filter(map: &ScalarMap, radius: usize) -> ScalarMap {
    extreme_filter(map, radius, |candidate, kept| candidate >= kept)
}

// With replicated borders the clamped window holds the same set of values as
// the truncated one, so min/max reduce to a truncated sliding window. The
// square window is separable into a row pass and a column pass.
fn extreme_filter(map: &ScalarMap, radius: usize, dominates: fn(f32, f32) -> bool) -> ScalarMap {
    if radius == 0 {
        return map.clone();
    }
    let (w, h) = map.dims();
    let mut rows = vec![0.0f32; w * h];
    for y in 0..h {
        sliding_extreme(&map.data()[y * w..(y + 1) * w], radius, &mut rows[y * w..(y + 1) * w], dominates);
    }
    let mut out = vec![0.0f32; w * h];
    let mut column = vec![0.0f32; h];
    let mut column_out = vec![0.0f32; h];
    for x in 0..w {
        for y in 0..h {
            column[y] = rows[y * w + x];
        }
        sliding_extreme(&column, radius, &mut column_out, dominates);
        for y in 0..h {
            out[y * w + x] = column_out[y];
        }
    }
    ScalarMap::from_raw_unchecked(w, h, out)
}

/// Monotone-deque sliding extreme over `src[i-r ..= i+r]` (truncated at the ends).
fn sliding_extreme(src: &[f32], radius: usize, out: &mut [f32], dominates: fn(f32, f32) -> bool) {
    let n = src.len();
    let mut deque: VecDeque<usize> = VecDeque::with_capacity(2 * radius + 2);
    let mut next = 0;
    for (i, slot) in out.iter_mut().enumerate() {
        let hi = (i + radius).min(n - 1);
        while next <= hi {
            while deque.back().is_some_and(|&j| dominates(src[next], src[j])) {
                deque.pop_back();
            }
            deque.push_back(next);
            next += 1;
        }
        let lo = i.saturating_sub(radius);
        while deque.front().is_some_and(|&j| j < lo) {
            deque.pop_front();
        }
        *slot = src[deque[0]];
    }
}

/// Mean over the `(2r+1)²` window with replicated borders, accumulated in `f64`.
pub fn box_mean(map: &ScalarMap, radius: usize) -> ScalarMap {
    let (w, h) = map.dims();
    let src: Vec<f64> = map.data().iter().map(|&v| f64::from(v)).collect();
    let out = box_mean_f64(&src, w, h, radius);
    ScalarMap::from_raw_unchecked(w, h, out.into_iter().map(|v| v as f32).collect())
}

pub(crate) fn box_mean_f64(src: &[f64], w: usize, h: usize, radius: usize) -> Vec<f64> {
    if radius == 0 {
        return src.to_vec();
    }
    let norm = 1.0 / (2 * radius + 1) as f64;
    let mut rows = vec![0.0f64; w * h];
    for y in 0..h {
        clamped_running_mean(&src[y * w..(y + 1) * w], radius, norm, &mut rows[y * w..(y + 1) * w]);
    }
    let mut out = vec![0.0f64; w * h];
    let mut column = vec![0.0f64; h];
    let mut column_out = vec![0.0f64; h];
    for x in 0..w {
        for y in 0..h {
            column[y] = rows[y * w + x];
        }
        clamped_running_mean(&column, radius, norm, &mut column_out);
        for y in 0..h {
            out[y * w + x] = column_out[y];
        }
    }
    out
}

fn clamped_running_mean(src: &[f64], radius: usize, norm: f64, out: &mut [f64]) {
    let n = src.len() as isize;
    let r = radius as isize;
    let at = |i: isize| src[i.clamp(0, n - 1) as usize];
    let mut sum: f64 = (-r..=r).map(at).sum();
    for (i, slot) in out.iter_mut().enumerate() {
        let i = i as isize;
        *slot = sum * norm;
        sum += at(i + r + 1) - at(i - r);
    }
}

/// Edge-preserving refinement of `input` using the luminance of `guide`.
///
/// Fits `q = a·Y + b` over each window, then averages the coefficients of
/// every window covering a pixel. Output is not clamped; callers refining a
/// transmission map clamp it themselves.
pub fn guided_filter(
    guide: &ImageBuffer,
    input: &ScalarMap,
    radius: usize,
    eps: f64,
) -> Result<ScalarMap> {
    guide.ensure_same_dims(input.dims())?;
    if !(eps > 0.0) {
        return Err(invalid("eps", "must be positive"));
    }
    let (w, h) = input.dims();
    let luma: Vec<f64> = guide.luminance().data().iter().map(|&v| f64::from(v)).collect();
    let p: Vec<f64> = input.data().iter().map(|&v| f64::from(v)).collect();

    let mean_i = box_mean_f64(&luma, w, h, radius);
    let mean_p = box_mean_f64(&p, w, h, radius);
    let ii: Vec<f64> = luma.iter().map(|v| v * v).collect();
    let ip: Vec<f64> = luma.iter().zip(&p).map(|(a, b)| a * b).collect();
    let corr_ii = box_mean_f64(&ii, w, h, radius);
    let corr_ip = box_mean_f64(&ip, w, h, radius);

    let mut a = vec![0.0f64; w * h];
    let mut b = vec![0.0f64; w * h];
    for k in 0..w * h {
        let var = (corr_ii[k] - mean_i[k] * mean_i[k]).max(0.0);
        let cov = corr_ip[k] - mean_i[k] * mean_p[k];
        a[k] = cov / (var + eps);
        b[k] = mean_p[k] - a[k] * mean_i[k];
    }
    let mean_a = box_mean_f64(&a, w, h, radius);
    let mean_b = box_mean_f64(&b, w, h, radius);
    let out = (0..w * h)
        .map(|k| (mean_a[k] * luma[k] + mean_b[k]) as f32)
        .collect();
    Ok(ScalarMap::from_raw_unchecked(w, h, out))
}
