//! Raster and sidecar file formats.
//!
//! Colour images are written as 8-bit PNG and read from 8-bit PNG or JPEG;
//! an alpha channel is dropped. Scalar maps are stored either as 16-bit
//! grayscale PNG scaled by 65535 or as a raw `f32` sidecar:
//!
//! ```text
//! offset 0   8 bytes  magic "GDZSCAL1"
//! offset 8   u32 LE   width
//! offset 12  u32 LE   height
//! offset 16  f32 LE   width × height values, row-major
//! ```

use std::{fs, io::BufWriter, path::Path};

use gauge_dehaze_core::{ImageBuffer, ScalarMap};
use image::{
    codecs::png::{CompressionType, FilterType, PngEncoder},
    ExtendedColorType, ImageEncoder, ImageReader,
};

use crate::{Error, Result};

pub const SIDECAR_MAGIC: [u8; 8] = *b"GDZSCAL1";
pub const SIDECAR_HEADER_LEN: usize = 16;

fn image_error(path: &Path, source: image::ImageError) -> Error {
    Error::Image {
        path: path.to_path_buf(),
        source,
    }
}

fn format_error(path: &Path, reason: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

/// Reads an 8-bit image as intensities `v / 255`; deeper samples are refused.
pub fn load_image(path: impl AsRef<Path>) -> Result<ImageBuffer> {
    let path = path.as_ref();
    let decoded = ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?
        .decode()
        .map_err(|e| image_error(path, e))?;
    if decoded.color().bytes_per_pixel() / decoded.color().channel_count() != 1 {
        return Err(format_error(path, format!("expected 8-bit samples, found {:?}", decoded.color())));
    }
    let rgb = decoded.to_rgb8();
    let (w, h) = rgb.dimensions();
    let data = rgb.into_raw().into_iter().map(|v| f32::from(v) / 255.0).collect();
    ImageBuffer::new(w as usize, h as usize, data).map_err(|e| format_error(path, e.to_string()))
}

/// Quantizes to 8 bits per channel.
pub fn quantize(image: &ImageBuffer) -> Vec<u8> {
    image.data().iter().map(|&v| (v * 255.0).round() as u8).collect()
}

fn write_png(path: &Path, width: usize, height: usize, bytes: &[u8], color: ExtendedColorType) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    PngEncoder::new_with_quality(BufWriter::new(file), CompressionType::Fast, FilterType::Adaptive)
        .write_image(bytes, width as u32, height as u32, color)
        .map_err(|e| image_error(path, e))
}

/// Writes an 8-bit RGB PNG.
pub fn save_image(path: impl AsRef<Path>, image: &ImageBuffer) -> Result<()> {
    write_png(
        path.as_ref(),
        image.width(),
        image.height(),
        &quantize(image),
        ExtendedColorType::Rgb8,
    )
}

/// Writes a 16-bit grayscale PNG of `clamp(v, 0, 1) · 65535`.
pub fn save_scalar_png16(path: impl AsRef<Path>, map: &ScalarMap) -> Result<()> {
    let bytes: Vec<u8> = map
        .data()
        .iter()
        .flat_map(|&v| ((v.clamp(0.0, 1.0) * 65535.0).round() as u16).to_ne_bytes())
        .collect();
    write_png(path.as_ref(), map.width(), map.height(), &bytes, ExtendedColorType::L16)
}

pub fn load_scalar_png16(path: impl AsRef<Path>) -> Result<ScalarMap> {
    let path = path.as_ref();
    let decoded = ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .decode()
        .map_err(|e| image_error(path, e))?;
    let gray = decoded.to_luma16();
    let (w, h) = gray.dimensions();
    let data = gray.into_raw().into_iter().map(|v| f32::from(v) / 65535.0).collect();
    ScalarMap::new(w as usize, h as usize, data).map_err(|e| format_error(path, e.to_string()))
}

pub fn encode_sidecar(map: &ScalarMap) -> Vec<u8> {
    let mut out = Vec::with_capacity(SIDECAR_HEADER_LEN + 4 * map.data().len());
    out.extend_from_slice(&SIDECAR_MAGIC);
    out.extend_from_slice(&(map.width() as u32).to_le_bytes());
    out.extend_from_slice(&(map.height() as u32).to_le_bytes());
    for v in map.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Parses sidecar bytes; `path` only labels errors.
pub fn decode_sidecar(bytes: &[u8], path: &Path) -> Result<ScalarMap> {
    if bytes.len() < SIDECAR_HEADER_LEN || bytes[..8] != SIDECAR_MAGIC {
        return Err(format_error(path, "not a scalar sidecar file"));
    }
    let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as usize;
    let (w, h) = (word(8), word(12));
    let body = &bytes[SIDECAR_HEADER_LEN..];
    if w.checked_mul(h).and_then(|n| n.checked_mul(4)) != Some(body.len()) {
        return Err(format_error(
            path,
            format!("{w}x{h} sidecar needs {} payload bytes, found {}", 4 * w * h, body.len()),
        ));
    }
    let data = body
        .chunks_exact(4)
        .map(|b| f32::from_le_bytes(b.try_into().unwrap()))
        .collect();
    ScalarMap::new(w, h, data).map_err(|e| format_error(path, e.to_string()))
}

pub fn write_sidecar(path: impl AsRef<Path>, map: &ScalarMap) -> Result<()> {
    let path = path.as_ref();
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, encode_sidecar(map)).map_err(|e| Error::io(path, e))
}

pub fn read_sidecar(path: impl AsRef<Path>) -> Result<ScalarMap> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_sidecar(&bytes, path)
}
