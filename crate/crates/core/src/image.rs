//! Deterministic raster preprocessing, augmentation, and feature
//! extraction.
//!
//! Everything is reproducible bit for bit: index-permutation ops (crop,
//! flips, quarter turns, PNM codec) are exact, filtered ops (resize,
//! rotation by arbitrary angles, blur) run in real arithmetic with a single
//! final rounding, and noise is driven by a seeded generator. Rounding is
//! always half away from zero.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// 8-bit raster, grayscale or RGB, row-major with interleaved channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    channels: usize,
    samples: Vec<u8>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, channels: usize, samples: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Config("image dimensions must be at least 1x1"));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::Config("channel count must be 1 (gray) or 3 (rgb)"));
        }
        let expected = width
            .checked_mul(height)
            .and_then(|p| p.checked_mul(channels))
            .ok_or(Error::Config("image dimensions overflow"))?;
        if samples.len() != expected {
            return Err(Error::SampleCountMismatch { expected, found: samples.len() });
        }
        Ok(Self { width, height, channels, samples })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn at(&self, x: usize, y: usize, channel: usize) -> u8 {
        self.samples[(y * self.width + x) * self.channels + channel]
    }
}

/// Seeded Gaussian pixel noise; the standard deviation is a fraction of
/// the full 8-bit range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub sigma_fraction: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.sigma_fraction.is_finite() || self.sigma_fraction < 0.0 {
            return Err(Error::Config("noise sigma fraction must be >= 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipAxis {
    Horizontal,
    Vertical,
}

/// Round half away from zero, then clamp to the 8-bit range.
fn round_u8(v: f64) -> u8 {
    libm::round(v).clamp(0.0, 255.0) as u8
}

/// Decodes binary PGM (`P5`) or PPM (`P6`) with maxval 255. `#` comments
/// are accepted anywhere in the header.
pub fn decode_pnm(bytes: &[u8]) -> Result<RasterImage> {
    if bytes.len() < 3 || bytes[0] != b'P' || (bytes[1] != b'5' && bytes[1] != b'6') {
        return Err(Error::Config("pnm magic must be P5 or P6"));
    }
    if !bytes[2].is_ascii_whitespace() && bytes[2] != b'#' {
        return Err(Error::Config("pnm magic must be P5 or P6"));
    }
    let channels = if bytes[1] == b'5' { 1 } else { 3 };
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in &mut fields {
        // Skip whitespace and comment lines before the next integer token.
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while let Some(&b) = bytes.get(pos) {
                        pos += 1;
                        if b == b'\n' {
                            break;
                        }
                    }
                }
                _ => break,
            }
        }
        let mut value: usize = 0;
        let mut digits = 0;
        while let Some(&b) = bytes.get(pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add((b - b'0') as usize))
                .ok_or(Error::Config("pnm header value overflows"))?;
            digits += 1;
            pos += 1;
        }
        if digits == 0 {
            return Err(Error::Config("malformed pnm header"));
        }
        *field = value;
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(Error::Config("unsupported maxval: only 255 is supported"));
    }
    // Exactly one whitespace byte separates the header from the body.
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(Error::Config("malformed pnm header")),
    }
    let expected = width
        .checked_mul(height)
        .and_then(|p| p.checked_mul(channels))
        .ok_or(Error::Config("image dimensions overflow"))?;
    let body = &bytes[pos..];
    if body.len() < expected {
        return Err(Error::Config("pnm body truncated"));
    }
    if body.len() > expected {
        return Err(Error::Config("trailing bytes after pnm body"));
    }
    RasterImage::new(width, height, channels, body.to_vec())
}

/// Encodes to binary PGM/PPM with maxval 255; decoding the result yields
/// the image back byte for byte.
pub fn encode_pnm(image: &RasterImage) -> Vec<u8> {
    let magic: &[u8] = if image.channels == 1 { b"P5" } else { b"P6" };
    let mut out = Vec::with_capacity(image.samples.len() + 32);
    out.extend_from_slice(magic);
    out.push(b'\n');
    push_decimal(&mut out, image.width);
    out.push(b' ');
    push_decimal(&mut out, image.height);
    out.push(b'\n');
    out.extend_from_slice(b"255\n");
    out.extend_from_slice(&image.samples);
    out
}

fn push_decimal(out: &mut Vec<u8>, mut value: usize) {
    let start = out.len();
    loop {
        out.push(b'0' + (value % 10) as u8);
        value /= 10;
        if value == 0 {
            break;
        }
    }
    out[start..].reverse();
}

/// Extracts the `w x h` rectangle whose top-left corner is `(x, y)`.
pub fn crop(image: &RasterImage, x: usize, y: usize, w: usize, h: usize) -> Result<RasterImage> {
    let oob = w == 0
        || h == 0
        || x.checked_add(w).is_none_or(|right| right > image.width)
        || y.checked_add(h).is_none_or(|bottom| bottom > image.height);
    if oob {
        return Err(Error::CropOutOfBounds { x, y, w, h, width: image.width, height: image.height });
    }
    let c = image.channels;
    let mut samples = Vec::with_capacity(w * h * c);
    for row in y..y + h {
        let start = (row * image.width + x) * c;
        samples.extend_from_slice(&image.samples[start..start + w * c]);
    }
    RasterImage::new(w, h, c, samples)
}

/// Bilinear resize under the pixel-center convention: destination pixel
/// `d` samples source coordinate `(d + 0.5)·(in/out) − 0.5`, clamped to the
/// source range. Resizing to the same dimensions is the bit-exact identity.
pub fn resize_bilinear(image: &RasterImage, out_w: usize, out_h: usize) -> Result<RasterImage> {
    if out_w == 0 || out_h == 0 {
        return Err(Error::Config("resize dimensions must be at least 1x1"));
    }
    let (in_w, in_h, c) = (image.width, image.height, image.channels);
    let scale_x = in_w as f64 / out_w as f64;
    let scale_y = in_h as f64 / out_h as f64;
    let mut samples = Vec::with_capacity(out_w * out_h * c);
    for oy in 0..out_h {
        let sy = ((oy as f64 + 0.5) * scale_y - 0.5).clamp(0.0, (in_h - 1) as f64);
        let y0 = sy as usize;
        let y1 = (y0 + 1).min(in_h - 1);
        let dy = sy - y0 as f64;
        for ox in 0..out_w {
            let sx = ((ox as f64 + 0.5) * scale_x - 0.5).clamp(0.0, (in_w - 1) as f64);
            let x0 = sx as usize;
            let x1 = (x0 + 1).min(in_w - 1);
            let dx = sx - x0 as f64;
            for ch in 0..c {
                let p00 = image.at(x0, y0, ch) as f64;
                let p10 = image.at(x1, y0, ch) as f64;
                let p01 = image.at(x0, y1, ch) as f64;
                let p11 = image.at(x1, y1, ch) as f64;
                let top = p00 + dx * (p10 - p00);
                let bottom = p01 + dx * (p11 - p01);
                samples.push(round_u8(top + dy * (bottom - top)));
            }
        }
    }
    RasterImage::new(out_w, out_h, c, samples)
}

/// Mirror along one axis; applying the same flip twice is the identity.
pub fn flip(image: &RasterImage, axis: FlipAxis) -> RasterImage {
    let (w, h, c) = (image.width, image.height, image.channels);
    let mut samples = Vec::with_capacity(image.samples.len());
    for y in 0..h {
        for x in 0..w {
            let (sx, sy) = match axis {
                FlipAxis::Horizontal => (w - 1 - x, y),
                FlipAxis::Vertical => (x, h - 1 - y),
            };
            for ch in 0..c {
                samples.push(image.at(sx, sy, ch));
            }
        }
    }
    RasterImage::new(w, h, c, samples).expect("flip preserves geometry")
}

/// One exact clockwise quarter turn; output width and height swap.
pub fn rotate90(image: &RasterImage) -> RasterImage {
    let (w, h, c) = (image.width, image.height, image.channels);
    let mut samples = Vec::with_capacity(image.samples.len());
    // out(x', y') = in(y', h - 1 - x') in (column, row) coordinates.
    for y in 0..w {
        for x in 0..h {
            for ch in 0..c {
                samples.push(image.at(y, h - 1 - x, ch));
            }
        }
    }
    RasterImage::new(h, w, c, samples).expect("quarter turn preserves sample count")
}

/// Rotation by any finite angle in degrees, positive clockwise.
///
/// Exact multiples of 90 go through the index-permutation path and are
/// bit-exact; anything else keeps the input dimensions, inverse-maps each
/// output pixel center through a rotation about the image center, samples
/// bilinearly, and reads out-of-bounds pixels as 0.
pub fn rotate(image: &RasterImage, angle_degrees: f64) -> Result<RasterImage> {
    if !angle_degrees.is_finite() {
        return Err(Error::Config("rotation angle must be finite"));
    }
    if libm::fmod(angle_degrees, 90.0) == 0.0 {
        let quarter_turns = ((angle_degrees / 90.0) as i64).rem_euclid(4);
        let mut out = image.clone();
        for _ in 0..quarter_turns {
            out = rotate90(&out);
        }
        return Ok(out);
    }

    let (w, h, c) = (image.width, image.height, image.channels);
    let theta = angle_degrees * core::f64::consts::PI / 180.0;
    let (sin, cos) = (libm::sin(theta), libm::cos(theta));
    let cx = (w as f64 - 1.0) / 2.0;
    let cy = (h as f64 - 1.0) / 2.0;
    let tap = |x: i64, y: i64, ch: usize| -> f64 {
        if x < 0 || y < 0 || x >= w as i64 || y >= h as i64 {
            0.0
        } else {
            image.at(x as usize, y as usize, ch) as f64
        }
    };
    let mut samples = Vec::with_capacity(image.samples.len());
    for oy in 0..h {
        for ox in 0..w {
            let vx = ox as f64 - cx;
            let vy = oy as f64 - cy;
            // Inverse of the clockwise rotation in y-down coordinates.
            let sx = cos * vx + sin * vy + cx;
            let sy = -sin * vx + cos * vy + cy;
            let x0 = libm::floor(sx) as i64;
            let y0 = libm::floor(sy) as i64;
            let dx = sx - x0 as f64;
            let dy = sy - y0 as f64;
            for ch in 0..c {
                let top = tap(x0, y0, ch) + dx * (tap(x0 + 1, y0, ch) - tap(x0, y0, ch));
                let bottom =
                    tap(x0, y0 + 1, ch) + dx * (tap(x0 + 1, y0 + 1, ch) - tap(x0, y0 + 1, ch));
                samples.push(round_u8(top + dy * (bottom - top)));
            }
        }
    }
    RasterImage::new(w, h, c, samples)
}

/// Per-channel min-max stretch onto the full 8-bit range; a constant
/// channel is left untouched.
pub fn contrast_stretch(image: &RasterImage) -> RasterImage {
    let c = image.channels;
    let mut out = image.samples.clone();
    for ch in 0..c {
        let mut lo = u8::MAX;
        let mut hi = u8::MIN;
        for v in image.samples.iter().skip(ch).step_by(c) {
            lo = lo.min(*v);
            hi = hi.max(*v);
        }
        if lo == hi {
            continue;
        }
        let span = (hi - lo) as f64;
        for v in out.iter_mut().skip(ch).step_by(c) {
            *v = round_u8((*v - lo) as f64 * 255.0 / span);
        }
    }
    RasterImage::new(image.width, image.height, c, out).expect("stretch preserves geometry")
}

/// Adds seeded Gaussian noise to every sample in row-major interleaved
/// order: `clamp(round(v + z·sigma_fraction·255))` with `z ~ N(0,1)`.
pub fn add_gaussian_noise(image: &RasterImage, spec: &NoiseSpec) -> Result<RasterImage> {
    spec.validate()?;
    if spec.sigma_fraction == 0.0 {
        return Ok(image.clone());
    }
    let sigma = spec.sigma_fraction * 255.0;
    let mut rng = SplitMix64::new(spec.seed);
    let samples = image
        .samples
        .iter()
        .map(|&v| round_u8(v as f64 + rng.next_gaussian() * sigma))
        .collect();
    RasterImage::new(image.width, image.height, image.channels, samples)
}

/// Separable Gaussian blur with radius `ceil(3·sigma)`, clamp-to-edge
/// borders, and one final rounding after both passes.
pub fn gaussian_blur(image: &RasterImage, sigma: f64) -> Result<RasterImage> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::Config("blur sigma must be positive"));
    }
    let radius = libm::ceil(3.0 * sigma) as usize;
    let mut kernel = Vec::with_capacity(2 * radius + 1);
    for t in -(radius as i64)..=radius as i64 {
        kernel.push(libm::exp(-(t * t) as f64 / (2.0 * sigma * sigma)));
    }
    let total: f64 = kernel.iter().sum();
    for w in &mut kernel {
        *w /= total;
    }

    let (w, h, c) = (image.width, image.height, image.channels);
    let clamp = |v: i64, max: usize| v.clamp(0, max as i64 - 1) as usize;
    let mut horizontal = vec![0.0f64; w * h * c];
    for y in 0..h {
        for x in 0..w {
            for ch in 0..c {
                let mut acc = 0.0;
                for (ki, weight) in kernel.iter().enumerate() {
                    let sx = clamp(x as i64 + ki as i64 - radius as i64, w);
                    acc += weight * image.at(sx, y, ch) as f64;
                }
                horizontal[(y * w + x) * c + ch] = acc;
            }
        }
    }
    let mut samples = Vec::with_capacity(w * h * c);
    for y in 0..h {
        for x in 0..w {
            for ch in 0..c {
                let mut acc = 0.0;
                for (ki, weight) in kernel.iter().enumerate() {
                    let sy = clamp(y as i64 + ki as i64 - radius as i64, h);
                    acc += weight * horizontal[(sy * w + x) * c + ch];
                }
                samples.push(round_u8(acc));
            }
        }
    }
    RasterImage::new(w, h, c, samples)
}

/// Luma conversion `round(0.299·R + 0.587·G + 0.114·B)`; grayscale input
/// is returned unchanged.
pub fn to_gray(image: &RasterImage) -> RasterImage {
    if image.channels == 1 {
        return image.clone();
    }
    let samples = image
        .samples
        .chunks_exact(3)
        .map(|px| round_u8(0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64))
        .collect();
    RasterImage::new(image.width, image.height, 1, samples).expect("gray preserves geometry")
}

/// Fixed-length image descriptor: a `grid x grid` bilinear thumbnail of the
/// gray image scaled to [0, 1], followed by an `hist_bins`-bin intensity
/// histogram of the original gray image normalized to sum 1. Output length
/// is exactly `grid² + hist_bins`.
pub fn extract_features(image: &RasterImage, grid: usize, hist_bins: usize) -> Result<Vec<f64>> {
    if grid == 0 || hist_bins == 0 {
        return Err(Error::Config("feature grid and histogram bins must be at least 1"));
    }
    let gray = to_gray(image);
    let thumb = resize_bilinear(&gray, grid, grid)?;
    let mut features = Vec::with_capacity(grid * grid + hist_bins);
    features.extend(thumb.samples().iter().map(|&v| v as f64 / 255.0));

    let mut counts = vec![0usize; hist_bins];
    for &v in gray.samples() {
        counts[(v as usize * hist_bins) / 256] += 1;
    }
    let total = gray.samples().len() as f64;
    features.extend(counts.iter().map(|&c| c as f64 / total));
    Ok(features)
}
