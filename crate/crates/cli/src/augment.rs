//! The augmentation op string: a comma-separated chain of image operations
//! applied left to right.
//!
//! Grammar: `rot90 | rot:<deg> | flip-h | flip-v | crop:<x>:<y>:<w>:<h> |
//! resize:<w>:<h> | stretch | noise:<sigma_fraction> | blur:<sigma>`.
//!
//! Noise seeding: image number `i` in a batch draws from stream seed
//! `seed XOR i`, so batch results are independent of processing order; the
//! j-th noise op within one chain offsets that seed by `j` golden-gamma
//! steps so repeated noise ops do not reuse a stream.

use ssgl_core::image::{
    add_gaussian_noise, contrast_stretch, crop, flip, gaussian_blur, resize_bilinear, rotate,
    rotate90, FlipAxis, NoiseSpec, RasterImage,
};

use crate::{data_error, Result};

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, PartialEq)]
pub enum AugmentOp {
    Rot90,
    Rot { degrees: f64 },
    FlipH,
    FlipV,
    Crop { x: usize, y: usize, w: usize, h: usize },
    Resize { w: usize, h: usize },
    Stretch,
    Noise { sigma_fraction: f64 },
    Blur { sigma: f64 },
}

fn parse_usize(op: &str, token: &str) -> Result<usize> {
    token
        .parse()
        .map_err(|_| data_error(format!("op {op:?}: {token:?} is not a valid count")))
}

fn parse_real(op: &str, token: &str) -> Result<f64> {
    let v: f64 = token
        .parse()
        .map_err(|_| data_error(format!("op {op:?}: {token:?} is not a valid number")))?;
    if !v.is_finite() {
        return Err(data_error(format!("op {op:?}: value must be finite")));
    }
    Ok(v)
}

fn expect_args<'a>(op: &str, parts: &[&'a str], n: usize) -> Result<Vec<&'a str>> {
    if parts.len() != n + 1 {
        return Err(data_error(format!(
            "op {op:?}: expected {n} argument(s), found {}",
            parts.len() - 1
        )));
    }
    Ok(parts[1..].to_vec())
}

pub fn parse_ops(spec: &str) -> Result<Vec<AugmentOp>> {
    if spec.is_empty() {
        return Err(data_error("op string must not be empty"));
    }
    let mut ops = Vec::new();
    for op in spec.split(',') {
        let parts: Vec<&str> = op.split(':').collect();
        let parsed = match parts[0] {
            "rot90" => {
                expect_args(op, &parts, 0)?;
                AugmentOp::Rot90
            }
            "rot" => {
                let args = expect_args(op, &parts, 1)?;
                AugmentOp::Rot { degrees: parse_real(op, args[0])? }
            }
            "flip-h" => {
                expect_args(op, &parts, 0)?;
                AugmentOp::FlipH
            }
            "flip-v" => {
                expect_args(op, &parts, 0)?;
                AugmentOp::FlipV
            }
            "crop" => {
                let args = expect_args(op, &parts, 4)?;
                AugmentOp::Crop {
                    x: parse_usize(op, args[0])?,
                    y: parse_usize(op, args[1])?,
                    w: parse_usize(op, args[2])?,
                    h: parse_usize(op, args[3])?,
                }
            }
            "resize" => {
                let args = expect_args(op, &parts, 2)?;
                AugmentOp::Resize { w: parse_usize(op, args[0])?, h: parse_usize(op, args[1])? }
            }
            "stretch" => {
                expect_args(op, &parts, 0)?;
                AugmentOp::Stretch
            }
            "noise" => {
                let args = expect_args(op, &parts, 1)?;
                AugmentOp::Noise { sigma_fraction: parse_real(op, args[0])? }
            }
            "blur" => {
                let args = expect_args(op, &parts, 1)?;
                AugmentOp::Blur { sigma: parse_real(op, args[0])? }
            }
            other => return Err(data_error(format!("unknown op {other:?}"))),
        };
        ops.push(parsed);
    }
    Ok(ops)
}

/// Applies a parsed chain to one image; `image_seed` is the batch seed XOR
/// the image's index.
pub fn apply_ops(image: &RasterImage, ops: &[AugmentOp], image_seed: u64) -> Result<RasterImage> {
    let mut current = image.clone();
    let mut noise_ops = 0u64;
    for op in ops {
        current = match op {
            AugmentOp::Rot90 => rotate90(&current),
            AugmentOp::Rot { degrees } => rotate(&current, *degrees)?,
            AugmentOp::FlipH => flip(&current, FlipAxis::Horizontal),
            AugmentOp::FlipV => flip(&current, FlipAxis::Vertical),
            AugmentOp::Crop { x, y, w, h } => crop(&current, *x, *y, *w, *h)?,
            AugmentOp::Resize { w, h } => resize_bilinear(&current, *w, *h)?,
            AugmentOp::Stretch => contrast_stretch(&current),
            AugmentOp::Noise { sigma_fraction } => {
                let seed = image_seed ^ noise_ops.wrapping_mul(GOLDEN_GAMMA);
                noise_ops += 1;
                add_gaussian_noise(
                    &current,
                    &NoiseSpec { sigma_fraction: *sigma_fraction, seed },
                )?
            }
            AugmentOp::Blur { sigma } => gaussian_blur(&current, *sigma)?,
        };
    }
    Ok(current)
}
