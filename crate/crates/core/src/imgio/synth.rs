//! Synthetic articulated silhouettes: a convex elliptical palm with two to
//! six finger-like capsules radiating from it.

use std::collections::HashSet;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BinaryImage, Dataset};
use crate::geometry::label_components;
use crate::{Error, Result};

struct Finger {
    angle: f64,
    length: f64,
    half_width: f64,
}

struct GestureParams {
    cx: f64,
    cy: f64,
    semi_major: f64,
    semi_minor: f64,
    tilt: f64,
    fingers: Vec<Finger>,
}

impl GestureParams {
    fn sample(rng: &mut ChaCha8Rng, w: usize, h: usize) -> Self {
        let s = w.min(h) as f64;
        let semi_major = rng.gen_range(0.15..0.24) * s;
        let semi_minor = semi_major * rng.gen_range(0.6..0.95);
        let tilt = rng.gen_range(0.0..std::f64::consts::PI);
        // Fingers fan out over an arc of about 200 degrees around a random heading.
        let heading = rng.gen_range(0.0..TAU);
        let count = rng.gen_range(2..=6);
        let mut fingers: Vec<Finger> = Vec::with_capacity(count);
        let mut attempts = 0;
        while fingers.len() < count {
            attempts += 1;
            if attempts > 500 {
                fingers.clear();
                attempts = 0;
            }
            let angle = (heading + rng.gen_range(-1.75..1.75)).rem_euclid(TAU);
            let clear = fingers.iter().all(|f| {
                let d = (f.angle - angle).rem_euclid(TAU);
                d.min(TAU - d) > 0.4
            });
            if clear {
                fingers.push(Finger {
                    angle,
                    length: rng.gen_range(0.08..0.28) * s,
                    half_width: rng.gen_range(0.02..0.04) * s,
                });
            }
        }
        Self {
            cx: (w as f64 - 1.0) / 2.0 + rng.gen_range(-0.04..0.04) * s,
            cy: (h as f64 - 1.0) / 2.0 + rng.gen_range(-0.04..0.04) * s,
            semi_major,
            semi_minor,
            tilt,
            fingers,
        }
    }

    fn rasterize(&self, w: usize, h: usize, scale: f64) -> Result<BinaryImage> {
        let (a, b) = (self.semi_major * scale, self.semi_minor * scale);
        let (sin_t, cos_t) = self.tilt.sin_cos();
        // Capsules run from the palm centre to a tip beyond the palm edge.
        let segments: Vec<(f64, f64, f64)> = self
            .fingers
            .iter()
            .map(|f| {
                let (dy, dx) = f.angle.sin_cos();
                let reach = a.max(b) + f.length * scale;
                (dx * reach, dy * reach, (f.half_width * scale).max(1.5))
            })
            .collect();
        BinaryImage::from_fn(w, h, |x, y| {
            let px = x as f64 - self.cx;
            let py = y as f64 - self.cy;
            let u = px * cos_t + py * sin_t;
            let v = -px * sin_t + py * cos_t;
            if (u / a).powi(2) + (v / b).powi(2) <= 1.0 {
                return true;
            }
            segments.iter().any(|&(tx, ty, hw)| {
                let len2 = tx * tx + ty * ty;
                let t = ((px * tx + py * ty) / len2).clamp(0.0, 1.0);
                let (ex, ey) = (px - t * tx, py - t * ty);
                ex * ex + ey * ey <= hw * hw
            })
        })
    }
}

/// Keeps a two-pixel background margin around the shape.
fn inside_margin(img: &BinaryImage) -> bool {
    let (w, h) = (img.width(), img.height());
    img.foreground()
        .all(|(x, y)| x >= 2 && y >= 2 && x + 2 < w && y + 2 < h)
}

fn sample_gesture(rng: &mut ChaCha8Rng, w: usize, h: usize) -> Result<BinaryImage> {
    loop {
        let params = GestureParams::sample(rng, w, h);
        let mut scale = 1.0;
        let img = loop {
            let img = params.rasterize(w, h, scale)?;
            if inside_margin(&img) || scale < 0.2 {
                break img;
            }
            scale *= 0.92;
        };
        if img.foreground_count() >= 16
            && inside_margin(&img)
            && label_components(&img).sizes.len() == 1
        {
            return Ok(img);
        }
    }
}

/// Generates `n` distinct single-component gesture-like silhouettes. The
/// output is a pure function of `(n, w, h, seed)`; ids are `g0000`, `g0001`, ...
pub fn generate_synthetic_dataset(n: usize, w: usize, h: usize, seed: u64) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::InvalidConfig("synthetic dataset size must be >= 1".into()));
    }
    if w < 16 || h < 16 {
        return Err(Error::InvalidConfig(format!(
            "synthetic images need at least 16x16 pixels, got {w}x{h}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(n);
    let mut entries = Vec::with_capacity(n);
    while entries.len() < n {
        let img = sample_gesture(&mut rng, w, h)?;
        if seen.insert(img.pixels().to_vec()) {
            entries.push((format!("g{:04}", entries.len()), img));
        }
    }
    Dataset::new(entries)
}
