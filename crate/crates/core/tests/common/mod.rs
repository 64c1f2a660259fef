#![allow(dead_code)]

use arb_core::BinaryImage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A union of random axis-aligned rectangles and discs inside a `size`
/// square frame with a margin of at least `margin` pixels.
pub fn random_blob(rng: &mut impl Rng, size: usize, margin: usize) -> BinaryImage {
    let lo = margin as f64;
    let hi = (size - margin) as f64;
    let span = hi - lo;
    let parts: Vec<(bool, f64, f64, f64, f64)> = (0..rng.gen_range(1..5))
        .map(|_| {
            let cx = rng.gen_range(lo + span * 0.3..hi - span * 0.3);
            let cy = rng.gen_range(lo + span * 0.3..hi - span * 0.3);
            let a = rng.gen_range(1.0..span * 0.3);
            let b = rng.gen_range(1.0..span * 0.3);
            (rng.gen_bool(0.5), cx, cy, a, b)
        })
        .collect();
    BinaryImage::from_fn(size, size, |x, y| {
        let (x, y) = (x as f64, y as f64);
        parts.iter().any(|&(disc, cx, cy, a, b)| {
            if disc {
                (x - cx).powi(2) + (y - cy).powi(2) <= a * a
            } else {
                (x - cx).abs() <= a && (y - cy).abs() <= b
            }
        })
    })
    .unwrap()
}

/// 8-connected component count by breadth-first flood fill.
pub fn component_count(img: &BinaryImage) -> usize {
    let (w, h) = (img.width(), img.height());
    let mut seen = vec![false; w * h];
    let mut count = 0;
    for start in 0..w * h {
        if seen[start] || !img.get(start % w, start / w) {
            continue;
        }
        count += 1;
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            let (x, y) = ((p % w) as i64, (p / w) as i64);
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                        continue;
                    }
                    let q = ny as usize * w + nx as usize;
                    if !seen[q] && img.get(nx as usize, ny as usize) {
                        seen[q] = true;
                        queue.push_back(q);
                    }
                }
            }
        }
    }
    count
}

pub fn shift(img: &BinaryImage, dx: i64, dy: i64) -> BinaryImage {
    BinaryImage::from_fn(img.width(), img.height(), |x, y| img.get_or_bg(x as i64 - dx, y as i64 - dy)).unwrap()
}

/// Quarter turn clockwise on screen inside a square frame.
pub fn rot90(img: &BinaryImage) -> BinaryImage {
    let n = img.width();
    assert_eq!(n, img.height());
    BinaryImage::from_fn(n, n, |x, y| img.get(y, n - 1 - x)).unwrap()
}

/// `a(u) = 1/N sum_t s(t) exp(-2 pi i u t / N)` by direct summation.
pub fn naive_dft(signal: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let n = signal.len();
    (0..n)
        .map(|u| {
            let (mut re, mut im) = (0.0, 0.0);
            for (t, &(sr, si)) in signal.iter().enumerate() {
                let ang = -2.0 * std::f64::consts::PI * ((u * t) % n) as f64 / n as f64;
                let (s, c) = ang.sin_cos();
                re += sr * c - si * s;
                im += sr * s + si * c;
            }
            (re / n as f64, im / n as f64)
        })
        .collect()
}
