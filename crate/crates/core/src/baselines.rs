//! Comparison descriptors: complex-coordinate and centroid-distance Fourier
//! descriptors, and the Hausdorff distance between point sets.

use std::fmt;
use std::str::FromStr;

pub use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::geometry::Contour;
use crate::{Error, Result};

/// Points per resampled contour.
pub const RESAMPLE_COUNT: usize = 128;

/// Default number of retained Fourier magnitudes.
pub const DEFAULT_RETAINED: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignatureKind {
    /// `c(t) = x(t) + i y(t)`.
    ComplexCoordinates,
    /// `r(t) = |p(t) - centroid|`.
    CentroidDistance,
}

impl SignatureKind {
    pub fn token(self) -> &'static str {
        match self {
            SignatureKind::ComplexCoordinates => "cc",
            SignatureKind::CentroidDistance => "cd",
        }
    }
}

impl fmt::Display for SignatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for SignatureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cc" => Ok(SignatureKind::ComplexCoordinates),
            "cd" => Ok(SignatureKind::CentroidDistance),
            other => Err(Error::InvalidConfig(format!("unknown signature kind {other:?}"))),
        }
    }
}

/// Normalized magnitudes of the low-frequency Fourier coefficients of a
/// contour signature.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierDescriptor {
    magnitudes: Vec<f64>,
    kind: SignatureKind,
}

impl FourierDescriptor {
    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn kind(&self) -> SignatureKind {
        self.kind
    }

    pub fn into_magnitudes(self) -> Vec<f64> {
        self.magnitudes
    }

    /// Builds the descriptor from an already sampled signature.
    ///
    /// Complex coordinates: the mean is removed, magnitudes are divided by
    /// `|a(1)|` and kept in the order `u = 1, -1, 2, -2, ...`.
    /// Centroid distance: magnitudes are divided by `|a(0)|` and kept for
    /// `u = 1..=k`.
    pub fn from_signature(kind: SignatureKind, signal: &[Complex64], k: usize) -> Result<Self> {
        let n = signal.len();
        if k == 0 {
            return Err(Error::InvalidConfig("retained coefficient count must be >= 1".into()));
        }
        let limit = match kind {
            SignatureKind::ComplexCoordinates => n.saturating_sub(1),
            SignatureKind::CentroidDistance => n / 2,
        };
        if k > limit {
            return Err(Error::InvalidConfig(format!(
                "cannot retain {k} coefficients from a {n}-point {kind} signature (max {limit})"
            )));
        }
        let magnitudes = match kind {
            SignatureKind::ComplexCoordinates => {
                let mean = signal.iter().sum::<Complex64>() / n as f64;
                let centred: Vec<Complex64> = signal.iter().map(|&c| c - mean).collect();
                let spec = dft(&centred);
                let norm = spec[1].norm();
                if norm.is_nan() || norm <= 0.0 {
                    return Err(Error::DegenerateShape("first Fourier coefficient vanishes"));
                }
                (0..k)
                    .map(|i| {
                        let u = i / 2 + 1;
                        let idx = if i % 2 == 0 { u } else { n - u };
                        spec[idx].norm() / norm
                    })
                    .collect()
            }
            SignatureKind::CentroidDistance => {
                let spec = dft(signal);
                let norm = spec[0].norm();
                if norm.is_nan() || norm <= 0.0 {
                    return Err(Error::DegenerateShape("mean centroid distance is zero"));
                }
                (1..=k).map(|u| spec[u].norm() / norm).collect()
            }
        };
        Ok(Self { magnitudes, kind })
    }
}

/// Discrete Fourier transform with `1/N` normalization:
/// `a(u) = 1/N * sum_t s(t) exp(-i 2 pi u t / N)`.
pub fn dft(signal: &[Complex64]) -> Vec<Complex64> {
    let n = signal.len();
    let mut buf = signal.to_vec();
    if n == 0 {
        return buf;
    }
    FftPlanner::<f64>::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

fn resample_points(points: &[(f64, f64)], n: usize) -> Vec<(f64, f64)> {
    let m = points.len();
    let seg_len = |i: usize| {
        let (a, b) = (points[i], points[(i + 1) % m]);
        ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt()
    };
    let perimeter: f64 = (0..m).map(seg_len).sum();
    if m == 1 || perimeter == 0.0 {
        return vec![points[0]; n];
    }
    let mut out = Vec::with_capacity(n);
    let mut seg = 0;
    let mut seg_start = 0.0;
    let mut len = seg_len(0);
    for k in 0..n {
        let target = perimeter * k as f64 / n as f64;
        while seg + 1 < m && seg_start + len <= target {
            seg_start += len;
            seg += 1;
            len = seg_len(seg);
        }
        let (a, b) = (points[seg], points[(seg + 1) % m]);
        let t = if len > 0.0 { ((target - seg_start) / len).clamp(0.0, 1.0) } else { 0.0 };
        out.push((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)));
    }
    out
}

/// `n` points at uniform arc-length spacing along the closed contour
/// polyline, starting at contour point 0.
pub fn resample_contour(c: &Contour, n: usize) -> Result<Vec<(f64, f64)>> {
    if n == 0 {
        return Err(Error::InvalidConfig("resample count must be >= 1".into()));
    }
    let points: Vec<(f64, f64)> = c.points().iter().map(|&(x, y)| (x as f64, y as f64)).collect();
    Ok(resample_points(&points, n))
}

/// Resampled `c(t) = x(t) + i y(t)`, with coordinates taken relative to
/// contour point 0 so that integer translations leave it unchanged.
pub fn complex_signature(c: &Contour, n: usize) -> Result<Vec<Complex64>> {
    if n == 0 {
        return Err(Error::InvalidConfig("resample count must be >= 1".into()));
    }
    let (x0, y0) = c.points()[0];
    let points: Vec<(f64, f64)> = c
        .points()
        .iter()
        .map(|&(x, y)| ((x - x0) as f64, (y - y0) as f64))
        .collect();
    Ok(resample_points(&points, n)
        .into_iter()
        .map(|(x, y)| Complex64::new(x, y))
        .collect())
}

/// Resampled centroid distance `r(t)` as a real-valued complex signal.
pub fn centroid_distance_signature(c: &Contour, centroid: (f64, f64), n: usize) -> Result<Vec<Complex64>> {
    Ok(resample_contour(c, n)?
        .into_iter()
        .map(|(x, y)| {
            let (dx, dy) = (x - centroid.0, y - centroid.1);
            Complex64::new((dx * dx + dy * dy).sqrt(), 0.0)
        })
        .collect())
}

/// Complex-coordinate Fourier descriptor over a 128-point resampling.
pub fn fd_complex_coordinates(c: &Contour, k: usize) -> Result<FourierDescriptor> {
    if c.len() < 3 {
        return Err(Error::DegenerateShape("contour has fewer than 3 points"));
    }
    let signal = complex_signature(c, RESAMPLE_COUNT)?;
    FourierDescriptor::from_signature(SignatureKind::ComplexCoordinates, &signal, k)
}

/// Centroid-distance Fourier descriptor over a 128-point resampling.
pub fn fd_centroid_distance(c: &Contour, centroid: (f64, f64), k: usize) -> Result<FourierDescriptor> {
    if c.len() < 3 {
        return Err(Error::DegenerateShape("contour has fewer than 3 points"));
    }
    let signal = centroid_distance_signature(c, centroid, RESAMPLE_COUNT)?;
    FourierDescriptor::from_signature(SignatureKind::CentroidDistance, &signal, k)
}

/// A non-empty, unordered set of planar points.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    points: Vec<(f64, f64)>,
}

impl PointSet {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidConfig("point set must not be empty".into()));
        }
        Ok(Self { points })
    }

    /// Interprets a flat `[x0, y0, x1, y1, ...]` slice.
    pub fn from_flat(flat: &[f64]) -> Result<Self> {
        if !flat.len().is_multiple_of(2) {
            return Err(Error::InvalidConfig("flat point list has odd length".into()));
        }
        Self::new(flat.chunks_exact(2).map(|p| (p[0], p[1])).collect())
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }
}

/// `h(A, B) = max_{a in A} min_{b in B} |a - b|`.
pub fn directed_hausdorff(a: &PointSet, b: &PointSet) -> f64 {
    let mut worst = 0.0f64;
    for &(ax, ay) in &a.points {
        let mut nearest = f64::INFINITY;
        for &(bx, by) in &b.points {
            let d2 = (ax - bx) * (ax - bx) + (ay - by) * (ay - by);
            if d2 < nearest {
                nearest = d2;
                if nearest <= worst {
                    // Cannot raise the running maximum any more.
                    break;
                }
            }
        }
        worst = worst.max(nearest);
    }
    worst.sqrt()
}

/// `H(A, B) = max(h(A, B), h(B, A))`.
pub fn hausdorff(a: &PointSet, b: &PointSet) -> f64 {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}
