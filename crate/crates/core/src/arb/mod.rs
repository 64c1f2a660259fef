//! Angular radial bins (ARB).
//!
//! The circle circumscribing a shape (centred on its centroid, radius `rho`
//! reaching the farthest contour point) is split into `rings` concentric
//! rings and `360 / angular_width_deg` equal sectors measured clockwise from
//! North. Every contour point falls in exactly one (ring, sector) bin: rings
//! are half-open `[i * rho / rings, (i + 1) * rho / rings)` with the last one
//! closed at `rho`, sectors are half-open `[j * w, (j + 1) * w)`. A point on
//! the centroid itself goes to bin `(0, 0)`.
//!
//! The overlapping variant stacks `N` grids, instance `n` rotated clockwise by
//! `n * tilt_delta_deg`; the accumulative variant sums those grids.

mod config;
mod fourier;
mod polar;

pub use config::{ArbConfig, OrientationMode, WeightMode};
pub use fourier::fourier_magnitude_descriptor;
pub use polar::{bearing_deg, PolarSample, ShapeFrame};

use crate::imgio::BinaryImage;
use crate::{Error, Result};

/// A 2-D histogram indexed by (ring, angular bin), stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ArbDescriptor {
    values: Vec<f64>,
    rings: usize,
    bins: usize,
    config: ArbConfig,
}

impl ArbDescriptor {
    pub fn from_values(values: Vec<f64>, rings: usize, bins: usize, config: ArbConfig) -> Result<Self> {
        if values.len() != rings * bins {
            return Err(Error::LengthMismatch {
                left: values.len(),
                right: rings * bins,
            });
        }
        Ok(Self {
            values,
            rings,
            bins,
            config,
        })
    }

    pub fn zeros(config: ArbConfig) -> Self {
        let (rings, bins) = (config.rings, config.angular_bins());
        Self {
            values: vec![0.0; rings * bins],
            rings,
            bins,
            config,
        }
    }

    pub fn rings(&self) -> usize {
        self.rings
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn config(&self) -> &ArbConfig {
        &self.config
    }

    #[inline]
    pub fn get(&self, ring: usize, bin: usize) -> f64 {
        self.values[ring * self.bins + bin]
    }

    /// Row-major values, one ring after another.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Rotates the angular axis: entry `(i, j)` of the result is entry
    /// `(i, j + k mod A)` of `self`.
    pub fn shift_angular(&self, k: isize) -> ArbDescriptor {
        let a = self.bins as isize;
        let mut out = self.clone();
        for i in 0..self.rings {
            for j in 0..self.bins {
                let src = (j as isize + k).rem_euclid(a) as usize;
                out.values[i * self.bins + j] = self.values[i * self.bins + src];
            }
        }
        out
    }
}

/// A 3-D histogram indexed by (ring, angular bin, instance), row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct OverlappingArbDescriptor {
    values: Vec<f64>,
    rings: usize,
    bins: usize,
    instances: usize,
    config: ArbConfig,
}

impl OverlappingArbDescriptor {
    fn from_slices(slices: &[ArbDescriptor], config: ArbConfig) -> Self {
        let (rings, bins, instances) = (config.rings, config.angular_bins(), slices.len());
        let mut values = vec![0.0; rings * bins * instances];
        for (n, slice) in slices.iter().enumerate() {
            for (k, &v) in slice.values.iter().enumerate() {
                values[k * instances + n] = v;
            }
        }
        Self {
            values,
            rings,
            bins,
            instances,
            config,
        }
    }

    pub fn rings(&self) -> usize {
        self.rings
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn instances(&self) -> usize {
        self.instances
    }

    pub fn config(&self) -> &ArbConfig {
        &self.config
    }

    #[inline]
    pub fn get(&self, ring: usize, bin: usize, instance: usize) -> f64 {
        self.values[(ring * self.bins + bin) * self.instances + instance]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// The 2-D grid of instance `n`.
    pub fn slice(&self, n: usize) -> ArbDescriptor {
        let values = (0..self.rings * self.bins)
            .map(|k| self.values[k * self.instances + n])
            .collect();
        ArbDescriptor {
            values,
            rings: self.rings,
            bins: self.bins,
            config: self.config,
        }
    }
}

/// Ring index of distance `r` under half-open boundaries `k * rho / rings`,
/// the outermost ring closed at `rho`.
#[inline]
pub(crate) fn ring_index(r: f64, rho: f64, rings: usize) -> usize {
    let boundary = |k: usize| rho * k as f64 / rings as f64;
    let mut i = ((r / rho) * rings as f64).floor().clamp(0.0, (rings - 1) as f64) as usize;
    while i > 0 && r < boundary(i) {
        i -= 1;
    }
    while i + 1 < rings && r >= boundary(i + 1) {
        i += 1;
    }
    i
}

/// Angle of `bearing` relative to a grid whose bin 0 starts at `start`,
/// in `[0, 360)`.
#[inline]
pub(crate) fn relative_angle(bearing: f64, start: f64) -> f64 {
    let a = (bearing - start).rem_euclid(360.0);
    if a >= 360.0 {
        a - 360.0
    } else {
        a
    }
}

/// Sector index of a relative angle for bins of `width` degrees.
#[inline]
pub(crate) fn sector_index(angle: f64, width: f64, bins: usize) -> usize {
    let mut j = (angle / width).floor().clamp(0.0, (bins - 1) as f64) as usize;
    if j > 0 && angle < j as f64 * width {
        j -= 1;
    }
    if j + 1 < bins && angle >= (j + 1) as f64 * width {
        j += 1;
    }
    j
}

impl ShapeFrame {
    /// Bins this shape's contour under `cfg`'s grid with bin 0 starting
    /// `start_angle_deg` clockwise from North.
    pub fn bin(&self, cfg: &ArbConfig, start_angle_deg: f64) -> Result<ArbDescriptor> {
        cfg.validate()?;
        self.require_extent()?;
        let (rings, bins) = (cfg.rings, cfg.angular_bins());
        let width = cfg.angular_width_deg as f64;
        let rho = self.rho();
        let mut sums = vec![0.0f64; rings * bins];
        let mut counts = vec![0u32; rings * bins];
        for s in self.samples() {
            let k = if s.r == 0.0 {
                0
            } else {
                let i = ring_index(s.r, rho, rings);
                let j = sector_index(relative_angle(s.bearing_deg, start_angle_deg), width, bins);
                i * bins + j
            };
            sums[k] += s.r;
            counts[k] += 1;
        }
        let mass = self.mass();
        let values = match cfg.weight_mode {
            WeightMode::CountPoints => counts.iter().map(|&c| c as f64 / mass).collect(),
            WeightMode::TotalDistance => sums.iter().map(|&s| s / mass).collect(),
            WeightMode::AverageDistance => sums
                .iter()
                .zip(&counts)
                .map(|(&s, &c)| if c == 0 { 0.0 } else { s / c as f64 })
                .collect(),
        };
        ArbDescriptor::from_values(values, rings, bins, *cfg)
    }

    /// Instances `0..cfg.instances`, instance `n` starting at
    /// `start_angle_deg + n * tilt_delta_deg`.
    pub fn bin_overlapping(&self, cfg: &ArbConfig, start_angle_deg: f64) -> Result<OverlappingArbDescriptor> {
        cfg.validate()?;
        let slices = (0..cfg.instances)
            .map(|n| self.bin(cfg, start_angle_deg + n as f64 * cfg.tilt_delta_deg))
            .collect::<Result<Vec<_>>>()?;
        Ok(OverlappingArbDescriptor::from_slices(&slices, *cfg))
    }

    /// Sum over the instance axis of [`bin_overlapping`](Self::bin_overlapping).
    pub fn bin_accumulative(&self, cfg: &ArbConfig, start_angle_deg: f64) -> Result<ArbDescriptor> {
        Ok(accumulate(&self.bin_overlapping(cfg, start_angle_deg)?))
    }

    /// Start angle that aligns the grid with this shape's orientation.
    pub fn start_angle(&self, mode: OrientationMode) -> Result<StartAngle> {
        match mode {
            OrientationMode::None | OrientationMode::FourierMagnitude => Ok(StartAngle {
                degrees: 0.0,
                isotropic: false,
            }),
            OrientationMode::Moments => {
                if self.moments().area() < 2 {
                    return Err(Error::DegenerateShape("single-pixel shape has no orientation"));
                }
                let m = self.moments();
                if m.is_isotropic() {
                    return Ok(StartAngle {
                        degrees: 0.0,
                        isotropic: true,
                    });
                }
                // theta is measured from +x towards +y, i.e. clockwise from
                // East on screen; East is 90 degrees clockwise from North.
                Ok(StartAngle {
                    degrees: relative_angle(90.0 + m.theta.to_degrees(), 0.0),
                    isotropic: false,
                })
            }
            OrientationMode::FurthestPoint => {
                self.require_extent()?;
                Ok(StartAngle {
                    degrees: self.samples()[self.furthest_index()].bearing_deg,
                    isotropic: false,
                })
            }
        }
    }
}

/// Element-wise sum over the instance axis, instances added in order.
pub fn accumulate(overlap: &OverlappingArbDescriptor) -> ArbDescriptor {
    let n = overlap.instances;
    let values = overlap
        .values
        .chunks_exact(n)
        .map(|c| c.iter().fold(0.0, |acc, &v| acc + v))
        .collect();
    ArbDescriptor {
        values,
        rings: overlap.rings,
        bins: overlap.bins,
        config: overlap.config,
    }
}

/// Start angle chosen by an orientation mode. `isotropic` flags shapes
/// whose second-order moments define no axis; their angle is 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StartAngle {
    pub degrees: f64,
    pub isotropic: bool,
}

/// Simple ARB of `img` with bin 0 starting `start_angle_deg` clockwise from North.
pub fn compute_simple_arb(img: &BinaryImage, cfg: &ArbConfig, start_angle_deg: f64) -> Result<ArbDescriptor> {
    cfg.validate()?;
    ShapeFrame::from_image(img)?.bin(cfg, start_angle_deg)
}

/// Overlapping ARB starting at North.
pub fn compute_overlapping_arb(img: &BinaryImage, cfg: &ArbConfig) -> Result<OverlappingArbDescriptor> {
    cfg.validate()?;
    ShapeFrame::from_image(img)?.bin_overlapping(cfg, 0.0)
}

/// Accumulative ARB starting at North.
pub fn compute_accumulative_arb(img: &BinaryImage, cfg: &ArbConfig) -> Result<ArbDescriptor> {
    cfg.validate()?;
    ShapeFrame::from_image(img)?.bin_accumulative(cfg, 0.0)
}

/// Start angle for the moments or furthest-point alignment of `img`.
/// `None` and `FourierMagnitude` do not rotate the grid and yield 0.
pub fn orient_start_angle(img: &BinaryImage, mode: OrientationMode) -> Result<StartAngle> {
    let frame = ShapeFrame::from_image(img)?;
    if frame.moments().area() < 2 {
        return Err(Error::DegenerateShape("single-pixel shape has no orientation"));
    }
    frame.start_angle(mode)
}

/// Which ARB grid family to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArbVariant {
    Simple,
    Overlapping,
    Accumulative,
}

impl ArbVariant {
    pub fn token(self) -> &'static str {
        match self {
            ArbVariant::Simple => "simple",
            ArbVariant::Overlapping => "overlap",
            ArbVariant::Accumulative => "accum",
        }
    }
}

/// Full pipeline from a frame to a flat descriptor vector, applying
/// `cfg.orientation_mode`. Overlapping output is flattened as
/// (ring, bin, instance); with `FourierMagnitude` each instance grid is
/// replaced by its DFT magnitude.
pub fn describe_frame(frame: &ShapeFrame, variant: ArbVariant, cfg: &ArbConfig) -> Result<Vec<f64>> {
    let start = frame.start_angle(cfg.orientation_mode)?.degrees;
    let fourier = cfg.orientation_mode == OrientationMode::FourierMagnitude;
    let flat2d = |d: ArbDescriptor| -> Vec<f64> {
        if fourier {
            fourier_magnitude_descriptor(&d).into_values()
        } else {
            d.into_values()
        }
    };
    Ok(match variant {
        ArbVariant::Simple => flat2d(frame.bin(cfg, start)?),
        ArbVariant::Accumulative => flat2d(frame.bin_accumulative(cfg, start)?),
        ArbVariant::Overlapping => {
            let overlap = frame.bin_overlapping(cfg, start)?;
            if fourier {
                let slices: Vec<ArbDescriptor> = (0..overlap.instances())
                    .map(|n| fourier_magnitude_descriptor(&overlap.slice(n)))
                    .collect();
                OverlappingArbDescriptor::from_slices(&slices, *cfg).into_values()
            } else {
                overlap.into_values()
            }
        }
    })
}
