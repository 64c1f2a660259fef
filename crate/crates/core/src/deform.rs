//! Query deformations: translation, rotation, scaling, perspective, erosion
//! and dilation, each graded by an integer level.

use std::fmt;
use std::str::FromStr;

use crate::geometry::compute_moments;
use crate::imgio::BinaryImage;
use crate::{Error, Result};

/// Pixels moved per translation level.
pub const TRANSLATION_STEP_PX: i64 = 1;
/// Degrees turned per rotation level.
pub const ROTATION_STEP_DEG: f64 = 1.5;
/// Relative size change per scaling level.
pub const SCALING_STEP: f64 = 0.01;
/// Out-of-plane tilt per perspective level, in degrees.
pub const PERSPECTIVE_STEP_DEG: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DeformKind {
    Translation,
    Rotation,
    Scaling,
    Perspective,
    Erosion,
    Dilation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Up,
    Down,
    Left,
    Right,
    Single,
}

impl DeformKind {
    pub const ALL: [DeformKind; 6] = [
        DeformKind::Translation,
        DeformKind::Rotation,
        DeformKind::Scaling,
        DeformKind::Perspective,
        DeformKind::Erosion,
        DeformKind::Dilation,
    ];

    pub fn variants(self) -> &'static [Variant] {
        match self {
            DeformKind::Translation => &[Variant::Up, Variant::Down, Variant::Left, Variant::Right],
            DeformKind::Rotation => &[Variant::Left, Variant::Right],
            DeformKind::Scaling => &[Variant::Up, Variant::Down],
            _ => &[Variant::Single],
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            DeformKind::Translation => "translation",
            DeformKind::Rotation => "rotation",
            DeformKind::Scaling => "scaling",
            DeformKind::Perspective => "perspective",
            DeformKind::Erosion => "erosion",
            DeformKind::Dilation => "dilation",
        }
    }
}

impl Variant {
    pub fn token(self) -> &'static str {
        match self {
            Variant::Up => "up",
            Variant::Down => "down",
            Variant::Left => "left",
            Variant::Right => "right",
            Variant::Single => "single",
        }
    }
}

impl fmt::Display for DeformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for DeformKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DeformKind::ALL
            .into_iter()
            .find(|k| k.token() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown deformation kind {s:?}")))
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Variant::Up, Variant::Down, Variant::Left, Variant::Right, Variant::Single]
            .into_iter()
            .find(|v| v.token() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown deformation variant {s:?}")))
    }
}

/// One deformation: a kind, a severity level (>= 1) and a direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeformationSpec {
    kind: DeformKind,
    level: u32,
    variant: Variant,
}

impl DeformationSpec {
    pub fn new(kind: DeformKind, level: u32, variant: Variant) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidConfig("deformation level must be >= 1".into()));
        }
        if !kind.variants().contains(&variant) {
            return Err(Error::InvalidConfig(format!("variant {variant} is not valid for {kind}")));
        }
        if kind == DeformKind::Scaling && variant == Variant::Down && level as f64 * SCALING_STEP >= 1.0 {
            return Err(Error::InvalidConfig(format!("scaling down by level {level} collapses the shape")));
        }
        Ok(Self { kind, level, variant })
    }

    pub fn kind(&self) -> DeformKind {
        self.kind
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }
}

impl fmt::Display for DeformationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-l{}", self.kind, self.variant, self.level)
    }
}

/// Every (level, variant) pair of `kind` for levels `1..=max_level`,
/// level-major, variants in their fixed order.
pub fn level_suite(kind: DeformKind, max_level: u32) -> Vec<DeformationSpec> {
    (1..=max_level)
        .flat_map(|level| {
            kind.variants()
                .iter()
                .filter_map(move |&v| DeformationSpec::new(kind, level, v).ok())
        })
        .collect()
}

/// Applies `spec` to `img`. The output keeps the input dimensions.
pub fn apply(img: &BinaryImage, spec: &DeformationSpec) -> Result<BinaryImage> {
    let level = spec.level as i64;
    let out = match spec.kind {
        DeformKind::Translation => {
            let d = level * TRANSLATION_STEP_PX;
            let (dx, dy) = match spec.variant {
                Variant::Up => (0, -d),
                Variant::Down => (0, d),
                Variant::Left => (-d, 0),
                _ => (d, 0),
            };
            translate(img, dx, dy)?
        }
        DeformKind::Rotation => {
            let sign = if spec.variant == Variant::Right { 1.0 } else { -1.0 };
            rotate(img, sign * level as f64 * ROTATION_STEP_DEG)?
        }
        DeformKind::Scaling => {
            let step = level as f64 * SCALING_STEP;
            let factor = if spec.variant == Variant::Up { 1.0 + step } else { 1.0 - step };
            scale(img, factor)?
        }
        DeformKind::Perspective => tilt_out_of_plane(img, level as f64 * PERSPECTIVE_STEP_DEG),
        DeformKind::Erosion => (0..level).try_fold(img.clone(), |acc, _| erode(&acc))?,
        DeformKind::Dilation => (0..level).try_fold(img.clone(), |acc, _| dilate(&acc))?,
    };
    if out.is_empty() {
        return Err(Error::VanishedShape);
    }
    Ok(out)
}

/// Integer shift; fails if any foreground pixel would leave the frame.
pub fn translate(img: &BinaryImage, dx: i64, dy: i64) -> Result<BinaryImage> {
    let (w, h) = (img.width() as i64, img.height() as i64);
    let mut out = BinaryImage::blank(img.width(), img.height())?;
    for (x, y) in img.foreground() {
        let (nx, ny) = (x as i64 + dx, y as i64 + dy);
        if nx < 0 || ny < 0 || nx >= w || ny >= h {
            return Err(Error::OutOfFrame {
                width: img.width(),
                height: img.height(),
            });
        }
        out.set(nx as usize, ny as usize, true);
    }
    Ok(out)
}

/// Inverse-maps every output pixel through `source_of` and copies the
/// nearest source pixel; samples outside the frame are background.
fn warp(img: &BinaryImage, source_of: impl Fn(f64, f64) -> Option<(f64, f64)>) -> BinaryImage {
    BinaryImage::from_fn(img.width(), img.height(), |x, y| match source_of(x as f64, y as f64) {
        Some((sx, sy)) if sx.is_finite() && sy.is_finite() => {
            img.get_or_bg(sx.round() as i64, sy.round() as i64)
        }
        _ => false,
    })
    .expect("warp keeps the source dimensions")
}

/// Rotation about the shape centroid; positive angles turn clockwise on
/// screen (rows grow downward).
pub fn rotate(img: &BinaryImage, degrees: f64) -> Result<BinaryImage> {
    let m = compute_moments(img)?;
    let (sin, cos) = degrees.to_radians().sin_cos();
    let (cx, cy) = (m.cx, m.cy);
    Ok(warp(img, |x, y| {
        let (px, py) = (x - cx, y - cy);
        Some((cx + cos * px + sin * py, cy - sin * px + cos * py))
    }))
}

/// Isotropic scaling about the shape centroid.
pub fn scale(img: &BinaryImage, factor: f64) -> Result<BinaryImage> {
    if factor.is_nan() || factor <= 0.0 {
        return Err(Error::InvalidConfig(format!("scale factor {factor} must be positive")));
    }
    let m = compute_moments(img)?;
    let (cx, cy) = (m.cx, m.cy);
    Ok(warp(img, |x, y| Some((cx + (x - cx) / factor, cy + (y - cy) / factor))))
}

/// Pinhole view of the image plane turned by `degrees` about its vertical
/// centre line, focal length equal to the image width.
pub fn tilt_out_of_plane(img: &BinaryImage, degrees: f64) -> BinaryImage {
    let f = img.width() as f64;
    let cx = (img.width() as f64 - 1.0) / 2.0;
    let cy = (img.height() as f64 - 1.0) / 2.0;
    let (sin, cos) = degrees.to_radians().sin_cos();
    warp(img, |u, v| {
        let (u, v) = (u - cx, v - cy);
        let denom = f * cos - u * sin;
        if denom <= 0.0 {
            return None;
        }
        let x = u * f / denom;
        let y = v * (f + x * sin) / f;
        Some((x + cx, y + cy))
    })
}

/// One step of erosion by a 3x3 square; the outside of the frame counts as
/// background.
pub fn erode(img: &BinaryImage) -> Result<BinaryImage> {
    let out = BinaryImage::from_fn(img.width(), img.height(), |x, y| {
        let (x, y) = (x as i64, y as i64);
        (-1..=1).all(|dy| (-1..=1).all(|dx| img.get_or_bg(x + dx, y + dy)))
    })?;
    if out.is_empty() {
        return Err(Error::VanishedShape);
    }
    Ok(out)
}

/// One step of dilation by a 3x3 square; fails if the new layer would cross
/// the frame edge.
pub fn dilate(img: &BinaryImage) -> Result<BinaryImage> {
    if img.touches_border() {
        return Err(Error::OutOfFrame {
            width: img.width(),
            height: img.height(),
        });
    }
    BinaryImage::from_fn(img.width(), img.height(), |x, y| {
        let (x, y) = (x as i64, y as i64);
        (-1..=1).any(|dy| (-1..=1).any(|dx| img.get_or_bg(x + dx, y + dy)))
    })
}
