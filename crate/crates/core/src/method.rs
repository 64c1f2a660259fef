//! A descriptor method together with its full configuration: how to turn an
//! image into a flat vector and how to compare two such vectors.

use std::fmt;
use std::str::FromStr;

use crate::arb::{describe_frame, ArbConfig, ArbVariant, OrientationMode, ShapeFrame, WeightMode};
use crate::baselines::{
    fd_centroid_distance, fd_complex_coordinates, hausdorff, resample_contour, PointSet, SignatureKind,
    DEFAULT_RETAINED, RESAMPLE_COUNT,
};
use crate::geometry::{compute_moments, trace_contour};
use crate::imgio::BinaryImage;
use crate::matching::l2_distance;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    Arb { variant: ArbVariant, config: ArbConfig },
    Fourier { kind: SignatureKind, retained: usize },
    /// Hausdorff distance between centroid-relative contours resampled to
    /// `points` points.
    Hausdorff { points: usize },
}

impl Method {
    pub const TAGS: [&'static str; 6] = ["arb-simple", "arb-overlap", "arb-accum", "fd-cc", "fd-cd", "hausdorff"];

    /// Builds a method from its command-line tag, using `config` for the ARB
    /// family and `retained` for the Fourier baselines.
    pub fn from_tag(tag: &str, config: ArbConfig, retained: usize) -> Result<Self> {
        let m = match tag {
            "arb-simple" => Method::Arb { variant: ArbVariant::Simple, config },
            "arb-overlap" => Method::Arb { variant: ArbVariant::Overlapping, config },
            "arb-accum" => Method::Arb { variant: ArbVariant::Accumulative, config },
            "fd-cc" => Method::Fourier { kind: SignatureKind::ComplexCoordinates, retained },
            "fd-cd" => Method::Fourier { kind: SignatureKind::CentroidDistance, retained },
            "hausdorff" => Method::Hausdorff { points: RESAMPLE_COUNT },
            other => return Err(Error::InvalidConfig(format!("unknown method {other:?}"))),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn arb(variant: ArbVariant, config: ArbConfig) -> Self {
        Method::Arb { variant, config }
    }

    pub fn fd_complex() -> Self {
        Method::Fourier { kind: SignatureKind::ComplexCoordinates, retained: DEFAULT_RETAINED }
    }

    pub fn fd_centroid() -> Self {
        Method::Fourier { kind: SignatureKind::CentroidDistance, retained: DEFAULT_RETAINED }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Method::Arb { variant: ArbVariant::Simple, .. } => "arb-simple",
            Method::Arb { variant: ArbVariant::Overlapping, .. } => "arb-overlap",
            Method::Arb { variant: ArbVariant::Accumulative, .. } => "arb-accum",
            Method::Fourier { kind: SignatureKind::ComplexCoordinates, .. } => "fd-cc",
            Method::Fourier { kind: SignatureKind::CentroidDistance, .. } => "fd-cd",
            Method::Hausdorff { .. } => "hausdorff",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Method::Arb { config, .. } => config.validate(),
            Method::Fourier { kind, retained } => {
                let limit = match kind {
                    SignatureKind::ComplexCoordinates => RESAMPLE_COUNT - 1,
                    SignatureKind::CentroidDistance => RESAMPLE_COUNT / 2,
                };
                if *retained == 0 || *retained > limit {
                    return Err(Error::InvalidConfig(format!(
                        "retained coefficients must be in 1..={limit}, got {retained}"
                    )));
                }
                Ok(())
            }
            Method::Hausdorff { points } if *points == 0 => {
                Err(Error::InvalidConfig("hausdorff point count must be >= 1".into()))
            }
            Method::Hausdorff { .. } => Ok(()),
        }
    }

    /// Length of every vector produced by [`Method::describe`].
    pub fn descriptor_len(&self) -> usize {
        match self {
            Method::Arb { variant, config } => {
                let grid = config.rings * config.angular_bins();
                if *variant == ArbVariant::Overlapping {
                    grid * config.instances
                } else {
                    grid
                }
            }
            Method::Fourier { retained, .. } => *retained,
            Method::Hausdorff { points } => 2 * points,
        }
    }

    pub fn describe(&self, img: &BinaryImage) -> Result<Vec<f64>> {
        match self {
            Method::Arb { variant, config } => {
                let frame = ShapeFrame::from_image(img)?;
                describe_frame(&frame, *variant, config)
            }
            Method::Fourier { kind, retained } => {
                let contour = trace_contour(img)?;
                let fd = match kind {
                    SignatureKind::ComplexCoordinates => fd_complex_coordinates(&contour, *retained)?,
                    SignatureKind::CentroidDistance => {
                        let m = compute_moments(img)?;
                        fd_centroid_distance(&contour, (m.cx, m.cy), *retained)?
                    }
                };
                Ok(fd.into_magnitudes())
            }
            Method::Hausdorff { points } => {
                let m = compute_moments(img)?;
                let contour = trace_contour(img)?;
                Ok(resample_contour(&contour, *points)?
                    .into_iter()
                    .flat_map(|(x, y)| [x - m.cx, y - m.cy])
                    .collect())
            }
        }
    }

    pub fn distance(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        match self {
            Method::Hausdorff { .. } => {
                if a.len() != b.len() {
                    return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
                }
                Ok(hausdorff(&PointSet::from_flat(a)?, &PointSet::from_flat(b)?))
            }
            _ => l2_distance(a, b),
        }
    }

    /// First line of a serialized descriptor.
    pub fn header(&self) -> String {
        match self {
            Method::Arb { variant, config } => format!(
                "ARB v1 rings={} width={} mode={} delta={} instances={} orient={} variant={}",
                config.rings,
                config.angular_width_deg,
                config.weight_mode,
                config.tilt_delta_deg,
                config.instances,
                config.orientation_mode,
                variant.token()
            ),
            Method::Fourier { kind, retained } => format!("FD v1 kind={kind} k={retained}"),
            Method::Hausdorff { points } => format!("HD v1 points={points}"),
        }
    }

    pub fn parse_header(line: &str) -> Result<Self> {
        let mut words = line.split_whitespace();
        let family = words.next().unwrap_or_default();
        if words.next() != Some("v1") {
            return Err(Error::Parse(format!("unsupported descriptor header {line:?}")));
        }
        let mut fields = std::collections::BTreeMap::new();
        for w in words {
            let (k, v) = w
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("malformed header field {w:?}")))?;
            if fields.insert(k, v).is_some() {
                return Err(Error::Parse(format!("duplicate header field {k:?}")));
            }
        }
        let mut take = |key: &str| {
            fields
                .remove(key)
                .ok_or_else(|| Error::Parse(format!("header is missing {key}=")))
        };
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::Parse(format!("bad value {v:?} for {key}")))
        }
        let method = match family {
            "ARB" => {
                let config = ArbConfig {
                    rings: num("rings", take("rings")?)?,
                    angular_width_deg: num("width", take("width")?)?,
                    weight_mode: take("mode")?.parse::<WeightMode>()?,
                    tilt_delta_deg: num("delta", take("delta")?)?,
                    instances: num("instances", take("instances")?)?,
                    orientation_mode: take("orient")?.parse::<OrientationMode>()?,
                };
                let variant = match take("variant")? {
                    "simple" => ArbVariant::Simple,
                    "overlap" => ArbVariant::Overlapping,
                    "accum" => ArbVariant::Accumulative,
                    other => return Err(Error::Parse(format!("unknown ARB variant {other:?}"))),
                };
                Method::Arb { variant, config }
            }
            "FD" => Method::Fourier {
                kind: take("kind")?.parse()?,
                retained: num("k", take("k")?)?,
            },
            "HD" => Method::Hausdorff { points: num("points", take("points")?)? },
            _ => return Err(Error::Parse(format!("unknown descriptor family {family:?}"))),
        };
        if let Some(extra) = fields.keys().next() {
            return Err(Error::Parse(format!("unexpected header field {extra:?}")));
        }
        method.validate()?;
        Ok(method)
    }
}

/// Tag followed by the full configuration, e.g.
/// `arb-accum rings=2 width=15 mode=total delta=3 instances=5 orient=none`.
impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Arb { config, .. } => write!(
                f,
                "{} rings={} width={} mode={} delta={} instances={} orient={}",
                self.tag(),
                config.rings,
                config.angular_width_deg,
                config.weight_mode,
                config.tilt_delta_deg,
                config.instances,
                config.orientation_mode
            ),
            Method::Fourier { retained, .. } => write!(f, "{} k={retained}", self.tag()),
            Method::Hausdorff { points } => write!(f, "{} points={points}", self.tag()),
        }
    }
}
