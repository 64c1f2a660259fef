use super::components::largest_component;
use crate::imgio::BinaryImage;
use crate::{Error, Result};

/// Neighbour offsets in clockwise order on screen (rows grow downward),
/// starting East.
const DIRS: [(i64, i64); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];
const WEST: usize = 4;

/// Outer border of a shape as an ordered, closed loop of pixel coordinates,
/// clockwise on screen and starting at the raster-first pixel.
///
/// Pixels on one-pixel-wide parts are visited once per side, so a point may
/// appear more than once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contour {
    points: Vec<(i64, i64)>,
}

impl Contour {
    pub fn new(points: Vec<(i64, i64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyShape);
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(i64, i64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The same loop starting at index `k`.
    pub fn rotated(&self, k: usize) -> Contour {
        let mut points = self.points.clone();
        points.rotate_left(k % self.points.len());
        Contour { points }
    }
}

fn dir_index(from: (i64, i64), to: (i64, i64)) -> usize {
    let d = (to.0 - from.0, to.1 - from.1);
    DIRS.iter()
        .position(|&o| o == d)
        .expect("border following only steps between 8-neighbours")
}

/// Suzuki-Abe outer border following (8-connectivity) on the largest
/// foreground component.
pub fn trace_contour(img: &BinaryImage) -> Result<Contour> {
    let shape = largest_component(img).ok_or(Error::EmptyShape)?;
    let fg = |p: (i64, i64)| shape.get_or_bg(p.0, p.1);
    let step = |p: (i64, i64), d: usize| (p.0 + DIRS[d].0, p.1 + DIRS[d].1);

    let (sx, sy) = shape.foreground().next().ok_or(Error::EmptyShape)?;
    let start = (sx as i64, sy as i64);

    // Clockwise from the western (background) neighbour for the first
    // foreground pixel.
    let Some(first) = (0..8)
        .map(|k| step(start, (WEST + k) % 8))
        .find(|&p| fg(p))
    else {
        return Contour::new(vec![start]);
    };

    let mut traced = Vec::new();
    let mut prev = first;
    let mut cur = start;
    loop {
        // Counter-clockwise around `cur`, beginning just after `prev`.
        let back = dir_index(cur, prev);
        let next = (1..=8)
            .map(|k| step(cur, (back + 8 - k) % 8))
            .find(|&p| fg(p))
            .expect("a non-isolated border pixel has a foreground neighbour");
        traced.push(cur);
        if next == start && cur == first {
            break;
        }
        prev = cur;
        cur = next;
    }
    // The scan above walks the outer border counter-clockwise on screen;
    // flip it, keeping the start pixel first.
    traced[1..].reverse();
    Contour::new(traced)
}

/// Contour point farthest from a centroid and its distance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FurthestPoint {
    pub index: usize,
    pub point: (i64, i64),
    pub rho: f64,
}

/// Farthest contour point from `(cx, cy)`; ties go to the smallest index.
pub fn furthest_contour_point(contour: &Contour, cx: f64, cy: f64) -> FurthestPoint {
    let mut best = FurthestPoint {
        index: 0,
        point: contour.points[0],
        rho: f64::NEG_INFINITY,
    };
    for (index, &(x, y)) in contour.points.iter().enumerate() {
        let (dx, dy) = (x as f64 - cx, y as f64 - cy);
        let rho = (dx * dx + dy * dy).sqrt();
        if rho > best.rho {
            best = FurthestPoint {
                index,
                point: (x, y),
                rho,
            };
        }
    }
    best
}
