//! Geometric substrate shared by every descriptor: raw and central moments,
//! orientation, connected components and outer-border following.

mod components;
mod contour;
mod moments;

pub use components::{label_components, largest_component, Components};
pub use contour::{furthest_contour_point, trace_contour, Contour, FurthestPoint};
pub use moments::{compute_moments, MomentSet};
