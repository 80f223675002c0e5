//! Arc arithmetic on the circle and component-beam extraction.

mod arc;
mod arcset;
mod design;

pub use arc::{reduce, Arc, EPS_GEO};
pub use arcset::ArcSet;
pub use design::{
    component_beams, coverage_check, coverage_gap, BeamDesign, ComponentBeam, EPS_COVERAGE,
};
