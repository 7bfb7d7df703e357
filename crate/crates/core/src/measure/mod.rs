//! Sampled estimators for the geometry of the Dirichlet part: centered
//! Hausdorff content brackets, thickness, the `l`-set property, porosity,
//! Aikawa-type integrals and relative volume density.

mod aikawa;
mod cloud;
mod content;
mod density;
mod porosity;
mod thickness;

pub use aikawa::{aikawa_integral, aikawa_sweep, AikawaSweep, AikawaValue, CloudDistance, DistanceTo, Flat, MAX_CELLS, START_CELLS};
pub use cloud::{dist, PointCloud, SpatialIndex};
pub use content::{content, content_lower, content_upper, dyadic_ladder, peak_density, BallCover, ContentEstimate};
pub use density::{relative_volume_density, DensityProfile};
pub use porosity::{check_porosity, PorosityFailure, PorosityOptions, PorosityReport};
pub use thickness::{
    check_l_set, check_thickness, sample_balls, thickness_ratios, BallSample, LSetReport, ThicknessReport, SAMPLED_NOTE,
    SLOPE_TOLERANCE,
};
