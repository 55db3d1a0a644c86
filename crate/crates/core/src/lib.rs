//! Measure how completely and expressively Haystack (tag model) and Brick
//! (class model) represent a dataset of building automation point types.

pub mod model;
pub mod trio;
pub mod turtle;
pub mod dataset;
pub mod alignment;
pub mod metrics;
pub mod report;
