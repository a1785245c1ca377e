//! Config parsing, command pipelines and output rendering for `xi-contour`.

pub mod config;
pub mod pipeline;
pub mod render;
