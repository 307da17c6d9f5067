//! Experiment harness around the compression library: scenario sweeps with
//! CSV output, SVG scaling plots, a machine-readable verification suite, the
//! correlation-destruction demo, and JSON wire formats for every artifact.

pub mod correlations;
pub mod csvio;
pub mod jsonio;
pub mod spec;
pub mod svg;
pub mod sweep;
pub mod verify;
