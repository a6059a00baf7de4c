//! Pluggable problem domains.

pub mod numeric;
pub mod voxel;
