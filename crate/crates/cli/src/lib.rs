//! File formats, named generators and the `reproduce` suite behind the `multicut` binary.

pub mod format;
pub mod generator;
pub mod reproduce;
