#![allow(clippy::needless_range_loop)]

pub mod bgg;
pub mod cli;
pub mod curvature;
pub mod exactmath;
pub mod fespace;
pub mod mesh;
