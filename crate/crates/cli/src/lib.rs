//! Command-line front end: scenes, reports, meshes and commands.

pub mod commands;
pub mod mesh;
pub mod report;
pub mod scene;
