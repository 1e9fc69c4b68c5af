pub mod commands;
pub mod error;
pub mod render;
pub mod report;
pub mod suites;
pub mod workspace;
