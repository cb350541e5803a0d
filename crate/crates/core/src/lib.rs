pub mod analysis;
pub mod calibration;
pub mod cli;
pub mod config;
pub mod corpus;
pub mod embedding;
pub mod linguistic;
pub mod matcher;
pub mod reporting;
