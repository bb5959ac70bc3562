pub mod aggregation;
pub mod cli;
pub mod error;
pub mod formula;
pub mod graph;
pub mod harness;
pub mod iteration;
pub mod judgment;
pub mod voting;
