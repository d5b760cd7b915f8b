pub mod align;
pub mod graph;
pub mod imputer;
pub mod ingest;
pub mod pipeline;
pub mod recommend;
pub mod service;
pub mod synth;
pub mod cli;
