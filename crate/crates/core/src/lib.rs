//! Exact finite-level workbench for graphs of finite groups over reduction
//! graphs, multipointed torsor patching, and characteristic-p descent
//! obstructions over truncated Laurent series.

pub mod cli;
pub mod descent;
pub mod graph;
pub mod gog;
pub mod group;
pub mod torsor;
