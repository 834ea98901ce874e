//! Desk-scale analysis of ends of infinite digraphs.
//!
//! Infinite digraphs enter as level-indexed finite presentations, get
//! truncated to finite levelled digraphs, and are then analysed with
//! unit-capacity Menger flows: end degrees, domination, exhausting
//! sequences, and the combined in-degree with its dual descriptions.
//!
//! Every "infinite" statement is certified at a caller-chosen threshold
//! `t` and truncation depth: a result of `>= t` at depth `n` is a finite
//! certificate, never a proof about the infinite object.

#![forbid(unsafe_code)]

pub mod constructions;
pub mod digraph;
pub mod ends;
pub mod error;
pub mod families;
pub mod flow;
pub mod io;
pub mod presentation;

pub use digraph::{LevelledDigraph, VertexId};
pub use error::{Error, Result};
pub use presentation::{truncate, EndDescriptor, Presentation};
