//! Serialization, caching, figures and the theorem sweep behind the `mlp`
//! binary.

pub mod cache;
pub mod error;
pub mod record;
pub mod svg;
pub mod sweep;
