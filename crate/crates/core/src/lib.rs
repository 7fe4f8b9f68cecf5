//! Desk-scale laboratory for the semantics and learnability of universal
//! quantification over string-encoded models.

pub mod lang;
pub mod semantics;
pub mod borel;
pub mod prob;
pub mod learnlab;
pub mod probe;
pub mod config;
pub mod cli;
