//! A kernel for a cubical type theory with a De Morgan interval, Glue types,
//! an identity type with a strict eliminator, and suspensions, evaluated either with computing
//! composition or with filling as an uninterpreted primitive.

pub mod cofib;
pub mod interval;
pub mod semantics;
pub mod syntax;
pub mod typechecker;
pub mod cli;
