//! Evaluation, Kan operations, and readback.

pub mod builtins;
pub mod eval;
pub mod kan;
pub mod quote;
pub mod value;

pub use eval::{eval, mode, with_mode, Mode};
pub use quote::quote;
pub use value::{Env, Val, Value};
