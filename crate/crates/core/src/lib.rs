pub mod field;

pub use field::{ExactScalar, FieldError};
pub mod index;
pub mod normal_form;
pub mod betti;
pub mod cij;
pub mod morse;
pub mod config;
pub mod audit;
pub mod synth;
pub mod report;
