//! Exact middle convolution of monodromy tuples over cyclotomic fields.

pub mod cyclo;
pub mod linalg;
pub mod tuples;
pub mod convolution;
pub mod recognition;
pub mod pipeline;
