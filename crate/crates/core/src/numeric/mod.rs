//! Small numerical building blocks shared by the geometric modules.

pub mod fourier;
pub mod gauss;
pub mod kahan;
pub mod special;

pub use gauss::GaussLegendre;
pub use kahan::{kahan_sum, KahanSum};
