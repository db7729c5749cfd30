//! Dense complex linear algebra used by the spectral and dynamics modules.

pub mod eigen;
pub mod expm;

pub use nalgebra::Complex;

pub type C64 = Complex<f64>;
