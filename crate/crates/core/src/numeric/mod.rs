//! Dense linear algebra and randomness substrate shared by all models.

mod linalg;
mod matrix;
mod rng;
mod scaler;

pub use linalg::{covariance, mean_center, symmetric_eigen, EigenDecomposition};
pub use matrix::Matrix;
pub use rng::Rng;
pub use scaler::Scaler;
