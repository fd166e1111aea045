//! Standing waves of the 1D NLS with triple-power nonlinearity
//! `f(u) = a1 |u|^{p-1} u - gamma |u|^{q-1} u + a3 |u|^{r-1} u`:
//! existence region, nonexistence curve, the stability functional
//! `J = dQ/domega`, asymptotic sign classifiers and stability diagrams.

pub mod asymptotics;
pub mod boundary;
pub mod diagram;
pub mod error;
pub mod landscape;
pub mod model;
pub mod profile;
pub mod quadrature;
pub mod signs;
pub mod special;
pub mod stability;
pub mod verify;

pub use error::{Error, Result};
pub use model::{Case, NonlinearityParams, Sign};
