//! Finite Hilbert transform on (-1, 1),
//!
//! ```text
//! T(f)(t) = (1/π) p.v.∫_{-1}^{1} f(x)/(x - t) dx,
//! ```
//!
//! with its explicit inversion (airfoil equation), norms on
//! rearrangement-invariant spaces, and the vector measure A ↦ T(χ_A)
//! together with the optimal-domain norms it induces.

pub mod airfoil;
pub mod chebyshev;
pub mod error;
pub mod function;
pub mod grid;
pub mod measure;
pub mod quadrature;
pub mod report;
pub mod ri;
pub mod transform;
pub mod verify;

pub use num_complex::Complex64 as C64;

pub use chebyshev::{ChebyshevSeries, ChebyshevTransform, Weighting};
pub use error::{Error, Result};
pub use function::{Func, Function};
pub use grid::{Grid, GridFunction, IntervalSet, NodeFamily};
pub use ri::{Rearrangement, SpaceSpec};
