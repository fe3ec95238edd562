//! Nevanlinna–Pick interpolation for slice regular self-maps of the
//! quaternionic unit ball.
//!
//! The crate is layered: [`quat`] arithmetic, [`qlinalg`] quaternionic
//! matrices with a semidefiniteness test, [`series`] for the star algebra of
//! left power series, [`hardy`] for kernels of `H²(𝔹)`, and [`npsolve`] for
//! the interpolation problem itself. [`cli`] backs the `quatpick` binary.
//!
//! ```
//! use quatpick::npsolve::{classify, Problem};
//! use quatpick::quat::Quaternion;
//!
//! let pb = Problem::new(vec![Quaternion::ZERO], vec![Quaternion::real(0.5)]).unwrap();
//! let c = classify(&pb).unwrap();
//! assert!(c.solvable && !c.determinate);
//! ```

pub mod cli;
pub mod error;
pub mod hardy;
pub mod npsolve;
pub mod qlinalg;
pub mod quat;
pub mod sampling;
pub mod series;

pub use error::{Error, Result};
pub use quat::Quaternion;
pub use series::{QSeries, SliceFn};
