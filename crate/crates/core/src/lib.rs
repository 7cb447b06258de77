//! Exact symbolic engine for Lie bialgebras, Drinfeld doubles and the
//! perturbative construction of analytical quantum bases.
//!
//! All arithmetic is exact over Q(i, √2), with truncated power series in the
//! deformation parameter `z`. The pieces, bottom-up:
//!
//! - [`scalars`]: field elements and `z`-series.
//! - [`linalg`]: sparse exact row reduction used by every solver.
//! - [`bialgebra`]: structure tensors and the bialgebra axioms.
//! - [`double`]: Drinfeld doubles and the `su(2)⊕t1`, `gl(n+1)⊕t_{n+1}` families.
//! - [`uea`]: PBW monomials, normal ordering, tensor elements, coproducts.
//! - [`quantize`]: order-by-order coproducts, deformed commutators, primitivization.
//! - [`closedform`]: recognition of exponential and sinh-type series.
//! - [`cli`]: batch jobs and deterministic reports.

pub mod bialgebra;
pub mod cli;
pub mod closedform;
pub mod double;
pub mod error;
pub mod linalg;
pub mod quantize;
pub mod scalars;
pub mod uea;

pub use error::{Error, Result};
pub use scalars::{AlgebraicScalar, ZSeries};
