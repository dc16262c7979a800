//! Estimation of an unknown SU(2) gate (equivalently, transmission of a
//! spatial reference frame) with `N` spins, using a covariant measurement and
//! signal states that entangle each spin sector with its multiplicity label.
//!
//! The crate computes the optimal averaged score `⟨χ₁⟩` (and the derived
//! fidelity `(1+⟨χ₁⟩)/4` and frame error `6−⟨χ₁⟩`) and checks it three ways:
//!
//! - [`optimal`]: top eigenvalue of a tridiagonal matrix by Sturm bisection,
//!   and the smallest zero of its Chebyshev-form characteristic polynomial;
//! - [`oracle`]: direct Haar integration of the overlap integral on a
//!   product quadrature grid, from Wigner matrices;
//! - [`sim`]: Monte Carlo simulation of the measurement.
//!
//! Math is generic over the scalar: floating-point code uses [`Real`]
//! (`f32`/`f64`), and the characteristic polynomial and determinants use
//! [`Field`], which also admits exact rationals. The aliases below fix the
//! scalar to `f64`.

pub mod error;
pub mod linalg;
pub mod optimal;
pub mod oracle;
pub mod reps;
mod scalar;
pub mod sim;
pub mod stats;
pub mod su2;

pub use error::{Error, Result};
pub use scalar::{compensated_sum, Field, Real};

pub type Rotation = su2::GroupElement<f64>;
pub type Coefficients = reps::CoeffVector<f64>;
pub type ProtocolMatrix = optimal::TriDiag<f64>;
pub type Optimum = optimal::OptimalProtocol<f64>;
pub type Benchmark = optimal::EntangledBenchmark<f64>;
pub type Row = optimal::ScanRow<f64>;
pub type State = oracle::BlockState<f64>;
pub type Grid = oracle::QuadratureGrid<f64>;
pub type ComplexMatrix = linalg::CMatrix<f64>;
