//! Compressed Cartesian Taylor expansions for kernels that satisfy a
//! constant-coefficient linear PDE, together with the FMM operators built on
//! them (P2M, P2L, M2M, M2L, L2L, M2P, L2P) and a small uniform-tree driver.
//!
//! The crate is `no_std` and only needs `alloc`. Every numerical routine is
//! generic over [`Scalar`], so the same code path runs either on plain
//! [`Complex64`] values or on [`Counted`] values that tally floating point
//! operations.
//!
//! Conventions used throughout:
//!
//! * multi-index ranks are 1-based in [`GradedOrdering::rank`] and
//!   [`GradedOrdering::unrank`]; positions inside vectors are 0-based;
//! * axes are 0-based (`0` is `x`);
//! * points are flat `&[f64]` slices with `dim` consecutive coordinates each;
//! * local expansions store derivatives (factorials are applied on evaluation),
//!   multipole expansions store moments already divided by `ν!`.

#![no_std]

extern crate alloc;

mod error;
pub mod fft;
pub mod fmm;
pub mod expansions;
pub mod kernels;
pub mod multiindex;
pub mod plan;
mod scalar;
pub mod translations;

pub use error::Error;
pub use fft::{FftPlan, GridTensor, NdFft};
pub use kernels::{DerivativeTable, Kernel};
pub use multiindex::{count, multi_binomial, GradedOrdering, IndexTable, MultiIndex, MAX_DIM};
pub use num_complex::Complex64;
pub use plan::{CompressionPlan, PdeOperator, Slice, SparseRows};
pub use scalar::{flop_tally, reset_flop_tally, Counted, FlopTally, Scalar};

pub type Result<T> = core::result::Result<T, Error>;
