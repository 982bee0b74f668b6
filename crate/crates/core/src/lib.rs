//! Spectral bounds for nonnegative tensors built on the general tensor
//! product, together with eigenvalue inclusion sets for products and the
//! independent oracles used to check them.
//!
//! The core routines are generic over [`Scalar`]. Concrete aliases cover the
//! common cases: [`RealTensor`] (`f64`), [`ComplexTensor`] (`Complex<f64>`),
//! [`ExactTensor`] (rationals over `i128`) and [`F32Tensor`].

pub mod bounds;
pub mod error;
pub mod fixtures;
pub mod inclusion;
pub mod io;
pub mod oracle;
pub mod product;
pub mod scalar;
pub mod tensor;

pub use bounds::{
    cw_certificate, exact_minc_bounds, exact_minc_self, minc_bounds, minc_power, minc_self,
    power_rho_bounds, product_rho_bounds, rowsum_bounds, BoundInterval, BoundMethod, CwCertificate,
    ExactFraction, ExactInterval,
};
pub use error::{Error, ErrorKind, Result};
pub use num_complex::Complex64;
pub use product::{
    apply_vector, diagonal_similarity, general_product, general_product_with_cap, mu_exponent,
    power_row_sums, product_row_sum_bound, product_row_sums, tensor_power, tensor_power_with_cap,
    ProductShape, DEFAULT_ENTRY_CAP,
};
pub use scalar::{Rational, Real, Scalar, ScalarKind};
pub use tensor::{
    diagonal, row_sums, validate, DiagonalVector, RawEntries, RawTensor, RowSumProfile, Storage,
    Tensor, DENSE_ENTRY_LIMIT,
};

pub type RealTensor = Tensor<f64>;
pub type ComplexTensor = Tensor<Complex64>;
pub type ExactTensor = Tensor<Rational>;
pub type F32Tensor = Tensor<f32>;
