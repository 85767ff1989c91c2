//! Exact construction, verification, transformation and recursive execution of bilinear
//! matrix-multiplication algorithms.
//!
//! An algorithm is a triple of coefficient tensors `(U, V, W)` (see [`BilinearAlgorithm`]).
//! Coefficients are exact rationals; execution is generic over any [`Ring`], with
//! [`RationalMatrix`] and the prime-field matrices [`Gf61Matrix`] / [`Gf31Matrix`] as the
//! usual choices.

mod algorithm;
mod bounds;
mod error;
mod execute;
pub mod format;
mod generators;
mod matrix;
mod modular;
mod recursion;
mod scalar;
pub mod transforms;
mod verify;

pub use algorithm::{BilinearAlgorithm, CoeffMatrix, DimensionTriple, Product, Tensor};
pub use bounds::{
    exponent, exponent_of, generic_lower_bound, known_bounds, sanity_rank_lower_bound, BoundEntry, BoundPattern,
    BoundRow, KnownRankBounds,
};
pub use error::{Error, Result};
pub use execute::{apply_elementary, CostReport};
pub use generators::{classical, pan_aggregation, pan_rank, strassen_222};
pub use matrix::{mat_classical_multiply, Matrix};
pub use modular::{is_prime, ModularScalar, PrimeField, MERSENNE_31, MERSENNE_61};
pub use recursion::{
    cost_model, multiply_via_inversion, predicted_cost, recursive_invert, recursive_multiply, RecursionConfig,
};
pub use scalar::{format_fraction, parse_rational, rational, rational_int, rational_inv, Field, Rational, Ring};
pub use transforms::{
    apply_equivalence, dual, random_equivalence, squareify, tensor_product, DualityPermutation, EquivalenceTransform,
};
pub use verify::{verify_brent, verify_trilinear_random, VerificationReport, Violation};

/// GF(2^61 - 1).
pub type Gf61 = ModularScalar<MERSENNE_61>;
/// GF(2^31 - 1).
pub type Gf31 = ModularScalar<MERSENNE_31>;

pub type RationalMatrix = Matrix<Rational>;
pub type Gf61Matrix = Matrix<Gf61>;
pub type Gf31Matrix = Matrix<Gf31>;
pub type F64Matrix = Matrix<f64>;
pub type F32Matrix = Matrix<f32>;
