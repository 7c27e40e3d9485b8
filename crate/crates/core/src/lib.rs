//! Local solubility, exact counting and the leading constant for diagonal
//! quadric surfaces fibred over y₀y₁ = y₂y₃.

pub mod arith;
pub mod charsum;
pub mod constant;
pub mod counting;
pub mod error;
pub mod solubility;

pub use arith::{jacobi, Factorization, SpfSieve};
pub use charsum::{bilinear_hyperbolic_sum, BilinearResult, CharsumInput, CoeffMode, SigmaRow};
pub use constant::{constant_cri, leading_constant, main_term, EulerProductResult, LeadingConstant, VariantKey};
pub use counting::{BasePoint, CensusResult, CountConfig, CountVariant, Counter};
pub use error::{Error, Result};
pub use solubility::{
    find_rational_point, has_rational_point, is_everywhere_locally_soluble, DiagonalQuadric, LocalVerdict,
    NormalizedQuadric, OracleVerdict, Place,
};
