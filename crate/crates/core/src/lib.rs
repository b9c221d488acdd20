pub mod binomial;
pub mod lucas;
pub mod modarith;
pub mod quadratic;
pub mod registry;
pub mod series;
pub mod sweep;

pub use modarith::{Modulus, PrimePower, Residue};
pub use registry::{
    lookup, registry_catalogue, verify, CongruenceCase, ModulusKind, Status, VerificationRecord,
};
pub use series::QSeries;

/// Series with machine-integer coefficients.
pub type IntSeries = QSeries<i64>;
/// Series with arbitrary-precision coefficients.
pub type BigSeries = QSeries<num_bigint::BigInt>;
