//! Exact arithmetic in the cyclotomic integers `Z[ζ_m]`.
//!
//! Every scalar in the crate (the Pauli phase ω, the half-phase ε used by the
//! diagonal lift for even `n`, structure constants, equation coefficients)
//! lives in one ring of order `m = 2n`, so `ω = ζ_m^2`.

mod poly;
mod scalar;

pub use poly::{cyclotomic_polynomial, divisors, euler_phi, IntPolynomial};
pub use scalar::{CyclotomicRing, CyclotomicScalar, UnitRoot};

/// Ring order used for dimension `n`.
pub fn ring_order(n: u32) -> u32 {
    2 * n
}

/// `ω^k` for dimension `n`, i.e. `ζ_{2n}^{2k}`.
pub fn omega_power(n: u32, k: i64) -> CyclotomicScalar {
    CyclotomicScalar::root_power(ring_order(n), 2 * k.rem_euclid(n as i64))
}

/// Serialize through `Display`, for big integers and scalars in JSON output.
pub fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(
    x: &T,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}
