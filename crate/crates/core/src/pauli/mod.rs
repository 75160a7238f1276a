//! The generalized Pauli group `Π_n = { ω^l Q^i P^j }` and the special
//! matrices used to realize its normalizer.
//!
//! Conventions: `Q = diag(1, ω, …, ω^{n-1})`, `P` has ones at `(k, k+1 mod n)`,
//! so `P·Q = ω·Q·P`. Matrices live over `Z[ζ_{2n}]` with `ω = ζ_{2n}^2`.

mod matrix;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use matrix::CycMatrix;

use crate::cyclotomic::{omega_power, ring_order, CyclotomicScalar};
use crate::error::{Error, Result};

/// `ω^phase · Q^qexp · P^pexp` in dimension `n`; exponents are residues mod `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PauliElement {
    pub n: u32,
    pub phase: u32,
    pub qexp: u32,
    pub pexp: u32,
}

impl PauliElement {
    pub fn new(n: u32, phase: i64, qexp: i64, pexp: i64) -> Self {
        assert!(n >= 1, "dimension must be positive");
        let r = |x: i64| x.rem_euclid(n as i64) as u32;
        Self {
            n,
            phase: r(phase),
            qexp: r(qexp),
            pexp: r(pexp),
        }
    }

    pub fn identity(n: u32) -> Self {
        Self::new(n, 0, 0, 0)
    }

    pub fn q(n: u32) -> Self {
        Self::new(n, 0, 1, 0)
    }

    pub fn p(n: u32) -> Self {
        Self::new(n, 0, 0, 1)
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.qexp == 0 && self.pexp == 0
    }

    /// Central elements are the pure phases `ω^l·I`.
    pub fn is_scalar(&self) -> bool {
        self.qexp == 0 && self.pexp == 0
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        // P^{j} Q^{i} = ω^{ij} Q^{i} P^{j}
        let twist = self.pexp as i64 * other.qexp as i64;
        Ok(Self::new(
            self.n,
            self.phase as i64 + other.phase as i64 + twist,
            self.qexp as i64 + other.qexp as i64,
            self.pexp as i64 + other.pexp as i64,
        ))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("Pauli elements of different dimension")
    }

    pub fn inverse(&self) -> Self {
        // (ω^l Q^i P^j)^{-1} = ω^{-l} P^{-j} Q^{-i} = ω^{ij - l} Q^{-i} P^{-j}
        let (l, i, j) = (self.phase as i64, self.qexp as i64, self.pexp as i64);
        Self::new(self.n, i * j - l, -i, -j)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(self.n), |acc, _| acc.mul(self))
    }

    pub fn to_matrix(&self) -> CycMatrix {
        let n = self.n as usize;
        let m = ring_order(self.n);
        // ω^l Q^i P^j has the single entry ω^{l + i·k} at (k, k + j)
        let mut out = CycMatrix::zeros(n, m);
        for k in 0..n {
            let col = (k + self.pexp as usize) % n;
            let e = self.phase as i64 + self.qexp as i64 * k as i64;
            out.set(k, col, omega_power(self.n, e));
        }
        out
    }

    /// True iff `x^n` is central. Always the case in `Π_n`.
    pub fn central_power_check(&self) -> bool {
        self.pow(self.n).is_scalar()
    }
}

impl fmt::Display for PauliElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w^{} Q^{} P^{}", self.phase, self.qexp, self.pexp)
    }
}

/// All `n^3` elements of `Π_n`, sorted.
pub fn enumerate_group(n: u32) -> BTreeSet<PauliElement> {
    let n64 = n as i64;
    let mut out = BTreeSet::new();
    for l in 0..n64 {
        for i in 0..n64 {
            for j in 0..n64 {
                out.insert(PauliElement::new(n, l, i, j));
            }
        }
    }
    out
}

pub fn clock_matrix(n: u32) -> CycMatrix {
    PauliElement::q(n).to_matrix()
}

pub fn shift_matrix(n: u32) -> CycMatrix {
    PauliElement::p(n).to_matrix()
}

/// `Q^r P^s`, the grading basis element `X_{rs}`.
pub fn basis_matrix(n: u32, r: u32, s: u32) -> CycMatrix {
    PauliElement::new(n, 0, r as i64, s as i64).to_matrix()
}

/// `ε` with `ε^2 = ω`: `1` for odd `n`, `ζ_{2n}` for even `n`.
pub fn epsilon(n: u32) -> CyclotomicScalar {
    let m = ring_order(n);
    if n.is_multiple_of(2) {
        CyclotomicScalar::root_power(m, 1)
    } else {
        CyclotomicScalar::one(m)
    }
}

/// Sylvester matrix with entries `ω^{ij}`.
///
/// This is the orientation for which `S^{-1}·P·S = Q` and `S^{-1}·Q·S = P^{-1}`
/// hold with the clock/shift conventions of this module. The conjugate
/// `ω^{-ij}` matrix is [`build_sylvester_conjugate`].
pub fn build_sylvester(n: u32) -> CycMatrix {
    let m = ring_order(n);
    CycMatrix::from_fn(n as usize, m, |i, j| omega_power(n, (i * j) as i64))
}

/// Entries `ω^{-ij}`; equals `n·S^{-1}` for the [`build_sylvester`] matrix `S`.
pub fn build_sylvester_conjugate(n: u32) -> CycMatrix {
    let m = ring_order(n);
    CycMatrix::from_fn(n as usize, m, |i, j| omega_power(n, -((i * j) as i64)))
}

/// `ζ_{2n}`-exponent of the diagonal entry `d_j = ε^{j} ω^{j(j-1)/2}`.
fn diagonal_exponent(n: u32, j: u32) -> i64 {
    let j = j as i64;
    let eps = if n.is_multiple_of(2) { j } else { 0 };
    eps + j * (j - 1)
}

/// `D = diag(d_0, …, d_{n-1})` with `d_j = ε^{j} ω^{j(j-1)/2}`, so that
/// `D^{-1}·P·D = ε·Q·P` and `D` commutes with `Q`.
pub fn build_diagonal_d(n: u32) -> CycMatrix {
    let m = ring_order(n);
    CycMatrix::from_fn(n as usize, m, |i, j| {
        if i == j {
            CyclotomicScalar::root_power(m, diagonal_exponent(n, i as u32))
        } else {
            CyclotomicScalar::zero(m)
        }
    })
}

/// `D^{-1}`, the diagonal with `d_j = ε^{-j} ω^{-j(j-1)/2}`.
pub fn build_diagonal_d_inverse(n: u32) -> CycMatrix {
    let m = ring_order(n);
    CycMatrix::from_fn(n as usize, m, |i, j| {
        if i == j {
            CyclotomicScalar::root_power(m, -diagonal_exponent(n, i as u32))
        } else {
            CyclotomicScalar::zero(m)
        }
    })
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Permutation matrix `(M_s)_{i,j} = δ_{i, s·j}` for prime `n` and `s ≠ 0`.
pub fn build_m(n: u32, s: i64) -> Result<CycMatrix> {
    if !is_prime(n) {
        return Err(Error::NotPrime {
            n,
            what: "the permutation matrix M_s",
        });
    }
    let s = s.rem_euclid(n as i64) as usize;
    if s == 0 {
        return Err(Error::InvalidInput("M_s needs s != 0 mod n".into()));
    }
    let m = ring_order(n);
    let nn = n as usize;
    Ok(CycMatrix::from_fn(nn, m, |i, j| {
        if i == (s * j) % nn {
            CyclotomicScalar::one(m)
        } else {
            CyclotomicScalar::zero(m)
        }
    }))
}

/// Parity operator `δ_{i,-j}`.
pub fn build_parity(n: u32) -> CycMatrix {
    let m = ring_order(n);
    let nn = n as usize;
    CycMatrix::from_fn(nn, m, |i, j| {
        if (i + j) % nn == 0 {
            CyclotomicScalar::one(m)
        } else {
            CyclotomicScalar::zero(m)
        }
    })
}
