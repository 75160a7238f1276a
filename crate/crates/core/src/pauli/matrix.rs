use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::cyclotomic::CyclotomicScalar;
use crate::error::{Error, Result};

/// Square matrix over `Z[ζ_m]`, row-major. All entries share one ring order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycMatrix {
    dim: usize,
    order: u32,
    entries: Vec<CyclotomicScalar>,
}

impl CycMatrix {
    pub fn zeros(dim: usize, order: u32) -> Self {
        Self {
            dim,
            order,
            entries: vec![CyclotomicScalar::zero(order); dim * dim],
        }
    }

    pub fn identity(dim: usize, order: u32) -> Self {
        Self::scalar(dim, &CyclotomicScalar::one(order))
    }

    /// `λ·I`
    pub fn scalar(dim: usize, value: &CyclotomicScalar) -> Self {
        let mut out = Self::zeros(dim, value.order());
        for i in 0..dim {
            out.entries[i * dim + i] = value.clone();
        }
        out
    }

    pub fn from_fn(
        dim: usize,
        order: u32,
        mut f: impl FnMut(usize, usize) -> CyclotomicScalar,
    ) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let e = f(i, j);
                assert_eq!(e.order(), order, "entry ({i},{j}) has the wrong ring order");
                entries.push(e);
            }
        }
        Self {
            dim,
            order,
            entries,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &CyclotomicScalar {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: CyclotomicScalar) {
        assert_eq!(value.order(), self.order);
        self.entries[i * self.dim + j] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[CyclotomicScalar]> {
        self.entries.chunks(self.dim)
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim as u32,
                right: other.dim as u32,
            });
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let n = self.dim;
        // sparse rows of the right factor; most matrices here are monomial
        let right: Vec<Vec<(usize, &CyclotomicScalar)>> = other
            .rows()
            .map(|row| row.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        let mut out = Self::zeros(n, self.order);
        for i in 0..n {
            for (k, row) in right.iter().enumerate() {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for &(j, b) in row {
                    let slot = &mut out.entries[i * n + j];
                    *slot = &*slot + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("matrix shapes must agree")
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_shape(other).expect("matrix shapes must agree");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            entries,
            ..*self
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_shape(other).expect("matrix shapes must agree");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            entries,
            ..*self
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }

    pub fn scale(&self, k: &CyclotomicScalar) -> Self {
        self.map(|x| x * k)
    }

    pub fn map(&self, f: impl Fn(&CyclotomicScalar) -> CyclotomicScalar) -> Self {
        Self {
            entries: self.entries.iter().map(f).collect(),
            ..*self
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, self.order, |i, j| self.get(j, i).clone())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim, self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CyclotomicScalar::is_zero)
    }

    pub fn trace(&self) -> CyclotomicScalar {
        (0..self.dim).fold(CyclotomicScalar::zero(self.order), |acc, i| {
            acc + self.get(i, i)
        })
    }

    /// `Some(λ)` when the matrix is `λ·I`.
    pub fn as_scalar(&self) -> Option<CyclotomicScalar> {
        let lambda = self.get(0, 0).clone();
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                let e = self.get(i, j);
                let ok = if i == j { *e == lambda } else { e.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(lambda)
    }

    /// Gcd of every integer coefficient of every entry.
    pub fn content(&self) -> BigInt {
        self.entries
            .iter()
            .fold(BigInt::zero(), |g, e| g.gcd(&e.content()))
    }

    pub fn div_exact_int(&self, k: &BigInt) -> Option<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.div_exact_int(k))
            .collect::<Option<Vec<_>>>()?;
        Some(Self {
            entries,
            ..*self
        })
    }

    /// Entries rendered as scalar strings, row by row.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.rows()
            .map(|row| row.iter().map(ToString::to_string).collect())
            .collect()
    }
}

impl fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CycMatrix(n={}, m={}) [", self.dim, self.order)?;
        for row in self.to_strings() {
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
