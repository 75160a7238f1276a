use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{cyclotomic_polynomial, IntPolynomial};
use crate::error::{Error, Result};

/// Reduction data for `Z[ζ_m] = Z[x] / Φ_m(x)`.
#[derive(Debug)]
pub struct CyclotomicRing {
    order: u32,
    modulus: IntPolynomial,
    /// `x^k mod Φ_m` for `k` in `0..m`, each of length `deg Φ_m`.
    powers: Vec<Vec<BigInt>>,
}

impl CyclotomicRing {
    /// Shared ring of order `m`. Rings are built once per order and cached.
    pub fn get(order: u32) -> Arc<CyclotomicRing> {
        assert!(order >= 1, "ring order must be positive");
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CyclotomicRing>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard
            .entry(order)
            .or_insert_with(|| Arc::new(CyclotomicRing::build(order)))
            .clone()
    }

    fn build(order: u32) -> Self {
        let modulus = cyclotomic_polynomial(order);
        let deg = modulus.degree().expect("Φ_m is nonzero");
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![BigInt::zero(); deg];
        if deg > 0 {
            cur[0] = BigInt::one();
        }
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by x, then fold the overflow using x^deg = -(lower part of Φ_m)
            let top = if deg > 0 {
                cur.pop().unwrap_or_default()
            } else {
                BigInt::zero()
            };
            cur.insert(0, BigInt::zero());
            if !top.is_zero() {
                for (k, c) in modulus.coeffs()[..deg].iter().enumerate() {
                    cur[k] -= &top * c;
                }
            }
        }
        Self {
            order,
            modulus,
            powers,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    pub fn modulus(&self) -> &IntPolynomial {
        &self.modulus
    }

    /// Reduce a coefficient vector of arbitrary length modulo `Φ_m`.
    fn reduce(&self, raw: &[BigInt]) -> Vec<BigInt> {
        let m = self.order as usize;
        let deg = self.degree();
        let mut folded = vec![BigInt::zero(); m];
        for (k, c) in raw.iter().enumerate() {
            if !c.is_zero() {
                folded[k % m] += c;
            }
        }
        let mut out = vec![BigInt::zero(); deg];
        for (k, c) in folded.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < deg {
                out[k] += c;
            } else {
                for (slot, p) in out.iter_mut().zip(&self.powers[k]) {
                    if !p.is_zero() {
                        *slot += &c * p;
                    }
                }
            }
        }
        out
    }
}

/// A unit root `sign · ζ_m^exponent`.
///
/// For even `m` the pair is not unique (`-1 = ζ_m^{m/2}`); the canonical form
/// keeps `exponent < m/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UnitRoot {
    pub sign: i8,
    pub exponent: u32,
}

impl UnitRoot {
    /// `sign · ζ_m^exponent` in canonical form.
    pub fn canonical(order: u32, sign: i8, exponent: u32) -> UnitRoot {
        canonical_unit(order, sign, exponent)
    }

    pub fn to_scalar(self, order: u32) -> CyclotomicScalar {
        let z = CyclotomicScalar::root_power(order, self.exponent as i64);
        if self.sign < 0 {
            -z
        } else {
            z
        }
    }

    /// Inverse as a unit root of the same order.
    pub fn inverse(self, order: u32) -> UnitRoot {
        canonical_unit(order, self.sign, (order - self.exponent % order) % order)
    }

    /// The exponent of `ζ_m` equal to this unit, with the sign folded in when `m` is even.
    pub fn folded_exponent(self, order: u32) -> Option<u32> {
        if self.sign > 0 {
            Some(self.exponent % order)
        } else if order.is_multiple_of(2) {
            Some((self.exponent + order / 2) % order)
        } else {
            None
        }
    }
}

fn canonical_unit(order: u32, sign: i8, exponent: u32) -> UnitRoot {
    let exponent = exponent % order;
    if order.is_multiple_of(2) && exponent >= order / 2 {
        UnitRoot {
            sign: -sign,
            exponent: exponent - order / 2,
        }
    } else {
        UnitRoot { sign, exponent }
    }
}

/// Exact element of `Z[ζ_m]`, stored as its canonical residue modulo `Φ_m`.
#[derive(Clone)]
pub struct CyclotomicScalar {
    ring: Arc<CyclotomicRing>,
    coeffs: Vec<BigInt>,
}

impl CyclotomicScalar {
    fn from_reduced(ring: Arc<CyclotomicRing>, coeffs: Vec<BigInt>) -> Self {
        debug_assert_eq!(coeffs.len(), ring.degree());
        Self { ring, coeffs }
    }

    /// Build from coefficients of `1, ζ, ζ^2, ...`; any length is accepted and reduced.
    pub fn from_coeffs(order: u32, raw: &[BigInt]) -> Self {
        let ring = CyclotomicRing::get(order);
        let coeffs = ring.reduce(raw);
        Self::from_reduced(ring, coeffs)
    }

    pub fn from_i64_coeffs(order: u32, raw: &[i64]) -> Self {
        let raw: Vec<BigInt> = raw.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_coeffs(order, &raw)
    }

    pub fn zero(order: u32) -> Self {
        let ring = CyclotomicRing::get(order);
        let coeffs = vec![BigInt::zero(); ring.degree()];
        Self::from_reduced(ring, coeffs)
    }

    pub fn one(order: u32) -> Self {
        Self::from_int(order, BigInt::one())
    }

    pub fn from_int(order: u32, value: impl Into<BigInt>) -> Self {
        Self::from_coeffs(order, &[value.into()])
    }

    /// `ζ_m^k` for any integer `k`.
    pub fn root_power(order: u32, k: i64) -> Self {
        let ring = CyclotomicRing::get(order);
        let e = k.rem_euclid(order as i64) as usize;
        let coeffs = ring.powers[e].clone();
        Self::from_reduced(ring, coeffs)
    }

    pub fn order(&self) -> u32 {
        self.ring.order
    }

    pub fn ring(&self) -> &Arc<CyclotomicRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(k, c)| if k == 0 { c.is_one() } else { c.is_zero() })
    }

    /// `Some(k)` when the scalar is the rational integer `k`.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(self.coeffs.first().cloned().unwrap_or_default())
        } else {
            None
        }
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.ring.order == other.ring.order {
            Ok(())
        } else {
            Err(Error::OrderMismatch {
                left: self.ring.order,
                right: other.ring.order,
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self::from_reduced(self.ring.clone(), coeffs))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self::from_reduced(self.ring.clone(), coeffs))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let deg = self.ring.degree();
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.order()));
        }
        let mut raw = vec![BigInt::zero(); (2 * deg).saturating_sub(1).max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        Ok(Self::from_reduced(self.ring.clone(), self.ring.reduce(&raw)))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiply by `ζ_m^k`.
    pub fn mul_root(&self, k: i64) -> Self {
        let m = self.order() as i64;
        let shift = k.rem_euclid(m) as usize;
        if shift == 0 {
            return self.clone();
        }
        let mut raw = vec![BigInt::zero(); self.coeffs.len() + shift];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[i + shift] = c.clone();
        }
        Self::from_reduced(self.ring.clone(), self.ring.reduce(&raw))
    }

    pub fn mul_unit(&self, u: UnitRoot) -> Self {
        let z = self.mul_root(u.exponent as i64);
        if u.sign < 0 {
            -z
        } else {
            z
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c * k).collect();
        Self::from_reduced(self.ring.clone(), coeffs)
    }

    /// Exact division by a nonzero integer; `None` if some coefficient is not divisible.
    pub fn div_exact_int(&self, k: &BigInt) -> Option<Self> {
        if k.is_zero() {
            return None;
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            coeffs.push(q);
        }
        Some(Self::from_reduced(self.ring.clone(), coeffs))
    }

    /// The Galois conjugate `ζ ↦ ζ^k`, for `k` coprime to the order.
    pub fn galois(&self, k: u32) -> Self {
        let m = self.order() as usize;
        debug_assert_eq!(num_integer::gcd(k as usize, m), 1);
        let mut raw = vec![BigInt::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[(i * k as usize) % m] += c;
        }
        Self::from_coeffs(self.order(), &raw)
    }

    /// Product of the conjugates other than `self`; `self` times it is the norm.
    fn norm_cofactor(&self) -> Self {
        let m = self.order();
        (2..m)
            .filter(|&k| num_integer::gcd(k, m) == 1)
            .fold(Self::one(m), |acc, k| acc * self.galois(k))
    }

    /// The field norm, an integer.
    pub fn norm(&self) -> BigInt {
        (self * &self.norm_cofactor())
            .as_integer()
            .expect("a product over all conjugates is rational")
    }

    /// `self / d` when the quotient lies in `Z[ζ_m]`; `None` otherwise or for `d = 0`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let cofactor = d.norm_cofactor();
        let norm = (d * &cofactor).as_integer()?;
        (self * &cofactor).div_exact_int(&norm)
    }

    /// Non-negative gcd of the canonical coefficients (0 for the zero scalar).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// `Some(u)` iff the scalar equals `±ζ_m^k`.
    pub fn as_unit_root(&self) -> Option<UnitRoot> {
        if !self.content().is_one() {
            return None;
        }
        let m = self.order();
        for (k, p) in self.ring.powers.iter().enumerate() {
            if *p == self.coeffs {
                return Some(canonical_unit(m, 1, k as u32));
            }
            if p.iter().zip(&self.coeffs).all(|(a, b)| *a == -b) {
                return Some(canonical_unit(m, -1, k as u32));
            }
        }
        None
    }

    /// `Some((u, k))` with `k > 0` iff the scalar equals `u · k` for a unit root `u`.
    pub fn as_scaled_unit(&self) -> Option<(UnitRoot, BigInt)> {
        let g = self.content();
        if g.is_zero() {
            return None;
        }
        let u = self.div_exact_int(&g)?.as_unit_root()?;
        Some((u, g))
    }

    /// Parse the rendering produced by `Display`, e.g. `"1 - z^2 + 2*z^3"`.
    ///
    /// Any exponent is accepted and reduced; canonical renderings round-trip exactly.
    pub fn parse(order: u32, input: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        let m = order as usize;
        let mut raw = vec![BigInt::zero(); m];
        let bytes = compact.as_bytes();
        let mut pos = 0;
        while pos < bytes.len() {
            let mut sign = BigInt::one();
            match bytes[pos] {
                b'+' => pos += 1,
                b'-' => {
                    sign = -sign;
                    pos += 1;
                }
                _ if pos > 0 => return Err(err("expected '+' or '-' between terms")),
                _ => {}
            }
            let end = compact[pos..]
                .find(['+', '-'])
                .map_or(compact.len(), |i| pos + i);
            let term = &compact[pos..end];
            if term.is_empty() {
                return Err(err("empty term"));
            }
            let (coef, exp) = parse_term(term).ok_or_else(|| err("malformed term"))?;
            raw[exp % m] += sign * coef;
            pos = end;
        }
        Ok(Self::from_coeffs(order, &raw))
    }
}

fn parse_term(term: &str) -> Option<(BigInt, usize)> {
    let (coef_part, z_part) = match term.find('z') {
        None => return Some((term.parse().ok()?, 0)),
        Some(i) => (&term[..i], &term[i..]),
    };
    let coef = if coef_part.is_empty() {
        BigInt::one()
    } else {
        coef_part.strip_suffix('*')?.parse().ok()?
    };
    let exp = match z_part.strip_prefix('z')? {
        "" => 1,
        rest => rest.strip_prefix('^')?.parse().ok()?,
    };
    Some((coef, exp))
}

impl PartialEq for CyclotomicScalar {
    fn eq(&self, other: &Self) -> bool {
        self.ring.order == other.ring.order && self.coeffs == other.coeffs
    }
}

impl Eq for CyclotomicScalar {}

impl Hash for CyclotomicScalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ring.order.hash(state);
        self.coeffs.hash(state);
    }
}

impl PartialOrd for CyclotomicScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order on (ring order, canonical coefficients); only used for canonical sorting.
impl Ord for CyclotomicScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ring
            .order
            .cmp(&other.ring.order)
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Debug for CyclotomicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc{}({})", self.ring.order, self)
    }
}

impl fmt::Display for CyclotomicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let unit = mag.is_one();
            match k {
                0 => write!(f, "{mag}")?,
                1 if unit => f.write_str("z")?,
                1 => write!(f, "{mag}*z")?,
                _ if unit => write!(f, "z^{k}")?,
                _ => write!(f, "{mag}*z^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&CyclotomicScalar> for &CyclotomicScalar {
            type Output = CyclotomicScalar;

            /// Panics on mismatched ring orders; use the `try_` form to get an error instead.
            fn $method(self, rhs: &CyclotomicScalar) -> CyclotomicScalar {
                self.$checked(rhs).expect("cyclotomic scalars of different orders")
            }
        }

        impl $trait<CyclotomicScalar> for CyclotomicScalar {
            type Output = CyclotomicScalar;

            fn $method(self, rhs: CyclotomicScalar) -> CyclotomicScalar {
                (&self).$method(&rhs)
            }
        }

        impl $trait<&CyclotomicScalar> for CyclotomicScalar {
            type Output = CyclotomicScalar;

            fn $method(self, rhs: &CyclotomicScalar) -> CyclotomicScalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &CyclotomicScalar {
    type Output = CyclotomicScalar;

    fn neg(self) -> CyclotomicScalar {
        let coeffs = self.coeffs.iter().map(|c| -c).collect();
        CyclotomicScalar::from_reduced(self.ring.clone(), coeffs)
    }
}

impl Neg for CyclotomicScalar {
    type Output = CyclotomicScalar;

    fn neg(self) -> CyclotomicScalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: u32, k: i64) -> CyclotomicScalar {
        CyclotomicScalar::root_power(m, k)
    }

    #[test]
    fn root_power_examples() {
        assert!(z(6, 0).is_one());
        assert!(z(6, 6).is_one());
        assert_eq!(z(6, 3), CyclotomicScalar::from_int(6, -1));
        assert_eq!(z(6, -1), z(6, 5));
    }

    #[test]
    fn additive_identity_and_inverse_powers() {
        let x = CyclotomicScalar::from_i64_coeffs(6, &[3, -2]);
        assert_eq!(&x + &CyclotomicScalar::zero(6), x);
        assert!((z(6, 1) * z(6, 5)).is_one());
    }

    #[test]
    fn norm_of_one_minus_omega_in_order_three() {
        let one = CyclotomicScalar::one(3);
        let prod = (z(3, 1) - &one) * (z(3, 2) - &one);
        assert_eq!(prod, CyclotomicScalar::from_int(3, 3));
    }

    #[test]
    fn prime_root_sum_vanishes() {
        for p in [2u32, 3, 5, 7, 11, 13] {
            let sum = (0..p as i64).fold(CyclotomicScalar::zero(p), |acc, k| acc + z(p, k));
            assert!(sum.is_zero(), "p={p}");
        }
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let e = z(6, 1).try_mul(&z(4, 1)).unwrap_err();
        assert_eq!(e, Error::OrderMismatch { left: 6, right: 4 });
    }

    #[test]
    fn unit_root_detection() {
        let one = CyclotomicScalar::one(6);
        assert_eq!(one.as_unit_root(), Some(UnitRoot { sign: 1, exponent: 0 }));
        assert_eq!((-z(6, 2)).as_unit_root(), Some(UnitRoot { sign: -1, exponent: 2 }));
        // ζ_6^5 = -ζ_6^2; the canonical exponent stays below m/2
        assert_eq!(z(6, 5).as_unit_root(), Some(UnitRoot { sign: -1, exponent: 2 }));
        // 1 + ζ_3 = -ζ_3^2, so this one *is* a unit root
        let w = z(3, 1) + CyclotomicScalar::one(3);
        assert_eq!(w.as_unit_root(), Some(UnitRoot { sign: -1, exponent: 2 }));
        assert_eq!(CyclotomicScalar::from_int(6, 2).as_unit_root(), None);
        assert_eq!(CyclotomicScalar::zero(6).as_unit_root(), None);
        assert_eq!((z(6, 1) + z(6, 0)).as_unit_root(), None);
    }

    #[test]
    fn scaled_units() {
        let x = z(6, 4).scale(&BigInt::from(-3));
        let (u, k) = x.as_scaled_unit().unwrap();
        assert_eq!(k, BigInt::from(3));
        assert_eq!(u.to_scalar(6).scale(&k), x);
    }

    #[test]
    fn unit_inverse() {
        for m in [3u32, 4, 6, 10] {
            for k in 0..m {
                for sign in [1i8, -1] {
                    let u = canonical_unit(m, sign, k);
                    assert!((u.to_scalar(m) * u.inverse(m).to_scalar(m)).is_one());
                }
            }
        }
    }

    #[test]
    fn rendering() {
        let x = CyclotomicScalar::from_i64_coeffs(10, &[1, 0, -1, 2]);
        assert_eq!(x.to_string(), "1 - z^2 + 2*z^3");
        assert_eq!(CyclotomicScalar::zero(10).to_string(), "0");
        assert_eq!((-z(10, 1)).to_string(), "-z");
        assert_eq!(CyclotomicScalar::parse(10, "1 - z^2 + 2*z^3").unwrap(), x);
        assert_eq!(CyclotomicScalar::parse(6, "z^3").unwrap().to_string(), "-1");
        assert_eq!(CyclotomicScalar::parse(6, "-2*z + 5").unwrap().to_string(), "5 - 2*z");
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "1 +", "2*", "z^", "3z", "q", "1 ++ z"] {
            assert!(CyclotomicScalar::parse(6, bad).is_err(), "{bad:?}");
        }
    }
}
