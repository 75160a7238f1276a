//! The Pauli fine grading of `gl(n,C)` and `sl(n,C)`.
//!
//! The basis is `X_{rs} = Q^r P^s`, indexed by `(r,s) ∈ Z_n × Z_n`, with
//! `[X_a, X_b] = (ω^{s_a r_b} − ω^{r_a s_b})·X_{a+b}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{omega_power, ring_order, CyclotomicScalar};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::pauli::{basis_matrix, is_prime, CycMatrix};
use crate::sl2zn::Mat2Zn;

/// Index `(r, s)` of the grading subspace spanned by `X_{rs}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GradingIndex {
    pub n: u32,
    pub r: u32,
    pub s: u32,
}

impl GradingIndex {
    pub fn new(n: u32, r: i64, s: i64) -> Self {
        let m = n as i64;
        Self {
            n,
            r: r.rem_euclid(m) as u32,
            s: s.rem_euclid(m) as u32,
        }
    }

    pub fn zero(n: u32) -> Self {
        Self { n, r: 0, s: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.r == 0 && self.s == 0
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self::new(
            self.n,
            self.r as i64 + other.r as i64,
            self.s as i64 + other.s as i64,
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.n, -(self.r as i64), -(self.s as i64))
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(self.n, k * self.r as i64, k * self.s as i64)
    }

    /// Row vector times matrix: `(r, s)·[[a, b], [c, d]] = (ra + sc, rb + sd)`.
    pub fn times(&self, g: &Mat2Zn) -> Self {
        debug_assert_eq!(self.n, g.n);
        let (r, s) = (self.r as i64, self.s as i64);
        Self::new(
            self.n,
            r * g.a as i64 + s * g.c as i64,
            r * g.b as i64 + s * g.d as i64,
        )
    }

    pub fn matrix(&self) -> CycMatrix {
        basis_matrix(self.n, self.r, self.s)
    }
}

impl fmt::Display for GradingIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.r, self.s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraMode {
    /// All `n^2` indices.
    Gl,
    /// Excludes `(0,0)`, the identity direction.
    Sl,
}

/// Indices in lexicographic order.
pub fn indices(n: u32, mode: AlgebraMode) -> Vec<GradingIndex> {
    let mut out = Vec::with_capacity((n * n) as usize);
    for r in 0..n {
        for s in 0..n {
            if mode == AlgebraMode::Sl && r == 0 && s == 0 {
                continue;
            }
            out.push(GradingIndex { n, r, s });
        }
    }
    out
}

pub fn structure_constant(a: &GradingIndex, b: &GradingIndex) -> CyclotomicScalar {
    assert_eq!(a.n, b.n, "grading indices of different dimension");
    let n = a.n;
    let left = a.s as i64 * b.r as i64;
    let right = a.r as i64 * b.s as i64;
    omega_power(n, left) - omega_power(n, right)
}

/// Finite linear combination of basis elements `X_{rs}`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedVector {
    n: u32,
    terms: BTreeMap<GradingIndex, CyclotomicScalar>,
}

impl GradedVector {
    pub fn zero(n: u32) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(index: GradingIndex) -> Self {
        Self::term(index, CyclotomicScalar::one(ring_order(index.n)))
    }

    pub fn term(index: GradingIndex, coeff: CyclotomicScalar) -> Self {
        let mut v = Self::zero(index.n);
        v.add_term(index, coeff);
        v
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<GradingIndex, CyclotomicScalar> {
        &self.terms
    }

    pub fn coeff(&self, index: &GradingIndex) -> Option<&CyclotomicScalar> {
        self.terms.get(index)
    }

    /// The only term, if there is exactly one.
    pub fn single_term(&self) -> Option<(GradingIndex, &CyclotomicScalar)> {
        let mut it = self.terms.iter();
        match (it.next(), it.next()) {
            (Some((k, v)), None) => Some((*k, v)),
            _ => None,
        }
    }

    pub fn add_term(&mut self, index: GradingIndex, coeff: CyclotomicScalar) {
        assert_eq!(index.n, self.n);
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&index) {
            Some(old) => {
                let sum = old + coeff;
                if !sum.is_zero() {
                    self.terms.insert(index, sum);
                }
            }
            None => {
                self.terms.insert(index, coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(*k, v.clone());
        }
        out
    }

    pub fn scale(&self, k: &CyclotomicScalar) -> Self {
        let mut out = Self::zero(self.n);
        for (idx, v) in &self.terms {
            out.add_term(*idx, v * k);
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&CyclotomicScalar) -> CyclotomicScalar) -> Self {
        let mut out = Self::zero(self.n);
        for (idx, v) in &self.terms {
            out.add_term(*idx, f(v));
        }
        out
    }

    pub fn to_matrix(&self) -> CycMatrix {
        let m = ring_order(self.n);
        let nn = self.n as usize;
        let mut out = CycMatrix::zeros(nn, m);
        for (idx, c) in &self.terms {
            // X_rs has entry ω^{rk} at (k, k+s)
            for k in 0..nn {
                let col = (k + idx.s as usize) % nn;
                let add = c * &omega_power(self.n, idx.r as i64 * k as i64);
                let cur = out.get(k, col).clone();
                out.set(k, col, cur + add);
            }
        }
        out
    }

    /// Expand a matrix in the `X_{rs}` basis.
    ///
    /// Uses the trace pairing `n·c_{rs} = Tr(X_{rs}^{-1}·M) = Σ_j ω^{-rj} M_{j,j+s}`
    /// and divides by `n` exactly.
    pub fn from_matrix(n: u32, matrix: &CycMatrix) -> Result<Self> {
        let nn = n as usize;
        if matrix.dim() != nn {
            return Err(Error::DimensionMismatch {
                left: n,
                right: matrix.dim() as u32,
            });
        }
        let m = ring_order(n);
        let divisor = n.into();
        let mut out = Self::zero(n);
        for s in 0..n {
            let diag: Vec<&CyclotomicScalar> = (0..nn)
                .map(|j| matrix.get(j, (j + s as usize) % nn))
                .collect();
            if diag.iter().all(|x| x.is_zero()) {
                continue;
            }
            for r in 0..n {
                let mut acc = CyclotomicScalar::zero(m);
                for (j, x) in diag.iter().enumerate() {
                    if !x.is_zero() {
                        acc = acc + x.mul_root(-2 * (r as i64) * (j as i64));
                    }
                }
                let c = acc.div_exact_int(&divisor).ok_or_else(|| {
                    Error::Internal(format!("trace pairing for ({r},{s}) not divisible by {n}"))
                })?;
                out.add_term(GradingIndex { n, r, s }, c);
            }
        }
        Ok(out)
    }
}

/// `Some((idx, ρ))` iff the matrix is exactly `ρ·X_idx` with `ρ ≠ 0`.
pub fn as_basis_multiple(n: u32, matrix: &CycMatrix) -> Option<(GradingIndex, CyclotomicScalar)> {
    let nn = n as usize;
    if matrix.dim() != nn {
        return None;
    }
    let mut cols = (0..nn).filter(|&j| !matrix.get(0, j).is_zero());
    let s = cols.next()?;
    if cols.next().is_some() {
        return None;
    }
    let rho = matrix.get(0, s).clone();
    let next = matrix.get(1 % nn, (1 + s) % nn);
    let r = (0..n).find(|&r| rho.mul_root(2 * r as i64) == *next)?;
    let idx = GradingIndex { n, r, s: s as u32 };
    (idx.matrix().scale(&rho) == *matrix).then_some((idx, rho))
}

/// Bilinear extension of the basis bracket.
pub fn bracket(x: &GradedVector, y: &GradedVector) -> GradedVector {
    assert_eq!(x.n, y.n, "graded vectors of different dimension");
    let mut out = GradedVector::zero(x.n);
    for (a, ca) in &x.terms {
        for (b, cb) in &y.terms {
            let c = structure_constant(a, b);
            if c.is_zero() {
                continue;
            }
            out.add_term(a.add(b), &(ca * cb) * &c);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureMismatch {
    pub a: GradingIndex,
    pub b: GradingIndex,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub n: u32,
    pub pairs_checked: usize,
    pub mismatches: Vec<ClosureMismatch>,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compare every matrix commutator `[X_a, X_b]` with `c(a,b)·X_{a+b}`.
pub fn verify_grading_closure(n: u32, mode: AlgebraMode, exec: Execution) -> ClosureReport {
    let idx = indices(n, mode);
    let mats: Vec<CycMatrix> = idx.iter().map(GradingIndex::matrix).collect();
    let pairs: Vec<(usize, usize)> = (0..idx.len())
        .flat_map(|i| (0..idx.len()).map(move |j| (i, j)))
        .collect();
    let mismatches = exec.filter_map(&pairs, |&(i, j)| {
        let (a, b) = (idx[i], idx[j]);
        let comm = mats[i].mul(&mats[j]).sub(&mats[j].mul(&mats[i]));
        let c = structure_constant(&a, &b);
        let expected = a.add(&b).matrix().scale(&c);
        (comm != expected).then(|| ClosureMismatch {
            a,
            b,
            expected: c.to_string(),
        })
    });
    ClosureReport {
        n,
        pairs_checked: pairs.len(),
        mismatches,
    }
}

/// One commuting family `{ k·(a,b) : k = 1..n-1 }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CartanLine {
    pub direction: GradingIndex,
    pub indices: Vec<GradingIndex>,
}

/// The `n + 1` lines through the origin of `Z_n × Z_n` for prime `n`.
///
/// Directions are normalized so the first nonzero coordinate is 1 and are
/// listed as `(0,1), (1,0), (1,1), …, (1,n-1)`.
pub fn cartan_lines(n: u32) -> Result<Vec<CartanLine>> {
    if !is_prime(n) {
        return Err(Error::NotPrime {
            n,
            what: "the Cartan decomposition",
        });
    }
    let mut dirs = vec![GradingIndex::new(n, 0, 1)];
    dirs.extend((0..n).map(|b| GradingIndex::new(n, 1, b as i64)));
    Ok(dirs
        .into_iter()
        .map(|d| {
            let mut indices: Vec<GradingIndex> = (1..n as i64).map(|k| d.scale(k)).collect();
            indices.sort();
            CartanLine {
                direction: d,
                indices,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureRow {
    pub a: GradingIndex,
    pub b: GradingIndex,
    pub constant: String,
}

/// All ordered pairs of indices with their structure constant, lexicographic.
pub fn structure_table(n: u32, mode: AlgebraMode) -> Vec<StructureRow> {
    let idx = indices(n, mode);
    let mut out = Vec::with_capacity(idx.len() * idx.len());
    for a in &idx {
        for b in &idx {
            out.push(StructureRow {
                a: *a,
                b: *b,
                constant: structure_constant(a, b).to_string(),
            });
        }
    }
    out
}

impl fmt::Display for StructureRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} -> {}", self.a, self.b, self.constant)
    }
}
