//! `SL(2, Z_n)` and its determinant `±1` extension `H`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::pauli::is_prime;

/// Default enumeration bound for commands that walk a whole group.
pub const DEFAULT_MAX_N: u32 = 13;

/// `[[a, b], [c, d]]` over `Z_n`, entries stored as residues in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2Zn {
    pub n: u32,
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

fn residue(x: i64, n: u32) -> u32 {
    x.rem_euclid(n as i64) as u32
}

/// Inverse of `x` mod `n`, if `gcd(x, n) = 1`.
pub fn inverse_mod(x: i64, n: u32) -> Option<u32> {
    let n64 = n as i64;
    let g = x.rem_euclid(n64).extended_gcd(&n64);
    (g.gcd == 1).then(|| residue(g.x, n))
}

impl Mat2Zn {
    pub fn new(n: u32, a: i64, b: i64, c: i64, d: i64) -> Self {
        assert!(n >= 1, "modulus must be positive");
        Self {
            n,
            a: residue(a, n),
            b: residue(b, n),
            c: residue(c, n),
            d: residue(d, n),
        }
    }

    pub fn identity(n: u32) -> Self {
        Self::new(n, 1, 0, 0, 1)
    }

    /// `A = [[1, 0], [1, 1]]`
    pub fn gen_a(n: u32) -> Self {
        Self::new(n, 1, 0, 1, 1)
    }

    /// `B = [[0, -1], [1, 0]]`
    pub fn gen_b(n: u32) -> Self {
        Self::new(n, 0, -1, 1, 0)
    }

    /// `C = A^T = [[1, 1], [0, 1]]`
    pub fn gen_c(n: u32) -> Self {
        Self::new(n, 1, 1, 0, 1)
    }

    /// `[[1, 0], [t, 1]] = A^t`
    pub fn lower(n: u32, t: i64) -> Self {
        Self::new(n, 1, 0, t, 1)
    }

    pub fn diag(n: u32, x: i64, y: i64) -> Self {
        Self::new(n, x, 0, 0, y)
    }

    /// `diag(-1, 1)`, the image of the transpose-type outer automorphism.
    pub fn reflection(n: u32) -> Self {
        Self::diag(n, -1, 1)
    }

    pub fn entries(&self) -> [u32; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: o.n,
            });
        }
        let (a, b, c, d) = (self.a as i64, self.b as i64, self.c as i64, self.d as i64);
        let (e, f, g, h) = (o.a as i64, o.b as i64, o.c as i64, o.d as i64);
        Ok(Self::new(
            self.n,
            a * e + b * g,
            a * f + b * h,
            c * e + d * g,
            c * f + d * h,
        ))
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.try_mul(o).expect("matrices over different moduli")
    }

    pub fn det(&self) -> u32 {
        residue(
            self.a as i64 * self.d as i64 - self.b as i64 * self.c as i64,
            self.n,
        )
    }

    pub fn is_sl(&self) -> bool {
        self.det() == 1 % self.n
    }

    pub fn is_in_h(&self) -> bool {
        let det = self.det();
        det == 1 % self.n || det == residue(-1, self.n)
    }

    /// Adjugate times `det^{-1}`.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        let inv = inverse_mod(det as i64, self.n).ok_or(Error::NotInvertible {
            det: det as u64,
            n: self.n,
        })? as i64;
        Ok(Self::new(
            self.n,
            inv * self.d as i64,
            -inv * self.b as i64,
            -inv * self.c as i64,
            inv * self.a as i64,
        ))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { *self };
        let mut acc = Self::identity(self.n);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Least `k ≥ 1` with `x^k = I`. The group is finite, so the loop ends
    /// for any invertible matrix.
    pub fn element_order(&self) -> Result<u64> {
        self.inverse()?;
        let mut k = 1;
        let mut acc = *self;
        while !acc.is_identity() {
            acc = acc.mul(self);
            k += 1;
        }
        Ok(k)
    }

    /// Parse `"a,b,c,d"` (signed integers, reduced mod `n`).
    pub fn parse(n: u32, text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::InvalidInput(format!(
                "expected four comma-separated residues, got {text:?}"
            )));
        }
        let mut vals = [0i64; 4];
        for (slot, p) in vals.iter_mut().zip(&parts) {
            *slot = p
                .parse()
                .map_err(|_| Error::InvalidInput(format!("not an integer: {p:?}")))?;
        }
        Ok(Self::new(n, vals[0], vals[1], vals[2], vals[3]))
    }
}

impl fmt::Display for Mat2Zn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{},{}],[{},{}]] mod {}",
            self.a, self.b, self.c, self.d, self.n
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupVariant {
    /// Determinant `+1`.
    Sl,
    /// Determinant `±1`.
    H,
}

/// Every matrix of the chosen group, sorted.
pub fn enumerate(n: u32, variant: GroupVariant, max_n: u32, exec: Execution) -> Result<Vec<Mat2Zn>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n must be at least 2, got {n}")));
    }
    if n > max_n {
        return Err(Error::BoundExceeded { n, bound: max_n });
    }
    let firsts: Vec<(u32, u32)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let chunks = exec.map(&firsts, |&(a, b)| {
        let mut local = Vec::new();
        for c in 0..n {
            for d in 0..n {
                let x = Mat2Zn { n, a, b, c, d };
                let keep = match variant {
                    GroupVariant::Sl => x.is_sl(),
                    GroupVariant::H => x.is_in_h(),
                };
                if keep {
                    local.push(x);
                }
            }
        }
        local
    });
    Ok(chunks.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn matrix(self, n: u32) -> Mat2Zn {
        match self {
            Letter::A => Mat2Zn::gen_a(n),
            Letter::B => Mat2Zn::gen_b(n),
        }
    }

    /// Exponent period used when canonicalizing words.
    fn period(self, n: u32) -> i64 {
        match self {
            Letter::A => n as i64,
            Letter::B => 4,
        }
    }
}

/// Word over `{A, B}`; evaluates left to right as a matrix product.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorWord {
    pub letters: Vec<(Letter, i64)>,
}

impl GeneratorWord {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, letter: Letter, exp: i64) {
        self.letters.push((letter, exp));
    }

    pub fn extend(&mut self, other: &GeneratorWord) {
        self.letters.extend_from_slice(&other.letters);
    }

    pub fn eval(&self, n: u32) -> Mat2Zn {
        self.letters
            .iter()
            .fold(Mat2Zn::identity(n), |acc, &(l, e)| {
                acc.mul(&l.matrix(n).pow(e).expect("generators are invertible"))
            })
    }

    /// Merge adjacent equal letters, reduce exponents (`A` mod `n`, `B` mod 4)
    /// into `[1, period)`, drop trivial letters, repeat until stable.
    pub fn canonicalize(&self, n: u32) -> Self {
        let mut out: Vec<(Letter, i64)> = Vec::with_capacity(self.letters.len());
        for &(l, e) in &self.letters {
            let e = e.rem_euclid(l.period(n));
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((last, le)) if *last == l => {
                    *le = (*le + e).rem_euclid(l.period(n));
                    if *le == 0 {
                        out.pop();
                    }
                }
                _ => out.push((l, e)),
            }
        }
        Self { letters: out }
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("I");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&(l, e)| {
                let name = match l {
                    Letter::A => "A",
                    Letter::B => "B",
                };
                if e == 1 {
                    name.to_string()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecompositionMethod {
    Euclid,
    Search,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub word: GeneratorWord,
    pub method: DecompositionMethod,
}

/// `C^k = B·A^{-k}·B^3`, expanded into the two generators.
fn push_c_power(word: &mut GeneratorWord, k: i64) {
    if k != 0 {
        word.push(Letter::B, 1);
        word.push(Letter::A, -k);
        word.push(Letter::B, 3);
    }
}

/// `[[s, t], [0, u]] = C^{s(t-1)} · A^u · B^3 · A^s`, valid whenever `su = 1`.
/// The unipotent cases `s = ±1` use the shorter `C^t` and `B^2 C^{-t}`.
fn push_upper_triangular(word: &mut GeneratorWord, n: u32, s: i64, t: i64, u: i64) {
    let m = n as i64;
    if (s - 1).rem_euclid(m) == 0 {
        push_c_power(word, t.rem_euclid(m));
        return;
    }
    if (s + 1).rem_euclid(m) == 0 {
        word.push(Letter::B, 2);
        push_c_power(word, (-t).rem_euclid(m));
        return;
    }
    push_c_power(word, s * (t - 1));
    word.push(Letter::A, u);
    word.push(Letter::B, 3);
    word.push(Letter::A, s);
}

/// Word produced by the subtractive Euclid reduction of the first column,
/// without verification. The matrix must have determinant 1.
pub fn euclid_word(x: &Mat2Zn) -> GeneratorWord {
    let n = x.n;
    let (mut a, mut b, mut c, mut d) = (x.a as i64, x.b as i64, x.c as i64, x.d as i64);
    let mut word = GeneratorWord::empty();
    // x = A·[[a, b], [c-a, d-b]] = C·[[a-c, b-d], [c, d]]
    while a != 0 && c != 0 {
        if c >= a {
            word.push(Letter::A, 1);
            c -= a;
            d = (d - b).rem_euclid(n as i64);
        } else {
            push_c_power(&mut word, 1);
            a -= c;
            b = (b - d).rem_euclid(n as i64);
        }
    }
    if c == 0 {
        push_upper_triangular(&mut word, n, a, b, d);
    } else {
        // [[0, v], [s, w]] = B^3 · [[-s, -w], [0, v]]
        word.push(Letter::B, 3);
        push_upper_triangular(&mut word, n, -c, -d, b);
    }
    word.canonicalize(n)
}

/// Shortest word (in letters `A`, `B`) reaching `x`, by breadth-first search
/// over the Cayley graph.
pub fn search_word(x: &Mat2Zn) -> Option<GeneratorWord> {
    let n = x.n;
    let start = Mat2Zn::identity(n);
    let mut parent: HashMap<Mat2Zn, (Mat2Zn, Letter)> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    let mut seen = std::collections::HashSet::from([start]);
    while let Some(cur) = queue.pop_front() {
        if cur == *x {
            let mut rev = Vec::new();
            let mut node = cur;
            while node != start {
                let (prev, l) = parent[&node];
                rev.push((l, 1));
                node = prev;
            }
            rev.reverse();
            return Some(GeneratorWord { letters: rev }.canonicalize(n));
        }
        for l in [Letter::A, Letter::B] {
            let next = cur.mul(&l.matrix(n));
            if seen.insert(next) {
                parent.insert(next, (cur, l));
                queue.push_back(next);
            }
        }
    }
    None
}

/// Write an `SL(2, Z_n)` element as a word in `A` and `B`.
///
/// The Euclid reduction runs first; its result is re-evaluated and the
/// Cayley-graph search takes over if it does not reproduce `x`.
pub fn decompose_to_word(x: &Mat2Zn) -> Result<Decomposition> {
    if !x.is_sl() {
        return Err(Error::WrongDeterminant {
            det: x.det() as u64,
            n: x.n,
            expected: "1",
        });
    }
    let word = euclid_word(x);
    if word.eval(x.n) == *x {
        return Ok(Decomposition {
            word,
            method: DecompositionMethod::Euclid,
        });
    }
    match search_word(x) {
        Some(word) if word.eval(x.n) == *x => Ok(Decomposition {
            word,
            method: DecompositionMethod::Search,
        }),
        _ => Err(Error::Internal(format!("no generator word found for {x}"))),
    }
}

/// Cell of the two-cell decomposition of `SL(2, Z_p)`, with `L(t) = [[1,0],[t,1]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "cell", rename_all = "lowercase")]
pub enum BruhatCell {
    /// `x = L(a)·diag(b, b^{-1})`
    Small { a: u32, b: u32 },
    /// `x = L(a)·diag(b, b^{-1})·B·L(c)`
    Big { a: u32, b: u32, c: u32 },
}

impl BruhatCell {
    pub fn eval(&self, n: u32) -> Mat2Zn {
        let torus = |b: u32| {
            let inv = inverse_mod(b as i64, n).expect("torus parameter is a unit");
            Mat2Zn::diag(n, b as i64, inv as i64)
        };
        match *self {
            BruhatCell::Small { a, b } => Mat2Zn::lower(n, a as i64).mul(&torus(b)),
            BruhatCell::Big { a, b, c } => Mat2Zn::lower(n, a as i64)
                .mul(&torus(b))
                .mul(&Mat2Zn::gen_b(n))
                .mul(&Mat2Zn::lower(n, c as i64)),
        }
    }
}

impl fmt::Display for BruhatCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BruhatCell::Small { a, b } => write!(f, "cell 1 (a={a}, b={b})"),
            BruhatCell::Big { a, b, c } => write!(f, "cell 2 (a={a}, b={b}, c={c})"),
        }
    }
}

pub fn bruhat_decompose(x: &Mat2Zn) -> Result<BruhatCell> {
    let n = x.n;
    if !is_prime(n) {
        return Err(Error::NotPrime {
            n,
            what: "the Bruhat decomposition",
        });
    }
    if !x.is_sl() {
        return Err(Error::WrongDeterminant {
            det: x.det() as u64,
            n,
            expected: "1",
        });
    }
    let n64 = n as i64;
    let cell = if x.b == 0 {
        // [[b, 0], [a·b, b^{-1}]]
        let b = x.a as i64;
        let b_inv = inverse_mod(b, n).expect("det 1 forces a unit diagonal") as i64;
        BruhatCell::Small {
            a: residue(x.c as i64 * b_inv, n),
            b: b as u32,
        }
    } else {
        // [[-b·c, -b], [b^{-1} - a·b·c, -a·b]]
        let b = (-(x.b as i64)).rem_euclid(n64);
        let b_inv = inverse_mod(b, n).expect("nonzero residue mod a prime") as i64;
        BruhatCell::Big {
            a: residue(-(x.d as i64) * b_inv, n),
            b: b as u32,
            c: residue(-(x.a as i64) * b_inv, n),
        }
    };
    if cell.eval(n) != *x {
        return Err(Error::Internal(format!("Bruhat parameters {cell} do not reproduce {x}")));
    }
    Ok(cell)
}
