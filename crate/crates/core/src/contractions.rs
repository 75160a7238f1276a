//! Graded contractions of `sl(n,C)` along the Pauli grading.
//!
//! A contraction replaces the bracket by `[X_a, X_b]_ε = ε_{ab}·[X_a, X_b]`
//! with `ε_{ab} = ε_{ba}`. The Jacobi identity for the new bracket gives one
//! quadratic equation in the `ε` per triple of indices.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::cyclotomic::{ring_order, CyclotomicScalar, UnitRoot};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grading::{indices, structure_constant, AlgebraMode, GradingIndex};
use crate::normalizer::IndexAction;

/// Unordered pair `{a, b}` naming `ε_{ab}`, stored with `a ≤ b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParameterIndex {
    pub a: GradingIndex,
    pub b: GradingIndex,
}

impl ParameterIndex {
    pub fn new(x: GradingIndex, y: GradingIndex) -> Self {
        if x <= y {
            Self { a: x, b: y }
        } else {
            Self { a: y, b: x }
        }
    }

    pub fn relabel(&self, f: impl Fn(&GradingIndex) -> GradingIndex) -> Self {
        Self::new(f(&self.a), f(&self.b))
    }
}

impl fmt::Display for ParameterIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e[{},{}]", self.a, self.b)
    }
}

impl Serialize for ParameterIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [[self.a.r, self.a.s], [self.b.r, self.b.s]].serialize(s)
    }
}

/// Product `ε_p·ε_q`, stored with `p ≤ q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Monomial(pub ParameterIndex, pub ParameterIndex);

impl Monomial {
    pub fn new(p: ParameterIndex, q: ParameterIndex) -> Self {
        if p <= q {
            Self(p, q)
        } else {
            Self(q, p)
        }
    }

    pub fn relabel(&self, f: impl Fn(&GradingIndex) -> GradingIndex + Copy) -> Self {
        Self::new(self.0.relabel(f), self.1.relabel(f))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*{}", self.0, self.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Term {
    pub monomial: Monomial,
    #[serde(rename = "coefficient", serialize_with = "crate::cyclotomic::serialize_display")]
    pub coeff: CyclotomicScalar,
}

/// `Σ coeff·ε_p ε_q = 0` in canonical form.
///
/// Terms are sorted by monomial with no zero coefficients. Integer content is
/// removed first. The equation is then divided by its leading coefficient
/// whenever every quotient lies in `Z[ζ]`, which always holds when that
/// coefficient is a unit root times an integer. Otherwise the smallest unit
/// multiple is kept and `unit_normalized` is false.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ContractionEquation {
    pub n: u32,
    pub terms: Vec<Term>,
    pub unit_normalized: bool,
}

impl ContractionEquation {
    /// Canonical form of `Σ coeff·monomial`, or `None` if everything cancels.
    pub fn canonicalize(n: u32, raw: impl IntoIterator<Item = (CyclotomicScalar, Monomial)>) -> Option<Self> {
        let mut combined: BTreeMap<Monomial, CyclotomicScalar> = BTreeMap::new();
        for (c, m) in raw {
            let slot = combined
                .entry(m)
                .or_insert_with(|| CyclotomicScalar::zero(ring_order(n)));
            *slot = &*slot + &c;
        }
        let mut terms: Vec<Term> = combined
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(monomial, coeff)| Term { monomial, coeff })
            .collect();
        if terms.is_empty() {
            return None;
        }
        let content = terms
            .iter()
            .fold(BigInt::zero(), |g, t| g.gcd(&t.coeff.content()));
        for t in &mut terms {
            t.coeff = t.coeff.div_exact_int(&content).expect("content divides");
        }
        let order = ring_order(n);
        if let Some((unit, _)) = terms[0].coeff.as_scaled_unit() {
            let inv = unit.inverse(order);
            for t in &mut terms {
                t.coeff = t.coeff.mul_unit(inv);
            }
            return Some(Self {
                n,
                terms,
                unit_normalized: true,
            });
        }
        let lead = terms[0].coeff.clone();
        let quotients: Option<Vec<CyclotomicScalar>> = terms.iter().map(|t| t.coeff.div_exact(&lead)).collect();
        if let Some(quotients) = quotients {
            for (t, q) in terms.iter_mut().zip(quotients) {
                t.coeff = q;
            }
            return Some(Self {
                n,
                terms,
                unit_normalized: true,
            });
        }
        let best = (0..order)
            .map(|k| {
                terms
                    .iter()
                    .map(|t| Term {
                        monomial: t.monomial,
                        coeff: t.coeff.mul_root(k as i64),
                    })
                    .collect::<Vec<_>>()
            })
            .min()
            .expect("order is positive");
        Some(Self {
            n,
            terms: best,
            unit_normalized: false,
        })
    }

    pub fn parameters(&self) -> BTreeSet<ParameterIndex> {
        self.terms
            .iter()
            .flat_map(|t| [t.monomial.0, t.monomial.1])
            .collect()
    }

    /// Rename every `ε` index through `f` and re-canonicalize.
    pub fn relabel(&self, f: impl Fn(&GradingIndex) -> GradingIndex + Copy) -> Self {
        Self::canonicalize(
            self.n,
            self.terms.iter().map(|t| (t.coeff.clone(), t.monomial.relabel(f))),
        )
        .expect("relabeling is injective on monomials")
    }

    /// Parse the text form produced by `Display`, then canonicalize.
    ///
    /// Accepts any order of terms and indices, e.g.
    /// `e[(0,2),(1,0)]*e[(0,1),(1,2)] - e[(1,0),(0,1)]*e[(0,2),(1,1)] = 0`.
    pub fn parse(n: u32, input: &str) -> Result<Option<Self>> {
        let err = |reason: &str| Error::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let lhs = compact
            .strip_suffix("=0")
            .ok_or_else(|| err("expected trailing '= 0'"))?;
        let order = ring_order(n);
        let mut raw = Vec::new();
        for (negative, body) in split_signed(lhs).ok_or_else(|| err("unbalanced brackets"))? {
            let (coeff_text, mono_text) = match body.find("e[") {
                Some(0) => ("", body),
                Some(i) => (body[..i].strip_suffix('*').ok_or_else(|| err("expected '*'"))?, &body[i..]),
                None => return Err(err("term without parameters")),
            };
            let mut coeff = if coeff_text.is_empty() {
                CyclotomicScalar::one(order)
            } else {
                let inner = coeff_text
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .unwrap_or(coeff_text);
                CyclotomicScalar::parse(order, inner)?
            };
            if negative {
                coeff = -coeff;
            }
            let params: Vec<ParameterIndex> = mono_text
                .split('*')
                .map(|p| parse_parameter(n, p).ok_or_else(|| err("malformed parameter")))
                .collect::<Result<_>>()?;
            let [p, q] = params[..] else {
                return Err(err("each term needs exactly two parameters"));
            };
            raw.push((coeff, Monomial::new(p, q)));
        }
        if raw.is_empty() {
            return Err(err("no terms"));
        }
        Ok(Self::canonicalize(n, raw))
    }
}

fn split_signed(text: &str) -> Option<Vec<(bool, &str)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut negative = false;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            '+' | '-' if depth == 0 => {
                if i > start {
                    out.push((negative, &text[start..i]));
                } else if !out.is_empty() || i > 0 {
                    return None;
                }
                negative = ch == '-';
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return None;
        }
    }
    if depth != 0 || start >= text.len() {
        return None;
    }
    out.push((negative, &text[start..]));
    Some(out)
}

fn parse_parameter(n: u32, text: &str) -> Option<ParameterIndex> {
    let inner = text.strip_prefix("e[")?.strip_suffix(']')?;
    let nums: Vec<i64> = inner
        .split(['(', ')', ','])
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().ok())
        .collect::<Option<_>>()?;
    let [r1, s1, r2, s2] = nums[..] else {
        return None;
    };
    Some(ParameterIndex::new(
        GradingIndex::new(n, r1, s1),
        GradingIndex::new(n, r2, s2),
    ))
}

impl fmt::Display for ContractionEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            match t.coeff.as_integer() {
                Some(k) => {
                    let sign = if k.is_negative() { "-" } else { "+" };
                    match (i, sign) {
                        (0, "-") => write!(f, "-")?,
                        (0, _) => {}
                        _ => write!(f, " {sign} ")?,
                    }
                    let mag = k.abs();
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                }
                None => {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "({})*", t.coeff)?;
                }
            }
            write!(f, "{}", t.monomial)?;
        }
        write!(f, " = 0")
    }
}

/// Unordered triple of distinct nonzero indices, stored sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple(pub [GradingIndex; 3]);

impl Triple {
    pub fn new(x: GradingIndex, y: GradingIndex, z: GradingIndex) -> Self {
        let mut t = [x, y, z];
        t.sort();
        Self(t)
    }

    pub fn sum(&self) -> GradingIndex {
        self.0[0].add(&self.0[1]).add(&self.0[2])
    }

    pub fn map(&self, f: impl Fn(&GradingIndex) -> GradingIndex) -> Self {
        Self::new(f(&self.0[0]), f(&self.0[1]), f(&self.0[2]))
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{},{}}}", self.0[0], self.0[1], self.0[2])
    }
}

impl Serialize for Triple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.map(|g| [g.r, g.s]).serialize(s)
    }
}

/// All `C(n²−1, 3)` triples of distinct nonzero indices, sorted.
pub fn enumerate_triples(n: u32) -> Vec<Triple> {
    let idx = indices(n, AlgebraMode::Sl);
    let mut out = Vec::new();
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            for k in j + 1..idx.len() {
                out.push(Triple([idx[i], idx[j], idx[k]]));
            }
        }
    }
    out
}

/// The three cyclic terms `c(j,k)·c(i,j+k)·ε_{jk}ε_{i,j+k}` before
/// canonicalization, including those with vanishing coefficient.
pub fn jacobi_terms(i: &GradingIndex, j: &GradingIndex, k: &GradingIndex) -> Vec<(CyclotomicScalar, Monomial)> {
    [(i, j, k), (j, k, i), (k, i, j)]
        .into_iter()
        .map(|(x, y, z)| {
            let yz = y.add(z);
            let c = structure_constant(y, z) * structure_constant(x, &yz);
            (c, Monomial::new(ParameterIndex::new(*y, *z), ParameterIndex::new(*x, yz)))
        })
        .collect()
}

/// Canonical Jacobi equation of the triple, or `None` when it vanishes identically.
pub fn jacobi_equation(triple: &Triple) -> Option<ContractionEquation> {
    let [i, j, k] = &triple.0;
    let raw = jacobi_terms(i, j, k)
        .into_iter()
        .filter(|(c, _)| !c.is_zero());
    ContractionEquation::canonicalize(i.n, raw)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemEntry {
    pub equation: ContractionEquation,
    /// Every triple producing this equation, sorted.
    pub triples: Vec<Triple>,
}

/// The deduplicated equation system of the Pauli grading of `sl(n,C)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquationSystem {
    pub n: u32,
    pub triples: usize,
    /// Triples whose Jacobi identity vanishes identically.
    pub vanishing_triples: usize,
    /// Among the vanishing triples, those with index sum `(0,0)`.
    pub zero_sum_triples: usize,
    /// Number of parameters `ε_{ab}` over unordered pairs of distinct nonzero indices.
    pub parameter_count: usize,
    /// The parameters that occur in at least one equation.
    pub parameters: BTreeSet<ParameterIndex>,
    pub entries: Vec<SystemEntry>,
}

impl EquationSystem {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn equations(&self) -> impl Iterator<Item = &ContractionEquation> {
        self.entries.iter().map(|e| &e.equation)
    }

    pub fn position(&self, eq: &ContractionEquation) -> Option<usize> {
        self.entries
            .binary_search_by(|e| e.equation.cmp(eq))
            .ok()
    }

    pub fn contains(&self, eq: &ContractionEquation) -> bool {
        self.position(eq).is_some()
    }
}

pub fn equation_system(n: u32, exec: Execution) -> Result<EquationSystem> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n must be at least 2, got {n}")));
    }
    let triples = enumerate_triples(n);
    let generated = exec.map(&triples, jacobi_equation);
    let mut grouped: BTreeMap<ContractionEquation, Vec<Triple>> = BTreeMap::new();
    let mut vanishing_triples = 0;
    let mut zero_sum_triples = 0;
    for (triple, eq) in triples.iter().zip(generated) {
        match eq {
            Some(eq) => grouped.entry(eq).or_default().push(*triple),
            None => {
                vanishing_triples += 1;
                if triple.sum().is_zero() {
                    zero_sum_triples += 1;
                }
            }
        }
    }
    let entries: Vec<SystemEntry> = grouped
        .into_iter()
        .map(|(equation, triples)| SystemEntry { equation, triples })
        .collect();
    let parameters = entries
        .iter()
        .flat_map(|e| e.equation.parameters())
        .collect();
    let nonzero = (n * n - 1) as usize;
    Ok(EquationSystem {
        n,
        triples: triples.len(),
        vanishing_triples,
        zero_sum_triples,
        parameter_count: nonzero * (nonzero - 1) / 2,
        parameters,
        entries,
    })
}

pub fn act_on_triple(action: &IndexAction, triple: &Triple) -> Triple {
    triple.map(|g| action.image(g))
}

/// Image of an equation obtained by regenerating it from the image of its source triple.
pub fn act_on_equation(action: &IndexAction, entry: &SystemEntry) -> Result<ContractionEquation> {
    let image = act_on_triple(action, &entry.triples[0]);
    jacobi_equation(&image).ok_or_else(|| {
        Error::Internal(format!("the image {image} of {} has a vanishing equation", entry.triples[0]))
    })
}

/// Image of an equation obtained by renaming its `ε` indices.
pub fn relabel_equation(action: &IndexAction, eq: &ContractionEquation) -> ContractionEquation {
    eq.relabel(|g| action.image(g))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    /// Positions in the system, ascending.
    pub members: Vec<usize>,
    /// The first source triple of each member.
    pub triples: Vec<Triple>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Partition of the system into orbits of `group`, ordered by smallest member.
///
/// Images are found by moving source triples, which gives the same equation
/// as relabeling the `ε` indices. `group` must be closed under composition;
/// an image outside the system is an error.
pub fn orbits(system: &EquationSystem, group: &[IndexAction], exec: Execution) -> Result<Vec<Orbit>> {
    let lookup: HashMap<Triple, usize> = system
        .entries
        .iter()
        .enumerate()
        .flat_map(|(i, e)| e.triples.iter().map(move |t| (*t, i)))
        .collect();
    let images: Vec<Result<Vec<usize>>> = exec.map(&system.entries, |entry| {
        group
            .iter()
            .map(|g| {
                let image = act_on_triple(g, &entry.triples[0]);
                lookup.get(&image).copied().ok_or_else(|| {
                    Error::Internal(format!("image {image} of {} is not in the system", entry.triples[0]))
                })
            })
            .collect()
    });
    let images: Vec<Vec<usize>> = images.into_iter().collect::<Result<_>>()?;
    let mut assigned = vec![false; system.len()];
    let mut out = Vec::new();
    for start in 0..system.len() {
        if assigned[start] {
            continue;
        }
        let mut members = vec![start];
        assigned[start] = true;
        let mut cursor = 0;
        while cursor < members.len() {
            for &next in &images[members[cursor]] {
                if !assigned[next] {
                    assigned[next] = true;
                    members.push(next);
                }
            }
            cursor += 1;
        }
        members.sort_unstable();
        let triples = members.iter().map(|&i| system.entries[i].triples[0]).collect();
        out.push(Orbit { members, triples });
    }
    Ok(out)
}

/// `Some(u)` iff `b = u·a` for a unit root `u`; a cheap scalar-multiple test.
pub fn unit_ratio(a: &CyclotomicScalar, b: &CyclotomicScalar) -> Option<UnitRoot> {
    let order = a.order();
    (0..order).find_map(|k| {
        let z = a.mul_root(k as i64);
        if z == *b {
            Some(UnitRoot::canonical(order, 1, k))
        } else if z == -b {
            Some(UnitRoot::canonical(order, -1, k))
        } else {
            None
        }
    })
}
