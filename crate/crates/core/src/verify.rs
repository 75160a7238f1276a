//! Invariant suites, shared by the command-line `verify` command and the tests.
//!
//! Every check is exact. A failing check always carries a JSON counterexample.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::{json, Value};

use crate::contractions::{
    act_on_equation, enumerate_triples, equation_system, jacobi_equation, jacobi_terms, orbits,
    relabel_equation, ContractionEquation, EquationSystem,
};
use crate::cyclotomic::{omega_power, ring_order, CyclotomicScalar, UnitRoot};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grading::{
    bracket, cartan_lines, indices, structure_constant, verify_grading_closure, AlgebraMode,
    GradedVector, GradingIndex,
};
use crate::normalizer::{lift_canonical, lift_of, AutomorphismLift, IndexAction};
use crate::pauli::{
    build_diagonal_d, build_diagonal_d_inverse, build_m, build_parity, build_sylvester,
    build_sylvester_conjugate, clock_matrix, enumerate_group, epsilon, is_prime, shift_matrix,
    CycMatrix, PauliElement,
};
use crate::sl2zn::{
    bruhat_decompose, decompose_to_word, enumerate, inverse_mod, BruhatCell, DecompositionMethod,
    GroupVariant, Letter, Mat2Zn,
};

/// Largest `n` for which the exhaustive variants of the quadratic and cubic checks run.
pub const EXHAUSTIVE_LIMIT: u32 = 5;
/// Largest `n` for which every element of `H` is lifted.
pub const LIFT_LIMIT: u32 = 7;
/// Largest `n` for which the contraction suite generates the equation system.
pub const CONTRACTION_LIMIT: u32 = 7;
/// Two n = 3 equations written with unsorted indices; both must occur in the system.
pub const SEED_EQUATIONS: [&str; 2] = [
    "e[(0,2),(1,0)]*e[(0,1),(1,2)] - e[(1,0),(0,1)]*e[(0,2),(1,1)] = 0",
    "e[(1,0),(1,1)]*e[(0,1),(2,1)] - e[(1,1),(0,1)]*e[(1,0),(1,2)] = 0",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Pauli,
    Grading,
    Sl2,
    Normalizer,
    Cartan,
    Contractions,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Pauli,
        Suite::Grading,
        Suite::Cartan,
        Suite::Sl2,
        Suite::Normalizer,
        Suite::Contractions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Pauli => "pauli",
            Suite::Grading => "grading",
            Suite::Sl2 => "sl2",
            Suite::Normalizer => "normalizer",
            Suite::Cartan => "cartan",
            Suite::Contractions => "contractions",
        }
    }

    fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Self::EACH.to_vec(),
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::All]
            .into_iter()
            .chain(Suite::EACH)
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl Check {
    pub fn pass(name: &str, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: true,
            detail: detail.into(),
            counterexample: None,
        }
    }

    pub fn fail(name: &str, detail: impl Into<String>, counterexample: Value) -> Self {
        Self {
            name: name.into(),
            passed: false,
            detail: detail.into(),
            counterexample: Some(counterexample),
        }
    }

    /// Pass iff `failures` is empty; the first failure becomes the counterexample.
    fn from_failures(name: &str, checked: usize, what: &str, failures: Vec<Value>) -> Self {
        match failures.into_iter().next() {
            None => Self::pass(name, format!("{checked} {what} checked")),
            Some(first) => Self::fail(name, format!("failed among {checked} {what}"), first),
        }
    }

    fn expect_eq<T: PartialEq + fmt::Debug + Serialize>(name: &str, what: &str, expected: T, found: T) -> Self {
        if expected == found {
            Self::pass(name, format!("{what} = {found:?}"))
        } else {
            Self::fail(
                name,
                format!("{what}: expected {expected:?}, found {found:?}"),
                json!({ "expected": expected, "found": found }),
            )
        }
    }

    /// A failure caused by an error rather than a wrong value.
    fn errored(name: &str, err: &Error) -> Self {
        Self::fail(name, format!("error: {err}"), json!({ "error": err.to_string() }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub n: u32,
    pub checks: Vec<Check>,
    /// Observations that are reported but not checked, e.g. printed values that are not reproduced.
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub n: u32,
    pub max_n: u32,
    pub exec: Execution,
    pub seed: u64,
}

impl VerifyConfig {
    pub fn new(n: u32) -> Self {
        Self {
            n,
            max_n: crate::sl2zn::DEFAULT_MAX_N,
            exec: Execution::default(),
            seed: 0x5eed,
        }
    }
}

/// Run one suite, or all of them, at dimension `cfg.n`.
pub fn run(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    let n = cfg.n;
    if n < 2 {
        return Err(Error::InvalidInput(format!("n must be at least 2, got {n}")));
    }
    if n > cfg.max_n {
        return Err(Error::BoundExceeded { n, bound: cfg.max_n });
    }
    Ok(suite
        .expand()
        .into_iter()
        .map(|s| {
            let (checks, notes) = match s {
                Suite::Pauli => pauli_suite(cfg),
                Suite::Grading => grading_suite(cfg),
                Suite::Cartan => cartan_suite(cfg),
                Suite::Sl2 => sl2_suite(cfg),
                Suite::Normalizer => normalizer_suite(cfg),
                Suite::Contractions => contractions_suite(cfg),
                Suite::All => unreachable!("expanded above"),
            };
            SuiteReport {
                suite: s,
                n,
                checks,
                notes,
            }
        })
        .collect())
}

fn rng(cfg: &VerifyConfig, salt: u64) -> StdRng {
    StdRng::seed_from_u64(cfg.seed ^ (salt << 32) ^ cfg.n as u64)
}

/// All of `0..len` when exhaustive, otherwise `count` seeded random picks.
fn sample_indices(len: usize, exhaustive: bool, count: usize, rng: &mut StdRng) -> Vec<usize> {
    if exhaustive {
        (0..len).collect()
    } else {
        (0..count).map(|_| rng.gen_range(0..len)).collect()
    }
}

fn mat_json(m: &CycMatrix) -> Value {
    json!(m.to_strings())
}

fn pauli_json(x: &PauliElement) -> Value {
    json!([x.phase, x.qexp, x.pexp])
}

fn index_json(g: &GradingIndex) -> Value {
    json!([g.r, g.s])
}

fn h_json(h: &Mat2Zn) -> Value {
    json!(h.entries())
}

// ---------------------------------------------------------------------------
// pauli

fn pauli_suite(cfg: &VerifyConfig) -> (Vec<Check>, Vec<String>) {
    let n = cfg.n;
    let exec = cfg.exec;
    let exhaustive = n <= EXHAUSTIVE_LIMIT;
    let group: Vec<PauliElement> = enumerate_group(n).into_iter().collect();
    let g = group.len();
    let mut checks = vec![Check::expect_eq("group_order", "|Π_n|", (n as usize).pow(3), g)];

    let mut r = rng(cfg, 1);
    let triples: Vec<(usize, usize, usize)> = if exhaustive {
        (0..g)
            .flat_map(|i| (0..g).flat_map(move |j| (0..g).map(move |k| (i, j, k))))
            .collect()
    } else {
        (0..4000)
            .map(|_| (r.gen_range(0..g), r.gen_range(0..g), r.gen_range(0..g)))
            .collect()
    };
    let id = PauliElement::identity(n);
    let assoc = exec.filter_map(&triples, |&(i, j, k)| {
        let (x, y, z) = (&group[i], &group[j], &group[k]);
        (x.mul(y).mul(z) != x.mul(&y.mul(z)))
            .then(|| json!({ "x": pauli_json(x), "y": pauli_json(y), "z": pauli_json(z) }))
    });
    checks.push(Check::from_failures("associativity", triples.len(), "triples", assoc));
    let unit_inv: Vec<Value> = group
        .iter()
        .filter(|x| id.mul(x) != **x || x.mul(&id) != **x || !x.mul(&x.inverse()).is_identity() || !x.inverse().mul(x).is_identity())
        .map(pauli_json)
        .collect();
    checks.push(Check::from_failures("identity_and_inverse", g, "elements", unit_inv));

    let q = clock_matrix(n);
    let p = shift_matrix(n);
    let omega = omega_power(n, 1);
    checks.push(if p.mul(&q) == q.mul(&p).scale(&omega) {
        Check::pass("heisenberg", "P·Q = ω·Q·P")
    } else {
        Check::fail("heisenberg", "P·Q ≠ ω·Q·P", json!({ "PQ": mat_json(&p.mul(&q)), "wQP": mat_json(&q.mul(&p).scale(&omega)) }))
    });

    let mats: Vec<CycMatrix> = exec.map(&group, PauliElement::to_matrix);
    let pairs: Vec<(usize, usize)> = if exhaustive {
        (0..g).flat_map(|i| (0..g).map(move |j| (i, j))).collect()
    } else {
        (0..1000).map(|_| (r.gen_range(0..g), r.gen_range(0..g))).collect()
    };
    let hom = exec.filter_map(&pairs, |&(i, j)| {
        let (x, y) = (&group[i], &group[j]);
        (mats[i].mul(&mats[j]) != x.mul(y).to_matrix())
            .then(|| json!({ "x": pauli_json(x), "y": pauli_json(y) }))
    });
    checks.push(Check::from_failures("matrix_product", pairs.len(), "pairs", hom));
    let comm = exec.filter_map(&pairs, |&(i, j)| {
        let (x, y) = (&group[i], &group[j]);
        let e = x.pexp as i64 * y.qexp as i64 - x.qexp as i64 * y.pexp as i64;
        (mats[i].mul(&mats[j]) != mats[j].mul(&mats[i]).scale(&omega_power(n, e)))
            .then(|| json!({ "x": pauli_json(x), "y": pauli_json(y) }))
    });
    checks.push(Check::from_failures("commutation_phase", pairs.len(), "pairs", comm));

    if exhaustive {
        let distinct: HashSet<&CycMatrix> = mats.iter().collect();
        checks.push(Check::expect_eq("faithful", "distinct matrices", g, distinct.len()));
    }
    let central: Vec<Value> = group
        .iter()
        .zip(&mats)
        .filter(|(x, m)| !x.is_scalar() && (!x.central_power_check() || m.pow(n).as_scalar().is_none()))
        .map(|(x, _)| pauli_json(x))
        .collect();
    checks.push(Check::from_failures("central_power", g, "elements", central));

    checks.push(sylvester_check(n));
    checks.push(diagonal_check(n));
    checks.push(printed_sylvester_check(n));
    if is_prime(n) {
        checks.push(m_matrix_check(n));
    }
    (checks, Vec::new())
}

fn cleared(name: &str, rows: Vec<(&str, CycMatrix, CycMatrix)>) -> Check {
    let labels: Vec<&str> = rows.iter().map(|r| r.0).collect();
    for (label, lhs, rhs) in &rows {
        if lhs != rhs {
            return Check::fail(
                name,
                format!("{label} fails"),
                json!({ "identity": label, "lhs": mat_json(lhs), "rhs": mat_json(rhs) }),
            );
        }
    }
    Check::pass(name, labels.join("; "))
}

fn sylvester_check(n: u32) -> Check {
    let m = ring_order(n);
    let (q, p, s) = (clock_matrix(n), shift_matrix(n), build_sylvester(n));
    let nn = CyclotomicScalar::from_int(m, n);
    let p_inv = p.transpose();
    cleared(
        "sylvester_identities",
        vec![
            ("P·S = S·Q", p.mul(&s), s.mul(&q)),
            ("Q·S = S·P^-1", q.mul(&s), s.mul(&p_inv)),
            ("S·S* = n·I", s.mul(&build_sylvester_conjugate(n)), CycMatrix::scalar(n as usize, &nn)),
            ("S^2 = n·parity", s.pow(2), build_parity(n).scale(&nn)),
            ("S^4 = n^2·I", s.pow(4), CycMatrix::scalar(n as usize, &(&nn * &nn))),
        ],
    )
}

fn diagonal_check(n: u32) -> Check {
    let m = ring_order(n);
    let (q, p, d) = (clock_matrix(n), shift_matrix(n), build_diagonal_d(n));
    let eps = epsilon(n);
    cleared(
        "diagonal_identities",
        vec![
            ("D·D^-1 = I", d.mul(&build_diagonal_d_inverse(n)), CycMatrix::identity(n as usize, m)),
            ("Q·D = D·Q", q.mul(&d), d.mul(&q)),
            ("P·D = ε·D·Q·P", p.mul(&d), d.mul(&q).mul(&p).scale(&eps)),
        ],
    )
}

/// The Sylvester matrix with entries `ω^{-ij}` conjugates `P` to `Q^{-1}`, not to `Q`.
fn printed_sylvester_check(n: u32) -> Check {
    let (q, p, s) = (clock_matrix(n), shift_matrix(n), build_sylvester_conjugate(n));
    let q_inv = q.pow(n - 1);
    cleared(
        "conjugate_sylvester_orientation",
        vec![("P·S' = S'·Q^-1 for S' = (ω^-ij)", p.mul(&s), s.mul(&q_inv))],
    )
}

fn m_matrix_check(n: u32) -> Check {
    let (q, p) = (clock_matrix(n), shift_matrix(n));
    for s in 1..n as i64 {
        let ms = build_m(n, s).expect("prime n, nonzero s");
        let s_inv = inverse_mod(s, n).expect("prime n");
        if q.mul(&ms) != ms.mul(&q.pow(s as u32)) {
            return Check::fail("m_identities", format!("Q·M_{s} ≠ M_{s}·Q^{s}"), json!({ "s": s, "identity": "Q·M_s = M_s·Q^s" }));
        }
        if p.mul(&ms) != ms.mul(&p.pow(s_inv)) {
            return Check::fail("m_identities", format!("P·M_{s} ≠ M_{s}·P^{s_inv}"), json!({ "s": s, "identity": "P·M_s = M_s·P^(1/s)" }));
        }
    }
    Check::pass("m_identities", format!("Q·M_s = M_s·Q^s and P·M_s = M_s·P^(1/s) for s = 1..{}", n - 1))
}

// ---------------------------------------------------------------------------
// grading

fn grading_suite(cfg: &VerifyConfig) -> (Vec<Check>, Vec<String>) {
    let n = cfg.n;
    let exec = cfg.exec;
    let mut checks = Vec::new();
    for (name, mode) in [("closure_gl", AlgebraMode::Gl), ("closure_sl", AlgebraMode::Sl)] {
        let report = verify_grading_closure(n, mode, exec);
        let failures = report
            .mismatches
            .iter()
            .map(|mm| json!({ "a": index_json(&mm.a), "b": index_json(&mm.b), "expected": mm.expected }))
            .collect();
        checks.push(Check::from_failures(name, report.pairs_checked, "pairs", failures));
    }
    let all = indices(n, AlgebraMode::Gl);
    let pairs: Vec<(GradingIndex, GradingIndex)> = all.iter().flat_map(|a| all.iter().map(move |b| (*a, *b))).collect();
    let anti = exec.filter_map(&pairs, |(a, b)| {
        (structure_constant(a, b) != -structure_constant(b, a)).then(|| json!({ "a": index_json(a), "b": index_json(b) }))
    });
    checks.push(Check::from_failures("antisymmetry", pairs.len(), "pairs", anti));
    let sl_zero: Vec<Value> = pairs
        .iter()
        .filter(|(a, b)| !a.is_zero() && a.add(b).is_zero() && !structure_constant(a, b).is_zero())
        .map(|(a, b)| json!({ "a": index_json(a), "b": index_json(b) }))
        .collect();
    checks.push(Check::from_failures("sl_brackets_avoid_identity", pairs.len(), "pairs", sl_zero));

    let mut r = rng(cfg, 2);
    let g = all.len();
    let triples: Vec<(usize, usize, usize)> = if n <= EXHAUSTIVE_LIMIT {
        (0..g)
            .flat_map(|i| (0..g).flat_map(move |j| (0..g).map(move |k| (i, j, k))))
            .collect()
    } else {
        (0..3000)
            .map(|_| (r.gen_range(0..g), r.gen_range(0..g), r.gen_range(0..g)))
            .collect()
    };
    let jacobi = exec.filter_map(&triples, |&(i, j, k)| {
        let (x, y, z) = (GradedVector::basis(all[i]), GradedVector::basis(all[j]), GradedVector::basis(all[k]));
        let sum = bracket(&x, &bracket(&y, &z))
            .add(&bracket(&y, &bracket(&z, &x)))
            .add(&bracket(&z, &bracket(&x, &y)));
        (!sum.is_zero()).then(|| json!({ "triple": [index_json(&all[i]), index_json(&all[j]), index_json(&all[k])] }))
    });
    checks.push(Check::from_failures("jacobi", triples.len(), "triples", jacobi));

    let m = ring_order(n);
    let traces: Vec<Value> = all
        .iter()
        .filter(|a| {
            let expected = if a.is_zero() { CyclotomicScalar::from_int(m, n) } else { CyclotomicScalar::zero(m) };
            a.matrix().trace() != expected
        })
        .map(index_json)
        .collect();
    checks.push(Check::from_failures("traces", all.len(), "basis elements", traces));
    (checks, Vec::new())
}

// ---------------------------------------------------------------------------
// cartan

fn cartan_suite(cfg: &VerifyConfig) -> (Vec<Check>, Vec<String>) {
    let n = cfg.n;
    let lines = match cartan_lines(n) {
        Ok(lines) => lines,
        Err(Error::NotPrime { .. }) => {
            return (
                Vec::new(),
                vec![format!("the Cartan decomposition is only constructed for prime n; n = {n} skipped")],
            )
        }
        Err(e) => return (vec![Check::errored("cartan_lines", &e)], Vec::new()),
    };
    let mut checks = vec![Check::expect_eq("line_count", "lines", n as usize + 1, lines.len())];
    let sizes: Vec<Value> = lines
        .iter()
        .filter(|l| l.indices.len() != n as usize - 1)
        .map(|l| json!({ "direction": index_json(&l.direction), "size": l.indices.len() }))
        .collect();
    checks.push(Check::from_failures("line_size", lines.len(), "lines", sizes));
    let covered: BTreeSet<GradingIndex> = lines.iter().flat_map(|l| l.indices.iter().copied()).collect();
    let total: usize = lines.iter().map(|l| l.indices.len()).sum();
    let nonzero: BTreeSet<GradingIndex> = indices(n, AlgebraMode::Sl).into_iter().collect();
    checks.push(if covered == nonzero && total == nonzero.len() {
        Check::pass("partition", format!("{total} nonzero indices covered exactly once"))
    } else {
        Check::fail(
            "partition",
            "lines do not partition the nonzero indices",
            json!({ "covered": covered.len(), "with_multiplicity": total, "nonzero": nonzero.len() }),
        )
    });
    let mut inside = Vec::new();
    for l in &lines {
        for a in &l.indices {
            for b in &l.indices {
                if !structure_constant(a, b).is_zero() || a.matrix().mul(&b.matrix()) != b.matrix().mul(&a.matrix()) {
                    inside.push(json!({ "a": index_json(a), "b": index_json(b) }));
                }
            }
        }
    }
    checks.push(Check::from_failures("commuting_lines", lines.len(), "lines", inside));
    let mut across = Vec::new();
    for (i, l1) in lines.iter().enumerate() {
        for l2 in &lines[i + 1..] {
            let linked = l1
                .indices
                .iter()
                .any(|a| l2.indices.iter().any(|b| !structure_constant(a, b).is_zero()));
            if !linked {
                across.push(json!({ "line": index_json(&l1.direction), "other": index_json(&l2.direction) }));
            }
        }
    }
    checks.push(Check::from_failures("maximal", lines.len() * (lines.len() - 1) / 2, "line pairs", across));
    (checks, Vec::new())
}

// ---------------------------------------------------------------------------
// sl2

/// `|SL(2,Z_n)| = n^3 · Π_{p | n} (1 − 1/p^2)`.
pub fn sl2_order_formula(n: u32) -> u64 {
    let mut order = (n as u64).pow(3);
    let mut rest = n;
    let mut p = 2;
    while rest > 1 {
        if rest.is_multiple_of(p) {
            order = order / (p as u64 * p as u64) * (p as u64 * p as u64 - 1);
            while rest.is_multiple_of(p) {
                rest /= p;
            }
        }
        p += 1;
    }
    order
}

fn sl2_suite(cfg: &VerifyConfig) -> (Vec<Check>, Vec<String>) {
    let n = cfg.n;
    let exec = cfg.exec;
    let mut notes = Vec::new();
    let (sl, h) = match (
        enumerate(n, GroupVariant::Sl, cfg.max_n, exec),
        enumerate(n, GroupVariant::H, cfg.max_n, exec),
    ) {
        (Ok(sl), Ok(h)) => (sl, h),
        (Err(e), _) | (_, Err(e)) => return (vec![Check::errored("enumerate", &e)], notes),
    };
    let mut checks = vec![Check::expect_eq("sl_order", "|SL(2,Z_n)|", sl2_order_formula(n), sl.len() as u64)];
    let expected_h = if n == 2 { sl.len() } else { 2 * sl.len() };
    checks.push(Check::expect_eq("h_order", "|H|", expected_h, h.len()));
    if n == 2 {
        notes.push(format!(
            "the printed count of 24 elements for n = 2 is not reproduced: enumeration gives |SL(2,Z_2)| = |H| = {}",
            sl.len()
        ));
    }
    let refl = Mat2Zn::reflection(n);
    let union: BTreeSet<Mat2Zn> = sl.iter().flat_map(|x| [*x, refl.mul(x)]).collect();
    let h_set: BTreeSet<Mat2Zn> = h.iter().copied().collect();
    checks.push(if union == h_set {
        Check::pass("h_is_sl_and_coset", "H = SL ∪ diag(-1,1)·SL")
    } else {
        let extra = union.symmetric_difference(&h_set).next().copied().expect("sets differ");
        Check::fail("h_is_sl_and_coset", "H ≠ SL ∪ diag(-1,1)·SL", h_json(&extra))
    });
    let order_b = if n == 2 { 2 } else { 4 };
    let orders = (Mat2Zn::gen_a(n).element_order(), Mat2Zn::gen_b(n).element_order());
    checks.push(match orders {
        (Ok(a), Ok(b)) => Check::expect_eq("generator_orders", "(ord A, ord B)", (n as u64, order_b), (a, b)),
        (Err(e), _) | (_, Err(e)) => Check::errored("generator_orders", &e),
    });

    let mut r = rng(cfg, 3);
    let picks = sample_indices(sl.len(), n <= LIFT_LIMIT, 1000, &mut r);
    let results = exec.map(&picks, |&i| (i, decompose_to_word(&sl[i])));
    let mut failures = Vec::new();
    let mut searched = 0;
    for (i, res) in &results {
        match res {
            Ok(d) if d.word.eval(n) == sl[*i] => {
                if d.method == DecompositionMethod::Search {
                    searched += 1;
                }
            }
            Ok(d) => failures.push(json!({ "matrix": h_json(&sl[*i]), "word": d.word.to_string() })),
            Err(e) => failures.push(json!({ "matrix": h_json(&sl[*i]), "error": e.to_string() })),
        }
    }
    let mut check = Check::from_failures("word_round_trip", picks.len(), "elements", failures);
    if check.passed {
        check.detail = format!("{}; {searched} needed the search fallback", check.detail);
    }
    checks.push(check);

    let reach = cayley_reachable(n);
    checks.push(Check::expect_eq("generated_by_a_b", "|⟨A, B⟩|", sl.len(), reach));

    if is_prime(n) {
        let cells = exec.map(&sl, |x| bruhat_decompose(x).map(|c| (c, c.eval(n) == *x)));
        let mut small = 0usize;
        let mut big = 0usize;
        let mut bad = Vec::new();
        for (x, c) in sl.iter().zip(cells) {
            match c {
                Ok((BruhatCell::Small { .. }, true)) => small += 1,
                Ok((BruhatCell::Big { .. }, true)) => big += 1,
                Ok((cell, false)) => bad.push(json!({ "matrix": h_json(x), "cell": cell.to_string() })),
                Err(e) => bad.push(json!({ "matrix": h_json(x), "error": e.to_string() })),
            }
        }
        let p = n as usize;
        checks.push(if !bad.is_empty() {
            Check::fail("bruhat_cells", "decomposition failed", bad.swap_remove(0))
        } else {
            Check::expect_eq("bruhat_cells", "(small, big)", (p * (p - 1), p * p * (p - 1)), (small, big))
        });
    }
    (checks, notes)
}

fn cayley_reachable(n: u32) -> usize {
    let start = Mat2Zn::identity(n);
    let gens = [Letter::A.matrix(n), Letter::B.matrix(n)];
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = x.mul(g);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen.len()
}

// ---------------------------------------------------------------------------
// normalizer

fn normalizer_suite(cfg: &VerifyConfig) -> (Vec<Check>, Vec<String>) {
    let n = cfg.n;
    let exec = cfg.exec;
    let mut notes = Vec::new();
    let mut checks = vec![generator_images_check(n)];
    checks.push(pauli_phase_check(n));
    checks.push(out_i_check(n));

    let h = match enumerate(n, GroupVariant::H, cfg.max_n, exec) {
        Ok(h) => h,
        Err(e) => {
            checks.push(Check::errored("enumerate", &e));
            return (checks, notes);
        }
    };
    let mut r = rng(cfg, 4);
    let picks = sample_indices(h.len(), n <= LIFT_LIMIT, 60, &mut r);
    let lifted: Vec<(Mat2Zn, Result<AutomorphismLift>)> = exec.map(&picks, |&i| (h[i], lift_of(&h[i])));
    let mut failures = Vec::new();
    let mut lifts = Vec::new();
    for (x, l) in lifted {
        match l {
            Ok(l) => lifts.push((x, l)),
            Err(e) => failures.push(json!({ "matrix": h_json(&x), "error": e.to_string() })),
        }
    }
    checks.push(Check::from_failures("surjectivity", picks.len(), "elements of H", failures));
    if lifts.is_empty() {
        return (checks, notes);
    }

    let parity: Vec<Value> = lifts
        .iter()
        .filter(|(x, l)| l.is_outer() == x.is_sl() && n > 2)
        .map(|(x, _)| h_json(x))
        .collect();
    checks.push(Check::from_failures("determinant_parity", lifts.len(), "lifts", parity));

    // full index actions cost n^2 conjugations each; larger n uses a sample
    let acting = sample_indices(lifts.len(), n <= EXHAUSTIVE_LIMIT, 48, &mut r);
    let actions: Vec<(Mat2Zn, bool, Result<IndexAction>)> = exec.map(&acting, |&i| {
        let (x, l) = &lifts[i];
        (*x, l.is_outer(), l.index_action())
    });
    let mut inner_bad = Vec::new();
    let mut outer_bad = Vec::new();
    let mut outer_plain = 0usize;
    let mut outer_total = 0usize;
    for (x, outer, a) in &actions {
        match a {
            Err(e) => inner_bad.push(json!({ "matrix": h_json(x), "error": e.to_string() })),
            Ok(a) if !a.is_bijection() => inner_bad.push(json!({ "matrix": h_json(x), "reason": "not a bijection" })),
            Ok(a) if !*outer => {
                if !a.matches_right_multiplication() {
                    inner_bad.push(json!({ "matrix": h_json(x), "reason": "not (r,s)·Φ" }));
                }
            }
            Ok(a) => {
                outer_total += 1;
                if a.matches_right_multiplication() {
                    outer_plain += 1;
                }
                if !a.matches_negated_right_multiplication() {
                    outer_bad.push(json!({ "matrix": h_json(x), "reason": "not -(r,s)·Φ" }));
                }
            }
        }
    }
    checks.push(Check::from_failures("inner_index_action", actions.len(), "lifts", inner_bad));
    if outer_total > 0 {
        checks.push(Check::from_failures("outer_index_action", outer_total, "outer lifts", outer_bad));
        notes.push(format!(
            "outer lifts act on indices by (r,s) -> -(r,s)·Phi; the inner formula (r,s) -> (r,s)·Phi holds for {outer_plain} of {outer_total} outer lifts"
        ));
    }
    notes.push(
        "with phi(X) = A^-1·X·A, Ad_Q scales X_rs by w^s and Ad_P by w^-r".to_string(),
    );

    let pairs: Vec<(usize, usize)> = (0..200)
        .map(|_| (r.gen_range(0..lifts.len()), r.gen_range(0..lifts.len())))
        .collect();
    let hom = exec.filter_map(&pairs, |&(i, j)| {
        let (x, f) = &lifts[i];
        let (y, g) = &lifts[j];
        let ok = f.compose(g).and_then(|fg| fg.phi()).map(|p| p == x.mul(y));
        (!matches!(ok, Ok(true))).then(|| json!({ "f": h_json(x), "g": h_json(y) }))
    });
    checks.push(Check::from_failures("homomorphism", pairs.len(), "pairs", hom));

    let group: Vec<PauliElement> = enumerate_group(n).into_iter().collect();
    let probes: Vec<(usize, usize)> = (0..lifts.len().min(40))
        .map(|_| (r.gen_range(0..lifts.len()), r.gen_range(0..group.len())))
        .collect();
    let inj = exec.filter_map(&probes, |&(i, k)| {
        let (x, f) = &lifts[i];
        let twisted = f.compose(&AutomorphismLift::ad_pauli(&group[k]));
        let alternative = lift_canonical(x);
        let ok = [twisted, alternative].into_iter().all(|g| {
            g.and_then(|g| f.compose(&g.inverse_lift()))
                .and_then(|d| Ok((d.phi()?, d.index_action()?)))
                .map(|(phi, act)| phi.is_identity() && act.is_identity_permutation())
                .unwrap_or(false)
        });
        (!ok).then(|| json!({ "matrix": h_json(x), "pauli": pauli_json(&group[k]) }))
    });
    checks.push(Check::from_failures("injective_modulo_pauli", probes.len(), "lift pairs", inj));
    (checks, notes)
}

fn generator_images_check(n: u32) -> Check {
    let mut expected: Vec<(String, Result<AutomorphismLift>, Mat2Zn)> = vec![
        ("S".into(), Ok(AutomorphismLift::ad_s(n)), Mat2Zn::new(n, 0, -1, 1, 0)),
        ("D".into(), Ok(AutomorphismLift::ad_d(n)), Mat2Zn::new(n, 1, 0, 1, 1)),
        ("Out_I".into(), Ok(AutomorphismLift::out_i(n)), Mat2Zn::new(n, -1, 0, 0, 1)),
        ("Q".into(), Ok(AutomorphismLift::ad_q(n)), Mat2Zn::identity(n)),
        ("P".into(), Ok(AutomorphismLift::ad_p(n)), Mat2Zn::identity(n)),
    ];
    if is_prime(n) {
        for s in 1..n as i64 {
            let inv = inverse_mod(s, n).expect("prime n") as i64;
            expected.push((format!("M_{s}"), AutomorphismLift::ad_m(n, s), Mat2Zn::diag(n, s, inv)));
        }
    }
    let total = expected.len();
    let failures = expected
        .into_iter()
        .filter_map(|(name, lift, want)| {
            let got = lift.and_then(|l| l.phi());
            match got {
                Ok(g) if g == want => None,
                Ok(g) => Some(json!({ "generator": name, "expected": h_json(&want), "found": h_json(&g) })),
                Err(e) => Some(json!({ "generator": name, "error": e.to_string() })),
            }
        })
        .collect();
    Check::from_failures("generator_images", total, "generators", failures)
}

fn pauli_phase_check(n: u32) -> Check {
    let m = ring_order(n);
    let res = (|| -> Result<Vec<Value>> {
        let q = AutomorphismLift::ad_q(n).index_action()?;
        let p = AutomorphismLift::ad_p(n).index_action()?;
        let mut bad = Vec::new();
        for idx in indices(n, AlgebraMode::Gl) {
            let wq = UnitRoot::canonical(m, 1, 2 * idx.s);
            let wp = UnitRoot::canonical(m, 1, (2 * (n - idx.r)) % m);
            if q.image(&idx) != idx || p.image(&idx) != idx || q.phase(&idx) != wq || p.phase(&idx) != wp {
                bad.push(index_json(&idx));
            }
        }
        Ok(bad)
    })();
    match res {
        Ok(bad) => Check::from_failures("pauli_phases", (n * n) as usize, "basis elements", bad),
        Err(e) => Check::errored("pauli_phases", &e),
    }
}

fn out_i_check(n: u32) -> Check {
    let lift = AutomorphismLift::out_i(n);
    let mut bad = Vec::new();
    for idx in indices(n, AlgebraMode::Gl) {
        let expected_index = GradingIndex::new(n, idx.r as i64, -(idx.s as i64));
        let expected_phase = -omega_power(n, -(idx.r as i64) * idx.s as i64);
        match lift.basis_image(idx) {
            Ok((i, rho)) if i == expected_index && rho == expected_phase => {}
            Ok((i, rho)) => bad.push(json!({ "index": index_json(&idx), "image": index_json(&i), "phase": rho.to_string() })),
            Err(e) => bad.push(json!({ "index": index_json(&idx), "error": e.to_string() })),
        }
    }
    Check::from_failures("out_i_action", (n * n) as usize, "basis elements", bad)
}

// ---------------------------------------------------------------------------
// contractions

/// `C(k, 3)`.
fn choose3(k: u64) -> u64 {
    if k < 3 {
        0
    } else {
        k * (k - 1) * (k - 2) / 6
    }
}

fn contractions_suite(cfg: &VerifyConfig) -> (Vec<Check>, Vec<String>) {
    let n = cfg.n;
    let exec = cfg.exec;
    let mut notes = Vec::new();
    if n > CONTRACTION_LIMIT {
        notes.push(format!("contraction suite skipped for n > {CONTRACTION_LIMIT}"));
        return (Vec::new(), notes);
    }
    let system = match equation_system(n, exec) {
        Ok(s) => s,
        Err(e) => return (vec![Check::errored("equation_system", &e)], notes),
    };
    let nonzero = (n * n - 1) as u64;
    let mut checks = vec![Check::expect_eq("triple_count", "triples", choose3(nonzero), system.triples as u64)];
    let zero_sum: Vec<Value> = enumerate_triples(n)
        .iter()
        .filter(|t| t.sum().is_zero() && jacobi_equation(t).is_some())
        .map(|t| json!(t))
        .collect();
    checks.push(Check::from_failures("zero_sum_triples_vanish", system.triples, "triples", zero_sum));
    checks.push(rotation_check(&system, exec));

    if n == 3 {
        checks.push(Check::expect_eq(
            "system_counts",
            "(triples, vanishing, equations, parameters)",
            (56, 8, 48, 28),
            (system.triples, system.vanishing_triples, system.len(), system.parameter_count),
        ));
        notes.push(format!(
            "{} of the {} parameters occur in some equation; the others pair an index with its negative",
            system.parameters.len(),
            system.parameter_count
        ));
        checks.push(seed_check(&system));
        let unit: Vec<Value> = system
            .equations()
            .filter(|e| {
                let coeffs: Vec<Option<BigInt>> = e.terms.iter().map(|t| t.coeff.as_integer()).collect();
                !(e.unit_normalized && coeffs == [Some(BigInt::from(1)), Some(BigInt::from(-1))])
            })
            .map(|e| json!(e.to_string()))
            .collect();
        checks.push(Check::from_failures("two_term_unit_coefficients", system.len(), "equations", unit));
    }

    if n <= EXHAUSTIVE_LIMIT {
        for (variant, label) in [(GroupVariant::Sl, "sl"), (GroupVariant::H, "h")] {
            let actions = match crate::normalizer::group_index_actions(n, variant, cfg.max_n, exec) {
                Ok(a) => a,
                Err(e) => {
                    checks.push(Check::errored(&format!("{label}_actions"), &e));
                    continue;
                }
            };
            checks.push(paths_agree_check(&system, &actions, label, cfg));
            match orbits(&system, &actions, exec) {
                Ok(orbs) => {
                    let sizes: Vec<usize> = orbs.iter().map(|o| o.len()).collect();
                    if n == 3 && variant == GroupVariant::Sl {
                        checks.push(Check::expect_eq("sl_orbits", "orbit sizes", vec![24, 24], sizes.clone()));
                    }
                    notes.push(format!("orbit sizes under {} index actions: {sizes:?}", label.to_uppercase()));
                }
                Err(e) => checks.push(Check::errored(&format!("{label}_closure"), &e)),
            }
        }
    } else {
        notes.push(format!("orbit computation skipped for n > {EXHAUSTIVE_LIMIT}"));
    }
    (checks, notes)
}

fn rotation_check(system: &EquationSystem, exec: Execution) -> Check {
    let failures = exec.filter_map(&system.entries, |entry| {
        let [a, b, c] = entry.triples[0].0;
        let orders = [[a, b, c], [b, c, a], [c, a, b], [b, a, c], [a, c, b], [c, b, a]];
        let bad = orders.iter().any(|[x, y, z]| {
            let raw = jacobi_terms(x, y, z).into_iter().filter(|(k, _)| !k.is_zero());
            ContractionEquation::canonicalize(system.n, raw).as_ref() != Some(&entry.equation)
        });
        bad.then(|| json!(entry.triples[0]))
    });
    Check::from_failures("triple_order_invariance", system.len(), "equations", failures)
}

fn seed_check(system: &EquationSystem) -> Check {
    let failures: Vec<Value> = SEED_EQUATIONS
        .iter()
        .filter(|text| {
            !matches!(ContractionEquation::parse(system.n, text), Ok(Some(eq)) if system.contains(&eq))
        })
        .map(|text| json!(text))
        .collect();
    Check::from_failures("seed_equations_present", SEED_EQUATIONS.len(), "seed equations", failures)
}

/// Exhaustive for n = 3, 4000 seeded samples otherwise.
fn paths_agree_check(system: &EquationSystem, actions: &[IndexAction], label: &str, cfg: &VerifyConfig) -> Check {
    let exec = cfg.exec;
    let pairs: Vec<(usize, usize)> = if system.n <= 3 {
        (0..system.len())
            .flat_map(|i| (0..actions.len()).map(move |g| (i, g)))
            .collect()
    } else {
        let mut r = rng(cfg, 5);
        (0..4000)
            .map(|_| (r.gen_range(0..system.len()), r.gen_range(0..actions.len())))
            .collect()
    };
    let failures = exec.filter_map(&pairs, |&(i, g)| {
        let entry = &system.entries[i];
        let regenerated = act_on_equation(&actions[g], entry);
        let relabeled = relabel_equation(&actions[g], &entry.equation);
        let ok = matches!(&regenerated, Ok(eq) if *eq == relabeled && system.contains(eq));
        (!ok).then(|| json!({ "triple": entry.triples[0], "phi": h_json(&actions[g].phi) }))
    });
    Check::from_failures(&format!("{label}_action_paths_agree"), pairs.len(), "equation images", failures)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in [Suite::All].into_iter().chain(Suite::EACH) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn sl2_formula() {
        assert_eq!(sl2_order_formula(2), 6);
        assert_eq!(sl2_order_formula(3), 24);
        assert_eq!(sl2_order_formula(4), 48);
        assert_eq!(sl2_order_formula(6), 144);
    }

    #[test]
    fn small_suites_pass() {
        let cfg = VerifyConfig::new(2);
        for report in run(Suite::All, &cfg).unwrap() {
            for c in &report.checks {
                assert!(c.passed, "{} {}: {} {:?}", report.suite, c.name, c.detail, c.counterexample);
            }
        }
    }

    #[test]
    fn bounds() {
        assert!(matches!(run(Suite::Pauli, &VerifyConfig::new(1)), Err(Error::InvalidInput(_))));
        assert!(matches!(run(Suite::Pauli, &VerifyConfig::new(14)), Err(Error::BoundExceeded { .. })));
    }
}
