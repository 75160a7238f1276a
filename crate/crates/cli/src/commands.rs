use std::collections::BTreeSet;

use pauli_grading::contractions::{equation_system, orbits, EquationSystem, Triple};
use pauli_grading::cyclotomic::ring_order;
use pauli_grading::grading::{cartan_lines, indices, structure_constant, verify_grading_closure};
use pauli_grading::normalizer::{group_index_actions, lift_canonical};
use pauli_grading::sl2zn::{bruhat_decompose, decompose_to_word, DecompositionMethod};
use pauli_grading::verify::{self, Check, Suite, VerifyConfig};
use pauli_grading::{
    AlgebraMode, AutomorphismLift, Error, Execution, GradingIndex, GroupVariant, Mat2Zn,
};
use serde_json::{json, Value};
use thiserror::Error;

use crate::report::Section;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotInNormalizer(_) | Error::Internal(_) => CliError::Failed(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

pub type Outcome = Result<(Vec<Section>, Value), CliError>;

#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub n: u32,
    pub max_n: Option<u32>,
    pub exec: Execution,
}

impl Context {
    /// Rejects `n` above the enumerative bound; `default` applies without `--max-n`.
    fn bounded(&self, default: u32) -> Result<u32, CliError> {
        let bound = self.max_n.unwrap_or(default);
        if self.n > bound {
            return Err(Error::BoundExceeded { n: self.n, bound }.into());
        }
        Ok(bound)
    }
}

fn ij(g: &GradingIndex) -> Value {
    json!([g.r, g.s])
}

fn triple_json(t: &Triple) -> Value {
    Value::Array(t.0.iter().map(ij).collect())
}

fn passes(name: &str, ok: bool, detail: String, counterexample: impl FnOnce() -> Value) -> Check {
    if ok {
        Check::pass(name, detail)
    } else {
        Check::fail(name, detail, counterexample())
    }
}

pub fn verify(ctx: &Context, suite: Suite) -> Outcome {
    let mut cfg = VerifyConfig::new(ctx.n);
    cfg.exec = ctx.exec;
    cfg.max_n = ctx.bounded(cfg.max_n)?;
    let reports = verify::run(suite, &cfg)?;
    Ok((reports.into_iter().map(Section::from).collect(), Value::Null))
}

pub fn sl2_order(ctx: &Context, matrix: &str) -> Outcome {
    let x = Mat2Zn::parse(ctx.n, matrix)?;
    let order = x.element_order()?;
    let back = x.pow(order as i64)?;
    let check = passes(
        "power_is_identity",
        back.is_identity(),
        format!("x^{order} = I"),
        || json!({ "power": back.entries() }),
    );
    let data = json!({ "kind": "sl2_order", "matrix": x.entries(), "det": x.det(), "order": order });
    Ok((vec![Section::new("sl2", vec![check])], data))
}

pub fn sl2_decompose(ctx: &Context, matrix: &str) -> Outcome {
    let x = Mat2Zn::parse(ctx.n, matrix)?;
    let d = decompose_to_word(&x)?;
    let back = d.word.eval(ctx.n);
    let check = passes(
        "word_evaluates",
        back == x,
        format!("{} evaluates to the input", d.word),
        || json!({ "evaluated": back.entries() }),
    );
    let method = match d.method {
        DecompositionMethod::Euclid => "euclid",
        DecompositionMethod::Search => "search",
    };
    let data = json!({
        "kind": "sl2_decompose",
        "matrix": x.entries(),
        "word": d.word.to_string(),
        "method": method,
    });
    Ok((vec![Section::new("sl2", vec![check])], data))
}

pub fn sl2_bruhat(ctx: &Context, matrix: &str) -> Outcome {
    let x = Mat2Zn::parse(ctx.n, matrix)?;
    let cell = bruhat_decompose(&x)?;
    let back = cell.eval(ctx.n);
    let check = passes(
        "cell_evaluates",
        back == x,
        format!("{cell} evaluates to the input"),
        || json!({ "evaluated": back.entries() }),
    );
    let data = json!({ "kind": "sl2_bruhat", "matrix": x.entries(), "cell": cell });
    Ok((vec![Section::new("sl2", vec![check])], data))
}

/// With `outer`, the lift is `Out_I` followed by a lift of `diag(-1,1)·h`,
/// which is an outer lift with the same `Φ`.
pub fn lift(ctx: &Context, matrix: &str, outer: bool) -> Outcome {
    let n = ctx.n;
    let h = Mat2Zn::parse(n, matrix)?;
    if !h.is_in_h() {
        return Err(Error::WrongDeterminant {
            det: h.det() as u64,
            n,
            expected: "±1",
        }
        .into());
    }
    let lift = if !outer {
        lift_canonical(&h)?
    } else if n > 2 && h.is_sl() {
        return Err(CliError::Usage(format!(
            "an outer lift of {h} does not exist; outer lifts have determinant -1"
        )));
    } else {
        let rest = lift_canonical(&Mat2Zn::reflection(n).mul(&h))?;
        let composed = AutomorphismLift::out_i(n).compose(&rest)?;
        if composed.is_outer() {
            composed
        } else {
            rest
        }
    };
    let phi = lift.phi()?;
    let action = lift.index_action()?;
    let m = ring_order(n);
    let lambda = lift.scale().unit.to_scalar(m).scale(&lift.scale().factor);
    let checks = vec![
        passes(
            "phi_round_trip",
            phi == h,
            format!("Phi(lift) = {phi}"),
            || json!({ "expected": h.entries(), "found": phi.entries() }),
        ),
        passes(
            "scaled_inverse",
            lift.scaled_inverse().mul(lift.matrix()) == pauli_grading::CycMatrix::identity(n as usize, m).scale(&lambda),
            format!("A*·A = ({lambda})·I"),
            || json!({ "lambda": lambda.to_string() }),
        ),
        passes(
            "index_permutation",
            action.is_bijection(),
            format!("{} basis elements permuted", n * n),
            || json!({ "reason": "not a bijection" }),
        ),
        passes(
            "outer_iff_requested",
            !outer || lift.is_outer(),
            format!("lift is {}", if lift.is_outer() { "outer" } else { "inner" }),
            || json!({ "outer": lift.is_outer() }),
        ),
    ];
    let images: Vec<Value> = action
        .images()
        .map(|(idx, img)| {
            json!({
                "index": ij(idx),
                "image": ij(&img.index),
                "phase": img.phase.to_scalar(m).to_string(),
            })
        })
        .collect();
    let data = json!({
        "kind": "lift",
        "n": n,
        "input": h.entries(),
        "det": h.det(),
        "outer": lift.is_outer(),
        "provenance": lift.provenance(),
        "phi": phi.entries(),
        "matrix": lift.matrix().to_strings(),
        "scaled_inverse": lift.scaled_inverse().to_strings(),
        "scale": lambda.to_string(),
        "index_action": images,
    });
    Ok((vec![Section::new("lift", checks)], data))
}

pub fn grading(ctx: &Context) -> Outcome {
    let n = ctx.n;
    if n < 2 {
        return Err(CliError::Usage(format!("n must be at least 2, got {n}")));
    }
    ctx.bounded(pauli_grading::sl2zn::DEFAULT_MAX_N)?;
    let report = verify_grading_closure(n, AlgebraMode::Sl, ctx.exec);
    let closure = passes(
        "closure",
        report.passed(),
        format!("{} commutators equal c(a,b)·X(a+b)", report.pairs_checked),
        || serde_json::to_value(&report.mismatches[0]).unwrap_or(Value::Null),
    );
    let idx = indices(n, AlgebraMode::Sl);
    let mut table = Vec::new();
    for (i, a) in idx.iter().enumerate() {
        for b in &idx[i + 1..] {
            table.push(json!({
                "a": ij(a),
                "b": ij(b),
                "sum": ij(&a.add(b)),
                "constant": structure_constant(a, b).to_string(),
            }));
        }
    }
    let data = json!({ "kind": "grading", "n": n, "ring_order": ring_order(n), "table": table });
    Ok((vec![Section::new("grading", vec![closure])], data))
}

pub fn cartan(ctx: &Context) -> Outcome {
    let n = ctx.n;
    let lines = cartan_lines(n)?;
    let mut seen = BTreeSet::new();
    let mut overlap = None;
    let mut noncommuting = None;
    for line in &lines {
        for a in &line.indices {
            if !seen.insert(*a) && overlap.is_none() {
                overlap = Some(ij(a));
            }
            for b in &line.indices {
                if !structure_constant(a, b).is_zero() && noncommuting.is_none() {
                    noncommuting = Some(json!([ij(a), ij(b)]));
                }
            }
        }
    }
    let nonzero = (n * n - 1) as usize;
    let checks = vec![
        passes(
            "line_count",
            lines.len() == n as usize + 1,
            format!("{} lines", lines.len()),
            || json!({ "expected": n + 1, "found": lines.len() }),
        ),
        passes(
            "partition",
            overlap.is_none() && seen.len() == nonzero,
            format!("{} of {nonzero} nonzero indices covered once", seen.len()),
            || overlap.clone().unwrap_or(json!({ "covered": seen.len() })),
        ),
        passes(
            "commuting",
            noncommuting.is_none(),
            "structure constants vanish within each line".into(),
            || noncommuting.clone().unwrap_or(Value::Null),
        ),
    ];
    let data = json!({
        "kind": "cartan",
        "n": n,
        "lines": lines.iter().map(|l| json!({
            "direction": ij(&l.direction),
            "indices": l.indices.iter().map(ij).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    Ok((vec![Section::new("cartan", checks)], data))
}

fn system(ctx: &Context) -> Result<EquationSystem, CliError> {
    ctx.bounded(verify::CONTRACTION_LIMIT)?;
    Ok(equation_system(ctx.n, ctx.exec)?)
}

pub fn equations(ctx: &Context) -> Outcome {
    let sys = system(ctx)?;
    let generated: usize = sys.entries.iter().map(|e| e.triples.len()).sum();
    let check = passes(
        "triples_accounted",
        generated + sys.vanishing_triples == sys.triples,
        format!("{generated} generating + {} vanishing = {} triples", sys.vanishing_triples, sys.triples),
        || json!({ "generating": generated, "vanishing": sys.vanishing_triples, "triples": sys.triples }),
    );
    let equations: Vec<Value> = sys
        .entries
        .iter()
        .map(|e| {
            json!({
                "text": e.equation.to_string(),
                "terms": e.equation.terms,
                "unit_normalized": e.equation.unit_normalized,
                "triples": e.triples.iter().map(triple_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    let data = json!({
        "kind": "equation_system",
        "n": sys.n,
        "triples": sys.triples,
        "vanishing_triples": sys.vanishing_triples,
        "zero_sum_triples": sys.zero_sum_triples,
        "parameter_count": sys.parameter_count,
        "parameters": sys.parameters,
        "equations": equations,
    });
    Ok((vec![Section::new("contractions", vec![check])], data))
}

pub fn orbit_report(ctx: &Context) -> Outcome {
    let sys = system(ctx)?;
    let mut checks = Vec::new();
    let mut partitions = Vec::new();
    for (name, variant) in [("sl", GroupVariant::Sl), ("h", GroupVariant::H)] {
        let group = group_index_actions(ctx.n, variant, verify::CONTRACTION_LIMIT.max(ctx.n), ctx.exec)?;
        let parts = orbits(&sys, &group, ctx.exec)?;
        let covered: usize = parts.iter().map(|o| o.len()).sum();
        checks.push(passes(
            &format!("{name}_partition"),
            covered == sys.len(),
            format!("{} orbits cover {covered} of {} equations", parts.len(), sys.len()),
            || json!({ "covered": covered, "equations": sys.len() }),
        ));
        if ctx.n == 3 && variant == GroupVariant::Sl {
            let sizes: Vec<usize> = parts.iter().map(|o| o.len()).collect();
            checks.push(passes(
                "sl_two_orbits",
                sizes == [24, 24],
                format!("orbit sizes {sizes:?}"),
                || json!({ "expected": [24, 24], "found": sizes }),
            ));
        }
        partitions.push(json!({
            "group": name,
            "group_order": group.len(),
            "orbits": parts.iter().enumerate().map(|(k, o)| json!({
                "orbit": k,
                "size": o.len(),
                "members": o.members,
                "triples": o.triples.iter().map(triple_json).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }));
    }
    let data = json!({
        "kind": "orbit_report",
        "n": sys.n,
        "equations": sys.len(),
        "partitions": partitions,
    });
    Ok((vec![Section::new("orbits", checks)], data))
}
