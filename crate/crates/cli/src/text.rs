//! Human-readable rendering. Everything here reads the JSON form of the
//! report, so the text output carries no information the JSON lacks.

use std::fmt::Write;

use serde_json::Value;

fn s(v: &Value) -> String {
    match v {
        Value::String(x) => x.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn index(v: &Value) -> String {
    format!("({},{})", s(&v[0]), s(&v[1]))
}

fn indices(v: &Value) -> String {
    v.as_array()
        .map(|xs| xs.iter().map(index).collect::<Vec<_>>().join(" "))
        .unwrap_or_default()
}

fn matrix2(v: &Value) -> String {
    format!("[[{},{}],[{},{}]]", s(&v[0]), s(&v[1]), s(&v[2]), s(&v[3]))
}

fn rows(v: &Value) -> Vec<String> {
    v.as_array()
        .map(|rows| {
            rows.iter()
                .map(|row| {
                    row.as_array()
                        .map(|cells| cells.iter().map(s).collect::<Vec<_>>().join(" | "))
                        .unwrap_or_default()
                })
                .collect()
        })
        .unwrap_or_default()
}

fn arr(v: &Value) -> &[Value] {
    v.as_array().map(Vec::as_slice).unwrap_or(&[])
}

pub fn render(report: &Value) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "pgrade {} (n = {})", s(&report["command"]), s(&report["n"]));
    for section in arr(&report["sections"]) {
        let _ = writeln!(out, "\n[{}]", s(&section["name"]));
        for check in arr(&section["checks"]) {
            let mark = if check["passed"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "  {mark} {}: {}", s(&check["name"]), s(&check["detail"]));
            if let Some(cx) = check.get("counterexample") {
                let _ = writeln!(out, "       counterexample: {cx}");
            }
        }
        for note in arr(&section["notes"]) {
            let _ = writeln!(out, "  note: {}", s(note));
        }
    }
    let data = &report["data"];
    if !data.is_null() {
        out.push('\n');
        render_data(&mut out, data);
    }
    if let Some(ms) = report.get("timing_ms") {
        let _ = writeln!(out, "\ntime: {ms} ms");
    }
    let verdict = if report["passed"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
    let _ = writeln!(out, "\nresult: {verdict}");
    out
}

fn render_data(out: &mut String, d: &Value) {
    match d["kind"].as_str().unwrap_or("") {
        "sl2_order" => {
            let _ = writeln!(out, "matrix {} has order {}", matrix2(&d["matrix"]), s(&d["order"]));
        }
        "sl2_decompose" => {
            let _ = writeln!(out, "matrix {} = {}", matrix2(&d["matrix"]), s(&d["word"]));
            let _ = writeln!(out, "method: {}", s(&d["method"]));
        }
        "sl2_bruhat" => {
            let c = &d["cell"];
            let params = ["a", "b", "c"]
                .iter()
                .filter(|k| !c[**k].is_null())
                .map(|k| format!("{k}={}", s(&c[*k])))
                .collect::<Vec<_>>()
                .join(", ");
            let _ = writeln!(out, "matrix {}: {} cell ({params})", matrix2(&d["matrix"]), s(&c["cell"]));
        }
        "lift" => render_lift(out, d),
        "grading" => {
            let _ = writeln!(out, "structure constants c(a,b) for a < b, z = exp(2 pi i / {}):", s(&d["ring_order"]));
            for row in arr(&d["table"]) {
                let _ = writeln!(
                    out,
                    "  [X{}, X{}] = ({})·X{}",
                    index(&row["a"]),
                    index(&row["b"]),
                    s(&row["constant"]),
                    index(&row["sum"])
                );
            }
        }
        "cartan" => {
            let _ = writeln!(out, "{} commuting lines:", arr(&d["lines"]).len());
            for line in arr(&d["lines"]) {
                let _ = writeln!(out, "  {}: {}", index(&line["direction"]), indices(&line["indices"]));
            }
        }
        "equation_system" => {
            let _ = writeln!(
                out,
                "{} triples, {} vanishing ({} with zero sum), {} equations, {} of {} parameters occur",
                s(&d["triples"]),
                s(&d["vanishing_triples"]),
                s(&d["zero_sum_triples"]),
                arr(&d["equations"]).len(),
                arr(&d["parameters"]).len(),
                s(&d["parameter_count"])
            );
            for (k, eq) in arr(&d["equations"]).iter().enumerate() {
                let _ = writeln!(out, "  {:>4}  {}    from {}", k, s(&eq["text"]), triple_list(&eq["triples"]));
            }
        }
        "orbit_report" => {
            for part in arr(&d["partitions"]) {
                let orbits = arr(&part["orbits"]);
                let sizes: Vec<String> = orbits.iter().map(|o| s(&o["size"])).collect();
                let _ = writeln!(
                    out,
                    "group {} (order {}): {} orbits, sizes {}",
                    s(&part["group"]),
                    s(&part["group_order"]),
                    orbits.len(),
                    sizes.join(" + ")
                );
                for o in orbits {
                    let _ = writeln!(out, "  orbit {} ({} equations): members {}", s(&o["orbit"]), s(&o["size"]), members(&o["members"]));
                    let _ = writeln!(out, "    triples {}", triple_list(&o["triples"]));
                }
            }
        }
        _ => {
            let _ = writeln!(out, "{d}");
        }
    }
}

fn members(v: &Value) -> String {
    arr(v).iter().map(s).collect::<Vec<_>>().join(",")
}

fn triple_list(v: &Value) -> String {
    arr(v)
        .iter()
        .map(|t| format!("{{{}}}", indices(t)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn render_lift(out: &mut String, d: &Value) {
    let kind = if d["outer"].as_bool() == Some(true) { "outer" } else { "inner" };
    let _ = writeln!(out, "{kind} lift of {} (det {})", matrix2(&d["input"]), s(&d["det"]));
    if !d["provenance"].is_null() {
        let _ = writeln!(out, "provenance: {}", d["provenance"]);
    }
    let _ = writeln!(out, "Phi = {}", matrix2(&d["phi"]));
    let _ = writeln!(out, "matrix A:");
    for r in rows(&d["matrix"]) {
        let _ = writeln!(out, "  {r}");
    }
    let _ = writeln!(
        out,
        "A* with A*·A = lambda·I, lambda = {}:",
        s(&d["scale"])
    );
    for r in rows(&d["scaled_inverse"]) {
        let _ = writeln!(out, "  {r}");
    }
    let _ = writeln!(out, "index action X(r,s) -> phase·X(r',s'):");
    for img in arr(&d["index_action"]) {
        let _ = writeln!(out, "  {} -> ({})·X{}", index(&img["index"]), s(&img["phase"]), index(&img["image"]));
    }
}
