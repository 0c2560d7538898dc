//! Subcommand implementations. Each returns an [`Output`] holding JSON results,
//! human-readable lines and a pass/fail status.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde_json::{json, Value};
use tpplab::algebra::{matmul_via_abelian_dft, matmul_via_group, simultaneous_matmul};
use tpplab::bounds::{
    chapter6_report, k2_table, minimize_formula, triangle_alpha_exact, triangle_alpha_leading, BoundReport,
    Formula,
};
use tpplab::chars::{class_number, d_prime, degree_set};
use tpplab::tpp::{
    check_tpp, cyc_stpp_triples, search_triples, stpp_violation, tpp_witness, triangle_subgroup_triple,
    wreath_triple, IndexTriple, StppViolation, TppWitness, TripleFamily,
};
use tpplab::{Group, Matrix};

use crate::error::{CliError, CliResult};
use crate::io::{self, Loaded};
use crate::{AlgPath, Mode, Settings};

pub struct Output {
    pub params: Value,
    pub results: Vec<Value>,
    pub lines: Vec<String>,
    pub pass: bool,
}

impl Output {
    fn ok(params: Value, results: Vec<Value>, lines: Vec<String>) -> Output {
        Output { params, results, lines, pass: true }
    }
}

pub fn group_info(spec: &str) -> CliResult<Output> {
    let spec = io::parse_spec(spec)?;
    spec.validate()?;
    let order = spec.order();
    let mut lines = vec![
        format!("group    {spec}"),
        format!("family   {}", spec.family()),
        format!("order    {order}"),
        format!("abelian  {}", spec.is_abelian()),
    ];
    let mut result = json!({
        "spec": spec.to_string(),
        "family": spec.family(),
        "order": order.to_string(),
        "abelian": spec.is_abelian(),
    });
    match degree_set(&spec) {
        Ok(ds) => {
            let degrees: Vec<Value> = ds.entries().map(|(d, k)| json!({"degree": d, "multiplicity": k})).collect();
            let listed: Vec<String> = ds.entries().map(|(d, k)| format!("{d}^{k}")).collect();
            lines.push(format!("degrees  {{{}}}", listed.join(", ")));
            lines.push(format!("classes  {}", class_number(&ds)));
            lines.push(format!("max deg  {}", d_prime(&ds)));
            result["degrees"] = Value::Array(degrees);
            result["class_number"] = json!(class_number(&ds).to_string());
            result["max_degree"] = json!(d_prime(&ds).to_string());
        }
        Err(e) => {
            lines.push(format!("degrees  unavailable ({e})"));
            result["degrees"] = Value::Null;
        }
    }
    Ok(Output::ok(json!({"spec": spec.to_string()}), vec![result], lines))
}

fn witness_json(g: &Group, w: &TppWitness) -> Value {
    json!([g.format_element(&w.q1), g.format_element(&w.q2), g.format_element(&w.q3)])
}

fn witness_line(g: &Group, w: &TppWitness) -> String {
    format!("q1 = {}, q2 = {}, q3 = {}", g.format_element(&w.q1), g.format_element(&w.q2), g.format_element(&w.q3))
}

fn check_one(index: Option<usize>, t: &IndexTriple) -> (bool, Value, String) {
    let g = t.group();
    let tensor = t.tensor();
    let tag = index.map(|i| format!("triple {i}: ")).unwrap_or_default();
    match tpp_witness(t) {
        None => (true, json!({"index": index, "tensor": tensor, "tpp": true}), format!("{tag}{tensor} PASS")),
        Some(w) => (
            false,
            json!({"index": index, "tensor": tensor, "tpp": false, "witness": witness_json(g, &w)}),
            format!("{tag}{tensor} FAIL, {}", witness_line(g, &w)),
        ),
    }
}

pub fn tpp_check(file: &Path, group: Option<&str>) -> CliResult<Output> {
    let params = json!({"file": file.display().to_string(), "group": group});
    let checked: Vec<_> = match io::load_triples(file, group)? {
        Loaded::Triple(t) => vec![check_one(None, &t)],
        Loaded::Family(f) => f.triples().iter().enumerate().map(|(i, t)| check_one(Some(i), t)).collect(),
    };
    let pass = checked.iter().all(|c| c.0);
    let mut lines: Vec<String> = checked.iter().map(|c| c.2.clone()).collect();
    lines.push(format!("verdict: {}", if pass { "PASS" } else { "FAIL" }));
    Ok(Output { params, results: checked.into_iter().map(|c| c.1).collect(), lines, pass })
}

pub fn tpp_stpp(file: &Path, group: Option<&str>) -> CliResult<Output> {
    let params = json!({"file": file.display().to_string(), "group": group});
    let fam = match io::load_triples(file, group)? {
        Loaded::Family(f) => f,
        Loaded::Triple(t) => TripleFamily::new(vec![t])?,
    };
    let g = fam.group().clone();
    let (result, line) = match stpp_violation(&fam) {
        None => (json!({"size": fam.len(), "stpp": true}), "verdict: PASS".to_string()),
        Some(StppViolation::Member { index, witness }) => (
            json!({"size": fam.len(), "stpp": false, "member": index, "witness": witness_json(&g, &witness)}),
            format!("verdict: FAIL, triple {index} fails TPP: {}", witness_line(&g, &witness)),
        ),
        Some(StppViolation::Cross { i, j, k, witness }) => (
            json!({"size": fam.len(), "stpp": false, "cross": [i, j, k], "witness": witness_json(&g, &witness)}),
            format!("verdict: FAIL, cross term (i, j, k) = ({i}, {j}, {k}): {}", witness_line(&g, &witness)),
        ),
    };
    let pass = result["stpp"] == json!(true);
    let lines = vec![format!("family of {} triples in {}", fam.len(), g.spec()), line];
    Ok(Output { params, results: vec![result], lines, pass })
}

fn emit_doc(doc: Value, out: Option<&Path>, params: Value, summary: String) -> CliResult<Output> {
    let mut lines = vec![summary];
    if let Some(path) = out {
        io::write_json(path, &doc)?;
        lines.push(format!("written to {}", path.display()));
    } else {
        lines.push(serde_json::to_string_pretty(&doc).expect("serializable"));
    }
    Ok(Output::ok(params, vec![doc], lines))
}

pub fn triple_axis(n: u32, out: Option<&Path>) -> CliResult<Output> {
    let fam = cyc_stpp_triples(n)?;
    let doc = serde_json::to_value(io::family_doc(&fam, None)).expect("serializable");
    let summary = format!("{} axis triples in {}", fam.len(), fam.group().spec());
    emit_doc(doc, out, json!({"n": n}), summary)
}

pub fn triple_triangle(n: u32, cap: u64, out: Option<&Path>) -> CliResult<Output> {
    let t = triangle_subgroup_triple(n, cap)?;
    let doc = serde_json::to_value(io::triple_doc(&t, None)).expect("serializable");
    let summary = format!("triangle triple {} in {}", t.tensor(), t.group().spec());
    emit_doc(doc, out, json!({"n": n}), summary)
}

pub fn triple_wreath(n: u32, top: u32, out: Option<&Path>) -> CliResult<Output> {
    let t = wreath_triple(&cyc_stpp_triples(n)?, top as usize)?;
    let doc = serde_json::to_value(io::triple_doc(&t, None)).expect("serializable");
    let summary = format!("wreath triple {} in {}", t.tensor(), t.group().spec());
    emit_doc(doc, out, json!({"n": n, "top": top}), summary)
}

/// Product of matching operand pairs through the group algebra, for one mode.
enum Products {
    Exact(Vec<Matrix<i128>>, Vec<Matrix<i128>>),
    Float(Vec<Matrix<Complex64>>, Vec<Matrix<Complex64>>),
}

fn load_pairs<T>(a: &[PathBuf], b: &[PathBuf], read: impl Fn(&Path) -> CliResult<T>) -> CliResult<Vec<(T, T)>> {
    if a.len() != b.len() {
        return Err(CliError::Input(format!("{} A files but {} B files", a.len(), b.len())));
    }
    a.iter().zip(b).map(|(x, y)| Ok((read(x)?, read(y)?))).collect()
}

fn check_cap(group: &Group, cap: u64) -> CliResult<()> {
    match group.order_u64() {
        Some(n) if n <= cap => Ok(()),
        _ => Err(tpplab::Error::TooLarge { order: group.order().to_string(), cap }.into()),
    }
}

pub fn matmul(
    settings: &Settings,
    triple: &Path,
    a: &[PathBuf],
    b: &[PathBuf],
    out: &[PathBuf],
    path: AlgPath,
) -> CliResult<Output> {
    let loaded = io::load_triples(triple, None)?;
    let (group, members) = match &loaded {
        Loaded::Triple(t) => (t.group().clone(), vec![t.clone()]),
        Loaded::Family(f) => (f.group().clone(), f.triples().to_vec()),
    };
    check_cap(&group, settings.cap)?;
    if !out.is_empty() && out.len() != members.len() {
        return Err(CliError::Input(format!("{} output files for {} products", out.len(), members.len())));
    }
    if path == AlgPath::Dft && (settings.mode == Mode::Exact || members.len() > 1) {
        return Err(CliError::Input("the dft path needs --mode float and a single triple".into()));
    }
    let products = match settings.mode {
        Mode::Exact => {
            let pairs = load_pairs(a, b, io::read_int_matrix)?;
            let got = match &loaded {
                Loaded::Triple(t) => vec![matmul_via_group(t, &pairs[0].0, &pairs[0].1)?],
                Loaded::Family(f) => simultaneous_matmul(f, &pairs)?,
            };
            let want = pairs.iter().map(|(x, y)| x.matmul(y)).collect::<Result<Vec<_>, _>>()?;
            Products::Exact(got, want)
        }
        Mode::Float => {
            let pairs = load_pairs(a, b, io::read_float_matrix)?;
            let got = match (&loaded, path) {
                (Loaded::Triple(t), AlgPath::Dft) => vec![matmul_via_abelian_dft(t, &pairs[0].0, &pairs[0].1)?],
                (Loaded::Triple(t), AlgPath::Naive) => vec![matmul_via_group(t, &pairs[0].0, &pairs[0].1)?],
                (Loaded::Family(f), _) => simultaneous_matmul(f, &pairs)?,
            };
            let want = pairs.iter().map(|(x, y)| x.matmul(y)).collect::<Result<Vec<_>, _>>()?;
            Products::Float(got, want)
        }
    };
    let (cells, errors): (Vec<Value>, Vec<f64>) = match &products {
        Products::Exact(got, want) => got
            .iter()
            .zip(want)
            .map(|(g, w)| (io::int_matrix_json(g), if g == w { 0.0 } else { f64::INFINITY }))
            .unzip(),
        Products::Float(got, want) => {
            got.iter().zip(want).map(|(g, w)| (io::float_matrix_json(g), g.max_abs_diff(w))).unzip()
        }
    };
    let mut results = Vec::new();
    let mut lines = Vec::new();
    let mut pass = true;
    for (i, (c, err)) in cells.into_iter().zip(&errors).enumerate() {
        let ok = *err <= settings.tolerance;
        pass &= ok;
        let verdict = if ok { "PASS" } else { "FAIL" };
        let mut r = json!({"index": i, "verified": ok, "max_abs_error": if err.is_finite() { json!(err) } else { Value::Null }});
        if let Some(path) = out.get(i) {
            io::write_matrix(path, &c)?;
            r["out"] = json!(path.display().to_string());
            lines.push(format!("product {i}: {verdict} against schoolbook, written to {}", path.display()));
        } else {
            lines.push(format!("product {i}: {verdict} against schoolbook"));
            lines.push(serde_json::to_string(&c).expect("serializable"));
            r["C"] = c;
        }
        results.push(r);
    }
    let params = json!({
        "triple": triple.display().to_string(),
        "a": a.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        "b": b.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        "mode": settings.mode.as_str(),
        "path": path.as_str(),
        "tolerance": settings.tolerance,
    });
    Ok(Output { params, results, lines, pass })
}

fn report_line(r: &BoundReport) -> String {
    let provenance = serde_json::to_value(r.provenance).expect("serializable");
    format!("{:<12.8} {:<15} {}", r.value, provenance.as_str().unwrap_or_default(), r.label)
}

pub fn bounds_table(triangle_alpha: Option<&str>, k2: Option<u64>, exact: bool) -> CliResult<Output> {
    let mut results = Vec::new();
    let mut lines = Vec::new();
    if let Some(kmax) = k2 {
        lines.push(format!("{:<4} {:<6} {}", "k", "n", "min"));
        for (k, min) in k2_table(kmax, 3..=1000)? {
            lines.push(format!("{k:<4} {:<6} {:.6}", min.n, min.value));
            results.push(json!({"k": k, "n": min.n, "value": min.value}));
        }
        return Ok(Output::ok(json!({"k2": kmax}), results, lines));
    }
    let range = io::parse_range(triangle_alpha.unwrap_or("2..10"))?;
    lines.push(if exact { format!("{:<4} {:<10} exact", "n", "leading") } else { format!("{:<4} leading", "n") });
    for n in range.clone() {
        let n = u32::try_from(n).map_err(|_| CliError::Input(format!("n = {n} out of range")))?;
        let leading = triangle_alpha_leading(n)?;
        let mut r = json!({"n": n, "leading": leading});
        let mut line = format!("{n:<4} {leading:.5}");
        if exact {
            let e = triangle_alpha_exact(n)?;
            r["exact"] = json!(e);
            line = format!("{n:<4} {leading:<10.5} {e:.5}");
        }
        results.push(r);
        lines.push(line);
    }
    let params = json!({"triangle_alpha": format!("{}..{}", range.start(), range.end()), "exact": exact});
    Ok(Output::ok(params, results, lines))
}

pub fn bounds_minimize(formula: &str, range: &str, k: Option<u64>, m: Option<u64>) -> CliResult<Output> {
    let f = Formula::from_id(formula, k.or(m))?;
    let r = io::parse_range(range)?;
    let min = minimize_formula(f, r.clone())?;
    let params = json!({"formula": formula, "range": format!("{}..{}", r.start(), r.end()), "k": k, "m": m});
    let lines = vec![format!("{f}: minimum {:.8} at n = {}", min.value, min.n)];
    Ok(Output::ok(params, vec![json!({"formula": f.to_string(), "n": min.n, "value": min.value})], lines))
}

/// Number of leading rows of the full report that are headline bounds.
const HEADLINE_ROWS: usize = 3;

pub fn bounds_chapter6(all: bool) -> CliResult<Output> {
    let mut rows = chapter6_report()?;
    if !all {
        rows.truncate(HEADLINE_ROWS);
    }
    let lines = rows.iter().map(report_line).collect();
    let results = rows.iter().map(|r| serde_json::to_value(r).expect("serializable")).collect();
    Ok(Output::ok(json!({"all": all}), results, lines))
}

pub fn search(group: &str, budget: u64, seed: u64, out: Option<&Path>) -> CliResult<Output> {
    let g = Group::parse(group)?;
    let found = search_triples(&g, budget, seed)?;
    let best = &found.best;
    let doc = io::triple_doc(best, Some(check_tpp(best)));
    let result = json!({"triple": doc, "exhaustive": found.exhaustive, "checks": found.checks});
    let mut lines = vec![
        format!("best {} in {} after {} checks", best.tensor(), g.spec(), found.checks),
        format!("exhaustive: {}", found.exhaustive),
    ];
    if let Some(path) = out {
        io::write_json(path, &doc)?;
        lines.push(format!("written to {}", path.display()));
    } else {
        lines.push(serde_json::to_string_pretty(&doc).expect("serializable"));
    }
    let params = json!({"group": g.spec().to_string(), "budget": budget, "seed": seed});
    Ok(Output::ok(params, vec![result], lines))
}

pub fn reproduce_chapter6() -> CliResult<Output> {
    let criteria = tpplab::reproduce::run_all();
    let mut lines = vec![format!("{:<3} {:<28} {:<6} {}", "#", "criterion", "result", "time")];
    for c in &criteria {
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        lines.push(format!("{:<3} {:<28} {verdict:<6} {:.2}s", c.id, c.title, c.seconds));
        for check in c.checks.iter().filter(|k| !k.ok) {
            lines.push(format!("    FAIL {}", check.detail));
        }
    }
    let passed = criteria.iter().filter(|c| c.passed()).count();
    lines.push(format!("{passed}/{} criteria passed", criteria.len()));
    let results = criteria
        .iter()
        .map(|c| {
            let mut v = serde_json::to_value(c).expect("serializable");
            v["passed"] = json!(c.passed());
            v
        })
        .collect();
    Ok(Output { params: json!({}), results, lines, pass: passed == criteria.len() })
}
