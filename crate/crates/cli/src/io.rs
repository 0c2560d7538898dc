//! File formats: triple and family documents, matrices, and the output envelope.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tpplab::tpp::{IndexTriple, Tensor, TripleFamily};
use tpplab::{Group, GroupSpec, Matrix, Subset};

use crate::error::{CliError, CliResult};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Top-level JSON output of every command.
#[derive(Debug, Serialize, Deserialize)]
pub struct Envelope {
    pub tool_version: String,
    pub command: String,
    pub params: Value,
    pub results: Vec<Value>,
}

/// The three subsets of one triple as canonical element strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetsDoc {
    #[serde(rename = "S")]
    pub s: Vec<String>,
    #[serde(rename = "T")]
    pub t: Vec<String>,
    #[serde(rename = "U")]
    pub u: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor: Option<Tensor>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TripleDoc {
    pub group: String,
    #[serde(flatten)]
    pub sets: SetsDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tpp: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub group: String,
    pub triples: Vec<SetsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stpp: Option<bool>,
}

pub fn sets_doc(t: &IndexTriple) -> SetsDoc {
    SetsDoc { s: t.s().to_strings(), t: t.t().to_strings(), u: t.u().to_strings(), tensor: Some(t.tensor()) }
}

pub fn triple_doc(t: &IndexTriple, tpp: Option<bool>) -> TripleDoc {
    TripleDoc { group: t.group().spec().to_string(), sets: sets_doc(t), tpp }
}

pub fn family_doc(f: &TripleFamily, stpp: Option<bool>) -> FamilyDoc {
    FamilyDoc { group: f.group().spec().to_string(), triples: f.triples().iter().map(sets_doc).collect(), stpp }
}

pub enum Loaded {
    Triple(IndexTriple),
    Family(TripleFamily),
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Strips an output envelope and a `triple` wrapper, leaving a bare document.
fn unwrap_doc(mut v: Value) -> Value {
    if let Some(first) = v.get_mut("results").and_then(|r| r.get_mut(0)) {
        v = first.take();
    }
    if let Some(inner) = v.get_mut("triple") {
        v = inner.take();
    }
    v
}

fn build_sets(group: &Arc<Group>, sets: &SetsDoc) -> CliResult<IndexTriple> {
    let part = |xs: &[String]| Subset::parse(group.clone(), xs);
    Ok(IndexTriple::new(part(&sets.s)?, part(&sets.t)?, part(&sets.u)?)?)
}

/// Reads a triple or family document; `group` overrides the spec stored in the file.
pub fn load_triples(path: &Path, group: Option<&str>) -> CliResult<Loaded> {
    let v = unwrap_doc(read_json(path)?);
    let bad = |e: serde_json::Error| CliError::Input(format!("{}: {e}", path.display()));
    if v.get("triples").is_some() {
        let doc: FamilyDoc = serde_json::from_value(v).map_err(bad)?;
        let g = Group::parse(group.unwrap_or(&doc.group))?;
        let triples = doc.triples.iter().map(|s| build_sets(&g, s)).collect::<CliResult<Vec<_>>>()?;
        Ok(Loaded::Family(TripleFamily::new(triples)?))
    } else {
        let doc: TripleDoc = serde_json::from_value(v).map_err(bad)?;
        let g = Group::parse(group.unwrap_or(&doc.group))?;
        Ok(Loaded::Triple(build_sets(&g, &doc.sets)?))
    }
}

pub fn write_json(path: &Path, v: &impl Serialize) -> CliResult<()> {
    let text = serde_json::to_string_pretty(v).map_err(|e| CliError::Input(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| CliError::Io(path.display().to_string(), e))
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

/// Reads a matrix as rows of raw cell strings.
fn read_cells(path: &Path) -> CliResult<Vec<Vec<String>>> {
    let bad = |e: String| CliError::Input(format!("{}: {e}", path.display()));
    if is_csv(path) {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| bad(e.to_string()))?;
        return reader
            .records()
            .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect()).map_err(|e| bad(e.to_string())))
            .collect();
    }
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    let rows: Vec<Vec<Value>> = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    Ok(rows.into_iter().map(|r| r.into_iter().map(|c| c.to_string()).collect()).collect())
}

fn parse_matrix<T: tpplab::Scalar>(path: &Path, parse: impl Fn(&str) -> Option<T>) -> CliResult<Matrix<T>> {
    let cells = read_cells(path)?;
    let mut rows = Vec::with_capacity(cells.len());
    for (i, row) in cells.iter().enumerate() {
        let parsed = row
            .iter()
            .enumerate()
            .map(|(j, c)| {
                parse(c).ok_or_else(|| CliError::Input(format!("{}: bad entry '{c}' at ({i}, {j})", path.display())))
            })
            .collect::<CliResult<Vec<T>>>()?;
        rows.push(parsed);
    }
    Matrix::from_rows(rows).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn read_int_matrix(path: &Path) -> CliResult<Matrix<i128>> {
    parse_matrix(path, |c| c.parse::<i128>().ok())
}

pub fn read_float_matrix(path: &Path) -> CliResult<Matrix<Complex64>> {
    parse_matrix(path, |c| c.parse::<f64>().ok().filter(|x| x.is_finite()).map(|x| Complex64::new(x, 0.0)))
}

pub fn int_matrix_json(m: &Matrix<i128>) -> Value {
    // i128 is emitted as a JSON number when it fits in i64, as a string otherwise
    let cell = |x: &i128| i64::try_from(*x).map(Value::from).unwrap_or_else(|_| Value::from(x.to_string()));
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(cell).collect())).collect())
}

pub fn float_matrix_json(m: &Matrix<Complex64>) -> Value {
    json!(m.to_rows().iter().map(|r| r.iter().map(|z| z.re).collect::<Vec<f64>>()).collect::<Vec<_>>())
}

/// Writes a JSON array of rows as CSV or JSON, chosen by extension.
pub fn write_matrix(path: &Path, json: &Value) -> CliResult<()> {
    if !is_csv(path) {
        return write_json(path, json);
    }
    let bad = |e: csv::Error| CliError::Input(format!("{}: {e}", path.display()));
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_path(path).map_err(bad)?;
    for row in json.as_array().map(Vec::as_slice).unwrap_or_default() {
        let cells = row.as_array().map(Vec::as_slice).unwrap_or_default();
        writer
            .write_record(cells.iter().map(|c| c.as_str().map(str::to_string).unwrap_or_else(|| c.to_string())))
            .map_err(bad)?;
    }
    writer.flush().map_err(|e| CliError::Io(path.display().to_string(), e))
}

/// Parses `a..b` or `a..=b` as an inclusive range.
pub fn parse_range(text: &str) -> CliResult<std::ops::RangeInclusive<u64>> {
    let (a, b) = text
        .split_once("..=")
        .or_else(|| text.split_once(".."))
        .ok_or_else(|| CliError::Input(format!("range '{text}' is not of the form a..b")))?;
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| CliError::Input(format!("bad range bound '{s}'")));
    let (a, b) = (num(a)?, num(b)?);
    if a > b {
        return Err(CliError::Input(format!("empty range {text}")));
    }
    Ok(a..=b)
}

pub fn parse_spec(text: &str) -> CliResult<GroupSpec> {
    Ok(GroupSpec::parse(text)?)
}
