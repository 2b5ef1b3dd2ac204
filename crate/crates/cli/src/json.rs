//! JSON forms of ADHM data, varieties and polynomial matrices.
//!
//! Matrix entries are integers or `"p/q"` strings. Rendering is canonical: the
//! top-level keys go one per line, in schema order, and every value is written
//! compactly, so `render(parse(render(x)))` reproduces the same bytes.

use adhm_core::adhm::{AdhmBlocks, AdhmDatum, FAMILY_NAMES};
use adhm_core::poly::parse_poly;
use adhm_core::variety::VarietySpec;
use adhm_core::{DenseMatrix, Field, FieldElement, PolyMatrix};
use serde_json::{Map, Value};

use crate::error::CliError;

type Result<T> = std::result::Result<T, CliError>;

fn at(path: &str, message: impl Into<String>) -> CliError {
    CliError::Json {
        path: path.to_string(),
        message: message.into(),
    }
}

/// Parses `q` or `fp:P`.
pub fn parse_field(text: &str) -> Result<Field> {
    match text.trim() {
        "q" | "Q" => Ok(Field::Rational),
        t => {
            let p = t
                .strip_prefix("fp:")
                .and_then(|p| p.parse::<u64>().ok())
                .ok_or_else(|| CliError::Usage(format!("field must be q or fp:PRIME, got {text:?}")))?;
            if p == 2 {
                return Err(CliError::Usage("the prime must be odd".into()));
            }
            Ok(Field::prime(p)?)
        }
    }
}

/// The field declared in a document, reconciled with the one already in force.
fn resolve_field(obj: &Map<String, Value>, requested: Option<Field>) -> Result<Field> {
    let declared = match obj.get("field") {
        None => None,
        Some(Value::String(s)) => Some(parse_field(s).map_err(|e| at("$.field", e.to_string()))?),
        Some(_) => return Err(at("$.field", "expected a string such as \"q\" or \"fp:101\"")),
    };
    match (declared, requested) {
        (Some(a), Some(b)) if a != b => Err(CliError::FieldMismatch(format!("document declares {a}, but {b} is in use"))),
        (Some(f), _) | (None, Some(f)) => Ok(f),
        (None, None) => Ok(Field::Rational),
    }
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| CliError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| at(path, "expected an object"))
}

fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str]) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(at(&format!("$.{k}"), "unknown key")),
        None => Ok(()),
    }
}

fn count(obj: &Map<String, Value>, key: &str, min: u64) -> Result<usize> {
    let path = format!("$.{key}");
    let v = obj.get(key).ok_or_else(|| at(&path, "missing"))?;
    match v.as_u64() {
        Some(k) if k >= min => Ok(k as usize),
        _ => Err(at(&path, format!("expected an integer >= {min}"))),
    }
}

pub fn parse_entry(field: Field, v: &Value, path: &str) -> Result<FieldElement> {
    match v {
        Value::Number(num) => {
            if let Some(i) = num.as_i64() {
                Ok(field.from_i64(i))
            } else if num.is_u64() {
                Ok(field.parse(&num.to_string())?)
            } else {
                Err(at(path, format!("{num} is not an integer; write fractions as \"p/q\" strings")))
            }
        }
        Value::String(s) => field.parse(s).map_err(|e| at(path, e.to_string())),
        _ => Err(at(path, "expected an integer or a \"p/q\" string")),
    }
}

pub fn render_entry(e: &FieldElement) -> Value {
    match e.to_i64() {
        Some(i) => Value::from(i),
        None => Value::String(e.to_string()),
    }
}

fn parse_matrix(field: Field, v: &Value, rows: usize, cols: usize, path: &str) -> Result<DenseMatrix> {
    let arr = v.as_array().ok_or_else(|| at(path, "expected an array of rows"))?;
    if arr.len() != rows {
        return Err(at(path, format!("expected {rows} rows, found {}", arr.len())));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, row) in arr.iter().enumerate() {
        let rpath = format!("{path}[{i}]");
        let row = row.as_array().ok_or_else(|| at(&rpath, "expected an array of entries"))?;
        if row.len() != cols {
            return Err(at(&rpath, format!("ragged row: expected {cols} entries, found {}", row.len())));
        }
        for (j, e) in row.iter().enumerate() {
            entries.push(parse_entry(field, e, &format!("{rpath}[{j}]"))?);
        }
    }
    Ok(DenseMatrix::new(field, rows, cols, entries)?)
}

pub fn render_matrix(m: &DenseMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(render_entry).collect()))
            .collect(),
    )
}

fn parse_family(field: Field, obj: &Map<String, Value>, name: &str, blocks: usize, shape: (usize, usize)) -> Result<Vec<DenseMatrix>> {
    let path = format!("$.{name}");
    let v = obj.get(name).ok_or_else(|| at(&path, "missing"))?;
    let arr = v.as_array().ok_or_else(|| at(&path, "expected an array of blocks"))?;
    if arr.len() != blocks {
        return Err(at(&path, format!("expected {blocks} blocks (d + 1), found {}", arr.len())));
    }
    arr.iter()
        .enumerate()
        .map(|(k, m)| parse_matrix(field, m, shape.0, shape.1, &format!("{path}[{k}]")))
        .collect()
}

pub fn datum_from_value(v: &Value, field: Option<Field>) -> Result<AdhmDatum> {
    let obj = object(v, "$")?;
    reject_unknown(obj, &["field", "c", "r", "d", "A", "B", "Aprime", "Bprime", "I", "J"])?;
    let field = resolve_field(obj, field)?;
    let c = count(obj, "c", 1)?;
    let r = count(obj, "r", 1)?;
    let d = count(obj, "d", 0)?;
    let fam = |name: &str, shape| parse_family(field, obj, name, d + 1, shape);
    let a = fam("A", (c, c))?;
    let b = fam("B", (c, c))?;
    let a_prime = if obj.contains_key("Aprime") { fam("Aprime", (c, c))? } else { a.clone() };
    let b_prime = if obj.contains_key("Bprime") { fam("Bprime", (c, c))? } else { b.clone() };
    let blocks = AdhmBlocks {
        a,
        b,
        a_prime,
        b_prime,
        i: fam("I", (c, r))?,
        j: fam("J", (r, c))?,
    };
    Ok(AdhmDatum::new(field, c, r, blocks)?)
}

pub fn parse_datum(text: &str, field: Option<Field>) -> Result<AdhmDatum> {
    datum_from_value(&parse_json(text)?, field)
}

pub fn datum_to_value(x: &AdhmDatum) -> Value {
    let mut obj = Map::new();
    if x.field() != Field::Rational {
        obj.insert("field".into(), Value::String(x.field().to_string()));
    }
    obj.insert("c".into(), Value::from(x.c()));
    obj.insert("r".into(), Value::from(x.r()));
    obj.insert("d".into(), Value::from(x.d()));
    let fams = x.families();
    for (name, fam) in FAMILY_NAMES.iter().zip(fams) {
        let skip = (*name == "Aprime" && fam == fams[0]) || (*name == "Bprime" && fam == fams[1]);
        if !skip {
            obj.insert((*name).into(), Value::Array(fam.iter().map(render_matrix).collect()));
        }
    }
    Value::Object(obj)
}

pub fn render_datum(x: &AdhmDatum) -> String {
    render_document(&datum_to_value(x))
}

pub fn variety_from_value(v: &Value, field: Option<Field>) -> Result<VarietySpec> {
    let obj = object(v, "$")?;
    reject_unknown(obj, &["field", "n", "generators"])?;
    let field = resolve_field(obj, field)?;
    let n = count(obj, "n", 2)?;
    let gens = match obj.get("generators") {
        None => Vec::new(),
        Some(Value::Array(a)) => a
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let path = format!("$.generators[{i}]");
                let s = g.as_str().ok_or_else(|| at(&path, "expected a polynomial string"))?;
                parse_poly(field, n, s).map_err(|e| at(&path, e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?,
        Some(_) => return Err(at("$.generators", "expected an array of polynomial strings")),
    };
    let spec = VarietySpec::new(field, n, gens)?;
    if let Err(violations) = spec.validate() {
        let v = &violations[0];
        return Err(at(&format!("$.generators[{}]", v.index), v.to_string()));
    }
    Ok(spec)
}

pub fn parse_variety(text: &str, field: Option<Field>) -> Result<VarietySpec> {
    variety_from_value(&parse_json(text)?, field)
}

pub fn variety_to_value(y: &VarietySpec) -> Value {
    let mut obj = Map::new();
    if y.field() != Field::Rational {
        obj.insert("field".into(), Value::String(y.field().to_string()));
    }
    obj.insert("n".into(), Value::from(y.n()));
    obj.insert(
        "generators".into(),
        Value::Array(y.generators().iter().map(|g| Value::String(g.to_string())).collect()),
    );
    Value::Object(obj)
}

pub fn render_variety(y: &VarietySpec) -> String {
    render_document(&variety_to_value(y))
}

pub fn poly_matrix_to_value(m: &PolyMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| Value::String(m.get(i, j).to_string())).collect()))
            .collect(),
    )
}

/// Reads a matrix of linear forms written as rows of polynomial strings.
pub fn poly_matrix_from_value(field: Field, n: usize, v: &Value, path: &str) -> Result<PolyMatrix> {
    let rows = v.as_array().ok_or_else(|| at(path, "expected an array of rows"))?;
    let cols = rows.first().and_then(Value::as_array).map_or(0, Vec::len);
    let mut entries = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let rpath = format!("{path}[{i}]");
        let row = row.as_array().ok_or_else(|| at(&rpath, "expected an array of polynomial strings"))?;
        if row.len() != cols {
            return Err(at(&rpath, format!("ragged row: expected {cols} entries, found {}", row.len())));
        }
        for (j, e) in row.iter().enumerate() {
            let epath = format!("{rpath}[{j}]");
            let s = e.as_str().ok_or_else(|| at(&epath, "expected a polynomial string"))?;
            let p = parse_poly(field, n, s).map_err(|err| at(&epath, err.to_string()))?;
            // The literal 0 parses in degree 0; entries of a linear map live in degree 1.
            entries.push(if p.is_zero() { adhm_core::HomogPoly::zero(field, n, 1) } else { p });
        }
    }
    Ok(PolyMatrix::new(field, n, rows.len(), cols, entries)?)
}

/// Top-level keys one per line, values compact.
pub fn render_document(v: &Value) -> String {
    match v {
        Value::Object(obj) if !obj.is_empty() => {
            let lines: Vec<String> = obj
                .iter()
                .map(|(k, v)| format!("  {}: {}", Value::String(k.clone()), serde_json::to_string(v).unwrap()))
                .collect();
            format!("{{\n{}\n}}\n", lines.join(",\n"))
        }
        other => format!("{}\n", serde_json::to_string(other).unwrap()),
    }
}
