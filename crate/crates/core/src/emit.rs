//! Serialized forms of operators, bases, the fusion tensor and the Gaussian element.
//!
//! JSON objects carry the ring header under `"ring"` and exact scalars in the
//! `{"a", "b"}` encoding. With `float_digits` set, every scalar array gets a
//! `*_float` twin of `[re, im]` decimal strings. CSV output is a flat table of
//! nonzero entries with exact and embedded values.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::cyclotomic::CycScalar;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rep_z::{gaussian_element, ZBasis};
use crate::session::Model;
use crate::symmetric::{Family, LabeledBasis};

/// Digits used for the embedded values in CSV output when none are requested.
pub const DEFAULT_CSV_DIGITS: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitTarget {
    XMatrix,
    YMatrix,
    TMatrix,
    SMatrix,
    CBasis,
    HBasis,
    Fusion,
    Ribbon,
}

impl EmitTarget {
    pub const ALL: [EmitTarget; 8] = [
        EmitTarget::XMatrix,
        EmitTarget::YMatrix,
        EmitTarget::TMatrix,
        EmitTarget::SMatrix,
        EmitTarget::CBasis,
        EmitTarget::HBasis,
        EmitTarget::Fusion,
        EmitTarget::Ribbon,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EmitTarget::XMatrix => "xmatrix",
            EmitTarget::YMatrix => "ymatrix",
            EmitTarget::TMatrix => "tmatrix",
            EmitTarget::SMatrix => "smatrix",
            EmitTarget::CBasis => "cbasis",
            EmitTarget::HBasis => "hbasis",
            EmitTarget::Fusion => "fusion",
            EmitTarget::Ribbon => "ribbon",
        }
    }
}

impl fmt::Display for EmitTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EmitTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EmitTarget::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown emit target {s:?}")))
    }
}

/// JSON document plus a flat table for CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct Emission {
    pub json: Value,
    pub csv_header: Vec<String>,
    pub csv_rows: Vec<Vec<String>>,
}

fn exact(x: &CycScalar) -> Value {
    serde_json::to_value(x).expect("scalar serializes")
}

fn shadow(x: &CycScalar, digits: u32) -> Value {
    let (re, im) = x.embed_complex(digits).to_decimal_strings(digits);
    json!([re, im])
}

fn vec_json(v: &[CycScalar], f: &dyn Fn(&CycScalar) -> Value) -> Value {
    Value::Array(v.iter().map(f).collect())
}

fn matrix_rows(m: &Matrix) -> Vec<Vec<CycScalar>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// Adds `key` (exact) and, with digits, `key_float`.
fn put_nested(obj: &mut serde_json::Map<String, Value>, key: &str, rows: &[Vec<CycScalar>], digits: Option<u32>) {
    obj.insert(key.into(), Value::Array(rows.iter().map(|r| vec_json(r, &exact)).collect()));
    if let Some(d) = digits {
        let f = move |x: &CycScalar| shadow(x, d);
        obj.insert(format!("{key}_float"), Value::Array(rows.iter().map(|r| vec_json(r, &f)).collect()));
    }
}

fn csv_cells(x: &CycScalar, digits: u32) -> [String; 3] {
    let (re, im) = x.embed_complex(digits).to_decimal_strings(digits);
    [x.to_string(), re, im]
}

fn header(keys: &[&str]) -> Vec<String> {
    keys.iter().map(|k| k.to_string()).chain(["exact", "re", "im"].map(String::from)).collect()
}

fn base_object(model: &Model) -> serde_json::Map<String, Value> {
    let mut obj = serde_json::Map::new();
    obj.insert("p".into(), json!(model.p()));
    obj.insert("ring".into(), model.qn().ring().header_json());
    obj
}

fn operator(model: &Model, m: &Matrix, digits: Option<u32>) -> Result<Emission> {
    let labels = ZBasis::new(model.p())?.label_strings();
    let mut obj = base_object(model);
    obj.insert("basis".into(), json!(labels));
    let rows = matrix_rows(m);
    put_nested(&mut obj, "rows", &rows, digits);
    let d = digits.unwrap_or(DEFAULT_CSV_DIGITS);
    let mut csv_rows = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        for (j, x) in row.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            let mut rec = vec![labels[i].clone(), labels[j].clone()];
            rec.extend(csv_cells(x, d));
            csv_rows.push(rec);
        }
    }
    Ok(Emission { json: Value::Object(obj), csv_header: header(&["row", "col"]), csv_rows })
}

fn labeled_basis(model: &Model, basis: &LabeledBasis, digits: Option<u32>) -> Result<Emission> {
    let labels = ZBasis::new(model.p())?.label_strings();
    let names = basis.names();
    let mut obj = base_object(model);
    obj.insert("basis".into(), json!(labels));
    obj.insert("labels".into(), json!(names));
    let vectors: Vec<Vec<CycScalar>> = basis.columns();
    put_nested(&mut obj, "vectors", &vectors, digits);
    let d = digits.unwrap_or(DEFAULT_CSV_DIGITS);
    let mut csv_rows = Vec::new();
    for (name, v) in names.iter().zip(&vectors) {
        for (i, x) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            let mut rec = vec![name.clone(), labels[i].clone()];
            rec.extend(csv_cells(x, d));
            csv_rows.push(rec);
        }
    }
    Ok(Emission { json: Value::Object(obj), csv_header: header(&["vector", "component"]), csv_rows })
}

fn fusion(model: &Model, digits: Option<u32>) -> Result<Emission> {
    let (report, tensor) = model.fusion()?;
    let tensor = tensor.as_ref().ok_or_else(|| {
        let why = report.failures().next().and_then(|c| c.detail.clone()).unwrap_or_default();
        Error::Verification(format!("fusion tensor unavailable: {why}"))
    })?;
    let mut obj = base_object(model);
    obj.insert("basis".into(), json!(tensor.basis));
    obj.insert("N".into(), Value::Array(tensor.n.iter().map(|a| Value::Array(a.iter().map(|b| vec_json(b, &exact)).collect())).collect()));
    if let Some(d) = digits {
        let f = move |x: &CycScalar| shadow(x, d);
        obj.insert(
            "N_float".into(),
            Value::Array(tensor.n.iter().map(|a| Value::Array(a.iter().map(|b| vec_json(b, &f)).collect())).collect()),
        );
    }
    let d = digits.unwrap_or(DEFAULT_CSV_DIGITS);
    let mut csv_rows = Vec::new();
    for (a, plane) in tensor.n.iter().enumerate() {
        for (b, line) in plane.iter().enumerate() {
            for (c, x) in line.iter().enumerate() {
                let mut rec = vec![tensor.basis[a].clone(), tensor.basis[b].clone(), tensor.basis[c].clone()];
                rec.extend(csv_cells(x, d));
                csv_rows.push(rec);
            }
        }
    }
    Ok(Emission { json: Value::Object(obj), csv_header: header(&["a", "b", "c"]), csv_rows })
}

fn ribbon(model: &Model, digits: Option<u32>) -> Result<Emission> {
    let labels = ZBasis::new(model.p())?.label_strings();
    let v = gaussian_element(model.qn())?;
    let sym = model.symmetric()?;
    let coords = sym.tq.coords_of(&v)?;
    let tq_labels = sym.tq.label_names(Family::C);
    let mut obj = base_object(model);
    obj.insert("basis".into(), json!(labels));
    obj.insert("tq_basis".into(), json!(tq_labels));
    let two = [v.coeffs().to_vec(), coords.clone()];
    obj.insert("coeffs".into(), vec_json(&two[0], &exact));
    obj.insert("tq_coords".into(), vec_json(&two[1], &exact));
    if let Some(d) = digits {
        let f = move |x: &CycScalar| shadow(x, d);
        obj.insert("coeffs_float".into(), vec_json(&two[0], &f));
        obj.insert("tq_coords_float".into(), vec_json(&two[1], &f));
    }
    let d = digits.unwrap_or(DEFAULT_CSV_DIGITS);
    let mut csv_rows = Vec::new();
    for (space, names, values) in [("Z", &labels, &two[0]), ("T_q", &tq_labels, &two[1])] {
        for (name, x) in names.iter().zip(values.iter()).filter(|(_, x)| !x.is_zero()) {
            let mut rec = vec![space.to_string(), name.clone()];
            rec.extend(csv_cells(x, d));
            csv_rows.push(rec);
        }
    }
    Ok(Emission { json: Value::Object(obj), csv_header: header(&["space", "component"]), csv_rows })
}

/// Builds the requested object for `p`.
pub fn emit(p: u32, target: EmitTarget, float_digits: Option<u32>) -> Result<Emission> {
    let model = Model::get(p)?;
    let g = || model.generators();
    match target {
        EmitTarget::XMatrix => operator(&model, &g()?.x, float_digits),
        EmitTarget::YMatrix => operator(&model, &g()?.y, float_digits),
        EmitTarget::TMatrix => operator(&model, &g()?.t, float_digits),
        EmitTarget::SMatrix => operator(&model, model.s_operator()?, float_digits),
        EmitTarget::CBasis => labeled_basis(&model, &model.symmetric()?.c_basis, float_digits),
        EmitTarget::HBasis => labeled_basis(&model, &model.symmetric()?.h_basis, float_digits),
        EmitTarget::Fusion => fusion(&model, float_digits),
        EmitTarget::Ribbon => ribbon(&model, float_digits),
    }
}
