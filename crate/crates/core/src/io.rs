//! JSON tensor format and 17-significant-digit number output.
//!
//! ```text
//! {"order": m, "dim": n, "format": "dense" | "coo",
//!  "entries": nested-array | [{"idx": [i1, ..., im], "val": x | [re, im]}]}
//! ```
//!
//! Dense entries nest `m` levels deep, each level of length `n`, first index
//! outermost. Coordinate indices are 1-based. A value written as `[re, im]`
//! makes the whole tensor complex.

use std::io;

use num_complex::Complex64;
use serde_json::ser::Formatter;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarKind};
use crate::tensor::{validate, RawEntries, RawTensor, Storage, Tensor};

/// A parsed tensor of either scalar kind.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyTensor {
    Real(Tensor<f64>),
    Complex(Tensor<Complex64>),
}

impl AnyTensor {
    pub fn order(&self) -> usize {
        match self {
            AnyTensor::Real(t) => t.order(),
            AnyTensor::Complex(t) => t.order(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyTensor::Real(t) => t.dim(),
            AnyTensor::Complex(t) => t.dim(),
        }
    }

    pub fn kind(&self) -> ScalarKind {
        match self {
            AnyTensor::Real(_) => ScalarKind::Real,
            AnyTensor::Complex(_) => ScalarKind::Complex,
        }
    }

    pub fn is_nonneg(&self) -> bool {
        match self {
            AnyTensor::Real(t) => t.is_nonneg(),
            AnyTensor::Complex(t) => t.is_nonneg(),
        }
    }

    /// Widens to complex entries.
    pub fn to_complex(&self) -> Tensor<Complex64> {
        match self {
            AnyTensor::Real(t) => t.map(|v| Complex64::new(v, 0.0)),
            AnyTensor::Complex(t) => t.clone(),
        }
    }

    /// The real tensor, if every entry has zero imaginary part.
    pub fn to_real(&self) -> Option<Tensor<f64>> {
        match self {
            AnyTensor::Real(t) => Some(t.clone()),
            AnyTensor::Complex(t) => {
                let mut real = true;
                t.for_each_nonzero(|_, v| real &= v.im == 0.0);
                real.then(|| t.map(|v| v.re))
            }
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            AnyTensor::Real(t) => tensor_to_value(t),
            AnyTensor::Complex(t) => tensor_to_value(t),
        }
    }
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

#[derive(Clone, Copy)]
struct Leaf {
    re: f64,
    im: Option<f64>,
}

fn parse_leaf(v: &Value, at: &str) -> Result<Leaf> {
    match v {
        Value::Number(num) => Ok(Leaf {
            re: num
                .as_f64()
                .ok_or_else(|| perr(format!("{at}: not a finite number")))?,
            im: None,
        }),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0].as_f64();
            let im = pair[1].as_f64();
            match (re, im) {
                (Some(re), Some(im)) => Ok(Leaf { re, im: Some(im) }),
                _ => Err(perr(format!(
                    "{at}: complex value must be [re, im] numbers"
                ))),
            }
        }
        _ => Err(perr(format!("{at}: expected a number or [re, im]"))),
    }
}

fn collect_dense(v: &Value, depth: usize, dim: usize, out: &mut Vec<Leaf>) -> Result<()> {
    if depth == 0 {
        out.push(parse_leaf(v, "dense entry")?);
        return Ok(());
    }
    let arr = v
        .as_array()
        .ok_or_else(|| perr("dense entries must nest one array level per index"))?;
    if arr.len() != dim {
        return Err(perr(format!(
            "dense level has {} elements, expected {dim}",
            arr.len()
        )));
    }
    for child in arr {
        collect_dense(child, depth - 1, dim, out)?;
    }
    Ok(())
}

fn field_usize(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    obj.get(key)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| perr(format!("missing or invalid \"{key}\"")))
}

/// Parses and validates a tensor document.
pub fn parse_tensor_value(doc: &Value) -> Result<AnyTensor> {
    let obj = doc
        .as_object()
        .ok_or_else(|| perr("tensor document must be an object"))?;
    let order = field_usize(obj, "order")?;
    let dim = field_usize(obj, "dim")?;
    if order < 1 {
        return Err(Error::InvalidOrder);
    }
    if dim < 1 {
        return Err(Error::InvalidDim);
    }
    let format = obj
        .get("format")
        .and_then(Value::as_str)
        .ok_or_else(|| perr("missing \"format\""))?;
    let entries = obj
        .get("entries")
        .ok_or_else(|| perr("missing \"entries\""))?;

    match format {
        "dense" => {
            let mut leaves = Vec::new();
            collect_dense(entries, order, dim, &mut leaves)?;
            if leaves.iter().any(|l| l.im.is_some()) {
                let data = leaves
                    .iter()
                    .map(|l| Complex64::new(l.re, l.im.unwrap_or(0.0)))
                    .collect();
                Ok(AnyTensor::Complex(validate(RawTensor {
                    order,
                    dim,
                    entries: RawEntries::Dense(data),
                })?))
            } else {
                let data = leaves.iter().map(|l| l.re).collect();
                Ok(AnyTensor::Real(validate(RawTensor {
                    order,
                    dim,
                    entries: RawEntries::Dense(data),
                })?))
            }
        }
        "coo" => {
            let list = entries
                .as_array()
                .ok_or_else(|| perr("coo entries must be an array"))?;
            let mut parsed = Vec::with_capacity(list.len());
            for (pos, item) in list.iter().enumerate() {
                let item = item
                    .as_object()
                    .ok_or_else(|| perr(format!("coo entry {pos} must be an object")))?;
                let idx = item
                    .get("idx")
                    .and_then(Value::as_array)
                    .ok_or_else(|| perr(format!("coo entry {pos}: missing \"idx\"")))?
                    .iter()
                    .map(|v| v.as_u64().map(|i| i as usize))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| {
                        perr(format!(
                            "coo entry {pos}: indices must be nonnegative integers"
                        ))
                    })?;
                let val = item
                    .get("val")
                    .ok_or_else(|| perr(format!("coo entry {pos}: missing \"val\"")))?;
                parsed.push((idx, parse_leaf(val, "coo value")?));
            }
            if parsed.iter().any(|(_, l)| l.im.is_some()) {
                let list = parsed
                    .into_iter()
                    .map(|(i, l)| (i, Complex64::new(l.re, l.im.unwrap_or(0.0))))
                    .collect();
                Ok(AnyTensor::Complex(validate(RawTensor {
                    order,
                    dim,
                    entries: RawEntries::Coo(list),
                })?))
            } else {
                let list = parsed.into_iter().map(|(i, l)| (i, l.re)).collect();
                Ok(AnyTensor::Real(validate(RawTensor {
                    order,
                    dim,
                    entries: RawEntries::Coo(list),
                })?))
            }
        }
        other => Err(perr(format!("unknown format \"{other}\""))),
    }
}

pub fn parse_tensor_json(text: &str) -> Result<AnyTensor> {
    let doc: Value = serde_json::from_str(text).map_err(|e| perr(e.to_string()))?;
    parse_tensor_value(&doc)
}

/// Scalars that can be written into the JSON format.
pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Value;
}

impl JsonScalar for f64 {
    fn to_json(&self) -> Value {
        json!(*self)
    }
}

impl JsonScalar for Complex64 {
    fn to_json(&self) -> Value {
        json!([self.re, self.im])
    }
}

fn nest_dense(values: &[Value], depth: usize, dim: usize) -> Value {
    if depth == 0 {
        return values[0].clone();
    }
    let chunk = values.len() / dim;
    Value::Array(
        values
            .chunks(chunk)
            .map(|c| nest_dense(c, depth - 1, dim))
            .collect(),
    )
}

/// Writes a tensor in the layout of its storage (`dense` or `coo`).
pub fn tensor_to_value<T: JsonScalar>(t: &Tensor<T>) -> Value {
    match t.storage() {
        Storage::Dense(data) => {
            let leaves: Vec<Value> = data.iter().map(JsonScalar::to_json).collect();
            json!({
                "order": t.order(),
                "dim": t.dim(),
                "format": "dense",
                "entries": nest_dense(&leaves, t.order(), t.dim()),
            })
        }
        Storage::Sparse { .. } => {
            let mut entries = Vec::with_capacity(t.nnz());
            t.for_each_nonzero(|idx, v| {
                let idx: Vec<usize> = idx.iter().map(|i| i + 1).collect();
                entries.push(json!({ "idx": idx, "val": v.to_json() }));
            });
            json!({
                "order": t.order(),
                "dim": t.dim(),
                "format": "coo",
                "entries": entries,
            })
        }
    }
}

/// `printf("%.17g")`: 17 significant digits with trailing zeros removed.
pub fn format_g17(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (16 - exp) as usize;
        trim_fraction(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// JSON formatter emitting floats with [`format_g17`].
#[derive(Debug, Clone, Default)]
pub struct G17Formatter {
    pretty: Option<serde_json::ser::PrettyFormatter<'static>>,
}

impl G17Formatter {
    pub fn pretty() -> Self {
        G17Formatter {
            pretty: Some(serde_json::ser::PrettyFormatter::new()),
        }
    }
}

macro_rules! delegate {
    ($name:ident $(, $arg:ident : $ty:ty)*) => {
        fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            match &mut self.pretty {
                Some(p) => p.$name(w $(, $arg)*),
                None => serde_json::ser::CompactFormatter.$name(w $(, $arg)*),
            }
        }
    };
}

impl Formatter for G17Formatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_g17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        w.write_all(format_g17(value as f64).as_bytes())
    }

    delegate!(begin_array);
    delegate!(end_array);
    delegate!(begin_array_value, first: bool);
    delegate!(end_array_value);
    delegate!(begin_object);
    delegate!(end_object);
    delegate!(begin_object_key, first: bool);
    delegate!(begin_object_value);
    delegate!(end_object_value);
}

fn write_with(value: &Value, formatter: G17Formatter) -> String {
    use serde::Serialize;
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, formatter);
    value
        .serialize(&mut ser)
        .expect("serializing a Value cannot fail");
    String::from_utf8(buf).expect("JSON output is UTF-8")
}

/// Compact JSON with 17-significant-digit floats.
pub fn to_json_string(value: &Value) -> String {
    write_with(value, G17Formatter::default())
}

pub fn to_json_string_pretty(value: &Value) -> String {
    write_with(value, G17Formatter::pretty())
}
