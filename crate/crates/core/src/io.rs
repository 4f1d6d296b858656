//! Canonical JSON documents.
//!
//! Float scalars are `[re, im]`; exact scalars are `"p/q"` strings, or a pair
//! of such strings when the imaginary part is nonzero. Object keys are sorted,
//! so `emit(parse(doc))` reproduces a canonical document byte for byte.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Matrix};
use crate::quantumwalk::{TrigKind, TrigPoly, TrigTerm, TrigWalkSpec, WalkSample};
use crate::ratfun::{ExactRational, Polynomial, RationalFunction, Scalar, C64};
use crate::ratmat::RatMatrix;
use crate::reduction::{LabeledMatrix, Selector};
use crate::unfolding::{Transform, Unfolding};

/// Conversion to and from the canonical JSON shape of a type.
pub trait Json: Sized {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

fn bad(what: &str, v: &Value) -> Error {
    let mut shown = v.to_string();
    if shown.len() > 60 {
        shown.truncate(57);
        shown.push_str("...");
    }
    Error::Parse(format!("expected {what}, found {shown}"))
}

/// Parses JSON text, reporting the line and column of syntax errors.
pub fn parse_document(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let msg = msg.split(" at line ").next().unwrap_or(&msg).to_string();
        Error::Parse(format!("line {}, column {}: {msg}", e.line(), e.column()))
    })
}

/// Pretty-printed JSON with sorted keys and a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn parse<J: Json>(text: &str) -> Result<J> {
    J::from_json(&parse_document(text)?)
}

pub fn emit<J: Json>(x: &J) -> String {
    to_canonical_string(&x.to_json())
}

pub fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing key `{key}`")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(what, v))
}

fn usize_of(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| bad(what, v))
}

/// `[re, im]`, with negative zero written as zero.
pub fn c64_to_json(z: C64) -> Value {
    json!([z.re + 0.0, z.im + 0.0])
}

pub fn c64_from_json(v: &Value) -> Result<C64> {
    if let Some(x) = v.as_f64() {
        return Ok(C64::new(x, 0.0));
    }
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(C64::new(re, im)),
            _ => Err(bad("[re, im]", v)),
        },
        _ => Err(bad("[re, im]", v)),
    }
}

fn exact_real(v: &Value) -> Result<ExactRational> {
    match v {
        Value::String(s) => s.parse().map_err(Error::Parse),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(ExactRational::from_i64(i)),
            None => Ok(ExactRational::from_f64(n.as_f64().ok_or_else(|| bad("number", v))?)),
        },
        _ => Err(bad("rational", v)),
    }
}

pub fn exact_to_json(q: &ExactRational) -> Value {
    if q.is_real() {
        Value::String(q.re().to_string())
    } else {
        json!([q.re().to_string(), q.im().to_string()])
    }
}

pub fn exact_from_json(v: &Value) -> Result<ExactRational> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(exact_real(re)? + ExactRational::i() * exact_real(im)?),
        Some(_) => Err(bad("scalar", v)),
        None => exact_real(v),
    }
}

pub fn scalar_to_json<T: Scalar>(x: &T) -> Value {
    if !T::EXACT {
        return c64_to_json(x.to_c64());
    }
    let two = T::from_i64(2);
    let re = x.add_ref(&x.conj()).div_ref(&two);
    let im = x.sub_ref(&x.conj()).div_ref(&two.mul_ref(&T::i()));
    if im.is_zero() {
        Value::String(re.to_string())
    } else {
        json!([re.to_string(), im.to_string()])
    }
}

pub fn scalar_from_json<T: Scalar>(v: &Value) -> Result<T> {
    if T::EXACT {
        return Ok(T::from_exact(&exact_from_json(v)?));
    }
    match c64_from_json(v) {
        Ok(z) => Ok(T::from_c64(z)),
        Err(e) => {
            let strings = v.is_string() || v.as_array().is_some_and(|a| a.iter().all(Value::is_string));
            if strings {
                Ok(T::from_exact(&exact_from_json(v)?))
            } else {
                Err(e)
            }
        }
    }
}

fn label_to_json(l: &str) -> Value {
    let integer_like = !l.is_empty() && l.bytes().all(|b| b.is_ascii_digit()) && (l == "0" || !l.starts_with('0'));
    match l.parse::<u64>() {
        Ok(n) if integer_like => json!(n),
        _ => Value::String(l.to_string()),
    }
}

fn label_from_json(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_u64() || n.is_i64() => Ok(n.to_string()),
        _ => Err(bad("vertex label", v)),
    }
}

pub fn labels_to_json<S: AsRef<str>>(labels: &[S]) -> Value {
    Value::Array(labels.iter().map(|l| label_to_json(l.as_ref())).collect())
}

pub fn labels_from_json(v: &Value) -> Result<Vec<String>> {
    array(v, "label list")?.iter().map(label_from_json).collect()
}

fn scalars<T: Scalar>(v: &Value) -> Result<Vec<T>> {
    array(v, "scalar list")?.iter().map(scalar_from_json).collect()
}

fn rows_to_json<T: Scalar>(m: &Matrix<T>) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(scalar_to_json).collect())).collect())
}

fn rows_from_json<T: Scalar>(v: &Value) -> Result<Matrix<T>> {
    let rows = array(v, "matrix rows")?.iter().map(scalars).collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(Error::Parse("matrix has no rows".into()));
    }
    Matrix::from_rows(rows).map_err(|e| Error::Parse(e.to_string()))
}

impl<T: Scalar> Json for RationalFunction<T> {
    fn to_json(&self) -> Value {
        let coeffs = |p: &Polynomial<T>| Value::Array(p.coeffs().iter().map(scalar_to_json).collect());
        json!({"num": coeffs(self.num()), "den": coeffs(self.den())})
    }

    fn from_json(v: &Value) -> Result<Self> {
        let num = Polynomial::new(scalars(field(v, "num")?)?);
        let den = Polynomial::new(scalars(field(v, "den")?)?);
        RationalFunction::new(num, den).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn shape(v: &Value) -> Result<(usize, usize, &Vec<Value>)> {
    let rows = usize_of(field(v, "rows")?, "row count")?;
    let cols = usize_of(field(v, "cols")?, "column count")?;
    let entries = array(field(v, "entries")?, "entry list")?;
    if entries.len() != rows * cols {
        return Err(Error::Parse(format!("{} entries for a {rows}×{cols} matrix", entries.len())));
    }
    Ok((rows, cols, entries))
}

impl<T: Scalar> Json for RatMatrix<T> {
    fn to_json(&self) -> Value {
        let entries: Vec<Value> = self.entries().iter().map(Json::to_json).collect();
        json!({"rows": self.rows(), "cols": self.cols(), "entries": entries})
    }

    fn from_json(v: &Value) -> Result<Self> {
        let (rows, cols, entries) = shape(v)?;
        let entries = entries.iter().map(RationalFunction::from_json).collect::<Result<Vec<_>>>()?;
        RatMatrix::new(rows, cols, entries)
    }
}

impl<T: Scalar> Json for Matrix<T> {
    fn to_json(&self) -> Value {
        let entries: Vec<Value> = self.data().iter().map(scalar_to_json).collect();
        json!({"rows": self.rows(), "cols": self.cols(), "entries": entries})
    }

    fn from_json(v: &Value) -> Result<Self> {
        let (rows, cols, entries) = shape(v)?;
        let data = entries.iter().map(scalar_from_json).collect::<Result<Vec<_>>>()?;
        Matrix::new(rows, cols, data)
    }
}

impl<T: Scalar> Json for LabeledMatrix<T> {
    fn to_json(&self) -> Value {
        json!({
            "labels": labels_to_json(self.labels()),
            "matrix": rows_to_json(self.matrix()),
            "hermitian": self.is_hermitian(),
        })
    }

    fn from_json(v: &Value) -> Result<Self> {
        let m = rows_from_json(field(v, "matrix")?)?;
        let g = match v.get("labels") {
            Some(l) => LabeledMatrix::new(labels_from_json(l)?, m)?,
            None => LabeledMatrix::unlabeled(m)?,
        };
        if v.get("hermitian").and_then(Value::as_bool) == Some(true) && !g.is_hermitian() {
            return Err(Error::Parse("matrix is declared Hermitian but is not".into()));
        }
        Ok(g)
    }
}

impl<T: Scalar> Json for Selector<T> {
    fn to_json(&self) -> Value {
        match self {
            Selector::Subset(s) => json!({"subset": labels_to_json(s)}),
            Selector::Frame(f) => json!({"frame": rows_to_json(f)}),
        }
    }

    fn from_json(v: &Value) -> Result<Self> {
        match (v.get("subset"), v.get("frame")) {
            (Some(s), None) => Ok(Selector::Subset(labels_from_json(s)?)),
            (None, Some(f)) => Ok(Selector::Frame(rows_from_json(f)?)),
            _ => Err(bad("exactly one of `subset` or `frame`", v)),
        }
    }
}

impl Json for Unfolding {
    fn to_json(&self) -> Value {
        let provenance = serde_json::to_value(self.provenance()).expect("transforms serialize");
        json!({
            "matrix": self.matrix().to_json(),
            "subset": labels_to_json(&self.subset()),
            "provenance": provenance,
        })
    }

    fn from_json(v: &Value) -> Result<Self> {
        let matrix = LabeledMatrix::from_json(field(v, "matrix")?)?;
        let subset = labels_from_json(field(v, "subset")?)?;
        if subset.len() > matrix.size() || subset[..] != matrix.labels()[..subset.len()] {
            return Err(Error::Parse("the subset must list the leading labels of the matrix".into()));
        }
        let provenance: Vec<Transform> = match v.get("provenance") {
            Some(p) => serde_json::from_value(p.clone()).map_err(|e| Error::Parse(e.to_string()))?,
            None => Vec::new(),
        };
        Unfolding::from_labeled(matrix, subset.len(), provenance)
    }
}

fn cmatrix_to_json(m: &CMatrix) -> Value {
    Value::Array((0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| c64_to_json(m[(i, j)]))).collect())
}

impl Json for WalkSample {
    fn to_json(&self) -> Value {
        let blocks: Vec<Value> = self.blocks.iter().map(cmatrix_to_json).collect();
        json!({"subset": labels_to_json(&self.subset), "times": self.times, "blocks": blocks})
    }

    fn from_json(v: &Value) -> Result<Self> {
        let subset = labels_from_json(field(v, "subset")?)?;
        let times = array(field(v, "times")?, "time list")?
            .iter()
            .map(|t| t.as_f64().ok_or_else(|| bad("time", t)))
            .collect::<Result<Vec<_>>>()?;
        let k = subset.len();
        let blocks = array(field(v, "blocks")?, "block list")?
            .iter()
            .map(|b| {
                let z = array(b, "block")?.iter().map(c64_from_json).collect::<Result<Vec<_>>>()?;
                if z.len() != k * k {
                    return Err(Error::Parse(format!("block with {} entries for a subset of size {k}", z.len())));
                }
                Ok(CMatrix::from_row_slice(k, k, &z))
            })
            .collect::<Result<Vec<_>>>()?;
        if blocks.len() != times.len() {
            return Err(Error::Parse("one block per time is required".into()));
        }
        Ok(WalkSample { subset, times, blocks })
    }
}

impl Json for TrigWalkSpec {
    fn to_json(&self) -> Value {
        let entry = |p: &TrigPoly| {
            Value::Array(
                p.terms()
                    .iter()
                    .map(|t| {
                        let kind = if t.kind == TrigKind::Cos { "cos" } else { "sin" };
                        json!({"amp": [t.amp.re().to_string(), t.amp.im().to_string()], "freq": t.freq, "kind": kind})
                    })
                    .collect(),
            )
        };
        json!({"size": self.size, "entries": self.entries.iter().map(entry).collect::<Vec<_>>()})
    }

    fn from_json(v: &Value) -> Result<Self> {
        let size = usize_of(field(v, "size")?, "size")?;
        let term = |t: &Value| -> Result<TrigTerm> {
            let amp = exact_from_json(field(t, "amp")?)?;
            let freq = u32::try_from(usize_of(field(t, "freq")?, "frequency")?).map_err(|_| bad("frequency", t))?;
            let kind = match field(t, "kind")?.as_str() {
                Some("cos") => TrigKind::Cos,
                Some("sin") => TrigKind::Sin,
                _ => return Err(bad("`cos` or `sin`", t)),
            };
            Ok(TrigTerm { amp, freq, kind })
        };
        let entries = array(field(v, "entries")?, "entry list")?
            .iter()
            .map(|e| Ok(TrigPoly::new(array(e, "term list")?.iter().map(term).collect::<Result<Vec<_>>>()?)))
            .collect::<Result<Vec<_>>>()?;
        TrigWalkSpec::new(size, entries).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// A JSON object from key/value pairs.
pub fn object<I: IntoIterator<Item = (&'static str, Value)>>(pairs: I) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{hypercube, path};
    use crate::quantumwalk::{restricted_walk, weighted_target};
    use crate::ratfun::{ExactRational as Q, FloatComplex};
    use crate::reduction::reduce;

    #[test]
    fn k2_reduction_document() {
        let r = reduce(&path::<Q>(2), &["1"]).unwrap();
        let doc = emit(&r);
        assert_eq!(
            serde_json::from_str::<Value>(&doc).unwrap(),
            json!({"rows": 1, "cols": 1, "entries": [{"num": ["1"], "den": ["0", "1"]}]})
        );
        assert_eq!(parse::<RatMatrix<Q>>(&doc).unwrap(), r);
    }

    #[test]
    fn labeled_round_trips_byte_for_byte() {
        let k2 = emit(&path::<Q>(2));
        assert_eq!(emit(&parse::<LabeledMatrix<Q>>(&k2).unwrap()), k2);
        assert!(k2.contains("\"labels\": [\n    1,"));
        let q3 = emit(&hypercube::<FloatComplex>(3));
        assert!(q3.contains("\"000\""));
        assert_eq!(emit(&parse::<LabeledMatrix<FloatComplex>>(&q3).unwrap()), q3);
    }

    #[test]
    fn complex_exact_scalars() {
        let z = Q::from_ratio(1, 3) + Q::i() * Q::from_ratio(-2, 5);
        assert_eq!(scalar_to_json(&z), json!(["1/3", "-2/5"]));
        assert_eq!(scalar_from_json::<Q>(&json!(["1/3", "-2/5"])).unwrap(), z);
        assert_eq!(scalar_from_json::<Q>(&json!(2)).unwrap(), Q::from_i64(2));
        assert_eq!(scalar_from_json::<FloatComplex>(&json!("1/4")).unwrap(), FloatComplex::new(0.25, 0.0));
    }

    #[test]
    fn selectors_walks_and_specs() {
        let s = Selector::<Q>::subset(&["1", "a"]);
        assert_eq!(Selector::<Q>::from_json(&s.to_json()).unwrap(), s);
        let f = Selector::Frame(Matrix::<Q>::from_i64(&[&[1], &[0]]));
        assert_eq!(Selector::<Q>::from_json(&f.to_json()).unwrap(), f);
        assert!(Selector::<Q>::from_json(&json!({})).is_err());
        let w = restricted_walk(&path::<Q>(3), &["1", "3"], &[0.0, 0.5]).unwrap();
        assert_eq!(parse::<WalkSample>(&emit(&w)).unwrap(), w);
        let spec = weighted_target();
        assert_eq!(parse::<TrigWalkSpec>(&emit(&spec)).unwrap(), spec);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse::<LabeledMatrix<Q>>("{\n  \"matrix\": [[0, 1],\n") {
            Err(Error::Parse(m)) => assert!(m.starts_with("line 3")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse::<LabeledMatrix<Q>>("{\"matrix\": [[0, 1]]}"), Err(Error::DimensionMismatch(_) | Error::Parse(_))));
    }
}
