//! Family files.
//!
//! ```json
//! {"scalar": "rational", "dims": [2, 2], "blocks": {"1,2": [["0", "0"], ["1", "0"]]}}
//! ```
//!
//! Keys are 1-based `"i,j"`; omitted blocks are zero. Rational entries are
//! `"p/q"` strings (integers and decimal strings are accepted too) or
//! `["p/q", "r/s"]` for `p/q + (r/s) i`. Complex64 entries are `[re, im]`
//! pairs or bare numbers.

use std::collections::HashSet;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::family::{CFamily, CoupledFamily, QFamily};
use crate::matrix::Matrix;
use crate::report::EntryCodec;
use crate::scalar::{parse_rational, GaussRational, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum AnyFamily {
    Rational(QFamily),
    Complex(CFamily),
}

impl AnyFamily {
    pub fn scalar_name(&self) -> &'static str {
        match self {
            AnyFamily::Rational(_) => GaussRational::NAME,
            AnyFamily::Complex(_) => Complex64::NAME,
        }
    }

    pub fn dims(&self) -> &[usize] {
        match self {
            AnyFamily::Rational(f) => f.dims(),
            AnyFamily::Complex(f) => f.dims(),
        }
    }

    pub fn to_c64(&self) -> CFamily {
        match self {
            AnyFamily::Rational(f) => f.to_c64(),
            AnyFamily::Complex(f) => f.clone(),
        }
    }

    /// Exact family; floating entries keep their binary values.
    pub fn to_exact(&self) -> QFamily {
        match self {
            AnyFamily::Rational(f) => f.clone(),
            AnyFamily::Complex(f) => f.to_exact(),
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            AnyFamily::Rational(f) => serialize_family(f),
            AnyFamily::Complex(f) => serialize_family(f),
        }
    }
}

struct RawBlocks(Vec<(String, Value)>);

impl<'de> Deserialize<'de> for RawBlocks {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = RawBlocks;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from \"i,j\" to a matrix")
            }
            fn visit_map<M: MapAccess<'de>>(self, mut m: M) -> std::result::Result<RawBlocks, M::Error> {
                let mut seen = HashSet::new();
                let mut out = Vec::new();
                while let Some((k, v)) = m.next_entry::<String, Value>()? {
                    if !seen.insert(k.clone()) {
                        return Err(de::Error::custom(format!("duplicate block key \"{k}\"")));
                    }
                    out.push((k, v));
                }
                Ok(RawBlocks(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Deserialize)]
struct RawFile {
    scalar: String,
    dims: Vec<usize>,
    #[serde(default)]
    blocks: Option<RawBlocks>,
}

fn parse_key(key: &str, k: usize) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("block key \"{key}\" is not of the form \"i,j\" with 1 <= i, j <= {k}"));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    let i: usize = a.trim().parse().map_err(|_| bad())?;
    let j: usize = b.trim().parse().map_err(|_| bad())?;
    if i == 0 || j == 0 || i > k || j > k {
        return Err(bad());
    }
    Ok((i - 1, j - 1))
}

fn rational_part(v: &Value) -> Option<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n.as_i64().map(|x| BigRational::from_integer(x.into())),
        _ => None,
    }
}

fn parse_rational_entry(v: &Value) -> Option<GaussRational> {
    match v {
        Value::Array(p) if p.len() == 2 => Some(GaussRational::new(rational_part(&p[0])?, rational_part(&p[1])?)),
        _ => Some(GaussRational::new(rational_part(v)?, BigRational::from_integer(0.into()))),
    }
}

fn parse_complex_entry(v: &Value) -> Option<Complex64> {
    match v {
        Value::Array(p) if p.len() == 2 => Some(Complex64::new(p[0].as_f64()?, p[1].as_f64()?)),
        Value::Number(n) => Some(Complex64::new(n.as_f64()?, 0.0)),
        _ => None,
    }
}

fn parse_matrix<T: Scalar>(
    v: &Value,
    (i, j): (usize, usize),
    (rows, cols): (usize, usize),
    entry: impl Fn(&Value) -> Option<T>,
) -> Result<Matrix<T>> {
    let at = format!("block ({},{})", i + 1, j + 1);
    let shape_err = |got_rows, got_cols| Error::BlockShape {
        i: i + 1,
        j: j + 1,
        got_rows,
        got_cols,
        want_rows: rows,
        want_cols: cols,
    };
    let row_values = v.as_array().ok_or_else(|| Error::Parse(format!("{at}: expected an array of rows")))?;
    let mut data = Vec::with_capacity(rows * cols);
    for (r, row) in row_values.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| Error::Parse(format!("{at}: row {} is not an array", r + 1)))?;
        if row.len() != cols {
            return Err(shape_err(row_values.len(), row.len()));
        }
        for (c, x) in row.iter().enumerate() {
            let e = entry(x).ok_or_else(|| {
                Error::Parse(format!("{at}: malformed {} entry at row {}, column {}: {x}", T::NAME, r + 1, c + 1))
            })?;
            data.push(e);
        }
    }
    if row_values.len() != rows {
        return Err(shape_err(row_values.len(), cols));
    }
    Matrix::new(rows, cols, data)
}

fn build<T: Scalar>(dims: Vec<usize>, raw: &[(String, Value)], entry: impl Fn(&Value) -> Option<T>) -> Result<CoupledFamily<T>> {
    let k = dims.len();
    let mut f = CoupledFamily::<T>::zeros(dims.clone());
    for (key, v) in raw {
        let (i, j) = parse_key(key, k)?;
        let m = parse_matrix(v, (i, j), (dims[i], dims[j]), &entry)?;
        f.set_block(i, j, m)?;
    }
    Ok(f)
}

pub fn parse_family(text: &str) -> Result<AnyFamily> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if raw.dims.is_empty() || raw.dims.contains(&0) {
        return Err(Error::Parse("dims must be a nonempty list of positive integers".into()));
    }
    let blocks = raw.blocks.map(|b| b.0).unwrap_or_default();
    match raw.scalar.as_str() {
        "rational" => Ok(AnyFamily::Rational(build(raw.dims, &blocks, parse_rational_entry)?)),
        "complex64" => Ok(AnyFamily::Complex(build(raw.dims, &blocks, parse_complex_entry)?)),
        other => Err(Error::Parse(format!("unknown scalar \"{other}\" (expected \"rational\" or \"complex64\")"))),
    }
}

struct FileRef<'a, T>(&'a CoupledFamily<T>);

impl<T: EntryCodec> Serialize for FileRef<'_, T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Blocks<'a, T>(&'a CoupledFamily<T>);
        impl<T: EntryCodec> Serialize for Blocks<'_, T> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let nonzero: Vec<_> = self.0.blocks().filter(|(_, _, b)| !b.is_zero_within(0.0)).collect();
                let mut m = s.serialize_map(Some(nonzero.len()))?;
                for (i, j, b) in nonzero {
                    m.serialize_entry(&format!("{},{}", i + 1, j + 1), b)?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("scalar", T::NAME)?;
        m.serialize_entry("dims", self.0.dims())?;
        m.serialize_entry("blocks", &Blocks(self.0))?;
        m.end()
    }
}

/// Family file text; zero blocks are omitted and keys follow row-major order.
pub fn serialize_family<T: EntryCodec>(f: &CoupledFamily<T>) -> String {
    let mut s = serde_json::to_string_pretty(&FileRef(f)).expect("family serializes");
    s.push('\n');
    s
}

/// JSON value of the family file, for embedding in reports.
pub fn family_value<T: EntryCodec>(f: &CoupledFamily<T>) -> Value {
    serde_json::to_value(FileRef(f)).expect("family serializes")
}
