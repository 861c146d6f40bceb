//! Serialization helpers shared by every JSON report.
//!
//! Indices are stored 0-based in Rust values and written 1-based.
//! Matrices are written as nested row-major arrays; complex64 entries as
//! `[re, im]`, exact entries as `"p/q"` (or `["p/q", "r/s"]` when not real).

use num_complex::Complex64;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use serde_json::{json, Value};

use crate::matrix::Matrix;
use crate::scalar::{format_rational, GaussRational, Scalar};

pub fn one_based<S: Serializer>(i: &usize, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u64(*i as u64 + 1)
}

pub fn one_based_opt<S: Serializer>(i: &Option<usize>, s: S) -> Result<S::Ok, S::Error> {
    match i {
        Some(i) => s.serialize_some(&(i + 1)),
        None => s.serialize_none(),
    }
}

pub fn one_based_vec<S: Serializer>(v: &[usize], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for i in v {
        seq.serialize_element(&(i + 1))?;
    }
    seq.end()
}

pub fn one_based_pair<S: Serializer>(p: &(usize, usize), s: S) -> Result<S::Ok, S::Error> {
    (p.0 + 1, p.1 + 1).serialize(s)
}

pub fn one_based_pairs<S: Serializer>(v: &[(usize, usize)], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for (i, j) in v {
        seq.serialize_element(&(i + 1, j + 1))?;
    }
    seq.end()
}

pub fn one_based_parts<S: Serializer>(v: &[Vec<usize>], s: S) -> Result<S::Ok, S::Error> {
    let shifted: Vec<Vec<usize>> = v.iter().map(|p| p.iter().map(|i| i + 1).collect()).collect();
    shifted.serialize(s)
}

/// JSON encoding of one entry.
pub trait EntryCodec: Scalar {
    fn encode(&self) -> Value;
}

impl EntryCodec for Complex64 {
    fn encode(&self) -> Value {
        json!([self.re, self.im])
    }
}

impl EntryCodec for GaussRational {
    fn encode(&self) -> Value {
        if self.is_real() {
            Value::String(format_rational(&self.re))
        } else {
            json!([format_rational(&self.re), format_rational(&self.im)])
        }
    }
}

impl<T: EntryCodec> Matrix<T> {
    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows())
                .map(|i| Value::Array(self.row(i).iter().map(EntryCodec::encode).collect()))
                .collect(),
        )
    }
}

impl<T: EntryCodec> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Serializes a complex number as `[re, im]`.
pub fn complex_pair<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

pub fn complex_pair_opt<S: Serializer>(z: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
    z.map(|z| [z.re, z.im]).serialize(s)
}

pub fn complex_pairs_opt<S: Serializer>(v: &[Option<Complex64>], s: S) -> Result<S::Ok, S::Error> {
    let out: Vec<Option<[f64; 2]>> = v.iter().map(|z| z.map(|z| [z.re, z.im])).collect();
    out.serialize(s)
}
