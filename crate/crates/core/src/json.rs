//! JSON file schemas and exact-number rendering.
//!
//! Big integers are written as decimal strings and rationals as `"a/b"`
//! strings (or `"a"` when integral), so no consumer loses precision.

use std::path::Path;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{input, Result};
use crate::weights::{SpaceParams, SymmetricSet, WeightTuple};

pub fn ser_biguint<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn ser_rational<S: Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&render_rational(v))
}

pub fn ser_rationals<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(render_rational))
}

/// `"a/b"` in lowest terms, or `"a"` for integers.
pub fn render_rational(v: &BigRational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Parses `"a/b"`, `"a"` or a plain decimal like `"0.1"`.
pub fn parse_rational(raw: &str) -> Result<BigRational> {
    let raw = raw.trim();
    let bad = || crate::error::Error::Input(format!("cannot parse {raw:?} as a rational"));
    if let Some((num, den)) = raw.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return input(format!("zero denominator in {raw:?}"));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int, frac)) = raw.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int: BigInt = if int.is_empty() || int == "-" { BigInt::zero() } else { int.parse().map_err(|_| bad())? };
        let frac_val: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let magnitude = int.magnitude().clone();
        let value = BigRational::new(BigInt::from(magnitude) * &scale + frac_val, scale);
        return Ok(if negative { -value } else { value });
    }
    Ok(BigRational::from_integer(raw.parse().map_err(|_| bad())?))
}

/// On-disk form of a symmetric set: `{ "q": 3, "n": 6, "tuples": [[2,2,2], ...] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricSetJson {
    pub q: usize,
    pub n: usize,
    pub tuples: Vec<Vec<usize>>,
}

impl SymmetricSetJson {
    pub fn into_set(self) -> Result<SymmetricSet> {
        let params = SpaceParams::new(self.q, self.n)?;
        let tuples = self.tuples.into_iter().map(|t| WeightTuple::new(t, &params)).collect::<Result<Vec<_>>>()?;
        SymmetricSet::new(params, tuples)
    }
}

impl From<&SymmetricSet> for SymmetricSetJson {
    fn from(s: &SymmetricSet) -> Self {
        SymmetricSetJson {
            q: s.params().q(),
            n: s.params().n(),
            tuples: s.tuples().iter().map(|t| t.counts().to_vec()).collect(),
        }
    }
}

/// A file holding either one symmetric set or an array of them.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum SetsFile {
    Many(Vec<SymmetricSetJson>),
    Wrapped { sets: Vec<SymmetricSetJson> },
    One(SymmetricSetJson),
}

pub fn read_sets(path: &Path) -> Result<Vec<SymmetricSet>> {
    let text = std::fs::read_to_string(path)?;
    parse_sets(&text)
}

pub fn parse_sets(text: &str) -> Result<Vec<SymmetricSet>> {
    let file: SetsFile = serde_json::from_str(text)?;
    let raw = match file {
        SetsFile::Many(v) | SetsFile::Wrapped { sets: v } => v,
        SetsFile::One(s) => vec![s],
    };
    raw.into_iter().map(SymmetricSetJson::into_set).collect()
}

pub fn sets_to_json(sets: &[SymmetricSet]) -> serde_json::Value {
    serde_json::to_value(sets.iter().map(SymmetricSetJson::from).collect::<Vec<_>>()).expect("plain data")
}

/// Point set `R` in the integer box `[-N, N]^2`: `{ "N": 2, "points": [[0,0], [1,-1]] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetJson {
    #[serde(rename = "N")]
    pub radius: i64,
    pub points: Vec<[i64; 2]>,
}

/// Label sets `R^(1..q)` in `Z_N^{q-1}`: `{ "q": 3, "N": 5, "sets": [[[0,0],[1,2]], ...] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSetsJson {
    pub q: usize,
    #[serde(rename = "N")]
    pub modulus: u64,
    pub sets: Vec<Vec<Vec<u64>>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("1/10").unwrap(), BigRational::new(1.into(), 10.into()));
        assert_eq!(parse_rational("0.1").unwrap(), BigRational::new(1.into(), 10.into()));
        assert_eq!(parse_rational("-2.50").unwrap(), BigRational::new((-5).into(), 2.into()));
        assert_eq!(parse_rational("3").unwrap(), BigRational::from_integer(3.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn rational_rendering() {
        assert_eq!(render_rational(&BigRational::new(2.into(), 4.into())), "1/2");
        assert_eq!(render_rational(&BigRational::from_integer(7.into())), "7");
    }

    #[test]
    fn sets_file_shapes() {
        let one = r#"{"q":3,"n":2,"tuples":[[2,0,0],[1,1,0]]}"#;
        assert_eq!(parse_sets(one).unwrap().len(), 1);
        let many = format!("[{one},{one},{one}]");
        assert_eq!(parse_sets(&many).unwrap().len(), 3);
        let wrapped = format!(r#"{{"sets":[{one},{one}]}}"#);
        assert_eq!(parse_sets(&wrapped).unwrap().len(), 2);
        assert!(parse_sets(r#"{"q":3,"n":2,"tuples":[[1,0,0]]}"#).is_err());
        let sets = parse_sets(&many).unwrap();
        let back = serde_json::to_string(&sets_to_json(&sets)).unwrap();
        assert_eq!(parse_sets(&back).unwrap(), sets);
    }
}
