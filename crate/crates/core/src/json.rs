//! JSON encodings shared by certificates, reports and CLI inputs.
//!
//! * rationals are strings, `"p/q"` or `"p"` when `q = 1`;
//! * Laurent polynomials are objects from exponent strings to rational
//!   strings, written in increasing exponent order: `{"-1":"1","2":"3/2"}`;
//! * matrices are row-major arrays of arrays.
//!
//! The submodules are meant for `#[serde(with = "...")]`.

use std::str::FromStr;

use serde::de::Error as _;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};
use crate::{LaurentPoly, MatrixQ, Rational};

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Format(format!("not a rational number: {s:?}"));
    let r = match s.split_once('/') {
        Some((n, d)) => {
            let n = num_bigint::BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = num_bigint::BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if num_traits::Zero::is_zero(&d) {
                return Err(Error::Format(format!("zero denominator in {s:?}")));
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(num_bigint::BigInt::from_str(s).map_err(|_| bad())?),
    };
    Ok(r)
}

pub fn rational_to_string(r: &Rational) -> String {
    r.to_string()
}

pub fn matrix_from_value(v: &serde_json::Value) -> Result<MatrixQ> {
    let rows: Vec<Vec<RationalText>> = serde_json::from_value(v.clone())
        .map_err(|e| Error::Format(format!("matrix: {e}")))?;
    MatrixQ::from_rows(rows.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect())
}

pub fn matrix_to_value(m: &MatrixQ) -> serde_json::Value {
    serde_json::Value::Array(
        m.rows()
            .map(|r| r.iter().map(|x| serde_json::Value::String(x.to_string())).collect())
            .collect(),
    )
}

/// A rational that (de)serializes as a string; numbers are accepted on input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalText(pub Rational);

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(s) => parse_rational(&s).map(RationalText).map_err(D::Error::custom),
            Raw::Int(i) => Ok(RationalText(Rational::from_integer(i.into()))),
        }
    }
}

impl serde::Serialize for RationalText {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        RationalText::deserialize(d).map(|r| r.0)
    }
}

pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&r.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        Ok(Vec::<RationalText>::deserialize(d)?.into_iter().map(|r| r.0).collect())
    }
}

pub mod laurent {
    use super::*;

    pub fn serialize<S: Serializer>(p: &LaurentPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(p.terms().len()))?;
        for (e, c) in p.terms() {
            map.serialize_entry(&e.to_string(), &c.to_string())?;
        }
        map.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<LaurentPoly, D::Error> {
        let raw: std::collections::BTreeMap<String, RationalText> =
            std::collections::BTreeMap::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            let e: i64 = e
                .trim()
                .parse()
                .map_err(|_| D::Error::custom(format!("bad exponent {e:?}")))?;
            terms.push((e, c.0));
        }
        Ok(LaurentPoly::from_terms(terms))
    }
}

pub mod matrix_q {
    use super::*;

    pub fn serialize<S: Serializer>(m: &MatrixQ, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut rows = s.serialize_seq(Some(m.dim()))?;
        for r in m.rows() {
            let row: Vec<String> = r.iter().map(ToString::to_string).collect();
            rows.serialize_element(&row)?;
        }
        rows.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<MatrixQ, D::Error> {
        let rows = Vec::<Vec<RationalText>>::deserialize(d)?;
        MatrixQ::from_rows(rows.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect())
            .map_err(D::Error::custom)
    }
}

pub mod matrix_q_vec {
    use super::*;

    #[derive(serde::Serialize, Deserialize)]
    struct Wrapped(#[serde(with = "super::matrix_q")] MatrixQ);

    pub fn serialize<S: Serializer>(v: &[MatrixQ], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for m in v {
            seq.serialize_element(&Wrapped(m.clone()))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<MatrixQ>, D::Error> {
        Ok(Vec::<Wrapped>::deserialize(d)?.into_iter().map(|w| w.0).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Doc {
        #[serde(with = "laurent")]
        p: LaurentPoly,
        #[serde(with = "matrix_q")]
        m: MatrixQ,
        #[serde(with = "rational")]
        r: Rational,
    }

    #[test]
    fn encodings_match_the_documented_shapes() {
        let p = LaurentPoly::from_terms(vec![
            (2, Rational::new(3.into(), 2.into())),
            (-1, Rational::from_integer(1.into())),
            (10, Rational::from_integer((-4).into())),
        ]);
        let m = MatrixQ::identity(2);
        let doc = Doc { p, m, r: Rational::new((-2).into(), 6.into()) };
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(
            text,
            r#"{"p":{"-1":"1","2":"3/2","10":"-4"},"m":[["1","0"],["0","1"]],"r":"-1/3"}"#
        );
        let back: Doc = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational(" 4/6 ").unwrap(), Rational::new(2.into(), 3.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        let m = matrix_from_value(&serde_json::json!([[1, "1/2"], ["0", 3]])).unwrap();
        assert_eq!(m[(0, 1)], Rational::new(1.into(), 2.into()));
    }
}
