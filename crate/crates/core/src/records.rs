//! Persisted formats: run configuration, stage records, reports, manifests.
//!
//! Every number in a persisted document is an exact decimal rational string
//! "num/den" (never a binary float), polynomials are arrays of such strings
//! in ascending degree order, and all maps are ordered, so serialization is
//! canonical and runs are byte-reproducible.

use crate::algebra::{fmt_rat, parse_rat, Poly, Rat};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Serde adapter: `Rat` as a "num/den" string.
pub mod rat_string {
    use super::*;
    use serde::{de, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(de::Error::custom)
    }
}

/// Serde adapter: `Option<Rat>`.
pub mod opt_rat_string {
    use super::*;
    use serde::{de, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&fmt_rat(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rat>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        match s {
            None => Ok(None),
            Some(s) => parse_rat(&s).map(Some).map_err(de::Error::custom),
        }
    }
}

/// Serde adapter: `Poly` as an ascending array of rational strings.
pub mod poly_strings {
    use super::*;
    use serde::{de, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &Poly, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = p.coeffs().iter().map(fmt_rat).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Poly, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let coeffs = v
            .iter()
            .map(|s| parse_rat(s))
            .collect::<Result<Vec<_>>>()
            .map_err(de::Error::custom)?;
        Ok(Poly::from_coeffs(coeffs))
    }
}

/// Serde adapter: `Option<Poly>`.
pub mod opt_poly_strings {
    use super::*;
    use serde::{de, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        p: &Option<Poly>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match p {
            Some(p) => {
                let v: Vec<String> = p.coeffs().iter().map(fmt_rat).collect();
                s.serialize_some(&v)
            }
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Poly>, D::Error> {
        let v = Option::<Vec<String>>::deserialize(d)?;
        match v {
            None => Ok(None),
            Some(v) => {
                let coeffs = v
                    .iter()
                    .map(|s| parse_rat(s))
                    .collect::<Result<Vec<_>>>()
                    .map_err(de::Error::custom)?;
                Ok(Some(Poly::from_coeffs(coeffs)))
            }
        }
    }
}

/// Run configuration document (the `construct` input).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigDoc {
    /// Interpolation point [x, y].
    pub point: [String; 2],
    /// Constraint values, pairwise distinct rational strings.
    pub w: Vec<String>,
    /// Partition name; "dyadic-valuation" is the shipped default.
    #[serde(default = "default_partition")]
    pub partition: String,
    #[serde(default)]
    pub growth: crate::growth::GrowthFn,
    /// Number of stages to run (at most 2·|w|); defaults to 2·|w|.
    #[serde(default)]
    pub stages: Option<usize>,
    /// Certified disk radius for limit evaluation.
    #[serde(default = "default_radius")]
    pub radius: String,
}

pub fn default_partition() -> String {
    "dyadic-valuation".to_string()
}

pub fn default_radius() -> String {
    "2/1".to_string()
}

/// Canonical JSON bytes (two-space indentation, fixed field order).
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

/// SHA-256 digest (hex) of the canonical form of a document.
pub fn digest_canonical<T: Serialize>(value: &T) -> Result<String> {
    use sha2::{Digest, Sha256};
    let bytes = to_canonical_json(value)?;
    let mut h = Sha256::new();
    h.update(&bytes);
    Ok(hex_string(&h.finalize()))
}

fn hex_string(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

/// Manifest header written next to every records file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub config_digest: String,
    pub partition: String,
    pub growth: crate::growth::GrowthFn,
    pub stages: usize,
    #[serde(with = "rat_string")]
    pub radius: Rat,
}

pub fn tool_version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

/// Parse and validate a run configuration document into core types.
pub fn parse_run_config(doc: &RunConfigDoc) -> Result<crate::stage::ConstructionConfig> {
    let x = parse_rat(&doc.point[0])?;
    let y = parse_rat(&doc.point[1])?;
    let w = doc
        .w
        .iter()
        .map(|s| parse_rat(s))
        .collect::<Result<Vec<_>>>()?;
    let partition = crate::partition::by_name(&doc.partition)
        .ok_or_else(|| Error::Config(format!("unknown partition '{}'", doc.partition)))?;
    let radius = parse_rat(&doc.radius)?;
    let stages = doc.stages.unwrap_or(2 * w.len());
    crate::stage::ConstructionConfig::new(x, y, w, partition, doc.growth.clone(), stages, radius)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_doc_roundtrip() {
        let doc: RunConfigDoc = serde_json::from_str(
            r#"{"point": ["0/1", "0/1"], "w": ["1/1"], "partition": "dyadic-valuation",
                "growth": {"kind": "exp", "taylor_terms": 8}, "stages": 2, "radius": "2/1"}"#,
        )
        .unwrap();
        let bytes = to_canonical_json(&doc).unwrap();
        let doc2: RunConfigDoc = serde_json::from_slice(&bytes).unwrap();
        let bytes2 = to_canonical_json(&doc2).unwrap();
        assert_eq!(bytes, bytes2);
        assert_eq!(
            digest_canonical(&doc).unwrap(),
            digest_canonical(&doc2).unwrap()
        );
    }

    #[test]
    fn unknown_fields_rejected() {
        let r: std::result::Result<RunConfigDoc, _> =
            serde_json::from_str(r#"{"point": ["0", "0"], "w": [], "bogus": 1}"#);
        assert!(r.is_err());
    }
}
