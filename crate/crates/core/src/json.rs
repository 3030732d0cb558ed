//! JSON encodings of pairings, morphisms, graded elements, corner elements
//! and Fock vectors.
//!
//! Boundary points are numbered from 1: bottom points first, then top
//! points, both left to right. Coefficients are strings `"p/q"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bimodule::CornerElement;
use crate::category::Morphism;
use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::gjs::GradedElement;
use crate::planar::PlanarPairing;
use crate::scalar::{format_scalar, parse_scalar, LoopParameter, Scalar};

#[derive(Serialize, Deserialize)]
struct PairingJson {
    b: usize,
    l: usize,
    r: usize,
    #[serde(rename = "match")]
    matching: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    pairing: PairingJson,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct MorphismJson {
    source: usize,
    target: usize,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct SectorJson {
    b: usize,
    l: usize,
    r: usize,
    morphism: MorphismJson,
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    delta: Option<String>,
    terms: Vec<SectorJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    shape: Option<[usize; 2]>,
}

#[derive(Serialize, Deserialize)]
struct FockJson {
    depth: usize,
    sectors: BTreeMap<String, ElementJson>,
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    truncated: bool,
}

/// A parsed graded element with the loop value and shape it was tagged
/// with, if any.
#[derive(Clone, Debug)]
pub struct ParsedElement {
    pub delta: Option<LoopParameter>,
    pub element: GradedElement,
    pub shape: Option<(usize, usize)>,
}

fn json_error(e: impl std::fmt::Display) -> Error {
    Error::Json(e.to_string())
}

fn encode_pairing(p: &PlanarPairing, l: usize, r: usize) -> PairingJson {
    PairingJson {
        b: p.bottom(),
        l,
        r,
        matching: p.pairs().into_iter().map(|(i, j)| [i + 1, j + 1]).collect(),
    }
}

fn decode_pairing(j: &PairingJson) -> Result<PlanarPairing> {
    let pairs = j
        .matching
        .iter()
        .map(|[i, k]| {
            if *i == 0 || *k == 0 {
                Err(Error::InvalidPairing("points are numbered from 1".into()))
            } else {
                Ok((i - 1, k - 1))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    PlanarPairing::new(j.b, j.l + j.r, &pairs)
}

fn encode_morphism(m: &Morphism, l: usize, r: usize) -> MorphismJson {
    MorphismJson {
        source: m.source(),
        target: m.target(),
        terms: m
            .terms()
            .map(|(p, c)| TermJson {
                pairing: encode_pairing(p, l, r),
                coeff: format_scalar(c),
            })
            .collect(),
    }
}

fn decode_morphism(j: &MorphismJson) -> Result<Morphism> {
    let terms = j
        .terms
        .iter()
        .map(|t| Ok((decode_pairing(&t.pairing)?, parse_scalar(&t.coeff)?)))
        .collect::<Result<Vec<(PlanarPairing, Scalar)>>>()?;
    Morphism::from_terms(j.source, j.target, terms)
}

fn encode_element(x: &GradedElement, delta: Option<&LoopParameter>, shape: Option<(usize, usize)>) -> ElementJson {
    ElementJson {
        delta: delta.map(|d| d.to_string()),
        terms: x
            .terms()
            .map(|(s, m)| SectorJson {
                b: s.b,
                l: s.l,
                r: s.r,
                morphism: encode_morphism(m, s.l, s.r),
            })
            .collect(),
        shape: shape.map(|(l, r)| [l, r]),
    }
}

fn decode_element(j: &ElementJson) -> Result<ParsedElement> {
    let mut element = GradedElement::zero();
    for t in &j.terms {
        let m = decode_morphism(&t.morphism)?;
        element = &element + &GradedElement::from_morphism(t.b, t.l, t.r, m)?;
    }
    let delta = j.delta.as_deref().map(LoopParameter::parse).transpose()?;
    let shape = j.shape.map(|[l, r]| (l, r));
    if let Some((l, r)) = shape {
        element.require_corner(l, r)?;
    }
    Ok(ParsedElement { delta, element, shape })
}

pub fn pairing_to_json(p: &PlanarPairing, l: usize, r: usize) -> Value {
    serde_json::to_value(encode_pairing(p, l, r)).expect("plain data")
}

/// Returns the pairing with the `(l, r)` split it was tagged with.
pub fn pairing_from_json(v: &Value) -> Result<(PlanarPairing, usize, usize)> {
    let j: PairingJson = serde_json::from_value(v.clone()).map_err(json_error)?;
    Ok((decode_pairing(&j)?, j.l, j.r))
}

/// Pairings of a standalone morphism carry `l = target`, `r = 0`.
pub fn morphism_to_json(m: &Morphism) -> Value {
    serde_json::to_value(encode_morphism(m, m.target(), 0)).expect("plain data")
}

pub fn morphism_from_json(v: &Value) -> Result<Morphism> {
    let j: MorphismJson = serde_json::from_value(v.clone()).map_err(json_error)?;
    decode_morphism(&j)
}

pub fn element_to_json(x: &GradedElement, delta: &LoopParameter) -> Value {
    serde_json::to_value(encode_element(x, Some(delta), None)).expect("plain data")
}

pub fn element_from_json(v: &Value) -> Result<ParsedElement> {
    let j: ElementJson = serde_json::from_value(v.clone()).map_err(json_error)?;
    decode_element(&j)
}

pub fn corner_to_json(x: &CornerElement, delta: &LoopParameter) -> Value {
    serde_json::to_value(encode_element(x.payload(), Some(delta), Some(x.shape()))).expect("plain data")
}

/// A corner element needs its `shape`; it is inferred from the terms when
/// absent and the element is nonzero.
pub fn corner_from_json(v: &Value) -> Result<(Option<LoopParameter>, CornerElement)> {
    let parsed = element_from_json(v)?;
    let (l, r) = match parsed.shape.or_else(|| parsed.element.corner_shape()) {
        Some(shape) => shape,
        None => {
            return Err(Error::Shape {
                expected: "a corner element with a shape".into(),
                found: parsed.element.describe_shape(),
            })
        }
    };
    Ok((parsed.delta, CornerElement::new(l, r, parsed.element)?))
}

pub fn fock_to_json(v: &FockVector, delta: &LoopParameter) -> Value {
    let j = FockJson {
        depth: v.depth(),
        sectors: v
            .sectors()
            .map(|(b, x)| (b.to_string(), encode_element(x, Some(delta), None)))
            .collect(),
        truncated: v.truncated(),
    };
    serde_json::to_value(j).expect("plain data")
}

pub fn fock_from_json(v: &Value) -> Result<FockVector> {
    let j: FockJson = serde_json::from_value(v.clone()).map_err(json_error)?;
    let mut sectors = Vec::new();
    for (key, e) in &j.sectors {
        let b: usize = key.parse().map_err(|_| Error::Json(format!("sector key {key:?} is not a number")))?;
        sectors.push((b, decode_element(e)?.element));
    }
    FockVector::from_sectors(j.depth, sectors)
}

pub fn scalar_to_json(x: &Scalar, delta: &LoopParameter) -> Value {
    serde_json::json!({ "delta": delta.to_string(), "scalar": format_scalar(x) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Sampler;

    #[test]
    fn pairing_encoding() {
        let p = PlanarPairing::rainbow_cup(1);
        let v = pairing_to_json(&p, 1, 1);
        assert_eq!(v, serde_json::json!({"b": 0, "l": 1, "r": 1, "match": [[1, 2]]}));
        assert_eq!(pairing_from_json(&v).unwrap(), (p, 1, 1));
        let crossing = serde_json::json!({"b": 0, "l": 2, "r": 2, "match": [[1, 3], [2, 4]]});
        assert!(pairing_from_json(&crossing).is_err());
    }

    #[test]
    fn round_trips() {
        let delta = LoopParameter::parse("5/2").unwrap();
        let mut s = Sampler::new(41);
        for _ in 0..20 {
            let m = s.morphism(2, 4);
            assert_eq!(morphism_from_json(&morphism_to_json(&m)).unwrap(), m);
            let x = s.graded(3);
            let parsed = element_from_json(&element_to_json(&x, &delta)).unwrap();
            assert_eq!(parsed.element, x);
            assert_eq!(parsed.delta, Some(delta.clone()));
            let c = CornerElement::new(1, 2, s.corner(1, 2, 3)).unwrap();
            assert_eq!(corner_from_json(&corner_to_json(&c, &delta)).unwrap().1, c);
            let f = FockVector::from_element(4, &x);
            assert_eq!(fock_from_json(&fock_to_json(&f, &delta)).unwrap(), f);
        }
    }

    #[test]
    fn shape_is_checked() {
        let v = serde_json::json!({
            "terms": [{"b": 0, "l": 1, "r": 1, "morphism": {"source": 0, "target": 2, "terms": [
                {"pairing": {"b": 0, "l": 1, "r": 1, "match": [[1, 2]]}, "coeff": "1"}]}}],
            "shape": [0, 2]
        });
        assert!(element_from_json(&v).is_err());
    }
}
