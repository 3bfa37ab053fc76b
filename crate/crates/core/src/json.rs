//! JSON interchange format for presentations.
//!
//! ```json
//! {
//!   "action_order": 2,
//!   "differential": { "h(2,0)": [{"coeff": 1, "monomial": ["h(1,0)", "h(1,1)"]}] },
//!   "generators": [
//!     {"arith": 0, "coh": 1, "internal": 12, "name": "h(1,0)", "rav": 1,
//!      "sigma": {"name": "h(1,1)", "sign": 1}}
//!   ],
//!   "internal_modulus": 96,
//!   "prime": 7
//! }
//! ```
//!
//! Parsing accepts monomials in any order (the Koszul sign is applied),
//! negative coefficients, omitted `sigma` (σ fixes the generator) and
//! omitted differential entries (zero). Serialization is canonical: keys
//! sorted, every generator present in `differential`, coefficients in
//! `[0, p)`, monomials and terms in canonical generator order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dga::{bits, DgaPresentation, Element, GeneratorSpec, MultiDegree, SignedGenerator};
use crate::error::{Error, Result};
use crate::field::PrimeField;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationJson {
    pub action_order: u32,
    #[serde(default)]
    pub differential: BTreeMap<String, Vec<TermJson>>,
    pub generators: Vec<GeneratorJson>,
    pub internal_modulus: u64,
    pub prime: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorJson {
    #[serde(default)]
    pub arith: u32,
    pub coh: u32,
    pub internal: u64,
    pub name: String,
    pub rav: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<SigmaJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaJson {
    pub name: String,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: i64,
    pub monomial: Vec<String>,
}

/// Parses and structurally validates a presentation. Algebraic invariants
/// (d² = 0 and so on) are left to [`DgaPresentation::check`].
pub fn parse_presentation(text: &str) -> Result<DgaPresentation> {
    let raw: PresentationJson = serde_json::from_str(text)?;
    from_json(&raw)
}

pub fn from_json(raw: &PresentationJson) -> Result<DgaPresentation> {
    let field = PrimeField::new(raw.prime)
        .map_err(|_| Error::InvalidPresentation(format!("prime {} is not a supported prime", raw.prime)))?;
    if raw.internal_modulus == 0 {
        return Err(Error::InvalidPresentation("internal_modulus must be positive".into()));
    }
    if raw.generators.len() > crate::dga::MAX_GENERATORS {
        return Err(Error::InvalidPresentation("too many generators".into()));
    }
    let index: BTreeMap<&str, usize> = raw.generators.iter().enumerate().map(|(i, g)| (g.name.as_str(), i)).collect();
    if index.len() != raw.generators.len() {
        return Err(Error::InvalidPresentation("repeated generator name".into()));
    }
    let lookup = |name: &str| {
        index.get(name).copied().ok_or_else(|| Error::InvalidPresentation(format!("unknown generator {name:?}")))
    };
    let mut gens = Vec::with_capacity(raw.generators.len());
    for g in &raw.generators {
        let action_image = match &g.sigma {
            None => None,
            Some(s) => {
                if s.sign != 1 && s.sign != -1 {
                    return Err(Error::InvalidPresentation(format!("sigma sign {} is not ±1", s.sign)));
                }
                Some(SignedGenerator { index: lookup(&s.name)?, negate: s.sign == -1 })
            }
        };
        gens.push(GeneratorSpec {
            name: g.name.clone(),
            degree: MultiDegree::new(g.coh, g.rav, g.internal % raw.internal_modulus, g.arith),
            action_image,
        });
    }
    let mut differentials = vec![Element::zero(); gens.len()];
    for (name, terms) in &raw.differential {
        let i = lookup(name)?;
        let mut d = Element::zero();
        for t in terms {
            let mut mono = Element::monomial(0, field.from_i64(t.coeff));
            for n in &t.monomial {
                mono = mono.mul(field, &Element::generator(lookup(n)?));
            }
            d = d.add(field, &mono);
        }
        differentials[i] = d;
    }
    DgaPresentation::new(field, raw.internal_modulus, raw.action_order, gens, differentials)
}

pub fn to_json(p: &DgaPresentation) -> PresentationJson {
    let names: Vec<&str> = p.generators().iter().map(|g| g.name.as_str()).collect();
    let generators = p
        .generators()
        .iter()
        .map(|g| GeneratorJson {
            arith: g.degree.arith,
            coh: g.degree.coh,
            internal: g.degree.internal,
            name: g.name.clone(),
            rav: g.degree.rav,
            sigma: g
                .action_image
                .map(|s| SigmaJson { name: names[s.index].to_string(), sign: if s.negate { -1 } else { 1 } }),
        })
        .collect();
    let differential = p
        .generators()
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let terms = p
                .generator_differential(i)
                .terms()
                .map(|(m, c)| TermJson { coeff: c as i64, monomial: bits(m).map(|k| names[k].to_string()).collect() })
                .collect();
            (g.name.clone(), terms)
        })
        .collect();
    PresentationJson {
        action_order: p.action_order(),
        differential,
        generators,
        internal_modulus: p.internal_modulus(),
        prime: p.prime() as u64,
    }
}

/// Canonical pretty-printed JSON.
pub fn presentation_to_string(p: &DgaPresentation) -> String {
    serde_json::to_string_pretty(&to_json(p)).expect("presentation JSON is always serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
        "prime": 7, "internal_modulus": 1, "action_order": 2,
        "generators": [
            {"name": "a", "coh": 1, "rav": 1, "internal": 0, "sigma": {"name": "b", "sign": 1}},
            {"name": "b", "coh": 1, "rav": 1, "internal": 0, "sigma": {"name": "a", "sign": 1}},
            {"name": "c", "coh": 1, "rav": 2, "internal": 0, "sigma": {"name": "c", "sign": -1}}
        ],
        "differential": {"c": [{"coeff": -1, "monomial": ["b", "a"]}]}
    }"#;

    #[test]
    fn parses_and_applies_koszul_sign() {
        let p = parse_presentation(SMALL).unwrap();
        // -1 · (b a) = a b.
        assert_eq!(p.generator_differential(2), &Element::monomial(0b011, 1));
        assert!(p.check().is_valid());
    }

    #[test]
    fn round_trip_is_canonical() {
        let p = parse_presentation(SMALL).unwrap();
        let text = presentation_to_string(&p);
        let q = parse_presentation(&text).unwrap();
        assert_eq!(p, q);
        assert_eq!(text, presentation_to_string(&q));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_presentation("{").is_err());
        let bad_prime = SMALL.replace("\"prime\": 7", "\"prime\": 8");
        assert!(parse_presentation(&bad_prime).is_err());
        let unknown = SMALL.replace("[\"b\", \"a\"]", "[\"b\", \"z\"]");
        assert!(parse_presentation(&unknown).is_err());
        let coh = SMALL.replace("\"name\": \"a\", \"coh\": 1", "\"name\": \"a\", \"coh\": 2");
        assert!(parse_presentation(&coh).is_err());
    }
}
