//! JSON file format for cohomology rings.
//!
//! The document is a self-describing key/value tree with exact integer
//! fractions everywhere; unknown keys are rejected. Only one of each
//! graded-commutative product pair is stored (the lexicographically first
//! in basis order); the opposite order is inferred on load.
//!
//! ```json
//! {
//!   "real_dimension": 4,
//!   "basis": [ {"name": "1", "degree": 0}, {"name": "w", "degree": 2}, ... ],
//!   "products": [
//!     {"left": "w", "right": "w",
//!      "result": [ {"name": "w2", "coeff_num": "1", "coeff_den": "1"} ]}
//!   ],
//!   "integrate": [ {"name": "w2", "value": "1"} ],
//!   "omega": [ {"name": "w", "coeff_num": "1", "coeff_den": "1"} ],
//!   "pontryagin": [ {"k": 1, "class": [ ... ]} ]
//! }
//!
//! Numerators and denominators are decimal strings so that coefficients of
//! any size survive the trip exactly.
//! ```

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{fmt_q, parse_q, GradedBasis, Q, SparseVec};
use crate::ring::{CohomologyRing, RingError};

#[derive(Debug, Error)]
pub enum RingIoError {
    #[error("malformed ring file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("duplicate basis name `{0}`")]
    DuplicateName(String),
    #[error("unknown basis name `{0}`")]
    UnknownName(String),
    #[error("no fundamental class: missing or empty `integrate` section")]
    NoFundamentalClass,
    #[error("zero denominator in coefficient of `{0}`")]
    ZeroDenominator(String),
    #[error("invalid rational value `{0}`")]
    BadValue(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RingDoc {
    real_dimension: usize,
    basis: Vec<BasisEntry>,
    products: Vec<ProductEntry>,
    integrate: Vec<IntegrateEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    omega: Option<Vec<CoeffEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pontryagin: Option<Vec<PontryaginEntry>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BasisEntry {
    name: String,
    degree: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProductEntry {
    left: String,
    right: String,
    result: Vec<CoeffEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoeffEntry {
    name: String,
    coeff_num: String,
    coeff_den: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntegrateEntry {
    name: String,
    value: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PontryaginEntry {
    k: usize,
    class: Vec<CoeffEntry>,
}

fn coeffs_to_vec(
    entries: &[CoeffEntry],
    basis: &GradedBasis,
) -> Result<SparseVec, RingIoError> {
    let mut v = SparseVec::zero(basis.len());
    for e in entries {
        let i = basis
            .index_of(&e.name)
            .ok_or_else(|| RingIoError::UnknownName(e.name.clone()))?;
        let num: BigInt = e
            .coeff_num
            .trim()
            .parse()
            .map_err(|_| RingIoError::BadValue(e.coeff_num.clone()))?;
        let den: BigInt = e
            .coeff_den
            .trim()
            .parse()
            .map_err(|_| RingIoError::BadValue(e.coeff_den.clone()))?;
        if den.is_zero() {
            return Err(RingIoError::ZeroDenominator(e.name.clone()));
        }
        v.add_to(i, &Q::new(num, den));
    }
    Ok(v)
}

fn vec_to_coeffs(v: &SparseVec, basis: &GradedBasis) -> Vec<CoeffEntry> {
    v.iter()
        .map(|(i, q)| CoeffEntry {
            name: basis.name(i).to_string(),
            coeff_num: q.numer().to_string(),
            coeff_den: q.denom().to_string(),
        })
        .collect()
}

/// Parse a ring document. Structural problems (unknown keys, duplicate or
/// unknown names, missing integration) are errors; ring invariants are
/// *not* checked here — run [`CohomologyRing::validate`] on the result.
pub fn parse(text: &str) -> Result<CohomologyRing, RingIoError> {
    let doc: RingDoc = serde_json::from_str(text)?;
    // catch duplicate names before GradedBasis does, for a cleaner message
    let mut seen = std::collections::BTreeSet::new();
    for b in &doc.basis {
        if !seen.insert(b.name.clone()) {
            return Err(RingIoError::DuplicateName(b.name.clone()));
        }
    }
    let basis =
        GradedBasis::new(doc.basis.iter().map(|b| (b.name.clone(), b.degree)).collect())
            .map_err(RingError::from)?;

    let mut products = Vec::new();
    for p in &doc.products {
        let i = basis
            .index_of(&p.left)
            .ok_or_else(|| RingIoError::UnknownName(p.left.clone()))?;
        let j = basis
            .index_of(&p.right)
            .ok_or_else(|| RingIoError::UnknownName(p.right.clone()))?;
        products.push(((i, j), coeffs_to_vec(&p.result, &basis)?));
    }

    if doc.integrate.is_empty() {
        return Err(RingIoError::NoFundamentalClass);
    }
    let mut integrate = Vec::new();
    for e in &doc.integrate {
        let i = basis
            .index_of(&e.name)
            .ok_or_else(|| RingIoError::UnknownName(e.name.clone()))?;
        let q = parse_q(&e.value).ok_or_else(|| RingIoError::BadValue(e.value.clone()))?;
        integrate.push((i, q));
    }

    let omega = match &doc.omega {
        Some(entries) => Some(coeffs_to_vec(entries, &basis)?),
        None => None,
    };
    let mut pontryagin = Vec::new();
    if let Some(entries) = &doc.pontryagin {
        for p in entries {
            pontryagin.push((p.k, coeffs_to_vec(&p.class, &basis)?));
        }
    }

    Ok(CohomologyRing::new(
        doc.real_dimension,
        basis,
        products,
        integrate,
        omega,
        pontryagin,
    )?)
}

/// Serialize a ring. Products are emitted once per unordered pair, and the
/// output is deterministic.
pub fn serialize(ring: &CohomologyRing) -> String {
    let basis = ring.basis();
    let mut products = Vec::new();
    for (i, j, v) in ring.nonzero_products() {
        if i > j {
            continue;
        }
        products.push(ProductEntry {
            left: basis.name(i).to_string(),
            right: basis.name(j).to_string(),
            result: vec_to_coeffs(v, basis),
        });
    }
    let doc = RingDoc {
        real_dimension: ring.real_dimension(),
        basis: basis
            .iter()
            .map(|(_, n, d)| BasisEntry { name: n.to_string(), degree: d })
            .collect(),
        products,
        integrate: ring
            .integrate_entries()
            .map(|(i, q)| IntegrateEntry { name: basis.name(i).to_string(), value: fmt_q(q) })
            .collect(),
        omega: ring.omega().map(|w| vec_to_coeffs(w, basis)),
        pontryagin: if ring.pontryagin().is_empty() {
            None
        } else {
            Some(
                ring.pontryagin()
                    .iter()
                    .map(|(k, v)| PontryaginEntry { k: *k, class: vec_to_coeffs(v, basis) })
                    .collect(),
            )
        },
    };
    serde_json::to_string_pretty(&doc).expect("ring serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{build_product, build_projective_space, build_six_manifold, CubicForm};

    #[test]
    fn round_trip_p2() {
        let p2 = build_projective_space(2);
        let text = serialize(&p2);
        let back = parse(&text).unwrap();
        assert_eq!(p2, back);
    }

    #[test]
    fn round_trip_preserves_decorations() {
        let ring = build_six_manifold(2, 4, &CubicForm::diagonal(2), 1).unwrap();
        let back = parse(&serialize(&ring)).unwrap();
        assert_eq!(ring, back);
        let prod = build_product(&build_projective_space(1), &build_projective_space(2));
        let back = parse(&serialize(&prod)).unwrap();
        assert_eq!(prod, back);
    }

    #[test]
    fn serialization_is_deterministic() {
        let ring = build_six_manifold(3, 2, &CubicForm::diagonal(3), 0).unwrap();
        assert_eq!(serialize(&ring), serialize(&ring));
    }

    #[test]
    fn duplicate_basis_names_rejected() {
        let text = r#"{
            "real_dimension": 2,
            "basis": [{"name": "1", "degree": 0}, {"name": "a", "degree": 2}, {"name": "a", "degree": 2}],
            "products": [],
            "integrate": [{"name": "a", "value": "1"}]
        }"#;
        match parse(text) {
            Err(RingIoError::DuplicateName(n)) => assert_eq!(n, "a"),
            other => panic!("expected duplicate name error, got {other:?}"),
        }
    }

    #[test]
    fn missing_integration_rejected() {
        let text = r#"{
            "real_dimension": 2,
            "basis": [{"name": "1", "degree": 0}, {"name": "a", "degree": 2}],
            "products": [],
            "integrate": []
        }"#;
        match parse(text) {
            Err(RingIoError::NoFundamentalClass) => {}
            other => panic!("expected no-fundamental-class error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = r#"{
            "real_dimension": 2,
            "basis": [{"name": "1", "degree": 0}, {"name": "a", "degree": 2}],
            "products": [],
            "integrate": [{"name": "a", "value": "1"}],
            "extra": 1
        }"#;
        assert!(matches!(parse(text), Err(RingIoError::Json(_))));
    }

    #[test]
    fn bad_fraction_rejected() {
        let text = r#"{
            "real_dimension": 2,
            "basis": [{"name": "1", "degree": 0}, {"name": "a", "degree": 2}],
            "products": [],
            "integrate": [{"name": "a", "value": "x"}]
        }"#;
        assert!(matches!(parse(text), Err(RingIoError::BadValue(_))));
    }
}
