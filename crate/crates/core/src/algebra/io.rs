//! JSON algebra-definition files.
//!
//! ```json
//! {
//!   "coeff_ring": "rationals",
//!   "rank": 3,
//!   "basis_names": ["e12", "e13", "e23"],
//!   "structure_constants": [[0, 2, 1, "1"]],
//!   "derivations": { "inner": [["0","0","0"], ["0","0","0"], ["0","1","0"]] },
//!   "identities": { "cube": { "degree": 3, "terms": [] } }
//! }
//! ```
//!
//! `coeff_ring` is `"integers"`, `"rationals"` or `{"prime": p}`. Indices are
//! 0-based; values are decimal integers or `"a/b"` strings. A derivation is
//! the row-major matrix whose row `i` holds `D(e_i)`. Identity permutations
//! are 1-based one-line notation, so `{"perm": [2, 1], "coeff": 1}` with
//! degree 2 reads `X1 X2 = X2 X1`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::ring::is_prime;
use super::{verify_leibniz, Algebra, AlgebraError, CoeffRing, Derivation, MultilinearIdentity, Scalar};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    coeff_ring: RingDef,
    rank: usize,
    basis_names: Vec<String>,
    structure_constants: Vec<(usize, usize, usize, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unit: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    derivations: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    identities: BTreeMap<String, IdentityDef>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RingDef {
    Named(String),
    Prime {
        prime: u64,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IdentityDef {
    degree: usize,
    terms: Vec<TermDef>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDef {
    perm: Vec<usize>,
    coeff: IntValue,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum IntValue {
    Number(i64),
    Text(String),
}

/// An algebra together with the named derivations and identities declared
/// alongside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraDocument {
    pub algebra: Algebra,
    pub derivations: BTreeMap<String, Derivation>,
    pub identities: BTreeMap<String, MultilinearIdentity>,
}

impl AlgebraDocument {
    pub fn new(algebra: Algebra) -> Self {
        AlgebraDocument { algebra, derivations: BTreeMap::new(), identities: BTreeMap::new() }
    }

    pub fn derivation(&self, name: &str) -> Result<&Derivation, AlgebraError> {
        self.derivations.get(name).ok_or_else(|| AlgebraError::UnknownName { kind: "derivation", name: name.into() })
    }

    pub fn identity(&self, name: &str) -> Result<&MultilinearIdentity, AlgebraError> {
        self.identities.get(name).ok_or_else(|| AlgebraError::UnknownName { kind: "identity", name: name.into() })
    }
}

fn malformed(field: impl Into<String>, message: impl Into<String>) -> AlgebraError {
    AlgebraError::MalformedInput { field: field.into(), message: message.into() }
}

/// Parses and validates a document: associativity, the unit, and the Leibniz
/// rule for every derivation are all checked.
pub fn parse_algebra(text: &str) -> Result<AlgebraDocument, AlgebraError> {
    let file: AlgebraFile = serde_json::from_str(text).map_err(|e| AlgebraError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let ring = match &file.coeff_ring {
        RingDef::Named(s) if s == "integers" => CoeffRing::Integers,
        RingDef::Named(s) if s == "rationals" => CoeffRing::Rationals,
        RingDef::Named(s) => return Err(malformed("coeff_ring", format!("unknown ring {s:?}"))),
        RingDef::Prime { prime } if is_prime(*prime) => CoeffRing::PrimeField(*prime),
        RingDef::Prime { prime } => return Err(malformed("coeff_ring.prime", format!("{prime} is not a prime"))),
    };
    if file.rank == 0 {
        return Err(malformed("rank", "rank must be positive"));
    }
    if file.basis_names.len() != file.rank {
        return Err(malformed("basis_names", format!("expected {} names, got {}", file.rank, file.basis_names.len())));
    }
    for (i, name) in file.basis_names.iter().enumerate() {
        if file.basis_names[..i].contains(name) {
            return Err(malformed(format!("basis_names[{i}]"), format!("duplicate name {name:?}")));
        }
    }
    let mut constants = Vec::with_capacity(file.structure_constants.len());
    for (idx, (i, j, k, v)) in file.structure_constants.iter().enumerate() {
        let c = ring.parse(v).map_err(|m| malformed(format!("structure_constants[{idx}]"), m))?;
        constants.push((*i, *j, *k, c));
    }
    let algebra = Algebra::new(ring.clone(), file.basis_names.clone(), constants, file.unit)?;

    let mut derivations = BTreeMap::new();
    for (name, matrix) in &file.derivations {
        let field = format!("derivations.{name}");
        if matrix.len() != file.rank {
            return Err(malformed(field, format!("expected {} rows, got {}", file.rank, matrix.len())));
        }
        let mut rows = Vec::with_capacity(file.rank);
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != file.rank {
                return Err(malformed(format!("{field}[{i}]"), format!("expected {} entries, got {}", file.rank, row.len())));
            }
            let parsed: Result<Vec<Scalar>, _> = row.iter().map(|v| ring.parse(v)).collect();
            rows.push(parsed.map_err(|m| malformed(format!("{field}[{i}]"), m))?);
        }
        let d = verify_leibniz(&algebra, rows).map_err(|e| malformed(field.clone(), e.to_string()))?;
        derivations.insert(name.clone(), d);
    }

    let mut identities = BTreeMap::new();
    for (name, def) in &file.identities {
        let field = format!("identities.{name}");
        let mut terms = Vec::with_capacity(def.terms.len());
        for (t, term) in def.terms.iter().enumerate() {
            let perm = term
                .perm
                .iter()
                .map(|&p| p.checked_sub(1).ok_or_else(|| malformed(format!("{field}.terms[{t}].perm"), "permutations are 1-based")))
                .collect::<Result<Vec<_>, _>>()?;
            let coeff = match &term.coeff {
                IntValue::Number(n) => BigInt::from(*n),
                IntValue::Text(s) => s
                    .trim()
                    .parse()
                    .map_err(|_| malformed(format!("{field}.terms[{t}].coeff"), format!("{s:?} is not an integer")))?,
            };
            terms.push((perm, coeff));
        }
        let ident = MultilinearIdentity::new(def.degree, terms).map_err(|e| malformed(field, e.to_string()))?;
        identities.insert(name.clone(), ident);
    }
    Ok(AlgebraDocument { algebra, derivations, identities })
}

pub fn load_algebra(path: &std::path::Path) -> Result<AlgebraDocument, AlgebraError> {
    let text = std::fs::read_to_string(path).map_err(|e| malformed(path.display().to_string(), e.to_string()))?;
    parse_algebra(&text)
}

/// Pretty-printed JSON; maps are written in key order so output is stable.
pub fn write_algebra(doc: &AlgebraDocument) -> String {
    let alg = &doc.algebra;
    let ring = alg.ring();
    let coeff_ring = match ring {
        CoeffRing::Integers => RingDef::Named("integers".into()),
        CoeffRing::Rationals => RingDef::Named("rationals".into()),
        CoeffRing::PrimeField(p) => RingDef::Prime { prime: *p },
    };
    let file = AlgebraFile {
        coeff_ring,
        rank: alg.rank(),
        basis_names: alg.basis_names().to_vec(),
        structure_constants: alg.constants().map(|(i, j, k, c)| (i, j, k, ring.format(c))).collect(),
        unit: alg.unit(),
        derivations: doc
            .derivations
            .iter()
            .map(|(n, d)| (n.clone(), d.rows().iter().map(|row| row.iter().map(|c| ring.format(c)).collect()).collect()))
            .collect(),
        identities: doc
            .identities
            .iter()
            .map(|(n, ident)| {
                let terms = ident
                    .terms()
                    .map(|(p, c)| TermDef {
                        perm: p.iter().map(|x| x + 1).collect(),
                        coeff: match i64::try_from(c) {
                            Ok(v) => IntValue::Number(v),
                            Err(_) => IntValue::Text(c.to_string()),
                        },
                    })
                    .collect();
                (n.clone(), IdentityDef { degree: ident.degree(), terms })
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("serializable");
    out.push('\n');
    out
}
