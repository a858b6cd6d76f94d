//! Symbolic rewriting of `a_{i_0} x^{p_1} a_{i_1} ⋯ a_{i_n} x^{p_{n+1}}` into
//! a ℤ-linear combination of `a_{i_0} δ^{j_1}(a_{i_1}) ⋯ δ^{j_n}(a_{i_n}) x^M`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{DiffPoly, OreError};
use crate::algebra::{Algebra, Derivation, Element, Scalar};
use crate::words::Letter;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalTerm {
    pub coeff: BigInt,
    /// `i_0, i_1, …, i_n`.
    pub indices: Vec<usize>,
    /// `j_1, …, j_n`.
    pub jword: Vec<Letter>,
    /// `M = Σ p_i − Σ j_i`.
    pub xdeg: u64,
}

impl CanonicalTerm {
    /// `coeff · a_{i_0} δ^{j_1}(a_{i_1}) ⋯ δ^{j_n}(a_{i_n}) x^M`.
    pub fn evaluate(&self, alg: &Algebra, delta: &Derivation, generators: &[Element]) -> DiffPoly {
        let mut prod = generators[self.indices[0]].clone();
        for (&i, &j) in self.indices[1..].iter().zip(&self.jword) {
            prod = alg.mul(&prod, &delta.apply_power(alg, j as usize, &generators[i]));
        }
        let c = alg.ring().reduce(Scalar::from_integer(self.coeff.clone()));
        DiffPoly::monomial(alg, alg.scale(&c, &prod), self.xdeg as usize)
    }
}

impl fmt::Display for CanonicalTerm {
    /// `coeff | i_0,..,i_n | j_1,..,j_n | M`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let indices: Vec<String> = self.indices.iter().map(usize::to_string).collect();
        let jword: Vec<String> = self.jword.iter().map(Letter::to_string).collect();
        write!(f, "{} | {} | {} | {}", self.coeff, indices.join(","), jword.join(","), self.xdeg)
    }
}

/// One record per line, in the order given.
pub fn terms_to_text(terms: &[CanonicalTerm]) -> String {
    terms.iter().map(|t| format!("{t}\n")).collect()
}

/// Expands the product left to right: whenever `x^P` meets `a_{i_m}`, it is
/// replaced by `Σ_j C(P, j) δ^j(a_{i_m}) x^{P-j}`, recording `j` as the next
/// letter of the jword. Terms with equal `(jword, M)` are merged, zero
/// coefficients dropped, and the result sorted by `(indices, jword, M)`.
///
/// `indices` holds `i_0, …, i_n` and `exponents` holds `p_1, …, p_{n+1}`.
pub fn rewrite_product(
    generators: &[Element],
    indices: &[usize],
    exponents: &[u64],
    k: u64,
) -> Result<Vec<CanonicalTerm>, OreError> {
    let Some(n) = indices.len().checked_sub(1) else {
        return Err(OreError::ExponentCount { factors: 0, expected: 1, got: exponents.len() });
    };
    if exponents.len() != n + 1 {
        return Err(OreError::ExponentCount { factors: n + 1, expected: n + 1, got: exponents.len() });
    }
    if let Some(&index) = indices.iter().find(|&&i| i >= generators.len()) {
        return Err(OreError::IndexOutOfRange { index, len: generators.len() });
    }
    if let Some((i, &value)) = exponents.iter().enumerate().find(|(_, &p)| p > k) {
        return Err(OreError::ExponentTooLarge { index: i + 1, value, k });
    }
    // Pending x-power P, keyed by the jword built so far.
    let mut state: BTreeMap<(Vec<Letter>, u64), BigInt> = BTreeMap::new();
    state.insert((Vec::new(), exponents[0]), BigInt::one());
    for &p_next in &exponents[1..] {
        let mut next: BTreeMap<(Vec<Letter>, u64), BigInt> = BTreeMap::new();
        for ((jword, power), coeff) in state {
            let mut binomial = BigInt::one();
            for j in 0..=power {
                let mut w = jword.clone();
                w.push(j);
                *next.entry((w, power - j + p_next)).or_default() += &coeff * &binomial;
                binomial = binomial * (power - j) / (j + 1);
            }
        }
        state = next;
    }
    Ok(state
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((jword, xdeg), coeff)| CanonicalTerm { coeff, indices: indices.to_vec(), jword, xdeg })
        .collect())
}

/// The direct product `a_{i_0} x^{p_1} a_{i_1} ⋯ a_{i_n} x^{p_{n+1}}` by
/// repeated Ore multiplication; the reference for [`rewrite_product`].
pub fn direct_product(
    alg: &Algebra,
    delta: &Derivation,
    generators: &[Element],
    indices: &[usize],
    exponents: &[u64],
) -> DiffPoly {
    let mut acc = DiffPoly::constant(generators[indices[0]].clone());
    for (m, &p) in exponents.iter().enumerate() {
        // Right multiplication by x^p only shifts degrees.
        let mut shifted = vec![alg.zero(); p as usize];
        shifted.extend(acc.coeffs().iter().cloned());
        acc = DiffPoly::new(shifted);
        if let Some(&i) = indices.get(m + 1) {
            acc = super::ore_mul(alg, delta, &acc, &DiffPoly::constant(generators[i].clone()));
        }
    }
    acc
}

/// Sum of the evaluated terms.
pub fn evaluate_terms(alg: &Algebra, delta: &Derivation, generators: &[Element], terms: &[CanonicalTerm]) -> DiffPoly {
    terms.iter().fold(DiffPoly::zero(), |acc, t| acc.add(alg, &t.evaluate(alg, delta, generators)))
}
