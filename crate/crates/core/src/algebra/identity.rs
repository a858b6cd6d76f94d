use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::{Algebra, AlgebraError, Element, Scalar};

/// `X_1 ⋯ X_d = Σ_{σ ≠ id} c_σ X_{σ(1)} ⋯ X_{σ(d)}`.
///
/// Permutations are stored in 0-based one-line notation: `[1, 0]` is the
/// transposition of degree 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultilinearIdentity {
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub holds: bool,
    /// Lexicographically first failing basis tuple.
    pub counterexample: Option<Vec<usize>>,
}

impl MultilinearIdentity {
    /// Zero coefficients are dropped; repeated permutations are summed.
    pub fn new(
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, BigInt)>,
    ) -> Result<Self, AlgebraError> {
        if degree == 0 {
            return Err(AlgebraError::InvalidIdentity("degree must be positive".into()));
        }
        let mut coeffs: BTreeMap<Vec<usize>, BigInt> = BTreeMap::new();
        for (perm, c) in terms {
            let mut seen = vec![false; degree];
            if perm.len() != degree || !perm.iter().all(|&p| p < degree && !std::mem::replace(&mut seen[p], true)) {
                return Err(AlgebraError::InvalidIdentity(format!("{perm:?} is not a permutation of degree {degree}")));
            }
            if perm.iter().enumerate().all(|(i, &p)| i == p) {
                return Err(AlgebraError::InvalidIdentity("the identity permutation may not carry a coefficient".into()));
            }
            *coeffs.entry(perm).or_default() += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(MultilinearIdentity { degree, coeffs })
    }

    /// `X_1 ⋯ X_d = 0`.
    pub fn nilpotent(degree: usize) -> Self {
        MultilinearIdentity::new(degree, []).expect("positive degree")
    }

    /// `X_1 X_2 = X_2 X_1`.
    pub fn commutative() -> Self {
        MultilinearIdentity::new(2, [(vec![1, 0], BigInt::from(1))]).expect("valid permutation")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &BigInt)> {
        self.coeffs.iter().map(|(p, c)| (p.as_slice(), c))
    }

    /// `x_1 ⋯ x_d − Σ c_σ x_{σ(1)} ⋯ x_{σ(d)}` for concrete elements.
    pub fn evaluate(&self, alg: &Algebra, xs: &[Element]) -> Element {
        assert_eq!(xs.len(), self.degree, "identity evaluated on the wrong number of arguments");
        let ring = alg.ring();
        let mut out = alg.product(xs).expect("degree is positive");
        for (perm, c) in &self.coeffs {
            let prod = alg.product(perm.iter().map(|&p| &xs[p])).expect("degree is positive");
            let c = ring.reduce(Scalar::from_integer(c.clone()));
            out = alg.sub(&out, &alg.scale(&c, &prod));
        }
        out
    }
}

/// Checks the identity on all `r^d` basis tuples, which suffices by
/// multilinearity.
pub fn verify_identity(alg: &Algebra, ident: &MultilinearIdentity) -> IdentityCheck {
    let r = alg.rank();
    let d = ident.degree;
    let total = (r as u128).pow(d as u32);
    let basis: Vec<Element> = (0..r).map(|i| alg.basis(i)).collect();
    let tuple_of = |mut idx: u128| {
        let mut t = vec![0usize; d];
        for slot in t.iter_mut().rev() {
            *slot = (idx % r as u128) as usize;
            idx /= r as u128;
        }
        t
    };
    // Mixed-radix order on the index equals lexicographic order on tuples.
    let first = (0..total)
        .into_par_iter()
        .map(tuple_of)
        .find_first(|t| {
            let xs: Vec<Element> = t.iter().map(|&i| basis[i].clone()).collect();
            !ident.evaluate(alg, &xs).is_zero()
        });
    IdentityCheck { holds: first.is_none(), counterexample: first }
}

#[cfg(test)]
mod tests {
    use super::super::{catalog, CoeffRing};
    use super::*;

    #[test]
    fn commutative_algebra_is_commutative() {
        let a = catalog::truncated_polynomial(CoeffRing::Rationals, 4);
        assert!(verify_identity(&a, &MultilinearIdentity::commutative()).holds);
    }

    #[test]
    fn strict_upper_cubes_to_zero() {
        let a = catalog::strict_upper_triangular(CoeffRing::Rationals, 3);
        assert!(verify_identity(&a, &MultilinearIdentity::nilpotent(3)).holds);
        let check = verify_identity(&a, &MultilinearIdentity::nilpotent(2));
        assert_eq!(check.counterexample, Some(vec![0, 2]));
    }

    #[test]
    fn upper_triangular_is_not_commutative() {
        let a = catalog::upper_triangular(CoeffRing::Rationals, 2);
        let check = verify_identity(&a, &MultilinearIdentity::commutative());
        assert!(!check.holds);
        let names: Vec<&str> = check.counterexample.unwrap().iter().map(|&i| a.basis_names()[i].as_str()).collect();
        assert_eq!(names, ["e11", "e12"]);
    }

    #[test]
    fn rejects_bad_permutations() {
        assert!(MultilinearIdentity::new(2, [(vec![0, 0], BigInt::from(1))]).is_err());
        assert!(MultilinearIdentity::new(2, [(vec![0, 1], BigInt::from(1))]).is_err());
        assert!(MultilinearIdentity::new(0, []).is_err());
    }
}
