use num_traits::Zero;

use super::subspace::nullspace;
use super::{Algebra, AlgebraError, Element, Scalar};

/// A linear endomorphism stored by rows: row `i` holds the coordinates of
/// `D(e_i)`, so `D(x) = Σ_i x_i D(e_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    rows: Vec<Vec<Scalar>>,
}

impl Derivation {
    pub fn zero(rank: usize) -> Self {
        Derivation { rows: vec![vec![Scalar::zero(); rank]; rank] }
    }

    /// Wraps a matrix without checking the Leibniz rule.
    pub fn from_rows_unchecked(rows: Vec<Vec<Scalar>>) -> Self {
        Derivation { rows }
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Zero::is_zero)
    }

    pub fn image_of_basis(&self, i: usize) -> Element {
        Element::new(self.rows[i].clone())
    }

    pub fn apply(&self, alg: &Algebra, x: &Element) -> Element {
        let ring = alg.ring();
        let mut out = alg.zero().into_coords();
        for (xi, row) in x.coords().iter().zip(&self.rows) {
            if xi.is_zero() {
                continue;
            }
            for (o, d) in out.iter_mut().zip(row) {
                if !d.is_zero() {
                    *o = ring.add(o, &ring.mul(xi, d));
                }
            }
        }
        Element::new(out)
    }

    /// `D^n(x)`.
    pub fn apply_power(&self, alg: &Algebra, n: usize, x: &Element) -> Element {
        (0..n).fold(x.clone(), |acc, _| self.apply(alg, &acc))
    }

    /// `Σ c_i D_i`; all inputs must have the same rank.
    pub fn combine(alg: &Algebra, terms: &[(Scalar, &Derivation)]) -> Derivation {
        let ring = alg.ring();
        let mut out = Derivation::zero(alg.rank());
        for (c, d) in terms {
            for (orow, drow) in out.rows.iter_mut().zip(&d.rows) {
                for (o, v) in orow.iter_mut().zip(drow) {
                    *o = ring.add(o, &ring.mul(c, v));
                }
            }
        }
        out
    }
}

/// Checks `D(e_i e_j) = D(e_i) e_j + e_i D(e_j)` on every basis pair, which
/// suffices by bilinearity. The error reports the first failing pair in
/// `(i, j)` order and the total number of failures.
pub fn verify_leibniz(alg: &Algebra, rows: Vec<Vec<Scalar>>) -> Result<Derivation, AlgebraError> {
    let r = alg.rank();
    if rows.len() != r {
        return Err(AlgebraError::RankMismatch { expected: r, got: rows.len() });
    }
    if let Some(bad) = rows.iter().find(|row| row.len() != r) {
        return Err(AlgebraError::RankMismatch { expected: r, got: bad.len() });
    }
    let rows = rows.into_iter().map(|row| row.into_iter().map(|c| alg.ring().reduce(c)).collect()).collect();
    let d = Derivation { rows };
    let mut first = None;
    let mut count = 0;
    for i in 0..r {
        for j in 0..r {
            let lhs = d.apply(alg, &alg.basis_product(i, j));
            let rhs = alg.add(&alg.mul(&d.image_of_basis(i), &alg.basis(j)), &alg.mul(&alg.basis(i), &d.image_of_basis(j)));
            if lhs != rhs {
                count += 1;
                first.get_or_insert((i, j, alg.format_element(&lhs), alg.format_element(&rhs)));
            }
        }
    }
    match first {
        None => Ok(d),
        Some((i, j, lhs, rhs)) => Err(AlgebraError::LeibnizViolation { i, j, lhs, rhs, count }),
    }
}

/// `D(x) = ux − xu`.
pub fn inner_derivation(alg: &Algebra, u: &Element) -> Derivation {
    let rows = (0..alg.rank())
        .map(|i| {
            let e = alg.basis(i);
            alg.sub(&alg.mul(u, &e), &alg.mul(&e, u)).into_coords()
        })
        .collect();
    Derivation { rows }
}

/// A basis of the space of all derivations of `alg`, from the null space of
/// the Leibniz equations in the `r²` matrix entries.
pub fn derivation_space(alg: &Algebra) -> Vec<Derivation> {
    let r = alg.rank();
    let ring = alg.ring();
    let var = |row: usize, col: usize| row * r + col;
    // Equation for pair (i, j), coordinate m:
    // Σ_k c_ij^k D[k][m] − Σ_l D[i][l] c_lj^m − Σ_l D[j][l] c_il^m = 0.
    let mut equations = Vec::with_capacity(r * r * r);
    for i in 0..r {
        for j in 0..r {
            for m in 0..r {
                let mut eq = vec![Scalar::zero(); r * r];
                for (k, c) in &alg.table[i][j] {
                    let v = var(*k, m);
                    eq[v] = ring.add(&eq[v], c);
                }
                for l in 0..r {
                    for (k, c) in &alg.table[l][j] {
                        if *k == m {
                            let v = var(i, l);
                            eq[v] = ring.sub(&eq[v], c);
                        }
                    }
                    for (k, c) in &alg.table[i][l] {
                        if *k == m {
                            let v = var(j, l);
                            eq[v] = ring.sub(&eq[v], c);
                        }
                    }
                }
                if eq.iter().any(|x| !x.is_zero()) {
                    equations.push(eq);
                }
            }
        }
    }
    nullspace(ring, &equations, r * r)
        .into_iter()
        .map(|flat| Derivation { rows: flat.chunks(r).map(<[Scalar]>::to_vec).collect() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::{catalog, CoeffRing};
    use super::*;

    fn q(v: i64) -> Scalar {
        Scalar::from_integer(v.into())
    }

    #[test]
    fn zero_is_a_derivation() {
        let a = catalog::upper_triangular(CoeffRing::Rationals, 2);
        assert!(verify_leibniz(&a, Derivation::zero(3).rows).is_ok());
    }

    #[test]
    fn truncated_derivative_mod_3() {
        let a = catalog::truncated_polynomial(CoeffRing::PrimeField(3), 3);
        let rows = vec![vec![q(0), q(0), q(0)], vec![q(1), q(0), q(0)], vec![q(0), q(2), q(0)]];
        let d = verify_leibniz(&a, rows).unwrap();
        assert_eq!(d.apply(&a, &a.basis(1)), a.basis(0));
    }

    #[test]
    fn square_zero_accepts_anything() {
        let a = catalog::square_zero(CoeffRing::Rationals, 2);
        assert!(verify_leibniz(&a, vec![vec![q(3), q(-1)], vec![q(7), q(2)]]).is_ok());
    }

    #[test]
    fn violation_reports_pair() {
        let a = catalog::truncated_polynomial(CoeffRing::Rationals, 3);
        // Identity map: D(1·1) = 1 but D(1)·1 + 1·D(1) = 2.
        let rows = vec![vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]];
        let err = verify_leibniz(&a, rows).unwrap_err();
        let AlgebraError::LeibnizViolation { i, j, lhs, rhs, .. } = err else { panic!() };
        assert_eq!((i, j, lhs.as_str(), rhs.as_str()), (0, 0, "1", "2*1"));
    }

    #[test]
    fn inner_derivation_on_upper3() {
        let a = catalog::strict_upper_triangular(CoeffRing::Rationals, 3);
        let d = inner_derivation(&a, &a.basis(0));
        assert_eq!(d.apply(&a, &a.basis(2)), a.basis(1));
        assert!(d.apply(&a, &a.basis(0)).is_zero());
        assert!(d.apply(&a, &a.basis(1)).is_zero());
        verify_leibniz(&a, d.rows().to_vec()).unwrap();
    }

    #[test]
    fn inner_derivation_of_commutative_is_zero() {
        let a = catalog::truncated_polynomial(CoeffRing::Rationals, 4);
        let u = a.element(vec![q(1), q(2), q(3), q(4)]).unwrap();
        assert!(inner_derivation(&a, &u).is_zero());
    }

    #[test]
    fn derivation_space_dimensions() {
        // Der(Q[t]/(t^3)) is spanned by t^i d/dt with D(t) in span(t, t^2).
        let a = catalog::truncated_polynomial(CoeffRing::Rationals, 3);
        let space = derivation_space(&a);
        assert_eq!(space.len(), 2);
        for d in &space {
            verify_leibniz(&a, d.rows().to_vec()).unwrap();
        }
        // Over F_3 the derivative d/dt is also allowed.
        let f3 = catalog::truncated_polynomial(CoeffRing::PrimeField(3), 3);
        assert_eq!(derivation_space(&f3).len(), 3);
        // Every linear map on a square-zero algebra is a derivation.
        assert_eq!(derivation_space(&catalog::square_zero(CoeffRing::Rationals, 2)).len(), 4);
    }
}
