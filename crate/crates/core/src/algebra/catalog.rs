//! Standard algebras and derivations used by the examples and tests.

use num_traits::Zero;

use super::subspace::invert;
use super::{Algebra, AlgebraError, CoeffRing, Derivation, Scalar};

/// Upper-triangular `n × n` matrices with basis `e_ij` (`i ≤ j`) in row-major
/// order, e.g. `e11, e12, e22` for `n = 2`. The identity matrix is not a basis
/// vector, so no unit index is recorded.
pub fn upper_triangular(ring: CoeffRing, n: usize) -> Algebra {
    matrix_units(ring, n, |i, j| i <= j)
}

/// Strictly upper-triangular `n × n` matrices, basis `e_ij` with `i < j`.
/// Requires `n ≥ 2`.
pub fn strict_upper_triangular(ring: CoeffRing, n: usize) -> Algebra {
    matrix_units(ring, n, |i, j| i < j)
}

fn matrix_units(ring: CoeffRing, n: usize, keep: impl Fn(usize, usize) -> bool) -> Algebra {
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).filter(|&(i, j)| keep(i, j)).collect();
    let index = |p: (usize, usize)| pairs.iter().position(|&q| q == p);
    let names = pairs.iter().map(|(i, j)| format!("e{i}{j}")).collect();
    let mut constants = Vec::new();
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for (b, &(k, l)) in pairs.iter().enumerate() {
            if j == k {
                if let Some(c) = index((i, l)) {
                    constants.push((a, b, c, ring.one()));
                }
            }
        }
    }
    Algebra::new_unchecked(ring, names, constants, None).expect("indices in range")
}

/// `R[t]/(t^n)` with basis `1, t, …, t^{n-1}` and unit `1`.
pub fn truncated_polynomial(ring: CoeffRing, n: usize) -> Algebra {
    assert!(n >= 1, "truncation degree must be positive");
    let names = (0..n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        })
        .collect();
    let mut constants = Vec::new();
    for i in 0..n {
        for j in 0..n - i {
            constants.push((i, j, i + j, ring.one()));
        }
    }
    Algebra::new_unchecked(ring, names, constants, Some(0)).expect("indices in range")
}

/// `d/dt` on a [`truncated_polynomial`] algebra: `t^i ↦ i t^{i-1}`.
pub fn truncated_derivative(alg: &Algebra) -> Derivation {
    let r = alg.rank();
    let ring = alg.ring();
    let rows = (0..r)
        .map(|i| {
            let mut row = vec![Scalar::zero(); r];
            if i > 0 {
                row[i - 1] = ring.from_int(i as u64);
            }
            row
        })
        .collect();
    Derivation::from_rows_unchecked(rows)
}

/// `F_p[T]/(T^p)` with `δ(t) = 1`.
pub fn charp(p: u64) -> Result<(Algebra, Derivation), AlgebraError> {
    if !super::ring::is_prime(p) {
        return Err(AlgebraError::NotAPrime(p));
    }
    let alg = truncated_polynomial(CoeffRing::PrimeField(p), p as usize);
    let d = truncated_derivative(&alg);
    Ok((alg, d))
}

/// Rank-`n` algebra with every product zero, basis `e1, …, en`.
pub fn square_zero(ring: CoeffRing, n: usize) -> Algebra {
    let names = (1..=n).map(|i| format!("e{i}")).collect();
    Algebra::new_unchecked(ring, names, [], None).expect("no constants")
}

/// `R × ⋯ × R` with orthogonal idempotents `e1, …, en`.
pub fn diagonal(ring: CoeffRing, n: usize) -> Algebra {
    let names = (1..=n).map(|i| format!("e{i}")).collect();
    let constants: Vec<_> = (0..n).map(|i| (i, i, i, ring.one())).collect();
    let unit = (n == 1).then_some(0);
    Algebra::new_unchecked(ring, names, constants, unit).expect("indices in range")
}

/// The same algebra in the basis `f_i = Σ_j p[i][j] e_j`. Names become
/// `f1, …, fr`. Returns `None` if `p` is singular. A unit index survives
/// only when the unit is itself one of the new basis vectors.
pub fn change_basis(alg: &Algebra, p: &[Vec<Scalar>]) -> Option<Algebra> {
    let r = alg.rank();
    let ring = alg.ring();
    let p: Vec<Vec<Scalar>> = p.iter().map(|row| row.iter().map(|c| ring.reduce(c.clone())).collect()).collect();
    let pinv = invert(ring, &p)?;
    let f: Vec<_> = p.iter().map(|row| alg.element(row.clone()).expect("square matrix")).collect();
    let mut constants = Vec::new();
    for (i, fi) in f.iter().enumerate() {
        for (j, fj) in f.iter().enumerate() {
            let prod = to_new_basis(ring, &alg.mul(fi, fj).into_coords(), &pinv);
            for (k, c) in prod.into_iter().enumerate() {
                if !c.is_zero() {
                    constants.push((i, j, k, c));
                }
            }
        }
    }
    let unit = alg.unit().and_then(|u| {
        let coords = to_new_basis(ring, alg.basis(u).coords(), &pinv);
        let nonzero: Vec<usize> = (0..r).filter(|&k| !coords[k].is_zero()).collect();
        (nonzero.len() == 1 && coords[nonzero[0]] == ring.one()).then(|| nonzero[0])
    });
    let names = (1..=r).map(|i| format!("f{i}")).collect();
    Some(Algebra::new_unchecked(ring.clone(), names, constants, unit).expect("indices in range"))
}

/// `D` expressed in the basis produced by [`change_basis`] with the same `p`.
pub fn transport_derivation(alg: &Algebra, d: &Derivation, p: &[Vec<Scalar>]) -> Option<Derivation> {
    let ring = alg.ring();
    let pinv = invert(ring, p)?;
    let rows = p
        .iter()
        .map(|row| {
            let fi = alg.element(row.clone()).expect("square matrix");
            to_new_basis(ring, &d.apply(alg, &fi).into_coords(), &pinv)
        })
        .collect();
    Some(Derivation::from_rows_unchecked(rows))
}

/// Coordinates in the `f` basis of a vector given in the `e` basis, where
/// `pinv` holds `e_c = Σ_k pinv[c][k] f_k`.
fn to_new_basis(ring: &CoeffRing, v: &[Scalar], pinv: &[Vec<Scalar>]) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); v.len()];
    for (c, vc) in v.iter().enumerate() {
        if vc.is_zero() {
            continue;
        }
        for (o, m) in out.iter_mut().zip(&pinv[c]) {
            *o = ring.add(o, &ring.mul(vc, m));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::{verify_leibniz, Element};
    use super::*;

    fn q(v: i64) -> Scalar {
        Scalar::from_integer(v.into())
    }

    #[test]
    fn catalog_algebras_are_associative() {
        for ring in [CoeffRing::Integers, CoeffRing::Rationals, CoeffRing::PrimeField(3)] {
            for n in 1..=4 {
                upper_triangular(ring.clone(), n).check_associative().unwrap();
                if n >= 2 {
                    strict_upper_triangular(ring.clone(), n).check_associative().unwrap();
                }
                truncated_polynomial(ring.clone(), n).check_associative().unwrap();
                diagonal(ring.clone(), n).check_associative().unwrap();
            }
        }
        assert_eq!(upper_triangular(CoeffRing::Rationals, 3).rank(), 6);
    }

    #[test]
    fn charp_derivative_is_valid() {
        for p in [2, 3, 5, 7] {
            let (a, d) = charp(p).unwrap();
            verify_leibniz(&a, d.rows().to_vec()).unwrap();
        }
        assert_eq!(charp(4), Err(AlgebraError::NotAPrime(4)));
        // Over Q the derivative of Q[t]/(t^3) is not a derivation: D(t^3) = 3t^2 ≠ 0.
        let a = truncated_polynomial(CoeffRing::Rationals, 3);
        assert!(verify_leibniz(&a, truncated_derivative(&a).rows().to_vec()).is_err());
    }

    #[test]
    fn change_basis_preserves_structure() {
        let a = upper_triangular(CoeffRing::Rationals, 2);
        let p = vec![vec![q(1), q(1), q(0)], vec![q(0), q(2), q(0)], vec![q(1), q(0), q(1)]];
        let b = change_basis(&a, &p).unwrap();
        b.check_associative().unwrap();
        let u = Element::new(vec![q(1), q(0), q(0)]);
        let d = super::super::inner_derivation(&a, &u);
        let d2 = transport_derivation(&a, &d, &p).unwrap();
        verify_leibniz(&b, d2.rows().to_vec()).unwrap();
        assert!(change_basis(&a, &[vec![q(1), q(0), q(0)], vec![q(1), q(0), q(0)], vec![q(0), q(0), q(1)]]).is_none());
    }

    #[test]
    fn unit_survives_when_fixed() {
        let a = truncated_polynomial(CoeffRing::Rationals, 2);
        let b = change_basis(&a, &[vec![q(1), q(0)], vec![q(3), q(1)]]).unwrap();
        assert_eq!(b.unit(), Some(0));
        let c = change_basis(&a, &[vec![q(2), q(0)], vec![q(0), q(1)]]).unwrap();
        assert_eq!(c.unit(), None);
    }
}
