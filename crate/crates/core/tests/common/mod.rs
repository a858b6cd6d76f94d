//! Random small algebras and derivations shared by the integration tests.
#![allow(dead_code)]

use orenil::algebra::catalog;
use orenil::algebra::{derivation_space, unitalize, verify_leibniz, Algebra, CoeffRing, Derivation, Element, Scalar};
use rand::Rng;

/// Catalog algebras of rank at most 3.
pub fn base_algebras(ring: CoeffRing) -> Vec<Algebra> {
    vec![
        catalog::upper_triangular(ring.clone(), 2),
        catalog::strict_upper_triangular(ring.clone(), 3),
        catalog::strict_upper_triangular(ring.clone(), 2),
        catalog::truncated_polynomial(ring.clone(), 3),
        catalog::truncated_polynomial(ring.clone(), 2),
        catalog::square_zero(ring.clone(), 3),
        catalog::square_zero(ring.clone(), 2),
        catalog::diagonal(ring.clone(), 3),
        catalog::diagonal(ring.clone(), 2),
        unitalize(&catalog::square_zero(ring.clone(), 2)),
        unitalize(&catalog::strict_upper_triangular(ring, 2)),
    ]
}

pub fn small_scalar<R: Rng>(rng: &mut R, ring: &CoeffRing, range: i64) -> Scalar {
    ring.from_int(rng.gen_range(-range..=range))
}

pub fn random_element<R: Rng>(rng: &mut R, alg: &Algebra, range: i64) -> Element {
    let coords = (0..alg.rank()).map(|_| small_scalar(rng, alg.ring(), range)).collect();
    Element::new(coords)
}

/// A catalog algebra of rank ≤ 3 rewritten in a random integer basis, so its
/// structure constants are generic rationals.
pub fn random_algebra<R: Rng>(rng: &mut R, ring: CoeffRing) -> Algebra {
    let bases = base_algebras(ring.clone());
    let base = &bases[rng.gen_range(0..bases.len())];
    loop {
        let r = base.rank();
        let p: Vec<Vec<Scalar>> =
            (0..r).map(|_| (0..r).map(|_| small_scalar(rng, &ring, 2)).collect()).collect();
        if let Some(alg) = catalog::change_basis(base, &p) {
            return alg;
        }
    }
}

/// A random integer combination of a basis of `Der(A)`, passed through the
/// Leibniz check.
pub fn random_derivation<R: Rng>(rng: &mut R, alg: &Algebra) -> Derivation {
    let space = derivation_space(alg);
    let coeffs: Vec<Scalar> = space.iter().map(|_| small_scalar(rng, alg.ring(), 3)).collect();
    let terms: Vec<(Scalar, &Derivation)> = coeffs.into_iter().zip(space.iter()).collect();
    let d = Derivation::combine(alg, &terms);
    verify_leibniz(alg, d.rows().to_vec()).expect("combinations of derivations are derivations")
}
