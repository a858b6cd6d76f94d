//! Row-reduced spans over the fraction field of a coefficient ring.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::ring::{CoeffRing, Scalar};

/// A subspace of `K^n` stored as the nonzero rows of its reduced row echelon
/// form, ordered by pivot column. The representation is canonical: two equal
/// subspaces have identical rows.
///
/// Over the integers this is the ℚ-span; its intersection with `ℤ^n` is the
/// saturated lattice, whose primitive generators [`Subspace::integral_rows`]
/// returns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ring: CoeffRing,
    ambient: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ring: CoeffRing, ambient: usize) -> Self {
        Subspace { ring, ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn span<'a, I>(ring: CoeffRing, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = &'a [Scalar]>,
    {
        let mut s = Subspace::zero(ring, ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after elimination against the stored rows. Zero iff
    /// `v` lies in the subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient, "vector length does not match ambient dimension");
        let mut r: Vec<Scalar> = v.iter().map(|x| self.ring.reduce(x.clone())).collect();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = self.ring.sub(x, &self.ring.mul(&f, y));
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Adds `v` to the span. Returns `true` if the dimension grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = self.ring.inv(&r[p]).expect("nonzero pivot");
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x = self.ring.mul(x, &inv);
            }
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x = self.ring.sub(x, &self.ring.mul(&f, y));
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, r);
        true
    }

    /// Basis of `{x : M x = 0}` for the matrix whose rows span `self`, i.e.
    /// the orthogonal complement under the standard pairing.
    pub fn annihilator(&self) -> Vec<Vec<Scalar>> {
        let free = (0..self.ambient).filter(|c| !self.pivots.contains(c));
        free.map(|f| {
            let mut x = vec![Scalar::zero(); self.ambient];
            x[f] = self.ring.one();
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                x[p] = self.ring.neg(&row[f]);
            }
            x
        })
        .collect()
    }

    /// Primitive integer multiples of the echelon rows (meaningful for
    /// `Integers` and `Rationals`).
    pub fn integral_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows
            .iter()
            .map(|row| {
                let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                let ints: Vec<BigInt> = row.iter().map(|x| (x * Scalar::from_integer(lcm.clone())).to_integer()).collect();
                let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
                ints.into_iter().map(|x| if g.is_zero() { x } else { x / &g }).collect()
            })
            .collect()
    }

    /// Sum of two subspaces of the same ambient space.
    pub fn join(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r);
        }
        s
    }
}

/// Null space of the linear map given by `rows` (each of length `ncols`).
pub fn nullspace(ring: &CoeffRing, rows: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<Scalar>> {
    Subspace::span(ring.clone(), ncols, rows.iter().map(Vec::as_slice)).annihilator()
}

/// Inverse of a square matrix over the fraction field, or `None` if singular.
pub fn invert(ring: &CoeffRing, m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    // Row-reduce [M | I].
    let augmented: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { ring.one() } else { Scalar::zero() }));
            r
        })
        .collect();
    let s = Subspace::span(ring.clone(), 2 * n, augmented.iter().map(Vec::as_slice));
    if s.dim() != n || s.pivots().iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(s.rows().iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_integer(x.into())).collect()
    }

    #[test]
    fn canonical_form() {
        let a = Subspace::span(CoeffRing::Rationals, 3, [q(&[1, 2, 3]).as_slice(), q(&[2, 4, 7]).as_slice()]);
        let b = Subspace::span(CoeffRing::Rationals, 3, [q(&[0, 0, 1]).as_slice(), q(&[3, 6, 9]).as_slice()]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
        assert!(a.contains(&q(&[1, 2, 0])));
        assert!(!a.contains(&q(&[0, 1, 0])));
    }

    #[test]
    fn annihilator_dimension() {
        let a = Subspace::span(CoeffRing::Rationals, 4, [q(&[1, 1, 0, 0]).as_slice()]);
        let ann = a.annihilator();
        assert_eq!(ann.len(), 3);
        for x in &ann {
            let dot: Scalar = x.iter().zip(&q(&[1, 1, 0, 0])).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn prime_field_span() {
        let f3 = CoeffRing::PrimeField(3);
        let s = Subspace::span(f3, 2, [q(&[1, 1]).as_slice(), q(&[2, 2]).as_slice()]);
        assert_eq!(s.dim(), 1);
        let t = Subspace::span(CoeffRing::PrimeField(3), 2, [q(&[1, 2]).as_slice(), q(&[2, 1]).as_slice()]);
        assert_eq!(t.dim(), 1);
    }

    #[test]
    fn inverse() {
        let m = vec![q(&[2, 1]), q(&[1, 1])];
        let inv = invert(&CoeffRing::Rationals, &m).unwrap();
        assert_eq!(inv, vec![q(&[1, -1]), q(&[-1, 2])]);
        assert!(invert(&CoeffRing::Rationals, &[q(&[1, 2]), q(&[2, 4])]).is_none());
    }

    #[test]
    fn integral_rows_are_primitive() {
        let half = Scalar::new(1.into(), 2.into());
        let s = Subspace::span(CoeffRing::Integers, 2, [vec![Scalar::from_integer(2.into()), half * Scalar::from_integer(6.into())].as_slice()]);
        assert_eq!(s.integral_rows(), vec![vec![BigInt::from(2), BigInt::from(3)]]);
    }
}
