//! Finite-rank associative algebras (not necessarily unital) given by
//! structure constants `e_i · e_j = Σ_k c_{ij}^k e_k`.

pub mod catalog;
mod derivation;
mod identity;
pub mod io;
pub mod ring;
pub mod subspace;

pub use derivation::{derivation_space, inner_derivation, verify_leibniz, Derivation};
pub use identity::{verify_identity, IdentityCheck, MultilinearIdentity};
pub use ring::{CoeffRing, Scalar};
pub use subspace::Subspace;

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::words::BoundSequence;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("associativity fails on {} basis quadruple(s) (i,j,k,m), first {:?}", failures.len(), failures.first())]
    AssociativityViolation { failures: Vec<[usize; 4]> },
    #[error("bad unit: {0}")]
    BadUnit(String),
    #[error("malformed input at {field}: {message}")]
    MalformedInput { field: String, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("Leibniz rule fails at (e{i}, e{j}): D(e_i e_j) = {lhs}, D(e_i) e_j + e_i D(e_j) = {rhs} ({count} failing pair(s))")]
    LeibnizViolation { i: usize, j: usize, lhs: String, rhs: String, count: usize },
    #[error("span of T_{level} is not nilpotent")]
    NotNilpotent { level: usize },
    #[error("invalid identity: {0}")]
    InvalidIdentity(String),
    #[error("identity fails on basis tuple {tuple:?}")]
    IdentityFails { tuple: Vec<usize> },
    #[error("{0} is not a prime")]
    NotAPrime(u64),
    #[error("unknown {kind} {name:?}")]
    UnknownName { kind: &'static str, name: String },
}

/// Coordinates of an algebra element in the basis `e_0, …, e_{r-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element(Vec<Scalar>);

impl Element {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Element(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Element(vec![Scalar::zero(); rank])
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    ring: CoeffRing,
    names: Vec<String>,
    /// `table[i][j]` lists the nonzero `(k, c_{ij}^k)`.
    table: Vec<Vec<Vec<(usize, Scalar)>>>,
    unit: Option<usize>,
}

impl Algebra {
    /// Builds and validates an algebra. Repeated `(i, j, k)` entries are summed.
    pub fn new(
        ring: CoeffRing,
        names: Vec<String>,
        constants: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
        unit: Option<usize>,
    ) -> Result<Self, AlgebraError> {
        let alg = Self::new_unchecked(ring, names, constants, unit)?;
        alg.check_associative()?;
        alg.check_unit()?;
        Ok(alg)
    }

    /// Builds without the associativity and unit checks. Index ranges are
    /// still validated.
    pub fn new_unchecked(
        ring: CoeffRing,
        names: Vec<String>,
        constants: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
        unit: Option<usize>,
    ) -> Result<Self, AlgebraError> {
        let r = names.len();
        if r == 0 {
            return Err(AlgebraError::MalformedInput { field: "rank".into(), message: "rank must be positive".into() });
        }
        let mut dense = vec![vec![vec![Scalar::zero(); r]; r]; r];
        for (idx, (i, j, k, c)) in constants.into_iter().enumerate() {
            if i >= r || j >= r || k >= r {
                return Err(AlgebraError::MalformedInput {
                    field: format!("structure_constants[{idx}]"),
                    message: format!("index out of range for rank {r}"),
                });
            }
            dense[i][j][k] = ring.add(&dense[i][j][k], &c);
        }
        let table = dense
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect())
                    .collect()
            })
            .collect();
        if let Some(u) = unit {
            if u >= r {
                return Err(AlgebraError::BadUnit(format!("unit index {u} out of range")));
            }
        }
        Ok(Algebra { ring, names, table, unit })
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.names
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Nonzero structure constants in `(i, j, k)` order.
    pub fn constants(&self) -> impl Iterator<Item = (usize, usize, usize, &Scalar)> {
        self.table.iter().enumerate().flat_map(|(i, row)| {
            row.iter().enumerate().flat_map(move |(j, v)| v.iter().map(move |(k, c)| (i, j, *k, c)))
        })
    }

    pub fn basis(&self, i: usize) -> Element {
        let mut e = Element::zero(self.rank());
        e.0[i] = self.ring.one();
        e
    }

    pub fn zero(&self) -> Element {
        Element::zero(self.rank())
    }

    pub fn element(&self, coords: Vec<Scalar>) -> Result<Element, AlgebraError> {
        if coords.len() != self.rank() {
            return Err(AlgebraError::RankMismatch { expected: self.rank(), got: coords.len() });
        }
        Ok(Element(coords.into_iter().map(|c| self.ring.reduce(c)).collect()))
    }

    /// `e_i · e_j` as an element.
    pub fn basis_product(&self, i: usize, j: usize) -> Element {
        let mut out = self.zero();
        for (k, c) in &self.table[i][j] {
            out.0[*k] = c.clone();
        }
        out
    }

    /// `(xy)_k = Σ_{i,j} x_i y_j c_{ij}^k`.
    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element, AlgebraError> {
        self.check_rank(x)?;
        self.check_rank(y)?;
        Ok(self.mul(x, y))
    }

    /// Unchecked product; panics on rank mismatch.
    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        let mut out = self.zero();
        for (i, xi) in x.0.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.0.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let xy = self.ring.mul(xi, yj);
                for (k, c) in &self.table[i][j] {
                    out.0[*k] = self.ring.add(&out.0[*k], &self.ring.mul(&xy, c));
                }
            }
        }
        out
    }

    /// Product of a sequence of elements; `None` for the empty product.
    pub fn product<'a>(&self, factors: impl IntoIterator<Item = &'a Element>) -> Option<Element> {
        let mut it = factors.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, f| self.mul(&acc, f)))
    }

    pub fn add(&self, x: &Element, y: &Element) -> Element {
        Element(x.0.iter().zip(&y.0).map(|(a, b)| self.ring.add(a, b)).collect())
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Element {
        Element(x.0.iter().zip(&y.0).map(|(a, b)| self.ring.sub(a, b)).collect())
    }

    pub fn scale(&self, c: &Scalar, x: &Element) -> Element {
        Element(x.0.iter().map(|a| self.ring.mul(c, a)).collect())
    }

    pub fn check_rank(&self, x: &Element) -> Result<(), AlgebraError> {
        if x.rank() != self.rank() {
            return Err(AlgebraError::RankMismatch { expected: self.rank(), got: x.rank() });
        }
        Ok(())
    }

    /// Every basis quadruple `(i, j, k, m)` where the `e_m` coordinates of
    /// `(e_i e_j) e_k` and `e_i (e_j e_k)` differ.
    pub fn associativity_failures(&self) -> Vec<[usize; 4]> {
        let r = self.rank();
        let mut failures = Vec::new();
        for i in 0..r {
            for j in 0..r {
                let ij = self.basis_product(i, j);
                for k in 0..r {
                    let left = self.mul(&ij, &self.basis(k));
                    let right = self.mul(&self.basis(i), &self.basis_product(j, k));
                    for m in 0..r {
                        if left.0[m] != right.0[m] {
                            failures.push([i, j, k, m]);
                        }
                    }
                }
            }
        }
        failures
    }

    pub fn check_associative(&self) -> Result<(), AlgebraError> {
        let failures = self.associativity_failures();
        if failures.is_empty() {
            Ok(())
        } else {
            Err(AlgebraError::AssociativityViolation { failures })
        }
    }

    fn check_unit(&self) -> Result<(), AlgebraError> {
        let Some(u) = self.unit else { return Ok(()) };
        for i in 0..self.rank() {
            let e = self.basis(i);
            if self.basis_product(u, i) != e || self.basis_product(i, u) != e {
                return Err(AlgebraError::BadUnit(format!(
                    "e{u} is not a two-sided identity on {}",
                    self.names[i]
                )));
            }
        }
        Ok(())
    }

    /// Readable form such as `2*e12 - 1/2*e13`, or `0`.
    pub fn format_element(&self, x: &Element) -> String {
        format_terms(x.coords().iter().zip(&self.names).map(|(c, n)| (c, n.as_str())))
    }

    /// The span of a list of elements.
    pub fn span<'a>(&self, elements: impl IntoIterator<Item = &'a Element>) -> Subspace {
        Subspace::span(self.ring.clone(), self.rank(), elements.into_iter().map(|e| e.coords()))
    }

    pub fn subspace_basis(&self, s: &Subspace) -> Vec<Element> {
        s.rows().iter().map(|r| Element(r.clone())).collect()
    }
}

/// Joins `(coefficient, label)` pairs as `c*label ± …`, skipping zeros.
pub(crate) fn format_terms<'a>(terms: impl IntoIterator<Item = (&'a Scalar, &'a str)>) -> String {
    let mut out = String::new();
    for (c, name) in terms {
        if c.is_zero() {
            continue;
        }
        let negative = c < &Scalar::zero();
        let mag = if negative { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if mag == num_traits::One::one() {
            out.push_str(name);
        } else {
            out.push_str(&format!("{mag}*{name}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank-{} algebra over {} with basis [{}]", self.rank(), self.ring, self.names.join(", "))?;
        if let Some(u) = self.unit {
            write!(f, ", unit {}", self.names[u])?;
        }
        Ok(())
    }
}

/// Span of all `m`-fold products of elements of `s`, built as
/// `S^m = span(S^{m-1} · S)`.
pub fn span_power(alg: &Algebra, s: &Subspace, m: usize) -> Subspace {
    assert!(m >= 1, "powers start at 1");
    let mut p = s.clone();
    for _ in 1..m {
        if p.is_zero() {
            break;
        }
        p = span_product(alg, &p, s);
    }
    p
}

/// `span{a·b : a ∈ A, b ∈ B}` computed on bases.
pub fn span_product(alg: &Algebra, left: &Subspace, right: &Subspace) -> Subspace {
    let mut out = Subspace::zero(alg.ring().clone(), alg.rank());
    for a in left.rows() {
        let a = Element(a.clone());
        for b in right.rows() {
            let prod = alg.mul(&a, &Element(b.clone()));
            out.insert(prod.coords());
        }
    }
    out
}

/// Least `b` with `S^b = 0`, or `None` if `S` is not nilpotent.
///
/// A nilpotent subalgebra `B` satisfies `B^{dim B + 1} = 0`, so checking up
/// to `rank + 1` settles the question.
pub fn nilpotency_index(alg: &Algebra, s: &Subspace) -> Option<usize> {
    power_dimensions(alg, s).1
}

/// Dimensions of `S, S², …` until zero or `rank + 1` steps, and the
/// nilpotency index if reached.
pub fn power_dimensions(alg: &Algebra, s: &Subspace) -> (Vec<usize>, Option<usize>) {
    let mut dims = Vec::new();
    let mut p = s.clone();
    for m in 1..=alg.rank() + 1 {
        dims.push(p.dim());
        if p.is_zero() {
            return (dims, Some(m));
        }
        p = span_product(alg, &p, s);
    }
    dims.push(p.dim());
    if p.is_zero() {
        return (dims, Some(alg.rank() + 2));
    }
    (dims, None)
}

/// `b_n = nilpotency index of span(T ∪ δ(T) ∪ ⋯ ∪ δⁿ(T))` for `n = 0..=levels`.
///
/// The tail rule is enabled exactly when the spans have stopped growing by
/// the last level, in which case `b_m = b_levels` for every larger `m`.
pub fn b_sequence(
    alg: &Algebra,
    delta: &Derivation,
    generators: &[Element],
    levels: usize,
) -> Result<BoundSequence, AlgebraError> {
    let (bounds, _) = b_sequence_with_spans(alg, delta, generators, levels)?;
    Ok(bounds)
}

/// [`b_sequence`] together with the spans of `T_0, …, T_levels`.
pub fn b_sequence_with_spans(
    alg: &Algebra,
    delta: &Derivation,
    generators: &[Element],
    levels: usize,
) -> Result<(BoundSequence, Vec<Subspace>), AlgebraError> {
    for g in generators {
        alg.check_rank(g)?;
    }
    let mut frontier: Vec<Element> = generators.to_vec();
    let mut span = alg.span(generators.iter());
    let mut spans = Vec::with_capacity(levels + 1);
    let mut prefix = Vec::with_capacity(levels + 1);
    for level in 0..=levels {
        let b = nilpotency_index(alg, &span).ok_or(AlgebraError::NotNilpotent { level })?;
        prefix.push(b as u64);
        spans.push(span.clone());
        frontier = frontier.iter().map(|x| delta.apply(alg, x)).collect();
        for x in &frontier {
            span.insert(x.coords());
        }
    }
    // `span` now holds T_{levels+1}; equal spans mean δ maps span(T_levels) into itself.
    let stable = spans.last().is_some_and(|last| *last == span);
    let bounds = BoundSequence::new(prefix, stable).expect("nilpotency indices are positive");
    Ok((bounds, spans))
}

/// Adjoins a two-sided identity as basis element 0 (named `"1"`); the old
/// basis follows in order and spans an ideal.
pub fn unitalize(alg: &Algebra) -> Algebra {
    let r = alg.rank();
    let ring = alg.ring().clone();
    let mut names = vec![String::from("1")];
    names.extend(alg.basis_names().iter().cloned());
    let mut constants: Vec<(usize, usize, usize, Scalar)> = Vec::new();
    constants.push((0, 0, 0, ring.one()));
    for j in 1..=r {
        constants.push((0, j, j, ring.one()));
        constants.push((j, 0, j, ring.one()));
    }
    for (i, j, k, c) in alg.constants() {
        constants.push((i + 1, j + 1, k + 1, c.clone()));
    }
    Algebra::new_unchecked(ring, names, constants, Some(0)).expect("indices in range")
}

/// Embeds an element of `A` into `unitalize(A)`.
pub fn embed_in_unitalization(x: &Element) -> Element {
    let mut c = vec![Scalar::zero()];
    c.extend(x.coords().iter().cloned());
    Element(c)
}

#[cfg(test)]
mod tests {
    use super::catalog;
    use super::*;

    fn q(v: i64) -> Scalar {
        Scalar::from_integer(v.into())
    }

    #[test]
    fn strict_upper_is_valid() {
        let a = catalog::strict_upper_triangular(CoeffRing::Rationals, 3);
        assert_eq!(a.basis_names(), &["e12", "e13", "e23"]);
        let e12 = a.basis(0);
        let e23 = a.basis(2);
        assert_eq!(a.multiply(&e12, &e23).unwrap(), a.basis(1));
        assert!(a.mul(&e23, &e12).is_zero());
    }

    #[test]
    fn square_zero_is_valid() {
        let a = catalog::square_zero(CoeffRing::Integers, 3);
        let x = a.element(vec![q(1), q(2), q(3)]).unwrap();
        assert!(a.mul(&x, &x).is_zero());
    }

    #[test]
    fn associativity_violation_is_reported() {
        // e1·e1 = e2, e2·e1 = e1.
        let names = vec!["e1".to_string(), "e2".to_string()];
        let err = Algebra::new(CoeffRing::Rationals, names, [(0, 0, 1, q(1)), (1, 0, 0, q(1))], None).unwrap_err();
        let AlgebraError::AssociativityViolation { failures } = err else { panic!() };
        // (e1e1)e1 = e2e1 = e1 while e1(e1e1) = e1e2 = 0.
        assert!(failures.contains(&[0, 0, 0, 0]));
    }

    #[test]
    fn unit_is_checked() {
        let names = vec!["a".to_string(), "b".to_string()];
        let err = Algebra::new(CoeffRing::Rationals, names, [(0, 0, 0, q(1))], Some(0)).unwrap_err();
        assert!(matches!(err, AlgebraError::BadUnit(_)));
    }

    #[test]
    fn unit_multiplication() {
        let a = catalog::upper_triangular(CoeffRing::Rationals, 2);
        let u = unitalize(&a);
        u.check_associative().unwrap();
        let x = embed_in_unitalization(&a.element(vec![q(2), q(-1), q(5)]).unwrap());
        assert_eq!(u.mul(&u.basis(0), &x), x);
        assert_eq!(u.mul(&x, &u.basis(0)), x);
    }

    #[test]
    fn unitalize_restricts_to_original() {
        let a = catalog::strict_upper_triangular(CoeffRing::Rationals, 3);
        let u = unitalize(&a);
        for i in 0..3 {
            for j in 0..3 {
                let orig = a.basis_product(i, j);
                let lifted = u.basis_product(i + 1, j + 1);
                assert_eq!(lifted, embed_in_unitalization(&orig));
            }
        }
        let sq = catalog::square_zero(CoeffRing::Rationals, 1);
        let u = unitalize(&sq);
        assert_eq!(u.rank(), 2);
        assert_eq!(u.unit(), Some(0));
        assert!(u.basis_product(1, 1).is_zero());
    }

    #[test]
    fn rank_mismatch() {
        let a = catalog::square_zero(CoeffRing::Rationals, 2);
        let bad = Element::new(vec![q(1)]);
        assert_eq!(a.multiply(&bad, &a.basis(0)), Err(AlgebraError::RankMismatch { expected: 2, got: 1 }));
    }

    #[test]
    fn span_powers() {
        let a = catalog::strict_upper_triangular(CoeffRing::Rationals, 3);
        let full = a.span((0..3).map(|i| a.basis(i)).collect::<Vec<_>>().iter());
        assert_eq!(span_power(&a, &full, 1), full);
        assert_eq!(span_power(&a, &full, 2), a.span([a.basis(1)].iter()));
        assert!(span_power(&a, &full, 3).is_zero());
        assert_eq!(nilpotency_index(&a, &full), Some(3));

        let sq = catalog::square_zero(CoeffRing::Rationals, 2);
        let full = sq.span([sq.basis(0), sq.basis(1)].iter());
        assert!(span_power(&sq, &full, 2).is_zero());
        assert_eq!(nilpotency_index(&sq, &full), Some(2));
    }

    #[test]
    fn idempotent_is_not_nilpotent() {
        let a = catalog::truncated_polynomial(CoeffRing::PrimeField(3), 3);
        let one = a.span([a.basis(0)].iter());
        assert_eq!(nilpotency_index(&a, &one), None);
        let t = a.span([a.basis(1)].iter());
        assert_eq!(nilpotency_index(&a, &t), Some(3));
    }

    #[test]
    fn b_sequence_examples() {
        let a = catalog::strict_upper_triangular(CoeffRing::Rationals, 3);
        let zero = Derivation::zero(a.rank());
        let t = [a.basis(0), a.basis(2)];
        let b = b_sequence(&a, &zero, &t, 3).unwrap();
        assert!(b.prefix().iter().all(|&x| x == b.prefix()[0]));
        assert!(b.tail_rule());

        let inner = inner_derivation(&a, &a.basis(0));
        let b = b_sequence(&a, &inner, &[a.basis(2)], 1).unwrap();
        assert_eq!(b.prefix(), &[2, 2]);

        let f3 = catalog::truncated_polynomial(CoeffRing::PrimeField(3), 3);
        let d = catalog::truncated_derivative(&f3);
        assert_eq!(
            b_sequence(&f3, &d, &[f3.basis(1)], 2),
            Err(AlgebraError::NotNilpotent { level: 1 })
        );
    }

    #[test]
    fn formatting() {
        let a = catalog::strict_upper_triangular(CoeffRing::Rationals, 3);
        let x = a.element(vec![q(2), q(0), Scalar::new((-1).into(), 2.into())]).unwrap();
        assert_eq!(a.format_element(&x), "2*e12 - 1/2*e23");
        assert_eq!(a.format_element(&a.zero()), "0");
    }
}
