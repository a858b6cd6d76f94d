//! The differential polynomial ring `A[x; δ]`, where `x a = a x + δ(a)`.

mod rewrite;

pub use rewrite::{direct_product, evaluate_terms, rewrite_product, terms_to_text, CanonicalTerm};

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{
    b_sequence, verify_identity, Algebra, AlgebraError, Derivation, Element, MultilinearIdentity, Scalar, Subspace,
};
use crate::words::{compute_bounds, BoundSequence, BoundsResult, WordsError};

/// Default cap on the flattened coordinate dimension of a span.
pub const DEFAULT_SPAN_BUDGET: usize = 1 << 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OreError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Words(#[from] WordsError),
    #[error("exponent p_{index} = {value} exceeds k = {k}")]
    ExponentTooLarge { index: usize, value: u64, k: u64 },
    #[error("generator index {index} out of range ({len} generators)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("expected {expected} exponents for {factors} factors, got {got}")]
    ExponentCount { factors: usize, expected: usize, got: usize },
    #[error("span needs {needed} coordinates, budget is {budget}")]
    BudgetExceeded { needed: usize, budget: usize },
}

/// `a_0 + a_1 x + ⋯ + a_n x^n` with coefficients written on the left.
/// Trailing zero coefficients are trimmed, so the zero polynomial has no
/// coefficients at all.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffPoly {
    coeffs: Vec<Element>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly { coeffs: Vec::new() }
    }

    pub fn new(coeffs: Vec<Element>) -> Self {
        let mut p = DiffPoly { coeffs };
        p.trim();
        p
    }

    pub fn constant(a: Element) -> Self {
        DiffPoly::new(vec![a])
    }

    /// `a x^deg`.
    pub fn monomial(alg: &Algebra, a: Element, deg: usize) -> Self {
        let mut coeffs = vec![alg.zero(); deg];
        coeffs.push(a);
        DiffPoly::new(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Element::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Element] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, alg: &Algebra, deg: usize) -> Element {
        self.coeffs.get(deg).cloned().unwrap_or_else(|| alg.zero())
    }

    pub fn add(&self, alg: &Algebra, other: &DiffPoly) -> DiffPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        DiffPoly::new((0..n).map(|i| alg.add(&self.coeff(alg, i), &other.coeff(alg, i))).collect())
    }

    pub fn scale(&self, alg: &Algebra, c: &Scalar) -> DiffPoly {
        DiffPoly::new(self.coeffs.iter().map(|a| alg.scale(c, a)).collect())
    }

    /// `a · f`, multiplying each coefficient on the left.
    pub fn left_mul(&self, alg: &Algebra, a: &Element) -> DiffPoly {
        DiffPoly::new(self.coeffs.iter().map(|b| alg.mul(a, b)).collect())
    }

    pub fn check_rank(&self, alg: &Algebra) -> Result<(), AlgebraError> {
        self.coeffs.iter().try_for_each(|a| alg.check_rank(a))
    }

    /// Coordinates in `(degree, basis index)` order, padded to `max_deg`.
    fn flatten(&self, alg: &Algebra, max_deg: usize) -> Vec<Scalar> {
        let r = alg.rank();
        let mut out = vec![Scalar::zero(); (max_deg + 1) * r];
        for (d, a) in self.coeffs.iter().enumerate() {
            out[d * r..(d + 1) * r].clone_from_slice(a.coords());
        }
        out
    }

    fn unflatten(alg: &Algebra, coords: &[Scalar]) -> DiffPoly {
        DiffPoly::new(coords.chunks(alg.rank()).map(|c| Element::new(c.to_vec())).collect())
    }

    pub fn format(&self, alg: &Algebra) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (d, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let body = alg.format_element(a);
            let body = if body.contains([' ']) && d > 0 { format!("({body})") } else { body };
            parts.push(match d {
                0 => body,
                1 => format!("{body}*x"),
                _ => format!("{body}*x^{d}"),
            });
        }
        parts.join(" + ")
    }
}

/// `x · f`, one application of `x a = a x + δ(a)` per coefficient.
fn x_times(alg: &Algebra, delta: &Derivation, f: &DiffPoly) -> DiffPoly {
    let mut coeffs = vec![alg.zero(); f.coeffs.len() + 1];
    for (j, b) in f.coeffs.iter().enumerate() {
        coeffs[j + 1] = alg.add(&coeffs[j + 1], b);
        coeffs[j] = alg.add(&coeffs[j], &delta.apply(alg, b));
    }
    DiffPoly::new(coeffs)
}

/// `f · g` in `A[x; δ]`. Each `a_i x^i · g` is computed as `a_i · (x · (⋯ (x · g)))`
/// using only the single-step rule.
pub fn ore_multiply(alg: &Algebra, delta: &Derivation, f: &DiffPoly, g: &DiffPoly) -> Result<DiffPoly, AlgebraError> {
    f.check_rank(alg)?;
    g.check_rank(alg)?;
    Ok(ore_mul(alg, delta, f, g))
}

pub(crate) fn ore_mul(alg: &Algebra, delta: &Derivation, f: &DiffPoly, g: &DiffPoly) -> DiffPoly {
    let mut out = DiffPoly::zero();
    let mut shifted = g.clone();
    for (i, a) in f.coeffs.iter().enumerate() {
        if i > 0 {
            shifted = x_times(alg, delta, &shifted);
        }
        if !a.is_zero() {
            out = out.add(alg, &shifted.left_mul(alg, a));
        }
    }
    out
}

/// One term `binomial · δ^j(a) · x^{d-j}` of `x^d a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutedTerm {
    pub binomial: BigInt,
    pub element: Element,
    pub xdeg: usize,
}

/// `x^d a = Σ_{j=0}^{d} C(d, j) δ^j(a) x^{d-j}`, listed by increasing `j`.
pub fn commute_xd(alg: &Algebra, delta: &Derivation, d: usize, a: &Element) -> Vec<CommutedTerm> {
    let mut out = Vec::with_capacity(d + 1);
    let mut binomial = BigInt::one();
    let mut current = a.clone();
    for j in 0..=d {
        out.push(CommutedTerm { binomial: binomial.clone(), element: current.clone(), xdeg: d - j });
        binomial = binomial * (d - j) / (j + 1);
        current = delta.apply(alg, &current);
    }
    out
}

/// The expansion of [`commute_xd`] summed into a polynomial.
pub fn commute_xd_poly(alg: &Algebra, delta: &Derivation, d: usize, a: &Element) -> DiffPoly {
    let mut coeffs = vec![alg.zero(); d + 1];
    for t in commute_xd(alg, delta, d, a) {
        let c = alg.ring().reduce(Scalar::from_integer(t.binomial));
        coeffs[t.xdeg] = alg.add(&coeffs[t.xdeg], &alg.scale(&c, &t.element));
    }
    DiffPoly::new(coeffs)
}

/// Dimensions of `span(S)`, `span(S²)`, … up to `span(S^max_m)`, stopping
/// early at the first zero power.
///
/// `S^m` is computed as `span(S^{m-1} · S)` on the flattened
/// `(degree, basis)` coordinates. `budget` caps the flattened dimension
/// `(m · deg S + 1) · rank`.
pub fn power_dimensions(
    alg: &Algebra,
    delta: &Derivation,
    set: &[DiffPoly],
    max_m: usize,
    budget: usize,
) -> Result<Vec<usize>, OreError> {
    for f in set {
        f.check_rank(alg)?;
    }
    let max_deg = set.iter().filter_map(DiffPoly::degree).max().unwrap_or(0);
    let needed = (max_m * max_deg + 1).saturating_mul(alg.rank());
    if needed > budget {
        return Err(OreError::BudgetExceeded { needed, budget });
    }
    let top = max_m * max_deg;
    let ambient = (top + 1) * alg.rank();
    let span_of = |polys: Vec<DiffPoly>| {
        let mut s = Subspace::zero(alg.ring().clone(), ambient);
        for p in polys {
            s.insert(&p.flatten(alg, top));
        }
        s
    };
    let mut current = span_of(set.to_vec());
    let mut dims = vec![current.dim()];
    for _ in 1..max_m {
        if current.is_zero() {
            break;
        }
        let basis: Vec<DiffPoly> = current.rows().iter().map(|r| DiffPoly::unflatten(alg, r)).collect();
        let products: Vec<DiffPoly> = basis
            .par_iter()
            .flat_map_iter(|p| set.iter().map(move |s| ore_mul(alg, delta, p, s)))
            .collect();
        current = span_of(products);
        dims.push(current.dim());
    }
    Ok(dims)
}

/// Dimension of the span of all `m`-fold products of elements of `set`.
pub fn set_power_dimension(
    alg: &Algebra,
    delta: &Derivation,
    set: &[DiffPoly],
    m: usize,
    budget: usize,
) -> Result<usize, OreError> {
    assert!(m >= 1, "powers start at 1");
    let dims = power_dimensions(alg, delta, set, m, budget)?;
    Ok(if dims.len() < m { 0 } else { dims[m - 1] })
}

/// Outcome of a local-nilpotency check for a finite set `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotencyReport {
    /// Least `N` with `S^{N+1} = 0`, if found within the cap.
    pub minimal_n: Option<usize>,
    pub cap: usize,
    /// `dim span(S^m)` for `m = 1, 2, …`.
    pub dimensions: Vec<usize>,
    pub theorem: Option<TheoremBound>,
}

impl NilpotencyReport {
    /// `true` when both numbers are known and `minimal_N ≤ N`.
    pub fn within_bound(&self) -> Option<bool> {
        let n = self.minimal_n?;
        let bound = &self.theorem.as_ref()?.bounds.n;
        Some(BigUint::from(n) <= *bound)
    }
}

/// Least `N ≤ cap` with `S^{N+1} = 0`.
pub fn minimal_nilpotency(
    alg: &Algebra,
    delta: &Derivation,
    set: &[DiffPoly],
    cap: usize,
    budget: usize,
) -> Result<NilpotencyReport, OreError> {
    let dims = power_dimensions(alg, delta, set, cap + 1, budget)?;
    let minimal_n = dims.iter().position(|&d| d == 0);
    Ok(NilpotencyReport { minimal_n, cap, dimensions: dims, theorem: None })
}

/// The bound `N(d, b, k)` for subsets of `T + Tx + ⋯ + Tx^k`, together with
/// the inputs it was computed from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremBound {
    pub degree: usize,
    pub k: u64,
    pub b: BoundSequence,
    pub bounds: BoundsResult,
}

impl fmt::Display for TheoremBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N(d={}, b={}, k={}) = {}", self.degree, self.b, self.k, self.bounds.n)
    }
}

/// `compute_bounds(d, b, k, 1)` where `d` is the identity's degree and `b`
/// the nilpotency indices of `span(T ∪ δ(T) ∪ ⋯ ∪ δⁿ(T))`.
///
/// The `b` prefix runs to `n = rank`: the spans form a chain in a space of
/// that dimension, so they have stabilized by then and the tail rule holds.
pub fn theorem_bound(
    alg: &Algebra,
    delta: &Derivation,
    generators: &[Element],
    k: u64,
    ident: &MultilinearIdentity,
) -> Result<TheoremBound, OreError> {
    let check = verify_identity(alg, ident);
    if let Some(tuple) = check.counterexample {
        return Err(AlgebraError::IdentityFails { tuple }.into());
    }
    let b = b_sequence(alg, delta, generators, alg.rank())?;
    debug_assert!(b.tail_rule());
    let one = num_rational::BigRational::one();
    let bounds = compute_bounds(ident.degree(), &b, k, &one)?;
    Ok(TheoremBound { degree: ident.degree(), k, b, bounds })
}

/// `true` if every element of `set` lies in `span(T) + span(T) x + ⋯ + span(T) x^k`.
pub fn within_t_span(alg: &Algebra, generators: &[Element], k: u64, set: &[DiffPoly]) -> bool {
    let t = alg.span(generators.iter());
    set.iter().all(|f| f.degree().is_none_or(|d| d as u64 <= k) && f.coeffs().iter().all(|a| t.contains(a.coords())))
}
