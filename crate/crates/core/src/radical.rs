//! Nil radicals of finite-dimensional algebras, derivation stability, and
//! the Leibniz expansion of `δ^n(b_1 ⋯ b_n)`.
//!
//! In finite dimension an ideal is nil iff it is nilpotent; every check here
//! relies on that.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{
    embed_in_unitalization, nilpotency_index, unitalize, Algebra, AlgebraError, CoeffRing, Derivation, Element, Scalar,
    Subspace,
};

/// Default cap for [`leibniz_coefficients`].
pub const DEFAULT_LEIBNIZ_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RadicalError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("the trace-form radical needs rational coefficients, got {0}")]
    RequiresRationals(CoeffRing),
    #[error("internal verification failed: {0}")]
    VerificationFailed(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("n = {n} exceeds the cap {cap}")]
    CapExceeded { n: usize, cap: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadicalMethod {
    TraceForm,
    UserSuppliedVerified,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalReport {
    pub radical: Subspace,
    pub method: RadicalMethod,
    pub certificate: NilIdealReport,
}

/// A product `e_i · v` or `v · e_i` that leaves `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureFailure {
    pub left: bool,
    pub multiplier: usize,
    pub row: usize,
    pub product: Element,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilIdealReport {
    pub is_ideal: bool,
    pub nilpotency_index: Option<usize>,
    pub closure_failure: Option<ClosureFailure>,
}

impl NilIdealReport {
    pub fn holds(&self) -> bool {
        self.is_ideal && self.nilpotency_index.is_some()
    }
}

/// `A¹ V A¹ ⊆ V` and `V` nilpotent. Closure under multiplication by the basis
/// of `A` on each side is enough, since the unit acts trivially and
/// `e_i v e_j = (e_i v) e_j`.
pub fn is_nil_ideal(alg: &Algebra, v: &Subspace) -> NilIdealReport {
    let mut closure_failure = None;
    'outer: for (row_idx, row) in v.rows().iter().enumerate() {
        let x = Element::new(row.clone());
        for i in 0..alg.rank() {
            let e = alg.basis(i);
            for (left, product) in [(true, alg.mul(&e, &x)), (false, alg.mul(&x, &e))] {
                if !v.contains(product.coords()) {
                    closure_failure = Some(ClosureFailure { left, multiplier: i, row: row_idx, product });
                    break 'outer;
                }
            }
        }
    }
    NilIdealReport {
        is_ideal: closure_failure.is_none(),
        nilpotency_index: nilpotency_index(alg, v),
        closure_failure,
    }
}

/// The radical as `{x : tr(L_{xy}) = 0 for all y}`, computed in the algebra
/// itself when it has a unit and in its unitalization otherwise. The result
/// is checked with [`is_nil_ideal`] before it is returned.
///
/// The criterion needs a unit and characteristic zero: a trace-orthogonal
/// `x` then has `tr(L_x^m) = 0` for all `m ≥ 1`, so `L_x` is nilpotent.
pub fn radical_char0(alg: &Algebra) -> Result<RadicalReport, RadicalError> {
    if *alg.ring() != CoeffRing::Rationals {
        return Err(RadicalError::RequiresRationals(alg.ring().clone()));
    }
    let unital = alg.unit().is_some();
    let b = if unital { alg.clone() } else { unitalize(alg) };
    let r = b.rank();
    // tr(L_{e_k}) = Σ_m c_{km}^m.
    let traces: Vec<Scalar> = (0..r).map(|k| (0..r).map(|m| b.basis_product(k, m).coords()[m].clone()).sum()).collect();
    let gram: Vec<Vec<Scalar>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| b.basis_product(i, j).coords().iter().zip(&traces).map(|(c, t)| c * t).sum())
                .collect()
        })
        .collect();
    let kernel = crate::algebra::subspace::nullspace(b.ring(), &gram, r);
    let vectors: Vec<Vec<Scalar>> = if unital {
        kernel
    } else {
        let mut out = Vec::with_capacity(kernel.len());
        for v in kernel {
            if !v[0].is_zero() {
                return Err(RadicalError::VerificationFailed("radical of the unitalization meets the unit".into()));
            }
            out.push(v[1..].to_vec());
        }
        out
    };
    let radical = Subspace::span(alg.ring().clone(), alg.rank(), vectors.iter().map(Vec::as_slice));
    let certificate = is_nil_ideal(alg, &radical);
    if !certificate.holds() {
        return Err(RadicalError::VerificationFailed(format!("trace-form radical is not a nil ideal: {certificate:?}")));
    }
    Ok(RadicalReport { radical, method: RadicalMethod::TraceForm, certificate })
}

/// Certifies a user-supplied candidate as a nil ideal.
pub fn verify_candidate(alg: &Algebra, candidate: Subspace) -> Result<RadicalReport, RadicalError> {
    let certificate = is_nil_ideal(alg, &candidate);
    if !certificate.holds() {
        return Err(RadicalError::PreconditionViolated(match &certificate.closure_failure {
            Some(f) => format!(
                "candidate is not an ideal: {} multiplication of basis row {} by {} gives {}",
                if f.left { "left" } else { "right" },
                f.row,
                alg.basis_names()[f.multiplier],
                alg.format_element(&f.product)
            ),
            None => "candidate is not nilpotent".into(),
        }));
    }
    Ok(RadicalReport { radical: candidate, method: RadicalMethod::UserSuppliedVerified, certificate })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stability {
    Stable,
    /// `δ(witness) = image ∉ N`.
    Unstable { witness: Element, image: Element },
}

/// Whether `δ(N) ⊆ N`, checked on the echelon basis of `N`. The witness is
/// the first basis vector whose image leaves `N`.
pub fn check_delta_stability(alg: &Algebra, delta: &Derivation, n: &Subspace) -> Result<Stability, RadicalError> {
    if delta.rank() != alg.rank() || n.ambient() != alg.rank() {
        return Err(AlgebraError::RankMismatch { expected: alg.rank(), got: delta.rank().min(n.ambient()) }.into());
    }
    if !is_nil_ideal(alg, n).holds() {
        return Err(RadicalError::PreconditionViolated("N is not a nil ideal".into()));
    }
    for row in n.rows() {
        let b = Element::new(row.clone());
        let image = delta.apply(alg, &b);
        if !n.contains(image.coords()) {
            return Ok(Stability::Unstable { witness: b, image });
        }
    }
    Ok(Stability::Stable)
}

/// Coefficients `c_J` of `δ^n(b_1 ⋯ b_n) = Σ_J c_J δ^{j_1}(b_1) ⋯ δ^{j_n}(b_n)`
/// over compositions `J` of `n` into `n` nonnegative parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizTable {
    pub n: usize,
    pub coefficients: BTreeMap<Vec<u32>, BigUint>,
}

impl LeibnizTable {
    pub fn get(&self, composition: &[u32]) -> BigUint {
        self.coefficients.get(composition).cloned().unwrap_or_default()
    }

    /// `c_{1,…,1}`.
    pub fn all_ones(&self) -> BigUint {
        self.get(&vec![1; self.n])
    }
}

/// Builds the table by applying the single-step rule
/// `δ(f_1 ⋯ f_n) = Σ_i f_1 ⋯ δ(f_i) ⋯ f_n` `n` times to the free product.
pub fn leibniz_coefficients(n: usize, cap: usize) -> Result<LeibnizTable, RadicalError> {
    if n == 0 {
        return Err(RadicalError::PreconditionViolated("n must be positive".into()));
    }
    if n > cap {
        return Err(RadicalError::CapExceeded { n, cap });
    }
    let mut state: BTreeMap<Vec<u32>, BigUint> = BTreeMap::new();
    state.insert(vec![0; n], BigUint::one());
    for _ in 0..n {
        let mut next: BTreeMap<Vec<u32>, BigUint> = BTreeMap::new();
        for (comp, c) in &state {
            for i in 0..n {
                let mut bumped = comp.clone();
                bumped[i] += 1;
                *next.entry(bumped).or_default() += c;
            }
        }
        state = next;
    }
    Ok(LeibnizTable { n, coefficients: state })
}

/// `Σ_J c_J δ^{j_1}(b_1) ⋯ δ^{j_n}(b_n)` in a concrete algebra.
pub fn evaluate_leibniz(alg: &Algebra, delta: &Derivation, table: &LeibnizTable, factors: &[Element]) -> Element {
    assert_eq!(factors.len(), table.n, "one factor per slot");
    let mut total = alg.zero();
    for (comp, c) in &table.coefficients {
        let terms: Vec<Element> = comp.iter().zip(factors).map(|(&j, b)| delta.apply_power(alg, j as usize, b)).collect();
        let prod = alg.product(&terms).expect("n ≥ 1");
        let c = alg.ring().reduce(Scalar::from_integer(c.clone().into()));
        total = alg.add(&total, &alg.scale(&c, &prod));
    }
    total
}

/// Results of the three checks behind `δ(b)^n ∈ N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqBReport {
    pub n: usize,
    /// The Leibniz sum for `δ^n(b^n)` evaluates to zero, as `b^n = 0`.
    pub expansion_vanishes: bool,
    /// Every term with some `j_i = 0` lies in `A¹ b A¹`.
    pub zero_part_terms_in_ideal: bool,
    /// `A¹ b A¹ ⊆ N`.
    pub ideal_in_n: bool,
    /// `c_{1,…,1} · δ(b)^n ∈ N`.
    pub scaled_power_in_n: bool,
    /// `δ(b)^n ∈ N`.
    pub power_in_n: bool,
    pub delta_b_power: Element,
}

impl EqBReport {
    pub fn all_pass(&self) -> bool {
        self.expansion_vanishes && self.zero_part_terms_in_ideal && self.ideal_in_n && self.scaled_power_in_n && self.power_in_n
    }
}

/// Checks the chain of inclusions that gives `δ(b)^n ∈ N` from `b^n = 0`.
pub fn verify_eq_b(
    alg: &Algebra,
    delta: &Derivation,
    b: &Element,
    n: usize,
    nil: &Subspace,
) -> Result<EqBReport, RadicalError> {
    if alg.ring().characteristic() != 0 {
        return Err(RadicalError::PreconditionViolated("characteristic must be zero".into()));
    }
    alg.check_rank(b)?;
    let powers = vec![b.clone(); n];
    if n == 0 || !alg.product(&powers).expect("n ≥ 1").is_zero() {
        return Err(RadicalError::PreconditionViolated(format!("b^{n} is not zero")));
    }
    if !is_nil_ideal(alg, nil).holds() {
        return Err(RadicalError::PreconditionViolated("N is not a nil ideal".into()));
    }
    let table = leibniz_coefficients(n, usize::MAX)?;
    let expansion_vanishes = evaluate_leibniz(alg, delta, &table, &powers).is_zero();

    let ideal = generated_ideal(alg, b);
    let mut zero_part_terms_in_ideal = true;
    let mut rest = alg.zero();
    for (comp, c) in &table.coefficients {
        if comp.iter().all(|&j| j == 1) {
            continue;
        }
        let terms: Vec<Element> = comp.iter().map(|&j| delta.apply_power(alg, j as usize, b)).collect();
        let term = alg.scale(&Scalar::from_integer(c.clone().into()), &alg.product(&terms).expect("n ≥ 1"));
        // Compositions of n into n parts other than (1,…,1) contain a zero.
        zero_part_terms_in_ideal &= ideal.contains(term.coords());
        rest = alg.add(&rest, &term);
    }
    let ideal_in_n = nil.contains_subspace(&ideal);
    let delta_b = delta.apply(alg, b);
    let delta_b_power = alg.product(&vec![delta_b; n]).expect("n ≥ 1");
    let c_ones = Scalar::from_integer(table.all_ones().into());
    let scaled = alg.scale(&c_ones, &delta_b_power);
    // c_{1..1} δ(b)^n = δ^n(b^n) − rest = −rest when the expansion vanishes.
    let scaled_power_in_n = nil.contains(scaled.coords());
    let power_in_n = nil.contains(delta_b_power.coords());
    debug_assert!(!expansion_vanishes || alg.add(&scaled, &rest).is_zero());
    Ok(EqBReport { n, expansion_vanishes, zero_part_terms_in_ideal, ideal_in_n, scaled_power_in_n, power_in_n, delta_b_power })
}

/// `span(A¹ b A¹)`.
pub fn generated_ideal(alg: &Algebra, b: &Element) -> Subspace {
    let mut multipliers: Vec<Option<Element>> = vec![None];
    multipliers.extend((0..alg.rank()).map(|i| Some(alg.basis(i))));
    let mut out = Subspace::zero(alg.ring().clone(), alg.rank());
    for l in &multipliers {
        let lb = l.as_ref().map_or_else(|| b.clone(), |l| alg.mul(l, b));
        for r in &multipliers {
            let lbr = r.as_ref().map_or_else(|| lb.clone(), |r| alg.mul(&lb, r));
            out.insert(lbr.coords());
        }
    }
    out
}

/// A nonzero `x̄ ∈ A / N` with `x̄ · A¹ · x̄ = 0`, if one exists among the
/// candidates searched.
///
/// Candidates are supported on the non-pivot coordinates of `N`, so each is
/// a distinct nonzero class of the quotient. Over `F_p` every class is tried;
/// otherwise each coordinate ranges over `-grid..=grid`.
pub fn semiprime_witness(alg: &Algebra, n: &Subspace, grid: i64) -> Option<Element> {
    let free: Vec<usize> = (0..alg.rank()).filter(|c| !n.pivots().contains(c)).collect();
    let values: Vec<Scalar> = match alg.ring() {
        CoeffRing::PrimeField(p) => (0..*p).map(|v| alg.ring().from_int(v)).collect(),
        _ => (-grid..=grid).map(|v| Scalar::from_integer(v.into())).collect(),
    };
    let base = values.len() as u128;
    let total = base.checked_pow(free.len() as u32)?;
    let unitalized = unitalize(alg);
    let multipliers: Vec<Element> = (0..unitalized.rank()).map(|i| unitalized.basis(i)).collect();
    let in_n = |y: &Element| n.contains(&y.coords()[1..]);
    (0..total).into_par_iter().find_first(|&idx| {
        let mut coords = vec![Scalar::zero(); alg.rank()];
        let mut rest = idx;
        for &c in free.iter().rev() {
            coords[c] = values[(rest % base) as usize].clone();
            rest /= base;
        }
        if coords.iter().all(Zero::is_zero) {
            return false;
        }
        let x = embed_in_unitalization(&Element::new(coords));
        multipliers.iter().all(|e| in_n(&unitalized.mul(&unitalized.mul(&x, e), &x)))
    })
    .map(|idx| {
        let mut coords = vec![Scalar::zero(); alg.rank()];
        let mut rest = idx;
        for &c in free.iter().rev() {
            coords[c] = values[(rest % base) as usize].clone();
            rest /= base;
        }
        Element::new(coords)
    })
}

/// The same structure constants read in `F_p`. Fails if a constant has a
/// denominator divisible by `p`.
pub fn reduce_mod_p(alg: &Algebra, p: u64) -> Result<Algebra, RadicalError> {
    let ring = CoeffRing::PrimeField(p);
    let constants: Vec<_> = alg.constants().map(|(i, j, k, c)| (i, j, k, c.clone())).collect();
    for (.., c) in &constants {
        if (c.denom() % num_bigint::BigInt::from(p)).is_zero() {
            return Err(RadicalError::PreconditionViolated(format!("constant {c} has no reduction mod {p}")));
        }
    }
    let reduced: Vec<_> = constants.into_iter().map(|(i, j, k, c)| (i, j, k, ring.reduce(c))).collect();
    Ok(Algebra::new(ring, alg.basis_names().to_vec(), reduced, alg.unit())?)
}

/// `N` with its basis reduced mod `p`.
pub fn reduce_subspace_mod_p(n: &Subspace, p: u64) -> Subspace {
    let ring = CoeffRing::PrimeField(p);
    let rows: Vec<Vec<Scalar>> = n.integral_rows().into_iter().map(|r| r.into_iter().map(Scalar::from_integer).collect()).collect();
    Subspace::span(ring, n.ambient(), rows.iter().map(Vec::as_slice))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{catalog, derivation_space, inner_derivation};

    fn q(v: i64) -> Scalar {
        Scalar::from_integer(v.into())
    }

    fn names(alg: &Algebra, s: &Subspace) -> Vec<String> {
        s.rows().iter().map(|r| alg.format_element(&Element::new(r.clone()))).collect()
    }

    #[test]
    fn upper_triangular_radical() {
        let a = catalog::upper_triangular(CoeffRing::Rationals, 2);
        let report = radical_char0(&a).unwrap();
        assert_eq!(names(&a, &report.radical), ["e12"]);
        assert_eq!(report.certificate.nilpotency_index, Some(2));
        assert_eq!(semiprime_witness(&a, &report.radical, 2), None);
    }

    #[test]
    fn semisimple_radical_is_zero() {
        let a = catalog::diagonal(CoeffRing::Rationals, 2);
        assert!(radical_char0(&a).unwrap().radical.is_zero());
    }

    #[test]
    fn truncated_polynomial_radical() {
        let a = catalog::truncated_polynomial(CoeffRing::Rationals, 3);
        let report = radical_char0(&a).unwrap();
        assert_eq!(names(&a, &report.radical), ["t", "t^2"]);
        assert_eq!(report.certificate.nilpotency_index, Some(3));
    }

    #[test]
    fn nil_ideal_checks() {
        let a = catalog::upper_triangular(CoeffRing::Rationals, 2);
        assert!(is_nil_ideal(&a, &Subspace::zero(CoeffRing::Rationals, 3)).holds());
        let e11 = a.span([a.basis(0)].iter());
        let report = is_nil_ideal(&a, &e11);
        assert_eq!(report.nilpotency_index, None);
        assert!(!report.holds());
        assert!(radical_char0(&catalog::upper_triangular(CoeffRing::Integers, 2)).is_err());
    }

    #[test]
    fn stability_char0() {
        let a = catalog::upper_triangular(CoeffRing::Rationals, 2);
        let n = radical_char0(&a).unwrap().radical;
        for u in [a.basis(0), a.basis(1), a.element(vec![q(2), q(-3), q(5)]).unwrap()] {
            assert_eq!(check_delta_stability(&a, &inner_derivation(&a, &u), &n).unwrap(), Stability::Stable);
        }
        for d in derivation_space(&a) {
            assert_eq!(check_delta_stability(&a, &d, &n).unwrap(), Stability::Stable);
        }
    }

    #[test]
    fn stability_fails_in_char_p() {
        for p in [2, 3, 5] {
            let (a, d) = catalog::charp(p).unwrap();
            let n = a.span((1..p as usize).map(|i| a.basis(i)).collect::<Vec<_>>().iter());
            let Stability::Unstable { witness, image } = check_delta_stability(&a, &d, &n).unwrap() else {
                panic!("p = {p}")
            };
            assert_eq!(witness, a.basis(1));
            assert_eq!(image, a.basis(0));
            assert_eq!(semiprime_witness(&a, &n, 0), None);
        }
    }

    #[test]
    fn leibniz_table() {
        let t = leibniz_coefficients(2, DEFAULT_LEIBNIZ_CAP).unwrap();
        let expected: BTreeMap<Vec<u32>, BigUint> =
            [(vec![0, 2], 1u32), (vec![1, 1], 2), (vec![2, 0], 1)].into_iter().map(|(k, v)| (k, v.into())).collect();
        assert_eq!(t.coefficients, expected);
        assert_eq!(leibniz_coefficients(1, 8).unwrap().coefficients.len(), 1);
        let mut fact = BigUint::one();
        for n in 1..=6usize {
            fact *= n;
            assert_eq!(leibniz_coefficients(n, 8).unwrap().all_ones(), fact);
        }
        assert_eq!(leibniz_coefficients(9, 8), Err(RadicalError::CapExceeded { n: 9, cap: 8 }));
    }

    #[test]
    fn eq_b_on_dual_numbers() {
        let a = catalog::truncated_polynomial(CoeffRing::Rationals, 2);
        let n = radical_char0(&a).unwrap().radical;
        for d in derivation_space(&a) {
            let report = verify_eq_b(&a, &d, &a.basis(1), 2, &n).unwrap();
            assert!(report.all_pass(), "{report:?}");
        }
        let zero = Derivation::zero(2);
        assert!(verify_eq_b(&a, &zero, &a.zero(), 1, &n).unwrap().all_pass());
        assert!(verify_eq_b(&a, &zero, &a.basis(0), 2, &n).is_err());
    }

    #[test]
    fn mod_p_reduction() {
        let a = catalog::upper_triangular(CoeffRing::Rationals, 2);
        let n = radical_char0(&a).unwrap().radical;
        for p in [2, 3] {
            let ap = reduce_mod_p(&a, p).unwrap();
            let np = reduce_subspace_mod_p(&n, p);
            assert!(is_nil_ideal(&ap, &np).holds());
            assert_eq!(semiprime_witness(&ap, &np, 0), None);
        }
        // Modulo the zero ideal, -e12 is the first grid point with x A¹ x = 0.
        let zero = Subspace::zero(CoeffRing::Rationals, 3);
        assert_eq!(semiprime_witness(&a, &zero, 1), Some(a.sub(&a.zero(), &a.basis(1))));
    }
}
