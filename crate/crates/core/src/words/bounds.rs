//! The explicit `(M, N)` recursion for decreasing factorizations of valid,
//! bounded words, and the constructive witness that follows it.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::factor::window_len;
use super::{
    is_b_bounded, is_k_valid, BoundSequence, Factorization, Word, WordsError,
};

/// One level of the recursion: the inner constants `(M_1, N_1)` obtained at
/// `ε/2`, the block length `b_{M_1}`, and the chosen `(M_2, N_2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsLevel {
    pub depth: usize,
    pub epsilon: BigRational,
    pub m1: BigUint,
    pub n1: BigUint,
    pub block_len: u64,
    pub m2: BigUint,
    pub n2: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsResult {
    pub m: BigUint,
    pub n: BigUint,
    /// Levels `1..=d`, innermost first.
    pub trace: Vec<BoundsLevel>,
}

impl fmt::Display for BoundsResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "M={} N={}", self.m, self.n)?;
        for l in &self.trace {
            writeln!(
                f,
                "  depth={} eps={} M1={} N1={} b_M1={} M2={} N2={}",
                l.depth, l.epsilon, l.m1, l.n1, l.block_len, l.m2, l.n2
            )?;
        }
        Ok(())
    }
}

pub(crate) fn check_epsilon(epsilon: &BigRational) -> Result<(), WordsError> {
    if !epsilon.is_positive() || *epsilon > BigRational::one() {
        return Err(WordsError::InvalidEpsilon(epsilon.to_string()));
    }
    Ok(())
}

/// Computes `M(d, b, k, ε)` and `N(d, b, k, ε)`.
///
/// Level `i` runs at `ε / 2^{d-i}`. `M_2` is the least integer with
/// `M_2 > M_1` and `M_2 > 8·b_{M_1}²·k/ε²`; `N_2` is the least integer
/// `> N_1` from which `M_2·C((εn/2 - 1)/b_{M_1}, 2) > k·C(n+1, 2)` holds for
/// every `n ≥ N_2`, with `C(x, 2) = x(x-1)/2`.
pub fn compute_bounds(
    d: usize,
    b: &BoundSequence,
    k: u64,
    epsilon: &BigRational,
) -> Result<BoundsResult, WordsError> {
    if k == 0 {
        return Err(WordsError::InvalidK);
    }
    check_epsilon(epsilon)?;
    let mut m = BigUint::one();
    let mut n = BigUint::one();
    let mut trace = Vec::with_capacity(d);
    for depth in 1..=d {
        let eps = epsilon / BigRational::from_integer(BigInt::one() << (d - depth));
        let block_len = b.get_big(&m)?;
        let m2 = choose_m2(&m, block_len, k, &eps);
        let n_star = eventual_threshold(&m2, block_len, k, &eps);
        let n2 = std::cmp::max(&n + 1u32, n_star);
        trace.push(BoundsLevel {
            depth,
            epsilon: eps,
            m1: m.clone(),
            n1: n.clone(),
            block_len,
            m2: m2.clone(),
            n2: n2.clone(),
        });
        m = m2;
        n = n2;
    }
    Ok(BoundsResult { m, n, trace })
}

fn choose_m2(m1: &BigUint, block_len: u64, k: u64, eps: &BigRational) -> BigUint {
    let b = BigInt::from(block_len);
    let ratio = BigRational::from_integer(BigInt::from(8u32) * &b * &b * BigInt::from(k)) / (eps * eps);
    let floor = ratio.floor().to_integer().to_biguint().expect("nonnegative");
    std::cmp::max(m1 + 1u32, floor + 1u32)
}

/// Integer coefficients `(A, B, C)` of `A n² + B n + C`, a positive multiple
/// of `M_2 (εn/2 - 1)(εn/2 - 1 - β) - k β² n(n+1)` with `β = b_{M_1}`.
fn quadratic(m2: &BigUint, block_len: u64, k: u64, eps: &BigRational) -> (BigInt, BigInt, BigInt) {
    let m2 = BigRational::from_integer(BigInt::from(m2.clone()));
    let beta = BigRational::from_integer(BigInt::from(block_len));
    let k = BigRational::from_integer(BigInt::from(k));
    let half = eps / BigRational::from_integer(BigInt::from(2));
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    // (h n - 1)(h n - 1 - β) = h² n² - h(2 + β) n + (1 + β)
    let a = &m2 * &half * &half - &k * &beta * &beta;
    let bq = -(&m2 * &half * (&two + &beta)) - &k * &beta * &beta;
    let c = &m2 * (&one + &beta);
    let den = a.denom().lcm(bq.denom()).lcm(c.denom());
    let scale = |x: &BigRational| (x * BigRational::from_integer(den.clone())).to_integer();
    (scale(&a), scale(&bq), scale(&c))
}

fn eval(q: &(BigInt, BigInt, BigInt), n: &BigInt) -> BigInt {
    &q.0 * n * n + &q.1 * n + &q.2
}

/// Least nonnegative integer `n*` such that the quadratic is positive at every
/// integer `n ≥ n*`.
fn eventual_threshold(m2: &BigUint, block_len: u64, k: u64, eps: &BigRational) -> BigUint {
    let q = quadratic(m2, block_len, k, eps);
    let (a, bq, c) = (&q.0, &q.1, &q.2);
    debug_assert!(a.is_positive(), "leading coefficient positive by the choice of M_2");
    let disc = bq * bq - BigInt::from(4) * a * c;
    if disc.is_negative() {
        return BigUint::zero();
    }
    // r+ = (-B + √disc) / 2A; floor(r+) ∈ {t, t+1} with t from the integer root.
    let s = disc.sqrt();
    let t = (-bq + &s).div_floor(&(BigInt::from(2) * a));
    let floor_root: BigInt = if eval(&q, &(&t + 1)).is_positive() { t } else { t + 1 };
    let n_star: BigInt = floor_root + 1;
    n_star.to_biguint().unwrap_or_else(BigUint::zero)
}

/// Builds the decreasing factorization of `u` exactly as the recursion
/// prescribes: split `u = v w x` with `|wx| = ⌊εn⌋`, `|x| = ⌊εn/2⌋`, find a
/// letter `a` with `M_1 ≤ a < M_2` among the full `b_{M_1}`-blocks of `w`,
/// recurse at `ε/2`, and prepend the block running from `a` to the start of
/// the inner factorization.
pub fn prop21_witness(
    u: &Word,
    d: usize,
    b: &BoundSequence,
    k: u64,
    epsilon: &BigRational,
) -> Result<Factorization, WordsError> {
    let bounds = compute_bounds(d, b, k, epsilon)?;
    witness_with_bounds(u, b, k, &bounds)
}

/// [`prop21_witness`] with precomputed bounds (avoids recomputing them per word).
pub fn witness_with_bounds(
    u: &Word,
    b: &BoundSequence,
    k: u64,
    bounds: &BoundsResult,
) -> Result<Factorization, WordsError> {
    if !is_k_valid(u, k) {
        return Err(WordsError::PreconditionViolated(format!("{u} is not {k}-valid")));
    }
    if !is_b_bounded(u, b)? {
        return Err(WordsError::PreconditionViolated(format!("{u} is not {b}-bounded")));
    }
    if BigUint::from(u.len()) < bounds.n {
        return Err(WordsError::PreconditionViolated(format!(
            "length {} is below N = {}",
            u.len(),
            bounds.n
        )));
    }
    let blocks = build_blocks(u, &bounds.trace)?;
    Ok(Factorization::new(u.len(), blocks.first().map_or(u.len(), |r| r.start), blocks))
}

fn build_blocks(u: &Word, levels: &[BoundsLevel]) -> Result<Vec<std::ops::Range<usize>>, WordsError> {
    let Some((level, inner_levels)) = levels.split_last() else {
        return Ok(Vec::new());
    };
    let n = u.len();
    let wx = window_len(n, &level.epsilon);
    let x = window_len(n, &(&level.epsilon / BigRational::from_integer(BigInt::from(2))));
    let w_start = n - wx;
    let w_end = n - x;
    let block_len = level.block_len as usize;
    let full_blocks = (wx - x) / block_len;
    let m1 = level.m1.to_u64();
    let m2 = level.m2.to_u64();
    let in_band = |a: u64| m1.is_some_and(|m1| a >= m1) && m2.is_none_or(|m2| a < m2);
    let pos = (w_start..w_start + full_blocks * block_len)
        .find(|&p| in_band(u.letters()[p]))
        .ok_or_else(|| {
            WordsError::ConstructionFailed(format!(
                "no letter in [{}, {}) among {full_blocks} blocks of length {block_len} at depth {}",
                level.m1, level.m2, level.depth
            ))
        })?;
    let mut inner = build_blocks(u, inner_levels)?;
    let end = inner.first().map_or(w_end, |r| r.start);
    let mut blocks = Vec::with_capacity(inner.len() + 1);
    blocks.push(pos..end);
    blocks.append(&mut inner);
    Ok(blocks)
}
