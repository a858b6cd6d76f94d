//! Words over the natural numbers: weight, `k`-validity, `b`-boundedness and
//! the prefix-incomparable lexicographic order.
//!
//! Letters are `u64`. Weights are accumulated in `u128`, which is exact for
//! every word that fits in memory (`n · n · u64::MAX < 2^128` for `n < 2^32`).

mod bounds;
mod factor;
mod oracle;
pub mod sampling;

pub use bounds::{compute_bounds, prop21_witness, witness_with_bounds, BoundsLevel, BoundsResult};
pub use factor::{find_d_decreasing, find_d_decreasing_constrained, Factorization};
pub use oracle::{minimal_n_oracle, OracleConfig};

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

pub type Letter = u64;

/// Default length cap for [`weight_bruteforce`] (8! permutations).
pub const DEFAULT_FACTORIAL_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordsError {
    #[error("a word must contain at least one letter")]
    EmptyWord,
    #[error("cannot parse letter {token:?} at position {position}")]
    Parse { position: usize, token: String },
    #[error("brute-force weight refused: length {len} exceeds factorial cap {cap}")]
    FactorialCapExceeded { len: usize, cap: usize },
    #[error("bound sequence does not determine b_{index}")]
    InsufficientBoundData { index: String },
    #[error("invalid bound sequence: {0}")]
    InvalidBoundSequence(String),
    #[error("epsilon must be a rational in (0, 1], got {0}")]
    InvalidEpsilon(String),
    #[error("k must be a positive integer")]
    InvalidK,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("search budget exceeded: {needed} candidates, budget {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("witness construction failed: {0}")]
    ConstructionFailed(String),
}

/// A nonempty finite sequence of natural-number letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self, WordsError> {
        if letters.is_empty() {
            return Err(WordsError::EmptyWord);
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; words are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max_letter(&self) -> Letter {
        *self.0.iter().max().expect("nonempty")
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }
}

impl FromStr for Word {
    type Err = WordsError;

    /// Parses a comma-separated list of naturals, e.g. `"3,2,1"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        if trimmed.trim().is_empty() {
            return Err(WordsError::EmptyWord);
        }
        let letters = trimmed
            .split(',')
            .enumerate()
            .map(|(position, tok)| {
                tok.trim().parse::<Letter>().map_err(|_| WordsError::Parse {
                    position,
                    token: tok.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Word::new(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.0)
    }
}

pub(crate) fn write_letters(f: &mut impl fmt::Write, letters: &[Letter]) -> fmt::Result {
    f.write_char('(')?;
    for (i, l) in letters.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{l}")?;
    }
    f.write_char(')')
}

/// Outcome of comparing two words under the prefix-incomparable order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WordOrder {
    Equal,
    Less,
    Greater,
    Incomparable,
}

/// Compares two letter sequences. A strict prefix relation makes them
/// incomparable; otherwise the first differing letter decides.
pub fn compare(u: &[Letter], v: &[Letter]) -> WordOrder {
    match u.iter().zip(v).find(|(a, b)| a != b) {
        Some((a, b)) => match a.cmp(b) {
            Ordering::Less => WordOrder::Less,
            Ordering::Greater => WordOrder::Greater,
            Ordering::Equal => unreachable!(),
        },
        None if u.len() == v.len() => WordOrder::Equal,
        None => WordOrder::Incomparable,
    }
}

/// `weight(u) = min_σ Σ (n+1-i)·u_{σ(i)}`, attained by pairing the letters in
/// ascending order with the coefficients `n, n-1, …, 1`.
pub fn weight(u: &Word) -> u128 {
    weight_of(u.letters())
}

pub(crate) fn weight_of(letters: &[Letter]) -> u128 {
    let mut sorted = letters.to_vec();
    sorted.sort_unstable();
    let n = sorted.len() as u128;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &l)| (n - i as u128) * l as u128)
        .sum()
}

/// Minimum over every permutation, by enumeration. Refuses words longer than
/// `cap`.
pub fn weight_bruteforce(u: &Word, cap: usize) -> Result<u128, WordsError> {
    let n = u.len();
    if n > cap {
        return Err(WordsError::FactorialCapExceeded { len: n, cap });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let letters = u.letters();
    let eval = |perm: &[usize]| -> u128 {
        perm.iter()
            .enumerate()
            .map(|(i, &p)| (n - i) as u128 * letters[p] as u128)
            .sum()
    };
    let mut best = eval(&perm);
    // Heap's algorithm.
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            best = best.min(eval(&perm));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(best)
}

/// `n(n+1)/2`.
pub(crate) fn triangular(n: usize) -> u128 {
    let n = n as u128;
    n * (n + 1) / 2
}

/// `weight(u) ≤ k·C(n+1, 2)`.
pub fn is_k_valid(u: &Word, k: u64) -> bool {
    letters_k_valid(u.letters(), k)
}

pub(crate) fn letters_k_valid(letters: &[Letter], k: u64) -> bool {
    weight_of(letters) <= k as u128 * triangular(letters.len())
}

/// A finite prefix `b_0..b_L` of positive integers. With the tail rule,
/// `b_m = b_L` for every `m > L`; without it, entries past `L` are unknown
/// but assumed to be at least `b_L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundSequence {
    prefix: Vec<u64>,
    tail_rule: bool,
}

impl BoundSequence {
    pub fn new(prefix: Vec<u64>, tail_rule: bool) -> Result<Self, WordsError> {
        if prefix.is_empty() {
            return Err(WordsError::InvalidBoundSequence("empty prefix".into()));
        }
        if let Some(pos) = prefix.iter().position(|&b| b == 0) {
            return Err(WordsError::InvalidBoundSequence(format!(
                "entry b_{pos} is zero"
            )));
        }
        Ok(BoundSequence { prefix, tail_rule })
    }

    /// Prefix with the constant-tail rule enabled.
    pub fn with_tail(prefix: Vec<u64>) -> Result<Self, WordsError> {
        Self::new(prefix, true)
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn tail_rule(&self) -> bool {
        self.tail_rule
    }

    /// Index of the last stored entry.
    pub fn last_index(&self) -> usize {
        self.prefix.len() - 1
    }

    pub fn last(&self) -> u64 {
        *self.prefix.last().expect("nonempty")
    }

    pub fn get(&self, m: u64) -> Result<u64, WordsError> {
        match self.prefix.get(m as usize) {
            Some(&b) if (m as usize as u64) == m => Ok(b),
            _ if self.tail_rule => Ok(self.last()),
            _ => Err(WordsError::InsufficientBoundData {
                index: m.to_string(),
            }),
        }
    }

    pub fn get_big(&self, m: &BigUint) -> Result<u64, WordsError> {
        match m.to_u64() {
            Some(m) => self.get(m),
            None if self.tail_rule => Ok(self.last()),
            None => Err(WordsError::InsufficientBoundData {
                index: m.to_string(),
            }),
        }
    }

    /// Smallest `m*` such that `b_m > len` for every `m ≥ m*`; `None` when no
    /// such index exists (then no word of that length is `b`-bounded).
    pub fn threshold_above(&self, len: usize) -> Result<Option<u64>, WordsError> {
        let len = len as u64;
        if self.last() <= len {
            if self.tail_rule {
                return Ok(None);
            }
            return Err(WordsError::InsufficientBoundData {
                index: format!("m > {}", self.last_index()),
            });
        }
        let mut m = self.prefix.len();
        while m > 0 && self.prefix[m - 1] > len {
            m -= 1;
        }
        Ok(Some(m as u64))
    }
}

impl fmt::Display for BoundSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.prefix)?;
        if self.tail_rule {
            f.write_str("+tail")?;
        }
        Ok(())
    }
}

impl FromStr for BoundSequence {
    type Err = WordsError;

    /// `"2,3,4"` (tail rule on) or `"2,3,4;notail"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (body, tail) = match s.trim().strip_suffix(";notail") {
            Some(body) => (body, false),
            None => (s.trim(), true),
        };
        let prefix = body
            .split(',')
            .enumerate()
            .map(|(position, tok)| {
                tok.trim().parse::<u64>().map_err(|_| WordsError::Parse {
                    position,
                    token: tok.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        BoundSequence::new(prefix, tail)
    }
}

/// Every subword of length `b_m` contains a letter greater than `m`, for all
/// `m`. Equivalently, the longest run of letters `≤ m` is shorter than `b_m`.
pub fn is_b_bounded(u: &Word, b: &BoundSequence) -> Result<bool, WordsError> {
    letters_b_bounded(u.letters(), b)
}

pub(crate) fn letters_b_bounded(letters: &[Letter], b: &BoundSequence) -> Result<bool, WordsError> {
    let n = letters.len();
    let max = *letters.iter().max().expect("nonempty");
    // b_m for m ≤ max must be determined.
    if max as u128 > b.last_index() as u128 && !b.tail_rule {
        return Err(WordsError::InsufficientBoundData {
            index: max.to_string(),
        });
    }
    let runs = longest_runs(letters);
    // runs[i] = (v_i, R_i): longest run of letters ≤ m for m ∈ [v_i, v_{i+1}).
    let l = b.last_index() as u64;
    let min_over = |lo: u64, hi: Option<u64>| -> u64 {
        // min of b_m over m ∈ [lo, hi), hi = None meaning unbounded.
        let stored_hi = match hi {
            Some(h) => h.min(l + 1),
            None => l + 1,
        };
        let mut best = u64::MAX;
        if lo < stored_hi {
            best = b.prefix[lo as usize..stored_hi as usize]
                .iter()
                .copied()
                .min()
                .unwrap_or(u64::MAX);
        }
        let reaches_tail = match hi {
            Some(h) => h > l + 1,
            None => true,
        };
        if reaches_tail {
            // Tail entries equal b_L (tail rule) or are at least b_L.
            best = best.min(b.last());
        }
        best
    };
    for (i, &(v, run)) in runs.iter().enumerate() {
        let next = runs.get(i + 1).map(|&(w, _)| w);
        let min_b = min_over(v, next);
        if min_b as u128 <= run as u128 {
            return Ok(false);
        }
    }
    debug_assert_eq!(runs.last().map(|r| r.1), Some(n));
    Ok(true)
}

/// For each distinct letter value `v` (ascending), the longest run of letters
/// `≤ v`.
fn longest_runs(letters: &[Letter]) -> Vec<(Letter, usize)> {
    let n = letters.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by_key(|&i| letters[i]);
    let mut parent: Vec<usize> = (0..n).collect();
    let mut size = vec![1usize; n];
    let mut active = vec![false; n];
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut best = 0usize;
    let mut out = Vec::new();
    let mut idx = 0;
    while idx < n {
        let v = letters[order[idx]];
        while idx < n && letters[order[idx]] == v {
            let p = order[idx];
            active[p] = true;
            let mut root = p;
            for q in [p.wrapping_sub(1), p + 1] {
                if q < n && active[q] {
                    let rq = find(&mut parent, q);
                    let rp = find(&mut parent, root);
                    if rq != rp {
                        let (big, small) = if size[rp] >= size[rq] { (rp, rq) } else { (rq, rp) };
                        parent[small] = big;
                        size[big] += size[small];
                        root = big;
                    }
                }
            }
            let r = find(&mut parent, root);
            best = best.max(size[r]);
            idx += 1;
        }
        out.push((v, best));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn naive_b_bounded(letters: &[Letter], b: &BoundSequence) -> bool {
        let n = letters.len();
        let max = *letters.iter().max().unwrap();
        // m beyond max + n behaves like m = max for run lengths; check a window.
        let top = max + 1 + b.last_index() as u64;
        (0..=top).all(|m| {
            let bm = b.get(m).unwrap() as usize;
            bm > n || letters.windows(bm).all(|win| win.iter().any(|&x| x > m))
        })
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare(&[1, 2], &[1, 2, 5]), WordOrder::Incomparable);
        assert_eq!(compare(&[1, 3, 0], &[1, 2, 9, 9]), WordOrder::Greater);
        assert_eq!(compare(&[4], &[4]), WordOrder::Equal);
        assert_eq!(compare(&[0, 7], &[1]), WordOrder::Less);
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weight(&w("0,0,0")), 0);
        assert_eq!(weight(&w("17")), 17);
        assert_eq!(weight(&w("2,1")), 4);
        assert_eq!(weight_bruteforce(&w("2,1"), 8), Ok(4));
        assert_eq!(weight_bruteforce(&w("0,0"), 8), Ok(0));
        assert_eq!(weight_bruteforce(&w("5,0,0"), 8), Ok(5));
    }

    #[test]
    fn bruteforce_refuses_long_words() {
        let u = Word::new(vec![1; 9]).unwrap();
        assert_eq!(
            weight_bruteforce(&u, DEFAULT_FACTORIAL_CAP),
            Err(WordsError::FactorialCapExceeded { len: 9, cap: 8 })
        );
    }

    #[test]
    fn validity_examples() {
        assert!(is_k_valid(&w("1,1,1"), 1));
        assert!(!is_k_valid(&w("2,1"), 1));
        assert!(is_k_valid(&w("3,0,3,1,2"), 3));
    }

    #[test]
    fn boundedness_examples() {
        let b = |p: &[u64]| BoundSequence::with_tail(p.to_vec()).unwrap();
        assert_eq!(is_b_bounded(&w("0,1,0,1"), &b(&[2, 4])), Ok(false));
        assert_eq!(is_b_bounded(&w("2,0,2,0"), &b(&[2, 4, 5])), Ok(true));
        assert_eq!(is_b_bounded(&w("0,0"), &b(&[2])), Ok(false));
    }

    #[test]
    fn boundedness_needs_data() {
        let b = BoundSequence::new(vec![2, 4], false).unwrap();
        assert!(matches!(
            is_b_bounded(&w("5,0"), &b),
            Err(WordsError::InsufficientBoundData { .. })
        ));
    }

    #[test]
    fn boundedness_matches_window_definition() {
        let seqs = [vec![2, 3, 4, 6], vec![1, 2, 2, 5], vec![3], vec![2, 9]];
        for p in seqs {
            let b = BoundSequence::with_tail(p).unwrap();
            for code in 0..4usize.pow(5) {
                let mut c = code;
                let letters: Vec<u64> = (0..5).map(|_| { let d = c % 4; c /= 4; d as u64 }).collect();
                assert_eq!(
                    letters_b_bounded(&letters, &b).unwrap(),
                    naive_b_bounded(&letters, &b),
                    "{letters:?} {b}"
                );
            }
        }
    }

    #[test]
    fn threshold() {
        let b = BoundSequence::with_tail(vec![2, 3, 9, 4, 12]).unwrap();
        assert_eq!(b.threshold_above(5), Ok(Some(4)));
        assert_eq!(b.threshold_above(1), Ok(Some(0)));
        assert_eq!(b.threshold_above(12), Ok(None));
    }

    #[test]
    fn parse_errors_carry_position() {
        assert_eq!(
            "1,x,3".parse::<Word>(),
            Err(WordsError::Parse { position: 1, token: "x".into() })
        );
        assert_eq!("".parse::<Word>(), Err(WordsError::EmptyWord));
    }
}
