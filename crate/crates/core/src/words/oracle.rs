//! Exhaustive search for the least length at which every valid, bounded word
//! has a decreasing factorization.

use rayon::prelude::*;

use super::{
    find_d_decreasing, letters_b_bounded, letters_k_valid, triangular, BoundSequence, Letter, Word,
    WordsError,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_n: usize,
    pub max_letter: Letter,
    /// Upper limit on the total number of words enumerated.
    pub budget: u64,
}

impl OracleConfig {
    pub fn new(max_n: usize, max_letter: Letter) -> Self {
        OracleConfig { max_n, max_letter, budget: 50_000_000 }
    }
}

/// Smallest `n ≤ max_n` such that every `k`-valid, `b`-bounded word of length
/// `n` with letters `≤ max_letter` has a `d`-decreasing factorization.
///
/// Letters above `k·C(n+1, 2)` cannot occur in a `k`-valid word and are
/// skipped. Returns `None` when no length up to `max_n` qualifies.
pub fn minimal_n_oracle(
    d: usize,
    b: &BoundSequence,
    k: u64,
    config: OracleConfig,
) -> Result<Option<usize>, WordsError> {
    if k == 0 {
        return Err(WordsError::InvalidK);
    }
    let mut spent: u128 = 0;
    for n in 1..=config.max_n {
        let cap = (config.max_letter as u128).min(k as u128 * triangular(n)) as u64;
        let count = (cap as u128 + 1).checked_pow(n as u32);
        spent = match count.and_then(|c| spent.checked_add(c)) {
            Some(s) if s <= config.budget as u128 => s,
            _ => {
                return Err(WordsError::BudgetExceeded {
                    needed: count.map_or_else(|| format!("({}+1)^{n}", cap), |c| c.to_string()),
                    budget: config.budget,
                })
            }
        };
        if !has_counterexample(n, cap, d, b, k)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Is there a valid, bounded word of length `n` (letters `≤ cap`) with no
/// `d`-decreasing factorization? Work is split on the first letter.
fn has_counterexample(
    n: usize,
    cap: Letter,
    d: usize,
    b: &BoundSequence,
    k: u64,
) -> Result<bool, WordsError> {
    // Bound data for every letter that can occur must be available.
    if cap > b.last_index() as u64 && !b.tail_rule() {
        return Err(WordsError::InsufficientBoundData { index: cap.to_string() });
    }
    let found = (0..=cap).into_par_iter().any(|first| {
        let mut letters = vec![0 as Letter; n];
        letters[0] = first;
        loop {
            if is_counterexample(&letters, d, b, k) {
                return true;
            }
            // Odometer over positions 1..n.
            let mut i = n;
            loop {
                if i == 1 {
                    return false;
                }
                i -= 1;
                if letters[i] < cap {
                    letters[i] += 1;
                    break;
                }
                letters[i] = 0;
            }
        }
    });
    Ok(found)
}

fn is_counterexample(letters: &[Letter], d: usize, b: &BoundSequence, k: u64) -> bool {
    letters_k_valid(letters, k)
        && letters_b_bounded(letters, b).unwrap_or(false)
        && find_d_decreasing(&Word::new(letters.to_vec()).expect("nonempty"), d).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_bounded_words_is_vacuous() {
        // b_m = 1 for every m: no word is bounded, so length 1 already qualifies.
        let b = BoundSequence::with_tail(vec![1]).unwrap();
        assert_eq!(minimal_n_oracle(2, &b, 1, OracleConfig::new(8, 3)), Ok(Some(1)));
    }

    #[test]
    fn depth_one_is_immediate() {
        let b = BoundSequence::with_tail(vec![2, 3, 4, 5]).unwrap();
        assert_eq!(minimal_n_oracle(1, &b, 1, OracleConfig::new(4, 3)), Ok(Some(1)));
    }

    #[test]
    fn depth_two_small() {
        // Every length-1 word is bounded for b_m = m + 2, and (0,1) is a
        // bounded length-2 word with no 2-decreasing factorization.
        let b = BoundSequence::with_tail((0..16).map(|m| m + 2).collect()).unwrap();
        let got = minimal_n_oracle(2, &b, 2, OracleConfig::new(5, 4)).unwrap();
        assert!(got.is_none() || got > Some(2));
    }

    #[test]
    fn budget_is_enforced() {
        let b = BoundSequence::with_tail((0..32).map(|m| m + 2).collect()).unwrap();
        let cfg = OracleConfig { max_n: 10, max_letter: 9, budget: 1000 };
        assert!(matches!(minimal_n_oracle(2, &b, 5, cfg), Err(WordsError::BudgetExceeded { .. })));
    }
}
