//! Random `k`-valid, `b`-bounded words of a fixed length.
//!
//! Sampling starts from a ruler-shaped seed (letters sized by the 2-adic
//! valuation of the position) and then runs a random walk of local moves that
//! keep the word valid and bounded. Weight is permutation invariant, so swaps
//! only need the boundedness check.

use rand::Rng;

use super::{letters_b_bounded, letters_k_valid, weight_of, triangular, BoundSequence, Letter, Word, WordsError};

/// Result of preparing a sampler for one `(length, b, k)` triple.
#[derive(Debug)]
pub enum Availability {
    /// No word of this length is `b`-bounded: some `b_m ≤ len` for
    /// arbitrarily large `m`, and a run of letters `≤ max(u)` has length `len`.
    NoBoundedWords,
    /// Bounded words exist but the seed could not be pushed below the
    /// validity bound. Not a proof of emptiness.
    NoValidSeedFound { best_weight: u128, limit: u128 },
    Ready(BoundedWordSampler),
}

#[derive(Clone, Debug)]
pub struct BoundedWordSampler {
    b: BoundSequence,
    k: u64,
    current: Vec<Letter>,
    moves_per_sample: usize,
}

/// Ruler seed of length `len`, or `None` if no bounded word of that length
/// exists. For each constrained `m` (those with `b_m ≤ len`) the positions
/// `p` with `s_m | p + offset`, where `s_m` is the largest power of two
/// `≤ b_m`, receive a letter `> m`.
pub fn ruler_seed(len: usize, b: &BoundSequence, offset: usize) -> Result<Option<Vec<Letter>>, WordsError> {
    let Some(threshold) = b.threshold_above(len)? else {
        return Ok(None);
    };
    // need[t] = largest constrained m whose spacing is 2^t, plus one.
    let mut need = vec![0u64; usize::BITS as usize];
    for m in 0..threshold {
        let bm = b.get(m)?;
        if bm as u128 <= len as u128 {
            let t = 63 - bm.leading_zeros() as usize;
            need[t] = need[t].max(m + 1);
        }
    }
    for t in 1..need.len() {
        need[t] = need[t].max(need[t - 1]);
    }
    let letters = (1..=len)
        .map(|p| {
            let q = p + offset;
            need[q.trailing_zeros() as usize]
        })
        .collect();
    Ok(Some(letters))
}

impl BoundedWordSampler {
    /// Prepares a sampler: picks the lightest ruler seed over a few offsets
    /// and, if it is not yet `k`-valid, lowers letters while boundedness
    /// allows.
    pub fn prepare<R: Rng>(len: usize, b: &BoundSequence, k: u64, rng: &mut R) -> Result<Availability, WordsError> {
        if k == 0 {
            return Err(WordsError::InvalidK);
        }
        if len == 0 {
            return Err(WordsError::EmptyWord);
        }
        let mut best: Option<Vec<Letter>> = None;
        for offset in 0..len.min(64) {
            let Some(seed) = ruler_seed(len, b, offset)? else {
                return Ok(Availability::NoBoundedWords);
            };
            if best.as_ref().is_none_or(|cur| weight_of(&seed) < weight_of(cur)) {
                best = Some(seed);
            }
        }
        let mut current = best.expect("at least one offset");
        debug_assert!(letters_b_bounded(&current, b)?);
        let limit = k as u128 * triangular(len);
        let mut attempts = 40 * len;
        while weight_of(&current) > limit && attempts > 0 {
            attempts -= 1;
            let p = rng.gen_range(0..len);
            if current[p] == 0 {
                continue;
            }
            let old = current[p];
            current[p] = rng.gen_range(0..old);
            if !letters_b_bounded(&current, b)? {
                current[p] = old;
            }
        }
        let w = weight_of(&current);
        if w > limit {
            return Ok(Availability::NoValidSeedFound { best_weight: w, limit });
        }
        Ok(Availability::Ready(BoundedWordSampler {
            b: b.clone(),
            k,
            current,
            moves_per_sample: 6,
        }))
    }

    pub fn with_moves_per_sample(mut self, moves: usize) -> Self {
        self.moves_per_sample = moves;
        self
    }

    pub fn current(&self) -> &[Letter] {
        &self.current
    }

    /// Advances the walk and returns the new word. Every returned word is
    /// `k`-valid and `b`-bounded.
    pub fn sample<R: Rng>(&mut self, rng: &mut R) -> Word {
        let n = self.current.len();
        for _ in 0..self.moves_per_sample {
            let p = rng.gen_range(0..n);
            match rng.gen_range(0..3) {
                0 => {
                    let q = rng.gen_range(0..n);
                    self.current.swap(p, q);
                    if !self.bounded() {
                        self.current.swap(p, q);
                    }
                }
                1 => {
                    let old = self.current[p];
                    self.current[p] = rng.gen_range(0..=old.saturating_mul(2).saturating_add(1));
                    if !(letters_k_valid(&self.current, self.k) && self.bounded()) {
                        self.current[p] = old;
                    }
                }
                _ => {
                    let old = self.current[p];
                    if old > 0 {
                        self.current[p] = old - 1;
                        if !self.bounded() {
                            self.current[p] = old;
                        }
                    }
                }
            }
        }
        Word::new(self.current.clone()).expect("nonempty")
    }

    fn bounded(&self) -> bool {
        letters_b_bounded(&self.current, &self.b).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn linear(len: u64) -> BoundSequence {
        BoundSequence::with_tail((0..len).map(|m| m + 2).collect()).unwrap()
    }

    #[test]
    fn seed_is_bounded() {
        let b = linear(200);
        for len in 1..120 {
            for offset in [0, 1, 5] {
                let s = ruler_seed(len, &b, offset).unwrap().unwrap();
                assert!(letters_b_bounded(&s, &b).unwrap(), "len {len} offset {offset}");
            }
        }
    }

    #[test]
    fn constant_tail_has_no_long_bounded_words() {
        let b = BoundSequence::with_tail(vec![2, 3, 4]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(
            BoundedWordSampler::prepare(10, &b, 2, &mut rng).unwrap(),
            Availability::NoBoundedWords
        ));
        let ones = BoundSequence::with_tail(vec![1]).unwrap();
        assert!(matches!(
            BoundedWordSampler::prepare(3, &ones, 5, &mut rng).unwrap(),
            Availability::NoBoundedWords
        ));
    }

    #[test]
    fn samples_stay_valid() {
        let b = linear(100);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let Availability::Ready(mut s) = BoundedWordSampler::prepare(40, &b, 2, &mut rng).unwrap() else {
            panic!("expected a sampler");
        };
        for _ in 0..200 {
            let w = s.sample(&mut rng);
            assert!(letters_k_valid(w.letters(), 2));
            assert!(letters_b_bounded(w.letters(), &b).unwrap());
        }
    }
}
