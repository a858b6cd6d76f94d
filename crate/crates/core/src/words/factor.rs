use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use num_bigint::BigUint;
use num_rational::BigRational;

use super::{compare, write_letters, Letter, Word, WordOrder};

/// A split `u = v · w_1 ⋯ w_d · x` recorded as index ranges into the source
/// word. Blocks are consecutive and nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factorization {
    len: usize,
    split: usize,
    blocks: Vec<Range<usize>>,
}

impl Factorization {
    /// Builds a factorization from consecutive block ranges. With no blocks the
    /// prefix covers `0..split`.
    pub fn new(len: usize, split: usize, blocks: Vec<Range<usize>>) -> Self {
        let split = blocks.first().map_or(split, |r| r.start);
        Factorization { len, split, blocks }
    }

    /// The factorization with no blocks: `v = u`, `x` empty.
    pub fn empty(len: usize) -> Self {
        Factorization::new(len, len, Vec::new())
    }

    pub fn source_len(&self) -> usize {
        self.len
    }

    pub fn d(&self) -> usize {
        self.blocks.len()
    }

    pub fn prefix(&self) -> Range<usize> {
        0..self.split
    }

    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    pub fn suffix(&self) -> Range<usize> {
        self.blocks.last().map_or(self.split, |r| r.end)..self.len
    }

    /// Re-checks the structural invariants against `u`: the pieces tile `u`,
    /// blocks are nonempty, and `w_1 ≻ w_2 ≻ ⋯ ≻ w_d`.
    pub fn validate(&self, u: &Word) -> Result<(), String> {
        if self.len != u.len() {
            return Err(format!("source length {} != word length {}", self.len, u.len()));
        }
        let mut cursor = self.split;
        if cursor > self.len {
            return Err("prefix overruns the word".into());
        }
        for (i, r) in self.blocks.iter().enumerate() {
            if r.start != cursor {
                return Err(format!("block {} does not start at {cursor}", i + 1));
            }
            if r.end <= r.start || r.end > self.len {
                return Err(format!("block {} has bad range {r:?}", i + 1));
            }
            cursor = r.end;
        }
        let letters = u.letters();
        for (i, pair) in self.blocks.windows(2).enumerate() {
            let ord = compare(&letters[pair[0].clone()], &letters[pair[1].clone()]);
            if ord != WordOrder::Greater {
                return Err(format!("w_{} vs w_{}: {ord:?}, expected Greater", i + 1, i + 2));
            }
        }
        Ok(())
    }

    /// Every block lies within the last `⌊εn⌋` letters and starts with a
    /// letter `< m_bound`.
    pub fn within_window(&self, u: &Word, epsilon: &BigRational, m_bound: &BigUint) -> bool {
        let window_start = self.len - window_len(self.len, epsilon);
        self.blocks.iter().all(|r| {
            r.start >= window_start && BigUint::from(u.letters()[r.start]) < *m_bound
        })
    }

    /// Renders the pieces of `u`, e.g. `v=(3) w1=(2) w2=(1) x=()`.
    pub fn render(&self, u: &Word) -> String {
        let letters = u.letters();
        let mut out = String::new();
        let piece = |out: &mut String, name: &str, r: Range<usize>| {
            out.push_str(name);
            out.push('=');
            write_letters(out, &letters[r]).expect("string write");
        };
        piece(&mut out, "v", self.prefix());
        for (i, r) in self.blocks.iter().enumerate() {
            out.push(' ');
            piece(&mut out, &format!("w{}", i + 1), r.clone());
        }
        out.push(' ');
        piece(&mut out, "x", self.suffix());
        out
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v=0..{}", self.split)?;
        for (i, r) in self.blocks.iter().enumerate() {
            write!(f, " w{}={}..{}", i + 1, r.start, r.end)?;
        }
        let s = self.suffix();
        write!(f, " x={}..{}", s.start, s.end)
    }
}

/// `⌊εn⌋` for an exact rational `ε`.
pub(crate) fn window_len(n: usize, epsilon: &BigRational) -> usize {
    let prod = epsilon * BigRational::from_integer(n.into());
    let fl = prod.floor().to_integer();
    usize::try_from(fl).unwrap_or(0).min(n)
}

/// Finds a `d`-decreasing factorization of `u`, if any.
///
/// Ties are broken from the right: the shortest suffix `x`, then the shortest
/// `w_d`, then the shortest `w_{d-1}`, and so on.
pub fn find_d_decreasing(u: &Word, d: usize) -> Option<Factorization> {
    Search::new(u.letters(), 0, None).run(d)
}

/// As [`find_d_decreasing`], restricted to blocks inside the last `⌊εn⌋`
/// letters whose first letter is `< m_bound`.
pub fn find_d_decreasing_constrained(
    u: &Word,
    d: usize,
    epsilon: &BigRational,
    m_bound: &BigUint,
) -> Option<Factorization> {
    let n = u.len();
    let window_start = n - window_len(n, epsilon);
    let bound = u64::try_from(m_bound).ok();
    Search::new(u.letters(), window_start, Some(bound)).run(d)
}

struct Search<'a> {
    letters: &'a [Letter],
    window_start: usize,
    // Some(None) means "bounded by something larger than any u64".
    first_letter_bound: Option<Option<u64>>,
    memo: HashMap<(usize, usize, usize), bool>,
}

impl<'a> Search<'a> {
    fn new(letters: &'a [Letter], window_start: usize, first_letter_bound: Option<Option<u64>>) -> Self {
        Search { letters, window_start, first_letter_bound, memo: HashMap::new() }
    }

    fn start_ok(&self, s: usize) -> bool {
        match self.first_letter_bound {
            Some(Some(m)) => self.letters[s] < m,
            _ => true,
        }
    }

    /// Can `left` more blocks be placed to the left of the block `[s, e)`?
    fn can_extend(&mut self, s: usize, e: usize, left: usize) -> bool {
        if left == 0 {
            return true;
        }
        if let Some(&hit) = self.memo.get(&(s, e, left)) {
            return hit;
        }
        let hit = self.next_left(s, e, left).is_some();
        self.memo.insert((s, e, left), hit);
        hit
    }

    /// Start of the shortest admissible block ending at `s` that is `≻ [s,e)`
    /// and can itself be extended by `left - 1` blocks.
    fn next_left(&mut self, s: usize, e: usize, left: usize) -> Option<usize> {
        if s < self.window_start + left {
            return None;
        }
        let mut t = s;
        while t > self.window_start {
            t -= 1;
            if self.start_ok(t)
                && compare(&self.letters[t..s], &self.letters[s..e]) == WordOrder::Greater
                && self.can_extend(t, s, left - 1)
            {
                return Some(t);
            }
        }
        None
    }

    fn run(&mut self, d: usize) -> Option<Factorization> {
        let n = self.letters.len();
        if d == 0 {
            return Some(Factorization::empty(n));
        }
        if n < self.window_start + d {
            return None;
        }
        for e in (self.window_start + 1..=n).rev() {
            for s in (self.window_start..e).rev() {
                if !self.start_ok(s) || !self.can_extend(s, e, d - 1) {
                    continue;
                }
                let mut blocks = Vec::with_capacity(d);
                blocks.push(s..e);
                let (mut cs, mut ce) = (s, e);
                for left in (1..d).rev() {
                    let t = self.next_left(cs, ce, left).expect("memoized feasibility");
                    blocks.push(t..cs);
                    ce = cs;
                    cs = t;
                }
                blocks.reverse();
                return Some(Factorization::new(n, blocks[0].start, blocks));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    /// All consecutive block tilings `[s_1, s_2, …, s_d, e_d]`, checked directly.
    fn exhaustive_exists(letters: &[Letter], d: usize) -> bool {
        fn go(letters: &[Letter], start: usize, prev: Option<Range<usize>>, left: usize) -> bool {
            if left == 0 {
                return true;
            }
            (start + 1..=letters.len()).any(|e| {
                let ok = match &prev {
                    Some(p) => compare(&letters[p.clone()], &letters[start..e]) == WordOrder::Greater,
                    None => true,
                };
                ok && go(letters, e, Some(start..e), left - 1)
            })
        }
        (0..letters.len()).any(|s| go(letters, s, None, d))
    }

    #[test]
    fn three_two_one() {
        let u = w("3,2,1");
        let f = find_d_decreasing(&u, 2).unwrap();
        assert_eq!(f.render(&u), "v=(3) w1=(2) w2=(1) x=()");
        f.validate(&u).unwrap();
    }

    #[test]
    fn single_block_is_last_letter() {
        let u = w("5,0,7,7");
        let f = find_d_decreasing(&u, 1).unwrap();
        assert_eq!(f.blocks(), std::slice::from_ref(&(3..4)));
    }

    #[test]
    fn constant_word_has_no_pair() {
        assert_eq!(find_d_decreasing(&w("1,1,1,1"), 2), None);
    }

    #[test]
    fn zero_blocks_always() {
        let f = find_d_decreasing(&w("4,4"), 0).unwrap();
        assert_eq!(f.d(), 0);
        assert_eq!(f.prefix(), 0..2);
    }

    #[test]
    fn constrained_examples() {
        let u = w("9,9,3,2,1");
        let m = BigUint::from(4u32);
        let f = find_d_decreasing_constrained(&u, 2, &rat(3, 5), &m).unwrap();
        assert_eq!(f.render(&u), "v=(9,9,3) w1=(2) w2=(1) x=()");
        assert!(f.within_window(&u, &rat(3, 5), &m));
        assert_eq!(find_d_decreasing_constrained(&u, 2, &rat(1, 5), &m), None);
        assert_eq!(find_d_decreasing_constrained(&u, 0, &rat(1, 5), &m).map(|f| f.d()), Some(0));
    }

    #[test]
    fn agrees_with_exhaustive_search() {
        // All words of length ≤ 7 over {0,1,2}.
        for len in 1..=7u32 {
            for code in 0..3usize.pow(len) {
                let mut c = code;
                let letters: Vec<u64> = (0..len).map(|_| { let x = c % 3; c /= 3; x as u64 }).collect();
                let u = Word::new(letters.clone()).unwrap();
                for d in 1..=3 {
                    let found = find_d_decreasing(&u, d);
                    assert_eq!(found.is_some(), exhaustive_exists(&letters, d), "{u} d={d}");
                    if let Some(f) = found {
                        f.validate(&u).unwrap();
                        assert_eq!(f.d(), d);
                    }
                }
            }
        }
    }

    #[test]
    fn validate_rejects_bad_order() {
        let u = w("1,2");
        let f = Factorization::new(2, 0, vec![0..1, 1..2]);
        assert!(f.validate(&u).is_err());
    }
}
