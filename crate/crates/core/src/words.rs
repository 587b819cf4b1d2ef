//! Letters, words and the lexicographic / shortlex orders on them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("letter {0:?} is not in the order's alphabet")]
    AlphabetMismatch(Letter),
    #[error("alternating product needs two distinct generators, got {0} twice")]
    DegeneratePair(u16),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed exponent in token `{0}`")]
    MalformedExponent(String),
    #[error("invalid order: {0}")]
    InvalidOrder(String),
}

/// A generator or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    gen: u16,
    inv: bool,
}

impl Letter {
    pub const fn pos(gen: u16) -> Letter {
        Letter { gen, inv: false }
    }

    pub const fn neg(gen: u16) -> Letter {
        Letter { gen, inv: true }
    }

    pub const fn new(gen: u16, inverse: bool) -> Letter {
        Letter { gen, inv: inverse }
    }

    /// The generator this letter names; sign independent.
    pub fn name(self) -> u16 {
        self.gen
    }

    pub fn is_positive(self) -> bool {
        !self.inv
    }

    pub fn is_negative(self) -> bool {
        self.inv
    }

    pub fn inverse(self) -> Letter {
        Letter { gen: self.gen, inv: !self.inv }
    }

    /// Dense index `2 * gen + sign`, used by orders and packed keys.
    pub fn index(self) -> usize {
        2 * self.gen as usize + self.inv as usize
    }

    pub fn from_index(i: usize) -> Letter {
        Letter { gen: (i / 2) as u16, inv: i % 2 == 1 }
    }

    /// The same sign, different generator.
    pub fn with_name(self, gen: u16) -> Letter {
        Letter { gen, inv: self.inv }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inv {
            write!(f, "g{}^-1", self.gen)
        } else {
            write!(f, "g{}", self.gen)
        }
    }
}

/// A finite sequence of letters. Words are values: every rewrite builds a new one.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// `pr(w, k)`, the prefix of length `k` (clamped to `|w|`).
    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k.min(self.0.len())].to_vec())
    }

    pub fn suffix_from(&self, k: usize) -> Word {
        Word(self.0[k.min(self.0.len())..].to_vec())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// `x^k` for a signed exponent.
    pub fn power(gen: u16, k: i64) -> Word {
        let l = if k >= 0 { Letter::pos(gen) } else { Letter::neg(gen) };
        Word(vec![l; k.unsigned_abs() as usize])
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    pub fn negative_count(&self) -> usize {
        self.0.iter().filter(|l| l.is_negative()).count()
    }

    pub fn is_freely_reduced(&self) -> bool {
        is_freely_reduced(&self.0)
    }

    pub fn names(&self) -> Vec<u16> {
        let mut names: Vec<u16> = self.0.iter().map(|l| l.name()).collect();
        names.sort_unstable();
        names.dedup();
        names
    }

    /// Largest `t` with `w` starting with `x^t`.
    pub fn leading_power(&self, x: Letter) -> usize {
        self.0.iter().take_while(|&&l| l == x).count()
    }
}

impl Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Word {
        Word(v)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Word {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

pub fn is_freely_reduced(w: &[Letter]) -> bool {
    w.windows(2).all(|p| p[0] != p[1].inverse())
}

/// Deletes adjacent inverse pairs until none remain.
pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `_m(x, y)`: starts with `x`.
    Left,
    /// `(x, y)_m`: ends with `y`.
    Right,
}

/// Alternating product of `x` and `y` of length `m`.
pub fn alternating(x: Letter, y: Letter, m: usize, side: Side) -> Result<Word, WordError> {
    if x.name() == y.name() {
        return Err(WordError::DegeneratePair(x.name()));
    }
    Ok(alternating_unchecked(x, y, m, side))
}

pub(crate) fn alternating_unchecked(x: Letter, y: Letter, m: usize, side: Side) -> Word {
    let start = match side {
        Side::Left => x,
        // ends with y: first letter is y when m is odd, x when even
        Side::Right => {
            if m % 2 == 1 {
                y
            } else {
                x
            }
        }
    };
    let other = if start == x { y } else { x };
    (0..m).map(|i| if i % 2 == 0 { start } else { other }).collect()
}

/// A strict total order on the signed alphabet of `n` generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LexOrder {
    rank: Vec<u32>,
    letters: Vec<Letter>,
}

impl LexOrder {
    /// `g0 < g0^-1 < g1 < g1^-1 < ...`
    pub fn standard(n: usize) -> LexOrder {
        let letters = (0..2 * n).map(Letter::from_index).collect();
        LexOrder::from_letters(letters).expect("standard order is total")
    }

    /// Builds an order from a ranking listing every signed letter exactly once.
    pub fn from_letters(letters: Vec<Letter>) -> Result<LexOrder, WordError> {
        let size = letters.len();
        if size % 2 != 0 {
            return Err(WordError::InvalidOrder(format!(
                "odd number of letters ({size})"
            )));
        }
        let mut rank = vec![u32::MAX; size];
        for (r, l) in letters.iter().enumerate() {
            let i = l.index();
            if i >= size {
                return Err(WordError::AlphabetMismatch(*l));
            }
            if rank[i] != u32::MAX {
                return Err(WordError::InvalidOrder(format!("letter {l:?} listed twice")));
            }
            rank[i] = r as u32;
        }
        Ok(LexOrder { rank, letters })
    }

    pub fn generator_count(&self) -> usize {
        self.rank.len() / 2
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn rank(&self, l: Letter) -> Result<u32, WordError> {
        self.rank
            .get(l.index())
            .copied()
            .ok_or(WordError::AlphabetMismatch(l))
    }

    pub fn contains(&self, l: Letter) -> bool {
        l.index() < self.rank.len()
    }

    pub fn less(&self, a: Letter, b: Letter) -> bool {
        self.rank[a.index()] < self.rank[b.index()]
    }

    pub fn compare_letters(&self, a: Letter, b: Letter) -> Ordering {
        self.rank[a.index()].cmp(&self.rank[b.index()])
    }

    /// Every positive letter precedes its inverse.
    pub fn is_polyfree_compatible(&self) -> bool {
        (0..self.generator_count() as u16)
            .all(|g| self.rank[Letter::pos(g).index()] < self.rank[Letter::neg(g).index()])
    }

    /// The same relative order with `x` moved to the front.
    pub fn with_first(&self, x: Letter) -> LexOrder {
        let mut letters = vec![x];
        letters.extend(self.letters.iter().copied().filter(|&l| l != x));
        LexOrder::from_letters(letters).expect("permutation of a total order")
    }

    fn check(&self, w: &[Letter]) -> Result<(), WordError> {
        match w.iter().find(|l| !self.contains(**l)) {
            Some(l) => Err(WordError::AlphabetMismatch(*l)),
            None => Ok(()),
        }
    }

    /// Letter-by-letter comparison; a proper prefix is smaller.
    pub fn lex_compare(&self, u: &[Letter], v: &[Letter]) -> Result<Ordering, WordError> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.lex_unchecked(u, v))
    }

    pub fn shortlex_compare(&self, u: &[Letter], v: &[Letter]) -> Result<Ordering, WordError> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.shortlex_unchecked(u, v))
    }

    pub(crate) fn lex_unchecked(&self, u: &[Letter], v: &[Letter]) -> Ordering {
        for (a, b) in u.iter().zip(v) {
            match self.compare_letters(*a, *b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        u.len().cmp(&v.len())
    }

    pub(crate) fn shortlex_unchecked(&self, u: &[Letter], v: &[Letter]) -> Ordering {
        u.len().cmp(&v.len()).then_with(|| self.lex_unchecked(u, v))
    }
}

impl fmt::Debug for LexOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.letters.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Letter = Letter::pos(0);
    const AI: Letter = Letter::neg(0);
    const B: Letter = Letter::pos(1);
    const BI: Letter = Letter::neg(1);

    fn w(ls: &[Letter]) -> Word {
        Word::new(ls.to_vec())
    }

    #[test]
    fn free_reduction_examples() {
        assert_eq!(free_reduce(&[A, AI, B]), w(&[B]));
        assert_eq!(free_reduce(&[A, B, A, B]), w(&[A, B, A, B]));
        assert_eq!(free_reduce(&[A, B, BI, AI]), Word::empty());
    }

    #[test]
    fn order_comparisons() {
        let ord = LexOrder::standard(2);
        let abab = [A, B, A, B];
        let baba = [B, A, B, A];
        assert_eq!(ord.lex_compare(&abab, &baba), Ok(Ordering::Less));
        assert_eq!(ord.shortlex_compare(&abab, &baba), Ok(Ordering::Less));
        assert_eq!(ord.lex_compare(&[A, B], &[A, B]), Ok(Ordering::Equal));
        assert_eq!(ord.shortlex_compare(&[B], &[A, A]), Ok(Ordering::Less));
        assert_eq!(ord.lex_compare(&[B], &[A, A]), Ok(Ordering::Greater));
        assert_eq!(ord.lex_compare(&[A], &[A, A]), Ok(Ordering::Less));
    }

    #[test]
    fn unknown_letter_is_rejected() {
        let ord = LexOrder::standard(2);
        let c = Letter::pos(2);
        assert_eq!(
            ord.lex_compare(&[A], &[c]),
            Err(WordError::AlphabetMismatch(c))
        );
    }

    #[test]
    fn alternating_products() {
        assert_eq!(alternating(A, B, 4, Side::Left).unwrap(), w(&[A, B, A, B]));
        assert_eq!(alternating(A, B, 4, Side::Right).unwrap(), w(&[A, B, A, B]));
        assert_eq!(alternating(A, B, 3, Side::Left).unwrap(), w(&[A, B, A]));
        assert_eq!(alternating(A, B, 3, Side::Right).unwrap(), w(&[B, A, B]));
        assert_eq!(alternating(A, B, 0, Side::Left).unwrap(), Word::empty());
        assert_eq!(alternating(A, AI, 2, Side::Left), Err(WordError::DegeneratePair(0)));
    }

    #[test]
    fn polyfree_compatibility() {
        assert!(LexOrder::standard(3).is_polyfree_compatible());
        let ord = LexOrder::from_letters(vec![AI, A, B, BI]).unwrap();
        assert!(!ord.is_polyfree_compatible());
        assert!(LexOrder::from_letters(vec![A, A, B, BI]).is_err());
    }
}
