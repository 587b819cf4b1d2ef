//! Two-generator machinery: p/n statistics, critical words, τ-moves and an exact
//! Garside normal form for dihedral Artin groups.

use std::fmt;
use std::ops::Range;

use thiserror::Error;

use crate::words::{alternating_unchecked, is_freely_reduced, Letter, Side, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DihedralError {
    #[error("word is not freely reduced")]
    NotReduced,
    #[error("word uses more than two generators")]
    TooManyGenerators,
    #[error("label must be finite for the Garside form")]
    InfiniteLabel,
    #[error("label {0} is below 2")]
    BadLabel(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PNStats {
    pub p: usize,
    pub n: usize,
    pub m: usize,
}

fn check_two_generator(w: &[Letter]) -> Result<(), DihedralError> {
    if !is_freely_reduced(w) {
        return Err(DihedralError::NotReduced);
    }
    let mut names: Vec<u16> = w.iter().map(|l| l.name()).collect();
    names.sort_unstable();
    names.dedup();
    if names.len() > 2 {
        return Err(DihedralError::TooManyGenerators);
    }
    Ok(())
}

/// Longest runs of consecutive same-sign letters with alternating names, positive and negative.
fn alternating_runs(w: &[Letter]) -> (usize, usize) {
    let (mut r1, mut r2) = (0, 0);
    let mut run = 0;
    for i in 0..w.len() {
        if i > 0 && w[i].is_negative() == w[i - 1].is_negative() && w[i].name() != w[i - 1].name() {
            run += 1;
        } else {
            run = 1;
        }
        if w[i].is_positive() {
            r1 = r1.max(run);
        } else {
            r2 = r2.max(run);
        }
    }
    (r1, r2)
}

pub fn pn_stats(w: &[Letter], m: usize) -> Result<PNStats, DihedralError> {
    check_two_generator(w)?;
    let (r1, r2) = alternating_runs(w);
    Ok(PNStats { p: r1.min(m), n: r2.min(m), m })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Geodesity {
    UniqueGeodesic,
    GeodesicAmongSeveral,
    /// Carries the span of a subword with `p + n = m`.
    NotGeodesic(Range<usize>),
}

pub fn classify_geodesic(w: &[Letter], m: usize) -> Result<Geodesity, DihedralError> {
    let s = pn_stats(w, m)?;
    Ok(match (s.p + s.n).cmp(&m) {
        std::cmp::Ordering::Less => Geodesity::UniqueGeodesic,
        std::cmp::Ordering::Equal => Geodesity::GeodesicAmongSeveral,
        std::cmp::Ordering::Greater => {
            // p + n grows by at most one per added letter, so the shortest
            // subword reaching m exists and has exactly p + n = m
            let mut best: Option<Range<usize>> = None;
            for i in 0..w.len() {
                for j in i + 1..=w.len() {
                    if best.as_ref().is_some_and(|b| b.len() <= j - i) {
                        break;
                    }
                    let (r1, r2) = alternating_runs(&w[i..j]);
                    if r1.min(m) + r2.min(m) == m {
                        best = Some(i..j);
                        break;
                    }
                }
            }
            Geodesity::NotGeodesic(best.expect("some subword has p + n = m"))
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CriticalForm {
    /// `_m(x,y) ξ₊`
    PosLeft,
    /// `ξ₊ (x,y)_m`
    PosRight,
    NegLeft,
    NegRight,
    /// `_p(x,y) η (z⁻¹,t⁻¹)_n`
    UnsignedPosFirst,
    /// `_n(x⁻¹,y⁻¹) η (z,t)_p`
    UnsignedNegFirst,
    PureAlternatingPos,
    PureAlternatingNeg,
}

impl CriticalForm {
    pub fn as_str(self) -> &'static str {
        match self {
            CriticalForm::PosLeft => "pos_left",
            CriticalForm::PosRight => "pos_right",
            CriticalForm::NegLeft => "neg_left",
            CriticalForm::NegRight => "neg_right",
            CriticalForm::UnsignedPosFirst => "unsigned_pos_first",
            CriticalForm::UnsignedNegFirst => "unsigned_neg_first",
            CriticalForm::PureAlternatingPos => "pure_alternating_pos",
            CriticalForm::PureAlternatingNeg => "pure_alternating_neg",
        }
    }

    pub fn parse(s: &str) -> Option<CriticalForm> {
        [
            CriticalForm::PosLeft,
            CriticalForm::PosRight,
            CriticalForm::NegLeft,
            CriticalForm::NegRight,
            CriticalForm::UnsignedPosFirst,
            CriticalForm::UnsignedNegFirst,
            CriticalForm::PureAlternatingPos,
            CriticalForm::PureAlternatingNeg,
        ]
        .into_iter()
        .find(|f| f.as_str() == s)
    }

    pub fn is_unsigned(self) -> bool {
        matches!(self, CriticalForm::UnsignedPosFirst | CriticalForm::UnsignedNegFirst)
    }
}

impl fmt::Display for CriticalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A critical word with its decomposition into leading block, middle (ξ or η) and trailing block.
/// For the one-block forms the absent block is an empty range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalWord {
    pub word: Word,
    pub form: CriticalForm,
    pub m: usize,
    pub lead: Range<usize>,
    pub middle: Range<usize>,
    pub trail: Range<usize>,
    /// The two generator names, the first letter's name first.
    pub generators: (u16, u16),
}

fn count_alternating_blocks(w: &[Letter], m: usize) -> (usize, Option<usize>) {
    let mut count = 0;
    let mut at = None;
    for i in 0..=w.len().saturating_sub(m) {
        if i + m <= w.len() && is_alternating(&w[i..i + m]) {
            count += 1;
            at.get_or_insert(i);
        }
    }
    (count, at)
}

/// Same sign throughout and strictly alternating names.
fn is_alternating(w: &[Letter]) -> bool {
    w.windows(2)
        .all(|p| p[0].is_negative() == p[1].is_negative() && p[0].name() != p[1].name())
}

/// Recognizes a critical word for label `m`; `None` if `w` is not critical.
pub fn find_critical(w: &[Letter], m: usize) -> Option<CriticalWord> {
    if w.is_empty() || m < 2 || check_two_generator(w).is_err() {
        return None;
    }
    let names = Word::new(w.to_vec()).names();
    if names.len() != 2 {
        return None;
    }
    let first = w[0].name();
    let other = if names[0] == first { names[1] } else { names[0] };
    let (r1, r2) = alternating_runs(w);
    let (p, n) = (r1.min(m), r2.min(m));
    if p + n != m {
        return None;
    }
    let len = w.len();
    let make = |form, lead: Range<usize>, middle: Range<usize>, trail: Range<usize>| {
        Some(CriticalWord {
            word: Word::new(w.to_vec()),
            form,
            m,
            lead,
            middle,
            trail,
            generators: (first, other),
        })
    };
    if n == 0 || p == 0 {
        // all letters share one sign
        let positive = n == 0;
        let (count, at) = count_alternating_blocks(w, m);
        if count != 1 {
            return None;
        }
        let at = at.expect("one block");
        let (pure, left, right) = if positive {
            (CriticalForm::PureAlternatingPos, CriticalForm::PosLeft, CriticalForm::PosRight)
        } else {
            (CriticalForm::PureAlternatingNeg, CriticalForm::NegLeft, CriticalForm::NegRight)
        };
        return if len == m {
            make(pure, 0..m, m..m, m..m)
        } else if at == 0 {
            make(left, 0..m, m..len, len..len)
        } else if at + m == len {
            make(right, 0..0, 0..at, at..len)
        } else {
            None
        };
    }
    let lead_sign_pos = w[0].is_positive();
    let (lead_len, trail_len) = if lead_sign_pos { (p, n) } else { (n, p) };
    if lead_len + trail_len > len {
        return None;
    }
    let lead = &w[..lead_len];
    let trail = &w[len - trail_len..];
    let ok = is_alternating(lead)
        && is_alternating(trail)
        && lead.iter().all(|l| l.is_positive() == lead_sign_pos)
        && trail.iter().all(|l| l.is_positive() != lead_sign_pos);
    if !ok {
        return None;
    }
    let form = if lead_sign_pos {
        CriticalForm::UnsignedPosFirst
    } else {
        CriticalForm::UnsignedNegFirst
    };
    make(form, 0..lead_len, lead_len..len - trail_len, len - trail_len..len)
}

/// ν: swaps the two names when `m` is odd, identity when even.
pub fn nu(w: &[Letter], pair: (u16, u16), m: usize) -> Word {
    if m % 2 == 0 {
        return Word::new(w.to_vec());
    }
    w.iter().map(|&l| l.with_name(swap_name(l.name(), pair))).collect()
}

fn swap_name(g: u16, pair: (u16, u16)) -> u16 {
    if g == pair.0 {
        pair.1
    } else {
        pair.0
    }
}

/// Applies the τ-move matching `c.form`.
pub fn tau(c: &CriticalWord) -> Word {
    let w = c.word.letters();
    let m = c.m;
    let pair = c.generators;
    let other_letter = |l: Letter| l.with_name(swap_name(l.name(), pair));
    match c.form {
        CriticalForm::PureAlternatingPos | CriticalForm::PureAlternatingNeg => {
            w.iter().map(|&l| other_letter(l)).collect()
        }
        CriticalForm::PosRight | CriticalForm::NegRight => {
            // ξ (x,y)_m -> _m(t,z) ν(ξ), z = f[ξ]
            let xi = &w[c.middle.clone()];
            let z = xi[0];
            let t = other_letter(z);
            alternating_unchecked(t, z, m, Side::Left).concat(&nu(xi, pair, m))
        }
        CriticalForm::PosLeft | CriticalForm::NegLeft => {
            // _m(x,y) ξ -> ν(ξ) (z,t)_m, z = l[ξ]
            let xi = &w[c.middle.clone()];
            let z = xi[xi.len() - 1];
            let t = other_letter(z);
            nu(xi, pair, m).concat(&alternating_unchecked(z, t, m, Side::Right))
        }
        CriticalForm::UnsignedPosFirst | CriticalForm::UnsignedNegFirst => {
            // _p(x,y) η (z⁻¹,t⁻¹)_n -> _n(y⁻¹,x⁻¹) ν(η) (t,z)_p, and the sign mirror
            let x = w[0];
            let y = other_letter(x);
            let t = w[w.len() - 1];
            let z = other_letter(t);
            let eta = &w[c.middle.clone()];
            let (lead, trail) = (c.lead.len(), c.trail.len());
            alternating_unchecked(y.inverse(), x.inverse(), trail, Side::Left)
                .concat(&nu(eta, pair, m))
                .concat(&alternating_unchecked(t.inverse(), z.inverse(), lead, Side::Right))
        }
    }
}

/// τ of `w` if `w` is critical for label `m`.
pub fn tau_word(w: &[Letter], m: usize) -> Option<Word> {
    find_critical(w, m).map(|c| tau(&c))
}

/// `Δ^k · s₁ ⋯ s_r` with each `s_i` a positive alternating proper divisor of Δ,
/// consecutive factors meeting in a repeated letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GarsideForm {
    pub delta_power: i64,
    pub factors: Vec<Word>,
}

struct GarsideState {
    m: usize,
    pair: (u16, u16),
    k: i64,
    // (first name, length)
    factors: Vec<(u16, usize)>,
}

impl GarsideState {
    fn last_name(&self, f: (u16, usize)) -> u16 {
        if f.1 % 2 == 1 {
            f.0
        } else {
            swap_name(f.0, self.pair)
        }
    }

    fn apply_nu(&mut self) {
        if self.m % 2 == 1 {
            let pair = self.pair;
            for f in &mut self.factors {
                f.0 = swap_name(f.0, pair);
            }
        }
    }

    fn push_positive(&mut self, x: u16) {
        match self.factors.last().copied() {
            Some(f) if self.last_name(f) != x => {
                let len = f.1 + 1;
                if len == self.m {
                    // s₁ ⋯ s_{r-1} Δ = Δ ν(s₁ ⋯ s_{r-1})
                    self.factors.pop();
                    self.k += 1;
                    self.apply_nu();
                } else {
                    self.factors.last_mut().expect("nonempty").1 = len;
                }
            }
            _ => self.factors.push((x, 1)),
        }
    }

    fn push(&mut self, l: Letter) {
        if l.is_positive() {
            self.push_positive(l.name());
        } else {
            // x⁻¹ = Δ⁻¹ · pre where pre · x = Δ
            self.k -= 1;
            self.apply_nu();
            let x = l.name();
            let y = swap_name(x, self.pair);
            let delta = alternating_unchecked(Letter::pos(y), Letter::pos(x), self.m, Side::Right);
            for p in &delta[..self.m - 1] {
                self.push_positive(p.name());
            }
        }
    }
}

/// Garside normal form in the dihedral group on `pair` with label `m`.
pub fn garside_normal_form(w: &[Letter], pair: (u16, u16), m: Option<u32>) -> Result<GarsideForm, DihedralError> {
    let m = m.ok_or(DihedralError::InfiniteLabel)? as usize;
    if m < 2 {
        return Err(DihedralError::BadLabel(m as u32));
    }
    if w.iter().any(|l| l.name() != pair.0 && l.name() != pair.1) {
        return Err(DihedralError::TooManyGenerators);
    }
    let mut st = GarsideState { m, pair, k: 0, factors: Vec::new() };
    for &l in w {
        st.push(l);
    }
    let factors = st
        .factors
        .iter()
        .map(|&(x, len)| {
            alternating_unchecked(Letter::pos(x), Letter::pos(swap_name(x, pair)), len, Side::Left)
        })
        .collect();
    Ok(GarsideForm { delta_power: st.k, factors })
}

/// Exact equality in the dihedral Artin group with label `m`; free reduction when `m` is `None`.
pub fn garside_equal(u: &[Letter], v: &[Letter], m: Option<u32>) -> Result<bool, DihedralError> {
    let mut names: Vec<u16> = u.iter().chain(v).map(|l| l.name()).collect();
    names.sort_unstable();
    names.dedup();
    if names.len() > 2 {
        return Err(DihedralError::TooManyGenerators);
    }
    if m.is_none() {
        return Ok(crate::words::free_reduce(u) == crate::words::free_reduce(v));
    }
    let pair = match names.as_slice() {
        [] => (0, 1),
        [a] => (*a, a.wrapping_add(1)),
        [a, b] => (*a, *b),
        _ => unreachable!(),
    };
    Ok(garside_normal_form(u, pair, m)? == garside_normal_form(v, pair, m)?)
}
