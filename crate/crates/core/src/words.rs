// SPDX-License-Identifier: Apache-2.0

//! Words over small integer alphabets and the statistics defined on them.
//!
//! A [`Word`] is a plain letter sequence. Its weight everywhere in this crate
//! is [`Word::coinv`], the number of pairs `a < b` with `w[a] < w[b]`. Letter
//! `0` is legal and sorts below every positive letter.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qpoly::{QPoly, QPolyError};

pub type Letter = u8;

/// Default ceiling on the size of a rearrangement class that may be enumerated.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordsError {
    #[error("rearrangement class has {count} words, above the enumeration cap of {cap}")]
    CapExceeded { count: u128, cap: u128 },
    #[error("cannot parse word {0:?}")]
    Parse(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Poly(#[from] QPolyError),
}

pub type Result<T> = std::result::Result<T, WordsError>;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self(letters)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// `letter` repeated `times` times.
    pub fn repeat(letter: Letter, times: usize) -> Self {
        Self(vec![letter; times])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, letter: Letter) -> usize {
        self.0.iter().filter(|&&x| x == letter).count()
    }

    pub fn max_letter(&self) -> Option<Letter> {
        self.0.iter().copied().max()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Applies `f` to every letter.
    pub fn map(&self, f: impl Fn(Letter) -> Letter) -> Word {
        Word(self.0.iter().map(|&x| f(x)).collect())
    }

    /// Keeps only the letters satisfying `keep`, in order.
    pub fn filter(&self, keep: impl Fn(Letter) -> bool) -> Word {
        Word(self.0.iter().copied().filter(|&x| keep(x)).collect())
    }

    /// Number of pairs `a < b` with `w[a] < w[b]`.
    pub fn coinv(&self) -> u64 {
        let Some(max) = self.max_letter() else {
            return 0;
        };
        let mut seen = vec![0u64; max as usize + 1];
        let mut total = 0;
        for &x in &self.0 {
            total += seen[..x as usize].iter().sum::<u64>();
            seen[x as usize] += 1;
        }
        total
    }

    /// True when every letter is at most 9, so the compact digit form is unambiguous.
    fn is_compact(&self) -> bool {
        self.0.iter().all(|&x| x <= 9)
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_compact() {
            for &x in &self.0 {
                write!(f, "{x}")?;
            }
        } else {
            for (idx, &x) in self.0.iter().enumerate() {
                if idx > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordsError;

    /// Accepts the compact digit form (`231132`) and the comma-separated form
    /// (`2,3,11`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || WordsError::Parse(s.to_string());
        if s.contains(',') {
            s.split(',')
                .map(|part| part.trim().parse::<Letter>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()
                .map(Word)
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as Letter).ok_or_else(bad))
                .collect::<Result<Vec<_>>>()
                .map(Word)
        }
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A 1-based position, or `Infinite` when the letter being located is absent.
///
/// The derived order puts every `Finite` value below `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Position {
    Finite(usize),
    Infinite,
}

impl Position {
    pub fn finite(self) -> Option<usize> {
        match self {
            Position::Finite(p) => Some(p),
            Position::Infinite => None,
        }
    }

    fn from_index(idx: Option<usize>) -> Self {
        idx.map_or(Position::Infinite, |i| Position::Finite(i + 1))
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Position::Finite(p) => write!(f, "{p}"),
            Position::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Position {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Position::Finite(p) => serializer.serialize_u64(*p as u64),
            Position::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// Position of the leftmost `top`, counted from the left.
pub fn p_max(w: &Word, top: Letter) -> Position {
    Position::from_index(w.0.iter().position(|&x| x == top))
}

/// Position of the rightmost `1`, counted from the right after deleting every
/// copy of `top`.
pub fn p_one(w: &Word, top: Letter) -> Position {
    Position::from_index(w.0.iter().rev().filter(|&&x| x != top).position(|&x| x == 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    /// `p_max > p_one`.
    Greater,
    /// `p_max <= p_one`.
    LessEq,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::Greater => ">",
            Class::LessEq => "<=",
        })
    }
}

pub fn classify(w: &Word, top: Letter) -> Class {
    if p_max(w, top) > p_one(w, top) {
        Class::Greater
    } else {
        Class::LessEq
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Leftmost,
    Rightmost,
}

/// Physical 1-based slot of the leftmost or rightmost `letter`, from the left.
pub fn slot_of(w: &Word, which: Which, letter: Letter) -> Position {
    let idx = match which {
        Which::Leftmost => w.0.iter().position(|&x| x == letter),
        Which::Rightmost => w.0.iter().rposition(|&x| x == letter),
    };
    Position::from_index(idx)
}

/// Letter frequencies `counts[l]` = number of copies of letter `l`, starting at
/// letter 0. Defines the rearrangement class of all words with that content.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Freqs(Vec<usize>);

impl Freqs {
    pub fn new(counts: Vec<usize>) -> Self {
        Self(counts)
    }

    /// Frequencies given as `(letter, count)` pairs; unlisted letters get zero.
    pub fn from_pairs(pairs: &[(Letter, usize)]) -> Self {
        let top = pairs.iter().map(|&(l, _)| l as usize).max().map_or(0, |m| m + 1);
        let mut counts = vec![0; top];
        for &(l, c) in pairs {
            counts[l as usize] += c;
        }
        Self(counts)
    }

    pub fn of(w: &Word) -> Self {
        let mut counts = vec![0; w.max_letter().map_or(0, |m| m as usize + 1)];
        for &x in w.letters() {
            counts[x as usize] += 1;
        }
        Self(counts)
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn count(&self, letter: Letter) -> usize {
        self.0.get(letter as usize).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Word membership in this class, ignoring trailing zero counts.
    pub fn contains(&self, w: &Word) -> bool {
        let other = Freqs::of(w);
        let len = self.0.len().max(other.0.len());
        (0..len).all(|l| self.0.get(l).copied().unwrap_or(0) == other.0.get(l).copied().unwrap_or(0))
    }

    /// Number of words in the class (ordinary multinomial coefficient).
    pub fn class_size(&self) -> Option<u128> {
        let mut size: u128 = 1;
        let mut placed: u128 = 0;
        for &c in &self.0 {
            for t in 1..=c as u128 {
                placed += 1;
                // size * placed / t stays integral: it is a running binomial product.
                size = size.checked_mul(placed)? / t;
            }
        }
        Some(size)
    }

    /// The lexicographically smallest word in the class.
    pub fn first_word(&self) -> Word {
        let mut letters = Vec::with_capacity(self.total());
        for (l, &c) in self.0.iter().enumerate() {
            letters.extend(std::iter::repeat_n(l as Letter, c));
        }
        Word(letters)
    }
}

/// Iterator over a rearrangement class in ascending lexicographic order.
#[derive(Debug, Clone)]
pub struct Rearrangements {
    current: Option<Vec<Letter>>,
}

impl Rearrangements {
    pub fn new(freqs: &Freqs) -> Self {
        Self {
            current: Some(freqs.first_word().0),
        }
    }
}

impl Iterator for Rearrangements {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.current.as_mut()?;
        let out = Word(cur.clone());
        if !next_permutation(cur) {
            self.current = None;
        }
        Some(out)
    }
}

/// Advances `xs` to the next lexicographic arrangement; false when `xs` was the last.
fn next_permutation(xs: &mut [Letter]) -> bool {
    let Some(pivot) = xs.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let succ = xs.iter().rposition(|&x| x > xs[pivot]).expect("pivot has a successor");
    xs.swap(pivot, succ);
    xs[pivot + 1..].reverse();
    true
}

/// Fails if the class is larger than `cap`.
pub fn check_cap(freqs: &Freqs, cap: u128) -> Result<()> {
    match freqs.class_size() {
        Some(count) if count <= cap => Ok(()),
        Some(count) => Err(WordsError::CapExceeded { count, cap }),
        None => Err(WordsError::CapExceeded { count: u128::MAX, cap }),
    }
}

/// Streams the class after checking it against `cap`.
pub fn rearrangements(freqs: &Freqs, cap: u128) -> Result<Rearrangements> {
    check_cap(freqs, cap)?;
    Ok(Rearrangements::new(freqs))
}

/// Every word of the class, ascending lexicographically, under the default cap.
pub fn enumerate(freqs: &Freqs) -> Result<Vec<Word>> {
    enumerate_with_cap(freqs, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_with_cap(freqs: &Freqs, cap: u128) -> Result<Vec<Word>> {
    Ok(rearrangements(freqs, cap)?.collect())
}

/// Brute-force generating function: the sum of `q^coinv(w)` over the words of
/// the class that satisfy `pred`.
pub fn gf(freqs: &Freqs, pred: impl Fn(&Word) -> bool) -> Result<QPoly> {
    gf_with_cap(freqs, DEFAULT_ENUMERATION_CAP, pred)
}

pub fn gf_with_cap(freqs: &Freqs, cap: u128, pred: impl Fn(&Word) -> bool) -> Result<QPoly> {
    let mut acc = QPoly::zero();
    for w in rearrangements(freqs, cap)? {
        if pred(&w) {
            acc.add_monomial(w.coinv() as usize)?;
        }
    }
    Ok(acc)
}

/// The parameters that fix a family of word classes.
///
/// Words live over `1..=top`; a word in class `W_k` has `marked - tops` ones,
/// `middle[m - 2]` copies of each middle letter `m`, and `tops` copies of
/// `top`. Its length is `marked + sum(middle)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    #[serde(rename = "n")]
    pub top: Letter,
    #[serde(rename = "N")]
    pub len: usize,
    #[serde(rename = "L")]
    pub marked: usize,
    #[serde(rename = "k")]
    pub tops: usize,
    #[serde(rename = "i", skip_serializing_if = "Option::is_none", default)]
    pub one_pos: Option<usize>,
    #[serde(rename = "j", skip_serializing_if = "Option::is_none", default)]
    pub top_pos: Option<usize>,
    #[serde(rename = "a")]
    pub middle: Vec<usize>,
}

impl Params {
    /// Three-letter family `R(1^(L-k) 2^(N-L) 3^k)`.
    pub fn three_letter(len: usize, marked: usize, tops: usize) -> Self {
        Self {
            top: 3,
            len,
            marked,
            tops,
            one_pos: None,
            top_pos: None,
            middle: vec![len.saturating_sub(marked)],
        }
    }

    /// General family over `1..=top` with the given middle-letter counts.
    pub fn general(top: Letter, marked: usize, tops: usize, middle: Vec<usize>) -> Self {
        Self {
            top,
            len: marked + middle.iter().sum::<usize>(),
            marked,
            tops,
            one_pos: None,
            top_pos: None,
            middle,
        }
    }

    pub fn with_one_pos(mut self, i: usize) -> Self {
        self.one_pos = Some(i);
        self
    }

    pub fn with_top_pos(mut self, j: usize) -> Self {
        self.top_pos = Some(j);
        self
    }

    pub fn with_tops(&self, tops: usize) -> Self {
        Self { tops, ..self.clone() }
    }

    /// Number of letters that are neither 1 nor the top letter.
    pub fn middle_total(&self) -> usize {
        self.middle.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(WordsError::Params(msg));
        if self.top < 3 {
            return fail(format!("top letter must be at least 3, got {}", self.top));
        }
        if self.middle.len() != self.top as usize - 2 {
            return fail(format!(
                "expected {} middle counts for top letter {}, got {}",
                self.top as usize - 2,
                self.top,
                self.middle.len()
            ));
        }
        if self.marked == 0 {
            return fail("L must be positive".into());
        }
        if self.len != self.marked + self.middle_total() {
            return fail(format!(
                "N = {} but L + sum(a) = {}",
                self.len,
                self.marked + self.middle_total()
            ));
        }
        if self.tops > self.marked {
            return fail(format!("k = {} exceeds L = {}", self.tops, self.marked));
        }
        if let Some(i) = self.one_pos {
            if i < 1 || i > self.len - self.marked + 1 {
                return fail(format!("i = {i} outside 1..={}", self.len - self.marked + 1));
            }
        }
        if let Some(j) = self.top_pos {
            if j < 1 || j > self.len - self.tops + 1 {
                return fail(format!("j = {j} outside 1..={}", self.len - self.tops + 1));
            }
        }
        Ok(())
    }

    /// Frequencies of `W_k`.
    pub fn class_freqs(&self) -> Freqs {
        let mut counts = vec![0, self.marked - self.tops];
        counts.extend_from_slice(&self.middle);
        counts.push(self.tops);
        Freqs(counts)
    }

    /// Frequencies of the three-letter shadow `X_k = R(1^(L-k) 2^(N-L) 3^k)`.
    pub fn shadow_freqs(&self) -> Freqs {
        Freqs(vec![0, self.marked - self.tops, self.len - self.marked, self.tops])
    }

    /// Frequencies of the middle-letter word `R(2^(a_2) ... (n-1)^(a_(n-1)))`.
    pub fn middle_freqs(&self) -> Freqs {
        let mut counts = vec![0, 0];
        counts.extend_from_slice(&self.middle);
        Freqs(counts)
    }

    /// Recovers the parameters of the class containing `w`, reading `L` and
    /// `k` off the letter counts.
    pub fn infer(w: &Word, top: Letter) -> Result<Self> {
        if top < 3 {
            return Err(WordsError::Params(format!("top letter must be at least 3, got {top}")));
        }
        if let Some(bad) = w.letters().iter().find(|&&x| x == 0 || x > top) {
            return Err(WordsError::Params(format!(
                "letter {bad} outside the alphabet 1..={top}"
            )));
        }
        let freqs = Freqs::of(w);
        let tops = freqs.count(top);
        let marked = freqs.count(1) + tops;
        let middle = (2..top).map(|m| freqs.count(m)).collect();
        let params = Self::general(top, marked, tops, middle);
        params.validate()?;
        Ok(params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn coinv_values() {
        assert_eq!(w("231132").coinv(), 6);
        assert_eq!(w("3112443214243").coinv(), 39);
        assert_eq!(w("443221110").coinv(), 0);
        assert_eq!(Word::empty().coinv(), 0);
    }

    #[test]
    fn coinv_append_identity() {
        let base = w("3142241324243");
        for x in 0..=5 {
            let mut letters = base.letters().to_vec();
            letters.push(x);
            let smaller = base.letters().iter().filter(|&&b| b < x).count() as u64;
            assert_eq!(Word::new(letters).coinv(), base.coinv() + smaller);
        }
    }

    #[test]
    fn positions() {
        assert_eq!(p_max(&w("3142241324243"), 4), Position::Finite(3));
        assert_eq!(p_one(&w("3142241324243"), 4), Position::Finite(5));
        assert_eq!(p_max(&w("111"), 4), Position::Infinite);
        assert_eq!(p_one(&w("222"), 4), Position::Infinite);
        assert_eq!(p_max(&w("3112443214243"), 4), Position::Finite(5));
        assert_eq!(p_one(&w("3112443214243"), 4), Position::Finite(3));
    }

    #[test]
    fn position_order() {
        assert!(Position::Infinite > Position::Finite(usize::MAX));
        assert!(Position::Infinite <= Position::Infinite);
        assert!(Position::Finite(2) < Position::Finite(3));
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&w("3112443214243"), 4), Class::Greater);
        assert_eq!(classify(&w("3141442324243"), 4), Class::LessEq);
        assert_eq!(classify(&w("12"), 3), Class::Greater);
        assert_eq!(classify(&w("23"), 3), Class::LessEq);
    }

    #[test]
    fn slots() {
        let x = w("2132231223232");
        assert_eq!(slot_of(&x, Which::Leftmost, 3), Position::Finite(3));
        assert_eq!(slot_of(&x, Which::Rightmost, 1), Position::Finite(7));
        assert_eq!(slot_of(&w("222"), Which::Rightmost, 1), Position::Infinite);
    }

    #[test]
    fn enumeration_order() {
        let words = |pairs: &[(Letter, usize)]| -> Vec<String> {
            enumerate(&Freqs::from_pairs(pairs))
                .unwrap()
                .iter()
                .map(Word::to_string)
                .collect()
        };
        assert_eq!(words(&[(1, 1), (2, 1)]), ["12", "21"]);
        assert_eq!(words(&[(1, 2), (2, 1)]), ["112", "121", "211"]);
        assert_eq!(words(&[(1, 2), (2, 2)]).len(), 6);
        assert_eq!(words(&[]), [""]);
    }

    #[test]
    fn enumeration_cap() {
        let freqs = Freqs::from_pairs(&[(1, 3), (2, 3)]);
        assert_eq!(
            enumerate_with_cap(&freqs, 19),
            Err(WordsError::CapExceeded { count: 20, cap: 19 })
        );
        assert_eq!(enumerate_with_cap(&freqs, 20).unwrap().len(), 20);
    }

    #[test]
    fn brute_force_gf() {
        let f12 = Freqs::from_pairs(&[(1, 1), (2, 1)]);
        assert_eq!(gf(&f12, |_| true).unwrap(), QPoly::from_coeffs(vec![1, 1]));
        let f123 = Freqs::from_pairs(&[(1, 1), (2, 1), (3, 1)]);
        let starts_with_3 = gf(&f123, |w| p_max(w, 3) == Position::Finite(1)).unwrap();
        assert_eq!(starts_with_3, QPoly::from_coeffs(vec![1, 1]));
    }

    #[test]
    fn word_text_format() {
        assert_eq!(w("2,3,11").letters(), &[2, 3, 11]);
        assert_eq!(Word::new(vec![2, 3, 11]).to_string(), "2,3,11");
        assert_eq!(w("2,3,1").to_string(), "231");
        assert!("12a".parse::<Word>().is_err());
        assert!("1,,2".parse::<Word>().is_err());
    }

    #[test]
    fn params_inference() {
        let p = Params::infer(&w("3112443214243"), 4).unwrap();
        assert_eq!((p.len, p.marked, p.tops), (13, 7, 4));
        assert_eq!(p.middle, vec![3, 3]);
        assert!(Params::infer(&w("2222"), 4).is_err());
        assert!(Params::infer(&w("1502"), 4).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(Params::three_letter(5, 3, 1).with_one_pos(3).validate().is_ok());
        assert!(Params::three_letter(5, 3, 1).with_one_pos(4).validate().is_err());
        assert!(Params::three_letter(5, 3, 1).with_top_pos(5).validate().is_ok());
        assert!(Params::three_letter(5, 3, 1).with_top_pos(6).validate().is_err());
        assert!(Params::three_letter(5, 3, 4).validate().is_err());
        assert!(Params::three_letter(5, 0, 0).validate().is_err());
    }

    #[test]
    fn freqs_size() {
        assert_eq!(Freqs::from_pairs(&[(1, 2), (2, 2)]).class_size(), Some(6));
        assert_eq!(
            Freqs::from_pairs(&[(1, 3), (2, 3), (3, 3), (4, 4)]).class_size(),
            Some(1_201_200)
        );
        assert!(Freqs::from_pairs(&[(1, 2), (3, 1)]).contains(&w("131")));
        assert!(!Freqs::from_pairs(&[(1, 2), (3, 1)]).contains(&w("133")));
    }
}
