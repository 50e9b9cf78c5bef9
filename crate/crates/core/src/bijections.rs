// SPDX-License-Identifier: Apache-2.0

//! Primitive weight-preserving bijections on words.
//!
//! Each map comes with an explicit inverse and an exact weight law. The maps
//! and their conventional names:
//!
//! | map | forward | inverse |
//! |-----|---------|---------|
//! | F   | [`split_first_high`] | [`join_first_high`] |
//! | G   | [`split_last_low`] | [`join_last_low`] |
//! | H   | [`separate_tops`] | [`merge_tops`] |
//! | K   | [`swap_reverse`] (self-inverse) | [`swap_reverse`] |
//! | collapse / expand middle letters | [`collapse_middle`] | [`expand_middle`] |
//! | fill / extract high slots | [`fill_highs`] | [`extract_highs`] |
//! | P   | [`place`] | [`unplace`] |
//! | `k = 0` placement | [`append_one_tail`] | [`strip_one_tail`] |
//! | `k = L` placement | [`prepend_two_head`] | [`strip_two_head`] |
//!
//! Inverses recompute every recovery constant from the frequency data they
//! are given and reject inputs whose content or shift disagrees.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::fault::{tamper, FaultSite};
use crate::words::{p_max, p_one, Letter, Position, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{map}: {reason}")]
pub struct BijectionError {
    pub map: &'static str,
    pub reason: String,
}

pub type Result<T> = std::result::Result<T, BijectionError>;

fn reject<T>(map: &'static str, reason: impl Into<String>) -> Result<T> {
    Err(BijectionError {
        map,
        reason: reason.into(),
    })
}

fn require_alphabet(map: &'static str, w: &Word, allowed: &[Letter]) -> Result<()> {
    match w.letters().iter().find(|x| !allowed.contains(x)) {
        Some(bad) => reject(map, format!("letter {bad} of {w} not in {allowed:?}")),
        None => Ok(()),
    }
}

fn require_count(map: &'static str, w: &Word, letter: Letter, expected: usize) -> Result<()> {
    let got = w.count(letter);
    if got == expected {
        Ok(())
    } else {
        reject(map, format!("{w} has {got} copies of {letter}, expected {expected}"))
    }
}

/// A word whose weight is raised by `shift`: weight = `coinv + shift`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ShiftedWord {
    pub word: Word,
    pub shift: u64,
}

impl ShiftedWord {
    pub fn new(word: Word, shift: u64) -> Self {
        Self { word, shift }
    }

    pub fn weight(&self) -> u64 {
        self.word.coinv() + self.shift
    }
}

impl fmt::Display for ShiftedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.word)?;
        if self.shift > 0 {
            write!(f, "·q^{}", self.shift)?;
        }
        Ok(())
    }
}

/// An element of a shifted Cartesian product: weight = `coinv(left) + coinv(right) + shift`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ShiftedPair {
    pub left: Word,
    pub right: Word,
    pub shift: u64,
}

impl ShiftedPair {
    pub fn new(left: Word, right: Word, shift: u64) -> Self {
        Self { left, right, shift }
    }

    pub fn weight(&self) -> u64 {
        self.left.coinv() + self.right.coinv() + self.shift
    }
}

impl fmt::Display for ShiftedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift > 0 {
            write!(f, "q^{}·", self.shift)?;
        }
        write!(f, "({}, {})", self.left, self.right)
    }
}

/// Two-letter alphabet `low < high` for the F and G maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LetterPair {
    pub low: Letter,
    pub high: Letter,
}

pub const ZERO_THREE: LetterPair = LetterPair { low: 0, high: 3 };
pub const ONE_TWO: LetterPair = LetterPair { low: 1, high: 2 };

/// F: writes `w = low^s high w'` at the leftmost `high` and returns `w'`
/// shifted by `s * B`, where `B` is the number of highs in `w`.
pub fn split_first_high(w: &Word, pair: LetterPair) -> Result<ShiftedWord> {
    const MAP: &str = "split_first_high";
    require_alphabet(MAP, w, &[pair.low, pair.high])?;
    let highs = w.count(pair.high);
    let Some(s) = w.letters().iter().position(|&x| x == pair.high) else {
        return reject(MAP, format!("{w} contains no {}", pair.high));
    };
    let mut rest = Word::new(w.letters()[s + 1..].to_vec());
    tamper(FaultSite::SplitFirstHigh, &mut rest);
    Ok(ShiftedWord::new(rest, (s * highs) as u64))
}

/// F inverse on `R(low^(A+1-B-s) high^(B-1))` shifted by `s * B`: prepends
/// `low^s high`, with `s = A + 1 - B - #low(w')`.
pub fn join_first_high(sw: &ShiftedWord, a: usize, b: usize, pair: LetterPair) -> Result<Word> {
    const MAP: &str = "join_first_high";
    require_alphabet(MAP, &sw.word, &[pair.low, pair.high])?;
    if b == 0 || b > a + 1 {
        return reject(MAP, format!("need 1 <= B <= A+1, got A={a} B={b}"));
    }
    require_count(MAP, &sw.word, pair.high, b - 1)?;
    let lows = sw.word.count(pair.low);
    let Some(s) = (a + 1 - b).checked_sub(lows) else {
        return reject(
            MAP,
            format!(
                "{} has {lows} copies of {}, more than A+1-B={}",
                sw.word,
                pair.low,
                a + 1 - b
            ),
        );
    };
    if sw.shift != (s * b) as u64 {
        return reject(MAP, format!("shift {} disagrees with s*B = {}", sw.shift, s * b));
    }
    let mut out = Word::repeat(pair.low, s)
        .concat(&Word::repeat(pair.high, 1))
        .concat(&sw.word);
    tamper(FaultSite::JoinFirstHigh, &mut out);
    Ok(out)
}

/// G: writes `w = w' low high^s` at the rightmost `low` and returns `w'`
/// shifted by `s * B`, where `B` is the number of lows in `w`.
pub fn split_last_low(w: &Word, pair: LetterPair) -> Result<ShiftedWord> {
    const MAP: &str = "split_last_low";
    require_alphabet(MAP, w, &[pair.low, pair.high])?;
    let lows = w.count(pair.low);
    let Some(r) = w.letters().iter().rposition(|&x| x == pair.low) else {
        return reject(MAP, format!("{w} contains no {}", pair.low));
    };
    let s = w.len() - r - 1;
    let mut rest = Word::new(w.letters()[..r].to_vec());
    tamper(FaultSite::SplitLastLow, &mut rest);
    Ok(ShiftedWord::new(rest, (s * lows) as u64))
}

/// G inverse on `R(low^(B-1) high^(A+1-B-s))` shifted by `s * B`: appends
/// `low high^s`, with `s = A + 1 - B - #high(w')`.
pub fn join_last_low(sw: &ShiftedWord, a: usize, b: usize, pair: LetterPair) -> Result<Word> {
    const MAP: &str = "join_last_low";
    require_alphabet(MAP, &sw.word, &[pair.low, pair.high])?;
    if b == 0 || b > a + 1 {
        return reject(MAP, format!("need 1 <= B <= A+1, got A={a} B={b}"));
    }
    require_count(MAP, &sw.word, pair.low, b - 1)?;
    let highs = sw.word.count(pair.high);
    let Some(s) = (a + 1 - b).checked_sub(highs) else {
        return reject(
            MAP,
            format!(
                "{} has {highs} copies of {}, more than A+1-B={}",
                sw.word,
                pair.high,
                a + 1 - b
            ),
        );
    };
    if sw.shift != (s * b) as u64 {
        return reject(MAP, format!("shift {} disagrees with s*B = {}", sw.shift, s * b));
    }
    let mut out = sw
        .word
        .concat(&Word::repeat(pair.low, 1))
        .concat(&Word::repeat(pair.high, s));
    tamper(FaultSite::JoinLastLow, &mut out);
    Ok(out)
}

/// H: splits `v` over `{1,2,3}` into `y` (1 and 2 become 0) and `z` (3s erased).
pub fn separate_tops(v: &Word) -> Result<(Word, Word)> {
    require_alphabet("separate_tops", v, &[1, 2, 3])?;
    let mut y = v.map(|x| if x == 3 { 3 } else { 0 });
    let z = v.filter(|x| x != 3);
    tamper(FaultSite::SeparateTops, &mut y);
    Ok((y, z))
}

/// H inverse: refills the 0 slots of `y` with the letters of `z`, left to right.
pub fn merge_tops(y: &Word, z: &Word) -> Result<Word> {
    const MAP: &str = "merge_tops";
    require_alphabet(MAP, y, &[0, 3])?;
    require_alphabet(MAP, z, &[1, 2])?;
    require_count(MAP, y, 0, z.len())?;
    let mut out = fill_slots(y, 0, z);
    tamper(FaultSite::MergeTops, &mut out);
    Ok(out)
}

/// Replaces the occurrences of `slot` in `base`, left to right, by the letters of `fill`.
fn fill_slots(base: &Word, slot: Letter, fill: &Word) -> Word {
    let mut source = fill.letters().iter();
    let letters = base
        .letters()
        .iter()
        .map(|&x| {
            if x == slot {
                *source.next().expect("slot count checked")
            } else {
                x
            }
        })
        .collect();
    Word::new(letters)
}

/// K: the adjacent swap on letters 2 and 3.
pub fn swap_reverse(v: &Word) -> Result<Word> {
    require_alphabet("swap_reverse", v, &[1, 2, 3])?;
    Ok(swap_adjacent(v, 2))
}

/// Interchanges labels `l` and `l + 1`, then reverses the subword formed by
/// those two letters in place. Preserves coinv, exchanges the two frequencies,
/// and is its own inverse.
pub fn swap_adjacent(v: &Word, l: Letter) -> Word {
    let hi = l + 1;
    let mut swapped: Vec<Letter> = v
        .letters()
        .iter()
        .filter(|&&x| x == l || x == hi)
        .map(|&x| if x == l { hi } else { l })
        .collect();
    let mut letters = v.letters().to_vec();
    for x in letters.iter_mut().filter(|x| **x == l || **x == hi) {
        *x = swapped.pop().expect("same subword length");
    }
    let mut out = Word::new(letters);
    tamper(FaultSite::SwapReverse, &mut out);
    out
}

/// Maps `w` over `1..=top` to `(y, z)`: `y` relabels the middle letters
/// `2..top` as 2 and `top` as 3; `z` is `w` with its 1s and tops erased.
pub fn collapse_middle(w: &Word, top: Letter) -> Result<(Word, Word)> {
    const MAP: &str = "collapse_middle";
    if top < 3 {
        return reject(MAP, format!("top letter must be at least 3, got {top}"));
    }
    let alphabet: Vec<Letter> = (1..=top).collect();
    require_alphabet(MAP, w, &alphabet)?;
    let mut y = w.map(|x| match x {
        1 => 1,
        x if x == top => 3,
        _ => 2,
    });
    let z = w.filter(|x| x != 1 && x != top);
    tamper(FaultSite::CollapseMiddle, &mut y);
    Ok((y, z))
}

/// Inverse of [`collapse_middle`].
pub fn expand_middle(y: &Word, z: &Word, top: Letter) -> Result<Word> {
    const MAP: &str = "expand_middle";
    if top < 3 {
        return reject(MAP, format!("top letter must be at least 3, got {top}"));
    }
    require_alphabet(MAP, y, &[1, 2, 3])?;
    let middle: Vec<Letter> = (2..top).collect();
    require_alphabet(MAP, z, &middle)?;
    require_count(MAP, y, 2, z.len())?;
    let mut out = fill_slots(&y.map(|x| if x == 3 { top } else { x }), 2, z);
    tamper(FaultSite::ExpandMiddle, &mut out);
    Ok(out)
}

/// Maps `y` over `{0,3}` and `z` over letters `>= 2` to one word: 0 becomes 1
/// and the 3s are overwritten by `z`, left to right.
pub fn fill_highs(y: &Word, z: &Word) -> Result<Word> {
    const MAP: &str = "fill_highs";
    require_alphabet(MAP, y, &[0, 3])?;
    if let Some(bad) = z.letters().iter().find(|&&x| x < 2) {
        return reject(MAP, format!("letter {bad} of {z} is below 2"));
    }
    require_count(MAP, y, 3, z.len())?;
    let mut out = fill_slots(&y.map(|x| if x == 0 { 1 } else { x }), 3, z);
    tamper(FaultSite::FillHighs, &mut out);
    Ok(out)
}

/// Inverse of [`fill_highs`].
pub fn extract_highs(v: &Word) -> Result<(Word, Word)> {
    if let Some(bad) = v.letters().iter().find(|&&x| x < 1) {
        return reject("extract_highs", format!("letter {bad} of {v} is below 1"));
    }
    let mut y = v.map(|x| if x == 1 { 0 } else { 3 });
    let z = v.filter(|x| x >= 2);
    tamper(FaultSite::ExtractHighs, &mut y);
    Ok((y, z))
}

/// Inputs of the slot-placement map P, which builds words of
/// `R(1^(L-k) 2^(N-L) 3^k)` with `p_1 = i` and `p_3 = j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Placement {
    /// `i`
    pub one_pos: usize,
    /// `j`
    pub top_pos: usize,
    /// `k`
    pub tops: usize,
    /// `L`
    pub marked: usize,
    /// `N`
    pub len: usize,
    /// Word over `{0,3}` describing the slots right of the leftmost 3.
    pub y: Word,
    /// Word over `{1,2}` filling the slots left of the rightmost 1.
    pub z: Word,
}

impl Placement {
    /// `(j-1)k + (L-k)(i-1)`, the weight added by placement.
    pub fn shift(&self) -> u64 {
        placement_shift(self.one_pos, self.top_pos, self.tops, self.marked)
    }

    pub fn weight(&self) -> u64 {
        self.y.coinv() + self.z.coinv() + self.shift()
    }

    /// Checks the parameter ranges and the content of `y` and `z`, reporting
    /// the first violated constraint.
    pub fn validate(&self) -> Result<()> {
        const MAP: &str = "place";
        let &Placement {
            one_pos: i,
            top_pos: j,
            tops: k,
            marked: l,
            len: n,
            ..
        } = self;
        if !(0 < k && k < l) {
            return reject(MAP, format!("need 0 < k < L, got k={k} L={l}; use the boundary maps"));
        }
        if l > n {
            return reject(MAP, format!("need L <= N, got L={l} N={n}"));
        }
        if !(1 <= i && i <= n - l + 1) {
            return reject(MAP, format!("i={i} outside 1..={}", n - l + 1));
        }
        if !(1 <= j && j <= n - k + 1) {
            return reject(MAP, format!("j={j} outside 1..={}", n - k + 1));
        }
        require_alphabet(MAP, &self.y, &[0, 3])?;
        require_alphabet(MAP, &self.z, &[1, 2])?;
        require_count(MAP, &self.y, 3, k - 1)?;
        require_count(MAP, &self.y, 0, n - j + 1 - k)?;
        require_count(MAP, &self.z, 1, l - k - 1)?;
        require_count(MAP, &self.z, 2, n - l + 1 - i)?;
        Ok(())
    }
}

pub fn placement_shift(one_pos: usize, top_pos: usize, tops: usize, marked: usize) -> u64 {
    ((top_pos - 1) * tops + (marked - tops) * (one_pos - 1)) as u64
}

/// P: builds `w` slot by slot. A 3 goes in slot `j`; `y` is written into the
/// `N - j` slots to its right with 0 meaning "still empty"; the empty slots
/// are then visited right to left receiving `i - 1` twos and a single 1; the
/// rest are filled left to right from `z`.
pub fn place(input: &Placement) -> Result<Word> {
    input.validate()?;
    let &Placement {
        one_pos: i,
        top_pos: j,
        len: n,
        ..
    } = input;
    let mut slots: Vec<Option<Letter>> = vec![None; n];
    slots[j - 1] = Some(3);
    for (slot, &x) in slots[j..].iter_mut().zip(input.y.letters()) {
        if x == 3 {
            *slot = Some(3);
        }
    }
    let mut tail = std::iter::repeat_n(2, i - 1).chain(std::iter::once(1));
    for slot in slots.iter_mut().rev().filter(|s| s.is_none()) {
        match tail.next() {
            Some(x) => *slot = Some(x),
            None => break,
        }
    }
    let mut head = input.z.letters().iter();
    for slot in slots.iter_mut().filter(|s| s.is_none()) {
        *slot = Some(*head.next().expect("z length checked"));
    }
    let mut out = Word::new(slots.into_iter().map(|s| s.expect("every slot filled")).collect());
    tamper(FaultSite::Place, &mut out);
    Ok(out)
}

/// P inverse: reads `j = p_3(w)`, `i = p_1(w)`, `y` from the suffix right of
/// the leftmost 3 (1 and 2 become 0), and `z` from the 1s and 2s strictly left
/// of the rightmost 1.
pub fn unplace(w: &Word) -> Result<Placement> {
    const MAP: &str = "unplace";
    require_alphabet(MAP, w, &[1, 2, 3])?;
    let (Position::Finite(j), Position::Finite(i)) = (p_max(w, 3), p_one(w, 3)) else {
        return reject(MAP, format!("{w} needs at least one 1 and one 3"));
    };
    let tops = w.count(3);
    let marked = tops + w.count(1);
    let len = w.len();
    let mut y = Word::new(w.letters()[j..].to_vec()).map(|x| if x == 3 { 3 } else { 0 });
    let r1 = w.letters().iter().rposition(|&x| x == 1).expect("a 1 is present");
    let z = Word::new(w.letters()[..r1].to_vec()).filter(|x| x != 3);
    tamper(FaultSite::Unplace, &mut y);
    let placed = Placement {
        one_pos: i,
        top_pos: j,
        tops,
        marked,
        len,
        y,
        z,
    };
    placed.validate()?;
    Ok(placed)
}

/// `k = 0` placement: `z` in `R(1^(L-1) 2^(N-i-L+1))` maps to `z 1 2^(i-1)`,
/// which has `p_1 = i` and weight `coinv(z) + L(i-1)`.
pub fn append_one_tail(one_pos: usize, marked: usize, len: usize, z: &Word) -> Result<Word> {
    const MAP: &str = "append_one_tail";
    if marked == 0 || marked > len {
        return reject(MAP, format!("need 0 < L <= N, got L={marked} N={len}"));
    }
    if !(1 <= one_pos && one_pos <= len - marked + 1) {
        return reject(MAP, format!("i={one_pos} outside 1..={}", len - marked + 1));
    }
    require_alphabet(MAP, z, &[1, 2])?;
    require_count(MAP, z, 1, marked - 1)?;
    require_count(MAP, z, 2, len - one_pos + 1 - marked)?;
    let mut out = z.concat(&Word::repeat(1, 1)).concat(&Word::repeat(2, one_pos - 1));
    tamper(FaultSite::AppendOneTail, &mut out);
    Ok(out)
}

/// Inverse of [`append_one_tail`]: returns `(i, z)`; the shift is `L(i-1)`.
pub fn strip_one_tail(w: &Word) -> Result<(usize, Word)> {
    const MAP: &str = "strip_one_tail";
    require_alphabet(MAP, w, &[1, 2])?;
    let Some(r) = w.letters().iter().rposition(|&x| x == 1) else {
        return reject(MAP, format!("{w} contains no 1"));
    };
    let mut z = Word::new(w.letters()[..r].to_vec());
    tamper(FaultSite::StripOneTail, &mut z);
    Ok((w.len() - r, z))
}

/// `k = L` placement: `y` in `R(2^(N-L-j+1) 3^(L-1))` maps to `2^(j-1) 3 y`,
/// which has `p_3 = j` and weight `coinv(y) + L(j-1)`.
pub fn prepend_two_head(top_pos: usize, marked: usize, len: usize, y: &Word) -> Result<Word> {
    const MAP: &str = "prepend_two_head";
    if marked == 0 || marked > len {
        return reject(MAP, format!("need 0 < L <= N, got L={marked} N={len}"));
    }
    if !(1 <= top_pos && top_pos <= len - marked + 1) {
        return reject(MAP, format!("j={top_pos} outside 1..={}", len - marked + 1));
    }
    require_alphabet(MAP, y, &[2, 3])?;
    require_count(MAP, y, 3, marked - 1)?;
    require_count(MAP, y, 2, len - top_pos + 1 - marked)?;
    let mut out = Word::repeat(2, top_pos - 1).concat(&Word::repeat(3, 1)).concat(y);
    tamper(FaultSite::PrependTwoHead, &mut out);
    Ok(out)
}

/// Inverse of [`prepend_two_head`]: returns `(j, y)`; the shift is `L(j-1)`.
pub fn strip_two_head(w: &Word) -> Result<(usize, Word)> {
    const MAP: &str = "strip_two_head";
    require_alphabet(MAP, w, &[2, 3])?;
    let Some(first) = w.letters().iter().position(|&x| x == 3) else {
        return reject(MAP, format!("{w} contains no 3"));
    };
    let mut y = Word::new(w.letters()[first + 1..].to_vec());
    tamper(FaultSite::StripTwoHead, &mut y);
    Ok((first + 1, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{enumerate, Freqs};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn class(pairs: &[(Letter, usize)]) -> Vec<Word> {
        enumerate(&Freqs::from_pairs(pairs)).unwrap()
    }

    #[test]
    fn first_high_example() {
        // A=9, B=4, s=1
        let sw = split_first_high(&w("0330003030"), ZERO_THREE).unwrap();
        assert_eq!(sw, ShiftedWord::new(w("30003030"), 4));
        assert_eq!(join_first_high(&sw, 9, 4, ZERO_THREE).unwrap(), w("0330003030"));
        assert_eq!(
            split_first_high(&w("3003"), ZERO_THREE).unwrap(),
            ShiftedWord::new(w("003"), 0)
        );
    }

    #[test]
    fn first_high_errors() {
        assert!(split_first_high(&w("000"), ZERO_THREE).is_err());
        assert!(split_first_high(&w("013"), ZERO_THREE).is_err());
        // Too many zeros for A=2, B=2.
        assert!(join_first_high(&ShiftedWord::new(w("0003"), 0), 2, 2, ZERO_THREE).is_err());
        // Shift inconsistent with the recovered s.
        assert!(join_first_high(&ShiftedWord::new(w("03"), 5), 3, 2, ZERO_THREE).is_err());
    }

    #[test]
    fn first_high_roundtrip_and_weight() {
        for word in class(&[(0, 2), (3, 2)]) {
            let sw = split_first_high(&word, ZERO_THREE).unwrap();
            assert_eq!(sw.weight(), word.coinv());
            assert_eq!(join_first_high(&sw, 3, 2, ZERO_THREE).unwrap(), word);
        }
    }

    #[test]
    fn last_low_example() {
        let sw = split_last_low(&w("211222"), ONE_TWO).unwrap();
        assert_eq!(sw, ShiftedWord::new(w("21"), 6));
        assert_eq!(join_last_low(&sw, 5, 2, ONE_TWO).unwrap(), w("211222"));
        assert_eq!(
            split_last_low(&w("221"), ONE_TWO).unwrap(),
            ShiftedWord::new(w("22"), 0)
        );
        assert!(split_last_low(&w("222"), ONE_TWO).is_err());
    }

    #[test]
    fn last_low_roundtrip_and_weight() {
        for word in class(&[(1, 2), (2, 2)]) {
            let sw = split_last_low(&word, ONE_TWO).unwrap();
            assert_eq!(sw.weight(), word.coinv());
            assert_eq!(join_last_low(&sw, 3, 2, ONE_TWO).unwrap(), word);
        }
    }

    #[test]
    fn tops_examples() {
        assert_eq!(separate_tops(&w("231132")).unwrap(), (w("030030"), w("2112")));
        assert_eq!(merge_tops(&w("303000"), &w("1212")).unwrap(), w("313212"));
        assert_eq!(separate_tops(&w("333")).unwrap(), (w("333"), Word::empty()));
        assert!(merge_tops(&w("3030"), &w("1")).is_err());
    }

    #[test]
    fn swap_reverse_examples() {
        assert_eq!(swap_reverse(&w("2311323331")).unwrap(), w("2211232231"));
        assert_eq!(swap_reverse(&w("111")).unwrap(), w("111"));
        for word in class(&[(1, 1), (2, 1), (3, 1)]) {
            let once = swap_reverse(&word).unwrap();
            assert_eq!(once.coinv(), word.coinv());
            assert_eq!(swap_reverse(&once).unwrap(), word);
        }
    }

    #[test]
    fn swap_adjacent_examples() {
        let out = swap_adjacent(&w("1221"), 1);
        assert_eq!(out, w("2112"));
        assert_eq!(out.coinv(), 2);
        assert_eq!(w("1221").coinv(), 2);
        assert_eq!(swap_adjacent(&w("2311323331"), 2), w("2211232231"));
        assert_eq!(swap_adjacent(&w("4455"), 1), w("4455"));
    }

    #[test]
    fn collapse_example() {
        let (y, z) = collapse_middle(&w("3112443214243"), 4).unwrap();
        assert_eq!((y.clone(), z.clone()), (w("2112332213232"), w("323223")));
        assert_eq!((y.coinv(), z.coinv()), (35, 4));
        assert_eq!(expand_middle(&y, &z, 4).unwrap(), w("3112443214243"));
        assert_eq!(collapse_middle(&w("123"), 3).unwrap(), (w("123"), w("2")));
    }

    #[test]
    fn fill_highs_example() {
        let y = w("3030003003033");
        let z = w("323223");
        let v = fill_highs(&y, &z).unwrap();
        assert_eq!(v, w("3121113112123"));
        assert_eq!((v.coinv(), y.coinv(), z.coinv()), (29, 25, 4));
        assert_eq!(extract_highs(&v).unwrap(), (y, z));
        assert_eq!(fill_highs(&w("000"), &Word::empty()).unwrap(), w("111"));
        assert!(fill_highs(&w("33"), &w("2")).is_err());
    }

    #[test]
    fn placement_example() {
        let input = Placement {
            one_pos: 5,
            top_pos: 3,
            tops: 4,
            marked: 6,
            len: 13,
            y: w("0030003030"),
            z: w("2122"),
        };
        let out = place(&input).unwrap();
        assert_eq!(out, w("2132231223232"));
        assert_eq!(out.coinv(), 31);
        assert_eq!((input.y.coinv(), input.z.coinv(), input.shift()), (13, 2, 16));
        assert_eq!(unplace(&out).unwrap(), input);
    }

    #[test]
    fn placement_rejects_boundaries() {
        let mut input = Placement {
            one_pos: 1,
            top_pos: 1,
            tops: 0,
            marked: 2,
            len: 3,
            y: Word::empty(),
            z: w("1"),
        };
        assert!(place(&input).is_err());
        input.tops = 2;
        assert!(place(&input).is_err());
        assert!(unplace(&w("1122")).is_err());
        assert!(unplace(&w("2332")).is_err());
    }

    #[test]
    fn placement_roundtrip_small() {
        // N=5, L=3, k=1: y in R(0^(5-j) 3^0), z in R(1^1 2^(3-i)).
        for i in 1..=3 {
            for j in 1..=5 {
                let y = Word::repeat(0, 5 - j);
                for z in class(&[(1, 1), (2, 3 - i)]) {
                    let input = Placement {
                        one_pos: i,
                        top_pos: j,
                        tops: 1,
                        marked: 3,
                        len: 5,
                        y: y.clone(),
                        z,
                    };
                    let out = place(&input).unwrap();
                    assert_eq!(p_one(&out, 3), Position::Finite(i));
                    assert_eq!(p_max(&out, 3), Position::Finite(j));
                    assert_eq!(out.coinv(), input.weight());
                    assert_eq!(unplace(&out).unwrap(), input);
                }
            }
        }
    }

    #[test]
    fn boundary_placements() {
        let out = append_one_tail(2, 2, 4, &w("21")).unwrap();
        assert_eq!(out, w("2112"));
        assert_eq!(p_one(&out, 3), Position::Finite(2));
        assert_eq!(out.coinv(), w("21").coinv() + 2);
        assert_eq!(strip_one_tail(&out).unwrap(), (2, w("21")));
        assert_eq!(append_one_tail(1, 2, 3, &w("21")).unwrap(), w("211"));
        assert!(append_one_tail(2, 2, 4, &w("12")).is_ok());
        assert!(append_one_tail(2, 2, 4, &w("11")).is_err());

        let out = prepend_two_head(2, 2, 4, &w("32")).unwrap();
        assert_eq!(out, w("2332"));
        assert_eq!(p_max(&out, 3), Position::Finite(2));
        assert_eq!(out.coinv(), w("32").coinv() + 2);
        assert_eq!(strip_two_head(&out).unwrap(), (2, w("32")));
        assert_eq!(prepend_two_head(1, 1, 2, &w("2")).unwrap(), w("32"));
        assert!(strip_two_head(&w("222")).is_err());
    }
}
