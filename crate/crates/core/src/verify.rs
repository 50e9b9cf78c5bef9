// SPDX-License-Identifier: Apache-2.0

//! Brute-force oracle and verification engine.
//!
//! [`check_identity`] compares a generating function obtained by exhaustive
//! enumeration against a closed form built from [`crate::qpoly`].
//! [`check_bijection`] runs a bijection over its whole domain and checks
//! codomain membership, the roundtrip, the weight law and surjectivity.
//! [`sweep`] does both over every parameter tuple within some bounds.

use std::collections::HashSet;
use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bijections::{
    append_one_tail, collapse_middle, expand_middle, extract_highs, fill_highs, join_first_high, join_last_low,
    merge_tops, place, placement_shift, prepend_two_head, separate_tops, split_first_high, split_last_low,
    strip_one_tail, strip_two_head, swap_adjacent, swap_reverse, unplace, Placement, ShiftedPair, ShiftedWord, ONE_TWO,
    ZERO_THREE,
};
use crate::pipelines::{
    composed_shift, composed_shift_inv, general_forward, general_inverse, greater_at_one_pos, greater_at_one_pos_inv,
    greater_to_pair, greater_to_pair_inv, lesseq_at_top_pos, lesseq_at_top_pos_inv, lesseq_to_pair, lesseq_to_pair_inv,
    simplified_shift_inv_with, simplified_shift_with, Route, Shape,
};
use crate::qpoly::{q_binomial, q_multinomial, QPoly, QPolyError};
use crate::trace::Tracer;
use crate::words::{
    check_cap, classify, enumerate_with_cap, gf_with_cap, p_max, p_one, slot_of, Class, Freqs, Letter, Params,
    Position, Which, Word, WordsError, DEFAULT_ENUMERATION_CAP,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("invalid parameters for {id}: {reason}")]
    Params { id: String, reason: String },
    #[error(transparent)]
    Words(#[from] WordsError),
    #[error(transparent)]
    Poly(#[from] QPolyError),
    #[error("unknown identifier {0:?}")]
    Unknown(String),
}

pub type Result<T> = std::result::Result<T, VerifyError>;

/// The generating-function identities the engine knows how to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IdentityId {
    /// The class GF is a q-multinomial.
    #[serde(rename = "EQ1")]
    ClassGf,
    /// `R(0^(A+1-B) 3^B)` as a sum over the position of the first 3.
    #[serde(rename = "PROP_FG_SUM")]
    PrefixSum,
    /// Three-letter GF as a product of two q-binomials.
    #[serde(rename = "PROP_H_FACTOR")]
    FactorThree,
    /// Swapping the counts of 2 and 3 keeps the GF.
    #[serde(rename = "PROP_K_SYM")]
    SwapSymmetry,
    /// Reversing the count vector keeps the GF.
    #[serde(rename = "MULTINOM_SYM")]
    MultinomialSymmetry,
    /// Three-letter words with `p_1 = i` and `p_3 = j`, `0 < k < L`.
    #[serde(rename = "T2A")]
    FixedBoth,
    /// Three-letter words with `p_1 = i` and no 3.
    #[serde(rename = "T2B")]
    FixedOneNoTops,
    /// Three-letter words with `p_3 = j` and no 1.
    #[serde(rename = "T2C")]
    FixedTopAllTops,
    #[serde(rename = "E91P")]
    ShadowGreater,
    #[serde(rename = "E92P")]
    ShadowLessEq,
    #[serde(rename = "E93P")]
    ShadowGreaterAtOne,
    #[serde(rename = "E94P")]
    ShadowLessEqAtTop,
    #[serde(rename = "E91")]
    Greater,
    #[serde(rename = "E92")]
    LessEq,
    #[serde(rename = "E93")]
    GreaterAtOne,
    #[serde(rename = "E94")]
    LessEqAtTop,
    /// `GF(W_k^>) = q^k GF(W_(k+1)^<=)`.
    #[serde(rename = "TRUE_GOAL")]
    ShiftIdentity,
}

impl IdentityId {
    pub const ALL: [IdentityId; 17] = [
        IdentityId::ClassGf,
        IdentityId::PrefixSum,
        IdentityId::FactorThree,
        IdentityId::SwapSymmetry,
        IdentityId::MultinomialSymmetry,
        IdentityId::FixedBoth,
        IdentityId::FixedOneNoTops,
        IdentityId::FixedTopAllTops,
        IdentityId::ShadowGreater,
        IdentityId::ShadowLessEq,
        IdentityId::ShadowGreaterAtOne,
        IdentityId::ShadowLessEqAtTop,
        IdentityId::Greater,
        IdentityId::LessEq,
        IdentityId::GreaterAtOne,
        IdentityId::LessEqAtTop,
        IdentityId::ShiftIdentity,
    ];

    pub fn token(self) -> &'static str {
        match self {
            IdentityId::ClassGf => "EQ1",
            IdentityId::PrefixSum => "PROP_FG_SUM",
            IdentityId::FactorThree => "PROP_H_FACTOR",
            IdentityId::SwapSymmetry => "PROP_K_SYM",
            IdentityId::MultinomialSymmetry => "MULTINOM_SYM",
            IdentityId::FixedBoth => "T2A",
            IdentityId::FixedOneNoTops => "T2B",
            IdentityId::FixedTopAllTops => "T2C",
            IdentityId::ShadowGreater => "E91P",
            IdentityId::ShadowLessEq => "E92P",
            IdentityId::ShadowGreaterAtOne => "E93P",
            IdentityId::ShadowLessEqAtTop => "E94P",
            IdentityId::Greater => "E91",
            IdentityId::LessEq => "E92",
            IdentityId::GreaterAtOne => "E93",
            IdentityId::LessEqAtTop => "E94",
            IdentityId::ShiftIdentity => "TRUE_GOAL",
        }
    }

    fn three_letter_only(self) -> bool {
        matches!(
            self,
            IdentityId::FixedBoth
                | IdentityId::FixedOneNoTops
                | IdentityId::FixedTopAllTops
                | IdentityId::ShadowGreater
                | IdentityId::ShadowLessEq
                | IdentityId::ShadowGreaterAtOne
                | IdentityId::ShadowLessEqAtTop
                | IdentityId::PrefixSum
                | IdentityId::FactorThree
                | IdentityId::SwapSymmetry
        )
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for IdentityId {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.token().eq_ignore_ascii_case(s))
            .ok_or_else(|| VerifyError::Unknown(s.to_string()))
    }
}

/// The bijections [`check_bijection`] can exercise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BijectionId {
    SplitFirstHigh,
    SplitLastLow,
    SeparateTops,
    SwapReverse,
    SwapAdjacent(Letter),
    CollapseMiddle,
    FillHighs,
    Place,
    AppendOneTail,
    PrependTwoHead,
    GreaterAtOnePos,
    LessEqAtTopPos,
    GreaterToPair,
    LessEqToPair,
    General(Route),
    SimplifiedShift,
    ComposedShift,
}

impl BijectionId {
    /// Every id except [`BijectionId::SwapAdjacent`], which takes a letter.
    pub const FIXED: [BijectionId; 19] = [
        BijectionId::SplitFirstHigh,
        BijectionId::SplitLastLow,
        BijectionId::SeparateTops,
        BijectionId::SwapReverse,
        BijectionId::CollapseMiddle,
        BijectionId::FillHighs,
        BijectionId::Place,
        BijectionId::AppendOneTail,
        BijectionId::PrependTwoHead,
        BijectionId::GreaterAtOnePos,
        BijectionId::LessEqAtTopPos,
        BijectionId::GreaterToPair,
        BijectionId::LessEqToPair,
        BijectionId::General(Route::Greater),
        BijectionId::General(Route::LessEq),
        BijectionId::General(Route::GreaterAtOnePos),
        BijectionId::General(Route::LessEqAtTopPos),
        BijectionId::SimplifiedShift,
        BijectionId::ComposedShift,
    ];

    fn name(self) -> &'static str {
        match self {
            BijectionId::SplitFirstHigh => "split_first_high",
            BijectionId::SplitLastLow => "split_last_low",
            BijectionId::SeparateTops => "separate_tops",
            BijectionId::SwapReverse => "swap_reverse",
            BijectionId::SwapAdjacent(_) => "swap_adjacent",
            BijectionId::CollapseMiddle => "collapse_middle",
            BijectionId::FillHighs => "fill_highs",
            BijectionId::Place => "place",
            BijectionId::AppendOneTail => "append_one_tail",
            BijectionId::PrependTwoHead => "prepend_two_head",
            BijectionId::GreaterAtOnePos => "greater_at_one_pos",
            BijectionId::LessEqAtTopPos => "lesseq_at_top_pos",
            BijectionId::GreaterToPair => "greater_to_pair",
            BijectionId::LessEqToPair => "lesseq_to_pair",
            BijectionId::General(Route::Greater) => "general_greater",
            BijectionId::General(Route::LessEq) => "general_lesseq",
            BijectionId::General(Route::GreaterAtOnePos) => "general_greater_at_one_pos",
            BijectionId::General(Route::LessEqAtTopPos) => "general_lesseq_at_top_pos",
            BijectionId::SimplifiedShift => "simplified_shift",
            BijectionId::ComposedShift => "composed_shift",
        }
    }
}

impl fmt::Display for BijectionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BijectionId::SwapAdjacent(l) => write!(f, "swap_adjacent@{l}"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for BijectionId {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || VerifyError::Unknown(s.to_string());
        if let Some(rest) = s.strip_prefix("swap_adjacent@") {
            return rest.parse().map(BijectionId::SwapAdjacent).map_err(|_| unknown());
        }
        BijectionId::FIXED
            .into_iter()
            .filter(|id| !matches!(id, BijectionId::SwapAdjacent(_)))
            .find(|id| id.name() == s)
            .ok_or_else(unknown)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One offending input of a bijection or per-word check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub word: String,
    pub expected: String,
    pub actual: String,
}

const MAX_COUNTEREXAMPLES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub identity: String,
    pub params: Params,
    pub lhs: QPoly,
    pub rhs: QPoly,
    pub verdict: Verdict,
    pub counterexamples: Vec<Counterexample>,
    /// Number of domain elements examined.
    pub checked: u64,
    pub elapsed_us: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    fn build(
        identity: String,
        params: &Params,
        lhs: QPoly,
        rhs: QPoly,
        cx: Vec<Counterexample>,
        checked: u64,
        start: Instant,
    ) -> Self {
        let verdict = if lhs == rhs && cx.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            identity,
            params: params.clone(),
            lhs,
            rhs,
            verdict,
            counterexamples: cx,
            checked,
            elapsed_us: start.elapsed().as_micros() as u64,
            error: None,
        }
    }

    fn failed(identity: String, params: &Params, error: String, start: Instant) -> Self {
        Self {
            identity,
            params: params.clone(),
            lhs: QPoly::zero(),
            rhs: QPoly::zero(),
            verdict: Verdict::Fail,
            counterexamples: Vec::new(),
            checked: 0,
            elapsed_us: start.elapsed().as_micros() as u64,
            error: Some(error),
        }
    }

    /// JSON with the timing field zeroed, for byte-level comparisons.
    pub fn to_canonical_json(&self) -> String {
        let mut copy = self.clone();
        copy.elapsed_us = 0;
        serde_json::to_string(&copy).expect("reports always serialize")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        let verdict = if self.passed() { "pass" } else { "FAIL" };
        write!(
            f,
            "{verdict} {} n={} N={} L={} k={}",
            self.identity, p.top, p.len, p.marked, p.tops
        )?;
        if let Some(i) = p.one_pos {
            write!(f, " i={i}")?;
        }
        if let Some(j) = p.top_pos {
            write!(f, " j={j}")?;
        }
        if p.top > 3 {
            let a: Vec<String> = p.middle.iter().map(|x| x.to_string()).collect();
            write!(f, " a={}", a.join(","))?;
        }
        if let Some(err) = &self.error {
            write!(f, " error: {err}")?;
        } else if self.lhs != self.rhs {
            write!(f, " lhs={} rhs={}", self.lhs, self.rhs)?;
        }
        for cx in &self.counterexamples {
            write!(f, "\n  {}: expected {}, got {}", cx.word, cx.expected, cx.actual)?;
        }
        Ok(())
    }
}

fn bad_params<T>(id: impl fmt::Display, reason: impl Into<String>) -> Result<T> {
    Err(VerifyError::Params {
        id: id.to_string(),
        reason: reason.into(),
    })
}

/// Frequencies from signed counts; `None` when some count is negative.
fn signed_freqs(counts: &[i64]) -> Option<Freqs> {
    counts
        .iter()
        .map(|&c| usize::try_from(c).ok())
        .collect::<Option<Vec<_>>>()
        .map(Freqs::new)
}

fn qbin(n: i64, k: i64) -> Result<QPoly> {
    Ok(q_binomial(n, k)?)
}

fn qmulti(n: i64, parts: &[i64]) -> Result<QPoly> {
    Ok(q_multinomial(n, parts)?)
}

fn mul(a: &QPoly, b: &QPoly) -> Result<QPoly> {
    Ok(a.checked_mul(b)?)
}

fn gf_class(counts: &[i64], cap: u128, pred: impl Fn(&Word) -> bool) -> Result<QPoly> {
    match signed_freqs(counts) {
        Some(f) => Ok(gf_with_cap(&f, cap, pred)?),
        None => Ok(QPoly::zero()),
    }
}

/// `check_identity` with the default enumeration cap.
pub fn check_identity(id: IdentityId, p: &Params) -> Result<Report> {
    check_identity_with_cap(id, p, DEFAULT_ENUMERATION_CAP)
}

pub fn check_identity_with_cap(id: IdentityId, p: &Params, cap: u128) -> Result<Report> {
    let start = Instant::now();
    p.validate()?;
    if id.three_letter_only() && p.top != 3 {
        return bad_params(id, "defined for words over {1,2,3} only");
    }
    let need_i = || p.one_pos.map_or_else(|| bad_params(id, "needs i"), |i| Ok(i as i64));
    let need_j = || p.top_pos.map_or_else(|| bad_params(id, "needs j"), |j| Ok(j as i64));
    let top = p.top;
    let (n, l, k) = (p.len as i64, p.marked as i64, p.tops as i64);
    let class: Vec<i64> = p.class_freqs().counts().iter().map(|&c| c as i64).collect();
    let shadow = [0, l - k, n - l, k];
    let marked_and_middle: Vec<i64> = std::iter::once(l).chain(p.middle.iter().map(|&a| a as i64)).collect();
    let middle: Vec<i64> = p.middle.iter().map(|&a| a as i64).collect();
    let mut cx = Vec::new();
    let mut checked = 0u64;

    let (lhs, rhs) = match id {
        IdentityId::ClassGf => (gf_class(&class, cap, |_| true)?, qmulti(n, &class[1..])?),
        IdentityId::PrefixSum => {
            let (a, b) = (n - 1, l);
            let lhs = gf_class(&[a + 1 - b, 0, 0, b], cap, |_| true)?;
            let mut rhs = QPoly::zero();
            for s in 0..=(a + 1 - b) {
                rhs = rhs.checked_add(&qbin(a - s, b - 1)?.shift((s * b) as usize))?;
            }
            (lhs, rhs)
        }
        IdentityId::FactorThree => {
            let (a, b, c) = (l - k, n - l, k);
            (
                gf_class(&shadow, cap, |_| true)?,
                mul(&qbin(a + b + c, c)?, &qbin(a + b, b)?)?,
            )
        }
        IdentityId::SwapSymmetry => {
            let (a, b, c) = (l - k, n - l, k);
            (gf_class(&[0, a, c, b], cap, |_| true)?, qmulti(n, &[a, b, c])?)
        }
        IdentityId::MultinomialSymmetry => {
            let mut reversed = class.clone();
            reversed[1..].reverse();
            (gf_class(&reversed, cap, |_| true)?, qmulti(n, &class[1..])?)
        }
        IdentityId::FixedBoth => {
            if !(0 < k && k < l) {
                return bad_params(id, "needs 0 < k < L");
            }
            let (i, j) = (need_i()?, need_j()?);
            let (iu, ju) = (i as usize, j as usize);
            let freqs = signed_freqs(&shadow).expect("validated");
            let mut lhs = QPoly::zero();
            let criterion = i + j + k <= n + 1;
            for w in enumerate_with_cap(&freqs, cap)? {
                if p_one(&w, 3) != Position::Finite(iu) || p_max(&w, 3) != Position::Finite(ju) {
                    continue;
                }
                checked += 1;
                lhs.add_monomial(w.coinv() as usize)?;
                let before = slot_of(&w, Which::Leftmost, 3) < slot_of(&w, Which::Rightmost, 1);
                if before != criterion && cx.len() < MAX_COUNTEREXAMPLES {
                    cx.push(Counterexample {
                        word: w.to_string(),
                        expected: format!("leftmost 3 before rightmost 1 = {criterion}"),
                        actual: before.to_string(),
                    });
                }
            }
            let shift = placement_shift(iu, ju, p.tops, p.marked) as usize;
            (
                lhs,
                mul(&qbin(n - j, k - 1)?, &qbin(n - i - k, l - k - 1)?)?.shift(shift),
            )
        }
        IdentityId::FixedOneNoTops => {
            if k != 0 {
                return bad_params(id, "needs k = 0");
            }
            let i = need_i()?;
            let lhs = gf_class(&shadow, cap, |w| p_one(w, 3) == Position::Finite(i as usize))?;
            (lhs, qbin(n - i, l - 1)?.shift((l * (i - 1)) as usize))
        }
        IdentityId::FixedTopAllTops => {
            if k != l {
                return bad_params(id, "needs k = L");
            }
            let j = need_j()?;
            let lhs = gf_class(&shadow, cap, |w| p_max(w, 3) == Position::Finite(j as usize))?;
            (lhs, qbin(n - j, l - 1)?.shift(((j - 1) * l) as usize))
        }
        IdentityId::ShadowGreater | IdentityId::Greater => {
            let lhs = gf_class(&class, cap, |w| classify(w, top) == Class::Greater)?;
            (
                lhs,
                mul(&qmulti(n, &marked_and_middle)?, &qbin(l - 1, k)?)?.shift(k as usize),
            )
        }
        IdentityId::ShadowLessEq | IdentityId::LessEq => {
            let lhs = gf_class(&class, cap, |w| classify(w, top) == Class::LessEq)?;
            (lhs, mul(&qmulti(n, &marked_and_middle)?, &qbin(l - 1, k - 1)?)?)
        }
        IdentityId::ShadowGreaterAtOne | IdentityId::GreaterAtOne => {
            let i = need_i()?;
            let lhs = gf_class(&class, cap, |w| {
                classify(w, top) == Class::Greater && p_one(w, top) == Position::Finite(i as usize)
            })?;
            let core = qmulti(n - i, &[l - k - 1, n - l - i + 1, k])?;
            let rhs = mul(&core, &qmulti(n - l, &middle)?)?.shift((k + (i - 1) * l) as usize);
            (lhs, rhs)
        }
        IdentityId::ShadowLessEqAtTop | IdentityId::LessEqAtTop => {
            let j = need_j()?;
            let lhs = gf_class(&class, cap, |w| {
                classify(w, top) == Class::LessEq && p_max(w, top) == Position::Finite(j as usize)
            })?;
            let core = qmulti(n - j, &[l - k, n - l - j + 1, k - 1])?;
            let rhs = mul(&core, &qmulti(n - l, &middle)?)?.shift(((j - 1) * l) as usize);
            (lhs, rhs)
        }
        IdentityId::ShiftIdentity => {
            if k >= l {
                return bad_params(id, "needs k < L");
            }
            let next = p.with_tops(p.tops + 1);
            let next_class: Vec<i64> = next.class_freqs().counts().iter().map(|&c| c as i64).collect();
            let lhs = gf_class(&class, cap, |w| classify(w, top) == Class::Greater)?;
            let rhs = gf_class(&next_class, cap, |w| classify(w, top) == Class::LessEq)?.shift(p.tops);
            (lhs, rhs)
        }
    };
    Ok(Report::build(id.to_string(), p, lhs, rhs, cx, checked, start))
}

/// An element of a weighted set: a tuple of words plus an explicit shift.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Elem {
    parts: Vec<Word>,
    shift: u64,
}

impl Elem {
    fn one(w: Word, shift: u64) -> Self {
        Self { parts: vec![w], shift }
    }

    fn two(a: Word, b: Word, shift: u64) -> Self {
        Self {
            parts: vec![a, b],
            shift,
        }
    }

    fn weight(&self) -> u64 {
        self.shift + self.parts.iter().map(Word::coinv).sum::<u64>()
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|w| if w.is_empty() { "ε".into() } else { w.to_string() })
            .collect();
        if parts.len() == 1 {
            write!(f, "{}", parts[0])?;
        } else {
            write!(f, "({})", parts.join(", "))?;
        }
        if self.shift > 0 {
            write!(f, "·q^{}", self.shift)?;
        }
        Ok(())
    }
}

/// Restriction applied to the first component of a block.
#[derive(Debug, Clone, Copy, Default)]
struct Filter {
    top: Letter,
    class: Option<Class>,
    one_pos: Option<usize>,
    top_pos: Option<usize>,
}

impl Filter {
    fn accepts(&self, w: &Word) -> bool {
        self.class.is_none_or(|c| classify(w, self.top) == c)
            && self.one_pos.is_none_or(|i| p_one(w, self.top) == Position::Finite(i))
            && self.top_pos.is_none_or(|j| p_max(w, self.top) == Position::Finite(j))
    }
}

/// `q^shift` times a product of rearrangement classes.
#[derive(Debug, Clone)]
struct Block {
    shift: u64,
    factors: Vec<Freqs>,
    filter: Filter,
}

/// A disjoint union of blocks.
#[derive(Debug, Clone, Default)]
struct Space {
    blocks: Vec<Block>,
}

impl Space {
    fn block(shift: u64, factors: &[&[i64]], filter: Filter) -> Self {
        let mut space = Space::default();
        space.push(shift, factors, filter);
        space
    }

    /// Adds a block; blocks with a negative count are empty and skipped.
    fn push(&mut self, shift: u64, factors: &[&[i64]], filter: Filter) {
        if let Some(factors) = factors.iter().map(|c| signed_freqs(c)).collect::<Option<Vec<_>>>() {
            self.blocks.push(Block { shift, factors, filter });
        }
    }

    fn contains(&self, e: &Elem) -> bool {
        self.blocks.iter().any(|b| {
            b.shift == e.shift
                && b.factors.len() == e.parts.len()
                && b.factors.iter().zip(&e.parts).all(|(f, w)| f.contains(w))
                && b.filter.accepts(&e.parts[0])
        })
    }

    fn elements(&self, cap: u128) -> Result<Vec<Elem>> {
        let mut total: u128 = 0;
        for b in &self.blocks {
            let size = b
                .factors
                .iter()
                .try_fold(1u128, |acc, f| f.class_size().and_then(|s| acc.checked_mul(s)));
            total = total.saturating_add(size.unwrap_or(u128::MAX));
        }
        if total > cap {
            return Err(WordsError::CapExceeded { count: total, cap }.into());
        }
        let mut out = Vec::new();
        for b in &self.blocks {
            let mut partial: Vec<Vec<Word>> = vec![Vec::new()];
            for (idx, f) in b.factors.iter().enumerate() {
                check_cap(f, cap)?;
                let words: Vec<Word> = enumerate_with_cap(f, cap)?
                    .into_iter()
                    .filter(|w| idx != 0 || b.filter.accepts(w))
                    .collect();
                partial = partial
                    .into_iter()
                    .flat_map(|prefix| {
                        words.iter().map(move |w| {
                            let mut next = prefix.clone();
                            next.push(w.clone());
                            next
                        })
                    })
                    .collect();
            }
            out.extend(partial.into_iter().map(|parts| Elem { parts, shift: b.shift }));
        }
        Ok(out)
    }
}

type Map = Box<dyn Fn(&Elem) -> std::result::Result<Elem, String>>;

struct Setup {
    domain: Space,
    codomain: Space,
    forward: Map,
    inverse: Map,
}

fn err_string(e: impl fmt::Display) -> String {
    e.to_string()
}

fn first(e: &Elem) -> &Word {
    &e.parts[0]
}

fn at(e: &Elem, idx: usize) -> std::result::Result<&Word, String> {
    e.parts.get(idx).ok_or_else(|| format!("missing component {idx}"))
}

fn build_setup(id: BijectionId, p: &Params) -> Result<Setup> {
    let top = p.top;
    let (n, l, k) = (p.len as i64, p.marked as i64, p.tops as i64);
    let (nu, lu, ku) = (p.len, p.marked, p.tops);
    let shape = Shape::of(p);
    let class: Vec<i64> = p.class_freqs().counts().iter().map(|&c| c as i64).collect();
    let shadow: Vec<i64> = vec![0, l - k, n - l, k];
    let middle: Vec<i64> = p.middle_freqs().counts().iter().map(|&c| c as i64).collect();
    let merged: Vec<i64> = [0, l].into_iter().chain(p.middle.iter().map(|&a| a as i64)).collect();
    let all = Filter {
        top,
        ..Filter::default()
    };
    let three = |id: BijectionId| {
        if top == 3 {
            Ok(())
        } else {
            bad_params(id, "defined for words over {1,2,3} only")
        }
    };
    let need_i = || p.one_pos.map_or_else(|| bad_params(id, "needs i"), Ok);
    let need_j = || p.top_pos.map_or_else(|| bad_params(id, "needs j"), Ok);

    let setup = match id {
        BijectionId::SplitFirstHigh | BijectionId::SplitLastLow => {
            three(id)?;
            let first_high = id == BijectionId::SplitFirstHigh;
            let domain_counts: Vec<i64> = if first_high {
                vec![n - l, 0, 0, l]
            } else {
                vec![0, l, n - l]
            };
            let mut codomain = Space::default();
            for s in 0..=(n - l) {
                let counts: Vec<i64> = if first_high {
                    vec![n - l - s, 0, 0, l - 1]
                } else {
                    vec![0, l - 1, n - l - s]
                };
                codomain.push((s * l) as u64, &[&counts], all);
            }
            let pair = if first_high { ZERO_THREE } else { ONE_TWO };
            Setup {
                domain: Space::block(0, &[&domain_counts], all),
                codomain,
                forward: Box::new(move |e| {
                    let sw = if first_high {
                        split_first_high(first(e), pair)
                    } else {
                        split_last_low(first(e), pair)
                    };
                    sw.map(|sw| Elem::one(sw.word, sw.shift)).map_err(err_string)
                }),
                inverse: Box::new(move |e| {
                    let sw = ShiftedWord::new(first(e).clone(), e.shift);
                    let w = if first_high {
                        join_first_high(&sw, nu - 1, lu, pair)
                    } else {
                        join_last_low(&sw, nu - 1, lu, pair)
                    };
                    w.map(|w| Elem::one(w, 0)).map_err(err_string)
                }),
            }
        }
        BijectionId::SeparateTops => {
            three(id)?;
            Setup {
                domain: Space::block(0, &[&shadow], all),
                codomain: Space::block(0, &[&[n - k, 0, 0, k], &[0, l - k, n - l]], all),
                forward: Box::new(|e| {
                    separate_tops(first(e))
                        .map(|(y, z)| Elem::two(y, z, 0))
                        .map_err(err_string)
                }),
                inverse: Box::new(|e| {
                    merge_tops(first(e), at(e, 1)?)
                        .map(|w| Elem::one(w, 0))
                        .map_err(err_string)
                }),
            }
        }
        BijectionId::SwapReverse => {
            three(id)?;
            let map = |e: &Elem| swap_reverse(first(e)).map(|w| Elem::one(w, 0)).map_err(err_string);
            Setup {
                domain: Space::block(0, &[&shadow], all),
                codomain: Space::block(0, &[&[0, l - k, k, n - l]], all),
                forward: Box::new(map),
                inverse: Box::new(map),
            }
        }
        BijectionId::SwapAdjacent(letter) => {
            if letter == 0 || letter >= top {
                return bad_params(id, format!("letter must lie in 1..{top}"));
            }
            let mut swapped = class.clone();
            swapped.swap(letter as usize, letter as usize + 1);
            let map = move |e: &Elem| Ok(Elem::one(swap_adjacent(first(e), letter), 0));
            Setup {
                domain: Space::block(0, &[&class], all),
                codomain: Space::block(0, &[&swapped], all),
                forward: Box::new(map),
                inverse: Box::new(map),
            }
        }
        BijectionId::CollapseMiddle => Setup {
            domain: Space::block(0, &[&class], all),
            codomain: Space::block(0, &[&shadow, &middle], all),
            forward: Box::new(move |e| {
                collapse_middle(first(e), top)
                    .map(|(y, z)| Elem::two(y, z, 0))
                    .map_err(err_string)
            }),
            inverse: Box::new(move |e| {
                expand_middle(first(e), at(e, 1)?, top)
                    .map(|w| Elem::one(w, 0))
                    .map_err(err_string)
            }),
        },
        BijectionId::FillHighs => Setup {
            domain: Space::block(0, &[&[l, 0, 0, n - l], &middle], all),
            codomain: Space::block(0, &[&merged], all),
            forward: Box::new(|e| {
                fill_highs(first(e), at(e, 1)?)
                    .map(|w| Elem::one(w, 0))
                    .map_err(err_string)
            }),
            inverse: Box::new(|e| {
                extract_highs(first(e))
                    .map(|(y, z)| Elem::two(y, z, 0))
                    .map_err(err_string)
            }),
        },
        BijectionId::Place => {
            three(id)?;
            if !(0 < k && k < l) {
                return bad_params(id, "needs 0 < k < L");
            }
            let (i, j) = (need_i()?, need_j()?);
            let mut domain = Space::default();
            if i <= nu - lu + 1 && j <= nu - ku + 1 {
                let shift = placement_shift(i, j, ku, lu);
                let (ii, jj) = (i as i64, j as i64);
                domain.push(
                    shift,
                    &[&[n - jj + 1 - k, 0, 0, k - 1], &[0, l - k - 1, n - l + 1 - ii]],
                    all,
                );
            }
            let filter = Filter {
                top: 3,
                class: None,
                one_pos: Some(i),
                top_pos: Some(j),
            };
            Setup {
                domain,
                codomain: Space::block(0, &[&shadow], filter),
                forward: Box::new(move |e| {
                    let placement = Placement {
                        one_pos: i,
                        top_pos: j,
                        tops: ku,
                        marked: lu,
                        len: nu,
                        y: first(e).clone(),
                        z: at(e, 1)?.clone(),
                    };
                    place(&placement).map(|w| Elem::one(w, 0)).map_err(err_string)
                }),
                inverse: Box::new(|e| {
                    unplace(first(e))
                        .map(|pl| Elem::two(pl.y.clone(), pl.z.clone(), pl.shift()))
                        .map_err(err_string)
                }),
            }
        }
        BijectionId::AppendOneTail => {
            three(id)?;
            if k != 0 {
                return bad_params(id, "needs k = 0");
            }
            let i = need_i()?;
            let ii = i as i64;
            let filter = Filter {
                top: 3,
                one_pos: Some(i),
                ..Filter::default()
            };
            Setup {
                domain: Space::block((lu * (i - 1)) as u64, &[&[0, l - 1, n - l + 1 - ii]], all),
                codomain: Space::block(0, &[&shadow], filter),
                forward: Box::new(move |e| {
                    append_one_tail(i, lu, nu, first(e))
                        .map(|w| Elem::one(w, 0))
                        .map_err(err_string)
                }),
                inverse: Box::new(move |e| {
                    strip_one_tail(first(e))
                        .map(|(i, z)| Elem::one(z, (lu * (i - 1)) as u64))
                        .map_err(err_string)
                }),
            }
        }
        BijectionId::PrependTwoHead => {
            three(id)?;
            if k != l {
                return bad_params(id, "needs k = L");
            }
            let j = need_j()?;
            let jj = j as i64;
            let filter = Filter {
                top: 3,
                top_pos: Some(j),
                ..Filter::default()
            };
            Setup {
                domain: Space::block((lu * (j - 1)) as u64, &[&[0, 0, n - l - jj + 1, l - 1]], all),
                codomain: Space::block(0, &[&shadow], filter),
                forward: Box::new(move |e| {
                    prepend_two_head(j, lu, nu, first(e))
                        .map(|w| Elem::one(w, 0))
                        .map_err(err_string)
                }),
                inverse: Box::new(move |e| {
                    strip_two_head(first(e))
                        .map(|(j, y)| Elem::one(y, (lu * (j - 1)) as u64))
                        .map_err(err_string)
                }),
            }
        }
        BijectionId::GreaterAtOnePos => {
            three(id)?;
            let i = need_i()?;
            let ii = i as i64;
            let filter = Filter {
                top: 3,
                class: Some(Class::Greater),
                one_pos: Some(i),
                top_pos: None,
            };
            Setup {
                domain: Space::block(0, &[&shadow], filter),
                codomain: Space::block((k + l * (ii - 1)) as u64, &[&[0, l - k - 1, n - l - ii + 1, k]], all),
                forward: Box::new(move |e| {
                    greater_at_one_pos(first(e), shape, i, &mut Tracer::off())
                        .map(|sw| Elem::one(sw.word, sw.shift))
                        .map_err(err_string)
                }),
                inverse: Box::new(move |e| {
                    greater_at_one_pos_inv(
                        &ShiftedWord::new(first(e).clone(), e.shift),
                        shape,
                        i,
                        &mut Tracer::off(),
                    )
                    .map(|w| Elem::one(w, 0))
                    .map_err(err_string)
                }),
            }
        }
        BijectionId::LessEqAtTopPos => {
            three(id)?;
            let j = need_j()?;
            let jj = j as i64;
            let filter = Filter {
                top: 3,
                class: Some(Class::LessEq),
                one_pos: None,
                top_pos: Some(j),
            };
            Setup {
                domain: Space::block(0, &[&shadow], filter),
                codomain: Space::block((l * (jj - 1)) as u64, &[&[0, l - k, n - l - jj + 1, k - 1]], all),
                forward: Box::new(move |e| {
                    lesseq_at_top_pos(first(e), shape, j, &mut Tracer::off())
                        .map(|sw| Elem::one(sw.word, sw.shift))
                        .map_err(err_string)
                }),
                inverse: Box::new(move |e| {
                    lesseq_at_top_pos_inv(
                        &ShiftedWord::new(first(e).clone(), e.shift),
                        shape,
                        j,
                        &mut Tracer::off(),
                    )
                    .map(|w| Elem::one(w, 0))
                    .map_err(err_string)
                }),
            }
        }
        BijectionId::GreaterToPair | BijectionId::LessEqToPair => {
            three(id)?;
            let greater = id == BijectionId::GreaterToPair;
            let filter = Filter {
                top: 3,
                class: Some(if greater { Class::Greater } else { Class::LessEq }),
                ..Filter::default()
            };
            let codomain = if greater {
                Space::block(k as u64, &[&[l, 0, 0, n - l], &[0, l - k - 1, k]], all)
            } else {
                Space::block(0, &[&[l, 0, 0, n - l], &[0, l - k, k - 1]], all)
            };
            Setup {
                domain: Space::block(0, &[&shadow], filter),
                codomain,
                forward: Box::new(move |e| {
                    let out = if greater {
                        greater_to_pair(first(e), shape, &mut Tracer::off())
                    } else {
                        lesseq_to_pair(first(e), shape, &mut Tracer::off())
                    };
                    out.map(|pr| Elem::two(pr.left, pr.right, pr.shift)).map_err(err_string)
                }),
                inverse: Box::new(move |e| {
                    let pair = ShiftedPair::new(first(e).clone(), at(e, 1)?.clone(), e.shift);
                    let out = if greater {
                        greater_to_pair_inv(&pair, shape, &mut Tracer::off())
                    } else {
                        lesseq_to_pair_inv(&pair, shape, &mut Tracer::off())
                    };
                    out.map(|w| Elem::one(w, 0)).map_err(err_string)
                }),
            }
        }
        BijectionId::General(route) => {
            let mut filter = Filter {
                top,
                class: Some(route.class()),
                ..Filter::default()
            };
            let codomain = match route {
                Route::Greater => Space::block(k as u64, &[&merged, &[0, l - 1 - k, k]], all),
                Route::LessEq => Space::block(0, &[&merged, &[0, l - k, k - 1]], all),
                Route::GreaterAtOnePos => {
                    let i = need_i()?;
                    filter.one_pos = Some(i);
                    let ii = i as i64;
                    Space::block(
                        (k + (ii - 1) * l) as u64,
                        &[&[0, l - k - 1, n - l - ii + 1, k], &middle],
                        all,
                    )
                }
                Route::LessEqAtTopPos => {
                    let j = need_j()?;
                    filter.top_pos = Some(j);
                    let jj = j as i64;
                    Space::block(
                        ((jj - 1) * l) as u64,
                        &[&[0, l - k, n - l - jj + 1, k - 1], &middle],
                        all,
                    )
                }
            };
            let params = p.clone();
            Setup {
                domain: Space::block(0, &[&class], filter),
                codomain,
                forward: Box::new(move |e| {
                    general_forward(first(e), top, route, &mut Tracer::off())
                        .map(|r| Elem::two(r.target.left, r.target.right, r.target.shift))
                        .map_err(err_string)
                }),
                inverse: Box::new(move |e| {
                    let pair = ShiftedPair::new(first(e).clone(), at(e, 1)?.clone(), e.shift);
                    general_inverse(&pair, &params, route, &mut Tracer::off())
                        .map(|w| Elem::one(w, 0))
                        .map_err(err_string)
                }),
            }
        }
        BijectionId::SimplifiedShift | BijectionId::ComposedShift => {
            let simplified = id == BijectionId::SimplifiedShift;
            let mut codomain = Space::default();
            if k < l {
                let next: Vec<i64> = p
                    .with_tops(ku + 1)
                    .class_freqs()
                    .counts()
                    .iter()
                    .map(|&c| c as i64)
                    .collect();
                codomain.push(
                    k as u64,
                    &[&next],
                    Filter {
                        top,
                        class: Some(Class::LessEq),
                        ..Filter::default()
                    },
                );
            }
            Setup {
                domain: Space::block(
                    0,
                    &[&class],
                    Filter {
                        top,
                        class: Some(Class::Greater),
                        ..Filter::default()
                    },
                ),
                codomain,
                forward: Box::new(move |e| {
                    let out = if simplified {
                        simplified_shift_with(first(e), top, &mut Tracer::off())
                    } else {
                        composed_shift(first(e), top, &mut Tracer::off())
                    };
                    out.map(|(w, k)| Elem::one(w, k as u64)).map_err(err_string)
                }),
                inverse: Box::new(move |e| {
                    let out = if simplified {
                        simplified_shift_inv_with(first(e), top, &mut Tracer::off())
                    } else {
                        composed_shift_inv(first(e), top, &mut Tracer::off())
                    };
                    out.map(|(w, _)| Elem::one(w, 0)).map_err(err_string)
                }),
            }
        }
    };
    Ok(setup)
}

fn guarded(map: &Map, e: &Elem) -> std::result::Result<Elem, String> {
    match catch_unwind(AssertUnwindSafe(|| map(e))) {
        Ok(out) => out,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            Err(format!("panic: {msg}"))
        }
    }
}

fn gf_of(elems: &[Elem]) -> Result<QPoly> {
    let mut out = QPoly::zero();
    for e in elems {
        out.add_monomial(e.weight() as usize)?;
    }
    Ok(out)
}

/// `check_bijection` with the default enumeration cap.
pub fn check_bijection(id: BijectionId, p: &Params) -> Result<Report> {
    check_bijection_with_cap(id, p, DEFAULT_ENUMERATION_CAP)
}

/// Runs `id` over its whole domain. `lhs` is the GF of the domain and `rhs`
/// the GF of the independently enumerated codomain.
pub fn check_bijection_with_cap(id: BijectionId, p: &Params, cap: u128) -> Result<Report> {
    let start = Instant::now();
    p.validate()?;
    let setup = build_setup(id, p)?;
    let domain = setup.domain.elements(cap)?;
    let codomain = setup.codomain.elements(cap)?;
    let mut cx = Vec::new();
    let mut record = |word: &Elem, expected: String, actual: String| {
        if cx.len() < MAX_COUNTEREXAMPLES {
            cx.push(Counterexample {
                word: word.to_string(),
                expected,
                actual,
            });
        }
    };
    let mut images = HashSet::with_capacity(domain.len());
    for d in &domain {
        let image = match guarded(&setup.forward, d) {
            Ok(image) => image,
            Err(e) => {
                record(d, "a value in the codomain".into(), format!("error: {e}"));
                continue;
            }
        };
        if !setup.codomain.contains(&image) {
            record(d, "a value in the codomain".into(), image.to_string());
        }
        if image.weight() != d.weight() {
            record(
                d,
                format!("weight {}", d.weight()),
                format!("weight {} at {image}", image.weight()),
            );
        }
        match guarded(&setup.inverse, &image) {
            Ok(back) if back == *d => {}
            Ok(back) => record(d, format!("inverse gives {d}"), back.to_string()),
            Err(e) => record(d, format!("inverse gives {d}"), format!("error: {e}")),
        }
        if !images.insert(image.clone()) {
            record(d, "an image not hit before".into(), image.to_string());
        }
    }
    if images.len() != codomain.len() && cx.is_empty() {
        let witness = codomain.iter().find(|c| !images.contains(*c));
        cx.push(Counterexample {
            word: witness.map_or_else(|| "-".into(), |c| c.to_string()),
            expected: format!("{} images", codomain.len()),
            actual: format!("{} images", images.len()),
        });
    }
    let lhs = gf_of(&domain)?;
    let rhs = gf_of(&codomain)?;
    Ok(Report::build(
        id.to_string(),
        p,
        lhs,
        rhs,
        cx,
        domain.len() as u64,
        start,
    ))
}

/// What a sweep covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub min_n: Letter,
    pub max_n: Letter,
    /// Largest word length `N`.
    pub max_len: usize,
    /// Largest total middle count for alphabets beyond `{1,2,3}`.
    pub max_middle: usize,
    pub cap: u128,
    pub parallel: bool,
}

impl Bounds {
    pub fn new(max_n: Letter, max_len: usize) -> Self {
        Self {
            min_n: 3,
            max_n,
            max_len,
            max_middle: usize::MAX,
            cap: DEFAULT_ENUMERATION_CAP,
            parallel: true,
        }
    }

    pub fn only(n: Letter, max_len: usize) -> Self {
        Self {
            min_n: n,
            ..Self::new(n, max_len)
        }
    }

    pub fn with_max_middle(self, max_middle: usize) -> Self {
        Self { max_middle, ..self }
    }

    pub fn sequential(self) -> Self {
        Self {
            parallel: false,
            ..self
        }
    }
}

#[derive(Debug, Clone)]
pub enum Task {
    Identity(IdentityId, Params),
    Bijection(BijectionId, Params),
}

impl Task {
    pub fn run(&self, cap: u128) -> Report {
        let start = Instant::now();
        let (name, params, out) = match self {
            Task::Identity(id, p) => (id.to_string(), p, check_identity_with_cap(*id, p, cap)),
            Task::Bijection(id, p) => (id.to_string(), p, check_bijection_with_cap(*id, p, cap)),
        };
        out.unwrap_or_else(|e| Report::failed(name, params, e.to_string(), start))
    }

    fn params(&self) -> &Params {
        match self {
            Task::Identity(_, p) | Task::Bijection(_, p) => p,
        }
    }
}

/// Middle-count vectors of length `slots` with entries summing to `total`,
/// in lexicographic order.
fn compositions(total: usize, slots: usize) -> Vec<Vec<usize>> {
    if slots == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for head in 0..=total {
        for mut tail in compositions(total - head, slots - 1) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn tasks_for(p: &Params) -> Vec<Task> {
    use IdentityId as I;
    let mut out = Vec::new();
    let (n, l, k) = (p.len, p.marked, p.tops);
    let three = p.top == 3;
    let id = |out: &mut Vec<Task>, id: IdentityId, p: Params| out.push(Task::Identity(id, p));
    let bij = |out: &mut Vec<Task>, id: BijectionId, p: Params| out.push(Task::Bijection(id, p));

    id(&mut out, I::ClassGf, p.clone());
    id(&mut out, I::MultinomialSymmetry, p.clone());
    if three {
        if k == 0 {
            id(&mut out, I::PrefixSum, p.clone());
            bij(&mut out, BijectionId::SplitFirstHigh, p.clone());
            bij(&mut out, BijectionId::SplitLastLow, p.clone());
        }
        id(&mut out, I::FactorThree, p.clone());
        id(&mut out, I::SwapSymmetry, p.clone());
        id(&mut out, I::ShadowGreater, p.clone());
        id(&mut out, I::ShadowLessEq, p.clone());
        bij(&mut out, BijectionId::SeparateTops, p.clone());
        bij(&mut out, BijectionId::SwapReverse, p.clone());
        bij(&mut out, BijectionId::GreaterToPair, p.clone());
        bij(&mut out, BijectionId::LessEqToPair, p.clone());
    }
    id(&mut out, I::Greater, p.clone());
    id(&mut out, I::LessEq, p.clone());
    if k < l {
        id(&mut out, I::ShiftIdentity, p.clone());
    }
    if k == 0 {
        bij(&mut out, BijectionId::FillHighs, p.clone());
    }
    bij(&mut out, BijectionId::CollapseMiddle, p.clone());
    for letter in 1..p.top {
        bij(&mut out, BijectionId::SwapAdjacent(letter), p.clone());
    }
    bij(&mut out, BijectionId::General(Route::Greater), p.clone());
    bij(&mut out, BijectionId::General(Route::LessEq), p.clone());
    bij(&mut out, BijectionId::SimplifiedShift, p.clone());
    bij(&mut out, BijectionId::ComposedShift, p.clone());

    if k < l {
        for i in 1..=n - l + 1 {
            let q = p.clone().with_one_pos(i);
            if three {
                id(&mut out, I::ShadowGreaterAtOne, q.clone());
                bij(&mut out, BijectionId::GreaterAtOnePos, q.clone());
                if k == 0 {
                    id(&mut out, I::FixedOneNoTops, q.clone());
                    bij(&mut out, BijectionId::AppendOneTail, q.clone());
                }
            }
            id(&mut out, I::GreaterAtOne, q.clone());
            bij(&mut out, BijectionId::General(Route::GreaterAtOnePos), q.clone());
        }
    }
    if k > 0 {
        for j in 1..=n - k + 1 {
            let q = p.clone().with_top_pos(j);
            if three {
                id(&mut out, I::ShadowLessEqAtTop, q.clone());
                if j <= n - l + 1 {
                    bij(&mut out, BijectionId::LessEqAtTopPos, q.clone());
                }
                if k == l {
                    id(&mut out, I::FixedTopAllTops, q.clone());
                    if j <= n - l + 1 {
                        bij(&mut out, BijectionId::PrependTwoHead, q.clone());
                    }
                }
            }
            id(&mut out, I::LessEqAtTop, q.clone());
            if j <= n - l + 1 {
                bij(&mut out, BijectionId::General(Route::LessEqAtTopPos), q.clone());
            }
        }
    }
    if three && 0 < k && k < l {
        for i in 1..=n - l + 1 {
            for j in 1..=n - k + 1 {
                let q = p.clone().with_one_pos(i).with_top_pos(j);
                id(&mut out, I::FixedBoth, q.clone());
                bij(&mut out, BijectionId::Place, q);
            }
        }
    }
    out
}

/// Every task within `bounds`, ordered lexicographically by
/// `(n, N, L, k, a, i, j)` with unset positions first.
pub fn sweep_tasks(bounds: &Bounds) -> Vec<Task> {
    let mut tasks = Vec::new();
    for top in bounds.min_n.max(3)..=bounds.max_n {
        for len in 1..=bounds.max_len {
            for marked in 1..=len {
                let rest = len - marked;
                let middles = if top == 3 {
                    vec![vec![rest]]
                } else if rest <= bounds.max_middle {
                    compositions(rest, top as usize - 2)
                } else {
                    Vec::new()
                };
                for tops in 0..=marked {
                    for middle in &middles {
                        tasks.extend(tasks_for(&Params::general(top, marked, tops, middle.clone())));
                    }
                }
            }
        }
    }
    let key = |t: &Task| {
        let p = t.params();
        (p.top, p.len, p.marked, p.tops, p.middle.clone(), p.one_pos, p.top_pos)
    };
    tasks.sort_by_key(key);
    tasks
}

/// Runs every task within `bounds`; the output order does not depend on
/// `bounds.parallel`.
pub fn sweep(bounds: &Bounds) -> Vec<Report> {
    let tasks = sweep_tasks(bounds);
    if bounds.parallel {
        tasks.par_iter().map(|t| t.run(bounds.cap)).collect()
    } else {
        tasks.iter().map(|t| t.run(bounds.cap)).collect()
    }
}

pub fn all_pass(reports: &[Report]) -> bool {
    reports.iter().all(Report::passed)
}
