// SPDX-License-Identifier: Apache-2.0

//! Composed bijections built from the primitives in [`crate::bijections`].
//!
//! The three-letter pipelines act on `X_k = R(1^(L-k) 2^(N-L) 3^k)`:
//!
//! * [`greater_at_one_pos`]: `{w in X_k^> : p_1(w) = i}` onto
//!   `q^(k + (i-1)L) R(1^(L-k-1) 2^(N-L-i+1) 3^k)`.
//! * [`lesseq_at_top_pos`]: `{w in X_k^<= : p_3(w) = j}` onto
//!   `q^(L(j-1)) R(1^(L-k) 2^(N-L-j+1) 3^(k-1))`.
//! * [`greater_to_pair`]: `X_k^>` onto `q^k R(0^L 3^(N-L)) x R(1^(L-k-1) 2^k)`.
//! * [`lesseq_to_pair`]: `X_k^<=` onto `R(0^L 3^(N-L)) x R(1^(L-k) 2^(k-1))`.
//!
//! [`general_forward`] lifts these to words over `1..=n` by collapsing the
//! middle letters first, and [`simplified_shift`] is the direct bijection
//! `W_k^> -> q^k W_(k+1)^<=` obtained once the intermediate steps cancel.
//!
//! The disjoint unions over `i` or `j` are tracked by the recovered index
//! itself, which is exactly the coordinate of the union.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bijections::{
    append_one_tail, collapse_middle, expand_middle, extract_highs, fill_highs, join_first_high, join_last_low,
    merge_tops, place, prepend_two_head, separate_tops, split_first_high, split_last_low, strip_one_tail,
    strip_two_head, swap_reverse, unplace, BijectionError, Placement, ShiftedPair, ShiftedWord, ONE_TWO, ZERO_THREE,
};
use crate::trace::{Snapshot, TraceRecord, Tracer};
use crate::words::{classify, p_max, p_one, Class, Freqs, Letter, Params, Position, Word, WordsError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("outside the pipeline domain: {0}")]
    Domain(String),
    #[error(transparent)]
    Bijection(#[from] BijectionError),
    #[error(transparent)]
    Words(#[from] WordsError),
    /// A consistency assertion failed; this is a bug, not bad input.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, PipelineError>;

fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(PipelineError::Domain(msg.into()))
}

fn internal<T>(msg: impl Into<String>) -> Result<T> {
    Err(PipelineError::Internal(msg.into()))
}

/// `(L, N, k)` for the three-letter family `X_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shape {
    /// `L`
    pub marked: usize,
    /// `N`
    pub len: usize,
    /// `k`
    pub tops: usize,
}

impl Shape {
    pub fn new(marked: usize, len: usize, tops: usize) -> Self {
        Self { marked, len, tops }
    }

    pub fn of(params: &Params) -> Self {
        Self {
            marked: params.marked,
            len: params.len,
            tops: params.tops,
        }
    }

    fn check(&self) -> Result<()> {
        if self.marked == 0 || self.marked > self.len || self.tops > self.marked {
            return domain(format!(
                "need 0 < L <= N and k <= L, got L={} N={} k={}",
                self.marked, self.len, self.tops
            ));
        }
        Ok(())
    }

    fn freqs(&self) -> Freqs {
        Freqs::from_pairs(&[
            (1, self.marked - self.tops),
            (2, self.len - self.marked),
            (3, self.tops),
        ])
    }

    fn require_member(&self, w: &Word) -> Result<()> {
        self.check()?;
        if !self.freqs().contains(w) {
            return domain(format!(
                "{w} is not in R(1^{} 2^{} 3^{})",
                self.marked - self.tops,
                self.len - self.marked,
                self.tops
            ));
        }
        Ok(())
    }
}

fn require_content(w: &Word, pairs: &[(Letter, usize)]) -> Result<()> {
    if Freqs::from_pairs(pairs).contains(w) {
        Ok(())
    } else {
        domain(format!("{w} does not have content {pairs:?}"))
    }
}

fn require_shift(got: u64, expected: usize) -> Result<()> {
    if got == expected as u64 {
        Ok(())
    } else {
        domain(format!("shift {got} differs from the expected {expected}"))
    }
}

fn finite(pos: Position, what: &str) -> Result<usize> {
    pos.finite().map_or_else(|| domain(format!("{what} is infinite")), Ok)
}

/// `{w in X_k^> : p_1(w) = i}` onto `q^(k + (i-1)L) R(1^(L-k-1) 2^(N-L-i+1) 3^k)`.
pub fn greater_at_one_pos(w: &Word, shape: Shape, one_pos: usize, t: &mut Tracer) -> Result<ShiftedWord> {
    shape.require_member(w)?;
    let Shape {
        marked: l,
        len: n,
        tops: k,
    } = shape;
    if k == l {
        return domain("k = L: there are no words with p_3 > p_1");
    }
    if classify(w, 3) != Class::Greater {
        return domain(format!("{w} does not have p_3 > p_1"));
    }
    if p_one(w, 3) != Position::Finite(one_pos) {
        return domain(format!("{w} does not have p_1 = {one_pos}"));
    }
    let i = one_pos;
    let tail_shift = k + l * (i - 1);

    if k == 0 {
        let (got_i, z) = strip_one_tail(w)?;
        if got_i != i {
            return internal(format!("strip_one_tail recovered i={got_i}, expected {i}"));
        }
        t.step("strip-one-tail", || {
            (Snapshot::word(w, 0), Snapshot::word(&z, tail_shift as u64))
        });
        return Ok(ShiftedWord::new(z, tail_shift as u64));
    }

    let placed = unplace(w)?;
    if placed.one_pos != i {
        return internal(format!("unplace recovered i={}, expected {i}", placed.one_pos));
    }
    let Some(s) = placed.top_pos.checked_sub(i + 1) else {
        return internal(format!("unplace recovered j={} <= i={i}", placed.top_pos));
    };
    let head_shift = (s * k) as u64;
    t.step("unplace", || {
        (
            Snapshot::word(w, 0),
            Snapshot::parts(&[(&placed.y, head_shift), (&placed.z, tail_shift as u64)]),
        )
    });

    let head = join_first_high(
        &ShiftedWord::new(placed.y.clone(), head_shift),
        n - i - 1,
        k,
        ZERO_THREE,
    )?;
    t.step("join-first-high", || {
        (
            Snapshot::parts(&[(&placed.y, head_shift), (&placed.z, tail_shift as u64)]),
            Snapshot::parts(&[(&head, 0), (&placed.z, tail_shift as u64)]),
        )
    });

    let u = merge_tops(&head, &placed.z)?;
    t.step("merge-tops", || {
        (
            Snapshot::parts(&[(&head, 0), (&placed.z, tail_shift as u64)]),
            Snapshot::word(&u, tail_shift as u64),
        )
    });
    Ok(ShiftedWord::new(u, tail_shift as u64))
}

/// Inverse of [`greater_at_one_pos`].
pub fn greater_at_one_pos_inv(sw: &ShiftedWord, shape: Shape, one_pos: usize, t: &mut Tracer) -> Result<Word> {
    shape.check()?;
    let Shape {
        marked: l,
        len: n,
        tops: k,
    } = shape;
    if k == l {
        return domain("k = L: there are no words with p_3 > p_1");
    }
    let i = one_pos;
    if !(1 <= i && i <= n - l + 1) {
        return domain(format!("i={i} outside 1..={}", n - l + 1));
    }
    require_content(&sw.word, &[(1, l - k - 1), (2, n - l + 1 - i), (3, k)])?;
    let tail_shift = k + l * (i - 1);
    require_shift(sw.shift, tail_shift)?;

    if k == 0 {
        let w = append_one_tail(i, l, n, &sw.word)?;
        t.step("append-one-tail", || {
            (Snapshot::word(&sw.word, sw.shift), Snapshot::word(&w, 0))
        });
        return Ok(w);
    }

    let (head, z) = separate_tops(&sw.word)?;
    t.step("separate-tops", || {
        (
            Snapshot::word(&sw.word, sw.shift),
            Snapshot::parts(&[(&head, 0), (&z, sw.shift)]),
        )
    });

    let s = head.letters().iter().take_while(|&&x| x == 0).count();
    let y = split_first_high(&head, ZERO_THREE)?;
    t.step("split-first-high", || {
        (
            Snapshot::parts(&[(&head, 0), (&z, sw.shift)]),
            Snapshot::parts(&[(&y.word, y.shift), (&z, sw.shift)]),
        )
    });

    let placement = Placement {
        one_pos: i,
        top_pos: s + i + 1,
        tops: k,
        marked: l,
        len: n,
        y: y.word.clone(),
        z: z.clone(),
    };
    let w = place(&placement)?;
    t.step("place", || {
        (
            Snapshot::parts(&[(&y.word, y.shift), (&z, sw.shift)]),
            Snapshot::word(&w, 0),
        )
    });
    Ok(w)
}

/// `{w in X_k^<= : p_3(w) = j}` onto `q^(L(j-1)) R(1^(L-k) 2^(N-L-j+1) 3^(k-1))`.
pub fn lesseq_at_top_pos(w: &Word, shape: Shape, top_pos: usize, t: &mut Tracer) -> Result<ShiftedWord> {
    shape.require_member(w)?;
    let Shape {
        marked: l,
        len: n,
        tops: k,
    } = shape;
    if k == 0 {
        return domain("k = 0: there are no words with p_3 <= p_1");
    }
    if classify(w, 3) != Class::LessEq {
        return domain(format!("{w} does not have p_3 <= p_1"));
    }
    if p_max(w, 3) != Position::Finite(top_pos) {
        return domain(format!("{w} does not have p_3 = {top_pos}"));
    }
    let j = top_pos;
    let head_shift = (l * (j - 1)) as u64;

    if k == l {
        let (got_j, y) = strip_two_head(w)?;
        if got_j != j {
            return internal(format!("strip_two_head recovered j={got_j}, expected {j}"));
        }
        t.step("strip-two-head", || {
            (Snapshot::word(w, 0), Snapshot::word(&y, head_shift))
        });
        return Ok(ShiftedWord::new(y, head_shift));
    }

    let placed = unplace(w)?;
    if placed.top_pos != j {
        return internal(format!("unplace recovered j={}, expected {j}", placed.top_pos));
    }
    let Some(s) = placed.one_pos.checked_sub(j) else {
        return internal(format!("unplace recovered i={} < j={j}", placed.one_pos));
    };
    let tail_shift = (s * (l - k)) as u64;
    t.step("unplace", || {
        (
            Snapshot::word(w, 0),
            Snapshot::parts(&[(&placed.y, head_shift), (&placed.z, tail_shift)]),
        )
    });

    let tail = join_last_low(
        &ShiftedWord::new(placed.z.clone(), tail_shift),
        n - k - j,
        l - k,
        ONE_TWO,
    )?;
    t.step("join-last-low", || {
        (
            Snapshot::parts(&[(&placed.y, head_shift), (&placed.z, tail_shift)]),
            Snapshot::parts(&[(&placed.y, head_shift), (&tail, 0)]),
        )
    });

    let u = merge_tops(&placed.y, &tail)?;
    t.step("merge-tops", || {
        (
            Snapshot::parts(&[(&placed.y, head_shift), (&tail, 0)]),
            Snapshot::word(&u, head_shift),
        )
    });
    Ok(ShiftedWord::new(u, head_shift))
}

/// Inverse of [`lesseq_at_top_pos`].
///
/// `j` is bounded by `N - L + 1`, the largest value for which the target
/// class is nonempty.
pub fn lesseq_at_top_pos_inv(sw: &ShiftedWord, shape: Shape, top_pos: usize, t: &mut Tracer) -> Result<Word> {
    shape.check()?;
    let Shape {
        marked: l,
        len: n,
        tops: k,
    } = shape;
    if k == 0 {
        return domain("k = 0: there are no words with p_3 <= p_1");
    }
    let j = top_pos;
    if !(1 <= j && j <= n - l + 1) {
        return domain(format!("j={j} outside 1..={}", n - l + 1));
    }
    require_content(&sw.word, &[(1, l - k), (2, n - l + 1 - j), (3, k - 1)])?;
    let head_shift = l * (j - 1);
    require_shift(sw.shift, head_shift)?;

    if k == l {
        let w = prepend_two_head(j, l, n, &sw.word)?;
        t.step("prepend-two-head", || {
            (Snapshot::word(&sw.word, sw.shift), Snapshot::word(&w, 0))
        });
        return Ok(w);
    }

    let (y, tail) = separate_tops(&sw.word)?;
    t.step("separate-tops", || {
        (
            Snapshot::word(&sw.word, sw.shift),
            Snapshot::parts(&[(&y, sw.shift), (&tail, 0)]),
        )
    });

    let z = split_last_low(&tail, ONE_TWO)?;
    let s = (z.shift / (l - k) as u64) as usize;
    t.step("split-last-low", || {
        (
            Snapshot::parts(&[(&y, sw.shift), (&tail, 0)]),
            Snapshot::parts(&[(&y, sw.shift), (&z.word, z.shift)]),
        )
    });

    let placement = Placement {
        one_pos: s + j,
        top_pos: j,
        tops: k,
        marked: l,
        len: n,
        y: y.clone(),
        z: z.word.clone(),
    };
    let w = place(&placement)?;
    t.step("place", || {
        (
            Snapshot::parts(&[(&y, sw.shift), (&z.word, z.shift)]),
            Snapshot::word(&w, 0),
        )
    });
    Ok(w)
}

/// `X_k^>` onto `q^k R(0^L 3^(N-L)) x R(1^(L-k-1) 2^k)`.
pub fn greater_to_pair(w: &Word, shape: Shape, t: &mut Tracer) -> Result<ShiftedPair> {
    shape.require_member(w)?;
    let Shape {
        marked: l,
        len: n,
        tops: k,
    } = shape;
    if classify(w, 3) != Class::Greater {
        return domain(format!("{w} does not have p_3 > p_1"));
    }
    let i = finite(p_one(w, 3), "p_1")?;
    let u = greater_at_one_pos(w, shape, i, t)?;

    let v = swap_reverse(&u.word)?;
    t.step("swap-reverse", || {
        (Snapshot::word(&u.word, u.shift), Snapshot::word(&v, u.shift))
    });

    let (y, z) = separate_tops(&v)?;
    let y_shift = (l * (i - 1)) as u64;
    t.step("separate-tops", || {
        (
            Snapshot::word(&v, u.shift),
            Snapshot::parts(&[(&y, y_shift), (&z, k as u64)]),
        )
    });

    let left = join_last_low(&ShiftedWord::new(y.clone(), y_shift), n - 1, l, ZERO_THREE)?;
    t.step("join-last-low", || {
        (
            Snapshot::parts(&[(&y, y_shift), (&z, k as u64)]),
            Snapshot::parts(&[(&left, 0), (&z, k as u64)]),
        )
    });
    Ok(ShiftedPair::new(left, z, k as u64))
}

/// Inverse of [`greater_to_pair`].
pub fn greater_to_pair_inv(pair: &ShiftedPair, shape: Shape, t: &mut Tracer) -> Result<Word> {
    shape.check()?;
    let Shape {
        marked: l,
        len: n,
        tops: k,
    } = shape;
    if k == l {
        return domain("k = L: there are no words with p_3 > p_1");
    }
    require_content(&pair.left, &[(0, l), (3, n - l)])?;
    require_content(&pair.right, &[(1, l - k - 1), (2, k)])?;
    require_shift(pair.shift, k)?;
    let z = &pair.right;

    let y = split_last_low(&pair.left, ZERO_THREE)?;
    let i = (y.shift / l as u64) as usize + 1;
    t.step("split-last-low", || {
        (
            Snapshot::parts(&[(&pair.left, 0), (z, pair.shift)]),
            Snapshot::parts(&[(&y.word, y.shift), (z, pair.shift)]),
        )
    });

    let v = merge_tops(&y.word, z)?;
    let u_shift = y.shift + pair.shift;
    t.step("merge-tops", || {
        (
            Snapshot::parts(&[(&y.word, y.shift), (z, pair.shift)]),
            Snapshot::word(&v, u_shift),
        )
    });

    let u = swap_reverse(&v)?;
    t.step("swap-reverse", || {
        (Snapshot::word(&v, u_shift), Snapshot::word(&u, u_shift))
    });

    greater_at_one_pos_inv(&ShiftedWord::new(u, u_shift), shape, i, t)
}

/// `X_k^<=` onto `R(0^L 3^(N-L)) x R(1^(L-k) 2^(k-1))`.
pub fn lesseq_to_pair(w: &Word, shape: Shape, t: &mut Tracer) -> Result<ShiftedPair> {
    shape.require_member(w)?;
    let Shape { marked: l, len: n, .. } = shape;
    if classify(w, 3) != Class::LessEq {
        return domain(format!("{w} does not have p_3 <= p_1"));
    }
    let j = finite(p_max(w, 3), "p_3")?;
    let u = lesseq_at_top_pos(w, shape, j, t)?;

    let v = swap_reverse(&u.word)?;
    t.step("swap-reverse", || {
        (Snapshot::word(&u.word, u.shift), Snapshot::word(&v, u.shift))
    });

    let (y, z) = separate_tops(&v)?;
    t.step("separate-tops", || {
        (Snapshot::word(&v, u.shift), Snapshot::parts(&[(&y, u.shift), (&z, 0)]))
    });

    let left = join_last_low(&ShiftedWord::new(y.clone(), u.shift), n - 1, l, ZERO_THREE)?;
    t.step("join-last-low", || {
        (
            Snapshot::parts(&[(&y, u.shift), (&z, 0)]),
            Snapshot::parts(&[(&left, 0), (&z, 0)]),
        )
    });
    Ok(ShiftedPair::new(left, z, 0))
}

/// Inverse of [`lesseq_to_pair`].
pub fn lesseq_to_pair_inv(pair: &ShiftedPair, shape: Shape, t: &mut Tracer) -> Result<Word> {
    shape.check()?;
    let Shape {
        marked: l,
        len: n,
        tops: k,
    } = shape;
    if k == 0 {
        return domain("k = 0: there are no words with p_3 <= p_1");
    }
    require_content(&pair.left, &[(0, l), (3, n - l)])?;
    require_content(&pair.right, &[(1, l - k), (2, k - 1)])?;
    require_shift(pair.shift, 0)?;
    let z = &pair.right;

    let y = split_last_low(&pair.left, ZERO_THREE)?;
    let j = (y.shift / l as u64) as usize + 1;
    t.step("split-last-low", || {
        (
            Snapshot::parts(&[(&pair.left, 0), (z, 0)]),
            Snapshot::parts(&[(&y.word, y.shift), (z, 0)]),
        )
    });

    let v = merge_tops(&y.word, z)?;
    t.step("merge-tops", || {
        (
            Snapshot::parts(&[(&y.word, y.shift), (z, 0)]),
            Snapshot::word(&v, y.shift),
        )
    });

    let u = swap_reverse(&v)?;
    t.step("swap-reverse", || {
        (Snapshot::word(&v, y.shift), Snapshot::word(&u, y.shift))
    });

    lesseq_at_top_pos_inv(&ShiftedWord::new(u, y.shift), shape, j, t)
}

/// Which of the four general bijections to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// `W_k^>` onto `q^k R(1^L 2^(a_2) ... (n-1)^(a_(n-1))) x R(1^(L-1-k) 2^k)`.
    Greater,
    /// `W_k^<=` onto `R(1^L 2^(a_2) ... (n-1)^(a_(n-1))) x R(1^(L-k) 2^(k-1))`.
    LessEq,
    /// `{w in W_k^> : p_1 = i}` onto `q^(k+(i-1)L) R(1^(L-k-1) 2^(N-L-i+1) 3^k) x R(2^(a_2) ...)`.
    GreaterAtOnePos,
    /// `{w in W_k^<= : p_n = j}` onto `q^((j-1)L) R(1^(L-k) 2^(N-L-j+1) 3^(k-1)) x R(2^(a_2) ...)`.
    LessEqAtTopPos,
}

impl Route {
    pub const ALL: [Route; 4] = [
        Route::Greater,
        Route::LessEq,
        Route::GreaterAtOnePos,
        Route::LessEqAtTopPos,
    ];

    pub fn class(self) -> Class {
        match self {
            Route::Greater | Route::GreaterAtOnePos => Class::Greater,
            Route::LessEq | Route::LessEqAtTopPos => Class::LessEq,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PipelineResult {
    pub target: ShiftedPair,
    pub params: Params,
    /// `i`, recorded for routes that fix it.
    pub one_pos: Option<usize>,
    /// `j`, recorded for routes that fix it.
    pub top_pos: Option<usize>,
    pub trace: Option<TraceRecord>,
}

/// Runs `route` on `w`, inferring the class parameters from its letters.
pub fn general_forward(w: &Word, top: Letter, route: Route, t: &mut Tracer) -> Result<PipelineResult> {
    let mut params = Params::infer(w, top)?;
    let shape = Shape::of(&params);
    if classify(w, top) != route.class() {
        return domain(format!("{w} is not in the {:?} half", route.class()));
    }

    let (y, z) = collapse_middle(w, top)?;
    t.step("collapse-middle", || {
        (Snapshot::word(w, 0), Snapshot::parts(&[(&y, 0), (&z, 0)]))
    });

    t.set_carry(&[(&z, 0)]);
    let three = match route {
        Route::Greater => greater_to_pair(&y, shape, t).map(|p| (p, None, None)),
        Route::LessEq => lesseq_to_pair(&y, shape, t).map(|p| (p, None, None)),
        Route::GreaterAtOnePos => {
            let i = finite(p_one(w, top), "p_1")?;
            greater_at_one_pos(&y, shape, i, t)
                .map(|sw| (ShiftedPair::new(sw.word, z.clone(), sw.shift), Some(i), None))
        }
        Route::LessEqAtTopPos => {
            let j = finite(p_max(w, top), "p_n")?;
            lesseq_at_top_pos(&y, shape, j, t).map(|sw| (ShiftedPair::new(sw.word, z.clone(), sw.shift), None, Some(j)))
        }
    };
    t.clear_carry();
    let (pair, one_pos, top_pos) = three?;

    let target = match route {
        Route::Greater | Route::LessEq => {
            let v = fill_highs(&pair.left, &z)?;
            t.step("fill-highs", || {
                (
                    Snapshot::parts(&[(&pair.left, 0), (&pair.right, pair.shift), (&z, 0)]),
                    Snapshot::parts(&[(&v, 0), (&pair.right, pair.shift)]),
                )
            });
            ShiftedPair::new(v, pair.right, pair.shift)
        }
        Route::GreaterAtOnePos | Route::LessEqAtTopPos => pair,
    };

    params.one_pos = one_pos;
    params.top_pos = top_pos;
    Ok(PipelineResult {
        target,
        params,
        one_pos,
        top_pos,
        trace: None,
    })
}

/// Inverse of [`general_forward`]. `params` must carry `i` (resp. `j`) for
/// the routes that fix it.
pub fn general_inverse(target: &ShiftedPair, params: &Params, route: Route, t: &mut Tracer) -> Result<Word> {
    params.validate()?;
    let top = params.top;
    let shape = Shape::of(params);

    let w3 = match route {
        Route::Greater | Route::LessEq => {
            let (y, z) = extract_highs(&target.left)?;
            t.step("extract-highs", || {
                (
                    Snapshot::parts(&[(&target.left, 0), (&target.right, target.shift)]),
                    Snapshot::parts(&[(&y, 0), (&target.right, target.shift), (&z, 0)]),
                )
            });
            let pair = ShiftedPair::new(y, target.right.clone(), target.shift);
            t.set_carry(&[(&z, 0)]);
            let w3 = if route == Route::Greater {
                greater_to_pair_inv(&pair, shape, t)
            } else {
                lesseq_to_pair_inv(&pair, shape, t)
            };
            t.clear_carry();
            (w3?, z)
        }
        Route::GreaterAtOnePos | Route::LessEqAtTopPos => {
            let sw = ShiftedWord::new(target.left.clone(), target.shift);
            t.set_carry(&[(&target.right, 0)]);
            let w3 = if route == Route::GreaterAtOnePos {
                match params.one_pos {
                    Some(i) => greater_at_one_pos_inv(&sw, shape, i, t),
                    None => domain("this route needs i"),
                }
            } else {
                match params.top_pos {
                    Some(j) => lesseq_at_top_pos_inv(&sw, shape, j, t),
                    None => domain("this route needs j"),
                }
            };
            t.clear_carry();
            (w3?, target.right.clone())
        }
    };

    let (y, z) = w3;
    let w = expand_middle(&y, &z, top)?;
    t.step("expand-middle", || {
        (Snapshot::parts(&[(&y, 0), (&z, 0)]), Snapshot::word(&w, 0))
    });
    if !params.class_freqs().contains(&w) {
        return domain(format!("{w} is not in the class fixed by the parameters"));
    }
    Ok(w)
}

/// Output of [`simplified_shift`]: `coinv(input) = coinv(word) + tops`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftOutcome {
    pub word: Word,
    /// `k` of the input, which is also the weight dropped.
    pub tops: usize,
    pub trace: Option<TraceRecord>,
}

/// Weight-shifting bijection `W_k^> -> q^k W_(k+1)^<=`, traced.
pub fn simplified_shift(w: &Word, top: Letter) -> Result<ShiftOutcome> {
    let mut t = Tracer::on();
    let (word, tops) = simplified_shift_with(w, top, &mut t)?;
    Ok(ShiftOutcome {
        word,
        tops,
        trace: t.finish(),
    })
}

/// Inverse of [`simplified_shift`], traced. Input is in `W_(k+1)^<=`.
pub fn simplified_shift_inv(w: &Word, top: Letter) -> Result<ShiftOutcome> {
    let mut t = Tracer::on();
    let (word, tops) = simplified_shift_inv_with(w, top, &mut t)?;
    Ok(ShiftOutcome {
        word,
        tops,
        trace: t.finish(),
    })
}

/// [`simplified_shift`] with a caller-supplied tracer. Returns `(w', k)`.
pub fn simplified_shift_with(w: &Word, top: Letter, t: &mut Tracer) -> Result<(Word, usize)> {
    let params = Params::infer(w, top)?;
    let (l, n, k) = (params.marked, params.len, params.tops);
    if classify(w, top) != Class::Greater {
        return domain(format!("{w} does not have p_n > p_1"));
    }

    // (a)
    let (y, z) = collapse_middle(w, top)?;
    t.step("collapse-middle", || {
        (Snapshot::word(w, 0), Snapshot::parts(&[(&y, 0), (&z, 0)]))
    });
    t.set_carry(&[(&z, 0)]);

    // (b) and (c): reach (u', v) in R(0^(N-i-k) 3^k) x q^(k+L(i-1)) R(1^(L-k-1) 2^(N-L-i+1)).
    let i = finite(p_one(&y, 3), "p_1")?;
    let v_shift = (k + l * (i - 1)) as u64;
    let (u_prime, v) = if k == 0 {
        let (got_i, v) = strip_one_tail(&y)?;
        if got_i != i {
            return internal(format!("strip_one_tail recovered i={got_i}, expected {i}"));
        }
        let u_prime = Word::repeat(0, n - i);
        t.step("strip-one-tail", || {
            (Snapshot::word(&y, 0), Snapshot::parts(&[(&u_prime, 0), (&v, v_shift)]))
        });
        (u_prime, v)
    } else {
        let placed = unplace(&y)?;
        let Some(s) = placed.top_pos.checked_sub(i + 1) else {
            return internal(format!("unplace recovered j={} <= i={i}", placed.top_pos));
        };
        let u_shift = (s * k) as u64;
        t.step("unplace", || {
            (
                Snapshot::word(&y, 0),
                Snapshot::parts(&[(&placed.y, u_shift), (&placed.z, v_shift)]),
            )
        });
        let u_prime = join_first_high(&ShiftedWord::new(placed.y.clone(), u_shift), n - i - 1, k, ZERO_THREE)?;
        t.step("join-first-high", || {
            (
                Snapshot::parts(&[(&placed.y, u_shift), (&placed.z, v_shift)]),
                Snapshot::parts(&[(&u_prime, 0), (&placed.z, v_shift)]),
            )
        });
        (u_prime, placed.z)
    };

    // Reread the same pair as q^k times an element of the k+1 intermediate set.
    let next = k + 1;
    let Some(j_next) = (n + 1).checked_sub(next + u_prime.count(0)) else {
        return internal("too many zeros in u'");
    };
    if j_next != i {
        return internal(format!("j' = {j_next} differs from i = {i}"));
    }
    let u_shift = (l * (j_next - 1)) as u64;
    t.step("regroup", || {
        let mut after = Snapshot::parts(&[(&u_prime, u_shift), (&v, 0)]);
        after.outer = k as u64;
        (Snapshot::parts(&[(&u_prime, 0), (&v, v_shift)]), after)
    });
    t.set_outer(k as u64);

    // (d) and (e)
    let y_next = if next < l {
        let v_cut = split_last_low(&v, ONE_TWO)?;
        let s_next = (v_cut.shift / (l - next) as u64) as usize;
        t.step("split-last-low", || {
            (
                Snapshot::parts(&[(&u_prime, u_shift), (&v, 0)]),
                Snapshot::parts(&[(&u_prime, u_shift), (&v_cut.word, v_cut.shift)]),
            )
        });
        let placement = Placement {
            one_pos: s_next + j_next,
            top_pos: j_next,
            tops: next,
            marked: l,
            len: n,
            y: u_prime.clone(),
            z: v_cut.word.clone(),
        };
        let y_next = place(&placement)?;
        t.step("place", || {
            (
                Snapshot::parts(&[(&u_prime, u_shift), (&v_cut.word, v_cut.shift)]),
                Snapshot::word(&y_next, 0),
            )
        });
        y_next
    } else {
        if v.count(1) != 0 {
            return internal(format!("with k' = L the word {v} must be all 2s"));
        }
        let twos = u_prime.map(|x| if x == 0 { 2 } else { x });
        t.step("relabel-zeros", || {
            (
                Snapshot::parts(&[(&u_prime, u_shift), (&v, 0)]),
                Snapshot::word(&twos, u_shift),
            )
        });
        let y_next = prepend_two_head(j_next, l, n, &twos)?;
        t.step("prepend-two-head", || {
            (Snapshot::word(&twos, u_shift), Snapshot::word(&y_next, 0))
        });
        y_next
    };
    t.clear_carry();

    // (f)
    let w_next = expand_middle(&y_next, &z, top)?;
    t.step("expand-middle", || {
        (Snapshot::parts(&[(&y_next, 0), (&z, 0)]), Snapshot::word(&w_next, 0))
    });
    t.set_outer(0);
    Ok((w_next, k))
}

/// [`simplified_shift_inv`] with a caller-supplied tracer. Returns `(w, k)`
/// where `w` is in `W_k^>`.
pub fn simplified_shift_inv_with(w: &Word, top: Letter, t: &mut Tracer) -> Result<(Word, usize)> {
    let params = Params::infer(w, top)?;
    let (l, n, next) = (params.marked, params.len, params.tops);
    if next == 0 {
        return domain("input must contain the top letter");
    }
    if classify(w, top) != Class::LessEq {
        return domain(format!("{w} does not have p_n <= p_1"));
    }
    let k = next - 1;
    t.set_outer(k as u64);

    let (y_next, z) = collapse_middle(w, top)?;
    t.step("collapse-middle", || {
        (Snapshot::word(w, 0), Snapshot::parts(&[(&y_next, 0), (&z, 0)]))
    });
    t.set_carry(&[(&z, 0)]);

    let j_next = finite(p_max(&y_next, 3), "p_3")?;
    let u_shift = (l * (j_next - 1)) as u64;
    let (u_prime, v) = if next < l {
        let placed = unplace(&y_next)?;
        let Some(s_next) = placed.one_pos.checked_sub(j_next) else {
            return internal(format!("unplace recovered i={} < j={j_next}", placed.one_pos));
        };
        let cut_shift = (s_next * (l - next)) as u64;
        t.step("unplace", || {
            (
                Snapshot::word(&y_next, 0),
                Snapshot::parts(&[(&placed.y, u_shift), (&placed.z, cut_shift)]),
            )
        });
        let v = join_last_low(
            &ShiftedWord::new(placed.z.clone(), cut_shift),
            n - next - j_next,
            l - next,
            ONE_TWO,
        )?;
        t.step("join-last-low", || {
            (
                Snapshot::parts(&[(&placed.y, u_shift), (&placed.z, cut_shift)]),
                Snapshot::parts(&[(&placed.y, u_shift), (&v, 0)]),
            )
        });
        (placed.y, v)
    } else {
        let (got_j, twos) = strip_two_head(&y_next)?;
        if got_j != j_next {
            return internal(format!("strip_two_head recovered j={got_j}, expected {j_next}"));
        }
        t.step("strip-two-head", || {
            (Snapshot::word(&y_next, 0), Snapshot::word(&twos, u_shift))
        });
        let u_prime = twos.map(|x| if x == 2 { 0 } else { x });
        let Some(v_len) = (n + 1).checked_sub(l + j_next) else {
            return internal("j' too large");
        };
        let v = Word::repeat(2, v_len);
        t.step("restore-zeros", || {
            (
                Snapshot::word(&twos, u_shift),
                Snapshot::parts(&[(&u_prime, u_shift), (&v, 0)]),
            )
        });
        (u_prime, v)
    };

    let i = j_next;
    let v_shift = (k + l * (i - 1)) as u64;
    t.set_outer(0);
    t.step("regroup", || {
        let mut before = Snapshot::parts(&[(&u_prime, u_shift), (&v, 0)]);
        before.outer = k as u64;
        (before, Snapshot::parts(&[(&u_prime, 0), (&v, v_shift)]))
    });

    let y = if k == 0 {
        if u_prime.count(3) != 0 {
            return internal(format!("with k = 0 the word {u_prime} must be all 0s"));
        }
        let y = append_one_tail(i, l, n, &v)?;
        t.step("append-one-tail", || {
            (Snapshot::parts(&[(&u_prime, 0), (&v, v_shift)]), Snapshot::word(&y, 0))
        });
        y
    } else {
        let u = split_first_high(&u_prime, ZERO_THREE)?;
        let s = (u.shift / k as u64) as usize;
        t.step("split-first-high", || {
            (
                Snapshot::parts(&[(&u_prime, 0), (&v, v_shift)]),
                Snapshot::parts(&[(&u.word, u.shift), (&v, v_shift)]),
            )
        });
        let placement = Placement {
            one_pos: i,
            top_pos: s + i + 1,
            tops: k,
            marked: l,
            len: n,
            y: u.word.clone(),
            z: v.clone(),
        };
        let y = place(&placement)?;
        t.step("place", || {
            (
                Snapshot::parts(&[(&u.word, u.shift), (&v, v_shift)]),
                Snapshot::word(&y, 0),
            )
        });
        y
    };
    t.clear_carry();

    let w_prev = expand_middle(&y, &z, top)?;
    t.step("expand-middle", || {
        (Snapshot::parts(&[(&y, 0), (&z, 0)]), Snapshot::word(&w_prev, 0))
    });
    Ok((w_prev, k))
}

/// The full forward-then-backward route through the general bijections:
/// `w` in `W_k^>` goes to its intermediate pair, the outer `q^k` is set
/// aside, and the pair is pulled back through the `W_(k+1)^<=` bijection.
/// Agrees pointwise with [`simplified_shift`].
pub fn composed_shift(w: &Word, top: Letter, t: &mut Tracer) -> Result<(Word, usize)> {
    let forward = general_forward(w, top, Route::Greater, t)?;
    let k = forward.params.tops;
    let params = forward.params.with_tops(k + 1);
    let pair = ShiftedPair::new(forward.target.left, forward.target.right, 0);
    t.set_outer(k as u64);
    let out = general_inverse(
        &pair,
        &Params {
            one_pos: None,
            top_pos: None,
            ..params
        },
        Route::LessEq,
        t,
    );
    t.set_outer(0);
    Ok((out?, k))
}

/// Inverse of [`composed_shift`]: `w` in `W_(k+1)^<=` goes to its pair, the
/// factor `q^k` is restored, and the pair is pulled back into `W_k^>`.
pub fn composed_shift_inv(w: &Word, top: Letter, t: &mut Tracer) -> Result<(Word, usize)> {
    let forward = general_forward(w, top, Route::LessEq, t)?;
    let Some(k) = forward.params.tops.checked_sub(1) else {
        return domain("input must contain the top letter");
    };
    let params = forward.params.with_tops(k);
    let pair = ShiftedPair::new(forward.target.left, forward.target.right, k as u64);
    let out = general_inverse(
        &pair,
        &Params {
            one_pos: None,
            top_pos: None,
            ..params
        },
        Route::Greater,
        t,
    )?;
    Ok((out, k))
}
