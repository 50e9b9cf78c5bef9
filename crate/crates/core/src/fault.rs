// SPDX-License-Identifier: Apache-2.0

//! Corruption hook for checking that the verification engine actually detects
//! broken bijections.
//!
//! Without the `fault-injection` feature every [`tamper`] call compiles to
//! nothing. With it, [`inject`] arms one [`FaultSite`] process-wide and the
//! primitive at that site rotates its output word left by one letter.

use serde::Serialize;

use crate::words::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FaultSite {
    SplitFirstHigh,
    JoinFirstHigh,
    SplitLastLow,
    JoinLastLow,
    SeparateTops,
    MergeTops,
    SwapReverse,
    CollapseMiddle,
    ExpandMiddle,
    FillHighs,
    ExtractHighs,
    Place,
    Unplace,
    AppendOneTail,
    StripOneTail,
    PrependTwoHead,
    StripTwoHead,
}

impl FaultSite {
    pub const ALL: [FaultSite; 17] = [
        FaultSite::SplitFirstHigh,
        FaultSite::JoinFirstHigh,
        FaultSite::SplitLastLow,
        FaultSite::JoinLastLow,
        FaultSite::SeparateTops,
        FaultSite::MergeTops,
        FaultSite::SwapReverse,
        FaultSite::CollapseMiddle,
        FaultSite::ExpandMiddle,
        FaultSite::FillHighs,
        FaultSite::ExtractHighs,
        FaultSite::Place,
        FaultSite::Unplace,
        FaultSite::AppendOneTail,
        FaultSite::StripOneTail,
        FaultSite::PrependTwoHead,
        FaultSite::StripTwoHead,
    ];
}

#[cfg(feature = "fault-injection")]
mod armed {
    use super::FaultSite;
    use std::sync::atomic::{AtomicUsize, Ordering};

    // 0 means disarmed, otherwise index + 1 into FaultSite::ALL.
    static ARMED: AtomicUsize = AtomicUsize::new(0);

    pub fn set(site: Option<FaultSite>) {
        let code = site.map_or(0, |s| FaultSite::ALL.iter().position(|&x| x == s).unwrap() + 1);
        ARMED.store(code, Ordering::SeqCst);
    }

    pub fn is(site: FaultSite) -> bool {
        let code = ARMED.load(Ordering::Relaxed);
        code != 0 && FaultSite::ALL[code - 1] == site
    }
}

/// Disarms the hook when dropped.
#[cfg(feature = "fault-injection")]
#[must_use]
pub struct FaultGuard(());

#[cfg(feature = "fault-injection")]
impl Drop for FaultGuard {
    fn drop(&mut self) {
        armed::set(None);
    }
}

/// Arms `site` until the returned guard is dropped. Affects every thread.
#[cfg(feature = "fault-injection")]
pub fn inject(site: FaultSite) -> FaultGuard {
    armed::set(Some(site));
    FaultGuard(())
}

#[cfg(feature = "fault-injection")]
#[inline]
pub(crate) fn tamper(site: FaultSite, word: &mut Word) {
    if armed::is(site) && word.len() >= 2 {
        let mut letters = std::mem::take(word).into_letters();
        letters.rotate_left(1);
        *word = Word::new(letters);
    }
}

#[cfg(not(feature = "fault-injection"))]
#[inline(always)]
pub(crate) fn tamper(_site: FaultSite, _word: &mut Word) {}
