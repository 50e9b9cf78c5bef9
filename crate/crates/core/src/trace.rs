// SPDX-License-Identifier: Apache-2.0

//! Step-by-step logs of composed bijections.
//!
//! Every intermediate object of a pipeline is a tuple of words, each with its
//! own weight shift, optionally under a common outer shift. A [`Snapshot`]
//! captures one such object. A step records the snapshots before and after
//! one primitive map; since every map is weight-preserving the snapshot
//! weights are constant along a trace.

use std::fmt;

use serde::Serialize;

use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Snapshot {
    pub outer: u64,
    pub parts: Vec<(Word, u64)>,
}

impl Snapshot {
    pub fn word(w: &Word, shift: u64) -> Self {
        Self {
            outer: 0,
            parts: vec![(w.clone(), shift)],
        }
    }

    pub fn parts(parts: &[(&Word, u64)]) -> Self {
        Self {
            outer: 0,
            parts: parts.iter().map(|&(w, s)| (w.clone(), s)).collect(),
        }
    }

    pub fn weight(&self) -> u64 {
        self.outer + self.parts.iter().map(|(w, s)| w.coinv() + s).sum::<u64>()
    }

    pub fn total_shift(&self) -> u64 {
        self.outer + self.parts.iter().map(|(_, s)| s).sum::<u64>()
    }

    fn in_context(mut self, outer: u64, carry: &[(Word, u64)]) -> Self {
        self.outer += outer;
        self.parts.extend_from_slice(carry);
        self
    }
}

impl fmt::Display for Snapshot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.outer > 0 {
            write!(f, "q^{}·", self.outer)?;
        }
        let wrap = self.parts.len() != 1 || self.outer > 0;
        if wrap {
            f.write_str("(")?;
        }
        for (idx, (w, s)) in self.parts.iter().enumerate() {
            if idx > 0 {
                f.write_str(", ")?;
            }
            if w.is_empty() {
                f.write_str("ε")?;
            } else {
                write!(f, "{w}")?;
            }
            if *s > 0 {
                write!(f, "·q^{s}")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub label: String,
    pub input: String,
    pub output: String,
    /// Change in total explicit shift across this step.
    pub shift_delta: i64,
    /// Weight of the output object.
    pub weight: u64,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.shift_delta < 0 { '-' } else { '+' };
        write!(
            f,
            "{}: {} -> {} [shift {}{}]",
            self.label,
            self.input,
            self.output,
            sign,
            self.shift_delta.unsigned_abs()
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub steps: Vec<TraceStep>,
    pub initial_weight: u64,
    pub final_weight: u64,
}

impl TraceRecord {
    /// Sum of all step shift deltas.
    pub fn net_shift(&self) -> i64 {
        self.steps.iter().map(|s| s.shift_delta).sum()
    }

    /// Weight is the same before and after every step.
    pub fn is_conserved(&self) -> bool {
        self.initial_weight == self.final_weight && self.steps.iter().all(|s| s.weight == self.initial_weight)
    }

    pub fn extend(&mut self, other: TraceRecord) {
        if self.steps.is_empty() {
            self.initial_weight = other.initial_weight;
        }
        self.final_weight = other.final_weight;
        self.steps.extend(other.steps);
    }
}

impl fmt::Display for TraceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            writeln!(f, "{step}")?;
        }
        Ok(())
    }
}

/// Collects steps when enabled; a disabled tracer never builds snapshots.
#[derive(Debug, Default)]
pub struct Tracer {
    record: Option<TraceRecord>,
    outer: u64,
    carry: Vec<(Word, u64)>,
}

impl Tracer {
    pub fn off() -> Self {
        Self {
            record: None,
            outer: 0,
            carry: Vec::new(),
        }
    }

    pub fn on() -> Self {
        Self {
            record: Some(TraceRecord::default()),
            outer: 0,
            carry: Vec::new(),
        }
    }

    pub fn is_on(&self) -> bool {
        self.record.is_some()
    }

    /// Sets a shift carried by every later snapshot.
    pub fn set_outer(&mut self, outer: u64) {
        self.outer = outer;
    }

    /// Appends `parts` to every later snapshot. Used for words that ride along
    /// untouched, such as the middle-letter word during three-letter steps.
    pub fn set_carry(&mut self, parts: &[(&Word, u64)]) {
        if self.is_on() {
            self.carry = parts.iter().map(|&(w, s)| (w.clone(), s)).collect();
        }
    }

    pub fn clear_carry(&mut self) {
        self.carry.clear();
    }

    pub fn step(&mut self, label: &str, snapshots: impl FnOnce() -> (Snapshot, Snapshot)) {
        let Some(record) = self.record.as_mut() else {
            return;
        };
        let (input, output) = snapshots();
        let input = input.in_context(self.outer, &self.carry);
        let output = output.in_context(self.outer, &self.carry);
        if record.steps.is_empty() {
            record.initial_weight = input.weight();
        }
        record.final_weight = output.weight();
        record.steps.push(TraceStep {
            label: label.to_string(),
            shift_delta: output.total_shift() as i64 - input.total_shift() as i64,
            weight: output.weight(),
            input: input.to_string(),
            output: output.to_string(),
        });
    }

    pub fn finish(self) -> Option<TraceRecord> {
        self.record
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn snapshot_rendering() {
        assert_eq!(Snapshot::word(&w("211222"), 18).to_string(), "211222·q^18");
        assert_eq!(Snapshot::word(&w("2112"), 0).to_string(), "2112");
        let pair = Snapshot::parts(&[(&w("30003030"), 4), (&w("211222"), 18)]);
        assert_eq!(pair.to_string(), "(30003030·q^4, 211222·q^18)");
        assert_eq!(pair.in_context(4, &[]).to_string(), "q^4·(30003030·q^4, 211222·q^18)");
        assert_eq!(
            Snapshot::parts(&[(&Word::empty(), 0), (&w("1"), 0)]).to_string(),
            "(ε, 1)"
        );
    }

    #[test]
    fn disabled_tracer_skips_snapshots() {
        let mut t = Tracer::off();
        t.step("never", || panic!("snapshots must not be built"));
        assert!(t.finish().is_none());
    }

    #[test]
    fn step_bookkeeping() {
        let mut t = Tracer::on();
        t.step("split", || {
            (Snapshot::word(&w("211222"), 0), Snapshot::word(&w("21"), 6))
        });
        let rec = t.finish().unwrap();
        assert_eq!(rec.steps[0].to_string(), "split: 211222 -> 21·q^6 [shift +6]");
        assert_eq!(rec.net_shift(), 6);
        assert!(rec.is_conserved());
    }
}
