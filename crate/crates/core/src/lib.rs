// SPDX-License-Identifier: Apache-2.0

//! Coinversion statistics on words, their q-generating functions, and
//! explicit weight-preserving bijections between classes of words.

pub mod bijections;
pub mod fault;
pub mod pipelines;
pub mod qpoly;
pub mod trace;
pub mod verify;
pub mod words;

pub use bijections::{BijectionError, LetterPair, Placement, ShiftedPair, ShiftedWord};
pub use pipelines::{PipelineError, PipelineResult, Route, ShiftOutcome};
pub use qpoly::{QPoly, QPolyError};
pub use trace::{Snapshot, TraceRecord, TraceStep, Tracer};
pub use verify::{BijectionId, Bounds, IdentityId, Report, Verdict, VerifyError};
pub use words::{Class, Freqs, Letter, Params, Position, Word, WordsError};
