//! Finite temporal series over an integer timeline, and the reasoning layers
//! built on top of them.
//!
//! The crate is organised bottom-up:
//!
//! * [`interval`] / [`series`] — convex intervals with half-open semantics and
//!   the algebra of ordered disjoint sequences of them (restriction,
//!   agglomeration, extraction, complement, ratios, quotients, …).
//! * [`calendar`] — generation of named calendar series (days, weeks, months,
//!   weekday and month names, seasons, day parts) over a bounded frame, with a
//!   proleptic Gregorian calendar at one-minute granularity.
//! * [`cti`] — a small normalized-French DSL for periodic adverbials
//!   ("tous les lundis de mars", "3 jours par semaine", …) parsed to an AST
//!   and evaluated to concrete series or quantified families of series.
//! * [`allen`] — the thirteen interval relations with a lattice coding,
//!   convex relation intervals, a machine-generated composition table and
//!   named coarse-relation vocabularies.
//! * [`network`] — qualitative constraint networks over intervals with
//!   queue-based path consistency and a scenario renderer.
//! * [`sdt`] — an aspect/tense calculus over role-tagged intervals
//!   (utterance, process, reference, circumstantial) that detects marker
//!   conflicts and resolves them by contraction or iteration.
//! * [`itermodel`] — iterations as (iterator, model) pairs instantiated into
//!   concrete occurrences on the timeline, with per-instance overrides and
//!   recursive nesting.
//! * [`extract`] — a surface scanner that spots periodic adverbial patterns
//!   in raw text and classifies their period words.
//!
//! The crate is `no_std` (with `alloc`); everything is deterministic and
//! side-effect free.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod allen;
pub mod calendar;
pub mod cti;
pub mod extract;
pub mod interval;
pub mod itermodel;
pub mod network;
pub mod sdt;
pub mod series;

pub use allen::{BaseRelation, ConvexRelation, RelationSet};
pub use calendar::{CalendarName, CivilDateTime, Frame, GenMode};
pub use interval::{ConvexInterval, GeneralizedInterval, Instant};
pub use network::{QualNetwork, Verdict};
pub use series::{RatioMap, RestrictMode, Series, SeriesError};
