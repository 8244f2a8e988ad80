//! Instants and convex intervals on the integer timeline.
//!
//! The timeline is the integers, read as minutes since some frame origin.
//! An interval with `beg < end` is the half-open span `[beg, end)`; an
//! interval with `beg == end` is the single point `beg`. Half-open semantics
//! make touching spans disjoint, which is what lets contiguous series
//! (`end(I) = beg(succ(I))`) satisfy the disjointness requirement.

use alloc::vec::Vec;

use crate::series::SeriesError;

/// A timeline position, in minutes from the frame origin.
pub type Instant = i64;

/// A convex piece of the timeline: either a half-open span or a point.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConvexInterval {
    beg: Instant,
    end: Instant,
}

impl core::fmt::Debug for ConvexInterval {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.is_point() {
            write!(f, "[{}]", self.beg)
        } else {
            write!(f, "[{},{})", self.beg, self.end)
        }
    }
}

impl ConvexInterval {
    /// Builds `[beg, end)` (or the point `beg` when `beg == end`).
    pub fn new(beg: Instant, end: Instant) -> Result<Self, SeriesError> {
        if beg > end {
            return Err(SeriesError::ReversedBounds { beg, end });
        }
        Ok(Self { beg, end })
    }

    /// The degenerate interval holding exactly one instant.
    pub fn point(at: Instant) -> Self {
        Self { beg: at, end: at }
    }

    pub fn beg(&self) -> Instant {
        self.beg
    }

    pub fn end(&self) -> Instant {
        self.end
    }

    pub fn is_point(&self) -> bool {
        self.beg == self.end
    }

    /// Span length in minutes; zero for points.
    pub fn len(&self) -> i64 {
        self.end - self.beg
    }

    /// `end(self) <= beg(other)`: self lies entirely at or before the start
    /// of `other`. A point on the left edge of a span satisfies this *and*
    /// intersects the span; the two notions are distinct on purpose.
    pub fn order_leq(&self, other: &Self) -> bool {
        self.end <= other.beg
    }

    /// Point-set intersection test under half-open/point semantics.
    pub fn intersects(&self, other: &Self) -> bool {
        match (self.is_point(), other.is_point()) {
            (true, true) => self.beg == other.beg,
            (true, false) => other.beg <= self.beg && self.beg < other.end,
            (false, true) => self.beg <= other.beg && other.beg < self.end,
            (false, false) => self.beg < other.end && other.beg < self.end,
        }
    }

    /// Point-set containment: every instant of `self` belongs to `other`.
    pub fn inside(&self, other: &Self) -> bool {
        if self.is_point() {
            if other.is_point() {
                self.beg == other.beg
            } else {
                other.beg <= self.beg && self.beg < other.end
            }
        } else {
            !other.is_point() && other.beg <= self.beg && self.end <= other.end
        }
    }

    /// The convex overlap of two intervals, when nonempty.
    pub fn intersection(&self, other: &Self) -> Option<Self> {
        if !self.intersects(other) {
            return None;
        }
        let beg = self.beg.max(other.beg);
        let end = self.end.min(other.end);
        Some(Self { beg, end })
    }
}

/// Smallest convex interval covering every member of `parts`.
pub fn convexify(parts: &[ConvexInterval]) -> Result<ConvexInterval, SeriesError> {
    let first = parts.first().ok_or(SeriesError::EmptyInput)?;
    let mut beg = first.beg();
    let mut end = first.end();
    for p in &parts[1..] {
        beg = beg.min(p.beg());
        end = end.max(p.end());
    }
    Ok(ConvexInterval { beg, end })
}

/// A finite union of convex intervals, kept in increasing order.
///
/// This is the shape of `ext(S)` for a series `S`: the underlying point set
/// without the enumeration structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedInterval {
    parts: Vec<ConvexInterval>,
}

impl GeneralizedInterval {
    pub(crate) fn from_sorted_parts(parts: Vec<ConvexInterval>) -> Self {
        debug_assert!(!parts.is_empty());
        Self { parts }
    }

    pub fn parts(&self) -> &[ConvexInterval] {
        &self.parts
    }

    pub fn beg(&self) -> Instant {
        self.parts.first().map(|p| p.beg()).unwrap_or(0)
    }

    pub fn end(&self) -> Instant {
        self.parts.iter().map(|p| p.end()).max().unwrap_or(0)
    }

    /// Merges parts that touch or overlap into maximal convex pieces of the
    /// same point set.
    ///
    /// `[0,2) ∪ [2,4)` collapses to `[0,4)` and a point on the left edge of a
    /// span is absorbed by it. A point touching the *end* of a span stays
    /// separate: `[0,2) ∪ {2}` contains the instant 2 but is not convex under
    /// half-open semantics.
    pub fn merged(&self) -> Vec<ConvexInterval> {
        let mut out: Vec<ConvexInterval> = Vec::new();
        for part in &self.parts {
            let mut p = *part;
            while let Some(last) = out.last() {
                let joinable = p.beg() < last.end()
                    || (p.beg() == last.end() && (!p.is_point() || last.is_point()));
                if !joinable {
                    break;
                }
                p = ConvexInterval {
                    beg: last.beg(),
                    end: last.end().max(p.end()),
                };
                out.pop();
            }
            out.push(p);
        }
        out
    }
}
