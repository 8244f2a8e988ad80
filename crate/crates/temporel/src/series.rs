//! Ordered sequences of pairwise-disjoint convex intervals and their algebra.
//!
//! A [`Series`] is the denotation of a periodic temporal expression: "the
//! Mondays of March", "the weeks of 2005". Formally it is a finite sequence
//! `S_1, ..., S_n` of convex intervals with `end(S_i) <= beg(S_{i+1})` and
//! `S_i != S_{i+1}` — the enumeration order is the timeline order. The
//! degenerate case `beg == end` (a point) may sit exactly on the left edge of
//! its successor; non-degenerate members never overlap.
//!
//! The operators come in three groups: *restriction* (filter members by a
//! reference region), *agglomeration* (merge runs of members into their
//! hulls), and *extraction* (select members by position). On top of those sit
//! the derived operators: complements and gaps, per-component counting
//! (ratios), positional restriction, and interval definition ("from each A to
//! the next B").

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::interval::{convexify, ConvexInterval, GeneralizedInterval, Instant};

/// Errors raised by interval and series construction and by the operators
/// whose preconditions are checked at run time.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("interval bounds reversed: beg {beg} > end {end}")]
    ReversedBounds { beg: Instant, end: Instant },
    #[error("not a series: {first:?} then {second:?} violates order or distinctness")]
    NotASeries {
        first: ConvexInterval,
        second: ConvexInterval,
    },
    #[error("operation needs a nonempty input")]
    EmptyInput,
    #[error("index {n} out of range 1..={len}")]
    OutOfRange { n: usize, len: usize },
    #[error("interval is not an element of the series")]
    NotAnElement,
    #[error("series is not included in the reference")]
    NotIncluded,
    #[error("no component of the parent series contains the interval")]
    NoComponent,
    #[error("grouping does not form contiguous index runs (index {index})")]
    IncompatibleEquivalence { index: usize },
    #[error("extraction pattern keeps {n} of {p}: n must not exceed p")]
    BadPattern { n: usize, p: usize },
    #[error("group size must be at least 1")]
    ZeroGroupSize,
}

/// How restriction treats members that only partially lie in the reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RestrictMode {
    /// Keep only members entirely inside the reference.
    #[default]
    Strict,
    /// Keep clipped remainders of every member that meets the reference.
    Soft,
}

/// A finite ordered sequence of pairwise-disjoint convex intervals.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Series {
    items: Vec<ConvexInterval>,
}

impl core::fmt::Debug for Series {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_list().entries(self.items.iter()).finish()
    }
}

impl From<ConvexInterval> for Series {
    fn from(j: ConvexInterval) -> Self {
        Series {
            items: alloc::vec![j],
        }
    }
}

impl<'a> IntoIterator for &'a Series {
    type Item = &'a ConvexInterval;
    type IntoIter = core::slice::Iter<'a, ConvexInterval>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

impl Series {
    /// Validates and wraps a sequence of intervals. The sequence must already
    /// be in timeline order: `end(S_i) <= beg(S_{i+1})` with consecutive
    /// members distinct.
    pub fn new(items: Vec<ConvexInterval>) -> Result<Self, SeriesError> {
        for w in items.windows(2) {
            if !(w[0].order_leq(&w[1]) && w[0] != w[1]) {
                return Err(SeriesError::NotASeries {
                    first: w[0],
                    second: w[1],
                });
            }
        }
        Ok(Series { items })
    }

    pub fn empty() -> Self {
        Series::default()
    }

    /// Internal constructor for sequences the caller has proven valid.
    pub(crate) fn from_sorted_unchecked(items: Vec<ConvexInterval>) -> Self {
        debug_assert!(items
            .windows(2)
            .all(|w| w[0].order_leq(&w[1]) && w[0] != w[1]));
        Series { items }
    }

    pub fn items(&self) -> &[ConvexInterval] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, ConvexInterval> {
        self.items.iter()
    }

    /// 1-based member access (the enumeration is the bijection onto 1..n).
    pub fn nth(&self, n: usize) -> Result<ConvexInterval, SeriesError> {
        if n == 0 || n > self.items.len() {
            return Err(SeriesError::OutOfRange {
                n,
                len: self.items.len(),
            });
        }
        Ok(self.items[n - 1])
    }

    pub fn fst(&self) -> Result<ConvexInterval, SeriesError> {
        self.items.first().copied().ok_or(SeriesError::EmptyInput)
    }

    /// Position of a member, 1-based.
    pub fn ordre(&self, i: &ConvexInterval) -> Result<usize, SeriesError> {
        self.items
            .iter()
            .position(|x| x == i)
            .map(|p| p + 1)
            .ok_or(SeriesError::NotAnElement)
    }

    /// The member immediately after `i`, or `None` when `i` is last.
    pub fn succ(&self, i: &ConvexInterval) -> Result<Option<ConvexInterval>, SeriesError> {
        let pos = self.ordre(i)?;
        Ok(self.items.get(pos).copied())
    }

    /// The underlying point set, structured as a generalized interval.
    pub fn ext(&self) -> Result<GeneralizedInterval, SeriesError> {
        if self.items.is_empty() {
            return Err(SeriesError::EmptyInput);
        }
        Ok(GeneralizedInterval::from_sorted_parts(self.items.clone()))
    }

    /// Smallest aligned convex interval spanning the series (min beg, max end).
    pub fn convexified(&self) -> Result<ConvexInterval, SeriesError> {
        convexify(&self.items)
    }

    /// Inclusion: every member lies point-wise inside some single member of
    /// `other`. ("The Mondays are included in the weeks.")
    pub fn included_in(&self, other: &Series) -> bool {
        self.items
            .iter()
            .all(|i| other.items.iter().any(|j| i.inside(j)))
    }

    /// Extraction: every member of `self` *is* a member of `other`.
    /// Extraction implies inclusion, never the converse.
    pub fn extracted_from(&self, other: &Series) -> bool {
        self.items
            .iter()
            .all(|i| other.items.iter().any(|j| i == j))
    }

    /// For each member `J` of `parent`, how many members of `self` lie inside
    /// `J`. Requires `self` included in `parent`; each member is counted at
    /// its first containing component (ties only arise for a point sitting on
    /// a component boundary).
    pub fn ratio(&self, parent: &Series) -> Result<RatioMap, SeriesError> {
        if !self.included_in(parent) {
            return Err(SeriesError::NotIncluded);
        }
        let mut counts = alloc::vec![0usize; parent.len()];
        for i in &self.items {
            if let Some(idx) = parent.items.iter().position(|j| i.inside(j)) {
                counts[idx] += 1;
            }
        }
        Ok(RatioMap {
            entries: parent.items.iter().copied().zip(counts).collect(),
        })
    }

    /// The component of `parent` containing `i` (first match when a boundary
    /// point is shared by a degenerate component and its successor).
    pub fn component_containing(&self, i: &ConvexInterval) -> Result<ConvexInterval, SeriesError> {
        self.items
            .iter()
            .find(|j| i.inside(j))
            .copied()
            .ok_or(SeriesError::NoComponent)
    }

    /// Maximal aligned sub-spans of `reference` that meet no member of
    /// `self`. Touching reference components merge first, so the remainder
    /// forms conglomerates across component boundaries. Requires `self`
    /// included in `reference`.
    ///
    /// Granularity note: removing a point `p` from a span blocks the whole
    /// granule starting at `p` — the true remainder `(p, p+1)` contains no
    /// aligned span.
    pub fn complement(&self, reference: &Series) -> Result<Series, SeriesError> {
        if !self.included_in(reference) {
            return Err(SeriesError::NotIncluded);
        }
        if reference.is_empty() {
            return Ok(Series::empty());
        }
        let merged = reference.ext()?.merged();
        let mut out = Vec::new();
        let mut blockers = self.items.iter().peekable();
        for r in merged {
            if r.is_point() {
                let blocked = loop {
                    match blockers.peek() {
                        Some(b) if b.order_leq(&r) || b.intersects(&r) => {
                            if b.intersects(&r) {
                                blockers.next();
                                break true;
                            }
                            blockers.next();
                        }
                        _ => break false,
                    }
                };
                if !blocked {
                    out.push(r);
                }
                continue;
            }
            let mut cursor = r.beg();
            while let Some(b) = blockers.peek() {
                if !b.intersects(&r) && !(b.is_point() && b.beg() == r.beg()) {
                    if b.order_leq(&r) {
                        blockers.next();
                        continue;
                    }
                    break;
                }
                let b = *blockers.next().unwrap();
                if b.is_point() {
                    if b.beg() > cursor {
                        out.push(ConvexInterval::new(cursor, b.beg())?);
                    }
                    cursor = cursor.max(b.beg() + 1);
                } else {
                    if b.beg() > cursor {
                        out.push(ConvexInterval::new(cursor, b.beg())?);
                    }
                    cursor = cursor.max(b.end());
                }
            }
            if cursor < r.end() {
                out.push(ConvexInterval::new(cursor, r.end())?);
            }
        }
        Ok(Series::from_sorted_unchecked(out))
    }

    /// The holes between consecutive members: complement within the series'
    /// own convex hull. Empty input gives an empty result.
    ///
    /// When the last member is a point, the hull ends *at* that point, which
    /// a single half-open span cannot carry; the reference is then the span
    /// up to the point plus the point itself.
    pub fn gap(&self) -> Result<Series, SeriesError> {
        if self.is_empty() {
            return Ok(Series::empty());
        }
        let hull = self.convexified()?;
        let last = self.items[self.items.len() - 1];
        let reference = if last.is_point() && !hull.is_point() {
            Series::new(alloc::vec![
                ConvexInterval::new(hull.beg(), last.beg())?,
                last,
            ])?
        } else {
            Series::from(hull)
        };
        self.complement(&reference)
    }

    /// Restriction by a single convex reference interval.
    pub fn restrict(&self, j: &ConvexInterval, mode: RestrictMode) -> Series {
        self.restrict_parts(core::slice::from_ref(j), mode)
    }

    /// Restriction by another series: members are kept (or clipped) against
    /// the reference's point set, so a member spanning two touching reference
    /// components still counts as inside.
    pub fn restrict_series(&self, reference: &Series, mode: RestrictMode) -> Series {
        if reference.is_empty() {
            return Series::empty();
        }
        let merged = GeneralizedInterval::from_sorted_parts(reference.items.clone()).merged();
        self.restrict_parts(&merged, mode)
    }

    fn restrict_parts(&self, parts: &[ConvexInterval], mode: RestrictMode) -> Series {
        let mut out: Vec<ConvexInterval> = Vec::new();
        for i in &self.items {
            match mode {
                RestrictMode::Strict => {
                    if parts.iter().any(|p| i.inside(p)) {
                        out.push(*i);
                    }
                }
                RestrictMode::Soft => {
                    for p in parts {
                        if let Some(piece) = i.intersection(p) {
                            // A point member shared with its neighbour's edge
                            // can be clipped out twice; keep one copy.
                            if out.last() != Some(&piece) {
                                out.push(piece);
                            }
                        }
                    }
                }
            }
        }
        Series::from_sorted_unchecked(out)
    }

    /// Keeps the members ranking `n`-th inside their containing component of
    /// `parent` ("the second Monday of each March"). Components with fewer
    /// than `n` members contribute nothing; members of `self` outside every
    /// single component are skipped.
    pub fn restrict_nth(&self, parent: &Series, n: usize) -> Series {
        let mut set = BTreeSet::new();
        set.insert(n);
        self.restrict_rank_set(parent, &set)
    }

    /// Union of [`Series::restrict_nth`] over every rank in `ranks`,
    /// preserving timeline order.
    pub fn restrict_rank_set(&self, parent: &Series, ranks: &BTreeSet<usize>) -> Series {
        let restricted = self.restrict_series(parent, RestrictMode::Strict);
        let mut out = Vec::new();
        let mut current_comp: Option<usize> = None;
        let mut rank = 0usize;
        for i in restricted.iter() {
            let comp = parent.items.iter().position(|j| i.inside(j));
            let Some(comp) = comp else { continue };
            if current_comp == Some(comp) {
                rank += 1;
            } else {
                current_comp = Some(comp);
                rank = 1;
            }
            if ranks.contains(&rank) {
                out.push(*i);
            }
        }
        Series::from_sorted_unchecked(out)
    }

    /// Order-preserving filter by an arbitrary member predicate.
    pub fn restrict_pred<F: Fn(&ConvexInterval) -> bool>(&self, pred: F) -> Series {
        Series::from_sorted_unchecked(self.items.iter().copied().filter(|i| pred(i)).collect())
    }

    /// Replaces each contiguous run of members sharing a group id with the
    /// run's convex hull ("the quotient series"). Group ids must label
    /// contiguous index runs; reusing an id after a different one appeared is
    /// an incompatibility error.
    pub fn quotient<F: Fn(usize) -> u64>(&self, grouping: F) -> Result<Series, SeriesError> {
        let mut out = Vec::new();
        let mut seen: BTreeSet<u64> = BTreeSet::new();
        let mut run: Vec<ConvexInterval> = Vec::new();
        let mut run_id: Option<u64> = None;
        for (idx, item) in self.items.iter().enumerate() {
            let id = grouping(idx);
            match run_id {
                Some(current) if current == id => run.push(*item),
                _ => {
                    if !seen.insert(id) {
                        return Err(SeriesError::IncompatibleEquivalence { index: idx });
                    }
                    if !run.is_empty() {
                        out.push(convexify(&run)?);
                    }
                    run.clear();
                    run.push(*item);
                    run_id = Some(id);
                }
            }
        }
        if !run.is_empty() {
            out.push(convexify(&run)?);
        }
        Ok(Series::from_sorted_unchecked(out))
    }

    /// Agglomeration by constant packet size: hulls of consecutive groups of
    /// `n` members (the last group may be smaller).
    pub fn agglo(&self, n: usize) -> Result<Series, SeriesError> {
        if n == 0 {
            return Err(SeriesError::ZeroGroupSize);
        }
        self.quotient(|i| (i / n) as u64)
    }

    /// The first `n` members (or all of them when `n` exceeds the length).
    pub fn extract_first(&self, n: usize) -> Series {
        Series::from_sorted_unchecked(self.items[..n.min(self.items.len())].to_vec())
    }

    /// The last `n` members.
    pub fn extract_last(&self, n: usize) -> Series {
        let k = n.min(self.items.len());
        Series::from_sorted_unchecked(self.items[self.items.len() - k..].to_vec())
    }

    /// Periodic selection: from every block of `p` consecutive members, keep
    /// the first `n`. Equals ranked restriction against `agglo(self, p)` with
    /// ranks `1..=n`; implemented by direct index arithmetic.
    pub fn extract_pattern(&self, n: usize, p: usize) -> Result<Series, SeriesError> {
        if p == 0 {
            return Err(SeriesError::ZeroGroupSize);
        }
        if n > p {
            return Err(SeriesError::BadPattern { n, p });
        }
        Ok(Series::from_sorted_unchecked(
            self.items
                .iter()
                .enumerate()
                .filter(|(idx, _)| idx % p < n)
                .map(|(_, i)| *i)
                .collect(),
        ))
    }

    /// The point series of member beginnings (clock-time construction).
    /// Equal consecutive beginnings collapse to one point.
    pub fn begins(&self) -> Series {
        let mut out: Vec<ConvexInterval> = Vec::new();
        for i in &self.items {
            let p = ConvexInterval::point(i.beg());
            if out.last() != Some(&p) {
                out.push(p);
            }
        }
        Series::from_sorted_unchecked(out)
    }

    /// True when every member ends exactly where its successor begins
    /// (generic calendar names — days, months — are contiguous).
    pub fn is_contiguous(&self) -> bool {
        self.items.windows(2).all(|w| w[0].end() == w[1].beg())
    }
}

/// Pairs each member `A'` of `a` with the first member of `b` lying strictly
/// after it (`order_leq` and distinct), and takes the convex hull of the pair
/// — "from Monday to the following Friday". Members of `a` with no later
/// partner are dropped. The produced spans must themselves form a series;
/// overlapping spans are reported with the offending pair.
pub fn intdef(a: &Series, b: &Series) -> Result<Series, SeriesError> {
    let mut out: Vec<ConvexInterval> = Vec::new();
    for a_item in a.iter() {
        let partner = b
            .iter()
            .find(|b_item| a_item.order_leq(b_item) && a_item != *b_item);
        if let Some(b_item) = partner {
            out.push(ConvexInterval::new(a_item.beg(), b_item.end())?);
        }
    }
    Series::new(out)
}

/// Per-component member counts produced by [`Series::ratio`], keyed by the
/// parent series' members in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioMap {
    entries: Vec<(ConvexInterval, usize)>,
}

impl RatioMap {
    pub fn entries(&self) -> &[(ConvexInterval, usize)] {
        &self.entries
    }

    pub fn get(&self, j: &ConvexInterval) -> Option<usize> {
        self.entries.iter().find(|(k, _)| k == j).map(|(_, c)| *c)
    }

    /// When every component carries the same count, that count.
    pub fn constant(&self) -> Option<usize> {
        let mut counts = self.entries.iter().map(|(_, c)| *c);
        let first = counts.next()?;
        counts.all(|c| c == first).then_some(first)
    }

    pub fn total(&self) -> usize {
        self.entries.iter().map(|(_, c)| *c).sum()
    }
}
