//! Object model of iterations: an iterator (what repeats the occurrences)
//! paired with an iterative model (what one occurrence looks like),
//! instantiated into concrete itérés on the timeline, with per-instance
//! overrides and recursive nesting.
//!
//! The model lives in its own temporality: slot positions are
//! [`ModelSpan`] offsets from a model origin and are never timeline
//! instants. Instantiation is the only bridge — it maps model offsets
//! affinely into each hosting interval.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::allen::{base_relation, BaseRelation, ConvexRelation, RelationSet};
use crate::calendar::{CalendarName, Frame, GenMode};
use crate::cti::FreqAdverb;
use crate::interval::{ConvexInterval, Instant};
use crate::network::{QualNetwork, Verdict};
use crate::series::Series;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IterError {
    #[error("model span must have beg <= end, got [{beg}, {end}]")]
    ReversedSpan { beg: i64, end: i64 },
    #[error("a process model needs a proper span (beg < end)")]
    DegenerateProcess,
    #[error("an interval iterator needs a nonempty series")]
    EmptySeries,
    #[error("a numeric iterator needs a positive count")]
    NonPositiveCount,
    #[error("the iterative model needs at least one slot")]
    NoSlots,
    #[error("duplicate slot name `{0}`")]
    DuplicateSlot(String),
    #[error("relation endpoint `{0}` names no slot")]
    UnknownSlot(String),
    #[error("a numeric iterator needs a cadre to place its occurrences")]
    MissingCadre,
    #[error("an eventive iterator needs at least one trigger")]
    EmptyTriggerSeries,
    #[error("the cadre is too small to hold distinct occurrences")]
    CadreTooSmall,
    #[error("no itéré at index {index}, only {len}")]
    BadIndex { index: usize, len: usize },
    #[error("the override leaves the iterator slot")]
    OverrideOutOfSlot,
}

/// A span in model temporality: offsets from the model origin, not
/// timeline instants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelSpan {
    beg: i64,
    end: i64,
}

impl ModelSpan {
    pub fn new(beg: i64, end: i64) -> Result<Self, IterError> {
        if beg > end {
            return Err(IterError::ReversedSpan { beg, end });
        }
        Ok(ModelSpan { beg, end })
    }

    pub fn point(at: i64) -> Self {
        ModelSpan { beg: at, end: at }
    }

    pub fn beg(self) -> i64 {
        self.beg
    }

    pub fn end(self) -> i64 {
        self.end
    }

    pub fn len(self) -> i64 {
        self.end - self.beg
    }

    pub fn is_empty(self) -> bool {
        self.len() == 0
    }
}

/// What repeats the occurrences.
#[derive(Debug, Clone, PartialEq)]
pub enum IteratorSpec {
    /// A calendar-like series hosts one occurrence per component.
    ByIntervals(Series),
    /// A stated number of occurrences, placed evenly in the cadre.
    Numeric(u32),
    /// A pragmatic density over a calendar unit.
    Frequential {
        class: FreqAdverb,
        unit_hint: CalendarName,
    },
    /// Externally supplied trigger intervals, one occurrence each.
    Eventive(Series),
}

/// One process inside the model, positioned in model temporality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessModel {
    pub name: String,
    pub model_interval: ModelSpan,
    pub reference_interval: ModelSpan,
}

/// A slot is a process, or a whole nested iteration occupying a sub-span
/// of the model (the full occurrence when no span is given).
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSlot {
    Process(ProcessModel),
    Nested {
        name: String,
        span: Option<ModelSpan>,
        iteration: Box<Iteration>,
    },
}

impl ModelSlot {
    pub fn name(&self) -> &str {
        match self {
            ModelSlot::Process(p) => &p.name,
            ModelSlot::Nested { name, .. } => name,
        }
    }

    fn span(&self) -> Option<ModelSpan> {
        match self {
            ModelSlot::Process(p) => Some(p.model_interval),
            ModelSlot::Nested { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationKind {
    Temporal(ConvexRelation),
    /// Defaults to temporal succession when projected.
    Causal,
    /// Defaults to temporal overlap when projected.
    Meronymic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelRelation {
    pub kind: RelationKind,
    pub from: String,
    pub to: String,
}

/// What one occurrence looks like: slots plus relations between them.
#[derive(Debug, Clone, PartialEq)]
pub struct IterativeModel {
    pub slots: Vec<ModelSlot>,
    pub relations: Vec<ModelRelation>,
}

impl IterativeModel {
    pub fn validate(&self) -> Result<(), IterError> {
        if self.slots.is_empty() {
            return Err(IterError::NoSlots);
        }
        let mut names: Vec<&str> = Vec::new();
        for slot in &self.slots {
            if names.contains(&slot.name()) {
                return Err(IterError::DuplicateSlot(slot.name().into()));
            }
            names.push(slot.name());
            if let ModelSlot::Process(p) = slot {
                if p.model_interval.is_empty() {
                    return Err(IterError::DegenerateProcess);
                }
            }
        }
        for rel in &self.relations {
            for end in [&rel.from, &rel.to] {
                if !names.contains(&end.as_str()) {
                    return Err(IterError::UnknownSlot(end.clone()));
                }
            }
        }
        Ok(())
    }

    /// Hull of every positioned slot in model temporality; the unit span
    /// when nothing is positioned.
    fn hull(&self) -> ModelSpan {
        let mut bounds: Option<(i64, i64)> = None;
        for slot in &self.slots {
            let mut take = |s: ModelSpan| {
                bounds = Some(match bounds {
                    None => (s.beg, s.end),
                    Some((lo, hi)) => (lo.min(s.beg), hi.max(s.end)),
                });
            };
            if let Some(s) = slot.span() {
                take(s);
            }
            if let ModelSlot::Process(p) = slot {
                take(p.reference_interval);
            }
        }
        let (beg, end) = bounds.unwrap_or((0, 1));
        ModelSpan { beg, end }
    }
}

/// An iteration: iterator + model, optionally framed by a cadre.
#[derive(Debug, Clone, PartialEq)]
pub struct Iteration {
    pub iterator: IteratorSpec,
    pub model: IterativeModel,
    /// Timeline interval covering the whole iteration, when known.
    pub cadre: Option<ConvexInterval>,
    /// Whether the iterator itself bounds the series (a count or a given
    /// series) or the bounds come from outside (frequency, triggers).
    pub intrinsically_bounded: bool,
}

impl Iteration {
    pub fn new(
        iterator: IteratorSpec,
        model: IterativeModel,
        cadre: Option<ConvexInterval>,
    ) -> Result<Self, IterError> {
        model.validate()?;
        let intrinsically_bounded = match &iterator {
            IteratorSpec::ByIntervals(s) => {
                if s.is_empty() {
                    return Err(IterError::EmptySeries);
                }
                true
            }
            IteratorSpec::Numeric(n) => {
                if *n == 0 {
                    return Err(IterError::NonPositiveCount);
                }
                true
            }
            IteratorSpec::Frequential { .. } => false,
            IteratorSpec::Eventive(_) => {
                if model.slots.iter().any(|s| s.name() == TRIGGER_SLOT) {
                    return Err(IterError::DuplicateSlot(TRIGGER_SLOT.into()));
                }
                false
            }
        };
        Ok(Iteration {
            iterator,
            model,
            cadre,
            intrinsically_bounded,
        })
    }
}

/// Name of the implicit slot carrying an eventive trigger.
pub const TRIGGER_SLOT: &str = "declencheur";

/// Per-instance override values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OverridePatch {
    /// Move the occurrence; must stay inside the iterator slot.
    Anchor(ConvexInterval),
    /// Reposition one realized slot; must stay inside the iterator slot.
    Slot {
        name: String,
        interval: ConvexInterval,
    },
    /// Non-temporal singular content, stored opaquely.
    Content { key: String, value: String },
}

/// One concrete occurrence on the timeline.
#[derive(Debug, Clone, PartialEq)]
pub struct Itere {
    pub index: usize,
    /// Timeline interval of this occurrence.
    pub anchor: ConvexInterval,
    /// Iterator slot hosting the occurrence (e.g. the whole Sunday);
    /// overrides may move things anywhere inside it.
    pub source: ConvexInterval,
    pub realized_slots: Vec<(String, ConvexInterval)>,
    pub overrides: Vec<OverridePatch>,
    /// Inner itérés per nested slot.
    pub children: Vec<(String, Vec<Itere>)>,
}

// ---------------------------------------------------------------------------
// Instantiation

fn map_offset(hull: ModelSpan, target: ConvexInterval, t: i64) -> Instant {
    if hull.len() == 0 {
        return target.beg();
    }
    target.beg() + (t - hull.beg) * target.len() / hull.len()
}

fn map_span(hull: ModelSpan, target: ConvexInterval, s: ModelSpan) -> ConvexInterval {
    let beg = map_offset(hull, target, s.beg);
    let end = map_offset(hull, target, s.end);
    ConvexInterval::new(beg, end).expect("affine map is monotone")
}

/// Realizes the model once inside `target`, recursing into nested slots.
fn realize(
    model: &IterativeModel,
    frame: &Frame,
    index: usize,
    source: ConvexInterval,
    target: ConvexInterval,
) -> Result<Itere, IterError> {
    let hull = model.hull();
    let mut realized_slots = Vec::new();
    let mut children = Vec::new();
    for slot in &model.slots {
        match slot {
            ModelSlot::Process(p) => {
                realized_slots.push((p.name.clone(), map_span(hull, target, p.model_interval)));
            }
            ModelSlot::Nested {
                name,
                span,
                iteration,
            } => {
                let sub_target = match span {
                    Some(s) => map_span(hull, target, *s),
                    None => target,
                };
                let inner = instantiate_in(iteration, frame, Some(sub_target))?;
                children.push((name.clone(), inner));
            }
        }
    }
    Ok(Itere {
        index,
        anchor: target,
        source,
        realized_slots,
        overrides: Vec::new(),
        children,
    })
}

/// Evenly spaced interior positions of `cadre` (the included-ratio rule).
fn even_positions(cadre: ConvexInterval, n: usize) -> Vec<Instant> {
    let n64 = n as i64;
    (0..n64)
        .map(|k| cadre.beg() + (k + 1) * cadre.len() / (n64 + 1))
        .collect()
}

fn instantiate_in(
    iteration: &Iteration,
    frame: &Frame,
    cadre_override: Option<ConvexInterval>,
) -> Result<Vec<Itere>, IterError> {
    let model = &iteration.model;
    match &iteration.iterator {
        IteratorSpec::ByIntervals(series) => series
            .iter()
            .enumerate()
            .map(|(i, c)| realize(model, frame, i, *c, *c))
            .collect(),
        IteratorSpec::Eventive(triggers) => {
            if triggers.is_empty() {
                return Err(IterError::EmptyTriggerSeries);
            }
            let mut out = Vec::new();
            for (i, c) in triggers.iter().enumerate() {
                let mut itere = realize(model, frame, i, *c, *c)?;
                // the trigger belongs to the occurrence
                itere.realized_slots.insert(0, (TRIGGER_SLOT.into(), *c));
                out.push(itere);
            }
            Ok(out)
        }
        IteratorSpec::Numeric(n) => {
            let cadre = cadre_override
                .or(iteration.cadre)
                .ok_or(IterError::MissingCadre)?;
            let n = *n as usize;
            let positions = even_positions(cadre, n);
            let hull_len = model.hull().len();
            let mut out = Vec::new();
            for (k, &p) in positions.iter().enumerate() {
                let next = positions.get(k + 1).copied().unwrap_or(cadre.end());
                if k + 1 < n && next <= p {
                    return Err(IterError::CadreTooSmall);
                }
                // occurrences keep their model length where room permits,
                // and never run into the next occurrence
                let len = hull_len.min(next - p);
                let target = ConvexInterval::new(p, p + len).expect("len nonnegative");
                out.push(realize(model, frame, k, cadre, target)?);
            }
            Ok(out)
        }
        IteratorSpec::Frequential { class, unit_hint } => {
            let units = frame.gen(*unit_hint, GenMode::Strict);
            let capacity = units.len();
            let (num, den): (u64, u64) = match class {
                FreqAdverb::Souvent => (3, 4),
                FreqAdverb::Parfois => (1, 4),
                FreqAdverb::Rarement => (1, 10),
            };
            // round half-up
            let count = ((capacity as u64 * num * 2 + den) / (2 * den)) as usize;
            let mut out = Vec::new();
            for k in 0..count {
                let unit = units.nth(k * capacity / count + 1).expect("index in range");
                out.push(realize(model, frame, k, unit, unit)?);
            }
            Ok(out)
        }
    }
}

/// Projects the iteration onto the timeline: one itéré per occurrence the
/// iterator yields, each realized by cloning the model into its slot.
pub fn instantiate(iteration: &Iteration, frame: &Frame) -> Result<Vec<Itere>, IterError> {
    instantiate_in(iteration, frame, None)
}

// ---------------------------------------------------------------------------
// Overrides

fn remap_interval(old: ConvexInterval, new: ConvexInterval, v: ConvexInterval) -> ConvexInterval {
    let scale = |t: Instant| {
        if old.len() == 0 {
            new.beg()
        } else {
            new.beg() + (t - old.beg()) * new.len() / old.len()
        }
    };
    ConvexInterval::new(scale(v.beg()), scale(v.end())).expect("monotone")
}

fn remap_itere(itere: &mut Itere, old: ConvexInterval, new: ConvexInterval) {
    itere.anchor = remap_interval(old, new, itere.anchor);
    for (_, iv) in &mut itere.realized_slots {
        *iv = remap_interval(old, new, *iv);
    }
    for (_, inner) in &mut itere.children {
        for child in inner {
            remap_itere(child, old, new);
        }
    }
}

fn covers(outer: ConvexInterval, inner: ConvexInterval) -> bool {
    outer.beg() <= inner.beg() && inner.end() <= outer.end()
}

/// Applies one singular override to the `index`-th itéré, leaving the
/// others untouched. Temporal overrides must stay inside the iterator slot.
pub fn apply_override(
    iteres: &[Itere],
    index: usize,
    patch: OverridePatch,
) -> Result<Vec<Itere>, IterError> {
    let mut out = iteres.to_vec();
    let itere = out.get_mut(index).ok_or(IterError::BadIndex {
        index,
        len: iteres.len(),
    })?;
    match &patch {
        OverridePatch::Anchor(new_anchor) => {
            if !covers(itere.source, *new_anchor) {
                return Err(IterError::OverrideOutOfSlot);
            }
            let old = itere.anchor;
            remap_itere(itere, old, *new_anchor);
        }
        OverridePatch::Slot { name, interval } => {
            if !covers(itere.source, *interval) {
                return Err(IterError::OverrideOutOfSlot);
            }
            let slot = itere
                .realized_slots
                .iter_mut()
                .find(|(n, _)| n == name)
                .ok_or_else(|| IterError::UnknownSlot(name.clone()))?;
            slot.1 = *interval;
        }
        OverridePatch::Content { .. } => {}
    }
    itere.overrides.push(patch);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Model consistency

fn relation_content(kind: RelationKind) -> RelationSet {
    match kind {
        RelationKind::Temporal(cr) => cr.extension(),
        RelationKind::Causal => {
            RelationSet::singleton(BaseRelation::P) | RelationSet::singleton(BaseRelation::M)
        }
        RelationKind::Meronymic => ConvexRelation::new(BaseRelation::O, BaseRelation::Oi)
            .expect("o <= oi in the lattice")
            .extension(),
    }
}

/// Qualitative network of the model in its own temporality: geometric
/// relations between positioned slots plus the declared relations.
pub fn model_network(model: &IterativeModel) -> QualNetwork {
    let mut net = QualNetwork::new();
    for slot in &model.slots {
        net.ensure_node(slot.name());
    }
    for (i, a) in model.slots.iter().enumerate() {
        for b in model.slots.iter().skip(i + 1) {
            let (Some(sa), Some(sb)) = (a.span(), b.span()) else {
                continue;
            };
            if sa.is_empty() || sb.is_empty() {
                continue;
            }
            let r = base_relation(sa.beg(), sa.end(), sb.beg(), sb.end());
            let _ = net.constrain(a.name(), b.name(), RelationSet::singleton(r));
        }
    }
    for rel in &model.relations {
        let _ = net.constrain(&rel.from, &rel.to, relation_content(rel.kind));
    }
    net
}

/// Solves the model's relation network.
pub fn model_consistency(model: &IterativeModel) -> Verdict {
    model_network(model).path_consistency()
}
