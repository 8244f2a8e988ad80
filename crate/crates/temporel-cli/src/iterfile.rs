//! On-disk description of an iteration, and its conversion to the library
//! model.
//!
//! The file is a single JSON object. Timeline positions (trigger intervals,
//! the cadre) are civil date-times interpreted in the frame given on the
//! command line; model-internal spans are plain minute offsets, since model
//! temporality has no calendar.
//!
//! ```json
//! {
//!   "iterator": {"by_intervals": {"phrase": "tous les dimanches"}},
//!   "model": {
//!     "slots": [
//!       {"process": {"name": "bain", "model": [0, 30], "reference": [0, 30]}}
//!     ],
//!     "relations": []
//!   },
//!   "cadre": null
//! }
//! ```

use serde::Deserialize;
use temporel::allen::{BaseRelation, ConvexRelation};
use temporel::calendar::CalendarName;
use temporel::cti::{self, DenoteOpts, FreqAdverb};
use temporel::itermodel::{
    Iteration, IterativeModel, IteratorSpec, ModelRelation, ModelSlot, ModelSpan, ProcessModel,
    RelationKind,
};
use temporel::{ConvexInterval, Frame, Series};

use crate::output::{cti_error, parse_civil, CliError};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IterationDto {
    pub iterator: IteratorDto,
    pub model: ModelDto,
    #[serde(default)]
    pub cadre: Option<SpanDto>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IteratorDto {
    /// One occurrence per member of a series.
    ByIntervals(SeriesSourceDto),
    /// A stated number of occurrences, spread over the cadre.
    Numeric(u32),
    /// A pragmatic density over a calendar unit.
    Frequential { class: String, unit: String },
    /// One occurrence per externally supplied trigger.
    Eventive(SeriesSourceDto),
}

/// A series given either as a phrase to evaluate or as explicit intervals.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesSourceDto {
    #[serde(default)]
    pub phrase: Option<String>,
    #[serde(default)]
    pub intervals: Option<Vec<SpanDto>>,
}

/// A timeline interval in civil time; omit `end` for a point.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanDto {
    pub beg: String,
    #[serde(default)]
    pub end: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDto {
    pub slots: Vec<SlotDto>,
    #[serde(default)]
    pub relations: Vec<RelationDto>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotDto {
    Process {
        name: String,
        model: (i64, i64),
        reference: (i64, i64),
    },
    Nested {
        name: String,
        #[serde(default)]
        span: Option<(i64, i64)>,
        iteration: Box<IterationDto>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationDto {
    /// `causal`, `meronymic`, or `temporal` (which reads `lo`/`hi`).
    pub kind: String,
    #[serde(default)]
    pub lo: Option<String>,
    #[serde(default)]
    pub hi: Option<String>,
    pub from: String,
    pub to: String,
}

// ---------------------------------------------------------------------------
// Conversion

pub fn build(dto: &IterationDto, frame: &Frame) -> Result<Iteration, CliError> {
    let iterator = match &dto.iterator {
        IteratorDto::ByIntervals(src) => IteratorSpec::ByIntervals(series_of(src, frame)?),
        IteratorDto::Numeric(n) => IteratorSpec::Numeric(*n),
        IteratorDto::Frequential { class, unit } => IteratorSpec::Frequential {
            class: freq_of(class)?,
            unit_hint: CalendarName::parse(unit)
                .ok_or_else(|| CliError::domain("parse", format!("unknown unit `{unit}`")))?,
        },
        IteratorDto::Eventive(src) => IteratorSpec::Eventive(series_of(src, frame)?),
    };
    let model = model_of(&dto.model, frame)?;
    let cadre = dto
        .cadre
        .as_ref()
        .map(|s| interval_of(s, frame))
        .transpose()?;
    Iteration::new(iterator, model, cadre).map_err(|e| CliError::domain("iteration", e.to_string()))
}

fn model_of(dto: &ModelDto, frame: &Frame) -> Result<IterativeModel, CliError> {
    let mut slots = Vec::new();
    for slot in &dto.slots {
        slots.push(match slot {
            SlotDto::Process {
                name,
                model,
                reference,
            } => ModelSlot::Process(ProcessModel {
                name: name.clone(),
                model_interval: model_span_of(*model)?,
                reference_interval: model_span_of(*reference)?,
            }),
            SlotDto::Nested {
                name,
                span,
                iteration,
            } => ModelSlot::Nested {
                name: name.clone(),
                span: span.map(model_span_of).transpose()?,
                iteration: Box::new(build(iteration, frame)?),
            },
        });
    }
    let mut relations = Vec::new();
    for r in &dto.relations {
        relations.push(ModelRelation {
            kind: relation_kind_of(r)?,
            from: r.from.clone(),
            to: r.to.clone(),
        });
    }
    Ok(IterativeModel { slots, relations })
}

fn relation_kind_of(r: &RelationDto) -> Result<RelationKind, CliError> {
    match r.kind.as_str() {
        "causal" => Ok(RelationKind::Causal),
        "meronymic" => Ok(RelationKind::Meronymic),
        "temporal" => {
            let lo = r.lo.as_deref().ok_or_else(|| {
                CliError::domain("parse", "a temporal relation needs a `lo` bound")
            })?;
            let hi = r.hi.as_deref().unwrap_or(lo);
            let lo = BaseRelation::parse(lo)
                .map_err(|e| CliError::domain("parse", e.to_string()))?;
            let hi = BaseRelation::parse(hi)
                .map_err(|e| CliError::domain("parse", e.to_string()))?;
            let rel = ConvexRelation::new(lo, hi)
                .map_err(|e| CliError::domain("parse", e.to_string()))?;
            Ok(RelationKind::Temporal(rel))
        }
        other => Err(CliError::domain(
            "parse",
            format!("unknown relation kind `{other}` (causal, meronymic, temporal)"),
        )),
    }
}

fn model_span_of(span: (i64, i64)) -> Result<ModelSpan, CliError> {
    ModelSpan::new(span.0, span.1).map_err(|e| CliError::domain("iteration", e.to_string()))
}

fn interval_of(span: &SpanDto, frame: &Frame) -> Result<ConvexInterval, CliError> {
    let beg = frame.instant_of(&parse_civil(&span.beg)?);
    let end = match &span.end {
        Some(text) => frame.instant_of(&parse_civil(text)?),
        None => beg,
    };
    ConvexInterval::new(beg, end).map_err(|e| CliError::domain("series", e.to_string()))
}

fn series_of(src: &SeriesSourceDto, frame: &Frame) -> Result<Series, CliError> {
    match (&src.phrase, &src.intervals) {
        (Some(phrase), None) => {
            let ast = cti::parse(phrase).map_err(cti_error)?;
            let d = cti::denote(&ast, frame, DenoteOpts::default()).map_err(cti_error)?;
            d.series_or_witness(false).map_err(cti_error)
        }
        (None, Some(spans)) => {
            let items = spans
                .iter()
                .map(|s| interval_of(s, frame))
                .collect::<Result<Vec<_>, _>>()?;
            Series::new(items).map_err(|e| CliError::domain("series", e.to_string()))
        }
        _ => Err(CliError::domain(
            "parse",
            "a series source needs exactly one of `phrase` or `intervals`",
        )),
    }
}

fn freq_of(text: &str) -> Result<FreqAdverb, CliError> {
    match text {
        "souvent" => Ok(FreqAdverb::Souvent),
        "parfois" => Ok(FreqAdverb::Parfois),
        "rarement" => Ok(FreqAdverb::Rarement),
        other => Err(CliError::domain(
            "parse",
            format!("unknown frequency class `{other}` (souvent, parfois, rarement)"),
        )),
    }
}
