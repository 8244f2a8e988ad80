//! Date parsing, value rendering, and the error protocol shared by every
//! subcommand.
//!
//! Two failure classes exist. Usage errors (exit 2) mean the invocation
//! itself is wrong: bad flags, malformed dates, unreadable paths. Domain
//! errors (exit 1) mean the input was understood and rejected; they carry a
//! stable `kind` so scripts can dispatch on the error object printed to
//! stderr without parsing prose.

use serde_json::{json, Value};
use temporel::cti::{
    Category, Constraint, ConvexSiteKind, CtiError, Denotation, Membership, PositioningKind,
    ThresholdOp,
};
use temporel::network::NetworkError;
use temporel::sdt::{Aspect, Diagnosis, Reading, TenseValue};
use temporel::{CivilDateTime, ConvexInterval, Frame, Verdict};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain { kind: &'static str, message: String },
}

impl CliError {
    pub fn domain(kind: &'static str, message: impl Into<String>) -> CliError {
        CliError::Domain {
            kind,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> CliError {
        CliError::Usage(message.into())
    }
}

pub fn cti_error(e: CtiError) -> CliError {
    let kind = match &e {
        CtiError::ParseError { .. } => "parse",
        CtiError::UnknownName(_) => "unknown_name",
        CtiError::DegenerateFamily => "degenerate_family",
        CtiError::Unclassified => "unclassified",
        CtiError::Series(_) => "series",
    };
    CliError::domain(kind, e.to_string())
}

pub fn network_error(e: NetworkError) -> CliError {
    let kind = match &e {
        NetworkError::InconsistentNetwork | NetworkError::EmptyAfterIntersection { .. } => {
            "inconsistent"
        }
        NetworkError::NoScenario => "no_scenario",
        NetworkError::BadLine { .. } | NetworkError::BadRelation { .. } => "parse",
        NetworkError::UnknownNode(_) => "unknown_name",
    };
    CliError::domain(kind, e.to_string())
}

// ---------------------------------------------------------------------------
// Dates

/// Parses `YYYY-MM-DD` or `YYYY-MM-DDTHH:MM`.
pub fn parse_civil(text: &str) -> Result<CivilDateTime, CliError> {
    let bad = || CliError::usage(format!("`{text}`: expected YYYY-MM-DD or YYYY-MM-DDTHH:MM"));
    let (date, time) = match text.split_once('T') {
        Some((d, t)) => (d, Some(t)),
        None => (text, None),
    };
    let mut fields = date.split('-');
    let (Some(y), Some(m), Some(d), None) =
        (fields.next(), fields.next(), fields.next(), fields.next())
    else {
        return Err(bad());
    };
    let year: i32 = y.parse().map_err(|_| bad())?;
    let month: u8 = m.parse().map_err(|_| bad())?;
    let day: u8 = d.parse().map_err(|_| bad())?;
    let (hour, minute) = match time {
        None => (0, 0),
        Some(t) => {
            let (h, min) = t.split_once(':').ok_or_else(bad)?;
            (
                h.parse().map_err(|_| bad())?,
                min.parse().map_err(|_| bad())?,
            )
        }
    };
    CivilDateTime::new(year, month, day, hour, minute)
        .map_err(|e| CliError::usage(format!("`{text}`: {e}")))
}

pub fn parse_frame(from: &str, to: &str) -> Result<Frame, CliError> {
    let origin = parse_civil(from)?;
    let horizon = parse_civil(to)?;
    Frame::new(origin, horizon).map_err(|e| CliError::usage(e.to_string()))
}

pub fn format_civil(c: &CivilDateTime) -> String {
    format!(
        "{:04}-{:02}-{:02}T{:02}:{:02}",
        c.year, c.month, c.day, c.hour, c.minute
    )
}

// ---------------------------------------------------------------------------
// Intervals

pub fn interval_text(frame: &Frame, j: &ConvexInterval) -> String {
    if j.is_point() {
        format_civil(&frame.civil_of(j.beg()))
    } else {
        format!(
            "[{}, {})",
            format_civil(&frame.civil_of(j.beg())),
            format_civil(&frame.civil_of(j.end()))
        )
    }
}

pub fn interval_json(frame: &Frame, j: &ConvexInterval) -> Value {
    json!({
        "beg": format_civil(&frame.civil_of(j.beg())),
        "end": format_civil(&frame.civil_of(j.end())),
        "point": j.is_point(),
    })
}

// ---------------------------------------------------------------------------
// Names for library enums

pub fn category_name(c: &Category) -> &'static str {
    match c {
        Category::ConvexSite(ConvexSiteKind::Deictic) => "convex_site:deictic",
        Category::ConvexSite(ConvexSiteKind::Anaphoric) => "convex_site:anaphoric",
        Category::ConvexSite(ConvexSiteKind::Absolute) => "convex_site:absolute",
        Category::ConvexSite(ConvexSiteKind::Duration) => "convex_site:duration",
        Category::NonConvexSite => "non_convex_site",
        Category::Positioning(PositioningKind::Sequential) => "positioning:sequential",
        Category::Positioning(PositioningKind::Overlap) => "positioning:overlap",
        Category::InternalTemporality => "internal_temporality",
        Category::Selector => "selector",
    }
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Consistent => "consistent",
        Verdict::Inconsistent => "inconsistent",
        Verdict::PathConsistentUndecided => "path_consistent_undecided",
    }
}

pub fn aspect_name(a: Aspect) -> &'static str {
    match a {
        Aspect::Aoristique => "aoristique",
        Aspect::Inaccompli => "inaccompli",
        Aspect::Accompli => "accompli",
        Aspect::Prospectif => "prospectif",
    }
}

pub fn tense_value_name(t: TenseValue) -> &'static str {
    match t {
        TenseValue::Passe => "passe",
        TenseValue::Present => "present",
        TenseValue::Futur => "futur",
    }
}

pub fn diagnosis_name(d: Diagnosis) -> &'static str {
    match d {
        Diagnosis::Ok => "ok",
        Diagnosis::ResolvedIteration => "resolved_iteration",
        Diagnosis::ResolvedContraction => "resolved_contraction",
        Diagnosis::Insoluble => "insoluble",
    }
}

pub fn reading_name(r: Reading) -> &'static str {
    match r {
        Reading::Iterative => "iterative",
        Reading::Durative => "durative",
        Reading::Ambiguous => "ambiguous",
    }
}

// ---------------------------------------------------------------------------
// Denotations

pub fn counted(n: usize, noun: &str) -> String {
    if n == 1 {
        format!("{n} {noun}")
    } else {
        format!("{n} {noun}s")
    }
}

pub fn denotation_text(d: &Denotation) -> String {
    match d {
        Denotation::Concrete(s) => {
            format!("concrete series of {}", counted(s.len(), "member"))
        }
        Denotation::Quantified(f) => format!(
            "quantified family over a base of {}",
            counted(f.base.len(), "member")
        ),
    }
}

pub fn constraint_text(c: &Constraint) -> String {
    match c {
        Constraint::Exact(s) => {
            format!("exactly a fixed series of {}", counted(s.len(), "member"))
        }
        Constraint::Card(k) => format!("{} extracted from the base", counted(*k, "member")),
        Constraint::RatioConst {
            parent,
            n,
            membership,
        } => {
            let how = match membership {
                Membership::Extracted => "extracted from",
                Membership::Included => "inside",
            };
            format!(
                "{n} per component {how} a parent of {}",
                counted(parent.len(), "component")
            )
        }
        Constraint::Threshold {
            op,
            num,
            den,
            min_card,
        } => {
            let cmp = match op {
                ThresholdOp::Gt => "more",
                ThresholdOp::Lt => "less",
            };
            format!("{cmp} than {num}/{den} of the base (minimum size {min_card})")
        }
    }
}

pub fn constraint_json(c: &Constraint) -> Value {
    match c {
        Constraint::Exact(s) => json!({"type": "exact", "members": s.len()}),
        Constraint::Card(k) => json!({"type": "card", "count": k}),
        Constraint::RatioConst {
            parent,
            n,
            membership,
        } => json!({
            "type": "ratio_const",
            "per_component": n,
            "components": parent.len(),
            "membership": match membership {
                Membership::Extracted => "extracted",
                Membership::Included => "included",
            },
        }),
        Constraint::Threshold {
            op,
            num,
            den,
            min_card,
        } => json!({
            "type": "threshold",
            "op": match op { ThresholdOp::Gt => "gt", ThresholdOp::Lt => "lt" },
            "num": num,
            "den": den,
            "min_card": min_card,
        }),
    }
}
