//! A small normalized-French DSL for iterative temporal adverbials:
//! parsing ("tous les lundis de mars", "3 jours par semaine", "un dimanche
//! sur deux"), compositional evaluation against a calendar frame, and a
//! classification of temporal expressions by discourse function.
//!
//! Evaluation produces a [`Denotation`]: either a concrete [`Series`], or a
//! quantified [`Family`] — a base series plus a membership constraint — for
//! expressions like "la plupart des lundis" that denote a set of candidate
//! sub-series rather than one series. A deterministic choice function
//! ([`witness`]) picks a canonical candidate so that quantified denotations
//! remain executable and testable.
//!
//! The surface language is ASCII-normalized lowercase French (diacritics
//! folded, elisions expanded); it is a DSL over the grammar's documented
//! forms, not a natural-language parser.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::calendar::{CalendarName, Frame, GenMode};
use crate::series::{intdef, RestrictMode, Series, SeriesError};

/// Errors from parsing, evaluation, and classification.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CtiError {
    #[error("parse error at token {position}: expected {expected}")]
    ParseError { position: usize, expected: String },
    #[error("unknown calendar name `{0}`")]
    UnknownName(String),
    #[error("no candidate can satisfy the family constraint over this frame")]
    DegenerateFamily,
    #[error("phrase is outside the classification table and the grammar")]
    Unclassified,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Determiners of the quantifying layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Det {
    /// "les", "tous les", "chaque": the whole base series.
    Les,
    /// "un": exactly one member.
    Un,
    /// "la plupart des": more than the upper threshold.
    Plupart,
    /// "certains": a nonempty minority below the lower threshold.
    Certains,
}

/// Frequentative adverbs reuse the threshold machinery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreqAdverb {
    Souvent,
    Parfois,
    Rarement,
}

impl FreqAdverb {
    fn name(self) -> &'static str {
        match self {
            FreqAdverb::Souvent => "souvent",
            FreqAdverb::Parfois => "parfois",
            FreqAdverb::Rarement => "rarement",
        }
    }

    /// (op, numerator, denominator, minimum cardinality)
    fn threshold(self) -> (ThresholdOp, u32, u32, usize) {
        match self {
            FreqAdverb::Souvent => (ThresholdOp::Gt, 66, 100, 0),
            FreqAdverb::Parfois => (ThresholdOp::Lt, 33, 100, 1),
            FreqAdverb::Rarement => (ThresholdOp::Lt, 15, 100, 1),
        }
    }
}

/// A calendar name with an optional restricting suite ("lundis *de mars*").
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcSpec {
    pub name: CalendarName,
    pub suite: Option<Box<CtiAst>>,
}

/// Abstract syntax of the adverbial DSL.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CtiAst {
    Det(Det, NcSpec),
    /// "n NC1 par NC2": n members of the first kind in each of the second.
    Par {
        n: u32,
        first: CalendarName,
        second: CalendarName,
    },
    /// "n fois par NC": n placements inside each unit, kind unspecified.
    FoisPar { n: u32, unit: CalendarName },
    /// "n NC sur p": n kept out of every block of p.
    Sur { n: u32, p: u32, unit: CalendarName },
    /// "tous les n NC": every n-th member.
    TousLesN { n: u32, unit: CalendarName },
    /// "le n-ième NC (de parent)".
    Nth {
        n: u32,
        unit: CalendarName,
        parent: Option<Box<CtiAst>>,
    },
    /// "à 8h30": the marking instant of each day.
    Clock { hour: u8, minute: u8 },
    /// "de A à B": spans from each A-member to the next B-member.
    Intdef { from: Box<CtiAst>, to: Box<CtiAst> },
    /// Frequentative prefix over an inner expression.
    Freq { adverb: FreqAdverb, inner: Box<CtiAst> },
}

/// How a family candidate must relate to the base series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    /// Candidate members are members of the base.
    Extracted,
    /// Candidate members lie inside members of the base.
    Included,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdOp {
    Gt,
    Lt,
}

/// Membership constraint of a quantified family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    /// Exactly this series.
    Exact(Series),
    /// Extracted sub-series of a fixed size.
    Card(usize),
    /// Constant per-component count against a parent series.
    RatioConst {
        parent: Series,
        n: usize,
        membership: Membership,
    },
    /// Cardinality ratio against the base compared to `num/den`.
    Threshold {
        op: ThresholdOp,
        num: u32,
        den: u32,
        min_card: usize,
    },
}

/// A quantified denotation: all sub-series of `base` passing `constraint`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub base: Series,
    pub constraint: Constraint,
}

/// Result of evaluation: one series, or a constrained family of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Denotation {
    Concrete(Series),
    Quantified(Family),
}

impl Denotation {
    /// The concrete series, or the family's canonical witness.
    pub fn series_or_witness(&self, lenient: bool) -> Result<Series, CtiError> {
        match self {
            Denotation::Concrete(s) => Ok(s.clone()),
            Denotation::Quantified(f) => witness(f, lenient),
        }
    }
}

/// Evaluation options: clipped restriction and tolerant ratio witnesses.
#[derive(Debug, Clone, Copy, Default)]
pub struct DenoteOpts {
    /// Use clipped (soft) restriction for suites instead of whole-member.
    pub soft: bool,
    /// Let ratio witnesses under-fill components that are too small.
    pub lenient: bool,
}

// ---------------------------------------------------------------------------
// Tokenization

/// Folds one character to its ASCII skeleton.
fn fold_char(c: char, out: &mut String) {
    let lower = c.to_lowercase().next().unwrap_or(c);
    match lower {
        'à' | 'â' | 'ä' => out.push('a'),
        'é' | 'è' | 'ê' | 'ë' => out.push('e'),
        'î' | 'ï' => out.push('i'),
        'ô' | 'ö' => out.push('o'),
        'ù' | 'û' | 'ü' => out.push('u'),
        'ç' => out.push('c'),
        'œ' => out.push_str("oe"),
        'æ' => out.push_str("ae"),
        _ => out.push(lower),
    }
}

/// Lowercases, folds diacritics, splits on everything except alphanumerics
/// and hyphens, and expands the elided/contracted forms (du, des, au, aux,
/// d', l', qu') so the grammar sees uniform tokens.
pub fn normalize_tokens(text: &str) -> Vec<String> {
    let mut folded = String::new();
    for c in text.chars() {
        fold_char(c, &mut folded);
    }
    let mut toks: Vec<String> = Vec::new();
    let mut cur = String::new();
    for c in folded.chars() {
        if c.is_ascii_alphanumeric() || c == '-' {
            cur.push(c);
        } else if !cur.is_empty() {
            toks.push(core::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        toks.push(cur);
    }
    let mut out = Vec::with_capacity(toks.len());
    for t in toks {
        match t.as_str() {
            "du" => out.extend(["de".into(), "le".into()]),
            "des" => out.extend(["de".into(), "les".into()]),
            "au" => out.extend(["a".into(), "le".into()]),
            "aux" => out.extend(["a".into(), "les".into()]),
            "d" => out.push("de".into()),
            "l" => out.push("le".into()),
            "qu" => out.push("que".into()),
            _ => out.push(t),
        }
    }
    out
}

/// Cardinal numbers: digits or the common French number words.
pub(crate) fn token_number(tok: &str) -> Option<u32> {
    if tok.chars().all(|c| c.is_ascii_digit()) && !tok.is_empty() {
        return tok.parse().ok();
    }
    Some(match tok {
        "un" | "une" => 1,
        "deux" => 2,
        "trois" => 3,
        "quatre" => 4,
        "cinq" => 5,
        "six" => 6,
        "sept" => 7,
        "huit" => 8,
        "neuf" => 9,
        "dix" => 10,
        "onze" => 11,
        "douze" => 12,
        "treize" => 13,
        "quatorze" => 14,
        "quinze" => 15,
        "vingt" => 20,
        "trente" => 30,
        "cent" => 100,
        _ => return None,
    })
}

/// Ordinals: "2e", "2eme", "1er", or the spelled-out forms.
pub(crate) fn token_ordinal(tok: &str) -> Option<u32> {
    let spelled = match tok {
        "premier" | "premiere" => Some(1),
        "second" | "seconde" | "deuxieme" => Some(2),
        "troisieme" => Some(3),
        "quatrieme" => Some(4),
        "cinquieme" => Some(5),
        "sixieme" => Some(6),
        "septieme" => Some(7),
        "huitieme" => Some(8),
        "neuvieme" => Some(9),
        "dixieme" => Some(10),
        _ => None,
    };
    if spelled.is_some() {
        return spelled;
    }
    for suffix in ["eme", "ere", "er", "e"] {
        if let Some(digits) = tok.strip_suffix(suffix) {
            if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
                return digits.parse().ok();
            }
        }
    }
    None
}

/// Clock tokens: "8h", "8h30", "20h15".
fn token_clock(tok: &str) -> Option<(u8, u8)> {
    let (h, m) = tok.split_once('h')?;
    if h.is_empty() || !h.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    if !m.is_empty() && !m.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let hour: u8 = h.parse().ok()?;
    let minute: u8 = if m.is_empty() { 0 } else { m.parse().ok()? };
    (hour <= 23 && minute <= 59).then_some((hour, minute))
}

// ---------------------------------------------------------------------------
// Parsing

struct Parser {
    toks: Vec<String>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&str> {
        self.toks.get(self.pos).map(|s| s.as_str())
    }

    fn peek_at(&self, k: usize) -> Option<&str> {
        self.toks.get(self.pos + k).map(|s| s.as_str())
    }

    fn eat(&mut self, t: &str) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, expected: &str) -> CtiError {
        CtiError::ParseError {
            position: self.pos,
            expected: expected.into(),
        }
    }

    fn expect(&mut self, t: &str) -> Result<(), CtiError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.err(t))
        }
    }

    fn nc(&mut self) -> Result<CalendarName, CtiError> {
        let tok = self.peek().ok_or_else(|| self.err("a calendar name"))?;
        let name = CalendarName::parse(tok).ok_or_else(|| CtiError::UnknownName(tok.into()))?;
        self.pos += 1;
        Ok(name)
    }

    fn number(&mut self) -> Result<u32, CtiError> {
        let tok = self.peek().ok_or_else(|| self.err("a number"))?;
        let n = token_number(tok).ok_or_else(|| self.err("a number"))?;
        if n == 0 {
            return Err(self.err("a positive number"));
        }
        self.pos += 1;
        Ok(n)
    }

    fn stopped(&self, stop: &[&str]) -> bool {
        matches!(self.peek(), Some(t) if stop.contains(&t))
    }

    /// Optional "de"/"en" restriction suite.
    fn suite(&mut self, stop: &[&str]) -> Result<Option<Box<CtiAst>>, CtiError> {
        if self.stopped(stop) {
            return Ok(None);
        }
        if self.peek() == Some("de") || self.peek() == Some("en") {
            self.pos += 1;
            let inner = self.cti(stop)?;
            return Ok(Some(Box::new(inner)));
        }
        Ok(None)
    }

    fn ncspec(&mut self, stop: &[&str]) -> Result<NcSpec, CtiError> {
        let name = self.nc()?;
        let suite = self.suite(stop)?;
        Ok(NcSpec { name, suite })
    }

    fn clock(&mut self) -> Result<CtiAst, CtiError> {
        let Some(tok) = self.peek().map(String::from) else {
            return Err(self.err("a clock time"));
        };
        let Some((hour, minute)) = token_clock(&tok) else {
            return Err(self.err("a clock time like 8h or 8h30"));
        };
        self.pos += 1;
        // tolerate a split minute part: "8h 30"
        if minute == 0 && tok.ends_with('h') {
            if let Some(m) = self.peek().and_then(token_number) {
                if m <= 59 {
                    self.pos += 1;
                    return Ok(CtiAst::Clock {
                        hour,
                        minute: m as u8,
                    });
                }
            }
        }
        Ok(CtiAst::Clock { hour, minute })
    }

    fn cti(&mut self, stop: &[&str]) -> Result<CtiAst, CtiError> {
        for adverb in [FreqAdverb::Souvent, FreqAdverb::Parfois, FreqAdverb::Rarement] {
            if self.peek() == Some(adverb.name()) {
                self.pos += 1;
                let inner = self.core(stop)?;
                return Ok(CtiAst::Freq {
                    adverb,
                    inner: Box::new(inner),
                });
            }
        }
        self.core(stop)
    }

    fn core(&mut self, stop: &[&str]) -> Result<CtiAst, CtiError> {
        let Some(head) = self.peek().map(String::from) else {
            return Err(self.err("a temporal expression"));
        };
        match head.as_str() {
            "de" => {
                self.pos += 1;
                let mut inner_stop: Vec<&str> = stop.to_vec();
                inner_stop.push("a");
                let from = self.cti(&inner_stop)?;
                self.expect("a")?;
                let to = self.cti(stop)?;
                Ok(CtiAst::Intdef {
                    from: Box::new(from),
                    to: Box::new(to),
                })
            }
            "tous" | "toutes" => {
                self.pos += 1;
                self.expect("les")?;
                if self.peek().and_then(token_number).is_some() {
                    let n = self.number()?;
                    let unit = self.nc()?;
                    Ok(CtiAst::TousLesN { n, unit })
                } else {
                    Ok(CtiAst::Det(Det::Les, self.ncspec(stop)?))
                }
            }
            "la" if self.peek_at(1) == Some("plupart") => {
                self.pos += 2;
                self.expect("de")?;
                self.expect("les")?;
                Ok(CtiAst::Det(Det::Plupart, self.ncspec(stop)?))
            }
            "certains" | "certaines" => {
                self.pos += 1;
                Ok(CtiAst::Det(Det::Certains, self.ncspec(stop)?))
            }
            "chaque" => {
                self.pos += 1;
                Ok(CtiAst::Det(Det::Les, self.ncspec(stop)?))
            }
            "le" | "la" | "les" => {
                self.pos += 1;
                if let Some(n) = self.peek().and_then(token_ordinal) {
                    self.pos += 1;
                    let unit = self.nc()?;
                    let parent = if !self.stopped(stop) && self.eat("de") {
                        Some(Box::new(self.cti(stop)?))
                    } else {
                        None
                    };
                    return Ok(CtiAst::Nth { n, unit, parent });
                }
                Ok(CtiAst::Det(Det::Les, self.ncspec(stop)?))
            }
            "un" | "une" => {
                self.pos += 1;
                if self.eat("fois") {
                    self.expect("par")?;
                    return Ok(CtiAst::FoisPar {
                        n: 1,
                        unit: self.nc()?,
                    });
                }
                let unit = self.nc()?;
                if !self.stopped(stop) && self.eat("sur") {
                    let p = self.number()?;
                    return Ok(CtiAst::Sur { n: 1, p, unit });
                }
                if self.peek() == Some("de") && self.peek_at(1) == Some("chaque") {
                    self.pos += 2;
                    return Ok(CtiAst::Par {
                        n: 1,
                        first: unit,
                        second: self.nc()?,
                    });
                }
                if !self.stopped(stop) && self.eat("par") {
                    return Ok(CtiAst::Par {
                        n: 1,
                        first: unit,
                        second: self.nc()?,
                    });
                }
                // plain indefinite, possibly restricted
                let mut spec = NcSpec {
                    name: unit,
                    suite: None,
                };
                spec.suite = self.suite(stop)?;
                Ok(CtiAst::Det(Det::Un, spec))
            }
            "a" => {
                self.pos += 1;
                self.clock()
            }
            tok if token_clock(tok).is_some() => self.clock(),
            tok if token_number(tok).is_some() => {
                let n = self.number()?;
                if self.eat("fois") {
                    self.expect("par")?;
                    return Ok(CtiAst::FoisPar {
                        n,
                        unit: self.nc()?,
                    });
                }
                let unit = self.nc()?;
                if self.eat("sur") {
                    let p = self.number()?;
                    if n > p {
                        return Err(self.err("n <= p in `n NC sur p`"));
                    }
                    return Ok(CtiAst::Sur { n, p, unit });
                }
                if self.eat("par") {
                    return Ok(CtiAst::Par {
                        n,
                        first: unit,
                        second: self.nc()?,
                    });
                }
                Err(self.err("`sur`, `par` or `fois par` after a counted unit"))
            }
            tok if CalendarName::parse(tok).is_some() => {
                // bare calendar name: "de lundi a vendredi"
                Ok(CtiAst::Det(Det::Les, self.ncspec(stop)?))
            }
            _ => Err(self.err("a temporal expression")),
        }
    }
}

/// Parses one normalized-French adverbial into its AST.
pub fn parse(text: &str) -> Result<CtiAst, CtiError> {
    let mut p = Parser {
        toks: normalize_tokens(text),
        pos: 0,
    };
    let ast = p.cti(&[])?;
    if p.pos != p.toks.len() {
        return Err(p.err("end of input"));
    }
    Ok(ast)
}

/// Renders an AST back to a canonical surface form; reparsing the result
/// yields an equal AST.
pub fn render(ast: &CtiAst) -> String {
    fn plural(name: CalendarName) -> String {
        let s = name.as_str();
        if s.ends_with('s') {
            s.into()
        } else {
            alloc::format!("{s}s")
        }
    }
    fn suite_text(suite: &Option<Box<CtiAst>>) -> String {
        match suite {
            None => String::new(),
            // bare-name shorthand for a plain restriction
            Some(inner) => match inner.as_ref() {
                CtiAst::Det(Det::Les, NcSpec { name, suite: None }) => {
                    alloc::format!(" de {}", name.as_str())
                }
                other => alloc::format!(" de {}", render(other)),
            },
        }
    }
    match ast {
        CtiAst::Det(det, NcSpec { name, suite }) => {
            let head = match det {
                Det::Les => alloc::format!("les {}", plural(*name)),
                Det::Un => alloc::format!("un {}", name.as_str()),
                Det::Plupart => alloc::format!("la plupart des {}", plural(*name)),
                Det::Certains => alloc::format!("certains {}", plural(*name)),
            };
            alloc::format!("{head}{}", suite_text(suite))
        }
        CtiAst::Par { n, first, second } => {
            alloc::format!("{n} {} par {}", plural(*first), second.as_str())
        }
        CtiAst::FoisPar { n, unit } => alloc::format!("{n} fois par {}", unit.as_str()),
        CtiAst::Sur { n, p, unit } => alloc::format!("{n} {} sur {p}", plural(*unit)),
        CtiAst::TousLesN { n, unit } => alloc::format!("tous les {n} {}", plural(*unit)),
        CtiAst::Nth { n, unit, parent } => {
            let head = alloc::format!("le {n}e {}", unit.as_str());
            match parent {
                None => head,
                Some(p) => match p.as_ref() {
                    CtiAst::Det(Det::Les, NcSpec { name, suite: None }) => {
                        alloc::format!("{head} de {}", name.as_str())
                    }
                    other => alloc::format!("{head} de {}", render(other)),
                },
            }
        }
        CtiAst::Clock { hour, minute } => {
            if *minute == 0 {
                alloc::format!("a {hour}h")
            } else {
                alloc::format!("a {hour}h{minute:02}")
            }
        }
        CtiAst::Intdef { from, to } => {
            alloc::format!("de {} a {}", render(from), render(to))
        }
        CtiAst::Freq { adverb, inner } => alloc::format!("{} {}", adverb.name(), render(inner)),
    }
}

// ---------------------------------------------------------------------------
// Evaluation

/// Evaluates an AST over a frame into a concrete or quantified denotation.
pub fn denote(ast: &CtiAst, frame: &Frame, opts: DenoteOpts) -> Result<Denotation, CtiError> {
    match ast {
        CtiAst::Det(det, spec) => {
            let base = ncspec_series(spec, frame, opts)?;
            Ok(match det {
                Det::Les => Denotation::Concrete(base),
                Det::Un => Denotation::Quantified(Family {
                    base,
                    constraint: Constraint::Card(1),
                }),
                Det::Plupart => Denotation::Quantified(Family {
                    base,
                    constraint: Constraint::Threshold {
                        op: ThresholdOp::Gt,
                        num: 66,
                        den: 100,
                        min_card: 0,
                    },
                }),
                Det::Certains => Denotation::Quantified(Family {
                    base,
                    constraint: Constraint::Threshold {
                        op: ThresholdOp::Lt,
                        num: 33,
                        den: 100,
                        min_card: 1,
                    },
                }),
            })
        }
        CtiAst::Par { n, first, second } => Ok(Denotation::Quantified(Family {
            base: frame.gen(*first, GenMode::Strict),
            constraint: Constraint::RatioConst {
                parent: frame.gen(*second, GenMode::Strict),
                n: *n as usize,
                membership: Membership::Extracted,
            },
        })),
        CtiAst::FoisPar { n, unit } => {
            let parent = frame.gen(*unit, GenMode::Strict);
            Ok(Denotation::Quantified(Family {
                base: parent.clone(),
                constraint: Constraint::RatioConst {
                    parent,
                    n: *n as usize,
                    membership: Membership::Included,
                },
            }))
        }
        CtiAst::Sur { n, p, unit } => {
            let base = frame.gen(*unit, GenMode::Strict);
            let parent = base.agglo(*p as usize)?;
            Ok(Denotation::Quantified(Family {
                base,
                constraint: Constraint::RatioConst {
                    parent,
                    n: *n as usize,
                    membership: Membership::Extracted,
                },
            }))
        }
        CtiAst::TousLesN { n, unit } => Ok(Denotation::Concrete(
            frame
                .gen(*unit, GenMode::Strict)
                .extract_pattern(1, *n as usize)?,
        )),
        CtiAst::Nth { n, unit, parent } => {
            let base = frame.gen(*unit, GenMode::Strict);
            let parent_series = match parent {
                Some(p) => denote(p, frame, opts)?.series_or_witness(opts.lenient)?,
                None => frame.whole(),
            };
            Ok(Denotation::Concrete(
                base.restrict_nth(&parent_series, *n as usize),
            ))
        }
        CtiAst::Clock { hour, minute } => {
            Ok(Denotation::Concrete(frame.clock_points(*hour, *minute)))
        }
        CtiAst::Intdef { from, to } => {
            let a = denote(from, frame, opts)?.series_or_witness(opts.lenient)?;
            let b = denote(to, frame, opts)?.series_or_witness(opts.lenient)?;
            Ok(Denotation::Concrete(intdef(&a, &b)?))
        }
        CtiAst::Freq { adverb, inner } => {
            let base = denote(inner, frame, opts)?.series_or_witness(opts.lenient)?;
            let (op, num, den, min_card) = adverb.threshold();
            Ok(Denotation::Quantified(Family {
                base,
                constraint: Constraint::Threshold {
                    op,
                    num,
                    den,
                    min_card,
                },
            }))
        }
    }
}

/// Base series of a name, restricted by its suite when present. Whole-member
/// restriction by default; clipped when requested, or when the reference
/// comes from a span expression ("de ... a ...") whose edges rarely align
/// with whole members.
fn ncspec_series(spec: &NcSpec, frame: &Frame, opts: DenoteOpts) -> Result<Series, CtiError> {
    let base = frame.gen(spec.name, GenMode::Strict);
    let Some(suite) = &spec.suite else {
        return Ok(base);
    };
    let reference = denote(suite, frame, opts)?.series_or_witness(opts.lenient)?;
    let mode = if opts.soft || matches!(suite.as_ref(), CtiAst::Intdef { .. }) {
        RestrictMode::Soft
    } else {
        RestrictMode::Strict
    };
    Ok(base.restrict_series(&reference, mode))
}

/// Does `candidate` belong to the family?
pub fn family_check(candidate: &Series, family: &Family) -> bool {
    match &family.constraint {
        Constraint::Exact(target) => candidate == target,
        Constraint::Card(k) => candidate.extracted_from(&family.base) && candidate.len() == *k,
        Constraint::RatioConst {
            parent,
            n,
            membership,
        } => {
            let member_ok = match membership {
                Membership::Extracted => candidate.extracted_from(&family.base),
                Membership::Included => candidate.included_in(&family.base),
            };
            member_ok
                && candidate
                    .ratio(parent)
                    .map(|r| r.constant() == Some(*n))
                    .unwrap_or(false)
        }
        Constraint::Threshold {
            op,
            num,
            den,
            min_card,
        } => {
            if !candidate.extracted_from(&family.base) || candidate.len() < *min_card {
                return false;
            }
            let lhs = candidate.len() as u64 * u64::from(*den);
            let rhs = family.base.len() as u64 * u64::from(*num);
            match op {
                ThresholdOp::Gt => lhs > rhs,
                ThresholdOp::Lt => lhs < rhs,
            }
        }
    }
}

/// Deterministic canonical candidate of a family: first elements for
/// cardinality and threshold constraints, first-per-component for extracted
/// ratios, evenly spaced interior points for included ratios.
pub fn witness(family: &Family, lenient: bool) -> Result<Series, CtiError> {
    let base = &family.base;
    match &family.constraint {
        Constraint::Exact(target) => Ok(target.clone()),
        Constraint::Card(k) => {
            if base.len() < *k {
                return Err(CtiError::DegenerateFamily);
            }
            Ok(base.extract_first(*k))
        }
        Constraint::Threshold {
            op,
            num,
            den,
            min_card,
        } => {
            let len = base.len() as u64;
            let m = match op {
                ThresholdOp::Gt => (len).min(len * u64::from(*num) / u64::from(*den) + 1) as usize,
                ThresholdOp::Lt => {
                    let ceil = (len * u64::from(*num)).div_ceil(u64::from(*den));
                    (*min_card).max(ceil.saturating_sub(1) as usize)
                }
            };
            if m > base.len() {
                return Err(CtiError::DegenerateFamily);
            }
            let candidate = base.extract_first(m);
            if family_check(&candidate, family) {
                Ok(candidate)
            } else {
                Err(CtiError::DegenerateFamily)
            }
        }
        Constraint::RatioConst {
            parent,
            n,
            membership: Membership::Extracted,
        } => {
            let mut out = Vec::new();
            let mut filled = alloc::vec![0usize; parent.len()];
            let mut current: Option<usize> = None;
            let mut taken = 0usize;
            for item in base.iter() {
                let Some(pos) = parent.iter().position(|j| item.inside(j)) else {
                    continue;
                };
                if current != Some(pos) {
                    current = Some(pos);
                    taken = 0;
                }
                if taken < *n {
                    taken += 1;
                    filled[pos] += 1;
                    out.push(*item);
                }
            }
            if !lenient && filled.iter().any(|&c| c < *n) {
                return Err(CtiError::DegenerateFamily);
            }
            Ok(Series::new(out).expect("selection preserves order"))
        }
        Constraint::RatioConst {
            parent,
            n,
            membership: Membership::Included,
        } => {
            let n64 = *n as i64;
            let mut out = Vec::new();
            for j in parent.iter() {
                for k in 0..n64 {
                    let offset = (k + 1) * j.len() / (n64 + 1);
                    out.push(crate::interval::ConvexInterval::point(j.beg() + offset));
                }
            }
            Series::new(out).map_err(|_| CtiError::DegenerateFamily)
        }
    }
}

// ---------------------------------------------------------------------------
// Comparison

/// Extensional relations between two evaluated denotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ComparisonReport {
    pub equal: bool,
    pub first_extracted_from_second: bool,
    pub second_extracted_from_first: bool,
    pub first_included_in_second: bool,
    pub second_included_in_first: bool,
    /// No instant in common.
    pub disjoint: bool,
    /// Some instants shared, but no inclusion either way.
    pub overlapping: bool,
}

/// Compares two denotations through their witness series.
pub fn compare(d1: &Denotation, d2: &Denotation, lenient: bool) -> Result<ComparisonReport, CtiError> {
    let s1 = d1.series_or_witness(lenient)?;
    let s2 = d2.series_or_witness(lenient)?;
    let meets = s1
        .iter()
        .any(|i| s2.iter().any(|j| i.intersects(j)));
    let first_included = s1.included_in(&s2);
    let second_included = s2.included_in(&s1);
    Ok(ComparisonReport {
        equal: s1 == s2,
        first_extracted_from_second: s1.extracted_from(&s2),
        second_extracted_from_first: s2.extracted_from(&s1),
        first_included_in_second: first_included,
        second_included_in_first: second_included,
        disjoint: !meets,
        overlapping: meets && !first_included && !second_included,
    })
}

// ---------------------------------------------------------------------------
// Classification

/// Convex sites by how their interval is anchored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvexSiteKind {
    /// Anchored on the speech moment ("demain").
    Deictic,
    /// Anchored on a previously placed interval ("le lendemain").
    Anaphoric,
    /// Anchored on the calendar ("en mars 2005").
    Absolute,
    /// Known length, unplaced ("pendant 8 jours").
    Duration,
}

/// Positioning markers by whether the processes chain or overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositioningKind {
    Sequential,
    Overlap,
}

/// Discourse function of a temporal expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    /// Creates one convex hosting interval.
    ConvexSite(ConvexSiteKind),
    /// Creates a series of hosting intervals inside an enclosing frame.
    NonConvexSite,
    /// Positions a process against another element, creating nothing.
    Positioning(PositioningKind),
    /// Describes how a process fills its own interval.
    InternalTemporality,
    /// Derives a new site from an existing one.
    Selector,
}

/// Fixed phrase table (keys are in normalized token form).
const PHRASE_TABLE: &[(&str, Category)] = &[
    ("demain", Category::ConvexSite(ConvexSiteKind::Deictic)),
    ("hier", Category::ConvexSite(ConvexSiteKind::Deictic)),
    ("le mois prochain", Category::ConvexSite(ConvexSiteKind::Deictic)),
    ("le annee derniere", Category::ConvexSite(ConvexSiteKind::Deictic)),
    ("dorenavant", Category::ConvexSite(ConvexSiteKind::Deictic)),
    ("le lendemain", Category::ConvexSite(ConvexSiteKind::Anaphoric)),
    ("le mois precedent", Category::ConvexSite(ConvexSiteKind::Anaphoric)),
    ("le annee suivante", Category::ConvexSite(ConvexSiteKind::Anaphoric)),
    ("en mars 2005", Category::ConvexSite(ConvexSiteKind::Absolute)),
    ("a le debut de 1990", Category::ConvexSite(ConvexSiteKind::Absolute)),
    ("a le vingtieme siecle", Category::ConvexSite(ConvexSiteKind::Absolute)),
    ("depuis 1999", Category::ConvexSite(ConvexSiteKind::Absolute)),
    ("de fevrier a mars 90", Category::ConvexSite(ConvexSiteKind::Absolute)),
    ("a partir de", Category::ConvexSite(ConvexSiteKind::Absolute)),
    ("pendant 8 jours", Category::ConvexSite(ConvexSiteKind::Duration)),
    ("pendant huit jours", Category::ConvexSite(ConvexSiteKind::Duration)),
    ("durant", Category::ConvexSite(ConvexSiteKind::Duration)),
    ("puis", Category::Positioning(PositioningKind::Sequential)),
    ("apres", Category::Positioning(PositioningKind::Sequential)),
    ("apres que", Category::Positioning(PositioningKind::Sequential)),
    ("avant", Category::Positioning(PositioningKind::Sequential)),
    ("avant que", Category::Positioning(PositioningKind::Sequential)),
    ("plus tard", Category::Positioning(PositioningKind::Sequential)),
    ("ensuite", Category::Positioning(PositioningKind::Sequential)),
    // "dès que" after diacritic folding and contraction expansion
    ("de les que", Category::Positioning(PositioningKind::Sequential)),
    ("a peine", Category::Positioning(PositioningKind::Sequential)),
    ("aussitot", Category::Positioning(PositioningKind::Sequential)),
    ("bientot", Category::Positioning(PositioningKind::Sequential)),
    ("en meme temps", Category::Positioning(PositioningKind::Overlap)),
    ("simultanement", Category::Positioning(PositioningKind::Overlap)),
    ("pendant que", Category::Positioning(PositioningKind::Overlap)),
    ("a le cours de", Category::Positioning(PositioningKind::Overlap)),
    ("lorsque", Category::Positioning(PositioningKind::Overlap)),
    ("quand", Category::Positioning(PositioningKind::Overlap)),
    ("peu a peu", Category::InternalTemporality),
    ("regulierement", Category::InternalTemporality),
    ("a le fur et a mesure", Category::InternalTemporality),
    ("trois fois de suite", Category::InternalTemporality),
    ("trois fois", Category::InternalTemporality),
    ("lentement", Category::InternalTemporality),
    ("rapidement", Category::InternalTemporality),
    ("progressivement", Category::InternalTemporality),
    ("souvent", Category::InternalTemporality),
    ("parfois", Category::InternalTemporality),
    ("a le debut de", Category::Selector),
    ("a la fin de", Category::Selector),
    ("a le milieu de", Category::Selector),
    ("la 3e fois", Category::Selector),
    ("la 3eme fois", Category::Selector),
    ("la troisieme fois", Category::Selector),
    ("cette fois-ci", Category::Selector),
    ("ce jour la", Category::Selector),
    ("les trois premieres fois", Category::Selector),
];

/// Category of a parsed adverbial: ordinal selection is a selector, every
/// other grammar form creates a non-convex site.
pub fn classify_ast(ast: &CtiAst) -> Category {
    match ast {
        CtiAst::Nth { .. } => Category::Selector,
        _ => Category::NonConvexSite,
    }
}

/// Classifies a raw phrase: fixed table first, then the grammar.
pub fn classify(text: &str) -> Result<Category, CtiError> {
    let key = normalize_tokens(text).join(" ");
    if let Some((_, cat)) = PHRASE_TABLE.iter().find(|(k, _)| *k == key) {
        return Ok(*cat);
    }
    match parse(text) {
        Ok(ast) => Ok(classify_ast(&ast)),
        Err(_) => Err(CtiError::Unclassified),
    }
}
