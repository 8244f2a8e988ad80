//! Surface scanner for repetition adverbials in raw French text.
//!
//! The scanner recognizes a closed inventory of patterns ("tous les mardis",
//! "une fois par mois", "un dimanche sur deux", ...) over unrestricted text,
//! without any syntactic analysis: sentences are split on terminal
//! punctuation, tokens are case- and diacritic-folded, and each pattern is a
//! short template over the token stream. Matches report their position as
//! character offsets into the original text, so callers can highlight the
//! exact surface form even though matching runs on the folded tokens.
//!
//! Recognized period words form a fixed vocabulary (weekdays, month names,
//! seasons, "noel", and the bare duration units). [`classify_period`] sorts
//! that vocabulary into continuous measures ("jour", "semaine", ...) and
//! discontinuous ones (weekdays, day parts, "noel"); cyclic patterns such as
//! "tous les deux jours" count as discontinuous by their form alone, whatever
//! the unit, which [`Match::period_class`] takes into account.
//!
//! [`to_cti`] bridges matches into the adverbial grammar of [`crate::cti`]
//! when the pattern has a counterpart there; residual patterns (bare generics,
//! "par" without a count) stay surface-only.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::calendar::CalendarName;
use crate::cti::{self, CtiAst, Det, NcSpec};

/// Errors from period classification.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtractError {
    #[error("`{0}` is not in the period vocabulary")]
    UnknownLabel(String),
}

/// The closed inventory of surface patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternId {
    /// "tous les <label>", "toutes les <label>".
    TousLes,
    /// "tous les <n> <label>", a cyclic skip pattern.
    TousLesN,
    /// "chaque <label>".
    Chaque,
    /// "(n) fois par <label>", including vague counts ("plusieurs fois par").
    FoisPar,
    /// "par <label>" when not preceded by "fois".
    ParLabel,
    /// "<label> par <label>", e.g. "jour par semaine".
    LabelParLabel,
    /// "les <nièmes> <label> de", e.g. "les premiers jours de septembre".
    NiemeDe,
    /// "la plupart des <label>".
    Plupart,
    /// "<n> <label> sur <n'>", e.g. "un lundi sur trois".
    NSurN,
    /// "certains <label>", "quelques <label>".
    Certains,
    /// "<n> <label> par <label>", e.g. "deux jours par semaine".
    NParLabel,
    /// Generic determiner uses: "le mercredi", "les lundis d'été".
    Generique,
}

impl PatternId {
    /// Every pattern, in the priority order used to break length ties.
    pub const ALL: [PatternId; 12] = [
        PatternId::TousLesN,
        PatternId::TousLes,
        PatternId::Chaque,
        PatternId::FoisPar,
        PatternId::NSurN,
        PatternId::NParLabel,
        PatternId::LabelParLabel,
        PatternId::NiemeDe,
        PatternId::Plupart,
        PatternId::Certains,
        PatternId::ParLabel,
        PatternId::Generique,
    ];

    /// Stable identifier, usable on a command line.
    pub fn id(self) -> &'static str {
        match self {
            PatternId::TousLes => "TOUS_LES",
            PatternId::TousLesN => "TOUS_LES_N",
            PatternId::Chaque => "CHAQUE",
            PatternId::FoisPar => "FOIS_PAR",
            PatternId::ParLabel => "PAR_LABEL",
            PatternId::LabelParLabel => "LABEL_PAR_LABEL",
            PatternId::NiemeDe => "NIEME_DE",
            PatternId::Plupart => "PLUPART",
            PatternId::NSurN => "N_SUR_N",
            PatternId::Certains => "CERTAINS",
            PatternId::NParLabel => "N_PAR_LABEL",
            PatternId::Generique => "GENERIQUE",
        }
    }

    /// Inverse of [`PatternId::id`], case-insensitive.
    pub fn parse(text: &str) -> Option<PatternId> {
        let folded: String = text
            .chars()
            .map(|c| c.to_ascii_uppercase())
            .map(|c| if c == '-' { '_' } else { c })
            .collect();
        Self::ALL.into_iter().find(|p| p.id() == folded)
    }
}

/// Continuous measures vs periods with gaps between realizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodClass {
    Continuous,
    Discontinuous,
}

/// One recognized phrase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Match {
    pub pattern: PatternId,
    /// Character-offset span `[start, end)` into the scanned text.
    pub span: (usize, usize),
    /// Singular form of the matched period word.
    pub label: String,
    /// The sentence the phrase was found in, trimmed.
    pub sentence: String,
    /// Count captured by the numeric patterns, when one was present.
    pub number: Option<u32>,
    /// Block size `n'` of "n label sur n'".
    pub out_of: Option<u32>,
    /// Ordinal rank of "les nièmes label de".
    pub rank: Option<u32>,
    /// Second period word: the divisor of "par" patterns or the complement
    /// of "les nièmes label de <period>" / "les lundis d'été".
    pub second_label: Option<String>,
}

impl Match {
    /// Period classification of this match. Cyclic "tous les n <unit>"
    /// phrases are discontinuous by form; every other pattern defers to the
    /// unit table.
    pub fn period_class(&self) -> Result<PeriodClass, ExtractError> {
        if self.pattern == PatternId::TousLesN {
            return Ok(PeriodClass::Discontinuous);
        }
        classify_period(&self.label)
    }
}

// ---------------------------------------------------------------------------
// Vocabulary

const WEEKDAYS: [&str; 7] = [
    "lundi", "mardi", "mercredi", "jeudi", "vendredi", "samedi", "dimanche",
];

const MONTHS: [&str; 12] = [
    "janvier", "fevrier", "mars", "avril", "mai", "juin", "juillet", "aout",
    "septembre", "octobre", "novembre", "decembre",
];

const SEASONS: [&str; 4] = ["printemps", "ete", "automne", "hiver"];

const UNITS: [&str; 14] = [
    "heure", "matin", "soir", "nuit", "jour", "semaine", "mois", "trimestre",
    "semestre", "an", "annee", "minute", "seconde", "saison",
];

/// Reduces a folded token to its singular vocabulary form.
fn label_lemma(tok: &str) -> Option<&'static str> {
    fn direct(tok: &str) -> Option<&'static str> {
        WEEKDAYS
            .iter()
            .chain(MONTHS.iter())
            .chain(SEASONS.iter())
            .chain(UNITS.iter())
            .chain(core::iter::once(&"noel"))
            .find(|&&w| w == tok)
            .copied()
    }
    if let Some(w) = direct(tok) {
        return Some(w);
    }
    let singular = tok.strip_suffix('s')?;
    // "mais" is (almost) always the conjunction, never a plural of the month.
    if singular == "mai" {
        return None;
    }
    direct(singular)
}

/// Sorts a period word into the continuous / discontinuous table.
///
/// Continuous periods are the measure-like units; discontinuous ones name a
/// recurring fragment with gaps in between. Month and season names fall
/// outside the table and report [`ExtractError::UnknownLabel`], as does any
/// word outside the vocabulary.
pub fn classify_period(label: &str) -> Result<PeriodClass, ExtractError> {
    let folded: String = label.chars().map(fold_char).collect();
    let lemma =
        label_lemma(&folded).ok_or_else(|| ExtractError::UnknownLabel(label.to_string()))?;
    const CONTINUOUS: [&str; 11] = [
        "an", "annee", "heure", "jour", "minute", "mois", "saison", "seconde",
        "semaine", "semestre", "trimestre",
    ];
    if CONTINUOUS.contains(&lemma) {
        return Ok(PeriodClass::Continuous);
    }
    if WEEKDAYS.contains(&lemma) || ["matin", "nuit", "soir", "noel"].contains(&lemma) {
        return Ok(PeriodClass::Discontinuous);
    }
    Err(ExtractError::UnknownLabel(label.to_string()))
}

// ---------------------------------------------------------------------------
// Tokenization

#[derive(Debug)]
struct Token {
    /// Folded (lowercase, diacritic-free) text.
    text: String,
    /// Character offset of the first character in the original text.
    start: usize,
    /// Character offset one past the last character.
    end: usize,
}

fn fold_char(c: char) -> char {
    let c = c.to_lowercase().next().unwrap_or(c);
    match c {
        'à' | 'â' | 'ä' => 'a',
        'é' | 'è' | 'ê' | 'ë' => 'e',
        'î' | 'ï' => 'i',
        'ô' | 'ö' => 'o',
        'ù' | 'û' | 'ü' => 'u',
        'ç' => 'c',
        _ => c,
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '-'
}

struct SentenceSpan {
    /// Character-offset range of the sentence in the original text.
    chars: (usize, usize),
    tokens: Vec<Token>,
}

/// Splits on terminal punctuation and newlines, tokenizing as it goes.
/// Offsets count characters, not bytes.
fn segment(text: &str) -> Vec<SentenceSpan> {
    let mut sentences = Vec::new();
    let mut current = SentenceSpan {
        chars: (0, 0),
        tokens: Vec::new(),
    };
    let mut word: Option<Token> = None;
    let mut pos = 0usize;
    for raw in text.chars() {
        let folded = fold_char(raw);
        if is_word_char(folded) {
            match &mut word {
                Some(tok) => {
                    tok.text.push(folded);
                    tok.end = pos + 1;
                }
                None => {
                    word = Some(Token {
                        text: String::from(folded),
                        start: pos,
                        end: pos + 1,
                    });
                }
            }
        } else {
            if let Some(tok) = word.take() {
                current.tokens.push(tok);
            }
            if matches!(raw, '.' | '!' | '?' | '\n') {
                current.chars.1 = pos;
                if !current.tokens.is_empty() {
                    sentences.push(current);
                }
                current = SentenceSpan {
                    chars: (pos + 1, pos + 1),
                    tokens: Vec::new(),
                };
            }
        }
        pos += 1;
    }
    if let Some(tok) = word.take() {
        current.tokens.push(tok);
    }
    current.chars.1 = pos;
    if !current.tokens.is_empty() {
        sentences.push(current);
    }
    sentences
}

// ---------------------------------------------------------------------------
// Matching

struct Candidate {
    pattern: PatternId,
    /// Number of tokens consumed from the start position.
    tok_len: usize,
    label: &'static str,
    number: Option<u32>,
    out_of: Option<u32>,
    rank: Option<u32>,
    second_label: Option<&'static str>,
}

impl Candidate {
    fn new(pattern: PatternId, tok_len: usize, label: &'static str) -> Candidate {
        Candidate {
            pattern,
            tok_len,
            label,
            number: None,
            out_of: None,
            rank: None,
            second_label: None,
        }
    }
}

fn tok<'a>(ts: &'a [Token], i: usize) -> Option<&'a str> {
    ts.get(i).map(|t| t.text.as_str())
}

fn label_at(ts: &[Token], i: usize) -> Option<&'static str> {
    tok(ts, i).and_then(label_lemma)
}

fn number_at(ts: &[Token], i: usize) -> Option<u32> {
    tok(ts, i).and_then(cti::token_number)
}

fn ordinal_at(ts: &[Token], i: usize) -> Option<u32> {
    let t = tok(ts, i)?;
    cti::token_ordinal(t).or_else(|| cti::token_ordinal(t.strip_suffix('s')?))
}

fn digits_at(ts: &[Token], i: usize) -> bool {
    tok(ts, i).is_some_and(|t| !t.is_empty() && t.chars().all(|c| c.is_ascii_digit()))
}

fn try_tous_les(ts: &[Token], i: usize) -> Option<Candidate> {
    if !matches!(tok(ts, i)?, "tous" | "toutes") || tok(ts, i + 1)? != "les" {
        return None;
    }
    if let Some(n) = number_at(ts, i + 2) {
        let label = label_at(ts, i + 3)?;
        let mut c = Candidate::new(PatternId::TousLesN, 4, label);
        c.number = Some(n);
        return Some(c);
    }
    let label = label_at(ts, i + 2)?;
    Some(Candidate::new(PatternId::TousLes, 3, label))
}

fn try_chaque(ts: &[Token], i: usize) -> Option<Candidate> {
    if tok(ts, i)? != "chaque" {
        return None;
    }
    let label = label_at(ts, i + 1)?;
    Some(Candidate::new(PatternId::Chaque, 2, label))
}

/// "fois par <label>" with an optional count or vague quantifier in front:
/// "une fois par mois", "plusieurs centaines de fois par seconde".
fn try_fois_par(ts: &[Token], i: usize) -> Option<Candidate> {
    let head = tok(ts, i)?;
    let (anchor, number) = if head == "fois" {
        (i, None)
    } else if let Some(n) = number_at(ts, i) {
        (i + 1, Some(n))
    } else if matches!(head, "plusieurs" | "quelques") {
        if matches!(tok(ts, i + 1)?, "centaines" | "dizaines" | "milliers")
            && tok(ts, i + 2)? == "de"
        {
            (i + 3, None)
        } else {
            (i + 1, None)
        }
    } else {
        return None;
    };
    if tok(ts, anchor)? != "fois" || tok(ts, anchor + 1)? != "par" {
        return None;
    }
    let label = label_at(ts, anchor + 2)?;
    let mut c = Candidate::new(PatternId::FoisPar, anchor + 3 - i, label);
    c.number = number;
    Some(c)
}

fn try_n_sur_n(ts: &[Token], i: usize) -> Option<Candidate> {
    let n = number_at(ts, i)?;
    let label = label_at(ts, i + 1)?;
    if tok(ts, i + 2)? != "sur" {
        return None;
    }
    let p = number_at(ts, i + 3)?;
    let mut c = Candidate::new(PatternId::NSurN, 4, label);
    c.number = Some(n);
    c.out_of = Some(p);
    Some(c)
}

fn try_n_par_label(ts: &[Token], i: usize) -> Option<Candidate> {
    let n = number_at(ts, i)?;
    let label = label_at(ts, i + 1)?;
    if tok(ts, i + 2)? != "par" {
        return None;
    }
    let second = label_at(ts, i + 3)?;
    let mut c = Candidate::new(PatternId::NParLabel, 4, label);
    c.number = Some(n);
    c.second_label = Some(second);
    Some(c)
}

fn try_label_par_label(ts: &[Token], i: usize) -> Option<Candidate> {
    let label = label_at(ts, i)?;
    if tok(ts, i + 1)? != "par" {
        return None;
    }
    let second = label_at(ts, i + 2)?;
    let mut c = Candidate::new(PatternId::LabelParLabel, 3, label);
    c.second_label = Some(second);
    Some(c)
}

fn try_par_label(ts: &[Token], i: usize) -> Option<Candidate> {
    if tok(ts, i)? != "par" {
        return None;
    }
    // "fois par <label>" belongs to the frequency pattern.
    if i > 0 && tok(ts, i - 1) == Some("fois") {
        return None;
    }
    let label = label_at(ts, i + 1)?;
    Some(Candidate::new(PatternId::ParLabel, 2, label))
}

/// "les <nièmes> <label> de", optionally capturing a period word after the
/// "de" (skipping one determiner): "les premiers jours de septembre".
fn try_nieme_de(ts: &[Token], i: usize) -> Option<Candidate> {
    if !matches!(tok(ts, i)?, "le" | "la" | "les") {
        return None;
    }
    let rank = ordinal_at(ts, i + 1)?;
    let label = label_at(ts, i + 2)?;
    if !matches!(tok(ts, i + 3)?, "de" | "d" | "du" | "des") {
        return None;
    }
    let mut c = Candidate::new(PatternId::NiemeDe, 4, label);
    c.rank = Some(rank);
    let mut k = i + 4;
    if matches!(tok(ts, k), Some("le" | "la" | "les" | "l")) {
        k += 1;
    }
    if let Some(second) = label_at(ts, k) {
        c.second_label = Some(second);
        c.tok_len = k + 1 - i;
    }
    Some(c)
}

fn try_plupart(ts: &[Token], i: usize) -> Option<Candidate> {
    if tok(ts, i)? != "la" || tok(ts, i + 1)? != "plupart" || tok(ts, i + 2)? != "des" {
        return None;
    }
    let label = label_at(ts, i + 3)?;
    Some(Candidate::new(PatternId::Plupart, 4, label))
}

fn try_certains(ts: &[Token], i: usize) -> Option<Candidate> {
    if !matches!(tok(ts, i)?, "certains" | "certaines" | "quelques") {
        return None;
    }
    let label = label_at(ts, i + 1)?;
    Some(Candidate::new(PatternId::Certains, 2, label))
}

/// Generic determiner uses: "le mercredi", "l'été", "les lundis d'été",
/// optionally introduced by a frequency adverb ("souvent le mardi").
///
/// Excluded: a weekday followed by a date digit ("le lundi 19 janvier"),
/// "le matin du <event>", and "le soir même".
fn try_generique(ts: &[Token], i: usize) -> Option<Candidate> {
    let mut det = i;
    if matches!(tok(ts, i)?, "souvent" | "parfois" | "rarement") {
        det = i + 1;
    }
    if !matches!(tok(ts, det)?, "le" | "la" | "les" | "l") {
        return None;
    }
    let label = label_at(ts, det + 1)?;
    let after = det + 2;
    if WEEKDAYS.contains(&label) && digits_at(ts, after) {
        return None;
    }
    if label == "matin" && tok(ts, after) == Some("du") {
        return None;
    }
    if label == "soir" && tok(ts, after) == Some("meme") {
        return None;
    }
    let mut c = Candidate::new(PatternId::Generique, after - i, label);
    if matches!(tok(ts, after), Some("de" | "d" | "du" | "des")) {
        if let Some(second) = label_at(ts, after + 1) {
            c.second_label = Some(second);
            c.tok_len = after + 2 - i;
        }
    }
    Some(c)
}

fn best_candidate(ts: &[Token], i: usize) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    for pattern in PatternId::ALL {
        let cand = match pattern {
            PatternId::TousLes => None, // produced by the TousLesN matcher
            PatternId::TousLesN => try_tous_les(ts, i),
            PatternId::Chaque => try_chaque(ts, i),
            PatternId::FoisPar => try_fois_par(ts, i),
            PatternId::NSurN => try_n_sur_n(ts, i),
            PatternId::NParLabel => try_n_par_label(ts, i),
            PatternId::LabelParLabel => try_label_par_label(ts, i),
            PatternId::NiemeDe => try_nieme_de(ts, i),
            PatternId::Plupart => try_plupart(ts, i),
            PatternId::Certains => try_certains(ts, i),
            PatternId::ParLabel => try_par_label(ts, i),
            PatternId::Generique => try_generique(ts, i),
        };
        if let Some(c) = cand {
            // Longest phrase wins; PatternId::ALL order breaks ties.
            if best.as_ref().is_none_or(|b| c.tok_len > b.tok_len) {
                best = Some(c);
            }
        }
    }
    best
}

/// Scans raw text and returns every recognized phrase, left to right.
/// Matches never overlap: at each position the longest phrase wins and
/// scanning resumes after it.
pub fn scan(text: &str) -> Vec<Match> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    for sentence in segment(text) {
        let slice: String = chars[sentence.chars.0..sentence.chars.1].iter().collect();
        let sentence_text = slice.trim().to_string();
        let ts = &sentence.tokens;
        let mut i = 0;
        while i < ts.len() {
            match best_candidate(ts, i) {
                Some(c) => {
                    let last = &ts[i + c.tok_len - 1];
                    out.push(Match {
                        pattern: c.pattern,
                        span: (ts[i].start, last.end),
                        label: c.label.to_string(),
                        sentence: sentence_text.clone(),
                        number: c.number,
                        out_of: c.out_of,
                        rank: c.rank,
                        second_label: c.second_label.map(String::from),
                    });
                    i += c.tok_len;
                }
                None => i += 1,
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Bridge to the adverbial grammar

/// Translates a match into the adverbial grammar when a counterpart exists.
///
/// Bare generics and count-less "par <label>" / "fois par <label>" phrases
/// have no grammatical counterpart and return `None`, as do period words
/// outside the calendar vocabulary ("trimestre", "noel").
pub fn to_cti(m: &Match) -> Option<CtiAst> {
    let name = CalendarName::parse(&m.label)?;
    let plain = |name: CalendarName| NcSpec { name, suite: None };
    let second = || {
        m.second_label
            .as_deref()
            .and_then(CalendarName::parse)
    };
    Some(match m.pattern {
        PatternId::TousLes | PatternId::Chaque => CtiAst::Det(Det::Les, plain(name)),
        PatternId::TousLesN => CtiAst::TousLesN {
            n: m.number?,
            unit: name,
        },
        PatternId::FoisPar => CtiAst::FoisPar {
            n: m.number?,
            unit: name,
        },
        PatternId::NSurN => {
            let (n, p) = (m.number?, m.out_of?);
            if n > p {
                return None;
            }
            CtiAst::Sur { n, p, unit: name }
        }
        PatternId::NParLabel => CtiAst::Par {
            n: m.number?,
            first: name,
            second: second()?,
        },
        PatternId::LabelParLabel => CtiAst::Par {
            n: 1,
            first: name,
            second: second()?,
        },
        PatternId::NiemeDe => CtiAst::Nth {
            n: m.rank?,
            unit: name,
            parent: second().map(|p| Box::new(CtiAst::Det(Det::Les, plain(p)))),
        },
        PatternId::Plupart => CtiAst::Det(Det::Plupart, plain(name)),
        PatternId::Certains => CtiAst::Det(Det::Certains, plain(name)),
        PatternId::ParLabel | PatternId::Generique => return None,
    })
}
