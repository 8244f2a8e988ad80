//! Aspect/tense calculus over interval bounds.
//!
//! A clause is described structurally (lexical process class, tense, duration
//! and clock circumstancials, iteration adverbs); the calculus translates each
//! marker into constraints between the endpoints of a small set of role
//! intervals — enunciation [O1,O2], process [B1,B2], reference [I,II], one
//! [ct1,ct2] per circumstancial, and a series level [Bs1,Bs2]/[Is,IIs] when
//! iteration is involved. Solving the resulting point network detects marker
//! conflicts; conflicts are repaired by the smallest available deformation
//! (contraction of the process onto its initial bound, then iteration), or
//! reported as insoluble.

use alloc::string::String;
use alloc::vec::Vec;

use crate::allen::{BaseRelation, RelationSet, ALL_RELATIONS};
use crate::cti::{CtiAst, FreqAdverb};
use crate::network::QualNetwork;

/// Lexical classes of the process.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vendler {
    Etat,
    Activite,
    Accomplissement,
    Achevement,
}

impl Vendler {
    /// Accomplishments and achievements carry intrinsic (telic) bounds;
    /// states and activities extrinsic ones.
    pub fn telic(self) -> bool {
        matches!(self, Vendler::Accomplissement | Vendler::Achevement)
    }

    /// Achievements are punctual: their bounds are adjacent.
    pub fn punctual(self) -> bool {
        matches!(self, Vendler::Achevement)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tense {
    Present,
    Imparfait,
    PasseSimple,
    PasseCompose,
    PlusQueParfait,
    Futur,
}

/// Aspectual view of the process from the reference interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aspect {
    /// The process is shown in its entirety: I=B1, II=B2.
    Aoristique,
    /// Only a proper inner part is shown: B1<I, II<B2.
    Inaccompli,
    /// The resulting state is shown: B2<I.
    Accompli,
    /// The preparatory phase is shown: II<B1.
    Prospectif,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TenseValue {
    Passe,
    Present,
    Futur,
}

/// Temporal circumstancials that interact with aspect.
#[derive(Debug, Clone, PartialEq)]
pub enum Circumstancial {
    /// "pendant d": frames the whole process, extrinsic bounds only.
    PendantDuree(i64),
    /// "en d": measures a telic process run.
    EnDuree(i64),
    /// "depuis d": relates a phase of the process to the reference.
    DepuisDuree(i64),
    /// "à 8h30": punctual anchor integrated into the verb phrase.
    AClock { hour: u8, minute: u8 },
    /// A calendar adverbial handled by the adverbial DSL.
    CtiCirc(CtiAst),
}

impl Circumstancial {
    fn kind(&self) -> &'static str {
        match self {
            Circumstancial::PendantDuree(_) => "pendant",
            Circumstancial::EnDuree(_) => "en",
            Circumstancial::DepuisDuree(_) => "depuis",
            Circumstancial::AClock { .. } => "clock",
            Circumstancial::CtiCirc(_) => "cti",
        }
    }
}

/// Iteration-related adverbs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adverb {
    Encore,
    Deja,
    IterativeCount(u32),
    Frequency(FreqAdverb),
}

/// Structured description of one clause. Construction is unchecked; call
/// [`Clause::validate`] at system boundaries.
#[derive(Debug, Clone, PartialEq)]
pub struct Clause {
    pub vendler: Vendler,
    pub reiterable: bool,
    /// Whether one uninterrupted run over the stated span is plausible.
    pub plausible_duration: bool,
    pub tense: Tense,
    pub circumstancials: Vec<Circumstancial>,
    pub adverb: Option<Adverb>,
}

impl Clause {
    pub fn new(vendler: Vendler, tense: Tense) -> Self {
        Clause {
            vendler,
            reiterable: true,
            plausible_duration: true,
            tense,
            circumstancials: Vec::new(),
            adverb: None,
        }
    }

    pub fn with(mut self, c: Circumstancial) -> Self {
        self.circumstancials.push(c);
        self
    }

    /// Checks the record invariants: positive durations and at most one
    /// circumstancial of each kind.
    pub fn validate(&self) -> Result<(), ClauseError> {
        let mut seen: Vec<&'static str> = Vec::new();
        for c in &self.circumstancials {
            match c {
                Circumstancial::PendantDuree(d)
                | Circumstancial::EnDuree(d)
                | Circumstancial::DepuisDuree(d)
                    if *d <= 0 =>
                {
                    return Err(ClauseError::NonPositiveDuration(*d));
                }
                _ => {}
            }
            let kind = c.kind();
            if seen.contains(&kind) {
                return Err(ClauseError::DuplicateCircumstancial(kind));
            }
            seen.push(kind);
        }
        Ok(())
    }

    fn has_depuis(&self) -> bool {
        self.circumstancials
            .iter()
            .any(|c| matches!(c, Circumstancial::DepuisDuree(_)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClauseError {
    #[error("durations must be positive, got {0}")]
    NonPositiveDuration(i64),
    #[error("at most one `{0}` circumstancial is allowed")]
    DuplicateCircumstancial(&'static str),
}

/// Default coding of tense into viewpoint aspect and temporal location.
/// "depuis" shifts the compound past to its resultative reading.
pub fn tense_coding(tense: Tense, has_depuis: bool) -> (Aspect, TenseValue) {
    match tense {
        Tense::Present => (Aspect::Inaccompli, TenseValue::Present),
        Tense::Imparfait => (Aspect::Inaccompli, TenseValue::Passe),
        Tense::PasseSimple => (Aspect::Aoristique, TenseValue::Passe),
        Tense::PasseCompose if has_depuis => (Aspect::Accompli, TenseValue::Passe),
        Tense::PasseCompose => (Aspect::Aoristique, TenseValue::Passe),
        Tense::PlusQueParfait => (Aspect::Accompli, TenseValue::Passe),
        Tense::Futur => (Aspect::Aoristique, TenseValue::Futur),
    }
}

// ---------------------------------------------------------------------------
// Point variables and the point relation algebra

/// Endpoint variables of the role intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Point {
    O1,
    O2,
    B1,
    B2,
    I,
    II,
    Bs1,
    Bs2,
    Is,
    IIs,
    /// Left (`end=false`) or right (`end=true`) bound of circumstancial `circ`.
    Ct { circ: usize, end: bool },
}

impl Point {
    fn index(self) -> usize {
        match self {
            Point::O1 => 0,
            Point::O2 => 1,
            Point::B1 => 2,
            Point::B2 => 3,
            Point::I => 4,
            Point::II => 5,
            Point::Bs1 => 6,
            Point::Bs2 => 7,
            Point::Is => 8,
            Point::IIs => 9,
            Point::Ct { circ, end } => 10 + 2 * circ + usize::from(end),
        }
    }

    pub fn name(self) -> String {
        match self {
            Point::O1 => "O1".into(),
            Point::O2 => "O2".into(),
            Point::B1 => "B1".into(),
            Point::B2 => "B2".into(),
            Point::I => "I".into(),
            Point::II => "II".into(),
            Point::Bs1 => "Bs1".into(),
            Point::Bs2 => "Bs2".into(),
            Point::Is => "Is".into(),
            Point::IIs => "IIs".into(),
            Point::Ct { circ, end } => {
                let mut s = String::from(if end { "ct2" } else { "ct1" });
                for _ in 0..circ {
                    s.push('\'');
                }
                s
            }
        }
    }
}

/// Subset of the point relations {<, =, >}, bit-coded.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct PaSet(u8);

impl PaSet {
    pub const EMPTY: PaSet = PaSet(0);
    pub const LT: PaSet = PaSet(0b001);
    pub const EQ: PaSet = PaSet(0b010);
    pub const GT: PaSet = PaSet(0b100);
    pub const LE: PaSet = PaSet(0b011);
    pub const GE: PaSet = PaSet(0b110);
    pub const FULL: PaSet = PaSet(0b111);

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, other: PaSet) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn intersect(self, other: PaSet) -> PaSet {
        PaSet(self.0 & other.0)
    }

    pub fn converse(self) -> PaSet {
        PaSet((self.0 & 0b010) | ((self.0 & 0b001) << 2) | ((self.0 & 0b100) >> 2))
    }

    /// Weak composition of point relations.
    pub fn compose(self, other: PaSet) -> PaSet {
        let mut out = 0u8;
        for a in 0..3 {
            if self.0 & (1 << a) == 0 {
                continue;
            }
            for b in 0..3 {
                if other.0 & (1 << b) == 0 {
                    continue;
                }
                // 0 = '<', 1 = '=', 2 = '>'
                out |= match (a, b) {
                    (1, x) => 1 << x,
                    (x, 1) => 1 << x,
                    (0, 0) => 0b001,
                    (2, 2) => 0b100,
                    _ => 0b111, // opposite strict orders say nothing
                };
            }
        }
        PaSet(out)
    }
}

impl core::fmt::Debug for PaSet {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let mut names = Vec::new();
        if self.contains(PaSet::LT) {
            names.push("<");
        }
        if self.contains(PaSet::EQ) {
            names.push("=");
        }
        if self.contains(PaSet::GT) {
            names.push(">");
        }
        write!(f, "{{{}}}", names.join(","))
    }
}

/// Relations a marker may impose between two endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundRel {
    Lt,
    Le,
    Eq,
    /// Infinitely close bounds: behaves as ≤ in the network and as equality
    /// at the reporting granularity.
    Adjacent,
}

impl BoundRel {
    fn pa(self) -> PaSet {
        match self {
            BoundRel::Lt => PaSet::LT,
            BoundRel::Le | BoundRel::Adjacent => PaSet::LE,
            BoundRel::Eq => PaSet::EQ,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            BoundRel::Lt => "<",
            BoundRel::Le => "<=",
            BoundRel::Eq => "=",
            BoundRel::Adjacent => "~",
        }
    }
}

/// One endpoint constraint, e.g. `B1 < I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundConstraint {
    pub a: Point,
    pub rel: BoundRel,
    pub b: Point,
}

impl core::fmt::Display for BoundConstraint {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{} {} {}", self.a.name(), self.rel.symbol(), self.b.name())
    }
}

fn bc(a: Point, rel: BoundRel, b: Point) -> BoundConstraint {
    BoundConstraint { a, rel, b }
}

/// Marker compatibility requirements that are not endpoint relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideCondition {
    /// "pendant" frames only extrinsically bounded processes.
    PendantRequiresExtrinsic { circ: usize },
    /// "en" measures only intrinsically bounded processes.
    EnRequiresIntrinsic { circ: usize },
}

impl SideCondition {
    pub fn holds(self, telic: bool) -> bool {
        match self {
            SideCondition::PendantRequiresExtrinsic { .. } => !telic,
            SideCondition::EnRequiresIntrinsic { .. } => telic,
        }
    }
}

/// Full constraint set a clause codes, before any consistency check.
/// A clause is satisfiable when `base` plus one of `alternatives` (all of
/// them empty meaning just `base`) has a consistent point network and every
/// side condition holds.
#[derive(Debug, Clone, PartialEq)]
pub struct Instructions {
    pub base: Vec<BoundConstraint>,
    pub alternatives: Vec<Vec<BoundConstraint>>,
    pub side: Vec<SideCondition>,
}

fn aspect_constraints(aspect: Aspect, process: (Point, Point), reference: (Point, Point)) -> Vec<BoundConstraint> {
    let (b1, b2) = process;
    let (i, ii) = reference;
    match aspect {
        Aspect::Aoristique => alloc::vec![bc(i, BoundRel::Eq, b1), bc(ii, BoundRel::Eq, b2)],
        Aspect::Inaccompli => alloc::vec![bc(b1, BoundRel::Lt, i), bc(ii, BoundRel::Lt, b2)],
        Aspect::Accompli => alloc::vec![bc(b2, BoundRel::Lt, i)],
        Aspect::Prospectif => alloc::vec![bc(ii, BoundRel::Lt, b1)],
    }
}

fn tense_constraints(value: TenseValue, reference: (Point, Point)) -> Vec<BoundConstraint> {
    let (i, ii) = reference;
    match value {
        TenseValue::Passe => alloc::vec![bc(ii, BoundRel::Lt, Point::O1)],
        TenseValue::Present => alloc::vec![
            bc(i, BoundRel::Le, Point::O2),
            bc(Point::O1, BoundRel::Le, ii),
        ],
        TenseValue::Futur => alloc::vec![bc(Point::O2, BoundRel::Lt, i)],
    }
}

/// The two readings of "depuis + durée": the process still runs at the
/// reference (imperfective view), or its result state does (perfect view).
/// Both constrain the circumstancial to reach the reference's end.
fn depuis_branches(
    circ: usize,
    process: (Point, Point),
    reference: (Point, Point),
) -> Vec<Vec<BoundConstraint>> {
    let ct1 = Point::Ct { circ, end: false };
    let ct2 = Point::Ct { circ, end: true };
    let (b1, b2) = process;
    let (i, ii) = reference;
    let ongoing = alloc::vec![
        bc(ct1, BoundRel::Eq, b1),
        bc(ct2, BoundRel::Eq, ii),
        bc(b1, BoundRel::Lt, i),
        bc(ii, BoundRel::Lt, b2),
    ];
    let resultative = alloc::vec![
        bc(ct1, BoundRel::Eq, b2),
        bc(ct2, BoundRel::Eq, ii),
        bc(b2, BoundRel::Lt, i),
    ];
    alloc::vec![ongoing, resultative]
}

struct LevelSpec {
    /// Constraints target the series level instead of the occurrence.
    iterative: bool,
    aspect: Aspect,
    tense_value: TenseValue,
    punctual: bool,
}

/// Assembles the constraints of one solving attempt. In the iterative
/// layout, tense and "depuis" move to the series reference, while frame,
/// measure and clock circumstancials stay with one occurrence.
fn assemble(clause: &Clause, spec: &LevelSpec) -> Instructions {
    let mut base = Vec::new();
    let mut alternatives = Vec::new();
    let mut side = Vec::new();

    base.push(bc(Point::O1, BoundRel::Le, Point::O2));
    base.push(bc(Point::I, BoundRel::Le, Point::II));
    base.push(bc(
        Point::B1,
        if spec.punctual { BoundRel::Adjacent } else { BoundRel::Lt },
        Point::B2,
    ));

    let occurrence = (Point::B1, Point::B2);
    let occ_reference = (Point::I, Point::II);
    if spec.iterative {
        base.push(bc(Point::Is, BoundRel::Le, Point::IIs));
        // the series hosts its occurrences
        base.push(bc(Point::Bs1, BoundRel::Le, Point::B1));
        base.push(bc(Point::B2, BoundRel::Le, Point::Bs2));
        // per-occurrence view is global, the series is seen from inside
        base.extend(aspect_constraints(Aspect::Aoristique, occurrence, occ_reference));
        base.extend(aspect_constraints(
            Aspect::Inaccompli,
            (Point::Bs1, Point::Bs2),
            (Point::Is, Point::IIs),
        ));
        base.extend(tense_constraints(spec.tense_value, (Point::Is, Point::IIs)));
    } else {
        base.extend(aspect_constraints(spec.aspect, occurrence, occ_reference));
        base.extend(tense_constraints(spec.tense_value, occ_reference));
    }

    for (circ, c) in clause.circumstancials.iter().enumerate() {
        let ct1 = Point::Ct { circ, end: false };
        let ct2 = Point::Ct { circ, end: true };
        match c {
            Circumstancial::PendantDuree(_) => {
                base.push(bc(ct1, BoundRel::Eq, Point::B1));
                base.push(bc(Point::B1, BoundRel::Eq, Point::I));
                base.push(bc(ct2, BoundRel::Eq, Point::B2));
                base.push(bc(Point::B2, BoundRel::Eq, Point::II));
                side.push(SideCondition::PendantRequiresExtrinsic { circ });
            }
            Circumstancial::EnDuree(_) => {
                base.push(bc(ct1, BoundRel::Eq, Point::B1));
                base.push(bc(ct2, BoundRel::Eq, Point::B2));
                side.push(SideCondition::EnRequiresIntrinsic { circ });
            }
            Circumstancial::AClock { .. } => {
                base.push(bc(ct1, BoundRel::Eq, ct2));
                base.push(bc(ct1, BoundRel::Le, Point::B1));
                base.push(bc(Point::B2, BoundRel::Le, ct2));
            }
            Circumstancial::CtiCirc(_) => {
                // a site hosting the located level
                if spec.iterative {
                    base.push(bc(ct1, BoundRel::Le, Point::Bs1));
                    base.push(bc(Point::Bs2, BoundRel::Le, ct2));
                } else {
                    base.push(bc(ct1, BoundRel::Le, Point::B1));
                    base.push(bc(Point::B2, BoundRel::Le, ct2));
                }
            }
            Circumstancial::DepuisDuree(_) => {
                let mut branches = if spec.iterative {
                    depuis_branches(circ, (Point::Bs1, Point::Bs2), (Point::Is, Point::IIs))
                } else {
                    depuis_branches(circ, occurrence, occ_reference)
                };
                // prefer the reading the coded aspect already commits to
                let series_aspect = if spec.iterative { Aspect::Inaccompli } else { spec.aspect };
                if series_aspect == Aspect::Accompli {
                    branches.swap(0, 1);
                }
                alternatives = branches;
            }
        }
    }

    Instructions {
        base,
        alternatives,
        side,
    }
}

/// The full constraint set the clause's markers code, before any
/// consistency check or repair.
pub fn instructions(clause: &Clause) -> Instructions {
    let (aspect, tense_value) = tense_coding(clause.tense, clause.has_depuis());
    assemble(
        clause,
        &LevelSpec {
            iterative: false,
            aspect,
            tense_value,
            punctual: clause.vendler.punctual(),
        },
    )
}

// ---------------------------------------------------------------------------
// Point network solving

/// A complete graph of point relations, solved by closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointNetwork {
    n: usize,
    rel: Vec<PaSet>,
}

impl PointNetwork {
    fn new(n: usize) -> Self {
        let mut net = PointNetwork {
            n,
            rel: alloc::vec![PaSet::FULL; n * n],
        };
        for i in 0..n {
            net.rel[i * n + i] = PaSet::EQ;
        }
        net
    }

    fn constrain(&mut self, a: usize, b: usize, r: PaSet) {
        self.rel[a * self.n + b] = self.rel[a * self.n + b].intersect(r);
        self.rel[b * self.n + a] = self.rel[b * self.n + a].intersect(r.converse());
    }

    /// Tightens to a fixpoint; false when some pair becomes impossible.
    fn close(&mut self) -> bool {
        let n = self.n;
        loop {
            let mut changed = false;
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let via = self.rel[i * n + k].compose(self.rel[k * n + j]);
                        let old = self.rel[i * n + j];
                        let new = old.intersect(via);
                        if new != old {
                            self.rel[i * n + j] = new;
                            changed = true;
                        }
                        if new.is_empty() {
                            return false;
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// The possible relations between two endpoint variables.
    pub fn relation(&self, a: Point, b: Point) -> PaSet {
        self.rel[a.index() * self.n + b.index()]
    }

    pub fn is_consistent(&self) -> bool {
        self.rel.iter().all(|r| !r.is_empty())
    }
}

fn solve(n_points: usize, constraints: &[&[BoundConstraint]]) -> Option<PointNetwork> {
    let mut net = PointNetwork::new(n_points);
    for group in constraints {
        for c in *group {
            net.constrain(c.a.index(), c.b.index(), c.rel.pa());
        }
    }
    net.close().then_some(net)
}

/// Tries `base` plus each alternative in turn (just `base` when none).
fn solve_instructions(n_points: usize, ins: &Instructions, telic: bool) -> Option<PointNetwork> {
    if !ins.side.iter().all(|s| s.holds(telic)) {
        return None;
    }
    if ins.alternatives.is_empty() {
        return solve(n_points, &[&ins.base]);
    }
    ins.alternatives
        .iter()
        .find_map(|branch| solve(n_points, &[&ins.base, branch]))
}

// ---------------------------------------------------------------------------
// Structures and diagnosis

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diagnosis {
    Ok,
    ResolvedIteration,
    ResolvedContraction,
    Insoluble,
}

/// Role intervals present in a structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Enonciation,
    Proces,
    Reference,
    Circonstanciel(usize),
    Serie,
    SerieReference,
}

impl Role {
    pub fn points(self) -> (Point, Point) {
        match self {
            Role::Enonciation => (Point::O1, Point::O2),
            Role::Proces => (Point::B1, Point::B2),
            Role::Reference => (Point::I, Point::II),
            Role::Circonstanciel(k) => (
                Point::Ct { circ: k, end: false },
                Point::Ct { circ: k, end: true },
            ),
            Role::Serie => (Point::Bs1, Point::Bs2),
            Role::SerieReference => (Point::Is, Point::IIs),
        }
    }

    pub fn name(self) -> String {
        match self {
            Role::Enonciation => "enonciation".into(),
            Role::Proces => "proces".into(),
            Role::Reference => "reference".into(),
            Role::Circonstanciel(k) => alloc::format!("circonstanciel{}", k + 1),
            Role::Serie => "serie".into(),
            Role::SerieReference => "serie_reference".into(),
        }
    }
}

/// Solved interval structure of a clause.
#[derive(Debug, Clone, PartialEq)]
pub struct SdtStructure {
    pub intervals: Vec<Role>,
    /// Solved endpoint network (of the last attempted reading).
    pub bounds: PointNetwork,
    /// Viewpoint aspect at the occurrence level.
    pub aspect: Aspect,
    /// Aspect of the series level, present exactly when iterative.
    pub aspect_series: Option<Aspect>,
    pub tense_value: TenseValue,
    pub diagnosis: Diagnosis,
    pub telic: bool,
    /// Process bounds adjacent (zero extent at the granularity).
    pub punctual: bool,
}

impl SdtStructure {
    pub fn iterative(&self) -> bool {
        self.aspect_series.is_some()
    }
}

/// Iteration needs countable occurrences: intrinsic process bounds, or a
/// marker that delimits one occurrence (a frame, measure, clock or calendar
/// circumstancial). "depuis" alone bounds nothing at the occurrence level.
fn occurrences_individuated(clause: &Clause) -> bool {
    clause.vendler.telic()
        || clause.circumstancials.iter().any(|c| {
            matches!(
                c,
                Circumstancial::PendantDuree(_)
                    | Circumstancial::EnDuree(_)
                    | Circumstancial::AClock { .. }
                    | Circumstancial::CtiCirc(_)
            )
        })
}

/// Assembles, solves and if necessary repairs a clause's structure.
///
/// Repairs follow the least-deformation order: contraction of the process
/// onto its initial bound (when a punctual circumstancial meets a
/// non-punctual process), then iteration (when the process is reiterable
/// and its occurrences are individuated). A reiterable process whose single
/// run is implausibly long iterates even without a formal conflict.
pub fn build_structure(clause: &Clause) -> SdtStructure {
    debug_assert!(clause.validate().is_ok());
    let (aspect, tense_value) = tense_coding(clause.tense, clause.has_depuis());
    let telic = clause.vendler.telic();
    let punctual = clause.vendler.punctual();
    let n_points = 10 + 2 * clause.circumstancials.len();
    let mut intervals = alloc::vec![Role::Enonciation, Role::Proces, Role::Reference];
    for k in 0..clause.circumstancials.len() {
        intervals.push(Role::Circonstanciel(k));
    }

    let single = |punctual: bool| LevelSpec {
        iterative: false,
        aspect,
        tense_value,
        punctual,
    };

    let base_ins = assemble(clause, &single(punctual));
    let base_net = solve_instructions(n_points, &base_ins, telic);
    let forced_iteration = clause.reiterable && !clause.plausible_duration;

    if let Some(net) = base_net {
        if !forced_iteration {
            return SdtStructure {
                intervals,
                bounds: net,
                aspect,
                aspect_series: None,
                tense_value,
                diagnosis: Diagnosis::Ok,
                telic,
                punctual,
            };
        }
    } else {
        // contraction: the process collapses onto its initial bound and
        // behaves as an achievement
        let has_clock = clause
            .circumstancials
            .iter()
            .any(|c| matches!(c, Circumstancial::AClock { .. }));
        if has_clock && !punctual {
            let ins = assemble(clause, &single(true));
            if let Some(net) = solve_instructions(n_points, &ins, true) {
                return SdtStructure {
                    intervals,
                    bounds: net,
                    aspect,
                    aspect_series: None,
                    tense_value,
                    diagnosis: Diagnosis::ResolvedContraction,
                    telic: true,
                    punctual: true,
                };
            }
        }
    }

    if clause.reiterable && occurrences_individuated(clause) {
        let ins = assemble(
            clause,
            &LevelSpec {
                iterative: true,
                aspect,
                tense_value,
                punctual,
            },
        );
        if let Some(net) = solve_instructions(n_points, &ins, telic) {
            intervals.push(Role::Serie);
            intervals.push(Role::SerieReference);
            return SdtStructure {
                intervals,
                bounds: net,
                aspect: Aspect::Aoristique,
                aspect_series: Some(Aspect::Inaccompli),
                tense_value,
                diagnosis: Diagnosis::ResolvedIteration,
                telic,
                punctual,
            };
        }
    }

    // keep the base-level (inconsistent or conflicting) picture for inspection
    let mut net = PointNetwork::new(n_points);
    for c in &base_ins.base {
        net.constrain(c.a.index(), c.b.index(), c.rel.pa());
    }
    net.close();
    SdtStructure {
        intervals,
        bounds: net,
        aspect,
        aspect_series: None,
        tense_value,
        diagnosis: Diagnosis::Insoluble,
        telic,
        punctual,
    }
}

// ---------------------------------------------------------------------------
// Translation to a qualitative interval network

/// Endpoint requirements of each base interval relation between [a1,a2]
/// and [b1,b2]: (a1 vs b1, a1 vs b2, a2 vs b1, a2 vs b2).
fn base_requirements(r: BaseRelation) -> [PaSet; 4] {
    use BaseRelation::*;
    let (lt, eq, gt) = (PaSet::LT, PaSet::EQ, PaSet::GT);
    match r {
        P => [lt, lt, lt, lt],
        M => [lt, lt, eq, lt],
        O => [lt, lt, gt, lt],
        Fi => [lt, lt, gt, eq],
        Di => [lt, lt, gt, gt],
        S => [eq, lt, gt, lt],
        Eq => [eq, lt, gt, eq],
        Si => [eq, lt, gt, gt],
        D => [gt, lt, gt, lt],
        F => [gt, lt, gt, eq],
        Oi => [gt, lt, gt, gt],
        Mi => [gt, eq, gt, gt],
        Pi => [gt, gt, gt, gt],
    }
}

/// Translates the solved endpoint bounds into a qualitative network over the
/// proper role intervals (circumstancials are omitted: a clock circumstancial
/// is a point and has no proper interval relation). Adjacent bounds count as
/// equality here.
pub fn to_network(structure: &SdtStructure) -> QualNetwork {
    let mut net = QualNetwork::new();
    let roles: Vec<Role> = structure
        .intervals
        .iter()
        .copied()
        .filter(|r| !matches!(r, Role::Circonstanciel(_)))
        .collect();
    for role in &roles {
        net.ensure_node(&role.name());
    }
    for (ai, a) in roles.iter().enumerate() {
        for b in roles.iter().skip(ai + 1) {
            let (a1, a2) = a.points();
            let (b1, b2) = b.points();
            let pairs = [(a1, b1), (a1, b2), (a2, b1), (a2, b2)];
            let mut set = RelationSet::EMPTY;
            for r in ALL_RELATIONS {
                let req = base_requirements(r);
                if pairs
                    .iter()
                    .zip(req)
                    .all(|((x, y), need)| structure.bounds.relation(*x, *y).contains(need))
                {
                    set = set | RelationSet::singleton(r);
                }
            }
            if set != RelationSet::FULL {
                let _ = net.constrain(&a.name(), &b.name(), set);
            }
        }
    }
    net
}

// ---------------------------------------------------------------------------
// Adverbs

/// How an iteration adverb bounds the series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesBounding {
    /// Bounds carried by the adverb itself (a count) rather than by an
    /// external frame.
    pub intrinsic: bool,
    pub occurrence_count: Option<u32>,
    pub density: Option<FreqAdverb>,
    /// "pendant" rejects intrinsically bounded series; "en" requires them.
    pub duration_conflict: bool,
}

/// Series bounding coded by a repetition or frequency adverb, when present.
pub fn adverb_iteration(clause: &Clause) -> Option<SeriesBounding> {
    let has_pendant = clause
        .circumstancials
        .iter()
        .any(|c| matches!(c, Circumstancial::PendantDuree(_)));
    let has_en = clause
        .circumstancials
        .iter()
        .any(|c| matches!(c, Circumstancial::EnDuree(_)));
    match clause.adverb {
        Some(Adverb::IterativeCount(n)) => Some(SeriesBounding {
            intrinsic: true,
            occurrence_count: Some(n),
            density: None,
            duration_conflict: has_pendant,
        }),
        Some(Adverb::Frequency(class)) => Some(SeriesBounding {
            intrinsic: false,
            occurrence_count: None,
            density: Some(class),
            duration_conflict: has_en,
        }),
        _ => None,
    }
}

/// Readings of "encore"/"déjà".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reading {
    Iterative,
    Durative,
    Ambiguous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncoreDeja {
    Encore,
    Deja,
}

/// Reading selection for "encore"/"déjà": the iterative sense imposes
/// itself under a global (aoristic) view or intrinsic process bounds; an
/// extrinsically bounded process seen from inside stays ambiguous; the
/// remaining perfect/prospective views read as durative.
pub fn encore_deja(clause: &Clause, _adverb: EncoreDeja) -> Reading {
    let (aspect, _) = tense_coding(clause.tense, clause.has_depuis());
    let telic = clause.vendler.telic();
    if aspect == Aspect::Aoristique || telic {
        Reading::Iterative
    } else if aspect == Aspect::Inaccompli {
        Reading::Ambiguous
    } else {
        Reading::Durative
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Verdict;

    fn contains(ins: &Instructions, a: Point, rel: BoundRel, b: Point) -> bool {
        ins.base.contains(&bc(a, rel, b))
    }

    fn edge_named(net: &QualNetwork, a: &str, b: &str) -> RelationSet {
        net.edge(net.node_id(a).unwrap(), net.node_id(b).unwrap())
    }

    #[test]
    fn tense_and_aspect_instructions_match_the_documented_sets() {
        let imparfait = instructions(&Clause::new(Vendler::Activite, Tense::Imparfait));
        assert!(contains(&imparfait, Point::B1, BoundRel::Lt, Point::I));
        assert!(contains(&imparfait, Point::II, BoundRel::Lt, Point::B2));
        assert!(contains(&imparfait, Point::II, BoundRel::Lt, Point::O1));

        let passe_simple = instructions(&Clause::new(Vendler::Activite, Tense::PasseSimple));
        assert!(contains(&passe_simple, Point::I, BoundRel::Eq, Point::B1));
        assert!(contains(&passe_simple, Point::II, BoundRel::Eq, Point::B2));
        assert!(contains(&passe_simple, Point::II, BoundRel::Lt, Point::O1));

        let pendant = instructions(
            &Clause::new(Vendler::Activite, Tense::Imparfait)
                .with(Circumstancial::PendantDuree(120)),
        );
        let ct1 = Point::Ct { circ: 0, end: false };
        let ct2 = Point::Ct { circ: 0, end: true };
        assert!(contains(&pendant, ct1, BoundRel::Eq, Point::B1));
        assert!(contains(&pendant, Point::B1, BoundRel::Eq, Point::I));
        assert!(contains(&pendant, ct2, BoundRel::Eq, Point::B2));
        assert!(contains(&pendant, Point::B2, BoundRel::Eq, Point::II));
        assert_eq!(pendant.side, [SideCondition::PendantRequiresExtrinsic { circ: 0 }]);

        let depuis = instructions(
            &Clause::new(Vendler::Activite, Tense::Imparfait)
                .with(Circumstancial::DepuisDuree(120)),
        );
        assert_eq!(depuis.alternatives.len(), 2);
    }

    #[test]
    fn plain_clauses_solve_without_repair() {
        for tense in [
            Tense::Present,
            Tense::Imparfait,
            Tense::PasseSimple,
            Tense::PasseCompose,
            Tense::PlusQueParfait,
            Tense::Futur,
        ] {
            for vendler in [
                Vendler::Etat,
                Vendler::Activite,
                Vendler::Accomplissement,
                Vendler::Achevement,
            ] {
                let s = build_structure(&Clause::new(vendler, tense));
                assert_eq!(s.diagnosis, Diagnosis::Ok, "{tense:?} {vendler:?}");
                assert!(s.bounds.is_consistent());
                assert!(!s.iterative());
            }
        }
    }

    #[test]
    fn walking_since_two_hours_in_simple_past_is_insoluble() {
        let clause = Clause::new(Vendler::Activite, Tense::PasseSimple)
            .with(Circumstancial::DepuisDuree(120));
        let s = build_structure(&clause);
        assert_eq!(s.diagnosis, Diagnosis::Insoluble);
    }

    #[test]
    fn swimming_for_two_hours_since_long_iterates() {
        let clause = Clause::new(Vendler::Activite, Tense::Imparfait)
            .with(Circumstancial::PendantDuree(120))
            .with(Circumstancial::DepuisDuree(100_000));
        let s = build_structure(&clause);
        assert_eq!(s.diagnosis, Diagnosis::ResolvedIteration);
        assert_eq!(s.aspect, Aspect::Aoristique);
        assert_eq!(s.aspect_series, Some(Aspect::Inaccompli));
        // the series hosts the occurrence
        assert!(PaSet::LE.contains(s.bounds.relation(Point::Bs1, Point::B1)));
        assert!(PaSet::LE.contains(s.bounds.relation(Point::B2, Point::Bs2)));
        assert!(s.intervals.contains(&Role::Serie));
        assert!(s.intervals.contains(&Role::SerieReference));
    }

    #[test]
    fn clock_on_a_durative_process_contracts_it() {
        let clause = Clause::new(Vendler::Activite, Tense::PasseSimple)
            .with(Circumstancial::AClock { hour: 10, minute: 40 });
        let s = build_structure(&clause);
        assert_eq!(s.diagnosis, Diagnosis::ResolvedContraction);
        assert!(s.punctual && s.telic);
        // bounds collapsed at granularity: B1 and B2 may coincide
        assert!(s.bounds.relation(Point::B1, Point::B2).contains(PaSet::EQ));
    }

    #[test]
    fn implausible_single_run_iterates_without_formal_conflict() {
        let mut clause = Clause::new(Vendler::Activite, Tense::PasseCompose)
            .with(Circumstancial::PendantDuree(10 * 525_600));
        clause.plausible_duration = false;
        let s = build_structure(&clause);
        assert_eq!(s.diagnosis, Diagnosis::ResolvedIteration);

        clause.plausible_duration = true;
        let s = build_structure(&clause);
        assert_eq!(s.diagnosis, Diagnosis::Ok);
    }

    #[test]
    fn resultative_since_reading_of_the_compound_past() {
        let clause = Clause::new(Vendler::Accomplissement, Tense::PasseCompose)
            .with(Circumstancial::DepuisDuree(10));
        let s = build_structure(&clause);
        assert_eq!(s.diagnosis, Diagnosis::Ok);
        // accompli: the process precedes the reference
        assert_eq!(s.bounds.relation(Point::B2, Point::I), PaSet::LT);
    }

    #[test]
    fn measure_circumstancial_requires_intrinsic_bounds() {
        let ok = Clause::new(Vendler::Accomplissement, Tense::PasseSimple)
            .with(Circumstancial::EnDuree(60));
        assert_eq!(build_structure(&ok).diagnosis, Diagnosis::Ok);

        let mut bad = Clause::new(Vendler::Activite, Tense::PasseSimple)
            .with(Circumstancial::EnDuree(60));
        bad.reiterable = false;
        assert_eq!(build_structure(&bad).diagnosis, Diagnosis::Insoluble);
    }

    #[test]
    fn pluperfect_network_places_process_before_speech() {
        let s = build_structure(&Clause::new(Vendler::Accomplissement, Tense::PlusQueParfait));
        let mut net = to_network(&s);
        let p = RelationSet::singleton(BaseRelation::P);
        assert_eq!(edge_named(&net, "proces", "reference"), p);
        assert_eq!(edge_named(&net, "reference", "enonciation"), p);
        assert_ne!(net.path_consistency(), Verdict::Inconsistent);
        assert_eq!(edge_named(&net, "proces", "enonciation"), p);
    }

    #[test]
    fn imperfect_network_has_process_strictly_containing_reference() {
        let s = build_structure(&Clause::new(Vendler::Activite, Tense::Imparfait));
        let net = to_network(&s);
        assert_eq!(
            edge_named(&net, "proces", "reference"),
            RelationSet::singleton(BaseRelation::Di)
        );
        // location of the process w.r.t. speech stays disjunctive
        assert!(edge_named(&net, "proces", "enonciation").len() > 1);
    }

    #[test]
    fn iterative_network_nests_occurrence_inside_series() {
        let clause = Clause::new(Vendler::Activite, Tense::Imparfait)
            .with(Circumstancial::PendantDuree(120))
            .with(Circumstancial::DepuisDuree(100_000));
        let s = build_structure(&clause);
        let containment: RelationSet = [
            BaseRelation::Fi,
            BaseRelation::Di,
            BaseRelation::Eq,
            BaseRelation::Si,
        ]
        .into_iter()
        .collect();
        let net = to_network(&s);
        assert!(edge_named(&net, "serie", "proces").is_subset(containment));
    }

    #[test]
    fn repetition_adverbs_bound_the_series_intrinsically() {
        let mut clause = Clause::new(Vendler::Accomplissement, Tense::PasseCompose);
        clause.adverb = Some(Adverb::IterativeCount(4));
        clause.circumstancials.push(Circumstancial::EnDuree(10 * 525_600));
        let b = adverb_iteration(&clause).unwrap();
        assert!(b.intrinsic && b.occurrence_count == Some(4) && !b.duration_conflict);

        clause.circumstancials = alloc::vec![Circumstancial::PendantDuree(10 * 525_600)];
        let b = adverb_iteration(&clause).unwrap();
        assert!(b.duration_conflict);

        clause.adverb = Some(Adverb::Frequency(FreqAdverb::Souvent));
        clause.circumstancials.clear();
        let b = adverb_iteration(&clause).unwrap();
        assert!(!b.intrinsic && b.density == Some(FreqAdverb::Souvent));

        clause.adverb = Some(Adverb::Encore);
        assert!(adverb_iteration(&clause).is_none());
    }

    #[test]
    fn encore_readings_follow_aspect_and_telicity() {
        let read = |vendler, tense| encore_deja(&Clause::new(vendler, tense), EncoreDeja::Encore);
        assert_eq!(read(Vendler::Activite, Tense::Imparfait), Reading::Ambiguous);
        assert_eq!(read(Vendler::Activite, Tense::PasseCompose), Reading::Iterative);
        assert_eq!(read(Vendler::Activite, Tense::Present), Reading::Ambiguous);
        assert_eq!(read(Vendler::Accomplissement, Tense::Present), Reading::Iterative);
        // perfect view of an activity: remaining durative reading
        assert_eq!(read(Vendler::Activite, Tense::PlusQueParfait), Reading::Durative);
    }

    #[test]
    fn clause_validation_rejects_bad_records() {
        let bad = Clause::new(Vendler::Activite, Tense::Present)
            .with(Circumstancial::PendantDuree(0));
        assert_eq!(bad.validate(), Err(ClauseError::NonPositiveDuration(0)));
        let dup = Clause::new(Vendler::Activite, Tense::Present)
            .with(Circumstancial::PendantDuree(10))
            .with(Circumstancial::PendantDuree(20));
        assert_eq!(
            dup.validate(),
            Err(ClauseError::DuplicateCircumstancial("pendant"))
        );
        assert!(Clause::new(Vendler::Etat, Tense::Futur).validate().is_ok());
    }

    #[test]
    fn ok_structures_always_pass_revalidation() {
        // every structure with diagnosis != insoluble has a consistent network
        for tense in [Tense::Present, Tense::Imparfait, Tense::PasseSimple, Tense::Futur] {
            for circ in [
                None,
                Some(Circumstancial::PendantDuree(60)),
                Some(Circumstancial::EnDuree(60)),
                Some(Circumstancial::DepuisDuree(60)),
                Some(Circumstancial::AClock { hour: 8, minute: 0 }),
            ] {
                for vendler in [Vendler::Activite, Vendler::Accomplissement, Vendler::Achevement] {
                    let mut clause = Clause::new(vendler, tense);
                    if let Some(c) = circ.clone() {
                        clause.circumstancials.push(c);
                    }
                    let s = build_structure(&clause);
                    if s.diagnosis != Diagnosis::Insoluble {
                        assert!(s.bounds.is_consistent(), "{tense:?} {vendler:?} {circ:?}");
                    }
                }
            }
        }
    }
}
