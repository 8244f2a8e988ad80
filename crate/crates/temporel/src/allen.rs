//! Allen interval relations on the lattice coding, convex relations, and
//! named coarse-relation vocabularies.
//!
//! Each of the 13 base relations between proper intervals X and Y is coded
//! as a pair `(x, y)`: the zones of `beg(X)` and `end(X)` among the five
//! zones cut by Y's endpoints (`0` before, `1` on the start, `2` inside,
//! `3` on the end, `4` after). Codes are ordered componentwise; that order
//! makes the 13 relations a lattice whose *intervals* `[a, b]` are exactly
//! the convex disjunctive relations. Convexity buys a fast composition:
//! compose the bounds, never the members.
//!
//! The 13×13 composition table is not transcribed from the literature: it is
//! generated once by enumerating concrete placements of three intervals over
//! a small integer range, which leaves no room for copying mistakes.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use once_cell::race::OnceBox;

/// Errors for relation construction and vocabulary lookup.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AllenError {
    #[error("the empty relation has no convex hull")]
    EmptyRelation,
    #[error("convex relation bounds are not lattice-ordered")]
    UnorderedBounds,
    #[error("unknown vocabulary name `{0}`")]
    UnknownVocabName(String),
    #[error("unknown relation name `{0}`")]
    UnknownRelationName(String),
}

/// The 13 base relations, in lattice-code order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum BaseRelation {
    P = 0,
    M = 1,
    O = 2,
    Fi = 3,
    Di = 4,
    S = 5,
    Eq = 6,
    Si = 7,
    D = 8,
    F = 9,
    Oi = 10,
    Mi = 11,
    Pi = 12,
}

use BaseRelation::*;

pub const ALL_RELATIONS: [BaseRelation; 13] = [P, M, O, Fi, Di, S, Eq, Si, D, F, Oi, Mi, Pi];

impl BaseRelation {
    /// Lattice code: zones of the first interval's endpoints against the
    /// second's. Codes are nondecreasing pairs over 0..=4 in which an odd
    /// value appears at most once.
    pub fn code(self) -> (u8, u8) {
        match self {
            P => (0, 0),
            M => (0, 1),
            O => (0, 2),
            Fi => (0, 3),
            Di => (0, 4),
            S => (1, 2),
            Eq => (1, 3),
            Si => (1, 4),
            D => (2, 2),
            F => (2, 3),
            Oi => (2, 4),
            Mi => (3, 4),
            Pi => (4, 4),
        }
    }

    pub fn from_code(code: (u8, u8)) -> Option<BaseRelation> {
        ALL_RELATIONS.iter().copied().find(|r| r.code() == code)
    }

    pub fn name(self) -> &'static str {
        match self {
            P => "p",
            M => "m",
            O => "o",
            Fi => "fi",
            Di => "di",
            S => "s",
            Eq => "eq",
            Si => "si",
            D => "d",
            F => "f",
            Oi => "oi",
            Mi => "mi",
            Pi => "pi",
        }
    }

    pub fn parse(name: &str) -> Result<BaseRelation, AllenError> {
        ALL_RELATIONS
            .iter()
            .copied()
            .find(|r| r.name() == name)
            .ok_or_else(|| AllenError::UnknownRelationName(name.into()))
    }

    /// The relation of Y to X when X relates to Y by `self` (fixed 7-pair
    /// swap; the lattice reflection does not realize it).
    pub fn transpose(self) -> BaseRelation {
        match self {
            P => Pi,
            Pi => P,
            M => Mi,
            Mi => M,
            O => Oi,
            Oi => O,
            S => Si,
            Si => S,
            D => Di,
            Di => D,
            F => Fi,
            Fi => F,
            Eq => Eq,
        }
    }

    /// Componentwise lattice order on codes.
    pub fn leq(self, other: BaseRelation) -> bool {
        let (a1, a2) = self.code();
        let (b1, b2) = other.code();
        a1 <= b1 && a2 <= b2
    }

    /// Componentwise minimum; always lands on a valid code.
    pub fn inf(self, other: BaseRelation) -> BaseRelation {
        let (a1, a2) = self.code();
        let (b1, b2) = other.code();
        BaseRelation::from_code((a1.min(b1), a2.min(b2)))
            .expect("componentwise min of valid codes is a valid code")
    }

    /// Componentwise maximum; always lands on a valid code.
    pub fn sup(self, other: BaseRelation) -> BaseRelation {
        let (a1, a2) = self.code();
        let (b1, b2) = other.code();
        BaseRelation::from_code((a1.max(b1), a2.max(b2)))
            .expect("componentwise max of valid codes is a valid code")
    }
}

impl core::fmt::Display for BaseRelation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Zone of a point among the five zones cut by an interval's endpoints.
fn zone(v: i64, beg: i64, end: i64) -> u8 {
    if v < beg {
        0
    } else if v == beg {
        1
    } else if v < end {
        2
    } else if v == end {
        3
    } else {
        4
    }
}

/// Base relation between two proper intervals (`beg < end` on both sides).
pub fn base_relation(x_beg: i64, x_end: i64, y_beg: i64, y_end: i64) -> BaseRelation {
    debug_assert!(x_beg < x_end && y_beg < y_end);
    BaseRelation::from_code((zone(x_beg, y_beg, y_end), zone(x_end, y_beg, y_end)))
        .expect("proper intervals always land on a valid code")
}

/// A disjunctive relation: any subset of the 13 base relations. The empty
/// set denotes inconsistency.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RelationSet(u16);

const FULL_MASK: u16 = (1 << 13) - 1;

impl RelationSet {
    pub const EMPTY: RelationSet = RelationSet(0);
    pub const FULL: RelationSet = RelationSet(FULL_MASK);

    pub fn singleton(r: BaseRelation) -> RelationSet {
        RelationSet(1 << r as u16)
    }

    pub fn from_bits(bits: u16) -> RelationSet {
        RelationSet(bits & FULL_MASK)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn contains(self, r: BaseRelation) -> bool {
        self.0 & (1 << r as u16) != 0
    }

    pub fn insert(&mut self, r: BaseRelation) {
        self.0 |= 1 << r as u16;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = BaseRelation> {
        ALL_RELATIONS.into_iter().filter(move |r| self.contains(*r))
    }

    pub fn is_subset(self, other: RelationSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn transpose(self) -> RelationSet {
        let mut out = RelationSet::EMPTY;
        for r in self.iter() {
            out.insert(r.transpose());
        }
        out
    }

    /// Union of pairwise base compositions.
    pub fn compose(self, other: RelationSet) -> RelationSet {
        let mut out = RelationSet::EMPTY;
        for r in self.iter() {
            for s in other.iter() {
                out = out | compose_base(r, s);
            }
        }
        out
    }

    /// Smallest lattice interval containing the set.
    pub fn convex_hull(self) -> Result<ConvexRelation, AllenError> {
        let mut iter = self.iter();
        let first = iter.next().ok_or(AllenError::EmptyRelation)?;
        let (lo, hi) = iter.fold((first, first), |(lo, hi), r| (lo.inf(r), hi.sup(r)));
        Ok(ConvexRelation { lo, hi })
    }

    pub fn is_convex(self) -> bool {
        match self.convex_hull() {
            Ok(h) => h.extension() == self,
            Err(_) => false,
        }
    }

    /// Preconvex: the hull's surplus contains none of p, o, d, di, oi, pi —
    /// only relations carrying an odd coordinate may be missing.
    pub fn is_preconvex(self) -> bool {
        let Ok(hull) = self.convex_hull() else {
            return false;
        };
        let surplus = RelationSet(hull.extension().0 & !self.0);
        surplus.iter().all(|r| {
            let (x, y) = r.code();
            x % 2 == 1 || y % 2 == 1
        })
    }

    /// Pointizable: obtained from its hull by deleting whole slices of the
    /// hull cut by one odd coordinate value (the surplus must be exactly a
    /// union of such slices).
    pub fn is_pointizable(self) -> bool {
        let Ok(hull) = self.convex_hull() else {
            return false;
        };
        let ext = hull.extension();
        let surplus = RelationSet(ext.0 & !self.0);
        let mut removable = RelationSet::EMPTY;
        for coord in 0..2 {
            for odd in [1u8, 3u8] {
                let slice = RelationSet(
                    ext.iter()
                        .filter(|r| {
                            let c = r.code();
                            (if coord == 0 { c.0 } else { c.1 }) == odd
                        })
                        .fold(0u16, |acc, r| acc | 1 << r as u16),
                );
                if !slice.is_empty() && slice.is_subset(surplus) {
                    removable = removable | slice;
                }
            }
        }
        surplus == removable
    }
}

impl core::ops::BitOr for RelationSet {
    type Output = RelationSet;
    fn bitor(self, rhs: RelationSet) -> RelationSet {
        RelationSet(self.0 | rhs.0)
    }
}

impl core::ops::BitAnd for RelationSet {
    type Output = RelationSet;
    fn bitand(self, rhs: RelationSet) -> RelationSet {
        RelationSet(self.0 & rhs.0)
    }
}

impl FromIterator<BaseRelation> for RelationSet {
    fn from_iter<T: IntoIterator<Item = BaseRelation>>(iter: T) -> Self {
        let mut out = RelationSet::EMPTY;
        for r in iter {
            out.insert(r);
        }
        out
    }
}

impl core::fmt::Debug for RelationSet {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        core::fmt::Display::fmt(self, f)
    }
}

impl core::fmt::Display for RelationSet {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str("{")?;
        let mut first = true;
        for r in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            f.write_str(r.name())?;
        }
        f.write_str("}")
    }
}

/// A lattice interval `[lo, hi]` of base relations; the fast currency for
/// composition when both operands are convex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConvexRelation {
    lo: BaseRelation,
    hi: BaseRelation,
}

impl ConvexRelation {
    pub fn new(lo: BaseRelation, hi: BaseRelation) -> Result<ConvexRelation, AllenError> {
        if lo.leq(hi) {
            Ok(ConvexRelation { lo, hi })
        } else {
            Err(AllenError::UnorderedBounds)
        }
    }

    pub fn lo(self) -> BaseRelation {
        self.lo
    }

    pub fn hi(self) -> BaseRelation {
        self.hi
    }

    /// All base relations between the bounds.
    pub fn extension(self) -> RelationSet {
        ALL_RELATIONS
            .into_iter()
            .filter(|r| self.lo.leq(*r) && r.leq(self.hi))
            .collect()
    }

    /// Bound-wise composition: the hull of the member-wise composition,
    /// computed without touching the members.
    pub fn compose(self, other: ConvexRelation) -> ConvexRelation {
        let lo = compose_base(self.lo, other.lo)
            .convex_hull()
            .expect("base compositions are nonempty")
            .lo;
        let hi = compose_base(self.hi, other.hi)
            .convex_hull()
            .expect("base compositions are nonempty")
            .hi;
        ConvexRelation { lo, hi }
    }

    /// Transposing every member of a lattice interval yields a lattice
    /// interval again; computed through the extension.
    pub fn transpose(self) -> ConvexRelation {
        let t = self.extension().transpose();
        let hull = t.convex_hull().expect("transpose preserves nonemptiness");
        debug_assert_eq!(hull.extension(), t);
        hull
    }
}

impl core::fmt::Display for ConvexRelation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "[{},{}]", self.lo.name(), self.hi.name())
    }
}

/// All lattice intervals, i.e. every nonempty convex relation.
pub fn enumerate_convex() -> Vec<ConvexRelation> {
    let mut out = Vec::new();
    for lo in ALL_RELATIONS {
        for hi in ALL_RELATIONS {
            if lo.leq(hi) {
                out.push(ConvexRelation { lo, hi });
            }
        }
    }
    out
}

/// Standard Allen composition of two base relations.
pub fn compose_base(r: BaseRelation, s: BaseRelation) -> RelationSet {
    let table = composition_table();
    table[r as usize][s as usize]
}

fn composition_table() -> &'static [[RelationSet; 13]; 13] {
    static TABLE: OnceBox<[[RelationSet; 13]; 13]> = OnceBox::new();
    TABLE.get_or_init(|| Box::new(build_composition_table()))
}

/// Derives the composition table from concrete placements: enumerate all
/// triples of proper intervals with endpoints in 0..=8 (room for six
/// distinct endpoints in any arrangement), record which relation X bears to
/// Z under each observed pair of relations (X,Y) and (Y,Z).
fn build_composition_table() -> [[RelationSet; 13]; 13] {
    let mut intervals = Vec::new();
    for b in 0..=8i64 {
        for e in (b + 1)..=8 {
            intervals.push((b, e));
        }
    }
    let mut table = [[RelationSet::EMPTY; 13]; 13];
    for &(xb, xe) in &intervals {
        for &(yb, ye) in &intervals {
            let rxy = base_relation(xb, xe, yb, ye);
            for &(zb, ze) in &intervals {
                let ryz = base_relation(yb, ye, zb, ze);
                let rxz = base_relation(xb, xe, zb, ze);
                table[rxy as usize][ryz as usize].insert(rxz);
            }
        }
    }
    table
}

/// The coarse-relation vocabularies mapped onto convex relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VocabSource {
    Gosselin,
    Freksa,
    Accary,
}

/// Looks up a named coarse relation as a lattice interval.
pub fn vocab(source: VocabSource, name: &str) -> Result<ConvexRelation, AllenError> {
    let pair = match source {
        VocabSource::Gosselin => match name {
            "SUCC" => (D, Pi),
            "SIMUL" => (M, Mi),
            "PREC" => (P, Di),
            "ACCESS" => (Fi, Si),
            _ => return Err(AllenError::UnknownVocabName(name.into())),
        },
        VocabSource::Freksa => match name {
            "ol" => (P, Di),
            "yo" => (D, Pi),
            "pr" => (P, M),
            "hh" => (S, Si),
            "tt" => (Fi, F),
            "sd" => (Mi, Pi),
            "sv" => (Di, Pi),
            "sb" => (P, D),
            "bd" => (O, Pi),
            "db" => (P, Oi),
            "ct" => (O, Oi),
            "ob" => (P, O),
            "yb" => (Oi, Pi),
            "oc" => (O, Di),
            "sc" => (Di, Oi),
            "bc" => (O, D),
            "yc" => (D, Oi),
            _ => return Err(AllenError::UnknownVocabName(name.into())),
        },
        VocabSource::Accary => match name {
            "common_period" => (M, Mi),
            "begin_before" => (P, Di),
            "fuzzy_before" => (P, M),
            "fuzzy_during" => (S, F),
            "common_begin" => (S, Si),
            "common_end" => (Fi, F),
            "begin_in" => (S, Mi),
            "end_in" => (M, F),
            "first_to_end" => (P, F),
            _ => return Err(AllenError::UnknownVocabName(name.into())),
        },
    };
    ConvexRelation::new(pair.0, pair.1)
}

/// Parses the textual relation syntax: `{p,m,o}` for sets, `[p,di]` for
/// lattice intervals, `g:`/`f:`/`a:` prefixes for the named vocabularies,
/// or a bare base-relation name.
pub fn parse_relation(text: &str) -> Result<RelationSet, AllenError> {
    let text = text.trim();
    if let Some(body) = text.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
        let mut out = RelationSet::EMPTY;
        for part in body.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            out.insert(BaseRelation::parse(part)?);
        }
        return Ok(out);
    }
    if let Some(body) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        let (lo, hi) = body
            .split_once(',')
            .ok_or_else(|| AllenError::UnknownRelationName(text.into()))?;
        let c = ConvexRelation::new(BaseRelation::parse(lo.trim())?, BaseRelation::parse(hi.trim())?)?;
        return Ok(c.extension());
    }
    if let Some((prefix, name)) = text.split_once(':') {
        let source = match prefix {
            "g" => VocabSource::Gosselin,
            "f" => VocabSource::Freksa,
            "a" => VocabSource::Accary,
            _ => return Err(AllenError::UnknownVocabName(text.into())),
        };
        return Ok(vocab(source, name.trim())?.extension());
    }
    BaseRelation::parse(text).map(RelationSet::singleton)
}
