//! End-to-end acceptance suite. Every test here checks a public subsystem
//! against an independently coded reference: a half-granule cell model for
//! the series operators, Sakamoto weekday arithmetic for the calendar,
//! brute-force placement enumeration for the relation vocabulary, and fixed
//! linguistic fixtures for the quantifier grammar, aspect calculus,
//! iteration models, and the text scanner. One test per guarantee; each
//! prints a single summary line on success.

use std::collections::BTreeSet;

use temporel::allen::{self, BaseRelation, VocabSource};
use temporel::calendar::Weekday;
use temporel::cti::{self, CtiError, Denotation, DenoteOpts};
use temporel::extract::{self, PeriodClass};
use temporel::itermodel::{
    instantiate, Iteration, IterativeModel, IteratorSpec, ModelSlot, ModelSpan, ProcessModel,
};
use temporel::sdt::{
    build_structure, encore_deja, to_network, Aspect, Circumstancial, Clause, Diagnosis,
    EncoreDeja, Reading, Tense, Vendler,
};
use temporel::series::intdef;
use temporel::{
    CalendarName, CivilDateTime, ConvexInterval, Frame, GenMode, QualNetwork, RelationSet,
    RestrictMode, Series, SeriesError, Verdict,
};

// ---------------------------------------------------------------------------
// Deterministic RNG (splitmix64) for the randomized comparisons.

struct SplitMix64(u64);

impl SplitMix64 {
    fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: u64) -> i64 {
        (self.next_u64() % n) as i64
    }
}

// ---------------------------------------------------------------------------
// Cell model: interval [b, e) owns cells 2b..2e-1, a point {p} owns cell 2p.
// The odd cell 2p+1 is the half-granule a point blocks without owning it.
// Unions, intersections, and differences of members become plain set algebra
// on integers, which is easy to get right independently of the library.

fn cells(i: &ConvexInterval) -> BTreeSet<i64> {
    if i.is_point() {
        BTreeSet::from([2 * i.beg()])
    } else {
        (2 * i.beg()..2 * i.end()).collect()
    }
}

fn series_cells(s: &Series) -> BTreeSet<i64> {
    s.iter().flat_map(cells).collect()
}

/// Cells a series makes unavailable to an aligned remainder: its own cells,
/// plus the trailing half-granule of every point member.
fn blocked_cells(s: &Series) -> BTreeSet<i64> {
    let mut out = series_cells(s);
    for i in s.iter() {
        if i.is_point() {
            out.insert(2 * i.beg() + 1);
        }
    }
    out
}

/// Rebuilds intervals from a cell set. Each run of consecutive cells starts
/// on an even cell; a run ending on an odd cell is a span, a run ending on
/// an even cell carries a trailing point (or is one).
fn decode_cells(set: &BTreeSet<i64>) -> Vec<ConvexInterval> {
    let mut out = Vec::new();
    let mut run: Option<(i64, i64)> = None;
    for &c in set.iter() {
        match run {
            Some((lo, hi)) if c == hi + 1 => run = Some((lo, c)),
            Some((lo, hi)) => {
                out.extend(decode_run(lo, hi));
                run = Some((c, c));
            }
            None => run = Some((c, c)),
        }
    }
    if let Some((lo, hi)) = run {
        out.extend(decode_run(lo, hi));
    }
    out
}

fn decode_run(lo: i64, hi: i64) -> Vec<ConvexInterval> {
    assert_eq!(lo % 2, 0, "cell runs must start on an even cell");
    if lo == hi {
        vec![ConvexInterval::point(lo / 2)]
    } else if hi % 2 != 0 {
        vec![ConvexInterval::new(lo / 2, (hi + 1) / 2).unwrap()]
    } else {
        vec![
            ConvexInterval::new(lo / 2, hi / 2).unwrap(),
            ConvexInterval::point(hi / 2),
        ]
    }
}

fn inside_cellwise(i: &ConvexInterval, j: &ConvexInterval) -> bool {
    cells(i).is_subset(&cells(j))
}

fn included_cellwise(s: &Series, reference: &Series) -> bool {
    s.iter()
        .all(|i| reference.iter().any(|j| inside_cellwise(i, j)))
}

// ---------------------------------------------------------------------------
// Reference implementations of the series operators.

fn oracle_restrict_strict(s: &Series, reference: &Series) -> Vec<ConvexInterval> {
    let rc = series_cells(reference);
    s.iter()
        .filter(|m| cells(m).is_subset(&rc))
        .copied()
        .collect()
}

fn oracle_restrict_soft(s: &Series, reference: &Series) -> Vec<ConvexInterval> {
    let rc = series_cells(reference);
    let mut out: Vec<ConvexInterval> = Vec::new();
    for m in s.iter() {
        let clipped: BTreeSet<i64> = cells(m).intersection(&rc).copied().collect();
        for piece in decode_cells(&clipped) {
            if out.last() != Some(&piece) {
                out.push(piece);
            }
        }
    }
    out
}

fn oracle_complement(s: &Series, reference: &Series) -> Option<Vec<ConvexInterval>> {
    if !included_cellwise(s, reference) {
        return None;
    }
    let free: BTreeSet<i64> = series_cells(reference)
        .difference(&blocked_cells(s))
        .copied()
        .collect();
    Some(decode_cells(&free))
}

fn oracle_gap(s: &Series) -> Vec<ConvexInterval> {
    if s.is_empty() {
        return Vec::new();
    }
    // The hull in cell space runs from the first owned cell to the last one.
    let first = s.items()[0];
    let last = s.items()[s.len() - 1];
    let lo = 2 * first.beg();
    let hi = if last.is_point() {
        2 * last.beg()
    } else {
        2 * last.end() - 1
    };
    let hull: BTreeSet<i64> = (lo..=hi).collect();
    let free: BTreeSet<i64> = hull.difference(&blocked_cells(s)).copied().collect();
    decode_cells(&free)
}

fn oracle_ratio(s: &Series, parent: &Series) -> Option<Vec<(ConvexInterval, usize)>> {
    if !included_cellwise(s, parent) {
        return None;
    }
    let mut counts = vec![0usize; parent.len()];
    for m in s.iter() {
        if let Some(pos) = parent.iter().position(|j| inside_cellwise(m, j)) {
            counts[pos] += 1;
        }
    }
    Some(parent.iter().copied().zip(counts).collect())
}

fn oracle_restrict_nth(s: &Series, parent: &Series, n: usize) -> Vec<ConvexInterval> {
    let mut out = Vec::new();
    let mut current: Option<usize> = None;
    let mut rank = 0usize;
    for m in oracle_restrict_strict(s, parent) {
        let Some(pos) = parent.iter().position(|j| inside_cellwise(&m, j)) else {
            continue;
        };
        if current == Some(pos) {
            rank += 1;
        } else {
            current = Some(pos);
            rank = 1;
        }
        if rank == n {
            out.push(m);
        }
    }
    out
}

fn oracle_agglo(s: &Series, n: usize) -> Option<Vec<ConvexInterval>> {
    if n == 0 {
        return None;
    }
    let mut out = Vec::new();
    for chunk in s.items().chunks(n) {
        let beg = chunk[0].beg();
        let end = chunk[chunk.len() - 1].end();
        out.push(if beg == end {
            ConvexInterval::point(beg)
        } else {
            ConvexInterval::new(beg, end).unwrap()
        });
    }
    Some(out)
}

fn oracle_intdef(a: &Series, b: &Series) -> Option<Vec<ConvexInterval>> {
    let mut raw: Vec<(i64, i64)> = Vec::new();
    for ai in a.iter() {
        let partner = b.iter().find(|bi| {
            ai.end() <= bi.beg() && (ai.beg() != bi.beg() || ai.end() != bi.end())
        });
        if let Some(bi) = partner {
            raw.push((ai.beg(), bi.end()));
        }
    }
    for w in raw.windows(2) {
        let ((b1, e1), (b2, e2)) = (w[0], w[1]);
        if e1 > b2 || (b1, e1) == (b2, e2) {
            return None;
        }
    }
    Some(
        raw.into_iter()
            .map(|(b, e)| {
                if b == e {
                    ConvexInterval::point(b)
                } else {
                    ConvexInterval::new(b, e).unwrap()
                }
            })
            .collect(),
    )
}

// ---------------------------------------------------------------------------
// Random series generation.

fn random_series(rng: &mut SplitMix64, max_items: u64) -> Series {
    let n = rng.below(max_items + 1) as usize;
    let mut items: Vec<ConvexInterval> = Vec::new();
    let mut cursor = rng.below(20);
    for _ in 0..n {
        let mut gap = rng.below(8);
        let len = rng.below(6);
        // a zero gap after a point with zero length would repeat the point
        if gap == 0 && len == 0 && items.last().is_some_and(|p| p.is_point()) {
            gap = 1;
        }
        let beg = cursor + gap;
        let item = if len == 0 {
            ConvexInterval::point(beg)
        } else {
            ConvexInterval::new(beg, beg + len).unwrap()
        };
        items.push(item);
        cursor = beg + len;
    }
    Series::new(items).expect("generator must respect series order")
}

/// A series included in `parent`: keeps, shrinks, or drops each component.
fn random_subseries(rng: &mut SplitMix64, parent: &Series) -> Series {
    let mut items = Vec::new();
    for j in parent.iter() {
        match rng.below(3) {
            0 => {}
            1 => items.push(*j),
            _ => {
                if j.is_point() {
                    items.push(*j);
                } else {
                    let len = j.len();
                    let off = rng.below(len as u64);
                    let sublen = rng.below((len - off) as u64 + 1);
                    let shrunk = if sublen == 0 {
                        ConvexInterval::point(j.beg() + off)
                    } else {
                        ConvexInterval::new(j.beg() + off, j.beg() + off + sublen).unwrap()
                    };
                    // a left-edge point can collide with a kept point member
                    // of a touching predecessor; keep the whole member then
                    if items.last() == Some(&shrunk) {
                        items.push(*j);
                    } else {
                        items.push(shrunk);
                    }
                }
            }
        }
    }
    Series::new(items).expect("shrunken members stay ordered")
}

fn check_complement(a: &Series, reference: &Series, tag: &str) {
    match oracle_complement(a, reference) {
        Some(expected) => {
            let got = a.complement(reference).unwrap_or_else(|e| {
                panic!("{tag}: complement should succeed, got {e}")
            });
            assert_eq!(got.items(), &expected[..], "{tag}: complement");
        }
        None => {
            assert!(
                matches!(a.complement(reference), Err(SeriesError::NotIncluded)),
                "{tag}: complement should reject a non-included argument"
            );
        }
    }
}

fn check_ratio(a: &Series, parent: &Series, tag: &str) {
    match oracle_ratio(a, parent) {
        Some(expected) => {
            let got = a
                .ratio(parent)
                .unwrap_or_else(|e| panic!("{tag}: ratio should succeed, got {e}"));
            assert_eq!(got.entries(), &expected[..], "{tag}: ratio");
        }
        None => {
            assert!(
                matches!(a.ratio(parent), Err(SeriesError::NotIncluded)),
                "{tag}: ratio should reject a non-included argument"
            );
        }
    }
}

fn check_intdef(a: &Series, b: &Series, tag: &str) {
    match oracle_intdef(a, b) {
        Some(expected) => {
            let got = intdef(a, b)
                .unwrap_or_else(|e| panic!("{tag}: intdef should succeed, got {e}"));
            assert_eq!(got.items(), &expected[..], "{tag}: intdef");
        }
        None => {
            assert!(intdef(a, b).is_err(), "{tag}: intdef should reject overlap");
        }
    }
}

#[test]
fn randomized_series_operators_match_the_cell_oracle() {
    let mut rng = SplitMix64::new(0x5EED_0001);
    for round in 0..1000 {
        let s = random_series(&mut rng, 30);
        let t = random_series(&mut rng, 30);
        let r = random_series(&mut rng, 30);
        let sub = random_subseries(&mut rng, &r);
        let tag = format!("round {round}");

        for (a, b) in [(&s, &t), (&t, &s), (&sub, &r)] {
            assert_eq!(
                a.restrict_series(b, RestrictMode::Strict).items(),
                &oracle_restrict_strict(a, b)[..],
                "{tag}: strict restriction"
            );
            assert_eq!(
                a.restrict_series(b, RestrictMode::Soft).items(),
                &oracle_restrict_soft(a, b)[..],
                "{tag}: soft restriction"
            );
        }

        check_complement(&sub, &r, &tag);
        check_complement(&s, &t, &tag);
        check_ratio(&sub, &r, &tag);
        check_ratio(&s, &t, &tag);

        assert_eq!(
            s.gap().unwrap().items(),
            &oracle_gap(&s)[..],
            "{tag}: gap"
        );

        for n in [1usize, 2, 3] {
            assert_eq!(
                s.restrict_nth(&t, n).items(),
                &oracle_restrict_nth(&s, &t, n)[..],
                "{tag}: rank {n} of t"
            );
            assert_eq!(
                sub.restrict_nth(&r, n).items(),
                &oracle_restrict_nth(&sub, &r, n)[..],
                "{tag}: rank {n} of r"
            );
        }

        for n in [0usize, 1, 2, 3, 7] {
            match oracle_agglo(&s, n) {
                Some(expected) => assert_eq!(
                    s.agglo(n).unwrap().items(),
                    &expected[..],
                    "{tag}: agglo {n}"
                ),
                None => assert!(
                    matches!(s.agglo(n), Err(SeriesError::ZeroGroupSize)),
                    "{tag}: agglo 0 must be rejected"
                ),
            }
        }

        for (n, p) in [(0usize, 2usize), (1, 0), (2, 1), (1, 2), (2, 3), (3, 3), (1, 4)] {
            let got = s.extract_pattern(n, p);
            if p == 0 {
                assert!(matches!(got, Err(SeriesError::ZeroGroupSize)), "{tag}");
            } else if n > p {
                assert!(
                    matches!(got, Err(SeriesError::BadPattern { .. })),
                    "{tag}: {n} of {p}"
                );
            } else {
                let expected: Vec<ConvexInterval> = s
                    .iter()
                    .enumerate()
                    .filter(|(idx, _)| idx % p < n)
                    .map(|(_, i)| *i)
                    .collect();
                assert_eq!(got.unwrap().items(), &expected[..], "{tag}: {n} of {p}");
            }
        }

        check_intdef(&s, &t, &tag);
        check_intdef(&t, &s, &tag);
        check_intdef(&sub, &r, &tag);
    }
    println!("series operators agree with the cell oracle on 1000 randomized inputs");
}

#[test]
fn pattern_extraction_equals_ranked_selection_after_grouping() {
    let mut combos = 0usize;
    for mask in 0u32..1024 {
        if mask.count_ones() > 8 {
            continue;
        }
        let items: Vec<ConvexInterval> = (0..10)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| ConvexInterval::new(i64::from(i), i64::from(i) + 1).unwrap())
            .collect();
        let s = Series::new(items).unwrap();
        for p in 1..=4usize {
            let grouped = s.agglo(p).unwrap();
            for n in 1..=p {
                let ranks: BTreeSet<usize> = (1..=n).collect();
                assert_eq!(
                    s.extract_pattern(n, p).unwrap(),
                    s.restrict_rank_set(&grouped, &ranks),
                    "mask {mask:#b}, keep {n} of {p}"
                );
                combos += 1;
            }
        }
    }
    println!("pattern extraction equals ranked selection on {combos} series/pattern combinations");
}

// ---------------------------------------------------------------------------
// Independent civil-day arithmetic for the calendar comparisons.

fn leap_year(y: i32) -> bool {
    (y % 4 == 0 && y % 100 != 0) || y % 400 == 0
}

fn month_length(y: i32, m: u32) -> u32 {
    const BASE: [u32; 12] = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];
    if m == 2 && leap_year(y) {
        29
    } else {
        BASE[(m - 1) as usize]
    }
}

/// Sakamoto's congruence; 0 = Sunday, 1 = Monday, ...
fn weekday_number(y: i32, m: u32, d: u32) -> u32 {
    const T: [i32; 12] = [0, 3, 2, 5, 0, 3, 5, 1, 4, 6, 2, 4];
    let yy = if m < 3 { y - 1 } else { y };
    let v = yy + yy / 4 - yy / 100 + yy / 400 + T[(m - 1) as usize] + d as i32;
    v.rem_euclid(7) as u32
}

const MINUTES_PER_DAY: i64 = 24 * 60;

#[test]
fn weekday_phrases_over_two_years_match_day_enumeration() {
    let frame = Frame::years(2004, 2006).unwrap();

    // Enumerate every civil day of 2004-2005 by hand, keeping March Mondays.
    let mut day_index: i64 = 0;
    let mut march_mondays: Vec<ConvexInterval> = Vec::new();
    let mut second_monday_per_march: Vec<ConvexInterval> = Vec::new();
    let mut per_year = [0usize; 2];
    for year in 2004..=2005 {
        for month in 1..=12u32 {
            let mut mondays_here = Vec::new();
            for day in 1..=month_length(year, month) {
                if month == 3 && weekday_number(year, month, day) == 1 {
                    let iv = ConvexInterval::new(
                        day_index * MINUTES_PER_DAY,
                        (day_index + 1) * MINUTES_PER_DAY,
                    )
                    .unwrap();
                    march_mondays.push(iv);
                    mondays_here.push(iv);
                    per_year[(year - 2004) as usize] += 1;
                }
                day_index += 1;
            }
            if month == 3 {
                second_monday_per_march.push(mondays_here[1]);
            }
        }
    }
    assert_eq!(per_year, [5, 4]);
    assert_eq!(march_mondays.len(), 9);
    // 2004-03-08 is day 31+29+7 of 2004; 2005-03-14 is day 366+31+28+13.
    assert_eq!(second_monday_per_march[0].beg(), 67 * MINUTES_PER_DAY);
    assert_eq!(second_monday_per_march[1].beg(), 438 * MINUTES_PER_DAY);

    let every = cti::parse("tous les lundis de mars").unwrap();
    let Denotation::Concrete(series) =
        cti::denote(&every, &frame, DenoteOpts::default()).unwrap()
    else {
        panic!("a definite phrase must evaluate to one series");
    };
    assert_eq!(series.items(), &march_mondays[..]);

    let second = cti::parse("le 2e lundi de mars").unwrap();
    let Denotation::Concrete(series) =
        cti::denote(&second, &frame, DenoteOpts::default()).unwrap()
    else {
        panic!("an ordinal phrase must evaluate to one series");
    };
    assert_eq!(series.items(), &second_monday_per_march[..]);

    println!("March Mondays of 2004-2005 match independent day enumeration (5 + 4, ordinals included)");
}

#[test]
fn quantifier_witnesses_satisfy_their_families_across_fifty_phrases() {
    let frame = Frame::years(2004, 2006).unwrap();
    let fixtures: [&str; 50] = [
        // indefinite singletons
        "un lundi",
        "un mardi",
        "un mercredi de mars",
        "un jeudi",
        "un vendredi de janvier",
        "un samedi",
        "un dimanche de mai",
        "une semaine",
        "un mois",
        "un jour de mars",
        // strict majorities
        "la plupart des lundis",
        "la plupart des mardis",
        "la plupart des jours",
        "la plupart des semaines",
        "la plupart des mois",
        "la plupart des jours de mars",
        "la plupart des lundis de mars",
        "la plupart des dimanches",
        "la plupart des heures",
        "la plupart des samedis",
        // strict minorities
        "certains lundis",
        "certains mardis",
        "certains jours",
        "certains mois",
        "certains jeudis",
        "certains vendredis",
        "certains samedis",
        "certains dimanches",
        "certains matins",
        "certaines semaines",
        // per-unit counts with free placement
        "1 fois par jour",
        "2 fois par jour",
        "3 fois par semaine",
        "une fois par mois",
        "2 fois par mois",
        "une fois par semaine",
        "4 fois par mois",
        // per-unit counts over extracted members
        "1 lundi par mois",
        "2 lundis par mois",
        "3 lundis par mois",
        "4 lundis par mois",
        "1 jour par semaine",
        "2 jours par semaine",
        "5 jours par semaine",
        // one out of every n
        "1 lundi sur 2",
        "1 jour sur 3",
        "2 jours sur 7",
        // frequency adverbs
        "souvent les lundis",
        "parfois les mardis",
        "rarement les jours",
    ];

    for text in fixtures {
        let ast = cti::parse(text).unwrap_or_else(|e| panic!("{text}: {e}"));
        let denotation = cti::denote(&ast, &frame, DenoteOpts::default())
            .unwrap_or_else(|e| panic!("{text}: {e}"));
        let Denotation::Quantified(family) = denotation else {
            panic!("{text}: expected a quantified reading");
        };
        let w = cti::witness(&family, false).unwrap_or_else(|e| panic!("{text}: {e}"));
        assert!(cti::family_check(&w, &family), "{text}: witness fails its own family");
        assert!(!w.is_empty(), "{text}: witness must be nonempty");
        if text.starts_with("la plupart") {
            assert!(
                w.len() as u64 * 100 > family.base.len() as u64 * 66,
                "{text}: majority witness too small ({} of {})",
                w.len(),
                family.base.len()
            );
        }
        if text.starts_with("certain") {
            assert!(
                w.len() as u64 * 100 < family.base.len() as u64 * 33,
                "{text}: minority witness too large ({} of {})",
                w.len(),
                family.base.len()
            );
        }
    }

    // A strict minority over three months has no candidate: 1 of 3 is
    // already more than 33 percent.
    let tiny = Frame::new(
        CivilDateTime::date(2004, 1, 1).unwrap(),
        CivilDateTime::date(2004, 4, 1).unwrap(),
    )
    .unwrap();
    let ast = cti::parse("certains mois").unwrap();
    let Denotation::Quantified(family) = cti::denote(&ast, &tiny, DenoteOpts::default()).unwrap()
    else {
        panic!("certains mois must quantify");
    };
    assert_eq!(family.base.len(), 3);
    assert!(matches!(
        cti::witness(&family, false),
        Err(CtiError::DegenerateFamily)
    ));

    println!("50 quantified phrases yield self-consistent witnesses; a minority over 3 months is degenerate");
}

#[test]
fn convex_composition_is_the_hull_of_setwise_composition() {
    let all = allen::enumerate_convex();
    assert_eq!(all.len(), 82);
    let mut exact = 0usize;
    for &c1 in &all {
        for &c2 in &all {
            let mut setwise = RelationSet::EMPTY;
            for r in c1.extension().iter() {
                for s in c2.extension().iter() {
                    setwise = setwise | allen::compose_base(r, s);
                }
            }
            let composed = c1.compose(c2);
            assert_eq!(
                composed,
                setwise.convex_hull().unwrap(),
                "{c1:?} then {c2:?}"
            );
            if setwise.is_convex() {
                assert_eq!(composed.extension(), setwise, "{c1:?} then {c2:?}");
                exact += 1;
            }
        }
    }
    println!(
        "convex composition equals the hull of setwise composition on {} pairs ({exact} already convex)",
        all.len() * all.len()
    );
}

#[test]
fn coarse_vocabulary_extensions_match_placement_enumeration() {
    let mut simultaneity = RelationSet::EMPTY;
    let mut precedence = RelationSet::EMPTY;
    let mut succession = RelationSet::EMPTY;
    let mut accessibility = RelationSet::EMPTY;
    for xb in 0i64..6 {
        for xe in xb + 1..=6 {
            for yb in 0i64..6 {
                for ye in yb + 1..=6 {
                    let r = allen::base_relation(xb, xe, yb, ye);
                    if xb <= ye && yb <= xe {
                        simultaneity.insert(r);
                    }
                    if xb < yb {
                        precedence.insert(r);
                    }
                    if yb < xb {
                        succession.insert(r);
                    }
                    if xb <= yb && ye <= xe {
                        accessibility.insert(r);
                    }
                }
            }
        }
    }

    let simul = allen::vocab(VocabSource::Gosselin, "SIMUL").unwrap();
    let prec = allen::vocab(VocabSource::Gosselin, "PREC").unwrap();
    let succ = allen::vocab(VocabSource::Gosselin, "SUCC").unwrap();
    let access = allen::vocab(VocabSource::Gosselin, "ACCESS").unwrap();

    assert_eq!(simul.extension(), simultaneity);
    assert_eq!(simul.extension().len(), 11);
    assert_eq!(prec.extension(), precedence);
    assert_eq!(succ.extension(), succession);
    assert_eq!(access.extension(), accessibility);
    let expected_access: RelationSet = [
        BaseRelation::Fi,
        BaseRelation::Di,
        BaseRelation::Eq,
        BaseRelation::Si,
    ]
    .into_iter()
    .collect();
    assert_eq!(access.extension(), expected_access);
    assert_eq!(succ.transpose(), prec);

    println!("coarse relation vocabulary matches brute-force placement enumeration");
}

fn closure_fingerprint(base: &QualNetwork, seed: u64) -> (Verdict, Option<Vec<u16>>) {
    let mut net = base.clone();
    let verdict = net.path_consistency_seeded(seed);
    let edges = (verdict != Verdict::Inconsistent).then(|| {
        let n = net.node_count();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| net.edge(i, j).bits())
            .collect()
    });
    (verdict, edges)
}

#[test]
fn propagation_rejects_cycles_infers_chains_and_is_order_independent() {
    let before = RelationSet::singleton(BaseRelation::P);

    // A three-cycle of strict precedence cannot be satisfied.
    let mut cycle = QualNetwork::new();
    cycle.constrain("a", "b", before).unwrap();
    cycle.constrain("b", "c", before).unwrap();
    cycle.constrain("c", "a", before).unwrap();
    assert_eq!(cycle.path_consistency(), Verdict::Inconsistent);

    // Precedence composes along a chain.
    let mut chain = QualNetwork::new();
    chain.constrain("a", "b", before).unwrap();
    chain.constrain("b", "c", before).unwrap();
    assert_eq!(chain.path_consistency(), Verdict::Consistent);
    let (a, c) = (chain.node_id("a").unwrap(), chain.node_id("c").unwrap());
    assert_eq!(chain.edge(a, c), before);

    // A pluperfect clause locates the process before the speech act even
    // though no direct constraint says so.
    let clause = Clause::new(Vendler::Accomplissement, Tense::PlusQueParfait);
    let mut net = to_network(&build_structure(&clause));
    assert_ne!(net.path_consistency(), Verdict::Inconsistent);
    let proc = net.node_id("proces").unwrap();
    let speech = net.node_id("enonciation").unwrap();
    assert_eq!(net.edge(proc, speech), before);

    // The closure does not depend on the order edges are revised in.
    let mut wide = QualNetwork::new();
    let or3 = RelationSet::singleton(BaseRelation::P)
        | RelationSet::singleton(BaseRelation::M)
        | RelationSet::singleton(BaseRelation::O);
    let during = RelationSet::singleton(BaseRelation::D)
        | RelationSet::singleton(BaseRelation::S)
        | RelationSet::singleton(BaseRelation::Eq);
    let ends = RelationSet::singleton(BaseRelation::Fi)
        | RelationSet::singleton(BaseRelation::Eq)
        | RelationSet::singleton(BaseRelation::Si);
    let after = RelationSet::singleton(BaseRelation::Oi)
        | RelationSet::singleton(BaseRelation::Mi)
        | RelationSet::singleton(BaseRelation::Pi);
    wide.constrain("v0", "v1", or3).unwrap();
    wide.constrain("v1", "v2", during).unwrap();
    wide.constrain("v2", "v3", ends).unwrap();
    wide.constrain("v3", "v4", after).unwrap();
    wide.constrain("v0", "v4", RelationSet::singleton(BaseRelation::P)).unwrap();

    for base in [&cycle, &chain, &net, &wide] {
        let reference = closure_fingerprint(base, 0);
        for seed in 1..20u64 {
            assert_eq!(
                closure_fingerprint(base, seed),
                reference,
                "closure must not depend on revision order (seed {seed})"
            );
        }
    }

    println!("propagation rejects the 3-cycle, infers chained precedence, and closes identically under 20 seeds");
}

#[test]
fn aspect_diagnoses_and_adverb_readings_match_the_expected_table() {
    // An activity in simple past cannot host an unfinished-span adjunct.
    let s = build_structure(
        &Clause::new(Vendler::Activite, Tense::PasseSimple).with(Circumstancial::DepuisDuree(120)),
    );
    assert_eq!(s.diagnosis, Diagnosis::Insoluble);

    // An imperfect activity with a short bounded run inside a long anchored
    // span resolves by iterating: a global series viewed from within.
    let s = build_structure(
        &Clause::new(Vendler::Activite, Tense::Imparfait)
            .with(Circumstancial::PendantDuree(120))
            .with(Circumstancial::DepuisDuree(100_000)),
    );
    assert_eq!(s.diagnosis, Diagnosis::ResolvedIteration);
    assert_eq!(s.aspect, Aspect::Aoristique);
    assert_eq!(s.aspect_series, Some(Aspect::Inaccompli));

    // A clock adjunct on a simple-past activity contracts it to the tick.
    let s = build_structure(
        &Clause::new(Vendler::Activite, Tense::PasseSimple)
            .with(Circumstancial::AClock { hour: 10, minute: 40 }),
    );
    assert_eq!(s.diagnosis, Diagnosis::ResolvedContraction);

    // Adverb readings across the four canonical rows.
    let rows = [
        (
            Clause::new(Vendler::Activite, Tense::Imparfait),
            EncoreDeja::Encore,
            Reading::Ambiguous,
        ),
        (
            Clause::new(Vendler::Activite, Tense::PasseCompose),
            EncoreDeja::Encore,
            Reading::Iterative,
        ),
        (
            Clause::new(Vendler::Activite, Tense::Present),
            EncoreDeja::Deja,
            Reading::Ambiguous,
        ),
        (
            Clause::new(Vendler::Accomplissement, Tense::Present),
            EncoreDeja::Deja,
            Reading::Iterative,
        ),
    ];
    for (clause, adverb, expected) in rows {
        assert_eq!(
            encore_deja(&clause, adverb),
            expected,
            "{:?} {:?}",
            clause.vendler,
            clause.tense
        );
    }

    println!("aspect diagnoses and encore/deja readings match the four-row table");
}

#[test]
fn nested_iteration_fills_each_host_with_disjoint_occurrences() {
    let frame = Frame::new(
        CivilDateTime::date(2005, 3, 1).unwrap(),
        CivilDateTime::date(2005, 3, 29).unwrap(),
    )
    .unwrap();
    let sundays = frame.gen(CalendarName::Weekday(Weekday::Dimanche), GenMode::Strict);
    assert_eq!(sundays.len(), 4);
    for (k, day) in [6u32, 13, 20, 27].into_iter().enumerate() {
        assert_eq!(weekday_number(2005, 3, day), 0, "2005-03-{day:02} is a Sunday");
        assert_eq!(
            sundays.items()[k].beg(),
            i64::from(day - 1) * MINUTES_PER_DAY
        );
    }

    let bath = IterativeModel {
        slots: vec![ModelSlot::Process(ProcessModel {
            name: "bain".into(),
            model_interval: ModelSpan::new(0, 30).unwrap(),
            reference_interval: ModelSpan::new(0, 30).unwrap(),
        })],
        relations: Vec::new(),
    };
    let inner = Iteration::new(IteratorSpec::Numeric(2), bath, None).unwrap();
    let outer_model = IterativeModel {
        slots: vec![ModelSlot::Nested {
            name: "bains".into(),
            span: None,
            iteration: Box::new(inner),
        }],
        relations: Vec::new(),
    };
    let outer = Iteration::new(IteratorSpec::ByIntervals(sundays.clone()), outer_model, None)
        .unwrap();

    let occurrences = instantiate(&outer, &frame).unwrap();
    assert_eq!(occurrences.len(), 4);
    let mut inner_anchors = Vec::new();
    for (k, occ) in occurrences.iter().enumerate() {
        assert_eq!(occ.anchor, sundays.items()[k]);
        let (name, children) = &occ.children[0];
        assert_eq!(name, "bains");
        assert_eq!(children.len(), 2, "two inner occurrences per host");
        for child in children {
            assert!(
                child.anchor.beg() >= occ.anchor.beg() && child.anchor.end() <= occ.anchor.end(),
                "inner occurrence must stay inside its host day"
            );
            inner_anchors.push(child.anchor);
        }
    }
    assert_eq!(inner_anchors.len(), 8);
    for i in 0..inner_anchors.len() {
        for j in 0..i {
            assert!(
                !inner_anchors[i].intersects(&inner_anchors[j]),
                "occurrences must not overlap"
            );
        }
    }

    println!("4 Sunday hosts each carry 2 nested occurrences, all 8 pairwise disjoint");
}

#[test]
fn scanner_reports_the_expected_matches_and_period_classes() {
    let text = "Ils ont pris l'habitude de se retrouver tous les mardis. \
                Elle lui rend visite une fois par mois. \
                On se voit un dimanche sur deux. \
                Le recensement a lieu tous les cinq ans.";
    let matches = extract::scan(text);
    assert_eq!(matches.len(), 4);
    let got: Vec<(&str, &str)> = matches
        .iter()
        .map(|m| (m.pattern.id(), m.label.as_str()))
        .collect();
    assert_eq!(
        got,
        [
            ("TOUS_LES", "mardi"),
            ("FOIS_PAR", "mois"),
            ("N_SUR_N", "dimanche"),
            ("TOUS_LES_N", "an"),
        ]
    );
    assert_eq!(matches[1].number, Some(1));
    assert_eq!(matches[2].number, Some(1));
    assert_eq!(matches[2].out_of, Some(2));
    assert_eq!(matches[3].number, Some(5));

    // Period classification: units are continuous, positions discontinuous,
    // and the cyclic "tous les n" form is discontinuous whatever its unit.
    assert_eq!(extract::classify_period("jour").unwrap(), PeriodClass::Continuous);
    assert_eq!(extract::classify_period("année").unwrap(), PeriodClass::Continuous);
    assert_eq!(extract::classify_period("soir").unwrap(), PeriodClass::Discontinuous);
    assert_eq!(extract::classify_period("mardi").unwrap(), PeriodClass::Discontinuous);
    assert_eq!(matches[0].period_class().unwrap(), PeriodClass::Discontinuous);
    assert_eq!(matches[1].period_class().unwrap(), PeriodClass::Continuous);
    assert_eq!(matches[2].period_class().unwrap(), PeriodClass::Discontinuous);
    assert_eq!(matches[3].period_class().unwrap(), PeriodClass::Discontinuous);

    println!("scanner finds the 4 expected phrases and classifies their periods");
}
