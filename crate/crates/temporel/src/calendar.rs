//! Calendar frames and the named series they generate.
//!
//! A [`Frame`] is a finite window of the timeline with a one-minute granule:
//! instants are minutes counted from the frame's origin. Calendar names
//! (days, weeks, months, weekday and month names, seasons, day parts) each
//! denote the series of all such units meeting the frame — whole units only
//! under [`GenMode::Strict`], clipped boundary units under [`GenMode::Soft`].
//!
//! Dates follow the proleptic Gregorian calendar (no time zones, no DST);
//! the civil-day conversions are the classic era-based algorithms. Weeks
//! start on Monday. Season boundaries and day-part windows are fixed
//! conventions, documented on [`CalendarName`].

use alloc::vec::Vec;

use crate::interval::{ConvexInterval, Instant};
use crate::series::Series;

const MIN_PER_DAY: i64 = 1440;
const MIN_PER_HOUR: i64 = 60;

/// Errors from frame and date construction.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CalendarError {
    #[error("invalid civil date-time {year:04}-{month:02}-{day:02} {hour:02}:{minute:02}")]
    InvalidDate {
        year: i32,
        month: u8,
        day: u8,
        hour: u8,
        minute: u8,
    },
    #[error("frame origin must precede its horizon")]
    EmptyFrame,
}

/// A proleptic-Gregorian wall-clock date-time, minute precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CivilDateTime {
    pub year: i32,
    pub month: u8,
    pub day: u8,
    pub hour: u8,
    pub minute: u8,
}

impl CivilDateTime {
    pub fn new(year: i32, month: u8, day: u8, hour: u8, minute: u8) -> Result<Self, CalendarError> {
        let bad = CalendarError::InvalidDate {
            year,
            month,
            day,
            hour,
            minute,
        };
        if month == 0 || month > 12 || hour > 23 || minute > 59 {
            return Err(bad);
        }
        if day == 0 || u32::from(day) > days_in_month(year, month) {
            return Err(bad);
        }
        Ok(CivilDateTime {
            year,
            month,
            day,
            hour,
            minute,
        })
    }

    /// Midnight shorthand.
    pub fn date(year: i32, month: u8, day: u8) -> Result<Self, CalendarError> {
        CivilDateTime::new(year, month, day, 0, 0)
    }

    /// Minutes since 1970-01-01 00:00 (negative before the epoch).
    fn abs_minutes(&self) -> i64 {
        days_from_civil(self.year, self.month, self.day) * MIN_PER_DAY
            + i64::from(self.hour) * MIN_PER_HOUR
            + i64::from(self.minute)
    }
}

pub fn is_leap_year(year: i32) -> bool {
    (year % 4 == 0 && year % 100 != 0) || year % 400 == 0
}

pub fn days_in_month(year: i32, month: u8) -> u32 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 => {
            if is_leap_year(year) {
                29
            } else {
                28
            }
        }
        _ => 0,
    }
}

/// Days since 1970-01-01 for a civil date (era-based conversion).
fn days_from_civil(year: i32, month: u8, day: u8) -> i64 {
    let y = i64::from(year) - i64::from(month <= 2);
    let era = if y >= 0 { y } else { y - 399 } / 400;
    let yoe = y - era * 400;
    let m = i64::from(month);
    let mp = if m > 2 { m - 3 } else { m + 9 };
    let doy = (153 * mp + 2) / 5 + i64::from(day) - 1;
    let doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    era * 146097 + doe - 719468
}

/// Civil date for a day count since 1970-01-01.
fn civil_from_days(z: i64) -> (i32, u8, u8) {
    let z = z + 719468;
    let era = if z >= 0 { z } else { z - 146096 } / 146097;
    let doe = z - era * 146097;
    let yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = doy - (153 * mp + 2) / 5 + 1;
    let m = if mp < 10 { mp + 3 } else { mp - 9 };
    ((y + i64::from(m <= 2)) as i32, m as u8, d as u8)
}

/// Weekday of a day count, Monday = 0 .. Sunday = 6.
fn weekday_of_day(day: i64) -> u8 {
    // 1970-01-01 was a Thursday.
    (day + 3).rem_euclid(7) as u8
}

/// Whole-unit versus clipped generation at the frame boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GenMode {
    #[default]
    Strict,
    Soft,
}

/// A finite discourse window; every [`Instant`] is a minute offset in
/// `[0, len)` from the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frame {
    origin_abs: i64,
    len: i64,
}

impl Frame {
    pub fn new(origin: CivilDateTime, horizon: CivilDateTime) -> Result<Self, CalendarError> {
        let o = origin.abs_minutes();
        let h = horizon.abs_minutes();
        if o >= h {
            return Err(CalendarError::EmptyFrame);
        }
        Ok(Frame {
            origin_abs: o,
            len: h - o,
        })
    }

    /// Whole calendar years, a convenient test frame.
    pub fn years(first: i32, past_last: i32) -> Result<Self, CalendarError> {
        Frame::new(
            CivilDateTime::date(first, 1, 1)?,
            CivilDateTime::date(past_last, 1, 1)?,
        )
    }

    pub fn len(&self) -> i64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The frame as one convex interval `[0, len)`.
    pub fn span(&self) -> ConvexInterval {
        ConvexInterval::new(0, self.len).expect("frame length is positive")
    }

    /// The frame as a one-member series (the default reference of an
    /// unrestricted expression).
    pub fn whole(&self) -> Series {
        Series::from(self.span())
    }

    /// Frame offset of a wall-clock moment (may fall outside `[0, len)`).
    pub fn instant_of(&self, c: &CivilDateTime) -> Instant {
        c.abs_minutes() - self.origin_abs
    }

    /// Wall-clock rendering of a frame offset.
    pub fn civil_of(&self, t: Instant) -> CivilDateTime {
        let abs = t + self.origin_abs;
        let day = abs.div_euclid(MIN_PER_DAY);
        let within = abs.rem_euclid(MIN_PER_DAY);
        let (year, month, dom) = civil_from_days(day);
        CivilDateTime {
            year,
            month,
            day: dom,
            hour: (within / MIN_PER_HOUR) as u8,
            minute: (within % MIN_PER_HOUR) as u8,
        }
    }

    /// All calendar units named `name` meeting the frame.
    pub fn gen(&self, name: CalendarName, mode: GenMode) -> Series {
        let o = self.origin_abs;
        let h = self.origin_abs + self.len;
        let mut units: Vec<(i64, i64)> = Vec::new();
        let day_lo = o.div_euclid(MIN_PER_DAY);
        match name {
            CalendarName::Heure => {
                let mut t = o.div_euclid(MIN_PER_HOUR) * MIN_PER_HOUR;
                while t < h {
                    units.push((t, t + MIN_PER_HOUR));
                    t += MIN_PER_HOUR;
                }
            }
            CalendarName::Jour => {
                let mut d = day_lo;
                while d * MIN_PER_DAY < h {
                    units.push((d * MIN_PER_DAY, (d + 1) * MIN_PER_DAY));
                    d += 1;
                }
            }
            CalendarName::Semaine => {
                let mut d = day_lo - i64::from(weekday_of_day(day_lo));
                while d * MIN_PER_DAY < h {
                    units.push((d * MIN_PER_DAY, (d + 7) * MIN_PER_DAY));
                    d += 7;
                }
            }
            CalendarName::Weekday(w) => {
                let mut d = day_lo;
                while d * MIN_PER_DAY < h {
                    if weekday_of_day(d) == w as u8 {
                        units.push((d * MIN_PER_DAY, (d + 1) * MIN_PER_DAY));
                    }
                    d += 1;
                }
            }
            CalendarName::Mois => {
                let (mut y, mut m, _) = civil_from_days(day_lo);
                m = 1.max(m); // always true; keeps m well-formed
                let mut beg = days_from_civil(y, m, 1) * MIN_PER_DAY;
                while beg < h {
                    let (ny, nm) = if m == 12 { (y + 1, 1) } else { (y, m + 1) };
                    let end = days_from_civil(ny, nm, 1) * MIN_PER_DAY;
                    units.push((beg, end));
                    y = ny;
                    m = nm;
                    beg = end;
                }
            }
            CalendarName::Month(k) => {
                let (y0, _, _) = civil_from_days(day_lo);
                let mut y = y0 - 1;
                loop {
                    let beg = days_from_civil(y, k, 1) * MIN_PER_DAY;
                    if beg >= h {
                        break;
                    }
                    let (ny, nm) = if k == 12 { (y + 1, 1) } else { (y, k + 1) };
                    units.push((beg, days_from_civil(ny, nm, 1) * MIN_PER_DAY));
                    y += 1;
                }
            }
            CalendarName::An => {
                let (y0, _, _) = civil_from_days(day_lo);
                let mut y = y0;
                let mut beg = days_from_civil(y, 1, 1) * MIN_PER_DAY;
                while beg < h {
                    let end = days_from_civil(y + 1, 1, 1) * MIN_PER_DAY;
                    units.push((beg, end));
                    y += 1;
                    beg = end;
                }
            }
            CalendarName::Saison => {
                let (y0, _, _) = civil_from_days(day_lo);
                for y in (y0 - 1).. {
                    let mut done = true;
                    for k in 0..4 {
                        let (beg, end) = season_span(y, k);
                        if beg < h {
                            done = false;
                            units.push((beg, end));
                        }
                    }
                    if done {
                        break;
                    }
                }
            }
            CalendarName::Season(k) => {
                let (y0, _, _) = civil_from_days(day_lo);
                for y in (y0 - 1).. {
                    let (beg, end) = season_span(y, k);
                    if beg >= h {
                        break;
                    }
                    units.push((beg, end));
                }
            }
            CalendarName::DayPart(p) => {
                let (start, len) = p.window_minutes();
                let mut d = day_lo - 1;
                while d * MIN_PER_DAY + start < h {
                    let beg = d * MIN_PER_DAY + start;
                    units.push((beg, beg + len));
                    d += 1;
                }
            }
        }
        let mut out = Vec::new();
        for (beg, end) in units {
            match mode {
                GenMode::Strict => {
                    if beg >= o && end <= h {
                        out.push(
                            ConvexInterval::new(beg - o, end - o).expect("units are well-formed"),
                        );
                    }
                }
                GenMode::Soft => {
                    let b = beg.max(o);
                    let e = end.min(h);
                    if b < e {
                        out.push(ConvexInterval::new(b - o, e - o).expect("clip preserves order"));
                    }
                }
            }
        }
        Series::new(out).expect("calendar units are ordered and disjoint")
    }

    /// The point series `hour:minute` of every day of the frame (the reading
    /// of "à 8h": the instant that marks the hour, not the hour-long unit).
    pub fn clock_points(&self, hour: u8, minute: u8) -> Series {
        let o = self.origin_abs;
        let h = self.origin_abs + self.len;
        let mut out = Vec::new();
        let mut d = o.div_euclid(MIN_PER_DAY);
        while d * MIN_PER_DAY <= h {
            let p = d * MIN_PER_DAY + i64::from(hour) * MIN_PER_HOUR + i64::from(minute);
            if p >= o && p < h {
                out.push(ConvexInterval::point(p - o));
            }
            d += 1;
        }
        Series::new(out).expect("one point per day, increasing")
    }

    /// Extensional lexicon test between two calendar names over this frame.
    /// Generation is clipped on both sides so ragged frame edges cannot
    /// spoil the comparison.
    pub fn lexicon_holds(&self, rel: LexiconRel, a: CalendarName, b: CalendarName) -> bool {
        let sa = self.gen(a, GenMode::Soft);
        let sb = self.gen(b, GenMode::Soft);
        match rel {
            LexiconRel::SorteDe => sa.extracted_from(&sb),
            LexiconRel::Inclusion => sa.included_in(&sb),
        }
    }
}

/// "A Monday is a kind of day" versus "days are included in months".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexiconRel {
    SorteDe,
    Inclusion,
}

/// Absolute minute span of season `k` (0 = spring) starting in year `y`.
/// Conventional fixed boundaries on the 21st; winter crosses the year end
/// as a single convex span.
fn season_span(y: i32, k: u8) -> (i64, i64) {
    let at = |yy: i32, m: u8| days_from_civil(yy, m, 21) * MIN_PER_DAY;
    match k {
        0 => (at(y, 3), at(y, 6)),
        1 => (at(y, 6), at(y, 9)),
        2 => (at(y, 9), at(y, 12)),
        _ => (at(y, 12), at(y + 1, 3)),
    }
}

/// Monday-first weekday index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Weekday {
    Lundi = 0,
    Mardi = 1,
    Mercredi = 2,
    Jeudi = 3,
    Vendredi = 4,
    Samedi = 5,
    Dimanche = 6,
}

/// Fixed day-part windows; the night span runs into the next day.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DayPart {
    Matin,
    ApresMidi,
    Soir,
    Nuit,
}

impl DayPart {
    /// (start minute within the day, length in minutes)
    fn window_minutes(self) -> (i64, i64) {
        match self {
            DayPart::Matin => (6 * 60, 6 * 60),      // 06:00-12:00
            DayPart::ApresMidi => (12 * 60, 6 * 60), // 12:00-18:00
            DayPart::Soir => (18 * 60, 5 * 60),      // 18:00-23:00
            DayPart::Nuit => (23 * 60, 7 * 60),      // 23:00-06:00 next day
        }
    }
}

/// The closed lexicon of generatable calendar names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalendarName {
    Heure,
    Jour,
    Semaine,
    Mois,
    An,
    Saison,
    Weekday(Weekday),
    /// Month number 1..=12.
    Month(u8),
    /// Season number 0..=3 (spring, summer, autumn, winter).
    Season(u8),
    DayPart(DayPart),
}

impl CalendarName {
    /// Looks up an ASCII-normalized, lowercase French name ("ete",
    /// "decembre", "apres-midi"); a trailing plural `s` is tolerated.
    pub fn parse(token: &str) -> Option<CalendarName> {
        if let Some(n) = Self::parse_singular(token) {
            return Some(n);
        }
        token
            .strip_suffix('s')
            .and_then(Self::parse_singular)
    }

    fn parse_singular(token: &str) -> Option<CalendarName> {
        use CalendarName::*;
        Some(match token {
            "heure" => Heure,
            "jour" | "journee" => Jour,
            "semaine" => Semaine,
            "mois" => Mois,
            "an" | "annee" => An,
            "saison" => Saison,
            "lundi" => Weekday(self::Weekday::Lundi),
            "mardi" => Weekday(self::Weekday::Mardi),
            "mercredi" => Weekday(self::Weekday::Mercredi),
            "jeudi" => Weekday(self::Weekday::Jeudi),
            "vendredi" => Weekday(self::Weekday::Vendredi),
            "samedi" => Weekday(self::Weekday::Samedi),
            "dimanche" => Weekday(self::Weekday::Dimanche),
            "janvier" => Month(1),
            "fevrier" => Month(2),
            "mars" => Month(3),
            "avril" => Month(4),
            "mai" => Month(5),
            "juin" => Month(6),
            "juillet" => Month(7),
            "aout" => Month(8),
            "septembre" => Month(9),
            "octobre" => Month(10),
            "novembre" => Month(11),
            "decembre" => Month(12),
            "printemps" => Season(0),
            "ete" => Season(1),
            "automne" => Season(2),
            "hiver" => Season(3),
            "matin" | "matinee" => DayPart(self::DayPart::Matin),
            "apres-midi" | "apresmidi" => DayPart(self::DayPart::ApresMidi),
            "soir" | "soiree" => DayPart(self::DayPart::Soir),
            "nuit" => DayPart(self::DayPart::Nuit),
            _ => return None,
        })
    }

    /// Canonical ASCII name, the inverse of [`CalendarName::parse`].
    pub fn as_str(&self) -> &'static str {
        use CalendarName::*;
        match self {
            Heure => "heure",
            Jour => "jour",
            Semaine => "semaine",
            Mois => "mois",
            An => "an",
            Saison => "saison",
            Weekday(w) => match w {
                self::Weekday::Lundi => "lundi",
                self::Weekday::Mardi => "mardi",
                self::Weekday::Mercredi => "mercredi",
                self::Weekday::Jeudi => "jeudi",
                self::Weekday::Vendredi => "vendredi",
                self::Weekday::Samedi => "samedi",
                self::Weekday::Dimanche => "dimanche",
            },
            Month(k) => {
                const MONTHS: [&str; 12] = [
                    "janvier",
                    "fevrier",
                    "mars",
                    "avril",
                    "mai",
                    "juin",
                    "juillet",
                    "aout",
                    "septembre",
                    "octobre",
                    "novembre",
                    "decembre",
                ];
                MONTHS[usize::from(*k) - 1]
            }
            Season(k) => ["printemps", "ete", "automne", "hiver"][usize::from(*k)],
            DayPart(p) => match p {
                self::DayPart::Matin => "matin",
                self::DayPart::ApresMidi => "apres-midi",
                self::DayPart::Soir => "soir",
                self::DayPart::Nuit => "nuit",
            },
        }
    }
}
