//! Symbolic Morse functions on closed 3-manifolds.
//!
//! A [`MorseProgram`] is a list of critical points with indices and exact rational levels. Points
//! are kept sorted by level. Cancellation of a (0, 1) or (2, 3) pair needs an explicit hint saying
//! the relevant spheres meet in one point; nothing here is computed geometrically.
//!
//! Text format:
//!
//! ```text
//! boundary lower=empty upper=empty
//! crit o1 index=0 level=0
//! crit p1 index=1 level=3/2
//! hint o1 p1
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::heegaard::{DiagramError, HeegaardDiagram};
use crate::surface_group::{Letter, Word};

pub type Level = Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorseError {
    #[error("{origin}:{line}: {message}")]
    Parse { origin: String, line: usize, message: String },
    #[error("critical point `{0}` listed twice")]
    DuplicateId(String),
    #[error("unknown critical point `{0}`")]
    UnknownPoint(String),
    #[error("critical point `{id}` has index {index}, expected 0..=3")]
    BadIndex { id: String, index: u8 },
    #[error("hint ({0}, {1}) must join indices 0 and 1 or indices 2 and 3")]
    BadHint(String, String),
    #[error("program has boundary; only closed programs are supported here")]
    HasBoundary,
    #[error("closed program needs an index-0 and an index-3 point")]
    NotClosed,
    #[error("expected `{id}` to have index {expected}, found {found}")]
    WrongIndex { id: String, expected: u8, found: u8 },
    #[error("no hint certifies that `{0}` and `{1}` cancel")]
    NotCertified(String, String),
    #[error("cancelling `{0}` would leave a closed program without an index-{1} point")]
    LastExtremum(String, u8),
    #[error("program is not self-indexed")]
    NotSelfIndexed,
    #[error("expected exactly one index-0 and one index-3 point, found {minima} and {maxima}")]
    ExtremaCount { minima: usize, maxima: usize },
    #[error("{ones} index-1 points but {twos} index-2 points: Euler characteristic {chi} is not 0")]
    ChiInconsistent { ones: usize, twos: usize, chi: i64 },
    #[error("program has middle genus {genus} but {found} theta curves were given")]
    ThetaCount { genus: usize, found: usize },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalPoint {
    pub id: String,
    pub index: u8,
    #[serde(serialize_with = "level_string")]
    pub level: Level,
}

impl CriticalPoint {
    pub fn new(id: impl Into<String>, index: u8, level: Level) -> Self {
        CriticalPoint { id: id.into(), index, level }
    }
}

fn level_string<S: Serializer>(l: &Level, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&l.to_string())
}

/// A boundary surface of the cobordism, or no boundary at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    Empty,
    Genus(usize),
}

impl Serialize for Boundary {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Boundary::Empty => s.serialize_str("empty"),
            Boundary::Genus(k) => s.serialize_u64(*k as u64),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Empty => f.write_str("empty"),
            Boundary::Genus(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorseProgram {
    points: Vec<CriticalPoint>,
    boundary_lower: Boundary,
    boundary_upper: Boundary,
    self_indexed: bool,
    /// Unordered pairs of ids, stored with the lower-index point first.
    hints: BTreeSet<(String, String)>,
}

impl MorseProgram {
    /// Points are sorted by level; ties keep their input order.
    pub fn new(
        mut points: Vec<CriticalPoint>,
        boundary_lower: Boundary,
        boundary_upper: Boundary,
        hints: impl IntoIterator<Item = (String, String)>,
    ) -> Result<Self, MorseError> {
        let mut seen = BTreeSet::new();
        for p in &points {
            if p.index > 3 {
                return Err(MorseError::BadIndex { id: p.id.clone(), index: p.index });
            }
            if !seen.insert(p.id.clone()) {
                return Err(MorseError::DuplicateId(p.id.clone()));
            }
        }
        points.sort_by(|a, b| a.level.cmp(&b.level));
        let index_of: BTreeMap<&str, u8> = points.iter().map(|p| (p.id.as_str(), p.index)).collect();
        let mut normalized = BTreeSet::new();
        for (a, b) in hints {
            let ia = *index_of.get(a.as_str()).ok_or_else(|| MorseError::UnknownPoint(a.clone()))?;
            let ib = *index_of.get(b.as_str()).ok_or_else(|| MorseError::UnknownPoint(b.clone()))?;
            let (lo, hi) = if ia <= ib { ((a, ia), (b, ib)) } else { ((b, ib), (a, ia)) };
            if !matches!((lo.1, hi.1), (0, 1) | (2, 3)) {
                return Err(MorseError::BadHint(lo.0, hi.0));
            }
            normalized.insert((lo.0, hi.0));
        }
        let self_indexed = points.iter().all(|p| p.level == Level::from_integer(i64::from(p.index)));
        Ok(MorseProgram { points, boundary_lower, boundary_upper, self_indexed, hints: normalized })
    }

    /// A closed program with the given number of points of each index, already self-indexed.
    /// Ids are `c<index>_<n>`.
    pub fn closed_with_counts(counts: [usize; 4]) -> Self {
        let points = (0u8..4)
            .flat_map(|l| {
                (1..=counts[l as usize]).map(move |n| CriticalPoint::new(format!("c{l}_{n}"), l, Level::from_integer(l.into())))
            })
            .collect();
        MorseProgram::new(points, Boundary::Empty, Boundary::Empty, []).expect("generated ids are distinct")
    }

    pub fn points(&self) -> &[CriticalPoint] {
        &self.points
    }

    pub fn boundary(&self) -> (Boundary, Boundary) {
        (self.boundary_lower, self.boundary_upper)
    }

    pub fn is_self_indexed(&self) -> bool {
        self.self_indexed
    }

    pub fn hints(&self) -> impl Iterator<Item = (&str, &str)> {
        self.hints.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn with_hint(&self, a: &str, b: &str) -> Result<Self, MorseError> {
        let mut hints = self.hints.clone();
        hints.insert((a.to_string(), b.to_string()));
        MorseProgram::new(self.points.clone(), self.boundary_lower, self.boundary_upper, hints)
    }

    pub fn index_counts(&self) -> [usize; 4] {
        let mut c = [0; 4];
        for p in &self.points {
            c[p.index as usize] += 1;
        }
        c
    }

    pub fn is_closed(&self) -> bool {
        self.boundary_lower == Boundary::Empty && self.boundary_upper == Boundary::Empty
    }

    fn check_closed(&self) -> Result<(), MorseError> {
        if !self.is_closed() {
            return Err(MorseError::HasBoundary);
        }
        let c = self.index_counts();
        if !self.points.is_empty() && (c[0] == 0 || c[3] == 0) {
            return Err(MorseError::NotClosed);
        }
        Ok(())
    }

    fn point(&self, id: &str) -> Result<&CriticalPoint, MorseError> {
        self.points.iter().find(|p| p.id == id).ok_or_else(|| MorseError::UnknownPoint(id.to_string()))
    }

    /// Sorted by index with each level moved to its index.
    pub fn self_index(&self) -> MorseProgram {
        if self.self_indexed {
            return self.clone();
        }
        let mut points = self.points.clone();
        points.sort_by_key(|p| p.index);
        for p in &mut points {
            p.level = Level::from_integer(p.index.into());
        }
        MorseProgram {
            points,
            boundary_lower: self.boundary_lower,
            boundary_upper: self.boundary_upper,
            self_indexed: true,
            hints: self.hints.clone(),
        }
    }

    /// The program of `3 - f`: indices become `3 - index` and the boundaries swap.
    pub fn reverse(&self) -> MorseProgram {
        let three = Level::from_integer(3);
        let points = self
            .points
            .iter()
            .rev()
            .map(|p| CriticalPoint { id: p.id.clone(), index: 3 - p.index, level: three - p.level })
            .collect();
        MorseProgram {
            points,
            boundary_lower: self.boundary_upper,
            boundary_upper: self.boundary_lower,
            self_indexed: self.self_indexed,
            hints: self.hints.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        }
    }

    /// `sum (-1)^index` over the critical points of a closed program.
    pub fn euler_characteristic(&self) -> Result<i64, MorseError> {
        self.check_closed()?;
        let c = self.index_counts();
        Ok(c[0] as i64 - c[1] as i64 + c[2] as i64 - c[3] as i64)
    }

    /// Removes the index-0 point `o` and the index-1 point `p`, which must be joined by a hint.
    pub fn cancel_01_pair(&self, o: &str, p: &str) -> Result<MorseProgram, MorseError> {
        for (id, expected) in [(o, 0), (p, 1)] {
            let found = self.point(id)?.index;
            if found != expected {
                return Err(MorseError::WrongIndex { id: id.to_string(), expected, found });
            }
        }
        if !self.hints.contains(&(o.to_string(), p.to_string())) {
            return Err(MorseError::NotCertified(o.to_string(), p.to_string()));
        }
        if self.is_closed() && self.index_counts()[0] == 1 && self.points.len() > 2 {
            return Err(MorseError::LastExtremum(o.to_string(), 0));
        }
        let gone = |id: &str| id == o || id == p;
        let points = self.points.iter().filter(|q| !gone(&q.id)).cloned().collect();
        let hints = self.hints.iter().filter(|(a, b)| !gone(a) && !gone(b)).cloned().collect();
        Ok(MorseProgram {
            points,
            boundary_lower: self.boundary_lower,
            boundary_upper: self.boundary_upper,
            self_indexed: self.self_indexed,
            hints,
        })
    }

    /// Removes the index-2 point `q` and the index-3 point `r`, via the reversed program.
    pub fn cancel_23_pair(&self, q: &str, r: &str) -> Result<MorseProgram, MorseError> {
        for (id, expected) in [(q, 2), (r, 3)] {
            let found = self.point(id)?.index;
            if found != expected {
                return Err(MorseError::WrongIndex { id: id.to_string(), expected, found });
            }
        }
        self.reverse().cancel_01_pair(r, q).map(|p| p.reverse()).map_err(|e| match e {
            MorseError::NotCertified(..) => MorseError::NotCertified(q.to_string(), r.to_string()),
            MorseError::LastExtremum(id, _) => MorseError::LastExtremum(id, 3),
            other => other,
        })
    }

    /// Genus of the level surface between indices 1 and 2.
    pub fn middle_genus(&self) -> Result<usize, MorseError> {
        if !self.self_indexed {
            return Err(MorseError::NotSelfIndexed);
        }
        self.check_closed()?;
        let c = self.index_counts();
        if c[0] != 1 || c[3] != 1 {
            return Err(MorseError::ExtremaCount { minima: c[0], maxima: c[3] });
        }
        if c[1] != c[2] {
            return Err(MorseError::ChiInconsistent { ones: c[1], twos: c[2], chi: c[2] as i64 - c[1] as i64 });
        }
        Ok(c[1])
    }

    /// Heegaard diagram of the splitting along the middle level, with canonical alpha curves.
    pub fn to_heegaard(&self, theta: Vec<Word>) -> Result<HeegaardDiagram, MorseError> {
        let k = self.middle_genus()?;
        if theta.len() != k {
            return Err(MorseError::ThetaCount { genus: k, found: theta.len() });
        }
        let alpha = (1..=k).map(|i| Word::from(Letter::a(i))).collect();
        Ok(HeegaardDiagram::new(k, alpha, theta, BTreeMap::new())?)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.is_closed() {
            out.push_str(&format!("boundary lower={} upper={}\n", self.boundary_lower, self.boundary_upper));
        }
        for p in &self.points {
            out.push_str(&format!("crit {} index={} level={}\n", p.id, p.index, p.level));
        }
        for (a, b) in &self.hints {
            out.push_str(&format!("hint {a} {b}\n"));
        }
        out
    }
}

/// Accepts integers, fractions `n/d` and finite decimals such as `-0.25`.
pub fn parse_level(s: &str) -> Option<Level> {
    if let Ok(q) = s.parse::<Level>() {
        return Some(q);
    }
    let (int, frac) = s.split_once('.')?;
    if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
        return None;
    }
    let negative = int.starts_with('-');
    let whole: i64 = match int.trim_start_matches(['-', '+']) {
        "" => 0,
        digits => digits.parse().ok()?,
    };
    let denom = 10i64.checked_pow(frac.len() as u32)?;
    let numer = whole.checked_mul(denom)?.checked_add(frac.parse::<i64>().ok()?)?;
    Some(Level::new(if negative { -numer } else { numer }, denom))
}

pub fn parse_program(text: &str, origin: &str) -> Result<MorseProgram, MorseError> {
    let err = |line: usize, message: String| MorseError::Parse { origin: origin.to_string(), line, message };
    let mut points = Vec::new();
    let mut point_lines = BTreeMap::new();
    let mut hints = Vec::new();
    let mut boundary: Option<(Boundary, Boundary)> = None;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let keyword = words.next().expect("line is not blank");
        let rest: Vec<&str> = words.collect();
        match keyword {
            "crit" => {
                let [id, index, level] = rest[..] else {
                    return Err(err(line_no, "expected `crit <id> index=<0..3> level=<rational>`".into()));
                };
                let index = key_value(index, "index")
                    .and_then(|v| v.parse::<u8>().ok())
                    .filter(|&i| i <= 3)
                    .ok_or_else(|| err(line_no, format!("bad index `{index}`")))?;
                let level = key_value(level, "level")
                    .and_then(parse_level)
                    .ok_or_else(|| err(line_no, format!("bad level `{level}`")))?;
                if point_lines.insert(id.to_string(), line_no).is_some() {
                    return Err(err(line_no, format!("critical point `{id}` listed twice")));
                }
                points.push(CriticalPoint::new(id, index, level));
            }
            "hint" => {
                let [a, b] = rest[..] else {
                    return Err(err(line_no, "expected `hint <id> <id>`".into()));
                };
                hints.push((line_no, a.to_string(), b.to_string()));
            }
            "boundary" => {
                if boundary.is_some() {
                    return Err(err(line_no, "boundary given twice".into()));
                }
                let [lower, upper] = rest[..] else {
                    return Err(err(line_no, "expected `boundary lower=<k|empty> upper=<k|empty>`".into()));
                };
                let side = |s: &str, key: &str| {
                    key_value(s, key)
                        .and_then(|v| if v == "empty" { Some(Boundary::Empty) } else { v.parse().ok().map(Boundary::Genus) })
                        .ok_or_else(|| err(line_no, format!("bad boundary `{s}`")))
                };
                boundary = Some((side(lower, "lower")?, side(upper, "upper")?));
            }
            other => return Err(err(line_no, format!("unknown statement `{other}`"))),
        }
    }
    let (lower, upper) = boundary.unwrap_or_default();
    for (line_no, a, b) in &hints {
        MorseProgram::new(points.clone(), lower, upper, [(a.clone(), b.clone())])
            .map_err(|e| err(*line_no, e.to_string()))?;
    }
    MorseProgram::new(points, lower, upper, hints.into_iter().map(|(_, a, b)| (a, b))).map_err(|e| err(1, e.to_string()))
}

fn key_value<'a>(token: &'a str, key: &str) -> Option<&'a str> {
    token.strip_prefix(key)?.strip_prefix('=')
}

/// Reads `theta i: <word>` lines (comments allowed) for a genus-`k` diagram.
pub fn parse_theta(text: &str, origin: &str, k: usize) -> Result<Vec<Word>, MorseError> {
    let err = |line: usize, message: String| MorseError::Parse { origin: origin.to_string(), line, message };
    let mut theta: Vec<Option<Word>> = vec![None; k];
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let body = line.strip_prefix("theta").ok_or_else(|| err(line_no, "expected `theta <i>: <word>`".into()))?;
        let (idx, word) = body.split_once(':').ok_or_else(|| err(line_no, "expected `theta <i>: <word>`".into()))?;
        let i = match idx.trim().parse::<usize>() {
            Ok(i) if (1..=k).contains(&i) => i,
            _ => return Err(err(line_no, format!("index `{}` is not in 1..={k}", idx.trim()))),
        };
        let w = Word::parse(word).map_err(|e| err(line_no, e.to_string()))?;
        if theta[i - 1].replace(w).is_some() {
            return Err(err(line_no, format!("theta {i} given twice")));
        }
    }
    theta
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or_else(|| err(1, format!("theta {} is missing", i + 1))))
        .collect()
}
