//! Word algebra for the fundamental group of a closed oriented genus-k surface.
//!
//! Generators come in two families, `a_i` and `b_i` for `i = 1..=k`, subject to the single
//! relator `a1 b1 A1 B1 a2 b2 A2 B2 ...` (uppercase letters are inverses). Words are kept at
//! two levels that are never mixed in return types:
//!
//! - the group level ([`Word`], [`CyclicWord`]), where only free and cyclic reduction is done;
//! - the homology level ([`HomologyClass`]), the abelianization `Z^{2k}` carrying the
//!   intersection pairing with `a_i . b_i = +1`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("letter {letter} has index {index} but the surface has genus {genus}")]
    IndexOutOfRange {
        letter: String,
        index: usize,
        genus: usize,
    },
    #[error("genus mismatch: {left} vs {right}")]
    GenusMismatch { left: usize, right: usize },
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("genus must be at least 1")]
    ZeroGenus,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("token {position} `{token}`: {reason}")]
pub struct WordParseError {
    pub position: usize,
    pub token: String,
    pub reason: String,
}

/// Generator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
}

impl Family {
    pub fn other(self) -> Family {
        match self {
            Family::A => Family::B,
            Family::B => Family::A,
        }
    }
}

/// One generator or inverse generator, `a_i`, `A_i`, `b_i` or `B_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub family: Family,
    /// 1-based handle index.
    pub index: usize,
    pub inverted: bool,
}

impl Letter {
    pub const fn a(index: usize) -> Self {
        Letter { family: Family::A, index, inverted: false }
    }

    pub const fn b(index: usize) -> Self {
        Letter { family: Family::B, index, inverted: false }
    }

    pub fn inverse(self) -> Self {
        Letter { inverted: !self.inverted, ..self }
    }

    pub fn exponent(self) -> i64 {
        if self.inverted {
            -1
        } else {
            1
        }
    }

    pub fn is_inverse_of(self, other: Letter) -> bool {
        self.family == other.family && self.index == other.index && self.inverted != other.inverted
    }

    // a1 < A1 < b1 < B1 < a2 < ...
    fn sort_key(self) -> (usize, Family, bool) {
        (self.index, self.family, self.inverted)
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match (self.family, self.inverted) {
            (Family::A, false) => 'a',
            (Family::A, true) => 'A',
            (Family::B, false) => 'b',
            (Family::B, true) => 'B',
        };
        write!(f, "{}{}", c, self.index)
    }
}

/// A finite product of letters. Not necessarily reduced.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Parses whitespace-separated tokens `a<i>`, `b<i>`, `A<i>`, `B<i>`.
    ///
    /// Index range is not checked here; use [`SurfaceModel::parse_word`] for that.
    pub fn parse(text: &str) -> Result<Word, WordParseError> {
        let mut letters = Vec::new();
        for (position, token) in text.split_whitespace().enumerate() {
            let err = |reason: &str| WordParseError {
                position: position + 1,
                token: token.to_string(),
                reason: reason.to_string(),
            };
            let mut chars = token.chars();
            let head = chars.next().ok_or_else(|| err("empty token"))?;
            let (family, inverted) = match head {
                'a' => (Family::A, false),
                'A' => (Family::A, true),
                'b' => (Family::B, false),
                'B' => (Family::B, true),
                _ => return Err(err("expected one of a, A, b, B")),
            };
            let digits = chars.as_str();
            if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
                return Err(err("expected a positive decimal index"));
            }
            let index: usize = digits.parse().map_err(|_| err("index too large"))?;
            if index == 0 {
                return Err(err("indices start at 1"));
            }
            letters.push(Letter { family, index, inverted });
        }
        Ok(Word { letters })
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// Concatenation `self` then `other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn power(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        Word { letters }
    }

    pub fn max_index(&self) -> usize {
        self.letters.iter().map(|l| l.index).max().unwrap_or(0)
    }

    /// Free reduction; never fails. [`SurfaceModel::free_reduce`] adds alphabet checks.
    pub fn free_reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match out.last() {
                Some(&top) if top.is_inverse_of(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word { letters: out }
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].is_inverse_of(w[1]))
    }

    /// Rotation starting at letter `k`.
    pub fn rotated(&self, k: usize) -> Word {
        if self.letters.is_empty() {
            return self.clone();
        }
        let k = k % self.letters.len();
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        Word { letters }
    }

    /// Number of occurrences of `letter` and of its inverse.
    pub fn count(&self, family: Family, index: usize) -> (usize, usize) {
        let mut pos = 0;
        let mut neg = 0;
        for l in &self.letters {
            if l.family == family && l.index == index {
                if l.inverted {
                    neg += 1;
                } else {
                    pos += 1;
                }
            }
        }
        (pos, neg)
    }

    pub fn exponent_sum(&self, family: Family, index: usize) -> i64 {
        let (p, n) = self.count(family, index);
        p as i64 - n as i64
    }

    /// Replace each letter by a word; inverse letters get the inverse word.
    pub fn substitute<F>(&self, mut image: F) -> Word
    where
        F: FnMut(Letter) -> Option<Word>,
    {
        let mut letters = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            let base = Letter { inverted: false, ..l };
            match image(base) {
                Some(w) if l.inverted => letters.extend(w.inverse().letters),
                Some(w) => letters.extend(w.letters),
                None => letters.push(l),
            }
        }
        Word { letters }
    }

    pub fn retain<F: FnMut(&Letter) -> bool>(&self, keep: F) -> Word {
        Word { letters: self.letters.iter().copied().filter(keep).collect() }
    }

    pub fn map_letters<F: FnMut(Letter) -> Letter>(&self, f: F) -> Word {
        Word { letters: self.letters.iter().copied().map(f).collect() }
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word { letters: iter.into_iter().collect() }
    }
}

impl From<Letter> for Word {
    fn from(l: Letter) -> Self {
        Word { letters: vec![l] }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Free homotopy class of a closed curve: a freely and cyclically reduced word stored in its
/// lexicographically least rotation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord {
    letters: Vec<Letter>,
}

impl CyclicWord {
    pub fn new(word: &Word) -> Self {
        let mut letters = word.free_reduced().letters;
        // strip inverse pairs across the wrap-around
        let mut start = 0;
        let mut end = letters.len();
        while end - start >= 2 && letters[start].is_inverse_of(letters[end - 1]) {
            start += 1;
            end -= 1;
        }
        letters = letters[start..end].to_vec();
        let n = letters.len();
        if n > 1 {
            let best = (0..n)
                .min_by(|&i, &j| {
                    (0..n)
                        .map(|t| letters[(i + t) % n].cmp(&letters[(j + t) % n]))
                        .find(|o| *o != Ordering::Equal)
                        .unwrap_or(Ordering::Equal)
                })
                .unwrap_or(0);
            letters.rotate_left(best);
        }
        CyclicWord { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn as_word(&self) -> Word {
        Word::new(self.letters.clone())
    }

    /// `Some(letter)` when the class is represented by a single generator or its inverse.
    pub fn single_letter(&self) -> Option<Letter> {
        match self.letters.as_slice() {
            [l] => Some(*l),
            _ => None,
        }
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.as_word().fmt(f)
    }
}

/// Element of `H_1(T(k); Z) = Z^{2k}`: `sum m_i a_i + sum n_i b_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomologyClass {
    pub m: Vec<i64>,
    pub n: Vec<i64>,
}

impl HomologyClass {
    pub fn zero(genus: usize) -> Self {
        HomologyClass { m: vec![0; genus], n: vec![0; genus] }
    }

    pub fn new(m: Vec<i64>, n: Vec<i64>) -> Result<Self, SurfaceError> {
        if m.len() != n.len() {
            return Err(SurfaceError::GenusMismatch { left: m.len(), right: n.len() });
        }
        Ok(HomologyClass { m, n })
    }

    /// Class of `a_i` (1-based).
    pub fn a(genus: usize, i: usize) -> Self {
        let mut c = HomologyClass::zero(genus);
        c.m[i - 1] = 1;
        c
    }

    /// Class of `b_i` (1-based).
    pub fn b(genus: usize, i: usize) -> Self {
        let mut c = HomologyClass::zero(genus);
        c.n[i - 1] = 1;
        c
    }

    /// Coordinates in the order `(m_1..m_k, n_1..n_k)`.
    pub fn from_coords(coords: &[i64]) -> Self {
        let k = coords.len() / 2;
        HomologyClass { m: coords[..k].to_vec(), n: coords[k..2 * k].to_vec() }
    }

    pub fn coords(&self) -> Vec<i64> {
        self.m.iter().chain(self.n.iter()).copied().collect()
    }

    pub fn genus(&self) -> usize {
        self.m.len()
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().chain(self.n.iter()).all(|&x| x == 0)
    }

    pub fn checked_add(&self, other: &HomologyClass) -> Result<HomologyClass, SurfaceError> {
        same_genus(self.genus(), other.genus())?;
        let add = |x: &[i64], y: &[i64]| -> Result<Vec<i64>, SurfaceError> {
            x.iter()
                .zip(y)
                .map(|(a, b)| a.checked_add(*b).ok_or(SurfaceError::Overflow("class sum")))
                .collect()
        };
        Ok(HomologyClass { m: add(&self.m, &other.m)?, n: add(&self.n, &other.n)? })
    }

    pub fn checked_scale(&self, c: i64) -> Result<HomologyClass, SurfaceError> {
        let sc = |x: &[i64]| -> Result<Vec<i64>, SurfaceError> {
            x.iter().map(|a| a.checked_mul(c).ok_or(SurfaceError::Overflow("class scale"))).collect()
        };
        Ok(HomologyClass { m: sc(&self.m)?, n: sc(&self.n)? })
    }

    pub fn neg(&self) -> HomologyClass {
        HomologyClass {
            m: self.m.iter().map(|x| -x).collect(),
            n: self.n.iter().map(|x| -x).collect(),
        }
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={:?} n={:?}", self.m, self.n)
    }
}

fn same_genus(left: usize, right: usize) -> Result<(), SurfaceError> {
    if left == right {
        Ok(())
    } else {
        Err(SurfaceError::GenusMismatch { left, right })
    }
}

/// Which orientation the pairing is computed in. `Reversed` negates every pairing value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Orientation {
    #[default]
    Standard,
    Reversed,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Standard => 1,
            Orientation::Reversed => -1,
        }
    }
}

/// The closed oriented surface `T(k)` together with its canonical generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SurfaceModel {
    genus: usize,
    orientation: Orientation,
}

impl SurfaceModel {
    pub fn new(genus: usize) -> Result<Self, SurfaceError> {
        Self::with_orientation(genus, Orientation::Standard)
    }

    pub fn with_orientation(genus: usize, orientation: Orientation) -> Result<Self, SurfaceError> {
        if genus == 0 {
            return Err(SurfaceError::ZeroGenus);
        }
        Ok(SurfaceModel { genus, orientation })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// `a1, b1, a2, b2, ..., ak, bk`.
    pub fn generators(&self) -> Vec<Letter> {
        (1..=self.genus).flat_map(|i| [Letter::a(i), Letter::b(i)]).collect()
    }

    /// `a1 b1 A1 B1 ... ak bk Ak Bk`.
    pub fn relator(&self) -> Word {
        (1..=self.genus)
            .flat_map(|i| [Letter::a(i), Letter::b(i), Letter::a(i).inverse(), Letter::b(i).inverse()])
            .collect()
    }

    pub fn check_word(&self, w: &Word) -> Result<(), SurfaceError> {
        match w.letters.iter().find(|l| l.index == 0 || l.index > self.genus) {
            Some(l) => Err(SurfaceError::IndexOutOfRange {
                letter: l.to_string(),
                index: l.index,
                genus: self.genus,
            }),
            None => Ok(()),
        }
    }

    pub fn check_class(&self, c: &HomologyClass) -> Result<(), SurfaceError> {
        same_genus(self.genus, c.genus())
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, WordSyntaxOrRange> {
        let w = Word::parse(text).map_err(WordSyntaxOrRange::Syntax)?;
        self.check_word(&w).map_err(WordSyntaxOrRange::Range)?;
        Ok(w)
    }

    pub fn free_reduce(&self, w: &Word) -> Result<Word, SurfaceError> {
        self.check_word(w)?;
        Ok(w.free_reduced())
    }

    pub fn cyclic_reduce(&self, w: &Word) -> Result<CyclicWord, SurfaceError> {
        self.check_word(w)?;
        Ok(CyclicWord::new(w))
    }

    /// Exponent sums: `m_i` for `a_i`, `n_i` for `b_i`.
    pub fn abelianize(&self, w: &Word) -> Result<HomologyClass, SurfaceError> {
        self.check_word(w)?;
        let mut c = HomologyClass::zero(self.genus);
        for l in &w.letters {
            let slot = match l.family {
                Family::A => &mut c.m[l.index - 1],
                Family::B => &mut c.n[l.index - 1],
            };
            *slot += l.exponent();
        }
        Ok(c)
    }

    /// Intersection pairing `u.v = sum_i (m_i(u) n_i(v) - n_i(u) m_i(v))`, negated for the
    /// reversed orientation.
    pub fn pairing(&self, u: &HomologyClass, v: &HomologyClass) -> Result<i64, SurfaceError> {
        self.check_class(u)?;
        self.check_class(v)?;
        Ok(pairing(u, v)? * self.orientation.sign())
    }

    pub fn word_pairing(&self, l: &Word, g: &Word) -> Result<i64, SurfaceError> {
        let u = self.abelianize(l)?;
        let v = self.abelianize(g)?;
        self.pairing(&u, &v)
    }

    /// Coefficients read off through the pairing: `m_i = l.b_i`, `n_i = -l.a_i`.
    pub fn coefficients_via_pairing(&self, l: &Word) -> Result<HomologyClass, SurfaceError> {
        let mut c = HomologyClass::zero(self.genus);
        for i in 1..=self.genus {
            c.m[i - 1] = self.word_pairing(l, &Letter::b(i).into())? * self.orientation.sign();
            c.n[i - 1] = -self.word_pairing(l, &Letter::a(i).into())? * self.orientation.sign();
        }
        Ok(c)
    }

    /// Whether `family_index` occurs as often as its inverse in the freely reduced word.
    pub fn is_homogeneous(&self, g: &Word, family: Family, index: usize) -> Result<bool, SurfaceError> {
        if index == 0 || index > self.genus {
            return Err(SurfaceError::IndexOutOfRange {
                letter: Letter { family, index, inverted: false }.to_string(),
                index,
                genus: self.genus,
            });
        }
        let reduced = self.free_reduce(g)?;
        let (pos, neg) = reduced.count(family, index);
        Ok(pos == neg)
    }

    pub fn in_commutator_subgroup(&self, g: &Word) -> Result<bool, SurfaceError> {
        Ok(self.abelianize(g)?.is_zero())
    }
}

/// Orientation-free pairing on raw classes of equal genus.
pub fn pairing(u: &HomologyClass, v: &HomologyClass) -> Result<i64, SurfaceError> {
    same_genus(u.genus(), v.genus())?;
    let mut total: i64 = 0;
    for i in 0..u.genus() {
        let plus = u.m[i].checked_mul(v.n[i]).ok_or(SurfaceError::Overflow("pairing"))?;
        let minus = u.n[i].checked_mul(v.m[i]).ok_or(SurfaceError::Overflow("pairing"))?;
        let term = plus.checked_sub(minus).ok_or(SurfaceError::Overflow("pairing"))?;
        total = total.checked_add(term).ok_or(SurfaceError::Overflow("pairing"))?;
    }
    Ok(total)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordSyntaxOrRange {
    #[error(transparent)]
    Syntax(WordParseError),
    #[error(transparent)]
    Range(SurfaceError),
}
