//! Heegaard diagrams: a genus-`k` surface with an `alpha` system (the 1-handle belt circles) and
//! a `theta` system (the 2-handle attaching circles), both given as surface-group words.
//!
//! Homology uses the pairing matrix `M[i][j] = alpha_j . theta_i`, which for canonical
//! `alpha_j = a_j` is the exponent of `b_j` in `theta_i`. With this sign the standard diagram has
//! `M = I` and `theta = b^p` gives `M = [p]`.

mod text;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::arrangement::{canonical_torus_arrangement, CurveArrangement, FreeLoops, Owner, RemovalStep};
use crate::basis_change::SignedPermutation;
use crate::matrix::{IntMatrix, MatrixError};
use crate::presentation::{solve_for, Presentation};
use crate::surface_group::{CyclicWord, Family, HomologyClass, Letter, SurfaceError, SurfaceModel, Word};

pub use text::{parse_diagram, read_diagram, ParseError};

pub const PAIRING_CONVENTION: &str = "neg_theta_dot_alpha";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("expected {expected} {family} curves, found {found}")]
    CountMismatch { family: &'static str, expected: usize, found: usize },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("{family} {i} and {family} {j} have pairing {pairing}, expected 0")]
    NotDisjoint { family: &'static str, i: usize, j: usize, pairing: i64 },
    #[error("alpha system does not span a Lagrangian summand: {0}")]
    NotHalfSymplectic(String),
    #[error("this operation needs the canonical alpha system a_1..a_k")]
    NonCanonicalAlpha,
    #[error("embedded pair (theta {i}, alpha {j}): {reason}")]
    BadEmbedding { i: usize, j: usize, reason: String },
    #[error("no embedded arrangement for pair (theta {i}, alpha {j})")]
    MissingEmbedding { i: usize, j: usize },
    #[error("row {row} is not certified for cancellation")]
    NotCertified { row: usize },
    #[error("destabilization stuck: {0}")]
    Stuck(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeegaardDiagram {
    genus: usize,
    alpha: Vec<Word>,
    theta: Vec<Word>,
    embedded: BTreeMap<(usize, usize), CurveArrangement>,
}

/// `w` with every `a`-letter deleted, freely reduced: the image of `w` in the handlebody group
/// where each `a_i` bounds a disc.
pub fn alpha_deletion_projection(w: &Word) -> Word {
    w.retain(|l| l.family == Family::B).free_reduced()
}

fn model(genus: usize) -> Option<SurfaceModel> {
    SurfaceModel::new(genus).ok()
}

impl HeegaardDiagram {
    /// Checks counts, letter ranges, homological disjointness within each system and coherence
    /// of embedded arrangements. Indices in `embedded` are 0-based `(theta, alpha)`.
    pub fn new(
        genus: usize,
        alpha: Vec<Word>,
        theta: Vec<Word>,
        embedded: BTreeMap<(usize, usize), CurveArrangement>,
    ) -> Result<Self, DiagramError> {
        for (family, ws) in [("alpha", &alpha), ("theta", &theta)] {
            if ws.len() != genus {
                return Err(DiagramError::CountMismatch { family, expected: genus, found: ws.len() });
            }
        }
        let d = HeegaardDiagram { genus, alpha, theta, embedded };
        let Some(s) = model(genus) else {
            if let Some(&(i, j)) = d.embedded.keys().next() {
                return Err(DiagramError::BadEmbedding { i: i + 1, j: j + 1, reason: "genus-0 diagram".into() });
            }
            return Ok(d);
        };
        for (family, ws) in [("alpha", &d.alpha), ("theta", &d.theta)] {
            for w in ws {
                s.check_word(w)?;
            }
            for i in 0..genus {
                for j in i + 1..genus {
                    let pairing = s.word_pairing(&ws[i], &ws[j])?;
                    if pairing != 0 {
                        return Err(DiagramError::NotDisjoint { family, i: i + 1, j: j + 1, pairing });
                    }
                }
            }
        }
        for (&(i, j), arr) in &d.embedded {
            let bad = |reason: String| DiagramError::BadEmbedding { i: i + 1, j: j + 1, reason };
            if i >= genus || j >= genus {
                return Err(bad("index out of range".into()));
            }
            if arr.genus() > genus {
                return Err(bad(format!("arrangement genus {} exceeds diagram genus {genus}", arr.genus())));
            }
            for owner in [Owner::M, Owner::Mp] {
                if arr.component_count(owner) != 1 {
                    return Err(bad(format!("{owner:?} family has {} components, expected 1", arr.component_count(owner))));
                }
            }
            let words = s.word_pairing(&d.theta[i], &d.alpha[j])?;
            if arr.algebraic_intersection() != words {
                return Err(bad(format!(
                    "signed crossing sum {} differs from word pairing theta.alpha = {words}",
                    arr.algebraic_intersection()
                )));
            }
        }
        Ok(d)
    }

    /// `alpha_i = a_i`, `theta_i = b_i`: the genus-`k` splitting of the 3-sphere.
    pub fn standard(genus: usize) -> Self {
        let theta = (1..=genus).map(|i| Word::from(Letter::b(i))).collect();
        HeegaardDiagram::new(genus, canonical_alpha(genus), theta, BTreeMap::new()).expect("standard diagram is valid")
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn alpha(&self) -> &[Word] {
        &self.alpha
    }

    pub fn theta(&self) -> &[Word] {
        &self.theta
    }

    pub fn embedded(&self) -> &BTreeMap<(usize, usize), CurveArrangement> {
        &self.embedded
    }

    pub fn has_canonical_alpha(&self) -> bool {
        self.alpha.iter().enumerate().all(|(j, w)| CyclicWord::new(w).single_letter() == Some(Letter::a(j + 1)))
    }

    fn require_canonical(&self) -> Result<(), DiagramError> {
        if self.has_canonical_alpha() {
            Ok(())
        } else {
            Err(DiagramError::NonCanonicalAlpha)
        }
    }

    /// Handlebody generators `b_1..b_k` with one relator per theta curve.
    pub fn pi1_presentation(&self) -> Result<Presentation, DiagramError> {
        self.require_canonical()?;
        Ok(Presentation::new((1..=self.genus).collect(), self.theta.iter().map(alpha_deletion_projection).collect()))
    }

    fn classes(&self, ws: &[Word]) -> Result<Vec<HomologyClass>, DiagramError> {
        let Some(s) = model(self.genus) else { return Ok(vec![]) };
        ws.iter().map(|w| s.abelianize(w).map_err(DiagramError::from)).collect()
    }

    /// `M[i][j] = alpha_j . theta_i`. Works for any alpha system spanning a Lagrangian summand.
    pub fn h1_matrix(&self) -> Result<PairingMatrix, DiagramError> {
        let k = self.genus;
        let alpha = self.classes(&self.alpha)?;
        let theta = self.classes(&self.theta)?;
        if k > 0 {
            let coords = IntMatrix::from_fn(k, 2 * k, |i, c| alpha[i].coords()[c]);
            let diag = coords.smith_diagonal()?;
            if diag.iter().any(|&x| x != 1) {
                return Err(DiagramError::NotHalfSymplectic(format!("invariant factors {diag:?}")));
            }
        }
        let s = model(k);
        let m = IntMatrix::try_from_fn(k, k, |i, j| {
            s.as_ref().expect("k > 0 inside the loop").pairing(&alpha[j], &theta[i])
        })?;
        Ok(PairingMatrix { matrix: m })
    }

    pub fn h1_group(&self) -> Result<H1Group, DiagramError> {
        Ok(H1Group::from_matrix(&self.h1_matrix()?.matrix)?)
    }

    /// Present iff the pairing matrix is a signed permutation matrix.
    pub fn cancellation_certificate(&self) -> Result<Option<CancellationCertificate>, DiagramError> {
        let m = self.h1_matrix()?;
        Ok(SignedPermutation::from_matrix(&m.matrix).map(|p| CancellationCertificate {
            good_rows: vec![false; p.sigma.len()],
            permutation: p,
            geometric: false,
        }))
    }

    /// Arrangement for pair `(i, j)`: the embedded one, or a straight one when `theta_i` is a
    /// single letter and `alpha_j` is canonical.
    pub fn pair_arrangement(&self, i: usize, j: usize) -> Result<(CurveArrangement, bool), DiagramError> {
        if let Some(a) = self.embedded.get(&(i, j)) {
            return Ok((a.clone(), false));
        }
        let missing = DiagramError::MissingEmbedding { i: i + 1, j: j + 1 };
        let alpha_ok = CyclicWord::new(&self.alpha[j]).single_letter() == Some(Letter::a(j + 1));
        let Some(l) = CyclicWord::new(&self.theta[i]).single_letter().filter(|_| alpha_ok) else {
            return Err(missing);
        };
        if l.family == Family::B && l.index == j + 1 {
            // torus coordinates (a, b) of the handle: theta = +-b, alpha = a
            let arr = canonical_torus_arrangement((0, l.exponent()), (1, 0)).expect("straight lines are valid");
            Ok((arr, true))
        } else {
            let arr = CurveArrangement::from_parts(0, vec![], vec![], FreeLoops { m: 1, mp: 1 })
                .expect("disjoint loops are valid");
            Ok((arr, true))
        }
    }

    /// Reduces every pair to minimal position and marks the certificate rows whose curve has
    /// exactly one crossing with its partner and none with the other alphas.
    pub fn geometric_disjointness(
        &self,
        cert: &CancellationCertificate,
    ) -> Result<(CancellationCertificate, Vec<PairDegree>), DiagramError> {
        let s = model(self.genus);
        let mut pairs = Vec::new();
        let mut good_rows = vec![true; self.genus];
        for i in 0..self.genus {
            for j in 0..self.genus {
                let (arr, synthesized) = self.pair_arrangement(i, j)?;
                let red = arr.minimal_position();
                let pairing = s.as_ref().expect("genus > 0").word_pairing(&self.theta[i], &self.alpha[j])?;
                let degree = red.degree();
                let want = usize::from(cert.permutation.sigma[i] == j);
                if degree != want {
                    good_rows[i] = false;
                }
                pairs.push(PairDegree {
                    theta: i + 1,
                    alpha: j + 1,
                    pairing,
                    crossings: arr.crossing_count(),
                    degree,
                    synthesized,
                    trace: red.trace,
                });
            }
        }
        let geometric = good_rows.iter().all(|&g| g);
        Ok((CancellationCertificate { permutation: cert.permutation.clone(), geometric, good_rows }, pairs))
    }

    /// Cancels `theta_i` against `alpha_sigma(i)`; `i` is 0-based.
    pub fn destabilize(
        &self,
        i: usize,
        cert: &CancellationCertificate,
        max_tietze: usize,
    ) -> Result<Destabilization, DiagramError> {
        if !cert.good_rows.get(i).copied().unwrap_or(false) {
            return Err(DiagramError::NotCertified { row: i + 1 });
        }
        self.require_canonical()?;
        let j = cert.permutation.sigma[i];
        let h = j + 1;
        let r = CyclicWord::new(&alpha_deletion_projection(&self.theta[i])).as_word();
        let (image, tietze_moves) = match solve_for(&r, h) {
            Some(w) => (w, 0),
            None => self.solve_with_other_relators(i, &r, h, max_tietze)?,
        };
        let k = self.genus - 1;
        let renumber = |l: Letter| Letter { index: if l.index > h { l.index - 1 } else { l.index }, ..l };
        let theta: Vec<Word> = (0..self.genus)
            .filter(|&l| l != i)
            .map(|l| {
                self.theta[l]
                    .retain(|x| !(x.family == Family::A && x.index == h))
                    .substitute(|x| (x == Letter::b(h)).then(|| image.clone()))
                    .free_reduced()
                    .map_letters(renumber)
            })
            .collect();
        let embedded = self
            .embedded
            .iter()
            .filter(|(&(l, m), a)| l != i && m != j && a.genus() <= k)
            .map(|(&(l, m), a)| ((l - usize::from(l > i), m - usize::from(m > j)), a.clone()))
            .collect();
        let diagram = HeegaardDiagram::new(k, canonical_alpha(k), theta, embedded)
            .map_err(|e| DiagramError::Stuck(format!("rewritten diagram is invalid: {e}")))?;
        Ok(Destabilization {
            diagram,
            theta: i + 1,
            alpha: h,
            sign: cert.permutation.signs[i],
            substitution: format!("{} -> {}", Letter::b(h), if image.is_empty() { "1".into() } else { image.to_string() }),
            tietze_moves,
        })
    }

    /// Rewrites `r` with generators solved from the other relators until `b_h` occurs once.
    fn solve_with_other_relators(
        &self,
        i: usize,
        r: &Word,
        h: usize,
        budget: usize,
    ) -> Result<(Word, usize), DiagramError> {
        let others: Vec<Word> = (0..self.genus)
            .filter(|&l| l != i)
            .map(|l| CyclicWord::new(&alpha_deletion_projection(&self.theta[l])).as_word())
            .collect();
        let mut r = r.clone();
        for moves in 1..=budget {
            let step = others.iter().find_map(|o| {
                (1..=self.genus).filter(|&g| g != h && r.count(Family::B, g) != (0, 0)).find_map(|g| solve_for(o, g).map(|w| (g, w)))
            });
            let Some((g, w)) = step else { break };
            r = CyclicWord::new(&r.substitute(|x| (x == Letter::b(g)).then(|| w.clone()))).as_word();
            if let Some(img) = solve_for(&r, h) {
                return Ok((img, moves));
            }
        }
        let (pos, neg) = r.count(Family::B, h);
        Err(DiagramError::Stuck(format!(
            "{} occurs {} times in the projected relator {r}",
            Letter::b(h),
            pos + neg
        )))
    }

    /// Certificate, geometric check and destabilization, repeated until genus 0 or stuck.
    pub fn full_reduction(&self, max_tietze: usize) -> ReductionReport {
        let initial_h1 = self.h1_group().ok();
        let mut current = self.clone();
        let mut steps = Vec::new();
        let stuck = loop {
            if current.genus == 0 {
                break None;
            }
            let matrix = match current.h1_matrix() {
                Ok(m) => m,
                Err(e) => break Some(StuckInfo::new(e.to_string(), None, &current)),
            };
            let cert = match current.cancellation_certificate() {
                Ok(Some(c)) => c,
                Ok(None) => break Some(StuckInfo::new("no certificate found".into(), Some(matrix), &current)),
                Err(e) => break Some(StuckInfo::new(e.to_string(), Some(matrix), &current)),
            };
            let (cert, pairs) = match current.geometric_disjointness(&cert) {
                Ok(x) => x,
                Err(e) => break Some(StuckInfo::new(e.to_string(), Some(matrix), &current)),
            };
            let Some(row) = cert.good_rows.iter().position(|&g| g) else {
                break Some(StuckInfo::new("no row passes the geometric check".into(), Some(matrix), &current));
            };
            match current.destabilize(row, &cert, max_tietze) {
                Ok(d) => {
                    let h1 = d.diagram.h1_group().ok();
                    steps.push(ReductionStep {
                        step: steps.len() + 1,
                        genus_before: current.genus,
                        theta: d.theta,
                        alpha: d.alpha,
                        sign: d.sign,
                        substitution: d.substitution,
                        tietze_moves: d.tietze_moves,
                        pairs: pairs.into_iter().map(|p| p.summary()).collect(),
                        h1_after: h1.map(|g| g.factors),
                    });
                    current = d.diagram;
                }
                Err(e) => break Some(StuckInfo::new(e.to_string(), Some(matrix), &current)),
            }
        };
        ReductionReport {
            verdict: if stuck.is_none() { Verdict::TrivialDiagram } else { Verdict::Stuck },
            initial_genus: self.genus,
            final_genus: current.genus,
            h1_initial: initial_h1.map(|g| g.factors),
            steps,
            stuck,
            final_diagram: current,
        }
    }

    pub fn to_text(&self) -> String {
        text::write_diagram(self, &BTreeMap::new())
    }

    /// Text with `embed` lines naming a file for each embedded pair.
    pub fn to_text_with_embeds(&self, names: &BTreeMap<(usize, usize), String>) -> String {
        text::write_diagram(self, names)
    }
}

fn canonical_alpha(k: usize) -> Vec<Word> {
    (1..=k).map(|i| Word::from(Letter::a(i))).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairingMatrix {
    pub matrix: IntMatrix,
}

impl PairingMatrix {
    pub fn convention(&self) -> &'static str {
        PAIRING_CONVENTION
    }
}

/// Finitely generated abelian group from a Smith normal form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct H1Group {
    /// Full Smith diagonal, padded with zeros for missing rows.
    pub smith: Vec<i64>,
    /// Non-unit invariant factors; `0` stands for a free summand `Z`.
    pub factors: Vec<i64>,
}

impl H1Group {
    pub fn from_matrix(m: &IntMatrix) -> Result<Self, MatrixError> {
        let mut smith = m.smith_diagonal()?;
        smith.resize(m.cols(), 0);
        let factors = smith.iter().copied().filter(|&d| d != 1).collect();
        Ok(H1Group { smith, factors })
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }
}

impl fmt::Display for H1Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> =
            self.factors.iter().map(|&d| if d == 0 { "Z".to_string() } else { format!("Z/{d}") }).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CancellationCertificate {
    pub permutation: SignedPermutation,
    /// Every row passed the embedded check.
    pub geometric: bool,
    pub good_rows: Vec<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairDegree {
    pub theta: usize,
    pub alpha: usize,
    pub pairing: i64,
    pub crossings: usize,
    pub degree: usize,
    pub synthesized: bool,
    pub trace: Vec<RemovalStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairSummary {
    pub theta: usize,
    pub alpha: usize,
    pub pairing: i64,
    pub crossings: usize,
    pub degree: usize,
}

impl PairDegree {
    pub fn summary(&self) -> PairSummary {
        PairSummary {
            theta: self.theta,
            alpha: self.alpha,
            pairing: self.pairing,
            crossings: self.crossings,
            degree: self.degree,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Destabilization {
    pub diagram: HeegaardDiagram,
    pub theta: usize,
    pub alpha: usize,
    pub sign: i64,
    pub substitution: String,
    pub tietze_moves: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    TrivialDiagram,
    Stuck,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub step: usize,
    pub genus_before: usize,
    pub theta: usize,
    pub alpha: usize,
    pub sign: i64,
    pub substitution: String,
    pub tietze_moves: usize,
    pub pairs: Vec<PairSummary>,
    pub h1_after: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StuckInfo {
    pub reason: String,
    pub genus: usize,
    pub pairing_matrix: Option<IntMatrix>,
    pub h1: Option<Vec<i64>>,
}

impl StuckInfo {
    fn new(reason: String, matrix: Option<PairingMatrix>, d: &HeegaardDiagram) -> Self {
        StuckInfo {
            reason,
            genus: d.genus,
            h1: d.h1_group().ok().map(|g| g.factors),
            pairing_matrix: matrix.map(|m| m.matrix),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionReport {
    pub verdict: Verdict,
    pub initial_genus: usize,
    pub final_genus: usize,
    pub h1_initial: Option<Vec<i64>>,
    pub steps: Vec<ReductionStep>,
    pub stuck: Option<StuckInfo>,
    #[serde(skip)]
    pub final_diagram: HeegaardDiagram,
}
