//! Finite group presentations over `b`-letters and bounded Tietze simplification.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::surface_group::{CyclicWord, Family, Letter, Word};

pub const DEFAULT_TIETZE_BUDGET: usize = 64;

/// Generators are `b`-indices; relators are words in those letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<usize>,
    pub relators: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "move", rename_all = "kebab-case")]
pub enum TietzeMove {
    DropTrivial { relator: String },
    DropDuplicate { relator: String },
    Eliminate { generator: String, relator: String, image: String },
}

#[derive(Debug, Clone)]
pub struct Simplified {
    pub presentation: Presentation,
    pub moves: Vec<TietzeMove>,
    /// The move budget ran out before a fixed point was reached.
    pub exhausted: bool,
}

impl Simplified {
    /// No generators left: the presented group is trivial.
    pub fn is_trivial(&self) -> bool {
        self.presentation.generators.is_empty()
    }
}

fn cyclic(w: &Word) -> Word {
    CyclicWord::new(w).as_word()
}

/// Cyclic class of a relator up to inversion, for duplicate detection.
fn relator_key(w: &Word) -> CyclicWord {
    let a = CyclicWord::new(w);
    let b = CyclicWord::new(&w.inverse());
    a.min(b)
}

impl Presentation {
    pub fn new(generators: Vec<usize>, relators: Vec<Word>) -> Self {
        Presentation { generators, relators }
    }

    /// Exponent-sum matrix, one row per relator and one column per generator.
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| self.generators.iter().map(|&g| r.exponent_sum(Family::B, g)).collect())
            .collect()
    }

    /// Applies Tietze moves until none applies or `budget` moves have been spent. Moves are
    /// dropping an empty relator, dropping a relator cyclically equal to another or to its
    /// inverse, and eliminating a generator that occurs exactly once in some relator.
    pub fn simplify(&self, budget: usize) -> Simplified {
        let mut gens = self.generators.clone();
        let mut rels: Vec<Word> = self.relators.iter().map(cyclic).collect();
        let mut moves = Vec::new();
        loop {
            if moves.len() >= budget {
                let done = next_move(&gens, &rels).is_none();
                return Simplified { presentation: Presentation::new(gens, rels), moves, exhausted: !done };
            }
            let Some(step) = next_move(&gens, &rels) else {
                return Simplified { presentation: Presentation::new(gens, rels), moves, exhausted: false };
            };
            match step {
                Step::Drop(i, trivial) => {
                    let r = rels.remove(i).to_string();
                    moves.push(if trivial {
                        TietzeMove::DropTrivial { relator: r }
                    } else {
                        TietzeMove::DropDuplicate { relator: r }
                    });
                }
                Step::Eliminate { relator, generator, image } => {
                    let r = rels.remove(relator);
                    rels = rels
                        .iter()
                        .map(|w| cyclic(&w.substitute(|l| (l == Letter::b(generator)).then(|| image.clone()))))
                        .collect();
                    gens.retain(|&g| g != generator);
                    moves.push(TietzeMove::Eliminate {
                        generator: Letter::b(generator).to_string(),
                        relator: r.to_string(),
                        image: image.to_string(),
                    });
                }
            }
        }
    }
}

enum Step {
    Drop(usize, bool),
    Eliminate { relator: usize, generator: usize, image: Word },
}

fn next_move(gens: &[usize], rels: &[Word]) -> Option<Step> {
    if let Some(i) = rels.iter().position(|r| r.is_empty()) {
        return Some(Step::Drop(i, true));
    }
    let mut seen = BTreeSet::new();
    for (i, r) in rels.iter().enumerate() {
        if !seen.insert(relator_key(r)) {
            return Some(Step::Drop(i, false));
        }
    }
    // shortest relator first keeps images small
    let mut order: Vec<usize> = (0..rels.len()).collect();
    order.sort_by_key(|&i| rels[i].len());
    for i in order {
        let r = &rels[i];
        for &g in gens {
            if let Some(image) = solve_for(r, g) {
                return Some(Step::Eliminate { relator: i, generator: g, image });
            }
        }
    }
    None
}

/// If `b_g` occurs exactly once in the cyclic word `r`, the word that `b_g` equals in the
/// quotient by `r`.
pub fn solve_for(r: &Word, g: usize) -> Option<Word> {
    let pos: Vec<usize> =
        r.letters().iter().enumerate().filter(|(_, l)| l.family == Family::B && l.index == g).map(|(i, _)| i).collect();
    let [p] = pos[..] else { return None };
    let rotated = r.rotated(p);
    let head = rotated.letters()[0];
    let rest: Word = rotated.letters()[1..].iter().copied().collect();
    // b w = 1 gives b = w^-1, and B w = 1 gives b = w
    Some(if head.inverted { rest.free_reduced() } else { rest.inverse().free_reduced() })
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|&g| Letter::b(g).to_string()).collect();
        let rels: Vec<String> =
            self.relators.iter().map(|r| if r.is_empty() { "1".to_string() } else { r.to_string() }).collect();
        let side = |v: Vec<String>| if v.is_empty() { String::new() } else { format!(" {} ", v.join(", ")) };
        write!(f, "<{}|{}>", side(gens), side(rels))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn simply_eliminates_standard() {
        let p = Presentation::new(vec![1, 2, 3], vec![w("b1"), w("b2"), w("b3")]);
        let s = p.simplify(DEFAULT_TIETZE_BUDGET);
        assert!(s.is_trivial());
        assert!(s.presentation.relators.is_empty());
        assert_eq!(s.moves.len(), 3);
    }

    #[test]
    fn lens_is_a_fixed_point() {
        let p = Presentation::new(vec![1], vec![w("b1 b1 b1")]);
        let s = p.simplify(DEFAULT_TIETZE_BUDGET);
        assert!(!s.is_trivial());
        assert!(!s.exhausted);
        assert!(s.moves.is_empty());
        assert_eq!(s.presentation.to_string(), "< b1 | b1 b1 b1 >");
        assert_eq!(Presentation::new(vec![], vec![]).to_string(), "<|>");
    }

    #[test]
    fn substitution_chains() {
        // b2 = b1 b1 from the first relator, then b1^5 remains
        let p = Presentation::new(vec![1, 2], vec![w("B2 b1 b1"), w("b2 b2 b1")]);
        let s = p.simplify(DEFAULT_TIETZE_BUDGET);
        assert_eq!(s.presentation.generators, vec![1]);
        assert_eq!(s.presentation.relators, vec![w("b1 b1 b1 b1 b1")]);
    }

    #[test]
    fn solve_for_both_exponents() {
        assert_eq!(solve_for(&w("b1 b2 b3"), 2), Some(w("B1 B3")));
        assert_eq!(solve_for(&w("b1 B2 b3"), 2), Some(w("b3 b1")));
        assert_eq!(solve_for(&w("b2 b2"), 2), None);
    }

    #[test]
    fn duplicates_and_inverses_dropped() {
        let p = Presentation::new(vec![1], vec![w("b1 b1"), w("B1 B1"), w("")]);
        let s = p.simplify(DEFAULT_TIETZE_BUDGET);
        assert_eq!(s.presentation.relators.len(), 1);
        assert_eq!(s.moves.len(), 2);
    }

    #[test]
    fn budget_is_respected() {
        let p = Presentation::new(vec![1, 2, 3], vec![w("b1"), w("b2"), w("b3")]);
        let s = p.simplify(2);
        assert_eq!(s.moves.len(), 2);
        assert!(s.exhausted);
        assert_eq!(s.presentation.generators.len(), 1);
    }

    #[test]
    fn exponent_matrix_rows() {
        let p = Presentation::new(vec![1, 2], vec![w("b1 b2 B1 b2"), w("b1 b1 b1")]);
        assert_eq!(p.exponent_matrix(), vec![vec![0, 2], vec![3, 0]]);
    }
}
