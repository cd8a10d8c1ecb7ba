//! Text form of a diagram:
//!
//! ```text
//! # comment
//! genus 2
//! alpha 1: a1
//! alpha 2: a2
//! theta 1: b1
//! theta 2: b2 a1 b1 A1 B1
//! embed 1 1: pair11.arr
//! ```
//!
//! Alpha lines may be omitted altogether, in which case the canonical system is used. Embed paths
//! are relative to the diagram file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::{DiagramError, HeegaardDiagram};
use crate::arrangement::{validate, ArrangementFile, CurveArrangement};
use crate::surface_group::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{origin}:{line}: {message}")]
pub struct ParseError {
    pub origin: String,
    pub line: usize,
    pub message: String,
}

pub fn read_diagram(path: &Path) -> Result<HeegaardDiagram, DiagramError> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseError {
        origin: path.display().to_string(),
        line: 0,
        message: e.to_string(),
    })?;
    parse_diagram(&text, &path.display().to_string(), path.parent())
}

pub fn parse_diagram(text: &str, origin: &str, base: Option<&Path>) -> Result<HeegaardDiagram, DiagramError> {
    let err = |line: usize, message: String| DiagramError::Parse(ParseError { origin: origin.to_string(), line, message });
    let mut genus: Option<(usize, usize)> = None;
    let mut curves: BTreeMap<(&'static str, usize), (usize, Word)> = BTreeMap::new();
    let mut embeds: BTreeMap<(usize, usize), (usize, CurveArrangement)> = BTreeMap::new();

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "genus" => {
                if genus.is_some() {
                    return Err(err(line_no, "genus given twice".into()));
                }
                let k = rest.parse::<usize>().map_err(|_| err(line_no, format!("bad genus `{rest}`")))?;
                genus = Some((k, line_no));
            }
            "alpha" | "theta" => {
                let family = if keyword == "alpha" { "alpha" } else { "theta" };
                let Some((k, _)) = genus else {
                    return Err(err(line_no, "curve before the genus line".into()));
                };
                let (idx, word) = rest.split_once(':').ok_or_else(|| err(line_no, "expected `<index>: <word>`".into()))?;
                let i = parse_index(idx.trim(), k).map_err(|m| err(line_no, m))?;
                let w = Word::parse(word).map_err(|e| err(line_no, e.to_string()))?;
                if let Some(l) = w.letters().iter().find(|l| l.index > k) {
                    return Err(err(line_no, format!("letter {l} is out of range for genus {k}")));
                }
                if curves.insert((family, i), (line_no, w)).is_some() {
                    return Err(err(line_no, format!("{family} {i} given twice")));
                }
            }
            "embed" => {
                let Some((k, _)) = genus else {
                    return Err(err(line_no, "embed before the genus line".into()));
                };
                let (idx, path) = rest.split_once(':').ok_or_else(|| err(line_no, "expected `<i> <j>: <path>`".into()))?;
                let mut parts = idx.split_whitespace();
                let (Some(i), Some(j), None) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(err(line_no, "expected two indices".into()));
                };
                let i = parse_index(i, k).map_err(|m| err(line_no, m))?;
                let j = parse_index(j, k).map_err(|m| err(line_no, m))?;
                let path = path.trim();
                let full = base.map_or_else(|| PathBuf::from(path), |b| b.join(path));
                let arr = load_arrangement(&full).map_err(|m| err(line_no, m))?;
                if embeds.insert((i - 1, j - 1), (line_no, arr)).is_some() {
                    return Err(err(line_no, format!("pair ({i}, {j}) embedded twice")));
                }
            }
            other => return Err(err(line_no, format!("unknown statement `{other}`"))),
        }
    }

    let Some((k, genus_line)) = genus else {
        return Err(err(1, "missing genus line".into()));
    };
    let collect = |family: &'static str| -> Vec<Option<&(usize, Word)>> {
        (1..=k).map(|i| curves.get(&(family, i))).collect()
    };
    let theta = collect("theta");
    if let Some(i) = theta.iter().position(|c| c.is_none()) {
        return Err(err(genus_line, format!("theta {} is missing", i + 1)));
    }
    let alpha = collect("alpha");
    let alpha_words = if alpha.iter().all(|c| c.is_none()) {
        super::canonical_alpha(k)
    } else if let Some(i) = alpha.iter().position(|c| c.is_none()) {
        return Err(err(genus_line, format!("alpha {} is missing", i + 1)));
    } else {
        alpha.iter().map(|c| c.expect("checked").1.clone()).collect()
    };
    let theta_words: Vec<Word> = theta.iter().map(|c| c.expect("checked").1.clone()).collect();
    let embed_lines: BTreeMap<(usize, usize), usize> = embeds.iter().map(|(&p, (l, _))| (p, *l)).collect();
    let embedded = embeds.into_iter().map(|(p, (_, a))| (p, a)).collect();

    HeegaardDiagram::new(k, alpha_words, theta_words, embedded).map_err(|e| {
        let line = match &e {
            DiagramError::NotDisjoint { family, j, .. } => {
                let family: &'static str = if *family == "alpha" { "alpha" } else { "theta" };
                curves.get(&(family, *j)).map_or(genus_line, |c| c.0)
            }
            DiagramError::BadEmbedding { i, j, .. } => {
                embed_lines.get(&(i - 1, j - 1)).copied().unwrap_or(genus_line)
            }
            _ => genus_line,
        };
        err(line, e.to_string())
    })
}

fn parse_index(s: &str, k: usize) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(i) if (1..=k).contains(&i) => Ok(i),
        _ => Err(format!("index `{s}` is not in 1..={k}")),
    }
}

fn load_arrangement(path: &Path) -> Result<CurveArrangement, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file: ArrangementFile = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    validate(&file).map_err(|vs| {
        let list: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
        format!("{}: {}", path.display(), list.join("; "))
    })
}

pub(super) fn write_diagram(d: &HeegaardDiagram, names: &BTreeMap<(usize, usize), String>) -> String {
    let mut out = format!("genus {}\n", d.genus());
    for (family, ws) in [("alpha", d.alpha()), ("theta", d.theta())] {
        for (i, w) in ws.iter().enumerate() {
            let text = w.to_string();
            if text.is_empty() {
                out.push_str(&format!("{family} {}:\n", i + 1));
            } else {
                out.push_str(&format!("{family} {}: {text}\n", i + 1));
            }
        }
    }
    for ((i, j), name) in names {
        out.push_str(&format!("embed {} {}: {name}\n", i + 1, j + 1));
    }
    out
}
