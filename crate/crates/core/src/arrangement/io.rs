use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Arc, CurveArrangement, End, FreeLoops, Invariant, Owner, Port, Violation};

/// Arrangement as it appears on disk. Ids are arbitrary non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementFile {
    pub genus: usize,
    pub crossings: Vec<RawCrossing>,
    pub arcs: Vec<RawArc>,
    #[serde(default)]
    pub free_loops: FreeLoops,
    /// Complementary regions that are not discs. Faces are numbered in trace order; any face
    /// not listed bounds a disc of its own.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub regions: Vec<RawRegion>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRegion {
    pub euler: i64,
    pub faces: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCrossing {
    pub id: u64,
    pub sign: i64,
    pub cyclic_ends: Vec<ArcEndRef>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcEndRef {
    pub arc: u64,
    pub end: End,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawArc {
    pub id: u64,
    pub owner: Owner,
    pub from: (u64, u64),
    pub to: (u64, u64),
}

pub(super) fn to_file(arr: &CurveArrangement) -> ArrangementFile {
    let crossings = (0..arr.crossing_count())
        .map(|v| RawCrossing {
            id: v as u64,
            sign: i64::from(arr.signs[v]),
            cyclic_ends: arr.ends[v].iter().map(|e| ArcEndRef { arc: e.arc as u64, end: e.end }).collect(),
        })
        .collect();
    let arcs = arr
        .arcs
        .iter()
        .enumerate()
        .map(|(i, a)| RawArc {
            id: i as u64,
            owner: a.owner,
            from: (a.from.vertex as u64, a.from.slot as u64),
            to: (a.to.vertex as u64, a.to.slot as u64),
        })
        .collect();
    let regions = arr
        .regions()
        .into_iter()
        .filter(|r| r.euler != 1)
        .map(|r| RawRegion { euler: r.euler, faces: r.faces })
        .collect();
    ArrangementFile { genus: arr.genus, crossings, arcs, free_loops: arr.free_loops, regions }
}

pub(super) fn from_file(file: &ArrangementFile) -> Result<CurveArrangement, Vec<Violation>> {
    let mut violations = Vec::new();
    let mut vertex_index = BTreeMap::new();
    for (i, c) in file.crossings.iter().enumerate() {
        if vertex_index.insert(c.id, i).is_some() {
            violations.push(Violation::new(Invariant::DuplicateId, format!("crossing {}", c.id), "id used twice"));
        }
    }
    let mut arc_index = BTreeMap::new();
    for (i, a) in file.arcs.iter().enumerate() {
        if arc_index.insert(a.id, i).is_some() {
            violations.push(Violation::new(Invariant::DuplicateId, format!("arc {}", a.id), "id used twice"));
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }

    let mut arcs = Vec::with_capacity(file.arcs.len());
    for a in &file.arcs {
        let mut port = |(v, s): (u64, u64), which: &str| -> Option<Port> {
            let Some(&vertex) = vertex_index.get(&v) else {
                violations.push(Violation::new(
                    Invariant::UnknownReference,
                    format!("arc {}", a.id),
                    format!("{which} refers to unknown crossing {v}"),
                ));
                return None;
            };
            if s >= 4 {
                violations.push(Violation::new(
                    Invariant::SlotOutOfRange,
                    format!("arc {}", a.id),
                    format!("{which} slot {s} is not in 0..4"),
                ));
                return None;
            }
            Some(Port::new(vertex, s as usize))
        };
        let from = port(a.from, "from");
        let to = port(a.to, "to");
        if let (Some(from), Some(to)) = (from, to) {
            arcs.push(Arc { owner: a.owner, from, to });
        }
    }

    for c in &file.crossings {
        let element = format!("crossing {}", c.id);
        if c.cyclic_ends.len() != 4 {
            violations.push(Violation::new(
                Invariant::MissingEnd,
                element.clone(),
                format!("{} cyclic ends listed, expected 4", c.cyclic_ends.len()),
            ));
            continue;
        }
        for (slot, e) in c.cyclic_ends.iter().enumerate() {
            let Some(&ai) = arc_index.get(&e.arc) else {
                violations.push(Violation::new(
                    Invariant::UnknownReference,
                    element.clone(),
                    format!("slot {slot} refers to unknown arc {}", e.arc),
                ));
                continue;
            };
            let raw = &file.arcs[ai];
            let claimed = match e.end {
                End::From => raw.from,
                End::To => raw.to,
            };
            if claimed != (c.id, slot as u64) {
                violations.push(Violation::new(
                    Invariant::SlotConflict,
                    element.clone(),
                    format!(
                        "slot {slot} lists arc {} {:?}, but that end is at ({}, {})",
                        e.arc, e.end, claimed.0, claimed.1
                    ),
                ));
            }
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }

    let mut signs = Vec::with_capacity(file.crossings.len());
    for c in &file.crossings {
        match c.sign {
            1 => signs.push(1),
            -1 => signs.push(-1),
            s => {
                violations.push(Violation::new(Invariant::BadSign, format!("crossing {}", c.id), format!("sign {s}")));
                signs.push(0);
            }
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }
    let regions: Vec<(i64, Vec<usize>)> = file.regions.iter().map(|r| (r.euler, r.faces.clone())).collect();
    CurveArrangement::from_parts_with_regions(file.genus, signs, arcs, file.free_loops, &regions).map_err(|e| match e {
        super::ArrangementError::Invalid(v) => v
            .into_iter()
            .map(|mut v| {
                rename_element(&mut v, file);
                v
            })
            .collect(),
        other => vec![Violation::new(Invariant::UnknownReference, "arrangement", other.to_string())],
    })
}

/// Internal indices in violation messages are translated back to file ids.
fn rename_element(v: &mut Violation, file: &ArrangementFile) {
    let mut parts = v.element.splitn(2, ' ');
    let (Some(kind), Some(idx)) = (parts.next(), parts.next()) else { return };
    let Ok(idx) = idx.parse::<usize>() else { return };
    let id = match kind {
        "crossing" => file.crossings.get(idx).map(|c| c.id),
        "arc" => file.arcs.get(idx).map(|a| a.id),
        _ => None,
    };
    if let Some(id) = id {
        v.element = format!("{kind} {id}");
    }
}
