//! Two transverse families of disjoint simple closed curves on a closed oriented surface,
//! stored as a combinatorial map.
//!
//! Every crossing is a 4-valent vertex whose incident arc-ends are listed counterclockwise in
//! slots `0..4`. Transversality means the slots alternate between the two owners `M` and `M'`,
//! and each owner enters and leaves through opposite slots. The crossing sign is the
//! orientation of the frame (tangent of `M`, tangent of `M'`); with slots counterclockwise this
//! is `+1` exactly when the `M'`-in slot directly follows the `M`-in slot.
//!
//! Faces are the orbits of "arrive at a vertex through slot `s`, leave through slot `s + 1`",
//! which keeps the face on the right of the walker. Each traced face is a boundary cycle of a
//! complementary region, and every region carries its Euler characteristic. Input files are
//! cellular by default (every face its own disc region); bigon removal may leave annuli or other
//! non-disc regions, which are tracked so that only genuine disc 2-gons count as bigons. The
//! surface check is `V - E + sum(chi(region)) = 2 - 2k`. Crossing-free components are kept as
//! counts in `free_loops` and do not take part in the map.

mod build;
mod io;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use build::{canonical_torus_arrangement, geometric_intersection_torus, random_filling, random_finger_moves};
pub use io::{ArcEndRef, ArrangementFile, RawArc, RawCrossing, RawRegion};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Owner {
    M,
    Mp,
}

impl Owner {
    pub fn other(self) -> Owner {
        match self {
            Owner::M => Owner::Mp,
            Owner::Mp => Owner::M,
        }
    }
}

/// Which end of an arc sits in a slot. `From` is the tail (the curve leaves the vertex).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    From,
    To,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Port {
    pub vertex: usize,
    pub slot: usize,
}

impl Port {
    pub const fn new(vertex: usize, slot: usize) -> Self {
        Port { vertex, slot }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arc {
    pub owner: Owner,
    pub from: Port,
    pub to: Port,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArcEnd {
    pub arc: usize,
    pub end: End,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeLoops {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "Mp")]
    pub mp: usize,
}

impl FreeLoops {
    pub fn get(&self, owner: Owner) -> usize {
        match owner {
            Owner::M => self.m,
            Owner::Mp => self.mp,
        }
    }

    fn bump(&mut self, owner: Owner) {
        match owner {
            Owner::M => self.m += 1,
            Owner::Mp => self.mp += 1,
        }
    }
}

/// A traversal of an arc, forwards (along the curve orientation) or backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dart {
    pub arc: usize,
    pub forward: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Face {
    pub darts: Vec<Dart>,
}

/// A disc face bounded by one arc of each owner, with opposite-sign corners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Bigon {
    pub face: usize,
    pub m_arc: usize,
    pub mp_arc: usize,
    pub corners: (usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Invariant {
    DuplicateId,
    UnknownReference,
    SlotOutOfRange,
    SlotConflict,
    MissingEnd,
    BadSign,
    Transversality,
    SignConsistency,
    ClosedCurves,
    Cellularity,
    Regions,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub invariant: Invariant,
    pub element: String,
    pub detail: String,
}

impl Violation {
    fn new(invariant: Invariant, element: impl Into<String>, detail: impl Into<String>) -> Self {
        Violation { invariant, element: element.into(), detail: detail.into() }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = serde_json::to_value(self.invariant).ok();
        let name = name.as_ref().and_then(|v| v.as_str()).unwrap_or("?");
        write!(f, "{name}: {} ({})", self.element, self.detail)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("invalid arrangement: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("bigon on face {face} is not present in this arrangement")]
    StaleBigon { face: usize },
    #[error("finger move not possible: {0}")]
    FingerMove(String),
}

/// A valid two-family arrangement with its complementary regions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveArrangement {
    genus: usize,
    signs: Vec<i8>,
    arcs: Vec<Arc>,
    ends: Vec<[ArcEnd; 4]>,
    free_loops: FreeLoops,
    /// Region on the right of each dart, numbered by first appearance in face-trace order.
    dart_region: Vec<usize>,
    region_euler: Vec<i64>,
}

/// A connected component of the surface minus the curves that meet something.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Region {
    pub euler: i64,
    pub faces: Vec<usize>,
}

enum RegionInput<'a> {
    Discs,
    /// Non-disc regions as `(euler, face indices)`; unlisted faces are discs.
    Listed(&'a [(i64, Vec<usize>)]),
    /// A region key for each dart, with the Euler characteristic per key.
    Inherited(&'a dyn Fn(Dart) -> usize, &'a [i64]),
}

fn dart_index(d: Dart) -> usize {
    2 * d.arc + usize::from(!d.forward)
}

/// Union-find over regions, carrying Euler characteristics at the roots.
struct RegionMerge {
    parent: Vec<usize>,
    euler: Vec<i64>,
}

impl RegionMerge {
    fn find(&mut self, mut r: usize) -> usize {
        while self.parent[r] != r {
            self.parent[r] = self.parent[self.parent[r]];
            r = self.parent[r];
        }
        r
    }

    /// Glues `a` and `b` along a piece of Euler characteristic `delta`.
    fn glue(&mut self, a: usize, b: usize, delta: i64) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            self.euler[ra] += delta;
        } else {
            self.parent[rb] = ra;
            self.euler[ra] += self.euler[rb] + delta;
        }
    }
}

/// Sign of a crossing from the slots of the two incoming ends.
pub fn sign_from_slots(m_in: usize, mp_in: usize) -> i8 {
    if (mp_in + 4 - m_in) % 4 == 1 {
        1
    } else {
        -1
    }
}

impl CurveArrangement {
    /// Builds and validates a cellular arrangement from crossing signs and arcs.
    pub fn from_parts(
        genus: usize,
        signs: Vec<i8>,
        arcs: Vec<Arc>,
        free_loops: FreeLoops,
    ) -> Result<Self, ArrangementError> {
        Self::assemble(genus, signs, arcs, free_loops, RegionInput::Discs)
    }

    /// Like [`from_parts`](Self::from_parts) with the non-disc regions listed as
    /// `(euler, faces)`, faces numbered in trace order.
    pub fn from_parts_with_regions(
        genus: usize,
        signs: Vec<i8>,
        arcs: Vec<Arc>,
        free_loops: FreeLoops,
        regions: &[(i64, Vec<usize>)],
    ) -> Result<Self, ArrangementError> {
        Self::assemble(genus, signs, arcs, free_loops, RegionInput::Listed(regions))
    }

    fn assemble(
        genus: usize,
        signs: Vec<i8>,
        arcs: Vec<Arc>,
        free_loops: FreeLoops,
        regions: RegionInput<'_>,
    ) -> Result<Self, ArrangementError> {
        let mut violations = Vec::new();
        let v = signs.len();
        let mut table: Vec<[Option<ArcEnd>; 4]> = vec![[None; 4]; v];
        for (a, arc) in arcs.iter().enumerate() {
            for (port, end) in [(arc.from, End::From), (arc.to, End::To)] {
                if port.vertex >= v || port.slot >= 4 {
                    violations.push(Violation::new(
                        Invariant::SlotOutOfRange,
                        format!("arc {a}"),
                        format!("port ({}, {})", port.vertex, port.slot),
                    ));
                    continue;
                }
                let cell = &mut table[port.vertex][port.slot];
                if cell.is_some() {
                    violations.push(Violation::new(
                        Invariant::SlotConflict,
                        format!("crossing {}", port.vertex),
                        format!("slot {} claimed twice", port.slot),
                    ));
                }
                *cell = Some(ArcEnd { arc: a, end });
            }
        }
        for (i, &s) in signs.iter().enumerate() {
            if s != 1 && s != -1 {
                violations.push(Violation::new(Invariant::BadSign, format!("crossing {i}"), format!("sign {s}")));
            }
        }
        let mut ends = Vec::with_capacity(v);
        for (i, row) in table.iter().enumerate() {
            if let Some(slot) = row.iter().position(|c| c.is_none()) {
                violations.push(Violation::new(
                    Invariant::MissingEnd,
                    format!("crossing {i}"),
                    format!("slot {slot} has no arc end"),
                ));
            } else {
                ends.push(row.map(|c| c.expect("checked")));
            }
        }
        if !violations.is_empty() {
            return Err(ArrangementError::Invalid(violations));
        }
        let mut arr =
            CurveArrangement { genus, signs, arcs, ends, free_loops, dart_region: vec![], region_euler: vec![] };
        let violations = arr.semantic_violations();
        if !violations.is_empty() {
            return Err(ArrangementError::Invalid(violations));
        }
        let violations = arr.attach_regions(regions);
        if violations.is_empty() {
            Ok(arr)
        } else {
            Err(ArrangementError::Invalid(violations))
        }
    }

    fn attach_regions(&mut self, input: RegionInput<'_>) -> Vec<Violation> {
        let faces = self.faces();
        let mut out = Vec::new();
        // key and Euler characteristic for every face
        let mut keyed: Vec<(usize, i64)> = Vec::with_capacity(faces.len());
        match input {
            RegionInput::Discs => keyed.extend((0..faces.len()).map(|f| (f, 1))),
            RegionInput::Listed(list) => {
                let mut owner: Vec<Option<usize>> = vec![None; faces.len()];
                for (r, (_, fs)) in list.iter().enumerate() {
                    if fs.is_empty() {
                        out.push(Violation::new(Invariant::Regions, format!("region {r}"), "lists no faces"));
                    }
                    for &f in fs {
                        match owner.get_mut(f) {
                            None => out.push(Violation::new(
                                Invariant::Regions,
                                format!("region {r}"),
                                format!("face {f} does not exist ({} faces)", faces.len()),
                            )),
                            Some(Some(_)) => out.push(Violation::new(
                                Invariant::Regions,
                                format!("region {r}"),
                                format!("face {f} already belongs to another region"),
                            )),
                            Some(slot) => *slot = Some(r),
                        }
                    }
                }
                if !out.is_empty() {
                    return out;
                }
                for (f, o) in owner.iter().enumerate() {
                    keyed.push(match o {
                        Some(r) => (faces.len() + r, list[*r].0),
                        None => (f, 1),
                    });
                }
            }
            RegionInput::Inherited(key, euler) => {
                for f in &faces {
                    let k = key(f.darts[0]);
                    debug_assert!(f.darts.iter().all(|&d| key(d) == k), "face spans two regions");
                    keyed.push((k, euler[k]));
                }
            }
        }
        let mut ids = std::collections::BTreeMap::new();
        let mut region_euler = Vec::new();
        let mut boundary = Vec::new();
        self.dart_region = vec![0; 2 * self.arcs.len()];
        for (f, &(k, e)) in keyed.iter().enumerate() {
            let id = *ids.entry(k).or_insert_with(|| {
                region_euler.push(e);
                boundary.push(0i64);
                region_euler.len() - 1
            });
            boundary[id] += 1;
            for &d in &faces[f].darts {
                self.dart_region[dart_index(d)] = id;
            }
        }
        for (r, (&e, &b)) in region_euler.iter().zip(&boundary).enumerate() {
            // a connected orientable surface with b boundary circles has chi = 2 - 2g - b
            if e > 2 - b || (2 - b - e) % 2 != 0 {
                out.push(Violation::new(
                    Invariant::Regions,
                    format!("region {r}"),
                    format!("Euler characteristic {e} is impossible with {b} boundary cycles"),
                ));
            }
        }
        self.region_euler = region_euler;
        if !out.is_empty() || self.ends.is_empty() {
            return out;
        }
        let chi = self.euler_characteristic();
        let expected = 2 - 2 * self.genus as i64;
        if chi != expected {
            let detail = if self.is_cellular() {
                format!(
                    "V - E + F = {} - {} + {} = {chi}, expected {expected} for genus {}",
                    self.crossing_count(),
                    self.arcs.len(),
                    faces.len(),
                    self.genus
                )
            } else {
                format!("V - E + sum(chi) = {chi}, expected {expected} for genus {}", self.genus)
            };
            out.push(Violation::new(Invariant::Cellularity, "faces", detail));
        }
        out
    }

    /// Transversality, sign consistency and closed curves. Assumes every slot is filled exactly
    /// once.
    fn semantic_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut transversal = true;
        for (v, ends) in self.ends.iter().enumerate() {
            let owners: Vec<Owner> = ends.iter().map(|e| self.arcs[e.arc].owner).collect();
            if (0..4).any(|s| owners[s] == owners[(s + 1) % 4]) {
                transversal = false;
                out.push(Violation::new(
                    Invariant::Transversality,
                    format!("crossing {v}"),
                    "consecutive arc-ends with the same owner",
                ));
                continue;
            }
            if (0..2).any(|s| ends[s].end == ends[s + 2].end) {
                transversal = false;
                out.push(Violation::new(
                    Invariant::Transversality,
                    format!("crossing {v}"),
                    "a curve enters and leaves through non-opposite slots",
                ));
                continue;
            }
            let slot_of = |owner: Owner| {
                (0..4).find(|&s| owners[s] == owner && ends[s].end == End::To).expect("transversal")
            };
            let expected = sign_from_slots(slot_of(Owner::M), slot_of(Owner::Mp));
            if expected != self.signs[v] {
                out.push(Violation::new(
                    Invariant::SignConsistency,
                    format!("crossing {v}"),
                    format!("stored sign {} but cyclic order gives {}", self.signs[v], expected),
                ));
            }
        }
        if !transversal {
            return out;
        }
        // each owner has one in and one out per vertex, so successor chains close up; check that
        // the chain from every arc returns to it
        let mut seen = vec![false; self.arcs.len()];
        for start in 0..self.arcs.len() {
            if seen[start] {
                continue;
            }
            let mut a = start;
            let mut steps = 0;
            loop {
                seen[a] = true;
                a = self.successor(a);
                steps += 1;
                if a == start {
                    break;
                }
                if steps > self.arcs.len() || seen[a] {
                    out.push(Violation::new(
                        Invariant::ClosedCurves,
                        format!("arc {start}"),
                        "arcs do not chain into a closed curve",
                    ));
                    break;
                }
            }
        }
        out
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn crossing_count(&self) -> usize {
        self.signs.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn cyclic_ends(&self, vertex: usize) -> [ArcEnd; 4] {
        self.ends[vertex]
    }

    pub fn free_loops(&self) -> FreeLoops {
        self.free_loops
    }

    /// Sum of crossing signs, the algebraic intersection number `M . M'`.
    pub fn algebraic_intersection(&self) -> i64 {
        self.signs.iter().map(|&s| i64::from(s)).sum()
    }

    /// `V - E + sum(chi(region))`, which is `V - E + F` when every face is a disc. With no
    /// crossings left this is `2 - 2k` by convention.
    pub fn euler_characteristic(&self) -> i64 {
        if self.signs.is_empty() {
            return 2 - 2 * self.genus as i64;
        }
        self.crossing_count() as i64 - self.arcs.len() as i64 + self.region_euler.iter().sum::<i64>()
    }

    /// Every complementary region is a disc.
    pub fn is_cellular(&self) -> bool {
        self.region_euler.iter().all(|&e| e == 1)
    }

    /// Regions with their boundary faces, in trace order.
    pub fn regions(&self) -> Vec<Region> {
        let mut regions: Vec<Region> =
            self.region_euler.iter().map(|&euler| Region { euler, faces: vec![] }).collect();
        for (f, face) in self.faces().iter().enumerate() {
            regions[self.region_of(face.darts[0])].faces.push(f);
        }
        regions
    }

    fn region_of(&self, d: Dart) -> usize {
        self.dart_region[dart_index(d)]
    }

    /// Next arc of the same curve.
    fn successor(&self, arc: usize) -> usize {
        let to = self.arcs[arc].to;
        self.ends[to.vertex][(to.slot + 2) % 4].arc
    }

    /// Number of closed curves per owner, counting free loops.
    pub fn component_count(&self, owner: Owner) -> usize {
        let mut seen = vec![false; self.arcs.len()];
        let mut count = self.free_loops.get(owner);
        for start in 0..self.arcs.len() {
            if seen[start] || self.arcs[start].owner != owner {
                continue;
            }
            count += 1;
            let mut a = start;
            while !seen[a] {
                seen[a] = true;
                a = self.successor(a);
            }
        }
        count
    }

    fn head(&self, d: Dart) -> Port {
        let arc = &self.arcs[d.arc];
        if d.forward {
            arc.to
        } else {
            arc.from
        }
    }

    fn next_dart(&self, d: Dart) -> Dart {
        let head = self.head(d);
        let e = self.ends[head.vertex][(head.slot + 1) % 4];
        Dart { arc: e.arc, forward: e.end == End::From }
    }

    fn orbit(&self, start: Dart) -> Vec<Dart> {
        let mut darts = vec![start];
        let mut d = self.next_dart(start);
        while d != start {
            darts.push(d);
            d = self.next_dart(d);
        }
        darts
    }

    /// Faces in deterministic order: orbits are started from darts in the order
    /// `(arc 0, fwd), (arc 0, bwd), (arc 1, fwd), ...`.
    pub fn faces(&self) -> Vec<Face> {
        let mut seen = BTreeSet::new();
        let mut faces = Vec::new();
        for arc in 0..self.arcs.len() {
            for forward in [true, false] {
                let d = Dart { arc, forward };
                if seen.contains(&d) {
                    continue;
                }
                let darts = self.orbit(d);
                seen.extend(darts.iter().copied());
                faces.push(Face { darts });
            }
        }
        faces
    }

    fn bigon_of(&self, face: usize, darts: &[Dart]) -> Option<Bigon> {
        let [d0, d1] = darts else { return None };
        let p = self.head(*d0).vertex;
        let q = self.head(*d1).vertex;
        if p == q || self.signs[p] != -self.signs[q] || self.region_euler[self.region_of(*d0)] != 1 {
            return None;
        }
        let (m, mp) = if self.arcs[d0.arc].owner == Owner::M { (d0, d1) } else { (d1, d0) };
        debug_assert_ne!(self.arcs[m.arc].owner, self.arcs[mp.arc].owner);
        Some(Bigon { face, m_arc: m.arc, mp_arc: mp.arc, corners: (p.min(q), p.max(q)) })
    }

    /// Every bigon face, in face-trace order.
    pub fn find_bigons(&self) -> Vec<Bigon> {
        self.faces()
            .iter()
            .enumerate()
            .filter_map(|(i, f)| self.bigon_of(i, &f.darts))
            .collect()
    }

    /// The two darts of `b`'s face, if `b` is a bigon of this arrangement.
    fn bigon_darts(&self, b: &Bigon) -> Option<[Dart; 2]> {
        if b.m_arc >= self.arcs.len() || b.mp_arc >= self.arcs.len() {
            return None;
        }
        let face = [true, false]
            .into_iter()
            .map(|forward| self.orbit(Dart { arc: b.m_arc, forward }))
            .filter(|o| o.len() == 2 && o.iter().any(|d| d.arc == b.mp_arc))
            .find(|o| self.bigon_of(b.face, o) == Some(*b))?;
        // face indices are positions in trace order; a stale index names another face
        let faces = self.faces();
        let listed = faces.get(b.face)?;
        if !listed.darts.iter().all(|d| face.contains(d)) {
            return None;
        }
        Some([face[0], face[1]])
    }

    /// Pushes one arc across the bigon, deleting its two corners.
    pub fn remove_bigon(&self, b: &Bigon) -> Result<CurveArrangement, ArrangementError> {
        let Some(darts) = self.bigon_darts(b) else {
            return Err(ArrangementError::StaleBigon { face: b.face });
        };
        let (p, q) = b.corners;
        let mut merge = RegionMerge { parent: (0..self.region_euler.len()).collect(), euler: self.region_euler.clone() };
        // the sectors facing the bigon across each corner join through the vacated strip
        let opposite = |corner: usize| {
            let h = darts.iter().map(|&d| self.head(d)).find(|h| h.vertex == corner).expect("one dart per corner");
            let e = self.ends[corner][(h.slot + 2) % 4];
            self.region_of(Dart { arc: e.arc, forward: e.end == End::To })
        };
        let (cp, cq) = (opposite(p), opposite(q));
        merge.glue(cp, cq, -1);

        let mut arcs: Vec<Option<Arc>> = self.arcs.iter().copied().map(Some).collect();
        let mut free_loops = self.free_loops;
        for removed in [b.m_arc, b.mp_arc] {
            let s = self.arcs[removed];
            let incoming = self.ends[s.from.vertex][(s.from.slot + 2) % 4].arc;
            let outgoing = self.ends[s.to.vertex][(s.to.slot + 2) % 4].arc;
            arcs[removed] = None;
            if incoming == outgoing {
                arcs[incoming] = None;
                free_loops.bump(s.owner);
                // the loop leaves the map and its two sides become one region
                let left = self.region_of(Dart { arc: incoming, forward: true });
                let right = self.region_of(Dart { arc: incoming, forward: false });
                merge.glue(left, right, 0);
            } else {
                let merged = Arc { owner: s.owner, from: self.arcs[incoming].from, to: self.arcs[outgoing].to };
                arcs[incoming] = Some(merged);
                arcs[outgoing] = None;
            }
        }
        let remap = |v: usize| v - usize::from(v > p) - usize::from(v > q);
        let signs: Vec<i8> = self
            .signs
            .iter()
            .enumerate()
            .filter(|&(v, _)| v != p && v != q)
            .map(|(_, &s)| s)
            .collect();
        let mut ancestor = Vec::new();
        let mut kept = Vec::new();
        for (i, a) in arcs.into_iter().enumerate() {
            if let Some(a) = a {
                ancestor.push(i);
                kept.push(Arc {
                    owner: a.owner,
                    from: Port::new(remap(a.from.vertex), a.from.slot),
                    to: Port::new(remap(a.to.vertex), a.to.slot),
                });
            }
        }
        let roots: Vec<usize> = (0..self.region_euler.len()).map(|r| merge.find(r)).collect();
        let key = |d: Dart| roots[self.region_of(Dart { arc: ancestor[d.arc], forward: d.forward })];
        CurveArrangement::assemble(self.genus, signs, kept, free_loops, RegionInput::Inherited(&key, &merge.euler))
    }

    /// Removes bigons until none is left, always taking the first in face-trace order.
    pub fn minimal_position(&self) -> Reduction {
        self.minimal_position_by(|_| 0)
    }

    /// Like [`minimal_position`](Self::minimal_position) with a caller-chosen bigon at each
    /// step; `choose` receives the current bigon list and returns an index into it.
    pub fn minimal_position_by<F>(&self, mut choose: F) -> Reduction
    where
        F: FnMut(&[Bigon]) -> usize,
    {
        let mut current = self.clone();
        let mut trace = Vec::new();
        loop {
            let bigons = current.find_bigons();
            if bigons.is_empty() {
                break;
            }
            let b = bigons[choose(&bigons) % bigons.len()];
            let next = current
                .remove_bigon(&b)
                .expect("removing a disc bigon keeps the surface");
            trace.push(RemovalStep {
                step: trace.len() + 1,
                face: b.face,
                corners: [b.corners.0, b.corners.1],
                corner_signs: [current.signs[b.corners.0], current.signs[b.corners.1]],
                crossings_before: current.crossing_count(),
                crossings_after: next.crossing_count(),
                euler_after: next.euler_characteristic(),
            });
            current = next;
        }
        Reduction { arrangement: current, trace }
    }

    pub fn to_file(&self) -> ArrangementFile {
        io::to_file(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RemovalStep {
    pub step: usize,
    pub face: usize,
    pub corners: [usize; 2],
    pub corner_signs: [i8; 2],
    pub crossings_before: usize,
    pub crossings_after: usize,
    pub euler_after: i64,
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub arrangement: CurveArrangement,
    pub trace: Vec<RemovalStep>,
}

impl Reduction {
    /// Crossing count after reduction, the geometric intersection degree.
    pub fn degree(&self) -> usize {
        self.arrangement.crossing_count()
    }
}

/// Checks a raw arrangement file; returns the arrangement or the full list of violations.
pub fn validate(file: &ArrangementFile) -> Result<CurveArrangement, Vec<Violation>> {
    io::from_file(file)
}
