use num_integer::Integer;
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{sign_from_slots, Arc, ArrangementError, CurveArrangement, Dart, End, FreeLoops, Owner, Port};

type Q = Ratio<i64>;

const EAST: usize = 0;
const NORTH: usize = 1;
const WEST: usize = 2;
const SOUTH: usize = 3;

/// Minimal intersection number of multicurves of the given classes on the torus.
pub fn geometric_intersection_torus(u: (i64, i64), v: (i64, i64)) -> u64 {
    (i128::from(u.0) * i128::from(v.1) - i128::from(u.1) * i128::from(v.0)).unsigned_abs() as u64
}

fn split_class(u: (i64, i64)) -> (i64, (i64, i64), (i64, i64)) {
    let g = u.0.gcd(&u.1);
    if g == 0 {
        return (0, (0, 0), (0, 0));
    }
    let p = (u.0 / g, u.1 / g);
    let e = p.0.extended_gcd(&p.1);
    // det(p, w) = p.0 * e.x + p.1 * e.y = 1
    let (x, y) = if e.gcd < 0 { (-e.x, -e.y) } else { (e.x, e.y) };
    (g, p, (-y, x))
}

fn frac(q: Q) -> Q {
    q - q.floor()
}

/// Straight-line representatives of two multicurve classes on the torus `R^2 / Z^2`.
///
/// A class `g * (p, q)` with `gcd(p, q) = 1` becomes `g` parallel lines of slope `(p, q)`.
/// Straight lines meet minimally, so the result is already in minimal position. Parallel or
/// zero classes give free loops only.
pub fn canonical_torus_arrangement(u: (i64, i64), v: (i64, i64)) -> Result<CurveArrangement, ArrangementError> {
    let (gu, pu, wu) = split_class(u);
    let (gv, pv, wv) = split_class(v);
    let det = pu.0 * pv.1 - pu.1 * pv.0;
    if det == 0 || gu == 0 || gv == 0 {
        let free = FreeLoops { m: gu.unsigned_abs() as usize, mp: gv.unsigned_abs() as usize };
        return CurveArrangement::from_parts(1, vec![], vec![], free);
    }
    let offset = |g: i64, w: (i64, i64), j: i64| (frac(Q::new(j * w.0, g)), frac(Q::new(j * w.1, g)));
    let d = Q::from_integer(det);
    // crossings solve t*pu - s*pv = r + n with t, s in [0, 1) and r in (-1, 1)^2
    let span = |a: i64, b: i64| (a.min(0) - b.max(0) - 1)..=(a.max(0) - b.min(0) + 1);

    // crossing k lies on M line m_line[k] at parameter t[k] and on M' line mp_line[k] at s[k]
    let mut points: Vec<(i64, Q, i64, Q)> = Vec::new();
    for j in 0..gu {
        let o = offset(gu, wu, j);
        for l in 0..gv {
            let o2 = offset(gv, wv, l);
            let before = points.len();
            for nx in span(pu.0, pv.0) {
                for ny in span(pu.1, pv.1) {
                    let rx = o2.0 - o.0 + Q::from_integer(nx);
                    let ry = o2.1 - o.1 + Q::from_integer(ny);
                    let t = (rx * pv.1 - ry * pv.0) / d;
                    let s = -(ry * pu.0 - rx * pu.1) / d;
                    let unit = |x: Q| x >= Q::from_integer(0) && x < Q::from_integer(1);
                    if unit(t) && unit(s) {
                        points.push((j, t, l, s));
                    }
                }
            }
            debug_assert_eq!((points.len() - before) as i64, det.abs());
        }
    }

    let sign: i8 = if det > 0 { 1 } else { -1 };
    let (mp_out, mp_in) = if det > 0 { (NORTH, SOUTH) } else { (SOUTH, NORTH) };
    let mut arcs = Vec::new();
    let mut chain = |owner: Owner, lines: i64, line_of: &dyn Fn(usize) -> i64, param: &dyn Fn(usize) -> Q, out: usize, inn: usize| {
        for line in 0..lines {
            let mut on: Vec<usize> = (0..points.len()).filter(|&k| line_of(k) == line).collect();
            on.sort_by_key(|&k| param(k));
            for (i, &k) in on.iter().enumerate() {
                let next = on[(i + 1) % on.len()];
                arcs.push(Arc { owner, from: Port::new(k, out), to: Port::new(next, inn) });
            }
        }
    };
    chain(Owner::M, gu, &|k| points[k].0, &|k| points[k].1, EAST, WEST);
    chain(Owner::Mp, gv, &|k| points[k].2, &|k| points[k].3, mp_out, mp_in);
    CurveArrangement::from_parts(1, vec![sign; points.len()], arcs, FreeLoops::default())
}

impl CurveArrangement {
    /// Pushes the `M` arc of `m_dart` across the `M'` arc of `mp_dart`, both on the same face,
    /// creating a bigon with two new crossings. Inverse of [`remove_bigon`](Self::remove_bigon).
    pub fn finger_move(&self, m_dart: Dart, mp_dart: Dart) -> Result<CurveArrangement, ArrangementError> {
        let bad = |msg: &str| Err(ArrangementError::FingerMove(msg.to_string()));
        if m_dart.arc >= self.arcs.len() || mp_dart.arc >= self.arcs.len() {
            return bad("dart out of range");
        }
        if self.arcs[m_dart.arc].owner != Owner::M || self.arcs[mp_dart.arc].owner != Owner::Mp {
            return bad("darts must lie on an M arc and an M' arc");
        }
        if !self.is_cellular() {
            return bad("arrangement has non-disc regions");
        }
        if !self.orbit(m_dart).contains(&mp_dart) {
            return bad("darts do not bound a common face");
        }
        let s = self.arcs[m_dart.arc];
        let x = self.arcs[mp_dart.arc];
        let l = self.crossing_count();
        let r = l + 1;
        let mut arcs = self.arcs.clone();
        let (s1, s_mid, s2) = if !m_dart.forward {
            ((s.from, Port::new(l, WEST)), (Port::new(l, EAST), Port::new(r, WEST)), (Port::new(r, EAST), s.to))
        } else {
            ((s.from, Port::new(r, EAST)), (Port::new(r, WEST), Port::new(l, EAST)), (Port::new(l, WEST), s.to))
        };
        let (x1, x_mid, x2) = if mp_dart.forward {
            ((x.from, Port::new(l, NORTH)), (Port::new(l, SOUTH), Port::new(r, SOUTH)), (Port::new(r, NORTH), x.to))
        } else {
            ((x.from, Port::new(r, NORTH)), (Port::new(r, SOUTH), Port::new(l, SOUTH)), (Port::new(l, NORTH), x.to))
        };
        let arc = |owner, (from, to): (Port, Port)| Arc { owner, from, to };
        arcs[m_dart.arc] = arc(Owner::M, s1);
        arcs[mp_dart.arc] = arc(Owner::Mp, x1);
        arcs.extend([arc(Owner::M, s_mid), arc(Owner::M, s2), arc(Owner::Mp, x_mid), arc(Owner::Mp, x2)]);
        let in_slot = |v: usize, owner: Owner| {
            arcs.iter().find(|a| a.owner == owner && a.to.vertex == v).map(|a| a.to.slot).expect("new crossing has both curves")
        };
        let mut signs = self.signs.clone();
        for v in [l, r] {
            signs.push(sign_from_slots(in_slot(v, Owner::M), in_slot(v, Owner::Mp)));
        }
        CurveArrangement::from_parts(self.genus, signs, arcs, self.free_loops)
    }
}

/// Applies `moves` random finger moves, reproducibly from `seed`.
pub fn random_finger_moves(arr: &CurveArrangement, moves: usize, seed: u64) -> CurveArrangement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = arr.clone();
    if current.crossing_count() == 0 {
        return current;
    }
    let mut done = 0;
    let mut attempts = 0;
    while done < moves && attempts < 50 * (moves + 1) {
        attempts += 1;
        let faces = current.faces();
        let face = &faces[rng.gen_range(0..faces.len())];
        let pick = |owner: Owner, rng: &mut ChaCha8Rng| {
            let ds: Vec<Dart> = face.darts.iter().copied().filter(|d| current.arcs[d.arc].owner == owner).collect();
            *ds.choose(rng).expect("faces alternate between owners")
        };
        let dm = pick(Owner::M, &mut rng);
        let dp = pick(Owner::Mp, &mut rng);
        if let Ok(next) = current.finger_move(dm, dp) {
            current = next;
            done += 1;
        }
    }
    current
}

/// A random cellular arrangement of one `M` curve and one `M'` curve meeting `n` times. The
/// genus is whatever the random rotation system produces.
pub fn random_filling(n: usize, seed: u64) -> CurveArrangement {
    assert!(n > 0, "a filling arrangement needs at least one crossing");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let signs: Vec<i8> = (0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    let mut arcs: Vec<Arc> =
        (0..n).map(|i| Arc { owner: Owner::M, from: Port::new(i, EAST), to: Port::new((i + 1) % n, WEST) }).collect();
    let mp_slots = |v: usize| if signs[v] > 0 { (NORTH, SOUTH) } else { (SOUTH, NORTH) };
    for i in 0..n {
        let (a, b) = (order[i], order[(i + 1) % n]);
        arcs.push(Arc { owner: Owner::Mp, from: Port::new(a, mp_slots(a).0), to: Port::new(b, mp_slots(b).1) });
    }
    let mut ends = vec![[super::ArcEnd { arc: 0, end: End::From }; 4]; n];
    for (i, a) in arcs.iter().enumerate() {
        ends[a.from.vertex][a.from.slot] = super::ArcEnd { arc: i, end: End::From };
        ends[a.to.vertex][a.to.slot] = super::ArcEnd { arc: i, end: End::To };
    }
    let probe = CurveArrangement {
        genus: 0,
        signs: signs.clone(),
        arcs: arcs.clone(),
        ends,
        free_loops: FreeLoops::default(),
        dart_region: vec![],
        region_euler: vec![],
    };
    let chi = n as i64 - 2 * n as i64 + probe.faces().len() as i64;
    let genus = ((2 - chi) / 2) as usize;
    CurveArrangement::from_parts(genus, signs, arcs, FreeLoops::default()).expect("rotation system defines its own surface")
}
