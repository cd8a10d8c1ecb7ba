//! One line per acceptance criterion; exits non-zero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use heegaard_core::arrangement::{
    canonical_torus_arrangement, random_finger_moves, validate, ArrangementFile, CurveArrangement,
};
use heegaard_core::basis_change::{transition_matrix, verify_inverse_pair, CurveSystem};
use heegaard_core::heegaard::{read_diagram, HeegaardDiagram, Verdict};
use heegaard_core::morse::{Boundary, CriticalPoint, Level, MorseError, MorseProgram};
use heegaard_core::presentation::DEFAULT_TIETZE_BUDGET;
use heegaard_core::surface_group::{Family, HomologyClass, Letter, SurfaceModel, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() < limit, || format!("took {:.2?}, limit {limit:?}", start.elapsed()))
}

fn pairing_algebra() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 10_000;
    for case in 0..n {
        let k = rng.gen_range(1..=3);
        let s = SurfaceModel::new(k).unwrap();
        let l = random_word(&mut rng, k, 12);
        let g = random_word(&mut rng, k, 12);
        let h = random_word(&mut rng, k, 12);
        let lg = s.word_pairing(&l, &g).unwrap();
        ensure(lg == oracle_pairing(&l, &g, k), || format!("case {case}: {l} . {g} = {lg}"))?;
        ensure(lg == -s.word_pairing(&g, &l).unwrap(), || format!("case {case}: antisymmetry fails for {l}, {g}"))?;
        let sum = s.word_pairing(&l.concat(&h), &g).unwrap();
        ensure(sum == lg + s.word_pairing(&h, &g).unwrap(), || format!("case {case}: additivity fails"))?;
        ensure(s.word_pairing(&l, &l).unwrap() == 0, || format!("case {case}: {l} . {l} != 0"))?;
        let comm = l.concat(&g).concat(&l.inverse()).concat(&g.inverse());
        ensure(s.in_commutator_subgroup(&comm).unwrap(), || format!("case {case}: commutator not annihilated"))?;
        ensure(s.word_pairing(&comm, &h).unwrap() == 0, || format!("case {case}: commutator pairs nontrivially"))?;
        let (m, nn) = exponents(&l, k);
        let via = s.coefficients_via_pairing(&l).unwrap();
        ensure(via == s.abelianize(&l).unwrap(), || format!("case {case}: coefficients differ for {l}"))?;
        ensure(via.coords() == [m, nn].concat(), || format!("case {case}: coefficients differ from counting"))?;
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!("{n} words, {:.2?}", start.elapsed()))
}

/// Applies `x -> x + c (x . v) v` to every row of `s`.
fn transvect(s: &[Vec<i64>], v: &[i64], c: i64) -> Vec<Vec<i64>> {
    let k = v.len() / 2;
    let split = |x: &[i64]| (x[..k].to_vec(), x[k..].to_vec());
    s.iter()
        .map(|x| {
            let w = form(&split(x), &split(v));
            x.iter().zip(v).map(|(xi, vi)| xi + c * w * vi).collect()
        })
        .collect()
}

fn h_matrix() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let n = 1000;
    let mut max_entry = 0;
    for case in 0..n {
        let k = rng.gen_range(1..=3);
        let mut s: Vec<Vec<i64>> = (0..2 * k).map(|i| (0..2 * k).map(|j| i64::from(i == j)).collect()).collect();
        for _ in 0..rng.gen_range(1..=16) {
            let v: Vec<i64> = (0..2 * k).map(|_| rng.gen_range(-1..=1)).collect();
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            let next = transvect(&s, &v, if rng.gen_bool(0.5) { 1 } else { -1 });
            if next.iter().flatten().all(|x| x.abs() <= 10) {
                s = next;
            }
        }
        max_entry = max_entry.max(s.iter().flatten().map(|x| x.abs()).max().unwrap());
        let classes: Vec<HomologyClass> = s.iter().map(|r| HomologyClass::from_coords(r)).collect();
        let sys = CurveSystem::new(classes[..k].to_vec(), classes[k..].to_vec())
            .map_err(|e| format!("case {case}: transvected basis rejected: {e}"))?;
        let canonical = CurveSystem::canonical(k);
        let h = transition_matrix(&canonical, &sys).unwrap();
        let h_inv = transition_matrix(&sys, &canonical).unwrap();
        let rows = h.matrix().to_rows();
        ensure(rows == s, || format!("case {case}: H {rows:?} differs from the generated basis {s:?}"))?;
        let det = h.determinant().unwrap();
        let oracle = bareiss(rows.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect());
        ensure(det.abs() == 1 && i128::from(det) == oracle, || format!("case {case}: det {det}, oracle {oracle}"))?;
        ensure(verify_inverse_pair(&h, &h_inv).unwrap(), || format!("case {case}: H H^-1 != E"))?;
        let product = mat_mul(&rows, &h_inv.matrix().to_rows());
        ensure(product.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == i64::from(i == j))), || {
            format!("case {case}: oracle product is not the identity")
        })?;
    }
    Ok(format!("{n} basis changes, largest entry {max_entry}"))
}

/// Removes the first bigon until none is left, checking each step by hand.
fn replay(arr: &CurveArrangement) -> Result<(usize, usize), String> {
    let mut cur = arr.clone();
    let mut steps = 0;
    while let Some(b) = cur.find_bigons().first().cloned() {
        let next = cur.remove_bigon(&b).map_err(|e| e.to_string())?;
        ensure(cur.crossing_count() - next.crossing_count() == 2, || "a step removed other than 2 crossings".into())?;
        let v = next.crossing_count() as i64;
        if v > 0 {
            let chi = v - next.arc_count() as i64 + next.faces().len() as i64;
            ensure(chi == 0, || format!("V - E + F = {chi} after step {}", steps + 1))?;
        }
        cur = next;
        steps += 1;
    }
    Ok((cur.crossing_count(), steps))
}

fn torus_oracle() -> Check {
    let start = Instant::now();
    let mut library = Duration::ZERO;
    let vectors: Vec<(i64, i64)> =
        (-4..=4).flat_map(|a| (-4..=4).map(move |b| (a, b))).filter(|&v| v != (0, 0)).collect();
    let mut pairs = 0;
    let mut removals = 0;
    for (n, &u) in vectors.iter().enumerate() {
        for (m, &v) in vectors.iter().enumerate() {
            let want = (u.0 * v.1 - u.1 * v.0).unsigned_abs() as usize;
            let t = Instant::now();
            let straight = canonical_torus_arrangement(u, v).map_err(|e| format!("{u:?} {v:?}: {e}"))?;
            library += t.elapsed();
            ensure(straight.crossing_count() == want && straight.find_bigons().is_empty(), || {
                format!("{u:?} x {v:?}: straight lines give {} crossings", straight.crossing_count())
            })?;
            let wiggled = random_finger_moves(&straight, 2, (n * vectors.len() + m) as u64);
            let t = Instant::now();
            let red = wiggled.minimal_position();
            library += t.elapsed();
            ensure(red.degree() == want, || format!("{u:?} x {v:?}: reduced to {}, expected {want}", red.degree()))?;
            for s in &red.trace {
                ensure(s.crossings_before - s.crossings_after == 2 && s.euler_after == 0, || {
                    format!("{u:?} x {v:?}: bad step {s:?}")
                })?;
            }
            let (d, steps) = replay(&wiggled).map_err(|e| format!("{u:?} x {v:?}: {e}"))?;
            ensure(d == want && steps == red.trace.len(), || format!("{u:?} x {v:?}: replay gave {d} in {steps}"))?;
            pairs += 1;
            removals += steps;
        }
    }
    let limit = Duration::from_secs(10);
    ensure(library < limit, || format!("construction and reduction took {library:.2?}, limit {limit:?}"))?;
    Ok(format!(
        "{pairs} class pairs, {removals} bigon removals, {library:.2?} in construction and reduction, {:.2?} with oracles",
        start.elapsed()
    ))
}

fn fixture_arrangements() -> Vec<(String, CurveArrangement)> {
    let dir = fixtures().join("arrangements");
    let mut paths: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    paths
        .into_iter()
        .filter(|p| p.extension().is_some_and(|e| e == "arr"))
        .map(|p| {
            let file: ArrangementFile = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
            let arr = validate(&file).unwrap_or_else(|v| panic!("{}: {v:?}", p.display()));
            (p.file_name().unwrap().to_string_lossy().into_owned(), arr)
        })
        .collect()
}

fn bigon_criterion() -> Check {
    let fixtures = fixture_arrangements();
    ensure(fixtures.len() == 20, || format!("expected 20 fixtures, found {}", fixtures.len()))?;
    let mut with_choice = 0;
    for (name, arr) in &fixtures {
        let reference = arr.minimal_position().degree();
        let mut choices = 0;
        for seed in 0..100 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let red = arr.minimal_position_by(|bs| {
                choices += usize::from(bs.len() > 1);
                rng.gen_range(0..bs.len())
            });
            ensure(red.degree() == reference, || format!("{name}: seed {seed} gives {}, default {reference}", red.degree()))?;
        }
        with_choice += usize::from(choices > 0);
    }
    Ok(format!("{} fixtures x 100 orders, {with_choice} with a real choice", fixtures.len()))
}

fn standard_diagrams() -> Check {
    for k in 1..=5 {
        let d = HeegaardDiagram::standard(k);
        let loaded = read_diagram(&fixtures().join(format!("diagrams/standard_g{k}.hd"))).map_err(|e| e.to_string())?;
        ensure(loaded == d, || format!("fixture standard_g{k}.hd differs"))?;
        let r = d.full_reduction(DEFAULT_TIETZE_BUDGET);
        ensure(r.verdict == Verdict::TrivialDiagram && r.steps.len() == k && r.final_genus == 0, || {
            format!("genus {k}: {:?} after {} steps", r.verdict, r.steps.len())
        })?;
        let s = d.pi1_presentation().unwrap().simplify(DEFAULT_TIETZE_BUDGET);
        ensure(s.is_trivial() && !s.exhausted, || format!("genus {k}: pi1 simplifies to {}", s.presentation))?;
        ensure(d.h1_group().unwrap().is_trivial(), || format!("genus {k}: H1 nontrivial"))?;
    }
    Ok("genus 1..5 reach genus 0 in k steps".into())
}

fn lens_spaces() -> Check {
    for p in [2usize, 3, 5] {
        let d = read_diagram(&fixtures().join(format!("diagrams/lens_{p}_1.hd"))).map_err(|e| e.to_string())?;
        let theta = Word::new(vec![Letter::b(1); p]);
        ensure(d.theta() == [theta.clone()], || format!("lens_{p}_1.hd has theta {}", d.theta()[0]))?;
        let m = vec![vec![oracle_pairing(&Word::from(Letter::a(1)), &theta, 1)]];
        let oracle = invariant_factors(&m);
        let g = d.h1_group().unwrap();
        ensure(g.factors == oracle && oracle == [p as i64], || format!("p = {p}: {:?} vs oracle {oracle:?}", g.factors))?;
        ensure(d.cancellation_certificate().unwrap().is_none(), || format!("p = {p}: certificate found"))?;
        let r = d.full_reduction(DEFAULT_TIETZE_BUDGET);
        ensure(r.verdict == Verdict::Stuck, || format!("p = {p}: verdict {:?}", r.verdict))?;
    }
    let mixed = read_diagram(&fixtures().join("diagrams/mixed_g2.hd")).map_err(|e| e.to_string())?;
    let m: Vec<Vec<i64>> = (0..2)
        .map(|i| (0..2).map(|j| oracle_pairing(&mixed.alpha()[j], &mixed.theta()[i], 2)).collect())
        .collect();
    ensure(mixed.h1_group().unwrap().factors == invariant_factors(&m), || "mixed_g2 disagrees with the oracle".into())?;
    Ok("Z/2, Z/3, Z/5, all stuck".into())
}

fn morse_ledger() -> Check {
    for k in 0..=10 {
        let p = MorseProgram::closed_with_counts([1, k, k, 1]);
        let oracle: i64 = p.points().iter().map(|c| if c.index % 2 == 0 { 1 } else { -1 }).sum();
        ensure(p.euler_characteristic() == Ok(0) && oracle == 0, || format!("k = {k}: chi {:?}", p.euler_characteristic()))?;
        ensure(p.middle_genus() == Ok(k), || format!("k = {k}: middle genus {:?}", p.middle_genus()))?;

        let mut points = p.points().to_vec();
        let lvl = |i: i64| Level::from_integer(i);
        points.extend([
            CriticalPoint::new("x0", 0, lvl(0)),
            CriticalPoint::new("x1", 1, lvl(1)),
            CriticalPoint::new("y2", 2, lvl(2)),
            CriticalPoint::new("y3", 3, lvl(3)),
        ]);
        let hints = [("x0".to_string(), "x1".to_string()), ("y2".to_string(), "y3".to_string())];
        let extra = MorseProgram::new(points, Boundary::Empty, Boundary::Empty, hints).unwrap();
        let chi = extra.euler_characteristic().unwrap();
        let once = extra.cancel_01_pair("x0", "x1").unwrap();
        ensure(once.euler_characteristic() == Ok(chi), || format!("k = {k}: cancel_01 changed chi"))?;
        let twice = once.cancel_23_pair("y2", "y3").unwrap();
        ensure(twice.euler_characteristic() == Ok(chi), || format!("k = {k}: cancel_23 changed chi"))?;
        ensure(twice == p, || format!("k = {k}: cancelling the extra pairs does not restore the program"))?;
    }
    let mut rejected = 0;
    for ones in 0..=10 {
        for twos in (0..=10).filter(|&t| t != ones) {
            let r = MorseProgram::closed_with_counts([1, ones, twos, 1]).middle_genus();
            ensure(matches!(r, Err(MorseError::ChiInconsistent { .. })), || format!("{ones} ones, {twos} twos: {r:?}"))?;
            rejected += 1;
        }
    }
    Ok(format!("chi = 0 for k = 0..10, {rejected} unbalanced programs rejected"))
}

fn homogeneity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = 10_000;
    let mut homogeneous = 0;
    for case in 0..n {
        let k = rng.gen_range(1..=3);
        let s = SurfaceModel::new(k).unwrap();
        let g = random_word(&mut rng, k, 12);
        for j in 1..=k {
            for (family, dual) in [(Family::A, Letter::b(j)), (Family::B, Letter::a(j))] {
                let lib = s.is_homogeneous(&g, family, j).unwrap();
                let criterion = oracle_pairing(&g, &Word::from(dual), k) == 0;
                ensure(lib == criterion, || format!("case {case}: {g}, {family:?}{j}: {lib} vs {criterion}"))?;
                homogeneous += usize::from(lib);
            }
        }
    }
    Ok(format!("{n} words, {homogeneous} homogeneous letter checks, 0 disagreements"))
}

fn parity() -> Check {
    let mut checked = 0;
    for (name, arr) in fixture_arrangements() {
        let d = arr.minimal_position().degree() as i64;
        let p = arr.algebraic_intersection().abs();
        ensure(d >= p && (d - p) % 2 == 0, || format!("{name}: d = {d}, |pairing| = {p}"))?;
        checked += 1;
    }
    for k in 1..=3 {
        let d = read_diagram(&fixtures().join(format!("diagrams/standard_g{k}.hd"))).unwrap();
        for i in 0..k {
            for j in 0..k {
                let (arr, _) = d.pair_arrangement(i, j).unwrap();
                let deg = arr.minimal_position().degree() as i64;
                let p = arr.algebraic_intersection().abs();
                ensure(deg >= p && (deg - p) % 2 == 0, || format!("standard_g{k} pair ({i}, {j})"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} arrangements, 0 violations"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("pairing algebra", pairing_algebra),
        ("H-matrix", h_matrix),
        ("torus oracle", torus_oracle),
        ("bigon criterion", bigon_criterion),
        ("standard diagrams", standard_diagrams),
        ("lens spaces", lens_spaces),
        ("Morse ledger", morse_ledger),
        ("homogeneity", homogeneity),
        ("parity diagnostics", parity),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match result {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail})", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({why})", n + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
