use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use heegaard_core::arrangement::{validate, ArrangementFile, CurveArrangement};
use heegaard_core::heegaard::{parse_diagram, HeegaardDiagram, Verdict as ReductionVerdict, PAIRING_CONVENTION};
use heegaard_core::morse::{parse_program, parse_theta, MorseProgram};

use crate::report::{Input, Outcome, Report, Verdict};
use crate::{Command, MorseCommand, Options};

const STUCK_WARNING: &str = "a stuck verdict is not a proof that the manifold differs from the 3-sphere";

/// What a command produced before files are written.
struct Done {
    verdict: Verdict,
    convention: Option<&'static str>,
    results: Value,
    warnings: Vec<String>,
    human: String,
    trace: Option<Vec<Value>>,
    output: Option<String>,
}

impl Done {
    fn ok(results: Value, human: String) -> Self {
        Done { verdict: Verdict::Ok, convention: None, results, warnings: vec![], human, trace: None, output: None }
    }
}

type Failure = Vec<String>;

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Invariants { .. } => "invariants",
            Command::Reduce { .. } => "reduce",
            Command::Pi1 { .. } => "pi1",
            Command::Homology { .. } => "homology",
            Command::Cancel { .. } => "cancel",
            Command::ReduceDiagram { .. } => "reduce-diagram",
            Command::Morse(MorseCommand::SelfIndex { .. }) => "morse self-index",
            Command::Morse(MorseCommand::Chi { .. }) => "morse chi",
            Command::Morse(MorseCommand::Cancel { .. }) => "morse cancel",
            Command::Morse(MorseCommand::ToHeegaard { .. }) => "morse to-heegaard",
        }
    }

    fn input(&self) -> &Path {
        match self {
            Command::Validate { input }
            | Command::Invariants { input }
            | Command::Reduce { input }
            | Command::Pi1 { input }
            | Command::Homology { input }
            | Command::Cancel { input }
            | Command::ReduceDiagram { input }
            | Command::Morse(
                MorseCommand::SelfIndex { input }
                | MorseCommand::Chi { input }
                | MorseCommand::Cancel { input, .. }
                | MorseCommand::ToHeegaard { input, .. },
            ) => input,
        }
    }

    fn extensions(&self) -> &'static [&'static str] {
        match self {
            Command::Validate { .. } => &["arr", "hd", "morse"],
            Command::Invariants { .. } | Command::Reduce { .. } => &["arr"],
            Command::Morse(_) => &["morse"],
            _ => &["hd"],
        }
    }
}

pub fn run(cmd: &Command, opts: &Options) -> Vec<Outcome> {
    let input = cmd.input();
    if !input.is_dir() {
        return vec![run_one(cmd, input, opts)];
    }
    if opts.output.is_some() || opts.trace.is_some() {
        return vec![Outcome::invalid(cmd.name(), vec![], vec!["--output and --trace need a single input file".into()])];
    }
    let mut files: Vec<PathBuf> = match fs::read_dir(input) {
        Ok(entries) => entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().and_then(|e| e.to_str()).is_some_and(|e| cmd.extensions().contains(&e)))
            .collect(),
        Err(e) => return vec![Outcome::invalid(cmd.name(), vec![], vec![format!("{}: {e}", input.display())])],
    };
    files.sort();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(opts.jobs.unwrap_or(1).max(1)).build() {
        Ok(p) => p,
        Err(e) => return vec![Outcome::invalid(cmd.name(), vec![], vec![e.to_string()])],
    };
    pool.install(|| files.par_iter().map(|f| run_one(cmd, f, opts)).collect())
}

fn run_one(cmd: &Command, path: &Path, opts: &Options) -> Outcome {
    let mut inputs = Vec::new();
    let text = match read(path, &mut inputs) {
        Ok(t) => t,
        Err(e) => return Outcome::invalid(cmd.name(), inputs, e),
    };
    let result = match cmd {
        Command::Validate { .. } => validate_any(path, &text),
        Command::Invariants { .. } => load_arrangement(path, &text).map(|a| invariants(&a)),
        Command::Reduce { .. } => load_arrangement(path, &text).map(|a| reduce(&a)),
        Command::Pi1 { .. } => load_diagram(path, &text).and_then(|d| pi1(&d, opts.max_tietze)),
        Command::Homology { .. } => load_diagram(path, &text).and_then(|d| homology(&d)),
        Command::Cancel { .. } => load_diagram(path, &text).and_then(|d| cancel(&d)),
        Command::ReduceDiagram { .. } => load_diagram(path, &text).map(|d| reduce_diagram(&d, opts.max_tietze)),
        Command::Morse(m) => load_program(path, &text).and_then(|p| morse(m, &p, opts, &mut inputs)),
    };
    let done = match result.and_then(|d| write_files(d, opts)) {
        Ok(d) => d,
        Err(e) => return Outcome::invalid(cmd.name(), inputs, e),
    };
    Outcome {
        report: Report {
            command: cmd.name().to_string(),
            inputs,
            verdict: done.verdict,
            convention: done.convention,
            results: done.results,
            warnings: done.warnings,
            errors: vec![],
        },
        human: done.human,
    }
}

fn read(path: &Path, inputs: &mut Vec<Input>) -> Result<String, Failure> {
    let bytes = fs::read(path).map_err(|e| vec![format!("{}: {e}", path.display())])?;
    inputs.push(Input::hash(path, &bytes));
    String::from_utf8(bytes).map_err(|e| vec![format!("{}: {e}", path.display())])
}

fn write_files(done: Done, opts: &Options) -> Result<Done, Failure> {
    let io = |p: &Path, e: std::io::Error| vec![format!("{}: {e}", p.display())];
    if let Some(p) = &opts.trace {
        let lines: String = done
            .trace
            .iter()
            .flatten()
            .map(|v| serde_json::to_string(v).expect("trace values serialize") + "\n")
            .collect();
        fs::write(p, lines).map_err(|e| io(p, e))?;
    }
    if let (Some(p), Some(text)) = (&opts.output, &done.output) {
        fs::write(p, text).map_err(|e| io(p, e))?;
    }
    Ok(done)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn load_arrangement(path: &Path, text: &str) -> Result<CurveArrangement, Failure> {
    let file: ArrangementFile = serde_json::from_str(text)
        .map_err(|e| vec![format!("{}:{}:{}: {e}", path.display(), e.line(), e.column())])?;
    validate(&file).map_err(|vs| vs.iter().map(|v| format!("{}: {v}", path.display())).collect())
}

fn load_diagram(path: &Path, text: &str) -> Result<HeegaardDiagram, Failure> {
    parse_diagram(text, &path.display().to_string(), path.parent()).map_err(|e| vec![e.to_string()])
}

fn load_program(path: &Path, text: &str) -> Result<MorseProgram, Failure> {
    parse_program(text, &path.display().to_string()).map_err(|e| vec![e.to_string()])
}

fn validate_any(path: &Path, text: &str) -> Result<Done, Failure> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("arr") => {
            let a = load_arrangement(path, text)?;
            let faces = a.faces().len();
            let results = json!({
                "kind": "arrangement",
                "genus": a.genus(),
                "crossings": a.crossing_count(),
                "arcs": a.arc_count(),
                "faces": faces,
                "regions": to_value(&a.regions()),
                "free_loops": to_value(&a.free_loops()),
                "cellular": a.is_cellular(),
                "euler_characteristic": a.euler_characteristic(),
                "algebraic_intersection": a.algebraic_intersection(),
            });
            let human = format!(
                "valid arrangement: genus {}, {} crossings, {} arcs, {} faces, euler characteristic {}{}\n",
                a.genus(),
                a.crossing_count(),
                a.arc_count(),
                faces,
                a.euler_characteristic(),
                if a.is_cellular() { "" } else { " (has non-disc regions)" }
            );
            Ok(Done::ok(results, human))
        }
        Some("hd") => {
            let d = load_diagram(path, text)?;
            let embedded: Vec<[usize; 2]> = d.embedded().keys().map(|&(i, j)| [i + 1, j + 1]).collect();
            let results = json!({
                "kind": "diagram",
                "genus": d.genus(),
                "canonical_alpha": d.has_canonical_alpha(),
                "embedded": embedded,
            });
            Ok(Done::ok(results, format!("valid diagram: genus {}, {} embedded pairs\n", d.genus(), embedded.len())))
        }
        Some("morse") => {
            let p = load_program(path, text)?;
            let results = json!({
                "kind": "morse",
                "index_counts": p.index_counts(),
                "self_indexed": p.is_self_indexed(),
                "closed": p.is_closed(),
                "hints": p.hints().count(),
            });
            let c = p.index_counts();
            Ok(Done::ok(results, format!("valid program: index counts {c:?}\n")))
        }
        _ => Err(vec![format!("{}: unknown file type, expected .arr, .hd or .morse", path.display())]),
    }
}

fn invariants(a: &CurveArrangement) -> Done {
    let red = a.minimal_position();
    let pairing = a.algebraic_intersection();
    let d = red.degree();
    let parity_ok = d as i64 >= pairing.abs() && (d as i64 - pairing.abs()) % 2 == 0;
    let results = json!({
        "genus": a.genus(),
        "crossings": a.crossing_count(),
        "algebraic_intersection": pairing,
        "degree": d,
        "removals": red.trace.len(),
        "parity_ok": parity_ok,
    });
    let mut done = Done::ok(results, format!("d = {d}, pairing = {pairing}, crossings = {}\n", a.crossing_count()));
    if !parity_ok {
        done.warnings.push(format!("degree {d} and pairing {pairing} violate the parity bound"));
    }
    done
}

fn reduce(a: &CurveArrangement) -> Done {
    let red = a.minimal_position();
    let trace: Vec<Value> = red.trace.iter().map(to_value).collect();
    let mut human = String::new();
    for s in &red.trace {
        human.push_str(&format!(
            "step {}: bigon on face {} at crossings {} and {}, {} -> {} crossings\n",
            s.step, s.face, s.corners[0], s.corners[1], s.crossings_before, s.crossings_after
        ));
    }
    human.push_str(&format!("minimal position: {} crossings\n", red.degree()));
    let file = red.arrangement.to_file();
    let results = json!({
        "crossings_before": a.crossing_count(),
        "degree": red.degree(),
        "trace": trace,
        "arrangement": to_value(&file),
    });
    let mut done = Done::ok(results, human);
    done.output = Some(serde_json::to_string_pretty(&file).expect("arrangement serializes") + "\n");
    done.trace = Some(trace);
    done
}

fn pi1(d: &HeegaardDiagram, budget: usize) -> Result<Done, Failure> {
    let p = d.pi1_presentation().map_err(|e| vec![e.to_string()])?;
    let s = p.simplify(budget);
    let results = json!({
        "presentation": p.to_string(),
        "simplified": s.presentation.to_string(),
        "moves": to_value(&s.moves),
        "exhausted": s.exhausted,
        "trivial": s.is_trivial(),
    });
    let human = format!("{p}\nsimplified: {} ({} moves)\n", s.presentation, s.moves.len());
    let mut done = Done::ok(results, human);
    if s.exhausted {
        done.warnings.push(format!("Tietze budget of {budget} moves exhausted"));
    }
    Ok(done)
}

fn homology(d: &HeegaardDiagram) -> Result<Done, Failure> {
    let m = d.h1_matrix().map_err(|e| vec![e.to_string()])?;
    let g = d.h1_group().map_err(|e| vec![e.to_string()])?;
    let results = json!({
        "pairing_matrix": to_value(&m.matrix),
        "smith": g.smith,
        "invariant_factors": g.factors,
        "group": g.to_string(),
    });
    let mut done = Done::ok(results, format!("H1 = {g}\ninvariant factors {:?}\n", g.factors));
    done.convention = Some(PAIRING_CONVENTION);
    Ok(done)
}

fn cancel(d: &HeegaardDiagram) -> Result<Done, Failure> {
    let m = d.h1_matrix().map_err(|e| vec![e.to_string()])?;
    let cert = d.cancellation_certificate().map_err(|e| vec![e.to_string()])?;
    let mut done = Done::ok(Value::Null, String::new());
    done.convention = Some(PAIRING_CONVENTION);
    let Some(cert) = cert else {
        done.verdict = Verdict::Stuck;
        done.results = json!({ "pairing_matrix": to_value(&m.matrix), "certificate": null });
        done.human = "no cancellation certificate: pairing matrix is not a signed permutation\n".into();
        return Ok(done);
    };
    match d.geometric_disjointness(&cert) {
        Ok((checked, pairs)) => {
            let good = checked.good_rows.iter().filter(|&&g| g).count();
            if good == 0 {
                done.verdict = Verdict::Stuck;
            }
            done.results = json!({
                "pairing_matrix": to_value(&m.matrix),
                "certificate": to_value(&checked),
                "pairs": to_value(&pairs),
            });
            done.human = format!("certificate found; {good} of {} rows pass the geometric check\n", d.genus());
        }
        Err(e) => {
            done.verdict = Verdict::Stuck;
            done.results = json!({
                "pairing_matrix": to_value(&m.matrix),
                "certificate": to_value(&cert),
                "geometric_error": e.to_string(),
            });
            done.human = format!("certificate found, geometric check unavailable: {e}\n");
        }
    }
    Ok(done)
}

fn reduce_diagram(d: &HeegaardDiagram, budget: usize) -> Done {
    let r = d.full_reduction(budget);
    let trace: Vec<Value> = r.steps.iter().map(to_value).collect();
    let mut human = String::new();
    for s in &r.steps {
        human.push_str(&format!(
            "step {}: genus {} -> {}, theta {} against alpha {}, {}\n",
            s.step,
            s.genus_before,
            s.genus_before - 1,
            s.theta,
            s.alpha,
            s.substitution
        ));
    }
    let mut done = Done::ok(to_value(&r), String::new());
    done.convention = Some(PAIRING_CONVENTION);
    match r.verdict {
        ReductionVerdict::TrivialDiagram => {
            done.verdict = Verdict::TrivialDiagram;
            human.push_str(&format!("trivial diagram after {} step{}\n", r.steps.len(), if r.steps.len() == 1 { "" } else { "s" }));
        }
        ReductionVerdict::Stuck => {
            done.verdict = Verdict::Stuck;
            let reason = r.stuck.as_ref().map_or("", |s| s.reason.as_str());
            human.push_str(&format!("stuck at genus {}: {reason}\n", r.final_genus));
            done.warnings.push(STUCK_WARNING.into());
        }
    }
    done.human = human;
    done.trace = Some(trace);
    done.output = Some(r.final_diagram.to_text());
    done
}

fn morse(cmd: &MorseCommand, p: &MorseProgram, opts: &Options, inputs: &mut Vec<Input>) -> Result<Done, Failure> {
    let err = |e: heegaard_core::morse::MorseError| vec![e.to_string()];
    match cmd {
        MorseCommand::SelfIndex { .. } => {
            let s = p.self_index();
            let mut done = Done::ok(json!({ "program": to_value(&s) }), s.to_text());
            done.output = Some(s.to_text());
            Ok(done)
        }
        MorseCommand::Chi { .. } => {
            let chi = p.euler_characteristic().map_err(err)?;
            let genus = p.self_index().middle_genus().ok();
            let results = json!({ "chi": chi, "index_counts": p.index_counts(), "middle_genus": genus });
            Ok(Done::ok(results, format!("chi = {chi}\n")))
        }
        MorseCommand::Cancel { first, second, .. } => {
            let index = |id: &str| p.points().iter().find(|c| c.id == id).map(|c| c.index);
            let (first, second) = if index(first) > index(second) { (second, first) } else { (first, second) };
            let out = match (index(first), index(second)) {
                (Some(2), _) | (_, Some(3)) => p.cancel_23_pair(first, second),
                _ => p.cancel_01_pair(first, second),
            }
            .map_err(err)?;
            let results = json!({
                "program": to_value(&out),
                "chi_before": p.euler_characteristic().ok(),
                "chi_after": out.euler_characteristic().ok(),
            });
            let mut done = Done::ok(results, out.to_text());
            done.output = Some(out.to_text());
            Ok(done)
        }
        MorseCommand::ToHeegaard { theta, .. } => {
            let s = p.self_index();
            let k = s.middle_genus().map_err(err)?;
            let text = read(theta, inputs)?;
            let words = parse_theta(&text, &theta.display().to_string(), k).map_err(err)?;
            let d = s.to_heegaard(words).map_err(err)?;
            let mut done = reduce_diagram(&d, opts.max_tietze);
            done.human = format!("middle genus {k}\n{}", done.human);
            done.results = json!({ "middle_genus": k, "diagram": d.to_text(), "reduction": done.results });
            done.output = Some(d.to_text());
            Ok(done)
        }
    }
}
