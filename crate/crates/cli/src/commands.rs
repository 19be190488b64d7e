//! One function per subcommand, each producing report entries.

use std::fmt::Write as _;
use std::fs;

use rayon::prelude::*;
use serde_json::{json, Value};

use movcat_core::catbounds::{
    cat_lower_bound, propagate_weights, surface_products_table, type_of, BoundLedger, CatError,
    ClassExpr, FactBase, Invariant, SpaceDescriptor, SurfacePattern, SurfaceTable, WeightFact,
};
use movcat_core::complexes::{fixtures, parse_presentation_file};
use movcat_core::movability::{
    decide_movable_field, decide_movable_int, evaluate_obstruction, CoefficientRing,
    DecisionOptions, MonodromyPoint, MovabilityVerdict, NotMovableWitness, ObstructionReport,
    Outcome,
};
use movcat_core::novikov::{
    build_infinite_chain, solve_bounding_chain, truncated_diagonalize, DiagonalizedComplex,
};

use crate::input::{load_complex, load_facts, sha256_hex, ComplexInput, InputInfo};
use crate::job::{Command, JobSpec, Mode};
use crate::report::Entry;
use crate::CliError;

pub(crate) struct Output {
    pub inputs: Vec<InputInfo>,
    pub entries: Vec<Entry>,
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("core types serialize")
}

fn entry(input: Option<usize>, kind: &'static str, value: Value, text: String) -> Entry {
    Entry {
        input,
        kind,
        conclusive: true,
        failure: None,
        value,
        text,
    }
}

fn core_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

pub(crate) fn execute(job: &JobSpec) -> Result<Output, CliError> {
    match job.command {
        Command::Movable
        | Command::FieldMovable
        | Command::Pairing
        | Command::NovikovDiag
        | Command::Chain => {
            let inputs: Vec<ComplexInput> = job
                .inputs
                .iter()
                .map(|r| load_complex(r, job.xi.as_deref()))
                .collect::<Result<_, _>>()?;
            let per_input: Vec<Vec<Entry>> = inputs
                .par_iter()
                .enumerate()
                .map(|(i, ci)| match job.command {
                    Command::Movable | Command::FieldMovable => {
                        movable(job, ci, i).map(|e| vec![e])
                    }
                    Command::Pairing => pairing(job, ci, i),
                    Command::NovikovDiag => Ok(vec![novikov_diag(job, ci, i)]),
                    _ => chain(job, ci, i).map(|e| vec![e]),
                })
                .collect::<Result<_, _>>()?;
            Ok(Output {
                inputs: inputs.into_iter().map(|ci| ci.info).collect(),
                entries: per_input.into_iter().flatten().collect(),
            })
        }
        Command::Weights | Command::Catbound => {
            let mut infos = Vec::new();
            let mut entries = Vec::new();
            for (i, r) in job.inputs.iter().enumerate() {
                let (info, facts) = load_facts(r)?;
                infos.push(info);
                if job.command == Command::Weights {
                    entries.extend(weights(job, &facts, i)?);
                } else {
                    entries.extend(catbound(&facts, i)?);
                }
            }
            Ok(Output {
                inputs: infos,
                entries,
            })
        }
        Command::Surfaces => Ok(Output {
            inputs: vec![],
            entries: surfaces(job)?,
        }),
        Command::Fixtures => fixtures_cmd(job),
    }
}

pub(crate) fn verdict_text(v: &MovabilityVerdict) -> String {
    let ring = match v.ring {
        CoefficientRing::Integer => "Z",
        CoefficientRing::Rational => "Q",
    };
    let mut s = match &v.outcome {
        Outcome::Movable { delta, chain } => {
            let mut s = format!("Movable{{Δ={delta}}} over {ring}");
            if let Some(c) = chain {
                let coords: Vec<String> = c.coords.iter().map(|p| p.to_string()).collect();
                write!(s, "\n  chain c1 with dc1 = Δ z: [{}]", coords.join(", ")).unwrap();
            }
            s
        }
        Outcome::NotMovable {
            witness: NotMovableWitness::LowestCoefficient { d, annihilator },
        } => {
            let gens: Vec<String> = annihilator.iter().map(|p| p.to_string()).collect();
            format!(
                "NotMovable{{d={d}}} over {ring}\n  annihilator generators: [{}]",
                gens.join(", ")
            )
        }
        Outcome::NotMovable {
            witness: NotMovableWitness::GenericPairing { value, .. },
        } => format!("NotMovable{{generic pairing {value}}} over {ring}"),
        Outcome::Unknown {
            radius,
            chain_radius,
        } => {
            format!("Unknown over {ring}: no certificate with exponent radius {radius} (chain radius {chain_radius})")
        }
    };
    s.push('\n');
    s
}

fn movable(job: &JobSpec, ci: &ComplexInput, i: usize) -> Result<Entry, CliError> {
    let (c, z) = (&ci.complex, ci.cycle()?);
    let verdict = if job.command == Command::FieldMovable || job.mode == Mode::Rat {
        decide_movable_field(c, z)
    } else {
        let opts = DecisionOptions {
            search_radius: job.search_box,
            ..DecisionOptions::with_policy(job.sign_policy)
        };
        decide_movable_int(c, z, &opts)
    }
    .map_err(core_err)?;
    let mut e = entry(
        Some(i),
        "movability",
        to_value(&verdict),
        verdict_text(&verdict),
    );
    e.conclusive = !matches!(verdict.outcome, Outcome::Unknown { .. });
    e.failure = verdict.verify(c, z).err().map(|x| x.to_string());
    Ok(e)
}

pub(crate) fn pairing_text(point: &str, r: &ObstructionReport) -> String {
    let mut s = format!("monodromy {point}: ");
    match &r.witness {
        Some(w) => write!(s, "image of z is nonzero, pairing value {}", w.value).unwrap(),
        None => s.push_str("image of z is zero"),
    }
    let ai = match r.algebraic_integer {
        Some(true) => "a xi-algebraic integer",
        Some(false) => "not a xi-algebraic integer",
        None => "algebraic-integer test does not apply",
    };
    write!(s, "; bundle is {ai}").unwrap();
    if r.concludes_not_movable {
        s.push_str("; z is not movable to infinity");
    }
    s.push('\n');
    s
}

fn pairing(job: &JobSpec, ci: &ComplexInput, i: usize) -> Result<Vec<Entry>, CliError> {
    let z = ci.cycle()?;
    let specs = if job.monodromy.is_empty() {
        vec!["generic".to_string()]
    } else {
        job.monodromy.clone()
    };
    specs
        .iter()
        .map(|point| {
            let mono = MonodromyPoint::parse(point, ci.complex.rank()).map_err(core_err)?;
            let r = evaluate_obstruction(&ci.complex, z, &mono).map_err(core_err)?;
            Ok(entry(
                Some(i),
                "pairing",
                json!({ "monodromy": point, "report": to_value(&r) }),
                pairing_text(point, &r),
            ))
        })
        .collect()
}

fn diag_text(dc: &DiagonalizedComplex) -> String {
    let mut s = format!(
        "cutoff {}{}\n",
        dc.cutoff,
        if dc.complete { "" } else { " (incomplete)" }
    );
    for b in &dc.blocks {
        let entries: Vec<String> = b
            .pivots
            .iter()
            .map(|p| p.entry.body().to_string())
            .collect();
        writeln!(
            s,
            "  d_{}: mu = {}, diagonal [{}]",
            b.degree,
            b.mu(),
            entries.join(", ")
        )
        .unwrap();
    }
    s
}

fn novikov_diag(job: &JobSpec, ci: &ComplexInput, i: usize) -> Entry {
    let dc = truncated_diagonalize(&ci.complex, &job.cutoff);
    let mut e = entry(
        Some(i),
        "novikov-diagonalization",
        to_value(&dc),
        diag_text(&dc),
    );
    e.conclusive = dc.complete;
    e.failure = dc.verify(&ci.complex).err().map(|x| x.to_string());
    e
}

fn chain(job: &JobSpec, ci: &ComplexInput, i: usize) -> Result<Entry, CliError> {
    let (c, z) = (&ci.complex, ci.cycle()?);
    let opts = DecisionOptions {
        search_radius: job.search_box,
        ..DecisionOptions::with_policy(job.sign_policy)
    };
    let verdict = decide_movable_int(c, z, &opts).map_err(core_err)?;
    let mut text = verdict_text(&verdict);
    let Outcome::Movable { delta, chain: c1 } = &verdict.outcome else {
        let mut e = entry(
            Some(i),
            "chain",
            json!({ "verdict": to_value(&verdict), "chain": null }),
            text,
        );
        e.conclusive = verdict.is_not_movable();
        return Ok(e);
    };
    let c1 = match c1 {
        Some(c1) => c1.clone(),
        None => solve_bounding_chain(c, z, delta).map_err(core_err)?,
    };
    let mut e = match build_infinite_chain(c, z, delta, &c1, &job.cutoff, job.sign_policy) {
        Ok(ic) => {
            writeln!(
                text,
                "truncated c' at cutoff {} with {} terms (spread {}, dc' - z starts at {})",
                ic.cutoff,
                ic.terms,
                ic.spread,
                ic.residual_min
                    .as_ref()
                    .map_or("nowhere".to_string(), |m| m.to_string())
            )
            .unwrap();
            for (cell, p) in c.labels(ic.chain.degree).iter().zip(&ic.chain.coords) {
                writeln!(text, "  {cell}: {p}").unwrap();
            }
            entry(
                Some(i),
                "chain",
                json!({ "verdict": to_value(&verdict), "chain": to_value(&ic) }),
                text,
            )
        }
        Err(err) => {
            let mut e = entry(
                Some(i),
                "chain",
                json!({ "verdict": to_value(&verdict), "chain": null }),
                text,
            );
            e.failure = Some(err.to_string());
            e
        }
    };
    e.conclusive = true;
    Ok(e)
}

fn cat_failure(e: CatError) -> Result<String, CliError> {
    match e {
        CatError::Parse(_) | CatError::IllTyped(_) => Err(core_err(e)),
        other => Ok(other.to_string()),
    }
}

pub(crate) fn weight_text(w: &WeightFact) -> String {
    let rel = match w.kind {
        movcat_core::catbounds::FactKind::CwgtExact => "=",
        _ => ">=",
    };
    let name = match w.kind {
        movcat_core::catbounds::FactKind::SwgtLower => "swgt",
        _ => "cwgt",
    };
    let mut s = format!("{name}({}) {rel} {}\n", w.subject, w.value);
    for st in &w.trace.steps {
        let prem: Vec<String> = st.premises.iter().map(|p| p.to_string()).collect();
        writeln!(
            s,
            "  [{}] {} {} {}  by {} from [{}]",
            st.id,
            st.kind,
            st.subject,
            st.value,
            to_value(&st.rule).as_str().unwrap_or_default(),
            prem.join(", ")
        )
        .unwrap();
    }
    s
}

fn weights(job: &JobSpec, facts: &FactBase, i: usize) -> Result<Vec<Entry>, CliError> {
    let mut exprs: Vec<ClassExpr> = facts.queries().to_vec();
    for e in &job.exprs {
        exprs.push(ClassExpr::parse(e).map_err(core_err)?);
    }
    exprs
        .iter()
        .map(|e| match propagate_weights(facts, e) {
            Ok(w) => {
                let mut en = entry(Some(i), "weight", to_value(&w), weight_text(&w));
                en.failure = w.trace.replay(facts).err().map(|x| x.to_string());
                Ok(en)
            }
            Err(err) => {
                let mut en = entry(
                    Some(i),
                    "weight",
                    json!({ "subject": e.to_string() }),
                    format!("{e}\n"),
                );
                en.failure = Some(cat_failure(err)?);
                Ok(en)
            }
        })
        .collect()
}

pub(crate) fn ledger_text(l: &BoundLedger) -> String {
    let mut s = format!("{} (dim {})\n", l.space.name, l.space.dim);
    for inv in Invariant::ALL {
        let (lo, hi) = (l.lower(inv), l.upper(inv));
        if lo.is_none() && hi.is_none() {
            continue;
        }
        let show = |x: Option<u64>| x.map_or("?".to_string(), |v| v.to_string());
        writeln!(s, "  {} <= {inv} <= {}", show(lo), show(hi)).unwrap();
    }
    s
}

fn catbound(facts: &FactBase, i: usize) -> Result<Vec<Entry>, CliError> {
    let mut ledgers: Vec<BoundLedger> = Vec::new();
    let mut failures = Vec::new();
    for p in facts.pairings() {
        let t = type_of(&p.z, facts).map_err(core_err)?;
        let pos = match ledgers.iter().position(|l| l.space.name == t.space) {
            Some(pos) => pos,
            None => {
                let mut l = BoundLedger::new(SpaceDescriptor {
                    name: t.space.clone(),
                    dim: t.dim,
                    connected: t.connected,
                    xi_zero: false,
                });
                if let Some(cat) = facts.space(&t.space).and_then(|s| s.cat) {
                    if let Err(e) =
                        l.declare_exact(Invariant::Cat, cat, "declared in the fact base")
                    {
                        failures.push(cat_failure(e)?);
                    }
                }
                ledgers.push(l);
                ledgers.len() - 1
            }
        };
        match cat_lower_bound(facts, p).and_then(|d| ledgers[pos].record(d)) {
            Ok(_) => {}
            Err(e) => failures.push(format!("pairing {} with {}: {}", p.u, p.z, cat_failure(e)?)),
        }
    }
    let mut out: Vec<Entry> = ledgers
        .iter()
        .map(|l| entry(Some(i), "ledger", to_value(l), ledger_text(l)))
        .collect();
    if !failures.is_empty() {
        let mut e = entry(Some(i), "ledger", Value::Null, String::new());
        e.failure = Some(failures.join("; "));
        out.push(e);
    }
    Ok(out)
}

pub(crate) fn table_text(t: &SurfaceTable) -> String {
    format!(
        "{}: k={} r={} cat1={} ccat1={} cat(M,xi)={} difference={} {}\n",
        t.pattern,
        t.k,
        t.r,
        t.cat1,
        t.ccat1,
        t.cat_xi,
        t.difference,
        if t.closed { "closed" } else { "OPEN" }
    )
}

pub(crate) fn all_patterns(job: &JobSpec) -> Result<Vec<SurfacePattern>, CliError> {
    let mut patterns: Vec<SurfacePattern> = job
        .patterns
        .iter()
        .map(|p| p.parse().map_err(core_err))
        .collect::<Result<_, _>>()?;
    if let Some(k) = job.all_up_to {
        for n in 1..=k {
            patterns.extend(SurfacePattern::enumerate(n, &[2, 3]));
        }
    }
    Ok(patterns)
}

fn surfaces(job: &JobSpec) -> Result<Vec<Entry>, CliError> {
    let patterns = all_patterns(job)?;
    Ok(patterns
        .par_iter()
        .map(|p| match surface_products_table(p) {
            Ok(t) => entry(None, "surface-table", to_value(&t), table_text(&t)),
            Err(e) => {
                let mut en = entry(
                    None,
                    "surface-table",
                    json!({ "pattern": p.to_string() }),
                    format!("{p}\n"),
                );
                en.failure = Some(e.to_string());
                en
            }
        })
        .collect())
}

fn fixtures_cmd(job: &JobSpec) -> Result<Output, CliError> {
    let corpus = fixtures::corpus();
    let names: Vec<String> = job
        .inputs
        .iter()
        .map(|r| match r {
            crate::job::InputRef::Fixture(n) => Ok(n.clone()),
            crate::job::InputRef::File(p) => Err(CliError::Input(format!(
                "{}: the fixtures command takes --fixture names",
                p.display()
            ))),
        })
        .collect::<Result<_, _>>()?;
    let selected: Vec<_> = if names.is_empty() {
        corpus
    } else {
        names
            .iter()
            .map(|n| {
                fixtures::by_name(n).ok_or_else(|| CliError::Input(format!("unknown fixture {n}")))
            })
            .collect::<Result<_, _>>()?
    };
    if let Some(dir) = &job.out {
        fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
    }
    let mut entries = Vec::new();
    for fx in selected {
        let Some(file) = &fx.file else {
            entries.push(entry(
                None,
                "fixture",
                json!({ "name": fx.name, "text": null }),
                format!(
                    "# fixture {}: a product complex without a presentation\n",
                    fx.name
                ),
            ));
            continue;
        };
        let text = file.to_text();
        let round_trip = parse_presentation_file(&text)
            .and_then(|f| Ok((f.complex()?, f.cycle)))
            .map_err(|e| e.to_string())
            .and_then(|(c, z)| {
                if c == fx.complex && z.as_ref() == Some(&fx.cycle) {
                    Ok(())
                } else {
                    Err("re-parsed fixture differs".to_string())
                }
            });
        let shown = match &job.out {
            Some(dir) => {
                let path = dir.join(format!("{}.pres", fx.name));
                fs::write(&path, &text)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                format!("wrote {}\n", path.display())
            }
            None => format!("# fixture {}\n{text}", fx.name),
        };
        let mut e = entry(
            None,
            "fixture",
            json!({ "name": fx.name, "sha256": sha256_hex(text.as_bytes()), "text": text }),
            shown,
        );
        e.failure = round_trip.err();
        entries.push(e);
    }
    Ok(Output {
        inputs: vec![],
        entries,
    })
}
