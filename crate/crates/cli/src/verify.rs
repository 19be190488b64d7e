//! Independent re-checking of an emitted report against its inputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;

use movcat_core::catbounds::{surface_products_table, BoundLedger, FactBase, WeightFact};
use movcat_core::complexes::{parse_presentation_file, Chain, EquivariantChainComplex};
use movcat_core::movability::{
    verify_pairing, CoefficientRing, MonodromyPoint, MovabilityVerdict, NotMovableWitness, Outcome,
};
use movcat_core::novikov::{truncated_diagonalize, verify_truncated_chain};
use movcat_core::{parse_poly, IntPoly, SignPolicy, XiOrder};

use crate::input::{load_complex, load_facts, ComplexInput};
use crate::job::{InputRef, JobSpec};
use crate::report::Verification;

type Check = Result<(), String>;

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, String> {
    v.get(key).ok_or_else(|| format!("missing field {key}"))
}

fn string<'a>(v: &'a Value, key: &str) -> Result<&'a str, String> {
    field(v, key)?
        .as_str()
        .ok_or_else(|| format!("field {key} is not a string"))
}

fn poly(s: &str, rank: usize) -> Result<IntPoly, String> {
    parse_poly(s, rank).map_err(|e| format!("{s:?}: {e}"))
}

fn polys(v: &Value, rank: usize) -> Result<Vec<IntPoly>, String> {
    v.as_array()
        .ok_or("expected a list of polynomials")?
        .iter()
        .map(|p| poly(p.as_str().ok_or("expected a polynomial string")?, rank))
        .collect()
}

fn chain(v: &Value, rank: usize) -> Result<Chain, String> {
    let degree = field(v, "degree")?
        .as_u64()
        .ok_or("chain degree is not a number")? as usize;
    Ok(Chain::new(degree, polys(field(v, "coords")?, rank)?))
}

fn rational(s: &str) -> Result<BigRational, String> {
    s.parse()
        .map_err(|_| format!("{s:?} is not a rational number"))
}

fn verdict(v: &Value, rank: usize) -> Result<MovabilityVerdict, String> {
    let ring = match string(v, "ring")? {
        "integer" => CoefficientRing::Integer,
        "rational" => CoefficientRing::Rational,
        other => return Err(format!("unknown ring {other}")),
    };
    let policy = match string(v, "policy")? {
        "strict-plus-one" => SignPolicy::StrictPlusOne,
        "plus-minus-one" => SignPolicy::PlusMinusOne,
        other => return Err(format!("unknown sign policy {other}")),
    };
    let xi = XiOrder::parse(string(v, "xi")?).map_err(|e| e.to_string())?;
    let o = field(v, "outcome")?;
    let outcome = match string(o, "kind")? {
        "movable" => Outcome::Movable {
            delta: poly(string(o, "delta")?, rank)?,
            chain: match field(o, "chain")? {
                Value::Null => None,
                c => Some(chain(c, rank)?),
            },
        },
        "not_movable" => {
            let w = field(o, "witness")?;
            let witness = match string(w, "kind")? {
                "lowest_coefficient" => NotMovableWitness::LowestCoefficient {
                    d: string(w, "d")?
                        .parse::<BigInt>()
                        .map_err(|e| e.to_string())?,
                    annihilator: polys(field(w, "annihilator")?, rank)?,
                },
                "generic_pairing" => NotMovableWitness::GenericPairing {
                    cocycle: polys(field(w, "cocycle")?, rank)?,
                    value: poly(string(w, "value")?, rank)?,
                },
                other => return Err(format!("unknown witness kind {other}")),
            };
            Outcome::NotMovable { witness }
        }
        "unknown" => Outcome::Unknown {
            radius: field(o, "radius")?
                .as_i64()
                .ok_or("radius is not a number")?,
            chain_radius: field(o, "chain_radius")?
                .as_i64()
                .ok_or("chain_radius is not a number")?,
        },
        other => return Err(format!("unknown outcome {other}")),
    };
    Ok(MovabilityVerdict {
        outcome,
        ring,
        xi,
        policy,
    })
}

fn check_verdict(ci: &ComplexInput, v: &Value) -> Check {
    let z = ci.cycle().map_err(|e| e.to_string())?;
    let verdict = verdict(v, ci.complex.rank())?;
    if &verdict.xi != ci.complex.xi() {
        return Err("verdict is for a different xi".into());
    }
    verdict.verify(&ci.complex, z).map_err(|e| e.to_string())
}

fn check_pairing(ci: &ComplexInput, v: &Value) -> Check {
    let z = ci.cycle().map_err(|e| e.to_string())?;
    let mono = MonodromyPoint::parse(string(v, "monodromy")?, ci.complex.rank())
        .map_err(|e| e.to_string())?;
    let report = field(v, "report")?;
    let claims_nonzero = field(report, "image_nonzero")?
        .as_bool()
        .ok_or("image_nonzero is not a bool")?;
    match field(report, "witness")? {
        Value::Null if claims_nonzero => Err("nonzero image without a witness".into()),
        Value::Null => Ok(()),
        w => {
            let rank = if mono.is_transcendental() {
                ci.complex.rank()
            } else {
                0
            };
            let cocycle = polys(field(w, "cocycle")?, rank)?;
            let value =
                verify_pairing(&ci.complex, z, &mono, &cocycle).map_err(|e| e.to_string())?;
            if value.to_string() != string(w, "value")? {
                return Err(format!(
                    "pairing evaluates to {value}, report says {}",
                    string(w, "value")?
                ));
            }
            Ok(())
        }
    }
}

fn check_chain(ci: &ComplexInput, v: &Value) -> Check {
    let z = ci.cycle().map_err(|e| e.to_string())?;
    let rank = ci.complex.rank();
    let verdict = verdict(field(v, "verdict")?, rank)?;
    verdict.verify(&ci.complex, z).map_err(|e| e.to_string())?;
    let ic = field(v, "chain")?;
    if ic.is_null() {
        return match verdict.outcome {
            Outcome::Movable { .. } => Err("movable cycle without an infinite chain".into()),
            _ => Ok(()),
        };
    }
    let cutoff = rational(string(ic, "cutoff")?)?;
    let c = chain(field(ic, "chain")?, rank)?;
    let (spread, residual) =
        verify_truncated_chain(&ci.complex, z, &c, &cutoff).map_err(|e| e.to_string())?;
    if spread.to_string() != string(ic, "spread")? {
        return Err(format!(
            "spread is {spread}, report says {}",
            string(ic, "spread")?
        ));
    }
    let reported = field(ic, "residual_min")?
        .as_str()
        .map(rational)
        .transpose()?;
    if reported != residual {
        return Err("residual support differs from the report".into());
    }
    Ok(())
}

fn check_diag(ci: &ComplexInput, v: &Value, job: &JobSpec) -> Check {
    let cutoff = rational(string(v, "cutoff")?)?;
    if cutoff != job.cutoff {
        return Err("diagonalization cutoff differs from the job".into());
    }
    let dc = truncated_diagonalize(&ci.complex, &cutoff);
    dc.verify(&ci.complex).map_err(|e| e.to_string())?;
    if &serde_json::to_value(&dc).expect("serializes") != v {
        return Err("recomputed diagonalization differs from the report".into());
    }
    Ok(())
}

fn check_weight(facts: &FactBase, v: &Value) -> Check {
    if v.get("trace").is_none() {
        return Ok(());
    }
    let w: WeightFact = serde_json::from_value(v.clone()).map_err(|e| e.to_string())?;
    let last = w.trace.conclusion().ok_or("empty trace")?;
    if last.subject != w.subject || last.kind != w.kind || last.value != w.value {
        return Err(format!("trace for {} concludes something else", w.subject));
    }
    w.trace.replay(facts).map_err(|e| e.to_string())
}

fn check_ledger(facts: &FactBase, v: &Value) -> Check {
    if v.is_null() {
        return Ok(());
    }
    let l: BoundLedger = serde_json::from_value(v.clone()).map_err(|e| e.to_string())?;
    l.replay(facts).map_err(|e| e.to_string())?;
    l.check_coherence().map_err(|e| e.to_string())?;
    if &serde_json::to_value(&l).expect("serializes") != v {
        return Err("ledger bounds differ from the derivations".into());
    }
    Ok(())
}

fn check_surface(v: &Value) -> Check {
    let pattern = string(v, "pattern")?
        .parse()
        .map_err(|e: movcat_core::catbounds::CatError| e.to_string())?;
    let t = surface_products_table(&pattern).map_err(|e| e.to_string())?;
    t.verify().map_err(|e| e.to_string())?;
    if &serde_json::to_value(&t).expect("serializes") != v {
        return Err(format!(
            "recomputed table for {pattern} differs from the report"
        ));
    }
    Ok(())
}

fn check_fixture(v: &Value) -> Check {
    let Some(text) = field(v, "text")?.as_str() else {
        return Ok(());
    };
    let name = string(v, "name")?;
    let fx = movcat_core::complexes::fixtures::by_name(name)
        .ok_or_else(|| format!("unknown fixture {name}"))?;
    let file = parse_presentation_file(text).map_err(|e| e.to_string())?;
    let c: EquivariantChainComplex = file.complex().map_err(|e| e.to_string())?;
    if c != fx.complex || file.cycle.as_ref() != Some(&fx.cycle) {
        return Err(format!("fixture {name} does not round-trip"));
    }
    Ok(())
}

enum Loaded {
    Complex(ComplexInput),
    Facts(FactBase),
}

/// Re-reads the inputs named in `report`, checks their digests and re-checks
/// every result.
pub fn verify_report(report: &Value, job: &JobSpec) -> Verification {
    let mut failures = Vec::new();
    let mut checked = 0;
    let inputs = report
        .get("inputs")
        .and_then(Value::as_array)
        .cloned()
        .unwrap_or_default();
    let mut loaded = Vec::new();
    for (i, info) in inputs.iter().enumerate() {
        let (Some(source), Some(name), Some(sha)) = (
            info.get("source").and_then(Value::as_str),
            info.get("name").and_then(Value::as_str),
            info.get("sha256").and_then(Value::as_str),
        ) else {
            failures.push(format!("input {i}: malformed entry"));
            loaded.push(None);
            continue;
        };
        let r = match source {
            "fixture" => InputRef::Fixture(name.to_string()),
            _ => InputRef::File(name.into()),
        };
        let result = if job.command.reads_facts() {
            load_facts(&r).map(|(info, f)| (info, Loaded::Facts(f)))
        } else {
            load_complex(&r, job.xi.as_deref()).map(|ci| (ci.info.clone(), Loaded::Complex(ci)))
        };
        match result {
            Ok((again, l)) if again.sha256 == sha => loaded.push(Some(l)),
            Ok(_) => {
                failures.push(format!(
                    "{name}: input changed since the report was written"
                ));
                loaded.push(None);
            }
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                loaded.push(None);
            }
        }
    }
    let results = report
        .get("results")
        .and_then(Value::as_array)
        .cloned()
        .unwrap_or_default();
    for (n, e) in results.iter().enumerate() {
        let kind = e.get("kind").and_then(Value::as_str).unwrap_or("");
        let value = e.get("value").unwrap_or(&Value::Null);
        let input = e.get("input").and_then(Value::as_u64).map(|i| i as usize);
        let source = input.map(|i| loaded.get(i).and_then(Option::as_ref));
        let outcome = match (kind, source) {
            ("surface-table", None) => {
                if e.get("failure").is_some() {
                    continue;
                }
                check_surface(value)
            }
            ("fixture", None) => check_fixture(value),
            (_, Some(None)) => continue,
            ("movability", Some(Some(Loaded::Complex(ci)))) => check_verdict(ci, value),
            ("pairing", Some(Some(Loaded::Complex(ci)))) => check_pairing(ci, value),
            ("chain", Some(Some(Loaded::Complex(ci)))) => check_chain(ci, value),
            ("novikov-diagonalization", Some(Some(Loaded::Complex(ci)))) => {
                check_diag(ci, value, job)
            }
            ("weight", Some(Some(Loaded::Facts(f)))) => check_weight(f, value),
            ("ledger", Some(Some(Loaded::Facts(f)))) => check_ledger(f, value),
            _ => Err(format!("unexpected result kind {kind:?}")),
        };
        checked += 1;
        if let Err(m) = outcome {
            failures.push(format!("result {n} ({kind}): {m}"));
        }
    }
    Verification { checked, failures }
}
