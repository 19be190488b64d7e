//! The fact base: declared spaces, atoms, weight facts, pairings and queries.
//!
//! Text format, one declaration per line, `#` starts a comment:
//!
//! ```text
//! space S dim=2 closed-manifold connected cat=3
//! atom z homology degree=1 space=S coeff=Z
//! atom u cohomology degree=1 space=S
//! fact cwgt-lower dual(z) = 1 ; optional citation
//! pairing u with z
//! query cap(u, z)
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::expr::{type_of, Atom, ClassExpr, ClassKind, Space};
use super::{CatError, FactKind, Weight};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeclaredFact {
    pub subject: ClassExpr,
    pub kind: FactKind,
    pub value: Weight,
    pub citation: Option<String>,
}

/// A declared nonzero evaluation `<u, z>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingDecl {
    pub u: ClassExpr,
    pub z: ClassExpr,
    pub citation: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FactBase {
    spaces: BTreeMap<String, Space>,
    atoms: BTreeMap<String, Atom>,
    facts: Vec<DeclaredFact>,
    pairings: Vec<PairingDecl>,
    queries: Vec<ClassExpr>,
}

impl FactBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn space(&self, name: &str) -> Option<&Space> {
        self.spaces.get(name)
    }

    pub fn atom(&self, name: &str) -> Option<&Atom> {
        self.atoms.get(name)
    }

    pub fn spaces(&self) -> impl Iterator<Item = &Space> {
        self.spaces.values()
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.values()
    }

    pub fn facts(&self) -> &[DeclaredFact] {
        &self.facts
    }

    pub fn pairings(&self) -> &[PairingDecl] {
        &self.pairings
    }

    pub fn queries(&self) -> &[ClassExpr] {
        &self.queries
    }

    pub fn declared(&self, subject: &ClassExpr, kind: FactKind) -> Option<&DeclaredFact> {
        self.facts
            .iter()
            .find(|f| &f.subject == subject && f.kind == kind)
    }

    pub fn add_space(&mut self, space: Space) -> Result<(), CatError> {
        if self.spaces.contains_key(&space.name) {
            return Err(CatError::Parse(format!(
                "space {} declared twice",
                space.name
            )));
        }
        self.spaces.insert(space.name.clone(), space);
        Ok(())
    }

    pub fn add_atom(&mut self, atom: Atom) -> Result<(), CatError> {
        if self.atoms.contains_key(&atom.name) {
            return Err(CatError::Parse(format!(
                "atom {} declared twice",
                atom.name
            )));
        }
        if !self.spaces.contains_key(&atom.space) {
            return Err(CatError::IllTyped(format!("unknown space {}", atom.space)));
        }
        self.atoms.insert(atom.name.clone(), atom);
        Ok(())
    }

    pub fn declare(&mut self, fact: DeclaredFact) -> Result<(), CatError> {
        let t = type_of(&fact.subject, self)?;
        if fact.kind == FactKind::SwgtLower && t.kind == ClassKind::Homology && !t.closed_manifold {
            return Err(CatError::IllTyped(format!(
                "strict weight of {} needs a closed manifold",
                fact.subject
            )));
        }
        if let Some(old) = self.declared(&fact.subject, fact.kind) {
            if fact.kind == FactKind::CwgtExact && old.value != fact.value {
                return Err(CatError::Inconsistent(format!(
                    "{} declared with weights {} and {}",
                    fact.subject, old.value, fact.value
                )));
            }
            if old.value >= fact.value {
                return Ok(());
            }
            self.facts
                .retain(|f| !(f.subject == fact.subject && f.kind == fact.kind));
        }
        self.facts.push(fact);
        Ok(())
    }

    pub fn add_pairing(&mut self, pairing: PairingDecl) -> Result<(), CatError> {
        let (tu, tz) = (type_of(&pairing.u, self)?, type_of(&pairing.z, self)?);
        if tu.kind != ClassKind::Cohomology || tz.kind != ClassKind::Homology {
            return Err(CatError::IllTyped(format!(
                "pairing <{}, {}> needs a cohomology and a homology class",
                pairing.u, pairing.z
            )));
        }
        if tu.degree != tz.degree || tu.space != tz.space {
            return Err(CatError::IllTyped(format!(
                "pairing <{}, {}> mixes degrees or spaces",
                pairing.u, pairing.z
            )));
        }
        self.pairings.push(pairing);
        Ok(())
    }

    pub fn add_query(&mut self, e: ClassExpr) -> Result<(), CatError> {
        type_of(&e, self)?;
        self.queries.push(e);
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, CatError> {
        let mut fb = FactBase::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |e: CatError| match e {
                CatError::Parse(m) => CatError::Parse(format!("line {}: {m}", no + 1)),
                CatError::IllTyped(m) => CatError::IllTyped(format!("line {}: {m}", no + 1)),
                other => other,
            };
            fb.parse_line(line).map_err(at)?;
        }
        Ok(fb)
    }

    fn parse_line(&mut self, line: &str) -> Result<(), CatError> {
        let (body, citation) = match line.split_once(';') {
            Some((b, c)) => (
                b.trim(),
                Some(c.trim().to_string()).filter(|c| !c.is_empty()),
            ),
            None => (line, None),
        };
        let (head, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let rest = rest.trim();
        match head {
            "space" => {
                let mut words = rest.split_whitespace();
                let name = words
                    .next()
                    .ok_or_else(|| CatError::Parse("space needs a name".into()))?;
                let mut space = Space {
                    name: name.to_string(),
                    dim: 0,
                    closed_manifold: false,
                    connected: false,
                    cat: None,
                };
                let mut dim = None;
                for w in words {
                    match w.split_once('=') {
                        Some(("dim", v)) => dim = Some(parse_num(v)?),
                        Some(("cat", v)) => space.cat = Some(parse_num(v)? as u64),
                        None if w == "closed-manifold" => space.closed_manifold = true,
                        None if w == "connected" => space.connected = true,
                        _ => return Err(CatError::Parse(format!("unknown space attribute {w}"))),
                    }
                }
                space.dim = dim.ok_or_else(|| CatError::Parse("space needs dim=".into()))?;
                self.add_space(space)
            }
            "atom" => {
                let mut words = rest.split_whitespace();
                let name = words
                    .next()
                    .ok_or_else(|| CatError::Parse("atom needs a name".into()))?;
                let kind = match words.next() {
                    Some("homology") => ClassKind::Homology,
                    Some("cohomology") => ClassKind::Cohomology,
                    _ => {
                        return Err(CatError::Parse(
                            "atom kind must be homology or cohomology".into(),
                        ))
                    }
                };
                let (mut degree, mut space, mut coeff, mut zero) =
                    (None, None, "Z".to_string(), false);
                for w in words {
                    match w.split_once('=') {
                        Some(("degree", v)) => degree = Some(parse_num(v)?),
                        Some(("space", v)) => space = Some(v.to_string()),
                        Some(("coeff", v)) => coeff = v.to_string(),
                        None if w == "zero" => zero = true,
                        _ => return Err(CatError::Parse(format!("unknown atom attribute {w}"))),
                    }
                }
                self.add_atom(Atom {
                    name: name.to_string(),
                    kind,
                    degree: degree.ok_or_else(|| CatError::Parse("atom needs degree=".into()))?,
                    space: space.ok_or_else(|| CatError::Parse("atom needs space=".into()))?,
                    coefficients: coeff,
                    zero,
                })
            }
            "fact" => {
                let (kind, rest) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| CatError::Parse("fact needs a kind".into()))?;
                let kind = FactKind::parse(kind)?;
                let (subject, value) = rest
                    .rsplit_once('=')
                    .ok_or_else(|| CatError::Parse("fact needs '= value'".into()))?;
                self.declare(DeclaredFact {
                    subject: ClassExpr::parse(subject)?,
                    kind,
                    value: Weight::parse(value.trim())?,
                    citation,
                })
            }
            "pairing" => {
                let (u, z) = rest
                    .split_once(" with ")
                    .ok_or_else(|| CatError::Parse("pairing needs 'u with z'".into()))?;
                self.add_pairing(PairingDecl {
                    u: ClassExpr::parse(u)?,
                    z: ClassExpr::parse(z)?,
                    citation,
                })
            }
            "query" => self.add_query(ClassExpr::parse(rest)?),
            other => Err(CatError::Parse(format!("unknown declaration {other}"))),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let cite = |c: &Option<String>| c.as_ref().map(|c| format!(" ; {c}")).unwrap_or_default();
        for s in self.spaces.values() {
            let _ = write!(out, "space {} dim={}", s.name, s.dim);
            if s.closed_manifold {
                out.push_str(" closed-manifold");
            }
            if s.connected {
                out.push_str(" connected");
            }
            if let Some(c) = s.cat {
                let _ = write!(out, " cat={c}");
            }
            out.push('\n');
        }
        for a in self.atoms.values() {
            let kind = match a.kind {
                ClassKind::Homology => "homology",
                ClassKind::Cohomology => "cohomology",
            };
            let _ = write!(
                out,
                "atom {} {kind} degree={} space={} coeff={}",
                a.name, a.degree, a.space, a.coefficients
            );
            if a.zero {
                out.push_str(" zero");
            }
            out.push('\n');
        }
        for f in &self.facts {
            let _ = writeln!(
                out,
                "fact {} {} = {}{}",
                f.kind,
                f.subject,
                f.value,
                cite(&f.citation)
            );
        }
        for p in &self.pairings {
            let _ = writeln!(out, "pairing {} with {}{}", p.u, p.z, cite(&p.citation));
        }
        for q in &self.queries {
            let _ = writeln!(out, "query {q}");
        }
        out
    }
}

fn parse_num(v: &str) -> Result<usize, CatError> {
    v.parse()
        .map_err(|_| CatError::Parse(format!("expected a nonnegative integer, got {v:?}")))
}
