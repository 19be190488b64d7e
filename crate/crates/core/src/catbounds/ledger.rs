//! Lower and upper bounds on `cat`, `cat(X, xi)`, `cat^1` and `ccat^1`, each
//! with the derivation that justifies it.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::weights::WeightFact;
use super::{CatError, ClassExpr, FactBase, FactKind, PairingDecl, Weight};
use crate::movability::ObstructionReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Invariant {
    /// Lusternik-Schnirelmann category of the space.
    Cat,
    CatXi,
    Cat1,
    Ccat1,
}

impl Invariant {
    pub const ALL: [Invariant; 4] = [
        Invariant::Cat,
        Invariant::CatXi,
        Invariant::Cat1,
        Invariant::Ccat1,
    ];
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Invariant::Cat => "cat(X)",
            Invariant::CatXi => "cat(X,xi)",
            Invariant::Cat1 => "cat1(X,xi)",
            Invariant::Ccat1 => "ccat1(X,xi)",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    pub name: String,
    pub dim: usize,
    pub connected: bool,
    /// Whether the class xi vanishes.
    pub xi_zero: bool,
}

impl SpaceDescriptor {
    /// `X × Y` with `xi = xi_X × 1 + 1 × xi_Y`.
    pub fn product(&self, other: &SpaceDescriptor) -> SpaceDescriptor {
        SpaceDescriptor {
            name: format!("{}×{}", self.name, other.name),
            dim: self.dim + other.dim,
            connected: self.connected && other.connected,
            xi_zero: self.xi_zero && other.xi_zero,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundRule {
    Declared,
    WeightPlusOne,
    CupPairing,
    Obstruction,
    TrivialClassObstruction,
    CatXiBelowCat1,
    Cat1BelowCat,
    Cat1BelowCcat1,
    Ccat1BelowCatMinusOne,
    TrivialClassCcat1,
    TrivialClassCat1,
    TrivialClassCatXi,
    DimensionBound,
    ProductInequality,
}

impl BoundRule {
    pub fn statement(&self) -> &'static str {
        match self {
            BoundRule::Declared => "imported value with citation",
            BoundRule::WeightPlusOne => "cat(X) >= cwgt(z) + 1 for a nonzero class z",
            BoundRule::CupPairing => "cat(X) >= cwgt(z) + cwgt(u) + 1 when <u, z> != 0",
            BoundRule::Obstruction => {
                "cat1(X,xi) >= cwgt(z) + k + 1 for a nonzero pairing against a bundle that is not a xi-algebraic integer and k untwisted classes of positive degree"
            }
            BoundRule::TrivialClassObstruction => {
                "cat(X) >= cwgt(z) + k + 1 when xi = 0 and <u_1 ∪ ... ∪ u_k, z> != 0"
            }
            BoundRule::CatXiBelowCat1 => "cat(X,xi) <= cat1(X,xi)",
            BoundRule::Cat1BelowCat => "cat1(X,xi) <= cat(X)",
            BoundRule::Cat1BelowCcat1 => "cat1(X,xi) <= ccat1(X,xi)",
            BoundRule::Ccat1BelowCatMinusOne => "ccat1(X,xi) <= cat(X) - 1 for connected X and xi != 0",
            BoundRule::TrivialClassCcat1 => "ccat1(X,0) = cat(X)",
            BoundRule::TrivialClassCat1 => "cat1(X,0) = cat(X)",
            BoundRule::TrivialClassCatXi => "cat(X,0) = cat(X)",
            BoundRule::DimensionBound => {
                "cat1(X,xi) <= dim X for xi != 0 (applied to connected spaces only)"
            }
            BoundRule::ProductInequality => {
                "ccat1(X×Y,xi) <= ccat1(X,xi_X) + ccat1(Y,xi_Y) - 1 when one of the two is positive"
            }
        }
    }
}

/// A reference to a derivation, in this ledger or in one of its factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Premise {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<usize>,
    pub id: usize,
}

impl Premise {
    fn local(id: usize) -> Self {
        Premise { factor: None, id }
    }
}

/// One factor's contribution to a product pairing.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorPairing {
    pub label: String,
    /// Twisted factors pair against the flat bundle; the others contribute an
    /// untwisted class of degree `degree`.
    pub twisted: bool,
    pub degree: usize,
    pub report: ObstructionReport,
}

/// A nonzero pairing `<u ∪ u_1 ∪ ... ∪ u_k, p_*(z)>` assembled from factor pairings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionCertificate {
    pub factors: Vec<FactorPairing>,
}

impl ObstructionCertificate {
    /// Checks the certificate and returns the number `k` of untwisted classes.
    pub fn check(&self, xi_zero: bool) -> Result<u64, CatError> {
        let reject = |m: String| Err(CatError::ObstructionRejected(m));
        if self.factors.is_empty() {
            return reject("no factor pairings".into());
        }
        for f in &self.factors {
            let nonzero = f
                .report
                .witness
                .as_ref()
                .is_some_and(|w| !w.value.is_zero());
            if !f.report.image_nonzero || !nonzero {
                return reject(format!("{}: the pairing vanishes", f.label));
            }
            match f.report.algebraic_integer {
                Some(false) => {}
                Some(true) => {
                    return reject(format!("{}: the bundle is a xi-algebraic integer", f.label))
                }
                None => {
                    return reject(format!(
                        "{}: the algebraic-integer test does not apply",
                        f.label
                    ))
                }
            }
            if !f.twisted && f.degree == 0 {
                return reject(format!(
                    "{}: untwisted classes need positive degree",
                    f.label
                ));
            }
        }
        let twisted = self.factors.iter().any(|f| f.twisted);
        if xi_zero && twisted {
            return reject("a twisted factor over a trivial class".into());
        }
        if !xi_zero && !twisted {
            return reject("no factor carries the flat bundle".into());
        }
        Ok(self.factors.iter().filter(|f| !f.twisted).count() as u64)
    }
}

/// Deserialized derivations carry no obstruction certificate; their replay
/// fails for the obstruction rules.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Derivation {
    pub id: usize,
    pub rule: BoundRule,
    pub invariant: Invariant,
    pub side: Side,
    pub value: u64,
    pub premises: Vec<Premise>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weights: Vec<WeightFact>,
    /// Number of untwisted positive-degree classes in an obstruction.
    #[serde(default)]
    pub extra: u64,
    #[serde(skip_deserializing, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
}

impl Derivation {
    fn new(rule: BoundRule, invariant: Invariant, side: Side, value: u64) -> Self {
        Derivation {
            id: 0,
            rule,
            invariant,
            side,
            value,
            premises: vec![],
            weights: vec![],
            extra: 0,
            obstruction: None,
            citation: None,
        }
    }

    pub fn declared(invariant: Invariant, side: Side, value: u64, citation: &str) -> Self {
        Derivation {
            citation: Some(citation.to_string()),
            ..Derivation::new(BoundRule::Declared, invariant, side, value)
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Condition {
    Always,
    ConnectedNonzero,
    TrivialClass,
}

struct Transfer {
    rule: BoundRule,
    from: (Invariant, Side),
    to: (Invariant, Side),
    offset: i64,
    when: Condition,
}

const fn tr(
    rule: BoundRule,
    from: (Invariant, Side),
    to: (Invariant, Side),
    offset: i64,
    when: Condition,
) -> Transfer {
    Transfer {
        rule,
        from,
        to,
        offset,
        when,
    }
}

use Condition::*;
use Invariant::*;
use Side::*;

const TRANSFERS: [Transfer; 16] = [
    tr(
        BoundRule::CatXiBelowCat1,
        (CatXi, Lower),
        (Cat1, Lower),
        0,
        Always,
    ),
    tr(
        BoundRule::CatXiBelowCat1,
        (Cat1, Upper),
        (CatXi, Upper),
        0,
        Always,
    ),
    tr(
        BoundRule::Cat1BelowCat,
        (Cat1, Lower),
        (Cat, Lower),
        0,
        Always,
    ),
    tr(
        BoundRule::Cat1BelowCat,
        (Cat, Upper),
        (Cat1, Upper),
        0,
        Always,
    ),
    tr(
        BoundRule::Cat1BelowCcat1,
        (Cat1, Lower),
        (Ccat1, Lower),
        0,
        Always,
    ),
    tr(
        BoundRule::Cat1BelowCcat1,
        (Ccat1, Upper),
        (Cat1, Upper),
        0,
        Always,
    ),
    tr(
        BoundRule::Ccat1BelowCatMinusOne,
        (Cat, Upper),
        (Ccat1, Upper),
        -1,
        ConnectedNonzero,
    ),
    tr(
        BoundRule::Ccat1BelowCatMinusOne,
        (Ccat1, Lower),
        (Cat, Lower),
        1,
        ConnectedNonzero,
    ),
    tr(
        BoundRule::TrivialClassCcat1,
        (Cat, Lower),
        (Ccat1, Lower),
        0,
        TrivialClass,
    ),
    tr(
        BoundRule::TrivialClassCcat1,
        (Cat, Upper),
        (Ccat1, Upper),
        0,
        TrivialClass,
    ),
    tr(
        BoundRule::TrivialClassCcat1,
        (Ccat1, Lower),
        (Cat, Lower),
        0,
        TrivialClass,
    ),
    tr(
        BoundRule::TrivialClassCcat1,
        (Ccat1, Upper),
        (Cat, Upper),
        0,
        TrivialClass,
    ),
    tr(
        BoundRule::TrivialClassCat1,
        (Cat, Lower),
        (Cat1, Lower),
        0,
        TrivialClass,
    ),
    tr(
        BoundRule::TrivialClassCat1,
        (Cat1, Upper),
        (Cat, Upper),
        0,
        TrivialClass,
    ),
    tr(
        BoundRule::TrivialClassCatXi,
        (Cat, Lower),
        (CatXi, Lower),
        0,
        TrivialClass,
    ),
    tr(
        BoundRule::TrivialClassCatXi,
        (CatXi, Upper),
        (Cat, Upper),
        0,
        TrivialClass,
    ),
];

fn holds(when: Condition, space: &SpaceDescriptor) -> bool {
    match when {
        Always => true,
        ConnectedNonzero => space.connected && !space.xi_zero,
        TrivialClass => space.xi_zero,
    }
}

fn shift(v: u64, offset: i64) -> Option<u64> {
    v.checked_add_signed(offset)
}

/// Per-invariant bounds for one space.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundLedger {
    pub space: SpaceDescriptor,
    pub derivations: Vec<Derivation>,
    /// Ledgers of the factors, for spaces assembled by the product rule.
    pub factors: Vec<BoundLedger>,
}

#[derive(Serialize)]
struct BoundSummary {
    invariant: Invariant,
    #[serde(skip_serializing_if = "Option::is_none")]
    lower: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    upper: Option<u64>,
}

impl Serialize for BoundLedger {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            space: &'a SpaceDescriptor,
            bounds: Vec<BoundSummary>,
            derivations: &'a [Derivation],
            #[serde(skip_serializing_if = "<[BoundLedger]>::is_empty")]
            factors: &'a [BoundLedger],
        }
        View {
            space: &self.space,
            bounds: Invariant::ALL
                .into_iter()
                .map(|invariant| BoundSummary {
                    invariant,
                    lower: self.lower(invariant),
                    upper: self.upper(invariant),
                })
                .collect(),
            derivations: &self.derivations,
            factors: &self.factors,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BoundLedger {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct View {
            space: SpaceDescriptor,
            derivations: Vec<Derivation>,
            #[serde(default)]
            factors: Vec<BoundLedger>,
        }
        let v = View::deserialize(d)?;
        Ok(BoundLedger {
            space: v.space,
            derivations: v.derivations,
            factors: v.factors,
        })
    }
}

impl BoundLedger {
    pub fn new(space: SpaceDescriptor) -> Self {
        BoundLedger {
            space,
            derivations: vec![],
            factors: vec![],
        }
    }

    pub fn best(&self, invariant: Invariant, side: Side) -> Option<&Derivation> {
        let candidates = self
            .derivations
            .iter()
            .filter(|d| d.invariant == invariant && d.side == side);
        match side {
            Lower => candidates.rev().max_by_key(|d| d.value),
            Upper => candidates.rev().min_by_key(|d| d.value),
        }
    }

    pub fn lower(&self, invariant: Invariant) -> Option<u64> {
        self.best(invariant, Lower).map(|d| d.value)
    }

    pub fn upper(&self, invariant: Invariant) -> Option<u64> {
        self.best(invariant, Upper).map(|d| d.value)
    }

    /// The common value when the lower and upper bounds meet.
    pub fn exact(&self, invariant: Invariant) -> Option<u64> {
        self.lower(invariant)
            .filter(|&l| self.upper(invariant) == Some(l))
    }

    fn improves(&self, invariant: Invariant, side: Side, v: u64) -> bool {
        match (side, self.best(invariant, side)) {
            (_, None) => true,
            (Lower, Some(d)) => v > d.value,
            (Upper, Some(d)) => v < d.value,
        }
    }

    /// Appends a derivation after checking it against the ledger.
    pub fn record(&mut self, mut d: Derivation) -> Result<usize, CatError> {
        d.id = self.derivations.len();
        self.check(&d, None)?;
        self.derivations.push(d);
        self.check_coherence()?;
        Ok(self.derivations.len() - 1)
    }

    /// Declares an exact value as a matching pair of bounds.
    pub fn declare_exact(
        &mut self,
        invariant: Invariant,
        value: u64,
        citation: &str,
    ) -> Result<(), CatError> {
        self.record(Derivation::declared(invariant, Lower, value, citation))?;
        self.record(Derivation::declared(invariant, Upper, value, citation))?;
        Ok(())
    }

    /// Applies the unary comparison rules until no bound improves.
    pub fn close(&mut self) -> Result<(), CatError> {
        let mut changed = true;
        while changed {
            changed = false;
            for t in &TRANSFERS {
                if !holds(t.when, &self.space) {
                    continue;
                }
                let Some(src) = self.best(t.from.0, t.from.1) else {
                    continue;
                };
                let Some(v) = shift(src.value, t.offset) else {
                    continue;
                };
                if self.improves(t.to.0, t.to.1, v) {
                    let d = Derivation {
                        premises: vec![Premise::local(src.id)],
                        ..Derivation::new(t.rule, t.to.0, t.to.1, v)
                    };
                    self.record(d)?;
                    changed = true;
                }
            }
            let dim = self.space.dim as u64;
            if holds(ConnectedNonzero, &self.space) && self.improves(Cat1, Upper, dim) {
                self.record(Derivation::new(BoundRule::DimensionBound, Cat1, Upper, dim))?;
                changed = true;
            }
        }
        Ok(())
    }

    /// Lower bounds never exceed upper bounds.
    pub fn check_coherence(&self) -> Result<(), CatError> {
        for inv in Invariant::ALL {
            if let (Some(l), Some(u)) = (self.lower(inv), self.upper(inv)) {
                if l > u {
                    return Err(CatError::Incoherent(format!(
                        "{}: {inv} >= {l} but {inv} <= {u}",
                        self.space.name
                    )));
                }
            }
        }
        for f in &self.factors {
            f.check_coherence()?;
        }
        Ok(())
    }

    fn premise(&self, p: &Premise, before: usize) -> Result<&Derivation, String> {
        match p.factor {
            None if p.id < before => Ok(&self.derivations[p.id]),
            None => Err(format!("premise {} is not an earlier derivation", p.id)),
            Some(f) => self
                .factors
                .get(f)
                .and_then(|l| l.derivations.get(p.id))
                .ok_or_else(|| format!("no derivation {} in factor {f}", p.id)),
        }
    }

    /// Recomputes the value a derivation claims.
    fn check(&self, d: &Derivation, facts: Option<&FactBase>) -> Result<(), CatError> {
        let bad = |m: String| {
            CatError::Replay(format!(
                "{} derivation {} ({:?}): {m}",
                self.space.name, d.id, d.rule
            ))
        };
        let want = |inv: Invariant, side: Side| {
            if (d.invariant, d.side) == (inv, side) {
                Ok(())
            } else {
                Err(bad(format!(
                    "concludes {:?} {} instead of {:?} {inv}",
                    d.side, d.invariant, side
                )))
            }
        };
        let weight = |i: usize| -> Result<u64, CatError> {
            let w = d
                .weights
                .get(i)
                .ok_or_else(|| bad("missing weight fact".into()))?;
            if let Some(facts) = facts {
                check_weight_fact(w, facts).map_err(|e| bad(e.to_string()))?;
            }
            w.cwgt_lower()
                .and_then(Weight::finite)
                .ok_or_else(|| bad(format!("no finite weight for {}", w.subject)))
        };
        let expected = match d.rule {
            BoundRule::Declared => {
                if d.citation.as_deref().is_none_or(str::is_empty) {
                    return Err(bad("declared values need a citation".into()));
                }
                d.value
            }
            BoundRule::WeightPlusOne => {
                want(Cat, Lower)?;
                weight(0)? + 1
            }
            BoundRule::CupPairing => {
                want(Cat, Lower)?;
                let (z, u) = (weight(0)?, weight(1)?);
                if let Some(facts) = facts {
                    let (zs, us) = (&d.weights[0].subject, &d.weights[1].subject);
                    if !facts.pairings().iter().any(|p| &p.u == us && &p.z == zs) {
                        return Err(bad(format!("no declared pairing of {us} with {zs}")));
                    }
                }
                z + u + 1
            }
            BoundRule::Obstruction | BoundRule::TrivialClassObstruction => {
                if d.rule == BoundRule::Obstruction {
                    want(Cat1, Lower)?;
                } else {
                    want(Cat, Lower)?;
                }
                if (d.rule == BoundRule::TrivialClassObstruction) != self.space.xi_zero {
                    return Err(bad("rule does not match the class xi".into()));
                }
                let cert = d
                    .obstruction
                    .as_ref()
                    .ok_or_else(|| bad("missing certificate".into()))?;
                let k = cert.check(self.space.xi_zero)?;
                if k != d.extra {
                    return Err(bad(format!(
                        "certificate has {k} untwisted classes, derivation says {}",
                        d.extra
                    )));
                }
                weight(0)? + k + 1
            }
            BoundRule::DimensionBound => {
                want(Cat1, Upper)?;
                if !holds(ConnectedNonzero, &self.space) {
                    return Err(bad("needs a connected space and xi != 0".into()));
                }
                self.space.dim as u64
            }
            BoundRule::ProductInequality => {
                want(Ccat1, Upper)?;
                if self.factors.len() != 2 || d.premises.len() != 3 {
                    return Err(bad("needs two factors and three premises".into()));
                }
                let expected_space = self.factors[0].space.product(&self.factors[1].space);
                if expected_space != self.space {
                    return Err(bad("space is not the product of the factors".into()));
                }
                let mut sum = 0;
                for (i, p) in d.premises[..2].iter().enumerate() {
                    let q = self.premise(p, d.id).map_err(bad)?;
                    if p.factor != Some(i) || (q.invariant, q.side) != (Ccat1, Upper) {
                        return Err(bad("premises must be factor upper bounds on ccat1".into()));
                    }
                    sum += q.value;
                }
                let pos = self.premise(&d.premises[2], d.id).map_err(bad)?;
                if d.premises[2].factor.is_none()
                    || (pos.invariant, pos.side) != (Ccat1, Lower)
                    || pos.value == 0
                {
                    return Err(bad(
                        "needs a positive lower bound on ccat1 of a factor".into()
                    ));
                }
                sum.checked_sub(1)
                    .ok_or_else(|| bad("factor bounds are zero".into()))?
            }
            rule => {
                let t = TRANSFERS
                    .iter()
                    .find(|t| t.rule == rule && t.to == (d.invariant, d.side))
                    .ok_or_else(|| bad("rule does not conclude this bound".into()))?;
                if !holds(t.when, &self.space) {
                    return Err(bad("side condition fails".into()));
                }
                let [p] = d.premises.as_slice() else {
                    return Err(bad("needs one premise".into()));
                };
                let q = self.premise(p, d.id).map_err(bad)?;
                if p.factor.is_some() || (q.invariant, q.side) != t.from {
                    return Err(bad(format!(
                        "premise must bound {:?} {}",
                        t.from.1, t.from.0
                    )));
                }
                shift(q.value, t.offset).ok_or_else(|| bad("bound underflows".into()))?
            }
        };
        if expected != d.value {
            return Err(bad(format!(
                "reproduces {expected}, ledger says {}",
                d.value
            )));
        }
        Ok(())
    }

    /// Re-validates every derivation, including weight traces and factor ledgers.
    pub fn replay(&self, facts: &FactBase) -> Result<(), CatError> {
        for f in &self.factors {
            f.replay(facts)?;
        }
        for (i, d) in self.derivations.iter().enumerate() {
            if d.id != i {
                return Err(CatError::Replay(format!(
                    "{}: derivation ids are not sequential",
                    self.space.name
                )));
            }
            self.check(d, Some(facts))?;
        }
        self.check_coherence()
    }
}

fn check_weight_fact(w: &WeightFact, facts: &FactBase) -> Result<(), CatError> {
    let c = w
        .trace
        .conclusion()
        .ok_or_else(|| CatError::Replay(format!("empty trace for {}", w.subject)))?;
    if c.subject != w.subject || c.kind != w.kind || c.value != w.value {
        return Err(CatError::Replay(format!(
            "trace for {} concludes something else",
            w.subject
        )));
    }
    w.trace.replay(facts)
}

/// `cat(X) >= cwgt(z) + cwgt(u) + 1` from a declared nonzero pairing.
pub fn cat_lower_bound(facts: &FactBase, pairing: &PairingDecl) -> Result<Derivation, CatError> {
    let zf = super::propagate_weights(facts, &pairing.z)?;
    let uf = super::propagate_weights(facts, &pairing.u)?;
    let (Some(z), Some(u)) = (
        zf.cwgt_lower().and_then(Weight::finite),
        uf.cwgt_lower().and_then(Weight::finite),
    ) else {
        return Err(CatError::Inconsistent(format!(
            "{} pairs nontrivially with {} but has infinite weight",
            pairing.u, pairing.z
        )));
    };
    Ok(Derivation {
        weights: vec![zf, uf],
        citation: pairing.citation.clone(),
        ..Derivation::new(BoundRule::CupPairing, Cat, Lower, z + u + 1)
    })
}

/// `cat(X) >= cwgt(z) + 1` for a class known to be nonzero.
pub fn cat_weight_bound(facts: &FactBase, z: &ClassExpr) -> Result<Derivation, CatError> {
    let zf = super::propagate_weights(facts, z)?;
    let w = zf
        .cwgt_lower()
        .and_then(Weight::finite)
        .ok_or_else(|| CatError::Inconsistent(format!("{z} has infinite weight")))?;
    Ok(Derivation {
        weights: vec![zf],
        ..Derivation::new(BoundRule::WeightPlusOne, Cat, Lower, w + 1)
    })
}

/// `cat^1(X, xi) >= cwgt(z) + k + 1`, or `cat(X) >= cwgt(z) + k + 1` when xi = 0.
pub fn cat1_lower_bound(
    obstruction: ObstructionCertificate,
    zfact: WeightFact,
    space: &SpaceDescriptor,
) -> Result<Derivation, CatError> {
    let k = obstruction.check(space.xi_zero)?;
    if zfact.kind == FactKind::SwgtLower {
        return Err(CatError::IllTyped("the weight fact must bound cwgt".into()));
    }
    let w = zfact.value.finite().ok_or_else(|| {
        CatError::ObstructionRejected(format!("{} is the zero class", zfact.subject))
    })?;
    let (rule, invariant) = if space.xi_zero {
        (BoundRule::TrivialClassObstruction, Cat)
    } else {
        (BoundRule::Obstruction, Cat1)
    };
    Ok(Derivation {
        weights: vec![zfact],
        extra: k,
        obstruction: Some(obstruction),
        ..Derivation::new(rule, invariant, Lower, w + k + 1)
    })
}

/// The ledger of `X × Y` with the product rule applied to the best factor bounds.
pub fn ccat1_upper_bounds(x: &BoundLedger, y: &BoundLedger) -> Result<BoundLedger, CatError> {
    let mut out = BoundLedger::new(x.space.product(&y.space));
    out.factors = vec![x.clone(), y.clone()];
    let (Some(ux), Some(uy)) = (x.best(Ccat1, Upper), y.best(Ccat1, Upper)) else {
        return Err(CatError::ProductRefused(
            "a factor has no upper bound on ccat1".into(),
        ));
    };
    let positive = [x, y]
        .iter()
        .enumerate()
        .find_map(|(i, l)| {
            l.best(Ccat1, Lower)
                .filter(|d| d.value > 0)
                .map(|d| Premise {
                    factor: Some(i),
                    id: d.id,
                })
        })
        .ok_or_else(|| {
            CatError::ProductRefused(format!(
                "neither {} nor {} is known to have positive ccat1",
                x.space.name, y.space.name
            ))
        })?;
    let value = (ux.value + uy.value)
        .checked_sub(1)
        .ok_or_else(|| CatError::ProductRefused("both factors have ccat1 = 0".into()))?;
    out.record(Derivation {
        premises: vec![
            Premise {
                factor: Some(0),
                id: ux.id,
            },
            Premise {
                factor: Some(1),
                id: uy.id,
            },
            positive,
        ],
        ..Derivation::new(BoundRule::ProductInequality, Ccat1, Upper, value)
    })?;
    out.close()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn surface(name: &str, xi_zero: bool) -> SpaceDescriptor {
        SpaceDescriptor {
            name: name.into(),
            dim: 2,
            connected: true,
            xi_zero,
        }
    }

    fn closed_surface(xi_zero: bool) -> BoundLedger {
        let mut l = BoundLedger::new(surface("S", xi_zero));
        l.declare_exact(Cat, 3, "category of a closed surface of positive genus")
            .unwrap();
        l.close().unwrap();
        l
    }

    #[test]
    fn cup_pairing_on_a_surface() {
        let text = "\
space S dim=2 closed-manifold connected cat=3
atom z homology degree=1 space=S
atom u cohomology degree=1 space=S
pairing u with z
";
        let facts = FactBase::parse(text).unwrap();
        let d = cat_lower_bound(&facts, &facts.pairings()[0]).unwrap();
        assert_eq!(d.value, 3);
        let mut l = BoundLedger::new(surface("S", false));
        l.record(d).unwrap();
        l.close().unwrap();
        l.replay(&facts).unwrap();
        assert_eq!(l.lower(Cat), Some(3));
    }

    #[test]
    fn zero_dimensional_pairing() {
        let text = "\
space X dim=3 connected cat=2
atom p homology degree=0 space=X
atom u cohomology degree=0 space=X
pairing u with p
";
        let facts = FactBase::parse(text).unwrap();
        let d = cat_lower_bound(&facts, &facts.pairings()[0]).unwrap();
        // cwgt(p) = cat - 1 = 1 and cwgt(u) = 0
        assert_eq!(d.weights[0].kind, FactKind::CwgtExact);
        assert_eq!(d.value, 2);
    }

    #[test]
    fn surface_factor_bounds() {
        let l = closed_surface(false);
        assert_eq!(l.upper(Ccat1), Some(2));
        assert_eq!(l.upper(Cat1), Some(2));
        let t = closed_surface(true);
        assert_eq!(t.exact(Ccat1), Some(3));
        assert_eq!(t.exact(Cat1), Some(3));
        assert_eq!(t.exact(CatXi), Some(3));
    }

    #[test]
    fn product_rule_arithmetic() {
        let mut a = closed_surface(false);
        a.record(Derivation::declared(
            Cat1,
            Lower,
            2,
            "declared for the test",
        ))
        .unwrap();
        a.close().unwrap();
        let p = ccat1_upper_bounds(&a, &a).unwrap();
        assert_eq!(p.upper(Ccat1), Some(3));
        assert_eq!(p.upper(Cat1), Some(3));
        p.check_coherence().unwrap();
    }

    #[test]
    fn product_rule_needs_positivity() {
        let a = closed_surface(false);
        assert!(matches!(
            ccat1_upper_bounds(&a, &a),
            Err(CatError::ProductRefused(_))
        ));
        let mut z = BoundLedger::new(surface("Z", false));
        z.record(Derivation::declared(Ccat1, Upper, 0, "contractible"))
            .unwrap();
        z.record(Derivation::declared(Ccat1, Lower, 0, "contractible"))
            .unwrap();
        assert!(matches!(
            ccat1_upper_bounds(&z, &z),
            Err(CatError::ProductRefused(_))
        ));
    }

    #[test]
    fn incoherent_bounds_are_rejected() {
        let mut l = closed_surface(false);
        assert!(matches!(
            l.record(Derivation::declared(Cat1, Lower, 5, "wrong")),
            Err(CatError::Incoherent(_))
        ));
    }

    #[test]
    fn forged_derivations_fail() {
        let mut l = closed_surface(false);
        let mut d = l.derivations.last().unwrap().clone();
        d.value += 1;
        assert!(matches!(l.record(d), Err(CatError::Replay(_))));
        let mut d = Derivation::new(BoundRule::DimensionBound, Cat1, Upper, 2);
        l.space.xi_zero = true;
        d.id = 0;
        assert!(l.record(d).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn closure_is_coherent(
            cat in 1u64..8,
            cat1 in 0u64..8,
            xi_zero in any::<bool>(),
            dim in 1usize..6,
        ) {
            let mut l = BoundLedger::new(SpaceDescriptor { name: "X".into(), dim, connected: true, xi_zero });
            l.declare_exact(Cat, cat, "given").unwrap();
            let ok = l.record(Derivation::declared(Cat1, Lower, cat1, "given")).and_then(|_| l.close());
            let consistent = cat1 <= cat
                && (xi_zero || (cat1 < cat && cat1 <= dim as u64))
                && (!xi_zero || cat1 <= cat);
            prop_assert_eq!(ok.is_ok(), consistent);
            if ok.is_ok() {
                for inv in Invariant::ALL {
                    if let (Some(lo), Some(hi)) = (l.lower(inv), l.upper(inv)) {
                        prop_assert!(lo <= hi);
                    }
                }
                prop_assert!(l.lower(Cat1) <= l.upper(Ccat1));
            }
        }
    }
}
