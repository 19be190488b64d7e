//! Forward-chaining propagation of category weights with replayable traces.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::expr::{type_of, ClassExpr, ClassKind, ClassType};
use super::{CatError, FactBase, FactKind, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Declared,
    DefaultNonnegative,
    ZeroClass,
    PositiveDegree,
    StrictBelowWeight,
    ExactGivesLower,
    PoincareDuality,
    PoincareDualityStrict,
    CapProduct,
    CrossProduct,
    ProductOfFactors,
    WedgeSum,
    CoefficientChange,
    NonTopDegree,
    ZeroDimensional,
}

impl Rule {
    pub const ALL: [Rule; 15] = [
        Rule::Declared,
        Rule::DefaultNonnegative,
        Rule::ZeroClass,
        Rule::PositiveDegree,
        Rule::StrictBelowWeight,
        Rule::ExactGivesLower,
        Rule::PoincareDuality,
        Rule::PoincareDualityStrict,
        Rule::CapProduct,
        Rule::CrossProduct,
        Rule::ProductOfFactors,
        Rule::WedgeSum,
        Rule::CoefficientChange,
        Rule::NonTopDegree,
        Rule::ZeroDimensional,
    ];

    /// The inequality or identity the rule applies.
    pub fn statement(&self) -> &'static str {
        match self {
            Rule::Declared => "declared in the fact base",
            Rule::DefaultNonnegative => "cwgt(z) >= 0",
            Rule::ZeroClass => "the zero class has weight +inf",
            Rule::PositiveDegree => "swgt(u) >= 1 for u of positive degree",
            Rule::StrictBelowWeight => "swgt(u) <= cwgt(u)",
            Rule::ExactGivesLower => "cwgt(z) = k implies cwgt(z) >= k",
            Rule::PoincareDuality => "cwgt(z) = cwgt(u) for z = u ∩ [X] on a closed manifold",
            Rule::PoincareDualityStrict => "swgt(z) = swgt(u) for z = u ∩ [X]",
            Rule::CapProduct => "cwgt(u ∩ z) >= cwgt(u) + cwgt(z)",
            Rule::CrossProduct => "swgt(z1 × z2) >= swgt(z1) + swgt(z2)",
            Rule::ProductOfFactors => {
                "cwgt(z1 × ... × zk) >= k for z_i of non-top degree on closed orientable manifolds"
            }
            Rule::WedgeSum => "cwgt(z1 + z2) = min(cwgt(z1), cwgt(z2)) on a wedge",
            Rule::CoefficientChange => "cwgt(f_*(z)) >= cwgt(z)",
            Rule::NonTopDegree => "cwgt(z) >= 1 for z of non-top degree on a closed manifold",
            Rule::ZeroDimensional => "cwgt(z) = cat(X) - 1 for nonzero z in H_0 of a connected X",
        }
    }
}

/// One application of a rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub id: usize,
    pub rule: Rule,
    pub subject: ClassExpr,
    pub kind: FactKind,
    pub value: Weight,
    /// Ids of earlier steps in the same trace.
    pub premises: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub steps: Vec<Step>,
}

impl Trace {
    /// Re-runs every step against `facts`; fails on the first step whose
    /// conclusion cannot be reproduced from its premises.
    pub fn replay(&self, facts: &FactBase) -> Result<(), CatError> {
        for (i, s) in self.steps.iter().enumerate() {
            let bad = |m: String| {
                CatError::Replay(format!("step {i} ({:?} on {}): {m}", s.rule, s.subject))
            };
            if s.id != i {
                return Err(bad("step ids are not sequential".into()));
            }
            let wanted = expected_premises(s.rule, &s.subject, s.kind, facts).map_err(bad)?;
            if wanted.len() != s.premises.len() {
                return Err(bad("wrong number of premises".into()));
            }
            let mut values = Vec::new();
            for ((subj, kind), &p) in wanted.iter().zip(&s.premises) {
                let prem = self
                    .steps
                    .get(p)
                    .filter(|_| p < i)
                    .ok_or_else(|| bad(format!("premise {p} is not an earlier step")))?;
                if &prem.subject != subj || prem.kind != *kind {
                    return Err(bad(format!(
                        "premise {p} concerns {} {}",
                        prem.kind, prem.subject
                    )));
                }
                values.push(prem.value);
            }
            let v = conclude(s.rule, &s.subject, s.kind, &values, facts).map_err(bad)?;
            if v != s.value {
                return Err(bad(format!("reproduces {v}, trace says {}", s.value)));
            }
        }
        Ok(())
    }

    pub fn conclusion(&self) -> Option<&Step> {
        self.steps.last()
    }
}

/// A bound on a weight together with the derivation that proves it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightFact {
    pub subject: ClassExpr,
    pub kind: FactKind,
    pub value: Weight,
    pub trace: Trace,
}

impl WeightFact {
    /// The lower bound on `cwgt` this fact provides.
    pub fn cwgt_lower(&self) -> Option<Weight> {
        match self.kind {
            FactKind::CwgtLower | FactKind::CwgtExact => Some(self.value),
            FactKind::SwgtLower => None,
        }
    }
}

fn partner(e: &ClassExpr, t: &ClassType) -> Option<ClassExpr> {
    match e {
        ClassExpr::Dual(z) => Some((**z).clone()),
        _ if t.kind == ClassKind::Homology && t.closed_manifold => Some(ClassExpr::dual(e.clone())),
        _ => None,
    }
}

fn nontop_closed(t: &ClassType) -> bool {
    t.kind == ClassKind::Homology && t.closed_manifold && t.degree < t.dim
}

/// Premises a rule needs to conclude `kind` about `subject`, or why it does
/// not apply.
fn expected_premises(
    rule: Rule,
    subject: &ClassExpr,
    kind: FactKind,
    facts: &FactBase,
) -> Result<Vec<(ClassExpr, FactKind)>, String> {
    let t = type_of(subject, facts).map_err(|e| e.to_string())?;
    use FactKind::*;
    let none = Ok(vec![]);
    match (rule, subject, kind) {
        (Rule::Declared, _, _)
        | (Rule::DefaultNonnegative, _, CwgtLower)
        | (Rule::ZeroClass, ClassExpr::Atom(_), CwgtExact | SwgtLower)
        | (Rule::PositiveDegree, _, SwgtLower)
        | (Rule::ProductOfFactors, ClassExpr::Cross(..), CwgtLower)
        | (Rule::NonTopDegree, _, CwgtLower)
        | (Rule::ZeroDimensional, ClassExpr::Atom(_), CwgtExact) => none,
        (Rule::StrictBelowWeight, _, CwgtLower) => Ok(vec![(subject.clone(), SwgtLower)]),
        (Rule::ExactGivesLower, _, CwgtLower) => Ok(vec![(subject.clone(), CwgtExact)]),
        (Rule::PoincareDuality, _, CwgtLower | CwgtExact)
        | (Rule::PoincareDualityStrict, _, SwgtLower) => {
            let p = partner(subject, &t).ok_or("no Poincaré dual")?;
            Ok(vec![(p, kind)])
        }
        (Rule::CapProduct, ClassExpr::Cap(u, z), CwgtLower) => {
            Ok(vec![((**u).clone(), CwgtLower), ((**z).clone(), CwgtLower)])
        }
        (Rule::CrossProduct, ClassExpr::Cross(a, b), SwgtLower) => {
            Ok(vec![((**a).clone(), SwgtLower), ((**b).clone(), SwgtLower)])
        }
        (Rule::WedgeSum, ClassExpr::WedgeSum(a, b), CwgtLower | CwgtExact) => {
            Ok(vec![((**a).clone(), kind), ((**b).clone(), kind)])
        }
        (Rule::CoefficientChange, ClassExpr::Push(_, z), CwgtLower) => {
            Ok(vec![((**z).clone(), CwgtLower)])
        }
        _ => Err(format!("rule does not conclude {kind} about this subject")),
    }
}

/// The conclusion of a rule from premise values, after checking side conditions.
fn conclude(
    rule: Rule,
    subject: &ClassExpr,
    kind: FactKind,
    premises: &[Weight],
    facts: &FactBase,
) -> Result<Weight, String> {
    let t = type_of(subject, facts).map_err(|e| e.to_string())?;
    let require = |ok: bool, m: &str| if ok { Ok(()) } else { Err(m.to_string()) };
    match rule {
        Rule::Declared => facts
            .declared(subject, kind)
            .map(|f| f.value)
            .ok_or_else(|| "no such declaration".into()),
        Rule::DefaultNonnegative => Ok(Weight::Finite(0)),
        Rule::ZeroClass => {
            let ClassExpr::Atom(n) = subject else {
                unreachable!()
            };
            require(
                facts.atom(n).is_some_and(|a| a.zero),
                "atom is not declared zero",
            )?;
            Ok(Weight::Infinite)
        }
        Rule::PositiveDegree => {
            require(
                t.kind == ClassKind::Cohomology && t.degree > 0,
                "needs positive-degree cohomology",
            )?;
            Ok(Weight::Finite(1))
        }
        Rule::StrictBelowWeight => {
            require(
                t.kind == ClassKind::Cohomology || t.closed_manifold,
                "strict weight of homology needs a closed manifold",
            )?;
            Ok(premises[0])
        }
        Rule::ExactGivesLower
        | Rule::PoincareDuality
        | Rule::PoincareDualityStrict
        | Rule::CoefficientChange => Ok(premises[0]),
        Rule::CapProduct => Ok(premises[0] + premises[1]),
        Rule::CrossProduct => {
            require(
                t.kind == ClassKind::Homology && t.closed_manifold,
                "needs classes on closed manifolds",
            )?;
            Ok(premises[0] + premises[1])
        }
        Rule::WedgeSum => Ok(premises[0].min(premises[1])),
        Rule::ProductOfFactors => {
            let factors = subject.cross_factors();
            for f in &factors {
                let ft = type_of(f, facts).map_err(|e| e.to_string())?;
                require(
                    nontop_closed(&ft),
                    "every factor needs non-top degree on a closed manifold",
                )?;
            }
            Ok(Weight::Finite(factors.len() as u64))
        }
        Rule::NonTopDegree => {
            require(
                nontop_closed(&t),
                "needs non-top degree on a closed manifold",
            )?;
            Ok(Weight::Finite(1))
        }
        Rule::ZeroDimensional => {
            let ClassExpr::Atom(n) = subject else {
                unreachable!()
            };
            let atom = facts.atom(n).ok_or("unknown atom")?;
            let space = facts.space(&atom.space).ok_or("unknown space")?;
            require(
                atom.kind == ClassKind::Homology && atom.degree == 0 && !atom.zero,
                "needs a nonzero class of degree 0",
            )?;
            require(space.connected, "needs a connected space")?;
            let cat = space
                .cat
                .filter(|&c| c >= 1)
                .ok_or("needs a declared category")?;
            Ok(Weight::Finite(cat - 1))
        }
    }
}

/// The saturated state of the rule engine.
#[derive(Clone, Debug)]
pub struct Saturation {
    steps: Vec<Step>,
    best: BTreeMap<(ClassExpr, FactKind), usize>,
}

fn collect_nodes(
    e: &ClassExpr,
    facts: &FactBase,
    out: &mut BTreeSet<ClassExpr>,
) -> Result<(), CatError> {
    if out.contains(e) {
        return Ok(());
    }
    let t = type_of(e, facts)?;
    out.insert(e.clone());
    for c in e.children() {
        collect_nodes(c, facts, out)?;
    }
    if let Some(p) = partner(e, &t) {
        collect_nodes(&p, facts, out)?;
    }
    Ok(())
}

impl Saturation {
    /// Applies every enabled rule until no bound improves.
    pub fn run(
        facts: &FactBase,
        targets: &[ClassExpr],
        disabled: &[Rule],
    ) -> Result<Self, CatError> {
        let mut nodes = BTreeSet::new();
        for e in targets
            .iter()
            .chain(facts.facts().iter().map(|f| &f.subject))
        {
            collect_nodes(e, facts, &mut nodes)?;
        }
        let rules: Vec<Rule> = Rule::ALL
            .into_iter()
            .filter(|r| !disabled.contains(r))
            .collect();
        let mut sat = Saturation {
            steps: Vec::new(),
            best: BTreeMap::new(),
        };
        let mut changed = true;
        while changed {
            changed = false;
            for node in &nodes {
                for &rule in &rules {
                    for kind in [
                        FactKind::CwgtExact,
                        FactKind::SwgtLower,
                        FactKind::CwgtLower,
                    ] {
                        let Ok(wanted) = expected_premises(rule, node, kind, facts) else {
                            continue;
                        };
                        let Some(ids) = wanted
                            .iter()
                            .map(|k| sat.best.get(k).copied())
                            .collect::<Option<Vec<usize>>>()
                        else {
                            continue;
                        };
                        let values: Vec<Weight> = ids.iter().map(|&i| sat.steps[i].value).collect();
                        let Ok(v) = conclude(rule, node, kind, &values, facts) else {
                            continue;
                        };
                        changed |= sat.offer(node, kind, v, rule, ids)?;
                    }
                }
            }
        }
        for node in &nodes {
            if let Some(exact) = sat.value(node, FactKind::CwgtExact) {
                for k in [FactKind::CwgtLower, FactKind::SwgtLower] {
                    if sat.value(node, k).is_some_and(|v| v > exact) {
                        return Err(CatError::Inconsistent(format!(
                            "{node}: {k} bound exceeds the exact weight {exact}"
                        )));
                    }
                }
            }
        }
        Ok(sat)
    }

    fn offer(
        &mut self,
        node: &ClassExpr,
        kind: FactKind,
        v: Weight,
        rule: Rule,
        premises: Vec<usize>,
    ) -> Result<bool, CatError> {
        let key = (node.clone(), kind);
        if let Some(&old) = self.best.get(&key) {
            let old = self.steps[old].value;
            if kind == FactKind::CwgtExact {
                if old != v {
                    return Err(CatError::Inconsistent(format!(
                        "{node} has weights {old} and {v}"
                    )));
                }
                return Ok(false);
            }
            if v <= old {
                return Ok(false);
            }
        }
        let id = self.steps.len();
        self.steps.push(Step {
            id,
            rule,
            subject: node.clone(),
            kind,
            value: v,
            premises,
        });
        self.best.insert(key, id);
        Ok(true)
    }

    pub fn value(&self, e: &ClassExpr, kind: FactKind) -> Option<Weight> {
        self.best
            .get(&(e.clone(), kind))
            .map(|&i| self.steps[i].value)
    }

    /// The strongest fact about `e`: exact when known, otherwise the best lower bound.
    pub fn fact(&self, e: &ClassExpr) -> Option<WeightFact> {
        [FactKind::CwgtExact, FactKind::CwgtLower]
            .into_iter()
            .find_map(|k| self.fact_of_kind(e, k))
    }

    pub fn fact_of_kind(&self, e: &ClassExpr, kind: FactKind) -> Option<WeightFact> {
        let &root = self.best.get(&(e.clone(), kind))?;
        let mut needed = BTreeSet::new();
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            if needed.insert(i) {
                stack.extend(&self.steps[i].premises);
            }
        }
        let renumber: BTreeMap<usize, usize> =
            needed.iter().enumerate().map(|(n, &o)| (o, n)).collect();
        let steps = needed
            .iter()
            .map(|&o| {
                let s = &self.steps[o];
                Step {
                    id: renumber[&o],
                    premises: s.premises.iter().map(|p| renumber[p]).collect(),
                    ..s.clone()
                }
            })
            .collect();
        let s = &self.steps[root];
        Some(WeightFact {
            subject: s.subject.clone(),
            kind,
            value: s.value,
            trace: Trace { steps },
        })
    }
}

/// The strongest weight fact derivable for `expr`.
pub fn propagate_weights(facts: &FactBase, expr: &ClassExpr) -> Result<WeightFact, CatError> {
    propagate_weights_with(facts, expr, &[])
}

/// As [`propagate_weights`] with some rules switched off.
pub fn propagate_weights_with(
    facts: &FactBase,
    expr: &ClassExpr,
    disabled: &[Rule],
) -> Result<WeightFact, CatError> {
    let sat = Saturation::run(facts, std::slice::from_ref(expr), disabled)?;
    sat.fact(expr)
        .ok_or_else(|| CatError::IllTyped(format!("no weight derivable for {expr}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catbounds::expr::{Atom, Space};
    use crate::catbounds::DeclaredFact;
    use proptest::prelude::*;

    fn surface_base(k: usize) -> FactBase {
        let mut fb = FactBase::new();
        for i in 1..=k {
            fb.add_space(Space {
                name: format!("S{i}"),
                dim: 2,
                closed_manifold: true,
                connected: true,
                cat: Some(3),
            })
            .unwrap();
            fb.add_atom(Atom {
                name: format!("z{i}"),
                kind: ClassKind::Homology,
                degree: 1,
                space: format!("S{i}"),
                coefficients: "Z".into(),
                zero: false,
            })
            .unwrap();
        }
        fb
    }

    fn e(s: &str) -> ClassExpr {
        ClassExpr::parse(s).unwrap()
    }

    #[test]
    fn products_of_surface_classes() {
        for k in 1..=4 {
            let fb = surface_base(k);
            let expr =
                ClassExpr::cross_all((1..=k).map(|i| ClassExpr::atom(&format!("z{i}")))).unwrap();
            let f = propagate_weights(&fb, &expr).unwrap();
            assert_eq!(f.value, Weight::Finite(k as u64));
            assert_eq!(f.kind, FactKind::CwgtLower);
            f.trace.replay(&fb).unwrap();
            // the same bound without the direct product rule
            let g = propagate_weights_with(&fb, &expr, &[Rule::ProductOfFactors]).unwrap();
            assert_eq!(g.value, Weight::Finite(k as u64));
            g.trace.replay(&fb).unwrap();
        }
    }

    #[test]
    fn projective_space_duality() {
        let text = "\
space RP5 dim=5 closed-manifold connected
atom z homology degree=2 space=RP5 coeff=Z2
fact cwgt-exact dual(z) = 3 ; cwgt(alpha^3) = 3
";
        let fb = FactBase::parse(text).unwrap();
        let f = propagate_weights(&fb, &e("z")).unwrap();
        assert_eq!((f.kind, f.value), (FactKind::CwgtExact, Weight::Finite(3)));
        assert_eq!(f.trace.conclusion().unwrap().rule, Rule::PoincareDuality);
        f.trace.replay(&fb).unwrap();
    }

    #[test]
    fn wedge_takes_minimum() {
        let text = "\
space X dim=3 connected
space Y dim=3 connected
atom a homology degree=2 space=X
atom b homology degree=2 space=Y
fact cwgt-exact a = 2
fact cwgt-exact b = 1
";
        let fb = FactBase::parse(text).unwrap();
        let f = propagate_weights(&fb, &e("wedge(a, b)")).unwrap();
        assert_eq!((f.kind, f.value), (FactKind::CwgtExact, Weight::Finite(1)));
        f.trace.replay(&fb).unwrap();
    }

    #[test]
    fn zero_class_and_zero_dimensional_rules() {
        let text = "\
space X dim=4 connected cat=3
atom p homology degree=0 space=X
atom o homology degree=2 space=X zero
";
        let fb = FactBase::parse(text).unwrap();
        let f = propagate_weights(&fb, &e("p")).unwrap();
        assert_eq!((f.kind, f.value), (FactKind::CwgtExact, Weight::Finite(2)));
        let g = propagate_weights(&fb, &e("o")).unwrap();
        assert_eq!(g.value, Weight::Infinite);
        let h = propagate_weights(&fb, &e("push(f, o)")).unwrap();
        assert_eq!(h.value, Weight::Infinite);
    }

    #[test]
    fn cap_adds_weights() {
        let text = "\
space S dim=2 closed-manifold connected
atom u cohomology degree=1 space=S
atom z homology degree=2 space=S
";
        let fb = FactBase::parse(text).unwrap();
        // u has positive degree, z is the fundamental class
        let f = propagate_weights(&fb, &e("cap(u, z)")).unwrap();
        assert_eq!(f.value, Weight::Finite(1));
        f.trace.replay(&fb).unwrap();
    }

    #[test]
    fn non_top_degree_agrees_with_duality() {
        for (dim, deg) in [(2, 0), (2, 1), (3, 1), (4, 3)] {
            let text = format!(
                "space M dim={dim} closed-manifold connected\natom z homology degree={deg} space=M\n"
            );
            let fb = FactBase::parse(&text).unwrap();
            let direct = propagate_weights_with(&fb, &e("z"), &[Rule::PoincareDuality]).unwrap();
            let composed = propagate_weights_with(&fb, &e("z"), &[Rule::NonTopDegree]).unwrap();
            assert_eq!(direct.value, Weight::Finite(1));
            assert_eq!(direct.value, composed.value);
            assert!(composed
                .trace
                .steps
                .iter()
                .any(|s| s.rule == Rule::PositiveDegree));
        }
    }

    #[test]
    fn tampered_traces_fail_replay() {
        let fb = surface_base(2);
        let f = propagate_weights(&fb, &e("cross(z1, z2)")).unwrap();
        let mut t = f.trace.clone();
        t.steps.last_mut().unwrap().value = Weight::Finite(5);
        assert!(t.replay(&fb).is_err());
        let mut t = f.trace.clone();
        t.steps.last_mut().unwrap().rule = Rule::CapProduct;
        assert!(t.replay(&fb).is_err());
    }

    #[test]
    fn inconsistent_declarations_are_reported() {
        let text = "\
space S dim=2 closed-manifold connected
atom z homology degree=1 space=S
fact cwgt-exact z = 0
";
        let fb = FactBase::parse(text).unwrap();
        assert!(matches!(
            propagate_weights(&fb, &e("z")),
            Err(CatError::Inconsistent(_))
        ));
    }

    #[test]
    fn ill_typed_queries_fail() {
        let fb = surface_base(1);
        assert!(matches!(
            propagate_weights(&fb, &e("cap(z1, z1)")),
            Err(CatError::IllTyped(_))
        ));
        assert!(propagate_weights(&fb, &e("nope")).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn adding_facts_never_lowers_bounds(
            extra in proptest::collection::vec((0usize..3, 0u64..4), 0..4),
            k in 1usize..4,
        ) {
            let fb = surface_base(k);
            let expr = ClassExpr::cross_all((1..=k).map(|i| ClassExpr::atom(&format!("z{i}")))).unwrap();
            let base = propagate_weights(&fb, &expr).unwrap().value;
            let mut more = fb.clone();
            for (i, v) in extra {
                let subject = ClassExpr::atom(&format!("z{}", (i % k) + 1));
                let _ = more.declare(DeclaredFact {
                    subject,
                    kind: FactKind::SwgtLower,
                    value: Weight::Finite(v),
                    citation: None,
                });
            }
            let after = propagate_weights(&more, &expr).unwrap();
            prop_assert!(after.value >= base);
            after.trace.replay(&more).unwrap();
        }
    }
}
