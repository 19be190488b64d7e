//! `cat^1` and `ccat^1` of products of closed surfaces of genus at least two.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::expr::{Atom, ClassExpr, ClassKind, Space};
use super::ledger::{
    cat1_lower_bound, ccat1_upper_bounds, BoundLedger, FactorPairing, Invariant,
    ObstructionCertificate, SpaceDescriptor,
};
use super::weights::{propagate_weights, WeightFact};
use super::{CatError, FactBase};
use crate::complexes::{cross_chain, fixtures, product_complex, quotient_periods, LatticeMap};
use crate::groupring::XiOrder;
use crate::movability::{evaluate_obstruction, MonodromyPoint};

const SURFACE_CAT: &str = "cat(Σ_g) = 3 for a closed orientable surface of genus g ≥ 1";
const SURFACE_CAT_XI: &str = "cat(Σ_g, ξ) = 1 for ξ ≠ 0";
const PRODUCT_CAT_XI: &str =
    "cat(Σ_1 × ... × Σ_k, ξ) = 1 + 2r, r the number of factors where ξ vanishes";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceFactor {
    pub genus: usize,
    pub xi_nonzero: bool,
}

/// Factors `Σ_{g_1} × ... × Σ_{g_k}` with a flag for whether `ξ` restricts
/// nontrivially to each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfacePattern {
    pub factors: Vec<SurfaceFactor>,
}

impl SurfacePattern {
    pub fn new(factors: Vec<SurfaceFactor>) -> Result<Self, CatError> {
        if factors.is_empty() {
            return Err(CatError::Parse(
                "a pattern needs at least one factor".into(),
            ));
        }
        if let Some(f) = factors.iter().find(|f| f.genus < 2) {
            return Err(CatError::Parse(format!("genus {} is below 2", f.genus)));
        }
        Ok(SurfacePattern { factors })
    }

    pub fn k(&self) -> usize {
        self.factors.len()
    }

    /// The number of factors on which `ξ` vanishes.
    pub fn r(&self) -> usize {
        self.factors.iter().filter(|f| !f.xi_nonzero).count()
    }

    /// Every pattern with `k` factors of genus in `genera`.
    pub fn enumerate(k: usize, genera: &[usize]) -> Vec<SurfacePattern> {
        let choices: Vec<SurfaceFactor> = genera
            .iter()
            .flat_map(|&genus| [true, false].map(|xi_nonzero| SurfaceFactor { genus, xi_nonzero }))
            .collect();
        let mut out = vec![vec![]];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|p: Vec<SurfaceFactor>| {
                    choices.iter().map(move |&c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    })
                })
                .collect();
        }
        out.into_iter()
            .map(|factors| SurfacePattern { factors })
            .collect()
    }
}

impl FromStr for SurfacePattern {
    type Err = CatError;

    /// Comma-separated `genus[:flag]` with flag `nz` (default) or `z`.
    fn from_str(s: &str) -> Result<Self, CatError> {
        let factors = s
            .split(',')
            .map(|item| {
                let item = item.trim();
                let (g, flag) = item.split_once(':').unwrap_or((item, "nz"));
                let genus = g
                    .trim()
                    .parse()
                    .map_err(|_| CatError::Parse(format!("bad genus in {item:?}")))?;
                let xi_nonzero = match flag.trim() {
                    "nz" | "nonzero" | "1" => true,
                    "z" | "zero" | "0" => false,
                    other => {
                        return Err(CatError::Parse(format!(
                            "unknown flag {other:?}, expected nz or z"
                        )))
                    }
                };
                Ok(SurfaceFactor { genus, xi_nonzero })
            })
            .collect::<Result<Vec<_>, CatError>>()?;
        SurfacePattern::new(factors)
    }
}

impl fmt::Display for SurfacePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| format!("{}:{}", x.genus, if x.xi_nonzero { "nz" } else { "z" }))
            .collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurfaceTable {
    #[serde(serialize_with = "crate::serialize_display")]
    pub pattern: SurfacePattern,
    pub k: usize,
    pub r: usize,
    pub cat1: u64,
    pub ccat1: u64,
    pub cat_xi: u64,
    pub difference: i64,
    pub closed: bool,
    /// The weight of `z = q_*(z_1 × ... × z_k)`.
    pub weight: WeightFact,
    pub facts: FactBase,
    pub ledger: BoundLedger,
}

impl SurfaceTable {
    /// Replays every derivation and weight trace and re-checks the closure.
    pub fn verify(&self) -> Result<(), CatError> {
        self.ledger.replay(&self.facts)?;
        let (k, r) = (self.k as u64, self.r as u64);
        let want = 1 + k + r;
        let got = (
            self.ledger.exact(Invariant::Cat1),
            self.ledger.exact(Invariant::Ccat1),
        );
        if got != (Some(want), Some(want)) || self.cat1 != want || self.ccat1 != want {
            return Err(CatError::NotClosed(format!(
                "{}: expected {want}, ledger has {got:?}",
                self.pattern
            )));
        }
        if self.ledger.exact(Invariant::CatXi) != Some(self.cat_xi)
            || self.difference != self.cat1 as i64 - self.cat_xi as i64
        {
            return Err(CatError::NotClosed(format!(
                "{}: cat(M,xi) or the difference disagrees",
                self.pattern
            )));
        }
        Ok(())
    }
}

fn factor_fixture(f: &SurfaceFactor) -> fixtures::Fixture {
    if f.xi_nonzero {
        fixtures::genus(f.genus)
    } else {
        fixtures::genus_trivial(f.genus)
    }
}

fn factor_facts(pattern: &SurfacePattern) -> Result<(FactBase, Vec<ClassExpr>), CatError> {
    let mut facts = FactBase::new();
    let mut atoms = Vec::new();
    for (i, f) in pattern.factors.iter().enumerate() {
        let space = format!("S{}", i + 1);
        facts.add_space(Space {
            name: space.clone(),
            dim: 2,
            closed_manifold: true,
            connected: true,
            cat: Some(3),
        })?;
        let name = format!("z{}", i + 1);
        facts.add_atom(Atom {
            name: name.clone(),
            kind: ClassKind::Homology,
            degree: 1,
            space,
            coefficients: if f.xi_nonzero {
                format!("Z[H{}]", i + 1)
            } else {
                "Z".into()
            },
            zero: false,
        })?;
        atoms.push(ClassExpr::atom(&name));
    }
    Ok((facts, atoms))
}

/// Runs the full pipeline for one pattern and fails unless the bounds close.
pub fn surface_products_table(pattern: &SurfacePattern) -> Result<SurfaceTable, CatError> {
    let pattern = SurfacePattern::new(pattern.factors.clone())?;
    let (k, r) = (pattern.k(), pattern.r());

    // Factor pairings against a transcendental bundle (the trivial one where xi vanishes).
    let fixtures: Vec<fixtures::Fixture> = pattern.factors.iter().map(factor_fixture).collect();
    let mut pairings = Vec::new();
    for (i, (f, fx)) in pattern.factors.iter().zip(&fixtures).enumerate() {
        let mono = MonodromyPoint::transcendental(fx.complex.rank());
        let report = evaluate_obstruction(&fx.complex, &fx.cycle, &mono)?;
        pairings.push(FactorPairing {
            label: format!("S{} ({})", i + 1, fx.name),
            twisted: f.xi_nonzero,
            degree: fx.cycle.degree,
            report,
        });
    }

    // z = q_*(z_1 × ... × z_k) in the cover attached to Ker xi.
    let mut complex = fixtures[0].complex.clone();
    let mut cycle = fixtures[0].cycle.clone();
    for fx in &fixtures[1..] {
        cycle = cross_chain(&complex, &fx.complex, &cycle, &fx.cycle);
        complex = product_complex(&complex, &fx.complex);
    }
    if complex.rank() > 0 {
        let xi = XiOrder::rank_one(1).map_err(crate::complexes::ComplexError::from)?;
        let q = LatticeMap::diagonal_sum(complex.rank());
        cycle = q.apply_chain(&cycle);
        complex = quotient_periods(&complex, &q, &xi)?;
    }
    if !complex.is_cycle(&cycle)? || cycle.is_zero() {
        return Err(CatError::NotClosed(format!(
            "{pattern}: q_*(z_1 × ... × z_k) is not a nonzero cycle"
        )));
    }

    let (mut facts, atoms) = factor_facts(&pattern)?;
    let product = ClassExpr::cross_all(atoms.iter().cloned()).expect("nonempty pattern");
    let z = ClassExpr::push("q", product);
    facts.add_query(z.clone())?;
    let weight = propagate_weights(&facts, &z)?;
    if weight.cwgt_lower() < Some(super::Weight::Finite(k as u64)) {
        return Err(CatError::NotClosed(format!(
            "{pattern}: cwgt(z) = {} is below k",
            weight.value
        )));
    }

    // Factor ledgers, folded with the product inequality.
    let mut ledgers = Vec::new();
    for (i, (f, pairing)) in pattern.factors.iter().zip(&pairings).enumerate() {
        let space = SpaceDescriptor {
            name: format!("S{}", i + 1),
            dim: 2,
            connected: true,
            xi_zero: !f.xi_nonzero,
        };
        let mut l = BoundLedger::new(space.clone());
        l.declare_exact(Invariant::Cat, 3, SURFACE_CAT)?;
        if f.xi_nonzero {
            l.declare_exact(Invariant::CatXi, 1, SURFACE_CAT_XI)?;
        }
        let zf = propagate_weights(&facts, &atoms[i])?;
        let cert = ObstructionCertificate {
            factors: vec![pairing.clone()],
        };
        l.record(cat1_lower_bound(cert, zf, &space)?)?;
        l.close()?;
        ledgers.push(l);
    }
    let mut ledger = ledgers[0].clone();
    for l in &ledgers[1..] {
        ledger = ccat1_upper_bounds(&ledger, l)?;
    }

    let cert = ObstructionCertificate { factors: pairings };
    let space = ledger.space.clone();
    ledger.record(cat1_lower_bound(cert, weight.clone(), &space)?)?;
    if k > 1 {
        ledger.declare_exact(Invariant::CatXi, 1 + 2 * r as u64, PRODUCT_CAT_XI)?;
    }
    ledger.close()?;
    ledger.check_coherence()?;

    let want = (1 + k + r) as u64;
    let (cat1, ccat1) = (
        ledger.exact(Invariant::Cat1),
        ledger.exact(Invariant::Ccat1),
    );
    if (cat1, ccat1) != (Some(want), Some(want)) {
        return Err(CatError::NotClosed(format!(
            "{pattern}: cat1 in [{:?}, {:?}], ccat1 in [{:?}, {:?}], expected {want}",
            ledger.lower(Invariant::Cat1),
            ledger.upper(Invariant::Cat1),
            ledger.lower(Invariant::Ccat1),
            ledger.upper(Invariant::Ccat1),
        )));
    }
    let cat_xi = ledger
        .exact(Invariant::CatXi)
        .ok_or_else(|| CatError::NotClosed(format!("{pattern}: cat(M,xi) is not determined")))?;
    Ok(SurfaceTable {
        pattern,
        k,
        r,
        cat1: want,
        ccat1: want,
        cat_xi,
        difference: want as i64 - cat_xi as i64,
        closed: true,
        weight,
        facts,
        ledger,
    })
}
