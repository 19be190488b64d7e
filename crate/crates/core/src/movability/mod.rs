//! Movability of homology classes to infinity: exact decisions over fields and
//! over Z in rank 1, a bounded certificate search in higher rank, and the
//! monodromy pairing obstruction.

mod monodromy;
mod search;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::complexes::{Chain, ComplexError, EquivariantChainComplex};
use crate::exactalg::{
    annihilator_rank1, cokernel_order, lowest_coeff_ideal, poly_left_kernel, poly_solve,
    solve_bounding_chain_rank1, solve_integer_system, CancelToken, ExactAlgError, IntMatrix,
};
use crate::groupring::{in_s_xi, xi_lowest_term, Exponent, IntPoly, SignPolicy, XiOrder};
use crate::novikov::NovikovError;

pub use monodromy::{
    evaluate_obstruction, is_xi_algebraic_integer, verify_pairing, MonodromyPoint, MonodromyValue,
    ObstructionReport, PairingWitness,
};
pub use search::{search_certificate, Certificate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MovabilityError {
    #[error("the chain is not a cycle")]
    NotACycle,
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("certificate failed verification: {0}")]
    Verification(String),
    #[error(transparent)]
    ExactAlg(#[from] ExactAlgError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Novikov(#[from] NovikovError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientRing {
    Integer,
    Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NotMovableWitness {
    /// The lowest coefficients of `Ann(z)` generate `(d)` with `d != 1`;
    /// `d = 0` means `z` has no annihilator at all.
    LowestCoefficient {
        #[serde(serialize_with = "crate::serialize_display")]
        d: BigInt,
        annihilator: Vec<IntPoly>,
    },
    /// A cocycle `v` over the fraction field with `v(z) != 0`.
    GenericPairing {
        cocycle: Vec<IntPoly>,
        value: IntPoly,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Movable {
        delta: IntPoly,
        chain: Option<Chain>,
    },
    NotMovable {
        witness: NotMovableWitness,
    },
    /// The bounded search found nothing.
    Unknown {
        radius: i64,
        chain_radius: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MovabilityVerdict {
    pub outcome: Outcome,
    pub ring: CoefficientRing,
    pub xi: XiOrder,
    pub policy: SignPolicy,
}

impl MovabilityVerdict {
    pub fn is_movable(&self) -> bool {
        matches!(self.outcome, Outcome::Movable { .. })
    }

    pub fn is_not_movable(&self) -> bool {
        matches!(self.outcome, Outcome::NotMovable { .. })
    }

    /// Re-checks the certificate or witness from scratch.
    pub fn verify(&self, c: &EquivariantChainComplex, z: &Chain) -> Result<(), MovabilityError> {
        check_cycle(c, z)?;
        let fail = |m: &str| Err(MovabilityError::Verification(m.to_string()));
        match &self.outcome {
            Outcome::Movable { delta, chain } => {
                match self.ring {
                    CoefficientRing::Integer if !in_s_xi(delta, &self.xi, self.policy) => {
                        return fail("delta is not in S_xi")
                    }
                    CoefficientRing::Rational if delta.is_zero() => return fail("delta is zero"),
                    _ => {}
                }
                let target = z.scale(delta);
                match chain {
                    Some(ch) => {
                        if ch.degree != z.degree + 1 || c.apply_boundary(ch)? != target {
                            return fail("d(c1) differs from delta * z");
                        }
                    }
                    None if self.ring == CoefficientRing::Rational => {
                        if !is_boundary_over_fraction_field(c, &target)? {
                            return fail("delta * z is not a boundary");
                        }
                    }
                    None if c.rank() == 1 => {
                        if solve_bounding_chain_rank1(c, z, delta, None)?.is_none() {
                            return fail("delta * z is not a boundary");
                        }
                    }
                    None => return fail("an integral certificate needs a chain in this rank"),
                }
                Ok(())
            }
            Outcome::NotMovable {
                witness: NotMovableWitness::LowestCoefficient { d, annihilator },
            } => {
                if d.is_one() {
                    return fail("lowest-coefficient ideal is the unit ideal");
                }
                let again = decide_movable_int(c, z, &DecisionOptions::with_policy(self.policy))?;
                match again.outcome {
                    Outcome::NotMovable {
                        witness:
                            NotMovableWitness::LowestCoefficient {
                                d: d2,
                                annihilator: a2,
                            },
                    } if &d2 == d && &a2 == annihilator => Ok(()),
                    _ => fail("recomputed annihilator differs"),
                }
            }
            Outcome::NotMovable {
                witness: NotMovableWitness::GenericPairing { cocycle, value },
            } => {
                let b = c.boundary(z.degree + 1);
                if cocycle.len() != b.rows() {
                    return fail("cocycle has the wrong length");
                }
                for j in 0..b.cols() {
                    let s = (0..b.rows()).fold(IntPoly::zero(c.rank()), |acc, i| {
                        &acc + &(&cocycle[i] * b.get(i, j))
                    });
                    if !s.is_zero() {
                        return fail("functional does not vanish on boundaries");
                    }
                }
                let pairing = pair(cocycle, z, c.rank());
                if value.is_zero() || &pairing != value {
                    return fail("pairing value mismatch");
                }
                Ok(())
            }
            Outcome::Unknown { .. } => Ok(()),
        }
    }
}

/// Parameters of the integral decision.
#[derive(Clone, Debug)]
pub struct DecisionOptions {
    pub policy: SignPolicy,
    /// Radius of the exponent box for the rank >= 2 search.
    pub search_radius: i64,
    pub cancel: Option<CancelToken>,
}

impl Default for DecisionOptions {
    fn default() -> Self {
        DecisionOptions {
            policy: SignPolicy::StrictPlusOne,
            search_radius: 2,
            cancel: None,
        }
    }
}

impl DecisionOptions {
    pub fn with_policy(policy: SignPolicy) -> Self {
        DecisionOptions {
            policy,
            ..Default::default()
        }
    }
}

fn check_cycle(c: &EquivariantChainComplex, z: &Chain) -> Result<(), MovabilityError> {
    if !c.is_cycle(z)? {
        return Err(MovabilityError::NotACycle);
    }
    Ok(())
}

pub(crate) fn pair(v: &[IntPoly], z: &Chain, rank: usize) -> IntPoly {
    v.iter()
        .zip(&z.coords)
        .fold(IntPoly::zero(rank), |acc, (a, b)| &acc + &(a * b))
}

fn is_boundary_over_fraction_field(
    c: &EquivariantChainComplex,
    target: &Chain,
) -> Result<bool, MovabilityError> {
    match poly_solve(&c.boundary(target.degree + 1), &target.coords) {
        Ok(_) => Ok(true),
        Err(ExactAlgError::Inconsistent) => Ok(false),
        Err(e) => Err(e.into()),
    }
}

/// Normalizes the sign so that the xi-lowest coefficient is positive.
fn positive_lowest(p: IntPoly, xi: &XiOrder) -> (IntPoly, bool) {
    match xi_lowest_term(&p, xi) {
        Ok((c, _)) if c.is_negative() => (-&p, true),
        _ => (p, false),
    }
}

/// Movability over the fraction field: `x z` is a boundary for some nonzero
/// `x` iff `z` dies in homology over the field.
pub fn decide_movable_field(
    c: &EquivariantChainComplex,
    z: &Chain,
) -> Result<MovabilityVerdict, MovabilityError> {
    check_cycle(c, z)?;
    let xi = c.xi().clone();
    let verdict = |outcome| MovabilityVerdict {
        outcome,
        ring: CoefficientRing::Rational,
        xi: xi.clone(),
        policy: SignPolicy::StrictPlusOne,
    };
    let rank = c.rank();
    let n = c.cells(z.degree + 1);
    if z.is_zero() {
        return Ok(verdict(Outcome::Movable {
            delta: IntPoly::one(rank),
            chain: Some(Chain::zero(z.degree + 1, n, rank)),
        }));
    }
    let b = c.boundary(z.degree + 1);
    match poly_solve(&b, &z.coords) {
        Ok(sol) => {
            let (delta, flip) = positive_lowest(sol.denominator, &xi);
            let coords = sol
                .numerators
                .into_iter()
                .map(|p| if flip { -&p } else { p })
                .collect();
            Ok(verdict(Outcome::Movable {
                delta,
                chain: Some(Chain::new(z.degree + 1, coords)),
            }))
        }
        Err(ExactAlgError::Inconsistent) => {
            let witness = generic_pairing(&b, z, rank)
                .ok_or_else(|| MovabilityError::Verification("no separating functional".into()))?;
            Ok(verdict(Outcome::NotMovable { witness }))
        }
        Err(e) => Err(e.into()),
    }
}

fn generic_pairing(
    b: &crate::complexes::PolyMatrix,
    z: &Chain,
    rank: usize,
) -> Option<NotMovableWitness> {
    let kernel = if b.cols() == 0 {
        (0..b.rows())
            .map(|i| Chain::basis(0, b.rows(), rank, i).coords)
            .collect()
    } else {
        poly_left_kernel(b)
    };
    kernel.into_iter().find_map(|v| {
        let value = pair(&v, z, rank);
        (!value.is_zero()).then_some(NotMovableWitness::GenericPairing { cocycle: v, value })
    })
}

/// Movability over Z: exact for ranks 0 and 1, a bounded search otherwise.
pub fn decide_movable_int(
    c: &EquivariantChainComplex,
    z: &Chain,
    opts: &DecisionOptions,
) -> Result<MovabilityVerdict, MovabilityError> {
    check_cycle(c, z)?;
    let xi = c.xi().clone();
    let rank = c.rank();
    let q = z.degree;
    let n = c.cells(q + 1);
    let verdict = |outcome| MovabilityVerdict {
        outcome,
        ring: CoefficientRing::Integer,
        xi: xi.clone(),
        policy: opts.policy,
    };
    if z.is_zero() {
        return Ok(verdict(Outcome::Movable {
            delta: IntPoly::one(rank),
            chain: Some(Chain::zero(q + 1, n, rank)),
        }));
    }
    match rank {
        0 => {
            let b = c.boundary(q + 1);
            let zero = Exponent::zero(0);
            let a = IntMatrix::from_rows(
                &(0..b.rows())
                    .map(|i| {
                        (0..b.cols())
                            .map(|j| b.get(i, j).coefficient(&zero))
                            .collect()
                    })
                    .collect::<Vec<Vec<BigInt>>>(),
            );
            let rhs: Vec<BigInt> = z.coords.iter().map(|p| p.coefficient(&zero)).collect();
            let d = if b.cols() == 0 {
                BigInt::zero()
            } else {
                cokernel_order(&a, &rhs)
            };
            if d.is_one() {
                let x = solve_integer_system(&a, &rhs).expect("order one means solvable");
                let chain = Chain::new(
                    q + 1,
                    x.into_iter().map(|k| IntPoly::constant(0, k)).collect(),
                );
                Ok(verdict(Outcome::Movable {
                    delta: IntPoly::one(0),
                    chain: Some(chain),
                }))
            } else {
                let annihilator = if d.is_zero() {
                    vec![]
                } else {
                    vec![IntPoly::constant(0, d.clone())]
                };
                Ok(verdict(Outcome::NotMovable {
                    witness: NotMovableWitness::LowestCoefficient { d, annihilator },
                }))
            }
        }
        1 => {
            let cancel = opts.cancel.as_ref();
            let ann = annihilator_rank1(c, z, cancel)?;
            let lc = lowest_coeff_ideal(&ann, &xi)?;
            if lc.d.is_one() {
                let delta = lc.witness.expect("nonzero ideal has a witness");
                let chain = solve_bounding_chain_rank1(c, z, &delta, cancel)?.ok_or_else(|| {
                    MovabilityError::Verification("annihilator element is not one".into())
                })?;
                Ok(verdict(Outcome::Movable {
                    delta,
                    chain: Some(chain),
                }))
            } else {
                Ok(verdict(Outcome::NotMovable {
                    witness: NotMovableWitness::LowestCoefficient {
                        d: lc.d,
                        annihilator: ann.generators().to_vec(),
                    },
                }))
            }
        }
        _ => {
            if let Some(cert) = search_certificate(c, z, opts.search_radius)? {
                return Ok(verdict(Outcome::Movable {
                    delta: cert.delta,
                    chain: Some(cert.chain),
                }));
            }
            let field = decide_movable_field(c, z)?;
            if let Outcome::NotMovable { witness } = field.outcome {
                return Ok(verdict(Outcome::NotMovable { witness }));
            }
            Ok(verdict(Outcome::Unknown {
                radius: opts.search_radius,
                chain_radius: search::chain_radius(c, z, opts.search_radius),
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::fixtures;
    use crate::groupring::parse_poly;

    fn p(s: &str) -> IntPoly {
        parse_poly(s, 1).unwrap()
    }

    fn int(c: &EquivariantChainComplex, z: &Chain) -> MovabilityVerdict {
        let v = decide_movable_int(c, z, &DecisionOptions::default()).unwrap();
        v.verify(c, z).unwrap();
        v
    }

    #[test]
    fn baumslag_solitar_direction_sensitivity() {
        let pos = fixtures::bs12(1);
        let v = int(&pos.complex, &pos.cycle);
        match &v.outcome {
            Outcome::NotMovable {
                witness: NotMovableWitness::LowestCoefficient { d, annihilator },
            } => {
                assert_eq!(d, &BigInt::from(2));
                assert_eq!(annihilator, &vec![p("t - 2")]);
            }
            o => panic!("unexpected {o:?}"),
        }
        let neg = fixtures::bs12(-1);
        let v = int(&neg.complex, &neg.cycle);
        assert_eq!(
            v.outcome,
            Outcome::Movable {
                delta: p("t - 2"),
                chain: Some(Chain::new(2, vec![p("1")])),
            }
        );
    }

    #[test]
    fn torus_and_circle_movable() {
        for fx in [fixtures::torus(), fixtures::circle()] {
            let v = int(&fx.complex, &fx.cycle);
            match v.outcome {
                Outcome::Movable { delta, .. } => assert_eq!(delta, p("1 - t")),
                o => panic!("unexpected {o:?}"),
            }
        }
    }

    #[test]
    fn genus_two_not_movable_over_z() {
        let fx = fixtures::genus(2);
        let v = int(&fx.complex, &fx.cycle);
        assert_eq!(
            v.outcome,
            Outcome::NotMovable {
                witness: NotMovableWitness::LowestCoefficient {
                    d: BigInt::zero(),
                    annihilator: vec![]
                }
            }
        );
    }

    #[test]
    fn field_examples() {
        let bs = fixtures::bs12(1);
        let v = decide_movable_field(&bs.complex, &bs.cycle).unwrap();
        v.verify(&bs.complex, &bs.cycle).unwrap();
        match v.outcome {
            Outcome::Movable { delta, .. } => assert_eq!(delta, p("2 - t")),
            o => panic!("unexpected {o:?}"),
        }
        let g2 = fixtures::genus(2);
        let v = decide_movable_field(&g2.complex, &g2.cycle).unwrap();
        v.verify(&g2.complex, &g2.cycle).unwrap();
        assert!(v.is_not_movable());
        let circle = fixtures::circle();
        let v = decide_movable_field(&circle.complex, &circle.cycle).unwrap();
        v.verify(&circle.complex, &circle.cycle).unwrap();
        match v.outcome {
            Outcome::Movable { delta, .. } => assert_eq!(delta, p("1 - t")),
            o => panic!("unexpected {o:?}"),
        }
    }

    #[test]
    fn zero_class_is_movable() {
        let fx = fixtures::genus(2);
        let z = Chain::zero(1, fx.cycle.coords.len(), 1);
        assert!(int(&fx.complex, &z).is_movable());
        assert!(decide_movable_field(&fx.complex, &z).unwrap().is_movable());
    }

    #[test]
    fn rejects_non_cycles() {
        let fx = fixtures::torus();
        let e = fx
            .complex
            .basis_chain(1, fx.complex.cell_index(1, "a").unwrap());
        assert_eq!(
            decide_movable_int(&fx.complex, &e, &DecisionOptions::default()),
            Err(MovabilityError::NotACycle)
        );
        assert_eq!(
            decide_movable_field(&fx.complex, &e),
            Err(MovabilityError::NotACycle)
        );
    }

    #[test]
    fn forged_certificates_fail() {
        let fx = fixtures::bs12(1);
        let forged = MovabilityVerdict {
            outcome: Outcome::Movable {
                delta: p("1 - 2*t"),
                chain: None,
            },
            ring: CoefficientRing::Integer,
            xi: fx.complex.xi().clone(),
            policy: SignPolicy::StrictPlusOne,
        };
        assert!(forged.verify(&fx.complex, &fx.cycle).is_err());
        let forged = MovabilityVerdict {
            outcome: Outcome::NotMovable {
                witness: NotMovableWitness::LowestCoefficient {
                    d: BigInt::from(3),
                    annihilator: vec![p("t - 3")],
                },
            },
            ..forged
        };
        assert!(forged.verify(&fx.complex, &fx.cycle).is_err());
    }

    #[test]
    fn rank_two_search_and_pairing() {
        let sq = fixtures::circle_squared();
        let v = int(&sq.complex, &sq.cycle);
        match v.outcome {
            Outcome::Movable { delta, .. } => assert_eq!(delta, parse_poly("1 - t1", 2).unwrap()),
            o => panic!("unexpected {o:?}"),
        }
    }

    #[test]
    fn monotonicity_on_corpus() {
        for fx in fixtures::corpus() {
            let zi =
                decide_movable_int(&fx.complex, &fx.cycle, &DecisionOptions::default()).unwrap();
            zi.verify(&fx.complex, &fx.cycle).unwrap();
            let qf = decide_movable_field(&fx.complex, &fx.cycle).unwrap();
            qf.verify(&fx.complex, &fx.cycle).unwrap();
            if zi.is_movable() {
                assert!(qf.is_movable(), "{}", fx.name);
            }
            if qf.is_not_movable() {
                assert!(zi.is_not_movable(), "{}", fx.name);
            }
        }
    }

    #[test]
    fn rank_zero_uses_cokernel_order() {
        let g = fixtures::genus_trivial(2);
        let v = int(&g.complex, &g.cycle);
        assert!(v.is_not_movable());
    }
}
