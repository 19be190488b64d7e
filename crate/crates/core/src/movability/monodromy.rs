//! Rank-one local systems and the pairing obstruction to movability.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{check_cycle, MovabilityError};
use crate::complexes::{Chain, EquivariantChainComplex, PolyMatrix};
use crate::exactalg::{frac_left_kernel, FracMatrix, FracScalar};
use crate::groupring::{IntPoly, RatPoly, XiOrder};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum MonodromyValue {
    Rational(#[serde(serialize_with = "crate::serialize_rational")] BigRational),
    /// An algebraically independent transcendental.
    Transcendental,
}

/// The image of each generator `t_i` under the monodromy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonodromyPoint {
    pub values: Vec<MonodromyValue>,
}

impl MonodromyPoint {
    pub fn transcendental(rank: usize) -> Self {
        MonodromyPoint {
            values: vec![MonodromyValue::Transcendental; rank],
        }
    }

    pub fn rational(values: Vec<BigRational>) -> Self {
        MonodromyPoint {
            values: values.into_iter().map(MonodromyValue::Rational).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn is_transcendental(&self) -> bool {
        self.values
            .iter()
            .all(|v| *v == MonodromyValue::Transcendental)
    }

    fn rationals(&self) -> Result<Vec<BigRational>, MovabilityError> {
        self.values
            .iter()
            .map(|v| match v {
                MonodromyValue::Rational(x) if !x.is_zero() => Ok(x.clone()),
                MonodromyValue::Rational(_) => Err(MovabilityError::Unsupported(
                    "monodromy values must be nonzero".into(),
                )),
                MonodromyValue::Transcendental => Err(MovabilityError::Unsupported(
                    "mixed rational and transcendental monodromy".into(),
                )),
            })
            .collect()
    }

    /// Parses `generic` or a comma-separated list of rationals such as `2,1/3`.
    pub fn parse(s: &str, rank: usize) -> Result<Self, MovabilityError> {
        let s = s.trim();
        if s == "generic" || s == "transcendental" {
            return Ok(Self::transcendental(rank));
        }
        let values = s
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<BigRational>()
                    .map_err(|_| MovabilityError::Unsupported(format!("bad monodromy value {x:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if values.len() != rank {
            return Err(MovabilityError::Unsupported(format!(
                "expected {rank} monodromy values, got {}",
                values.len()
            )));
        }
        Ok(Self::rational(values))
    }
}

/// Whether the kernel of the monodromy contains a polynomial with xi-top
/// coefficient 1.
pub fn is_xi_algebraic_integer(
    mono: &MonodromyPoint,
    xi: &XiOrder,
) -> Result<bool, MovabilityError> {
    if mono.rank() != xi.rank() {
        return Err(MovabilityError::Unsupported(format!(
            "monodromy has rank {}, xi has rank {}",
            mono.rank(),
            xi.rank()
        )));
    }
    if mono.is_transcendental() {
        return Ok(false);
    }
    let values = mono.rationals()?;
    let sign = xi.rank_one_sign().ok_or_else(|| {
        MovabilityError::Unsupported("rational monodromy is supported in rank 1 only".into())
    })?;
    let x = &values[0];
    Ok(if sign > 0 {
        x.denom().is_one()
    } else {
        x.numer().abs().is_one()
    })
}

/// A cocycle of the dual local system with nonzero pairing against `z`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairingWitness {
    pub cocycle: Vec<IntPoly>,
    pub cycle: Chain,
    pub value: FracScalar,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionReport {
    pub monodromy: MonodromyPoint,
    pub image_nonzero: bool,
    pub witness: Option<PairingWitness>,
    /// `None` when the algebraic-integer test does not apply.
    pub algebraic_integer: Option<bool>,
    pub concludes_not_movable: bool,
}

fn specialize(p: &IntPoly, inverse: &Option<Vec<BigRational>>) -> FracScalar {
    match inverse {
        None => FracScalar::from_int(&p.conjugate()),
        Some(point) => FracScalar::from_poly(RatPoly::constant(0, p.evaluate(point))),
    }
}

fn specialize_matrix(m: &PolyMatrix, inverse: &Option<Vec<BigRational>>) -> FracMatrix {
    let rank = if inverse.is_some() { 0 } else { m.ring_rank() };
    FracMatrix::new(
        rank,
        (0..m.rows())
            .map(|i| {
                (0..m.cols())
                    .map(|j| specialize(m.get(i, j), inverse))
                    .collect()
            })
            .collect(),
    )
}

fn inverse_point(mono: &MonodromyPoint) -> Result<Option<Vec<BigRational>>, MovabilityError> {
    Ok(if mono.is_transcendental() {
        None
    } else {
        Some(mono.rationals()?.iter().map(BigRational::recip).collect())
    })
}

/// Specializes the complex along `t_i -> x_i^-1` and decides whether `z`
/// survives in homology there, with an explicit cocycle when it does.
pub fn evaluate_obstruction(
    c: &EquivariantChainComplex,
    z: &Chain,
    mono: &MonodromyPoint,
) -> Result<ObstructionReport, MovabilityError> {
    check_cycle(c, z)?;
    if mono.rank() != c.rank() {
        return Err(MovabilityError::Unsupported(format!(
            "monodromy has rank {}, complex has rank {}",
            mono.rank(),
            c.rank()
        )));
    }
    let inverse = inverse_point(mono)?;
    let b = c.boundary(z.degree + 1);
    let m = specialize_matrix(&b, &inverse);
    let zs: Vec<FracScalar> = z.coords.iter().map(|p| specialize(p, &inverse)).collect();
    let kernel_rank = if inverse.is_some() { 0 } else { c.rank() };
    let kernel: Vec<Vec<IntPoly>> = if b.cols() == 0 {
        (0..b.rows())
            .map(|i| Chain::basis(0, b.rows(), kernel_rank, i).coords)
            .collect()
    } else {
        frac_left_kernel(&m)
    };
    let witness = kernel.into_iter().find_map(|v| {
        let value = v
            .iter()
            .zip(&zs)
            .fold(FracScalar::zero(kernel_rank), |acc, (a, b)| {
                acc.add(&FracScalar::from_int(a).mul(b))
            });
        (!value.is_zero()).then(|| PairingWitness {
            cocycle: v,
            cycle: z.clone(),
            value,
        })
    });
    let algebraic_integer = is_xi_algebraic_integer(mono, c.xi()).ok();
    let image_nonzero = witness.is_some();
    Ok(ObstructionReport {
        monodromy: mono.clone(),
        image_nonzero,
        witness,
        algebraic_integer,
        concludes_not_movable: image_nonzero && algebraic_integer == Some(false),
    })
}

/// Re-checks a pairing witness: `cocycle` must vanish on the specialized
/// boundaries and pair nontrivially with `z`. Returns the pairing value.
pub fn verify_pairing(
    c: &EquivariantChainComplex,
    z: &Chain,
    mono: &MonodromyPoint,
    cocycle: &[IntPoly],
) -> Result<FracScalar, MovabilityError> {
    check_cycle(c, z)?;
    if mono.rank() != c.rank() {
        return Err(MovabilityError::Unsupported(format!(
            "monodromy has rank {}, complex has rank {}",
            mono.rank(),
            c.rank()
        )));
    }
    let inverse = inverse_point(mono)?;
    let rank = if inverse.is_some() { 0 } else { c.rank() };
    let fail = |m: &str| Err(MovabilityError::Verification(m.to_string()));
    if cocycle.len() != z.coords.len() || cocycle.iter().any(|p| p.rank() != rank) {
        return fail("cocycle has the wrong shape");
    }
    let m = specialize_matrix(&c.boundary(z.degree + 1), &inverse);
    let v: Vec<FracScalar> = cocycle.iter().map(FracScalar::from_int).collect();
    for j in 0..m.cols() {
        let s = (0..m.rows()).fold(FracScalar::zero(rank), |acc, i| {
            acc.add(&v[i].mul(m.get(i, j)))
        });
        if !s.is_zero() {
            return fail("cocycle does not vanish on boundaries");
        }
    }
    let value = v
        .iter()
        .zip(&z.coords)
        .fold(FracScalar::zero(rank), |acc, (a, b)| {
            acc.add(&a.mul(&specialize(b, &inverse)))
        });
    if value.is_zero() {
        return fail("cocycle pairs trivially with z");
    }
    Ok(value)
}

/// Brute-force search for an integer polynomial in one variable with
/// xi-top coefficient 1 vanishing at `x`.
#[cfg(test)]
fn brute_force_algebraic_integer(
    x: &BigRational,
    positive: bool,
    degree: usize,
    bound: i64,
) -> bool {
    use num_bigint::BigInt;

    fn rec(
        coeffs: &mut Vec<BigInt>,
        n: usize,
        bound: i64,
        x: &BigRational,
        positive: bool,
    ) -> bool {
        if coeffs.len() == n {
            let mut all = coeffs.clone();
            if positive {
                all.push(BigInt::one());
            } else {
                all.insert(0, BigInt::one());
            }
            let v = all.iter().rev().fold(BigRational::zero(), |acc, a| {
                acc * x + BigRational::from_integer(a.clone())
            });
            return v.is_zero();
        }
        for a in -bound..=bound {
            coeffs.push(a.into());
            if rec(coeffs, n, bound, x, positive) {
                return true;
            }
            coeffs.pop();
        }
        false
    }
    (1..=degree).any(|n| rec(&mut Vec::new(), n, bound, x, positive))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::fixtures;
    use crate::movability::{decide_movable_int, DecisionOptions};
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn algebraic_integer_examples() {
        let xi = XiOrder::rank_one(1).unwrap();
        let neg = XiOrder::rank_one(-1).unwrap();
        assert!(is_xi_algebraic_integer(&MonodromyPoint::rational(vec![r(2, 1)]), &xi).unwrap());
        assert!(!is_xi_algebraic_integer(&MonodromyPoint::rational(vec![r(1, 2)]), &xi).unwrap());
        assert!(is_xi_algebraic_integer(&MonodromyPoint::rational(vec![r(1, 2)]), &neg).unwrap());
        let xi2 = fixtures::circle_squared().complex.xi().clone();
        for (rank, order) in [(1, &xi), (1, &neg), (2, &xi2)] {
            let t = MonodromyPoint::transcendental(rank);
            assert!(!is_xi_algebraic_integer(&t, order).unwrap());
        }
        let mixed = MonodromyPoint {
            values: vec![
                MonodromyValue::Rational(r(2, 1)),
                MonodromyValue::Transcendental,
            ],
        };
        assert!(is_xi_algebraic_integer(&mixed, &xi2).is_err());
    }

    #[test]
    fn algebraic_integer_matches_brute_force() {
        for (p, q) in [
            (2, 1),
            (1, 2),
            (3, 1),
            (2, 3),
            (-1, 1),
            (1, 3),
            (-3, 2),
            (-1, 4),
            (4, 1),
        ] {
            let x = r(p, q);
            for sign in [1, -1] {
                let xi = XiOrder::rank_one(sign).unwrap();
                let fast = is_xi_algebraic_integer(&MonodromyPoint::rational(vec![x.clone()]), &xi)
                    .unwrap();
                assert_eq!(
                    fast,
                    brute_force_algebraic_integer(&x, sign > 0, 4, 4),
                    "{x} {sign}"
                );
            }
        }
    }

    #[test]
    fn genus_two_generic_pairing() {
        let fx = fixtures::genus(2);
        let rep = evaluate_obstruction(&fx.complex, &fx.cycle, &MonodromyPoint::transcendental(1))
            .unwrap();
        assert!(rep.image_nonzero);
        assert!(rep.concludes_not_movable);
        let w = rep.witness.unwrap();
        assert!(!w.value.is_zero());
        let mono = MonodromyPoint::transcendental(1);
        assert_eq!(
            verify_pairing(&fx.complex, &fx.cycle, &mono, &w.cocycle).unwrap(),
            w.value
        );
        let b = fx.complex.boundary(2);
        let i = (0..b.rows()).find(|&i| !b.get(i, 0).is_zero()).unwrap();
        let mut forged = w.cocycle.clone();
        forged[i] = &forged[i] + &IntPoly::one(1);
        assert!(verify_pairing(&fx.complex, &fx.cycle, &mono, &forged).is_err());
    }

    #[test]
    fn rational_witnesses_reverify() {
        let fx = fixtures::bs12(1);
        let mono = MonodromyPoint::rational(vec![r(1, 2)]);
        let rep = evaluate_obstruction(&fx.complex, &fx.cycle, &mono).unwrap();
        let w = rep.witness.unwrap();
        assert_eq!(
            verify_pairing(&fx.complex, &fx.cycle, &mono, &w.cocycle).unwrap(),
            w.value
        );
        let zero = vec![IntPoly::zero(0); w.cocycle.len()];
        assert!(verify_pairing(&fx.complex, &fx.cycle, &mono, &zero).is_err());
    }

    #[test]
    fn baumslag_solitar_specialization_kills_class() {
        let fx = fixtures::bs12(-1);
        let rep = evaluate_obstruction(
            &fx.complex,
            &fx.cycle,
            &MonodromyPoint::rational(vec![r(2, 1)]),
        )
        .unwrap();
        assert!(!rep.image_nonzero);
        assert!(!rep.concludes_not_movable);
    }

    #[test]
    fn torus_generic_image_vanishes() {
        let fx = fixtures::torus();
        let rep = evaluate_obstruction(&fx.complex, &fx.cycle, &MonodromyPoint::transcendental(1))
            .unwrap();
        assert!(!rep.image_nonzero);
        assert_eq!(rep.algebraic_integer, Some(false));
    }

    #[test]
    fn special_point_can_detect_class() {
        // (t - 2) vanishes at t = 1/x = 2, so the class survives there.
        let fx = fixtures::bs12(1);
        let rep = evaluate_obstruction(
            &fx.complex,
            &fx.cycle,
            &MonodromyPoint::rational(vec![r(1, 2)]),
        )
        .unwrap();
        assert!(rep.image_nonzero);
        assert_eq!(rep.algebraic_integer, Some(false));
        assert!(rep.concludes_not_movable);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn movable_classes_die_at_non_integral_points(p in -9i64..=9, q in 1i64..=9) {
            prop_assume!(p != 0);
            let mono = MonodromyPoint::rational(vec![r(p, q)]);
            for fx in fixtures::corpus().into_iter().filter(|f| f.complex.rank() == 1) {
                let v = decide_movable_int(&fx.complex, &fx.cycle, &DecisionOptions::default()).unwrap();
                if !v.is_movable() {
                    continue;
                }
                let rep = evaluate_obstruction(&fx.complex, &fx.cycle, &mono).unwrap();
                if rep.algebraic_integer == Some(false) {
                    prop_assert!(!rep.image_nonzero, "{} at {}/{}", fx.name, p, q);
                }
                let generic = evaluate_obstruction(&fx.complex, &fx.cycle, &MonodromyPoint::transcendental(1)).unwrap();
                prop_assert!(!generic.image_nonzero);
            }
        }
    }
}
