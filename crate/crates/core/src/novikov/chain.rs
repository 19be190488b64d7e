//! The infinite chain `c' = c1 + y c1 + y^2 c1 + ...` bounding a movable cycle.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::{min_first, truncate_poly, NovikovError};
use crate::complexes::{Chain, EquivariantChainComplex};
use crate::exactalg::solve_bounding_chain_rank1;
use crate::groupring::{in_s_xi, xi_lowest_term, IntPoly, SignPolicy};

/// A truncation of `c' = h^-1 (c1 + y c1 + y^2 c1 + ...)` with the bound it certifies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfiniteChain {
    pub chain: Chain,
    #[serde(serialize_with = "crate::serialize_rational")]
    pub cutoff: BigRational,
    /// How far below its input a boundary entry can reach.
    #[serde(serialize_with = "crate::serialize_rational")]
    pub spread: BigRational,
    /// Number of summands `y^i c1` that reach below the cutoff.
    pub terms: usize,
    pub h: IntPoly,
    pub y: IntPoly,
    /// Smallest first xi coordinate in the support of `dc' - z`; `None` when it vanishes.
    #[serde(serialize_with = "crate::serialize_opt_rational")]
    pub residual_min: Option<BigRational>,
}

/// Truncates `h^-1 sum y^i c1` at `cutoff` after checking `dc1 = delta z`
/// exactly, and certifies that `dc' - z` lives at first coordinate at least
/// `cutoff - spread`.
pub fn build_infinite_chain(
    c: &EquivariantChainComplex,
    z: &Chain,
    delta: &IntPoly,
    c1: &Chain,
    cutoff: &BigRational,
    policy: SignPolicy,
) -> Result<InfiniteChain, NovikovError> {
    let xi = c.xi();
    if !in_s_xi(delta, xi, policy) {
        return Err(NovikovError::Verification(format!(
            "{delta} is not in S_xi"
        )));
    }
    if c1.degree != z.degree + 1 || c.apply_boundary(c1)? != z.scale(delta) {
        return Err(NovikovError::Verification(
            "dc1 differs from delta * z".into(),
        ));
    }
    let (alpha, g) = xi_lowest_term(delta, xi).expect("nonzero");
    let h = IntPoly::monomial(g.clone(), alpha.clone());
    let h_inv = IntPoly::monomial(-&g, alpha);
    let y = &IntPoly::one(xi.rank()) - &(&h_inv * delta);
    if y.terms()
        .any(|(e, _)| xi.first_coordinate(e) <= BigRational::zero())
    {
        return Err(NovikovError::NotTruncatable);
    }
    let rank = xi.rank();
    let mut term: Vec<IntPoly> = c1
        .coords
        .iter()
        .map(|p| truncate_poly(&(p * &h_inv), cutoff, xi))
        .collect();
    let mut acc = vec![IntPoly::zero(rank); term.len()];
    let mut terms = 0;
    while term.iter().any(|p| !p.is_zero()) {
        for (a, p) in acc.iter_mut().zip(&term) {
            *a = &*a + p;
        }
        terms += 1;
        term = term
            .iter()
            .map(|p| truncate_poly(&(p * &y), cutoff, xi))
            .collect();
    }
    let chain = Chain::new(c1.degree, acc);
    let (spread, residual_min) = verify_truncated_chain(c, z, &chain, cutoff)?;
    Ok(InfiniteChain {
        chain,
        cutoff: cutoff.clone(),
        spread,
        terms,
        h,
        y,
        residual_min,
    })
}

/// Checks that `dc' - z` lives at first coordinate at least `cutoff - spread`,
/// with the spread read off the boundary of the complex. Returns the spread
/// and the lowest first coordinate of `dc' - z`.
pub fn verify_truncated_chain(
    c: &EquivariantChainComplex,
    z: &Chain,
    chain: &Chain,
    cutoff: &BigRational,
) -> Result<(BigRational, Option<BigRational>), NovikovError> {
    let xi = c.xi();
    if chain.degree != z.degree + 1 {
        return Err(NovikovError::Verification(
            "chain has the wrong degree".into(),
        ));
    }
    let spread = c
        .boundary(chain.degree)
        .entries()
        .filter_map(|p| min_first(p, xi))
        .min()
        .map_or_else(BigRational::zero, |m| (-m).max(BigRational::zero()));
    let residual = c.apply_boundary(chain)?.sub(z);
    let residual_min = residual
        .coords
        .iter()
        .filter_map(|p| min_first(p, xi))
        .min();
    if let Some(m) = &residual_min {
        if m < &(cutoff - &spread) {
            return Err(NovikovError::Verification(format!(
                "dc' - z has support at {m}, below {}",
                cutoff - &spread
            )));
        }
    }
    Ok((spread, residual_min))
}

/// An exact chain `c1` with `dc1 = delta z` over the Laurent ring (rank 1).
pub fn solve_bounding_chain(
    c: &EquivariantChainComplex,
    z: &Chain,
    delta: &IntPoly,
) -> Result<Chain, NovikovError> {
    solve_bounding_chain_rank1(c, z, delta, None)?.ok_or(NovikovError::NotABoundary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{cross_chain, fixtures};
    use crate::groupring::{parse_poly, Exponent};
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn coefficient_of(chain: &Chain, cell: usize, exp: i64) -> BigInt {
        chain.coords[cell].coefficient(&Exponent::new(vec![exp]))
    }

    fn p(s: &str) -> IntPoly {
        parse_poly(s, 1).unwrap()
    }

    #[test]
    fn circle_translation_chain() {
        let fx = fixtures::circle();
        let delta = p("1 - t");
        let c1 = solve_bounding_chain(&fx.complex, &fx.cycle, &delta).unwrap();
        assert_eq!(c1.coords, vec![p("-1")]);
        let ic = build_infinite_chain(
            &fx.complex,
            &fx.cycle,
            &delta,
            &c1,
            &q(5),
            SignPolicy::StrictPlusOne,
        )
        .unwrap();
        assert_eq!(ic.chain.coords, vec![p("-1 - t - t^2 - t^3 - t^4")]);
        assert_eq!(ic.residual_min, Some(q(5)));
    }

    #[test]
    fn baumslag_solitar_doubling() {
        let fx = fixtures::bs12(-1);
        let delta = p("t - 2");
        let c1 = solve_bounding_chain(&fx.complex, &fx.cycle, &delta).unwrap();
        assert_eq!(c1.coords, vec![p("1")]);
        let ic = build_infinite_chain(
            &fx.complex,
            &fx.cycle,
            &delta,
            &c1,
            &q(6),
            SignPolicy::StrictPlusOne,
        )
        .unwrap();
        for i in 0..5u32 {
            assert_eq!(
                coefficient_of(&ic.chain, 0, -(i as i64) - 1),
                BigInt::from(2).pow(i)
            );
        }
    }

    #[test]
    fn torus_unit_coefficients() {
        let fx = fixtures::torus();
        let delta = p("1 - t");
        let c1 = solve_bounding_chain(&fx.complex, &fx.cycle, &delta).unwrap();
        assert_eq!(c1.coords, vec![p("-1")]);
        let ic = build_infinite_chain(
            &fx.complex,
            &fx.cycle,
            &delta,
            &c1,
            &q(10),
            SignPolicy::StrictPlusOne,
        )
        .unwrap();
        assert!(ic.chain.coords[0]
            .terms()
            .all(|(_, c)| c == &BigInt::from(-1)));
    }

    #[test]
    fn rejects_bad_certificates() {
        let fx = fixtures::bs12(1);
        let delta = p("t - 2");
        let c1 = solve_bounding_chain(&fx.complex, &fx.cycle, &delta).unwrap();
        assert!(matches!(
            build_infinite_chain(
                &fx.complex,
                &fx.cycle,
                &delta,
                &c1,
                &q(5),
                SignPolicy::PlusMinusOne
            ),
            Err(NovikovError::Verification(_))
        ));
        let wrong = c1.scale(&p("2"));
        let neg = fixtures::bs12(-1);
        assert!(matches!(
            build_infinite_chain(
                &neg.complex,
                &neg.cycle,
                &delta,
                &wrong,
                &q(5),
                SignPolicy::StrictPlusOne
            ),
            Err(NovikovError::Verification(_))
        ));
        assert_eq!(
            solve_bounding_chain(&fx.complex, &fx.cycle, &p("t - 1")),
            Err(NovikovError::NotABoundary)
        );
    }

    #[test]
    fn residual_bound_holds_for_fixtures() {
        let circle = fixtures::circle();
        let sq = fixtures::circle_squared();
        // d(e x v) = (t1 - 1) v x v
        let e = circle.complex.basis_chain(1, 0);
        let sq_c1 = cross_chain(&circle.complex, &circle.complex, &e, &circle.cycle).neg();
        let sq_delta = parse_poly("1 - t1", 2).unwrap();
        let mut cases = vec![(sq.complex, sq.cycle, sq_delta, sq_c1)];
        for (fx, d) in [
            (fixtures::circle(), "1 - t"),
            (fixtures::torus(), "1 - t"),
            (fixtures::bs12(-1), "t - 2"),
        ] {
            let delta = p(d);
            let c1 = solve_bounding_chain(&fx.complex, &fx.cycle, &delta).unwrap();
            cases.push((fx.complex, fx.cycle, delta, c1));
        }
        for (c, z, delta, c1) in &cases {
            for tau in [5, 10, 20] {
                let ic = build_infinite_chain(c, z, delta, c1, &q(tau), SignPolicy::StrictPlusOne)
                    .unwrap();
                let residual = c.apply_boundary(&ic.chain).unwrap().sub(z);
                let floor = q(tau) - &ic.spread;
                for poly in &residual.coords {
                    for (e, _) in poly.terms() {
                        assert!(c.xi().first_coordinate(e) >= floor);
                    }
                }
                assert!(ic.terms > 0);
            }
        }
    }
}
