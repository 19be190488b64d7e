//! Strong Gröbner bases for submodules of Z[s, t]^n, used for the Laurent
//! ring Z[t, t^-1] = Z[s, t] / (ts - 1).
//!
//! Module terms are ordered position-first with smaller positions dominating,
//! then lexicographically with `s > t`. This eliminates earlier positions and
//! then `s`, which is how annihilators and bounding chains are extracted.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{CancelToken, ExactAlgError};
use crate::complexes::{Chain, EquivariantChainComplex};
use crate::groupring::{xi_lowest_term, Exponent, IntPoly, XiOrder};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Mon {
    pos: usize,
    s: u32,
    t: u32,
}

impl Ord for Mon {
    fn cmp(&self, other: &Self) -> Ordering {
        (Reverse(self.pos), self.s, self.t).cmp(&(Reverse(other.pos), other.s, other.t))
    }
}

impl PartialOrd for Mon {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

type Elem = BTreeMap<Mon, BigInt>;

fn lead(f: &Elem) -> Option<(Mon, &BigInt)> {
    f.last_key_value().map(|(m, c)| (*m, c))
}

fn add_term(f: &mut Elem, m: Mon, c: BigInt) {
    if c.is_zero() {
        return;
    }
    let e = f.entry(m).or_insert_with(BigInt::zero);
    *e += c;
    if e.is_zero() {
        f.remove(&m);
    }
}

/// `f + k * s^ds * t^dt * g`
fn axpy(f: &mut Elem, k: &BigInt, ds: u32, dt: u32, g: &Elem) {
    for (m, c) in g {
        let m2 = Mon {
            pos: m.pos,
            s: m.s + ds,
            t: m.t + dt,
        };
        add_term(f, m2, k * c);
    }
}

fn scaled_shift(k: &BigInt, ds: u32, dt: u32, g: &Elem) -> Elem {
    let mut out = Elem::new();
    axpy(&mut out, k, ds, dt, g);
    out
}

/// Laurent `t^k` as `t^k` or `s^-k`.
fn lift(p: &IntPoly, pos: usize, out: &mut Elem) {
    for (e, c) in p.terms() {
        let k = e.entries()[0];
        let m = if k >= 0 {
            Mon {
                pos,
                s: 0,
                t: k as u32,
            }
        } else {
            Mon {
                pos,
                s: (-k) as u32,
                t: 0,
            }
        };
        add_term(out, m, c.clone());
    }
}

/// The component at `pos`, mapped back to the Laurent ring.
fn lower(f: &Elem, pos: usize) -> IntPoly {
    let mut p = IntPoly::zero(1);
    for (m, c) in f.iter().filter(|(m, _)| m.pos == pos) {
        p.add_term(Exponent::new(vec![m.t as i64 - m.s as i64]), c.clone());
    }
    p
}

fn relation(pos: usize) -> Elem {
    let mut f = Elem::new();
    add_term(&mut f, Mon { pos, s: 1, t: 1 }, BigInt::one());
    add_term(&mut f, Mon { pos, s: 0, t: 0 }, -BigInt::one());
    f
}

fn divides(a: Mon, b: Mon) -> bool {
    a.pos == b.pos && a.s <= b.s && a.t <= b.t
}

/// Top-reduces `f` while its leading position is below `stop`.
fn top_reduce(mut f: Elem, basis: &[Elem], stop: usize) -> Elem {
    loop {
        let Some((lm, lc)) = lead(&f) else { return f };
        if lm.pos >= stop {
            return f;
        }
        let lc = lc.clone();
        let hit = basis.iter().find_map(|g| {
            let (gm, gc) = lead(g)?;
            (divides(gm, lm) && lc.is_multiple_of(gc)).then(|| (gm, gc.clone(), g))
        });
        let Some((gm, gc, g)) = hit else { return f };
        axpy(&mut f, &-(&lc / &gc), lm.s - gm.s, lm.t - gm.t, g);
    }
}

fn strong_basis(gens: Vec<Elem>, cancel: Option<&CancelToken>) -> Result<Vec<Elem>, ExactAlgError> {
    let mut basis: Vec<Elem> = Vec::new();
    let mut todo: VecDeque<Elem> = gens.into();
    while let Some(f) = todo.pop_front() {
        CancelToken::check(cancel)?;
        let mut r = top_reduce(f, &basis, usize::MAX);
        let Some((rm, rc)) = lead(&r) else { continue };
        if rc.is_negative() {
            for c in r.values_mut() {
                *c = -c.clone();
            }
        }
        let rc = lead(&r).unwrap().1.clone();
        for g in &basis {
            let (gm, gc) = lead(g).unwrap();
            if gm.pos != rm.pos {
                continue;
            }
            let (ls, lt) = (gm.s.max(rm.s), gm.t.max(rm.t));
            let l = gc.lcm(&rc);
            let mut s = scaled_shift(&(&l / gc), ls - gm.s, lt - gm.t, g);
            axpy(&mut s, &-(&l / &rc), ls - rm.s, lt - rm.t, &r);
            todo.push_back(s);
            if !rc.is_multiple_of(gc) && !gc.is_multiple_of(&rc) {
                let e = gc.extended_gcd(&rc);
                let mut gp = scaled_shift(&e.x, ls - gm.s, lt - gm.t, g);
                axpy(&mut gp, &e.y, ls - rm.s, lt - rm.t, &r);
                todo.push_back(gp);
            }
        }
        basis.push(r);
    }
    Ok(basis)
}

// ---- ideals of Z[t, t^-1] ----------------------------------------------

/// A strong Gröbner basis of `I ∩ Z[t]` for an ideal `I` of the Laurent ring.
///
/// Generators are polynomials with nonzero constant term and positive
/// leading coefficient, sorted by degree. The zero ideal has no generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealBasisRank1 {
    generators: Vec<IntPoly>,
}

fn degree(p: &IntPoly) -> i64 {
    p.lex_leading().map_or(-1, |(e, _)| e.entries()[0])
}

fn leading_coeff(p: &IntPoly) -> &BigInt {
    p.lex_leading().expect("nonzero").1
}

impl IdealBasisRank1 {
    fn from_polys(mut polys: Vec<IntPoly>) -> Self {
        polys.retain(|p| !p.is_zero());
        polys.sort_by(|a, b| {
            degree(a)
                .cmp(&degree(b))
                .then_with(|| leading_coeff(a).cmp(leading_coeff(b)))
                .then_with(|| a.to_string().cmp(&b.to_string()))
        });
        let mut kept: Vec<IntPoly> = Vec::new();
        for p in polys {
            let redundant = kept.iter().any(|g| {
                degree(g) <= degree(&p) && leading_coeff(&p).is_multiple_of(leading_coeff(g))
            });
            if !redundant {
                kept.push(p);
            }
        }
        IdealBasisRank1 { generators: kept }
    }

    pub fn generators(&self) -> &[IntPoly] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Ideal membership by strong reduction.
    pub fn contains(&self, f: &IntPoly) -> bool {
        let (mut f, _) = f.to_polynomial_shift();
        while let Some((e, c)) = f.lex_leading().map(|(e, c)| (e.entries()[0], c.clone())) {
            let Some(g) = self
                .generators
                .iter()
                .find(|g| degree(g) <= e && c.is_multiple_of(leading_coeff(g)))
            else {
                return false;
            };
            let q = &c / leading_coeff(g);
            let shift = Exponent::new(vec![e - degree(g)]);
            f = &f - &g.shift(&shift).scale(&q);
        }
        true
    }
}

fn check_rank_one(rank: usize) -> Result<(), ExactAlgError> {
    if rank != 1 {
        return Err(ExactAlgError::UnsupportedRank {
            expected: 1,
            found: rank,
        });
    }
    Ok(())
}

/// The ideal of the Laurent ring generated by `gens`.
pub fn groebner_rank1(gens: &[IntPoly]) -> Result<IdealBasisRank1, ExactAlgError> {
    groebner_rank1_with(gens, None)
}

pub fn groebner_rank1_with(
    gens: &[IntPoly],
    cancel: Option<&CancelToken>,
) -> Result<IdealBasisRank1, ExactAlgError> {
    for g in gens {
        check_rank_one(g.rank())?;
    }
    let mut input = vec![relation(0)];
    for g in gens {
        let mut f = Elem::new();
        lift(g, 0, &mut f);
        input.push(f);
    }
    let basis = strong_basis(input, cancel)?;
    Ok(IdealBasisRank1::from_polys(
        basis
            .iter()
            .filter(|f| f.keys().all(|m| m.s == 0))
            .map(|f| lower(f, 0))
            .collect(),
    ))
}

fn check_cycle(c: &EquivariantChainComplex, z: &Chain) -> Result<(), ExactAlgError> {
    check_rank_one(c.rank())?;
    if !c.is_cycle(z)? {
        return Err(ExactAlgError::NotACycle);
    }
    Ok(())
}

/// `Ann(z) = {f : f z is a boundary}` in the Laurent ring.
pub fn annihilator_rank1(
    c: &EquivariantChainComplex,
    z: &Chain,
    cancel: Option<&CancelToken>,
) -> Result<IdealBasisRank1, ExactAlgError> {
    check_cycle(c, z)?;
    let q = z.degree;
    let m = c.cells(q);
    let mut input: Vec<Elem> = (0..=m).map(relation).collect();
    let b = c.boundary(q + 1);
    for j in 0..b.cols() {
        let mut f = Elem::new();
        for i in 0..m {
            lift(b.get(i, j), i, &mut f);
        }
        input.push(f);
    }
    let mut f = Elem::new();
    for (i, p) in z.coords.iter().enumerate() {
        lift(p, i, &mut f);
    }
    lift(&IntPoly::one(1), m, &mut f);
    input.push(f);
    let basis = strong_basis(input, cancel)?;
    let ann: Vec<IntPoly> = basis
        .iter()
        .filter(|f| lead(f).is_some_and(|(lm, _)| lm.pos == m) && f.keys().all(|k| k.s == 0))
        .map(|f| lower(f, m))
        .collect();
    groebner_rank1_with(&ann, cancel)
}

/// A chain `c` with `dc = delta * z`, if one exists.
pub fn solve_bounding_chain_rank1(
    c: &EquivariantChainComplex,
    z: &Chain,
    delta: &IntPoly,
    cancel: Option<&CancelToken>,
) -> Result<Option<Chain>, ExactAlgError> {
    check_cycle(c, z)?;
    let q = z.degree;
    let m = c.cells(q);
    let target = z.scale(delta);
    if q == c.top_degree() {
        return Ok(target.is_zero().then(|| Chain::zero(q + 1, 0, 1)));
    }
    let b = c.boundary(q + 1);
    let n = b.cols();
    let mut input: Vec<Elem> = (0..m + n).map(relation).collect();
    for j in 0..n {
        let mut f = Elem::new();
        for i in 0..m {
            lift(b.get(i, j), i, &mut f);
        }
        lift(&IntPoly::one(1), m + j, &mut f);
        input.push(f);
    }
    let basis = strong_basis(input, cancel)?;
    let mut f = Elem::new();
    for (i, p) in target.coords.iter().enumerate() {
        lift(p, i, &mut f);
    }
    let r = top_reduce(f, &basis, m);
    if lead(&r).is_some_and(|(lm, _)| lm.pos < m) {
        return Ok(None);
    }
    let chain = Chain::new(q + 1, (0..n).map(|j| -&lower(&r, m + j)).collect());
    let check = c.apply_boundary(&chain)?;
    assert_eq!(check, target, "bounding chain fails verification");
    Ok(Some(chain))
}

// ---- lowest coefficients -----------------------------------------------

/// The ideal of Z generated by the xi-lowest coefficients of an ideal, with an
/// element attaining the generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowestCoefficientIdeal {
    /// Nonnegative generator; zero exactly for the zero ideal.
    pub d: BigInt,
    /// An element of the ideal whose xi-lowest coefficient is `d`.
    pub witness: Option<IntPoly>,
}

/// Generator of `{0} ∪ {lowest coefficient of f : f ∈ I}` under `xi`.
pub fn lowest_coeff_ideal(
    ideal: &IdealBasisRank1,
    xi: &XiOrder,
) -> Result<LowestCoefficientIdeal, ExactAlgError> {
    check_rank_one(xi.rank())?;
    if ideal.is_zero() {
        return Ok(LowestCoefficientIdeal {
            d: BigInt::zero(),
            witness: None,
        });
    }
    let positive = xi.rank_one_sign() == Some(1);
    let gens = ideal.generators();
    let top = gens.iter().map(degree).max().unwrap();
    // Aligned generators: the coefficient at the xi-lowest exponent is the
    // one that matters.
    let aligned: Vec<(BigInt, IntPoly)> = gens
        .iter()
        .map(|g| {
            if positive {
                (g.coefficient(&Exponent::new(vec![0])), g.clone())
            } else {
                let shift = Exponent::new(vec![top - degree(g)]);
                (leading_coeff(g).clone(), g.shift(&shift))
            }
        })
        .collect();
    let d = aligned
        .iter()
        .fold(BigInt::zero(), |acc, (a, _)| acc.gcd(a));
    let witness = if let Some((a, g)) = aligned.iter().find(|(a, _)| a.abs() == d) {
        if a.is_negative() {
            -g
        } else {
            g.clone()
        }
    } else {
        let mut acc_c = BigInt::zero();
        let mut acc = IntPoly::zero(1);
        for (a, g) in &aligned {
            let e = acc_c.extended_gcd(a);
            acc = &acc.scale(&e.x) + &g.scale(&e.y);
            acc_c = e.gcd;
        }
        if acc_c.is_negative() {
            -&acc
        } else {
            acc
        }
    };
    debug_assert_eq!(
        xi_lowest_term(&witness, xi).ok().map(|(c, _)| c),
        Some(d.clone())
    );
    Ok(LowestCoefficientIdeal {
        d,
        witness: Some(witness),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::fixtures;
    use crate::exactalg::homology_over_fraction_field;
    use crate::groupring::parse_poly;
    use proptest::prelude::*;

    fn p(s: &str) -> IntPoly {
        parse_poly(s, 1).unwrap()
    }

    #[test]
    fn small_ideals() {
        assert!(groebner_rank1(&[p("t - 2"), p("t - 1")])
            .unwrap()
            .contains(&p("1")));
        let i = groebner_rank1(&[p("2 - t"), p("3 - t^2")]).unwrap();
        assert!(i.contains(&p("1")));
        assert_eq!(i.generators(), &[p("1")]);
        let i = groebner_rank1(&[p("t - 2")]).unwrap();
        assert_eq!(i.generators(), &[p("t - 2")]);
        assert!(i.contains(&p("t^-3 - 2*t^-4")));
        assert!(!i.contains(&p("t - 1")));
        assert!(!i.contains(&p("2")));
        let i = groebner_rank1(&[p("2*t - 2"), p("t^2 - 1")]).unwrap();
        assert!(i.contains(&p("t^3 - t")));
        assert!(!i.contains(&p("t^3 - t^2")));
        assert!(!i.contains(&p("t - 1")));
    }

    #[test]
    fn annihilators_of_fixtures() {
        let bs = fixtures::bs12(1);
        let a = annihilator_rank1(&bs.complex, &bs.cycle, None).unwrap();
        assert_eq!(a.generators(), &[p("t - 2")]);
        let torus = fixtures::torus();
        let a = annihilator_rank1(&torus.complex, &torus.cycle, None).unwrap();
        assert_eq!(a.generators(), &[p("t - 1")]);
        let g2 = fixtures::genus(2);
        let a = annihilator_rank1(&g2.complex, &g2.cycle, None).unwrap();
        assert!(a.is_zero());
        let h = homology_over_fraction_field(&g2.complex, 1);
        for z in &h.basis {
            assert!(annihilator_rank1(&g2.complex, z, None).unwrap().is_zero());
        }
        let circle = fixtures::circle();
        let a = annihilator_rank1(&circle.complex, &circle.cycle, None).unwrap();
        assert_eq!(a.generators(), &[p("t - 1")]);
    }

    #[test]
    fn non_cycle_is_rejected() {
        let bs = fixtures::bs12(1);
        let e = bs.complex.basis_chain(1, 1);
        assert_eq!(
            annihilator_rank1(&bs.complex, &e, None),
            Err(ExactAlgError::NotACycle)
        );
    }

    #[test]
    fn cancellation_stops_the_loop() {
        let token = CancelToken::new();
        token.cancel();
        assert_eq!(
            groebner_rank1_with(&[p("t - 2")], Some(&token)),
            Err(ExactAlgError::Cancelled)
        );
    }

    #[test]
    fn bounding_chains() {
        let bs = fixtures::bs12(1);
        let c = solve_bounding_chain_rank1(&bs.complex, &bs.cycle, &p("t - 2"), None)
            .unwrap()
            .unwrap();
        assert_eq!(
            bs.complex.apply_boundary(&c).unwrap(),
            bs.cycle.scale(&p("t - 2"))
        );
        assert!(
            solve_bounding_chain_rank1(&bs.complex, &bs.cycle, &p("t - 1"), None)
                .unwrap()
                .is_none()
        );
        let circle = fixtures::circle();
        let c = solve_bounding_chain_rank1(&circle.complex, &circle.cycle, &p("1 - t"), None)
            .unwrap()
            .unwrap();
        assert_eq!(c.coords, vec![p("-1")]);
    }

    #[test]
    fn lowest_coefficient_examples() {
        let pos = XiOrder::rank_one(1).unwrap();
        let neg = XiOrder::rank_one(-1).unwrap();
        let i = groebner_rank1(&[p("t - 2")]).unwrap();
        assert_eq!(lowest_coeff_ideal(&i, &pos).unwrap().d, BigInt::from(2));
        let l = lowest_coeff_ideal(&i, &neg).unwrap();
        assert_eq!(l.d, BigInt::one());
        assert_eq!(l.witness, Some(p("t - 2")));
        let i = groebner_rank1(&[p("2 - t"), p("3 - t^2")]).unwrap();
        assert_eq!(lowest_coeff_ideal(&i, &pos).unwrap().d, BigInt::one());
        let i = groebner_rank1(&[p("6 + t"), p("10 + t^3")]).unwrap();
        let l = lowest_coeff_ideal(&i, &pos).unwrap();
        let w = l.witness.unwrap();
        assert!(i.contains(&w));
        assert_eq!(xi_lowest_term(&w, &pos).unwrap().0, l.d);
        let zero = groebner_rank1(&[]).unwrap();
        assert_eq!(lowest_coeff_ideal(&zero, &pos).unwrap().d, BigInt::zero());
    }

    fn small_poly() -> impl Strategy<Value = IntPoly> {
        (prop::collection::vec(-4i64..=4, 1..=4), -2i64..=2).prop_filter_map(
            "nonzero",
            |(cs, lo)| {
                let mut f = IntPoly::zero(1);
                for (i, c) in cs.iter().enumerate() {
                    f.add_term(Exponent::new(vec![lo + i as i64]), BigInt::from(*c));
                }
                (!f.is_zero()).then_some(f)
            },
        )
    }

    /// Lowest coefficients of `h * f` for all small multipliers `h`.
    fn brute_force_lowest(gens: &[IntPoly], xi: &XiOrder) -> BigInt {
        let mut d = BigInt::zero();
        let mults: Vec<IntPoly> = (-2i64..=2)
            .flat_map(|a| {
                (-2i64..=2).map(move |b| IntPoly::from_int_terms(1, &[(&[0], a), (&[1], b)]))
            })
            .collect();
        for combo in 0..mults.len().pow(gens.len() as u32) {
            let mut f = IntPoly::zero(1);
            let mut k = combo;
            for g in gens {
                f = &f + &(&mults[k % mults.len()] * g);
                k /= mults.len();
            }
            if let Ok((c, _)) = xi_lowest_term(&f, xi) {
                d = d.gcd(&c);
            }
        }
        d
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn principal_lowest_coefficients(f in small_poly(), sign in prop::sample::select(vec![1i64, -1])) {
            let xi = XiOrder::rank_one(sign).unwrap();
            let i = groebner_rank1(std::slice::from_ref(&f)).unwrap();
            let expected = xi_lowest_term(&f, &xi).unwrap().0.abs();
            prop_assert_eq!(&lowest_coeff_ideal(&i, &xi).unwrap().d, &expected);
            prop_assert_eq!(brute_force_lowest(std::slice::from_ref(&f), &xi), expected);
        }

        #[test]
        fn two_generator_lowest_coefficients(f in small_poly(), g in small_poly(), sign in prop::sample::select(vec![1i64, -1])) {
            let xi = XiOrder::rank_one(sign).unwrap();
            let i = groebner_rank1(&[f.clone(), g.clone()]).unwrap();
            let l = lowest_coeff_ideal(&i, &xi).unwrap();
            // Every lowest coefficient found by search is a multiple of d.
            let brute = brute_force_lowest(&[f.clone(), g.clone()], &xi);
            prop_assert!(brute.is_multiple_of(&l.d));
            let w = l.witness.unwrap();
            prop_assert!(i.contains(&w));
            prop_assert_eq!(xi_lowest_term(&w, &xi).unwrap().0, l.d);
        }

        #[test]
        fn membership_of_combinations(f in small_poly(), g in small_poly(), a in small_poly(), b in small_poly()) {
            let i = groebner_rank1(&[f.clone(), g.clone()]).unwrap();
            prop_assert!(i.contains(&f));
            prop_assert!(i.contains(&g));
            prop_assert!(i.contains(&(&(&a * &f) + &(&b * &g))));
        }

        #[test]
        fn principal_membership_matches_division(f in small_poly(), h in small_poly(), k in 1i64..=3) {
            // For primitive f, f | h over Q with integral quotient iff h ∈ (f).
            let content = f.terms().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c));
            let f = f.div_coefficients(&content);
            let i = groebner_rank1(std::slice::from_ref(&f)).unwrap();
            let member = h.to_rational().div_exact(&f.to_rational()).and_then(|q| q.to_integer()).is_some();
            prop_assert_eq!(i.contains(&h), member);
            prop_assert!(i.contains(&(&f * &h).scale(&BigInt::from(k))));
        }
    }
}
