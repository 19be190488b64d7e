//! Exact arithmetic in the group ring Z[H] of a free abelian group H = Z^r.
//!
//! Elements are sparse Laurent polynomials in `t1, ..., tr`. Coefficients are
//! arbitrary-precision integers, or exact rationals for field computations.
//! The ordering machinery induced by a cohomology class lives in [`xi`].

mod text;
pub mod xi;

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use text::parse_poly;
pub use xi::{
    in_s_xi, is_xi_positive, xi_lowest_term, xi_top_coefficient, xi_top_term, SignPolicy, XiOrder,
    XiValue,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupRingError {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("operation undefined on the zero element")]
    ZeroInput,
    #[error("xi order is not injective: stacked rank {stack_rank} < ambient rank {rank}")]
    NotInjective { rank: usize, stack_rank: usize },
    #[error("xi order needs at least one row")]
    EmptyOrder,
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
}

/// An element of H in the fixed basis `t1, ..., tr`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(Vec<i64>);

impl Exponent {
    pub fn new(entries: Vec<i64>) -> Self {
        Exponent(entries)
    }

    pub fn zero(rank: usize) -> Self {
        Exponent(vec![0; rank])
    }

    /// The basis element `t_i` (zero-based index).
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut e = vec![0; rank];
        e[i] = 1;
        Exponent(e)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn max_abs(&self) -> i64 {
        self.0.iter().map(|e| e.abs()).max().unwrap_or(0)
    }

    /// Concatenation, the exponent of a pair in H1 x H2.
    pub fn concat(&self, other: &Exponent) -> Exponent {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Exponent(v)
    }

    pub fn scaled(&self, k: i64) -> Exponent {
        Exponent(self.0.iter().map(|e| e * k).collect())
    }
}

impl Add for &Exponent {
    type Output = Exponent;
    fn add(self, rhs: &Exponent) -> Exponent {
        debug_assert_eq!(self.rank(), rhs.rank());
        Exponent(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Exponent {
    type Output = Exponent;
    fn sub(self, rhs: &Exponent) -> Exponent {
        debug_assert_eq!(self.rank(), rhs.rank());
        Exponent(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(self.0.iter().map(|a| -a).collect())
    }
}

/// Coefficient rings supported by [`LaurentPoly`]: Z and Q.
pub trait Coefficient:
    Clone + Eq + Hash + fmt::Debug + fmt::Display + FromStr + Num + Signed + Send + Sync + 'static
{
    fn from_bigint(n: BigInt) -> Self;
}

impl Coefficient for BigInt {
    fn from_bigint(n: BigInt) -> Self {
        n
    }
}

impl Coefficient for BigRational {
    fn from_bigint(n: BigInt) -> Self {
        BigRational::from_integer(n)
    }
}

/// A finitely supported combination of group elements.
///
/// No zero coefficients are stored, so structural equality is ring equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentPoly<C> {
    rank: usize,
    terms: BTreeMap<Exponent, C>,
}

pub type IntPoly = LaurentPoly<BigInt>;
pub type RatPoly = LaurentPoly<BigRational>;

impl<C: Coefficient> LaurentPoly<C> {
    pub fn zero(rank: usize) -> Self {
        LaurentPoly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, C::one())
    }

    pub fn constant(rank: usize, c: C) -> Self {
        Self::monomial(Exponent::zero(rank), c)
    }

    pub fn monomial(exp: Exponent, c: C) -> Self {
        let rank = exp.rank();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { rank, terms }
    }

    /// The group element `t_i` (zero-based index).
    pub fn variable(rank: usize, i: usize) -> Self {
        Self::monomial(Exponent::unit(rank, i), C::one())
    }

    /// Builds a polynomial from possibly repeated terms, merging and dropping zeros.
    pub fn from_terms<I>(rank: usize, terms: I) -> Result<Self, GroupRingError>
    where
        I: IntoIterator<Item = (Exponent, C)>,
    {
        let mut p = Self::zero(rank);
        for (e, c) in terms {
            if e.rank() != rank {
                return Err(GroupRingError::RankMismatch {
                    left: rank,
                    right: e.rank(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Shorthand for integer exponent/coefficient lists, used heavily by fixtures.
    pub fn from_int_terms(rank: usize, terms: &[(&[i64], i64)]) -> Self {
        Self::from_terms(
            rank,
            terms
                .iter()
                .map(|(e, c)| (Exponent::new(e.to_vec()), C::from_bigint(BigInt::from(*c)))),
        )
        .expect("exponent length must equal rank")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(e, c)| e.is_zero() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Exponent, C)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, exp: &Exponent) -> C {
        self.terms.get(exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, exp: Exponent, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(existing) => {
                *existing = existing.clone() + c;
                if existing.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    fn check_rank(&self, other: &Self) -> Result<(), GroupRingError> {
        if self.rank != other.rank {
            return Err(GroupRingError::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, GroupRingError> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, GroupRingError> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, GroupRingError> {
        self.check_rank(other)?;
        let mut out = Self::zero(self.rank);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero(self.rank);
        }
        LaurentPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.clone() * k.clone()))
                .collect(),
        }
    }

    /// Divides every coefficient by `k`; the caller ensures `k` divides each one.
    pub fn div_coefficients(&self, k: &C) -> Self {
        let mut out = Self::zero(self.rank);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone() / k.clone());
        }
        out
    }

    /// Multiplication by the group element `g`.
    pub fn shift(&self, g: &Exponent) -> Self {
        LaurentPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, c)| (e + g, c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.rank);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Applies a group homomorphism H -> H' given on exponents.
    pub fn map_exponents<F>(&self, target_rank: usize, f: F) -> Self
    where
        F: Fn(&Exponent) -> Exponent,
    {
        let mut out = Self::zero(target_rank);
        for (e, c) in &self.terms {
            let image = f(e);
            debug_assert_eq!(image.rank(), target_rank);
            out.add_term(image, c.clone());
        }
        out
    }

    /// The involution g -> g^{-1}.
    pub fn conjugate(&self) -> Self {
        self.map_exponents(self.rank, |e| -e)
    }

    pub fn max_abs_exponent(&self) -> i64 {
        self.terms.keys().map(Exponent::max_abs).max().unwrap_or(0)
    }

    /// Per-variable minimal and maximal exponents of the support.
    pub fn exponent_box(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let (mut lo, mut hi) = (first.0.clone(), first.0.clone());
        for e in it {
            for (i, &k) in e.0.iter().enumerate() {
                lo[i] = lo[i].min(k);
                hi[i] = hi[i].max(k);
            }
        }
        Some((lo, hi))
    }

    /// The lexicographically largest term.
    pub fn lex_leading(&self) -> Option<(&Exponent, &C)> {
        self.terms.iter().next_back()
    }

    /// The quotient `self / d` if it exists in the ring, `None` otherwise.
    ///
    /// Division runs along the lexicographic order; the quotient support is
    /// confined to the box `[min(self) - min(d), max(self) - max(d)]`, which
    /// bounds the loop when `d` does not divide.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert_eq!(self.rank, d.rank);
        if d.is_zero() {
            return None;
        }
        let Some((alo, ahi)) = self.exponent_box() else {
            return Some(Self::zero(self.rank));
        };
        let (dlo, dhi) = d.exponent_box()?;
        let (de, dc) = d.lex_leading()?;
        let (de, dc) = (de.clone(), dc.clone());
        let mut r = self.clone();
        let mut q = Self::zero(self.rank);
        while let Some((re, rc)) = r.lex_leading().map(|(e, c)| (e.clone(), c.clone())) {
            let e = &re - &de;
            for i in 0..self.rank {
                if e.0[i] < alo[i] - dlo[i] || e.0[i] > ahi[i] - dhi[i] {
                    return None;
                }
            }
            let c = rc.clone() / dc.clone();
            if c.clone() * dc.clone() != rc {
                return None;
            }
            for (te, tc) in &d.terms {
                r.add_term(te + &e, -(tc.clone() * c.clone()));
            }
            q.add_term(e, c);
        }
        Some(q)
    }

    /// The monomial-free part: shifts so that every variable has minimal exponent 0.
    pub fn to_polynomial_shift(&self) -> (Self, Exponent) {
        match self.exponent_box() {
            None => (self.clone(), Exponent::zero(self.rank)),
            Some((lo, _)) => {
                let shift = Exponent(lo.iter().map(|k| -k).collect());
                (self.shift(&shift), shift)
            }
        }
    }
}

impl IntPoly {
    pub fn to_rational(&self) -> RatPoly {
        LaurentPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), BigRational::from_integer(c.clone())))
                .collect(),
        }
    }

    /// Value of the polynomial at a rational point (all variables specialized).
    pub fn evaluate(&self, point: &[BigRational]) -> BigRational {
        self.to_rational().evaluate(point)
    }
}

impl RatPoly {
    /// Clears denominators and returns the primitive integer multiple with
    /// positive leading (lexicographically last) coefficient.
    pub fn to_primitive_integer(&self) -> IntPoly {
        use num_integer::Integer;
        if self.is_zero() {
            return IntPoly::zero(self.rank);
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<(Exponent, BigInt)> = self
            .terms
            .iter()
            .map(|(e, c)| {
                (
                    e.clone(),
                    (c * BigRational::from_integer(lcm.clone())).to_integer(),
                )
            })
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c));
        if ints.last().is_some_and(|(_, c)| c.is_negative()) {
            g = -g;
        }
        LaurentPoly {
            rank: self.rank,
            terms: ints.into_iter().map(|(e, c)| (e, c / &g)).collect(),
        }
    }

    /// Returns the integer polynomial if every coefficient is integral.
    pub fn to_integer(&self) -> Option<IntPoly> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if !c.is_integer() {
                return None;
            }
            terms.insert(e.clone(), c.to_integer());
        }
        Some(LaurentPoly {
            rank: self.rank,
            terms,
        })
    }

    pub fn evaluate(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.rank);
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e.entries()) {
                let base = if k < 0 { x.recip() } else { x.clone() };
                term *= num_traits::pow(base, k.unsigned_abs() as usize);
            }
            acc += term;
        }
        acc
    }
}

impl<C: Coefficient> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        self.try_add(rhs).expect("group ring rank mismatch")
    }
}

impl<C: Coefficient> Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        self.try_sub(rhs).expect("group ring rank mismatch")
    }
}

impl<C: Coefficient> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        self.try_mul(rhs).expect("group ring rank mismatch")
    }
}

impl<C: Coefficient> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        LaurentPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }
}

/// Ring addition with rank checking.
pub fn gr_add<C: Coefficient>(
    p: &LaurentPoly<C>,
    q: &LaurentPoly<C>,
) -> Result<LaurentPoly<C>, GroupRingError> {
    p.try_add(q)
}

/// Ring multiplication with rank checking.
pub fn gr_mul<C: Coefficient>(
    p: &LaurentPoly<C>,
    q: &LaurentPoly<C>,
) -> Result<LaurentPoly<C>, GroupRingError> {
    p.try_mul(q)
}

impl<C: Coefficient> Serialize for LaurentPoly<C> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
