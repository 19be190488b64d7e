//! Truncated arithmetic in the Novikov completion A of Z[H] along xi.
//!
//! A series is known up to a cutoff `tau` on the first xi coordinate: the
//! body holds every term below `tau`, and nothing is claimed about terms at
//! or above it.

mod chain;
mod diag;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::complexes::ComplexError;
use crate::exactalg::ExactAlgError;
use crate::groupring::{xi_lowest_term, Exponent, IntPoly, XiOrder};

pub use chain::{
    build_infinite_chain, solve_bounding_chain, verify_truncated_chain, InfiniteChain,
};
pub use diag::{truncated_diagonalize, DiagonalBlock, DiagonalizedComplex, Pivot, SeriesMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NovikovError {
    #[error("series carry different xi orders")]
    XiMismatch,
    #[error("not a unit: lowest coefficient {coefficient}")]
    NonUnit { coefficient: BigInt },
    #[error("not a unit of A0: lowest exponent {exponent:?} is not the identity")]
    NotUnitOfA0 { exponent: Exponent },
    #[error("the zero element has no lowest term")]
    ZeroInput,
    #[error("element is not in the completion A0: lowest exponent {exponent:?} has negative xi")]
    NotInA0 { exponent: Exponent },
    #[error("geometric series does not converge in the first xi coordinate")]
    NotTruncatable,
    #[error("certificate verification failed: {0}")]
    Verification(String),
    #[error("the chain is not a boundary")]
    NotABoundary,
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    ExactAlg(#[from] ExactAlgError),
}

/// A truncated element of the Novikov ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NovikovSeries {
    body: IntPoly,
    #[serde(serialize_with = "crate::serialize_rational")]
    cutoff: BigRational,
    #[serde(skip)]
    xi: XiOrder,
}

impl NovikovSeries {
    /// The class of `body`, keeping only terms with first coordinate below `cutoff`.
    pub fn new(body: IntPoly, cutoff: BigRational, xi: &XiOrder) -> Self {
        assert_eq!(body.rank(), xi.rank(), "rank mismatch");
        let body = truncate_poly(&body, &cutoff, xi);
        NovikovSeries {
            body,
            cutoff,
            xi: xi.clone(),
        }
    }

    pub fn zero(cutoff: BigRational, xi: &XiOrder) -> Self {
        Self::new(IntPoly::zero(xi.rank()), cutoff, xi)
    }

    pub fn one(cutoff: BigRational, xi: &XiOrder) -> Self {
        Self::new(IntPoly::one(xi.rank()), cutoff, xi)
    }

    pub fn body(&self) -> &IntPoly {
        &self.body
    }

    pub fn cutoff(&self) -> &BigRational {
        &self.cutoff
    }

    pub fn xi(&self) -> &XiOrder {
        &self.xi
    }

    /// Zero below the cutoff.
    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    /// `(coefficient, exponent)` of the xi-lowest term of the body.
    pub fn lowest_term(&self) -> Option<(BigInt, Exponent)> {
        xi_lowest_term(&self.body, &self.xi).ok()
    }

    /// Lower bound for the first coordinate of the support.
    pub fn min_first(&self) -> BigRational {
        min_first(&self.body, &self.xi).unwrap_or_else(|| self.cutoff.clone())
    }

    /// Forgets everything from `cutoff` on.
    pub fn truncate(&self, cutoff: &BigRational) -> Self {
        let cutoff = cutoff.min(&self.cutoff).clone();
        Self::new(self.body.clone(), cutoff, &self.xi)
    }

    /// Agreement below the smaller of the two cutoffs.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let c = self.cutoff.clone().min(other.cutoff.clone());
        self.truncate(&c).body == other.truncate(&c).body
    }

    fn check(&self, other: &Self) -> Result<(), NovikovError> {
        if self.xi != other.xi {
            return Err(NovikovError::XiMismatch);
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        NovikovSeries {
            body: -&self.body,
            cutoff: self.cutoff.clone(),
            xi: self.xi.clone(),
        }
    }

    /// Product with an exactly known polynomial.
    pub fn mul_poly(&self, f: &IntPoly) -> Self {
        let mu = min_first(f, &self.xi).unwrap_or_else(|| self.cutoff.clone());
        let body = &self.body * f;
        Self::new(body, &self.cutoff + mu, &self.xi)
    }
}

pub(crate) fn min_first(p: &IntPoly, xi: &XiOrder) -> Option<BigRational> {
    p.terms().map(|(e, _)| xi.first_coordinate(e)).min()
}

fn truncate_poly(p: &IntPoly, cutoff: &BigRational, xi: &XiOrder) -> IntPoly {
    let mut out = IntPoly::zero(p.rank());
    for (e, c) in p.terms() {
        if &xi.first_coordinate(e) < cutoff {
            out.add_term(e.clone(), c.clone());
        }
    }
    out
}

pub fn nov_add(p: &NovikovSeries, q: &NovikovSeries) -> Result<NovikovSeries, NovikovError> {
    p.check(q)?;
    let cutoff = p.cutoff.clone().min(q.cutoff.clone());
    Ok(NovikovSeries::new(&p.body + &q.body, cutoff, &p.xi))
}

pub fn nov_sub(p: &NovikovSeries, q: &NovikovSeries) -> Result<NovikovSeries, NovikovError> {
    nov_add(p, &q.neg())
}

pub fn nov_mul(p: &NovikovSeries, q: &NovikovSeries) -> Result<NovikovSeries, NovikovError> {
    p.check(q)?;
    let cutoff = (&p.cutoff + q.min_first()).min(&q.cutoff + p.min_first());
    // Terms of each factor that cannot reach below the new cutoff are dropped early.
    let pb = truncate_poly(&p.body, &(&cutoff - q.min_first()), &p.xi);
    let qb = truncate_poly(&q.body, &(&cutoff - p.min_first()), &q.xi);
    Ok(NovikovSeries::new(&pb * &qb, cutoff, &p.xi))
}

/// The inverse in A of a series whose lowest coefficient is a unit of Z.
pub fn nov_invert(u: &NovikovSeries) -> Result<NovikovSeries, NovikovError> {
    let (alpha, g) = u.lowest_term().ok_or(NovikovError::ZeroInput)?;
    if !alpha.abs().is_one() {
        return Err(NovikovError::NonUnit { coefficient: alpha });
    }
    let xi = &u.xi;
    let mu = xi.first_coordinate(&g);
    // u = alpha t^g (1 - y)
    let h_inv = IntPoly::monomial(-&g, alpha.clone());
    let y = &IntPoly::one(xi.rank()) - &(&u.body * &h_inv);
    if y.terms()
        .any(|(e, _)| xi.first_coordinate(e) <= BigRational::zero())
    {
        return Err(NovikovError::NotTruncatable);
    }
    let cutoff = &u.cutoff - &mu - &mu;
    // Terms of sum y^i contribute at first coordinate >= (i * delta) - mu.
    let limit = &cutoff + &mu;
    let mut sum = IntPoly::zero(xi.rank());
    let mut power = IntPoly::one(xi.rank());
    while !power.is_zero() {
        sum = &sum + &power;
        power = truncate_poly(&(&power * &y), &limit, xi);
    }
    Ok(NovikovSeries::new(&sum * &h_inv, cutoff, xi))
}

/// The inverse in A0; the lowest term must be `±1` at the identity.
pub fn nov_invert_a0(u: &NovikovSeries) -> Result<NovikovSeries, NovikovError> {
    let (alpha, g) = u.lowest_term().ok_or(NovikovError::ZeroInput)?;
    if !alpha.abs().is_one() {
        return Err(NovikovError::NonUnit { coefficient: alpha });
    }
    if !g.is_zero() {
        return Err(NovikovError::NotUnitOfA0 { exponent: g });
    }
    nov_invert(u)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CyclicKind {
    /// Invertible in A0; the module is trivial.
    Unit,
    /// `|alpha| = 1` with a group element of positive xi in front.
    FirstKind,
    /// `|alpha| > 1`.
    SecondKind,
}

/// `a = t^g (alpha + higher terms)` read off from the lowest term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicClassification {
    pub unit_part: Exponent,
    pub alpha: BigInt,
    pub kind: CyclicKind,
}

pub fn classify_cyclic(a: &IntPoly, xi: &XiOrder) -> Result<CyclicClassification, NovikovError> {
    let (alpha, g) = xi_lowest_term(a, xi).map_err(|_| NovikovError::ZeroInput)?;
    let first = xi.first_coordinate(&g);
    if first.is_negative() {
        return Err(NovikovError::NotInA0 { exponent: g });
    }
    let kind = if !alpha.abs().is_one() {
        CyclicKind::SecondKind
    } else if first.is_zero() {
        CyclicKind::Unit
    } else {
        CyclicKind::FirstKind
    };
    Ok(CyclicClassification {
        unit_part: g,
        alpha,
        kind,
    })
}
