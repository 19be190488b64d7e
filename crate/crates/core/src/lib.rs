//! Exact computation of movability to infinity and closed one-form category
//! bounds for free abelian covers.
//!
//! The crate is organized bottom-up: [`groupring`] provides Laurent
//! polynomial arithmetic and xi-orders, [`complexes`] builds equivariant chain
//! complexes, [`exactalg`] does exact linear and ideal algebra, [`novikov`]
//! works in the completed ring, [`movability`] produces verdicts and
//! [`catbounds`] propagates category weights into bound ledgers.

pub mod catbounds;
pub mod complexes;
pub mod exactalg;
pub mod groupring;
pub mod movability;
pub mod novikov;

pub use groupring::{
    gr_add, gr_mul, in_s_xi, is_xi_positive, parse_poly, xi_lowest_term, xi_top_coefficient,
    Exponent, GroupRingError, IntPoly, LaurentPoly, RatPoly, SignPolicy, XiOrder, XiValue,
};

/// Serializes a rational as `"p/q"` (or `"p"` when integral).
pub(crate) fn serialize_rational<S: serde::Serializer>(
    x: &num_rational::BigRational,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub(crate) fn serialize_opt_rational<S: serde::Serializer>(
    x: &Option<num_rational::BigRational>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_some(&x.to_string()),
        None => s.serialize_none(),
    }
}

pub(crate) fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(
    x: &T,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}
