//! Category weights of homology classes and the bound ledgers for `cat`,
//! `cat^1` and `ccat^1` built from them.

mod expr;
mod factbase;
mod ledger;
mod surfaces;
mod weights;

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::complexes::ComplexError;
use crate::movability::MovabilityError;

pub use expr::{type_of, Atom, ClassExpr, ClassKind, ClassType, Space};
pub use factbase::{DeclaredFact, FactBase, PairingDecl};
pub use ledger::{
    cat1_lower_bound, cat_lower_bound, cat_weight_bound, ccat1_upper_bounds, BoundLedger,
    BoundRule, Derivation, FactorPairing, Invariant, ObstructionCertificate, Premise, Side,
    SpaceDescriptor,
};
pub use surfaces::{surface_products_table, SurfaceFactor, SurfacePattern, SurfaceTable};
pub use weights::{
    propagate_weights, propagate_weights_with, Rule, Saturation, Step, Trace, WeightFact,
};

#[derive(Debug, Error)]
pub enum CatError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("ill-typed: {0}")]
    IllTyped(String),
    #[error("inconsistent facts: {0}")]
    Inconsistent(String),
    #[error("incoherent ledger: {0}")]
    Incoherent(String),
    #[error("product rule refused: {0}")]
    ProductRefused(String),
    #[error("obstruction rejected: {0}")]
    ObstructionRejected(String),
    #[error("bounds do not close: {0}")]
    NotClosed(String),
    #[error("replay failed: {0}")]
    Replay(String),
    #[error(transparent)]
    Movability(#[from] MovabilityError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A nonnegative integer or `+inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Weight {
    Finite(u64),
    Infinite,
}

impl Weight {
    pub fn parse(s: &str) -> Result<Self, CatError> {
        match s {
            "inf" | "+inf" | "∞" | "+∞" => Ok(Weight::Infinite),
            _ => s
                .parse()
                .map(Weight::Finite)
                .map_err(|_| CatError::Parse(format!("expected a weight, got {s:?}"))),
        }
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Weight::Finite(v) => Some(v),
            Weight::Infinite => None,
        }
    }
}

impl Add for Weight {
    type Output = Weight;

    fn add(self, other: Weight) -> Weight {
        match (self, other) {
            (Weight::Finite(a), Weight::Finite(b)) => {
                a.checked_add(b).map_or(Weight::Infinite, Weight::Finite)
            }
            _ => Weight::Infinite,
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Finite(v) => write!(f, "{v}"),
            Weight::Infinite => write!(f, "inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) => Ok(Weight::Finite(v)),
            Raw::Text(s) => Weight::parse(&s).map_err(serde::de::Error::custom),
        }
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Weight::Finite(v) => s.serialize_u64(*v),
            Weight::Infinite => s.serialize_str("+inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactKind {
    CwgtLower,
    SwgtLower,
    CwgtExact,
}

impl FactKind {
    pub fn parse(s: &str) -> Result<Self, CatError> {
        match s {
            "cwgt-lower" => Ok(FactKind::CwgtLower),
            "swgt-lower" => Ok(FactKind::SwgtLower),
            "cwgt-exact" => Ok(FactKind::CwgtExact),
            _ => Err(CatError::Parse(format!("unknown fact kind {s}"))),
        }
    }
}

impl fmt::Display for FactKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FactKind::CwgtLower => "cwgt-lower",
            FactKind::SwgtLower => "swgt-lower",
            FactKind::CwgtExact => "cwgt-exact",
        })
    }
}
