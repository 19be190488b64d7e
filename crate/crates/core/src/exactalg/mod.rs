//! Exact linear and ideal algebra over Z, over the fraction field of Z[H],
//! and over the Laurent ring Z[t, t^-1].

mod frac;
mod groebner;
mod smith;

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use thiserror::Error;

use crate::complexes::ComplexError;
use crate::groupring::GroupRingError;

pub use frac::{
    frac_kernel, frac_left_kernel, frac_rank, frac_solve, homology_over_fraction_field,
    poly_kernel, poly_left_kernel, poly_rank, poly_solve, FracMatrix, FracScalar, FracSolution,
    GenericHomology,
};
pub use groebner::{
    annihilator_rank1, groebner_rank1, groebner_rank1_with, lowest_coeff_ideal,
    solve_bounding_chain_rank1, IdealBasisRank1, LowestCoefficientIdeal,
};
pub use smith::{
    cokernel_order, smith_normal_form, solve_integer_system, IntMatrix, SmithDecomposition,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactAlgError {
    #[error("the linear system is inconsistent")]
    Inconsistent,
    #[error("the computation was cancelled")]
    Cancelled,
    #[error("the chain is not a cycle")]
    NotACycle,
    #[error("operation requires rank {expected}, got rank {found}")]
    UnsupportedRank { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    GroupRing(#[from] GroupRingError),
}

/// Cooperative cancellation flag shared between a caller and long loops.
#[derive(Debug, Clone, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }

    pub(crate) fn check(token: Option<&CancelToken>) -> Result<(), ExactAlgError> {
        match token {
            Some(t) if t.is_cancelled() => Err(ExactAlgError::Cancelled),
            _ => Ok(()),
        }
    }
}
