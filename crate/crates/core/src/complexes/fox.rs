//! Fox free differential calculus.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{freely_reduce, Letter, PeriodProjection, Word};
use crate::groupring::IntPoly;

/// An element of the integral group ring of the free group, keyed by reduced words.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FreeGroupRingElement {
    terms: BTreeMap<Word, BigInt>,
}

impl FreeGroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_word(&mut self, w: &[Letter], c: BigInt) {
        let w = freely_reduce(w);
        let entry = self.terms.entry(w).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }
}

/// The Fox derivative `dw/dx` for the generator with index `x`.
///
/// Uses `d(uv) = du + u dv`, `dx/dx = 1` and `d(x^-1)/dx = -x^-1`.
pub fn fox_derivative(w: &[Letter], x: usize) -> FreeGroupRingElement {
    let mut out = FreeGroupRingElement::zero();
    for (i, l) in w.iter().enumerate() {
        if l.generator != x {
            continue;
        }
        if l.inverse {
            out.add_word(&w[..=i], -BigInt::one());
        } else {
            out.add_word(&w[..i], BigInt::one());
        }
    }
    out
}

/// Pushes a free group ring element to Z[H] along the period map.
pub fn project_to_h(f: &FreeGroupRingElement, proj: &PeriodProjection) -> IntPoly {
    let mut out = IntPoly::zero(proj.rank());
    for (w, c) in f.terms() {
        out.add_term(proj.word_exponent(w), c.clone());
    }
    out
}
