//! Bounded search for `delta` in `S_xi` and `c1` with `d c1 = delta z`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{check_cycle, MovabilityError};
use crate::complexes::{Chain, EquivariantChainComplex};
use crate::exactalg::{solve_integer_system, IntMatrix};
use crate::groupring::{in_s_xi, Exponent, IntPoly, SignPolicy, XiOrder};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub delta: IntPoly,
    pub chain: Chain,
}

fn exponent_box(rank: usize, radius: i64) -> Vec<Exponent> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|e: Vec<i64>| {
                (-radius..=radius).map(move |k| {
                    let mut f = e.clone();
                    f.push(k);
                    f
                })
            })
            .collect();
    }
    out.into_iter().map(Exponent::new).collect()
}

fn positive_exponents(xi: &XiOrder, radius: i64) -> Vec<Exponent> {
    exponent_box(xi.rank(), radius)
        .into_iter()
        .filter(|e| xi.is_positive(e))
        .collect()
}

/// Radius of the box the chain `c1` is searched in.
pub(crate) fn chain_radius(c: &EquivariantChainComplex, z: &Chain, radius: i64) -> i64 {
    let zmax = z
        .coords
        .iter()
        .map(IntPoly::max_abs_exponent)
        .max()
        .unwrap_or(0);
    let bmax = c
        .boundary(z.degree + 1)
        .entries()
        .map(IntPoly::max_abs_exponent)
        .max()
        .unwrap_or(0);
    radius + zmax + bmax
}

struct System {
    deltas: Vec<Exponent>,
    chain_box: Vec<Exponent>,
    n: usize,
}

impl System {
    fn solve(&self, c: &EquivariantChainComplex, z: &Chain) -> Option<Vec<BigInt>> {
        let b = c.boundary(z.degree + 1);
        let mut rows: BTreeMap<(usize, Exponent), usize> = BTreeMap::new();
        let mut entries: Vec<(usize, usize, BigInt)> = Vec::new();
        let mut row = |key: (usize, Exponent)| {
            let len = rows.len();
            *rows.entry(key).or_insert(len)
        };
        for (k, e) in self.deltas.iter().enumerate() {
            for (i, zi) in z.coords.iter().enumerate() {
                for (g, a) in zi.terms() {
                    entries.push((row((i, g + e)), k, a.clone()));
                }
            }
        }
        let base = self.deltas.len();
        for j in 0..self.n {
            for (k, g) in self.chain_box.iter().enumerate() {
                let col = base + j * self.chain_box.len() + k;
                for i in 0..b.rows() {
                    for (h, a) in b.get(i, j).terms() {
                        entries.push((row((i, g + h)), col, -a));
                    }
                }
            }
        }
        let mut rhs_terms = Vec::new();
        for (i, zi) in z.coords.iter().enumerate() {
            for (g, a) in zi.terms() {
                rhs_terms.push((row((i, g.clone())), -a));
            }
        }
        let ncols = base + self.n * self.chain_box.len();
        let mut dense = vec![vec![BigInt::zero(); ncols]; rows.len()];
        for (r, col, a) in entries {
            dense[r][col] += a;
        }
        let mut rhs = vec![BigInt::zero(); rows.len()];
        for (r, a) in rhs_terms {
            rhs[r] += a;
        }
        solve_integer_system(&IntMatrix::from_rows(&dense), &rhs)
    }

    fn certificate(&self, x: &[BigInt], c: &EquivariantChainComplex, z: &Chain) -> Certificate {
        let rank = c.rank();
        let mut delta = IntPoly::one(rank);
        for (e, a) in self.deltas.iter().zip(x) {
            delta.add_term(e.clone(), a.clone());
        }
        let base = self.deltas.len();
        let coords = (0..self.n)
            .map(|j| {
                let mut p = IntPoly::zero(rank);
                for (k, g) in self.chain_box.iter().enumerate() {
                    p.add_term(g.clone(), x[base + j * self.chain_box.len() + k].clone());
                }
                p
            })
            .collect();
        Certificate {
            delta,
            chain: Chain::new(z.degree + 1, coords),
        }
    }
}

/// Looks for `delta = 1 + (xi-positive terms)` supported in the box of the
/// given radius with `delta z` bounding a chain from a box large enough to
/// reach every term. A result is always verified; `None` is inconclusive.
///
/// Support is pruned greedily, largest exponents first, so small
/// certificates come out when they exist.
pub fn search_certificate(
    c: &EquivariantChainComplex,
    z: &Chain,
    radius: i64,
) -> Result<Option<Certificate>, MovabilityError> {
    check_cycle(c, z)?;
    let xi = c.xi();
    let rank = c.rank();
    let mut deltas = positive_exponents(xi, radius);
    let n = c.cells(z.degree + 1);
    if z.is_zero() {
        let mut delta = IntPoly::one(rank);
        if let Some(e) = deltas.iter().min_by(|a, b| xi.compare(a, b)) {
            delta.add_term(e.clone(), BigInt::one());
        }
        return Ok(Some(Certificate {
            delta,
            chain: Chain::zero(z.degree + 1, n, rank),
        }));
    }
    deltas.sort_by(|a, b| {
        let l1 = |e: &Exponent| e.entries().iter().map(|k| k.abs()).sum::<i64>();
        l1(b).cmp(&l1(a)).then_with(|| a.cmp(b))
    });
    let chain_box = exponent_box(rank, chain_radius(c, z, radius));
    let mut sys = System {
        deltas,
        chain_box,
        n,
    };
    if sys.solve(c, z).is_none() {
        return Ok(None);
    }
    let mut i = 0;
    while i < sys.deltas.len() {
        let removed = sys.deltas.remove(i);
        if sys.solve(c, z).is_none() {
            sys.deltas.insert(i, removed);
            i += 1;
        }
    }
    sys.deltas.sort_by(|a, b| match xi.compare(a, b) {
        Ordering::Equal => a.cmp(b),
        o => o,
    });
    let x = sys.solve(c, z).expect("support was solvable");
    let cert = sys.certificate(&x, c, z);
    if !in_s_xi(&cert.delta, xi, SignPolicy::StrictPlusOne)
        || c.apply_boundary(&cert.chain)? != z.scale(&cert.delta)
    {
        return Err(MovabilityError::Verification(
            "search produced an invalid certificate".into(),
        ));
    }
    Ok(Some(cert))
}
