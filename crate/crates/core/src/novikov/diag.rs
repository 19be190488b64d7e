//! Diagonalization of a free complex over the Novikov ring, up to a cutoff.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use super::{nov_add, nov_invert, nov_mul, nov_sub, NovikovError, NovikovSeries};
use crate::complexes::EquivariantChainComplex;
use crate::groupring::{Exponent, IntPoly, XiOrder};

pub type SeriesMatrix = Vec<Vec<NovikovSeries>>;

const STEP_BUDGET: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pivot {
    pub row: usize,
    pub col: usize,
    pub entry: NovikovSeries,
}

/// The boundary `d_q` in the new bases: `d(e^q_col) = entry * e^{q-1}_row`
/// for each pivot, and zero on the remaining cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalBlock {
    pub degree: usize,
    pub pivots: Vec<Pivot>,
    pub boundary: SeriesMatrix,
}

impl DiagonalBlock {
    pub fn mu(&self) -> usize {
        self.pivots.len()
    }

    pub fn diagonal_entries(&self) -> Vec<&NovikovSeries> {
        self.pivots.iter().map(|p| &p.entry).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalizedComplex {
    #[serde(serialize_with = "crate::serialize_rational")]
    pub cutoff: BigRational,
    /// `blocks[q - 1]` describes `d_q`.
    pub blocks: Vec<DiagonalBlock>,
    /// Columns of `transforms[q]` are the new basis of degree `q` in old coordinates.
    pub transforms: Vec<SeriesMatrix>,
    pub inverses: Vec<SeriesMatrix>,
    /// False when an elimination could not be certified below the cutoff.
    pub complete: bool,
}

impl DiagonalizedComplex {
    pub fn block(&self, q: usize) -> &DiagonalBlock {
        &self.blocks[q - 1]
    }

    /// Checks `T^-1 d T = D` and `T T^-1 = 1` up to the cutoff.
    pub fn verify(&self, c: &EquivariantChainComplex) -> Result<(), NovikovError> {
        let xi = c.xi();
        let cutoff = &self.cutoff;
        let zero = NovikovSeries::zero(cutoff.clone(), xi);
        for (k, block) in self.blocks.iter().enumerate() {
            let deg = k + 1;
            let b = c.boundary(deg);
            let orig: SeriesMatrix = (0..b.rows())
                .map(|i| {
                    (0..b.cols())
                        .map(|j| NovikovSeries::new(b.get(i, j).clone(), cutoff.clone(), xi))
                        .collect()
                })
                .collect();
            let left = mat_mul(&self.inverses[deg - 1], &orig, cutoff, xi);
            let conj = mat_mul(&left, &self.transforms[deg], cutoff, xi);
            for (i, row) in conj.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    let expected = block
                        .pivots
                        .iter()
                        .find(|p| p.row == i && p.col == j)
                        .map_or(&zero, |p| &p.entry);
                    if !e.agrees_with(expected) || !block.boundary[i][j].agrees_with(expected) {
                        return Err(NovikovError::Verification(format!(
                            "degree {deg} entry ({i}, {j}) is not diagonal"
                        )));
                    }
                }
            }
        }
        for (q, (t, ti)) in self.transforms.iter().zip(&self.inverses).enumerate() {
            let prod = mat_mul(t, ti, cutoff, xi);
            for (i, row) in prod.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    let want = if i == j {
                        NovikovSeries::one(cutoff.clone(), xi)
                    } else {
                        zero.clone()
                    };
                    if !x.agrees_with(&want) {
                        return Err(NovikovError::Verification(format!(
                            "degree {q} transform is not invertible at ({i}, {j})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn identity(n: usize, cutoff: &BigRational, xi: &XiOrder) -> SeriesMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        NovikovSeries::one(cutoff.clone(), xi)
                    } else {
                        NovikovSeries::zero(cutoff.clone(), xi)
                    }
                })
                .collect()
        })
        .collect()
}

/// `m[dst] -= f * m[src]` on rows.
fn row_op(m: &mut SeriesMatrix, dst: usize, src: usize, f: &NovikovSeries) {
    for k in 0..m[dst].len() {
        let prod = nov_mul(f, &m[src][k]).expect("same xi");
        m[dst][k] = nov_sub(&m[dst][k], &prod).expect("same xi");
    }
}

/// `m[.][dst] -= f * m[.][src]` on columns.
fn col_op(m: &mut SeriesMatrix, dst: usize, src: usize, f: &NovikovSeries) {
    for row in m.iter_mut() {
        let prod = nov_mul(&row[src], f).expect("same xi");
        row[dst] = nov_sub(&row[dst], &prod).expect("same xi");
    }
}

fn mat_mul(a: &SeriesMatrix, b: &SeriesMatrix, cutoff: &BigRational, xi: &XiOrder) -> SeriesMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner)
                        .map(|k| nov_mul(&row[k], &b[k][j]).expect("same xi"))
                        .reduce(|x, y| nov_add(&x, &y).expect("same xi"))
                        .unwrap_or_else(|| NovikovSeries::zero(cutoff.clone(), xi))
                })
                .collect()
        })
        .collect()
}

struct State {
    d: Vec<SeriesMatrix>,
    t: Vec<SeriesMatrix>,
    tinv: Vec<SeriesMatrix>,
}

impl State {
    /// Row operation on `d_q`: a change of basis in degree `q - 1`.
    fn rows(&mut self, q: usize, dst: usize, src: usize, f: &NovikovSeries) {
        row_op(&mut self.d[q - 1], dst, src, f);
        col_op(&mut self.t[q - 1], src, dst, &f.neg());
        row_op(&mut self.tinv[q - 1], dst, src, f);
    }

    /// Column operation on `d_q`: a change of basis in degree `q`.
    fn cols(&mut self, q: usize, dst: usize, src: usize, f: &NovikovSeries) {
        col_op(&mut self.d[q - 1], dst, src, f);
        col_op(&mut self.t[q], dst, src, f);
        row_op(&mut self.tinv[q], src, dst, &f.neg());
        if q < self.d.len() {
            row_op(&mut self.d[q], src, dst, &f.neg());
        }
    }
}

/// Pivot order: units of A first, then smallest |lowest coefficient|,
/// smallest xi of the lowest exponent, then exponent order.
fn pivot_key(s: &NovikovSeries) -> (bool, BigInt, Vec<BigRational>, Exponent) {
    let (alpha, g) = s.lowest_term().expect("nonzero");
    let unit = alpha.abs() == BigInt::from(1);
    (!unit, alpha.abs(), s.xi().value(&g).coords().to_vec(), g)
}

/// Diagonalizes the boundaries of `c` over A, degree by degree, keeping every
/// entry exact below its propagated cutoff.
pub fn truncated_diagonalize(
    c: &EquivariantChainComplex,
    cutoff: &BigRational,
) -> DiagonalizedComplex {
    let xi = c.xi().clone();
    let top = c.top_degree();
    let series = |p: &IntPoly| NovikovSeries::new(p.clone(), cutoff.clone(), &xi);
    let mut st = State {
        d: (1..=top)
            .map(|q| {
                let b = c.boundary(q);
                (0..b.rows())
                    .map(|i| (0..b.cols()).map(|j| series(b.get(i, j))).collect())
                    .collect()
            })
            .collect(),
        t: (0..=top)
            .map(|q| identity(c.cells(q), cutoff, &xi))
            .collect(),
        tinv: (0..=top)
            .map(|q| identity(c.cells(q), cutoff, &xi))
            .collect(),
    };
    let mut complete = true;
    let mut steps = 0;
    let mut prev_pivot_cols: Vec<usize> = Vec::new();
    let mut blocks = Vec::new();
    for q in 1..=top {
        let mut active_rows: Vec<bool> = (0..c.cells(q - 1))
            .map(|i| !prev_pivot_cols.contains(&i))
            .collect();
        let mut active_cols = vec![true; c.cells(q)];
        let mut pivots = Vec::new();
        loop {
            steps += 1;
            if steps > STEP_BUDGET {
                complete = false;
                break;
            }
            let m = &st.d[q - 1];
            let candidate = (0..m.len())
                .filter(|&i| active_rows[i])
                .flat_map(|i| (0..active_cols.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| active_cols[j] && !m[i][j].is_zero())
                .min_by(|&(a, b), &(x, y)| pivot_key(&m[a][b]).cmp(&pivot_key(&m[x][y])));
            let Some((i, j)) = candidate else { break };
            let p = m[i][j].clone();
            let others_in_col: Vec<usize> = (0..m.len())
                .filter(|&l| l != i && active_rows[l] && !m[l][j].is_zero())
                .collect();
            let others_in_row: Vec<usize> = (0..active_cols.len())
                .filter(|&k| k != j && active_cols[k] && !m[i][k].is_zero())
                .collect();
            if let Ok(pinv) = nov_invert(&p) {
                for l in others_in_col {
                    let f = nov_mul(&st.d[q - 1][l][j], &pinv).expect("same xi");
                    st.rows(q, l, i, &f);
                }
                for k in others_in_row {
                    let f = nov_mul(&st.d[q - 1][i][k], &pinv).expect("same xi");
                    st.cols(q, k, j, &f);
                }
            } else if !others_in_col.is_empty() || !others_in_row.is_empty() {
                // One Euclidean step on the lowest coefficients.
                let (ap, gp) = p.lowest_term().unwrap();
                // The multiplier is an exact monomial; its own cutoff must not bind.
                let far = cutoff.abs() * BigRational::from_integer(64.into())
                    + BigRational::from_integer(1_000_000.into());
                let quotient = |s: &NovikovSeries| {
                    let (aa, ga) = s.lowest_term().unwrap();
                    let k = &aa / &ap;
                    NovikovSeries::new(IntPoly::monomial(&ga - &gp, k), far.clone(), &xi)
                };
                for l in others_in_col {
                    let f = quotient(&st.d[q - 1][l][j]);
                    st.rows(q, l, i, &f);
                    if st.d[q - 1][l][j].is_zero() {
                        complete = false;
                    }
                }
                for k in others_in_row {
                    let f = quotient(&st.d[q - 1][i][k]);
                    st.cols(q, k, j, &f);
                    if st.d[q - 1][i][k].is_zero() {
                        complete = false;
                    }
                }
                continue;
            }
            active_rows[i] = false;
            active_cols[j] = false;
            pivots.push(Pivot {
                row: i,
                col: j,
                entry: st.d[q - 1][i][j].clone(),
            });
        }
        prev_pivot_cols = pivots.iter().map(|p| p.col).collect();
        blocks.push(pivots);
    }
    let blocks = blocks
        .into_iter()
        .enumerate()
        .map(|(k, pivots)| DiagonalBlock {
            degree: k + 1,
            pivots,
            boundary: st.d[k].clone(),
        })
        .collect();
    DiagonalizedComplex {
        cutoff: cutoff.clone(),
        blocks,
        transforms: st.t,
        inverses: st.tinv,
        complete,
    }
}
