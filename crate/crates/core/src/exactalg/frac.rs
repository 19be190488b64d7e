//! Linear algebra over the fraction field Q(t1, ..., tr) of Z[H].
//!
//! Matrices are brought to reduced form by fraction-free Gauss-Jordan
//! elimination: every intermediate entry is a minor of the input, so each
//! division is exact and no polynomial gcd is needed.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::ExactAlgError;
use crate::complexes::{Chain, EquivariantChainComplex, PolyMatrix};
use crate::groupring::{Exponent, IntPoly, RatPoly};

// ---- univariate helpers -------------------------------------------------

/// Dense coefficients (low to high) of `t^-shift * p`, for rank 1.
fn to_dense(p: &RatPoly) -> (Vec<BigRational>, i64) {
    let Some((lo, hi)) = p.exponent_box() else {
        return (Vec::new(), 0);
    };
    let mut v = vec![BigRational::zero(); (hi[0] - lo[0] + 1) as usize];
    for (e, c) in p.terms() {
        v[(e.entries()[0] - lo[0]) as usize] = c.clone();
    }
    (v, lo[0])
}

fn from_dense(v: &[BigRational], shift: i64) -> RatPoly {
    let mut p = RatPoly::zero(1);
    for (i, c) in v.iter().enumerate() {
        if !c.is_zero() {
            p.add_term(Exponent::new(vec![shift + i as i64]), c.clone());
        }
    }
    p
}

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn dense_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    trim(&mut r);
    let lb = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() {
        let k = r.len() - b.len();
        let q = r.last().unwrap().clone() / lb.clone();
        for (i, c) in b.iter().enumerate() {
            r[k + i] -= q.clone() * c;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

/// Monic gcd of two univariate polynomials with nonzero constant part.
fn dense_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = dense_rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(l) = a.last().cloned() {
        for c in &mut a {
            *c = c.clone() / l.clone();
        }
    }
    a
}

/// The gcd in Q[t, t^-1], normalized to a monic polynomial with nonzero constant term.
fn laurent_gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
    if a.is_zero() {
        return normalize_unit(b);
    }
    if b.is_zero() {
        return normalize_unit(a);
    }
    let (da, _) = to_dense(a);
    let (db, _) = to_dense(b);
    from_dense(&dense_gcd(&da, &db), 0)
}

fn normalize_unit(p: &RatPoly) -> RatPoly {
    if p.is_zero() {
        return p.clone();
    }
    let (d, _) = to_dense(p);
    from_dense(&dense_gcd(&d, &d), 0)
}

// ---- scalars ------------------------------------------------------------

/// An element of the fraction field of Q[H].
#[derive(Clone, Debug)]
pub struct FracScalar {
    num: RatPoly,
    den: RatPoly,
}

impl FracScalar {
    /// `num / den`; `None` when `den` is zero.
    pub fn new(num: RatPoly, den: RatPoly) -> Option<Self> {
        assert_eq!(num.rank(), den.rank());
        if den.is_zero() {
            return None;
        }
        let mut f = FracScalar { num, den };
        f.reduce();
        Some(f)
    }

    pub fn from_poly(p: RatPoly) -> Self {
        let den = RatPoly::one(p.rank());
        FracScalar { num: p, den }
    }

    pub fn from_int(p: &IntPoly) -> Self {
        Self::from_poly(p.to_rational())
    }

    pub fn zero(rank: usize) -> Self {
        Self::from_poly(RatPoly::zero(rank))
    }

    pub fn rank(&self) -> usize {
        self.num.rank()
    }

    pub fn numerator(&self) -> &RatPoly {
        &self.num
    }

    pub fn denominator(&self) -> &RatPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Cancels common factors: a full gcd in rank 1, monomial and content
    /// stripping plus an attempted exact division otherwise.
    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = RatPoly::one(self.rank());
            return;
        }
        if self.rank() == 1 {
            let g = laurent_gcd(&self.num, &self.den);
            self.num = self.num.div_exact(&g).expect("gcd divides");
            self.den = self.den.div_exact(&g).expect("gcd divides");
        } else if let Some(q) = self.num.div_exact(&self.den) {
            self.num = q;
            self.den = RatPoly::one(self.rank());
            return;
        }
        // Move the monomial part and the leading coefficient of the denominator
        // into the numerator.
        let (den, shift) = self.den.to_polynomial_shift();
        let lead = den.lex_leading().map(|(_, c)| c.clone()).expect("nonzero");
        let inv = lead.recip();
        self.den = den.scale(&inv);
        self.num = self.num.shift(&shift).scale(&inv);
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        Self::new(num, &self.den * &other.den).expect("nonzero")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        FracScalar {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.num * &other.num, &self.den * &other.den).expect("nonzero")
    }

    /// `None` when dividing by zero.
    pub fn div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        Self::new(&self.num * &other.den, &self.den * &other.num)
    }

    /// Value at a rational point; `None` if the denominator vanishes there.
    pub fn evaluate(&self, point: &[BigRational]) -> Option<BigRational> {
        let d = self.den.evaluate(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.evaluate(point) / d)
    }
}

impl PartialEq for FracScalar {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for FracScalar {}

impl Serialize for FracScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for FracScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// A dense matrix over the fraction field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FracMatrix {
    rank: usize,
    rows: Vec<Vec<FracScalar>>,
    cols: usize,
}

impl FracMatrix {
    pub fn new(rank: usize, rows: Vec<Vec<FracScalar>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        FracMatrix { rank, rows, cols }
    }

    pub fn from_poly_matrix(m: &PolyMatrix) -> Self {
        let rows = (0..m.rows())
            .map(|i| {
                (0..m.cols())
                    .map(|j| FracScalar::from_int(m.get(i, j)))
                    .collect()
            })
            .collect();
        FracMatrix {
            rank: m.ring_rank(),
            rows,
            cols: m.cols(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FracScalar {
        &self.rows[i][j]
    }

    pub fn transpose(&self) -> FracMatrix {
        let rows = (0..self.cols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        FracMatrix {
            rank: self.rank,
            rows,
            cols: self.rows.len(),
        }
    }

    /// Scales each row (together with `rhs`) by a common denominator.
    fn cleared(&self, rhs: Option<&[FracScalar]>) -> (Vec<Vec<RatPoly>>, Vec<RatPoly>) {
        let mut out = Vec::new();
        let mut b = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let mut dens: Vec<&RatPoly> = Vec::new();
            let extra = rhs.map(|r| &r[i]);
            for x in row.iter().chain(extra) {
                if !x.den.is_one() && !dens.contains(&&x.den) {
                    dens.push(&x.den);
                }
            }
            let common = dens.iter().fold(RatPoly::one(self.rank), |acc, d| &acc * d);
            let clear = |x: &FracScalar| {
                (&x.num * &common)
                    .div_exact(&x.den)
                    .expect("common denominator is a multiple")
            };
            out.push(row.iter().map(clear).collect());
            if let Some(x) = extra {
                b.push(clear(x));
            }
        }
        (out, b)
    }
}

// ---- elimination --------------------------------------------------------

struct Reduced {
    m: Vec<Vec<RatPoly>>,
    pivots: Vec<usize>,
    det: RatPoly,
}

/// Fraction-free Gauss-Jordan on the first `limit` columns. On return the
/// pivot block is `det * I` and every entry is a polynomial.
fn reduce(mut m: Vec<Vec<RatPoly>>, limit: usize, ring_rank: usize) -> Reduced {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = RatPoly::one(ring_rank);
    let mut pivots = Vec::new();
    let mut k = 0;
    for c in 0..limit {
        if k == nrows {
            break;
        }
        let Some(p) = (k..nrows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| m[i][c].len())
        else {
            continue;
        };
        m.swap(k, p);
        let piv = m[k][c].clone();
        let pivot_row = m[k].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let a = row[c].clone();
            for j in 0..ncols {
                let v = &(&piv * &row[j]) - &(&a * &pivot_row[j]);
                row[j] = v.div_exact(&prev).expect("fraction-free step is exact");
            }
        }
        prev = piv;
        pivots.push(c);
        k += 1;
    }
    Reduced {
        m,
        pivots,
        det: prev,
    }
}

fn to_rat_rows(m: &PolyMatrix) -> Vec<Vec<RatPoly>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_rational()).collect())
        .collect()
}

/// Clears denominators and common factors of a vector; the lex-last
/// coefficient of the last nonzero entry (or of `anchor`) becomes positive.
fn primitive_vector(v: &[RatPoly], rank: usize, anchor: Option<usize>) -> Vec<IntPoly> {
    let nonzero: Vec<&RatPoly> = v.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.is_empty() {
        return v.iter().map(|_| IntPoly::zero(rank)).collect();
    }
    let mut w: Vec<RatPoly> = v.to_vec();
    if rank == 1 {
        let g = nonzero
            .iter()
            .fold(RatPoly::zero(1), |acc, p| laurent_gcd(&acc, p));
        w = w
            .iter()
            .map(|p| p.div_exact(&g).expect("gcd divides"))
            .collect();
    }
    // Common monomial factor.
    let mut lo: Option<Vec<i64>> = None;
    for p in w.iter().filter(|p| !p.is_zero()) {
        let (plo, _) = p.exponent_box().unwrap();
        lo = Some(match lo {
            None => plo,
            Some(l) => l.iter().zip(&plo).map(|(a, b)| *a.min(b)).collect(),
        });
    }
    let shift = Exponent::new(lo.unwrap().iter().map(|k| -k).collect());
    let w: Vec<RatPoly> = w.iter().map(|p| p.shift(&shift)).collect();
    let lcm = w
        .iter()
        .flat_map(|p| p.terms().map(|(_, c)| c.denom().clone()))
        .fold(BigInt::one(), |acc, d| acc.lcm(&d));
    let scale = BigRational::from_integer(lcm);
    let ints: Vec<IntPoly> = w
        .iter()
        .map(|p| p.scale(&scale).to_integer().expect("denominators cleared"))
        .collect();
    let mut g = ints
        .iter()
        .flat_map(|p| p.terms().map(|(_, c)| c.clone()).collect::<Vec<_>>())
        .fold(BigInt::zero(), |acc, c| acc.gcd(&c));
    let idx = anchor
        .filter(|&i| !ints[i].is_zero())
        .or_else(|| ints.iter().rposition(|p| !p.is_zero()))
        .unwrap();
    if ints[idx].lex_leading().unwrap().1.is_negative() {
        g = -g;
    }
    ints.iter().map(|p| p.div_coefficients(&g)).collect()
}

// ---- polynomial-matrix API ----------------------------------------------

/// Rank over the fraction field.
pub fn poly_rank(m: &PolyMatrix) -> usize {
    rat_rank(to_rat_rows(m), m.ring_rank())
}

fn rat_rank(rows: Vec<Vec<RatPoly>>, ring_rank: usize) -> usize {
    let limit = rows.first().map_or(0, Vec::len);
    reduce(rows, limit, ring_rank).pivots.len()
}

fn rat_kernel(rows: Vec<Vec<RatPoly>>, ncols: usize, ring_rank: usize) -> Vec<Vec<IntPoly>> {
    let r = reduce(rows, ncols, ring_rank);
    let mut out = Vec::new();
    for f in (0..ncols).filter(|c| !r.pivots.contains(c)) {
        let mut v = vec![RatPoly::zero(ring_rank); ncols];
        v[f] = r.det.clone();
        for (i, &c) in r.pivots.iter().enumerate() {
            v[c] = -&r.m[i][f];
        }
        out.push(primitive_vector(&v, ring_rank, Some(f)));
    }
    out
}

/// A basis of the right kernel, with polynomial entries.
pub fn poly_kernel(m: &PolyMatrix) -> Vec<Vec<IntPoly>> {
    rat_kernel(to_rat_rows(m), m.cols(), m.ring_rank())
}

/// A basis of the left kernel `{v : v M = 0}`.
pub fn poly_left_kernel(m: &PolyMatrix) -> Vec<Vec<IntPoly>> {
    poly_kernel(&m.transpose())
}

/// A solution of `M x = b` over the fraction field, `x = numerators / denominator`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FracSolution {
    pub numerators: Vec<IntPoly>,
    pub denominator: IntPoly,
}

fn rat_solve(
    rows: Vec<Vec<RatPoly>>,
    b: Vec<RatPoly>,
    ncols: usize,
    ring_rank: usize,
) -> Result<FracSolution, ExactAlgError> {
    let aug: Vec<Vec<RatPoly>> = rows
        .into_iter()
        .zip(b)
        .map(|(mut r, x)| {
            r.push(x);
            r
        })
        .collect();
    let r = reduce(aug, ncols, ring_rank);
    if r.m[r.pivots.len()..]
        .iter()
        .any(|row| !row[ncols].is_zero())
    {
        return Err(ExactAlgError::Inconsistent);
    }
    let mut v = vec![RatPoly::zero(ring_rank); ncols + 1];
    v[ncols] = r.det.clone();
    for (i, &c) in r.pivots.iter().enumerate() {
        v[c] = r.m[i][ncols].clone();
    }
    let mut w = primitive_vector(&v, ring_rank, Some(ncols));
    let denominator = w.pop().unwrap();
    Ok(FracSolution {
        numerators: w,
        denominator,
    })
}

/// Solves `M x = b`; `Err(Inconsistent)` when no solution exists.
pub fn poly_solve(m: &PolyMatrix, b: &[IntPoly]) -> Result<FracSolution, ExactAlgError> {
    if b.len() != m.rows() {
        return Err(ExactAlgError::DimensionMismatch {
            expected: m.rows(),
            found: b.len(),
        });
    }
    let b = b.iter().map(IntPoly::to_rational).collect();
    rat_solve(to_rat_rows(m), b, m.cols(), m.ring_rank())
}

// ---- fraction-matrix API ------------------------------------------------

pub fn frac_rank(m: &FracMatrix) -> usize {
    rat_rank(m.cleared(None).0, m.rank)
}

pub fn frac_kernel(m: &FracMatrix) -> Vec<Vec<IntPoly>> {
    rat_kernel(m.cleared(None).0, m.cols, m.rank)
}

pub fn frac_left_kernel(m: &FracMatrix) -> Vec<Vec<IntPoly>> {
    frac_kernel(&m.transpose())
}

pub fn frac_solve(m: &FracMatrix, b: &[FracScalar]) -> Result<FracSolution, ExactAlgError> {
    if b.len() != m.rows() {
        return Err(ExactAlgError::DimensionMismatch {
            expected: m.rows(),
            found: b.len(),
        });
    }
    let (rows, b) = m.cleared(Some(b));
    rat_solve(rows, b, m.cols, m.rank)
}

// ---- homology -----------------------------------------------------------

/// Homology with coefficients in the fraction field of Z[H].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericHomology {
    pub degree: usize,
    pub dimension: usize,
    /// Cycles whose classes form a basis.
    pub basis: Vec<Chain>,
}

pub fn homology_over_fraction_field(c: &EquivariantChainComplex, q: usize) -> GenericHomology {
    let rank = c.rank();
    let n = c.cells(q);
    let kernel: Vec<Vec<IntPoly>> = if q == 0 || n == 0 {
        (0..n).map(|i| c.basis_chain(q, i).coords).collect()
    } else {
        poly_kernel(&c.boundary(q))
    };
    let image: Vec<Vec<RatPoly>> = if q < c.top_degree() {
        let d = c.boundary(q + 1);
        (0..d.cols())
            .map(|j| d.column(j).iter().map(IntPoly::to_rational).collect())
            .collect()
    } else {
        Vec::new()
    };
    let image_rank = rat_rank(image.clone(), rank);
    let dimension = kernel.len() - image_rank;
    let mut span = image;
    let mut current = image_rank;
    let mut basis = Vec::new();
    for v in &kernel {
        if basis.len() == dimension {
            break;
        }
        let mut trial = span.clone();
        trial.push(v.iter().map(IntPoly::to_rational).collect());
        let r = rat_rank(trial.clone(), rank);
        if r > current {
            span = trial;
            current = r;
            basis.push(Chain::new(q, v.clone()));
        }
    }
    GenericHomology {
        degree: q,
        dimension,
        basis,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::fixtures;
    use crate::groupring::parse_poly;

    fn p(s: &str, r: usize) -> IntPoly {
        parse_poly(s, r).unwrap()
    }

    fn fs(s: &str, r: usize) -> FracScalar {
        FracScalar::from_int(&p(s, r))
    }

    #[test]
    fn scalar_field_axioms() {
        let a = fs("t - 1", 1);
        let b = fs("t^2 + 2", 1);
        let c =
            FracScalar::new(p("t + 3", 1).to_rational(), p("t^2 - 1", 1).to_rational()).unwrap();
        assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        let ac = a.mul(&c);
        assert_eq!(ac.denominator(), &p("t + 1", 1).to_rational());
        assert_eq!(c.div(&c).unwrap(), FracScalar::from_int(&p("1", 1)));
        assert!(c.div(&FracScalar::zero(1)).is_none());
        let x = FracScalar::new(
            p("t1*t2 - t2", 2).to_rational(),
            p("t1 - 1", 2).to_rational(),
        )
        .unwrap();
        assert_eq!(x.denominator(), &RatPoly::one(2));
        assert_eq!(x, fs("t2", 2));
    }

    #[test]
    fn small_ranks_and_kernels() {
        let m = PolyMatrix::from_rows(1, vec![vec![p("t - 1", 1)], vec![p("0", 1)]]);
        assert_eq!(poly_rank(&m), 1);
        let m = PolyMatrix::from_rows(
            1,
            vec![
                vec![p("t - 1", 1), p("0", 1)],
                vec![p("0", 1), p("t - 1", 1)],
            ],
        );
        assert!(poly_kernel(&m).is_empty());
        let torus = fixtures::torus().complex;
        let d2 = torus.boundary(2);
        assert_eq!(poly_rank(&d2), 1);
        assert!(poly_kernel(&d2).is_empty());
        let fm = FracMatrix::from_poly_matrix(&d2);
        assert_eq!(frac_rank(&fm), 1);
        assert_eq!(frac_left_kernel(&fm).len(), 1);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        for fx in fixtures::corpus() {
            let c = &fx.complex;
            for q in 1..=c.top_degree() {
                let d = c.boundary(q);
                for v in poly_kernel(&d) {
                    assert!(
                        d.apply(&v).iter().all(IntPoly::is_zero),
                        "{} q={q}",
                        fx.name
                    );
                }
                for v in poly_left_kernel(&d) {
                    assert!(d.transpose().apply(&v).iter().all(IntPoly::is_zero));
                }
            }
        }
    }

    #[test]
    fn solving_and_inconsistency() {
        let bs = fixtures::bs12(1);
        let d2 = bs.complex.boundary(2);
        let sol = poly_solve(&d2, &bs.cycle.coords).unwrap();
        assert_eq!(sol.denominator, p("t - 2", 1));
        assert_eq!(sol.numerators, vec![p("1", 1)]);
        let m = PolyMatrix::from_rows(1, vec![vec![p("t - 1", 1)], vec![p("0", 1)]]);
        assert_eq!(
            poly_solve(&m, &[p("0", 1), p("1", 1)]),
            Err(ExactAlgError::Inconsistent)
        );
        // A zero right-hand side is consistent with the zero solution.
        let sol = poly_solve(&m, &[p("0", 1), p("0", 1)]).unwrap();
        assert!(sol.numerators[0].is_zero());
        let fm = FracMatrix::new(
            1,
            vec![vec![FracScalar::new(
                p("1", 1).to_rational(),
                p("t", 1).to_rational(),
            )
            .unwrap()]],
        );
        let s = frac_solve(&fm, &[fs("1", 1)]).unwrap();
        assert_eq!(s.numerators[0], p("t", 1));
    }

    #[test]
    fn generic_homology_examples() {
        let g2 = fixtures::genus(2);
        let h = homology_over_fraction_field(&g2.complex, 1);
        assert_eq!(h.dimension, 2);
        assert_eq!(h.basis.len(), 2);
        for z in &h.basis {
            assert!(g2.complex.is_cycle(z).unwrap());
        }
        assert_eq!(
            homology_over_fraction_field(&fixtures::torus().complex, 1).dimension,
            0
        );
        assert_eq!(
            homology_over_fraction_field(&fixtures::circle().complex, 0).dimension,
            0
        );
        assert_eq!(
            homology_over_fraction_field(&fixtures::genus(3).complex, 1).dimension,
            4
        );
        assert_eq!(
            homology_over_fraction_field(&fixtures::genus_trivial(2).complex, 1).dimension,
            4
        );
    }

    fn rational_rank(rows: Vec<Vec<BigRational>>) -> usize {
        let mut m = rows;
        let ncols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..ncols {
            let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let pivot_row = m[rank].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != rank && !row[c].is_zero() {
                    let f = row[c].clone() / pivot_row[c].clone();
                    for (x, p) in row[..ncols].iter_mut().zip(&pivot_row[..ncols]) {
                        *x -= f.clone() * p.clone();
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn fraction_rank_matches_specialization() {
        let points = [
            BigRational::new(7.into(), 3.into()),
            BigRational::new((-5).into(), 11.into()),
        ];
        for fx in fixtures::corpus() {
            let c = &fx.complex;
            let pt: Vec<BigRational> = points.iter().take(c.rank()).cloned().collect();
            for q in 1..=c.top_degree() {
                let d = c.boundary(q);
                let specialized = (0..d.rows())
                    .map(|i| (0..d.cols()).map(|j| d.get(i, j).evaluate(&pt)).collect())
                    .collect();
                assert_eq!(
                    poly_rank(&d),
                    rational_rank(specialized),
                    "{} q={q}",
                    fx.name
                );
            }
        }
    }
}
