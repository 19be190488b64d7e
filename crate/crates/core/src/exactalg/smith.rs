//! Smith normal form over Z with unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// A dense integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zero(nrows, ncols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), ncols, "ragged matrix");
            for (j, x) in r.iter().enumerate() {
                m[(i, j)] = x.clone().into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| &self[(i, j)] * &v[j])
                    .fold(BigInt::zero(), |a, b| a + b)
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += k * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let d = k * &self[(src, j)];
            self[(dst, j)] += d;
        }
    }

    /// `col[dst] += k * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let d = k * &self[(i, src)];
            self[(i, dst)] += d;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = -&self[(i, j)];
            self[(i, j)] = x;
        }
    }

    /// Determinant by fraction-free elimination; square matrices only.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut prev = BigInt::one();
        let mut sign = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                m.swap_rows(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * prev
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// `left * input * right = diagonal` with unimodular `left`, `right`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmithDecomposition {
    /// Nonzero invariant factors, positive, each dividing the next.
    pub invariant_factors: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub diagonal: IntMatrix,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: the entry of least absolute value in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if d[(i, j)].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !d[(i, t)].is_zero() {
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    changed = true;
                }
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !d[(t, j)].is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // Enforce divisibility of the remaining block by the pivot.
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !d[(i, j)].is_multiple_of(&d[(t, t)]));
            match bad {
                Some((i, _)) => {
                    d.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let invariant_factors = (0..rows.min(cols))
        .map(|i| d[(i, i)].clone())
        .take_while(|x| !x.is_zero())
        .collect();
    SmithDecomposition {
        invariant_factors,
        left: u,
        right: v,
        diagonal: d,
    }
}

/// An integer solution of `a x = b`, if one exists.
pub fn solve_integer_system(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), a.rows());
    let snf = smith_normal_form(a);
    let ub = snf.left.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, w) in ub.iter().enumerate() {
        match snf.invariant_factors.get(i) {
            Some(d) => {
                if !w.is_multiple_of(d) {
                    return None;
                }
                y[i] = w / d;
            }
            None => {
                if !w.is_zero() {
                    return None;
                }
            }
        }
    }
    Some(snf.right.mul_vec(&y))
}

/// The additive order of `b` in `Z^m / a Z^n`; zero when the order is infinite.
pub fn cokernel_order(a: &IntMatrix, b: &[BigInt]) -> BigInt {
    let snf = smith_normal_form(a);
    let ub = snf.left.mul_vec(b);
    let mut order = BigInt::one();
    for (i, w) in ub.iter().enumerate() {
        match snf.invariant_factors.get(i) {
            Some(d) => {
                let n = d / d.gcd(w);
                order = order.lcm(&n);
            }
            None => {
                if !w.is_zero() {
                    return BigInt::zero();
                }
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 0..n {
            for rest in combinations(n, k - 1) {
                if rest.first().is_none_or(|&r| r > first) {
                    let mut v = vec![first];
                    v.extend(rest);
                    out.push(v);
                }
            }
        }
        out
    }

    /// gcd of all k x k minors, by cofactor-free brute force.
    fn minor_gcd(m: &IntMatrix, k: usize) -> BigInt {
        let mut g = BigInt::zero();
        for rs in combinations(m.rows(), k) {
            for cs in combinations(m.cols(), k) {
                let sub: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| m[(i, j)].clone()).collect())
                    .collect();
                g = g.gcd(&IntMatrix::from_rows(&sub).determinant());
            }
        }
        g
    }

    pub(crate) fn check_against_minors(m: &IntMatrix) {
        let snf = smith_normal_form(m);
        let mut prod = BigInt::one();
        for k in 1..=m.rows().min(m.cols()) {
            let g = minor_gcd(m, k);
            match snf.invariant_factors.get(k - 1) {
                Some(d) => {
                    prod *= d;
                    assert_eq!(prod, g, "k = {k}");
                }
                None => assert!(g.is_zero()),
            }
        }
        for w in snf.invariant_factors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert_eq!(snf.left.mul(m).mul(&snf.right), snf.diagonal);
        assert!(snf.left.determinant().abs().is_one());
        assert!(snf.right.determinant().abs().is_one());
    }

    #[test]
    fn small_examples() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(
            smith_normal_form(&m).invariant_factors,
            vec![BigInt::from(2), BigInt::from(4)]
        );
        check_against_minors(&m);
        let id = IntMatrix::identity(3);
        assert_eq!(
            smith_normal_form(&id).invariant_factors,
            vec![BigInt::one(); 3]
        );
        assert!(smith_normal_form(&IntMatrix::zero(2, 3))
            .invariant_factors
            .is_empty());
    }

    #[test]
    fn integer_solving() {
        let a = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let x = solve_integer_system(&a, &[BigInt::from(2), BigInt::from(6)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![BigInt::from(2), BigInt::from(6)]);
        assert!(solve_integer_system(&a, &[BigInt::from(1), BigInt::from(0)]).is_none());
        let b = IntMatrix::from_rows(&[vec![2], vec![0]]);
        assert_eq!(
            cokernel_order(&b, &[BigInt::from(1), BigInt::from(0)]),
            BigInt::from(2)
        );
        assert_eq!(
            cokernel_order(&b, &[BigInt::from(0), BigInt::from(1)]),
            BigInt::zero()
        );
    }

    proptest! {
        #[test]
        fn invariant_factors_match_minor_gcds(
            rows in 1usize..=4,
            cols in 1usize..=4,
            seed in prop::collection::vec(-9i64..=9, 16),
        ) {
            let data: Vec<Vec<i64>> = (0..rows).map(|i| seed[i * 4..i * 4 + cols].to_vec()).collect();
            check_against_minors(&IntMatrix::from_rows(&data));
        }
    }
}
