//! Cartesian products of complexes and pushforward along period maps.

use num_rational::BigRational;

use super::{integer_span_rank, Chain, ComplexError, EquivariantChainComplex, PolyMatrix};
use crate::groupring::{Exponent, GroupRingError, IntPoly, XiOrder};

/// Cell index of `x (x) y` in degree `n` of the product: blocks are ordered
/// by the degree of the first factor, and within a block row-major in
/// `(x, y)`.
fn block_offsets(c: &EquivariantChainComplex, d: &EquivariantChainComplex, n: usize) -> Vec<usize> {
    let mut offsets = Vec::new();
    let mut acc = 0;
    for p in 0..=n {
        offsets.push(acc);
        acc += c.cells(p) * d.cells(n - p);
    }
    offsets.push(acc);
    offsets
}

fn embed(p: &IntPoly, rank: usize, left: bool, other: usize) -> IntPoly {
    p.map_exponents(rank, |e| {
        let zeros = Exponent::zero(other);
        if left {
            e.concat(&zeros)
        } else {
            zeros.concat(e)
        }
    })
}

/// The tensor product complex over Z[H_C x H_D].
///
/// `d(x (x) y) = dx (x) y + (-1)^{deg x} x (x) dy`. The combined order has the
/// sum class as leading row.
pub fn product_complex(
    c: &EquivariantChainComplex,
    d: &EquivariantChainComplex,
) -> EquivariantChainComplex {
    let (rc, rd) = (c.rank(), d.rank());
    let rank = rc + rd;
    let top = c.top_degree() + d.top_degree();
    let offsets: Vec<Vec<usize>> = (0..=top).map(|n| block_offsets(c, d, n)).collect();
    let ranks: Vec<usize> = offsets.iter().map(|o| *o.last().unwrap()).collect();
    let mut labels = Vec::new();
    for n in 0..=top {
        let mut ln = Vec::new();
        for p in 0..=n {
            for x in 0..c.cells(p) {
                for y in 0..d.cells(n - p) {
                    ln.push(format!("{}x{}", c.labels(p)[x], d.labels(n - p)[y]));
                }
            }
        }
        labels.push(ln);
    }
    let mut boundaries = Vec::new();
    for n in 1..=top {
        let mut m = PolyMatrix::zero(ranks[n - 1], ranks[n], rank);
        for p in 0..=n {
            let q = n - p;
            let dc = c.boundary(p);
            let dd = d.boundary(q);
            for x in 0..c.cells(p) {
                for y in 0..d.cells(q) {
                    let col = offsets[n][p] + x * d.cells(q) + y;
                    if p >= 1 {
                        for xi in 0..c.cells(p - 1) {
                            let a = dc.get(xi, x);
                            if a.is_zero() {
                                continue;
                            }
                            let row = offsets[n - 1][p - 1] + xi * d.cells(q) + y;
                            let cur = m.get(row, col) + &embed(a, rank, true, rd);
                            m.set(row, col, cur);
                        }
                    }
                    if q >= 1 {
                        for yi in 0..d.cells(q - 1) {
                            let b = dd.get(yi, y);
                            if b.is_zero() {
                                continue;
                            }
                            let row = offsets[n - 1][p] + x * d.cells(q - 1) + yi;
                            let mut e = embed(b, rank, false, rc);
                            if p % 2 == 1 {
                                e = -&e;
                            }
                            let cur = m.get(row, col) + &e;
                            m.set(row, col, cur);
                        }
                    }
                }
            }
        }
        boundaries.push(m);
    }
    EquivariantChainComplex::new(ranks, boundaries, c.xi().product(d.xi()), labels)
}

/// The cross product `x (x) y` of chains as a chain of the product complex.
pub fn cross_chain(
    c: &EquivariantChainComplex,
    d: &EquivariantChainComplex,
    x: &Chain,
    y: &Chain,
) -> Chain {
    let n = x.degree + y.degree;
    let offsets = block_offsets(c, d, n);
    let rank = c.rank() + d.rank();
    let mut out = Chain::zero(n, *offsets.last().unwrap(), rank);
    for (i, a) in x.coords.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let ea = embed(a, rank, true, d.rank());
        for (j, b) in y.coords.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let idx = offsets[x.degree] + i * d.cells(y.degree) + j;
            out.coords[idx] = &ea * &embed(b, rank, false, c.rank());
        }
    }
    out
}

/// A homomorphism of lattices Z^source -> Z^target, `columns[i]` the image of `e_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeMap {
    source: usize,
    target: usize,
    columns: Vec<Exponent>,
}

impl LatticeMap {
    pub fn new(target: usize, columns: Vec<Exponent>) -> Result<Self, ComplexError> {
        if let Some(c) = columns.iter().find(|c| c.rank() != target) {
            return Err(GroupRingError::RankMismatch {
                left: target,
                right: c.rank(),
            }
            .into());
        }
        Ok(LatticeMap {
            source: columns.len(),
            target,
            columns,
        })
    }

    pub fn identity(rank: usize) -> Self {
        LatticeMap {
            source: rank,
            target: rank,
            columns: (0..rank).map(|i| Exponent::unit(rank, i)).collect(),
        }
    }

    /// `(i_1, ..., i_n) -> i_1 + ... + i_n` onto Z.
    pub fn diagonal_sum(source: usize) -> Self {
        LatticeMap {
            source,
            target: 1,
            columns: vec![Exponent::new(vec![1]); source],
        }
    }

    /// The map to the trivial group.
    pub fn to_trivial(source: usize) -> Self {
        LatticeMap {
            source,
            target: 0,
            columns: vec![Exponent::zero(0); source],
        }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn apply(&self, e: &Exponent) -> Exponent {
        e.entries()
            .iter()
            .zip(&self.columns)
            .fold(Exponent::zero(self.target), |acc, (&k, col)| {
                &acc + &col.scaled(k)
            })
    }

    pub fn apply_poly(&self, p: &IntPoly) -> IntPoly {
        p.map_exponents(self.target, |e| self.apply(e))
    }

    pub fn apply_chain(&self, c: &Chain) -> Chain {
        c.map_coords(|p| self.apply_poly(p))
    }
}

/// Applies the ring map Z[H_source] -> Z[H_target] entrywise.
///
/// The map must be onto a finite-index sublattice and carry the leading xi
/// row of the source to that of `target_xi` on every lattice generator.
pub fn quotient_periods(
    c: &EquivariantChainComplex,
    map: &LatticeMap,
    target_xi: &XiOrder,
) -> Result<EquivariantChainComplex, ComplexError> {
    if map.source() != c.rank() || map.target() != target_xi.rank() {
        return Err(GroupRingError::RankMismatch {
            left: map.source(),
            right: c.rank(),
        }
        .into());
    }
    let span = integer_span_rank(&map.columns, map.target());
    if span < map.target() {
        return Err(ComplexError::NotFiniteIndex {
            rank: map.target(),
            span,
        });
    }
    for i in 0..map.source() {
        let e = Exponent::unit(map.source(), i);
        let src: BigRational = c.xi().first_coordinate(&e);
        let dst = target_xi.first_coordinate(&map.apply(&e));
        if src != dst {
            return Err(ComplexError::IncompatibleXi { generator: i });
        }
    }
    let boundaries = c
        .boundaries()
        .iter()
        .map(|m| m.map_entries(map.target(), |p| map.apply_poly(p)))
        .collect();
    Ok(EquivariantChainComplex::new(
        c.ranks().to_vec(),
        boundaries,
        target_xi.clone(),
        c.all_labels().to_vec(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{check_boundary_squared, fixtures};
    use crate::groupring::parse_poly;

    #[test]
    fn circle_times_circle() {
        let s = fixtures::circle().complex;
        let t = product_complex(&s, &s);
        assert_eq!(t.ranks(), &[1, 2, 1]);
        assert_eq!(t.rank(), 2);
        assert!(check_boundary_squared(&t));
        assert_eq!(t.euler_characteristic(), 0);
        let d2 = t.boundary(2);
        // d(e x f) = (t1 - 1) v x f - (t2 - 1) e x v, cells ordered (v x f, e x v).
        assert_eq!(d2.get(0, 0), &parse_poly("t1 - 1", 2).unwrap());
        assert_eq!(d2.get(1, 0), &parse_poly("1 - t2", 2).unwrap());
    }

    #[test]
    fn product_with_point_is_identity() {
        let c = fixtures::bs12(1).complex;
        let p = product_complex(&c, &EquivariantChainComplex::point());
        assert_eq!(p.ranks(), c.ranks());
        assert_eq!(p.xi(), c.xi());
        for q in 1..=c.top_degree() {
            assert_eq!(p.boundary(q), c.boundary(q));
        }
    }

    #[test]
    fn genus_two_squared_ranks() {
        let g = fixtures::genus(2).complex;
        let p = product_complex(&g, &g);
        assert_eq!(p.ranks(), &[1, 8, 18, 8, 1]);
        assert!(check_boundary_squared(&p));
        assert_eq!(p.euler_characteristic(), 4);
    }

    #[test]
    fn cross_of_cycles_is_a_cycle() {
        let g = fixtures::genus(2);
        let p = product_complex(&g.complex, &g.complex);
        let z = cross_chain(&g.complex, &g.complex, &g.cycle, &g.cycle);
        assert_eq!(z.degree, 2);
        assert!(p.is_cycle(&z).unwrap());
    }

    #[test]
    fn identity_quotient_is_unchanged() {
        let c = fixtures::torus().complex;
        let q = quotient_periods(&c, &LatticeMap::identity(1), c.xi()).unwrap();
        assert_eq!(q, c);
    }

    #[test]
    fn diagonal_quotient_collapses_kernel() {
        let map = LatticeMap::diagonal_sum(2);
        let p = parse_poly("1 - t1*t2^-1", 2).unwrap();
        assert!(map.apply_poly(&p).is_zero());
        let s = fixtures::circle().complex;
        let t = product_complex(&s, &s);
        let q = quotient_periods(&t, &map, &XiOrder::rank_one(1).unwrap()).unwrap();
        assert!(check_boundary_squared(&q));
        assert_eq!(q.boundary(1).get(0, 1), &parse_poly("t - 1", 1).unwrap());
    }

    #[test]
    fn incompatible_xi_is_rejected() {
        let s = fixtures::circle().complex;
        let t = product_complex(&s, &s);
        assert!(matches!(
            quotient_periods(
                &t,
                &LatticeMap::diagonal_sum(2),
                &XiOrder::rank_one(-1).unwrap()
            ),
            Err(ComplexError::IncompatibleXi { generator: 0 })
        ));
    }
}
