//! Free chain complexes over Z[H] for free abelian covers.
//!
//! Complexes come from group presentations through Fox calculus, from the
//! standard surface presentations, and from cartesian products of those.

pub mod fixtures;
mod format;
mod fox;
mod product;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::groupring::{Exponent, GroupRingError, IntPoly, XiOrder};

pub use format::{parse_presentation_file, PresentationFile};
pub use fox::{fox_derivative, project_to_h, FreeGroupRingElement};
pub use product::{cross_chain, product_complex, quotient_periods, LatticeMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("relator {index} projects to the nonzero period {exponent:?}")]
    RelatorNotInKernel { index: usize, exponent: Vec<i64> },
    #[error("generator images span rank {span} < {rank}: not a finite-index sublattice")]
    NotFiniteIndex { rank: usize, span: usize },
    #[error("surface genus must be at least 1")]
    ZeroGenus,
    #[error("xi is incompatible with the period map on generator {generator}")]
    IncompatibleXi { generator: usize },
    #[error("chain has degree {degree} but the complex has no such degree")]
    BadDegree { degree: usize },
    #[error("chain has {found} coordinates, expected {expected}")]
    BadLength { expected: usize, found: usize },
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    GroupRing(#[from] GroupRingError),
}

/// One letter `x^{+1}` or `x^{-1}` of a word in the free group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inverted(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

pub type Word = Vec<Letter>;

/// Cancels adjacent `x x^-1` pairs.
pub fn freely_reduce(word: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&l.inverted()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupPresentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl GroupPresentation {
    /// Relators are freely reduced on construction.
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, ComplexError> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !seen.insert(g.as_str()) {
                return Err(ComplexError::DuplicateGenerator(g.clone()));
            }
        }
        for w in &relators {
            if let Some(l) = w.iter().find(|l| l.generator >= generators.len()) {
                return Err(ComplexError::UnknownGenerator(format!("#{}", l.generator)));
            }
        }
        Ok(GroupPresentation {
            generators,
            relators: relators.iter().map(|w| freely_reduce(w)).collect(),
        })
    }

    /// Builds a presentation from relator strings like `t a t^-1 a^-2`.
    pub fn from_strings(generators: &[&str], relators: &[&str]) -> Result<Self, ComplexError> {
        let gens: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let words = relators
            .iter()
            .enumerate()
            .map(|(i, r)| parse_word(r, &gens, i + 1))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(gens, words)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn word_to_string(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        // Runs of one letter are written as powers.
        let mut parts = Vec::new();
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            let n = (j - i) as i64;
            let e = if w[i].inverse { -n } else { n };
            let name = &self.generators[w[i].generator];
            parts.push(if e == 1 {
                name.clone()
            } else {
                format!("{name}^{e}")
            });
            i = j;
        }
        parts.join(" ")
    }
}

/// Parses a whitespace-separated word such as `a b a^-1 b^-1`.
pub(crate) fn parse_word(
    s: &str,
    generators: &[String],
    line: usize,
) -> Result<Word, ComplexError> {
    let mut word = Vec::new();
    let mut col = 1;
    for tok in s.split(' ') {
        if tok.is_empty() {
            col += 1;
            continue;
        }
        let (name, power) = match tok.split_once('^') {
            Some((n, p)) => {
                let e: i64 = p.parse().map_err(|_| ComplexError::Syntax {
                    line,
                    column: col + n.len() + 1,
                    message: format!("bad exponent `{p}`"),
                })?;
                (n, e)
            }
            None => (tok, 1),
        };
        if tok == "1" {
            col += tok.len() + 1;
            continue;
        }
        let g = generators
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| ComplexError::Syntax {
                line,
                column: col,
                message: format!("unknown generator `{name}`"),
            })?;
        for _ in 0..power.unsigned_abs() {
            word.push(Letter::new(g, power < 0));
        }
        col += tok.len() + 1;
    }
    Ok(freely_reduce(&word))
}

/// The period homomorphism from the free group onto H, with the class xi on H.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodProjection {
    images: Vec<Exponent>,
    xi: XiOrder,
}

impl PeriodProjection {
    /// Checks that the images generate a finite-index sublattice of H.
    pub fn new(images: Vec<Exponent>, xi: XiOrder) -> Result<Self, ComplexError> {
        let rank = xi.rank();
        for e in &images {
            if e.rank() != rank {
                return Err(GroupRingError::RankMismatch {
                    left: rank,
                    right: e.rank(),
                }
                .into());
            }
        }
        let span = integer_span_rank(&images, rank);
        if span < rank {
            return Err(ComplexError::NotFiniteIndex { rank, span });
        }
        Ok(PeriodProjection { images, xi })
    }

    /// Rank-one projection sending each generator to `t^k`.
    pub fn rank_one(powers: &[i64], xi_sign: i64) -> Result<Self, ComplexError> {
        let images = powers.iter().map(|&k| Exponent::new(vec![k])).collect();
        Self::new(images, XiOrder::rank_one(xi_sign)?)
    }

    /// The projection onto the trivial group.
    pub fn trivial(generators: usize) -> Self {
        PeriodProjection {
            images: vec![Exponent::zero(0); generators],
            xi: XiOrder::trivial(),
        }
    }

    pub fn rank(&self) -> usize {
        self.xi.rank()
    }

    pub fn xi(&self) -> &XiOrder {
        &self.xi
    }

    pub fn images(&self) -> &[Exponent] {
        &self.images
    }

    pub fn image(&self, l: Letter) -> Exponent {
        let e = &self.images[l.generator];
        if l.inverse {
            -e
        } else {
            e.clone()
        }
    }

    pub fn word_exponent(&self, w: &[Letter]) -> Exponent {
        w.iter()
            .fold(Exponent::zero(self.rank()), |acc, &l| &acc + &self.image(l))
    }

    pub fn with_xi(&self, xi: XiOrder) -> Result<Self, ComplexError> {
        Self::new(self.images.clone(), xi)
    }
}

fn integer_span_rank(vectors: &[Exponent], rank: usize) -> usize {
    let rows: Vec<Vec<BigRational>> = vectors
        .iter()
        .map(|e| {
            e.entries()
                .iter()
                .map(|&k| BigRational::from_integer(k.into()))
                .collect()
        })
        .collect();
    rational_rank(&rows, rank)
}

pub(crate) fn rational_rank(rows: &[Vec<BigRational>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot_row = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if !row[col].is_zero() {
                let f = &row[col] / &pivot_row[col];
                for (x, p) in row[col..ncols].iter_mut().zip(&pivot_row[col..ncols]) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A dense matrix of group ring elements. Column `j` is the image of the
/// `j`-th basis element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    rank: usize,
    entries: Vec<IntPoly>,
}

impl PolyMatrix {
    pub fn zero(rows: usize, cols: usize, rank: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            rank,
            entries: vec![IntPoly::zero(rank); rows * cols],
        }
    }

    pub fn from_rows(rank: usize, rows: Vec<Vec<IntPoly>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zero(nrows, ncols, rank);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged matrix");
            for (j, p) in row.into_iter().enumerate() {
                m.set(i, j, p);
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

    pub fn ring_rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize, j: usize) -> &IntPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: IntPoly) {
        assert_eq!(p.rank(), self.rank);
        self.entries[i * self.cols + j] = p;
    }

    pub fn column(&self, j: usize) -> Vec<IntPoly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &IntPoly> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(IntPoly::is_zero)
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = PolyMatrix::zero(self.rows, other.cols, self.rank);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j) + &(a * b);
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[IntPoly]) -> Vec<IntPoly> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = IntPoly::zero(self.rank);
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn map_entries(&self, rank: usize, f: impl Fn(&IntPoly) -> IntPoly) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            rank,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zero(self.cols, self.rows, self.rank);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }
}

/// A chain of a given degree, one group ring coordinate per cell.
///
/// When its boundary vanishes it is a cycle, the representative of a class z.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Chain {
    pub degree: usize,
    pub coords: Vec<IntPoly>,
}

pub type CycleVector = Chain;

impl Chain {
    pub fn new(degree: usize, coords: Vec<IntPoly>) -> Self {
        Chain { degree, coords }
    }

    pub fn zero(degree: usize, len: usize, rank: usize) -> Self {
        Chain {
            degree,
            coords: vec![IntPoly::zero(rank); len],
        }
    }

    /// The basis cell `index`, with coefficient 1.
    pub fn basis(degree: usize, len: usize, rank: usize, index: usize) -> Self {
        let mut c = Self::zero(degree, len, rank);
        c.coords[index] = IntPoly::one(rank);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(IntPoly::is_zero)
    }

    pub fn scale(&self, f: &IntPoly) -> Chain {
        Chain {
            degree: self.degree,
            coords: self.coords.iter().map(|c| c * f).collect(),
        }
    }

    pub fn add(&self, other: &Chain) -> Chain {
        assert_eq!(self.degree, other.degree);
        Chain {
            degree: self.degree,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Chain) -> Chain {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Chain {
        Chain {
            degree: self.degree,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn map_coords(&self, f: impl Fn(&IntPoly) -> IntPoly) -> Chain {
        Chain {
            degree: self.degree,
            coords: self.coords.iter().map(f).collect(),
        }
    }
}

/// A free finitely generated chain complex over Z[H], `0 <- C_0 <- C_1 <- ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivariantChainComplex {
    ranks: Vec<usize>,
    /// `boundaries[q - 1]` is the matrix of `d_q: C_q -> C_{q-1}`.
    boundaries: Vec<PolyMatrix>,
    xi: XiOrder,
    labels: Vec<Vec<String>>,
}

impl EquivariantChainComplex {
    pub fn new(
        ranks: Vec<usize>,
        boundaries: Vec<PolyMatrix>,
        xi: XiOrder,
        labels: Vec<Vec<String>>,
    ) -> Self {
        assert_eq!(boundaries.len() + 1, ranks.len().max(1));
        assert_eq!(labels.len(), ranks.len());
        for (q, m) in boundaries.iter().enumerate() {
            assert_eq!((m.rows(), m.cols()), (ranks[q], ranks[q + 1]));
            assert_eq!(m.ring_rank(), xi.rank());
        }
        EquivariantChainComplex {
            ranks,
            boundaries,
            xi,
            labels,
        }
    }

    /// The one-point complex over the trivial group.
    pub fn point() -> Self {
        Self::new(vec![1], vec![], XiOrder::trivial(), vec![vec!["pt".into()]])
    }

    pub fn rank(&self) -> usize {
        self.xi.rank()
    }

    pub fn xi(&self) -> &XiOrder {
        &self.xi
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len().saturating_sub(1)
    }

    pub fn labels(&self, q: usize) -> &[String] {
        &self.labels[q]
    }

    /// The number of cells in degree `q` (zero outside the range).
    pub fn cells(&self, q: usize) -> usize {
        self.ranks.get(q).copied().unwrap_or(0)
    }

    /// The matrix of `d_q`; degrees without a boundary get an empty or zero matrix.
    pub fn boundary(&self, q: usize) -> PolyMatrix {
        if q >= 1 && q < self.ranks.len() {
            self.boundaries[q - 1].clone()
        } else {
            PolyMatrix::zero(
                if q == 0 { 0 } else { self.cells(q - 1) },
                self.cells(q),
                self.rank(),
            )
        }
    }

    pub fn boundary_ref(&self, q: usize) -> Option<&PolyMatrix> {
        (q >= 1).then(|| self.boundaries.get(q - 1)).flatten()
    }

    pub fn with_xi(&self, xi: XiOrder) -> Result<Self, ComplexError> {
        if xi.rank() != self.rank() {
            return Err(GroupRingError::RankMismatch {
                left: self.rank(),
                right: xi.rank(),
            }
            .into());
        }
        let mut c = self.clone();
        c.xi = xi;
        Ok(c)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(q, &n)| if q % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    pub fn check_chain(&self, c: &Chain) -> Result<(), ComplexError> {
        if c.degree >= self.ranks.len() {
            return Err(ComplexError::BadDegree { degree: c.degree });
        }
        if c.coords.len() != self.ranks[c.degree] {
            return Err(ComplexError::BadLength {
                expected: self.ranks[c.degree],
                found: c.coords.len(),
            });
        }
        if let Some(p) = c.coords.iter().find(|p| p.rank() != self.rank()) {
            return Err(GroupRingError::RankMismatch {
                left: self.rank(),
                right: p.rank(),
            }
            .into());
        }
        Ok(())
    }

    /// The boundary of a chain; degree-zero chains have the empty boundary.
    pub fn apply_boundary(&self, c: &Chain) -> Result<Chain, ComplexError> {
        self.check_chain(c)?;
        if c.degree == 0 {
            return Ok(Chain::new(0, vec![]));
        }
        let m = &self.boundaries[c.degree - 1];
        Ok(Chain::new(c.degree - 1, m.apply(&c.coords)))
    }

    pub fn is_cycle(&self, c: &Chain) -> Result<bool, ComplexError> {
        Ok(self.apply_boundary(c)?.is_zero())
    }

    /// Returns the chain if it is a cycle.
    pub fn cycle(&self, c: Chain) -> Result<CycleVector, ComplexError> {
        if self.is_cycle(&c)? {
            Ok(c)
        } else {
            Err(ComplexError::NotACycle)
        }
    }

    pub fn basis_chain(&self, degree: usize, index: usize) -> Chain {
        Chain::basis(degree, self.ranks[degree], self.rank(), index)
    }

    pub fn cell_index(&self, degree: usize, label: &str) -> Option<usize> {
        self.labels.get(degree)?.iter().position(|l| l == label)
    }

    pub(crate) fn boundaries(&self) -> &[PolyMatrix] {
        &self.boundaries
    }

    pub(crate) fn all_labels(&self) -> &[Vec<String>] {
        &self.labels
    }

    /// A copy with one boundary entry replaced, for negative tests.
    pub fn with_entry(&self, q: usize, i: usize, j: usize, p: IntPoly) -> Self {
        let mut c = self.clone();
        c.boundaries[q - 1].set(i, j, p);
        c
    }
}

/// True iff every composite `d_{q} d_{q+1}` is the zero matrix.
pub fn check_boundary_squared(c: &EquivariantChainComplex) -> bool {
    c.boundaries.windows(2).all(|w| w[0].mul(&w[1]).is_zero())
}

/// The presentation 2-complex of the cover with deck group H.
///
/// Cells: one vertex `v`, an edge per generator, a 2-cell `r1, r2, ...` per
/// relator. `d_1(e_x) = (t_x - 1) v` and `d_2` has the projected Fox
/// derivatives as columns.
pub fn build_presentation_complex(
    pres: &GroupPresentation,
    proj: &PeriodProjection,
) -> Result<EquivariantChainComplex, ComplexError> {
    let rank = proj.rank();
    if proj.images().len() != pres.generators().len() {
        return Err(ComplexError::BadLength {
            expected: pres.generators().len(),
            found: proj.images().len(),
        });
    }
    for (i, w) in pres.relators().iter().enumerate() {
        let e = proj.word_exponent(w);
        if !e.is_zero() {
            return Err(ComplexError::RelatorNotInKernel {
                index: i + 1,
                exponent: e.entries().to_vec(),
            });
        }
    }
    let ngen = pres.generators().len();
    let nrel = pres.relators().len();
    let mut d1 = PolyMatrix::zero(1, ngen, rank);
    for (x, img) in proj.images().iter().enumerate() {
        let tx = IntPoly::monomial(img.clone(), BigInt::one());
        d1.set(0, x, &tx - &IntPoly::one(rank));
    }
    let mut d2 = PolyMatrix::zero(ngen, nrel, rank);
    for (j, w) in pres.relators().iter().enumerate() {
        for x in 0..ngen {
            d2.set(x, j, project_to_h(&fox_derivative(w, x), proj));
        }
    }
    let mut labels = vec![vec!["v".to_string()], pres.generators().to_vec()];
    let (ranks, boundaries) = if nrel == 0 {
        (vec![1, ngen], vec![d1])
    } else {
        labels.push((1..=nrel).map(|i| format!("r{i}")).collect());
        (vec![1, ngen, nrel], vec![d1, d2])
    };
    Ok(EquivariantChainComplex::new(
        ranks,
        boundaries,
        proj.xi().clone(),
        labels,
    ))
}

/// The one-relator presentation `[a1, b1] ... [ag, bg]` of the closed
/// orientable surface of genus `g`.
pub fn surface_complex(genus: usize) -> Result<GroupPresentation, ComplexError> {
    if genus == 0 {
        return Err(ComplexError::ZeroGenus);
    }
    let mut gens = Vec::new();
    for i in 1..=genus {
        gens.push(format!("a{i}"));
        gens.push(format!("b{i}"));
    }
    let mut rel = Vec::new();
    for i in 0..genus {
        let (a, b) = (2 * i, 2 * i + 1);
        rel.extend([
            Letter::new(a, false),
            Letter::new(b, false),
            Letter::new(a, true),
            Letter::new(b, true),
        ]);
    }
    GroupPresentation::new(gens, vec![rel])
}

/// Period projection of a surface with `a1 -> t` and every other generator trivial.
pub fn surface_projection(genus: usize, xi_sign: i64) -> Result<PeriodProjection, ComplexError> {
    let mut powers = vec![0; 2 * genus];
    powers[0] = 1;
    PeriodProjection::rank_one(&powers, xi_sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::parse_poly;

    fn p(s: &str, rank: usize) -> IntPoly {
        parse_poly(s, rank).unwrap()
    }

    #[test]
    fn torus_complex() {
        let pres = GroupPresentation::from_strings(&["a", "b"], &["a b a^-1 b^-1"]).unwrap();
        let proj = PeriodProjection::rank_one(&[1, 0], 1).unwrap();
        let c = build_presentation_complex(&pres, &proj).unwrap();
        assert_eq!(c.ranks(), &[1, 2, 1]);
        assert_eq!(c.boundary(2).column(0), vec![p("0", 1), p("t - 1", 1)]);
        assert_eq!(c.boundary(1).get(0, 0), &p("t - 1", 1));
        assert!(c.boundary(1).get(0, 1).is_zero());
        assert!(check_boundary_squared(&c));
    }

    #[test]
    fn circle_complex() {
        let pres = GroupPresentation::from_strings(&["t"], &[]).unwrap();
        let proj = PeriodProjection::rank_one(&[1], 1).unwrap();
        let c = build_presentation_complex(&pres, &proj).unwrap();
        assert_eq!(c.ranks(), &[1, 1]);
        assert_eq!(c.boundary(1).get(0, 0), &p("t - 1", 1));
    }

    #[test]
    fn baumslag_solitar_complex() {
        let pres = GroupPresentation::from_strings(&["a", "t"], &["t a t^-1 a^-2"]).unwrap();
        let proj = PeriodProjection::rank_one(&[0, 1], 1).unwrap();
        let c = build_presentation_complex(&pres, &proj).unwrap();
        assert_eq!(c.boundary(2).column(0), vec![p("t - 2", 1), p("0", 1)]);
        assert_eq!(c.boundary(1).column(1), vec![p("t - 1", 1)]);
        assert!(c.boundary(1).get(0, 0).is_zero());
    }

    #[test]
    fn relator_with_nonzero_period_is_rejected() {
        let pres = GroupPresentation::from_strings(&["a", "t"], &["t a t^-1 a^-2"]).unwrap();
        let proj = PeriodProjection::rank_one(&[1, 0], 1).unwrap();
        assert!(matches!(
            build_presentation_complex(&pres, &proj),
            Err(ComplexError::RelatorNotInKernel { index: 1, .. })
        ));
    }

    #[test]
    fn surfaces() {
        let g1 = surface_complex(1).unwrap();
        assert_eq!(g1.generators(), &["a1", "b1"]);
        assert_eq!(g1.word_to_string(&g1.relators()[0]), "a1 b1 a1^-1 b1^-1");
        let g2 = surface_complex(2).unwrap();
        let c = build_presentation_complex(&g2, &surface_projection(2, 1).unwrap()).unwrap();
        assert_eq!(c.ranks(), &[1, 4, 1]);
        assert!(check_boundary_squared(&c));
        assert_eq!(surface_complex(0), Err(ComplexError::ZeroGenus));
    }

    #[test]
    fn corrupted_entry_breaks_boundary_squared() {
        let c = fixtures::torus().complex;
        assert!(check_boundary_squared(&c));
        let bad = c.with_entry(2, 0, 0, p("1", 1));
        assert!(!check_boundary_squared(&bad));
    }

    #[test]
    fn free_reduction() {
        let w = vec![
            Letter::new(0, false),
            Letter::new(1, false),
            Letter::new(1, true),
            Letter::new(0, true),
            Letter::new(2, false),
        ];
        assert_eq!(freely_reduce(&w), vec![Letter::new(2, false)]);
    }

    #[test]
    fn non_finite_index_projection_is_rejected() {
        let xi = XiOrder::from_integers(&[&[1, 1], &[1, 0]]).unwrap();
        let images = vec![Exponent::new(vec![1, 1]), Exponent::new(vec![2, 2])];
        assert!(matches!(
            PeriodProjection::new(images, xi),
            Err(ComplexError::NotFiniteIndex { rank: 2, span: 1 })
        ));
    }
}
