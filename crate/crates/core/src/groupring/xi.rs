//! Orderings of H induced by an injective homomorphism xi: H -> R.
//!
//! A single rational row cannot be injective on Z^r for r >= 2, so xi is a
//! stack of rational rows `v1, ..., vm` compared lexicographically. This models
//! `v1 + eps*v2 + ...` for an infinitesimal `eps` and captures the order of
//! any injective real class exactly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{Coefficient, Exponent, GroupRingError, LaurentPoly};

/// The value of xi on a group element, ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct XiValue(Vec<BigRational>);

impl XiValue {
    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn first(&self) -> &BigRational {
        &self.0[0]
    }

    pub fn is_positive(&self) -> bool {
        self.cmp_zero() == Ordering::Greater
    }

    pub fn cmp_zero(&self) -> Ordering {
        for c in &self.0 {
            match c.cmp(&BigRational::zero()) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl Add for &XiValue {
    type Output = XiValue;
    fn add(self, rhs: &XiValue) -> XiValue {
        XiValue(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

/// Which lowest coefficients count as "1" for membership in `S_xi`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignPolicy {
    /// Lowest coefficient exactly +1.
    #[default]
    StrictPlusOne,
    /// Lowest coefficient +1 or -1.
    PlusMinusOne,
}

impl SignPolicy {
    pub fn accepts(&self, lowest: &BigInt) -> bool {
        match self {
            SignPolicy::StrictPlusOne => lowest.is_one(),
            SignPolicy::PlusMinusOne => lowest.abs().is_one(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct XiOrder {
    rank: usize,
    rows: Vec<Vec<BigRational>>,
}

impl XiOrder {
    /// Validates that the row stack is injective on Z^rank.
    pub fn new(rank: usize, rows: Vec<Vec<BigRational>>) -> Result<Self, GroupRingError> {
        if rows.is_empty() {
            return Err(GroupRingError::EmptyOrder);
        }
        for row in &rows {
            if row.len() != rank {
                return Err(GroupRingError::RankMismatch {
                    left: rank,
                    right: row.len(),
                });
            }
        }
        let stack_rank = rational_rank(&rows);
        if stack_rank < rank {
            return Err(GroupRingError::NotInjective { rank, stack_rank });
        }
        Ok(XiOrder { rank, rows })
    }

    pub fn from_integers(rows: &[&[i64]]) -> Result<Self, GroupRingError> {
        let rank = rows.first().map_or(0, |r| r.len());
        Self::new(
            rank,
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| BigRational::from_integer(x.into()))
                        .collect()
                })
                .collect(),
        )
    }

    /// The rank-one order with `xi(t) = value`.
    pub fn rank_one(value: i64) -> Result<Self, GroupRingError> {
        Self::from_integers(&[&[value]])
    }

    /// The only order on the trivial group.
    pub fn trivial() -> Self {
        XiOrder {
            rank: 0,
            rows: vec![vec![]],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn value(&self, g: &Exponent) -> XiValue {
        debug_assert_eq!(g.rank(), self.rank);
        XiValue(self.rows.iter().map(|row| dot(row, g)).collect())
    }

    /// The first (real) coordinate of xi, the one that measures distance to infinity.
    pub fn first_coordinate(&self, g: &Exponent) -> BigRational {
        dot(&self.rows[0], g)
    }

    pub fn compare(&self, a: &Exponent, b: &Exponent) -> Ordering {
        for row in &self.rows {
            match dot(row, a).cmp(&dot(row, b)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    pub fn is_positive(&self, g: &Exponent) -> bool {
        self.value(g).is_positive()
    }

    pub fn negated(&self) -> XiOrder {
        XiOrder {
            rank: self.rank,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| -x).collect())
                .collect(),
        }
    }

    /// The class `xi_X x 1 + 1 x xi_Y` on H_X x H_Y, refined to an injective order.
    ///
    /// The leading row is the sum class. It is followed by the remaining rows
    /// of each factor and finally by the leading row of the first factor,
    /// which together span both blocks.
    pub fn product(&self, other: &XiOrder) -> XiOrder {
        let (r1, r2) = (self.rank, other.rank);
        let pad = |row: &[BigRational], left: bool| -> Vec<BigRational> {
            let zeros = |n| vec![BigRational::zero(); n];
            if left {
                let mut v = row.to_vec();
                v.extend(zeros(r2));
                v
            } else {
                let mut v = zeros(r1);
                v.extend_from_slice(row);
                v
            }
        };
        let mut rows = Vec::new();
        let mut lead = self.rows[0].clone();
        lead.extend_from_slice(&other.rows[0]);
        rows.push(lead);
        rows.extend(self.rows[1..].iter().map(|r| pad(r, true)));
        rows.extend(other.rows[1..].iter().map(|r| pad(r, false)));
        rows.push(pad(&self.rows[0], true));
        // A row in the span of earlier rows never breaks a tie, so it is dropped.
        let mut kept: Vec<Vec<BigRational>> = Vec::new();
        for row in rows {
            kept.push(row);
            if rational_rank(&kept) < kept.len() {
                kept.pop();
            }
        }
        if kept.is_empty() {
            kept.push(vec![BigRational::zero(); r1 + r2]);
        }
        XiOrder::new(r1 + r2, kept).expect("product of injective orders is injective")
    }

    /// Direction of a rank-one order: +1 if `xi(t) > 0`, -1 otherwise.
    pub fn rank_one_sign(&self) -> Option<i32> {
        if self.rank != 1 {
            return None;
        }
        Some(
            match self.compare(&Exponent::new(vec![1]), &Exponent::zero(1)) {
                Ordering::Greater => 1,
                _ => -1,
            },
        )
    }
}

impl fmt::Display for XiOrder {
    /// Rows separated by `; `, entries by single spaces, rationals as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(f, "{}", rows.join("; "))
    }
}

impl XiOrder {
    /// Parses the `m x r` matrix format produced by `Display`.
    pub fn parse(s: &str) -> Result<Self, GroupRingError> {
        let mut rows = Vec::new();
        let mut offset = 0;
        for row in s.split(';') {
            let mut entries = Vec::new();
            for tok in row.split([' ', ',', '\t']).filter(|t| !t.is_empty()) {
                let col = offset + row.find(tok).unwrap_or(0) + 1;
                let x: BigRational = tok.parse().map_err(|_| GroupRingError::Parse {
                    column: col,
                    message: format!("bad rational `{tok}`"),
                })?;
                entries.push(x);
            }
            offset += row.len() + 1;
            rows.push(entries);
        }
        let rank = rows.first().map_or(0, Vec::len);
        XiOrder::new(rank, rows)
    }
}

impl Serialize for XiOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn dot(row: &[BigRational], g: &Exponent) -> BigRational {
    row.iter()
        .zip(g.entries())
        .fold(BigRational::zero(), |acc, (v, &k)| {
            acc + v * BigRational::from_integer(k.into())
        })
}

fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot_row = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let factor = &row[col] / &pivot_row[col];
                for (x, p) in row[col..ncols].iter_mut().zip(&pivot_row[col..ncols]) {
                    *x -= &factor * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn extreme_term<C: Coefficient>(
    p: &LaurentPoly<C>,
    xi: &XiOrder,
    want: Ordering,
) -> Result<(C, Exponent), GroupRingError> {
    if p.rank() != xi.rank() {
        return Err(GroupRingError::RankMismatch {
            left: p.rank(),
            right: xi.rank(),
        });
    }
    let mut best: Option<(&Exponent, &C)> = None;
    for (e, c) in p.terms() {
        best = match best {
            Some((be, _)) if xi.compare(e, be) != want => best,
            _ => Some((e, c)),
        };
    }
    best.map(|(e, c)| (c.clone(), e.clone()))
        .ok_or(GroupRingError::ZeroInput)
}

/// The term of minimal xi-value: `(coefficient, exponent)`.
pub fn xi_lowest_term<C: Coefficient>(
    p: &LaurentPoly<C>,
    xi: &XiOrder,
) -> Result<(C, Exponent), GroupRingError> {
    extreme_term(p, xi, Ordering::Less)
}

/// The term of maximal xi-value.
pub fn xi_top_term<C: Coefficient>(
    p: &LaurentPoly<C>,
    xi: &XiOrder,
) -> Result<(C, Exponent), GroupRingError> {
    extreme_term(p, xi, Ordering::Greater)
}

pub fn xi_top_coefficient(p: &LaurentPoly<BigInt>, xi: &XiOrder) -> Result<BigInt, GroupRingError> {
    xi_top_term(p, xi).map(|(c, _)| c)
}

/// Membership in the multiplicative set `S_xi` of elements `h(1 - y)` with `y`
/// xi-positive, i.e. nonzero with xi-lowest coefficient 1.
pub fn in_s_xi(p: &LaurentPoly<BigInt>, xi: &XiOrder, policy: SignPolicy) -> bool {
    match xi_lowest_term(p, xi) {
        Ok((c, _)) => policy.accepts(&c),
        Err(_) => false,
    }
}

/// True iff every group element in the support has strictly positive xi-value.
pub fn is_xi_positive<C: Coefficient>(p: &LaurentPoly<C>, xi: &XiOrder) -> bool {
    p.terms().all(|(e, _)| xi.is_positive(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::{parse_poly, IntPoly};

    fn p(s: &str) -> IntPoly {
        parse_poly(s, 1).unwrap()
    }

    fn xi(v: i64) -> XiOrder {
        XiOrder::rank_one(v).unwrap()
    }

    #[test]
    fn lowest_term_examples() {
        let one = BigInt::from(1);
        assert_eq!(
            xi_lowest_term(&p("1 - 2*t"), &xi(1)).unwrap(),
            (one.clone(), Exponent::zero(1))
        );
        assert_eq!(
            xi_lowest_term(&p("t - 2"), &xi(1)).unwrap(),
            (BigInt::from(-2), Exponent::zero(1))
        );
        assert_eq!(
            xi_lowest_term(&p("t - 2"), &xi(-1)).unwrap(),
            (one, Exponent::new(vec![1]))
        );
        assert_eq!(
            xi_lowest_term(&IntPoly::zero(1), &xi(1)),
            Err(GroupRingError::ZeroInput)
        );
    }

    #[test]
    fn top_coefficient_examples() {
        assert_eq!(
            xi_top_coefficient(&p("3 + t - 7*t^2"), &xi(1)).unwrap(),
            BigInt::from(-7)
        );
        assert_eq!(
            xi_top_coefficient(&p("t - 2"), &xi(1)).unwrap(),
            BigInt::from(1)
        );
        assert_eq!(
            xi_top_coefficient(&p("5"), &xi(1)).unwrap(),
            BigInt::from(5)
        );
        assert_eq!(
            xi_top_coefficient(&p("5"), &xi(-3)).unwrap(),
            BigInt::from(5)
        );
        assert!(xi_top_coefficient(&IntPoly::zero(1), &xi(1)).is_err());
    }

    #[test]
    fn top_coefficient_matches_term_enumeration() {
        // t - 2 has terms at t^0 (xi 0) and t^1 (xi 1); the larger value carries 1.
        let q = p("t - 2");
        let order = xi(1);
        let mut terms: Vec<_> = q.terms().collect();
        terms.sort_by(|a, b| order.compare(a.0, b.0));
        assert_eq!(
            terms.last().unwrap().1,
            &xi_top_coefficient(&q, &order).unwrap()
        );
    }

    #[test]
    fn s_xi_examples() {
        let strict = SignPolicy::StrictPlusOne;
        assert!(in_s_xi(&p("t^3 - t^4 - 5*t^5"), &xi(1), strict));
        assert!(!in_s_xi(&p("2 - t"), &xi(1), strict));
        assert!(in_s_xi(&p("t - 2"), &xi(-1), strict));
        assert!(!in_s_xi(&IntPoly::zero(1), &xi(1), strict));
    }

    #[test]
    fn sign_policy_switch() {
        let q = p("t - 1");
        assert!(!in_s_xi(&q, &xi(1), SignPolicy::StrictPlusOne));
        assert!(in_s_xi(&q, &xi(1), SignPolicy::PlusMinusOne));
    }

    #[test]
    fn positivity_examples() {
        assert!(is_xi_positive(&p("2*t + t^3"), &xi(1)));
        assert!(!is_xi_positive(&p("1 + t"), &xi(1)));
        assert!(is_xi_positive(&IntPoly::zero(1), &xi(1)));
    }

    #[test]
    fn rank_two_single_row_is_rejected() {
        assert!(matches!(
            XiOrder::from_integers(&[&[1, 1]]),
            Err(GroupRingError::NotInjective {
                rank: 2,
                stack_rank: 1
            })
        ));
        assert!(XiOrder::from_integers(&[&[1, 1], &[1, 0]]).is_ok());
    }

    #[test]
    fn lexicographic_refinement_breaks_ties() {
        let order = XiOrder::from_integers(&[&[1, 1], &[1, 0]]).unwrap();
        let a = Exponent::new(vec![1, -1]);
        assert!(order.is_positive(&a));
        assert!(!order.is_positive(&Exponent::new(vec![-1, 1])));
    }

    #[test]
    fn product_order_leads_with_sum_class() {
        let prod = xi(1).product(&xi(1));
        assert_eq!(prod.rank(), 2);
        assert_eq!(
            prod.first_coordinate(&Exponent::new(vec![2, 3])),
            BigRational::from_integer(5.into())
        );
    }

    #[test]
    fn display_parse_roundtrip() {
        let order = XiOrder::parse("1 1/2; 0 -3").unwrap();
        assert_eq!(order.to_string(), "1 1/2; 0 -3");
        assert_eq!(XiOrder::parse(&order.to_string()).unwrap(), order);
    }
}
