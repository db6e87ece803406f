//! Exact rational re-evaluation of lattice operations and entropy
//! inequalities for small PMFs.
//!
//! Meet, join, couplings and majorization are computed in exact rationals.
//! The join uses pooled block averaging rather than a convex hull, so it is
//! an independent route to the same result. Entropy comparisons are reduced
//! to integer or rational identities:
//!
//! * `α = 0`: products of support sizes;
//! * `α = 2`: products of `Σ p_i²`;
//! * `α = ∞`: products of the largest masses;
//! * `α = 1`: with every mass written as `a_i / D`, `D·H(p) = D ln D - Σ a_i ln a_i`,
//!   so sums of Shannon entropies compare through products of `a^a` and
//!   powers of `D`.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::pmf::OrderedPmf;

pub type Rational = BigRational;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Ordered PMF with exact rational masses summing to exactly one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactPmf {
    masses: Vec<Rational>,
}

impl ExactPmf {
    /// Requires nonnegative, nonincreasing masses with sum exactly one.
    pub fn new(masses: Vec<Rational>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::EmptyInput);
        }
        for (index, m) in masses.iter().enumerate() {
            if m.is_negative() {
                return Err(Error::NegativeMass {
                    index,
                    value: m.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        if masses.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse("exact masses are not nonincreasing".into()));
        }
        let sum: Rational = masses.iter().sum();
        if !sum.is_one() {
            return Err(Error::NotNormalized {
                sum: sum.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(ExactPmf { masses })
    }

    /// Sorts before validating.
    pub fn from_unsorted(mut masses: Vec<Rational>) -> Result<Self> {
        masses.sort_by(|a, b| b.cmp(a));
        ExactPmf::new(masses)
    }

    /// From `(numerator, denominator)` pairs.
    pub fn from_ratios(ratios: &[(i64, i64)]) -> Result<Self> {
        ExactPmf::from_unsorted(ratios.iter().map(|&(n, d)| q(n, d)).collect())
    }

    /// Recovers small-denominator rationals from floats. Each value must lie
    /// within `1e-12` of some `k/d` with `d ≤ max_den`.
    pub fn from_f64(values: &[f64], max_den: i64) -> Result<Self> {
        let masses = values
            .iter()
            .map(|&x| {
                (1..=max_den)
                    .find_map(|d| {
                        let n = (x * d as f64).round();
                        ((n / d as f64 - x).abs() <= 1e-12).then(|| q(n as i64, d))
                    })
                    .ok_or(Error::NotRational(x))
            })
            .collect::<Result<Vec<_>>>()?;
        ExactPmf::from_unsorted(masses)
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn to_f64(&self) -> OrderedPmf {
        let v: Vec<f64> = self.masses.iter().map(|m| m.to_f64().unwrap_or(0.0)).collect();
        OrderedPmf::normalized(&v).expect("exact PMF converts to a float PMF")
    }

    pub fn padded(&self, len: usize) -> Self {
        let mut masses = self.masses.clone();
        if len > masses.len() {
            masses.resize(len, Rational::zero());
        }
        ExactPmf { masses }
    }

    /// Drops trailing zeros, keeping at least one mass.
    pub fn trimmed(&self) -> Self {
        let keep = self.support_size().max(1);
        ExactPmf {
            masses: self.masses[..keep].to_vec(),
        }
    }

    pub fn support_size(&self) -> usize {
        self.masses.iter().filter(|m| m.is_positive()).count()
    }

    pub fn prefix_sums(&self) -> Vec<Rational> {
        let mut acc = Rational::zero();
        self.masses
            .iter()
            .map(|m| {
                acc += m;
                acc.clone()
            })
            .collect()
    }

    pub fn is_majorized_by(&self, other: &ExactPmf) -> bool {
        let len = self.len().max(other.len());
        let a = pad_curve(self.prefix_sums(), len);
        let b = pad_curve(other.prefix_sums(), len);
        a.iter().zip(&b).all(|(x, y)| x <= y)
    }

    /// Equality after trimming trailing zeros.
    pub fn same_as(&self, other: &ExactPmf) -> bool {
        self.trimmed() == other.trimmed()
    }

    fn power_sum2(&self) -> Rational {
        self.masses.iter().map(|m| m * m).sum()
    }
}

fn pad_curve(mut c: Vec<Rational>, len: usize) -> Vec<Rational> {
    let last = c.last().cloned().unwrap_or_else(Rational::zero);
    c.resize(len, last);
    c
}

fn increments(cum: &[Rational]) -> Vec<Rational> {
    let mut prev = Rational::zero();
    cum.iter()
        .map(|c| {
            let d = c - &prev;
            prev = c.clone();
            d
        })
        .collect()
}

fn pointwise(p: &ExactPmf, q: &ExactPmf, take_max: bool) -> Vec<Rational> {
    let len = p.len().max(q.len());
    let a = pad_curve(p.prefix_sums(), len);
    let b = pad_curve(q.prefix_sums(), len);
    a.into_iter()
        .zip(b)
        .map(|(x, y)| if (x < y) == take_max { y } else { x })
        .collect()
}

/// Exact meet. Panics if the min of the two curves were ever non-concave.
pub fn exact_meet(p: &ExactPmf, q: &ExactPmf) -> ExactPmf {
    ExactPmf::new(increments(&pointwise(p, q, false)))
        .expect("pointwise min of concave curves is concave")
}

/// Increments of the pointwise max of the two curves, possibly unordered.
pub fn exact_beta(p: &ExactPmf, q: &ExactPmf) -> Vec<Rational> {
    increments(&pointwise(p, q, true))
}

/// Least concave majorant by pooling adjacent violators: repeatedly merge
/// the first pair of neighbouring blocks whose averages increase, until the
/// block averages are nonincreasing.
pub fn exact_concavify(v: &[Rational]) -> ExactPmf {
    // (sum, width)
    let mut blocks: Vec<(Rational, usize)> = v.iter().map(|x| (x.clone(), 1)).collect();
    let avg = |b: &(Rational, usize)| &b.0 / Rational::from_integer(BigInt::from(b.1));
    loop {
        let violator = (0..blocks.len().saturating_sub(1)).find(|&i| avg(&blocks[i]) < avg(&blocks[i + 1]));
        match violator {
            Some(i) => {
                let (s, w) = blocks.remove(i + 1);
                blocks[i].0 += s;
                blocks[i].1 += w;
            }
            None => break,
        }
    }
    let masses = blocks
        .iter()
        .flat_map(|b| std::iter::repeat(avg(b)).take(b.1))
        .collect();
    ExactPmf::new(masses).expect("pooled averages are nonincreasing")
}

pub fn exact_join(p: &ExactPmf, q: &ExactPmf) -> ExactPmf {
    exact_concavify(&exact_beta(p, q))
}

/// Comonotone coupling cells `(i, j, mass)` from exact interval overlaps.
pub fn exact_comonotone_cells(p: &ExactPmf, q: &ExactPmf) -> Vec<(usize, usize, Rational)> {
    let pc = p.prefix_sums();
    let qc = q.prefix_sums();
    let mut cells = Vec::new();
    for i in 0..pc.len() {
        let p_lo = if i == 0 { Rational::zero() } else { pc[i - 1].clone() };
        for j in 0..qc.len() {
            let q_lo = if j == 0 { Rational::zero() } else { qc[j - 1].clone() };
            let lo = p_lo.clone().max(q_lo);
            let hi = pc[i].clone().min(qc[j].clone());
            if hi > lo {
                cells.push((i, j, hi - lo));
            }
        }
    }
    cells
}

pub fn exact_comonotone_sorted(p: &ExactPmf, q: &ExactPmf) -> ExactPmf {
    ExactPmf::from_unsorted(exact_comonotone_cells(p, q).into_iter().map(|c| c.2).collect())
        .expect("coupling masses form a PMF")
}

pub fn exact_independent_sorted(p: &ExactPmf, q: &ExactPmf) -> ExactPmf {
    let masses = p
        .masses()
        .iter()
        .flat_map(|a| q.masses().iter().map(move |b| a * b))
        .filter(|m| m.is_positive())
        .collect();
    ExactPmf::from_unsorted(masses).expect("product masses form a PMF")
}

/// Orders at which entropy sums compare exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactOrder {
    Zero,
    One,
    Two,
    Infinity,
}

fn pow_big(base: &BigInt, exp: &BigInt) -> BigInt {
    let e = exp.to_u32().expect("exponent fits in u32");
    num::pow(base.clone(), e as usize)
}

/// Compares `Σ_{x∈lhs} H(x)` with `Σ_{x∈rhs} H(x)` (Shannon) exactly.
fn shannon_sum_cmp(lhs: &[&ExactPmf], rhs: &[&ExactPmf]) -> Ordering {
    let d = lhs
        .iter()
        .chain(rhs)
        .flat_map(|p| p.masses())
        .fold(BigInt::one(), |acc, m| acc.lcm(m.denom()));
    // Π a^a over all atoms of a side, with a = mass * D
    let atoms = |side: &[&ExactPmf]| -> BigInt {
        side.iter()
            .flat_map(|p| p.masses())
            .filter(|m| m.is_positive())
            .map(|m| {
                let a = (m * Rational::from_integer(d.clone())).to_integer();
                pow_big(&a, &a)
            })
            .product()
    };
    let d_pow = |k: usize| -> BigInt { num::pow(pow_big(&d, &d), k) };
    // D·ΣH_L vs D·ΣH_R  <=>  D^{k_L D} Π_R a^a  vs  D^{k_R D} Π_L a^a
    let left = d_pow(lhs.len()) * atoms(rhs);
    let right = d_pow(rhs.len()) * atoms(lhs);
    left.cmp(&right)
}

/// Exact ordering of `Σ_{x∈lhs} H_α(x)` against `Σ_{x∈rhs} H_α(x)`.
pub fn entropy_sum_cmp(order: ExactOrder, lhs: &[&ExactPmf], rhs: &[&ExactPmf]) -> Ordering {
    match order {
        ExactOrder::Zero => {
            let prod = |s: &[&ExactPmf]| -> BigInt { s.iter().map(|p| BigInt::from(p.support_size())).product() };
            prod(lhs).cmp(&prod(rhs))
        }
        ExactOrder::One => shannon_sum_cmp(lhs, rhs),
        // H = -ln S, so the side with the smaller product has the larger sum
        ExactOrder::Two => {
            let prod = |s: &[&ExactPmf]| -> Rational { s.iter().map(|p| p.power_sum2()).product() };
            prod(rhs).cmp(&prod(lhs))
        }
        ExactOrder::Infinity => {
            let prod = |s: &[&ExactPmf]| -> Rational { s.iter().map(|p| p.masses()[0].clone()).product() };
            prod(rhs).cmp(&prod(lhs))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactPredicate {
    /// Aggregations of the comonotone coupling give meet and join.
    Lemma1,
    /// Sorted independent coupling ⪯ sorted comonotone coupling.
    Lemma2,
    /// `H(p∧q) ≤ H(p) + H(q)`.
    Subadditive(ExactOrder),
    /// `H(p) + H(q) ≤ H(p∧q) + H(p∨q)`.
    Supermodular(ExactOrder),
    /// Equality in the supermodular inequality.
    Modular(ExactOrder),
    /// `H(p) + H(q) ≤ 2H(p∧q)`.
    Corollary1(ExactOrder),
    /// Equality in the previous bound exactly when `p = q`. Orders 1 and 2.
    Corollary1Equality(ExactOrder),
    /// Meet lies below both inputs and join above both.
    Bounds,
}

/// Evaluates `predicate` on `(p, q)` in exact arithmetic.
pub fn oracle_exact_check(p: &ExactPmf, q: &ExactPmf, predicate: ExactPredicate) -> Result<bool> {
    let len = p.len().max(q.len());
    let (p, q) = (p.padded(len), q.padded(len));
    let w = exact_meet(&p, &q);
    Ok(match predicate {
        ExactPredicate::Lemma1 => {
            let cells = exact_comonotone_cells(&p, &q);
            let mut by_max = vec![Rational::zero(); len];
            let mut by_min = vec![Rational::zero(); len];
            for (i, j, m) in cells {
                by_max[i.max(j)] += &m;
                by_min[i.min(j)] += m;
            }
            by_max == w.masses() && exact_concavify(&by_min) == exact_join(&p, &q)
        }
        ExactPredicate::Lemma2 => {
            exact_independent_sorted(&p, &q).is_majorized_by(&exact_comonotone_sorted(&p, &q))
        }
        ExactPredicate::Subadditive(o) => entropy_sum_cmp(o, &[&w], &[&p, &q]) != Ordering::Greater,
        ExactPredicate::Supermodular(o) => {
            let v = exact_join(&p, &q);
            entropy_sum_cmp(o, &[&p, &q], &[&w, &v]) != Ordering::Greater
        }
        ExactPredicate::Modular(o) => {
            let v = exact_join(&p, &q);
            entropy_sum_cmp(o, &[&p, &q], &[&w, &v]) == Ordering::Equal
        }
        ExactPredicate::Corollary1(o) => entropy_sum_cmp(o, &[&p, &q], &[&w, &w]) != Ordering::Greater,
        ExactPredicate::Corollary1Equality(o) => {
            if !matches!(o, ExactOrder::One | ExactOrder::Two) {
                return Err(Error::UnsupportedOrder {
                    alpha: format!("{o:?}"),
                    context: "Corollary1Equality (orders 1 and 2 only)",
                });
            }
            let equal = entropy_sum_cmp(o, &[&p, &q], &[&w, &w]) == Ordering::Equal;
            equal == p.same_as(&q)
        }
        ExactPredicate::Bounds => {
            let v = exact_join(&p, &q);
            w.is_majorized_by(&p) && w.is_majorized_by(&q) && p.is_majorized_by(&v) && q.is_majorized_by(&v)
        }
    })
}

/// Every ordered PMF of length `n` whose masses are each of the form `k/d`
/// with `d ≤ max_den`, sorted.
pub fn grid(n: usize, max_den: i64) -> Vec<ExactPmf> {
    fn fill(
        values: &[Rational],
        slots: usize,
        remaining: &Rational,
        cap: &Rational,
        cur: &mut Vec<Rational>,
        out: &mut Vec<ExactPmf>,
    ) {
        if slots == 1 {
            if remaining <= cap && values.binary_search_by(|v| remaining.cmp(v)).is_ok() {
                cur.push(remaining.clone());
                out.push(ExactPmf { masses: cur.clone() });
                cur.pop();
            }
            return;
        }
        for v in values {
            if v > cap || v > remaining {
                continue;
            }
            // the remaining slots can hold at most v each
            if v * Rational::from_integer(BigInt::from(slots)) < *remaining {
                break;
            }
            cur.push(v.clone());
            fill(values, slots - 1, &(remaining - v), v, cur, out);
            cur.pop();
        }
    }
    assert!(n >= 1 && max_den >= 1);
    let values: Vec<Rational> = (1..=max_den)
        .flat_map(|d| (0..=d).map(move |k| q(k, d)))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .rev()
        .collect();
    let mut out = Vec::new();
    fill(&values, n, &Rational::one(), &Rational::one(), &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Checks that `exact_meet(p, q)` is the greatest lower bound of `p, q`
/// among `candidates`, and `exact_join(p, q)` the least upper bound.
/// Returns the first failing candidate, if any.
pub fn universal_property_failure(
    p: &ExactPmf,
    q: &ExactPmf,
    candidates: &[ExactPmf],
) -> Option<ExactPmf> {
    let w = exact_meet(p, q);
    let v = exact_join(p, q);
    candidates
        .iter()
        .find(|r| {
            let lower = r.is_majorized_by(p) && r.is_majorized_by(q);
            let upper = p.is_majorized_by(r) && q.is_majorized_by(r);
            (lower && !r.is_majorized_by(&w)) || (upper && !v.is_majorized_by(r))
        })
        .cloned()
}
