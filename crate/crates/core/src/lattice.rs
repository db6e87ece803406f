//! Meet and join in the majorization lattice.
//!
//! The meet has prefix sums equal to the pointwise minimum of the inputs'
//! Lorenz breakpoints. The pointwise maximum is not always concave, so the
//! join is the least concave majorant of the max curve, computed here as the
//! upper convex hull of the cumulative points.
//!
//! Binary operations zero-pad to the longer input and keep that length.

use crate::error::{Error, Result};
use crate::pmf::{OrderedPmf, RawVector};

/// Meet and join of a pair together with the intermediate max vector.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePair {
    pub meet: OrderedPmf,
    pub join: OrderedPmf,
    pub beta: RawVector,
    /// True when `beta` was out of order and had to be concavified.
    pub lcm_applied: bool,
}

impl LatticePair {
    pub fn new(p: &OrderedPmf, q: &OrderedPmf) -> Self {
        let beta = beta_vector(p, q);
        let lcm_applied = !beta.is_nonincreasing();
        LatticePair {
            meet: meet(p, q),
            join: concavify(&beta),
            beta,
            lcm_applied,
        }
    }
}

/// Ties closer than this keep the previous winner.
const TIE_SLACK: f64 = 4.0 * f64::EPSILON;

/// Increments of the pointwise extremum of the inputs' Lorenz curves.
///
/// Where consecutive breakpoints come from the same input its mass is copied
/// instead of differencing prefix sums, so `meet(p, p)` is exactly `p`.
/// Inputs are put in a canonical order first, which makes the result
/// independent of argument order.
fn pointwise<F>(ps: &[&OrderedPmf], better: F) -> Vec<f64>
where
    F: Fn(f64, f64) -> bool,
{
    let mut ps = ps.to_vec();
    ps.sort_by(|a, b| {
        a.masses()
            .iter()
            .zip(b.masses())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or_else(|| a.len().cmp(&b.len()))
    });
    let len = ps.iter().map(|p| p.len()).max().unwrap_or(0);
    let curves: Vec<Vec<f64>> = ps.iter().map(|p| p.prefix_sums().padded(len)).collect();
    let mut out = Vec::with_capacity(len);
    let mut prev: Option<usize> = None;
    for k in 0..len {
        let mut win = prev.unwrap_or(0);
        for (i, c) in curves.iter().enumerate() {
            let cur = curves[win][k];
            if better(c[k], cur) && (c[k] - cur).abs() > TIE_SLACK {
                win = i;
            }
        }
        let mass = match prev {
            Some(j) if j != win => curves[win][k] - curves[j][k - 1],
            _ => ps[win].masses().get(k).copied().unwrap_or(0.0),
        };
        out.push(mass);
        prev = Some(win);
    }
    out
}

/// Greatest lower bound `p ∧ q`.
pub fn meet(p: &OrderedPmf, q: &OrderedPmf) -> OrderedPmf {
    OrderedPmf::from_computed(pointwise(&[p, q], |a, b| a < b))
}

/// The vector whose prefix sums are the pointwise max of the two curves.
/// May be out of order.
pub fn beta_vector(p: &OrderedPmf, q: &OrderedPmf) -> RawVector {
    RawVector::from_computed(pointwise(&[p, q], |a, b| a > b))
}

/// Least concave majorant of the cumulative points of `v`, returned as the
/// ordered PMF of its slopes.
///
/// Upper hull by monotone chain over `(k, V_k)`, `k = 0..=n`; each hull
/// segment spreads its rise evenly over the unit intervals it spans.
pub fn concavify(v: &RawVector) -> OrderedPmf {
    let cum = v.cumulative();
    let mut hull: Vec<(usize, f64)> = Vec::with_capacity(cum.len() + 1);
    hull.push((0, 0.0));
    for (k, &y) in cum.iter().enumerate() {
        let pt = (k + 1, y);
        while hull.len() >= 2 {
            let (x0, y0) = hull[hull.len() - 2];
            let (x1, y1) = hull[hull.len() - 1];
            // pop when (x1, y1) lies on or below the chord to pt
            let cross = (x1 - x0) as f64 * (pt.1 - y0) - (y1 - y0) * (pt.0 - x0) as f64;
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut masses = Vec::with_capacity(cum.len());
    for seg in hull.windows(2) {
        let (x0, x1) = (seg[0].0, seg[1].0);
        let run = &v.values()[x0..x1];
        let slope = if run.len() == 1 {
            run[0]
        } else {
            run.iter().sum::<f64>() / run.len() as f64
        };
        masses.extend(std::iter::repeat(slope).take(run.len()));
    }
    OrderedPmf::from_computed(masses)
}

/// Least upper bound `p ∨ q`.
pub fn join(p: &OrderedPmf, q: &OrderedPmf) -> OrderedPmf {
    concavify(&beta_vector(p, q))
}

/// Meet of a nonempty family: prefix sums are the pointwise min over all.
pub fn meet_many(ps: &[OrderedPmf]) -> Result<OrderedPmf> {
    if ps.is_empty() {
        return Err(Error::EmptyList);
    }
    let refs: Vec<&OrderedPmf> = ps.iter().collect();
    Ok(OrderedPmf::from_computed(pointwise(&refs, |a, b| a < b)))
}

/// Join of a nonempty family: one concavification of the pooled max curve.
pub fn join_many(ps: &[OrderedPmf]) -> Result<OrderedPmf> {
    if ps.is_empty() {
        return Err(Error::EmptyList);
    }
    let refs: Vec<&OrderedPmf> = ps.iter().collect();
    let raw = RawVector::from_computed(pointwise(&refs, |a, b| a > b));
    Ok(concavify(&raw))
}
