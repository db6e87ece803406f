//! Ordered probability mass functions and the majorization preorder.
//!
//! An [`OrderedPmf`] is a finite probability vector stored in nonincreasing
//! order. Majorization compares prefix sums: `q` majorizes `p` when every
//! prefix sum of `q` dominates the matching prefix sum of `p`. PMFs of
//! different lengths are compared after padding the shorter one with zeros.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `|sum - 1|` accepted by strict construction.
pub const NORM_TOL: f64 = 1e-9;
/// Slack allowed when comparing prefix sums.
pub const CMP_TOL: f64 = 1e-12;
/// Masses at or below this value are outside the support.
pub const SUPP_TOL: f64 = 1e-12;
/// Inputs at or above `-NEG_CLAMP` are clamped to zero instead of rejected.
pub const NEG_CLAMP: f64 = 1e-12;

/// A probability mass function with masses sorted in nonincreasing order.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct OrderedPmf {
    masses: Vec<f64>,
}

impl fmt::Debug for OrderedPmf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("OrderedPmf").field(&self.masses).finish()
    }
}

impl fmt::Display for OrderedPmf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, m) in self.masses.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}

impl TryFrom<Vec<f64>> for OrderedPmf {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        make_pmf(&values, true)
    }
}

impl From<OrderedPmf> for Vec<f64> {
    fn from(p: OrderedPmf) -> Self {
        p.masses
    }
}

/// Builds an [`OrderedPmf`] from arbitrary nonnegative values.
///
/// Values are sorted nonincreasing (stable, so ties keep their input order).
/// Entries in `[-1e-12, 0)` are clamped to zero. In strict mode the sum must
/// be within [`NORM_TOL`] of one; otherwise the vector is renormalized.
pub fn make_pmf(values: &[f64], strict: bool) -> Result<OrderedPmf> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut masses = Vec::with_capacity(values.len());
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index });
        }
        if value < -NEG_CLAMP {
            return Err(Error::NegativeMass { index, value });
        }
        masses.push(value.max(0.0));
    }
    let sum: f64 = masses.iter().sum();
    if strict {
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { sum });
        }
    } else {
        if !(sum > 0.0) {
            return Err(Error::NotNormalized { sum });
        }
        for m in &mut masses {
            *m /= sum;
        }
    }
    sort_nonincreasing(&mut masses);
    Ok(OrderedPmf { masses })
}

fn sort_nonincreasing(v: &mut [f64]) {
    v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
}

impl OrderedPmf {
    /// Strict constructor; see [`make_pmf`].
    pub fn new(values: &[f64]) -> Result<Self> {
        make_pmf(values, true)
    }

    /// Renormalizing constructor; see [`make_pmf`].
    pub fn normalized(values: &[f64]) -> Result<Self> {
        make_pmf(values, false)
    }

    /// Uniform PMF on `n` atoms, the bottom element of the lattice.
    pub fn uniform(n: usize) -> Self {
        assert!(n >= 1, "uniform PMF needs at least one atom");
        OrderedPmf {
            masses: vec![1.0 / n as f64; n],
        }
    }

    /// `(1, 0, ..., 0)` of length `n`, the top element of the lattice.
    pub fn deterministic(n: usize) -> Self {
        assert!(n >= 1, "deterministic PMF needs at least one atom");
        let mut masses = vec![0.0; n];
        masses[0] = 1.0;
        OrderedPmf { masses }
    }

    /// Builds from values produced by lattice and coupling arithmetic.
    ///
    /// Rounding can leave values a few ulps negative or out of order, so they
    /// are clamped and re-sorted. No normalization check is made.
    pub(crate) fn from_computed(mut masses: Vec<f64>) -> Self {
        debug_assert!(!masses.is_empty());
        for m in &mut masses {
            if *m < 0.0 {
                debug_assert!(*m > -1e-9, "computed mass {m} is materially negative");
                *m = 0.0;
            }
        }
        if masses.windows(2).any(|w| w[0] < w[1]) {
            sort_nonincreasing(&mut masses);
        }
        OrderedPmf { masses }
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    /// Always false: a PMF has at least one atom.
    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    /// Largest mass `p_1`.
    pub fn max_mass(&self) -> f64 {
        self.masses[0]
    }

    /// Zero-pads to `len` atoms. Lengths shorter than the current one are
    /// ignored.
    pub fn padded(&self, len: usize) -> Self {
        let mut masses = self.masses.clone();
        if len > masses.len() {
            masses.resize(len, 0.0);
        }
        OrderedPmf { masses }
    }

    /// Drops trailing masses at or below [`SUPP_TOL`], keeping at least one.
    pub fn trimmed(&self) -> Self {
        let keep = self.support_size().max(1);
        OrderedPmf {
            masses: self.masses[..keep].to_vec(),
        }
    }

    /// Number of masses strictly above [`SUPP_TOL`].
    pub fn support_size(&self) -> usize {
        self.masses.iter().filter(|&&m| m > SUPP_TOL).count()
    }

    /// True when all mass sits on one atom.
    pub fn is_deterministic(&self) -> bool {
        self.support_size() == 1
    }

    pub fn prefix_sums(&self) -> LorenzCurve {
        let mut acc = 0.0;
        let breakpoints = self
            .masses
            .iter()
            .map(|m| {
                acc += m;
                acc
            })
            .collect();
        LorenzCurve { breakpoints }
    }

    /// `self ⪯ other`: every prefix sum of `self` is at most the matching
    /// prefix sum of `other`, up to [`CMP_TOL`].
    pub fn is_majorized_by(&self, other: &OrderedPmf) -> bool {
        let len = self.len().max(other.len());
        let a = self.prefix_sums().padded(len);
        let b = other.prefix_sums().padded(len);
        a.iter().zip(&b).all(|(x, y)| *x <= *y + CMP_TOL)
    }

    /// Value of the Lorenz curve at `t ∈ [0, n]`.
    pub fn lorenz_eval(&self, t: f64) -> Result<f64> {
        self.prefix_sums().eval(t)
    }

    /// Merges masses over the blocks of `parts` and re-sorts.
    pub fn aggregate(&self, parts: &Partition) -> Result<OrderedPmf> {
        if parts.domain_len() != self.len() {
            return Err(Error::InvalidPartition(format!(
                "partition covers {} indices but the PMF has {}",
                parts.domain_len(),
                self.len()
            )));
        }
        let masses = parts
            .blocks()
            .iter()
            .map(|block| block.iter().map(|&i| self.masses[i]).sum())
            .collect();
        Ok(OrderedPmf::from_computed(masses))
    }

    /// Maximum absolute coordinate difference after zero-padding both sides.
    pub fn max_abs_diff(&self, other: &OrderedPmf) -> f64 {
        let len = self.len().max(other.len());
        (0..len)
            .map(|i| {
                let a = self.masses.get(i).copied().unwrap_or(0.0);
                let b = other.masses.get(i).copied().unwrap_or(0.0);
                (a - b).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Coordinatewise equality within `tol`, ignoring zero padding.
    pub fn approx_eq(&self, other: &OrderedPmf, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }
}

pub fn prefix_sums(p: &OrderedPmf) -> LorenzCurve {
    p.prefix_sums()
}

pub fn is_majorized_by(p: &OrderedPmf, q: &OrderedPmf) -> bool {
    p.is_majorized_by(q)
}

pub fn lorenz_eval(p: &OrderedPmf, t: f64) -> Result<f64> {
    p.lorenz_eval(t)
}

pub fn aggregate(p: &OrderedPmf, parts: &Partition) -> Result<OrderedPmf> {
    p.aggregate(parts)
}

pub fn support_size(p: &OrderedPmf) -> usize {
    p.support_size()
}

/// Cumulative sums `P_1, ..., P_n` of a PMF; `P_0 = 0` is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct LorenzCurve {
    breakpoints: Vec<f64>,
}

impl LorenzCurve {
    /// Wraps raw cumulative values. Used for curves that are not necessarily
    /// concave, such as the pointwise max of two Lorenz curves.
    pub fn from_breakpoints(breakpoints: Vec<f64>) -> Self {
        LorenzCurve { breakpoints }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn len(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.breakpoints.is_empty()
    }

    /// Breakpoints extended to `len` by repeating the final value.
    pub fn padded(&self, len: usize) -> Vec<f64> {
        let mut out = self.breakpoints.clone();
        let last = out.last().copied().unwrap_or(0.0);
        if len > out.len() {
            out.resize(len, last);
        }
        out
    }

    /// Points `(k, P_k)` for `k = 0..=n`, including the origin.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        std::iter::once((0.0, 0.0)).chain(
            self.breakpoints
                .iter()
                .enumerate()
                .map(|(k, &v)| ((k + 1) as f64, v)),
        )
    }

    /// Piecewise-linear interpolation between breakpoints.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let n = self.breakpoints.len();
        if !(0.0..=n as f64).contains(&t) {
            return Err(Error::OutOfDomain { t, n });
        }
        if t == n as f64 {
            return Ok(self.breakpoints[n - 1]);
        }
        let k = t.floor() as usize;
        let lo = if k == 0 { 0.0 } else { self.breakpoints[k - 1] };
        let hi = self.breakpoints[k];
        Ok(lo + (t - k as f64) * (hi - lo))
    }

    /// Increments are nonincreasing up to `tol`.
    pub fn is_concave(&self, tol: f64) -> bool {
        let mut prev_inc = f64::INFINITY;
        let mut prev = 0.0;
        for &b in &self.breakpoints {
            let inc = b - prev;
            if inc > prev_inc + tol {
                return false;
            }
            prev_inc = inc;
            prev = b;
        }
        true
    }

    /// Successive differences, i.e. the mass vector the curve encodes.
    pub fn increments(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.breakpoints
            .iter()
            .map(|&b| {
                let d = b - prev;
                prev = b;
                d
            })
            .collect()
    }
}

/// A nonnegative vector summing to one with no ordering requirement.
#[derive(Debug, Clone, PartialEq)]
pub struct RawVector {
    values: Vec<f64>,
}

impl RawVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if value < -NEG_CLAMP {
                return Err(Error::NegativeMass { index, value });
            }
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { sum });
        }
        Ok(RawVector {
            values: values.into_iter().map(|v| v.max(0.0)).collect(),
        })
    }

    pub(crate) fn from_computed(values: Vec<f64>) -> Self {
        RawVector {
            values: values.into_iter().map(|v| v.max(0.0)).collect(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.values
            .iter()
            .map(|v| {
                acc += v;
                acc
            })
            .collect()
    }
}

/// Disjoint nonempty blocks of 0-based indices covering `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    n: usize,
}

impl Partition {
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut seen = vec![false; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {b} is empty")));
            }
            for &i in block {
                if i >= n {
                    return Err(Error::InvalidPartition(format!(
                        "index {i} outside 0..{n}"
                    )));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidPartition(format!(
                        "index {i} appears twice"
                    )));
                }
            }
        }
        Ok(Partition { blocks, n })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Size of the index set the blocks cover.
    pub fn domain_len(&self) -> usize {
        self.n
    }
}
