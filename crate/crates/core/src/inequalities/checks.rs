use serde::Serialize;

use crate::couplings::{
    aggregate_by_extremum, comonotone_coupling, independent_coupling, sorted_mass_vector,
    Extremum,
};
use crate::entropy::{entropy, AlphaOrder, Family};
use crate::error::{Error, Result};
use crate::lattice::{concavify, meet_many, LatticePair};
use crate::pmf::{OrderedPmf, CMP_TOL};

/// Slack for entropy inequalities and equality detection.
pub const EQ_TOL: f64 = 1e-9;

/// Outcome of evaluating one inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`, or `-|Δ|` for modularity checks.
    pub gap: f64,
    pub holds: bool,
    pub equality: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<AlphaOrder>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(skip)]
    pub inputs: Vec<OrderedPmf>,
}

impl CheckResult {
    fn inequality(lhs: f64, rhs: f64, tol: f64) -> Self {
        let gap = rhs - lhs;
        CheckResult {
            lhs,
            rhs,
            gap,
            holds: gap >= -tol,
            equality: gap.abs() <= tol,
            alpha: None,
            family: None,
            inputs: Vec::new(),
        }
    }

    fn with_context(mut self, alpha: AlphaOrder, family: Family, inputs: &[&OrderedPmf]) -> Self {
        self.alpha = Some(alpha);
        self.family = Some(family);
        self.inputs = inputs.iter().map(|p| (*p).clone()).collect();
        self
    }
}

fn require(family: Family, alpha: AlphaOrder, context: &'static str) -> Result<()> {
    if family == Family::Tsallis && alpha == AlphaOrder::Infinity {
        return Err(Error::UnsupportedOrder {
            alpha: alpha.to_string(),
            context,
        });
    }
    Ok(())
}

/// `Δ_α(p, q) = F(p∧q) + F(p∨q) - F(p) - F(q)` for entropy family `F`.
pub fn delta_supermod(
    p: &OrderedPmf,
    q: &OrderedPmf,
    alpha: AlphaOrder,
    family: Family,
) -> Result<f64> {
    require(family, alpha, "delta_supermod")?;
    let pair = LatticePair::new(p, q);
    let f = |x: &OrderedPmf| entropy(family, x, alpha);
    Ok(f(&pair.meet)? + f(&pair.join)? - f(p)? - f(q)?)
}

/// `F(p∧q) ≤ F(p) + F(q)`.
pub fn check_subadditivity(
    p: &OrderedPmf,
    q: &OrderedPmf,
    alpha: AlphaOrder,
    family: Family,
) -> Result<CheckResult> {
    require(family, alpha, "check_subadditivity")?;
    let w = crate::lattice::meet(p, q);
    let f = |x: &OrderedPmf| entropy(family, x, alpha);
    Ok(CheckResult::inequality(f(&w)?, f(p)? + f(q)?, EQ_TOL).with_context(alpha, family, &[p, q]))
}

/// Structural equality condition for subadditivity: one side deterministic.
pub fn check_equality_condition_subadd(p: &OrderedPmf, q: &OrderedPmf) -> bool {
    p.is_deterministic() || q.is_deterministic()
}

/// `F(p) + F(q) ≤ 2 F(p∧q)`.
pub fn check_corollary1(
    p: &OrderedPmf,
    q: &OrderedPmf,
    alpha: AlphaOrder,
    family: Family,
) -> Result<CheckResult> {
    require(family, alpha, "check_corollary1")?;
    let w = crate::lattice::meet(p, q);
    let f = |x: &OrderedPmf| entropy(family, x, alpha);
    Ok(CheckResult::inequality(f(p)? + f(q)?, 2.0 * f(&w)?, EQ_TOL)
        .with_context(alpha, family, &[p, q]))
}

/// `F(⋀ p_i) ≤ Σ F(p_i)` and `Σ F(p_i) ≤ m F(⋀ p_i)`.
pub fn check_corollary2(
    ps: &[OrderedPmf],
    alpha: AlphaOrder,
    family: Family,
) -> Result<(CheckResult, CheckResult)> {
    require(family, alpha, "check_corollary2")?;
    let w = meet_many(ps)?;
    let hw = entropy(family, &w, alpha)?;
    let mut total = 0.0;
    for p in ps {
        total += entropy(family, p, alpha)?;
    }
    let refs: Vec<&OrderedPmf> = ps.iter().collect();
    let lower = CheckResult::inequality(hw, total, EQ_TOL).with_context(alpha, family, &refs);
    let upper = CheckResult::inequality(total, ps.len() as f64 * hw, EQ_TOL)
        .with_context(alpha, family, &refs);
    Ok((lower, upper))
}

/// `F(p) + F(q) ≤ F(p∧q) + F(p∨q)`.
pub fn check_supermodularity(
    p: &OrderedPmf,
    q: &OrderedPmf,
    alpha: AlphaOrder,
    family: Family,
) -> Result<CheckResult> {
    require(family, alpha, "check_supermodularity")?;
    let pair = LatticePair::new(p, q);
    let f = |x: &OrderedPmf| entropy(family, x, alpha);
    Ok(
        CheckResult::inequality(f(p)? + f(q)?, f(&pair.meet)? + f(&pair.join)?, EQ_TOL)
            .with_context(alpha, family, &[p, q]),
    )
}

/// True for the orders at which the family is modular on the lattice:
/// Rényi at 0 and ∞, Tsallis at 0.
pub fn is_modular_order(family: Family, alpha: AlphaOrder) -> bool {
    matches!(
        (family, alpha),
        (Family::Renyi, AlphaOrder::Zero | AlphaOrder::Infinity) | (Family::Tsallis, AlphaOrder::Zero)
    )
}

/// `F(p) + F(q) = F(p∧q) + F(p∨q)` at a modular order. The gap is `-|Δ|`.
pub fn check_modularity(
    p: &OrderedPmf,
    q: &OrderedPmf,
    alpha: AlphaOrder,
    family: Family,
) -> Result<CheckResult> {
    if !is_modular_order(family, alpha) {
        return Err(Error::UnsupportedOrder {
            alpha: alpha.to_string(),
            context: "check_modularity",
        });
    }
    let mut r = check_supermodularity(p, q, alpha, family)?;
    r.gap = -r.gap.abs();
    r.holds = r.gap >= -EQ_TOL;
    r.equality = r.holds;
    Ok(r)
}

/// Sorted independent coupling is majorized by the sorted comonotone one.
///
/// Reports the worst prefix: `lhs`/`rhs` are the top-k sums of the
/// independent and comonotone vectors at the `k` where the slack is smallest.
pub fn check_coupling_majorization(p: &OrderedPmf, q: &OrderedPmf) -> CheckResult {
    let ind = sorted_mass_vector(&independent_coupling(p, q), None);
    let com = sorted_mass_vector(&comonotone_coupling(p, q), Some(ind.len()));
    let a = ind.prefix_sums();
    let b = com.prefix_sums().padded(a.len());
    let (lhs, rhs) = a
        .breakpoints()
        .iter()
        .zip(&b)
        .map(|(x, y)| (*x, *y))
        .min_by(|l, r| (l.1 - l.0).total_cmp(&(r.1 - r.0)))
        .unwrap_or((1.0, 1.0));
    let mut r = CheckResult::inequality(lhs, rhs, CMP_TOL);
    r.inputs = vec![p.clone(), q.clone()];
    r
}

/// Aggregating the comonotone coupling along `max(i, j)` gives the meet and
/// concavifying its `min(i, j)` aggregation gives the join. The gap is minus
/// the largest coordinate error.
pub fn check_coupling_aggregation(p: &OrderedPmf, q: &OrderedPmf) -> CheckResult {
    let c = comonotone_coupling(p, q);
    let pair = LatticePair::new(p, q);
    let by_max = aggregate_by_extremum(&c, Extremum::Max).expect("comonotone coupling is a staircase");
    let by_min = aggregate_by_extremum(&c, Extremum::Min).expect("comonotone coupling is a staircase");
    let meet_err = by_max
        .values()
        .iter()
        .zip(pair.meet.masses())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let join_err = concavify(&by_min).max_abs_diff(&pair.join);
    let err = meet_err.max(join_err);
    let mut r = CheckResult::inequality(err, 0.0, CMP_TOL);
    r.inputs = vec![p.clone(), q.clone()];
    r
}
