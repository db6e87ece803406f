//! Entropy distance on the majorization lattice and Theil-type inequality
//! indices.

use serde::Serialize;

use crate::entropy::{renyi, shannon, AlphaOrder, LogBase};
use crate::error::{Error, Result};
use crate::inequalities::checks::{CheckResult, EQ_TOL};
use crate::inequalities::sampling::{sample_rng, PmfSampler};
use crate::inequalities::sweep::{run_samples, VerificationReport};
use crate::lattice::join;
use crate::pmf::{OrderedPmf, CMP_TOL};

/// A distance value with the order and base it was computed in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceValue {
    pub value: f64,
    pub alpha: AlphaOrder,
    #[serde(serialize_with = "base_str")]
    pub base: LogBase,
}

fn base_str<S: serde::Serializer>(b: &LogBase, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(b)
}

fn require_metric_order(alpha: AlphaOrder, context: &'static str) -> Result<()> {
    if alpha.value() < 1.0 {
        return Err(Error::UnsupportedOrder {
            alpha: alpha.to_string(),
            context,
        });
    }
    Ok(())
}

/// `d_α(x, y) = H_α(x) + H_α(y) - 2 H_α(x ∨ y)` in nats, for `α ≥ 1`.
///
/// At `α = ∞` this is only a pseudometric: it vanishes whenever the largest
/// masses agree.
pub fn entropy_distance(x: &OrderedPmf, y: &OrderedPmf, alpha: AlphaOrder) -> Result<DistanceValue> {
    entropy_distance_in(x, y, alpha, LogBase::E)
}

pub fn entropy_distance_in(
    x: &OrderedPmf,
    y: &OrderedPmf,
    alpha: AlphaOrder,
    base: LogBase,
) -> Result<DistanceValue> {
    require_metric_order(alpha, "entropy_distance (needs alpha >= 1)")?;
    let v = join(x, y);
    let nats = renyi(x, alpha) + renyi(y, alpha) - 2.0 * renyi(&v, alpha);
    Ok(DistanceValue {
        value: nats / base.nats_per_unit(),
        alpha,
        base,
    })
}

/// Theil index `ln n - H(x)`, with `n` the supplied length.
pub fn theil(x: &OrderedPmf) -> f64 {
    (x.len() as f64).ln() - shannon(x)
}

pub fn theil_in(x: &OrderedPmf, base: LogBase) -> f64 {
    theil(x) / base.nats_per_unit()
}

/// `ln n - H_α(x)` for `α ≥ 1`; equals `d_α(x, u_n)`.
pub fn renyi_theil(x: &OrderedPmf, alpha: AlphaOrder) -> Result<f64> {
    require_metric_order(alpha, "renyi_theil (needs alpha >= 1)")?;
    Ok((x.len() as f64).ln() - renyi(x, alpha))
}

pub fn renyi_theil_in(x: &OrderedPmf, alpha: AlphaOrder, base: LogBase) -> Result<f64> {
    Ok(renyi_theil(x, alpha)? / base.nats_per_unit())
}

fn outcome(holds: bool, gap: f64, alpha: AlphaOrder, inputs: &[&OrderedPmf]) -> CheckResult {
    CheckResult {
        lhs: 0.0,
        rhs: gap,
        gap,
        holds,
        equality: gap.abs() <= EQ_TOL,
        alpha: Some(alpha),
        family: None,
        inputs: inputs.iter().map(|p| (*p).clone()).collect(),
    }
}

/// Seeded check of the metric axioms of `d_α` on random triples in
/// dimension `n`. Every 50th triple is `x = y = z` and the one after has
/// `x = y`.
pub fn check_metric_axioms(
    samples: u64,
    n: usize,
    alpha: AlphaOrder,
    seed: u64,
) -> Result<VerificationReport> {
    check_metric_axioms_with(samples, n, alpha, seed, None)
}

pub fn check_metric_axioms_with(
    samples: u64,
    n: usize,
    alpha: AlphaOrder,
    seed: u64,
    threads: Option<usize>,
) -> Result<VerificationReport> {
    require_metric_order(alpha, "check_metric_axioms (needs alpha >= 1)")?;
    if n == 0 {
        return Err(Error::InvalidConfig("dimension must be positive".into()));
    }
    let sampler = PmfSampler::default();
    let d = |a: &OrderedPmf, b: &OrderedPmf| entropy_distance(a, b, alpha).expect("order checked").value;
    Ok(run_samples(
        samples,
        seed,
        threads,
        || VerificationReport::empty(seed),
        |index, rep| {
            let mut rng = sample_rng(seed, index);
            let x = sampler.sample(&mut rng, n);
            let (y, z) = match index % 50 {
                0 => (x.clone(), x.clone()),
                1 => (x.clone(), sampler.sample(&mut rng, n)),
                _ => (sampler.sample(&mut rng, n), sampler.sample(&mut rng, n)),
            };
            let (xy, yx) = (d(&x, &y), d(&y, &x));
            let (xz, yz) = (d(&x, &z), d(&y, &z));

            let neg = [xy, xz, yz].into_iter().fold(f64::INFINITY, f64::min);
            rep.record(index, 0, "nonnegativity", &outcome(neg >= -EQ_TOL, neg, alpha, &[&x, &y, &z]));

            let same = x.max_abs_diff(&y) <= CMP_TOL;
            let indiscernible = xy.abs() > f64::EPSILON || same;
            let gap = if indiscernible { 0.0 } else { -x.max_abs_diff(&y) };
            rep.record(index, 1, "identity", &outcome(indiscernible, gap, alpha, &[&x, &y]));

            let sym = xy == yx;
            rep.record(index, 2, "symmetry", &outcome(sym, -(xy - yx).abs(), alpha, &[&x, &y]));

            let tri = xy + yz - xz;
            rep.record(index, 3, "triangle", &outcome(tri >= -EQ_TOL, tri, alpha, &[&x, &y, &z]));
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequalities::fixtures::positive_pair;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rejects_orders_below_one() {
        let (p, q) = positive_pair();
        let half = AlphaOrder::new(0.5).unwrap();
        assert!(matches!(entropy_distance(&p, &q, half), Err(Error::UnsupportedOrder { .. })));
        assert!(renyi_theil(&p, AlphaOrder::Zero).is_err());
        assert!(check_metric_axioms(10, 3, half, 1).is_err());
    }

    #[test]
    fn distance_on_reference_pair() {
        let (p, q) = positive_pair();
        let d = entropy_distance(&p, &q, AlphaOrder::One).unwrap();
        assert_abs_diff_eq!(d.value, 0.0854093685, epsilon = 1e-9);
        assert_eq!(d.value, entropy_distance(&q, &p, AlphaOrder::One).unwrap().value);
        assert_eq!(entropy_distance(&p, &p, AlphaOrder::Infinity).unwrap().value, 0.0);
        let bits = entropy_distance_in(&p, &q, AlphaOrder::One, LogBase::Two).unwrap();
        assert_abs_diff_eq!(bits.value, d.value / std::f64::consts::LN_2, epsilon = 1e-15);
    }

    #[test]
    fn theil_values() {
        let (p, _) = positive_pair();
        assert_abs_diff_eq!(theil(&p), 0.1483417494, epsilon = 1e-9);
        assert_abs_diff_eq!(theil(&OrderedPmf::uniform(7)), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(theil(&OrderedPmf::deterministic(5)), 5f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(
            renyi_theil(&p, AlphaOrder::Infinity).unwrap(),
            3f64.ln() + 0.6f64.ln(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(renyi_theil(&p, AlphaOrder::One).unwrap(), theil(&p), epsilon = 1e-15);
    }

    #[test]
    fn distance_to_uniform_is_renyi_theil() {
        let (p, _) = positive_pair();
        let u = OrderedPmf::uniform(3);
        for a in [1.0, 2.0, 5.0, f64::INFINITY] {
            let alpha = AlphaOrder::new(a).unwrap();
            let d = entropy_distance(&p, &u, alpha).unwrap().value;
            assert_abs_diff_eq!(d, renyi_theil(&p, alpha).unwrap(), epsilon = EQ_TOL);
        }
    }

    #[test]
    fn small_metric_sweep_is_clean() {
        for a in [1.0, 2.0] {
            let rep = check_metric_axioms(500, 4, AlphaOrder::new(a).unwrap(), 3).unwrap();
            assert!(rep.is_clean(), "{:?}", rep.violations.first());
            assert_eq!(rep.samples_run, 500);
            assert_eq!(rep.checks_run, 2000);
        }
    }
}
