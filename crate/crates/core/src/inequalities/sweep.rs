//! Seeded property sweeps and counterexample search.
//!
//! Samples are independent: sample `i` draws from its own stream of the sweep
//! seed, and partial reports merge associatively and commutatively, so the
//! report is identical for any worker count (wall time aside).

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::{
    check_corollary1, check_corollary2, check_coupling_aggregation, check_coupling_majorization,
    check_modularity, check_subadditivity, check_supermodularity, delta_supermod,
    is_modular_order, CheckResult, EQ_TOL,
};
use super::fixtures;
use super::sampling::{sample_rng, PmfSampler};
use crate::entropy::{AlphaOrder, Family};
use crate::error::{Error, Result};
use crate::pmf::OrderedPmf;

/// Violations kept verbatim in a report; the count is always exact.
pub const MAX_STORED_VIOLATIONS: usize = 1000;

/// Environment variable capping sweep parallelism.
pub const THREADS_ENV: &str = "MAJLAT_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Predicate {
    /// `F(p∧q) ≤ F(p) + F(q)`
    Subadd,
    /// `F(p) + F(q) ≤ F(p∧q) + F(p∨q)`
    Supermod,
    /// Equality in the supermodular inequality, at modular orders only.
    Modular,
    /// `F(p) + F(q) ≤ 2F(p∧q)`
    Corollary1,
    /// Both m-ary bounds around `Σ F(p_i)`.
    Corollary2,
    /// Comonotone aggregation reproduces meet and join.
    Lemma1,
    /// Sorted independent coupling ⪯ sorted comonotone coupling.
    Lemma2,
}

impl Predicate {
    fn uses_orders(self) -> bool {
        !matches!(self, Predicate::Lemma1 | Predicate::Lemma2)
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Predicate::Subadd => "subadd",
            Predicate::Supermod => "supermod",
            Predicate::Modular => "modular",
            Predicate::Corollary1 => "corollary1",
            Predicate::Corollary2 => "corollary2",
            Predicate::Lemma1 => "lemma1",
            Predicate::Lemma2 => "lemma2",
        })
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "subadd" => Predicate::Subadd,
            "supermod" => Predicate::Supermod,
            "modular" => Predicate::Modular,
            "corollary1" => Predicate::Corollary1,
            "corollary2" => Predicate::Corollary2,
            "lemma1" => Predicate::Lemma1,
            "lemma2" => Predicate::Lemma2,
            _ => return Err(Error::Parse(format!("unknown predicate {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Smallest PMF length drawn.
    pub n_min: usize,
    /// Largest PMF length drawn; each sample picks uniformly in between.
    pub n_max: usize,
    pub alphas: Vec<AlphaOrder>,
    pub families: Vec<Family>,
    pub predicates: Vec<Predicate>,
    pub samples: u64,
    pub seed: u64,
    /// Number of PMFs per sample for `corollary2`.
    pub m: usize,
    pub boundary_fraction: f64,
    /// Replace samples 0 and 1 with the reference pairs.
    pub inject_fixtures: bool,
    /// Worker cap; `None` reads `MAJLAT_THREADS`, then uses all cores.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl SweepConfig {
    pub fn new(n: usize) -> Self {
        SweepConfig {
            n_min: n,
            n_max: n,
            alphas: vec![AlphaOrder::One],
            families: vec![Family::Renyi],
            predicates: vec![Predicate::Subadd],
            samples: 10_000,
            seed: 0,
            m: 3,
            boundary_fraction: 0.1,
            inject_fixtures: true,
            threads: None,
        }
    }

    pub fn dims(mut self, n_min: usize, n_max: usize) -> Self {
        self.n_min = n_min;
        self.n_max = n_max;
        self
    }

    pub fn alphas(mut self, alphas: &[f64]) -> Self {
        self.alphas = alphas
            .iter()
            .map(|&a| AlphaOrder::new(a).expect("valid order"))
            .collect();
        self
    }

    pub fn families(mut self, families: &[Family]) -> Self {
        self.families = families.to_vec();
        self
    }

    pub fn predicates(mut self, predicates: &[Predicate]) -> Self {
        self.predicates = predicates.to_vec();
        self
    }

    pub fn samples(mut self, samples: u64) -> Self {
        self.samples = samples;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn m(mut self, m: usize) -> Self {
        self.m = m;
        self
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < 1 {
            return Err(Error::InvalidConfig("samples must be at least 1".into()));
        }
        if self.n_min < 2 || self.n_max < self.n_min {
            return Err(Error::InvalidConfig(format!(
                "dimension range {}..={} must satisfy 2 <= n_min <= n_max",
                self.n_min, self.n_max
            )));
        }
        if self.m < 1 {
            return Err(Error::InvalidConfig("m must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.boundary_fraction) {
            return Err(Error::InvalidConfig("boundary_fraction must lie in [0, 1]".into()));
        }
        Ok(())
    }

    fn grid(&self) -> Vec<(Family, AlphaOrder)> {
        self.families
            .iter()
            .flat_map(|&f| self.alphas.iter().map(move |&a| (f, a)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub sample: u64,
    /// Position of the failing check within its sample.
    pub check: u32,
    pub predicate: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<AlphaOrder>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub others: Vec<Vec<f64>>,
    pub gap: f64,
}

impl Violation {
    fn key(&self) -> (u64, u32) {
        (self.sample, self.check)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub sample: u64,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub delta: f64,
}

/// Signs of `Δ_α` seen for one (family, order) during a search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignWitnesses {
    pub family: Family,
    pub alpha: AlphaOrder,
    pub positive_count: u64,
    pub negative_count: u64,
    pub zero_count: u64,
    /// Lowest-index sample with `Δ > EQ_TOL`.
    pub first_positive: Option<Witness>,
    /// Lowest-index sample with `Δ < -EQ_TOL`.
    pub first_negative: Option<Witness>,
    pub most_positive: Option<Witness>,
    pub most_negative: Option<Witness>,
}

impl SignWitnesses {
    fn new(family: Family, alpha: AlphaOrder) -> Self {
        SignWitnesses {
            family,
            alpha,
            positive_count: 0,
            negative_count: 0,
            zero_count: 0,
            first_positive: None,
            first_negative: None,
            most_positive: None,
            most_negative: None,
        }
    }

    fn record(&mut self, w: Witness) {
        if w.delta > EQ_TOL {
            self.positive_count += 1;
            keep(&mut self.first_positive, &w, |a, b| a.sample < b.sample);
            keep(&mut self.most_positive, &w, |a, b| {
                a.delta > b.delta || (a.delta == b.delta && a.sample < b.sample)
            });
        } else if w.delta < -EQ_TOL {
            self.negative_count += 1;
            keep(&mut self.first_negative, &w, |a, b| a.sample < b.sample);
            keep(&mut self.most_negative, &w, |a, b| {
                a.delta < b.delta || (a.delta == b.delta && a.sample < b.sample)
            });
        } else {
            self.zero_count += 1;
        }
    }

    fn merge(&mut self, other: SignWitnesses) {
        self.positive_count += other.positive_count;
        self.negative_count += other.negative_count;
        self.zero_count += other.zero_count;
        let by_sample = |a: &Witness, b: &Witness| a.sample < b.sample;
        if let Some(w) = other.first_positive {
            keep(&mut self.first_positive, &w, by_sample);
        }
        if let Some(w) = other.first_negative {
            keep(&mut self.first_negative, &w, by_sample);
        }
        if let Some(w) = other.most_positive {
            keep(&mut self.most_positive, &w, |a, b| {
                a.delta > b.delta || (a.delta == b.delta && a.sample < b.sample)
            });
        }
        if let Some(w) = other.most_negative {
            keep(&mut self.most_negative, &w, |a, b| {
                a.delta < b.delta || (a.delta == b.delta && a.sample < b.sample)
            });
        }
    }

    pub fn has_both_signs(&self) -> bool {
        self.positive_count > 0 && self.negative_count > 0
    }
}

fn keep<F: Fn(&Witness, &Witness) -> bool>(slot: &mut Option<Witness>, w: &Witness, better: F) {
    match slot {
        Some(cur) if !better(w, cur) => {}
        _ => *slot = Some(w.clone()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<SweepConfig>,
    pub samples_run: u64,
    pub checks_run: u64,
    /// Family/order combinations not defined for a predicate.
    pub checks_skipped: u64,
    pub violation_count: u64,
    /// The first [`MAX_STORED_VIOLATIONS`] violations by sample index.
    pub violations: Vec<Violation>,
    /// Smallest gap seen over all checks; `None` when nothing ran.
    pub worst_gap: Option<f64>,
    pub seed: u64,
    #[serde(rename = "wall_time_secs", serialize_with = "as_secs")]
    pub wall_time: Duration,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<SignWitnesses>,
}

fn as_secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl VerificationReport {
    pub fn empty(seed: u64) -> Self {
        VerificationReport {
            config: None,
            samples_run: 0,
            checks_run: 0,
            checks_skipped: 0,
            violation_count: 0,
            violations: Vec::new(),
            worst_gap: None,
            seed,
            wall_time: Duration::ZERO,
            witnesses: Vec::new(),
        }
    }

    pub fn is_clean(&self) -> bool {
        self.violation_count == 0
    }

    /// Records one check outcome; a failed check becomes a violation.
    pub fn record(&mut self, sample: u64, check: u32, predicate: &str, r: &CheckResult) {
        self.checks_run += 1;
        self.worst_gap = Some(match self.worst_gap {
            Some(g) => g.min(r.gap),
            None => r.gap,
        });
        if !r.holds {
            let mut inputs = r.inputs.iter().map(|p| p.masses().to_vec());
            self.push_violation(Violation {
                sample,
                check,
                predicate: predicate.to_string(),
                family: r.family,
                alpha: r.alpha,
                p: inputs.next().unwrap_or_default(),
                q: inputs.next().unwrap_or_default(),
                others: inputs.collect(),
                gap: r.gap,
            });
        }
    }

    pub fn push_violation(&mut self, v: Violation) {
        self.violation_count += 1;
        self.violations.push(v);
        if self.violations.len() > 2 * MAX_STORED_VIOLATIONS {
            self.trim();
        }
    }

    fn trim(&mut self) {
        self.violations.sort_by_key(Violation::key);
        self.violations.truncate(MAX_STORED_VIOLATIONS);
    }

    /// Associative, commutative merge of two partial reports over disjoint
    /// sample sets.
    pub fn merge(mut self, other: VerificationReport) -> Self {
        self.samples_run += other.samples_run;
        self.checks_run += other.checks_run;
        self.checks_skipped += other.checks_skipped;
        self.violation_count += other.violation_count;
        self.violations.extend(other.violations);
        self.trim();
        self.worst_gap = match (self.worst_gap, other.worst_gap) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        if self.witnesses.is_empty() {
            self.witnesses = other.witnesses;
        } else {
            for (mine, theirs) in self.witnesses.iter_mut().zip(other.witnesses) {
                mine.merge(theirs);
            }
        }
        self
    }
}

pub(crate) fn resolve_threads(requested: Option<usize>) -> usize {
    requested
        .or_else(|| {
            std::env::var(THREADS_ENV)
                .ok()
                .and_then(|v| v.trim().parse().ok())
        })
        .filter(|&t| t > 0)
        .unwrap_or(0)
}

/// Runs `body` for every sample index in parallel and merges the partials.
pub(crate) fn run_samples<F>(
    samples: u64,
    seed: u64,
    threads: Option<usize>,
    init: impl Fn() -> VerificationReport + Sync + Send,
    body: F,
) -> VerificationReport
where
    F: Fn(u64, &mut VerificationReport) + Sync + Send,
{
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(resolve_threads(threads))
        .build()
        .expect("thread pool");
    let mut report = pool.install(|| {
        (0..samples)
            .into_par_iter()
            .fold(&init, |mut acc, i| {
                body(i, &mut acc);
                acc.samples_run += 1;
                acc
            })
            .reduce(&init, VerificationReport::merge)
    });
    report.seed = seed;
    report.wall_time = start.elapsed();
    report
}

fn draw_dim<R: Rng>(cfg: &SweepConfig, rng: &mut R) -> usize {
    if cfg.n_min == cfg.n_max {
        cfg.n_min
    } else {
        rng.gen_range(cfg.n_min..=cfg.n_max)
    }
}

/// Inputs for sample `index`: a pair, extended to `m` PMFs for the m-ary
/// predicate. Samples 0 and 1 are the reference pairs when injection is on.
fn draw_inputs(cfg: &SweepConfig, index: u64, count: usize) -> Vec<OrderedPmf> {
    let mut rng = sample_rng(cfg.seed, index);
    let sampler = PmfSampler {
        boundary_fraction: cfg.boundary_fraction,
    };
    let n = draw_dim(cfg, &mut rng);
    let mut out: Vec<OrderedPmf> = Vec::with_capacity(count);
    if cfg.inject_fixtures && index < 2 {
        let (p, q) = fixtures::pairs()[index as usize].clone();
        out.push(p);
        out.push(q);
        out.truncate(count);
    }
    while out.len() < count {
        out.push(sampler.sample(&mut rng, n));
    }
    out
}

fn sweep_sample(cfg: &SweepConfig, grid: &[(Family, AlphaOrder)], index: u64, rep: &mut VerificationReport) {
    let pair = draw_inputs(cfg, index, 2);
    let (p, q) = (&pair[0], &pair[1]);
    let mut check = 0u32;
    for &pred in &cfg.predicates {
        let name = pred.to_string();
        if !pred.uses_orders() {
            let r = match pred {
                Predicate::Lemma1 => check_coupling_aggregation(p, q),
                _ => check_coupling_majorization(p, q),
            };
            rep.record(index, check, &name, &r);
            check += 1;
            continue;
        }
        let many = if pred == Predicate::Corollary2 {
            Some(draw_inputs(cfg, index, cfg.m))
        } else {
            None
        };
        for &(family, alpha) in grid {
            let outcome = match pred {
                Predicate::Subadd => check_subadditivity(p, q, alpha, family).map(|r| vec![r]),
                Predicate::Supermod => check_supermodularity(p, q, alpha, family).map(|r| vec![r]),
                Predicate::Modular if is_modular_order(family, alpha) => {
                    check_modularity(p, q, alpha, family).map(|r| vec![r])
                }
                Predicate::Modular => Ok(Vec::new()),
                Predicate::Corollary1 => check_corollary1(p, q, alpha, family).map(|r| vec![r]),
                Predicate::Corollary2 => {
                    check_corollary2(many.as_deref().unwrap_or_default(), alpha, family)
                        .map(|(lo, hi)| vec![lo, hi])
                }
                Predicate::Lemma1 | Predicate::Lemma2 => unreachable!(),
            };
            match outcome {
                Ok(results) if !results.is_empty() => {
                    for r in results {
                        rep.record(index, check, &name, &r);
                        check += 1;
                    }
                }
                _ => {
                    rep.checks_skipped += 1;
                    check += 1;
                }
            }
        }
    }
}

/// Drives every configured predicate over `samples` seeded inputs.
pub fn sweep_verify(cfg: &SweepConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let grid = cfg.grid();
    let mut report = run_samples(
        cfg.samples,
        cfg.seed,
        cfg.threads,
        || VerificationReport::empty(cfg.seed),
        |i, rep| sweep_sample(cfg, &grid, i, rep),
    );
    report.config = Some(cfg.clone());
    Ok(report)
}

/// Collects positive and negative `Δ_α` witnesses for every configured
/// family and order. Orders a family does not define are skipped.
pub fn search_counterexamples(cfg: &SweepConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let grid = cfg.grid();
    let init = || {
        let mut r = VerificationReport::empty(cfg.seed);
        r.witnesses = grid.iter().map(|&(f, a)| SignWitnesses::new(f, a)).collect();
        r
    };
    let mut report = run_samples(cfg.samples, cfg.seed, cfg.threads, init, |i, rep| {
        let pair = draw_inputs(cfg, i, 2);
        for (slot, &(family, alpha)) in grid.iter().enumerate() {
            match delta_supermod(&pair[0], &pair[1], alpha, family) {
                Ok(delta) => {
                    rep.checks_run += 1;
                    rep.worst_gap = Some(rep.worst_gap.map_or(delta, |g| g.min(delta)));
                    rep.witnesses[slot].record(Witness {
                        sample: i,
                        p: pair[0].masses().to_vec(),
                        q: pair[1].masses().to_vec(),
                        delta,
                    });
                }
                Err(_) => rep.checks_skipped += 1,
            }
        }
    });
    report.config = Some(cfg.clone());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predicate_parsing() {
        for p in ["subadd", "supermod", "modular", "corollary1", "corollary2", "lemma1", "lemma2"] {
            assert_eq!(p.parse::<Predicate>().unwrap().to_string(), p);
        }
        assert!("bogus".parse::<Predicate>().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SweepConfig::new(1).validate().is_err());
        assert!(SweepConfig::new(3).samples(0).validate().is_err());
        assert!(SweepConfig::new(3).dims(4, 3).validate().is_err());
        assert!(SweepConfig::new(3).validate().is_ok());
    }

    #[test]
    fn report_independent_of_thread_count() {
        let base = SweepConfig::new(5)
            .dims(2, 6)
            .alphas(&[0.0, 0.5, 1.0, 2.0, f64::INFINITY])
            .families(&[Family::Renyi, Family::Tsallis])
            .predicates(&[Predicate::Subadd, Predicate::Supermod, Predicate::Lemma2])
            .samples(400)
            .seed(11);
        let one = sweep_verify(&base.clone().threads(1)).unwrap();
        let four = sweep_verify(&base.threads(4)).unwrap();
        assert_eq!(one.checks_run, four.checks_run);
        assert_eq!(one.checks_skipped, four.checks_skipped);
        assert_eq!(one.worst_gap, four.worst_gap);
        assert_eq!(one.violations, four.violations);
        // Tsallis at infinity is skipped for both predicates on every sample
        assert_eq!(one.checks_skipped, 2 * 400);
    }

    #[test]
    fn supermod_sweep_finds_violations_below_one() {
        let cfg = SweepConfig::new(4)
            .alphas(&[0.5])
            .predicates(&[Predicate::Supermod])
            .samples(50)
            .seed(1)
            .threads(2);
        let rep = sweep_verify(&cfg).unwrap();
        // the injected negative pair at sample 1 is a violation
        assert!(rep.violations.iter().any(|v| v.sample == 1));
        assert!(rep.worst_gap.unwrap() < -EQ_TOL);
    }

    #[test]
    fn search_uses_injected_fixtures() {
        let cfg = SweepConfig::new(4)
            .alphas(&[0.5])
            .samples(10)
            .seed(42)
            .threads(1);
        let rep = search_counterexamples(&cfg).unwrap();
        let w = &rep.witnesses[0];
        assert!(w.has_both_signs());
        assert_eq!(w.first_positive.as_ref().unwrap().sample, 0);
        assert_eq!(w.first_negative.as_ref().unwrap().sample, 1);
        assert_eq!(w.first_negative.as_ref().unwrap().p, fixtures::NEGATIVE_P.to_vec());
    }

    #[test]
    fn merge_caps_stored_violations() {
        let mut a = VerificationReport::empty(0);
        for i in 0..(3 * MAX_STORED_VIOLATIONS as u64) {
            a.push_violation(Violation {
                sample: 3 * MAX_STORED_VIOLATIONS as u64 - i,
                check: 0,
                predicate: "x".into(),
                family: None,
                alpha: None,
                p: vec![],
                q: vec![],
                others: vec![],
                gap: -1.0,
            });
        }
        let merged = a.merge(VerificationReport::empty(0));
        assert_eq!(merged.violation_count, 3 * MAX_STORED_VIOLATIONS as u64);
        assert_eq!(merged.violations.len(), MAX_STORED_VIOLATIONS);
        assert_eq!(merged.violations[0].sample, 1);
    }
}
