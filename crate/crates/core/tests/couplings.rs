mod common;

use common::{family, pair, pmf_of};
use majlat_core::couplings::{
    aggregate_by_extremum, breakpoint_tsallis, breakpoints, comonotone_coupling, comonotone_many,
    independent_coupling, interval_lengths, marginal, sorted_mass_vector, split_gain, Axis, Extremum,
};
use majlat_core::entropy::{tsallis, AlphaOrder};
use majlat_core::lattice::{concavify, join, meet};
use majlat_core::{OrderedPmf, CMP_TOL};
use proptest::prelude::*;

fn a(x: f64) -> AlphaOrder {
    AlphaOrder::new(x).unwrap()
}

const TSALLIS_GRID: [f64; 6] = [0.0, 0.2, 0.5, 1.0, 2.0, 5.0];

#[test]
fn sorted_vectors_of_small_examples() {
    let ind = sorted_mass_vector(&independent_coupling(&pmf_of(&[0.6, 0.4]), &pmf_of(&[0.75, 0.25])), None);
    assert!(ind.approx_eq(&pmf_of(&[0.45, 0.3, 0.15, 0.1]), 1e-15));
    let com = sorted_mass_vector(&comonotone_coupling(&pmf_of(&[0.5, 0.5]), &pmf_of(&[0.75, 0.25])), None);
    assert!(com.approx_eq(&pmf_of(&[0.5, 0.25, 0.25]), 1e-15));
    let q = pmf_of(&[0.45, 0.4, 0.15]);
    let one = pmf_of(&[1.0]);
    assert!(sorted_mass_vector(&comonotone_coupling(&one, &q), None).approx_eq(&q, 0.0));
    assert!(sorted_mass_vector(&independent_coupling(&one, &q), None).approx_eq(&q, 0.0));
}

#[test]
fn refinement_examples() {
    let r = comonotone_many(&[pmf_of(&[0.5, 0.5]), pmf_of(&[0.75, 0.25])]).unwrap();
    assert_eq!(r.lengths(), vec![0.5, 0.25, 0.25]);
    let h = pmf_of(&[0.5, 0.5]);
    let r = comonotone_many(&[h.clone(), h.clone(), h]).unwrap();
    assert_eq!(r.lengths(), vec![0.5, 0.5]);
    assert_eq!(r.intervals()[0].1, vec![0, 0, 0]);
    assert_eq!(r.intervals()[1].1, vec![1, 1, 1]);
    assert!(comonotone_many(&[]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn marginals_are_recovered((p, q) in pair(8)) {
        for c in [independent_coupling(&p, &q), comonotone_coupling(&p, &q)] {
            prop_assert!(marginal(&c, Axis::Row).approx_eq(&p, 1e-12));
            prop_assert!(marginal(&c, Axis::Col).approx_eq(&q, 1e-12));
        }
    }

    #[test]
    fn comonotone_is_a_sparse_staircase((p, q) in pair(8)) {
        let c = comonotone_coupling(&p, &q);
        prop_assert!(c.is_staircase());
        prop_assert!(c.cells().len() < p.len() + q.len());
        prop_assert!(c.cells().iter().all(|cell| cell.mass > 0.0));
    }

    #[test]
    fn extremum_aggregation_gives_meet_and_join((p, q) in pair(8)) {
        let c = comonotone_coupling(&p, &q);
        let by_max = aggregate_by_extremum(&c, Extremum::Max).unwrap();
        let w = meet(&p, &q);
        for (x, y) in by_max.values().iter().zip(w.masses()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
        let by_min = aggregate_by_extremum(&c, Extremum::Min).unwrap();
        prop_assert!(concavify(&by_min).approx_eq(&join(&p, &q), 1e-12));
    }

    #[test]
    fn independent_below_comonotone((p, q) in pair(8)) {
        let ind = sorted_mass_vector(&independent_coupling(&p, &q), None);
        let com = sorted_mass_vector(&comonotone_coupling(&p, &q), Some(ind.len()));
        prop_assert!(ind.is_majorized_by(&com));
        // top-k dominance, stated directly
        let (mut si, mut sc) = (0.0, 0.0);
        for k in 0..ind.len() {
            si += ind.masses()[k];
            sc += com.masses().get(k).copied().unwrap_or(0.0);
            prop_assert!(si <= sc + CMP_TOL, "k = {}", k + 1);
        }
    }

    #[test]
    fn independent_coupling_rejects_extremum((p, q) in pair(6)) {
        let c = independent_coupling(&p, &q);
        if !c.is_staircase() {
            prop_assert!(aggregate_by_extremum(&c, Extremum::Max).is_err());
        }
    }

    #[test]
    fn refinement_matches_pairwise_coupling((p, q) in pair(8)) {
        let r = comonotone_many(&[p.clone(), q.clone()]).unwrap();
        let via_cells = sorted_mass_vector(&comonotone_coupling(&p, &q), None);
        let via_intervals = sorted_mass_vector(&r, Some(via_cells.len()));
        prop_assert!(via_intervals.approx_eq(&via_cells, 1e-12));
    }

    #[test]
    fn refinement_aggregates_to_each_marginal(ps in family(6, 4)) {
        let r = comonotone_many(&ps).unwrap();
        let total: f64 = r.lengths().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        for (k, p) in ps.iter().enumerate() {
            let m = OrderedPmf::normalized(&r.marginal(k, p.len())).unwrap();
            prop_assert!(m.approx_eq(p, 1e-11));
        }
        for w in r.intervals().windows(2) {
            prop_assert!(w[0].1.iter().zip(&w[1].1).all(|(x, y)| x <= y));
        }
    }

    #[test]
    fn breakpoint_entropy_of_a_pmf(p in common::pmf(8)) {
        for &x in &TSALLIS_GRID {
            let f = breakpoint_tsallis(&breakpoints(&p), a(x)).unwrap();
            prop_assert!((f - tsallis(&p, a(x)).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn merged_breakpoints_are_the_coupling((p, q) in pair(8)) {
        let mut all = breakpoints(&p);
        all.extend(breakpoints(&q));
        let pi = sorted_mass_vector(&comonotone_coupling(&p, &q), None);
        let lengths = OrderedPmf::normalized(&interval_lengths(&all)).unwrap();
        prop_assert!(lengths.approx_eq(&pi, 1e-12));
    }

    #[test]
    fn split_gain_is_nonnegative_and_increasing(
        x in 1e-6f64..0.5, y in 1e-6f64..0.5, dx in 0.0f64..0.4, k in 0usize..6
    ) {
        let alpha = a(TSALLIS_GRID[k]);
        let g = split_gain(x, y, alpha).unwrap();
        prop_assert!(g >= -1e-15);
        prop_assert!(split_gain(x + dx, y, alpha).unwrap() >= g - 1e-12);
        prop_assert!(split_gain(x, y + dx, alpha).unwrap() >= g - 1e-12);
    }

    #[test]
    fn adding_breakpoints_has_diminishing_returns((p, q) in pair(8), k in 0usize..6) {
        // F(B_p ∪ B_q) - F(B_p) ≤ F(B_q) - F(∅), i.e. T(π_c) ≤ T(p) + T(q),
        // and aggregating π_c to the meet only lowers T.
        let alpha = a(TSALLIS_GRID[k]);
        let (bp, bq) = (breakpoints(&p), breakpoints(&q));
        let mut union = bp.clone();
        union.extend(bq.iter().copied());
        let f = |b: &[f64]| breakpoint_tsallis(b, alpha).unwrap();
        prop_assert!(f(&union) - f(&bp) <= f(&bq) - f(&[]) + 1e-12);
        let t_meet = tsallis(&meet(&p, &q), alpha).unwrap();
        prop_assert!(t_meet <= f(&union) + 1e-12);
    }
}
