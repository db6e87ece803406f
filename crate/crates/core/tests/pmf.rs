mod common;

use common::{pair, pmf, triple};
use majlat_core::{OrderedPmf, Partition};
use proptest::prelude::*;

fn partition_of(n: usize, cuts: &[usize]) -> Partition {
    // contiguous blocks split at the given positions
    let mut bounds: Vec<usize> = cuts.iter().map(|c| c % n).filter(|&c| c > 0).collect();
    bounds.sort_unstable();
    bounds.dedup();
    bounds.push(n);
    let mut start = 0;
    let blocks = bounds
        .into_iter()
        .map(|end| {
            let b: Vec<usize> = (start..end).collect();
            start = end;
            b
        })
        .collect();
    Partition::new(blocks).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn lorenz_is_concave(p in pmf(10)) {
        prop_assert!(p.prefix_sums().is_concave(0.0));
        prop_assert!(p.masses().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn majorization_preorder((p, q, r) in triple(6)) {
        prop_assert!(p.is_majorized_by(&p));
        if p.is_majorized_by(&q) && q.is_majorized_by(&r) {
            prop_assert!(p.is_majorized_by(&r));
        }
        if p.is_majorized_by(&q) && q.is_majorized_by(&p) {
            prop_assert!(p.approx_eq(&q, 1e-11));
        }
    }

    #[test]
    fn extremes(p in pmf(10)) {
        let n = p.len();
        prop_assert!(OrderedPmf::uniform(n).is_majorized_by(&p));
        prop_assert!(p.is_majorized_by(&OrderedPmf::deterministic(n)));
    }

    #[test]
    fn aggregation_moves_up(p in pmf(8), cuts in prop::collection::vec(0usize..8, 0..4)) {
        let parts = partition_of(p.len(), &cuts);
        let agg = p.aggregate(&parts).unwrap();
        prop_assert!(p.is_majorized_by(&agg));
    }

    #[test]
    fn padding_keeps_verdicts((p, q) in pair(6), extra in 1usize..4) {
        let verdict = p.is_majorized_by(&q);
        prop_assert_eq!(p.padded(p.len() + extra).is_majorized_by(&q), verdict);
        prop_assert_eq!(p.is_majorized_by(&q.padded(q.len() + extra)), verdict);
    }

    #[test]
    fn serde_round_trip(p in pmf(8)) {
        let text = serde_json::to_string(&p).unwrap();
        let back: OrderedPmf = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, p);
    }
}

#[test]
fn lorenz_interpolation() {
    let p = OrderedPmf::new(&[0.6, 0.2, 0.2]).unwrap();
    assert_eq!(p.lorenz_eval(0.0).unwrap(), 0.0);
    assert!((p.lorenz_eval(1.5).unwrap() - 0.7).abs() < 1e-15);
    assert!((p.lorenz_eval(3.0).unwrap() - 1.0).abs() < 1e-15);
    assert!(p.lorenz_eval(3.5).is_err());
}
