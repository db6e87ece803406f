#![allow(dead_code)]

use majlat_core::OrderedPmf;
use proptest::prelude::*;

fn raw(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![8 => 1e-3f64..1.0, 1 => Just(0.0)], n)
}

fn to_pmf(v: Vec<f64>) -> Option<OrderedPmf> {
    OrderedPmf::normalized(&v).ok()
}

/// PMF with `1..=max_n` atoms, occasionally with zero masses.
pub fn pmf(max_n: usize) -> impl Strategy<Value = OrderedPmf> {
    (1..=max_n)
        .prop_flat_map(raw)
        .prop_filter_map("all-zero draw", to_pmf)
}

/// Two PMFs of a common length in `2..=max_n`.
pub fn pair(max_n: usize) -> impl Strategy<Value = (OrderedPmf, OrderedPmf)> {
    (2..=max_n)
        .prop_flat_map(|n| (raw(n), raw(n)))
        .prop_filter_map("all-zero draw", |(a, b)| Some((to_pmf(a)?, to_pmf(b)?)))
}

pub fn triple(max_n: usize) -> impl Strategy<Value = (OrderedPmf, OrderedPmf, OrderedPmf)> {
    (2..=max_n)
        .prop_flat_map(|n| (raw(n), raw(n), raw(n)))
        .prop_filter_map("all-zero draw", |(a, b, c)| {
            Some((to_pmf(a)?, to_pmf(b)?, to_pmf(c)?))
        })
}

/// Several PMFs of one length.
pub fn family(max_n: usize, max_m: usize) -> impl Strategy<Value = Vec<OrderedPmf>> {
    (2..=max_n, 1..=max_m)
        .prop_flat_map(|(n, m)| prop::collection::vec(raw(n), m))
        .prop_filter_map("all-zero draw", |vs| vs.into_iter().map(to_pmf).collect())
}

pub fn pmf_of(v: &[f64]) -> OrderedPmf {
    OrderedPmf::new(v).unwrap()
}
