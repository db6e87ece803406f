//! Reference pairs with known supermodularity gaps.
//!
//! The first pair has a positive Rényi gap for every order in `(0, 1)`, the
//! second a negative one, so together they witness that Rényi entropy of
//! order `α ∈ (0, 1)` is neither supermodular nor submodular. Gaps are in
//! nats and rounded to eight decimals.

use crate::pmf::OrderedPmf;

pub const POSITIVE_P: [f64; 3] = [0.6, 0.2, 0.2];
pub const POSITIVE_Q: [f64; 3] = [0.45, 0.4, 0.15];
pub const POSITIVE_MEET: [f64; 3] = [0.45, 0.35, 0.2];
pub const POSITIVE_JOIN: [f64; 3] = [0.6, 0.25, 0.15];

pub const NEGATIVE_P: [f64; 4] = [0.398886918, 0.370328848, 0.228811150, 0.001973084];
pub const NEGATIVE_Q: [f64; 4] = [0.539996140, 0.229554617, 0.116684354, 0.113764889];
pub const NEGATIVE_MEET: [f64; 4] = [0.398886918, 0.370328848, 0.117019345, 0.113764889];
pub const NEGATIVE_JOIN: [f64; 4] = [0.539996140, 0.229554617, 0.228476159, 0.001973084];

/// Orders of the gap tables; `f64::INFINITY` stands for `α = ∞`.
pub const TABLE_ALPHAS: [f64; 8] = [0.0, 0.2, 0.5, 0.7, 0.9, 1.0, 2.0, f64::INFINITY];

pub const POSITIVE_DELTAS: [f64; 8] = [
    0.0, 0.00580417, 0.01387056, 0.01882329, 0.02343356, 0.02560746, 0.04204643, 0.0,
];

pub const NEGATIVE_DELTAS: [f64; 8] = [
    0.0, -0.00090983, -0.00234206, -0.00198286, -0.00067566, 0.00022487, 0.00977669, 0.0,
];

/// Tsallis sums on the first pair, rounded to three decimals:
/// `(α, T(p∧q) + T(p∨q), T(p) + T(q))`.
pub const TSALLIS_SUMS: [(f64, f64, f64); 2] = [(2.0, 1.190, 1.175), (0.5, 2.743, 2.719)];

/// Pair with `Δ_α > 0` for `α ∈ (0, 1)`.
pub fn positive_pair() -> (OrderedPmf, OrderedPmf) {
    (
        OrderedPmf::new(&POSITIVE_P).expect("fixture is a PMF"),
        OrderedPmf::new(&POSITIVE_Q).expect("fixture is a PMF"),
    )
}

/// Pair with `Δ_α < 0` for `α ∈ (0, 1)`.
pub fn negative_pair() -> (OrderedPmf, OrderedPmf) {
    (
        OrderedPmf::new(&NEGATIVE_P).expect("fixture is a PMF"),
        OrderedPmf::new(&NEGATIVE_Q).expect("fixture is a PMF"),
    )
}

/// Both pairs, in the order they are injected into sweeps.
pub fn pairs() -> [(OrderedPmf, OrderedPmf); 2] {
    [positive_pair(), negative_pair()]
}
