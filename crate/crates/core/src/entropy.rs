//! Rényi and Tsallis entropies of every order `α ∈ [0, ∞]`.
//!
//! Orders 0, 1 and ∞ are dispatched to their closed forms. Finite orders
//! within [`ONE_ROUTING_TOL`] of 1 use the Shannon branch, since the generic
//! formula divides by `1 - α`. Zero masses contribute nothing (`0^α = 0`,
//! `0 ln 0 = 0`). Logarithms are natural unless a [`LogBase`] is given.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::couplings::{independent_coupling, sorted_mass_vector};
use crate::error::{Error, Result};
use crate::pmf::{OrderedPmf, SUPP_TOL};

/// Finite orders this close to 1 are evaluated as Shannon entropy.
pub const ONE_ROUTING_TOL: f64 = 1e-8;

/// Entropy order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaOrder {
    Zero,
    One,
    Infinity,
    /// Positive, finite and different from 1.
    Finite(f64),
}

impl AlphaOrder {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 0.0 {
            return Err(Error::Parse(format!("order must be a nonnegative real, got {value}")));
        }
        Ok(if value == 0.0 {
            AlphaOrder::Zero
        } else if value == 1.0 {
            AlphaOrder::One
        } else if value.is_infinite() {
            AlphaOrder::Infinity
        } else {
            AlphaOrder::Finite(value)
        })
    }

    pub fn value(self) -> f64 {
        match self {
            AlphaOrder::Zero => 0.0,
            AlphaOrder::One => 1.0,
            AlphaOrder::Infinity => f64::INFINITY,
            AlphaOrder::Finite(a) => a,
        }
    }

    fn near_one(self) -> bool {
        match self {
            AlphaOrder::One => true,
            AlphaOrder::Finite(a) => (a - 1.0).abs() < ONE_ROUTING_TOL,
            _ => false,
        }
    }

    /// Parses a comma-separated list such as `0,0.5,1,2,inf`.
    pub fn parse_list(s: &str) -> Result<Vec<Self>> {
        s.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl fmt::Display for AlphaOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaOrder::Infinity => write!(f, "inf"),
            other => write!(f, "{}", other.value()),
        }
    }
}

impl FromStr for AlphaOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(AlphaOrder::Infinity),
            t => {
                let v: f64 = t
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad order token {s:?}")))?;
                if !v.is_finite() {
                    return Err(Error::Parse(format!("bad order token {s:?}")));
                }
                AlphaOrder::new(v)
            }
        }
    }
}

impl Serialize for AlphaOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AlphaOrder::Infinity => s.serialize_str("inf"),
            other => s.serialize_f64(other.value()),
        }
    }
}

impl<'de> Deserialize<'de> for AlphaOrder {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => AlphaOrder::new(v),
            Repr::Str(s) => s.parse(),
        }
        .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Renyi,
    Tsallis,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Renyi => "renyi",
            Family::Tsallis => "tsallis",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "renyi" | "rényi" => Ok(Family::Renyi),
            "tsallis" => Ok(Family::Tsallis),
            _ => Err(Error::Parse(format!("unknown entropy family {s:?}"))),
        }
    }
}

/// Logarithm base for Rényi-type quantities. Tsallis entropy is base-free.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum LogBase {
    #[default]
    E,
    Two,
    Custom(f64),
}

impl LogBase {
    /// Divisor converting nats to this base.
    pub fn nats_per_unit(self) -> f64 {
        match self {
            LogBase::E => 1.0,
            LogBase::Two => std::f64::consts::LN_2,
            LogBase::Custom(b) => b.ln(),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogBase::E => write!(f, "e"),
            LogBase::Two => write!(f, "2"),
            LogBase::Custom(b) => write!(f, "{b}"),
        }
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "e" | "nat" | "nats" => Ok(LogBase::E),
            "2" | "bit" | "bits" => Ok(LogBase::Two),
            t => match t.parse::<f64>() {
                Ok(b) if b > 0.0 && b != 1.0 && b.is_finite() => Ok(LogBase::Custom(b)),
                _ => Err(Error::Parse(format!("bad logarithm base {s:?}"))),
            },
        }
    }
}

fn support(p: &OrderedPmf) -> impl Iterator<Item = f64> + '_ {
    p.masses().iter().copied().filter(|&m| m > SUPP_TOL)
}

/// `S_α(p) = Σ p_i^α`; at `α = 0` this is the support size.
pub fn power_sum(p: &OrderedPmf, alpha: AlphaOrder) -> Result<f64> {
    match alpha {
        AlphaOrder::Zero => Ok(p.support_size() as f64),
        AlphaOrder::Finite(a) => Ok(support(p).map(|m| m.powf(a)).sum()),
        AlphaOrder::One | AlphaOrder::Infinity => Err(Error::UnsupportedOrder {
            alpha: alpha.to_string(),
            context: "power_sum",
        }),
    }
}

/// `ln S_α(p)` evaluated as `α ln p_1 + ln Σ (p_i/p_1)^α` to stay finite for
/// large orders.
fn log_power_sum(p: &OrderedPmf, a: f64) -> f64 {
    let top = p.max_mass();
    let scaled: f64 = support(p).map(|m| (m / top).powf(a)).sum();
    a * top.ln() + scaled.ln()
}

/// Shannon entropy in nats.
pub fn shannon(p: &OrderedPmf) -> f64 {
    -support(p).map(|m| m * m.ln()).sum::<f64>()
}

/// Rényi entropy in nats.
pub fn renyi(p: &OrderedPmf, alpha: AlphaOrder) -> f64 {
    if alpha.near_one() {
        return shannon(p);
    }
    match alpha {
        AlphaOrder::Zero => (p.support_size() as f64).ln(),
        AlphaOrder::Infinity => -p.max_mass().ln(),
        AlphaOrder::Finite(a) => log_power_sum(p, a) / (1.0 - a),
        AlphaOrder::One => unreachable!(),
    }
}

/// Rényi entropy in the given logarithm base.
pub fn renyi_in(p: &OrderedPmf, alpha: AlphaOrder, base: LogBase) -> f64 {
    renyi(p, alpha) / base.nats_per_unit()
}

/// Tsallis entropy. Undefined at `α = ∞`.
pub fn tsallis(p: &OrderedPmf, alpha: AlphaOrder) -> Result<f64> {
    if alpha.near_one() {
        return Ok(shannon(p));
    }
    match alpha {
        AlphaOrder::Zero => Ok(p.support_size() as f64 - 1.0),
        AlphaOrder::Finite(a) => Ok((1.0 - power_sum(p, alpha)?) / (a - 1.0)),
        AlphaOrder::Infinity => Err(Error::UnsupportedOrder {
            alpha: alpha.to_string(),
            context: "tsallis",
        }),
        AlphaOrder::One => unreachable!(),
    }
}

/// Per-atom Tsallis summand `h_α(x) = (x - x^α)/(α - 1)`, so that
/// `T_α(p) = Σ h_α(p_i)`.
pub fn tsallis_term(x: f64, alpha: AlphaOrder) -> Result<f64> {
    if x <= SUPP_TOL {
        return Ok(0.0);
    }
    if alpha.near_one() {
        return Ok(-x * x.ln());
    }
    match alpha {
        AlphaOrder::Zero => Ok(1.0 - x),
        AlphaOrder::Finite(a) => Ok((x - x.powf(a)) / (a - 1.0)),
        AlphaOrder::Infinity => Err(Error::UnsupportedOrder {
            alpha: alpha.to_string(),
            context: "tsallis",
        }),
        AlphaOrder::One => unreachable!(),
    }
}

/// Entropy of either family in nats (Rényi) or raw units (Tsallis).
pub fn entropy(family: Family, p: &OrderedPmf, alpha: AlphaOrder) -> Result<f64> {
    match family {
        Family::Renyi => Ok(renyi(p, alpha)),
        Family::Tsallis => tsallis(p, alpha),
    }
}

/// Residual of the Tsallis pseudo-additivity identity on the product PMF:
/// `|T(p⊗q) - (T(p) + T(q) + (1-α) T(p) T(q))|`.
pub fn pseudo_additivity_check(p: &OrderedPmf, q: &OrderedPmf, alpha: AlphaOrder) -> Result<f64> {
    let a = match alpha {
        AlphaOrder::Zero => 0.0,
        AlphaOrder::Finite(a) if !alpha.near_one() => a,
        _ => {
            return Err(Error::UnsupportedOrder {
                alpha: alpha.to_string(),
                context: "pseudo_additivity_check",
            })
        }
    };
    let product = sorted_mass_vector(&independent_coupling(p, q), None);
    let tp = tsallis(p, alpha)?;
    let tq = tsallis(q, alpha)?;
    let lhs = tsallis(&product, alpha)?;
    Ok((lhs - (tp + tq + (1.0 - a) * tp * tq)).abs())
}
