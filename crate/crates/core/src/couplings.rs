//! Independent and comonotone couplings of ordered PMFs.
//!
//! The comonotone (north-west corner) coupling drives both marginals from one
//! uniform variable through their quantile maps, so its cells are the overlap
//! lengths of the two breakpoint partitions of `[0, 1]`. Its support is a
//! monotone staircase with at most `n + m - 1` cells. Aggregating it along
//! `max(i, j)` gives the meet; aggregating along `min(i, j)` gives the vector
//! whose concavification is the join.
//!
//! Row and column indices are 0-based.

use serde::Serialize;

use crate::entropy::{AlphaOrder, tsallis_term};
use crate::error::{Error, Result};
use crate::pmf::OrderedPmf;

/// Breakpoints closer than this are treated as one when refining partitions.
pub const BREAKPOINT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
    pub mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingKind {
    Independent,
    Comonotone,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Row,
    Col,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Max,
    Min,
}

/// Sparse joint PMF on `rows × cols` with fixed marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    cells: Vec<Cell>,
    row_marginal: OrderedPmf,
    col_marginal: OrderedPmf,
    kind: CouplingKind,
}

impl Coupling {
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn row_marginal(&self) -> &OrderedPmf {
        &self.row_marginal
    }

    pub fn col_marginal(&self) -> &OrderedPmf {
        &self.col_marginal
    }

    pub fn kind(&self) -> CouplingKind {
        self.kind
    }

    /// Dense row-major matrix. Intended for small couplings.
    pub fn dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.col_marginal.len()]; self.row_marginal.len()];
        for c in &self.cells {
            out[c.row][c.col] += c.mass;
        }
        out
    }

    /// No two cells `(i, j)`, `(i', j')` with `i < i'` and `j > j'`.
    pub fn is_staircase(&self) -> bool {
        let mut sorted: Vec<(usize, usize)> = self.cells.iter().map(|c| (c.row, c.col)).collect();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0].1 <= w[1].1)
    }
}

/// Product coupling `p_i q_j` over the supports.
pub fn independent_coupling(p: &OrderedPmf, q: &OrderedPmf) -> Coupling {
    let mut cells = Vec::new();
    for (i, &pi) in p.masses().iter().enumerate().filter(|(_, m)| **m > 0.0) {
        for (j, &qj) in q.masses().iter().enumerate().filter(|(_, m)| **m > 0.0) {
            cells.push(Cell {
                row: i,
                col: j,
                mass: pi * qj,
            });
        }
    }
    Coupling {
        cells,
        row_marginal: p.clone(),
        col_marginal: q.clone(),
        kind: CouplingKind::Independent,
    }
}

/// North-west corner coupling: cell `(i, j)` carries
/// `[min(P_i, Q_j) - max(P_{i-1}, Q_{j-1})]_+`.
///
/// Coincident breakpoints produce zero overlaps, which are dropped, so the
/// staircase may step diagonally.
pub fn comonotone_coupling(p: &OrderedPmf, q: &OrderedPmf) -> Coupling {
    let pc = p.prefix_sums();
    let qc = q.prefix_sums();
    let (pc, qc) = (pc.breakpoints(), qc.breakpoints());
    let (n, m) = (pc.len(), qc.len());
    let mut cells = Vec::with_capacity(n + m - 1);
    let (mut i, mut j) = (0, 0);
    let (mut p_lo, mut q_lo) = (0.0, 0.0);
    while i < n && j < m {
        let lo = f64::max(p_lo, q_lo);
        let hi = f64::min(pc[i], qc[j]);
        if hi > lo {
            // a cell spanning a whole row or column interval takes its mass
            let mass = if p_lo >= q_lo && pc[i] <= qc[j] {
                p.masses()[i]
            } else if q_lo >= p_lo && qc[j] <= pc[i] {
                q.masses()[j]
            } else {
                hi - lo
            };
            cells.push(Cell { row: i, col: j, mass });
        }
        if pc[i] < qc[j] {
            p_lo = pc[i];
            i += 1;
        } else if qc[j] < pc[i] {
            q_lo = qc[j];
            j += 1;
        } else {
            p_lo = pc[i];
            q_lo = qc[j];
            i += 1;
            j += 1;
        }
    }
    Coupling {
        cells,
        row_marginal: p.clone(),
        col_marginal: q.clone(),
        kind: CouplingKind::Comonotone,
    }
}

/// Interior cumulative breakpoints `B_p ⊂ (0, 1)` of a PMF.
pub fn breakpoints(p: &OrderedPmf) -> Vec<f64> {
    p.prefix_sums()
        .breakpoints()
        .iter()
        .copied()
        .filter(|&b| b > BREAKPOINT_TOL && b < 1.0 - BREAKPOINT_TOL)
        .collect()
}

/// Sorts and merges breakpoints closer than [`BREAKPOINT_TOL`], dropping any
/// at 0 or 1.
pub fn merge_breakpoints(mut points: Vec<f64>) -> Vec<f64> {
    points.retain(|&b| b > BREAKPOINT_TOL && b < 1.0 - BREAKPOINT_TOL);
    points.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(points.len());
    for b in points {
        match out.last() {
            Some(&last) if b - last <= BREAKPOINT_TOL => {}
            _ => out.push(b),
        }
    }
    out
}

/// Lengths of the intervals `[0, b_1], [b_1, b_2], ..., [b_k, 1]` cut by a
/// breakpoint set.
pub fn interval_lengths(points: &[f64]) -> Vec<f64> {
    let merged = merge_breakpoints(points.to_vec());
    let mut prev = 0.0;
    let mut out: Vec<f64> = merged
        .iter()
        .map(|&b| {
            let len = b - prev;
            prev = b;
            len
        })
        .collect();
    out.push(1.0 - prev);
    out
}

/// Tsallis entropy of the interval lengths cut by `points`.
pub fn breakpoint_tsallis(points: &[f64], alpha: AlphaOrder) -> Result<f64> {
    let lengths = interval_lengths(points);
    let mut total = 0.0;
    for len in lengths {
        total += tsallis_term(len, alpha)?;
    }
    Ok(total)
}

/// Increase in Tsallis entropy when an interval of length `a + b` is split
/// into pieces `a` and `b`.
pub fn split_gain(a: f64, b: f64, alpha: AlphaOrder) -> Result<f64> {
    Ok(tsallis_term(a, alpha)? + tsallis_term(b, alpha)? - tsallis_term(a + b, alpha)?)
}

/// Quantile coupling of several marginals: common refinement of all
/// breakpoint partitions, each piece labelled with the atom every marginal
/// assigns to it.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementCoupling {
    intervals: Vec<(f64, Vec<usize>)>,
}

impl RefinementCoupling {
    pub fn intervals(&self) -> &[(f64, Vec<usize>)] {
        &self.intervals
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.intervals.iter().map(|(l, _)| *l).collect()
    }

    /// Marginal `k` recovered by summing interval lengths per label.
    pub fn marginal(&self, k: usize, len: usize) -> Vec<f64> {
        let mut out = vec![0.0; len];
        for (l, labels) in &self.intervals {
            out[labels[k]] += l;
        }
        out
    }
}

pub fn comonotone_many(ps: &[OrderedPmf]) -> Result<RefinementCoupling> {
    if ps.is_empty() {
        return Err(Error::EmptyList);
    }
    let curves: Vec<Vec<f64>> = ps
        .iter()
        .map(|p| p.prefix_sums().breakpoints().to_vec())
        .collect();
    let mut all: Vec<f64> = curves.iter().flatten().copied().collect();
    all = merge_breakpoints(all);
    all.push(1.0);

    let mut intervals = Vec::with_capacity(all.len());
    let mut prev = 0.0;
    for &hi in &all {
        let len = hi - prev;
        // X_k(u) = min{i : P_i >= u} for any u in (prev, hi]
        let labels = curves
            .iter()
            .zip(ps)
            .map(|(cum, p)| {
                cum.iter()
                    .position(|&c| c >= hi - BREAKPOINT_TOL)
                    .unwrap_or_else(|| p.support_size().max(1) - 1)
            })
            .collect();
        intervals.push((len, labels));
        prev = hi;
    }
    Ok(RefinementCoupling { intervals })
}

/// Anything with a flat list of joint masses.
pub trait MassVector {
    fn mass_values(&self) -> Vec<f64>;
}

impl MassVector for Coupling {
    fn mass_values(&self) -> Vec<f64> {
        self.cells.iter().map(|c| c.mass).collect()
    }
}

impl MassVector for RefinementCoupling {
    fn mass_values(&self) -> Vec<f64> {
        self.lengths()
    }
}

/// Joint masses sorted nonincreasing, optionally zero-padded to `pad_to`.
pub fn sorted_mass_vector<C: MassVector + ?Sized>(c: &C, pad_to: Option<usize>) -> OrderedPmf {
    let mut masses = c.mass_values();
    if masses.is_empty() {
        masses.push(1.0);
    }
    if let Some(len) = pad_to {
        if len > masses.len() {
            masses.resize(len, 0.0);
        }
    }
    OrderedPmf::from_computed(masses)
}

/// Sums comonotone cells along `max(i, j)` (the meet) or `min(i, j)` (the
/// possibly unordered max vector).
pub fn aggregate_by_extremum(c: &Coupling, which: Extremum) -> Result<crate::pmf::RawVector> {
    if !c.is_staircase() {
        return Err(Error::NotComonotone);
    }
    let len = c.row_marginal.len().max(c.col_marginal.len());
    let mut out = vec![0.0; len];
    for cell in &c.cells {
        let k = match which {
            Extremum::Max => cell.row.max(cell.col),
            Extremum::Min => cell.row.min(cell.col),
        };
        out[k] += cell.mass;
    }
    Ok(crate::pmf::RawVector::from_computed(out))
}

/// Sums cells along the other axis; the result is sorted like any PMF.
pub fn marginal(c: &Coupling, axis: Axis) -> OrderedPmf {
    let len = match axis {
        Axis::Row => c.row_marginal.len(),
        Axis::Col => c.col_marginal.len(),
    };
    let mut out = vec![0.0; len];
    for cell in &c.cells {
        let k = match axis {
            Axis::Row => cell.row,
            Axis::Col => cell.col,
        };
        out[k] += cell.mass;
    }
    OrderedPmf::from_computed(out)
}
