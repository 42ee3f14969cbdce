//! Linear degenerations of Schubert varieties as quiver Grassmannians:
//! point counts, dimension estimates, the flat-locus scan and the Hom-scheme
//! audit.

pub mod fit;
pub mod hom;
pub mod point_count;

use alloc::vec::Vec;

use crate::decomposition::decompose;
use crate::error::{Error, Result};
use crate::grid_quiver::{Decomposition, DimGrid, GridShape, MapTuple};
use crate::orbit_poset::{build_poset, OrbitNode, OrbitPoset};
use crate::schubert::{length, target_dims, Permutation};

pub use fit::{fit_counts, DimEstimate};
pub use hom::{commutativity_count, hom_audit, HomConfig, HomReport};
pub use point_count::{subrep_count, subrep_count_with_budget, DEFAULT_BUDGET};

pub const DEFAULT_QS: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

fn cells(shape: GridShape) -> impl Iterator<Item = (usize, usize)> {
    (1..=shape.size()).flat_map(move |i| (1..=shape.columns()).map(move |j| (i, j)))
}

/// Euler form of the grid with one relation per unit square.
pub fn euler_form(a: &DimGrid, b: &DimGrid) -> Result<i64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch);
    }
    let shape = a.shape();
    let (m, n) = (shape.size(), shape.columns());
    let (av, bv) = (|i, j| a.get(i, j) as i64, |i, j| b.get(i, j) as i64);
    let mut total = 0;
    for (i, j) in cells(shape) {
        total += av(i, j) * bv(i, j);
        if j < n {
            total -= av(i, j) * bv(i, j + 1);
        }
        if i < m {
            total -= av(i, j) * bv(i + 1, j);
        }
        if i < m && j < n {
            total += av(i, j) * bv(i + 1, j + 1);
        }
    }
    Ok(total)
}

/// `<e, d - e>`, a lower bound for every component of the Grassmannian.
pub fn euler_bound(e: &DimGrid, d: &DimGrid) -> Result<i64> {
    let rest = d.checked_sub(e).ok_or(Error::ShapeMismatch)?;
    euler_form(e, &rest)
}

/// Largest dimension a Grassmannian with these dimensions could have.
fn max_degree(e: &DimGrid) -> usize {
    cells(e.shape()).map(|(i, j)| e.get(i, j) * (i - e.get(i, j))).sum()
}

pub fn point_counts(f: &MapTuple, e: &DimGrid, qs: &[u64], budget: u64) -> Result<Vec<(u64, u128)>> {
    qs.iter().map(|&q| Ok((q, subrep_count_with_budget(f, e, q, budget)?))).collect()
}

pub fn estimate_dim_with_budget(f: &MapTuple, e: &DimGrid, qs: &[u64], budget: u64) -> Result<DimEstimate> {
    if qs.len() < 3 {
        return Err(Error::TooFewSamples { needed: 3, found: qs.len() });
    }
    fit_counts(&point_counts(f, e, qs, budget)?, max_degree(e))
}

pub fn estimate_dim(f: &MapTuple, e: &DimGrid, qs: &[u64]) -> Result<DimEstimate> {
    estimate_dim_with_budget(f, e, qs, DEFAULT_BUDGET)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub qs: Vec<u64>,
    pub budget: u64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { qs: DEFAULT_QS.to_vec(), budget: DEFAULT_BUDGET }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub orbit_id: usize,
    pub decomposition: Decomposition,
    pub estimate: DimEstimate,
    pub target_dim: usize,
    pub flat_candidate: bool,
    pub euler_bound: i64,
}

impl ScanRow {
    pub fn est_dim(&self) -> Option<usize> {
        self.estimate.degree
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatScan {
    pub w: Permutation,
    pub rows: Vec<ScanRow>,
    /// Cover relations `(upper, lower)` where the lower orbit is a flat
    /// candidate but the upper one is not.
    pub upward_gaps: Vec<(usize, usize)>,
}

impl FlatScan {
    pub fn upward_closed(&self) -> bool {
        self.upward_gaps.is_empty()
    }
}

pub fn scan_orbit(w: &Permutation, node: &OrbitNode, config: &ScanConfig) -> Result<ScanRow> {
    let e = target_dims(w)?;
    let f = &node.representative;
    let estimate = estimate_dim_with_budget(f, &e, &config.qs, config.budget)?;
    let target_dim = length(w);
    Ok(ScanRow {
        orbit_id: node.id,
        decomposition: node.decomposition.clone(),
        flat_candidate: estimate.degree == Some(target_dim),
        estimate,
        target_dim,
        euler_bound: euler_bound(&e, &DimGrid::full(e.shape()))?,
    })
}

/// Assembles rows computed by [`scan_orbit`], in any order.
pub fn collect_scan(w: &Permutation, poset: &OrbitPoset, mut rows: Vec<ScanRow>) -> FlatScan {
    rows.sort_by_key(|r| r.orbit_id);
    let flat = |id: usize| rows.iter().find(|r| r.orbit_id == id).is_some_and(|r| r.flat_candidate);
    let upward_gaps = poset.edges().iter().copied().filter(|&(u, v)| flat(v) && !flat(u)).collect();
    FlatScan { w: w.clone(), rows, upward_gaps }
}

pub fn flat_scan_poset(w: &Permutation, poset: &OrbitPoset, config: &ScanConfig) -> Result<FlatScan> {
    if w.shape()? != poset.shape() {
        return Err(Error::ShapeMismatch);
    }
    let rows = poset.nodes().iter().map(|node| scan_orbit(w, node, config)).collect::<Result<Vec<_>>>()?;
    Ok(collect_scan(w, poset, rows))
}

pub fn flat_scan(w: &Permutation, config: &ScanConfig) -> Result<FlatScan> {
    let poset = build_poset(w.shape()?)?;
    flat_scan_poset(w, &poset, config)
}

/// The audit with `e = target_dims(w)`.
pub fn hom_report(w: &Permutation, f: &MapTuple, config: &HomConfig) -> Result<HomReport> {
    hom_audit(f, &target_dims(w)?, config)
}

/// Same estimate for a point and for the canonical form of its decomposition.
pub fn orbit_invariant(f: &MapTuple, e: &DimGrid, qs: &[u64]) -> Result<bool> {
    let canon = crate::grid_quiver::assemble_canonical(f.shape(), &decompose(f)?)?;
    Ok(estimate_dim(f, e, qs)? == estimate_dim(&canon, e, qs)?)
}
