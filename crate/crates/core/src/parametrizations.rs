//! South-west arrays and what they parametrize: orbit equality, the
//! degeneration order, and reconstruction of canonical representatives.
//!
//! `s[j1,j2](p,q)` is the rank of rows `p..=n+1`, columns `1..=q` of the window
//! composition. Orbit `g` lies in the closure of orbit `f` exactly when
//! `s^g <= s^f` entrywise.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exact_linalg::{compose_window, sw_rank, UpperTriangular};
use crate::grid_quiver::{GridShape, MapTuple};

/// Table of one window; entries with `p > q` are zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SwTable {
    m: usize,
    data: Vec<usize>,
}

impl SwTable {
    pub fn of_matrix(a: &UpperTriangular) -> SwTable {
        let m = a.size();
        let mut data = vec![0; m * m];
        for p in 1..=m {
            for q in p..=m {
                data[(p - 1) * m + q - 1] = sw_rank(a, p, q).expect("in range");
            }
        }
        SwTable { m, data }
    }

    /// Builds a table from its upper-triangular part: `upper[p-1][q-p]` is the
    /// entry at `(p, q)`.
    pub fn from_upper(m: usize, upper: &[Vec<usize>]) -> Result<SwTable> {
        if upper.len() != m {
            return Err(Error::SizeMismatch { what: "table rows", expected: m, found: upper.len() });
        }
        let mut data = vec![0; m * m];
        for (p, row) in upper.iter().enumerate() {
            if row.len() != m - p {
                return Err(Error::SizeMismatch { what: "table row length", expected: m - p, found: row.len() });
            }
            for (t, &v) in row.iter().enumerate() {
                data[p * m + p + t] = v;
            }
        }
        Ok(SwTable { m, data })
    }

    pub fn size(&self) -> usize {
        self.m
    }

    /// Entry at 1-based `(p, q)`; zero outside `1 <= p <= q <= m`.
    pub fn get(&self, p: usize, q: usize) -> usize {
        if p == 0 || q == 0 || p > self.m || q > self.m || p > q {
            0
        } else {
            self.data[(p - 1) * self.m + q - 1]
        }
    }

    pub fn upper_rows(&self) -> Vec<Vec<usize>> {
        (1..=self.m).map(|p| (p..=self.m).map(|q| self.get(p, q)).collect()).collect()
    }

    fn double_difference(&self, p: usize, q: usize) -> i64 {
        self.get(p, q) as i64 - self.get(p + 1, q) as i64 - self.get(p, q - 1) as i64 + self.get(p + 1, q - 1) as i64
    }

    fn le(&self, other: &SwTable) -> bool {
        self.data.iter().zip(&other.data).all(|(a, b)| a <= b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SwArray {
    shape: GridShape,
    tables: Vec<SwTable>,
}

impl SwArray {
    /// `tables` follow [`GridShape::windows`] order.
    pub fn new(shape: GridShape, tables: Vec<SwTable>) -> Result<SwArray> {
        let expected = shape.windows().len();
        if tables.len() != expected {
            return Err(Error::SizeMismatch { what: "window count", expected, found: tables.len() });
        }
        if let Some(t) = tables.iter().find(|t| t.size() != shape.size()) {
            return Err(Error::SizeMismatch { what: "table size", expected: shape.size(), found: t.size() });
        }
        Ok(SwArray { shape, tables })
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn table(&self, j1: usize, j2: usize) -> Option<&SwTable> {
        let w = self.shape.windows().iter().position(|&x| x == (j1, j2))?;
        Some(&self.tables[w])
    }

    /// `((j1, j2), table)` pairs in window order.
    pub fn windows(&self) -> impl Iterator<Item = ((usize, usize), &SwTable)> {
        self.shape.windows().into_iter().zip(self.tables.iter())
    }

    /// Entrywise comparison `self <= other`.
    pub fn le(&self, other: &SwArray) -> bool {
        self.shape == other.shape && self.tables.iter().zip(&other.tables).all(|(a, b)| a.le(b))
    }

    /// All entries with `p <= q`, window by window, row-major.
    pub fn values(&self) -> Vec<usize> {
        self.tables.iter().flat_map(|t| t.upper_rows().into_iter().flatten()).collect()
    }
}

pub fn sw_array(f: &MapTuple) -> SwArray {
    let tables = f
        .shape()
        .windows()
        .into_iter()
        .map(|(a, b)| SwTable::of_matrix(&compose_window(f.maps(), a, b).expect("window in range")))
        .collect();
    SwArray { shape: f.shape(), tables }
}

pub fn same_orbit(f: &MapTuple, g: &MapTuple) -> Result<bool> {
    if f.shape() != g.shape() {
        return Err(Error::ShapeMismatch);
    }
    Ok(sw_array(f) == sw_array(g))
}

/// Whether the orbit of `g` lies in the closure of the orbit of `f`.
pub fn degenerates(f: &MapTuple, g: &MapTuple) -> Result<bool> {
    if f.shape() != g.shape() {
        return Err(Error::ShapeMismatch);
    }
    Ok(sw_array(g).le(&sw_array(f)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    /// The first orbit lies in the closure of the second.
    Less,
    Greater,
    Equal,
    Incomparable,
}

pub fn compare(a: &SwArray, b: &SwArray) -> Comparison {
    match (a.le(b), b.le(a)) {
        (true, true) => Comparison::Equal,
        (true, false) => Comparison::Less,
        (false, true) => Comparison::Greater,
        (false, false) => Comparison::Incomparable,
    }
}

/// Positions `(row, col)` of the partial permutation with these south-west ranks.
pub fn pivots(table: &SwTable) -> Result<Vec<(usize, usize)>> {
    let m = table.size();
    let mut out = Vec::new();
    for p in 1..=m {
        for q in 1..=m {
            match table.double_difference(p, q) {
                0 => {}
                1 => out.push((p, q)),
                value => return Err(Error::InvalidTable { row: p, col: q, value }),
            }
        }
    }
    Ok(out)
}

/// Canonical representative with array `s`, if `s` is realizable.
pub fn reconstruct(s: &SwArray) -> Result<MapTuple> {
    let shape = s.shape();
    let mut maps = Vec::with_capacity(shape.map_count());
    for j in 1..=shape.map_count() {
        let table = s.table(j, j).expect("single windows exist");
        let ones = pivots(table)?;
        let mut rows_seen = vec![false; shape.size() + 1];
        let mut cols_seen = vec![false; shape.size() + 1];
        for &(r, c) in &ones {
            // A repeated row or column cannot come from a partial permutation;
            // report it against the entry that sees two pivots.
            if rows_seen[r] || cols_seen[c] {
                return Err(Error::InvalidArray {
                    j1: j,
                    j2: j,
                    p: r,
                    q: c,
                    expected: table.get(r, c),
                    got: table.get(r, c).saturating_sub(1),
                });
            }
            rows_seen[r] = true;
            cols_seen[c] = true;
        }
        maps.push(UpperTriangular::from_ones(shape.size(), &ones)?);
    }
    let f = MapTuple::from_maps(shape, maps)?;
    let realized = sw_array(&f);
    for (((j1, j2), want), got) in s.windows().zip(realized.tables.iter()) {
        for p in 1..=shape.size() {
            for q in p..=shape.size() {
                if want.get(p, q) != got.get(p, q) {
                    return Err(Error::InvalidArray { j1, j2, p, q, expected: want.get(p, q), got: got.get(p, q) });
                }
            }
        }
    }
    Ok(f)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `s(p,q) > min(q - p + 1, q)`.
    SizeBound { j1: usize, j2: usize, p: usize, q: usize, value: usize },
    /// A composite window exceeds a factor: rows from the later factor
    /// `[cut+1, j2]`, columns from the earlier factor `[j1, cut]`.
    FactorBound { j1: usize, j2: usize, cut: usize, p: usize, q: usize, value: usize, bound: usize },
    /// The entry is not within one of the value forced by its neighbours, or
    /// it takes the extra unit while its row or column already has a pivot.
    PivotSandwich { j1: usize, j2: usize, p: usize, q: usize, value: usize, base: i64 },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InequalityReport {
    pub violations: Vec<Violation>,
}

impl InequalityReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Necessary conditions on a candidate array; [`reconstruct`] is the exact test.
pub fn validate_array_inequalities(s: &SwArray) -> InequalityReport {
    let m = s.shape().size();
    let mut violations = Vec::new();
    for ((j1, j2), t) in s.windows() {
        for p in 1..=m {
            for q in p..=m {
                let value = t.get(p, q);
                if value > (q - p + 1).min(q) {
                    violations.push(Violation::SizeBound { j1, j2, p, q, value });
                }
                for cut in j1..j2 {
                    let later = s.table(cut + 1, j2).expect("window").get(p, m);
                    let earlier = s.table(j1, cut).expect("window").get(1, q);
                    let bound = later.min(earlier);
                    if value > bound {
                        violations.push(Violation::FactorBound { j1, j2, cut, p, q, value, bound });
                    }
                }
                let below = t.get(p + 1, q) as i64;
                let left = t.get(p, q - 1) as i64;
                let corner = t.get(p + 1, q - 1) as i64;
                let base = below + left - corner;
                let row_has_pivot = left - corner > 0;
                let col_has_pivot = below - corner > 0;
                let v = value as i64;
                let extra_ok = !row_has_pivot && !col_has_pivot;
                if v < base || v > base + 1 || (v == base + 1 && !extra_ok) {
                    violations.push(Violation::PivotSandwich { j1, j2, p, q, value, base });
                }
            }
        }
    }
    InequalityReport { violations }
}
