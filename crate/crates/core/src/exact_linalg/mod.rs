//! Exact linear algebra: dense matrices over a [`Field`], ranks, the windowed
//! ranks behind south-west arrays, and Borel reduction of upper-triangular
//! matrices to partial permutations.
//!
//! Indices in the public API are 1-based where they name matrix positions, to
//! match the way the invariants are usually written down.

pub mod field;

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
pub use field::{prime_power, qint, Field, GaloisField, Rationals, Q};
use num_traits::{One, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type MatrixQ = Matrix<Q>;

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for r in 0..self.rows {
            l.entry(&&self.data[r * self.cols..(r + 1) * self.cols]);
        }
        l.finish()
    }
}

impl<T: Clone> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::SizeMismatch { what: "matrix entries", expected: rows * cols, found: data.len() });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn filled(rows: usize, cols: usize, v: T) -> Self {
        Matrix { rows, cols, data: alloc::vec![v; rows * cols] }
    }

    /// `f(r, c)` with 0-based indices.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::SizeMismatch { what: "matrix row", expected: c, found: row.len() });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// 0-based access.
    pub fn at(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Rows `rs` and columns `cs`, 0-based.
    pub fn select(&self, rs: &[usize], cs: &[usize]) -> Self {
        Matrix::from_fn(rs.len(), cs.len(), |r, c| self.at(rs[r], cs[c]).clone())
    }

    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Matrix::from_fn(r1 - r0, c1 - c0, |r, c| self.at(r0 + r, c0 + c).clone())
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn zero<F: Field<Elem = T>>(k: &F, rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, k.zero())
    }

    pub fn identity<F: Field<Elem = T>>(k: &F, m: usize) -> Self {
        Matrix::from_fn(m, m, |r, c| if r == c { k.one() } else { k.zero() })
    }
}

impl MatrixQ {
    pub fn zero_q(rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, Q::zero())
    }

    pub fn identity_q(m: usize) -> Self {
        Matrix::identity(&Rationals, m)
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| qint(v)).collect()).collect())
    }

    /// 0/1 matrix with ones at the given 1-based positions.
    pub fn from_ones(rows: usize, cols: usize, ones: &[(usize, usize)]) -> Self {
        let mut m = MatrixQ::zero_q(rows, cols);
        for &(r, c) in ones {
            m.set(r - 1, c - 1, Q::one());
        }
        m
    }
}

pub fn mul<F: Field>(k: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>> {
    if a.cols != b.rows {
        return Err(Error::SizeMismatch { what: "matrix product", expected: a.cols, found: b.rows });
    }
    let mut out = Matrix::zero(k, a.rows, b.cols);
    for r in 0..a.rows {
        for t in 0..a.cols {
            let x = a.at(r, t);
            if k.is_zero(x) {
                continue;
            }
            for c in 0..b.cols {
                let y = b.at(t, c);
                if !k.is_zero(y) {
                    let v = k.add(out.at(r, c), &k.mul(x, y));
                    out.set(r, c, v);
                }
            }
        }
    }
    Ok(out)
}

/// Reduced row echelon form and its pivot columns (0-based).
pub fn rref<F: Field>(k: &F, m: &Matrix<F::Elem>) -> (Matrix<F::Elem>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !k.is_zero(a.at(i, c))) else {
            continue;
        };
        if p != r {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, r * a.cols + j);
            }
        }
        let inv = k.inv(a.at(r, c));
        for j in c..a.cols {
            let v = k.mul(a.at(r, j), &inv);
            a.set(r, j, v);
        }
        for i in 0..a.rows {
            if i == r || k.is_zero(a.at(i, c)) {
                continue;
            }
            let factor = a.at(i, c).clone();
            for j in c..a.cols {
                let v = k.sub(a.at(i, j), &k.mul(&factor, a.at(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank<F: Field>(k: &F, m: &Matrix<F::Elem>) -> usize {
    // Forward elimination only; cheaper than a full rref.
    let mut a = m.clone();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !k.is_zero(a.at(i, c))) else {
            continue;
        };
        if p != r {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, r * a.cols + j);
            }
        }
        let inv = k.inv(a.at(r, c));
        for i in r + 1..a.rows {
            if k.is_zero(a.at(i, c)) {
                continue;
            }
            let factor = k.mul(a.at(i, c), &inv);
            for j in c..a.cols {
                let v = k.sub(a.at(i, j), &k.mul(&factor, a.at(r, j)));
                a.set(i, j, v);
            }
        }
        r += 1;
    }
    r
}

/// Basis of the right kernel, as columns of the returned matrix.
pub fn kernel<F: Field>(k: &F, m: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let (r, pivots) = rref(k, m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Matrix::zero(k, m.cols, free.len());
    for (t, &fc) in free.iter().enumerate() {
        out.set(fc, t, k.one());
        for (row, &pc) in pivots.iter().enumerate() {
            out.set(pc, t, k.neg(r.at(row, fc)));
        }
    }
    out
}

/// Solves `a * x = b`; `None` when inconsistent. Free variables are set to zero.
pub fn solve<F: Field>(k: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    assert_eq!(a.rows, b.rows, "solve: row counts differ");
    let aug = Matrix::from_fn(a.rows, a.cols + b.cols, |r, c| {
        if c < a.cols {
            a.at(r, c).clone()
        } else {
            b.at(r, c - a.cols).clone()
        }
    });
    let (red, pivots) = rref(k, &aug);
    if pivots.iter().any(|&c| c >= a.cols) {
        return None;
    }
    let mut x = Matrix::zero(k, a.cols, b.cols);
    for (row, &pc) in pivots.iter().enumerate() {
        for c in 0..b.cols {
            x.set(pc, c, red.at(row, a.cols + c).clone());
        }
    }
    Some(x)
}

pub fn inverse<F: Field>(k: &F, m: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>> {
    if m.rows != m.cols {
        return Err(Error::NotInvertible);
    }
    let x = solve(k, m, &Matrix::identity(k, m.rows)).ok_or(Error::NotInvertible)?;
    if rank(k, m) != m.rows {
        return Err(Error::NotInvertible);
    }
    Ok(x)
}

/// `dim(im(m) ∩ span(e_1..e_k))`, computed as `rank(m) - rank(rows k+1.. of m)`.
pub fn image_meet_coord_dim(m: &MatrixQ, k: usize) -> Result<usize> {
    if k > m.rows {
        return Err(Error::IndexOutOfRange { what: "coordinate subspace", index: k, bound: m.rows });
    }
    let below = m.block(k, m.rows, 0, m.cols);
    Ok(rank(&Rationals, m) - rank(&Rationals, &below))
}

/// A square upper-triangular matrix over the rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UpperTriangular(MatrixQ);

impl fmt::Debug for UpperTriangular {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl UpperTriangular {
    /// Fails with `TriangularityViolation { map: 0, .. }`; callers that know
    /// which map they are validating rewrite the index.
    pub fn new(m: MatrixQ) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::SizeMismatch { what: "square matrix", expected: m.rows, found: m.cols });
        }
        for r in 0..m.rows {
            for c in 0..r {
                if !m.at(r, c).is_zero() {
                    return Err(Error::TriangularityViolation { map: 0, row: r + 1, col: c + 1 });
                }
            }
        }
        Ok(UpperTriangular(m))
    }

    pub fn identity(m: usize) -> Self {
        UpperTriangular(MatrixQ::identity_q(m))
    }

    pub fn zero(m: usize) -> Self {
        UpperTriangular(MatrixQ::zero_q(m, m))
    }

    pub fn from_ones(m: usize, ones: &[(usize, usize)]) -> Result<Self> {
        UpperTriangular::new(MatrixQ::from_ones(m, m, ones))
    }

    pub fn size(&self) -> usize {
        self.0.rows
    }

    pub fn matrix(&self) -> &MatrixQ {
        &self.0
    }

    pub fn into_matrix(self) -> MatrixQ {
        self.0
    }

    pub fn mul(&self, other: &UpperTriangular) -> Result<UpperTriangular> {
        Ok(UpperTriangular(mul(&Rationals, &self.0, &other.0)?))
    }

    pub fn is_invertible(&self) -> bool {
        (0..self.size()).all(|i| !self.0.at(i, i).is_zero())
    }

    pub fn inverse(&self) -> Result<UpperTriangular> {
        if !self.is_invertible() {
            return Err(Error::NotInvertible);
        }
        Ok(UpperTriangular(inverse(&Rationals, &self.0)?))
    }

    /// At most one nonzero per row and column, and every nonzero equal to 1.
    pub fn is_partial_permutation(&self) -> bool {
        let m = self.size();
        let ok_entries = self.0.data.iter().all(|v| v.is_zero() || v.is_one());
        let rows_ok = (0..m).all(|r| (0..m).filter(|&c| !self.0.at(r, c).is_zero()).count() <= 1);
        let cols_ok = (0..m).all(|c| (0..m).filter(|&r| !self.0.at(r, c).is_zero()).count() <= 1);
        ok_entries && rows_ok && cols_ok
    }

    /// 1-based positions of the nonzero entries, row-major.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let m = self.size();
        let mut out = Vec::new();
        for r in 0..m {
            for c in r..m {
                if !self.0.at(r, c).is_zero() {
                    out.push((r + 1, c + 1));
                }
            }
        }
        out
    }
}

/// Rank of rows `p..=m`, columns `1..=q` (1-based).
pub fn sw_rank(m: &UpperTriangular, p: usize, q: usize) -> Result<usize> {
    let size = m.size();
    if p == 0 || p > size {
        return Err(Error::IndexOutOfRange { what: "south-west row", index: p, bound: size });
    }
    if q == 0 || q > size {
        return Err(Error::IndexOutOfRange { what: "south-west column", index: q, bound: size });
    }
    if p > q {
        // Strictly below the diagonal.
        return Ok(0);
    }
    Ok(rank(&Rationals, &m.0.block(p - 1, size, 0, q)))
}

/// `mats[j2] * ... * mats[j1]` (1-based, `j1` applied first).
pub fn compose_window(mats: &[UpperTriangular], j1: usize, j2: usize) -> Result<UpperTriangular> {
    if j1 == 0 || j1 > j2 || j2 > mats.len() {
        return Err(Error::IndexOutOfRange { what: "window", index: j2.max(j1), bound: mats.len() });
    }
    let mut acc = mats[j1 - 1].clone();
    for m in &mats[j1..j2] {
        if m.size() != acc.size() {
            return Err(Error::SizeMismatch { what: "window factor", expected: acc.size(), found: m.size() });
        }
        acc = m.mul(&acc)?;
    }
    Ok(acc)
}

pub fn principal_block(m: &UpperTriangular, i: usize) -> Result<UpperTriangular> {
    if i == 0 || i > m.size() {
        return Err(Error::IndexOutOfRange { what: "principal block", index: i, bound: m.size() });
    }
    Ok(UpperTriangular(m.0.block(0, i, 0, i)))
}

/// Canonical partial permutation in the `B x B` orbit of `m`.
///
/// Rows are handled bottom-up. The leftmost nonzero entry of a row becomes a
/// pivot, is scaled to 1, clears its column upwards (row operations adding lower
/// rows to higher ones) and clears its row to the right (column operations
/// adding left columns to right ones). Both kinds of operation are realized by
/// invertible upper-triangular matrices, so every south-west rank survives.
pub fn b_reduce(m: &UpperTriangular) -> UpperTriangular {
    let k = Rationals;
    let n = m.size();
    let mut a = m.0.clone();
    for i in (0..n).rev() {
        let Some(c) = (0..n).find(|&c| !a.at(i, c).is_zero()) else {
            continue;
        };
        let inv = a.at(i, c).recip();
        for j in 0..n {
            let v = k.mul(a.at(i, j), &inv);
            a.set(i, j, v);
        }
        for r in 0..i {
            if a.at(r, c).is_zero() {
                continue;
            }
            let factor = a.at(r, c).clone();
            for j in 0..n {
                let v = k.sub(a.at(r, j), &k.mul(&factor, a.at(i, j)));
                a.set(r, j, v);
            }
        }
        for j in c + 1..n {
            if a.at(i, j).is_zero() {
                continue;
            }
            let factor = a.at(i, j).clone();
            for r in 0..n {
                let v = k.sub(a.at(r, j), &k.mul(&factor, a.at(r, c)));
                a.set(r, j, v);
            }
        }
    }
    UpperTriangular(a)
}
