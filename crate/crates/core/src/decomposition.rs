//! Rank vectors and the decomposition of a point into indecomposables.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::exact_linalg::{
    b_reduce, compose_window, inverse, qint, rank, rref, MatrixQ, Rationals, UpperTriangular, Q,
};
use crate::grid_quiver::{
    assemble_canonical, enumerate_indecomposables, heights_rank_vector, Decomposition, DimGrid, GridShape,
    HeightVector, MapTuple,
};
use crate::parametrizations::sw_array;

/// Dimension part plus, for every row `i`, window `[j1, j2]` and `k <= i + 1`,
/// the dimension of the image of the row-`i` window map meeting the row-`k`
/// space of the target column. Slot `k = i + 1` holds the plain rank.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RankVector {
    shape: GridShape,
    dims: DimGrid,
    entries: Vec<usize>,
}

impl RankVector {
    /// Rank vector of a module whose spaces are coordinate subspaces: vertex
    /// `(i, j)` is spanned by the 1-based coordinates `spaces(i, j)`, and the
    /// horizontal maps act through `maps`.
    pub(crate) fn of_coordinate_model(
        shape: GridShape,
        maps: &[UpperTriangular],
        spaces: impl Fn(usize, usize) -> Vec<usize>,
    ) -> RankVector {
        let m = shape.size();
        let dims = DimGrid::from_fn(shape, |i, j| spaces(i, j).len()).expect("spaces sit inside Q^i");
        let mut entries = Vec::new();
        for (j1, j2) in shape.windows() {
            let a = compose_window(maps, j1, j2).expect("window in range");
            let all_rows: Vec<usize> = (0..m).collect();
            for i in 1..=m {
                let src: Vec<usize> = spaces(i, j1).iter().map(|c| c - 1).collect();
                let sub = a.matrix().select(&all_rows, &src);
                let total = rank(&Rationals, &sub);
                for k in 1..=i {
                    let target = spaces(k, j2 + 1);
                    let outside: Vec<usize> = (0..m).filter(|r| !target.contains(&(r + 1))).collect();
                    let rest = sub.select(&outside, &(0..src.len()).collect::<Vec<_>>());
                    entries.push(total - rank(&Rationals, &rest));
                }
                entries.push(total);
            }
        }
        RankVector { shape, dims, entries }
    }

    /// Inverse of [`RankVector::dims`] plus [`RankVector::entries`]; the
    /// entries must come in storage order.
    pub fn from_parts(dims: DimGrid, entries: &[(usize, usize, usize, usize, usize)]) -> Result<RankVector> {
        let shape = dims.shape();
        let m = shape.size();
        let expected: Vec<_> = shape
            .windows()
            .into_iter()
            .flat_map(|(j1, j2)| (1..=m).flat_map(move |i| (1..=i + 1).map(move |k| (i, j1, j2, k))))
            .collect();
        if expected.len() != entries.len() {
            return Err(Error::SizeMismatch {
                what: "rank vector entries",
                expected: expected.len(),
                found: entries.len(),
            });
        }
        for (t, (&want, got)) in expected.iter().zip(entries).enumerate() {
            if want != (got.0, got.1, got.2, got.3) {
                return Err(Error::IndexOutOfRange { what: "rank vector entry", index: t, bound: expected.len() });
            }
        }
        Ok(RankVector { shape, dims, entries: entries.iter().map(|e| e.4).collect() })
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn dims(&self) -> &DimGrid {
        &self.dims
    }

    fn offset(&self, i: usize, j1: usize, j2: usize, k: usize) -> Option<usize> {
        let m = self.shape.size();
        if i == 0 || i > m || k == 0 || k > i + 1 {
            return None;
        }
        let w = self.shape.windows().iter().position(|&x| x == (j1, j2))?;
        let per_window = (2..=m + 1).sum::<usize>();
        let before_i = (2..=i).sum::<usize>();
        Some(w * per_window + before_i + k - 1)
    }

    pub fn get(&self, i: usize, j1: usize, j2: usize, k: usize) -> Option<usize> {
        self.offset(i, j1, j2, k).map(|o| self.entries[o])
    }

    /// `(i, j1, j2, k, value)` in storage order.
    pub fn entries(&self) -> Vec<(usize, usize, usize, usize, usize)> {
        let mut out = Vec::with_capacity(self.entries.len());
        let mut it = self.entries.iter();
        for (j1, j2) in self.shape.windows() {
            for i in 1..=self.shape.size() {
                for k in 1..=i + 1 {
                    out.push((i, j1, j2, k, *it.next().expect("sized")));
                }
            }
        }
        out
    }

    /// Intersection entries with `k <= i`, window by window, then `i`, then `k`.
    pub fn flat(&self) -> Vec<usize> {
        self.entries().into_iter().filter(|e| e.3 <= e.0).map(|e| e.4).collect()
    }

    /// Dimension part (column-major) followed by [`RankVector::flat`].
    pub fn layout(&self) -> Vec<usize> {
        let mut v = self.dims.column_major();
        v.extend(self.flat());
        v
    }

    /// Every coordinate, including the rank slots; used for linear algebra.
    pub fn coordinates(&self) -> Vec<usize> {
        let mut v = self.dims.column_major();
        v.extend(self.entries.iter().copied());
        v
    }
}

pub fn rank_vector(f: &MapTuple) -> RankVector {
    RankVector::of_coordinate_model(f.shape(), f.maps(), |i, _| (1..=i).collect())
}

fn stacked(basis: &[HeightVector]) -> MatrixQ {
    let cols: Vec<Vec<usize>> = basis.iter().map(|h| heights_rank_vector(h).coordinates()).collect();
    let len = cols.first().map_or(0, Vec::len);
    MatrixQ::from_fn(len, cols.len(), |r, c| qint(cols[c][r] as i64))
}

/// True iff the rank vectors of all indecomposables are linearly independent.
pub fn independence_check(shape: GridShape) -> bool {
    let basis = enumerate_indecomposables(shape);
    rank(&Rationals, &stacked(&basis)) == basis.len()
}

/// Reusable solver: the square system on a maximal set of independent
/// coordinates is inverted once.
#[derive(Debug, Clone)]
pub struct Decomposer {
    shape: GridShape,
    basis: Vec<HeightVector>,
    columns: MatrixQ,
    rows: Vec<usize>,
    inverse: Option<MatrixQ>,
}

impl Decomposer {
    pub fn new(shape: GridShape) -> Self {
        let basis = enumerate_indecomposables(shape);
        let columns = stacked(&basis);
        let (_, rows) = rref(&Rationals, &columns.transpose());
        let inverse = (rows.len() == basis.len()).then(|| {
            let all: Vec<usize> = (0..basis.len()).collect();
            inverse(&Rationals, &columns.select(&rows, &all)).expect("independent rows")
        });
        Decomposer { shape, basis, columns, rows, inverse }
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    /// Whether the indecomposable rank vectors are independent for this shape.
    pub fn is_independent(&self) -> bool {
        self.inverse.is_some()
    }

    /// Solves for multiplicities when the family is independent. Otherwise the
    /// solution is not unique, so the sweep supplies the candidate and the rank
    /// vector certifies it.
    pub fn decompose(&self, f: &MapTuple) -> Result<Decomposition> {
        if f.shape() != self.shape {
            return Err(Error::ShapeMismatch);
        }
        let r = rank_vector(f).coordinates();
        let Some(inv) = &self.inverse else {
            return sweep_certified(f);
        };
        let rhs = MatrixQ::from_fn(self.rows.len(), 1, |t, _| qint(r[self.rows[t]] as i64));
        let sol = crate::exact_linalg::mul(&Rationals, inv, &rhs).expect("square system");
        let mut d = Decomposition::new();
        for (t, h) in self.basis.iter().enumerate() {
            let x: &Q = sol.at(t, 0);
            if !x.is_integer() || x.is_negative() {
                return Err(Error::SolveFailure);
            }
            d.add(h.clone(), x.to_integer().to_usize().ok_or(Error::SolveFailure)?);
        }
        if self.combination(&d) != r {
            return Err(Error::SolveFailure);
        }
        Ok(d)
    }

    fn combination(&self, d: &Decomposition) -> Vec<usize> {
        let mut acc = vec![0usize; self.columns.rows()];
        for (t, h) in self.basis.iter().enumerate() {
            let m = d.multiplicity(h);
            if m == 0 {
                continue;
            }
            for (r, a) in acc.iter_mut().enumerate() {
                if self.columns.at(r, t).is_one() {
                    *a += m;
                }
            }
        }
        acc
    }
}

/// Decomposition of a point that is a direct sum of the indecomposables
/// [`enumerate_indecomposables`] lists. Other points are rejected with
/// [`Error::SolveFailure`] whenever their rank vector or south-west array
/// differs from that of the candidate read off the maps.
pub fn decompose(f: &MapTuple) -> Result<Decomposition> {
    if f.shape().n() == 2 {
        Decomposer::new(f.shape()).decompose(f)
    } else {
        // The family is dependent from three columns on, so the solve is skipped.
        sweep_certified(f)
    }
}

fn sweep_certified(f: &MapTuple) -> Result<Decomposition> {
    let d = decompose_by_sweep(f)?;
    let g = assemble_canonical(f.shape(), &d)?;
    if rank_vector(&g) == rank_vector(f) && sw_array(&g) == sw_array(f) {
        Ok(d)
    } else {
        Err(Error::SolveFailure)
    }
}

/// Chains summands through matchings between adjacent columns. `matchings[j-1]`
/// lists pairs `(h, h')` joining height `h` in column `j` to height `h'` in
/// column `j + 1`.
pub fn decomposition_from_matchings(shape: GridShape, matchings: &[Vec<(usize, usize)>]) -> Decomposition {
    let n = shape.columns();
    let top = shape.size();
    let mut d = Decomposition::new();
    for start in 1..=n {
        for height in 1..=top {
            let continued = start > 1 && matchings[start - 2].iter().any(|&(_, t)| t == height);
            if continued {
                continue;
            }
            let mut h = vec![0; n];
            let (mut j, mut cur) = (start, height);
            loop {
                h[j - 1] = cur;
                if j == n {
                    break;
                }
                match matchings[j - 1].iter().find(|&&(s, _)| s == cur) {
                    Some(&(_, t)) => {
                        cur = t;
                        j += 1;
                    }
                    None => break,
                }
            }
            d.add(HeightVector::new(shape, h).expect("matched heights increase"), 1);
        }
    }
    d
}

/// Reads the matching of each map off its Borel canonical form.
pub fn decompose_by_sweep(f: &MapTuple) -> Result<Decomposition> {
    let shape = f.shape();
    let top = shape.size();
    let matchings: Vec<Vec<(usize, usize)>> = f
        .maps()
        .iter()
        .map(|m| b_reduce(m).support().into_iter().map(|(r, c)| (top + 1 - c, top + 1 - r)).collect())
        .collect();
    let d = decomposition_from_matchings(shape, &matchings);
    d.check_column_heights(shape)?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(n: usize) -> GridShape {
        GridShape::new(n).unwrap()
    }

    fn hv(n: usize, h: &[usize]) -> HeightVector {
        HeightVector::new(shape(n), h.to_vec()).unwrap()
    }

    #[test]
    fn worked_example_rank_vector() {
        let f = MapTuple::from_ones(shape(2), &[&[(2, 2), (3, 3)]]).unwrap();
        assert_eq!(rank_vector(&f).flat(), vec![0, 0, 1, 0, 1, 2]);
        assert_eq!(rank_vector(&MapTuple::identity(shape(2))).flat(), vec![1, 1, 2, 1, 2, 3]);
        assert!(rank_vector(&MapTuple::zero(shape(3))).flat().iter().all(|&v| v == 0));
    }

    #[test]
    fn rank_slot_equals_last_intersection_for_points() {
        let f = MapTuple::from_ones(shape(3), &[&[(1, 3), (2, 2)], &[(1, 2), (3, 4)]]).unwrap();
        let rv = rank_vector(&f);
        for (j1, j2) in shape(3).windows() {
            for i in 1..=4 {
                assert_eq!(rv.get(i, j1, j2, i), rv.get(i, j1, j2, i + 1));
                for k in 1..i {
                    assert!(rv.get(i, j1, j2, k) <= rv.get(i, j1, j2, k + 1));
                }
            }
        }
        assert_eq!(rv.get(5, 1, 1, 1), None);
    }

    #[test]
    fn thin_module_rank_vectors() {
        let u9 = heights_rank_vector(&hv(2, &[1, 3]));
        assert_eq!(u9.layout(), vec![0, 0, 1, 1, 1, 1, 0, 0, 0, 1, 1, 1]);
        assert_eq!(heights_rank_vector(&hv(2, &[3, 3])).layout(), vec![1; 12]);
        assert_eq!(heights_rank_vector(&hv(2, &[1, 0])).layout(), vec![0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn decomposes_printed_pair() {
        let f = MapTuple::from_ones(shape(3), &[&[(2, 2), (4, 4)], &[(1, 1), (3, 3), (4, 4)]]).unwrap();
        let d = decompose(&f).unwrap();
        assert_eq!(d.len(), 7);
        for h in [[4, 0, 0], [3, 3, 0], [2, 0, 0], [1, 1, 1], [0, 4, 4], [0, 2, 2], [0, 0, 3]] {
            assert_eq!(d.multiplicity(&hv(3, &h)), 1);
        }
        assert_eq!(decompose_by_sweep(&f).unwrap(), d);
    }

    #[test]
    fn identity_and_zero_decompositions() {
        for n in [2, 3] {
            let s = shape(n);
            let id = decompose(&MapTuple::identity(s)).unwrap();
            assert_eq!(id.len(), n + 1);
            for t in 1..=n + 1 {
                assert_eq!(id.multiplicity(&hv(n, &vec![t; n])), 1);
            }
            let zero = decompose(&MapTuple::zero(s)).unwrap();
            assert_eq!(zero.len(), n * (n + 1));
            assert!(zero.iter().all(|(h, _)| h.support().0 == h.support().1));
        }
    }

    #[test]
    fn independence_by_shape() {
        assert!(independence_check(shape(2)));
        // The alternating sum over h1 in {0,1}, h2 in {1,2}, h3 in {0,2}
        // vanishes: the long window only sees the two end columns.
        assert!(!independence_check(shape(3)));
        let s = shape(3);
        let mut sum = vec![0i64; heights_rank_vector(&hv(3, &[1, 1, 1])).coordinates().len()];
        for (a, b, c) in [(0, 1, 0), (0, 1, 2), (0, 2, 0), (0, 2, 2), (1, 1, 0), (1, 1, 2), (1, 2, 0), (1, 2, 2)] {
            let sign = if (a + (b - 1) + c / 2) % 2 == 0 { 1 } else { -1 };
            for (t, v) in heights_rank_vector(&hv(3, &[a, b, c])).coordinates().into_iter().enumerate() {
                sum[t] += sign * v as i64;
            }
        }
        assert!(sum.iter().all(|&v| v == 0));
        assert!(!Decomposer::new(s).is_independent());
    }

    #[test]
    fn dependent_family_for_four_columns() {
        // 205 indecomposables but only 140 coordinates.
        let s = shape(4);
        assert_eq!(enumerate_indecomposables(s).len(), 205);
        assert_eq!(heights_rank_vector(&enumerate_indecomposables(s)[0]).coordinates().len(), 140);
        assert!(!independence_check(s));
        let dec = Decomposer::new(s);
        assert!(!dec.is_independent());
        let f = MapTuple::from_ones(s, &[&[(1, 2), (3, 3)], &[(2, 4)], &[(1, 1), (4, 5)]]).unwrap();
        let d = dec.decompose(&f).unwrap();
        assert_eq!(assemble_canonical(s, &d).unwrap(), f);
    }
}
