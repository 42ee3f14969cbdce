//! The grid quiver with `n + 1` rows and `n` columns of vertices, where vertex
//! `(i, j)` carries `Q^i`, vertical arrows are the standard inclusions and the
//! squares commute.
//!
//! A point is therefore a tuple of `n - 1` upper-triangular `(n+1) x (n+1)`
//! matrices; the map on row `i` is the top-left `i x i` block. Indecomposable
//! thin summands are indexed by height vectors: column `j` of `U(h)` is nonzero
//! exactly in rows `i >= n + 2 - h_j`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::decomposition::RankVector;
use crate::error::{Error, Result};
use crate::exact_linalg::{principal_block, MatrixQ, UpperTriangular};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridShape {
    n: usize,
}

impl GridShape {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::ShapeTooSmall { n });
        }
        Ok(GridShape { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Matrix size `n + 1`, also the number of rows of vertices.
    pub fn size(&self) -> usize {
        self.n + 1
    }

    pub fn columns(&self) -> usize {
        self.n
    }

    pub fn map_count(&self) -> usize {
        self.n - 1
    }

    /// All windows `(j1, j2)` with `1 <= j1 <= j2 <= n - 1`, lexicographically.
    pub fn windows(&self) -> Vec<(usize, usize)> {
        let m = self.map_count();
        (1..=m).flat_map(|a| (a..=m).map(move |b| (a, b))).collect()
    }
}

/// A point of the restricted representation variety.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MapTuple {
    shape: GridShape,
    maps: Vec<UpperTriangular>,
}

pub fn make_point(shape: GridShape, mats: Vec<MatrixQ>) -> Result<MapTuple> {
    if mats.len() != shape.map_count() {
        return Err(Error::SizeMismatch { what: "map count", expected: shape.map_count(), found: mats.len() });
    }
    let mut maps = Vec::with_capacity(mats.len());
    for (idx, m) in mats.into_iter().enumerate() {
        if m.rows() != shape.size() || m.cols() != shape.size() {
            return Err(Error::SizeMismatch {
                what: "map size",
                expected: shape.size(),
                found: if m.rows() != shape.size() { m.rows() } else { m.cols() },
            });
        }
        let ut = UpperTriangular::new(m).map_err(|e| match e {
            Error::TriangularityViolation { row, col, .. } => Error::TriangularityViolation { map: idx + 1, row, col },
            other => other,
        })?;
        maps.push(ut);
    }
    Ok(MapTuple { shape, maps })
}

impl MapTuple {
    pub fn from_maps(shape: GridShape, maps: Vec<UpperTriangular>) -> Result<Self> {
        make_point(shape, maps.into_iter().map(UpperTriangular::into_matrix).collect())
    }

    pub fn identity(shape: GridShape) -> Self {
        MapTuple { shape, maps: vec![UpperTriangular::identity(shape.size()); shape.map_count()] }
    }

    pub fn zero(shape: GridShape) -> Self {
        MapTuple { shape, maps: vec![UpperTriangular::zero(shape.size()); shape.map_count()] }
    }

    /// One 0/1 matrix per map, ones at the listed 1-based positions.
    pub fn from_ones(shape: GridShape, ones: &[&[(usize, usize)]]) -> Result<Self> {
        let mats = ones.iter().map(|o| MatrixQ::from_ones(shape.size(), shape.size(), o)).collect();
        make_point(shape, mats)
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn maps(&self) -> &[UpperTriangular] {
        &self.maps
    }

    /// `f^j` on the full space (1-based `j`).
    pub fn map(&self, j: usize) -> &UpperTriangular {
        &self.maps[j - 1]
    }

    /// `f_i^j`, the horizontal map on row `i`.
    pub fn restriction(&self, i: usize, j: usize) -> Result<UpperTriangular> {
        if j == 0 || j > self.maps.len() {
            return Err(Error::IndexOutOfRange { what: "map", index: j, bound: self.maps.len() });
        }
        principal_block(&self.maps[j - 1], i)
    }

    /// Borel base change `(h_2 f^1 h_1^-1, ..., h_n f^{n-1} h_{n-1}^-1)`.
    pub fn act(&self, h: &[UpperTriangular]) -> Result<MapTuple> {
        if h.len() != self.shape.columns() {
            return Err(Error::SizeMismatch { what: "base change", expected: self.shape.columns(), found: h.len() });
        }
        let mut maps = Vec::with_capacity(self.maps.len());
        for (j, f) in self.maps.iter().enumerate() {
            let inv = h[j].inverse()?;
            maps.push(h[j + 1].mul(&f.mul(&inv)?)?);
        }
        Ok(MapTuple { shape: self.shape, maps })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HeightVector {
    h: Vec<usize>,
}

pub fn validate_heights(shape: GridShape, h: &[usize]) -> Result<()> {
    if h.len() != shape.columns() {
        return Err(Error::SizeMismatch { what: "height vector", expected: shape.columns(), found: h.len() });
    }
    if let Some((pos, &v)) = h.iter().enumerate().find(|(_, &v)| v > shape.size()) {
        return Err(Error::HeightOutOfRange { position: pos + 1, value: v });
    }
    let support: Vec<usize> = (0..h.len()).filter(|&j| h[j] > 0).collect();
    let (Some(&a), Some(&b)) = (support.first(), support.last()) else {
        return Err(Error::EmptySupport);
    };
    if b - a + 1 != support.len() {
        return Err(Error::NonContiguousSupport);
    }
    if let Some(j) = (a..b).find(|&j| h[j] > h[j + 1]) {
        return Err(Error::NonMonotone { position: j + 2 });
    }
    Ok(())
}

impl HeightVector {
    pub fn new(shape: GridShape, h: Vec<usize>) -> Result<Self> {
        validate_heights(shape, &h)?;
        Ok(HeightVector { h })
    }

    pub fn heights(&self) -> &[usize] {
        &self.h
    }

    /// Height in column `j` (1-based).
    pub fn height(&self, j: usize) -> usize {
        self.h[j - 1]
    }

    /// The coordinate line `e_{n+2-h}` carried by column `j`, if any.
    pub fn line(&self, j: usize) -> Option<usize> {
        let h = self.height(j);
        (h > 0).then(|| self.h.len() + 2 - h)
    }

    /// Whether vertex `(i, j)` carries a nonzero space.
    pub fn is_nonzero(&self, i: usize, j: usize) -> bool {
        self.line(j).is_some_and(|l| l <= i)
    }

    /// 1-based column interval `[a, b]` of the support.
    pub fn support(&self) -> (usize, usize) {
        let a = self.h.iter().position(|&v| v > 0).expect("validated support");
        let b = self.h.iter().rposition(|&v| v > 0).expect("validated support");
        (a + 1, b + 1)
    }

    pub fn shape(&self) -> GridShape {
        GridShape { n: self.h.len() }
    }
}

impl fmt::Display for HeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("U(")?;
        for (t, v) in self.h.iter().enumerate() {
            if t > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// All valid height vectors in lexicographic order.
pub fn enumerate_indecomposables(shape: GridShape) -> Vec<HeightVector> {
    let n = shape.columns();
    let top = shape.size();
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    // Odometer over 0..=top in every column; validation filters.
    loop {
        if validate_heights(shape, &cur).is_ok() {
            out.push(HeightVector { h: cur.clone() });
        }
        let mut t = n;
        loop {
            if t == 0 {
                return out;
            }
            t -= 1;
            if cur[t] < top {
                cur[t] += 1;
                for x in cur.iter_mut().skip(t + 1) {
                    *x = 0;
                }
                break;
            }
        }
    }
}

/// Rank vector of the thin module `U(h)`.
pub fn heights_rank_vector(h: &HeightVector) -> RankVector {
    let shape = h.shape();
    let model = assemble_lines(shape, core::slice::from_ref(h));
    let spaces = |i: usize, j: usize| -> Vec<usize> {
        match h.line(j) {
            Some(l) if l <= i => vec![l],
            _ => Vec::new(),
        }
    };
    RankVector::of_coordinate_model(shape, &model, spaces)
}

/// Grid of naturals indexed by vertices `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DimGrid {
    shape: GridShape,
    g: Vec<usize>,
}

impl DimGrid {
    /// `rows[i-1][j-1]` is the value at `(i, j)`.
    pub fn new(shape: GridShape, rows: Vec<Vec<usize>>) -> Result<Self> {
        if rows.len() != shape.size() {
            return Err(Error::SizeMismatch { what: "grid rows", expected: shape.size(), found: rows.len() });
        }
        let mut g = Vec::with_capacity(shape.size() * shape.columns());
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != shape.columns() {
                return Err(Error::SizeMismatch { what: "grid columns", expected: shape.columns(), found: row.len() });
            }
            if let Some(&v) = row.iter().find(|&&v| v > i + 1) {
                return Err(Error::IndexOutOfRange { what: "grid value", index: v, bound: i + 1 });
            }
            g.extend(row);
        }
        Ok(DimGrid { shape, g })
    }

    pub fn from_fn(shape: GridShape, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let rows = (1..=shape.size()).map(|i| (1..=shape.columns()).map(|j| f(i, j)).collect()).collect();
        DimGrid::new(shape, rows)
    }

    /// The dimension vector of every point: `d(i, j) = i`.
    pub fn full(shape: GridShape) -> Self {
        DimGrid::from_fn(shape, |i, _| i).expect("within bounds")
    }

    pub fn zero(shape: GridShape) -> Self {
        DimGrid::from_fn(shape, |_, _| 0).expect("within bounds")
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.g[(i - 1) * self.shape.columns() + (j - 1)]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.g.chunks(self.shape.columns()).map(<[usize]>::to_vec).collect()
    }

    /// Column by column, top row first.
    pub fn column_major(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.g.len());
        for j in 1..=self.shape.columns() {
            for i in 1..=self.shape.size() {
                out.push(self.get(i, j));
            }
        }
        out
    }

    /// Entrywise `self - other`; `None` if some entry would go negative.
    pub fn checked_sub(&self, other: &DimGrid) -> Option<DimGrid> {
        if self.shape != other.shape {
            return None;
        }
        let g = self.g.iter().zip(&other.g).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>()?;
        Some(DimGrid { shape: self.shape, g })
    }

    pub fn total(&self) -> usize {
        self.g.iter().sum()
    }
}

/// A multiset of indecomposable summands.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Decomposition {
    summands: BTreeMap<HeightVector, usize>,
}

impl Decomposition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, h: HeightVector, mult: usize) {
        if mult > 0 {
            *self.summands.entry(h).or_insert(0) += mult;
        }
    }

    pub fn from_summands(items: impl IntoIterator<Item = (HeightVector, usize)>) -> Self {
        let mut d = Decomposition::new();
        for (h, m) in items {
            d.add(h, m);
        }
        d
    }

    pub fn iter(&self) -> impl Iterator<Item = (&HeightVector, usize)> {
        self.summands.iter().map(|(h, &m)| (h, m))
    }

    pub fn multiplicity(&self, h: &HeightVector) -> usize {
        self.summands.get(h).copied().unwrap_or(0)
    }

    /// Number of summands counted with multiplicity.
    pub fn len(&self) -> usize {
        self.summands.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Every column must see each height `1..=n+1` exactly once.
    pub fn check_column_heights(&self, shape: GridShape) -> Result<()> {
        for (h, _) in self.iter() {
            if h.heights().len() != shape.columns() {
                return Err(Error::ShapeMismatch);
            }
        }
        for j in 1..=shape.columns() {
            for height in 1..=shape.size() {
                let count: usize = self.iter().filter(|(h, _)| h.height(j) == height).map(|(_, m)| m).sum();
                if count != 1 {
                    return Err(Error::InvalidDecomposition { column: j, height, count });
                }
            }
        }
        Ok(())
    }

    /// Compact label such as `U(3,3)+U(2,0)+2U(1,1)`, highest heights first.
    pub fn label(&self) -> String {
        let mut parts: Vec<String> =
            self.summands.iter().rev().map(|(h, &m)| if m == 1 { format!("{h}") } else { format!("{m}{h}") }).collect();
        if parts.is_empty() {
            parts.push(String::from("0"));
        }
        parts.join("+")
    }
}

// Places the line of each summand's column j onto its column j+1 line.
fn assemble_lines(shape: GridShape, summands: &[HeightVector]) -> Vec<UpperTriangular> {
    let m = shape.size();
    (1..=shape.map_count())
        .map(|j| {
            let ones: Vec<(usize, usize)> =
                summands.iter().filter_map(|h| Some((h.line(j + 1)?, h.line(j)?))).collect();
            UpperTriangular::from_ones(m, &ones).expect("heights increase along a summand")
        })
        .collect()
}

/// The partial permutation representative of the orbit with decomposition `d`.
pub fn assemble_canonical(shape: GridShape, d: &Decomposition) -> Result<MapTuple> {
    d.check_column_heights(shape)?;
    let summands: Vec<HeightVector> = d.iter().map(|(h, _)| h.clone()).collect();
    Ok(MapTuple { shape, maps: assemble_lines(shape, &summands) })
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

    pub(crate) fn printed_pair() -> MapTuple {
        MapTuple::from_ones(shape(3), &[&[(2, 2), (4, 4)], &[(1, 1), (3, 3), (4, 4)]]).unwrap()
    }

    pub(crate) fn printed_decomposition() -> Decomposition {
        let hs: [&[usize]; 7] = [&[4, 0, 0], &[3, 3, 0], &[2, 0, 0], &[1, 1, 1], &[0, 4, 4], &[0, 2, 2], &[0, 0, 3]];
        Decomposition::from_summands(hs.iter().map(|h| (hv(3, h), 1)))
    }

    #[test]
    fn shape_needs_two_columns() {
        assert_eq!(GridShape::new(1), Err(Error::ShapeTooSmall { n: 1 }));
        assert_eq!(shape(3).windows(), vec![(1, 1), (1, 2), (2, 2)]);
    }

    #[test]
    fn points_validate_triangularity_and_size() {
        let s = shape(2);
        assert!(make_point(s, vec![MatrixQ::from_ones(3, 3, &[(2, 2), (3, 3)])]).is_ok());
        let lower = MatrixQ::from_ones(3, 3, &[(2, 1)]);
        assert_eq!(make_point(s, vec![lower]), Err(Error::TriangularityViolation { map: 1, row: 2, col: 1 }));
        assert!(matches!(make_point(s, vec![]), Err(Error::SizeMismatch { .. })));
        assert!(matches!(make_point(s, vec![MatrixQ::identity_q(4)]), Err(Error::SizeMismatch { .. })));
        let _ = printed_pair();
    }

    #[test]
    fn height_validation() {
        let s = shape(3);
        for h in [[4, 0, 0], [3, 3, 0], [0, 4, 4], [1, 1, 1]] {
            assert!(validate_heights(s, &h).is_ok());
        }
        assert_eq!(validate_heights(s, &[2, 0, 3]), Err(Error::NonContiguousSupport));
        assert_eq!(validate_heights(s, &[3, 2, 1]), Err(Error::NonMonotone { position: 2 }));
        assert_eq!(validate_heights(s, &[0, 0, 0]), Err(Error::EmptySupport));
        assert_eq!(validate_heights(s, &[5, 0, 0]), Err(Error::HeightOutOfRange { position: 1, value: 5 }));
    }

    #[test]
    fn indecomposable_counts() {
        assert_eq!(enumerate_indecomposables(shape(2)).len(), 12);
        let single: Vec<_> = enumerate_indecomposables(shape(2))
            .into_iter()
            .filter(|h| h.support() == (1, 1))
            .map(|h| h.heights().to_vec())
            .collect();
        assert_eq!(single, vec![vec![1, 0], vec![2, 0], vec![3, 0]]);
        // Brute-force filter of all 5^3 candidates.
        let s = shape(3);
        let mut brute = 0;
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    brute += validate_heights(s, &[a, b, c]).is_ok() as usize;
                }
            }
        }
        assert_eq!(enumerate_indecomposables(s).len(), brute);
        assert_eq!(brute, 52);
    }

    #[test]
    fn assembles_identity_zero_and_printed_pair() {
        let s = shape(2);
        let proj = Decomposition::from_summands([(hv(2, &[3, 3]), 1), (hv(2, &[2, 2]), 1), (hv(2, &[1, 1]), 1)]);
        assert_eq!(assemble_canonical(s, &proj).unwrap(), MapTuple::identity(s));
        let zero = Decomposition::from_summands(
            [[1, 0], [2, 0], [3, 0], [0, 1], [0, 2], [0, 3]].iter().map(|h| (hv(2, h), 1)),
        );
        assert_eq!(assemble_canonical(s, &zero).unwrap(), MapTuple::zero(s));
        assert_eq!(assemble_canonical(shape(3), &printed_decomposition()).unwrap(), printed_pair());
    }

    #[test]
    fn assembly_rejects_bad_column_heights() {
        let s = shape(2);
        let d = Decomposition::from_summands([(hv(2, &[3, 3]), 2)]);
        assert_eq!(assemble_canonical(s, &d), Err(Error::InvalidDecomposition { column: 1, height: 1, count: 0 }));
    }

    #[test]
    fn borel_action_of_identity_is_trivial() {
        let f = printed_pair();
        let h = vec![UpperTriangular::identity(4); 3];
        assert_eq!(f.act(&h).unwrap(), f);
    }

    #[test]
    fn grid_helpers() {
        let s = shape(2);
        let d = DimGrid::full(s);
        assert_eq!(d.column_major(), vec![1, 2, 3, 1, 2, 3]);
        assert!(DimGrid::new(s, vec![vec![2, 0], vec![0, 0], vec![0, 0]]).is_err());
        assert_eq!(d.checked_sub(&d).unwrap(), DimGrid::zero(s));
        assert_eq!(printed_decomposition().label(), "U(4,0,0)+U(3,3,0)+U(2,0,0)+U(1,1,1)+U(0,4,4)+U(0,2,2)+U(0,0,3)");
    }
}
