//! Permutation combinatorics for Schubert varieties in the flag variety of
//! `Q^{n+1}`: length, pattern containment, and the grids `r^w` and `e^w`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid_quiver::{DimGrid, GridShape};

/// One-line notation `w(1) .. w(m)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    w: Vec<usize>,
}

impl Permutation {
    pub fn new(w: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; w.len() + 1];
        for &v in &w {
            if v == 0 || v > w.len() || seen[v] {
                return Err(Error::InvalidPermutation);
            }
            seen[v] = true;
        }
        Ok(Permutation { w })
    }

    pub fn identity(m: usize) -> Self {
        Permutation { w: (1..=m).collect() }
    }

    pub fn longest(m: usize) -> Self {
        Permutation { w: (1..=m).rev().collect() }
    }

    pub fn one_line(&self) -> &[usize] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    /// The grid this permutation lives on (`S_{n+1}` gives `n`).
    pub fn shape(&self) -> Result<GridShape> {
        GridShape::new(self.w.len().saturating_sub(1))
    }
}

/// Number of inversions.
pub fn length(w: &Permutation) -> usize {
    let v = &w.w;
    (0..v.len()).map(|i| (i + 1..v.len()).filter(|&j| v[i] > v[j]).count()).sum()
}

/// Whether some subsequence of `w` is order-isomorphic to `pattern`.
pub fn contains_pattern(w: &Permutation, pattern: &Permutation) -> bool {
    fn go(w: &[usize], pat: &[usize], start: usize, chosen: &mut Vec<usize>) -> bool {
        let t = chosen.len();
        if t == pat.len() {
            return true;
        }
        for i in start..w.len() {
            // The new value must sit relative to every chosen value as the
            // pattern prescribes.
            let ok = (0..t).all(|s| (pat[s] < pat[t]) == (chosen[s] < w[i]));
            if ok {
                chosen.push(w[i]);
                if go(w, pat, i + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    pattern.len() <= w.len() && go(&w.w, &pattern.w, 0, &mut Vec::new())
}

/// Avoids both `4231` and `3412`.
pub fn is_smooth(w: &Permutation) -> bool {
    let p1 = Permutation { w: vec![4, 2, 3, 1] };
    let p2 = Permutation { w: vec![3, 4, 1, 2] };
    !contains_pattern(w, &p1) && !contains_pattern(w, &p2)
}

/// `r^w(i, j) = #{k <= j : w(k) <= i}`.
pub fn r_grid(w: &Permutation) -> Result<DimGrid> {
    let shape = w.shape()?;
    DimGrid::from_fn(shape, |i, j| w.w[..j].iter().filter(|&&v| v <= i).count())
}

/// `e^w`: equal to `r^w` where that is `0` or `min(i, j)`, otherwise the max of
/// the values above and to the left, zero on the boundary.
pub fn e_grid(w: &Permutation) -> Result<DimGrid> {
    let shape = w.shape()?;
    let r = r_grid(w)?;
    let (rows, cols) = (shape.size(), shape.columns());
    let mut e = vec![vec![0usize; cols + 1]; rows + 1];
    for s in 2..=rows + cols {
        for i in 1..=rows {
            if s <= i || s - i > cols {
                continue;
            }
            let j = s - i;
            let rv = r.get(i, j);
            e[i][j] = if rv == 0 || rv == i.min(j) { rv } else { e[i - 1][j].max(e[i][j - 1]) };
        }
    }
    DimGrid::from_fn(shape, |i, j| e[i][j])
}

/// `e^w` when the Schubert variety is smooth, `r^w` otherwise.
pub fn target_dims(w: &Permutation) -> Result<DimGrid> {
    if is_smooth(w) {
        e_grid(w)
    } else {
        r_grid(w)
    }
}
