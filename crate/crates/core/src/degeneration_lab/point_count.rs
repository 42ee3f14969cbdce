//! Counting subrepresentations over a finite field.
//!
//! Column `j` of a subrepresentation is a chain `U(1,j) ⊆ ... ⊆ U(n+1,j)`.
//! Columns are processed left to right; chains of the previous column are
//! grouped by their images, and each group only needs to know which chains of
//! the next column contain those images. Subspaces are interned by their
//! reduced echelon basis so every containment enumeration runs once.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exact_linalg::{rref, Field, GaloisField, Matrix};
use crate::grid_quiver::{DimGrid, MapTuple};

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone)]
struct Space {
    ambient: usize,
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

struct Catalog<'a> {
    k: &'a GaloisField,
    spaces: Vec<Space>,
    index: BTreeMap<(usize, Vec<u32>), u32>,
    containing: BTreeMap<(u32, usize), Vec<u32>>,
    sums: BTreeMap<(u32, u32), u32>,
    lifts: BTreeMap<u32, u32>,
    images: BTreeMap<(usize, u32), u32>,
    checks: u64,
    budget: u64,
}

impl<'a> Catalog<'a> {
    fn new(k: &'a GaloisField, budget: u64) -> Self {
        Catalog {
            k,
            spaces: Vec::new(),
            index: BTreeMap::new(),
            containing: BTreeMap::new(),
            sums: BTreeMap::new(),
            lifts: BTreeMap::new(),
            images: BTreeMap::new(),
            checks: 0,
            budget,
        }
    }

    fn charge(&mut self, n: u64) -> Result<()> {
        self.checks += n;
        if self.checks > self.budget {
            return Err(Error::InfeasibleSize { budget: self.budget });
        }
        Ok(())
    }

    fn intern(&mut self, ambient: usize, vectors: Vec<Vec<u32>>) -> u32 {
        let (basis, pivots) = if vectors.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            let m = Matrix::from_rows(vectors).expect("equal lengths");
            let (red, pivots) = rref(self.k, &m);
            ((0..pivots.len()).map(|r| red.row(r).to_vec()).collect(), pivots)
        };
        let key = (ambient, basis.concat());
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = self.spaces.len() as u32;
        self.spaces.push(Space { ambient, basis, pivots });
        self.index.insert(key, id);
        id
    }

    fn dim(&self, id: u32) -> usize {
        self.spaces[id as usize].basis.len()
    }

    fn zero(&mut self, ambient: usize) -> u32 {
        self.intern(ambient, Vec::new())
    }

    fn lift(&mut self, id: u32) -> u32 {
        if let Some(&l) = self.lifts.get(&id) {
            return l;
        }
        let s = self.spaces[id as usize].clone();
        let vecs = s.basis.iter().map(|v| {
            let mut w = v.clone();
            w.push(0);
            w
        });
        let l = self.intern(s.ambient + 1, vecs.collect());
        self.lifts.insert(id, l);
        l
    }

    fn sum(&mut self, a: u32, b: u32) -> u32 {
        if let Some(&s) = self.sums.get(&(a, b)) {
            return s;
        }
        let sa = &self.spaces[a as usize];
        let ambient = sa.ambient;
        let mut vecs = sa.basis.clone();
        vecs.extend(self.spaces[b as usize].basis.iter().cloned());
        let s = self.intern(ambient, vecs);
        self.sums.insert((a, b), s);
        s
    }

    /// Image of `id` under the `i x i` principal block of `map`.
    fn image(&mut self, tag: usize, map: &Matrix<u32>, id: u32) -> u32 {
        if let Some(&v) = self.images.get(&(tag, id)) {
            return v;
        }
        let s = self.spaces[id as usize].clone();
        let i = s.ambient;
        let vecs: Vec<Vec<u32>> = s
            .basis
            .iter()
            .map(|v| {
                (0..i).map(|r| (0..i).fold(0, |acc, c| self.k.add(&acc, &self.k.mul(map.at(r, c), &v[c])))).collect()
            })
            .filter(|w: &Vec<u32>| w.iter().any(|&x| x != 0))
            .collect();
        let out = self.intern(i, vecs);
        self.images.insert((tag, id), out);
        out
    }

    /// Subspaces of dimension `dim` containing `base`, via echelon forms of the
    /// quotient by `base`.
    fn containing(&mut self, base: u32, dim: usize) -> Result<Vec<u32>> {
        if let Some(list) = self.containing.get(&(base, dim)) {
            let len = list.len() as u64;
            let list = list.clone();
            self.charge(len)?;
            return Ok(list);
        }
        let s = self.spaces[base as usize].clone();
        let d = s.ambient - s.basis.len();
        let free: Vec<usize> = (0..s.ambient).filter(|c| !s.pivots.contains(c)).collect();
        let r = dim - s.basis.len();
        let q = self.k.order();
        let mut out = Vec::new();
        for pivots in combinations(d, r) {
            // Free slots: (row t, column c) with c right of pivot t and not a pivot.
            let slots: Vec<(usize, usize)> =
                (0..r).flat_map(|t| (pivots[t] + 1..d).filter(|c| !pivots.contains(c)).map(move |c| (t, c))).collect();
            let total =
                (q as u64).checked_pow(slots.len() as u32).ok_or(Error::InfeasibleSize { budget: self.budget })?;
            self.charge(total)?;
            let mut digits = vec![0u32; slots.len()];
            loop {
                let mut rows = vec![vec![0u32; d]; r];
                for (t, &p) in pivots.iter().enumerate() {
                    rows[t][p] = 1;
                }
                for (&(t, c), &v) in slots.iter().zip(&digits) {
                    rows[t][c] = v;
                }
                let mut vecs = s.basis.clone();
                for row in rows {
                    let mut w = vec![0u32; s.ambient];
                    for (t, &c) in free.iter().enumerate() {
                        w[c] = row[t];
                    }
                    vecs.push(w);
                }
                out.push(self.intern(s.ambient, vecs));
                if !advance(&mut digits, q) {
                    break;
                }
            }
        }
        self.containing.insert((base, dim), out.clone());
        Ok(out)
    }
}

fn advance(digits: &mut [u32], q: u32) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < q {
            return true;
        }
        *d = 0;
    }
    false
}

pub(crate) fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(x + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r <= n {
        go(0, n, r, &mut Vec::new(), &mut out);
    }
    out
}

// Chains in one column whose row-i member contains required[i-1].
fn column_chains(
    cat: &mut Catalog<'_>,
    e_col: &[usize],
    required: &[u32],
    prefix: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) -> Result<()> {
    let i = prefix.len() + 1;
    if i > e_col.len() {
        out.push(prefix.clone());
        return Ok(());
    }
    let base = match prefix.last() {
        Some(&prev) => {
            let lifted = cat.lift(prev);
            cat.sum(lifted, required[i - 1])
        }
        None => required[0],
    };
    if cat.dim(base) > e_col[i - 1] {
        return Ok(());
    }
    for u in cat.containing(base, e_col[i - 1])? {
        prefix.push(u);
        column_chains(cat, e_col, required, prefix, out)?;
        prefix.pop();
    }
    Ok(())
}

/// Number of `F_q`-points of the quiver Grassmannian of `e`-dimensional
/// subrepresentations of the point `f`.
pub fn subrep_count_with_budget(f: &MapTuple, e: &DimGrid, q: u64, budget: u64) -> Result<u128> {
    let shape = f.shape();
    if e.shape() != shape {
        return Err(Error::ShapeMismatch);
    }
    let k = GaloisField::new(q)?;
    let m = shape.size();
    let maps: Vec<Matrix<u32>> = f
        .maps()
        .iter()
        .map(|u| -> Result<Matrix<u32>> {
            let vals = u.matrix().entries().iter().map(|x| k.from_rational(x)).collect::<Result<Vec<_>>>()?;
            Matrix::new(m, m, vals)
        })
        .collect::<Result<_>>()?;
    let blocks: Vec<Vec<Matrix<u32>>> =
        maps.iter().map(|mat| (1..=m).map(|i| mat.block(0, i, 0, i)).collect()).collect();
    let cols: Vec<Vec<usize>> = (1..=shape.columns()).map(|j| (1..=m).map(|i| e.get(i, j)).collect()).collect();

    let mut cat = Catalog::new(&k, budget);
    let zeros: Vec<u32> = (1..=m).map(|i| cat.zero(i)).collect();
    let mut chains = Vec::new();
    column_chains(&mut cat, &cols[0], &zeros, &mut Vec::new(), &mut chains)?;
    let mut state: BTreeMap<Vec<u32>, u128> = chains.into_iter().map(|c| (c, 1)).collect();

    for j in 1..shape.columns() {
        let mut groups: BTreeMap<Vec<u32>, u128> = BTreeMap::new();
        for (chain, w) in state {
            let req: Vec<u32> =
                chain.iter().enumerate().map(|(t, &u)| cat.image((j - 1) * m + t, &blocks[j - 1][t], u)).collect();
            *groups.entry(req).or_insert(0) += w;
        }
        let mut next: BTreeMap<Vec<u32>, u128> = BTreeMap::new();
        for (req, w) in groups {
            let mut found = Vec::new();
            column_chains(&mut cat, &cols[j], &req, &mut Vec::new(), &mut found)?;
            for c in found {
                *next.entry(c).or_insert(0) += w;
            }
        }
        state = next;
    }
    Ok(state.values().sum())
}

pub fn subrep_count(f: &MapTuple, e: &DimGrid, q: u64) -> Result<u128> {
    subrep_count_with_budget(f, e, q, DEFAULT_BUDGET)
}
