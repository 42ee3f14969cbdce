//! The Hom-scheme audit.
//!
//! `V = R_e x prod Hom(Q^{e(i,j)}, Q^i)`, where `R_e` holds tuples `(N_a)` of
//! matrices on the arrows of the grid satisfying the square relations. Inside
//! `V` sits the variety of `((N_a), (g_v))` with `M_a g_s = g_t N_a` for every
//! arrow `a: s -> t`; its open part `Hom0` (all `g_v` injective) fibres over
//! the quiver Grassmannian with fibre `prod GL(e_v)`. The audit compares the
//! codimension of `Hom0` in `V` with the number of independent equations seen
//! by the Jacobian at sampled points.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::fit::{fit_counts, DimEstimate};
use super::point_count::DEFAULT_BUDGET;
use super::{estimate_dim_with_budget, DEFAULT_QS};
use crate::error::{Error, Result};
use crate::exact_linalg::{
    kernel, mul, qint, rank, solve, Field, GaloisField, Matrix, MatrixQ, Rationals, UpperTriangular,
};
use crate::grid_quiver::{DimGrid, GridShape, MapTuple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Arrow {
    /// `(i, j) -> (i, j + 1)`
    H(usize, usize),
    /// `(i, j) -> (i + 1, j)`
    V(usize, usize),
}

impl Arrow {
    fn source(self) -> (usize, usize) {
        match self {
            Arrow::H(i, j) | Arrow::V(i, j) => (i, j),
        }
    }

    fn target(self) -> (usize, usize) {
        match self {
            Arrow::H(i, j) => (i, j + 1),
            Arrow::V(i, j) => (i + 1, j),
        }
    }
}

fn arrows(shape: GridShape) -> Vec<Arrow> {
    let (m, n) = (shape.size(), shape.columns());
    let mut out = Vec::new();
    for i in 1..=m {
        for j in 1..n {
            out.push(Arrow::H(i, j));
        }
    }
    for i in 1..m {
        for j in 1..=n {
            out.push(Arrow::V(i, j));
        }
    }
    out
}

/// Squares `(i, j)`: `N_V(i,j+1) N_H(i,j) = N_H(i+1,j) N_V(i,j)`.
fn squares(shape: GridShape) -> Vec<(usize, usize)> {
    let (m, n) = (shape.size(), shape.columns());
    (1..m).flat_map(|i| (1..n).map(move |j| (i, j))).collect()
}

#[derive(Debug, Clone, Copy)]
struct Block {
    offset: usize,
    rows: usize,
    cols: usize,
}

impl Block {
    fn var(&self, r: usize, c: usize) -> usize {
        self.offset + r * self.cols + c
    }

    fn len(&self) -> usize {
        self.rows * self.cols
    }
}

struct Layout {
    n: BTreeMap<Arrow, Block>,
    g: BTreeMap<(usize, usize), Block>,
    n_vars: usize,
    total: usize,
}

impl Layout {
    fn new(e: &DimGrid) -> Self {
        let shape = e.shape();
        let mut offset = 0;
        let mut n = BTreeMap::new();
        for a in arrows(shape) {
            let (s, t) = (a.source(), a.target());
            let b = Block { offset, rows: e.get(t.0, t.1), cols: e.get(s.0, s.1) };
            offset += b.len();
            n.insert(a, b);
        }
        let n_vars = offset;
        let mut g = BTreeMap::new();
        for i in 1..=shape.size() {
            for j in 1..=shape.columns() {
                let b = Block { offset, rows: i, cols: e.get(i, j) };
                offset += b.len();
                g.insert((i, j), b);
            }
        }
        Layout { n, g, n_vars, total: offset }
    }
}

/// One polynomial equation as a sum of `coeff * x * y` and `coeff * x` terms.
#[derive(Debug, Clone, Default)]
struct Equation {
    quadratic: Vec<(i64, usize, usize)>,
    linear: Vec<(MatrixEntry, usize)>,
}

type MatrixEntry = crate::exact_linalg::Q;

// Entry (r, c) of `L * R` for variable blocks L, R.
fn product_terms(eq: &mut Equation, sign: i64, l: &Block, rblk: &Block, r: usize, c: usize) {
    for u in 0..l.cols {
        eq.quadratic.push((sign, l.var(r, u), rblk.var(u, c)));
    }
}

fn square_equations(shape: GridShape, lay: &Layout) -> Vec<Equation> {
    let mut out = Vec::new();
    for (i, j) in squares(shape) {
        let a = lay.n[&Arrow::V(i, j + 1)];
        let b = lay.n[&Arrow::H(i, j)];
        let c = lay.n[&Arrow::H(i + 1, j)];
        let d = lay.n[&Arrow::V(i, j)];
        for r in 0..a.rows {
            for col in 0..b.cols {
                let mut eq = Equation::default();
                product_terms(&mut eq, 1, &a, &b, r, col);
                product_terms(&mut eq, -1, &c, &d, r, col);
                out.push(eq);
            }
        }
    }
    out
}

fn arrow_map(f: &MapTuple, a: Arrow) -> MatrixQ {
    match a {
        Arrow::H(i, j) => f.restriction(i, j).expect("in range").into_matrix(),
        Arrow::V(i, _) => MatrixQ::from_fn(i + 1, i, |r, c| if r == c { qint(1) } else { qint(0) }),
    }
}

fn hom_equations(f: &MapTuple, lay: &Layout) -> Vec<Equation> {
    let mut out = Vec::new();
    for (&a, nb) in &lay.n {
        let gs = lay.g[&a.source()];
        let gt = lay.g[&a.target()];
        let map = arrow_map(f, a);
        for r in 0..gt.rows {
            for c in 0..gs.cols {
                let mut eq = Equation::default();
                for u in 0..gs.rows {
                    if !map.at(r, u).is_zero() {
                        eq.linear.push((map.at(r, u).clone(), gs.var(u, c)));
                    }
                }
                product_terms(&mut eq, -1, &gt, nb, r, c);
                out.push(eq);
            }
        }
    }
    out
}

fn jacobian(eqs: &[Equation], point: &[MatrixEntry], vars: usize) -> MatrixQ {
    let mut jac = MatrixQ::zero_q(eqs.len(), vars);
    for (row, eq) in eqs.iter().enumerate() {
        for (coeff, v) in &eq.linear {
            let cur = jac.at(row, *v) + coeff;
            jac.set(row, *v, cur);
        }
        for &(sign, x, y) in &eq.quadratic {
            let s = qint(sign);
            let cx = jac.at(row, x) + &s * &point[y];
            jac.set(row, x, cx);
            let cy = jac.at(row, y) + &s * &point[x];
            jac.set(row, y, cy);
        }
    }
    jac
}

fn residual(eq: &Equation, point: &[MatrixEntry]) -> MatrixEntry {
    let mut acc = MatrixEntry::zero();
    for (coeff, v) in &eq.linear {
        acc += coeff * &point[*v];
    }
    for &(sign, x, y) in &eq.quadratic {
        acc += qint(sign) * &point[x] * &point[y];
    }
    acc
}

/// `F_q`-points of `R_e`. One side of the arrows (horizontal or vertical,
/// whichever has fewer entries) is enumerated; the square relations are then
/// linear in the other side.
pub fn commutativity_count(e: &DimGrid, q: u64, budget: u64) -> Result<u128> {
    let shape = e.shape();
    let lay = Layout::new(e);
    let k = GaloisField::new(q)?;
    let side_vars = |horizontal: bool| -> Vec<usize> {
        lay.n
            .iter()
            .filter(|(a, _)| matches!(a, Arrow::H(..)) == horizontal)
            .flat_map(|(_, b)| b.offset..b.offset + b.len())
            .collect()
    };
    let (h_vars, v_vars) = (side_vars(true), side_vars(false));
    let (enum_vars, solve_vars) = if h_vars.len() <= v_vars.len() { (h_vars, v_vars) } else { (v_vars, h_vars) };
    let iterations = (q as u128).checked_pow(enum_vars.len() as u32).filter(|&t| t <= budget as u128);
    let Some(iterations) = iterations else {
        return Err(Error::InfeasibleSize { budget });
    };
    let _ = iterations;
    let eqs = square_equations(shape, &lay);
    let col_of: BTreeMap<usize, usize> = solve_vars.iter().enumerate().map(|(t, &v)| (v, t)).collect();
    let slot_of: BTreeMap<usize, usize> = enum_vars.iter().enumerate().map(|(t, &v)| (v, t)).collect();
    let mut values = vec![0u32; enum_vars.len()];
    let mut total = 0u128;
    loop {
        let mut sys = Matrix::zero(&k, eqs.len(), solve_vars.len());
        for (row, eq) in eqs.iter().enumerate() {
            for &(sign, x, y) in &eq.quadratic {
                // Exactly one of x, y is enumerated.
                let (known, unknown) = if slot_of.contains_key(&x) { (x, y) } else { (y, x) };
                let mut coeff = values[slot_of[&known]];
                if sign < 0 {
                    coeff = k.neg(&coeff);
                }
                let c = col_of[&unknown];
                let cur = k.add(sys.at(row, c), &coeff);
                sys.set(row, c, cur);
            }
        }
        let nullity = solve_vars.len() - rank(&k, &sys);
        total += (q as u128).pow(nullity as u32);
        let mut t = 0;
        loop {
            if t == values.len() {
                return Ok(total);
            }
            values[t] += 1;
            if values[t] < q as u32 {
                break;
            }
            values[t] = 0;
            t += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomConfig {
    pub qs: Vec<u64>,
    pub budget: u64,
    pub seed: u64,
    /// Points at which the Jacobian is evaluated (at least 5 are used).
    pub samples: usize,
}

impl Default for HomConfig {
    fn default() -> Self {
        HomConfig { qs: DEFAULT_QS.to_vec(), budget: DEFAULT_BUDGET, seed: 0, samples: 8 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomReport {
    pub dim_g: usize,
    pub dim_gr: usize,
    pub dim_hom0: usize,
    pub dim_v: usize,
    pub dim_re: usize,
    pub codim: usize,
    pub indep_eqs: usize,
    pub lci: bool,
    /// Independent equations at each sampled point.
    pub point_ranks: Vec<usize>,
    pub equations: usize,
    pub variables: usize,
    pub gr_estimate: DimEstimate,
    pub re_estimate: DimEstimate,
}

/// `S(i, j)` as 0-based index sets, indexed `[j - 1][i - 1]`.
type Coords = Vec<Vec<Vec<usize>>>;

/// Coordinate subrepresentations: `S(i,j)` index sets with `|S(i,j)| = e(i,j)`,
/// nested down columns and mapped into each other by the horizontal maps.
fn coordinate_subreps(f: &MapTuple, e: &DimGrid, cap: usize) -> Vec<Coords> {
    let shape = f.shape();
    let (m, n) = (shape.size(), shape.columns());
    // supports[j][s]: rows hit by column s of f^j.
    let supports: Vec<Vec<Vec<usize>>> = f
        .maps()
        .iter()
        .map(|u| (0..m).map(|s| (0..m).filter(|&r| !u.matrix().at(r, s).is_zero()).collect()).collect())
        .collect();
    struct Search<'a> {
        e: &'a DimGrid,
        supports: Vec<Vec<Vec<usize>>>,
        m: usize,
        n: usize,
        cap: usize,
        cur: Coords,
        out: Vec<Coords>,
    }
    impl Search<'_> {
        // Fill vertex (i, j), column by column.
        fn go(&mut self, i: usize, j: usize) {
            if self.out.len() >= self.cap {
                return;
            }
            if j > self.n {
                self.out.push(self.cur.clone());
                return;
            }
            if i > self.m {
                self.go(1, j + 1);
                return;
            }
            let prev: Vec<usize> = if i > 1 { self.cur[j - 1][i - 2].clone() } else { Vec::new() };
            let want = self.e.get(i, j);
            if want < prev.len() {
                return;
            }
            let pool: Vec<usize> = (0..i).filter(|x| !prev.contains(x)).collect();
            for extra in super::point_count::combinations(pool.len(), want - prev.len()) {
                let mut s = prev.clone();
                s.extend(extra.iter().map(|&t| pool[t]));
                s.sort_unstable();
                if j > 1 {
                    // Row i of column j-1 must map into s.
                    let ok = self.cur[j - 2][i - 1]
                        .iter()
                        .all(|&src| self.supports[j - 2][src].iter().all(|r| s.contains(r)));
                    if !ok {
                        continue;
                    }
                }
                self.cur[j - 1][i - 1] = s;
                self.go(i + 1, j);
            }
        }
    }
    let mut search = Search { e, supports, m, n, cap, cur: vec![vec![Vec::new(); m]; n], out: Vec::new() };
    search.go(1, 1);
    search.out
}

fn small(rng: &mut ChaCha8Rng, span: u32) -> i64 {
    (rng.next_u32() % (2 * span + 1)) as i64 - span as i64
}

fn random_invertible(rng: &mut ChaCha8Rng, d: usize) -> MatrixQ {
    loop {
        let a = MatrixQ::from_fn(d, d, |_, _| qint(small(rng, 3)));
        if rank(&Rationals, &a) == d {
            return a;
        }
    }
}

/// A random automorphism of the representation: upper-triangular `h_j` with
/// `h_{j+1} f^j = f^j h_j`.
fn random_automorphism(f: &MapTuple, rng: &mut ChaCha8Rng) -> Vec<UpperTriangular> {
    let shape = f.shape();
    let (m, n) = (shape.size(), shape.columns());
    let slots: Vec<(usize, usize)> = (0..m).flat_map(|r| (r..m).map(move |c| (r, c))).collect();
    let per = slots.len();
    let var = |j: usize, r: usize, c: usize| j * per + slots.iter().position(|&x| x == (r, c)).expect("upper slot");
    let mut rows: Vec<Vec<crate::exact_linalg::Q>> = Vec::new();
    for j in 0..n - 1 {
        let fm = f.map(j + 1).matrix();
        for r in 0..m {
            for c in 0..m {
                // (h_{j+1} f)[r,c] - (f h_j)[r,c]
                let mut row = vec![qint(0); n * per];
                for u in r..m {
                    if !fm.at(u, c).is_zero() {
                        row[var(j + 1, r, u)] += fm.at(u, c);
                    }
                }
                for u in 0..=c {
                    if !fm.at(r, u).is_zero() {
                        row[var(j, u, c)] -= fm.at(r, u);
                    }
                }
                rows.push(row);
            }
        }
    }
    let basis = if rows.is_empty() {
        MatrixQ::identity_q(n * per)
    } else {
        kernel(&Rationals, &MatrixQ::from_rows(rows).expect("rectangular"))
    };
    loop {
        let mut x = vec![qint(0); n * per];
        for t in 0..basis.cols() {
            let c = qint(small(rng, 3));
            for (v, xv) in x.iter_mut().enumerate() {
                *xv += &c * basis.at(v, t);
            }
        }
        let hs: Vec<UpperTriangular> = (0..n)
            .map(|j| {
                let mut mat = MatrixQ::zero_q(m, m);
                for (s, &(r, c)) in slots.iter().enumerate() {
                    mat.set(r, c, x[j * per + s].clone());
                }
                UpperTriangular::new(mat).expect("upper slots only")
            })
            .collect();
        if hs.iter().all(UpperTriangular::is_invertible) {
            return hs;
        }
    }
}

fn sample_point(
    f: &MapTuple,
    e: &DimGrid,
    lay: &Layout,
    coords: &Coords,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<crate::exact_linalg::Q>> {
    let shape = f.shape();
    let h = random_automorphism(f, rng);
    let mut point = vec![qint(0); lay.total];
    let mut gs: BTreeMap<(usize, usize), MatrixQ> = BTreeMap::new();
    for (j, col) in coords.iter().enumerate() {
        for (i0, s) in col.iter().enumerate() {
            let i = i0 + 1;
            let basis = h[j].matrix().select(&(0..i).collect::<Vec<_>>(), s);
            let g = mul(&Rationals, &basis, &random_invertible(rng, s.len()))?;
            gs.insert((i, j + 1), g);
        }
    }
    for i in 1..=shape.size() {
        for j in 1..=shape.columns() {
            let b = lay.g[&(i, j)];
            let g = &gs[&(i, j)];
            debug_assert_eq!((g.rows(), g.cols()), (b.rows, b.cols));
            for r in 0..b.rows {
                for c in 0..b.cols {
                    point[b.var(r, c)] = g.at(r, c).clone();
                }
            }
        }
    }
    for (&a, nb) in &lay.n {
        let gsrc = &gs[&a.source()];
        let gt = &gs[&a.target()];
        let rhs = mul(&Rationals, &arrow_map(f, a), gsrc)?;
        let nmat = solve(&Rationals, gt, &rhs).ok_or(Error::NoPointFound)?;
        for r in 0..nb.rows {
            for c in 0..nb.cols {
                point[nb.var(r, c)] = nmat.at(r, c).clone();
            }
        }
    }
    let _ = e;
    Ok(point)
}

fn re_count_estimate(e: &DimGrid, config: &HomConfig) -> Result<DimEstimate> {
    let lay = Layout::new(e);
    let samples =
        config.qs.iter().map(|&q| Ok((q, commutativity_count(e, q, config.budget)?))).collect::<Result<Vec<_>>>()?;
    fit_counts(&samples, lay.n_vars)
}

/// Runs the audit for an explicit dimension vector.
pub fn hom_audit(f: &MapTuple, e: &DimGrid, config: &HomConfig) -> Result<HomReport> {
    if f.shape() != e.shape() {
        return Err(Error::ShapeMismatch);
    }
    let shape = f.shape();
    let lay = Layout::new(e);
    let dim_g: usize = (1..=shape.size())
        .flat_map(|i| (1..=shape.columns()).map(move |j| (i, j)))
        .map(|(i, j)| e.get(i, j).pow(2))
        .sum();
    let hom_space: usize = lay.total - lay.n_vars;

    let gr_estimate = estimate_dim_with_budget(f, e, &config.qs, config.budget)?;
    let dim_gr = gr_estimate.degree.ok_or(Error::NoPointFound)?;
    let re_estimate = re_count_estimate(e, config)?;
    let dim_re = re_estimate.degree.ok_or(Error::FitFailure)?;

    let dim_hom0 = dim_gr + dim_g;
    let dim_v = dim_re + hom_space;
    let codim = dim_v.checked_sub(dim_hom0).ok_or(Error::InconsistentDimensions)?;

    let coords = coordinate_subreps(f, e, 64);
    if coords.is_empty() {
        return Err(Error::NoPointFound);
    }
    let re_eqs = square_equations(shape, &lay);
    let mut all_eqs = hom_equations(f, &lay);
    let equations = all_eqs.len();
    all_eqs.extend(re_eqs.iter().cloned());

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut point_ranks = Vec::new();
    for t in 0..config.samples.max(5) {
        let point = sample_point(f, e, &lay, &coords[t % coords.len()], &mut rng)?;
        debug_assert!(all_eqs.iter().all(|eq| residual(eq, &point).is_zero()));
        if !all_eqs.iter().all(|eq| residual(eq, &point).is_zero()) {
            return Err(Error::NoPointFound);
        }
        let full = rank(&Rationals, &jacobian(&all_eqs, &point, lay.total));
        let base = rank(&Rationals, &jacobian(&re_eqs, &point, lay.total));
        point_ranks.push(full - base);
    }
    let indep_eqs = point_ranks.iter().copied().max().unwrap_or(0);
    Ok(HomReport {
        dim_g,
        dim_gr,
        dim_hom0,
        dim_v,
        dim_re,
        codim,
        indep_eqs,
        lci: indep_eqs == codim,
        point_ranks,
        equations,
        variables: lay.total,
        gr_estimate,
        re_estimate,
    })
}
