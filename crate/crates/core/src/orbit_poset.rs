//! Orbit census and the degeneration poset.
//!
//! Orbits are generated combinatorially: each adjacent pair of columns carries a
//! matching between height sets where a matched pair `(h, h')` has `h <= h'`.
//! Those matchings are the pivot patterns of upper-triangular partial
//! permutations, so one pair admits `bell(n + 2)` choices.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::decomposition::decomposition_from_matchings;
use crate::error::{Error, Result};
use crate::grid_quiver::{assemble_canonical, Decomposition, GridShape, MapTuple};
use crate::parametrizations::{sw_array, SwArray};

/// Largest poset [`build_poset`] will assemble.
pub const POSET_NODE_LIMIT: usize = 5000;

/// Bell numbers from `b_{m+1} = sum_k C(m, k) b_k`.
pub fn bell(m: usize) -> u128 {
    let mut b = vec![1u128];
    let mut row = vec![1u128]; // binomials C(t, .)
    for t in 0..m {
        b.push(row.iter().zip(&b).map(|(c, x)| c * x).sum());
        let mut next = vec![1u128; t + 2];
        for k in 1..=t {
            next[k] = row[k - 1] + row[k];
        }
        row = next;
    }
    b[m]
}

/// Order-compatible matchings on heights `1..=m`.
pub fn enumerate_matchings(m: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(h: usize, m: usize, used: &mut Vec<bool>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if h > m {
            out.push(cur.clone());
            return;
        }
        go(h + 1, m, used, cur, out);
        for t in h..=m {
            if !used[t] {
                used[t] = true;
                cur.push((h, t));
                go(h + 1, m, used, cur, out);
                cur.pop();
                used[t] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(1, m, &mut vec![false; m + 1], &mut Vec::new(), &mut out);
    out
}

/// Number of orbits predicted by independent matchings, `bell(n+2)^(n-1)`.
pub fn orbit_count(shape: GridShape) -> u128 {
    bell(shape.size() + 1).pow(shape.map_count() as u32)
}

/// Every orbit as a decomposition; the first map's matching varies slowest.
pub fn enumerate_orbits(shape: GridShape) -> Vec<Decomposition> {
    let per_pair = enumerate_matchings(shape.size());
    let k = shape.map_count();
    let mut idx = vec![0usize; k];
    let mut out = Vec::new();
    loop {
        let chosen: Vec<Vec<(usize, usize)>> = idx.iter().map(|&t| per_pair[t].clone()).collect();
        out.push(decomposition_from_matchings(shape, &chosen));
        let mut t = k;
        loop {
            if t == 0 {
                return out;
            }
            t -= 1;
            idx[t] += 1;
            if idx[t] < per_pair.len() {
                break;
            }
            idx[t] = 0;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub enumerated: u128,
    /// Exhaustive census over `F_2`; only computed for `n <= 3`.
    pub f2: Option<F2Census>,
    /// The closed form `(n - 1) * bell(n + 2)`.
    pub formula: u128,
}

impl CountReport {
    /// The enumeration matches both the array count and the orbit count over `F_2`.
    pub fn oracles_agree(&self) -> bool {
        self.f2.as_ref().is_none_or(|c| c.distinct_arrays == self.enumerated && c.orbits == self.enumerated)
    }

    pub fn formula_agrees(&self) -> bool {
        self.formula == self.enumerated
    }
}

pub fn count_report(shape: GridShape) -> CountReport {
    CountReport {
        enumerated: enumerate_orbits_len(shape),
        f2: (shape.n() <= 3).then(|| f2_census(shape)),
        formula: shape.map_count() as u128 * bell(shape.size() + 1),
    }
}

fn enumerate_orbits_len(shape: GridShape) -> u128 {
    if shape.n() <= 3 {
        enumerate_orbits(shape).len() as u128
    } else {
        orbit_count(shape)
    }
}

// Bit matrices over F_2: row r is a mask, bit c set when entry (r, c) is 1.
type BitMatrix = [u8; 8];

fn bit_mul(b: &BitMatrix, a: &BitMatrix, m: usize) -> BitMatrix {
    let mut out = [0u8; 8];
    for r in 0..m {
        let mut acc = 0;
        for (c, row) in a.iter().enumerate().take(m) {
            if b[r] >> c & 1 == 1 {
                acc ^= row;
            }
        }
        out[r] = acc;
    }
    out
}

fn bit_rank(rows: &[u8]) -> u32 {
    let mut basis = [0u8; 8];
    let mut rank = 0;
    for &row in rows {
        let mut v = row;
        while v != 0 {
            let lead = 7 - v.leading_zeros() as usize;
            if basis[lead] == 0 {
                basis[lead] = v;
                rank += 1;
                break;
            }
            v ^= basis[lead];
        }
    }
    rank
}

/// Tuples of upper-triangular 0/1 matrices, packed into the bits of a code.
struct BitTuples {
    m: usize,
    k: usize,
    slots: Vec<(usize, usize)>,
}

impl BitTuples {
    fn new(shape: GridShape) -> Self {
        let m = shape.size();
        BitTuples { m, k: shape.map_count(), slots: (0..m).flat_map(|r| (r..m).map(move |c| (r, c))).collect() }
    }

    fn count(&self) -> u64 {
        1 << (self.slots.len() * self.k)
    }

    fn decode(&self, code: u64) -> Vec<BitMatrix> {
        let bits = self.slots.len();
        (0..self.k)
            .map(|t| {
                let mut mat = [0u8; 8];
                for (s, &(r, c)) in self.slots.iter().enumerate() {
                    if code >> (t * bits + s) & 1 == 1 {
                        mat[r] |= 1 << c;
                    }
                }
                mat
            })
            .collect()
    }

    fn encode(&self, mats: &[BitMatrix]) -> u64 {
        let bits = self.slots.len();
        let mut code = 0;
        for (t, mat) in mats.iter().enumerate() {
            for (s, &(r, c)) in self.slots.iter().enumerate() {
                if mat[r] >> c & 1 == 1 {
                    code |= 1 << (t * bits + s);
                }
            }
        }
        code
    }

    /// Every south-west rank of every window, 3 bits each.
    fn array_key(&self, mats: &[BitMatrix], windows: &[(usize, usize)]) -> u128 {
        let m = self.m;
        let mut key = 0u128;
        for &(a, b) in windows {
            let mut w = mats[a - 1];
            for mat in &mats[a..b] {
                w = bit_mul(mat, &w, m);
            }
            for p in 1..=m {
                for q in p..=m {
                    let mask = ((1u16 << q) - 1) as u8;
                    let rows: Vec<u8> = (p - 1..m).map(|r| w[r] & mask).collect();
                    key = key << 3 | bit_rank(&rows) as u128;
                }
            }
        }
        key
    }

    fn to_point(&self, shape: GridShape, mats: &[BitMatrix]) -> MapTuple {
        let ones: Vec<Vec<(usize, usize)>> = mats
            .iter()
            .map(|mat| {
                self.slots.iter().filter(|&&(r, c)| mat[r] >> c & 1 == 1).map(|&(r, c)| (r + 1, c + 1)).collect()
            })
            .collect();
        let refs: Vec<&[(usize, usize)]> = ones.iter().map(Vec::as_slice).collect();
        MapTuple::from_ones(shape, &refs).expect("upper-triangular slots")
    }
}

fn find(parent: &mut [u32], x: u32) -> u32 {
    let mut root = x;
    while parent[root as usize] != root {
        root = parent[root as usize];
    }
    let mut y = x;
    while parent[y as usize] != root {
        let next = parent[y as usize];
        parent[y as usize] = root;
        y = next;
    }
    root
}

/// Exhaustive data over all tuples of 0/1 upper-triangular matrices, with
/// ranks taken over `F_2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Census {
    pub tuples: u64,
    /// Distinct south-west arrays.
    pub distinct_arrays: u128,
    /// Orbits of the upper-triangular group over `F_2`, by union-find over
    /// elementary generators.
    pub orbits: u128,
    /// Smallest-code tuple whose array is not the array of any enumerated
    /// orbit, if one exists.
    pub unmatched: Option<MapTuple>,
}

pub fn f2_census(shape: GridShape) -> F2Census {
    assert!(shape.n() <= 3, "exhaustive census only for n <= 3");
    let t = BitTuples::new(shape);
    let (m, k, n) = (t.m, t.k, shape.columns());
    let windows = shape.windows();

    let known: BTreeSet<u128> = enumerate_orbits(shape)
        .iter()
        .map(|d| {
            let f = assemble_canonical(shape, d).expect("matchings assemble");
            let mats: Vec<BitMatrix> = f
                .maps()
                .iter()
                .map(|u| {
                    let mut mat = [0u8; 8];
                    for (r, c) in u.support() {
                        mat[r - 1] |= 1 << (c - 1);
                    }
                    mat
                })
                .collect();
            t.array_key(&mats, &windows)
        })
        .collect();

    let total = t.count();
    let mut seen: BTreeSet<u128> = BTreeSet::new();
    let mut unmatched = None;
    let mut parent: Vec<u32> = (0..total as u32).collect();
    for code in 0..total {
        let mats = t.decode(code);
        let key = t.array_key(&mats, &windows);
        if unmatched.is_none() && !known.contains(&key) {
            unmatched = Some(t.to_point(shape, &mats));
        }
        seen.insert(key);
        // h_j = I + E_rc acts by a column operation on f^j and a row
        // operation on f^{j-1}; over F_2 these generate the group.
        for j in 0..n {
            for r in 0..m {
                for c in r + 1..m {
                    let mut g = mats.clone();
                    if j < k {
                        for row in g[j].iter_mut().take(m) {
                            if *row >> r & 1 == 1 {
                                *row ^= 1 << c;
                            }
                        }
                    }
                    if j >= 1 {
                        let src = g[j - 1][c];
                        g[j - 1][r] ^= src;
                    }
                    let (x, y) = (find(&mut parent, code as u32), find(&mut parent, t.encode(&g) as u32));
                    if x != y {
                        parent[x as usize] = y;
                    }
                }
            }
        }
    }
    let orbits = (0..total as u32).filter(|&x| parent[x as usize] == x).count() as u128;
    F2Census { tuples: total, distinct_arrays: seen.len() as u128, orbits, unmatched }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitNode {
    pub id: usize,
    pub decomposition: Decomposition,
    pub representative: MapTuple,
    pub sw: SwArray,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPoset {
    shape: GridShape,
    nodes: Vec<OrbitNode>,
    edges: Vec<(usize, usize)>,
}

impl OrbitPoset {
    /// Poset on the given orbits; ids are positions in `orbits`.
    pub fn from_orbits(shape: GridShape, orbits: Vec<Decomposition>) -> Result<OrbitPoset> {
        if orbits.len() > POSET_NODE_LIMIT {
            return Err(Error::InfeasibleSize { budget: POSET_NODE_LIMIT as u64 });
        }
        let mut nodes = Vec::with_capacity(orbits.len());
        for (id, d) in orbits.into_iter().enumerate() {
            let representative = assemble_canonical(shape, &d)?;
            let sw = sw_array(&representative);
            nodes.push(OrbitNode { id, decomposition: d, representative, sw });
        }
        let n = nodes.len();
        let words = n.div_ceil(64);
        // below[u] holds every v strictly below u.
        let mut below = vec![vec![0u64; words]; n];
        for u in 0..n {
            for v in 0..n {
                if u != v && nodes[v].sw.le(&nodes[u].sw) && nodes[v].sw != nodes[u].sw {
                    below[u][v / 64] |= 1 << (v % 64);
                }
            }
        }
        let mut edges = Vec::new();
        for u in 0..n {
            let mut covered = vec![0u64; words];
            for w in 0..n {
                if below[u][w / 64] >> (w % 64) & 1 == 1 {
                    for (c, b) in covered.iter_mut().zip(&below[w]) {
                        *c |= b;
                    }
                }
            }
            for v in 0..n {
                let is_below = below[u][v / 64] >> (v % 64) & 1 == 1;
                let skipped = covered[v / 64] >> (v % 64) & 1 == 1;
                if is_below && !skipped {
                    edges.push((u, v));
                }
            }
        }
        Ok(OrbitPoset { shape, nodes, edges })
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn nodes(&self) -> &[OrbitNode] {
        &self.nodes
    }

    /// Cover relations `(upper, lower)`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Nodes with nothing above them.
    pub fn maxima(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&v| !self.edges.iter().any(|e| e.1 == v)).collect()
    }

    pub fn minima(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&u| !self.edges.iter().any(|e| e.0 == u)).collect()
    }
}

pub fn build_poset(shape: GridShape) -> Result<OrbitPoset> {
    if orbit_count(shape) > POSET_NODE_LIMIT as u128 {
        return Err(Error::InfeasibleSize { budget: POSET_NODE_LIMIT as u64 });
    }
    OrbitPoset::from_orbits(shape, enumerate_orbits(shape))
}

pub fn export_dot(poset: &OrbitPoset) -> String {
    let mut s = String::new();
    s.push_str("digraph orbits {\n");
    s.push_str("  rankdir=TB;\n");
    s.push_str("  node [shape=box];\n");
    for node in poset.nodes() {
        let label = format!("{}: {}", node.id, node.decomposition.label());
        let _ = writeln!(s, "  o{} [label=\"{}\"];", node.id, label);
    }
    for &(u, v) in poset.edges() {
        let _ = writeln!(s, "  o{u} -> o{v};");
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(n: usize) -> GridShape {
        GridShape::new(n).unwrap()
    }

    #[test]
    fn bell_numbers() {
        let expected = [1u128, 1, 2, 5, 15, 52, 203, 877];
        for (m, &b) in expected.iter().enumerate() {
            assert_eq!(bell(m), b);
        }
    }

    #[test]
    fn matchings_are_counted_by_bell() {
        for m in 1..=5 {
            assert_eq!(enumerate_matchings(m).len() as u128, bell(m + 1));
        }
    }

    #[test]
    fn orbit_counts() {
        assert_eq!(enumerate_orbits(shape(2)).len(), 15);
        assert_eq!(enumerate_orbits(shape(3)).len(), 2704);
        for d in enumerate_orbits(shape(3)) {
            d.check_column_heights(shape(3)).unwrap();
        }
    }

    #[test]
    fn count_report_for_two_columns() {
        let r = count_report(shape(2));
        let c = r.f2.clone().unwrap();
        assert_eq!((r.enumerated, c.distinct_arrays, c.orbits, r.formula), (15, 15, 15, 15));
        assert_eq!((c.tuples, c.unmatched), (64, None));
        assert!(r.oracles_agree() && r.formula_agrees());
    }

    #[test]
    fn a_middle_vector_split_across_two_lines() {
        // e2 -> e1 + e2 -> e1: the middle vector cannot be moved onto one
        // coordinate line, so this point is not a sum of the enumerated shapes.
        let s = shape(3);
        let f = MapTuple::from_ones(s, &[&[(1, 2), (2, 2)], &[(1, 1)]]).unwrap();
        let arrays: BTreeSet<Vec<usize>> =
            enumerate_orbits(s).iter().map(|d| sw_array(&assemble_canonical(s, d).unwrap()).values()).collect();
        assert!(!arrays.contains(&sw_array(&f).values()));
        assert!(crate::decomposition::decompose(&f).is_err());
    }

    #[test]
    fn bit_rank_matches_small_cases() {
        assert_eq!(bit_rank(&[0b011, 0b110, 0b101]), 2);
        assert_eq!(bit_rank(&[0b001, 0b010, 0b100]), 3);
        assert_eq!(bit_rank(&[0, 0]), 0);
        assert_eq!(bit_rank(&[0b11, 0b11]), 1);
    }

    #[test]
    fn poset_for_two_columns_has_unique_extremes() {
        let p = build_poset(shape(2)).unwrap();
        assert_eq!(p.nodes().len(), 15);
        let top = p.maxima();
        let bottom = p.minima();
        assert_eq!(top.len(), 1);
        assert_eq!(bottom.len(), 1);
        assert_eq!(p.nodes()[top[0]].representative, MapTuple::identity(shape(2)));
        assert_eq!(p.nodes()[bottom[0]].representative, MapTuple::zero(shape(2)));
    }

    #[test]
    fn single_node_dot() {
        let d = enumerate_orbits(shape(2)).remove(0);
        let p = OrbitPoset::from_orbits(shape(2), vec![d]).unwrap();
        let dot = export_dot(&p);
        assert!(dot.starts_with("digraph orbits {\n"));
        assert_eq!(dot.matches("->").count(), 0);
        assert_eq!(dot.matches("[label=").count(), 1);
    }

    #[test]
    fn large_posets_are_refused() {
        assert_eq!(build_poset(shape(4)), Err(Error::InfeasibleSize { budget: POSET_NODE_LIMIT as u64 }));
    }
}
