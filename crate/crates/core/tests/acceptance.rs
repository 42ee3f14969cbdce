//! Acceptance run: one PASS/FAIL line per criterion, each with its wall-clock
//! limit. Exits non-zero when any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lindeg_core::decomposition::independence_check;
use lindeg_core::degeneration_lab::{
    estimate_dim, euler_bound, flat_scan_poset, hom_report, subrep_count, HomConfig, ScanConfig,
};
use lindeg_core::grid_quiver::heights_rank_vector;
use lindeg_core::orbit_poset::{build_poset, count_report, enumerate_orbits, export_dot};
use lindeg_core::parametrizations::{reconstruct, validate_array_inequalities};
use lindeg_core::schubert::{length, target_dims};
use lindeg_core::{
    assemble_canonical, decompose, degenerates, enumerate_indecomposables, rank_vector, sw_array, Decomposition,
    DimGrid, GridShape, HeightVector, MapTuple, MatrixQ, Permutation, UpperTriangular,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

type Outcome = Result<String, String>;
type Criterion = (usize, &'static str, Duration, fn() -> Outcome);
type Choice = BTreeMap<(usize, usize), u16>;
type Admissible<'a> = &'a dyn Fn(&Choice, (usize, usize), u16) -> bool;
type Dot = (BTreeSet<String>, BTreeSet<(String, String)>);

fn shape(n: usize) -> GridShape {
    GridShape::new(n).unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: impl std::fmt::Debug) -> String {
    format!("{e:?}")
}

/// The fifteen orbit representatives for two columns, as the positions of
/// their ones, numbered 1 to 15.
const ORBIT_ONES: [&[(usize, usize)]; 15] = [
    &[(1, 1), (2, 2), (3, 3)],
    &[(1, 1), (2, 2)],
    &[(1, 1), (3, 3)],
    &[(2, 2), (3, 3)],
    &[(1, 1), (2, 3)],
    &[(1, 3), (2, 2)],
    &[(1, 2), (2, 3)],
    &[(1, 2), (3, 3)],
    &[(1, 1)],
    &[(2, 2)],
    &[(3, 3)],
    &[(2, 3)],
    &[(1, 3)],
    &[(1, 2)],
    &[],
];

const ORBIT_RANKS: [[usize; 6]; 15] = [
    [1, 1, 2, 1, 2, 3],
    [1, 1, 2, 1, 2, 2],
    [1, 1, 1, 1, 1, 2],
    [0, 0, 1, 0, 1, 2],
    [1, 1, 1, 1, 2, 2],
    [0, 0, 1, 1, 2, 2],
    [0, 1, 1, 1, 2, 2],
    [0, 1, 1, 1, 1, 2],
    [1, 1, 1, 1, 1, 1],
    [0, 0, 1, 0, 1, 1],
    [0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 1, 1],
    [0, 0, 0, 1, 1, 1],
    [0, 1, 1, 1, 1, 1],
    [0, 0, 0, 0, 0, 0],
];

/// Cover relations `(upper, lower)` in the numbering above.
const HASSE: [(usize, usize); 24] = [
    (1, 2),
    (1, 4),
    (1, 3),
    (2, 6),
    (4, 6),
    (2, 5),
    (3, 5),
    (3, 8),
    (4, 8),
    (6, 10),
    (6, 7),
    (5, 7),
    (8, 7),
    (5, 9),
    (8, 11),
    (7, 14),
    (10, 14),
    (9, 14),
    (10, 12),
    (7, 12),
    (11, 12),
    (14, 13),
    (12, 13),
    (13, 15),
];

const INDECOMPOSABLE_LAYOUTS: [[usize; 12]; 12] = [
    [1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
    [1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0, 0],
    [0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0],
    [0, 1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1],
    [0, 0, 1, 1, 1, 1, 0, 0, 0, 1, 1, 1],
    [0, 1, 1, 0, 1, 1, 0, 0, 1, 0, 1, 1],
    [0, 0, 1, 0, 1, 1, 0, 0, 0, 0, 1, 1],
    [0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1],
];

fn two_column_point(k: usize) -> MapTuple {
    MapTuple::from_ones(shape(2), &[ORBIT_ONES[k - 1]]).unwrap()
}

fn w231() -> Permutation {
    Permutation::new(vec![2, 3, 1]).unwrap()
}

fn criterion_1() -> Outcome {
    let f = MapTuple::from_ones(shape(2), &[&[(2, 2), (3, 3)]]).map_err(err)?;
    let flat = rank_vector(&f).flat();
    ensure(flat == [0, 0, 1, 0, 1, 2], format!("rank vector {flat:?}"))?;
    let s = sw_array(&f);
    let t = s.table(1, 1).ok_or("no window (1,1)")?;
    let upper: Vec<Vec<usize>> = (1..=3).map(|p| (p..=3).map(|q| t.get(p, q)).collect()).collect();
    ensure(upper == [vec![0, 1, 2], vec![1, 2], vec![1]], format!("array {upper:?}"))?;
    Ok(format!("r = {flat:?}, s = {upper:?}"))
}

fn criterion_2() -> Outcome {
    let orbits = enumerate_orbits(shape(2));
    ensure(orbits.len() == 15, format!("{} orbits", orbits.len()))?;
    let reps: Vec<MapTuple> =
        orbits.iter().map(|d| assemble_canonical(shape(2), d)).collect::<Result<_, _>>().map_err(err)?;
    ensure(reps.iter().all(|f| f.map(1).is_partial_permutation()), "a representative is not a partial permutation")?;
    let mine: BTreeSet<Vec<(usize, usize)>> = reps.iter().map(|f| f.map(1).support()).collect();
    let printed: BTreeSet<Vec<(usize, usize)>> = ORBIT_ONES.iter().map(|ones| ones.to_vec()).collect();
    ensure(
        mine == printed,
        format!("representatives differ: {:?}", mine.symmetric_difference(&printed).collect::<Vec<_>>()),
    )?;
    for (k, expected) in ORBIT_RANKS.iter().enumerate() {
        let got = rank_vector(&two_column_point(k + 1)).flat();
        ensure(got == expected, format!("f^{}: rank vector {got:?}, expected {expected:?}", k + 1))?;
    }
    Ok("15 representatives and rank vectors match".into())
}

/// A minimal reader for the DOT subset the exporter writes. Returns node ids
/// and edges, and rejects anything outside that grammar.
fn parse_dot(text: &str) -> Result<Dot, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty")?;
    let name = header.strip_prefix("digraph ").and_then(|r| r.strip_suffix(" {")).ok_or("bad header")?;
    ensure(is_ident(name), "bad graph name")?;
    let mut nodes = BTreeSet::new();
    let mut edges = BTreeSet::new();
    let mut closed = false;
    for line in lines {
        let line = line.trim();
        if closed {
            ensure(line.is_empty(), "text after closing brace")?;
            continue;
        }
        if line == "}" {
            closed = true;
            continue;
        }
        let stmt = line.strip_suffix(';').ok_or_else(|| format!("missing ';' in {line:?}"))?;
        if let Some((a, b)) = stmt.split_once(" -> ") {
            ensure(is_ident(a) && is_ident(b), format!("bad edge {stmt:?}"))?;
            edges.insert((a.to_string(), b.to_string()));
        } else if let Some((id, attrs)) = stmt.split_once(' ') {
            let attrs = attrs.strip_prefix('[').and_then(|a| a.strip_suffix(']')).ok_or("bad attribute list")?;
            for attr in split_attrs(attrs)? {
                let (k, v) = attr.split_once('=').ok_or("bad attribute")?;
                ensure(is_ident(k), "bad attribute key")?;
                ensure(is_ident(v) || is_quoted(v), format!("bad attribute value {v:?}"))?;
            }
            ensure(is_ident(id), format!("bad node id {id:?}"))?;
            if id != "node" && id != "edge" && id != "graph" {
                nodes.insert(id.to_string());
            }
        } else {
            let (k, v) = stmt.split_once('=').ok_or_else(|| format!("unknown statement {stmt:?}"))?;
            ensure(is_ident(k) && is_ident(v), "bad graph attribute")?;
        }
    }
    ensure(closed, "missing closing brace")?;
    for (a, b) in &edges {
        ensure(nodes.contains(a) && nodes.contains(b), "edge to undeclared node")?;
    }
    Ok((nodes, edges))
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_quoted(s: &str) -> bool {
    s.len() >= 2 && s.starts_with('"') && s.ends_with('"') && !s[1..s.len() - 1].contains('"')
}

fn split_attrs(s: &str) -> Result<Vec<&str>, String> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut quoted = false;
    for (i, c) in s.char_indices() {
        match c {
            '"' => quoted = !quoted,
            ',' if !quoted => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    ensure(!quoted, "unterminated string")?;
    out.push(s[start..].trim());
    Ok(out)
}

fn criterion_3() -> Outcome {
    let poset = build_poset(shape(2)).map_err(err)?;
    ensure(poset.nodes().len() == 15, format!("{} nodes", poset.nodes().len()))?;
    let mut label = BTreeMap::new();
    for node in poset.nodes() {
        let k = (1..=15)
            .find(|&k| two_column_point(k) == node.representative)
            .ok_or_else(|| format!("orbit {} has no printed representative", node.id))?;
        label.insert(node.id, k);
    }
    let edges: BTreeSet<(usize, usize)> = poset.edges().iter().map(|(u, v)| (label[u], label[v])).collect();
    let printed: BTreeSet<(usize, usize)> = HASSE.iter().copied().collect();
    ensure(
        edges == printed,
        format!("edge sets differ: {:?}", edges.symmetric_difference(&printed).collect::<Vec<_>>()),
    )?;
    let tops: Vec<usize> = poset.maxima().iter().map(|v| label[v]).collect();
    let bottoms: Vec<usize> = poset.minima().iter().map(|v| label[v]).collect();
    ensure(tops == [1] && bottoms == [15], format!("top {tops:?}, bottom {bottoms:?}"))?;
    let (nodes, dot_edges) = parse_dot(&export_dot(&poset))?;
    ensure(nodes.len() == 15 && dot_edges.len() == 24, "DOT export lost nodes or edges")?;
    Ok("15 nodes, 24 cover relations, top f^1, bottom f^15, DOT parses".into())
}

fn criterion_4() -> Outcome {
    let s = shape(3);
    let f = MapTuple::from_ones(s, &[&[(2, 2), (4, 4)], &[(1, 1), (3, 3), (4, 4)]]).map_err(err)?;
    let heights: [[usize; 3]; 7] = [[4, 0, 0], [3, 3, 0], [2, 0, 0], [1, 1, 1], [0, 4, 4], [0, 2, 2], [0, 0, 3]];
    let expected = Decomposition::from_summands(heights.iter().map(|h| (HeightVector::new(s, h.to_vec()).unwrap(), 1)));
    let d = decompose(&f).map_err(err)?;
    ensure(d == expected, format!("decomposed to {}", d.label()))?;
    let back = assemble_canonical(s, &d).map_err(err)?;
    ensure(back == f, "assembled point differs")?;
    ensure(rank_vector(&back) == rank_vector(&f), "rank vectors differ")?;
    Ok(d.label())
}

fn criterion_5() -> Outcome {
    let us = enumerate_indecomposables(shape(2));
    ensure(us.len() == 12, format!("{} indecomposables", us.len()))?;
    let mut mine: Vec<Vec<usize>> = us.iter().map(|h| heights_rank_vector(h).layout()).collect();
    let mut printed: Vec<Vec<usize>> = INDECOMPOSABLE_LAYOUTS.iter().map(|v| v.to_vec()).collect();
    mine.sort();
    printed.sort();
    ensure(mine == printed, "rank vectors of the indecomposables differ")?;
    ensure(independence_check(shape(2)), "not independent")?;
    Ok("12 vectors match, independent".into())
}

fn criterion_6() -> Outcome {
    let r = count_report(shape(3));
    let c = r.f2.as_ref().ok_or("no census")?;
    let line = format!(
        "enumerated {}, F_2 distinct arrays {}, F_2 orbits {}, over {} tuples; closed form {} ({})",
        r.enumerated,
        c.distinct_arrays,
        c.orbits,
        c.tuples,
        r.formula,
        if r.formula_agrees() { "agrees" } else { "disagrees, reported only" },
    );
    if r.oracles_agree() {
        Ok(line)
    } else {
        let witness = c.unmatched.as_ref().map(|f| format!("; unmatched point {:?}", supports(f))).unwrap_or_default();
        Err(format!("{line}{witness}"))
    }
}

fn supports(f: &MapTuple) -> Vec<Vec<(usize, usize)>> {
    f.maps().iter().map(|m| m.support()).collect()
}

fn bruhat_le(u: &[usize], w: &[usize]) -> bool {
    (1..=u.len()).all(|k| {
        let mut a = u[..k].to_vec();
        let mut b = w[..k].to_vec();
        a.sort();
        b.sort();
        a.iter().zip(&b).all(|(x, y)| x <= y)
    })
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, m);
            out.push(q);
        }
    }
    out
}

/// Subspaces of `F_2^dim` as bitmasks over the `2^dim` vectors.
fn f2_subspaces(dim: usize) -> Vec<u16> {
    let size = 1usize << dim;
    (0u32..1 << size)
        .map(|s| s as u16)
        .filter(|&s| {
            s & 1 == 1
                && (0..size).all(|a| (0..size).all(|b| s >> a & 1 == 0 || s >> b & 1 == 0 || s >> (a ^ b) & 1 == 1))
        })
        .collect()
}

/// Subrepresentations over `F_2` by brute force over vector sets.
fn f2_subrep_oracle(f: &MapTuple, e: &DimGrid) -> u128 {
    let s = f.shape();
    let (m, cols) = (s.size(), s.columns());
    let spaces: Vec<Vec<u16>> = (0..=m).map(f2_subspaces).collect();
    let dim_of = |set: u16| set.count_ones().trailing_zeros() as usize;
    // Column j map on vector bits, with coordinates e_1.. as bits 0..
    let apply = |j: usize, v: usize| -> usize {
        let mat = f.map(j).matrix();
        let mut out = 0;
        for r in 0..m {
            let mut bit = 0;
            for c in 0..m {
                if v >> c & 1 == 1 && *mat.at(r, c) != lindeg_core::exact_linalg::qint(0) {
                    bit ^= 1;
                }
            }
            out |= bit << r;
        }
        out
    };
    let cells: Vec<(usize, usize)> = (1..=cols).flat_map(|j| (1..=m).map(move |i| (i, j))).collect();
    let mut count = 0u128;
    let mut chosen = Choice::new();
    fn walk(
        t: usize,
        cells: &[(usize, usize)],
        chosen: &mut Choice,
        count: &mut u128,
        ok: Admissible,
        options: &dyn Fn((usize, usize)) -> Vec<u16>,
    ) {
        if t == cells.len() {
            *count += 1;
            return;
        }
        for u in options(cells[t]) {
            if ok(chosen, cells[t], u) {
                chosen.insert(cells[t], u);
                walk(t + 1, cells, chosen, count, ok, options);
                chosen.remove(&cells[t]);
            }
        }
    }
    let options = |(i, j): (usize, usize)| -> Vec<u16> {
        spaces[i].iter().copied().filter(|&u| dim_of(u) == e.get(i, j)).collect()
    };
    let ok = |chosen: &Choice, (i, j): (usize, usize), u: u16| -> bool {
        // Vertical: the space one row up sits inside this one.
        if i > 1 && chosen[&(i - 1, j)] & !u != 0 {
            return false;
        }
        // Horizontal: the previous column's space maps into this one.
        if j > 1 {
            let prev = chosen[&(i, j - 1)];
            for v in 0..1usize << i {
                if prev >> v & 1 == 1 && u >> apply(j - 1, v) & 1 == 0 {
                    return false;
                }
            }
        }
        true
    };
    walk(0, &cells, &mut chosen, &mut count, &ok, &options);
    count
}

fn criterion_7() -> Outcome {
    let w = w231();
    let e = target_dims(&w).map_err(err)?;
    let f = MapTuple::identity(e.shape());
    let est = estimate_dim(&f, &e, &[2, 3, 5, 7]).map_err(err)?;
    ensure(est.degree == Some(2), format!("degree {:?}", est.degree))?;
    ensure(est.validated, "fit through q = 2, 3, 5 does not hold at q = 7")?;
    let bruhat: Vec<Vec<usize>> = permutations(3).into_iter().filter(|u| bruhat_le(u, w.one_line())).collect();
    for &(q, count) in &est.samples {
        let cells: u128 =
            bruhat.iter().map(|u| (q as u128).pow(length(&Permutation::new(u.clone()).unwrap()) as u32)).sum();
        ensure(count == cells, format!("q = {q}: {count} points, Bruhat cells give {cells}"))?;
    }
    let fast = subrep_count(&f, &e, 2).map_err(err)?;
    let brute = f2_subrep_oracle(&f, &e);
    ensure(fast == brute, format!("q = 2: {fast} against exhaustive {brute}"))?;
    Ok(format!("coefficients {:?}, samples {:?}, exhaustive q=2 count {brute}", est.coefficients, est.samples))
}

fn criterion_8() -> Outcome {
    let w = w231();
    let f = MapTuple::identity(w.shape().map_err(err)?);
    let r = hom_report(&w, &f, &HomConfig::default()).map_err(err)?;
    let got = (r.dim_g, r.dim_gr, r.dim_hom0, r.dim_v, r.dim_re, r.codim, r.indep_eqs, r.lci);
    ensure(got == (7, 2, 9, 17, 4, 8, 8, true), format!("report {got:?}"))?;
    Ok(format!("{got:?}"))
}

fn criterion_9() -> Outcome {
    let w = w231();
    let e = target_dims(&w).map_err(err)?;
    let bound = euler_bound(&e, &DimGrid::full(e.shape())).map_err(err)?;
    ensure(bound == 2, format!("euler bound {bound}"))?;
    let poset = build_poset(shape(2)).map_err(err)?;
    let config = ScanConfig { qs: vec![2, 3, 5, 7], ..ScanConfig::default() };
    let scan = flat_scan_poset(&w, &poset, &config).map_err(err)?;
    for row in &scan.rows {
        let d = row.est_dim().ok_or_else(|| format!("orbit {} has no points", row.orbit_id))?;
        ensure(
            d as i64 >= row.euler_bound,
            format!("orbit {}: dimension {d} below {}", row.orbit_id, row.euler_bound),
        )?;
    }
    Ok(format!("bound {bound}, {} scan rows above it", scan.rows.len()))
}

fn borel_strategy(m: usize, columns: usize) -> impl Strategy<Value = Vec<UpperTriangular>> {
    let entry = prop::collection::vec(-3i64..=3, m * m);
    let diag = prop::collection::vec(prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]), m);
    prop::collection::vec((entry, diag), columns).prop_map(move |hs| {
        hs.into_iter()
            .map(|(vals, d)| {
                let rows: Vec<Vec<i64>> = (0..m)
                    .map(|r| {
                        (0..m)
                            .map(|c| {
                                if r == c {
                                    d[r]
                                } else if r < c {
                                    vals[r * m + c]
                                } else {
                                    0
                                }
                            })
                            .collect()
                    })
                    .collect();
                let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
                UpperTriangular::new(MatrixQ::from_ints(&refs).unwrap()).unwrap()
            })
            .collect()
    })
}

fn run_cases<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn criterion_10() -> Outcome {
    let mut notes = Vec::new();
    for n in [2, 3] {
        let s = shape(n);
        let orbits = enumerate_orbits(s);
        let reps: Vec<MapTuple> = orbits.iter().map(|d| assemble_canonical(s, d).unwrap()).collect();

        // (a) invariance, plus (b) and (d) on the same moved points.
        let count = reps.len();
        let strategy = (
            0..count,
            0..count,
            any::<bool>(),
            borel_strategy(s.size(), s.columns()),
            borel_strategy(s.size(), s.columns()),
        );
        run_cases(1000, strategy, |(a, b, same, h1, h2)| {
            let b = if same { a } else { b };
            let f = reps[a].act(&h1).unwrap();
            let g = reps[b].act(&h2).unwrap();
            prop_assert_eq!(rank_vector(&f), rank_vector(&reps[a]));
            prop_assert_eq!(sw_array(&f), sw_array(&reps[a]));
            prop_assert_eq!(sw_array(&g), sw_array(&reps[b]));
            prop_assert_eq!(rank_vector(&f) == rank_vector(&g), sw_array(&f) == sw_array(&g));
            prop_assert!(validate_array_inequalities(&sw_array(&f)).ok());
            Ok(())
        })
        .map_err(|e| format!("n = {n}: {e}"))?;

        // (b) exhaustively on representatives.
        let rvs: Vec<_> = reps.iter().map(rank_vector).collect();
        let sws: Vec<_> = reps.iter().map(sw_array).collect();
        let distinct_rv: BTreeSet<_> = rvs.iter().map(|r| r.coordinates()).collect();
        let distinct_sw: BTreeSet<_> = sws.iter().map(|a| a.values()).collect();
        ensure(distinct_rv.len() == count && distinct_sw.len() == count, format!("n = {n}: invariants collide"))?;

        // (c) and (d) on every orbit.
        for (d, (f, a)) in orbits.iter().zip(reps.iter().zip(&sws)) {
            ensure(reconstruct(a).map_err(err)? == *f, format!("n = {n}: reconstruct fails on {}", d.label()))?;
            ensure(decompose(f).map_err(err)? == *d, format!("n = {n}: decompose fails on {}", d.label()))?;
            ensure(validate_array_inequalities(a).ok(), format!("n = {n}: inequalities fail on {}", d.label()))?;
        }
        notes.push(format!("n={n}: {count} orbits"));
    }

    // (e) partial order on the two-column orbits.
    let s = shape(2);
    let reps: Vec<MapTuple> = enumerate_orbits(s).iter().map(|d| assemble_canonical(s, d).unwrap()).collect();
    let le = |a: usize, b: usize| degenerates(&reps[b], &reps[a]).unwrap();
    for a in 0..reps.len() {
        ensure(le(a, a), "not reflexive")?;
        for b in 0..reps.len() {
            ensure(a == b || !(le(a, b) && le(b, a)), "not antisymmetric")?;
            for c in 0..reps.len() {
                ensure(!(le(a, b) && le(b, c)) || le(a, c), "not transitive")?;
            }
        }
    }
    Ok(format!("{}; 1000 Borel changes each; partial order on 15", notes.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "rank vector and array of diag(0,1,1)", Duration::from_secs(60), criterion_1),
        (2, "fifteen orbits and their rank vectors", Duration::from_secs(60), criterion_2),
        (3, "Hasse diagram for two columns", Duration::from_secs(60), criterion_3),
        (4, "three-column decomposition round trip", Duration::from_secs(60), criterion_4),
        (5, "indecomposable rank vectors", Duration::from_secs(60), criterion_5),
        (6, "orbit count cross-check, three columns", Duration::from_secs(300), criterion_6),
        (7, "point counts of the [231] fibre", Duration::from_secs(60), criterion_7),
        (8, "Hom-scheme audit of the [231] fibre", Duration::from_secs(120), criterion_8),
        (9, "Euler bound below every scanned dimension", Duration::from_secs(1), criterion_9),
        (10, "property suites", Duration::from_secs(300), criterion_10),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (verdict, detail) = match outcome {
            Ok(d) if took <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over time limit")),
            Err(d) => ("FAIL", d),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {id:>2} {verdict} [{:.3}s / limit {}s] {name}: {detail}",
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
