use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::thread;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lindeg_core::degeneration_lab::{
    collect_scan, hom_report, scan_orbit, FlatScan, HomConfig, ScanConfig, ScanRow, DEFAULT_BUDGET, DEFAULT_QS,
};
use lindeg_core::exact_linalg::prime_power;
use lindeg_core::orbit_poset::{build_poset, count_report, enumerate_orbits, export_dot, OrbitPoset};
use lindeg_core::parametrizations::{compare, reconstruct, validate_array_inequalities, Comparison};
use lindeg_core::schubert::{e_grid, is_smooth, length, r_grid, target_dims};
use lindeg_core::{
    assemble_canonical, decompose, degenerates, rank_vector, same_orbit, sw_array, Decomposition, GridShape, MapTuple,
    Permutation, SwArray,
};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::formats::{from_json, polynomial_text, to_json, tuple_text, violations, Format};

#[derive(Debug, Parser)]
#[command(name = "lindeg", version, about = "Orbits, degenerations and quiver Grassmannians on the grid quiver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    /// The parenthesised tuple, rank vectors only.
    Flat,
    Csv,
    Dot,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Counting {
    /// Field sizes, comma separated prime powers.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_QS.to_vec())]
    pub qs: Vec<u64>,
    /// Subspace checks allowed per count.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank vector of a point.
    RankVector {
        /// Point as JSON, `-` for stdin.
        input: String,
        #[command(flatten)]
        output: Output,
    },
    /// South-west array of a point.
    SwArray {
        input: String,
        #[command(flatten)]
        output: Output,
    },
    /// Decomposition of a point into indecomposables.
    Decompose {
        input: String,
        #[command(flatten)]
        output: Output,
    },
    /// Canonical point of a decomposition.
    Canonical {
        input: String,
        #[command(flatten)]
        output: Output,
    },
    /// Whether two points lie in one orbit.
    SameOrbit {
        first: String,
        second: String,
        #[command(flatten)]
        output: Output,
    },
    /// Whether the second point lies in the orbit closure of the first.
    Degenerates {
        first: String,
        second: String,
        #[command(flatten)]
        output: Output,
    },
    /// Every orbit with its invariants.
    Orbits {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Degeneration order on the orbits.
    Poset {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Length, smoothness and dimension grids of a permutation.
    Schubert {
        /// One-line notation, e.g. 2,3,1.
        #[arg(long, value_delimiter = ',', required = true)]
        w: Vec<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Dimension of every fibre over the orbits for a permutation.
    FlatScan {
        #[arg(long, value_delimiter = ',', required = true)]
        w: Vec<usize>,
        #[command(flatten)]
        counting: Counting,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Complete-intersection audit of the Hom scheme over one point.
    HomReport {
        #[arg(long, value_delimiter = ',', required = true)]
        w: Vec<usize>,
        /// Orbit id from `orbits`, or `identity`, or `zero`.
        #[arg(long, conflicts_with = "input")]
        orbit: Option<String>,
        /// Point as JSON instead of an orbit.
        #[arg(long)]
        input: Option<String>,
        #[command(flatten)]
        counting: Counting,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Points at which the Jacobian is evaluated.
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Inequality audit and realizability of a south-west array.
    ValidateArray {
        input: String,
        #[command(flatten)]
        output: Output,
    },
    /// Orbit count against the exhaustive census over F_2 and the closed form.
    CountReport {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|err| CliError::Io { path: "<stdin>".into(), err })?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|err| CliError::Io { path: path.into(), err })
    }
}

fn load<T: Format>(path: &str) -> Result<T, CliError> {
    let name = if path == "-" { "<stdin>" } else { path };
    from_json(&read_input(path)?, name)
}

fn emit(output: &Output, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|err| CliError::Io { path: path.display().to_string(), err }),
        None => stdout.write_all(text.as_bytes()).map_err(|err| CliError::Io { path: "<stdout>".into(), err }),
    }
}

fn refuse(command: &str, format: OutputFormat) -> CliError {
    CliError::Usage(format!(
        "{command} does not support --format {}",
        format.to_possible_value().expect("listed").get_name()
    ))
}

fn json_only(command: &str, output: &Output) -> Result<(), CliError> {
    match output.format {
        None | Some(OutputFormat::Json) => Ok(()),
        Some(f) => Err(refuse(command, f)),
    }
}

fn shape(n: usize) -> Result<GridShape, CliError> {
    Ok(GridShape::new(n)?)
}

fn permutation(w: &[usize]) -> Result<Permutation, CliError> {
    Ok(Permutation::new(w.to_vec())?)
}

fn check_qs(qs: &[u64]) -> Result<(), CliError> {
    for (t, &q) in qs.iter().enumerate() {
        if prime_power(q).is_none() {
            return Err(CliError::Usage(format!("--qs: {q} is not a prime power")));
        }
        if qs[..t].contains(&q) {
            return Err(CliError::Usage(format!("--qs: {q} is repeated")));
        }
    }
    Ok(())
}

fn check_budget(budget: u64) -> Result<(), CliError> {
    if budget == 0 {
        return Err(CliError::Usage("--budget must be positive".into()));
    }
    Ok(())
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value")
}

/// Short digest of an array, stable across runs.
pub fn sw_hash(s: &SwArray) -> String {
    let text: Vec<String> = s.values().iter().map(usize::to_string).collect();
    let digest = Sha256::digest(text.join(",").as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn orbits_csv(shape: GridShape, orbits: &[Decomposition]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Invalid(e.to_string());
    w.write_record(["id", "decomposition", "rank_vector", "sw_array_hash"]).map_err(io)?;
    for (id, d) in orbits.iter().enumerate() {
        let f = assemble_canonical(shape, d)?;
        let rv = tuple_text(&rank_vector(&f).layout());
        w.write_record([id.to_string(), d.label(), rv, sw_hash(&sw_array(&f))]).map_err(io)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| CliError::Invalid(e.to_string()))?).expect("utf8"))
}

fn poset_json(poset: &OrbitPoset) -> serde_json::Value {
    let nodes: Vec<_> = poset
        .nodes()
        .iter()
        .map(|node| json!({ "id": node.id, "decomposition": node.decomposition.label() }))
        .collect();
    let edges: Vec<_> = poset.edges().iter().map(|&(u, v)| json!({ "upper": u, "lower": v })).collect();
    json!({
        "n": poset.shape().n(),
        "nodes": nodes,
        "edges": edges,
        "maxima": poset.maxima(),
        "minima": poset.minima(),
    })
}

/// Scans every orbit, spreading them round-robin over `threads` workers.
pub fn threaded_scan(
    w: &Permutation,
    poset: &OrbitPoset,
    config: &ScanConfig,
    threads: usize,
) -> Result<FlatScan, CliError> {
    let threads = threads.max(1);
    let nodes = poset.nodes();
    let rows: Vec<lindeg_core::Result<ScanRow>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                scope.spawn(move || {
                    nodes.iter().skip(t).step_by(threads).map(|node| scan_orbit(w, node, config)).collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("scan worker panicked")).collect()
    });
    let rows = rows.into_iter().collect::<lindeg_core::Result<Vec<_>>>()?;
    Ok(collect_scan(w, poset, rows))
}

fn scan_csv(scan: &FlatScan, qs: &[u64]) -> Result<String, CliError> {
    let mut wr = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Invalid(e.to_string());
    let mut header = vec!["orbit_id".to_string(), "decomposition".to_string()];
    header.extend(qs.iter().map(|q| format!("count_q{q}")));
    header.extend(["fitted_poly", "est_dim", "target_dim", "flat_candidate"].map(String::from));
    wr.write_record(&header).map_err(io)?;
    for row in &scan.rows {
        let mut rec = vec![row.orbit_id.to_string(), row.decomposition.label()];
        rec.extend(row.estimate.samples.iter().map(|&(_, c)| c.to_string()));
        rec.push(polynomial_text(&row.estimate.coefficients));
        rec.push(row.est_dim().map_or(String::new(), |d| d.to_string()));
        rec.push(row.target_dim.to_string());
        rec.push(row.flat_candidate.to_string());
        wr.write_record(&rec).map_err(io)?;
    }
    Ok(String::from_utf8(wr.into_inner().map_err(|e| CliError::Invalid(e.to_string()))?).expect("utf8"))
}

fn scan_json(scan: &FlatScan) -> serde_json::Value {
    let rows: Vec<_> = scan
        .rows
        .iter()
        .map(|r| {
            json!({
                "orbit_id": r.orbit_id,
                "decomposition": r.decomposition.label(),
                "estimate": r.estimate.to_dto(),
                "target_dim": r.target_dim,
                "flat_candidate": r.flat_candidate,
                "euler_bound": r.euler_bound,
            })
        })
        .collect();
    let gaps: Vec<_> = scan.upward_gaps.iter().map(|&(u, v)| json!({ "upper": u, "lower": v })).collect();
    json!({
        "w": scan.w.one_line(),
        "rows": rows,
        "upward_closed": scan.upward_closed(),
        "upward_gaps": gaps,
    })
}

fn orbit_point(shape: GridShape, which: &str) -> Result<MapTuple, CliError> {
    match which {
        "identity" => Ok(MapTuple::identity(shape)),
        "zero" => Ok(MapTuple::zero(shape)),
        id => {
            let id: usize = id
                .parse()
                .map_err(|_| CliError::Usage(format!("--orbit: expected an id, identity or zero, got {id:?}")))?;
            let orbits = enumerate_orbits(shape);
            let d = orbits.get(id).ok_or_else(|| {
                CliError::Usage(format!("--orbit: id {id} out of range, there are {} orbits", orbits.len()))
            })?;
            Ok(assemble_canonical(shape, d)?)
        }
    }
}

fn comparison_name(c: Comparison) -> &'static str {
    match c {
        Comparison::Less => "less",
        Comparison::Greater => "greater",
        Comparison::Equal => "equal",
        Comparison::Incomparable => "incomparable",
    }
}

/// Runs one command, writing results to `stdout` or the `--out` file. Notes
/// that are not part of the result go to `stderr`.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::RankVector { input, output } => {
            let f: MapTuple = load(&input)?;
            let rv = rank_vector(&f);
            let format =
                output.format.unwrap_or(if f.shape().n() == 2 { OutputFormat::Flat } else { OutputFormat::Json });
            let text = match format {
                OutputFormat::Flat => tuple_text(&rv.flat()),
                OutputFormat::Json => to_json(&rv),
                other => return Err(refuse("rank-vector", other)),
            };
            emit(&output, &text, stdout)
        }
        Command::SwArray { input, output } => {
            json_only("sw-array", &output)?;
            let f: MapTuple = load(&input)?;
            emit(&output, &to_json(&sw_array(&f)), stdout)
        }
        Command::Decompose { input, output } => {
            json_only("decompose", &output)?;
            let f: MapTuple = load(&input)?;
            emit(&output, &to_json(&decompose(&f)?), stdout)
        }
        Command::Canonical { input, output } => {
            json_only("canonical", &output)?;
            let d: Decomposition = load(&input)?;
            let (h, _) = d.iter().next().ok_or_else(|| CliError::Invalid("empty decomposition has no shape".into()))?;
            emit(&output, &to_json(&assemble_canonical(h.shape(), &d)?), stdout)
        }
        Command::SameOrbit { first, second, output } => {
            json_only("same-orbit", &output)?;
            let (f, g): (MapTuple, MapTuple) = (load(&first)?, load(&second)?);
            emit(&output, &pretty(&json!({ "same_orbit": same_orbit(&f, &g)? })), stdout)
        }
        Command::Degenerates { first, second, output } => {
            json_only("degenerates", &output)?;
            let (f, g): (MapTuple, MapTuple) = (load(&first)?, load(&second)?);
            let verdict = degenerates(&f, &g)?;
            let order = compare(&sw_array(&g), &sw_array(&f));
            emit(
                &output,
                &pretty(&json!({ "degenerates": verdict, "second_vs_first": comparison_name(order) })),
                stdout,
            )
        }
        Command::Orbits { n, output } => {
            let s = shape(n)?;
            let orbits = enumerate_orbits(s);
            let text = match output.format.unwrap_or(OutputFormat::Json) {
                OutputFormat::Json => {
                    let mut records = Vec::with_capacity(orbits.len());
                    for (id, d) in orbits.iter().enumerate() {
                        let f = assemble_canonical(s, d)?;
                        records.push(json!({
                            "id": id,
                            "decomposition": d.to_dto(),
                            "representative": f.to_dto(),
                            "rank_vector": rank_vector(&f).layout(),
                            "sw_array_hash": sw_hash(&sw_array(&f)),
                        }));
                    }
                    pretty(&serde_json::Value::Array(records))
                }
                OutputFormat::Csv => orbits_csv(s, &orbits)?,
                OutputFormat::Dot => export_dot(&build_poset(s)?),
                OutputFormat::Flat => return Err(refuse("orbits", OutputFormat::Flat)),
            };
            emit(&output, &text, stdout)
        }
        Command::Poset { n, output } => {
            let poset = build_poset(shape(n)?)?;
            let text = match output.format.unwrap_or(OutputFormat::Dot) {
                OutputFormat::Dot => export_dot(&poset),
                OutputFormat::Json => pretty(&poset_json(&poset)),
                other => return Err(refuse("poset", other)),
            };
            emit(&output, &text, stdout)
        }
        Command::Schubert { w, output } => {
            json_only("schubert", &output)?;
            let w = permutation(&w)?;
            let value = json!({
                "w": w.one_line(),
                "length": length(&w),
                "smooth": is_smooth(&w),
                "r": r_grid(&w)?.rows(),
                "e": e_grid(&w)?.rows(),
                "target": target_dims(&w)?.rows(),
            });
            emit(&output, &pretty(&value), stdout)
        }
        Command::FlatScan { w, counting, threads, output } => {
            check_qs(&counting.qs)?;
            check_budget(counting.budget)?;
            let w = permutation(&w)?;
            let poset = build_poset(w.shape()?)?;
            let config = ScanConfig { qs: counting.qs.clone(), budget: counting.budget };
            let scan = threaded_scan(&w, &poset, &config, threads)?;
            if !scan.upward_closed() {
                let _ = writeln!(
                    stderr,
                    "note: flat candidates are not upward closed ({} cover relations)",
                    scan.upward_gaps.len()
                );
            }
            let text = match output.format.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Csv => scan_csv(&scan, &counting.qs)?,
                OutputFormat::Json => pretty(&scan_json(&scan)),
                other => return Err(refuse("flat-scan", other)),
            };
            emit(&output, &text, stdout)
        }
        Command::HomReport { w, orbit, input, counting, seed, samples, output } => {
            json_only("hom-report", &output)?;
            check_qs(&counting.qs)?;
            check_budget(counting.budget)?;
            let w = permutation(&w)?;
            let s = w.shape()?;
            let f = match (orbit, input) {
                (Some(which), None) => orbit_point(s, &which)?,
                (None, Some(path)) => load(&path)?,
                _ => return Err(CliError::Usage("hom-report needs --orbit or --input".into())),
            };
            let config = HomConfig { qs: counting.qs, budget: counting.budget, seed, samples };
            emit(&output, &to_json(&hom_report(&w, &f, &config)?), stdout)
        }
        Command::ValidateArray { input, output } => {
            json_only("validate-array", &output)?;
            let s: SwArray = load(&input)?;
            let report = validate_array_inequalities(&s);
            let realized = reconstruct(&s).ok();
            let value = json!({
                "inequalities_hold": report.ok(),
                "violations": violations(&report),
                "realizable": realized.is_some(),
                "representative": realized.map(|f| f.to_dto()),
            });
            emit(&output, &pretty(&value), stdout)
        }
        Command::CountReport { n, output } => {
            json_only("count-report", &output)?;
            let r = count_report(shape(n)?);
            let f2 = r.f2.as_ref().map(|c| {
                json!({
                    "tuples": c.tuples,
                    "distinct_arrays": c.distinct_arrays,
                    "orbits": c.orbits,
                    "unmatched_example": c.unmatched.as_ref().map(|f| f.to_dto()),
                })
            });
            let value = json!({
                "n": n,
                "enumerated": r.enumerated,
                "formula": r.formula,
                "formula_agrees": r.formula_agrees(),
                "f2_census": f2,
                "oracles_agree": r.oracles_agree(),
            });
            emit(&output, &pretty(&value), stdout)
        }
    }
}
