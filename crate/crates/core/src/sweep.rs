//! Seeded experiment sweeps and their CSV output.
//!
//! Config files are flat `key = value` lines; a repeated key forms a list and
//! `#` starts a comment. `seed` also accepts an inclusive range `lo..hi`.
//!
//! ```text
//! n = 500
//! n = 1000
//! d = 8
//! s = 3
//! seed = 1..20
//! ```

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::gnp;
use crate::error::{Error, Result};
use crate::extract::{extract_dense_subgraph, ExtractOptions};
use crate::graph::Graph;
use crate::io::read_graph;
use crate::rational::{self, Ratio};
use crate::report::Branch;
use crate::rng::PRNG_NAME;

/// Bumped whenever the CSV columns change.
pub const CSV_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub n: Vec<usize>,
    pub d: Vec<Ratio>,
    pub s: Vec<Ratio>,
    pub seeds: Vec<u64>,
    /// Graph files swept in addition to the `G(n, d/(n−1))` grid.
    pub graphs: Vec<PathBuf>,
    pub log_exponent: u32,
    pub census_limit: u64,
    pub pipeline: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n: Vec::new(),
            d: Vec::new(),
            s: Vec::new(),
            seeds: Vec::new(),
            graphs: Vec::new(),
            log_exponent: 1,
            census_limit: 200_000,
            pipeline: true,
        }
    }
}

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse().or_else(|_| parse_err(line, format!("bad value for {key}: {v:?}")))
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                return parse_err(line, format!("expected key = value, got {body:?}"));
            };
            let (key, value) = (key.trim(), value.trim());
            let ratio = |v: &str| rational::parse_ratio(v).or_else(|e| parse_err(line, e.to_string()));
            match key {
                "n" => cfg.n.push(parse_num(line, key, value)?),
                "d" => cfg.d.push(ratio(value)?),
                "s" => cfg.s.push(ratio(value)?),
                "seed" => match value.split_once("..") {
                    Some((lo, hi)) => {
                        let (lo, hi): (u64, u64) = (parse_num(line, key, lo.trim())?, parse_num(line, key, hi.trim())?);
                        if lo > hi {
                            return parse_err(line, format!("empty seed range {value}"));
                        }
                        cfg.seeds.extend(lo..=hi);
                    }
                    None => cfg.seeds.push(parse_num(line, key, value)?),
                },
                "graph" => cfg.graphs.push(PathBuf::from(value)),
                "log_exponent" => cfg.log_exponent = parse_num(line, key, value)?,
                "census_limit" => cfg.census_limit = parse_num(line, key, value)?,
                "pipeline" => cfg.pipeline = parse_num(line, key, value)?,
                _ => return parse_err(line, format!("unknown key {key:?}")),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
        Self::parse(&text)
    }

    /// Checks the config against the preconditions of the operations it drives.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Input(msg));
        if self.seeds.is_empty() {
            return bad("no seeds given".into());
        }
        if self.s.is_empty() {
            return bad("no s values given".into());
        }
        if let Some(s) = self.s.iter().find(|s| **s <= Ratio::from_integer(2)) {
            return bad(format!("s must exceed 2, got {}", rational::format_ratio(s)));
        }
        if self.n.is_empty() != self.d.is_empty() {
            return bad("n and d must be given together".into());
        }
        if self.n.is_empty() && self.graphs.is_empty() {
            return bad("nothing to sweep: give n and d, or graph files".into());
        }
        for &n in &self.n {
            for d in &self.d {
                if n < 2 || *d <= Ratio::from_integer(0) || *d > Ratio::from_integer(n as i64 - 1) {
                    return bad(format!("need 0 < d ≤ n − 1, got n = {n}, d = {}", rational::format_ratio(d)));
                }
            }
        }
        for g in &self.graphs {
            if !g.is_file() {
                return Err(Error::Io(std::io::Error::new(std::io::ErrorKind::NotFound, format!("{}: no such file", g.display()))));
            }
        }
        Ok(())
    }

    /// Number of rows the sweep produces.
    pub fn row_count(&self) -> usize {
        (self.n.len() * self.d.len() + self.graphs.len()) * self.s.len() * self.seeds.len()
    }
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub source: String,
    pub n: usize,
    /// Nominal `d` for generated graphs, realized average degree for files.
    pub d: f64,
    pub s: String,
    pub seed: u64,
    pub edges: usize,
    pub average_degree: f64,
    pub witness_size: usize,
    pub witness_edges: usize,
    pub witness_average_degree: f64,
    pub achieved: bool,
    pub branch: Branch,
    pub method: String,
    /// `n·d^{−s/(s−2)}`.
    pub bound: f64,
    /// `n·d^{−s/(s−2)}·(ln d)^C`.
    pub bound_polylog: f64,
    #[serde(skip)]
    sort_key: (String, usize, Ratio, Ratio, u64),
}

enum Source {
    Gnp { n: usize, d: Ratio },
    File(usize),
}

fn run_cell(cfg: &SweepConfig, graphs: &[Graph], source: &Source, s: Ratio, seed: u64) -> Result<SweepRow> {
    let (name, graph, d) = match source {
        Source::Gnp { n, d } => {
            let p = rational::to_f64(d) / (*n as f64 - 1.0);
            ("gnp".to_string(), std::borrow::Cow::Owned(gnp(*n, p, seed)?), *d)
        }
        Source::File(i) => {
            let g = &graphs[*i];
            (cfg.graphs[*i].display().to_string(), std::borrow::Cow::Borrowed(g), g.average_degree()?)
        }
    };
    let options = ExtractOptions { log_exponent: cfg.log_exponent, census_limit: cfg.census_limit, seed, pipeline: cfg.pipeline, ..Default::default() };
    let report = extract_dense_subgraph(&graph, s, &options)?;
    let n = graph.vertex_count();
    let (df, sf) = (rational::to_f64(&d), rational::to_f64(&s));
    let bound = n as f64 * df.powf(-sf / (sf - 2.0));
    Ok(SweepRow {
        source: name.clone(),
        n,
        d: df,
        s: rational::format_ratio(&s),
        seed,
        edges: graph.edge_count(),
        average_degree: rational::to_f64(&graph.average_degree()?),
        witness_size: report.size(),
        witness_edges: report.edges,
        witness_average_degree: rational::to_f64(&report.average_degree),
        achieved: report.achieved,
        branch: report.branch,
        method: report.source,
        bound,
        bound_polylog: bound * df.ln().max(0.0).powi(cfg.log_exponent as i32),
        sort_key: (name, n, d, s, seed),
    })
}

/// Runs every `(seed, point)` cell in parallel; rows come back sorted by
/// source, n, d, s and seed.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let graphs: Vec<Graph> = cfg.graphs.iter().map(|p| read_graph(p)).collect::<Result<_>>()?;
    let mut sources: Vec<Source> = Vec::new();
    for &n in &cfg.n {
        for &d in &cfg.d {
            sources.push(Source::Gnp { n, d });
        }
    }
    sources.extend((0..graphs.len()).map(Source::File));
    let mut cells = Vec::new();
    for src in &sources {
        for &s in &cfg.s {
            for &seed in &cfg.seeds {
                cells.push((src, s, seed));
            }
        }
    }
    let mut rows: Vec<SweepRow> = cells.par_iter().map(|(src, s, seed)| run_cell(cfg, &graphs, src, *s, *seed)).collect::<Result<_>>()?;
    rows.sort_by(|a, b| a.sort_key.cmp(&b.sort_key));
    Ok(rows)
}

/// Writes the versioned header comment followed by the CSV table.
pub fn write_csv<W: Write>(mut out: W, rows: &[SweepRow]) -> Result<()> {
    writeln!(out, "# densub sweep csv v{CSV_VERSION} prng={PRNG_NAME}")?;
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record([
            "source", "n", "d", "s", "seed", "edges", "average_degree", "witness_size", "witness_edges",
            "witness_average_degree", "achieved", "branch", "method", "bound", "bound_polylog",
        ])
        .map_err(csv_err)?;
    }
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

type GroupKey = (String, usize, String);

/// Median witness size per `(source, n, s)` and nominal `d`, in increasing `d`.
pub fn median_witness_sizes(rows: &[SweepRow]) -> BTreeMap<GroupKey, Vec<(f64, f64)>> {
    let mut groups: BTreeMap<GroupKey, BTreeMap<Ratio, (f64, Vec<usize>)>> = BTreeMap::new();
    for r in rows {
        let cell = groups.entry((r.source.clone(), r.n, r.s.clone())).or_default();
        cell.entry(r.sort_key.2).or_insert((r.d, Vec::new())).1.push(r.witness_size);
    }
    groups
        .into_iter()
        .map(|(k, by_d)| {
            let meds = by_d
                .into_values()
                .map(|(d, mut sizes)| {
                    sizes.sort_unstable();
                    let m = sizes.len();
                    let med = if m % 2 == 1 { sizes[m / 2] as f64 } else { (sizes[m / 2 - 1] + sizes[m / 2]) as f64 / 2.0 };
                    (d, med)
                })
                .collect();
            (k, meds)
        })
        .collect()
}

/// Whether the median witness size is non-increasing in `d` for every
/// `(source, n, s)` group.
pub fn medians_non_increasing_in_d(rows: &[SweepRow]) -> bool {
    median_witness_sizes(rows).values().all(|meds| meds.windows(2).all(|w| w[1].1 <= w[0].1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lists_and_ranges() {
        let cfg = SweepConfig::parse("n = 500\nn = 1000\nn=2000\nd = 8\nd = 16 # two degrees\ns = 3\nseed = 1..20\n").unwrap();
        assert_eq!(cfg.n, vec![500, 1000, 2000]);
        assert_eq!(cfg.seeds.len(), 20);
        assert_eq!(cfg.row_count(), 120);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(matches!(SweepConfig::parse("n = 10\nd = 3\ns = 3\n"), Err(Error::Input(_))));
        assert!(matches!(SweepConfig::parse("n = 10\nd = 3\ns = 3\nseed = 1\nfoo = 2\n"), Err(Error::Parse { line: 5, .. })));
        assert!(matches!(SweepConfig::parse("n = 10\nd = 30\ns = 3\nseed = 1\n"), Err(Error::Input(_))));
        assert!(matches!(SweepConfig::parse("n = 10\nd = 3\ns = 2\nseed = 1\n"), Err(Error::Input(_))));
        match SweepConfig::parse("graph = /nonexistent/g.el\ns = 3\nseed = 1\n") {
            Err(Error::Io(e)) => assert!(e.to_string().contains("/nonexistent/g.el")),
            other => panic!("expected io error, got {other:?}"),
        }
    }

    #[test]
    fn small_sweep_is_sorted_and_reproducible() {
        let cfg = SweepConfig::parse("n = 60\nn = 40\nd = 6\nd = 3\ns = 3\nseed = 2\nseed = 1\ncensus_limit = 2000\n").unwrap();
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 8);
        let keys: Vec<_> = rows.iter().map(|r| (r.n, r.d as u32, r.seed)).collect();
        assert_eq!(keys[..4], [(40, 3, 1), (40, 3, 2), (40, 6, 1), (40, 6, 2)]);
        assert_eq!(rows, run_sweep(&cfg).unwrap());
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# densub sweep csv v1 prng=chacha8\nsource,n,d,s,seed,"));
        assert_eq!(text.lines().count(), 10);
        let r = &rows[0];
        assert!((r.bound - 40.0 / 27.0).abs() < 1e-12);
    }

    #[test]
    fn medians() {
        let row = |d: i64, size: usize| SweepRow {
            source: "gnp".into(),
            n: 100,
            d: d as f64,
            s: "3".into(),
            seed: 0,
            edges: 0,
            average_degree: 0.0,
            witness_size: size,
            witness_edges: 0,
            witness_average_degree: 0.0,
            achieved: true,
            branch: Branch::Baseline,
            method: String::new(),
            bound: 0.0,
            bound_polylog: 0.0,
            sort_key: ("gnp".into(), 100, Ratio::from_integer(d), Ratio::from_integer(3), 0),
        };
        let rows = vec![row(8, 10), row(8, 12), row(8, 30), row(16, 4), row(16, 40), row(16, 5)];
        let meds = median_witness_sizes(&rows);
        assert_eq!(meds.values().next().unwrap(), &vec![(8.0, 12.0), (16.0, 5.0)]);
        assert!(medians_non_increasing_in_d(&rows));
        assert!(!medians_non_increasing_in_d(&[row(8, 3), row(16, 4)]));
    }
}
