//! On-disk layout of one experiment cell.
//!
//! ```text
//! {out}/{problem}_n{n}/{solver}/
//!     cell.json        identity of the cell, always written first
//!     config.txt       the full experiment config
//!     trace.jsonl      one iteration record per line
//!     front.csv        final set, columns x1..xn,f1..fm
//!     snapshots.jsonl  kept images of X^k and C^k
//!     summary.json     written on success
//!     error.txt        written on failure
//! ```

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use front_descent::{IterationRecord, RunOutput, RunTrace, Snapshot, StopReason};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{io_err, BenchError, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellId {
    pub problem: String,
    pub n: usize,
    pub solver: String,
}

impl CellId {
    pub fn dir(&self, root: &Path) -> PathBuf {
        root.join(format!("{}_n{}", self.problem, self.n)).join(&self.solver)
    }
}

impl std::fmt::Display for CellId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} n={} {}", self.problem, self.n, self.solver)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub cell: CellId,
    pub m: usize,
    pub memory: Option<usize>,
    pub iterations: usize,
    pub stop_reason: StopReason,
    pub objective_evals: u64,
    pub jacobian_evals: u64,
    pub front_size: usize,
    pub zeta: Vec<f64>,
    pub final_hv: Option<f64>,
    pub final_big_theta: f64,
    pub violations: u64,
    /// Phase 1 searches that ran out of backtracks.
    pub phase1_failures: usize,
    pub wall_time_s: f64,
}

impl CellSummary {
    pub fn new(cell: CellId, memory: Option<usize>, out: &RunOutput) -> Self {
        let last = out.trace.records.last();
        Self {
            m: out.zeta.len(),
            memory,
            iterations: out.trace.iterations(),
            stop_reason: out.stop_reason,
            objective_evals: out.objective_evals,
            jacobian_evals: out.jacobian_evals,
            front_size: out.front.len(),
            zeta: out.zeta.clone(),
            final_hv: last.and_then(|r| r.hv),
            final_big_theta: last.map_or(f64::NAN, |r| r.big_theta),
            violations: out.trace.violations().total(),
            phase1_failures: out.trace.records.iter().map(|r| r.phase1_failures).sum(),
            wall_time_s: last.map_or(0.0, |r| r.wall_time_s),
            cell,
        }
    }
}

/// Final set of a run as decision vectors and images.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FrontTable {
    pub x: Vec<Vec<f64>>,
    pub fx: Vec<Vec<f64>>,
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(io_err(path))
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|source| BenchError::Json {
        path: path.into(),
        source,
    })?;
    write_file(path, &text)
}

pub(crate) fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|source| BenchError::Json {
        path: path.into(),
        source,
    })
}

fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    for item in items {
        serde_json::to_writer(&mut w, item).map_err(|source| BenchError::Json {
            path: path.into(),
            source,
        })?;
        writeln!(w).map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    let mut out = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|source| BenchError::Json {
            path: path.into(),
            source,
        })?);
    }
    Ok(out)
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> BenchError + '_ {
    move |source| BenchError::Csv {
        path: path.into(),
        source,
    }
}

/// Writes the successful run artifacts of a cell.
pub fn write_run(dir: &Path, summary: &CellSummary, out: &RunOutput) -> Result<()> {
    write_jsonl(&dir.join("trace.jsonl"), &out.trace.records)?;
    write_jsonl(&dir.join("snapshots.jsonl"), &out.snapshots)?;

    let path = dir.join("front.csv");
    let mut w = csv::Writer::from_path(&path).map_err(csv_err(&path))?;
    let n = out.front.iter().next().map_or(summary.cell.n, |p| p.x().len());
    let header: Vec<String> = (1..=n)
        .map(|i| format!("x{i}"))
        .chain((1..=summary.m).map(|j| format!("f{j}")))
        .collect();
    w.write_record(&header).map_err(csv_err(&path))?;
    for p in out.front.iter() {
        let row: Vec<String> = p.x().iter().chain(p.fx()).map(f64::to_string).collect();
        w.write_record(&row).map_err(csv_err(&path))?;
    }
    w.flush().map_err(io_err(&path))?;

    write_json(&dir.join("summary.json"), summary)
}

pub fn read_trace(dir: &Path) -> Result<RunTrace> {
    let records: Vec<IterationRecord> = read_jsonl(&dir.join("trace.jsonl"))?;
    Ok(RunTrace { records })
}

pub fn read_snapshots(dir: &Path) -> Result<Vec<Snapshot>> {
    read_jsonl(&dir.join("snapshots.jsonl"))
}

pub fn read_front(dir: &Path, n: usize) -> Result<FrontTable> {
    let path = dir.join("front.csv");
    let mut r = csv::Reader::from_path(&path).map_err(csv_err(&path))?;
    let mut table = FrontTable::default();
    for row in r.records() {
        let row = row.map_err(csv_err(&path))?;
        let values = row
            .iter()
            .map(|v| v.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| BenchError::MissingArtifacts(format!("{}: {e}", path.display())))?;
        if values.len() <= n {
            return Err(BenchError::MissingArtifacts(format!(
                "{}: row has {} columns, expected more than {n}",
                path.display(),
                values.len()
            )));
        }
        table.x.push(values[..n].to_vec());
        table.fx.push(values[n..].to_vec());
    }
    Ok(table)
}

/// A cell as found on disk.
#[derive(Debug, Clone)]
pub struct StoredCell {
    pub id: CellId,
    pub dir: PathBuf,
    /// `Err` holds the contents of `error.txt`.
    pub outcome: std::result::Result<CellSummary, String>,
}

/// Finds every cell below `root`, sorted by identity.
pub fn discover(root: &Path) -> Result<Vec<StoredCell>> {
    let mut cells = Vec::new();
    let read = |p: &Path| fs::read_dir(p).map_err(io_err(p));
    for group in read(root)? {
        let group = group.map_err(io_err(root))?.path();
        if !group.is_dir() {
            continue;
        }
        for cell in read(&group)? {
            let dir = cell.map_err(io_err(&group))?.path();
            let id_path = dir.join("cell.json");
            if !id_path.is_file() {
                continue;
            }
            let id: CellId = read_json(&id_path)?;
            let summary = dir.join("summary.json");
            let error = dir.join("error.txt");
            let outcome = if summary.is_file() {
                Ok(read_json(&summary)?)
            } else if error.is_file() {
                Err(fs::read_to_string(&error).map_err(io_err(&error))?)
            } else {
                Err("run did not finish".to_string())
            };
            cells.push(StoredCell { id, dir, outcome });
        }
    }
    if cells.is_empty() {
        return Err(BenchError::MissingArtifacts(format!(
            "no cells below {}",
            root.display()
        )));
    }
    cells.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(cells)
}

/// Paired image sets `X^k` and `C^k` of one kept iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontDump {
    pub k: usize,
    pub iterate: Vec<Vec<f64>>,
    pub reference: Option<Vec<Vec<f64>>>,
}

/// Reads the snapshot of iteration `k` from a cell directory.
pub fn front_dump(dir: &Path, k: usize) -> Result<FrontDump> {
    let summary: CellSummary = read_json(&dir.join("summary.json"))?;
    if k > summary.iterations {
        return Err(BenchError::Snapshot {
            k,
            reason: format!("beyond the final iteration {}", summary.iterations),
        });
    }
    read_snapshots(dir)?
        .into_iter()
        .find(|s| s.k == k)
        .map(|s| FrontDump {
            k,
            iterate: s.iterate,
            reference: s.reference,
        })
        .ok_or_else(|| BenchError::Snapshot {
            k,
            reason: "not snapshotted (see snapshot_every)".into(),
        })
}

/// CSV rows `set,f1..fm` with `set` either `X` or `C`.
pub fn write_front_dump<W: Write>(dump: &FrontDump, out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let m = dump.iterate.first().map_or(0, Vec::len);
    let header: Vec<String> = std::iter::once("set".to_string())
        .chain((1..=m).map(|j| format!("f{j}")))
        .collect();
    w.write_record(&header)?;
    let sets = [("X", Some(&dump.iterate)), ("C", dump.reference.as_ref())];
    for (tag, set) in sets {
        for p in set.into_iter().flatten() {
            let row: Vec<String> = std::iter::once(tag.to_string())
                .chain(p.iter().map(f64::to_string))
                .collect();
            w.write_record(&row)?;
        }
    }
    w.flush()
}
