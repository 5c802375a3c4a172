//! `metrics`: purity, hypervolume, evaluation and step statistics per cell,
//! plus performance profiles across problems.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use front_descent::hypervolume;
use front_descent::metrics::{
    alpha_mean, nf_mean, performance_profiles, purity, reference_front, Metric, Profile,
};

use crate::artifact::{discover, read_front, read_trace, StoredCell};
use crate::error::{io_err, BenchError, Result};

/// Conjunction of clauses such as `n>30` or `n<=10,n>=5`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimFilter {
    clauses: Vec<(Cmp, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl DimFilter {
    pub fn accepts(&self, n: usize) -> bool {
        self.clauses.iter().all(|&(op, v)| match op {
            Cmp::Lt => n < v,
            Cmp::Le => n <= v,
            Cmp::Gt => n > v,
            Cmp::Ge => n >= v,
            Cmp::Eq => n == v,
            Cmp::Ne => n != v,
        })
    }
}

impl FromStr for DimFilter {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| BenchError::InvalidValue {
            key: "dims".into(),
            value: s.into(),
            reason: reason.into(),
        };
        let mut clauses = Vec::new();
        for clause in s.split(',').map(str::trim).filter(|c| !c.is_empty()) {
            let rest = clause
                .strip_prefix('n')
                .ok_or_else(|| bad("clauses look like n>30"))?
                .trim_start();
            let ops = [
                ("<=", Cmp::Le),
                (">=", Cmp::Ge),
                ("==", Cmp::Eq),
                ("!=", Cmp::Ne),
                ("<", Cmp::Lt),
                (">", Cmp::Gt),
                ("=", Cmp::Eq),
            ];
            let (op, value) = ops
                .iter()
                .find_map(|(tok, op)| rest.strip_prefix(tok).map(|v| (*op, v.trim())))
                .ok_or_else(|| bad("expected one of < <= > >= = !="))?;
            let value = value.parse().map_err(|_| bad("bound must be an integer"))?;
            clauses.push((op, value));
        }
        if clauses.is_empty() {
            return Err(bad("empty filter"));
        }
        Ok(Self { clauses })
    }
}

#[derive(Debug, Clone, Default)]
pub struct MetricsOptions {
    pub artifact_dir: PathBuf,
    /// Where the CSV files go; defaults to `artifact_dir`.
    pub out_dir: Option<PathBuf>,
    pub dims: Option<DimFilter>,
}

/// Raw metric values of one cell; `None` where undefined or the run failed.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub problem: String,
    pub solver: String,
    pub n: usize,
    pub purity: Option<f64>,
    pub hv: Option<f64>,
    /// `V(reference) - V(front) + offset`, the hypervolume cost.
    pub hv_transformed: Option<f64>,
    pub nf_mean: Option<f64>,
    pub alpha_mean: Option<f64>,
}

impl MetricRow {
    fn raw(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::Purity => self.purity,
            Metric::Hypervolume => self.hv,
            Metric::NfMean => self.nf_mean,
            Metric::AlphaMean => self.alpha_mean,
        }
    }

    /// Profile cost, infinite where the value is missing.
    pub fn cost(&self, metric: Metric, reference_hv: f64) -> f64 {
        match (metric, self.raw(metric)) {
            (Metric::Hypervolume, Some(_)) => self.hv_transformed.unwrap_or(f64::INFINITY),
            (m, Some(v)) => m.cost(v, reference_hv),
            (_, None) => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MetricsReport {
    /// Sorted by problem, dimension, solver.
    pub rows: Vec<MetricRow>,
    pub solvers: Vec<String>,
    /// One profile per solver, in `solvers` order, for each metric.
    pub profiles: Vec<(Metric, Vec<Profile>)>,
    pub files: Vec<PathBuf>,
}

struct Group {
    reference_hv: f64,
    rows: Vec<MetricRow>,
}

fn group_metrics(problem: &str, n: usize, cells: &[&StoredCell]) -> Result<Group> {
    let mut fronts = Vec::new();
    let mut zeta: Option<Vec<f64>> = None;
    for cell in cells {
        let Ok(summary) = &cell.outcome else {
            fronts.push(None);
            continue;
        };
        let z = zeta.get_or_insert_with(|| summary.zeta.clone());
        for (a, b) in z.iter_mut().zip(&summary.zeta) {
            *a = a.max(*b);
        }
        fronts.push(Some(read_front(&cell.dir, n)?.fx));
    }
    let present: Vec<Vec<Vec<f64>>> = fronts.iter().flatten().cloned().collect();
    let reference = reference_front(&present);
    let reference_hv = match &zeta {
        Some(z) => hypervolume(reference.iter().map(Vec::as_slice), z)?,
        None => f64::NAN,
    };

    let mut rows = Vec::new();
    for (cell, front) in cells.iter().zip(&fronts) {
        let mut row = MetricRow {
            problem: problem.to_string(),
            solver: cell.id.solver.clone(),
            n,
            purity: None,
            hv: None,
            hv_transformed: None,
            nf_mean: None,
            alpha_mean: None,
        };
        if let (Some(front), Some(z)) = (front, &zeta) {
            row.purity = purity(front, &reference).ok();
            let hv = hypervolume(front.iter().map(Vec::as_slice), z)?;
            row.hv = Some(hv);
            row.hv_transformed = Some(Metric::Hypervolume.cost(hv, reference_hv));
            let trace = read_trace(&cell.dir)?;
            row.nf_mean = nf_mean(&trace).ok();
            row.alpha_mean = alpha_mean(&trace).ok();
        }
        rows.push(row);
    }
    Ok(Group { reference_hv, rows })
}

fn fmt(v: Option<f64>) -> String {
    v.map_or(String::new(), |v| v.to_string())
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let csv_err = |source| BenchError::Csv {
        path: path.into(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    w.flush().map_err(io_err(path))
}

/// Computes every metric over the cells below `artifact_dir` and writes
/// `metrics.csv` and `profile_{metric}.csv`.
pub fn cmd_metrics(opts: &MetricsOptions) -> Result<MetricsReport> {
    let cells = discover(&opts.artifact_dir)?;
    let mut groups: BTreeMap<(String, usize), Vec<&StoredCell>> = BTreeMap::new();
    for c in &cells {
        if opts.dims.as_ref().map_or(true, |f| f.accepts(c.id.n)) {
            groups
                .entry((c.id.problem.clone(), c.id.n))
                .or_default()
                .push(c);
        }
    }
    if groups.is_empty() {
        return Err(BenchError::MissingArtifacts(
            "no cell passes the dimension filter".into(),
        ));
    }
    let solvers: Vec<String> = groups
        .values()
        .flatten()
        .map(|c| c.id.solver.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    for ((problem, n), members) in &groups {
        if members.len() < 2 {
            return Err(BenchError::SingleSolver {
                problem: problem.clone(),
                n: *n,
                solver: members[0].id.solver.clone(),
            });
        }
    }

    let mut rows = Vec::new();
    let mut costs: Vec<(Metric, Vec<Vec<f64>>)> =
        Metric::ALL.iter().map(|&m| (m, Vec::new())).collect();
    for ((problem, n), members) in &groups {
        let group = group_metrics(problem, *n, members)?;
        for (metric, matrix) in &mut costs {
            let row = solvers
                .iter()
                .map(|s| {
                    group
                        .rows
                        .iter()
                        .find(|r| &r.solver == s)
                        .map_or(f64::INFINITY, |r| r.cost(*metric, group.reference_hv))
                })
                .collect();
            matrix.push(row);
        }
        rows.extend(group.rows);
    }

    let out_dir = opts.out_dir.clone().unwrap_or_else(|| opts.artifact_dir.clone());
    fs::create_dir_all(&out_dir).map_err(io_err(&out_dir))?;
    let mut files = Vec::new();

    let path = out_dir.join("metrics.csv");
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.problem.clone(),
                r.solver.clone(),
                r.n.to_string(),
                fmt(r.purity),
                fmt(r.hv),
                fmt(r.hv_transformed),
                fmt(r.nf_mean),
                fmt(r.alpha_mean),
            ]
        })
        .collect();
    write_csv(
        &path,
        &["problem", "solver", "n", "purity", "hv", "hv_transformed", "nf_mean", "alpha_mean"],
        &table,
    )?;
    files.push(path);

    let mut profiles = Vec::new();
    for (metric, matrix) in costs {
        let curves = performance_profiles(&matrix)?;
        let path = out_dir.join(format!("profile_{}.csv", metric.name()));
        let table: Vec<Vec<String>> = solvers
            .iter()
            .zip(&curves)
            .flat_map(|(s, p)| {
                p.breakpoints
                    .iter()
                    .map(move |(tau, rho)| vec![s.clone(), tau.to_string(), rho.to_string()])
            })
            .collect();
        write_csv(&path, &["solver", "tau", "rho"], &table)?;
        files.push(path);
        profiles.push((metric, curves));
    }

    Ok(MetricsReport {
        rows,
        solvers,
        profiles,
        files,
    })
}
