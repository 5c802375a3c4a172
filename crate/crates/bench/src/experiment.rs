//! `run`: every (problem, n, solver) cell of a config, one driver run each.

use std::fs;
use std::path::PathBuf;

use front_descent::problems::by_name;
use front_descent::{run, DriverConfig, Instance};

use crate::artifact::{write_file, write_json, write_run, CellId, CellSummary};
use crate::config::{ExperimentConfig, SolverSpec};
use crate::error::{io_err, Result};

#[derive(Debug, Clone)]
pub struct CellPlan {
    pub id: CellId,
    pub solver: SolverSpec,
    pub driver: DriverConfig,
}

#[derive(Debug, Clone)]
pub struct CellOutcome {
    pub id: CellId,
    pub dir: PathBuf,
    pub result: std::result::Result<CellSummary, String>,
}

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub cells: Vec<CellOutcome>,
}

impl RunReport {
    pub fn failures(&self) -> impl Iterator<Item = &CellOutcome> {
        self.cells.iter().filter(|c| c.result.is_err())
    }

    pub fn all_succeeded(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// Cells in problem, dimension, solver order.
pub fn plan(config: &ExperimentConfig) -> Result<Vec<CellPlan>> {
    config.validate()?;
    let solvers = config.solvers()?;
    let mut cells = Vec::new();
    for problem in &config.problems {
        for &n in &config.dims {
            for &solver in &solvers {
                let mut driver = config.driver.clone();
                driver.variant = solver.variant;
                driver.snapshot_every = config.snapshots.interval(n);
                cells.push(CellPlan {
                    id: CellId {
                        problem: problem.clone(),
                        n,
                        solver: solver.label(),
                    },
                    solver,
                    driver,
                });
            }
        }
    }
    Ok(cells)
}

fn run_cell(config_text: &str, root: &std::path::Path, cell: &CellPlan) -> Result<CellOutcome> {
    let dir = cell.id.dir(root);
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    for stale in ["summary.json", "error.txt"] {
        let _ = fs::remove_file(dir.join(stale));
    }
    write_json(&dir.join("cell.json"), &cell.id)?;
    write_file(&dir.join("config.txt"), config_text)?;

    let attempt = by_name(&cell.id.problem, cell.id.n)
        .map(Instance::new)
        .and_then(|instance| run(&instance, &cell.driver));
    let result = match attempt {
        Ok(out) => {
            let summary = CellSummary::new(cell.id.clone(), cell.solver.variant.memory(), &out);
            write_run(&dir, &summary, &out)?;
            Ok(summary)
        }
        Err(e) => {
            let message = e.to_string();
            write_file(&dir.join("error.txt"), &format!("{message}\n"))?;
            Err(message)
        }
    };
    Ok(CellOutcome {
        id: cell.id.clone(),
        dir,
        result,
    })
}

/// Runs every cell and writes its artifacts.
///
/// Config and I/O problems are errors. A cell whose driver fails is recorded
/// in the report (and in its `error.txt`) while the other cells go on.
pub fn cmd_run(config: &ExperimentConfig) -> Result<RunReport> {
    let cells = plan(config)?;
    let root = &config.output_dir;
    fs::create_dir_all(root).map_err(io_err(root))?;
    let text = config.to_text();
    let work = |c: &CellPlan| run_cell(&text, root, c);

    #[cfg(feature = "parallel")]
    let outcomes: Vec<Result<CellOutcome>> = {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers.unwrap_or(0))
            .build()
            .map_err(|e| crate::BenchError::Config(format!("thread pool: {e}")))?;
        pool.install(|| cells.par_iter().map(work).collect())
    };
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<Result<CellOutcome>> = cells.iter().map(work).collect();

    Ok(RunReport {
        cells: outcomes.into_iter().collect::<Result<_>>()?,
    })
}
