//! Multi-run benchmarking: independent seeded runs, summaries, runtime
//! distributions and best-conflict histograms.
//!
//! Run `i` of a batch uses seed `base_seed + i`. Results are always ordered
//! by seed, so the worker count never changes a report (wall times aside).

mod rtd;

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::csp::{Assignment, CspInstance, SearchState, Value, Var};
use crate::error::{Error, Result};
use crate::target::{conflict_endpoints, min_conflict_cover};
use crate::ulsa::{run, StepStats, UlsaConfig};

pub use crate::ulsa::RunRecord;
pub use rtd::{fit_exponential, fit_linear_early, ExponentialFit, LinearFit, Rtd};

pub const DEFAULT_EARLY_QUANTILE: f64 = 0.2;

pub fn run_many(
    instance: &CspInstance,
    config: &UlsaConfig,
    num_runs: usize,
    base_seed: u64,
    workers: usize,
) -> Result<Vec<RunRecord>> {
    if num_runs == 0 {
        return Err(Error::invalid("need at least one run"));
    }
    config.validate(instance)?;
    let seeds: Vec<u64> = (0..num_runs as u64).map(|i| base_seed.wrapping_add(i)).collect();
    let one = |seed: &u64| run(instance, config, *seed);
    if workers <= 1 {
        return seeds.iter().map(one).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start {workers} workers: {e}")))?;
    pool.install(|| seeds.par_iter().map(one).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub runs: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Over successful runs.
    pub mean_iterations: f64,
    pub median_iterations: f64,
    pub mean_time: f64,
    pub median_time: f64,
    /// Summed over all runs, then divided.
    pub stats: StepStats,
    pub expansion_rate: f64,
    pub worsening_rate: f64,
    pub exponential_fit: Option<ExponentialFit>,
    pub early_linear_fit: Option<LinearFit>,
}

pub fn summarize(records: &[RunRecord], early_quantile: f64) -> Summary {
    let ok: Vec<&RunRecord> = records.iter().filter(|r| r.success).collect();
    let iters: Vec<f64> = ok.iter().map(|r| r.iterations as f64).collect();
    let times: Vec<f64> = ok.iter().map(|r| r.wall_time).collect();
    let mut stats = StepStats::default();
    for r in records {
        stats.merge(&r.stats);
    }
    let rtd = Rtd::from_records(records);
    Summary {
        runs: records.len(),
        successes: ok.len(),
        success_rate: if records.is_empty() { 0.0 } else { ok.len() as f64 / records.len() as f64 },
        mean_iterations: mean(&iters),
        median_iterations: median(&iters),
        mean_time: mean(&times),
        median_time: median(&times),
        stats,
        expansion_rate: stats.expansion_rate(),
        worsening_rate: stats.worsening_rate(),
        exponential_fit: fit_exponential(&rtd).ok(),
        early_linear_fit: fit_linear_early(&rtd, early_quantile).ok(),
    }
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Minimum conflict counts reached by fixed-budget runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConflictHistogram {
    /// conflicts -> number of runs whose best state had that many.
    pub counts: BTreeMap<usize, usize>,
    pub minimum: usize,
    pub runs_at_minimum: usize,
    /// Distinct full assignments among the runs at the minimum.
    pub distinct_assignments: usize,
    /// Distinct conflict-free partial assignments among the runs at the
    /// minimum, obtained by dropping a minimum conflict cover. `None` when the
    /// minimum is too large to cover exactly.
    pub distinct_partial_solutions: Option<usize>,
}

/// Largest conflict count for which partial-solution equivalence is worked
/// out (exact cover search is exponential in it).
const MAX_COVER_FOR_EQUIVALENCE: usize = 12;

/// `num_runs` runs of exactly `iteration_budget` iterations each (a run only
/// ends early if it reaches zero conflicts), recording each run's fewest
/// conflicts.
pub fn best_conflicts_histogram(
    instance: &CspInstance,
    iteration_budget: u64,
    num_runs: usize,
    base_seed: u64,
    workers: usize,
) -> Result<(ConflictHistogram, Vec<RunRecord>)> {
    if iteration_budget == 0 {
        return Err(Error::invalid("iteration budget must be at least 1"));
    }
    let config = UlsaConfig {
        max_iterations: iteration_budget,
        stats_enabled: true,
        track_best: true,
        ..Default::default()
    };
    let records = run_many(instance, &config, num_runs, base_seed, workers)?;
    Ok((histogram(instance, &records), records))
}

/// Histogram of `best_conflicts` over `records`; equivalence counts use
/// `best_assignment` where the records carry it.
pub fn histogram(instance: &CspInstance, records: &[RunRecord]) -> ConflictHistogram {
    let mut counts = BTreeMap::new();
    for r in records {
        *counts.entry(r.best_conflicts).or_insert(0) += 1;
    }
    let minimum = counts.keys().next().copied().unwrap_or(0);
    let at_min: Vec<&Vec<Value>> = records
        .iter()
        .filter(|r| r.best_conflicts == minimum)
        .filter_map(|r| r.best_assignment.as_ref())
        .collect();
    let distinct_assignments = at_min.iter().collect::<BTreeSet<_>>().len();
    let distinct_partial_solutions = (minimum <= MAX_COVER_FOR_EQUIVALENCE).then(|| {
        at_min
            .iter()
            .map(|a| partial_solution_key(instance, a, minimum))
            .collect::<BTreeSet<_>>()
            .len()
    });
    ConflictHistogram {
        runs_at_minimum: counts.get(&minimum).copied().unwrap_or(0),
        counts,
        minimum,
        distinct_assignments,
        distinct_partial_solutions,
    }
}

/// `(var, value)` pairs left after removing a minimum conflict cover.
fn partial_solution_key(instance: &CspInstance, values: &[Value], conflicts: usize) -> Vec<(Var, Value)> {
    let state = SearchState::with_assignment(instance, Assignment::from_values(values.to_vec()))
        .expect("recorded assignments fit the instance");
    let cover = min_conflict_cover(&conflict_endpoints(&state), conflicts)
        .expect("one endpoint per conflict always covers");
    values
        .iter()
        .enumerate()
        .map(|(v, &x)| (v as Var, x))
        .filter(|(v, _)| cover.binary_search(v).is_err())
        .collect()
}

/// CSV with columns `iterations,ecdf,fitted`.
pub fn write_rtd_csv<W: Write>(rtd: &Rtd, fit: Option<&ExponentialFit>, out: W) -> Result<()> {
    #[derive(Serialize)]
    struct Row {
        iterations: u64,
        ecdf: f64,
        fitted: Option<f64>,
    }
    let mut w = csv::Writer::from_writer(out);
    for (&x, (_, p)) in rtd.iterations().iter().zip(rtd.ecdf()) {
        w.serialize(Row {
            iterations: x,
            ecdf: p,
            fitted: fit.map(|f| f.cdf(x as f64)),
        })
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::invalid(e.to_string()))
}

/// CSV with columns `conflicts,runs`.
pub fn write_histogram_csv<W: Write>(hist: &ConflictHistogram, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["conflicts", "runs"]).map_err(csv_err)?;
    for (c, r) in &hist.counts {
        w.write_record([c.to_string(), r.to_string()]).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::invalid(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::invalid(format!("csv output: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modelrb::{generate_forced, ModelRbParams};

    #[test]
    fn unconstrained_batch() {
        let inst = CspInstance::new(4, 3, vec![]).unwrap();
        let recs = run_many(&inst, &UlsaConfig::default(), 10, 0, 1).unwrap();
        assert_eq!(recs.len(), 10);
        assert!(recs.iter().all(|r| r.success && r.iterations == 0));
        let (hist, _) = best_conflicts_histogram(&inst, 100, 7, 0, 1).unwrap();
        assert_eq!(hist.counts, BTreeMap::from([(0, 7)]));
    }

    #[test]
    fn seeds_are_consecutive_and_workers_do_not_matter() {
        let params = ModelRbParams::phase_transition(15).unwrap();
        let (inst, _) = generate_forced(&params, 2).unwrap();
        let cfg = UlsaConfig { stats_enabled: true, ..Default::default() };
        let a = run_many(&inst, &cfg, 6, 100, 1).unwrap();
        let b = run_many(&inst, &cfg, 6, 100, 3).unwrap();
        let key = |r: &RunRecord| (r.seed, r.iterations, r.stats, r.witness.clone());
        assert_eq!(a.iter().map(key).collect::<Vec<_>>(), b.iter().map(key).collect::<Vec<_>>());
        assert_eq!(a.iter().map(|r| r.seed).collect::<Vec<_>>(), (100..106).collect::<Vec<_>>());
    }

    #[test]
    fn summary_rates_are_pooled() {
        let mk = |iterations, expansions, worsening| RunRecord {
            seed: 0,
            iterations,
            wall_time: 0.0,
            success: true,
            best_conflicts: 0,
            restarts: 0,
            stats: StepStats { iterations, expansions, worsening },
            witness: None,
            best_assignment: None,
        };
        let s = summarize(&[mk(10, 9, 1), mk(90, 0, 0)], 0.2);
        // pooled 9/100, not the per-run average (0.9 + 0) / 2
        assert!((s.expansion_rate - 0.09).abs() < 1e-12);
        assert!((s.worsening_rate - 0.01).abs() < 1e-12);
        assert_eq!(s.mean_iterations, 50.0);
        assert_eq!(s.median_iterations, 50.0);
    }

    #[test]
    fn csv_outputs() {
        let rtd = Rtd::from_iterations(vec![10, 20]);
        let fit = fit_exponential(&rtd).unwrap();
        let mut buf = Vec::new();
        write_rtd_csv(&rtd, Some(&fit), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("iterations,ecdf,fitted"));
        assert!(lines.next().unwrap().starts_with("10,0.5,0.48"));

        let hist = ConflictHistogram {
            counts: BTreeMap::from([(1, 2), (3, 5)]),
            minimum: 1,
            runs_at_minimum: 2,
            distinct_assignments: 2,
            distinct_partial_solutions: Some(1),
        };
        let mut buf = Vec::new();
        write_histogram_csv(&hist, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "conflicts,runs\n1,2\n3,5\n");
    }
}
