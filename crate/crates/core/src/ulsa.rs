//! ULSA: unweighted stochastic local search for binary CSPs.
//!
//! ```text
//! n = 0; t[v] = 0 for all v
//! for v in random order: x[v] = a min-conflict value (ties random)
//! while some conflict exists:
//!     pick a random conflict (i, j) with t[i] <= t[j]
//!     S = {i}    if x[i] can change without increasing conflicts, or j changed last
//!     S = {i, j} otherwise                       (neighbourhood expansion)
//!     change some k in S to a new value u, (k, u) minimizing conflicts (ties random)
//!     n += 1; t[k] = n
//! ```
//!
//! No weights or other long-term memory are kept beyond the timestamps.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::csp::{CspInstance, SearchState, Value, Var};
use crate::error::{Error, Result};
use crate::rng::{stream_rng, SearchRng, Stream};
use crate::target::{check_target, TargetSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct UlsaConfig {
    /// Iteration budget; 0 means unbounded.
    pub max_iterations: u64,
    pub target: Option<TargetSpec>,
    /// Reinitialize from scratch every this many iterations.
    pub restart_interval: Option<u64>,
    pub stats_enabled: bool,
    /// Keep a copy of the first assignment reaching the best conflict count.
    pub track_best: bool,
}

impl UlsaConfig {
    pub fn validate(&self, instance: &CspInstance) -> Result<()> {
        if let Some(t) = &self.target {
            let n = instance.num_vars();
            if t.target() + t.removal_budget() != n {
                return Err(Error::invalid(format!(
                    "target was built for {} variables, instance has {n}",
                    t.target() + t.removal_budget()
                )));
            }
        }
        if self.restart_interval == Some(0) {
            return Err(Error::invalid("restart interval must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct StepStats {
    pub iterations: u64,
    /// Iterations where the candidate set grew to both endpoints.
    pub expansions: u64,
    /// Iterations whose change strictly increased the conflict total.
    pub worsening: u64,
}

impl StepStats {
    pub fn expansion_rate(&self) -> f64 {
        ratio(self.expansions, self.iterations)
    }

    pub fn worsening_rate(&self) -> f64 {
        ratio(self.worsening, self.iterations)
    }

    pub fn merge(&mut self, other: &StepStats) {
        self.iterations += other.iterations;
        self.expansions += other.expansions;
        self.worsening += other.worsening;
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// What a single [`Solver::step`] did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepReport {
    pub constraint: usize,
    /// The older endpoint, `i`.
    pub first: Var,
    /// The other endpoint, `j`.
    pub second: Var,
    pub expanded: bool,
    pub var: Var,
    pub value: Value,
    pub delta: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A complete conflict-free assignment.
    Full { assignment: Vec<Value> },
    /// An assignment plus `T` variables (sorted) with no conflict among them.
    Partial { assignment: Vec<Value>, subset: Vec<Var> },
}

/// Outcome of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub seed: u64,
    pub iterations: u64,
    /// Seconds.
    pub wall_time: f64,
    pub success: bool,
    pub best_conflicts: usize,
    pub restarts: u64,
    pub stats: StepStats,
    pub witness: Option<Witness>,
    #[serde(skip)]
    pub best_assignment: Option<Vec<Value>>,
}

/// Builds the initial state: variables visited in a uniformly random order,
/// each set to a value minimizing conflicts with those already set, ties
/// broken uniformly.
pub fn init_state<'a>(instance: &'a CspInstance, rng: &mut SearchRng) -> SearchState<'a> {
    let mut state = SearchState::new(instance);
    let mut order: Vec<Var> = (0..instance.num_vars() as Var).collect();
    order.shuffle(rng);
    let mut profile = vec![0u32; instance.domain_size()];
    for v in order {
        state.conflict_profile(v, &mut profile);
        let mut best = u32::MAX;
        let mut ties = 0u32;
        let mut pick = 0;
        for (u, &c) in profile.iter().enumerate() {
            if c < best {
                best = c;
                ties = 1;
                pick = u;
            } else if c == best {
                ties += 1;
                if rng.gen_range(0..ties) == 0 {
                    pick = u;
                }
            }
        }
        state.initialize(v, pick as Value);
    }
    state
}

/// True iff some value other than the current one does not increase the
/// total number of conflicts.
pub fn can_change_without_increase(state: &SearchState<'_>, var: Var) -> bool {
    let mut profile = vec![0u32; state.instance().domain_size()];
    state.conflict_profile(var, &mut profile);
    has_non_increasing_move(&profile, state.value(var).expect("initialized") as usize)
}

#[inline]
fn has_non_increasing_move(profile: &[u32], current: usize) -> bool {
    let base = profile[current];
    profile
        .iter()
        .enumerate()
        .any(|(u, &c)| u != current && c <= base)
}

/// A search state together with its random stream and scratch buffers.
pub struct Solver<'a> {
    state: SearchState<'a>,
    rng: SearchRng,
    profile_i: Vec<u32>,
    profile_j: Vec<u32>,
}

impl<'a> Solver<'a> {
    /// Initializes a fresh state using the solve stream of `seed`.
    pub fn new(instance: &'a CspInstance, seed: u64) -> Self {
        let rng = stream_rng(seed, Stream::Solve);
        Self::with_rng(instance, rng)
    }

    pub fn with_rng(instance: &'a CspInstance, mut rng: SearchRng) -> Self {
        let state = init_state(instance, &mut rng);
        Self::from_state(state, rng)
    }

    /// Continues from an existing state.
    pub fn from_state(state: SearchState<'a>, rng: SearchRng) -> Self {
        let d = state.instance().domain_size();
        Solver {
            state,
            rng,
            profile_i: vec![0; d],
            profile_j: vec![0; d],
        }
    }

    pub fn state(&self) -> &SearchState<'a> {
        &self.state
    }

    /// Discards the current state and initializes a new one; timestamps and
    /// the iteration counter start over.
    pub fn restart(&mut self) {
        self.state = init_state(self.state.instance(), &mut self.rng);
    }

    /// One iteration. Panics if the state has no conflicts.
    pub fn step(&mut self, stats: &mut StepStats) -> StepReport {
        let violated = self.state.violated();
        assert!(!violated.is_empty(), "step requires at least one conflict");
        let c = violated[self.rng.gen_range(0..violated.len())] as usize;
        let con = &self.state.instance().constraints()[c];
        let (ta, tb) = (self.state.timestamp(con.var_a), self.state.timestamp(con.var_b));
        let (i, j) = if ta < tb || (ta == tb && self.rng.gen::<bool>()) {
            (con.var_a, con.var_b)
        } else {
            (con.var_b, con.var_a)
        };

        let xi = self.state.value(i).expect("initialized") as usize;
        self.state.conflict_profile(i, &mut self.profile_i);
        let n = self.state.iteration();
        let j_changed_last = n > 0 && self.state.timestamp(j) == n;
        let expanded = !(j_changed_last || has_non_increasing_move(&self.profile_i, xi));

        let mut best = i64::MAX;
        let mut ties = 0u32;
        let mut pick = (i, 0usize);
        pick_min(&self.profile_i, xi, i, &mut best, &mut ties, &mut pick, &mut self.rng);
        if expanded {
            let xj = self.state.value(j).expect("initialized") as usize;
            self.state.conflict_profile(j, &mut self.profile_j);
            pick_min(&self.profile_j, xj, j, &mut best, &mut ties, &mut pick, &mut self.rng);
        }

        let (var, value) = (pick.0, pick.1 as Value);
        self.state.apply_change(var, value);
        stats.iterations += 1;
        stats.expansions += expanded as u64;
        stats.worsening += (best > 0) as u64;
        StepReport {
            constraint: c,
            first: i,
            second: j,
            expanded,
            var,
            value,
            delta: best,
        }
    }
}

/// Folds the alternatives of one variable into a running uniform-over-ties
/// minimum.
#[inline]
fn pick_min(
    profile: &[u32],
    current: usize,
    var: Var,
    best: &mut i64,
    ties: &mut u32,
    pick: &mut (Var, usize),
    rng: &mut SearchRng,
) {
    let base = profile[current] as i64;
    for (u, &cnt) in profile.iter().enumerate() {
        if u == current {
            continue;
        }
        let delta = cnt as i64 - base;
        if delta < *best {
            *best = delta;
            *ties = 1;
            *pick = (var, u);
        } else if delta == *best {
            *ties += 1;
            if rng.gen_range(0..*ties) == 0 {
                *pick = (var, u);
            }
        }
    }
}

/// Runs until a solution (or the configured target) is found, the budget
/// runs out, restarting every `restart_interval` iterations if set.
pub fn run(instance: &CspInstance, config: &UlsaConfig, seed: u64) -> Result<RunRecord> {
    config.validate(instance)?;
    let started = Instant::now();
    let mut solver = Solver::new(instance, seed);
    let mut stats = StepStats::default();
    let mut total = 0u64;
    let mut since_restart = 0u64;
    let mut restarts = 0u64;
    let mut best = usize::MAX;
    let mut best_assignment = None;

    let witness = loop {
        let conflicts = solver.state.conflict_count();
        if conflicts < best {
            best = conflicts;
            if config.track_best {
                best_assignment = Some(solver.state.assignment().values().to_vec());
            }
        }
        if conflicts == 0 {
            let assignment = solver.state.assignment().values().to_vec();
            break Some(match &config.target {
                None => Witness::Full { assignment },
                Some(t) => Witness::Partial {
                    assignment,
                    subset: (0..t.target() as Var).collect(),
                },
            });
        }
        if let Some(t) = &config.target {
            if conflicts <= t.conflict_cap() {
                if let Some(subset) = check_target(&solver.state, t) {
                    let assignment = solver.state.assignment().values().to_vec();
                    break Some(Witness::Partial { assignment, subset });
                }
            }
        }
        if config.max_iterations > 0 && total >= config.max_iterations {
            break None;
        }
        if config.restart_interval.is_some_and(|every| since_restart >= every) {
            solver.restart();
            restarts += 1;
            since_restart = 0;
            continue;
        }
        solver.step(&mut stats);
        total += 1;
        since_restart += 1;
    };

    Ok(RunRecord {
        seed,
        iterations: total,
        wall_time: started.elapsed().as_secs_f64(),
        success: witness.is_some(),
        best_conflicts: best,
        restarts,
        stats: if config.stats_enabled { stats } else { StepStats::default() },
        witness,
        best_assignment,
    })
}
