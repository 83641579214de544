//! Partial solutions meeting a target `T`: a subset of `T` variables with no
//! conflict inside it. Found by covering every current conflict with at most
//! `n - T` variables and keeping the rest.

use crate::csp::{SearchState, Var};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TargetSpec {
    target: usize,
    conflict_cap: usize,
    removal_budget: usize,
}

/// Conflict cap used when none is configured: 5 for single-variable removal,
/// 8 otherwise.
pub fn default_conflict_cap(removal_budget: usize) -> usize {
    if removal_budget <= 1 {
        5
    } else {
        8
    }
}

impl TargetSpec {
    /// `target` variables out of `n`, checked only in states with at most
    /// `conflict_cap` conflicts.
    pub fn new(n: usize, target: usize, conflict_cap: usize) -> Result<Self> {
        if target > n {
            return Err(Error::invalid(format!("target {target} exceeds variable count {n}")));
        }
        if conflict_cap == 0 {
            return Err(Error::invalid("conflict cap must be at least 1"));
        }
        Ok(TargetSpec {
            target,
            conflict_cap,
            removal_budget: n - target,
        })
    }

    pub fn with_default_cap(n: usize, target: usize) -> Result<Self> {
        Self::new(n, target, default_conflict_cap(n.saturating_sub(target)))
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn conflict_cap(&self) -> usize {
        self.conflict_cap
    }

    pub fn removal_budget(&self) -> usize {
        self.removal_budget
    }
}

/// A minimum vertex cover of the conflict multigraph with at most `budget`
/// vertices, sorted, or `None` if every cover is larger.
///
/// Exact: iterative deepening over "branch on an uncovered edge, take one of
/// its endpoints". Cost is `O(2^budget * |conflicts|)`.
pub fn min_conflict_cover(conflicts: &[(Var, Var)], budget: usize) -> Option<Vec<Var>> {
    let mut chosen = Vec::with_capacity(budget);
    for limit in 0..=budget {
        if cover_within(conflicts, limit, &mut chosen) {
            chosen.sort_unstable();
            return Some(chosen);
        }
        debug_assert!(chosen.is_empty());
    }
    None
}

fn cover_within(edges: &[(Var, Var)], limit: usize, chosen: &mut Vec<Var>) -> bool {
    let uncovered = edges
        .iter()
        .find(|(a, b)| !chosen.contains(a) && !chosen.contains(b));
    let Some(&(a, b)) = uncovered else {
        return true;
    };
    if limit == 0 {
        return false;
    }
    for v in [a, b] {
        chosen.push(v);
        if cover_within(edges, limit - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Endpoint pairs of the currently violated constraints.
pub fn conflict_endpoints(state: &SearchState<'_>) -> Vec<(Var, Var)> {
    let cons = state.instance().constraints();
    state
        .violated()
        .iter()
        .map(|&c| (cons[c as usize].var_a, cons[c as usize].var_b))
        .collect()
}

/// The `T` variables of a partial solution in this state, sorted, if the
/// state has at most `conflict_cap` conflicts and they can be covered by
/// `n - T` variables. When the cover is smaller than `n - T`, the
/// highest-indexed remaining variables are dropped.
pub fn check_target(state: &SearchState<'_>, spec: &TargetSpec) -> Option<Vec<Var>> {
    if state.conflict_count() > spec.conflict_cap {
        return None;
    }
    let cover = min_conflict_cover(&conflict_endpoints(state), spec.removal_budget)?;
    let n = state.instance().num_vars() as Var;
    let subset: Vec<Var> = (0..n)
        .filter(|v| cover.binary_search(v).is_err())
        .take(spec.target)
        .collect();
    debug_assert_eq!(subset.len(), spec.target);
    Some(subset)
}
