use super::assignment::Assignment;
use super::instance::{CspInstance, Value, Var};
use crate::error::{Error, Result};

const ABSENT: u32 = u32::MAX;

/// Counts the constraints whose endpoints both hold values and whose value
/// pair is disallowed. Duplicate constraints count separately.
pub fn conflict_count(instance: &CspInstance, assignment: &Assignment) -> Result<usize> {
    check_assignment(instance, assignment)?;
    Ok(instance
        .constraints()
        .iter()
        .enumerate()
        .filter(|(c, con)| {
            match (assignment.get(con.var_a), assignment.get(con.var_b)) {
                (Some(a), Some(b)) => instance.is_disallowed(*c, a, b),
                _ => false,
            }
        })
        .count())
}

fn check_assignment(instance: &CspInstance, assignment: &Assignment) -> Result<()> {
    if assignment.len() != instance.num_vars() {
        return Err(Error::invalid(format!(
            "assignment has {} entries, instance has {} variables",
            assignment.len(),
            instance.num_vars()
        )));
    }
    let d = instance.domain_size() as Value;
    for (v, &x) in assignment.raw().iter().enumerate() {
        if !Assignment::is_unset_raw(x) && x >= d {
            return Err(Error::invalid(format!(
                "variable {v} holds value {x}, outside domain of size {d}"
            )));
        }
    }
    Ok(())
}

/// Local search state: assignment, per-variable timestamps, iteration
/// counter and the set of currently violated constraints.
///
/// `violated` is a dense list plus a position map, giving O(1) uniform
/// selection, insertion and removal.
#[derive(Debug, Clone)]
pub struct SearchState<'a> {
    instance: &'a CspInstance,
    assignment: Assignment,
    timestamps: Vec<u64>,
    iteration: u64,
    violated: Vec<u32>,
    position: Vec<u32>,
}

impl<'a> SearchState<'a> {
    /// A state with every variable unset, `t[v] = 0` and iteration 0.
    pub fn new(instance: &'a CspInstance) -> Self {
        SearchState {
            instance,
            assignment: Assignment::unset(instance.num_vars()),
            timestamps: vec![0; instance.num_vars()],
            iteration: 0,
            violated: Vec::new(),
            position: vec![ABSENT; instance.num_constraints()],
        }
    }

    /// A state starting from `assignment` (which may be partial).
    pub fn with_assignment(instance: &'a CspInstance, assignment: Assignment) -> Result<Self> {
        check_assignment(instance, &assignment)?;
        let mut state = SearchState::new(instance);
        state.assignment = assignment;
        for c in state.recount_violated() {
            state.mark_violated(c as u32);
        }
        Ok(state)
    }

    pub fn instance(&self) -> &'a CspInstance {
        self.instance
    }

    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    #[inline]
    pub fn value(&self, var: Var) -> Option<Value> {
        self.assignment.get(var)
    }

    #[inline]
    pub fn timestamp(&self, var: Var) -> u64 {
        self.timestamps[var as usize]
    }

    pub fn timestamps(&self) -> &[u64] {
        &self.timestamps
    }

    /// Number of changes applied so far (`n` in the algorithm).
    #[inline]
    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    #[inline]
    pub fn conflict_count(&self) -> usize {
        self.violated.len()
    }

    /// Violated constraint ids, in no particular order.
    #[inline]
    pub fn violated(&self) -> &[u32] {
        &self.violated
    }

    pub fn is_violated(&self, constraint: usize) -> bool {
        self.position[constraint] != ABSENT
    }

    /// Violated constraints recomputed from scratch, sorted.
    pub fn recount_violated(&self) -> Vec<usize> {
        let inst = self.instance;
        inst.constraints()
            .iter()
            .enumerate()
            .filter(|(c, con)| {
                let a = self.assignment.raw_get(con.var_a);
                let b = self.assignment.raw_get(con.var_b);
                !Assignment::is_unset_raw(a)
                    && !Assignment::is_unset_raw(b)
                    && inst.is_disallowed(*c, a, b)
            })
            .map(|(c, _)| c)
            .collect()
    }

    /// For each value `u`, the number of constraints incident to `var` that
    /// would be violated with `var = u` (others unchanged, unset neighbours
    /// ignored). One sweep over the forbidden partner lists.
    #[inline]
    pub fn conflict_profile(&self, var: Var, out: &mut [u32]) {
        debug_assert_eq!(out.len(), self.instance.domain_size());
        out.fill(0);
        for inc in self.instance.incidences(var) {
            let other = self.assignment.raw_get(inc.other);
            if Assignment::is_unset_raw(other) {
                continue;
            }
            for &u in self.instance.forbidden_for(inc, other) {
                out[u as usize] += 1;
            }
        }
    }

    /// `out[u]` = change in total conflicts if `var` were set to `u`.
    ///
    /// Panics if `var` is unset.
    pub fn evaluate_all_values(&self, var: Var, out: &mut [i64]) {
        let current = self.value(var).expect("variable must be initialized") as usize;
        assert_eq!(out.len(), self.instance.domain_size());
        out.fill(0);
        for inc in self.instance.incidences(var) {
            let other = self.assignment.raw_get(inc.other);
            if Assignment::is_unset_raw(other) {
                continue;
            }
            for &u in self.instance.forbidden_for(inc, other) {
                out[u as usize] += 1;
            }
        }
        let base = out[current];
        for o in out.iter_mut() {
            *o -= base;
        }
    }

    /// Change in total conflicts if `var` were set to `value`.
    ///
    /// Panics if `var` is unset or `value` is outside the domain.
    pub fn delta_conflicts(&self, var: Var, value: Value) -> i64 {
        assert!((value as usize) < self.instance.domain_size(), "value out of range");
        let current = self.value(var).expect("variable must be initialized");
        let mut delta = 0i64;
        for inc in self.instance.incidences(var) {
            let other = self.assignment.raw_get(inc.other);
            if Assignment::is_unset_raw(other) {
                continue;
            }
            delta += self.instance.incidence_conflicts(inc, value, other) as i64;
            delta -= self.instance.incidence_conflicts(inc, current, other) as i64;
        }
        delta
    }

    /// Sets a variable that is currently unset, during construction. Does not
    /// advance the iteration counter or touch timestamps.
    pub fn initialize(&mut self, var: Var, value: Value) {
        assert!(!self.assignment.is_initialized(var), "variable {var} already initialized");
        assert!((value as usize) < self.instance.domain_size(), "value out of range");
        self.assignment.set(var, value);
        let inst = self.instance;
        for inc in inst.incidences(var) {
            let other = self.assignment.raw_get(inc.other);
            if !Assignment::is_unset_raw(other) && inst.incidence_conflicts(inc, value, other) {
                self.mark_violated(inc.constraint);
            }
        }
    }

    /// Moves `var` to a new value: `n += 1`, `t[var] = n`, violated set
    /// updated incrementally.
    ///
    /// Panics if `value` equals the current value (a change must move the
    /// variable), if `var` is unset, or if `value` is out of range.
    #[inline]
    pub fn apply_change(&mut self, var: Var, value: Value) {
        let old = self.value(var).expect("variable must be initialized");
        assert_ne!(old, value, "change must move variable {var} to a different value");
        assert!((value as usize) < self.instance.domain_size(), "value out of range");
        self.assignment.set(var, value);
        self.iteration += 1;
        self.timestamps[var as usize] = self.iteration;
        let inst = self.instance;
        for inc in inst.incidences(var) {
            let other = self.assignment.raw_get(inc.other);
            if Assignment::is_unset_raw(other) {
                continue;
            }
            let was = inst.incidence_conflicts(inc, old, other);
            let now = inst.incidence_conflicts(inc, value, other);
            if was != now {
                if now {
                    self.mark_violated(inc.constraint);
                } else {
                    self.unmark_violated(inc.constraint);
                }
            }
        }
    }

    #[inline]
    fn mark_violated(&mut self, c: u32) {
        debug_assert_eq!(self.position[c as usize], ABSENT);
        self.position[c as usize] = self.violated.len() as u32;
        self.violated.push(c);
    }

    #[inline]
    fn unmark_violated(&mut self, c: u32) {
        let pos = self.position[c as usize];
        debug_assert_ne!(pos, ABSENT);
        let last = self.violated.pop().expect("violated set is nonempty");
        if last != c {
            self.violated[pos as usize] = last;
            self.position[last as usize] = pos;
        }
        self.position[c as usize] = ABSENT;
    }
}
