use crate::error::{Error, Result};

/// Index of a CSP variable, 0-based.
pub type Var = u32;
/// Domain value, 0-based, in `[0, d)`.
pub type Value = u32;

/// A binary constraint: the listed `(value_a, value_b)` pairs are forbidden
/// for `(var_a, var_b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub var_a: Var,
    pub var_b: Var,
    pub disallowed: Vec<(Value, Value)>,
}

impl Constraint {
    pub fn new(var_a: Var, var_b: Var, disallowed: Vec<(Value, Value)>) -> Self {
        Constraint {
            var_a,
            var_b,
            disallowed,
        }
    }

    /// The same relation with endpoints ordered `var_a < var_b` and the pair
    /// list sorted.
    pub fn canonicalized(&self) -> Constraint {
        let (var_a, var_b, mut pairs) = if self.var_a <= self.var_b {
            (self.var_a, self.var_b, self.disallowed.clone())
        } else {
            (
                self.var_b,
                self.var_a,
                self.disallowed.iter().map(|&(a, b)| (b, a)).collect(),
            )
        };
        pairs.sort_unstable();
        Constraint::new(var_a, var_b, pairs)
    }
}

/// One entry of a variable's adjacency list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Incidence {
    pub constraint: u32,
    pub other: Var,
    /// Whether the owning variable is `var_a` of the constraint.
    pub is_a: bool,
}

/// Lookup tables built once per instance.
///
/// `bits` holds one `d*d` bit block per constraint for O(1) membership.
/// `by_a` / `by_b` are CSR lists: for constraint `c` and a value of one
/// endpoint, the values of the *other* endpoint that are forbidden with it.
#[derive(Debug, Clone, PartialEq, Eq)]
struct RelationIndex {
    bits: Vec<u64>,
    by_a_start: Vec<u32>,
    by_a: Vec<Value>,
    by_b_start: Vec<u32>,
    by_b: Vec<Value>,
    adj_start: Vec<u32>,
    adj: Vec<Incidence>,
}

/// A binary CSP with `n` variables sharing one domain size `d`.
///
/// Immutable once built. Duplicate constraints over the same variable pair
/// are kept and each counts toward the conflict total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CspInstance {
    n: usize,
    d: usize,
    constraints: Vec<Constraint>,
    deduplicated: bool,
    index: RelationIndex,
}

impl CspInstance {
    pub fn new(n: usize, d: usize, constraints: Vec<Constraint>) -> Result<Self> {
        if n > u32::MAX as usize || d > u32::MAX as usize {
            return Err(Error::invalid("instance too large"));
        }
        if d == 0 && n > 0 {
            return Err(Error::invalid("domain size must be at least 1"));
        }
        let dd = d * d;
        let mut bits = vec![0u64; (constraints.len() * dd).div_ceil(64)];
        for (ci, c) in constraints.iter().enumerate() {
            if c.var_a as usize >= n || c.var_b as usize >= n {
                return Err(Error::invalid(format!(
                    "constraint {ci}: variable out of range ({}, {}) for n={n}",
                    c.var_a, c.var_b
                )));
            }
            if c.var_a == c.var_b {
                return Err(Error::invalid(format!(
                    "constraint {ci}: endpoints must differ (both {})",
                    c.var_a
                )));
            }
            if c.disallowed.is_empty() {
                return Err(Error::invalid(format!(
                    "constraint {ci}: empty disallowed set"
                )));
            }
            for &(a, b) in &c.disallowed {
                if a as usize >= d || b as usize >= d {
                    return Err(Error::invalid(format!(
                        "constraint {ci}: value pair ({a}, {b}) outside domain of size {d}"
                    )));
                }
                let bit = ci * dd + a as usize * d + b as usize;
                if bits[bit / 64] & (1 << (bit % 64)) != 0 {
                    return Err(Error::invalid(format!(
                        "constraint {ci}: duplicate disallowed pair ({a}, {b})"
                    )));
                }
                bits[bit / 64] |= 1 << (bit % 64);
            }
        }

        let (by_a_start, by_a) = partner_lists(&constraints, d, |&(a, b)| (a, b));
        let (by_b_start, by_b) = partner_lists(&constraints, d, |&(a, b)| (b, a));

        let mut degree = vec![0u32; n + 1];
        for c in &constraints {
            degree[c.var_a as usize] += 1;
            degree[c.var_b as usize] += 1;
        }
        let mut adj_start = vec![0u32; n + 1];
        for v in 0..n {
            adj_start[v + 1] = adj_start[v] + degree[v];
        }
        let mut fill: Vec<u32> = adj_start[..n].to_vec();
        let placeholder = Incidence {
            constraint: 0,
            other: 0,
            is_a: false,
        };
        let mut adj = vec![placeholder; adj_start[n] as usize];
        for (ci, c) in constraints.iter().enumerate() {
            let ci = ci as u32;
            adj[fill[c.var_a as usize] as usize] = Incidence {
                constraint: ci,
                other: c.var_b,
                is_a: true,
            };
            fill[c.var_a as usize] += 1;
            adj[fill[c.var_b as usize] as usize] = Incidence {
                constraint: ci,
                other: c.var_a,
                is_a: false,
            };
            fill[c.var_b as usize] += 1;
        }

        Ok(CspInstance {
            n,
            d,
            constraints,
            deduplicated: false,
            index: RelationIndex {
                bits,
                by_a_start,
                by_a,
                by_b_start,
                by_b,
                adj_start,
                adj,
            },
        })
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn domain_size(&self) -> usize {
        self.d
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// True for instances recovered from a graph, where constraints over
    /// the same variable pair have been merged into one.
    pub fn is_deduplicated(&self) -> bool {
        self.deduplicated
    }

    pub(crate) fn mark_deduplicated(mut self) -> Self {
        self.deduplicated = true;
        self
    }

    /// Whether `(value_a, value_b)` is forbidden by constraint `c`, with the
    /// pair oriented as `(var_a, var_b)`.
    #[inline]
    pub fn is_disallowed(&self, c: usize, value_a: Value, value_b: Value) -> bool {
        let bit = c * self.d * self.d + value_a as usize * self.d + value_b as usize;
        self.index.bits[bit / 64] & (1 << (bit % 64)) != 0
    }

    /// Constraint ids incident to `var`, in constraint order.
    pub fn incident_constraints(&self, var: Var) -> impl Iterator<Item = usize> + '_ {
        self.incidences(var).iter().map(|inc| inc.constraint as usize)
    }

    #[inline]
    pub(crate) fn incidences(&self, var: Var) -> &[Incidence] {
        let lo = self.index.adj_start[var as usize] as usize;
        let hi = self.index.adj_start[var as usize + 1] as usize;
        &self.index.adj[lo..hi]
    }

    /// Values of the variable on `inc`'s owning side that conflict with the
    /// other endpoint holding `other_value`.
    #[inline]
    pub(crate) fn forbidden_for(&self, inc: &Incidence, other_value: Value) -> &[Value] {
        let slot = inc.constraint as usize * (self.d + 1) + other_value as usize;
        if inc.is_a {
            // owner is var_a, other is var_b
            let lo = self.index.by_b_start[slot] as usize;
            let hi = self.index.by_b_start[slot + 1] as usize;
            &self.index.by_b[lo..hi]
        } else {
            let lo = self.index.by_a_start[slot] as usize;
            let hi = self.index.by_a_start[slot + 1] as usize;
            &self.index.by_a[lo..hi]
        }
    }

    #[inline]
    pub(crate) fn incidence_conflicts(&self, inc: &Incidence, own: Value, other: Value) -> bool {
        if inc.is_a {
            self.is_disallowed(inc.constraint as usize, own, other)
        } else {
            self.is_disallowed(inc.constraint as usize, other, own)
        }
    }

    /// Equivalent instance with every constraint canonicalized and the
    /// constraint list sorted; useful for order-insensitive comparison.
    pub fn canonicalized(&self) -> CspInstance {
        let mut constraints: Vec<Constraint> =
            self.constraints.iter().map(Constraint::canonicalized).collect();
        constraints.sort_unstable_by(|x, y| {
            (x.var_a, x.var_b, &x.disallowed).cmp(&(y.var_a, y.var_b, &y.disallowed))
        });
        let out = CspInstance::new(self.n, self.d, constraints)
            .expect("canonicalizing a valid instance keeps it valid");
        if self.deduplicated {
            out.mark_deduplicated()
        } else {
            out
        }
    }
}

/// CSR table keyed by `(constraint, key value)`, listing partner values.
fn partner_lists(
    constraints: &[Constraint],
    d: usize,
    orient: impl Fn(&(Value, Value)) -> (Value, Value),
) -> (Vec<u32>, Vec<Value>) {
    let stride = d + 1;
    let mut counts = vec![0u32; constraints.len() * stride + 1];
    for (ci, c) in constraints.iter().enumerate() {
        for pair in &c.disallowed {
            let (key, _) = orient(pair);
            counts[ci * stride + key as usize + 1] += 1;
        }
    }
    for i in 1..counts.len() {
        counts[i] += counts[i - 1];
    }
    let start = counts;
    let mut fill = start.clone();
    let mut values = vec![0; *start.last().unwrap_or(&0) as usize];
    for (ci, c) in constraints.iter().enumerate() {
        for pair in &c.disallowed {
            let (key, partner) = orient(pair);
            let slot = ci * stride + key as usize;
            values[fill[slot] as usize] = partner;
            fill[slot] += 1;
        }
    }
    (start, values)
}
