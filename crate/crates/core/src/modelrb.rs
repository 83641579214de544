//! Model RB random binary CSP generation.
//!
//! With `n` variables the model uses domain size `d = n^alpha`, draws
//! `r * n * ln n` variable pairs with replacement, and gives each drawn pair
//! a constraint forbidding `p * d^2` value pairs sampled without
//! replacement. The phase transition sits at `alpha = 0.8`,
//! `r = 0.8 / (ln 4 - ln 3)`, `p = 0.25`. Derived counts are rounded half
//! away from zero (`f64::round`).

use rand::seq::index;
use rand::Rng;

use crate::csp::{Assignment, Constraint, CspInstance, Value, Var};
use crate::error::{Error, Result};
use crate::rng::{stream_rng, SearchRng, Stream};

pub const PHASE_TRANSITION_ALPHA: f64 = 0.8;
pub const PHASE_TRANSITION_P: f64 = 0.25;

/// `0.8 / (ln 4 - ln 3)`, about 2.7808.
pub fn phase_transition_r() -> f64 {
    0.8 / (4f64.ln() - 3f64.ln())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelRbParams {
    pub n: usize,
    pub alpha: f64,
    pub r: f64,
    pub p: f64,
}

impl ModelRbParams {
    pub fn new(n: usize, alpha: f64, r: f64, p: f64) -> Result<Self> {
        let params = ModelRbParams { n, alpha, r, p };
        params.validate()?;
        Ok(params)
    }

    /// Parameters on the asymptotic phase transition for `n` variables.
    pub fn phase_transition(n: usize) -> Result<Self> {
        Self::new(n, PHASE_TRANSITION_ALPHA, phase_transition_r(), PHASE_TRANSITION_P)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::invalid(format!("n must be at least 2, got {}", self.n)));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::invalid(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.r.is_finite() && self.r > 0.0) {
            return Err(Error::invalid(format!("r must be positive, got {}", self.r)));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::invalid(format!("p must lie in (0, 1), got {}", self.p)));
        }
        let d = self.domain_size();
        if d < 2 {
            return Err(Error::invalid(format!("domain size n^alpha rounds to {d}, need at least 2")));
        }
        if d > u16::MAX as usize {
            return Err(Error::invalid(format!("domain size {d} too large")));
        }
        let f = self.forbidden_per_constraint();
        if f == 0 || f >= d * d {
            return Err(Error::invalid(format!(
                "p * d^2 rounds to {f}; need between 1 and {}",
                d * d - 1
            )));
        }
        Ok(())
    }

    pub fn domain_size(&self) -> usize {
        (self.n as f64).powf(self.alpha).round() as usize
    }

    pub fn constraint_count(&self) -> usize {
        let n = self.n as f64;
        (self.r * n * n.ln()).round() as usize
    }

    pub fn forbidden_per_constraint(&self) -> usize {
        let d = self.domain_size() as f64;
        (self.p * d * d).round() as usize
    }
}

/// A Model RB instance. Deterministic in `(params, seed)`.
pub fn generate(params: &ModelRbParams, seed: u64) -> Result<CspInstance> {
    params.validate()?;
    let mut rng = stream_rng(seed, Stream::Generate);
    let d = params.domain_size();
    let forbidden = params.forbidden_per_constraint();
    let constraints = (0..params.constraint_count())
        .map(|_| {
            let (a, b) = draw_pair(&mut rng, params.n);
            Constraint::new(a, b, draw_disallowed(&mut rng, d, forbidden))
        })
        .collect();
    CspInstance::new(params.n, d, constraints)
}

/// A forced-satisfiable instance plus its hidden solution.
///
/// A hidden assignment is drawn first. Constraints are then drawn as in
/// [`generate`], except that a constraint whose disallowed set would
/// contain the hidden pair is rejected and its disallowed set redrawn (the
/// variable pair is kept) until it is consistent.
pub fn generate_forced(params: &ModelRbParams, seed: u64) -> Result<(CspInstance, Assignment)> {
    params.validate()?;
    let mut rng = stream_rng(seed, Stream::Generate);
    let d = params.domain_size();
    let forbidden = params.forbidden_per_constraint();
    let hidden: Vec<Value> = (0..params.n).map(|_| rng.gen_range(0..d as Value)).collect();
    let constraints = (0..params.constraint_count())
        .map(|_| {
            let (a, b) = draw_pair(&mut rng, params.n);
            let keep = (hidden[a as usize], hidden[b as usize]);
            loop {
                let set = draw_disallowed(&mut rng, d, forbidden);
                if !set.contains(&keep) {
                    break Constraint::new(a, b, set);
                }
            }
        })
        .collect();
    let instance = CspInstance::new(params.n, d, constraints)?;
    Ok((instance, Assignment::from_values(hidden)))
}

/// Uniform unordered pair of distinct variables, returned as `(a, b)`, `a < b`.
fn draw_pair(rng: &mut SearchRng, n: usize) -> (Var, Var) {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a.min(b) as Var, a.max(b) as Var)
}

fn draw_disallowed(rng: &mut SearchRng, d: usize, count: usize) -> Vec<(Value, Value)> {
    index::sample(rng, d * d, count)
        .into_iter()
        .map(|k| ((k / d) as Value, (k % d) as Value))
        .collect()
}
