use serde::Serialize;

use crate::error::{Error, Result};
use crate::ulsa::RunRecord;

/// Empirical runtime distribution over the iteration counts of successful
/// runs.
#[derive(Debug, Clone, PartialEq)]
pub struct Rtd {
    iterations: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentialFit {
    /// `m` in `1 - exp(-x / m)`.
    pub mean: f64,
    /// Kolmogorov-Smirnov distance between the ecdf and the fitted cdf.
    pub ks: f64,
}

impl ExponentialFit {
    pub fn cdf(&self, x: f64) -> f64 {
        1.0 - (-x / self.mean).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

impl Rtd {
    pub fn from_iterations(mut iterations: Vec<u64>) -> Self {
        iterations.sort_unstable();
        Rtd { iterations }
    }

    /// Successful runs only.
    pub fn from_records(records: &[RunRecord]) -> Self {
        Self::from_iterations(records.iter().filter(|r| r.success).map(|r| r.iterations).collect())
    }

    pub fn len(&self) -> usize {
        self.iterations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterations.is_empty()
    }

    pub fn iterations(&self) -> &[u64] {
        &self.iterations
    }

    /// One point `(x_i, i / N)` per run, `x` sorted. Tied runs stack
    /// vertically; the last point has probability 1.
    pub fn ecdf(&self) -> Vec<(f64, f64)> {
        let n = self.iterations.len() as f64;
        self.iterations
            .iter()
            .enumerate()
            .map(|(i, &x)| (x as f64, (i + 1) as f64 / n))
            .collect()
    }
}

/// Maximum-likelihood exponential fit (`m` = sample mean) and its KS
/// distance.
pub fn fit_exponential(rtd: &Rtd) -> Result<ExponentialFit> {
    if rtd.len() < 2 {
        return Err(Error::NoFit(format!("need at least 2 successful runs, have {}", rtd.len())));
    }
    let n = rtd.len() as f64;
    let mean = rtd.iterations.iter().map(|&x| x as f64).sum::<f64>() / n;
    if mean <= 0.0 {
        return Err(Error::NoFit("all successful runs took 0 iterations".into()));
    }
    let fit = ExponentialFit { mean, ks: 0.0 };
    // sup |F_n - F| is reached at a jump: compare F against both sides
    let mut ks = 0.0f64;
    let mut below = 0usize;
    let xs = &rtd.iterations;
    while below < xs.len() {
        let x = xs[below];
        let mut upto = below;
        while upto < xs.len() && xs[upto] == x {
            upto += 1;
        }
        let f = fit.cdf(x as f64);
        ks = ks
            .max((f - below as f64 / n).abs())
            .max((upto as f64 / n - f).abs());
        below = upto;
    }
    Ok(ExponentialFit { ks, ..fit })
}

/// Least-squares line through the ecdf points with probability at most
/// `quantile`.
pub fn fit_linear_early(rtd: &Rtd, quantile: f64) -> Result<LinearFit> {
    let pts: Vec<(f64, f64)> = rtd.ecdf().into_iter().filter(|&(_, p)| p <= quantile).collect();
    if pts.len() < 3 {
        return Err(Error::NoFit(format!(
            "need at least 3 ecdf points at or below {quantile}, have {}",
            pts.len()
        )));
    }
    least_squares(&pts)
}

pub(crate) fn least_squares(pts: &[(f64, f64)]) -> Result<LinearFit> {
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::NoFit("all x values coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
        points: pts.len(),
    })
}
