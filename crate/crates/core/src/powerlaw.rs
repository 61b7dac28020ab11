//! Continuous power-law model: maximum-likelihood exponent, KS-based
//! lower-cutoff search, bootstrap goodness of fit, and the closed-form
//! quantile and median expressions the estimator consumes.
//!
//! All model math works in log space (`exp`/`ln`) so powers stay stable
//! for exponents near 1.

use rand::Rng as _;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed};
use crate::stats::quantile_sorted;

/// A continuous power law `p(x) = K x^{-alpha}` valid for `x >= x_min`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawModel {
    alpha: f64,
    x_min: f64,
}

impl PowerLawModel {
    pub fn new(alpha: f64, x_min: f64) -> Result<Self> {
        if !(alpha > 1.0) {
            return Err(Error::Input(format!("alpha = {alpha} must be > 1")));
        }
        if !(x_min > 0.0) {
            return Err(Error::Input(format!("x_min = {x_min} must be > 0")));
        }
        Ok(Self { alpha, x_min })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    /// Normalization constant `K = (alpha - 1) * x_min^(alpha - 1)`.
    pub fn norm_k(&self) -> f64 {
        (self.alpha - 1.0) * ((self.alpha - 1.0) * self.x_min.ln()).exp()
    }

    /// CDF of the model; 0 below `x_min`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.x_min {
            0.0
        } else {
            1.0 - ((1.0 - self.alpha) * (x.ln() - self.x_min.ln())).exp()
        }
    }

    /// Quantile `C` with `CDF(C) = p`, i.e. `x_min * (1-p)^(1/(1-alpha))`.
    pub fn quantile_value(&self, p: f64) -> Result<f64> {
        if p == 1.0 {
            return Err(Error::Divergence("quantile at p = 1 diverges".into()));
        }
        if !(0.0..1.0).contains(&p) {
            return Err(Error::Input(format!("p = {p} not in [0, 1)")));
        }
        Ok(self.x_min * ((1.0 - p).ln() / (1.0 - self.alpha)).exp())
    }

    /// Median of the model restricted to `[c_lo, c_hi]`:
    /// `((c_lo^(1-a) + c_hi^(1-a)) / 2)^(1/(1-a))`.
    pub fn interval_median(&self, c_lo: f64, c_hi: f64) -> Result<f64> {
        if c_lo < self.x_min {
            return Err(Error::Input(format!(
                "c_lo = {c_lo} below x_min = {}",
                self.x_min
            )));
        }
        if !(c_hi >= c_lo) || !c_hi.is_finite() {
            return Err(Error::Input(format!("need x_min <= c_lo <= c_hi finite, got [{c_lo}, {c_hi}]")));
        }
        if c_lo == c_hi {
            return Ok(c_lo);
        }
        let e = 1.0 - self.alpha;
        let mid = ((e * c_lo.ln()).exp() + (e * c_hi.ln()).exp()) / 2.0;
        Ok((mid.ln() / e).exp())
    }

    /// Median of the model restricted to `[c_n, infinity)`:
    /// `2^(1/(alpha-1)) * c_n`.
    pub fn open_tail_median(&self, c_n: f64) -> Result<f64> {
        if c_n < self.x_min {
            return Err(Error::Input(format!(
                "c_n = {c_n} below x_min = {}",
                self.x_min
            )));
        }
        Ok((std::f64::consts::LN_2 / (self.alpha - 1.0)).exp() * c_n)
    }

    /// Closed-form moment `<x^ell> = (a-1)/(a-1-ell) * x_min^ell`,
    /// defined for `ell < alpha - 1`.
    pub fn moment(&self, ell: u32) -> Result<f64> {
        let ell = ell as f64;
        if ell >= self.alpha - 1.0 {
            return Err(Error::Divergence(format!(
                "moment of order {ell} diverges for alpha = {}",
                self.alpha
            )));
        }
        Ok((self.alpha - 1.0) / (self.alpha - 1.0 - ell) * (ell * self.x_min.ln()).exp())
    }

    /// Inverse-CDF sample.
    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        self.x_min * ((1.0 - u).ln() / (1.0 - self.alpha)).exp()
    }
}

/// Result of the KS-minimizing lower-cutoff search.
#[derive(Debug, Clone, Copy)]
pub struct PowerLawFit {
    pub model: PowerLawModel,
    pub ks_distance: f64,
    /// Number of sample points at or above `x_min`.
    pub n_tail: usize,
    /// Percentile bound used for the candidate search (kept so the
    /// bootstrap refits with the same search space).
    pub percentile_bound: f64,
}

/// Maximum-likelihood exponent for a fixed `x_min`:
/// `1 + m / sum(ln(x_i / x_min))` over retained values `x_i >= x_min`
/// (non-positive values are always discarded).
pub fn mle_alpha(sample: &[f64], x_min: f64) -> Result<f64> {
    if !(x_min > 0.0) {
        return Err(Error::Input(format!("x_min = {x_min} must be > 0")));
    }
    // summed in sorted order so the estimate is exactly invariant to
    // the sample's ordering
    let mut logs: Vec<f64> = sample
        .iter()
        .filter(|&&x| x >= x_min && x > 0.0)
        .map(|&x| (x / x_min).ln())
        .collect();
    logs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let m = logs.len();
    let log_sum: f64 = logs.iter().sum();
    if m < 2 {
        return Err(Error::InsufficientData(format!(
            "only {m} values at or above x_min = {x_min}"
        )));
    }
    if log_sum <= 0.0 {
        return Err(Error::DegenerateSample(
            "all retained values equal x_min; exponent estimate diverges".into(),
        ));
    }
    Ok(1.0 + m as f64 / log_sum)
}

/// Kolmogorov-Smirnov sup-distance between the empirical CDF of the
/// retained sample (values `>= x_min`) and the model CDF, evaluated at
/// the sample points with both one-sided gaps per point.
pub fn ks_distance(sample: &[f64], model: &PowerLawModel) -> Result<f64> {
    let mut tail: Vec<f64> = sample
        .iter()
        .copied()
        .filter(|&x| x >= model.x_min())
        .collect();
    if tail.len() < 2 {
        return Err(Error::InsufficientData(
            "need at least 2 values at or above x_min".into(),
        ));
    }
    tail.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(ks_distance_sorted_tail(&tail, model))
}

fn ks_distance_sorted_tail(tail: &[f64], model: &PowerLawModel) -> f64 {
    let m = tail.len() as f64;
    let e = 1.0 - model.alpha();
    let ln_xmin = model.x_min().ln();
    let mut d = 0.0f64;
    for (i, &x) in tail.iter().enumerate() {
        let p = if x <= model.x_min() {
            0.0
        } else {
            1.0 - (e * (x.ln() - ln_xmin)).exp()
        };
        let hi = ((i + 1) as f64 / m - p).abs();
        let lo = (i as f64 / m - p).abs();
        d = d.max(hi).max(lo);
    }
    d
}

/// Selects `x_min` by scanning every distinct positive sample value up
/// to the given percentile of positive values (inclusive), fitting the
/// exponent by MLE at each candidate, and keeping the candidate with
/// the smallest KS distance. Ties break towards the smaller `x_min`.
///
/// Pass `100.0` to search the whole range of positive values.
pub fn fit_xmin(sample: &[f64], candidate_upper_bound_percentile: f64) -> Result<PowerLawFit> {
    if !(0.0..=100.0).contains(&candidate_upper_bound_percentile) {
        return Err(Error::Input(format!(
            "percentile bound {candidate_upper_bound_percentile} not in [0, 100]"
        )));
    }
    let mut positive: Vec<f64> = sample.iter().copied().filter(|&x| x > 0.0).collect();
    if positive.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "need at least 10 positive values, got {}",
            positive.len()
        )));
    }
    positive.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let bound = quantile_sorted(&positive, candidate_upper_bound_percentile / 100.0);
    let m_total = positive.len();

    // suffix sums of ln(x) so each candidate's MLE is O(1)
    let ln_x: Vec<f64> = positive.iter().map(|&x| x.ln()).collect();
    let mut suffix_ln = vec![0.0f64; m_total + 1];
    for i in (0..m_total).rev() {
        suffix_ln[i] = suffix_ln[i + 1] + ln_x[i];
    }

    let mut best: Option<(f64, PowerLawModel, usize)> = None;
    let mut i = 0;
    while i < m_total {
        let x_min = positive[i];
        // skip duplicates of this candidate value
        let mut j = i + 1;
        while j < m_total && positive[j] == x_min {
            j += 1;
        }
        if x_min > bound {
            break;
        }
        let m = m_total - i;
        if m >= 2 {
            let log_sum = suffix_ln[i] - m as f64 * x_min.ln();
            if log_sum > 0.0 {
                let alpha = 1.0 + m as f64 / log_sum;
                let model = PowerLawModel::new(alpha, x_min)?;
                let d = ks_distance_sorted_tail(&positive[i..], &model);
                let better = match &best {
                    None => true,
                    Some((best_d, _, _)) => d < *best_d,
                };
                if better {
                    best = Some((d, model, m));
                }
            }
        }
        i = j;
    }
    let (ks, model, n_tail) = best.ok_or_else(|| {
        Error::DegenerateSample("no usable x_min candidate below the percentile bound".into())
    })?;
    Ok(PowerLawFit {
        model,
        ks_distance: ks,
        n_tail,
        percentile_bound: candidate_upper_bound_percentile,
    })
}

/// Semi-parametric bootstrap goodness-of-fit p-value.
///
/// Each replicate redraws the full sample size: with probability
/// `n_tail / m_total` a value comes from the fitted model (inverse
/// CDF), otherwise uniformly from the below-`x_min` empirical values.
/// The replicate is refit with the same percentile bound and its KS
/// distance compared to the original; the p-value is the fraction of
/// replicates with a larger distance.
pub fn bootstrap_pvalue(
    sample: &[f64],
    fit: &PowerLawFit,
    n_boot: usize,
    seed: u64,
) -> Result<f64> {
    if n_boot == 0 {
        return Err(Error::Input("n_boot must be >= 1".into()));
    }
    let positive: Vec<f64> = sample.iter().copied().filter(|&x| x > 0.0).collect();
    let m_total = positive.len();
    if m_total == 0 {
        return Err(Error::InsufficientData("empty sample".into()));
    }
    let below: Vec<f64> = positive
        .iter()
        .copied()
        .filter(|&x| x < fit.model.x_min())
        .collect();
    let tail_prob = fit.n_tail as f64 / m_total as f64;
    let exceed: usize = (0..n_boot)
        .into_par_iter()
        .map(|rep| {
            let mut rng = rng_from_seed(derive_seed(seed, rep as u64));
            let mut draw = Vec::with_capacity(m_total);
            for _ in 0..m_total {
                if below.is_empty() || rng.random::<f64>() < tail_prob {
                    draw.push(fit.model.sample(&mut rng));
                } else {
                    draw.push(below[rng.random_range(0..below.len())]);
                }
            }
            match fit_xmin(&draw, fit.percentile_bound) {
                Ok(refit) => (refit.ks_distance > fit.ks_distance) as usize,
                // an unfittable replicate is as far from the model as it gets
                Err(_) => 1,
            }
        })
        .sum();
    Ok(exceed as f64 / n_boot as f64)
}
