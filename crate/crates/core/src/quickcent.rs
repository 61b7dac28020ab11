//! Centrality estimation from in-degree clues. Training fits a power
//! law to a sample of exact centralities, converts its quantiles into
//! in-degree thresholds, and stores one representative median per
//! threshold band; prediction scans the thresholds and stops at the
//! first one the node's in-degree does not exceed.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::digraph::{CentralityVector, Digraph};
use crate::error::{Error, Result};
use crate::powerlaw::{fit_xmin, mle_alpha, PowerLawModel};
use crate::stats::median;

/// Interior quantile probabilities and the log-equidistant centrality
/// points that generated them.
#[derive(Debug, Clone, PartialEq)]
pub struct ProportionsSpec {
    pub probs: Vec<f64>,
    pub log_points: Vec<f64>,
}

impl ProportionsSpec {
    pub fn n(&self) -> usize {
        self.probs.len()
    }

    fn validate(&self) -> Result<()> {
        if self.probs.is_empty() || self.probs.len() != self.log_points.len() {
            return Err(Error::Input(
                "probs and log_points must be non-empty and equally long".into(),
            ));
        }
        if self.probs.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Input("probs must be non-decreasing".into()));
        }
        Ok(())
    }
}

/// Builds the proportions vector: `n` points equidistant in log scale
/// strictly between `x_min` and the sample maximum, each mapped to the
/// empirical CDF of the full centrality list at that point.
pub fn proportions_from_sample(
    centralities: &[f64],
    x_min: f64,
    n: usize,
) -> Result<ProportionsSpec> {
    if n == 0 {
        return Err(Error::Input("n must be >= 1".into()));
    }
    if centralities.is_empty() {
        return Err(Error::InsufficientData("empty centrality list".into()));
    }
    let max = centralities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max < x_min {
        return Err(Error::InsufficientData(format!(
            "no centrality at or above x_min = {x_min}"
        )));
    }
    if max == x_min {
        return Err(Error::DegenerateSample(
            "centrality range above x_min is a single point".into(),
        ));
    }
    let log_ratio = max.ln() - x_min.ln();
    let m = centralities.len() as f64;
    let mut probs = Vec::with_capacity(n);
    let mut log_points = Vec::with_capacity(n);
    for j in 1..=n {
        let t = x_min * (log_ratio * j as f64 / (n + 1) as f64).exp();
        let p = centralities.iter().filter(|&&c| c <= t).count() as f64 / m;
        log_points.push(t);
        probs.push(p);
    }
    Ok(ProportionsSpec { probs, log_points })
}

/// Lower empirical quantile of the in-degree distribution: the
/// `floor(p * n)`-th smallest in-degree (at least the 1st). The small
/// additive guard keeps `p = k/n` on rank `k` despite float rounding.
pub fn degree_threshold(g: &Digraph, p: f64) -> Result<u32> {
    let mut degrees = g.in_degrees().to_vec();
    degrees.sort_unstable();
    degree_threshold_sorted(&degrees, p)
}

fn degree_threshold_sorted(sorted_degrees: &[u32], p: f64) -> Result<u32> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Input(format!("p = {p} not in [0, 1]")));
    }
    let n = sorted_degrees.len();
    if n == 0 {
        return Err(Error::InsufficientData("empty graph".into()));
    }
    let k = (p * n as f64 + 1e-9).floor() as usize;
    Ok(sorted_degrees[k.clamp(1, n) - 1])
}

/// How the power-law lower cutoff is chosen at training time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum XminMode {
    /// Use the given cutoff as-is.
    Fixed(f64),
    /// Search for the KS-optimal cutoff among sample values up to the
    /// given percentile (see `fit_xmin`).
    Fitted(f64),
}

/// Trained estimator: a power-law fit, in-degree thresholds
/// `d0 <= d[0] <= ... <= d[n-1]`, and `n + 2` band medians.
#[derive(Debug, Clone, PartialEq)]
pub struct QuickCentModel {
    fit: PowerLawModel,
    d0: u32,
    d: Vec<u32>,
    medians: Vec<f64>,
    props: ProportionsSpec,
}

impl QuickCentModel {
    pub fn fit(&self) -> &PowerLawModel {
        &self.fit
    }

    pub fn alpha(&self) -> f64 {
        self.fit.alpha()
    }

    pub fn x_min(&self) -> f64 {
        self.fit.x_min()
    }

    pub fn d0(&self) -> u32 {
        self.d0
    }

    pub fn thresholds(&self) -> &[u32] {
        &self.d
    }

    /// Band medians `f̄_0 .. f̄_{n+1}`; length `thresholds().len() + 2`.
    pub fn medians(&self) -> &[f64] {
        &self.medians
    }

    /// Effective number of interior bands after merging duplicates.
    pub fn n_bands(&self) -> usize {
        self.d.len()
    }

    pub fn proportions(&self) -> &ProportionsSpec {
        &self.props
    }

    /// Assembles a model from a power-law fit, degree thresholds, the
    /// tail quantile probabilities that place the band boundaries, and
    /// the sub-cutoff band median. Recomputes all interior and tail
    /// medians, merges degenerate bands, and checks ordering.
    pub fn assemble(
        fit: PowerLawModel,
        d0: u32,
        d: &[u32],
        tail_probs: &[f64],
        median0: f64,
        props: ProportionsSpec,
    ) -> Result<Self> {
        props.validate()?;
        if d.len() != tail_probs.len() || d.is_empty() {
            return Err(Error::Input(
                "thresholds and tail_probs must be non-empty and equally long".into(),
            ));
        }
        if tail_probs.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Input("tail_probs must be non-decreasing".into()));
        }
        if d.windows(2).any(|w| w[0] > w[1]) || d[0] < d0 {
            return Err(Error::Input(
                "need d0 <= d_1 <= ... <= d_n".into(),
            ));
        }

        // band boundaries on the centrality axis
        let mut bounds = Vec::with_capacity(tail_probs.len() + 1);
        bounds.push(fit.x_min());
        for &q in tail_probs {
            bounds.push(fit.quantile_value(q)?);
        }

        // interior medians, merging bands whose threshold repeats the
        // previous one (empty degree band) or whose median fails to
        // increase (the previous band absorbs it)
        let mut kept_d: Vec<u32> = Vec::with_capacity(d.len());
        let mut kept_med: Vec<f64> = Vec::with_capacity(d.len());
        for (i, &di) in d.iter().enumerate() {
            let md = fit.interval_median(bounds[i], bounds[i + 1])?;
            let last_thr = *kept_d.last().unwrap_or(&d0);
            let last_med = *kept_med.last().unwrap_or(&median0);
            if di == last_thr {
                continue;
            }
            if md <= last_med {
                if let Some(t) = kept_d.last_mut() {
                    *t = di;
                }
                continue;
            }
            kept_d.push(di);
            kept_med.push(md);
        }

        // the grid's upper anchor: the largest centrality the
        // proportions were built on, recovered from the last log point
        let n_points = props.log_points.len();
        let grid_max = fit.x_min()
            * (props.log_points[n_points - 1] / fit.x_min())
                .powf((n_points + 1) as f64 / n_points as f64);

        // the open band has no upper boundary, so the fitted tail can
        // extrapolate far past every observed value; clamp its median
        // to the anchor instead of trusting the model out of range
        let mut tail = fit.open_tail_median(bounds[bounds.len() - 1])?.min(grid_max);
        while let Some(&last) = kept_med.last() {
            if tail > last {
                break;
            }
            kept_d.pop();
            kept_med.pop();
        }
        if tail <= median0 {
            // a power law always puts mass above its last boundary, so
            // this only happens when the data contradicts the model
            return Err(Error::ModelConsistency(format!(
                "open-tail median {tail} does not exceed the base median {median0}"
            )));
        }
        if !tail.is_finite() {
            tail = f64::MAX;
        }

        let mut medians = Vec::with_capacity(kept_med.len() + 2);
        medians.push(median0);
        medians.extend_from_slice(&kept_med);
        medians.push(tail);

        let model = Self {
            fit,
            d0,
            d: kept_d,
            medians,
            props,
        };
        model.check_invariants()?;
        Ok(model)
    }

    fn check_invariants(&self) -> Result<()> {
        if self.medians.len() != self.d.len() + 2 {
            return Err(Error::ModelConsistency(format!(
                "expected {} medians for {} thresholds, got {}",
                self.d.len() + 2,
                self.d.len(),
                self.medians.len()
            )));
        }
        if self.medians[1..].windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::ModelConsistency(
                "medians f_1..f_{n+1} must be strictly increasing".into(),
            ));
        }
        if self.medians[0] > self.medians[1] {
            return Err(Error::ModelConsistency(
                "f_0 must not exceed f_1".into(),
            ));
        }
        if self.d.windows(2).any(|w| w[0] >= w[1]) || self.d.first().is_some_and(|&d1| d1 <= self.d0) {
            return Err(Error::ModelConsistency(
                "thresholds must increase strictly from d0".into(),
            ));
        }
        Ok(())
    }
}

/// Trains a model from a node sample: computes exact harmonic
/// centrality for the sample only, fits the power law, and derives
/// thresholds and medians. Degree thresholds come from the full
/// graph's in-degree distribution; everything centrality-derived uses
/// only the sample.
pub fn train(
    g: &Digraph,
    training_nodes: &[usize],
    n: usize,
    xmin_mode: XminMode,
) -> Result<QuickCentModel> {
    let values = g.harmonic_for(training_nodes)?;
    train_from_values(g, training_nodes, &values, n, xmin_mode)
}

/// Same as `train` but with the sample's centralities already known.
pub fn train_from_values(
    g: &Digraph,
    training_nodes: &[usize],
    values: &[f64],
    n: usize,
    xmin_mode: XminMode,
) -> Result<QuickCentModel> {
    if training_nodes.len() != values.len() {
        return Err(Error::Input(format!(
            "{} training nodes but {} values",
            training_nodes.len(),
            values.len()
        )));
    }
    if values.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "need at least 10 training nodes, got {}",
            values.len()
        )));
    }
    if n == 0 {
        return Err(Error::Input("n must be >= 1".into()));
    }

    let fit = match xmin_mode {
        XminMode::Fixed(x_min) => {
            let alpha = mle_alpha(values, x_min)?;
            PowerLawModel::new(alpha, x_min)?
        }
        XminMode::Fitted(bound) => fit_xmin(values, bound)?.model,
    };
    finish_training(g, fit, training_nodes, values, n)
}

/// Same as `train_from_values`, but the band geometry (proportions,
/// sub-x_min mass, low-band median) is taken from a reference
/// centrality vector covering every node, while the power-law exponent
/// is still estimated from the sample alone. This mirrors the setting
/// where the centrality profile of a network family is known up front
/// and a fresh sample only recalibrates the exponent.
pub fn train_with_reference(
    g: &Digraph,
    reference: &[f64],
    sample_values: &[f64],
    n: usize,
    xmin_mode: XminMode,
) -> Result<QuickCentModel> {
    if reference.len() != g.n_nodes() {
        return Err(Error::Input(format!(
            "reference covers {} nodes but the graph has {}",
            reference.len(),
            g.n_nodes()
        )));
    }
    if sample_values.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "need at least 10 training values, got {}",
            sample_values.len()
        )));
    }
    if n == 0 {
        return Err(Error::Input("n must be >= 1".into()));
    }
    let fit = match xmin_mode {
        XminMode::Fixed(x_min) => {
            let alpha = mle_alpha(sample_values, x_min)?;
            PowerLawModel::new(alpha, x_min)?
        }
        XminMode::Fitted(bound) => fit_xmin(sample_values, bound)?.model,
    };
    let all_nodes: Vec<usize> = (0..g.n_nodes()).collect();
    finish_training(g, fit, &all_nodes, reference, n)
}

/// Derives bands and medians for a fitted exponent from the centrality
/// values paired with `nodes`.
fn finish_training(
    g: &Digraph,
    fit: PowerLawModel,
    nodes: &[usize],
    values: &[f64],
    n: usize,
) -> Result<QuickCentModel> {
    let x_min = fit.x_min();

    // share of the sample the power law does not cover; bands are
    // placed inside the remaining tail mass
    let m = values.len() as f64;
    let p0 = values.iter().filter(|&&v| v < x_min).count() as f64 / m;
    debug_assert!(p0 < 1.0, "mle/fit guarantee a non-empty tail");

    let props = proportions_from_sample(values, x_min, n)?;
    let tail_probs: Vec<f64> = props
        .probs
        .iter()
        .map(|&p| ((p - p0) / (1.0 - p0)).clamp(0.0, 1.0 - f64::EPSILON))
        .collect();

    // degree thresholds from the larger of the empirical and the
    // model-smoothed proportion at each grid point: the model irons out
    // sampling noise in the band edges, but an edge is never placed
    // below the mass actually observed, which keeps the open band from
    // swallowing real data when the fitted tail is too heavy
    let mut degrees = g.in_degrees().to_vec();
    degrees.sort_unstable();
    let d0 = degree_threshold_sorted(&degrees, p0)?;
    let d: Vec<u32> = props
        .log_points
        .iter()
        .zip(&props.probs)
        .map(|(&t, &p_emp)| {
            let p_model = p0 + (1.0 - p0) * fit.cdf(t);
            degree_threshold_sorted(&degrees, p_model.max(p_emp))
        })
        .collect::<Result<_>>()?;

    let below: Vec<f64> = nodes
        .iter()
        .zip(values)
        .filter(|(&v, _)| g.in_degree(v) <= d0)
        .map(|(_, &c)| c)
        .collect();
    let median0 = if below.is_empty() {
        values.iter().copied().fold(f64::INFINITY, f64::min)
    } else {
        median(&below)?
    };

    QuickCentModel::assemble(fit, d0, &d, &tail_probs, median0, props)
}

/// Estimate for a single in-degree: the median of the first band the
/// degree does not escape.
pub fn predict(model: &QuickCentModel, in_degree: u32) -> f64 {
    predict_with_inspections(model, in_degree).0
}

/// `predict` plus the number of threshold comparisons performed, which
/// is what makes the heuristic frugal: the scan stops at the first
/// band that contains the degree.
pub fn predict_with_inspections(model: &QuickCentModel, in_degree: u32) -> (f64, usize) {
    if in_degree <= model.d0 {
        return (model.medians[0], 1);
    }
    for (i, &di) in model.d.iter().enumerate() {
        if in_degree <= di {
            return (model.medians[i + 1], i + 2);
        }
    }
    (model.medians[model.medians.len() - 1], model.d.len() + 1)
}

/// Vectorized `predict` over every node of a graph.
pub fn predict_all(model: &QuickCentModel, g: &Digraph) -> CentralityVector {
    CentralityVector::new(
        g.in_degrees()
            .iter()
            .map(|&deg| predict(model, deg))
            .collect(),
    )
}

const MODEL_HEADER: &str = "quickcent-model v1";

/// Writes a model as versioned, human-readable key-value text.
pub fn save_model(model: &QuickCentModel, path: &Path) -> Result<()> {
    let mut out = String::new();
    let _ = writeln!(out, "{MODEL_HEADER}");
    let _ = writeln!(out, "alpha {:?}", model.fit.alpha());
    let _ = writeln!(out, "x_min {:?}", model.fit.x_min());
    let _ = writeln!(out, "n {}", model.d.len());
    let _ = writeln!(out, "d0 {}", model.d0);
    let _ = writeln!(out, "d {}", join(&model.d));
    let _ = writeln!(out, "medians {}", join_f64(&model.medians));
    let _ = writeln!(out, "probs {}", join_f64(&model.props.probs));
    let _ = writeln!(out, "log_points {}", join_f64(&model.props.log_points));
    fs::write(path, out)?;
    Ok(())
}

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn join_f64(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| format!("{x:?}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Reads a model written by `save_model`.
pub fn load_model(path: &Path) -> Result<QuickCentModel> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();

    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty model file".into(),
    })?;
    if header.trim() != MODEL_HEADER {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected header '{MODEL_HEADER}', got '{header}'"),
        });
    }

    let mut field = |key: &str| -> Result<(usize, String)> {
        let (idx, line) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: format!("missing field '{key}' (file truncated)"),
        })?;
        let line_no = idx + 1;
        match line.split_once(' ') {
            Some((k, rest)) if k == key => Ok((line_no, rest.trim().to_string())),
            _ if line.trim() == key => Ok((line_no, String::new())),
            _ => Err(Error::Parse {
                line: line_no,
                msg: format!("expected field '{key}', got '{line}'"),
            }),
        }
    };

    fn parse_scalar<T: std::str::FromStr>(line: usize, s: &str, key: &str) -> Result<T> {
        s.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("invalid {key}: '{s}'"),
        })
    }
    fn parse_list<T: std::str::FromStr>(line: usize, s: &str, key: &str) -> Result<Vec<T>> {
        s.split_whitespace()
            .map(|tok| {
                tok.parse().map_err(|_| Error::Parse {
                    line,
                    msg: format!("invalid {key} entry: '{tok}'"),
                })
            })
            .collect()
    }

    let (l, s) = field("alpha")?;
    let alpha: f64 = parse_scalar(l, &s, "alpha")?;
    let (l, s) = field("x_min")?;
    let x_min: f64 = parse_scalar(l, &s, "x_min")?;
    let (l, s) = field("n")?;
    let n: usize = parse_scalar(l, &s, "n")?;
    let (l, s) = field("d0")?;
    let d0: u32 = parse_scalar(l, &s, "d0")?;
    let (l, s) = field("d")?;
    let d: Vec<u32> = parse_list(l, &s, "d")?;
    let (l, s) = field("medians")?;
    let medians: Vec<f64> = parse_list(l, &s, "medians")?;
    let (l, s) = field("probs")?;
    let probs: Vec<f64> = parse_list(l, &s, "probs")?;
    let (l, s) = field("log_points")?;
    let log_points: Vec<f64> = parse_list(l, &s, "log_points")?;

    if d.len() != n {
        return Err(Error::Parse {
            line: l,
            msg: format!("n = {n} but {} thresholds listed", d.len()),
        });
    }
    let model = QuickCentModel {
        fit: PowerLawModel::new(alpha, x_min)?,
        d0,
        d,
        medians,
        props: ProportionsSpec { probs, log_points },
    };
    model.props.validate()?;
    model.check_invariants()?;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_pa, PaConfig};
    use approx::assert_relative_eq;

    fn star_graph() -> Digraph {
        // 12 leaves -> hub
        let arcs = (1..=12u32).map(|i| (i, 0)).collect();
        Digraph::new(13, arcs).unwrap()
    }

    #[test]
    fn proportions_log_points_are_log_equidistant() {
        let cents = vec![0.0, 0.0, 1.0, 2.0, 4.0, 16.0];
        let p = proportions_from_sample(&cents, 1.0, 3).unwrap();
        assert_eq!(p.n(), 3);
        assert_relative_eq!(p.log_points[0], 2.0, epsilon = 1e-12);
        assert_relative_eq!(p.log_points[1], 4.0, epsilon = 1e-12);
        assert_relative_eq!(p.log_points[2], 8.0, epsilon = 1e-12);
        // ecdf over the full list, <= convention
        assert_relative_eq!(p.probs[0], 4.0 / 6.0);
        assert_relative_eq!(p.probs[1], 5.0 / 6.0);
        assert_relative_eq!(p.probs[2], 5.0 / 6.0);
    }

    #[test]
    fn proportions_single_point_is_geometric_mean() {
        let cents = vec![1.0, 9.0];
        let p = proportions_from_sample(&cents, 1.0, 1).unwrap();
        assert_relative_eq!(p.log_points[0], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn proportions_degenerate_range() {
        assert!(matches!(
            proportions_from_sample(&[1.0, 1.0], 1.0, 2),
            Err(Error::DegenerateSample(_))
        ));
        assert!(proportions_from_sample(&[0.5], 1.0, 2).is_err());
    }

    #[test]
    fn degree_threshold_edges() {
        let g = star_graph();
        assert_eq!(degree_threshold(&g, 0.0).unwrap(), 0);
        assert_eq!(degree_threshold(&g, 1.0).unwrap(), 12);
        // 12 of 13 nodes have degree 0; rank 12 is still a zero
        assert_eq!(degree_threshold(&g, 12.0 / 13.0).unwrap(), 0);
        assert_eq!(degree_threshold(&g, 0.999).unwrap(), 0);
        assert!(degree_threshold(&g, 1.5).is_err());
    }

    #[test]
    fn train_guards() {
        let g = star_graph();
        let nodes: Vec<usize> = (0..13).collect();
        assert!(train(&g, &nodes[..5], 2, XminMode::Fixed(1.0)).is_err());
        assert!(train(&g, &nodes, 0, XminMode::Fixed(1.0)).is_err());
        // a single positive centrality cannot support a fit
        assert!(train(&g, &nodes, 2, XminMode::Fixed(1.0)).is_err());

        // every positive centrality equal -> degenerate exponent
        let arcs = (0..10u32).flat_map(|i| [(2 * i, 2 * i + 1), (2 * i + 1, 2 * i)]).collect();
        let cycles = Digraph::new(20, arcs).unwrap();
        let all: Vec<usize> = (0..20).collect();
        assert!(matches!(
            train(&cycles, &all, 2, XminMode::Fixed(1.0)),
            Err(Error::DegenerateSample(_))
        ));
    }

    #[test]
    fn predict_scans_and_stops() {
        let fit = PowerLawModel::new(2.0, 1.0).unwrap();
        let props = ProportionsSpec {
            probs: vec![0.5, 0.8],
            log_points: vec![2.0, 4.0],
        };
        let m = QuickCentModel::assemble(fit, 0, &[3, 5], &[0.5, 0.8], 0.1, props).unwrap();
        let (v0, c0) = predict_with_inspections(&m, 0);
        assert_eq!((v0, c0), (0.1, 1));
        let (v1, c1) = predict_with_inspections(&m, 2);
        assert_eq!(v1, m.medians()[1]);
        assert_eq!(c1, 2);
        let (v2, c2) = predict_with_inspections(&m, 5);
        assert_eq!(v2, m.medians()[2]);
        assert_eq!(c2, 3);
        let (v3, c3) = predict_with_inspections(&m, 100);
        assert_eq!(v3, m.medians()[3]);
        assert_eq!(c3, 3);
    }

    #[test]
    fn assemble_merges_repeated_thresholds() {
        let fit = PowerLawModel::new(2.0, 1.0).unwrap();
        let props = ProportionsSpec {
            probs: vec![0.5, 0.5, 0.8],
            log_points: vec![2.0, 2.0, 4.0],
        };
        let m =
            QuickCentModel::assemble(fit, 0, &[3, 3, 5], &[0.5, 0.5, 0.8], 0.1, props).unwrap();
        assert_eq!(m.thresholds(), &[3, 5]);
        assert_eq!(m.medians().len(), 4);
    }

    #[test]
    fn predict_monotone_and_in_codomain() {
        let g = gen_pa(&PaConfig::new(500, 1.0, 42)).unwrap();
        let nodes: Vec<usize> = (0..500).collect();
        let m = train(&g, &nodes, 4, XminMode::Fixed(1.0)).unwrap();
        let mut prev = f64::NEG_INFINITY;
        let max_deg = *g.in_degrees().iter().max().unwrap();
        for deg in 0..=max_deg + 3 {
            let v = predict(&m, deg);
            assert!(v >= prev);
            assert!(m.medians().contains(&v));
            prev = v;
        }
    }

    #[test]
    fn predict_all_matches_pointwise() {
        let g = gen_pa(&PaConfig::new(300, 1.0, 9)).unwrap();
        let nodes: Vec<usize> = (0..300).collect();
        let m = train(&g, &nodes, 3, XminMode::Fixed(1.0)).unwrap();
        let all = predict_all(&m, &g);
        for v in 0..g.n_nodes() {
            assert_eq!(all[v], predict(&m, g.in_degree(v)));
        }
    }

    #[test]
    fn training_ignores_node_order() {
        let g = gen_pa(&PaConfig::new(400, 1.0, 5)).unwrap();
        let fwd: Vec<usize> = (0..400).collect();
        let rev: Vec<usize> = (0..400).rev().collect();
        let a = train(&g, &fwd, 4, XminMode::Fixed(1.0)).unwrap();
        let b = train(&g, &rev, 4, XminMode::Fixed(1.0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn save_load_round_trip() {
        let g = gen_pa(&PaConfig::new(400, 1.0, 13)).unwrap();
        let nodes: Vec<usize> = (0..400).collect();
        let m = train(&g, &nodes, 4, XminMode::Fixed(1.0)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.txt");
        save_model(&m, &path).unwrap();
        let back = load_model(&path).unwrap();
        assert_eq!(m, back);
        assert_eq!(
            predict_all(&m, &g).values(),
            predict_all(&back, &g).values()
        );
    }

    #[test]
    fn load_rejects_bad_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.txt");

        std::fs::write(&path, "quickcent-model v2\n").unwrap();
        assert!(matches!(
            load_model(&path),
            Err(Error::Parse { line: 1, .. })
        ));

        std::fs::write(&path, "quickcent-model v1\nalpha 2.0\n").unwrap();
        assert!(matches!(load_model(&path), Err(Error::Parse { .. })));

        std::fs::write(
            &path,
            "quickcent-model v1\nalpha 2.0\nx_min oops\n",
        )
        .unwrap();
        assert!(matches!(
            load_model(&path),
            Err(Error::Parse { line: 3, .. })
        ));
    }
}
