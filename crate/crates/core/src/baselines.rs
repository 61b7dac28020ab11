//! Reference regressors over the single predictor in-degree: ordinary
//! least squares and a variance-reduction regression tree.

use crate::error::{Error, Result};

/// Least-squares line `centrality = slope * degree + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OlsModel {
    pub slope: f64,
    pub intercept: f64,
}

/// Fits a least-squares line to (in-degree, centrality) pairs.
pub fn ols_fit(pairs: &[(f64, f64)]) -> Result<OlsModel> {
    if pairs.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 pairs, got {}",
            pairs.len()
        )));
    }
    let n = pairs.len() as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(x, y) in pairs {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateSample(
            "constant predictor: all degrees equal".into(),
        ));
    }
    let slope = sxy / sxx;
    Ok(OlsModel {
        slope,
        intercept: my - slope * mx,
    })
}

enum TreeNode {
    Leaf {
        value: f64,
    },
    Split {
        /// go left iff degree <= threshold
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

/// Regression tree on in-degree: greedy recursive splits minimizing the
/// summed squared deviation of the children; leaves predict the mean
/// centrality of their training points.
pub struct TreeModel {
    root: TreeNode,
    pub min_leaf: usize,
    pub max_depth: usize,
    n_leaves: usize,
}

impl TreeModel {
    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }
}

/// Fits a regression tree. Splitting stops when a node has fewer than
/// `2 * min_leaf` points, reaches `max_depth`, or has zero target
/// variance.
pub fn tree_fit(pairs: &[(f64, f64)], min_leaf: usize, max_depth: usize) -> Result<TreeModel> {
    if min_leaf == 0 {
        return Err(Error::Input("min_leaf must be >= 1".into()));
    }
    if pairs.len() < 2 * min_leaf {
        return Err(Error::InsufficientData(format!(
            "need at least {} pairs for min_leaf = {min_leaf}, got {}",
            2 * min_leaf,
            pairs.len()
        )));
    }
    let mut sorted = pairs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut n_leaves = 0;
    let root = build(&sorted, min_leaf, max_depth, 0, &mut n_leaves);
    Ok(TreeModel {
        root,
        min_leaf,
        max_depth,
        n_leaves,
    })
}

fn mean_y(pairs: &[(f64, f64)]) -> f64 {
    pairs.iter().map(|p| p.1).sum::<f64>() / pairs.len() as f64
}

/// Best split position of a degree-sorted slice, by summed squared
/// deviation of the two children; candidates sit between distinct
/// degree values only. Returns (split index, children SSE).
fn best_split(sorted: &[(f64, f64)], min_leaf: usize) -> Option<(usize, f64)> {
    let n = sorted.len();
    // prefix sums over y and y^2 give each candidate's SSE in O(1)
    let mut sum = vec![0.0f64; n + 1];
    let mut sq = vec![0.0f64; n + 1];
    for (i, &(_, y)) in sorted.iter().enumerate() {
        sum[i + 1] = sum[i] + y;
        sq[i + 1] = sq[i] + y * y;
    }
    let sse = |lo: usize, hi: usize| -> f64 {
        let k = (hi - lo) as f64;
        let s = sum[hi] - sum[lo];
        (sq[hi] - sq[lo]) - s * s / k
    };
    let mut best: Option<(usize, f64)> = None;
    for i in min_leaf..=n - min_leaf {
        if sorted[i - 1].0 == sorted[i].0 {
            continue; // cannot separate equal degrees
        }
        let cost = sse(0, i) + sse(i, n);
        if best.is_none_or(|(_, b)| cost < b) {
            best = Some((i, cost));
        }
    }
    best
}

fn build(
    sorted: &[(f64, f64)],
    min_leaf: usize,
    max_depth: usize,
    depth: usize,
    n_leaves: &mut usize,
) -> TreeNode {
    let leaf = |n_leaves: &mut usize| {
        *n_leaves += 1;
        TreeNode::Leaf {
            value: mean_y(sorted),
        }
    };
    if depth >= max_depth || sorted.len() < 2 * min_leaf {
        return leaf(n_leaves);
    }
    let first_y = sorted[0].1;
    if sorted.iter().all(|&(_, y)| y == first_y) {
        return leaf(n_leaves);
    }
    match best_split(sorted, min_leaf) {
        None => leaf(n_leaves),
        Some((i, _)) => {
            let threshold = (sorted[i - 1].0 + sorted[i].0) / 2.0;
            let left = build(&sorted[..i], min_leaf, max_depth, depth + 1, n_leaves);
            let right = build(&sorted[i..], min_leaf, max_depth, depth + 1, n_leaves);
            TreeNode::Split {
                threshold,
                left: Box::new(left),
                right: Box::new(right),
            }
        }
    }
}

/// Either reference regressor, for uniform evaluation.
pub enum BaselineModel {
    Ols(OlsModel),
    Tree(TreeModel),
}

/// Evaluates a baseline at the given in-degree.
pub fn baseline_predict(model: &BaselineModel, in_degree: f64) -> f64 {
    match model {
        BaselineModel::Ols(m) => m.slope * in_degree + m.intercept,
        BaselineModel::Tree(m) => {
            let mut node = &m.root;
            loop {
                match node {
                    TreeNode::Leaf { value } => return *value,
                    TreeNode::Split {
                        threshold,
                        left,
                        right,
                    } => {
                        node = if in_degree <= *threshold { left } else { right };
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ols_exact_line() {
        let pairs: Vec<(f64, f64)> = (0..10).map(|x| (x as f64, 2.0 * x as f64 + 1.0)).collect();
        let m = ols_fit(&pairs).unwrap();
        assert_relative_eq!(m.slope, 2.0, epsilon = 1e-12);
        assert_relative_eq!(m.intercept, 1.0, epsilon = 1e-12);
        assert_relative_eq!(
            baseline_predict(&BaselineModel::Ols(m), 3.0),
            7.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn ols_guards() {
        assert!(ols_fit(&[(1.0, 2.0)]).is_err());
        assert!(matches!(
            ols_fit(&[(1.0, 2.0), (1.0, 5.0)]),
            Err(Error::DegenerateSample(_))
        ));
    }

    #[test]
    fn ols_residuals_orthogonal_to_predictor() {
        let pairs = [
            (0.0, 1.3),
            (1.0, 0.2),
            (2.0, 4.1),
            (3.0, 3.3),
            (5.0, 9.0),
            (8.0, 7.7),
        ];
        let m = ols_fit(&pairs).unwrap();
        let dot: f64 = pairs
            .iter()
            .map(|&(x, y)| x * (y - (m.slope * x + m.intercept)))
            .sum();
        assert!(dot.abs() < 1e-8, "dot = {dot}");
    }

    #[test]
    fn tree_constant_targets_single_leaf() {
        let pairs: Vec<(f64, f64)> = (0..8).map(|x| (x as f64, 5.0)).collect();
        let t = tree_fit(&pairs, 1, 20).unwrap();
        assert_eq!(t.n_leaves(), 1);
        assert_eq!(baseline_predict(&BaselineModel::Tree(t), 100.0), 5.0);
    }

    #[test]
    fn tree_separates_two_clusters() {
        let mut pairs: Vec<(f64, f64)> = (0..=5).map(|x| (x as f64, 1.0)).collect();
        pairs.extend((6..=10).map(|x| (x as f64, 9.0)));
        let t = tree_fit(&pairs, 1, 20).unwrap();
        let t = BaselineModel::Tree(t);
        assert_eq!(baseline_predict(&t, 5.0), 1.0);
        assert_eq!(baseline_predict(&t, 6.0), 9.0);
    }

    #[test]
    fn tree_first_split_matches_brute_force() {
        let pairs = [
            (0.0, 0.4),
            (1.0, 1.1),
            (1.0, 0.9),
            (2.0, 2.3),
            (3.0, 8.0),
            (4.0, 7.5),
            (4.0, 9.1),
            (6.0, 20.0),
        ];
        let mut sorted = pairs.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let (greedy_i, greedy_cost) = best_split(&sorted, 1).unwrap();

        // brute force over every admissible boundary
        let sse = |s: &[(f64, f64)]| {
            let m = mean_y(s);
            s.iter().map(|&(_, y)| (y - m) * (y - m)).sum::<f64>()
        };
        let mut brute: Option<(usize, f64)> = None;
        for i in 1..sorted.len() {
            if sorted[i - 1].0 == sorted[i].0 {
                continue;
            }
            let cost = sse(&sorted[..i]) + sse(&sorted[i..]);
            if brute.is_none_or(|(_, b)| cost < b) {
                brute = Some((i, cost));
            }
        }
        let (brute_i, brute_cost) = brute.unwrap();
        assert_eq!(greedy_i, brute_i);
        assert_relative_eq!(greedy_cost, brute_cost, epsilon = 1e-9);
    }

    #[test]
    fn tree_prediction_is_leaf_mean() {
        let pairs: Vec<(f64, f64)> = (0..30)
            .map(|x| (x as f64, (x as f64).sin() * 3.0 + x as f64))
            .collect();
        let t = tree_fit(&pairs, 2, 20).unwrap();
        let tm = BaselineModel::Tree(t);
        // group training points by predicted value and check each group mean
        let mut groups: std::collections::HashMap<u64, Vec<f64>> = std::collections::HashMap::new();
        for &(x, y) in &pairs {
            let pred = baseline_predict(&tm, x);
            groups.entry(pred.to_bits()).or_default().push(y);
        }
        for (bits, ys) in groups {
            let mean = ys.iter().sum::<f64>() / ys.len() as f64;
            assert_relative_eq!(f64::from_bits(bits), mean, epsilon = 1e-9);
        }
    }

    #[test]
    fn tree_respects_min_leaf() {
        let pairs: Vec<(f64, f64)> = (0..9).map(|x| (x as f64, x as f64 * x as f64)).collect();
        assert!(tree_fit(&pairs[..3], 2, 20).is_err());
        assert!(tree_fit(&pairs, 0, 20).is_err());
        let t = tree_fit(&pairs, 2, 20).unwrap();
        assert!(t.n_leaves() <= 4);
    }

    #[test]
    fn ols_beats_constant_in_squared_error() {
        let pairs = [
            (0.0, 1.0),
            (1.0, 3.0),
            (2.0, 2.5),
            (3.0, 6.0),
            (4.0, 5.5),
        ];
        let m = ols_fit(&pairs).unwrap();
        let my = pairs.iter().map(|p| p.1).sum::<f64>() / pairs.len() as f64;
        let sse_ols: f64 = pairs
            .iter()
            .map(|&(x, y)| (y - (m.slope * x + m.intercept)).powi(2))
            .sum();
        let sse_const: f64 = pairs.iter().map(|&(_, y)| (y - my).powi(2)).sum();
        assert!(sse_ols <= sse_const + 1e-12);
    }
}
