//! Binary classification tree grown greedily on Gini impurity (CART).

use serde::{Deserialize, Serialize};

use crate::error::{invalid_input, invalid_param, Result};
use crate::pointcloud::Structure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: usize,
    pub min_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams { max_depth: 8, min_leaf: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Node {
    Leaf {
        label: Structure,
        /// Training samples per class, BCC first.
        counts: [usize; 2],
    },
    Split {
        feature: usize,
        /// Rows with `x[feature] <= threshold` go left.
        threshold: f64,
        left: Box<Node>,
        right: Box<Node>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    pub n_features: usize,
    pub params: TreeParams,
    pub impurity: String,
    pub root: Node,
}

impl TreeModel {
    pub fn depth(&self) -> usize {
        fn d(n: &Node) -> usize {
            match n {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + d(left).max(d(right)),
            }
        }
        d(&self.root)
    }

    pub fn leaf_count(&self) -> usize {
        fn c(n: &Node) -> usize {
            match n {
                Node::Leaf { .. } => 1,
                Node::Split { left, right, .. } => c(left) + c(right),
            }
        }
        c(&self.root)
    }
}

fn class_index(s: Structure) -> usize {
    match s {
        Structure::Bcc => 0,
        Structure::Fcc => 1,
    }
}

fn gini(counts: [usize; 2]) -> f64 {
    let n = (counts[0] + counts[1]) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let p = counts[0] as f64 / n;
    1.0 - p * p - (1.0 - p) * (1.0 - p)
}

fn majority(counts: [usize; 2]) -> Structure {
    // ties go to BCC
    if counts[1] > counts[0] {
        Structure::Fcc
    } else {
        Structure::Bcc
    }
}

struct Builder<'a> {
    x: &'a [Vec<f64>],
    y: &'a [Structure],
    params: TreeParams,
    n_features: usize,
}

impl Builder<'_> {
    fn counts(&self, rows: &[usize]) -> [usize; 2] {
        let mut c = [0, 0];
        for &r in rows {
            c[class_index(self.y[r])] += 1;
        }
        c
    }

    /// Best `(feature, threshold, impurity)`; ties keep the lowest feature
    /// index, then the lowest threshold.
    fn best_split(&self, rows: &[usize]) -> Option<(usize, f64)> {
        let n = rows.len();
        let min_leaf = self.params.min_leaf.max(1);
        let total = self.counts(rows);
        let mut best: Option<(f64, usize, f64)> = None;
        let mut sorted = rows.to_vec();
        for f in 0..self.n_features {
            sorted.sort_by(|&a, &b| self.x[a][f].total_cmp(&self.x[b][f]));
            let mut left = [0usize, 0usize];
            for k in 0..n - 1 {
                left[class_index(self.y[sorted[k]])] += 1;
                let (lo, hi) = (self.x[sorted[k]][f], self.x[sorted[k + 1]][f]);
                let n_left = k + 1;
                if lo == hi || n_left < min_leaf || n - n_left < min_leaf {
                    continue;
                }
                let right = [total[0] - left[0], total[1] - left[1]];
                let impurity = (n_left as f64 * gini(left) + (n - n_left) as f64 * gini(right)) / n as f64;
                let threshold = lo + (hi - lo) / 2.0;
                if best.is_none_or(|(b, _, _)| impurity < b) {
                    best = Some((impurity, f, threshold));
                }
            }
        }
        best.map(|(_, f, t)| (f, t))
    }

    fn grow(&self, rows: &[usize], depth: usize) -> Node {
        let counts = self.counts(rows);
        let pure = counts[0] == 0 || counts[1] == 0;
        if pure || depth >= self.params.max_depth || rows.len() < 2 * self.params.min_leaf.max(1) {
            return Node::Leaf {
                label: majority(counts),
                counts,
            };
        }
        match self.best_split(rows) {
            None => Node::Leaf {
                label: majority(counts),
                counts,
            },
            Some((feature, threshold)) => {
                let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| self.x[i][feature] <= threshold);
                Node::Split {
                    feature,
                    threshold,
                    left: Box::new(self.grow(&l, depth + 1)),
                    right: Box::new(self.grow(&r, depth + 1)),
                }
            }
        }
    }
}

/// Grows a tree on `x` (rows of equal width) with labels `y`. Single-class
/// input yields a one-leaf model.
pub fn train_tree(x: &[Vec<f64>], y: &[Structure], params: &TreeParams) -> Result<TreeModel> {
    if x.len() != y.len() {
        return Err(invalid_input(format!("{} feature rows but {} labels", x.len(), y.len())));
    }
    if x.is_empty() {
        return Err(invalid_input("no training rows"));
    }
    if params.min_leaf == 0 {
        return Err(invalid_param("min_leaf must be positive"));
    }
    let n_features = x[0].len();
    if x.iter().any(|r| r.len() != n_features) {
        return Err(invalid_input("feature rows have different lengths"));
    }
    if x.iter().flatten().any(|v| !v.is_finite()) {
        return Err(invalid_input("feature matrix has non-finite entries"));
    }
    let builder = Builder {
        x,
        y,
        params: *params,
        n_features,
    };
    let rows: Vec<usize> = (0..x.len()).collect();
    Ok(TreeModel {
        n_features,
        params: *params,
        impurity: "gini".into(),
        root: builder.grow(&rows, 0),
    })
}

pub fn predict(model: &TreeModel, features: &[f64]) -> Structure {
    let mut node = &model.root;
    loop {
        match node {
            Node::Leaf { label, .. } => return *label,
            Node::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                node = if features[*feature] <= *threshold { left } else { right };
            }
        }
    }
}
