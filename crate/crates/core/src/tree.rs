//! Entropy-based decision tree induction.
//!
//! Splits are binary axis-aligned thresholds placed at midpoints between
//! consecutive distinct sorted feature values; the split with the highest
//! information gain wins, with ties broken toward the lowest feature index
//! and then the lowest threshold so training is reproducible.

use crate::dataset::{MalnutritionClass, N_CLASSES};
use crate::error::{Error, Result};
use crate::numeric::{Matrix, Rng};

const GAIN_EPS: f64 = 1e-12;

/// Shannon entropy of a class-count vector, in bits.
pub fn entropy(class_counts: &[u64]) -> Result<f64> {
    let n: u64 = class_counts.iter().sum();
    if n == 0 {
        return Err(Error::Domain("entropy of all-zero counts is undefined".into()));
    }
    Ok(entropy_of_counts(class_counts, n))
}

#[inline]
fn entropy_of_counts(class_counts: &[u64], n: u64) -> f64 {
    // H = log2(n) - (1/n) sum c*log2(c); zero counts contribute nothing.
    let n_f = n as f64;
    let mut acc = 0.0;
    for &c in class_counts {
        if c > 0 {
            let c_f = c as f64;
            acc += c_f * c_f.log2();
        }
    }
    (n_f.log2() - acc / n_f).max(0.0)
}

/// Size-weighted average entropy of child partitions, in bits.
pub fn weighted_child_entropy(partitions: &[Vec<u64>]) -> Result<f64> {
    let sizes: Vec<u64> = partitions.iter().map(|p| p.iter().sum()).collect();
    let total: u64 = sizes.iter().sum();
    if total == 0 {
        return Err(Error::Domain("all partitions are empty".into()));
    }
    let mut acc = 0.0;
    for (partition, &size) in partitions.iter().zip(&sizes) {
        if size > 0 {
            acc += size as f64 / total as f64 * entropy_of_counts(partition, size);
        }
    }
    Ok(acc)
}

/// Information gain of splitting `parent` into `partitions`, in bits.
/// The partitions must add up to the parent counts exactly.
pub fn information_gain(parent: &[u64], partitions: &[Vec<u64>]) -> Result<f64> {
    let mut summed = vec![0u64; parent.len()];
    for partition in partitions {
        if partition.len() != parent.len() {
            return Err(Error::Domain("partition class count width mismatch".into()));
        }
        for (s, &c) in summed.iter_mut().zip(partition) {
            *s += c;
        }
    }
    if summed != parent {
        return Err(Error::Domain("partitions do not add up to the parent counts".into()));
    }
    Ok(entropy(parent)? - weighted_child_entropy(partitions)?)
}

/// Tree growth limits.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeParams {
    /// Maximum internal-node depth; `None` grows until purity.
    pub max_depth: Option<usize>,
    /// Nodes with fewer samples become leaves.
    pub min_samples_split: usize,
    pub n_classes: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams { max_depth: None, min_samples_split: 2, n_classes: N_CLASSES }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Internal {
        feature: usize,
        threshold: f64,
        /// Information gain of this split, in bits.
        gain: f64,
        /// Samples that reached this node during training.
        n_samples: usize,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        counts: Vec<u64>,
        prediction: MalnutritionClass,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    pub root: TreeNode,
    pub params: TreeParams,
    pub depth: usize,
    pub node_count: usize,
    n_features: usize,
}

impl DecisionTree {
    pub fn n_features(&self) -> usize {
        self.n_features
    }

    /// Route a row to its leaf: left iff value <= threshold.
    pub fn predict(&self, row: &[f64]) -> Result<MalnutritionClass> {
        if row.len() != self.n_features {
            return Err(Error::Domain(format!(
                "tree trained on {} features, got row of {}",
                self.n_features,
                row.len()
            )));
        }
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { prediction, .. } => return Ok(*prediction),
                TreeNode::Internal { feature, threshold, left, right, .. } => {
                    node = if row[*feature] <= *threshold { left } else { right };
                }
            }
        }
    }

    /// Total split gain per feature, weighted by the fraction of training
    /// samples reaching each node. Not normalized.
    pub fn gain_importances(&self) -> Vec<f64> {
        let mut importances = vec![0.0; self.n_features];
        let root_n = match &self.root {
            TreeNode::Internal { n_samples, .. } => *n_samples,
            TreeNode::Leaf { counts, .. } => counts.iter().sum::<u64>() as usize,
        };
        fn walk(node: &TreeNode, root_n: f64, importances: &mut [f64]) {
            if let TreeNode::Internal { feature, gain, n_samples, left, right, .. } = node {
                importances[*feature] += *n_samples as f64 / root_n * gain;
                walk(left, root_n, importances);
                walk(right, root_n, importances);
            }
        }
        walk(&self.root, root_n.max(1) as f64, &mut importances);
        importances
    }
}

fn leaf(counts: Vec<u64>) -> TreeNode {
    // Argmax with ties toward the lowest class code.
    let best = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i)
        .unwrap_or(0);
    TreeNode::Leaf {
        counts,
        prediction: MalnutritionClass::from_index(best).expect("class index in range"),
    }
}

struct SplitCandidate {
    feature: usize,
    threshold: f64,
    gain: f64,
}

/// Best split over the candidate features, or `None` when nothing improves.
fn best_split(
    x: &Matrix,
    labels: &[u8],
    indices: &[usize],
    features: &[usize],
    parent_counts: &[u64],
    n_classes: usize,
) -> Option<SplitCandidate> {
    let n = indices.len();
    let parent_entropy = entropy_of_counts(parent_counts, n as u64);
    if parent_entropy <= 0.0 {
        return None;
    }
    let mut best: Option<SplitCandidate> = None;
    let mut sorted: Vec<(f64, u8)> = Vec::with_capacity(n);
    for &f in features {
        sorted.clear();
        sorted.extend(indices.iter().map(|&i| (x.get(i, f), labels[i])));
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        if sorted[0].0 == sorted[n - 1].0 {
            continue;
        }
        let mut left_counts = vec![0u64; n_classes];
        let mut left_n = 0u64;
        for w in 0..n - 1 {
            let (value, label) = sorted[w];
            left_counts[label as usize] += 1;
            left_n += 1;
            let next_value = sorted[w + 1].0;
            if value == next_value {
                continue;
            }
            let mid = 0.5 * (value + next_value);
            // Midpoints of adjacent floats can round up onto the right
            // value; fall back to the left value so the split stays real.
            let threshold = if mid < next_value { mid } else { value };
            let right_n = n as u64 - left_n;
            let mut right_counts = vec![0u64; n_classes];
            for (rc, (&lc, &pc)) in right_counts.iter_mut().zip(left_counts.iter().zip(parent_counts)) {
                *rc = pc - lc;
            }
            let child = left_n as f64 / n as f64 * entropy_of_counts(&left_counts, left_n)
                + right_n as f64 / n as f64 * entropy_of_counts(&right_counts, right_n);
            let gain = parent_entropy - child;
            let better = match &best {
                None => gain > GAIN_EPS,
                Some(b) => gain > b.gain + GAIN_EPS,
            };
            if better {
                best = Some(SplitCandidate { feature: f, threshold, gain });
            }
        }
    }
    best
}

struct TreeBuilder<'a> {
    x: &'a Matrix,
    labels: Vec<u8>,
    params: TreeParams,
    node_count: usize,
    max_depth_seen: usize,
    rng: Option<&'a mut Rng>,
    feature_subset_size: Option<usize>,
}

impl TreeBuilder<'_> {
    fn candidate_features(&mut self) -> Vec<usize> {
        let d = self.x.cols();
        match (self.feature_subset_size, &mut self.rng) {
            (Some(size), Some(rng)) if size < d => {
                // Partial Fisher-Yates draw of `size` distinct features,
                // then ascending order so the tie rule stays "lowest index".
                let mut pool: Vec<usize> = (0..d).collect();
                for i in 0..size {
                    let j = i + rng.next_below((d - i) as u64) as usize;
                    pool.swap(i, j);
                }
                let mut subset = pool[..size].to_vec();
                subset.sort_unstable();
                subset
            }
            _ => (0..d).collect(),
        }
    }

    fn build(&mut self, indices: Vec<usize>, depth: usize) -> TreeNode {
        self.node_count += 1;
        self.max_depth_seen = self.max_depth_seen.max(depth);
        let mut counts = vec![0u64; self.params.n_classes];
        for &i in &indices {
            counts[self.labels[i] as usize] += 1;
        }
        let at_depth_limit = self.params.max_depth.is_some_and(|d| depth >= d);
        if at_depth_limit || indices.len() < self.params.min_samples_split {
            return leaf(counts);
        }
        let features = self.candidate_features();
        let Some(split) = best_split(
            self.x,
            &self.labels,
            &indices,
            &features,
            &counts,
            self.params.n_classes,
        ) else {
            return leaf(counts);
        };
        let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
            .iter()
            .partition(|&&i| self.x.get(i, split.feature) <= split.threshold);
        if left_idx.is_empty() || right_idx.is_empty() {
            return leaf(counts);
        }
        let n_samples = indices.len();
        drop(indices);
        let left = Box::new(self.build(left_idx, depth + 1));
        let right = Box::new(self.build(right_idx, depth + 1));
        TreeNode::Internal {
            feature: split.feature,
            threshold: split.threshold,
            gain: split.gain,
            n_samples,
            left,
            right,
        }
    }
}

/// Grow a tree by greedy recursive partitioning on maximal information gain.
///
/// `feature_subset_size` (with an `rng`) draws a fresh random feature subset
/// at every node — forest mode. Without it the search is exhaustive.
pub fn fit_tree(
    x: &Matrix,
    y: &[MalnutritionClass],
    params: &TreeParams,
    rng: Option<&mut Rng>,
    feature_subset_size: Option<usize>,
) -> Result<DecisionTree> {
    if x.rows() == 0 {
        return Err(Error::Domain("cannot fit a tree on an empty dataset".into()));
    }
    if x.rows() != y.len() {
        return Err(Error::Domain(format!(
            "matrix has {} rows but {} labels",
            x.rows(),
            y.len()
        )));
    }
    let mut builder = TreeBuilder {
        x,
        labels: y.iter().map(|c| c.index() as u8).collect(),
        params: params.clone(),
        node_count: 0,
        max_depth_seen: 0,
        rng,
        feature_subset_size,
    };
    let root = builder.build((0..x.rows()).collect(), 0);
    Ok(DecisionTree {
        root,
        params: params.clone(),
        depth: builder.max_depth_seen,
        node_count: builder.node_count,
        n_features: x.cols(),
    })
}
