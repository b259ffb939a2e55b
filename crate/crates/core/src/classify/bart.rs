use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{check_finite, check_training, ClassifyError, Prediction};
use crate::linalg::Matrix;
use crate::math::{log, normal_cdf, normal_quantile, pow, quantile_sorted, sqrt};
use crate::rng::{self, Rng};

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BartConfig {
    /// Number of trees.
    pub m: usize,
    pub burn_in: usize,
    pub draws: usize,
    /// Split probability `α_t (1 + depth)^(−β_t)`.
    pub alpha_t: f64,
    pub beta_t: f64,
    /// Leaf prior scale `σ_μ = 3 / (k √m)`.
    pub k: f64,
    pub min_leaf: usize,
    pub p_grow: f64,
    pub p_prune: f64,
    pub seed: u64,
    /// Keep every retained draw's trees in the model.
    pub keep_trees: bool,
}

impl Default for BartConfig {
    fn default() -> Self {
        BartConfig {
            m: 200,
            burn_in: 1000,
            draws: 1000,
            alpha_t: 0.95,
            beta_t: 2.0,
            k: 2.0,
            min_leaf: 5,
            p_grow: 0.28,
            p_prune: 0.28,
            seed: 0,
            keep_trees: true,
        }
    }
}

impl BartConfig {
    pub fn sigma_mu(&self) -> f64 {
        3.0 / (self.k * sqrt(self.m as f64))
    }
}

/// Compact tree: node 0 is the root; a node is a leaf when `left == u32::MAX`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeNode {
    pub var: u32,
    pub cut: f64,
    pub left: u32,
    pub right: u32,
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<TreeNode>,
}

impl Tree {
    pub fn stump(mu: f64) -> Self {
        Tree { nodes: vec![TreeNode { var: 0, cut: 0.0, left: u32::MAX, right: u32::MAX, mu }] }
    }

    /// Observations with `x[var] ≤ cut` go left.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut i = 0usize;
        loop {
            let nd = &self.nodes[i];
            if nd.left == u32::MAX {
                return nd.mu;
            }
            i = if x[nd.var as usize] <= nd.cut { nd.left as usize } else { nd.right as usize };
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BartModel {
    /// `trees[d][j]` is tree `j` of retained draw `d`.
    pub trees: Vec<Vec<Tree>>,
    /// Fixed probit offset `Φ⁻¹(ȳ)` added to every sum of trees.
    pub offset: f64,
    pub n_features: usize,
    pub config: BartConfig,
}

#[derive(Debug, Clone)]
struct Node {
    var: usize,
    cut: f64,
    left: usize,
    right: usize,
    parent: usize,
    depth: u32,
    mu: f64,
    leaf: bool,
    alive: bool,
}

#[derive(Debug, Clone)]
struct WorkTree {
    nodes: Vec<Node>,
    free: Vec<usize>,
}

impl WorkTree {
    fn stump() -> Self {
        WorkTree {
            nodes: vec![Node { var: 0, cut: 0.0, left: NONE, right: NONE, parent: NONE, depth: 0, mu: 0.0, leaf: true, alive: true }],
            free: Vec::new(),
        }
    }

    fn alive(&self, i: usize) -> bool {
        self.nodes[i].alive
    }

    fn is_stump(&self) -> bool {
        self.nodes[0].leaf
    }

    fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].leaf && self.alive(i))
    }

    /// Internal nodes whose children are both leaves.
    fn nogs(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| {
            let nd = &self.nodes[i];
            !nd.leaf && self.alive(i) && self.nodes[nd.left].leaf && self.nodes[nd.right].leaf
        })
    }

    fn free_node(&mut self, i: usize) {
        self.nodes[i].alive = false;
        self.free.push(i);
    }

    fn alloc(&mut self, node: Node) -> usize {
        match self.free.pop() {
            Some(i) => {
                self.nodes[i] = node;
                i
            }
            None => {
                self.nodes.push(node);
                self.nodes.len() - 1
            }
        }
    }

    fn find_leaf(&self, x: &[f64]) -> usize {
        let mut i = 0;
        while !self.nodes[i].leaf {
            let nd = &self.nodes[i];
            i = if x[nd.var] <= nd.cut { nd.left } else { nd.right };
        }
        i
    }

    fn compact(&self) -> Tree {
        let mut out = Vec::new();
        let mut map = vec![u32::MAX; self.nodes.len()];
        let mut stack = vec![0usize];
        let mut order = Vec::new();
        while let Some(i) = stack.pop() {
            map[i] = order.len() as u32;
            order.push(i);
            if !self.nodes[i].leaf {
                stack.push(self.nodes[i].right);
                stack.push(self.nodes[i].left);
            }
        }
        for &i in &order {
            let nd = &self.nodes[i];
            out.push(if nd.leaf {
                TreeNode { var: 0, cut: 0.0, left: u32::MAX, right: u32::MAX, mu: nd.mu }
            } else {
                TreeNode { var: nd.var as u32, cut: nd.cut, left: map[nd.left], right: map[nd.right], mu: 0.0 }
            });
        }
        Tree { nodes: out }
    }
}

/// Probit BART Gibbs sampler: Bayesian backfitting over `m` trees with
/// grow/prune/change proposals and latent-normal data augmentation.
#[derive(Debug, Clone)]
pub struct BartSampler {
    x: Matrix,
    y: Vec<bool>,
    cfg: BartConfig,
    sigma_mu: f64,
    offset: f64,
    /// Sorted distinct training values per feature, largest dropped.
    grid: Vec<Vec<f64>>,
    usable: Vec<usize>,
    trees: Vec<WorkTree>,
    leaf_of: Vec<Vec<usize>>,
    fit: Vec<f64>,
    z: Vec<f64>,
    resid: Vec<f64>,
    /// Per-node scratch for `draw_leaves`.
    cnt: Vec<usize>,
    sum: Vec<f64>,
    rng: Rng,
    iteration: usize,
}

impl BartSampler {
    pub fn new(x: &Matrix, y: &[bool], cfg: &BartConfig) -> Result<Self, ClassifyError> {
        check_training(x, y)?;
        let (n, p) = x.shape();
        let ybar = y.iter().filter(|&&v| v).count() as f64 / n as f64;
        let offset = normal_quantile(ybar);
        let mut grid = Vec::with_capacity(p);
        for j in 0..p {
            let mut v: Vec<f64> = (0..n).map(|i| x[(i, j)]).collect();
            v.sort_by(f64::total_cmp);
            v.dedup();
            v.pop();
            grid.push(v);
        }
        let usable = (0..p).filter(|&j| !grid[j].is_empty()).collect();
        let mut rng = rng::seeded(cfg.seed);
        let z = y.iter().map(|&yi| rng::probit_latent(&mut rng, offset, yi)).collect();
        Ok(BartSampler {
            x: x.clone(),
            y: y.to_vec(),
            cfg: cfg.clone(),
            sigma_mu: cfg.sigma_mu(),
            offset,
            grid,
            usable,
            trees: (0..cfg.m).map(|_| WorkTree::stump()).collect(),
            leaf_of: vec![vec![0; n]; cfg.m],
            fit: vec![0.0; n],
            z,
            resid: vec![0.0; n],
            cnt: Vec::new(),
            sum: Vec::new(),
            rng,
            iteration: 0,
        })
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// Current sum of trees at each training row (without the offset).
    pub fn fit(&self) -> &[f64] {
        &self.fit
    }

    pub fn latent(&self) -> &[f64] {
        &self.z
    }

    pub fn snapshot(&self) -> Vec<Tree> {
        self.trees.iter().map(WorkTree::compact).collect()
    }

    /// Current sum of trees at `x`, summed in tree order like `Tree::eval`.
    fn eval_current(&self, x: &[f64]) -> f64 {
        self.trees.iter().map(|t| t.nodes[t.find_leaf(x)].mu).sum()
    }

    fn log_ml(&self, n: usize, s: f64) -> f64 {
        let v = self.sigma_mu * self.sigma_mu;
        let a = 1.0 + n as f64 * v;
        -0.5 * log(a) + v * s * s / (2.0 * a)
    }

    fn split_prob(&self, depth: u32) -> f64 {
        self.cfg.alpha_t * pow(1.0 + depth as f64, -self.cfg.beta_t)
    }

    /// Log prior ratio of splitting a leaf at `depth` into two leaves.
    fn log_grow_prior(&self, depth: u32) -> f64 {
        let ps = self.split_prob(depth);
        let pc = self.split_prob(depth + 1);
        log(ps) + 2.0 * log(1.0 - pc) - log(1.0 - ps)
    }

    /// Number of grid cuts for `var` compatible with the ancestors of `node`,
    /// with the index of the first one.
    fn cut_range(&self, t: usize, node: usize, var: usize) -> (usize, usize) {
        let tree = &self.trees[t];
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        let mut child = node;
        let mut a = tree.nodes[node].parent;
        while a != NONE {
            let an = &tree.nodes[a];
            if an.var == var {
                if an.left == child {
                    hi = hi.min(an.cut);
                } else {
                    lo = lo.max(an.cut);
                }
            }
            child = a;
            a = an.parent;
        }
        let g = &self.grid[var];
        let start = g.partition_point(|&c| c <= lo);
        let end = g.partition_point(|&c| c < hi);
        (start, end.saturating_sub(start))
    }

    /// Whether `var` splits some ancestor of `node` and no cut is left for it.
    fn exhausted(&self, t: usize, node: usize, var: usize) -> bool {
        let tree = &self.trees[t];
        let mut a = tree.nodes[node].parent;
        while a != NONE {
            if tree.nodes[a].var == var {
                return self.cut_range(t, node, var).1 == 0;
            }
            a = tree.nodes[a].parent;
        }
        false
    }

    /// Uniform variable among those with a usable cut at `node`, then a
    /// uniform cut for it.
    fn draw_rule(&mut self, t: usize, node: usize) -> Option<(usize, f64)> {
        let tree = &self.trees[t];
        let mut exhausted = 0;
        let mut a = tree.nodes[node].parent;
        while a != NONE {
            let v = tree.nodes[a].var;
            // count each ancestor variable once, at its nearest occurrence
            let mut b = tree.nodes[node].parent;
            while b != a && tree.nodes[b].var != v {
                b = tree.nodes[b].parent;
            }
            if b == a && self.cut_range(t, node, v).1 == 0 {
                exhausted += 1;
            }
            a = tree.nodes[a].parent;
        }
        if self.usable.len() <= exhausted {
            return None;
        }
        let var = loop {
            let v = self.usable[rng::below(&mut self.rng, self.usable.len())];
            if !self.exhausted(t, node, v) {
                break v;
            }
        };
        let (start, count) = self.cut_range(t, node, var);
        let c = self.grid[var][start + rng::below(&mut self.rng, count)];
        Some((var, c))
    }

    /// Count and residual sum of rows whose leaf is in `leaves`, split by
    /// the rule `(var, cut)` when given.
    fn tally(&self, t: usize, leaves: &[usize], rule: Option<(usize, f64)>) -> ((usize, f64), (usize, f64)) {
        let (mut l, mut r) = ((0usize, 0.0), (0usize, 0.0));
        for i in 0..self.y.len() {
            if !leaves.contains(&self.leaf_of[t][i]) {
                continue;
            }
            let left = match rule {
                Some((v, c)) => self.x[(i, v)] <= c,
                None => self.leaf_of[t][i] == leaves[0],
            };
            if left {
                l.0 += 1;
                l.1 += self.resid[i];
            } else {
                r.0 += 1;
                r.1 += self.resid[i];
            }
        }
        (l, r)
    }

    fn accept(&mut self, log_ratio: f64) -> bool {
        log_ratio >= 0.0 || log(rng::uniform_pos(&mut self.rng)) < log_ratio
    }

    fn grow(&mut self, t: usize) {
        let b = self.trees[t].leaves().count();
        let k = rng::below(&mut self.rng, b);
        let leaf = self.trees[t].leaves().nth(k).expect("k < leaf count");
        let Some((var, cut)) = self.draw_rule(t, leaf) else { return };
        let ((nl, sl), (nr, sr)) = self.tally(t, &[leaf], Some((var, cut)));
        if nl < self.cfg.min_leaf || nr < self.cfg.min_leaf {
            return;
        }
        let tree = &self.trees[t];
        let depth = tree.nodes[leaf].depth;
        let parent = tree.nodes[leaf].parent;
        let w = tree.nogs().count();
        let parent_was_nog = parent != NONE && {
            let pn = &tree.nodes[parent];
            tree.nodes[pn.left].leaf && tree.nodes[pn.right].leaf
        };
        let w_star = w + 1 - usize::from(parent_was_nog);
        let p_grow = if tree.is_stump() { 1.0 } else { self.cfg.p_grow };
        let lik = self.log_ml(nl, sl) + self.log_ml(nr, sr) - self.log_ml(nl + nr, sl + sr);
        let prop = log(self.cfg.p_prune) + log(b as f64) - log(p_grow) - log(w_star as f64);
        if !self.accept(lik + self.log_grow_prior(depth) + prop) {
            return;
        }
        let child = |parent| Node { var: 0, cut: 0.0, left: NONE, right: NONE, parent, depth: depth + 1, mu: 0.0, leaf: true, alive: true };
        let tree = &mut self.trees[t];
        let l = tree.alloc(child(leaf));
        let r = tree.alloc(child(leaf));
        let nd = &mut tree.nodes[leaf];
        nd.var = var;
        nd.cut = cut;
        nd.left = l;
        nd.right = r;
        nd.leaf = false;
        for i in 0..self.y.len() {
            if self.leaf_of[t][i] == leaf {
                self.leaf_of[t][i] = if self.x[(i, var)] <= cut { l } else { r };
            }
        }
    }

    fn prune(&mut self, t: usize) {
        let w = self.trees[t].nogs().count();
        let k = rng::below(&mut self.rng, w);
        let node = self.trees[t].nogs().nth(k).expect("k < nog count");
        let tree = &self.trees[t];
        let (l, r) = (tree.nodes[node].left, tree.nodes[node].right);
        let ((nl, sl), (nr, sr)) = self.tally(t, &[l, r], None);
        let depth = tree.nodes[node].depth;
        let b_star = tree.leaves().count() - 1;
        let p_grow_star = if node == 0 { 1.0 } else { self.cfg.p_grow };
        let lik = self.log_ml(nl + nr, sl + sr) - self.log_ml(nl, sl) - self.log_ml(nr, sr);
        let prop = log(p_grow_star) + log(w as f64) - log(self.cfg.p_prune) - log(b_star as f64);
        if !self.accept(lik - self.log_grow_prior(depth) + prop) {
            return;
        }
        let tree = &mut self.trees[t];
        tree.nodes[node].leaf = true;
        tree.nodes[node].left = NONE;
        tree.nodes[node].right = NONE;
        tree.free_node(l);
        tree.free_node(r);
        for i in 0..self.y.len() {
            let li = self.leaf_of[t][i];
            if li == l || li == r {
                self.leaf_of[t][i] = node;
            }
        }
    }

    fn change(&mut self, t: usize) {
        let w = self.trees[t].nogs().count();
        let k = rng::below(&mut self.rng, w);
        let node = self.trees[t].nogs().nth(k).expect("k < nog count");
        let Some((var, cut)) = self.draw_rule(t, node) else { return };
        let (l, r) = (self.trees[t].nodes[node].left, self.trees[t].nodes[node].right);
        let ((ol, osl), (or, osr)) = self.tally(t, &[l, r], None);
        let ((nl, sl), (nr, sr)) = self.tally(t, &[l, r], Some((var, cut)));
        if nl < self.cfg.min_leaf || nr < self.cfg.min_leaf {
            return;
        }
        let lik = self.log_ml(nl, sl) + self.log_ml(nr, sr) - self.log_ml(ol, osl) - self.log_ml(or, osr);
        if !self.accept(lik) {
            return;
        }
        let nd = &mut self.trees[t].nodes[node];
        nd.var = var;
        nd.cut = cut;
        for i in 0..self.y.len() {
            let li = self.leaf_of[t][i];
            if li == l || li == r {
                self.leaf_of[t][i] = if self.x[(i, var)] <= cut { l } else { r };
            }
        }
    }

    fn draw_leaves(&mut self, t: usize) {
        let len = self.trees[t].nodes.len();
        self.cnt.clear();
        self.cnt.resize(len, 0);
        self.sum.clear();
        self.sum.resize(len, 0.0);
        for i in 0..self.y.len() {
            let li = self.leaf_of[t][i];
            self.cnt[li] += 1;
            self.sum[li] += self.resid[i];
        }
        let prec0 = 1.0 / (self.sigma_mu * self.sigma_mu);
        let tree = &mut self.trees[t];
        for li in 0..len {
            let nd = &mut tree.nodes[li];
            if !(nd.leaf && nd.alive) {
                continue;
            }
            let prec = self.cnt[li] as f64 + prec0;
            let mean = self.sum[li] / prec;
            nd.mu = mean + rng::std_normal(&mut self.rng) / sqrt(prec);
        }
    }

    /// One full MCMC iteration: every tree is updated against its partial
    /// residual, then the latent normals are redrawn.
    pub fn step(&mut self) {
        let n = self.y.len();
        for t in 0..self.cfg.m {
            // take tree t out before its structure changes
            for i in 0..n {
                self.fit[i] -= self.trees[t].nodes[self.leaf_of[t][i]].mu;
                self.resid[i] = self.z[i] - self.offset - self.fit[i];
            }
            let u = rng::uniform(&mut self.rng);
            if self.trees[t].is_stump() || u < self.cfg.p_grow {
                self.grow(t);
            } else if u < self.cfg.p_grow + self.cfg.p_prune {
                self.prune(t);
            } else {
                self.change(t);
            }
            self.draw_leaves(t);
            for i in 0..n {
                self.fit[i] += self.trees[t].nodes[self.leaf_of[t][i]].mu;
            }
        }
        for i in 0..n {
            self.z[i] = rng::probit_latent(&mut self.rng, self.offset + self.fit[i], self.y[i]);
        }
        self.iteration += 1;
    }

    /// Structural checks: split variables exist, cuts come from the training
    /// grid, leaves hold at least `min_leaf` rows, and the cached row-to-leaf
    /// map agrees with a fresh traversal.
    pub fn trees_valid(&self) -> bool {
        let p = self.x.cols();
        for (t, tree) in self.trees.iter().enumerate() {
            let mut cnt = vec![0usize; tree.nodes.len()];
            for i in 0..self.y.len() {
                let li = tree.find_leaf(self.x.row(i));
                if li != self.leaf_of[t][i] {
                    return false;
                }
                cnt[li] += 1;
            }
            for (i, nd) in tree.nodes.iter().enumerate() {
                if !tree.alive(i) {
                    continue;
                }
                if nd.leaf {
                    if !tree.is_stump() && cnt[i] < self.cfg.min_leaf {
                        return false;
                    }
                } else if nd.var >= p || self.grid[nd.var].binary_search_by(|c| c.total_cmp(&nd.cut)).is_err() {
                    return false;
                }
            }
        }
        true
    }
}

fn clamp_prob(p: f64) -> f64 {
    p.clamp(1e-15, 1.0 - 1e-15)
}

fn summarize(draws: Vec<f64>) -> Prediction {
    let mean = draws.iter().sum::<f64>() / draws.len() as f64;
    let mut sorted = draws.clone();
    sorted.sort_by(f64::total_cmp);
    Prediction {
        doc_id: None,
        prob_madison: clamp_prob(mean),
        lo95: Some(quantile_sorted(&sorted, 0.025)),
        hi95: Some(quantile_sorted(&sorted, 0.975)),
        draws,
    }
}

fn run(x: &Matrix, y: &[bool], x_test: Option<&Matrix>, cfg: &BartConfig) -> Result<(BartModel, Vec<Prediction>), ClassifyError> {
    if let Some(xt) = x_test {
        if xt.cols() != x.cols() {
            return Err(ClassifyError::DimensionMismatch { expected: x.cols(), got: xt.cols() });
        }
        check_finite(xt)?;
    }
    let mut s = BartSampler::new(x, y, cfg)?;
    for _ in 0..cfg.burn_in {
        s.step();
    }
    let n_test = x_test.map_or(0, Matrix::rows);
    let mut per_doc: Vec<Vec<f64>> = vec![Vec::with_capacity(cfg.draws); n_test];
    let mut kept = Vec::new();
    for _ in 0..cfg.draws {
        s.step();
        if let Some(xt) = x_test {
            for (i, acc) in per_doc.iter_mut().enumerate() {
                acc.push(clamp_prob(normal_cdf(s.offset + s.eval_current(xt.row(i)))));
            }
        }
        if cfg.keep_trees {
            kept.push(s.snapshot());
        }
    }
    let model = BartModel { trees: kept, offset: s.offset, n_features: x.cols(), config: cfg.clone() };
    Ok((model, per_doc.into_iter().map(summarize).collect()))
}

pub fn bart_fit(x: &Matrix, y: &[bool], cfg: &BartConfig) -> Result<BartModel, ClassifyError> {
    let cfg = BartConfig { keep_trees: true, ..cfg.clone() };
    Ok(run(x, y, None, &cfg)?.0)
}

/// Fits and scores `x_test` draw by draw without retaining trees unless
/// `cfg.keep_trees` is set.
pub fn bart_fit_predict(x: &Matrix, y: &[bool], x_test: &Matrix, cfg: &BartConfig) -> Result<Vec<Prediction>, ClassifyError> {
    Ok(run(x, y, Some(x_test), cfg)?.1)
}

/// Mean over draws of `Φ(offset + Σ trees)` with 2.5/97.5 percentiles.
pub fn bart_predict(model: &BartModel, x: &Matrix) -> Result<Vec<Prediction>, ClassifyError> {
    if x.cols() != model.n_features {
        return Err(ClassifyError::DimensionMismatch { expected: model.n_features, got: x.cols() });
    }
    check_finite(x)?;
    Ok((0..x.rows())
        .map(|i| {
            let draws = model
                .trees
                .iter()
                .map(|ts| clamp_prob(normal_cdf(model.offset + ts.iter().map(|t| t.eval(x.row(i))).sum::<f64>())))
                .collect();
            summarize(draws)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> BartConfig {
        BartConfig { m: 20, burn_in: 100, draws: 100, seed: 3, ..Default::default() }
    }

    #[test]
    fn stump_model_is_half() {
        let model = BartModel {
            trees: vec![vec![Tree::stump(0.0); 5]; 3],
            offset: 0.0,
            n_features: 2,
            config: BartConfig::default(),
        };
        let p = bart_predict(&model, &Matrix::from_rows(&[[0.3, 9.0]])).unwrap();
        assert_eq!(p[0].prob_madison, 0.5);
        assert_eq!((p[0].lo95, p[0].hi95), (Some(0.5), Some(0.5)));
    }

    #[test]
    fn step_function() {
        let mut r = rng::seeded(1);
        let n = 200;
        let x = Matrix::from_fn(n, 1, |_, _| 2.0 * rng::uniform(&mut r) - 1.0);
        let y: Vec<bool> = (0..n).map(|i| x[(i, 0)] > 0.0).collect();
        let m = bart_fit(&x, &y, &small()).unwrap();
        let preds = bart_predict(&m, &x).unwrap();
        let correct = preds.iter().zip(&y).filter(|(p, &yi)| (p.prob_madison > 0.5) == yi).count();
        assert!(correct as f64 / n as f64 >= 0.95, "{correct}");
        for p in &preds {
            assert!(p.prob_madison > 0.0 && p.prob_madison < 1.0);
        }
    }

    #[test]
    fn sampler_keeps_trees_valid() {
        let mut r = rng::seeded(2);
        let x = Matrix::from_fn(60, 3, |_, _| rng::uniform(&mut r));
        let y: Vec<bool> = (0..60).map(|i| x[(i, 1)] + 0.3 * rng::std_normal(&mut r) > 0.5).collect();
        let mut s = BartSampler::new(&x, &y, &small()).unwrap();
        for _ in 0..50 {
            s.step();
            assert!(s.trees_valid());
        }
        assert!(s.snapshot().iter().any(|t| t.nodes.len() > 1));
    }

    #[test]
    fn single_class_rejected() {
        let x = Matrix::zeros(4, 1);
        assert_eq!(bart_fit(&x, &[true; 4], &small()).map(|_| ()), Err(ClassifyError::SingleClass));
    }
}
