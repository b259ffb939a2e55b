use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{check_finite, check_training, ClassifyError, Prediction};
use crate::linalg::Matrix;
use crate::math::{fabs, log, pow, sigmoid, softplus, sqrt};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LassoConfig {
    /// Number of λ values on the path.
    pub path_size: usize,
    /// Path spans `λ_max · 10^-decades ..= λ_max`.
    pub decades: f64,
    /// Stop when every KKT condition holds to this tolerance.
    pub tol: f64,
    pub max_sweeps: usize,
    /// The path stops once the deviance falls below this fraction of the
    /// null deviance; further points only chase a separating direction.
    pub min_dev_ratio: f64,
}

impl Default for LassoConfig {
    fn default() -> Self {
        LassoConfig { path_size: 100, decades: 4.0, tol: 1e-8, max_sweeps: 100_000, min_dev_ratio: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardization {
    pub mean: Vec<f64>,
    /// Population standard deviation, or 1 for constant features.
    pub scale: Vec<f64>,
}

impl Standardization {
    pub fn fit(x: &Matrix) -> Self {
        let (n, p) = x.shape();
        let mut mean = vec![0.0; p];
        let mut scale = vec![0.0; p];
        for j in 0..p {
            let m = (0..n).map(|i| x[(i, j)]).sum::<f64>() / n as f64;
            let v = (0..n).map(|i| (x[(i, j)] - m) * (x[(i, j)] - m)).sum::<f64>() / n as f64;
            mean[j] = m;
            scale[j] = if v > 0.0 { sqrt(v) } else { 1.0 };
        }
        Standardization { mean, scale }
    }

    pub fn apply(&self, x: &Matrix) -> Matrix {
        Matrix::from_fn(x.rows(), x.cols(), |i, j| (x[(i, j)] - self.mean[j]) / self.scale[j])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathPoint {
    pub lambda: f64,
    pub nonzero: usize,
    /// Corrected AIC at this λ.
    pub aicc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LassoModel {
    pub intercept: f64,
    /// Coefficients on the standardized scale, one per feature.
    pub beta: Vec<f64>,
    pub lambda: f64,
    pub path: Vec<PathPoint>,
    pub standardization: Standardization,
}

impl LassoModel {
    /// Nonzero coefficients by feature index.
    pub fn coefficients(&self) -> BTreeMap<usize, f64> {
        self.beta.iter().enumerate().filter(|(_, b)| **b != 0.0).map(|(j, b)| (j, *b)).collect()
    }
}

/// Negative log-likelihood `Σ softplus(η_i) − y_i η_i` with `η = b₀ + Xβ`.
pub fn logistic_loss(x: &Matrix, y: &[bool], b0: f64, beta: &[f64]) -> f64 {
    (0..x.rows())
        .map(|i| {
            let eta = b0 + crate::linalg::dot(x.row(i), beta);
            softplus(eta) - if y[i] { eta } else { 0.0 }
        })
        .sum()
}

/// Gradient of [`logistic_loss`]: `(∂/∂b₀, ∂/∂β)`.
pub fn logistic_gradient(x: &Matrix, y: &[bool], b0: f64, beta: &[f64]) -> (f64, Vec<f64>) {
    let mut g0 = 0.0;
    let mut g = vec![0.0; x.cols()];
    for i in 0..x.rows() {
        let r = sigmoid(b0 + crate::linalg::dot(x.row(i), beta)) - if y[i] { 1.0 } else { 0.0 };
        g0 += r;
        for (gj, xij) in g.iter_mut().zip(x.row(i)) {
            *gj += r * xij;
        }
    }
    (g0, g)
}

/// Largest violation of the optimality conditions of
/// `logistic_loss + λ‖β‖₁` (intercept unpenalized).
pub fn kkt_violation(x: &Matrix, y: &[bool], b0: f64, beta: &[f64], lambda: f64) -> f64 {
    let (g0, g) = logistic_gradient(x, y, b0, beta);
    let mut worst = fabs(g0);
    for (gj, bj) in g.iter().zip(beta) {
        let v = if *bj == 0.0 { (fabs(*gj) - lambda).max(0.0) } else { fabs(gj + lambda * bj.signum()) };
        worst = worst.max(v);
    }
    worst
}

#[inline]
fn soft(z: f64, t: f64) -> f64 {
    if z > t {
        z - t
    } else if z < -t {
        z + t
    } else {
        0.0
    }
}

struct Solver<'a> {
    x: &'a Matrix,
    /// Feature-major copy of `x` for column access.
    xt: Matrix,
    y: Vec<f64>,
    eta: Vec<f64>,
    b0: f64,
    beta: Vec<f64>,
}

impl Solver<'_> {
    fn loss(&self) -> f64 {
        self.eta.iter().zip(&self.y).map(|(&e, &y)| softplus(e) - y * e).sum()
    }

    fn objective(&self, lambda: f64) -> f64 {
        self.loss() + lambda * self.beta.iter().map(|b| fabs(*b)).sum::<f64>()
    }

    fn set_eta(&mut self) {
        for i in 0..self.eta.len() {
            self.eta[i] = self.b0 + crate::linalg::dot(self.x.row(i), &self.beta);
        }
    }

    fn kkt(&self, lambda: f64) -> f64 {
        let r: Vec<f64> = self.eta.iter().zip(&self.y).map(|(&e, &y)| sigmoid(e) - y).collect();
        let mut worst = fabs(r.iter().sum::<f64>());
        for (j, bj) in self.beta.iter().enumerate() {
            let g = crate::linalg::dot(self.xt.row(j), &r);
            let v = if *bj == 0.0 { (fabs(g) - lambda).max(0.0) } else { fabs(g + lambda * bj.signum()) };
            worst = worst.max(v);
        }
        worst
    }

    /// Coordinate descent on the weighted least-squares model
    /// `½ Σ w (r − δ₀ − x·δ)² + λ‖β + δ‖₁`; `r` is updated in place.
    fn inner(&mut self, w: &[f64], r: &mut [f64], hess: &[f64], lambda: f64, budget: &mut usize) {
        let p = self.beta.len();
        let sw: f64 = w.iter().sum();
        let step = |s: &mut Self, r: &mut [f64], j: Option<usize>| -> f64 {
            match j {
                None => {
                    let d = w.iter().zip(r.iter()).map(|(a, b)| a * b).sum::<f64>() / sw;
                    if d != 0.0 {
                        for ri in r.iter_mut() {
                            *ri -= d;
                        }
                        s.b0 += d;
                    }
                    d * d * sw
                }
                Some(j) => {
                    let h = hess[j];
                    if h <= 0.0 {
                        return 0.0;
                    }
                    let col = s.xt.row(j);
                    let old = s.beta[j];
                    let g: f64 = col.iter().zip(w).zip(r.iter()).map(|((x, a), b)| x * a * b).sum::<f64>() + h * old;
                    let new = soft(g, lambda) / h;
                    let d = new - old;
                    if d != 0.0 {
                        for (ri, x) in r.iter_mut().zip(col) {
                            *ri -= d * x;
                        }
                        s.beta[j] = new;
                    }
                    d * d * h
                }
            }
        };
        loop {
            let mut biggest = step(self, r, None);
            for j in 0..p {
                biggest = biggest.max(step(self, r, Some(j)));
            }
            *budget = budget.saturating_sub(1);
            if biggest <= 1e-24 || *budget == 0 {
                return;
            }
            loop {
                let mut big = step(self, r, None);
                for j in 0..p {
                    if self.beta[j] != 0.0 {
                        big = big.max(step(self, r, Some(j)));
                    }
                }
                *budget = budget.saturating_sub(1);
                if big <= 1e-24 || *budget == 0 {
                    break;
                }
            }
        }
    }

    /// Proximal Newton: quadratic model of the loss, inner coordinate
    /// descent, then a backtracking step on the exact objective.
    fn solve(&mut self, lambda: f64, tol: f64, max_sweeps: usize) {
        let n = self.eta.len();
        let p = self.beta.len();
        let mut budget = max_sweeps;
        for _ in 0..200 {
            if self.kkt(lambda) <= tol || budget == 0 {
                return;
            }
            let w: Vec<f64> = self.eta.iter().map(|&e| (sigmoid(e) * (1.0 - sigmoid(e))).max(1e-10)).collect();
            let mut r: Vec<f64> = (0..n).map(|i| (self.y[i] - sigmoid(self.eta[i])) / w[i]).collect();
            let hess: Vec<f64> =
                (0..p).map(|j| self.xt.row(j).iter().zip(&w).map(|(x, a)| a * x * x).sum()).collect();
            let (b0_old, beta_old) = (self.b0, self.beta.clone());
            let f_old = self.objective(lambda);
            self.inner(&w, &mut r, &hess, lambda, &mut budget);
            let (b0_new, beta_new) = (self.b0, self.beta.clone());
            let mut t = 1.0;
            loop {
                self.b0 = b0_old + t * (b0_new - b0_old);
                for j in 0..p {
                    self.beta[j] = beta_old[j] + t * (beta_new[j] - beta_old[j]);
                }
                self.set_eta();
                if self.objective(lambda) <= f_old + 1e-12 * (1.0 + fabs(f_old)) || t < 1e-12 {
                    break;
                }
                t *= 0.5;
            }
            let moved = fabs(self.b0 - b0_old)
                + self.beta.iter().zip(&beta_old).map(|(a, b)| fabs(a - b)).sum::<f64>();
            if moved == 0.0 {
                return;
            }
        }
    }
}

/// ℓ1-penalized logistic regression on standardized features along a
/// log-spaced λ path, keeping the λ with the smallest corrected AIC.
pub fn lasso_fit(x: &Matrix, y: &[bool], cfg: &LassoConfig) -> Result<LassoModel, ClassifyError> {
    check_training(x, y)?;
    let (n, p) = x.shape();
    let st = Standardization::fit(x);
    let xs = st.apply(x);
    let yf: Vec<f64> = y.iter().map(|&v| if v { 1.0 } else { 0.0 }).collect();
    let ybar = yf.iter().sum::<f64>() / n as f64;
    let lambda_max = (0..p)
        .map(|j| fabs((0..n).map(|i| xs[(i, j)] * (yf[i] - ybar)).sum::<f64>()))
        .fold(0.0, f64::max);
    let b0 = log(ybar / (1.0 - ybar));
    let mut solver =
        Solver { x: &xs, xt: xs.transpose(), y: yf, eta: vec![b0; n], b0, beta: vec![0.0; p] };
    let steps = cfg.path_size.max(1);
    let mut path = Vec::with_capacity(steps);
    let mut best: Option<(f64, f64, Vec<f64>, f64)> = None;
    let null_dev = 2.0 * solver.loss();
    for k in 0..steps {
        let frac = if steps == 1 { 0.0 } else { k as f64 / (steps - 1) as f64 };
        let lambda = lambda_max * pow(10.0, -cfg.decades * frac);
        solver.solve(lambda, cfg.tol, cfg.max_sweeps);
        let nonzero = solver.beta.iter().filter(|b| **b != 0.0).count();
        let dev = 2.0 * solver.loss();
        let kpar = (nonzero + 1) as f64;
        let aicc = if (n as f64) - kpar - 1.0 > 0.0 {
            dev + 2.0 * kpar * n as f64 / (n as f64 - kpar - 1.0)
        } else {
            f64::INFINITY
        };
        path.push(PathPoint { lambda, nonzero, aicc });
        if best.as_ref().is_none_or(|b| aicc < b.0) {
            best = Some((aicc, solver.b0, solver.beta.clone(), lambda));
        }
        if dev < cfg.min_dev_ratio * null_dev {
            break;
        }
    }
    let (_, intercept, beta, lambda) = best.expect("path is nonempty");
    Ok(LassoModel { intercept, beta, lambda, path, standardization: st })
}

pub fn lasso_predict(model: &LassoModel, x: &Matrix) -> Result<Vec<Prediction>, ClassifyError> {
    let p = model.beta.len();
    if x.cols() != p {
        return Err(ClassifyError::DimensionMismatch { expected: p, got: x.cols() });
    }
    check_finite(x)?;
    let st = &model.standardization;
    Ok((0..x.rows())
        .map(|i| {
            let mut eta = model.intercept;
            for j in 0..p {
                if model.beta[j] != 0.0 {
                    eta += model.beta[j] * (x[(i, j)] - st.mean[j]) / st.scale[j];
                }
            }
            Prediction::point(sigmoid(eta))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn lambda_max_gives_null_model() {
        let x = Matrix::from_rows(&[[1.0, 0.0], [2.0, 1.0], [3.0, 0.0], [4.0, 1.0], [5.0, 0.5]]);
        let y = [false, false, true, false, true];
        let m = lasso_fit(&x, &y, &LassoConfig { path_size: 1, ..Default::default() }).unwrap();
        assert!(m.beta.iter().all(|&b| b == 0.0));
        assert!((m.intercept - (0.4f64 / 0.6).ln()).abs() < 1e-9);
        let preds = lasso_predict(&m, &x).unwrap();
        assert!(preds.iter().all(|p| (p.prob_madison - 0.4).abs() < 1e-9));
    }

    #[test]
    fn separable_sign_and_kkt() {
        let x = Matrix::from_rows(&[[-3.0], [-2.0], [-1.0], [1.0], [2.0], [3.0]]);
        let y = [false, false, false, true, true, true];
        let m = lasso_fit(&x, &y, &LassoConfig::default()).unwrap();
        assert!(m.beta[0] > 0.0);
        let xs = m.standardization.apply(&x);
        assert!(kkt_violation(&xs, &y, m.intercept, &m.beta, m.lambda) < 1e-6);
        // path nonzero counts never shrink here
        assert!(m.path.windows(2).all(|w| w[1].nonzero >= w[0].nonzero));
        let far = Matrix::from_rows(&[[100.0], [-100.0]]);
        let p = lasso_predict(&m, &far).unwrap();
        assert!(p[0].prob_madison > 1.0 - 1e-6 && p[1].prob_madison < 1e-6);
    }

    #[test]
    fn errors() {
        let x = Matrix::from_rows(&[[1.0], [2.0]]);
        assert_eq!(lasso_fit(&x, &[true, true], &LassoConfig::default()), Err(ClassifyError::SingleClass));
        let bad = Matrix::from_rows(&[[1.0], [f64::NAN]]);
        assert_eq!(
            lasso_fit(&bad, &[true, false], &LassoConfig::default()),
            Err(ClassifyError::NonFiniteFeature { row: 1, col: 0 })
        );
        let m = lasso_fit(&x, &[true, false], &LassoConfig::default()).unwrap();
        assert_eq!(
            lasso_predict(&m, &Matrix::zeros(1, 2)),
            Err(ClassifyError::DimensionMismatch { expected: 1, got: 2 })
        );
    }

    #[test]
    fn symmetric_point_at_mean() {
        let x = Matrix::from_rows(&[[0.0], [1.0], [2.0], [3.0]]);
        let y = [false, true, false, true];
        let m = lasso_fit(&x, &y, &LassoConfig::default()).unwrap();
        let p = lasso_predict(&m, &Matrix::from_rows(&[[1.5]])).unwrap();
        assert!((p[0].prob_madison - sigmoid(m.intercept)).abs() < 1e-15);
    }

    #[test]
    fn random_kkt() {
        let mut r = rng::seeded(21);
        let x = Matrix::from_fn(30, 6, |_, _| rng::std_normal(&mut r));
        let y: Vec<bool> = (0..30).map(|i| x[(i, 0)] - 0.5 * x[(i, 2)] + rng::std_normal(&mut r) > 0.0).collect();
        let m = lasso_fit(&x, &y, &LassoConfig::default()).unwrap();
        let xs = m.standardization.apply(&x);
        assert!(kkt_violation(&xs, &y, m.intercept, &m.beta, m.lambda) < 1e-6);
        assert!(m.beta[0] > 0.0);
    }
}
