use alloc::vec::Vec;

use super::{EmbedError, FactorMethod, FactorModel};
use crate::bow::TermDocMatrix;
use crate::linalg::{orthonormalize_columns, symmetric_eigen, Matrix};
use crate::math::{fabs, sqrt};
use crate::rng;

const SKETCH_SEED: u64 = 0x5EED_15A;
const OVERSAMPLE: usize = 10;
const MAX_POWER_ITERS: usize = 1000;
const TOL: f64 = 1e-14;

/// Rank-`p` truncated SVD `X ≈ U diag(σ) Vᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Svd {
    /// `n × p`, orthonormal columns.
    pub u: Matrix,
    pub sigma: Vec<f64>,
    /// `N × p`, orthonormal columns where `σ > 0`.
    pub v: Matrix,
}

impl Svd {
    pub fn reconstruct(&self) -> Matrix {
        let mut us = self.u.clone();
        for i in 0..us.rows() {
            for (c, s) in us.row_mut(i).iter_mut().zip(&self.sigma) {
                *c *= s;
            }
        }
        us.matmul_t(&self.v)
    }
}

fn leading_values(x: &Matrix, q: &Matrix, p: usize) -> (Matrix, Vec<f64>, Matrix) {
    let b = q.t_matmul(x);
    let bbt = b.matmul_t(&b);
    let (lam, w) = symmetric_eigen(&bbt);
    let sig: Vec<f64> = lam.iter().take(p).map(|&l| sqrt(l.max(0.0))).collect();
    (b, sig, w)
}

/// Randomized subspace iteration with oversampling. Power steps repeat until
/// the leading `p` singular values stop moving.
pub fn lsa_matrix(x: &Matrix, p: usize) -> Result<Svd, EmbedError> {
    let (n, nw) = x.shape();
    if n == 0 || nw == 0 {
        return Err(EmbedError::EmptyMatrix);
    }
    let max = n.min(nw);
    if p == 0 || p > max {
        return Err(EmbedError::RankTooLarge { p, max });
    }
    let l = (p + OVERSAMPLE).min(max);
    let mut r = rng::seeded(SKETCH_SEED);
    let omega = Matrix::from_fn(nw, l, |_, _| rng::std_normal(&mut r));
    let mut q = x.matmul(&omega);
    orthonormalize_columns(&mut q);
    let (mut b, mut sig, mut w) = leading_values(x, &q, p);
    if l < max {
        for _ in 0..MAX_POWER_ITERS {
            let mut zq = x.t_matmul(&q);
            orthonormalize_columns(&mut zq);
            q = x.matmul(&zq);
            orthonormalize_columns(&mut q);
            let (b2, sig2, w2) = leading_values(x, &q, p);
            let scale = sig2.first().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
            let moved = sig.iter().zip(&sig2).map(|(a, c)| fabs(a - c)).fold(0.0, f64::max);
            b = b2;
            sig = sig2;
            w = w2;
            if moved <= TOL * scale {
                break;
            }
        }
    }
    let wp = Matrix::from_fn(w.rows(), p, |i, j| w[(i, j)]);
    let mut u = q.matmul(&wp);
    let mut v = b.t_matmul(&wp);
    for (j, &s) in sig.iter().enumerate() {
        for i in 0..nw {
            v[(i, j)] = if s > 0.0 { v[(i, j)] / s } else { 0.0 };
        }
        // sign convention: the largest-magnitude entry of each left vector is positive
        let mut best = 0.0;
        for i in 0..n {
            if fabs(u[(i, j)]) > fabs(best) {
                best = u[(i, j)];
            }
        }
        if best < 0.0 {
            for i in 0..n {
                u[(i, j)] = -u[(i, j)];
            }
            for i in 0..nw {
                v[(i, j)] = -v[(i, j)];
            }
        }
    }
    Ok(Svd { u, sigma: sig, v })
}

/// Latent semantic embedding: document coordinates `S = UΣ`, word loadings
/// `H = Vᵀ`.
pub fn lsa_fit(tdm: &TermDocMatrix, p: usize) -> Result<FactorModel, EmbedError> {
    let x = tdm.to_matrix();
    let svd = lsa_matrix(&x, p)?;
    let mut s = svd.u.clone();
    for i in 0..s.rows() {
        for (c, sv) in s.row_mut(i).iter_mut().zip(&svd.sigma) {
            *c *= sv;
        }
    }
    let h = svd.v.transpose();
    let objective = x.sub(&s.matmul(&h)).frobenius_sq();
    Ok(FactorModel {
        method: FactorMethod::Lsa,
        s,
        h,
        rank: p,
        objective,
        trace: Vec::new(),
        singular_values: svd.sigma,
        doc_ids: tdm.doc_ids.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal() {
        let x = Matrix::from_rows(&[[3.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]]);
        let s = lsa_matrix(&x, 2).unwrap();
        assert!((s.sigma[0] - 3.0).abs() < 1e-12 && (s.sigma[1] - 2.0).abs() < 1e-12);
        assert!((x.sub(&s.reconstruct()).frobenius_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_exact() {
        let u = [1.0, -2.0, 0.5, 3.0];
        let v = [2.0, 1.0, -1.0];
        let x = Matrix::from_fn(4, 3, |i, j| u[i] * v[j]);
        let s = lsa_matrix(&x, 1).unwrap();
        assert!(x.sub(&s.reconstruct()).frobenius() < 1e-12 * x.frobenius());
        // largest |u| entry is the 3.0 one and must come out positive
        assert!(s.u[(3, 0)] > 0.0);
    }

    #[test]
    fn rank_too_large() {
        let x = Matrix::zeros(2, 5);
        assert_eq!(lsa_matrix(&x, 3), Err(EmbedError::RankTooLarge { p: 3, max: 2 }));
    }

    #[test]
    fn tall_sketch_converges() {
        // 40 × 30 so the sketch (p + 10 = 13) is smaller than the rank
        let mut r = rng::seeded(4);
        let x = Matrix::from_fn(40, 30, |_, _| rng::uniform(&mut r) * 5.0);
        let s = lsa_matrix(&x, 3).unwrap();
        let gram = s.u.t_matmul(&s.u);
        assert!(gram.sub(&Matrix::identity(3)).frobenius() < 1e-10);
        let xtx = x.t_matmul(&x);
        let (lam, _) = symmetric_eigen(&xtx);
        for j in 0..3 {
            assert!((s.sigma[j] - lam[j].sqrt()).abs() < 1e-8 * s.sigma[0]);
        }
    }
}
