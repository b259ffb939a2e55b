use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{EmbedError, FactorMethod, FactorModel};
use crate::bow::TermDocMatrix;
use crate::linalg::Matrix;
use crate::math::sqrt;
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NmfConfig {
    pub rank: usize,
    pub iters: usize,
    pub seed: u64,
}

impl NmfConfig {
    pub fn new(rank: usize, seed: u64) -> Self {
        NmfConfig { rank, iters: 1000, seed }
    }
}

/// `a ← a ⊙ num / den` elementwise; a zero denominator leaves the entry.
fn mult_update(a: &mut Matrix, num: &Matrix, den: &Matrix) {
    for ((v, &n), &d) in a.as_mut_slice().iter_mut().zip(num.as_slice()).zip(den.as_slice()) {
        if d > 0.0 {
            *v *= n / d;
        }
    }
}

/// Lee–Seung multiplicative updates for `min ‖X − SH‖²_F` over `S, H ≥ 0`.
///
/// Both factors start uniform on `[0, c)` with `c = sqrt(mean(X) / p)`.
/// Returns `(S, H, objective after each iteration)`.
pub fn nmf_matrix(x: &Matrix, cfg: &NmfConfig) -> Result<(Matrix, Matrix, Vec<f64>), EmbedError> {
    let (n, nw) = x.shape();
    let p = cfg.rank;
    if n == 0 || nw == 0 {
        return Err(EmbedError::EmptyMatrix);
    }
    if p == 0 {
        return Err(EmbedError::RankTooLarge { p, max: n.min(nw) });
    }
    if let Some(i) = x.as_slice().iter().position(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(EmbedError::NonFiniteValue(i / nw + 1));
    }
    let mean = x.as_slice().iter().sum::<f64>() / (n * nw) as f64;
    let c = sqrt(mean / p as f64);
    let mut r = rng::seeded(cfg.seed);
    let mut s = Matrix::from_fn(n, p, |_, _| rng::uniform(&mut r) * c);
    let mut h = Matrix::from_fn(p, nw, |_, _| rng::uniform(&mut r) * c);
    let mut trace = Vec::with_capacity(cfg.iters);
    for _ in 0..cfg.iters {
        let num = s.t_matmul(x);
        let den = s.t_matmul(&s).matmul(&h);
        mult_update(&mut h, &num, &den);
        let num = x.matmul_t(&h);
        let den = s.matmul(&h.matmul_t(&h));
        mult_update(&mut s, &num, &den);
        trace.push(x.sub(&s.matmul(&h)).frobenius_sq());
    }
    Ok((s, h, trace))
}

pub fn nmf_fit(tdm: &TermDocMatrix, cfg: &NmfConfig) -> Result<FactorModel, EmbedError> {
    let x = tdm.to_matrix();
    let (s, h, trace) = nmf_matrix(&x, cfg)?;
    let objective = trace.last().copied().unwrap_or_else(|| x.sub(&s.matmul(&h)).frobenius_sq());
    Ok(FactorModel {
        method: FactorMethod::Nmf,
        s,
        h,
        rank: cfg.rank,
        objective,
        trace,
        singular_values: Vec::new(),
        doc_ids: tdm.doc_ids.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix() {
        let x = Matrix::zeros(3, 4);
        let (s, h, tr) = nmf_matrix(&x, &NmfConfig { rank: 2, iters: 5, seed: 1 }).unwrap();
        assert!(tr.iter().all(|&o| o == 0.0));
        assert_eq!(s.matmul(&h).frobenius(), 0.0);
    }

    #[test]
    fn exact_product_is_recovered() {
        let mut r = rng::seeded(8);
        let s0 = Matrix::from_fn(6, 2, |_, _| rng::uniform(&mut r) + 0.1);
        let h0 = Matrix::from_fn(2, 5, |_, _| rng::uniform(&mut r) + 0.1);
        let x = s0.matmul(&h0);
        let (_, _, tr) = nmf_matrix(&x, &NmfConfig { rank: 2, iters: 5000, seed: 2 }).unwrap();
        assert!(*tr.last().unwrap() < 1e-6 * x.frobenius_sq());
        assert!(tr.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-10) + 1e-300));
    }

    #[test]
    fn rejects_negative_input() {
        let x = Matrix::from_rows(&[[1.0, -1.0]]);
        assert!(nmf_matrix(&x, &NmfConfig::new(1, 0)).is_err());
    }
}
