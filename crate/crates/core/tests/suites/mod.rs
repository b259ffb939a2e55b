//! Property suites shared by the core test files and the acceptance harness.
//! Every check panics on failure.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand_distr::{Distribution, Gamma, Poisson};
use stylus_core::bow::{InputType, TermDocMatrix};
use stylus_core::classify::{
    bart_fit_predict, kkt_violation, lasso_fit, logistic_gradient, logistic_loss, BartConfig, BartSampler,
    LassoConfig,
};
use stylus_core::embed::{lda_fit, lsa_matrix, nmf_matrix, LdaConfig, LdaSampler, NmfConfig};
use stylus_core::linalg::Matrix;
use stylus_core::mw::nb_pmf;
use stylus_core::rng;
use stylus_core::screen::{bh_select, bonferroni_select, hc_statistic, HcConfig};

/// Fuzz config that writes no regression file.
fn cases(n: u32) -> Config {
    Config { failure_persistence: None, ..Config::with_cases(n) }
}

/// Exhaustive oracle: every admissible rank scored directly from a freshly
/// sorted copy, strict improvement only so the first maximizer wins.
fn brute_hc(p: &[f64], gamma0: f64, floor: bool) -> Option<(usize, f64)> {
    let n = p.len();
    let mut s = p.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let nf = n as f64;
    let mut best: Option<(usize, f64)> = None;
    for i in 1..n {
        if (i as f64) > (gamma0 * nf).floor() {
            break;
        }
        if floor && s[i - 1] < 1.0 / nf {
            continue;
        }
        let frac = i as f64 / nf;
        let v = nf.sqrt() * (frac - s[i - 1]) / (frac * (1.0 - frac)).sqrt();
        match best {
            Some((_, b)) if v <= b => {}
            _ => best = Some((i, v)),
        }
    }
    best
}

pub fn hc_matches_brute_force() {
    let mut r = rng::seeded(2024);
    for trial in 0..1000 {
        let n = 1 + rng::below(&mut r, 50);
        let p: Vec<f64> = (0..n)
            .map(|_| {
                // mix in tiny p-values and exact ties
                match rng::below(&mut r, 6) {
                    0 => rng::uniform(&mut r) * 1e-3,
                    1 => 0.5,
                    _ => rng::uniform(&mut r),
                }
            })
            .collect();
        for &(gamma0, floor) in &[(0.2, true), (0.2, false), (0.5, true), (1.0, false)] {
            let got = hc_statistic(&p, &HcConfig { gamma0, min_p_floor: floor }).unwrap();
            match brute_hc(&p, gamma0, floor) {
                None => {
                    assert_eq!(got.i_star, None, "trial {trial}");
                    assert_eq!(got.statistic, f64::NEG_INFINITY);
                }
                Some((i, v)) => {
                    assert_eq!(got.i_star, Some(i), "trial {trial} {p:?}");
                    assert!((got.statistic - v).abs() <= 1e-12 * v.abs().max(1.0), "trial {trial}");
                }
            }
        }
    }
}

fn bh_oracle(p: &[f64], fdr: f64) -> Vec<usize> {
    let n = p.len();
    let mut s = p.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut thr = None;
    for k in 1..=n {
        if s[k - 1] <= k as f64 * fdr / n as f64 {
            thr = Some(s[k - 1]);
        }
    }
    match thr {
        None => vec![],
        Some(t) => (0..n).filter(|&j| p[j] <= t).collect(),
    }
}

pub fn bh_monotone_and_contains_bonferroni() {
    let strategy = (
        prop::collection::vec(0.0f64..1.0, 1..200),
        prop::collection::vec(0.0f64..1e-3, 0..20),
        0.001f64..0.3,
        0.001f64..0.3,
    );
    TestRunner::new(cases(256))
        .run(&strategy, |(mut p, tiny, a, b)| {
            p.extend(tiny);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let s_lo = bh_select(&p, lo);
            let s_hi = bh_select(&p, hi);
            prop_assert!(s_lo.iter().all(|i| s_hi.contains(i)));
            prop_assert_eq!(&s_lo, &bh_oracle(&p, lo));
            let bonf = bonferroni_select(&p, lo);
            prop_assert!(bonf.iter().all(|i| s_lo.contains(i)));
            Ok(())
        })
        .unwrap();
}

fn tdm(rows: &[Vec<u32>]) -> TermDocMatrix {
    let nw = rows[0].len();
    let vocab = (0..nw).map(|j| format!("w{j:03}")).collect();
    TermDocMatrix::from_rows(rows, (1..=rows.len() as u32).collect(), vocab, InputType::Type2)
}

pub fn lda_counts_conserved_every_sweep() {
    let strategy = (
        prop::collection::vec(prop::collection::vec(0u32..6, 7), 2..8),
        1usize..5,
        any::<u64>(),
    );
    TestRunner::new(cases(40))
        .run(&strategy, |(rows, k, seed)| {
            prop_assume!(rows.iter().flatten().any(|&c| c > 0));
            let m = tdm(&rows);
            let mut s = LdaSampler::new(&m, k, 0.5, 0.1, seed).unwrap();
            prop_assert!(s.counts_consistent());
            for _ in 0..5 {
                s.sweep();
                prop_assert!(s.counts_consistent());
            }
            let (phi, eta) = s.estimates();
            for d in 0..phi.rows() {
                prop_assert!((phi.row(d).iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
            for t in 0..eta.rows() {
                prop_assert!((eta.row(t).iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
            Ok(())
        })
        .unwrap();
}

pub fn lda_recovers_two_blocks() {
    // documents 0..10 use words 0..10 only, documents 10..20 use words 10..20
    let mut r = rng::seeded(5);
    let rows: Vec<Vec<u32>> = (0..20)
        .map(|d| {
            (0..20)
                .map(|w| if (d < 10) == (w < 10) { 2 + rng::below(&mut r, 6) as u32 } else { 0 })
                .collect()
        })
        .collect();
    let m = tdm(&rows);
    let model = lda_fit(&m, &LdaConfig { alpha: Some(0.1), iters: 300, ..LdaConfig::new(2, 9) }).unwrap();
    let dominant: Vec<usize> = (0..20)
        .map(|d| if model.doc_topic[(d, 0)] >= model.doc_topic[(d, 1)] { 0 } else { 1 })
        .collect();
    let agree = (0..20).filter(|&d| dominant[d] == usize::from(d >= 10)).count();
    let purity = agree.max(20 - agree) as f64 / 20.0;
    assert!(purity >= 0.9, "purity {purity}");
}

pub fn nmf_objective_never_increases() {
    let mut r = rng::seeded(77);
    for inst in 0..100 {
        let n = 2 + rng::below(&mut r, 12);
        let nw = 2 + rng::below(&mut r, 15);
        let rank = 1 + rng::below(&mut r, n.min(nw));
        let x = Matrix::from_fn(n, nw, |_, _| {
            if rng::below(&mut r, 4) == 0 {
                0.0
            } else {
                rng::uniform(&mut r) * 10.0
            }
        });
        let (_, _, trace) = nmf_matrix(&x, &NmfConfig { iters: 200, ..NmfConfig::new(rank, inst) }).unwrap();
        for w in trace.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-12, "instance {inst}: {} -> {}", w[0], w[1]);
        }
    }
}

/// One-sided Jacobi SVD: orthogonalizes the columns of a copy of `x` by plane
/// rotations; the column norms are then the singular values.
fn jacobi_singular_values(x: &Matrix) -> Vec<f64> {
    let (n, m) = x.shape();
    let mut a: Vec<Vec<f64>> = (0..m).map(|j| (0..n).map(|i| x[(i, j)]).collect()).collect();
    for _ in 0..100 {
        let mut off = 0.0f64;
        for p in 0..m {
            for q in p + 1..m {
                let alpha: f64 = a[p].iter().map(|v| v * v).sum();
                let beta: f64 = a[q].iter().map(|v| v * v).sum();
                let gamma: f64 = a[p].iter().zip(&a[q]).map(|(u, v)| u * v).sum();
                if gamma.abs() <= 1e-300 {
                    continue;
                }
                off = off.max(gamma.abs() / (alpha * beta).sqrt());
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..n {
                    let (u, v) = (a[p][i], a[q][i]);
                    a[p][i] = c * u - s * v;
                    a[q][i] = s * u + c * v;
                }
            }
        }
        if off < 1e-15 {
            break;
        }
    }
    let mut sv: Vec<f64> = a.iter().map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

pub fn lsa_truncation_error_matches_dense_oracle() {
    let mut r = rng::seeded(99);
    for _ in 0..200 {
        let n = 1 + rng::below(&mut r, 10);
        let m = 1 + rng::below(&mut r, 10);
        let x = Matrix::from_fn(n, m, |_, _| rng::std_normal(&mut r) * 3.0);
        let sv = jacobi_singular_values(&x);
        let p = 1 + rng::below(&mut r, n.min(m));
        let svd = lsa_matrix(&x, p).unwrap();
        let err = x.sub(&svd.reconstruct()).frobenius_sq();
        let want: f64 = sv[p..].iter().map(|s| s * s).sum();
        let scale = x.frobenius_sq();
        assert!((err - want).abs() <= 1e-6 * scale.max(1e-300), "{n}x{m} p={p}: {err} vs {want}");
        for j in 0..p {
            assert!((svd.sigma[j] - sv[j]).abs() <= 1e-6 * sv[0]);
        }
    }
}

pub fn logistic_instance(seed: u64) -> (Matrix, Vec<bool>) {
    let mut r = rng::seeded(seed);
    let n = 10 + rng::below(&mut r, 50);
    let p = 1 + rng::below(&mut r, 12);
    let x = Matrix::from_fn(n, p, |_, _| rng::std_normal(&mut r) * (0.5 + rng::uniform(&mut r)));
    let w: Vec<f64> = (0..p).map(|_| if rng::below(&mut r, 3) == 0 { rng::std_normal(&mut r) * 2.0 } else { 0.0 }).collect();
    let mut y: Vec<bool> = (0..n)
        .map(|i| {
            let eta: f64 = x.row(i).iter().zip(&w).map(|(a, b)| a * b).sum();
            rng::uniform(&mut r) < 1.0 / (1.0 + (-eta).exp())
        })
        .collect();
    // both classes present
    y[0] = true;
    y[1] = false;
    (x, y)
}

pub fn lasso_kkt_on_random_instances() {
    for seed in 0..100 {
        let (x, y) = logistic_instance(seed);
        let m = lasso_fit(&x, &y, &LassoConfig::default()).unwrap();
        let xs = m.standardization.apply(&x);
        let v = kkt_violation(&xs, &y, m.intercept, &m.beta, m.lambda);
        assert!(v < 1e-6, "seed {seed}: violation {v}");
    }
}

pub fn logistic_gradient_matches_finite_differences() {
    let mut r = rng::seeded(31);
    for seed in 0..50 {
        let (x, y) = logistic_instance(1000 + seed);
        let b0 = rng::std_normal(&mut r);
        let beta: Vec<f64> = (0..x.cols()).map(|_| rng::std_normal(&mut r) * 0.5).collect();
        let (g0, g) = logistic_gradient(&x, &y, b0, &beta);
        let h = 1e-6;
        let fd0 = (logistic_loss(&x, &y, b0 + h, &beta) - logistic_loss(&x, &y, b0 - h, &beta)) / (2.0 * h);
        assert!((fd0 - g0).abs() < 1e-5 * (1.0 + g0.abs()));
        for j in 0..beta.len() {
            let mut up = beta.clone();
            let mut dn = beta.clone();
            up[j] += h;
            dn[j] -= h;
            let fd = (logistic_loss(&x, &y, b0, &up) - logistic_loss(&x, &y, b0, &dn)) / (2.0 * h);
            assert!((fd - g[j]).abs() < 1e-5 * (1.0 + g[j].abs()), "seed {seed} coord {j}: {fd} vs {}", g[j]);
        }
    }
}

pub fn small_bart(seed: u64) -> BartConfig {
    BartConfig { m: 30, burn_in: 150, draws: 150, seed, ..Default::default() }
}

pub fn bart_chains_are_seed_deterministic() {
    let mut r = rng::seeded(8);
    let x = Matrix::from_fn(40, 4, |_, _| rng::uniform(&mut r));
    let y: Vec<bool> = (0..40).map(|i| x[(i, 0)] + 0.2 * rng::std_normal(&mut r) > 0.5).collect();
    let mut a = BartSampler::new(&x, &y, &small_bart(11)).unwrap();
    let mut b = BartSampler::new(&x, &y, &small_bart(11)).unwrap();
    let mut c = BartSampler::new(&x, &y, &small_bart(12)).unwrap();
    let mut diverged = false;
    for _ in 0..60 {
        a.step();
        b.step();
        c.step();
        let fa: Vec<u64> = a.fit().iter().map(|v| v.to_bits()).collect();
        let fb: Vec<u64> = b.fit().iter().map(|v| v.to_bits()).collect();
        let fc: Vec<u64> = c.fit().iter().map(|v| v.to_bits()).collect();
        assert_eq!(fa, fb);
        assert_eq!(a.snapshot(), b.snapshot());
        diverged |= fa != fc;
        assert!(a.trees_valid());
    }
    assert!(diverged);
    let xt = Matrix::from_fn(5, 4, |i, j| (i + j) as f64 / 8.0);
    let p1 = bart_fit_predict(&x, &y, &xt, &small_bart(3)).unwrap();
    let p2 = bart_fit_predict(&x, &y, &xt, &small_bart(3)).unwrap();
    assert_eq!(p1, p2);
}

pub fn bart_recovers_base_rate_on_noise() {
    let mut r = rng::seeded(40);
    let n = 200;
    let x = Matrix::from_fn(n, 5, |_, _| rng::std_normal(&mut r));
    let y: Vec<bool> = (0..n).map(|_| rng::uniform(&mut r) < 0.3).collect();
    let rate = y.iter().filter(|&&v| v).count() as f64 / n as f64;
    let xt = Matrix::from_fn(50, 5, |_, _| rng::std_normal(&mut r));
    let preds = bart_fit_predict(&x, &y, &xt, &small_bart(5)).unwrap();
    let mean = preds.iter().map(|p| p.prob_madison).sum::<f64>() / preds.len() as f64;
    assert!((mean - rate).abs() <= 0.1, "mean {mean} vs rate {rate}");
    for p in &preds {
        let (lo, hi) = (p.lo95.unwrap(), p.hi95.unwrap());
        assert!(lo <= hi && p.draws.len() == 150);
    }
}

fn poisson_oracle(x: u64, mu: f64) -> f64 {
    // recursion p(k) = p(k−1)·μ/k
    let mut p = (-mu).exp();
    for k in 1..=x {
        p *= mu / k as f64;
    }
    p
}

pub fn nb_pmf_sums_to_one() {
    for &(mu, delta) in &[(0.3, 0.0), (2.0, 0.5), (5.0, 3.0), (12.0, 0.05), (0.01, 10.0), (40.0, 1e-6)] {
        let mut s = 0.0;
        let mut x = 0u64;
        loop {
            let p = nb_pmf(x, mu, delta).unwrap();
            s += p;
            if x as f64 > mu * (1.0 + delta) + 50.0 && p < 1e-18 {
                break;
            }
            x += 1;
        }
        assert!((s - 1.0).abs() < 1e-9, "mu {mu} delta {delta}: {s}");
    }
}

pub fn nb_pmf_poisson_limit() {
    for &mu in &[0.5, 2.0, 7.5, 20.0] {
        for x in 0..=50u64 {
            let got = nb_pmf(x, mu, 1e-10).unwrap();
            assert!((got - poisson_oracle(x, mu)).abs() < 1e-8);
        }
    }
    // just above the switch the general formula must agree closely too
    for x in 0..=30u64 {
        assert!((nb_pmf(x, 3.0, 2e-8).unwrap() - poisson_oracle(x, 3.0)).abs() < 1e-7);
    }
}

pub fn nb_moments_monte_carlo() {
    // Gamma–Poisson mixture: rate ~ Gamma(κ, scale δ), count ~ Poisson(rate)
    let (mu, delta) = (3.0, 0.8);
    let kappa = mu / delta;
    let gamma = Gamma::new(kappa, delta).unwrap();
    let mut r = rng::seeded(123);
    let n = 1_000_000;
    let mut xs = Vec::with_capacity(n);
    for _ in 0..n {
        let lam: f64 = gamma.sample(&mut r);
        let x: f64 = if lam > 0.0 { Poisson::new(lam).unwrap().sample(&mut r) } else { 0.0 };
        xs.push(x);
    }
    let m = xs.iter().sum::<f64>() / n as f64;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64;
    assert!((m - mu).abs() < 0.01 * mu, "mean {m}");
    assert!((v - mu * (1.0 + delta)).abs() < 0.01 * mu * (1.0 + delta), "var {v}");
    // the pmf itself must give the same moments
    let (mut pm, mut pv) = (0.0, 0.0);
    for x in 0..400u64 {
        let p = nb_pmf(x, mu, delta).unwrap();
        pm += x as f64 * p;
        pv += (x as f64) * (x as f64) * p;
    }
    pv -= pm * pm;
    assert!((pm - mu).abs() < 1e-9 && (pv - mu * (1.0 + delta)).abs() < 1e-8);
}

/// Every suite with a short name, in a fixed order.
pub const ALL: [(&str, fn()); 13] = [
    ("hc brute force", hc_matches_brute_force),
    ("bh monotone, bonferroni subset", bh_monotone_and_contains_bonferroni),
    ("lda count conservation", lda_counts_conserved_every_sweep),
    ("lda two-block purity", lda_recovers_two_blocks),
    ("nmf monotone objective", nmf_objective_never_increases),
    ("lsa vs dense svd", lsa_truncation_error_matches_dense_oracle),
    ("lasso kkt", lasso_kkt_on_random_instances),
    ("logistic gradient", logistic_gradient_matches_finite_differences),
    ("bart determinism", bart_chains_are_seed_deterministic),
    ("bart base rate", bart_recovers_base_rate_on_noise),
    ("nb pmf normalization", nb_pmf_sums_to_one),
    ("nb poisson limit", nb_pmf_poisson_limit),
    ("nb monte carlo moments", nb_moments_monte_carlo),
];
