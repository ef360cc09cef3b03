//! Moment parameters of the edge distribution: p, p' (within-class first and
//! second kernel moments), the cross-class ratios q, q', and the
//! common-neighbor quantities r, s0, s1.
//!
//! For the squared-exponential kernel with Gaussian latents all seven are in
//! closed form (derived via the Gaussian moment generating function,
//! cross-checked here by numerical quadrature and the Monte-Carlo estimator).
//! The Monte-Carlo path works for any kernel and doubles as an independent
//! oracle for the closed forms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::rng::{self, tag};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianMoments {
    pub p: f64,
    pub p_prime: f64,
    pub q: f64,
    pub q_prime: f64,
    pub r: f64,
    pub s0: f64,
    pub s1: f64,
}

/// Closed forms for the squared-exponential kernel:
///
/// ```text
/// p  = (4s^2+1)^(-d/2)              p' = (8s^2+1)^(-d/2)
/// q  = exp(-4|mu|^2 / (4s^2+1))     q' = exp(-8|mu|^2 / (8s^2+1))
/// r  = ((2s^2+1)(6s^2+1))^(-d/2)
/// s0 = exp(-8|mu|^2 / (6s^2+1))
/// s1 = exp(-4(4s^2+1)|mu|^2 / (12s^4+8s^2+1))
/// ```
///
/// Powers are evaluated as exp(-d/2 * ln_1p(..)) so tiny sigma keeps full
/// precision and large sigma underflows gracefully instead of overflowing an
/// intermediate.
pub fn closed_form(d: usize, mu_norm: f64, sigma: f64) -> Result<GaussianMoments> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "sigma must be positive and finite, got {sigma}"
        )));
    }
    if !(mu_norm >= 0.0) || !mu_norm.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "mu_norm must be nonnegative and finite, got {mu_norm}"
        )));
    }
    let s2 = sigma * sigma;
    let mu2 = mu_norm * mu_norm;
    let half_d = 0.5 * d as f64;
    // 12s^4 + 8s^2 + 1 factors as (2s^2+1)(6s^2+1).
    let denom_s1 = (2.0 * s2 + 1.0) * (6.0 * s2 + 1.0);
    Ok(GaussianMoments {
        p: (-half_d * (4.0 * s2).ln_1p()).exp(),
        p_prime: (-half_d * (8.0 * s2).ln_1p()).exp(),
        q: (-4.0 * mu2 / (4.0 * s2 + 1.0)).exp(),
        q_prime: (-8.0 * mu2 / (8.0 * s2 + 1.0)).exp(),
        r: (-half_d * ((2.0 * s2).ln_1p() + (6.0 * s2).ln_1p())).exp(),
        s0: (-8.0 * mu2 / (6.0 * s2 + 1.0)).exp(),
        s1: (-4.0 * (4.0 * s2 + 1.0) * mu2 / denom_s1).exp(),
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct MomentEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// Monte-Carlo estimates with standard errors. Ratio quantities (q, q', s0,
/// s1) are ratios of mean estimates; their standard errors come from the
/// delta method with independent numerator and denominator samples.
#[derive(Clone, Debug, Serialize)]
pub struct MonteCarloMoments {
    pub p: MomentEstimate,
    pub p_prime: MomentEstimate,
    pub q: MomentEstimate,
    pub q_prime: MomentEstimate,
    pub r: MomentEstimate,
    pub s0: MomentEstimate,
    pub s1: MomentEstimate,
    pub num_samples: usize,
}

impl MonteCarloMoments {
    pub fn values(&self) -> GaussianMoments {
        GaussianMoments {
            p: self.p.value,
            p_prime: self.p_prime.value,
            q: self.q.value,
            q_prime: self.q_prime.value,
            r: self.r.value,
            s0: self.s0.value,
            s1: self.s1.value,
        }
    }
}

/// Streaming mean/variance (Welford), mergeable across shards (Chan et al.).
#[derive(Clone, Copy, Debug, Default)]
struct MeanVar {
    n: u64,
    mean: f64,
    m2: f64,
}

impl MeanVar {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: MeanVar) -> MeanVar {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        MeanVar {
            n,
            mean: self.mean + delta * other.n as f64 / n as f64,
            m2: self.m2 + other.m2 + delta * delta * self.n as f64 * other.n as f64 / n as f64,
        }
    }

    /// Variance of the sample mean.
    fn var_of_mean(&self) -> f64 {
        if self.n < 2 {
            return f64::INFINITY;
        }
        self.m2 / (self.n - 1) as f64 / self.n as f64
    }

    fn estimate(&self) -> MomentEstimate {
        MomentEstimate {
            value: self.mean,
            std_error: self.var_of_mean().sqrt(),
        }
    }
}

/// Ratio a/b of two independent mean estimates, delta-method standard error:
/// Var(a/b) ~ Var(a)/b^2 + a^2 Var(b)/b^4.
fn ratio_estimate(num: &MeanVar, den: &MeanVar) -> MomentEstimate {
    let b = den.mean;
    let value = num.mean / b;
    let var = num.var_of_mean() / (b * b) + num.mean * num.mean * den.var_of_mean() / (b * b * b * b);
    MomentEstimate {
        value,
        std_error: var.sqrt(),
    }
}

const NUM_SHARDS: u64 = 64;

// Per-case stream tags under tag::MOMENTS.
const CASE_PAIR_SAME: u64 = 1;
const CASE_PAIR_CROSS: u64 = 2;
const CASE_TRIPLE_SAME: u64 = 3;
const CASE_TRIPLE_S0: u64 = 4;
const CASE_TRIPLE_S1: u64 = 5;

/// Estimate all seven moments for the given model parameters. Each of the
/// five label patterns (same pair, cross pair, and the three triples) gets
/// `num_samples` fresh independent draws; nothing is reused across cases, so
/// all standard errors are independent.
///
/// Sampling shards over a fixed number of seed-derived streams and merges in
/// shard order, so results are identical for any thread count.
pub fn monte_carlo(
    params: &ModelParams,
    num_samples: usize,
    seed: u64,
) -> Result<MonteCarloMoments> {
    if num_samples < 1000 {
        return Err(Error::InvalidParameter(format!(
            "num_samples must be at least 1000, got {num_samples}"
        )));
    }
    // (mean of f, mean of f^2) for the two pair cases.
    let same = pair_case(params, num_samples, seed, CASE_PAIR_SAME, 1.0, 1.0);
    let cross = pair_case(params, num_samples, seed, CASE_PAIR_CROSS, 1.0, -1.0);
    // mean of f(x_i,x_k) f(x_j,x_k) for the three triple cases.
    let rrr = triple_case(params, num_samples, seed, CASE_TRIPLE_SAME, [1.0, 1.0, 1.0]);
    let rs0 = triple_case(params, num_samples, seed, CASE_TRIPLE_S0, [1.0, 1.0, -1.0]);
    let rs1 = triple_case(params, num_samples, seed, CASE_TRIPLE_S1, [1.0, -1.0, 1.0]);

    Ok(MonteCarloMoments {
        p: same.0.estimate(),
        p_prime: same.1.estimate(),
        q: ratio_estimate(&cross.0, &same.0),
        q_prime: ratio_estimate(&cross.1, &same.1),
        r: rrr.estimate(),
        s0: ratio_estimate(&rs0, &rrr),
        s1: ratio_estimate(&rs1, &rrr),
        num_samples,
    })
}

fn shard_sizes(total: usize) -> Vec<usize> {
    let base = total / NUM_SHARDS as usize;
    let rem = total % NUM_SHARDS as usize;
    (0..NUM_SHARDS as usize)
        .map(|s| base + usize::from(s < rem))
        .collect()
}

fn sample_latent(
    rng: &mut rand_chacha::ChaCha12Rng,
    out: &mut [f64],
    class: f64,
    params: &ModelParams,
) {
    use rand::Rng;
    for (k, slot) in out.iter_mut().enumerate() {
        let mean = if k == 0 { class * params.mu_norm } else { 0.0 };
        let z: f64 = rng.sample(rand_distr::StandardNormal);
        *slot = mean + params.sigma * z;
    }
}

/// Mean/variance of f and f^2 over pairs with the given classes.
fn pair_case(
    params: &ModelParams,
    num_samples: usize,
    seed: u64,
    case: u64,
    class_i: f64,
    class_j: f64,
) -> (MeanVar, MeanVar) {
    let sizes = shard_sizes(num_samples);
    let shards: Vec<(MeanVar, MeanVar)> = (0..NUM_SHARDS)
        .into_par_iter()
        .map(|shard| {
            let mut rng = rng::stream(seed, &[tag::MOMENTS, case, shard]);
            let mut xi = vec![0.0; params.d];
            let mut xj = vec![0.0; params.d];
            let (mut w1, mut w2) = (MeanVar::default(), MeanVar::default());
            for _ in 0..sizes[shard as usize] {
                sample_latent(&mut rng, &mut xi, class_i, params);
                sample_latent(&mut rng, &mut xj, class_j, params);
                let f = params.kernel.eval(&xi, &xj);
                w1.push(f);
                w2.push(f * f);
            }
            (w1, w2)
        })
        .collect();
    shards.into_iter().fold(
        (MeanVar::default(), MeanVar::default()),
        |(a1, a2), (b1, b2)| (a1.merge(b1), a2.merge(b2)),
    )
}

/// Mean/variance of f(x_i, x_k) f(x_j, x_k) over triples with the given
/// classes.
fn triple_case(
    params: &ModelParams,
    num_samples: usize,
    seed: u64,
    case: u64,
    classes: [f64; 3],
) -> MeanVar {
    let sizes = shard_sizes(num_samples);
    let shards: Vec<MeanVar> = (0..NUM_SHARDS)
        .into_par_iter()
        .map(|shard| {
            let mut rng = rng::stream(seed, &[tag::MOMENTS, case, shard]);
            let mut xi = vec![0.0; params.d];
            let mut xj = vec![0.0; params.d];
            let mut xk = vec![0.0; params.d];
            let mut w = MeanVar::default();
            for _ in 0..sizes[shard as usize] {
                sample_latent(&mut rng, &mut xi, classes[0], params);
                sample_latent(&mut rng, &mut xj, classes[1], params);
                sample_latent(&mut rng, &mut xk, classes[2], params);
                let g = params.kernel.eval(&xi, &xk) * params.kernel.eval(&xj, &xk);
                w.push(g);
            }
            w
        })
        .collect();
    shards
        .into_iter()
        .fold(MeanVar::default(), MeanVar::merge)
}
