//! Survival of supercritical branching processes.
//!
//! For offspring mean `μ > 1` and variance `σ²`, a Galton–Watson process
//! survives with probability at least `(μ² - μ) / (μ² - μ + σ²)`; when the
//! offspring law may depend on the history but always has mean at least `μ`
//! after shifting, the bound weakens to `(μ² - μ) / (μ² - μ + σ² + 1/4)`.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{precondition, Result};
use crate::rng::{rng_from_seed, splitmix64};

/// Tolerance on the total mass of an offspring law.
const MASS_TOL: f64 = 1e-12;
/// A run whose population reaches this size is counted as surviving.
pub const DEFAULT_POPULATION_CAP: u64 = 1000;

/// A finite offspring law on `{0, 1, ..., s}`.
#[derive(Clone, Debug, PartialEq)]
pub struct OffspringSpec {
    probs: Vec<f64>,
}

impl OffspringSpec {
    pub fn new(probs: Vec<f64>) -> Result<OffspringSpec> {
        if probs.is_empty() || probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(precondition("offspring probabilities must be finite and non-negative"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(precondition(format!("offspring probabilities sum to {total}, not 1")));
        }
        let mut probs = probs;
        while probs.len() > 1 && *probs.last().unwrap() == 0.0 {
            probs.pop();
        }
        Ok(OffspringSpec { probs })
    }

    /// Builds a law from non-negative weights, normalizing them.
    pub fn from_weights(weights: &[f64]) -> Result<OffspringSpec> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) || weights.iter().any(|w| *w < 0.0) {
            return Err(precondition("weights must be non-negative with positive finite total"));
        }
        let mut probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
        while probs.len() > 1 && *probs.last().unwrap() == 0.0 {
            probs.pop();
        }
        Ok(OffspringSpec { probs })
    }

    pub fn point_mass(k: usize) -> OffspringSpec {
        let mut probs = vec![0.0; k + 1];
        probs[k] = 1.0;
        OffspringSpec { probs }
    }

    /// Poisson(`mean`), truncated where the remaining tail is below `1e-12`
    /// and renormalized.
    pub fn poisson(mean: f64) -> Result<OffspringSpec> {
        if !(mean >= 0.0 && mean.is_finite()) {
            return Err(precondition(format!("Poisson mean must be non-negative, got {mean}")));
        }
        let mut probs = Vec::new();
        let mut p = (-mean).exp();
        let mut cum = 0.0;
        let mut k = 0usize;
        loop {
            probs.push(p);
            cum += p;
            k += 1;
            if 1.0 - cum < 1e-12 || k > 10_000 {
                break;
            }
            p *= mean / k as f64;
        }
        OffspringSpec::from_weights(&probs)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn max_offspring(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(k, p)| k as f64 * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        self.probs.iter().enumerate().map(|(k, p)| (k as f64 - mu).powi(2) * p).sum()
    }

    /// `P(X ≤ k)` for every `k` in the support.
    pub fn cdf(&self) -> Vec<f64> {
        self.probs
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect()
    }

    fn sampler(&self) -> WeightedIndex<f64> {
        WeightedIndex::new(&self.probs).expect("offspring law has positive mass")
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SurvivalBound {
    pub value: f64,
    /// Set when `μ ≤ 1`, where no positive bound holds.
    pub subcritical: bool,
}

pub fn survival_bound(mu: f64, sigma2: f64, history_dependent: bool) -> Result<SurvivalBound> {
    if !(sigma2 >= 0.0) || !mu.is_finite() {
        return Err(precondition("survival_bound needs a finite mean and a non-negative variance"));
    }
    if mu <= 1.0 {
        return Ok(SurvivalBound { value: 0.0, subcritical: true });
    }
    let top = mu * mu - mu;
    let extra = if history_dependent { 0.25 } else { 0.0 };
    Ok(SurvivalBound { value: top / (top + sigma2 + extra), subcritical: false })
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SurvivalEstimate {
    pub rate: f64,
    pub std_err: f64,
    pub runs: usize,
    pub depth: usize,
}

/// Fraction of `runs` independent processes alive after `depth` generations.
///
/// A run whose population reaches `DEFAULT_POPULATION_CAP` is counted as
/// alive; it would die out later with probability at most `q^cap`, where `q`
/// is the extinction probability.
pub fn simulate_survival<R: Rng + ?Sized>(
    spec: &OffspringSpec,
    depth: usize,
    runs: usize,
    rng: &mut R,
) -> Result<SurvivalEstimate> {
    simulate_survival_capped(spec, depth, runs, DEFAULT_POPULATION_CAP, rng)
}

pub fn simulate_survival_capped<R: Rng + ?Sized>(
    spec: &OffspringSpec,
    depth: usize,
    runs: usize,
    cap: u64,
    rng: &mut R,
) -> Result<SurvivalEstimate> {
    if depth == 0 || runs == 0 {
        return Err(precondition("depth and runs must be at least 1"));
    }
    let base: u64 = rng.random();
    let sampler = spec.sampler();
    let alive = (0..runs as u64)
        .into_par_iter()
        .filter(|&i| {
            let mut r = rng_from_seed(splitmix64(base ^ splitmix64(i)));
            let mut z: u64 = 1;
            for _ in 0..depth {
                let mut next = 0u64;
                for _ in 0..z {
                    next += sampler.sample(&mut r) as u64;
                }
                z = next;
                if z == 0 || z >= cap {
                    break;
                }
            }
            z > 0
        })
        .count();
    let rate = alive as f64 / runs as f64;
    Ok(SurvivalEstimate { rate, std_err: (rate * (1.0 - rate) / runs as f64).sqrt(), runs, depth })
}

/// Sample means of `Z_0, ..., Z_m` over `runs` uncapped processes.
pub fn generation_means<R: Rng + ?Sized>(spec: &OffspringSpec, m: usize, runs: usize, rng: &mut R) -> Vec<f64> {
    let base: u64 = rng.random();
    let sampler = spec.sampler();
    let sums = (0..runs as u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng_from_seed(splitmix64(base ^ splitmix64(i)));
            let mut sizes = vec![0u64; m + 1];
            let mut z = 1u64;
            sizes[0] = 1;
            for size in sizes.iter_mut().skip(1) {
                let mut next = 0u64;
                for _ in 0..z {
                    next += sampler.sample(&mut r) as u64;
                }
                z = next;
                *size = z;
            }
            sizes
        })
        .reduce(
            || vec![0u64; m + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    sums.into_iter().map(|s| s as f64 / runs as f64).collect()
}

/// Moves mass from the largest support point down by one, repeatedly, until
/// the mean drops to `mu_prime`.
pub fn shift_distribution(p: &OffspringSpec, mu_prime: f64) -> Result<OffspringSpec> {
    let mu = p.mean();
    if !(mu_prime >= 0.0) || mu_prime > mu {
        return Err(precondition(format!("target mean {mu_prime} must lie in [0, {mu}]")));
    }
    let mut q = p.probs.clone();
    let mut remaining = mu - mu_prime;
    let mut top = q.len() - 1;
    while remaining > 1e-15 && top > 0 {
        if q[top] <= 0.0 {
            top -= 1;
            continue;
        }
        let t = q[top].min(remaining);
        q[top] -= t;
        q[top - 1] += t;
        remaining -= t;
        if q[top] <= 1e-300 {
            q[top] = 0.0;
            top -= 1;
        }
    }
    while q.len() > 1 && *q.last().unwrap() == 0.0 {
        q.pop();
    }
    Ok(OffspringSpec { probs: q })
}

/// Whether `q` is stochastically dominated by `p`: `CDF_q ≥ CDF_p` pointwise.
pub fn is_dominated_by(q: &OffspringSpec, p: &OffspringSpec, tol: f64) -> bool {
    let (cq, cp) = (q.cdf(), p.cdf());
    (0..cq.len().max(cp.len())).all(|k| {
        let a = cq.get(k).copied().unwrap_or(1.0);
        let b = cp.get(k).copied().unwrap_or(1.0);
        a + tol >= b
    })
}

/// Offspring law given as `poisson:<mean>` or a comma-separated list of
/// probabilities for `0, 1, 2, ...`.
pub fn parse_law(text: &str) -> Result<OffspringSpec> {
    let text = text.trim();
    if let Some(m) = text.strip_prefix("poisson:") {
        let mean: f64 = m.trim().parse().map_err(|_| precondition(format!("bad Poisson mean `{m}`")))?;
        return OffspringSpec::poisson(mean);
    }
    let probs = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| precondition(format!("bad probability `{s}`"))))
        .collect::<Result<Vec<f64>>>()?;
    OffspringSpec::new(probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn bound_examples() {
        assert_eq!(survival_bound(3.0, 0.0, false).unwrap().value, 1.0);
        assert_eq!(survival_bound(2.0, 2.0, false).unwrap().value, 0.5);
        assert!((survival_bound(2.0, 2.0, true).unwrap().value - 2.0 / 4.25).abs() < 1e-15);
        let sub = survival_bound(1.0, 1.0, false).unwrap();
        assert!(sub.subcritical && sub.value == 0.0);
    }

    #[test]
    fn degenerate_laws() {
        let mut rng = rng_from_seed(1);
        assert_eq!(simulate_survival(&OffspringSpec::point_mass(0), 30, 200, &mut rng).unwrap().rate, 0.0);
        assert_eq!(simulate_survival(&OffspringSpec::point_mass(2), 30, 200, &mut rng).unwrap().rate, 1.0);
    }

    #[test]
    fn poisson_truncation() {
        let p = OffspringSpec::poisson(2.0).unwrap();
        assert!((p.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((p.mean() - 2.0).abs() < 1e-9);
        assert!((p.variance() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn shift_examples() {
        let q = shift_distribution(&OffspringSpec::point_mass(2), 1.5).unwrap();
        assert_eq!(q.probs(), &[0.0, 0.5, 0.5]);
        assert!((q.variance() - 0.25).abs() < 1e-15);
        let u = OffspringSpec::new(vec![1.0 / 3.0; 3]).unwrap();
        let q = shift_distribution(&u, 0.5).unwrap();
        assert_eq!(q.probs().len(), 2);
        assert!((q.probs()[0] - 0.5).abs() < 1e-12 && (q.probs()[1] - 0.5).abs() < 1e-12);
        assert_eq!(shift_distribution(&u, u.mean()).unwrap(), u);
        assert!(shift_distribution(&u, 1.5).is_err());
        assert!(is_dominated_by(&q, &u, 1e-12));
    }

    #[test]
    fn law_parsing() {
        assert_eq!(parse_law("0.25, 0.5,0.25").unwrap().mean(), 1.0);
        assert!((parse_law("poisson:3").unwrap().mean() - 3.0).abs() < 1e-9);
        assert!(parse_law("0.5,0.6").is_err());
    }
}
