//! Seeded Monte Carlo cross-check of the analytic moment engine.
//!
//! Every vacuum X quadrature is sampled as an independent unit Gaussian and
//! each observable is evaluated as its fixed linear form over those draws,
//! so empirical means, variances and covariances must agree with the exact
//! engine within statistical error. This classical model reproduces the
//! quantum first and second moments exactly as long as the quadrature
//! coefficient vectors are real at the measured phases, which is enforced
//! as a precondition.
//!
//! Sampling runs in fixed 65536-sample blocks, each on its own ChaCha8
//! stream derived from `(seed, block index)`, and block sums merge in index
//! order: results are bit-identical for a given seed no matter how many
//! threads execute the blocks.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::detection::{Moments, Observable};
use crate::error::{Error, Result};

const BLOCK_SAMPLES: u64 = 1 << 16;
const IMAG_TOL: f64 = 1e-9;

/// Sampling configuration: sample count and RNG seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MCConfig {
    pub samples: u64,
    pub seed: u64,
}

/// A point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

/// Empirical covariance of one observable pair (`first < second`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairCovariance {
    pub first: usize,
    pub second: usize,
    pub estimate: Estimate,
}

/// Empirical moments of a set of observables sampled jointly.
///
/// With a single sample the variance estimates are undefined and reported
/// as NaN.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalMoments {
    pub samples: u64,
    pub means: Vec<Estimate>,
    pub variances: Vec<Estimate>,
    pub covariances: Vec<PairCovariance>,
}

struct BlockSums {
    count: u64,
    sum: Vec<f64>,
    cross: Vec<f64>,
}

fn cross_index(count: usize, i: usize, j: usize) -> usize {
    // upper triangle incl. diagonal, row-major
    i * count - i * (i + 1) / 2 + j
}

/// Draws `cfg.samples` joint realizations of all vacuum quadratures the
/// observables touch and returns empirical means, variances and pairwise
/// covariances with standard errors. Deterministic for a fixed seed.
pub fn mc_estimate(observables: &[Observable], cfg: &MCConfig) -> Result<EmpiricalMoments> {
    if cfg.samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let mut network: Option<u64> = None;
    for observable in observables {
        if let Some(id) = observable.network_id() {
            match network {
                None => network = Some(id),
                Some(existing) if existing != id => return Err(Error::NetworkMismatch),
                _ => {}
            }
        }
    }

    // shared basis over every vacuum input touched by any observable
    let mut ids = BTreeSet::new();
    let coefficient_maps: Vec<_> = observables
        .iter()
        .map(|o| o.quadrature_coefficients())
        .collect();
    for map in &coefficient_maps {
        ids.extend(map.keys().copied());
    }
    let basis: Vec<_> = ids.into_iter().collect();

    let count = observables.len();
    let mut offsets = Vec::with_capacity(count);
    let mut forms: Vec<Vec<f64>> = Vec::with_capacity(count);
    for (observable, map) in observables.iter().zip(&coefficient_maps) {
        let mut row = vec![0.0; basis.len()];
        for (slot, id) in basis.iter().enumerate() {
            if let Some(f) = map.get(id) {
                if f.im.abs() > IMAG_TOL {
                    return Err(Error::ComplexCoefficients { imag: f.im });
                }
                row[slot] = f.re;
            }
        }
        forms.push(row);
        offsets.push(observable.mean());
    }

    let blocks = cfg.samples.div_ceil(BLOCK_SAMPLES);
    let sums: Vec<BlockSums> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(block);
            let draws = BLOCK_SAMPLES.min(cfg.samples - block * BLOCK_SAMPLES);
            let mut quadratures = vec![0.0f64; basis.len()];
            let mut values = vec![0.0f64; count];
            let mut sum = vec![0.0f64; count];
            let mut cross = vec![0.0f64; count * (count + 1) / 2];
            for _ in 0..draws {
                for q in quadratures.iter_mut() {
                    *q = StandardNormal.sample(&mut rng);
                }
                for (value, (form, offset)) in
                    values.iter_mut().zip(forms.iter().zip(&offsets))
                {
                    *value = offset
                        + form
                            .iter()
                            .zip(&quadratures)
                            .map(|(f, q)| f * q)
                            .sum::<f64>();
                }
                for i in 0..count {
                    sum[i] += values[i];
                    for j in i..count {
                        cross[cross_index(count, i, j)] += values[i] * values[j];
                    }
                }
            }
            BlockSums {
                count: draws,
                sum,
                cross,
            }
        })
        .collect();

    // ordered merge keeps the result independent of the thread count
    let mut total = BlockSums {
        count: 0,
        sum: vec![0.0; count],
        cross: vec![0.0; count * (count + 1) / 2],
    };
    for block in sums {
        total.count += block.count;
        for (acc, value) in total.sum.iter_mut().zip(&block.sum) {
            *acc += value;
        }
        for (acc, value) in total.cross.iter_mut().zip(&block.cross) {
            *acc += value;
        }
    }

    let n = total.count as f64;
    let sample_cov = |i: usize, j: usize| -> f64 {
        if total.count < 2 {
            return f64::NAN;
        }
        (total.cross[cross_index(count, i, j)] - total.sum[i] * total.sum[j] / n) / (n - 1.0)
    };

    let variances_raw: Vec<f64> = (0..count).map(|i| sample_cov(i, i).max(0.0)).collect();
    let means = (0..count)
        .map(|i| Estimate {
            value: total.sum[i] / n,
            std_error: (variances_raw[i] / n).sqrt(),
        })
        .collect();
    let variances = variances_raw
        .iter()
        .map(|&v| Estimate {
            value: v,
            std_error: v * (2.0 / (n - 1.0)).sqrt(),
        })
        .collect();
    let mut covariances = Vec::with_capacity(count * (count.saturating_sub(1)) / 2);
    for i in 0..count {
        for j in (i + 1)..count {
            let value = sample_cov(i, j);
            let std_error =
                ((variances_raw[i] * variances_raw[j] + value * value) / (n - 1.0)).sqrt();
            covariances.push(PairCovariance {
                first: i,
                second: j,
                estimate: Estimate { value, std_error },
            });
        }
    }

    Ok(EmpiricalMoments {
        samples: total.count,
        means,
        variances,
        covariances,
    })
}

/// One analytic-versus-empirical agreement check at five standard errors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationCheck {
    pub label: String,
    pub analytic: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub sigmas: f64,
    pub pass: bool,
}

impl ValidationCheck {
    pub fn evaluate(label: impl Into<String>, analytic: f64, estimate: &Estimate) -> Self {
        let difference = (analytic - estimate.value).abs();
        let sigmas = if difference == 0.0 {
            0.0
        } else {
            difference / estimate.std_error
        };
        ValidationCheck {
            label: label.into(),
            analytic,
            estimate: estimate.value,
            std_error: estimate.std_error,
            sigmas,
            pass: sigmas <= 5.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<ValidationCheck>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn from_checks(checks: Vec<ValidationCheck>) -> Self {
        let passed = checks.iter().all(|c| c.pass);
        ValidationReport { checks, passed }
    }
}

/// Samples the observables once and flags any analytic mean or variance
/// lying outside the empirical estimate ± 5 standard errors.
pub fn mc_validate(
    observables: &[Observable],
    analytic: &[Moments],
    cfg: &MCConfig,
) -> Result<ValidationReport> {
    if observables.len() != analytic.len() {
        return Err(Error::LengthMismatch {
            expected: observables.len(),
            actual: analytic.len(),
        });
    }
    let empirical = mc_estimate(observables, cfg)?;
    let mut checks = Vec::with_capacity(2 * analytic.len());
    for (index, moments) in analytic.iter().enumerate() {
        checks.push(ValidationCheck::evaluate(
            format!("obs{index}_mean"),
            moments.mean,
            &empirical.means[index],
        ));
        checks.push(ValidationCheck::evaluate(
            format!("obs{index}_variance"),
            moments.variance,
            &empirical.variances[index],
        ));
    }
    Ok(ValidationReport::from_checks(checks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::observe;
    use crate::gaussian::{two_mode_squeezer, Network};
    use std::f64::consts::{FRAC_PI_2, SQRT_2};

    fn config(samples: u64) -> MCConfig {
        MCConfig { samples, seed: 42 }
    }

    #[test]
    fn vacuum_variance_within_five_sigma() {
        let mut net = Network::new();
        let o = observe(&net.fresh_vacuum(), 0.0);
        let emp = mc_estimate(&[o], &config(1_000_000)).unwrap();
        let var = &emp.variances[0];
        assert!((var.value - 1.0).abs() <= 5.0 * var.std_error);
        let mean = &emp.means[0];
        assert!(mean.value.abs() <= 5.0 * mean.std_error);
    }

    #[test]
    fn epr_covariance_within_five_sigma() {
        let mut net = Network::new();
        let a = net.fresh_vacuum();
        let b = net.fresh_vacuum();
        let (x, y) = two_mode_squeezer(&a, &b, 1.0).unwrap();
        let emp = mc_estimate(&[observe(&x, 0.0), observe(&y, 0.0)], &config(1_000_000)).unwrap();
        let cov = &emp.covariances[0];
        assert_eq!((cov.first, cov.second), (0, 1));
        assert!((cov.estimate.value - 2.0 * SQRT_2).abs() <= 5.0 * cov.estimate.std_error);
    }

    #[test]
    fn reproducible_for_fixed_seed() {
        let mut net = Network::new();
        let a = net.fresh_vacuum();
        let b = net.fresh_vacuum();
        let (x, y) = two_mode_squeezer(&a, &b, 0.7).unwrap();
        let obs = [observe(&x, 0.0), observe(&y, 0.0)];
        let first = mc_estimate(&obs, &config(200_000)).unwrap();
        let second = mc_estimate(&obs, &config(200_000)).unwrap();
        assert_eq!(first, second);
        let other_seed = mc_estimate(&obs, &MCConfig { samples: 200_000, seed: 43 }).unwrap();
        assert_ne!(first.means[0].value, other_seed.means[0].value);
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut net = Network::new();
        let o = observe(&net.fresh_vacuum(), 0.0);
        assert_eq!(
            mc_estimate(&[o.clone()], &config(0)),
            Err(Error::ZeroSamples)
        );
        // quadrature coefficients at pi/2 are imaginary
        let rotated = observe(&net.fresh_vacuum(), FRAC_PI_2);
        assert!(matches!(
            mc_estimate(&[rotated], &config(10)),
            Err(Error::ComplexCoefficients { .. })
        ));
        let mut other = Network::new();
        let foreign = observe(&other.fresh_vacuum(), 0.0);
        assert_eq!(
            mc_estimate(&[o, foreign], &config(10)),
            Err(Error::NetworkMismatch)
        );
    }

    #[test]
    fn validate_passes_engine_and_flags_perturbation() {
        let mut net = Network::new();
        let a = net.fresh_vacuum();
        let b = net.fresh_vacuum();
        let (x, y) = two_mode_squeezer(&a, &b, 1.0).unwrap();
        let obs = vec![observe(&x, 0.0), observe(&y, 0.0)];
        let analytic: Vec<Moments> = obs.iter().map(|o| o.moments()).collect();
        let report = mc_validate(&obs, &analytic, &config(400_000)).unwrap();
        assert!(report.passed, "engine moments rejected: {report:?}");

        let perturbed: Vec<Moments> = analytic
            .iter()
            .map(|m| Moments {
                mean: m.mean,
                variance: m.variance * 1.1,
            })
            .collect();
        let report = mc_validate(&obs, &perturbed, &config(400_000)).unwrap();
        assert!(!report.passed);

        assert!(matches!(
            mc_validate(&obs, &analytic[..1], &config(10)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn standard_error_scales_with_samples() {
        let mut net = Network::new();
        let o = observe(&net.fresh_vacuum(), 0.0);
        let small = mc_estimate(std::slice::from_ref(&o), &config(50_000)).unwrap();
        let large = mc_estimate(std::slice::from_ref(&o), &config(200_000)).unwrap();
        let ratio = large.means[0].std_error / small.means[0].std_error;
        assert!((ratio - 0.5).abs() < 0.1, "ratio {ratio}");
        let ratio = large.variances[0].std_error / small.variances[0].std_error;
        assert!((ratio - 0.5).abs() < 0.1, "ratio {ratio}");
    }
}
