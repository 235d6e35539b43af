//! Homodyne observables and electronic post-processing.
//!
//! An [`Observable`] is a real-weighted sum of mode quadratures at chosen
//! phases — the photocurrent combination a homodyne setup with electronic
//! gains produces. Means and (co)variances are exact bilinear forms of the
//! underlying vacuum coefficients; nothing here is sampled.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{FieldMode, ModeId};

/// Readout covariance matrices with `|det|` below this are treated as
/// singular and solved in the minimum-norm sense.
pub const SINGULAR_DET_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
struct Term {
    mode: FieldMode,
    theta: f64,
    weight: f64,
}

/// A real-weighted linear combination of mode quadratures.
#[derive(Debug, Clone)]
pub struct Observable {
    terms: Vec<Term>,
}

/// First and second moment of an observable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

/// Homodyne detection of one mode at phase `theta` with unit weight.
pub fn observe(mode: &FieldMode, theta: f64) -> Observable {
    Observable {
        terms: vec![Term {
            mode: mode.clone(),
            theta,
            weight: 1.0,
        }],
    }
}

/// Weighted recombination of already-detected observables.
pub fn combine(parts: &[(&Observable, f64)]) -> Result<Observable> {
    let mut network: Option<u64> = None;
    let mut terms = Vec::new();
    for &(observable, weight) in parts {
        if let Some(id) = observable.network_id() {
            match network {
                None => network = Some(id),
                Some(existing) if existing != id => return Err(Error::NetworkMismatch),
                _ => {}
            }
        }
        for term in &observable.terms {
            terms.push(Term {
                mode: term.mode.clone(),
                theta: term.theta,
                weight: term.weight * weight,
            });
        }
    }
    Ok(Observable { terms })
}

impl Observable {
    pub(crate) fn network_id(&self) -> Option<u64> {
        self.terms.first().map(|t| t.mode.network_id())
    }

    /// Aggregated quadrature coefficients `Fᵢ = Σₖ wₖ fᵢ⁽ᵏ⁾` over the
    /// shared vacuum basis.
    pub(crate) fn quadrature_coefficients(&self) -> BTreeMap<ModeId, Complex64> {
        let mut out: BTreeMap<ModeId, Complex64> = BTreeMap::new();
        for term in &self.terms {
            for (id, f) in term.mode.quadrature_coefficients(term.theta) {
                *out.entry(id).or_insert(Complex64::new(0.0, 0.0)) += f * term.weight;
            }
        }
        out
    }

    pub fn mean(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.weight * t.mode.mean_x(t.theta))
            .sum()
    }

    pub fn variance(&self) -> f64 {
        self.quadrature_coefficients()
            .values()
            .map(|f| f.norm_sqr())
            .sum()
    }

    pub fn moments(&self) -> Moments {
        Moments {
            mean: self.mean(),
            variance: self.variance(),
        }
    }

    /// `⟨X⟩² / ⟨Δ²X⟩`. A zero-variance observable has no finite SNR and is
    /// reported as an error.
    pub fn snr(&self) -> Result<f64> {
        let Moments { mean, variance } = self.moments();
        if variance > 0.0 {
            Ok(mean * mean / variance)
        } else if mean == 0.0 {
            Err(Error::ZeroVariance { context: "snr" })
        } else {
            Err(Error::InfiniteSnr)
        }
    }
}

fn ensure_same_network(a: &Observable, b: &Observable) -> Result<()> {
    match (a.network_id(), b.network_id()) {
        (Some(x), Some(y)) if x != y => Err(Error::NetworkMismatch),
        _ => Ok(()),
    }
}

/// Symmetrized covariance `Re Σᵢ Fᵢ Gᵢ*` of two observables.
pub fn covariance(a: &Observable, b: &Observable) -> Result<f64> {
    ensure_same_network(a, b)?;
    let fa = a.quadrature_coefficients();
    let fb = b.quadrature_coefficients();
    Ok(fa
        .iter()
        .map(|(id, f)| fb.get(id).map_or(0.0, |g| (f * g.conj()).re))
        .sum())
}

/// Correlation coefficient, clamped to `[-1, 1]` against rounding.
pub fn correlation(a: &Observable, b: &Observable) -> Result<f64> {
    let va = a.variance();
    let vb = b.variance();
    if va <= 0.0 || vb <= 0.0 {
        return Err(Error::ZeroVariance {
            context: "correlation",
        });
    }
    let c = covariance(a, b)? / (va * vb).sqrt();
    Ok(c.clamp(-1.0, 1.0))
}

/// Electronic gain `λ* = cov(signal, aux) / var(aux)` minimizing
/// `⟨(ΔX_signal − λ ΔX_aux)²⟩`.
pub fn optimal_gain(signal: &Observable, aux: &Observable) -> Result<f64> {
    let va = aux.variance();
    if va <= 0.0 {
        return Err(Error::ZeroVariance {
            context: "optimal_gain",
        });
    }
    Ok(covariance(signal, aux)? / va)
}

/// Result of a conditional-variance minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalVariance {
    /// Residual variance after optimal linear estimation from the readouts.
    pub variance: f64,
    /// Electronic gains, one per readout.
    pub gains: Vec<f64>,
    /// Set when the readout covariance matrix was singular and the gains are
    /// the minimum-norm solution.
    pub degenerate: bool,
}

/// Minimizes `⟨(ΔX_target − Σᵢ λᵢ ΔX_readoutᵢ)²⟩` by solving the normal
/// equations on the readout covariance matrix. With no readouts this is the
/// plain variance. The residual variance is evaluated from the combined
/// observable itself, so it is a sum of squares and never goes negative.
pub fn conditional_variance(
    target: &Observable,
    readouts: &[&Observable],
) -> Result<ConditionalVariance> {
    if readouts.is_empty() {
        return Ok(ConditionalVariance {
            variance: target.variance(),
            gains: Vec::new(),
            degenerate: false,
        });
    }
    let k = readouts.len();
    let mut sigma = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let c = covariance(readouts[i], readouts[j])?;
            sigma[(i, j)] = c;
            sigma[(j, i)] = c;
        }
    }
    let mut rhs = DVector::<f64>::zeros(k);
    for i in 0..k {
        rhs[i] = covariance(target, readouts[i])?;
    }

    let det = sigma.clone().determinant();
    let solved = if det.abs() < SINGULAR_DET_TOL {
        None
    } else {
        sigma.clone().lu().solve(&rhs)
    };
    let (gains, degenerate) = match solved {
        Some(g) => (g, false),
        None => {
            let pinv = sigma
                .svd(true, true)
                .pseudo_inverse(SINGULAR_DET_TOL)
                .expect("pseudo-inverse with non-negative epsilon");
            (&pinv * &rhs, true)
        }
    };

    let mut parts: Vec<(&Observable, f64)> = Vec::with_capacity(k + 1);
    parts.push((target, 1.0));
    for (i, readout) in readouts.iter().enumerate() {
        parts.push((readout, -gains[i]));
    }
    let residual = combine(&parts)?;
    Ok(ConditionalVariance {
        variance: residual.variance(),
        gains: gains.iter().copied().collect(),
        degenerate,
    })
}

/// Per-port and total SNR transfer relative to a reference input SNR.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferCoefficients {
    pub per_port: Vec<f64>,
    pub total: f64,
}

pub fn transfer_coefficients(
    outputs: &[&Observable],
    reference_snr: f64,
) -> Result<TransferCoefficients> {
    if reference_snr <= 0.0 {
        return Err(Error::NonPositive {
            name: "reference_snr",
            value: reference_snr,
        });
    }
    let per_port = outputs
        .iter()
        .map(|o| o.snr().map(|r| r / reference_snr))
        .collect::<Result<Vec<f64>>>()?;
    let total = per_port.iter().sum();
    Ok(TransferCoefficients { per_port, total })
}
