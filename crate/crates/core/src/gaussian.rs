//! Propagation of optical modes through Gaussian elements.
//!
//! Every [`FieldMode`] is an exact linear expression
//! `α + Σᵢ cᵢ âᵢ + Σᵢ dᵢ âᵢ†` over the independent vacuum inputs of one
//! [`Network`]. Beam splitters, squeezers and phase shifts act linearly on
//! the coefficients, so quadrature moments come out in closed form with no
//! truncation or sampling.
//!
//! Conventions: the quadrature is `X̂(θ) = â e^{-iθ} + â† e^{iθ}` and the
//! vacuum has `⟨ΔX²⟩ = 1`. Squeezers take only the squeeze parameter; the
//! matching amplitude gain `√(1 + g²)` is derived internally, so the bosonic
//! commutation relation cannot be violated by a bad gain pair. Every
//! transformation re-checks the commutator norm of its outputs and reports
//! an [`Error::InvariantViolation`] instead of propagating a broken mode.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance for the commutator-norm physicality check.
pub const PHYSICALITY_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Identifier of one independent vacuum input within a [`Network`].
///
/// Ids are allocated sequentially per network and never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeId(usize);

impl ModeId {
    pub fn index(self) -> usize {
        self.0
    }
}

static NETWORK_IDS: AtomicU64 = AtomicU64::new(0);

/// Allocator for the independent vacuum inputs of one optical circuit.
///
/// Modes from different networks live over unrelated bases and refuse to be
/// combined.
#[derive(Debug)]
pub struct Network {
    id: u64,
    vacuum_count: usize,
}

impl Network {
    pub fn new() -> Self {
        Self {
            id: NETWORK_IDS.fetch_add(1, Ordering::Relaxed),
            vacuum_count: 0,
        }
    }

    /// Number of independent vacuum inputs allocated so far.
    pub fn vacuum_count(&self) -> usize {
        self.vacuum_count
    }

    /// A fresh vacuum mode: zero displacement, unit weight on a new basis id.
    pub fn fresh_vacuum(&mut self) -> FieldMode {
        let id = ModeId(self.vacuum_count);
        self.vacuum_count += 1;
        let mut ann = BTreeMap::new();
        ann.insert(id, Complex64::new(1.0, 0.0));
        FieldMode {
            network: self.id,
            displacement: ZERO,
            ann,
            cre: BTreeMap::new(),
        }
    }

    /// A coherent state: vacuum noise displaced by `alpha`, so
    /// `⟨X̂(0)⟩ = 2·Re(alpha)`.
    pub fn coherent(&mut self, alpha: Complex64) -> FieldMode {
        let mut mode = self.fresh_vacuum();
        mode.displacement = alpha;
        mode
    }
}

impl Default for Network {
    fn default() -> Self {
        Self::new()
    }
}

/// An optical mode: complex displacement plus a sparse linear combination of
/// vacuum annihilation (`ann`) and creation (`cre`) operators.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMode {
    network: u64,
    displacement: Complex64,
    ann: BTreeMap<ModeId, Complex64>,
    cre: BTreeMap<ModeId, Complex64>,
}

impl FieldMode {
    pub fn displacement(&self) -> Complex64 {
        self.displacement
    }

    pub(crate) fn network_id(&self) -> u64 {
        self.network
    }

    /// Sorted ids of every vacuum input this mode touches.
    pub fn vacuum_ids(&self) -> Vec<ModeId> {
        let mut ids: Vec<ModeId> = self.ann.keys().chain(self.cre.keys()).copied().collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// The `(cᵢ, dᵢ)` pair for one vacuum input; zeros if absent.
    pub fn vacuum_coefficient(&self, id: ModeId) -> (Complex64, Complex64) {
        (
            self.ann.get(&id).copied().unwrap_or(ZERO),
            self.cre.get(&id).copied().unwrap_or(ZERO),
        )
    }

    /// `⟨X̂(θ)⟩ = 2·Re(α e^{-iθ})`.
    pub fn mean_x(&self, theta: f64) -> f64 {
        2.0 * (self.displacement * Complex64::from_polar(1.0, -theta)).re
    }

    /// Per-input quadrature coefficients `fᵢ = cᵢ e^{-iθ} + dᵢ* e^{iθ}`,
    /// so that `ΔX̂(θ) = Σᵢ (fᵢ âᵢ + fᵢ* âᵢ†)`.
    pub(crate) fn quadrature_coefficients(&self, theta: f64) -> BTreeMap<ModeId, Complex64> {
        let minus = Complex64::from_polar(1.0, -theta);
        let plus = Complex64::from_polar(1.0, theta);
        let mut out = BTreeMap::new();
        for (&id, &c) in &self.ann {
            *out.entry(id).or_insert(ZERO) += c * minus;
        }
        for (&id, &d) in &self.cre {
            *out.entry(id).or_insert(ZERO) += d.conj() * plus;
        }
        out
    }

    /// `⟨Δ²X̂(θ)⟩ = Σᵢ |fᵢ|²`; vacuum gives 1.
    pub fn variance_x(&self, theta: f64) -> f64 {
        self.quadrature_coefficients(theta)
            .values()
            .map(|f| f.norm_sqr())
            .sum()
    }

    /// `[Â, Â†] = Σᵢ (|cᵢ|² − |dᵢ|²)`; equals 1 for any physical mode.
    pub fn commutator_norm(&self) -> f64 {
        let a: f64 = self.ann.values().map(|c| c.norm_sqr()).sum();
        let b: f64 = self.cre.values().map(|d| d.norm_sqr()).sum();
        a - b
    }

    /// `â → e^{iφ} â`: displacement and all coefficients pick up the phase.
    pub fn phase_shift(&self, angle: f64) -> FieldMode {
        self.scale(Complex64::from_polar(1.0, angle))
    }

    /// Shift the displacement by `delta`, leaving the noise part untouched.
    pub fn displace(&self, delta: Complex64) -> FieldMode {
        let mut out = self.clone();
        out.displacement += delta;
        out
    }

    /// Multiply the whole operator by `factor`.
    ///
    /// Only unit-modulus factors preserve the commutator; other factors give
    /// unphysical modes, which is occasionally useful for coefficient
    /// bookkeeping and tests.
    pub fn scale(&self, factor: Complex64) -> FieldMode {
        let mut out = self.clone();
        out.displacement *= factor;
        for c in out.ann.values_mut() {
            *c *= factor;
        }
        for d in out.cre.values_mut() {
            *d *= factor;
        }
        out
    }

    /// Hermitian conjugate: swaps annihilation/creation roles.
    fn dagger(&self) -> FieldMode {
        FieldMode {
            network: self.network,
            displacement: self.displacement.conj(),
            ann: self.cre.iter().map(|(&id, d)| (id, d.conj())).collect(),
            cre: self.ann.iter().map(|(&id, c)| (id, c.conj())).collect(),
        }
    }

    fn checked(self, context: &'static str) -> Result<FieldMode> {
        let norm = self.commutator_norm();
        if (norm - 1.0).abs() <= PHYSICALITY_TOL {
            Ok(self)
        } else {
            Err(Error::InvariantViolation {
                context,
                value: norm,
            })
        }
    }
}

fn accumulate(
    target: &mut BTreeMap<ModeId, Complex64>,
    source: &BTreeMap<ModeId, Complex64>,
    factor: Complex64,
) {
    for (&id, &value) in source {
        *target.entry(id).or_insert(ZERO) += factor * value;
    }
}

/// Exact weighted sum of modes. Zero factors are skipped so identity
/// transformations reproduce their inputs bit for bit.
fn linear_combination(terms: &[(Complex64, &FieldMode)]) -> FieldMode {
    let network = terms[0].1.network;
    let mut out = FieldMode {
        network,
        displacement: ZERO,
        ann: BTreeMap::new(),
        cre: BTreeMap::new(),
    };
    for &(factor, mode) in terms {
        if factor == ZERO {
            continue;
        }
        out.displacement += factor * mode.displacement;
        accumulate(&mut out.ann, &mode.ann, factor);
        accumulate(&mut out.cre, &mode.cre, factor);
    }
    out
}

fn ensure_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            lo,
            hi,
        })
    }
}

fn ensure_same_network(a: &FieldMode, b: &FieldMode) -> Result<()> {
    if a.network == b.network {
        Ok(())
    } else {
        Err(Error::NetworkMismatch)
    }
}

/// Lossless beam splitter with power transmissivity `T`:
///
/// `out1 = √T·in1 + √(1−T)·in2`, `out2 = √T·in2 − √(1−T)·in1`.
///
/// The sign on the reflected path is fixed; circuits that need the other
/// convention apply an explicit π [`FieldMode::phase_shift`].
pub fn beam_splitter(
    input1: &FieldMode,
    input2: &FieldMode,
    transmissivity: f64,
) -> Result<(FieldMode, FieldMode)> {
    ensure_range("transmissivity", transmissivity, 0.0, 1.0)?;
    ensure_same_network(input1, input2)?;
    let t = Complex64::new(transmissivity.sqrt(), 0.0);
    let r = Complex64::new((1.0 - transmissivity).sqrt(), 0.0);
    let out1 = linear_combination(&[(t, input1), (r, input2)]);
    let out2 = linear_combination(&[(t, input2), (-r, input1)]);
    Ok((
        out1.checked("beam_splitter")?,
        out2.checked("beam_splitter")?,
    ))
}

/// Two-mode squeezer / non-degenerate parametric amplifier with squeeze
/// parameter `g ≥ 0` and derived amplitude gain `G = √(1 + g²)`:
///
/// `out1 = G·in1 + g·in2†`, `out2 = G·in2 + g·in1†`.
pub fn two_mode_squeezer(
    input1: &FieldMode,
    input2: &FieldMode,
    squeeze: f64,
) -> Result<(FieldMode, FieldMode)> {
    ensure_range("squeeze", squeeze, 0.0, f64::INFINITY)?;
    ensure_same_network(input1, input2)?;
    let amp = Complex64::new((1.0 + squeeze * squeeze).sqrt(), 0.0);
    let g = Complex64::new(squeeze, 0.0);
    let dag1 = input1.dagger();
    let dag2 = input2.dagger();
    let out1 = linear_combination(&[(amp, input1), (g, &dag2)]);
    let out2 = linear_combination(&[(amp, input2), (g, &dag1)]);
    Ok((
        out1.checked("two_mode_squeezer")?,
        out2.checked("two_mode_squeezer")?,
    ))
}

/// Single-mode squeezer with squeeze parameter `ν ≥ 0` and derived
/// `μ = √(1 + ν²)`:
///
/// `out = μ·in − ν·in†`, so a vacuum input leaves with
/// `⟨Δ²X̂(0)⟩ = (μ − ν)²`.
pub fn single_mode_squeezer(input: &FieldMode, squeeze: f64) -> Result<FieldMode> {
    ensure_range("squeeze", squeeze, 0.0, f64::INFINITY)?;
    let mu = Complex64::new((1.0 + squeeze * squeeze).sqrt(), 0.0);
    let nu = Complex64::new(squeeze, 0.0);
    let dag = input.dagger();
    linear_combination(&[(mu, input), (-nu, &dag)]).checked("single_mode_squeezer")
}

/// Symmetrized quadrature covariance `Re Σᵢ fᵢ gᵢ*` of two modes measured at
/// phases `theta1`, `theta2`.
pub fn covariance_x(m1: &FieldMode, theta1: f64, m2: &FieldMode, theta2: f64) -> Result<f64> {
    ensure_same_network(m1, m2)?;
    let f = m1.quadrature_coefficients(theta1);
    let g = m2.quadrature_coefficients(theta2);
    Ok(f.iter()
        .map(|(id, fi)| g.get(id).map_or(0.0, |gi| (fi * gi.conj()).re))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

    fn assert_close(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() <= tol,
            "expected {expected}, got {actual} (tol {tol})"
        );
    }

    #[test]
    fn fresh_vacuum_moments() {
        let mut net = Network::new();
        let v = net.fresh_vacuum();
        assert_close(v.variance_x(0.0), 1.0, 1e-15);
        assert_close(v.mean_x(0.0), 0.0, 1e-15);
        assert_close(v.commutator_norm(), 1.0, 1e-15);
        assert_eq!(net.vacuum_count(), 1);
    }

    #[test]
    fn coherent_moments() {
        let mut net = Network::new();
        let c = net.coherent(Complex64::new(1.0, 0.0));
        assert_close(c.mean_x(0.0), 2.0, 1e-15);
        assert_close(c.variance_x(0.0), 1.0, 1e-15);

        let zero = net.coherent(ZERO);
        let v = net.fresh_vacuum();
        assert_eq!(zero.mean_x(0.0), v.mean_x(0.0));
        assert_eq!(zero.variance_x(0.0), v.variance_x(0.0));

        // SNR of |alpha=3> at theta = 0 is 4 alpha^2.
        let big = net.coherent(Complex64::new(3.0, 0.0));
        let snr = big.mean_x(0.0).powi(2) / big.variance_x(0.0);
        assert_close(snr, 36.0, 1e-12);
    }

    #[test]
    fn mean_x_phases() {
        let mut net = Network::new();
        let c = net.coherent(Complex64::new(1.0, 0.0));
        assert_close(c.mean_x(FRAC_PI_2), 0.0, 1e-15);
        let ci = net.coherent(Complex64::new(0.0, 1.0));
        assert_close(ci.mean_x(0.0), 0.0, 1e-15);
    }

    #[test]
    fn beam_splitter_identity_at_full_transmission() {
        let mut net = Network::new();
        let c = net.coherent(Complex64::new(0.7, -0.2));
        let v = net.fresh_vacuum();
        let (out1, out2) = beam_splitter(&c, &v, 1.0).unwrap();
        assert_eq!(out1, c);
        assert_eq!(out2, v);
    }

    #[test]
    fn beam_splitter_balanced_split() {
        let mut net = Network::new();
        let c = net.coherent(Complex64::new(1.0, 0.0));
        let v = net.fresh_vacuum();
        let (out1, out2) = beam_splitter(&c, &v, 0.5).unwrap();
        assert_close(out1.mean_x(0.0), SQRT_2, 1e-12);
        assert_close(out1.variance_x(0.0), 1.0, 1e-12);
        assert_close(out2.variance_x(0.0), 1.0, 1e-12);
        // energy conservation of the mean fields
        let total = out1.displacement().norm_sqr() + out2.displacement().norm_sqr();
        assert_close(total, c.displacement().norm_sqr(), 1e-12);
    }

    #[test]
    fn beam_splitter_rejects_bad_input() {
        let mut net = Network::new();
        let a = net.fresh_vacuum();
        let b = net.fresh_vacuum();
        assert!(matches!(
            beam_splitter(&a, &b, 1.5),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            beam_splitter(&a, &b, -0.1),
            Err(Error::OutOfRange { .. })
        ));
        let mut other = Network::new();
        let foreign = other.fresh_vacuum();
        assert_eq!(
            beam_splitter(&a, &foreign, 0.5),
            Err(Error::NetworkMismatch)
        );
    }

    #[test]
    fn two_mode_squeezer_identity_at_zero() {
        let mut net = Network::new();
        let a = net.coherent(Complex64::new(0.3, 0.1));
        let b = net.fresh_vacuum();
        let (out1, out2) = two_mode_squeezer(&a, &b, 0.0).unwrap();
        assert_eq!(out1, a);
        assert_eq!(out2, b);
    }

    #[test]
    fn two_mode_squeezer_epr_moments() {
        let mut net = Network::new();
        let a = net.fresh_vacuum();
        let b = net.fresh_vacuum();
        let (out1, out2) = two_mode_squeezer(&a, &b, 1.0).unwrap();
        // G = sqrt(2): each output variance G^2 + g^2 = 3, covariance 2 G g.
        assert_close(out1.variance_x(0.0), 3.0, 1e-12);
        assert_close(out2.variance_x(0.0), 3.0, 1e-12);
        let cov = covariance_x(&out1, 0.0, &out2, 0.0).unwrap();
        assert_close(cov, 2.0 * SQRT_2, 1e-12);
        assert_close(out1.commutator_norm(), 1.0, 1e-12);
        assert_close(out2.commutator_norm(), 1.0, 1e-12);
    }

    #[test]
    fn two_mode_squeezer_rejects_negative_gain() {
        let mut net = Network::new();
        let a = net.fresh_vacuum();
        let b = net.fresh_vacuum();
        assert!(matches!(
            two_mode_squeezer(&a, &b, -0.5),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn single_mode_squeezer_noise() {
        let mut net = Network::new();
        let v = net.fresh_vacuum();
        // nu = 0: vacuum noise untouched.
        assert_close(
            single_mode_squeezer(&v, 0.0).unwrap().variance_x(0.0),
            1.0,
            1e-15,
        );
        // nu = 1: (sqrt(2) - 1)^2 = 3 - 2 sqrt(2).
        let sq = single_mode_squeezer(&v, 1.0).unwrap();
        assert_close(sq.variance_x(0.0), 3.0 - 2.0 * SQRT_2, 1e-12);
        assert_close(sq.commutator_norm(), 1.0, 1e-12);
        // large nu: noise approaches zero from above.
        let hard = single_mode_squeezer(&v, 100.0).unwrap();
        assert!(hard.variance_x(0.0) < 1e-4);
        assert!(hard.variance_x(0.0) > 0.0);
        assert!(matches!(
            single_mode_squeezer(&v, -1.0),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn phase_shift_conventions() {
        let mut net = Network::new();
        let c = net.coherent(Complex64::new(0.8, 0.3));
        let same = c.phase_shift(0.0);
        assert_close(same.mean_x(0.0), c.mean_x(0.0), 1e-15);
        let flipped = c.phase_shift(PI);
        assert_close(flipped.mean_x(0.0), -c.mean_x(0.0), 1e-12);
        assert_close(flipped.variance_x(0.0), c.variance_x(0.0), 1e-12);
        // rotating the mode by phi shifts which quadrature carries the mean
        let rotated = c.phase_shift(FRAC_PI_2);
        assert_close(rotated.mean_x(0.0), c.mean_x(-FRAC_PI_2), 1e-12);
    }

    #[test]
    fn covariance_trivia() {
        let mut net = Network::new();
        let a = net.fresh_vacuum();
        let b = net.fresh_vacuum();
        assert_close(
            covariance_x(&a, 0.0, &a, 0.0).unwrap(),
            a.variance_x(0.0),
            1e-15,
        );
        assert_close(covariance_x(&a, 0.0, &b, 0.0).unwrap(), 0.0, 1e-15);
        let mut other = Network::new();
        let foreign = other.fresh_vacuum();
        assert_eq!(
            covariance_x(&a, 0.0, &foreign, 0.0),
            Err(Error::NetworkMismatch)
        );
    }

    #[test]
    fn commutator_norm_scaling() {
        let mut net = Network::new();
        let v = net.fresh_vacuum();
        let half = v.scale(Complex64::new(0.5, 0.0));
        assert_close(half.commutator_norm(), 0.25, 1e-15);
    }

    #[test]
    fn vacuum_coefficient_readout() {
        let mut net = Network::new();
        let a = net.fresh_vacuum();
        let b = net.fresh_vacuum();
        let a_id = a.vacuum_ids()[0];
        let b_id = b.vacuum_ids()[0];
        assert_eq!(
            a.vacuum_coefficient(a_id),
            (Complex64::new(1.0, 0.0), ZERO)
        );
        assert_eq!(a.vacuum_coefficient(b_id), (ZERO, ZERO));
        let (out1, _) = beam_splitter(&a, &b, 0.5).unwrap();
        let (c, d) = out1.vacuum_coefficient(b_id);
        assert_close(c.re, 0.5_f64.sqrt(), 1e-15);
        assert_close(c.im, 0.0, 1e-15);
        assert_eq!(d, ZERO);
    }
}
