//! Builders for the signal-splitting circuits and their figure-of-merit
//! reports.
//!
//! Every metric is computed from first-principles mode propagation through
//! [`crate::gaussian`] and [`crate::detection`]; the few closed-form fields
//! on [`ThreeWayResult`] are cross-check values, re-derived independently in
//! the test suites.
//!
//! Sign conventions inside the builders are realized by explicit π phase
//! shifts on the relevant arms, never by hidden flags: the recombination
//! splitter of the three-way circuit cancels the input-splitting vacuum at
//! its summed port, and the amplifier's internal arm is phase-locked
//! opposite to its correlated partner so the amplified noise partially
//! cancels instead of adding.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::detection::{
    combine, conditional_variance, correlation, observe, optimal_gain, transfer_coefficients,
    Observable,
};
use crate::error::{Error, Result};
use crate::gaussian::{beam_splitter, single_mode_squeezer, two_mode_squeezer, FieldMode, ModeId,
    Network};

/// Signal mean, noise variance, SNR and SNR transfer of one output port.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PortMetrics {
    pub label: String,
    pub mean: f64,
    pub variance: f64,
    pub snr: f64,
    pub transfer: f64,
}

/// Full metrics record of one scheme evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeMetrics {
    pub ports: Vec<PortMetrics>,
    /// Input SNR the transfers are measured against.
    pub reference_snr: f64,
    /// Sum of the per-port transfers.
    pub total_transfer: f64,
    /// Effective noise-reduction degree `1/(μ² + ν²)` when a correlated
    /// source is part of the circuit.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_e: Option<f64>,
}

/// Three-way splitter evaluation: engine metrics plus closed-form
/// cross-check values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThreeWayResult {
    #[serde(rename = "T")]
    pub transmissivity: f64,
    #[serde(rename = "g")]
    pub squeeze: f64,
    /// Derived amplitude gain `G = √(1 + g²)`.
    #[serde(rename = "G")]
    pub amp_gain: f64,
    pub alpha: f64,
    pub metrics: SchemeMetrics,
    /// Engine total transfer (same value as `metrics.total_transfer`).
    pub t3_total: f64,
    /// Closed-form total transfer for cross-checking the engine.
    pub t3_closed_form: f64,
    /// Closed-form transmissivity `g/(G + 2g)` maximizing the total transfer.
    pub t_op: f64,
    /// Closed-form maximum `1 + 2g/G` of the total transfer.
    pub t3_max: f64,
}

/// Correlation coefficients and conditional variances of the three-way
/// splitter used as a nondemolition measurement device.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QndReport {
    /// Input/output correlation (nondemolition quality).
    pub c_in_c: f64,
    /// Input/readout correlations (measurement quality).
    pub c_in_a: f64,
    pub c_in_b: f64,
    /// Readout/readout correlation.
    pub c_ab: f64,
    /// Conditional variances of the kept output given the readouts
    /// (state-projection quality).
    pub v_c_given_a: f64,
    pub v_c_given_b: f64,
    pub v_c_given_ab: f64,
    /// `C²` sum over the three outputs; equals the total transfer.
    pub sum_rule: f64,
    /// `V(c|a,b) / V(c|a)`; below 1 means the second readout sharpens the
    /// projected state.
    pub sequential_ratio: f64,
}

/// How much of the input-splitting vacuum survives in each output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeakageReport {
    /// Operator-coefficient magnitude of the splitting vacuum in the kept
    /// output; zero by interference.
    pub c_out_coefficient: f64,
    /// Quadrature-variance contribution of the splitting vacuum to the two
    /// amplified readouts.
    pub a_out_contribution: f64,
    pub b_out_contribution: f64,
}

/// Numerically located maximum of the three-way total transfer over the
/// tap transmissivity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransmissivityOptimum {
    pub t_op: f64,
    pub t3_max: f64,
}

/// Parameter bundle identifying one scheme evaluation; used by the sweep
/// tooling and the Monte Carlo validator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    BsSqueezed {
        transmissivity: f64,
        squeeze: f64,
        alpha: f64,
    },
    BsCorrelated {
        transmissivity: f64,
        squeeze: f64,
        alpha: f64,
    },
    NpaTap {
        source_squeeze: f64,
        amp_squeeze: f64,
        alpha: f64,
        reflectivity: f64,
    },
    ThreeWay {
        transmissivity: f64,
        squeeze: f64,
        alpha: f64,
    },
    ThreeWaySingleTap {
        transmissivity: f64,
        squeeze: f64,
        alpha: f64,
    },
}

impl Scheme {
    /// Labeled port observables plus the scheme's reference observable,
    /// in the order the metrics report them.
    pub fn observables(&self) -> Result<Vec<(String, Observable)>> {
        let built = match *self {
            Scheme::BsSqueezed {
                transmissivity,
                squeeze,
                alpha,
            } => build_bs_squeezed(transmissivity, squeeze, alpha)?,
            Scheme::BsCorrelated {
                transmissivity,
                squeeze,
                alpha,
            } => build_bs_correlated(transmissivity, squeeze, alpha)?,
            Scheme::NpaTap {
                source_squeeze,
                amp_squeeze,
                alpha,
                reflectivity,
            } => build_npa_tap(source_squeeze, amp_squeeze, alpha, reflectivity)?,
            Scheme::ThreeWay {
                transmissivity,
                squeeze,
                alpha,
            } => {
                let circuit = build_three_way_circuit(transmissivity, squeeze, squeeze, alpha)?;
                return Ok(vec![
                    ("a_out".into(), circuit.a_out_obs),
                    ("b_out".into(), circuit.b_out_obs),
                    ("c_out".into(), circuit.c_out_obs),
                    ("reference".into(), circuit.input_obs),
                ]);
            }
            Scheme::ThreeWaySingleTap {
                transmissivity,
                squeeze,
                alpha,
            } => build_single_tap(transmissivity, squeeze, alpha)?,
        };
        let mut out: Vec<(String, Observable)> = built.ports.into_iter().collect();
        out.push(("reference".into(), built.reference));
        Ok(out)
    }
}

struct BuiltScheme {
    ports: Vec<(String, Observable)>,
    reference: Observable,
    s_e: Option<f64>,
}

fn scheme_metrics(built: BuiltScheme) -> Result<SchemeMetrics> {
    let reference_snr = built.reference.snr()?;
    let port_refs: Vec<&Observable> = built.ports.iter().map(|(_, o)| o).collect();
    let tc = transfer_coefficients(&port_refs, reference_snr)?;
    let ports = built
        .ports
        .iter()
        .zip(&tc.per_port)
        .map(|((label, o), &transfer)| {
            Ok(PortMetrics {
                label: label.clone(),
                mean: o.mean(),
                variance: o.variance(),
                snr: o.snr()?,
                transfer,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SchemeMetrics {
        ports,
        reference_snr,
        total_transfer: tc.total,
        s_e: built.s_e,
    })
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn effective_noise_reduction(squeeze: f64) -> f64 {
    // 1/(mu^2 + nu^2) with mu^2 = 1 + nu^2
    1.0 / (1.0 + 2.0 * squeeze * squeeze)
}

// ---------------------------------------------------------------------------
// Beam-splitter taps
// ---------------------------------------------------------------------------

fn build_bs_squeezed(transmissivity: f64, squeeze: f64, alpha: f64) -> Result<BuiltScheme> {
    let mut net = Network::new();
    let signal = net.coherent(real(alpha));
    let vac = net.fresh_vacuum();
    let squeezed = single_mode_squeezer(&vac, squeeze)?;
    let (out1, out2_raw) = beam_splitter(&signal, &squeezed, transmissivity)?;
    // flip the reflected port so both signal means are positive
    let out2 = out2_raw.phase_shift(PI);
    Ok(BuiltScheme {
        ports: vec![
            ("out1".into(), observe(&out1, 0.0)),
            ("out2".into(), observe(&out2, 0.0)),
        ],
        reference: observe(&signal, 0.0),
        s_e: None,
    })
}

/// Tap a coherent signal on a beam splitter whose unused port carries a
/// squeezed vacuum of noise `S = (μ − ν)²`.
pub fn scheme_bs_squeezed(transmissivity: f64, squeeze: f64, alpha: f64) -> Result<SchemeMetrics> {
    scheme_metrics(build_bs_squeezed(transmissivity, squeeze, alpha)?)
}

fn build_bs_correlated(transmissivity: f64, squeeze: f64, alpha: f64) -> Result<BuiltScheme> {
    let mut net = Network::new();
    let v1 = net.fresh_vacuum();
    let v2 = net.fresh_vacuum();
    let (beam_a, beam_b) = two_mode_squeezer(&v1, &v2, squeeze)?;
    let signal = net.coherent(real(alpha));
    let (port1_raw, port2_raw) = beam_splitter(&signal, &beam_a, transmissivity)?;
    let port2_flipped = port2_raw.phase_shift(PI);

    // subtract the partner-beam photocurrent with the optimum electronic gain
    let partner = observe(&beam_b, 0.0);
    let o1 = observe(&port1_raw, 0.0);
    let o2 = observe(&port2_flipped, 0.0);
    let gain1 = optimal_gain(&o1, &partner)?;
    let gain2 = optimal_gain(&o2, &partner)?;
    let port1 = combine(&[(&o1, 1.0), (&partner, -gain1)])?;
    let port2 = combine(&[(&o2, 1.0), (&partner, -gain2)])?;
    Ok(BuiltScheme {
        ports: vec![("out1".into(), port1), ("out2".into(), port2)],
        reference: observe(&signal, 0.0),
        s_e: Some(effective_noise_reduction(squeeze)),
    })
}

/// Tap a coherent signal on a beam splitter whose unused port carries one
/// beam of a correlated pair; the partner beam is detected separately and
/// subtracted electronically.
pub fn scheme_bs_correlated(
    transmissivity: f64,
    squeeze: f64,
    alpha: f64,
) -> Result<SchemeMetrics> {
    scheme_metrics(build_bs_correlated(transmissivity, squeeze, alpha)?)
}

// ---------------------------------------------------------------------------
// Amplifier tap
// ---------------------------------------------------------------------------

fn build_npa_tap(
    source_squeeze: f64,
    amp_squeeze: f64,
    alpha: f64,
    reflectivity: f64,
) -> Result<BuiltScheme> {
    if !(0.0..1.0).contains(&reflectivity) {
        return Err(Error::OutOfRange {
            name: "reflectivity",
            value: reflectivity,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let mut net = Network::new();
    let v1 = net.fresh_vacuum();
    let v2 = net.fresh_vacuum();
    let (beam, internal_raw) = two_mode_squeezer(&v1, &v2, source_squeeze)?;
    // amplifier pump phase opposite to the source correlation, so the
    // amplified quadrature noise of the pair cancels instead of adding
    let internal = internal_raw.phase_shift(PI);

    // inject the coherent signal into the correlated beam
    let signal_in = if reflectivity == 0.0 {
        beam.displace(real(alpha))
    } else {
        let carrier = net.coherent(real(alpha / reflectivity));
        let (through, _) = beam_splitter(&beam, &carrier, 1.0 - reflectivity * reflectivity)?;
        through
    };

    let (amp_out, idler_out) = two_mode_squeezer(&signal_in, &internal, amp_squeeze)?;

    // dual-beam reference: the injected signal beam with its partner
    // optimally subtracted
    let sig_obs = observe(&signal_in, 0.0);
    let partner_obs = observe(&internal, 0.0);
    let gain = optimal_gain(&sig_obs, &partner_obs)?;
    let reference = combine(&[(&sig_obs, 1.0), (&partner_obs, -gain)])?;

    Ok(BuiltScheme {
        ports: vec![
            ("a_out".into(), observe(&amp_out, 0.0)),
            ("b_out".into(), observe(&idler_out, 0.0)),
        ],
        reference,
        s_e: Some(effective_noise_reduction(source_squeeze)),
    })
}

/// Noiseless-amplification tap: a two-mode amplifier whose input beam and
/// internal mode come from one correlated source. `reflectivity = 0` is the
/// ideal displacement-only signal injection; a finite value inserts a real
/// splitter with its vacuum port.
pub fn scheme_npa_tap(
    source_squeeze: f64,
    amp_squeeze: f64,
    alpha: f64,
    reflectivity: f64,
) -> Result<SchemeMetrics> {
    scheme_metrics(build_npa_tap(
        source_squeeze,
        amp_squeeze,
        alpha,
        reflectivity,
    )?)
}

// ---------------------------------------------------------------------------
// Three-way splitter
// ---------------------------------------------------------------------------

struct ThreeWayCircuit {
    input_obs: Observable,
    a_out_obs: Observable,
    b_out_obs: Observable,
    c_out_obs: Observable,
    a_out: FieldMode,
    b_out: FieldMode,
    c_out: FieldMode,
    splitter_vacuum: ModeId,
}

fn build_three_way_circuit(
    transmissivity: f64,
    amp_squeeze: f64,
    source_squeeze: f64,
    alpha: f64,
) -> Result<ThreeWayCircuit> {
    let mut net = Network::new();
    let input = net.coherent(real(alpha));
    let split_vac = net.fresh_vacuum();
    let splitter_vacuum = split_vac.vacuum_ids()[0];

    // split the input into two equal halves against a vacuum port
    let (half1, half2_raw) = beam_splitter(&input, &split_vac, 0.5)?;
    let half2 = half2_raw.phase_shift(PI); // (input − vacuum)/√2

    let v1 = net.fresh_vacuum();
    let v2 = net.fresh_vacuum();
    let (beam_a, beam_b) = two_mode_squeezer(&v1, &v2, source_squeeze)?;

    // tap each half against one beam of the correlated pair
    let (c1, a1_raw) = beam_splitter(&half1, &beam_a, transmissivity)?;
    let a1 = a1_raw.phase_shift(PI);
    let beam_b_neg = beam_b.phase_shift(PI);
    let (c2, b1_raw) = beam_splitter(&half2, &beam_b_neg, transmissivity)?;
    let b1 = b1_raw.phase_shift(PI);

    // recombine the transmitted halves; the summed port keeps the signal and
    // cancels the splitting vacuum
    let (c_out, _spare) = beam_splitter(&c1, &c2, 0.5)?;

    // amplify the reflected halves in the matched two-mode amplifier
    let (a_out, b_out) = two_mode_squeezer(&a1, &b1, amp_squeeze)?;

    Ok(ThreeWayCircuit {
        input_obs: observe(&input, 0.0),
        a_out_obs: observe(&a_out, 0.0),
        b_out_obs: observe(&b_out, 0.0),
        c_out_obs: observe(&c_out, 0.0),
        a_out,
        b_out,
        c_out,
        splitter_vacuum,
    })
}

fn three_way_metrics(circuit: &ThreeWayCircuit, s_e: f64) -> Result<SchemeMetrics> {
    scheme_metrics(BuiltScheme {
        ports: vec![
            ("a_out".into(), circuit.a_out_obs.clone()),
            ("b_out".into(), circuit.b_out_obs.clone()),
            ("c_out".into(), circuit.c_out_obs.clone()),
        ],
        reference: circuit.input_obs.clone(),
        s_e: Some(s_e),
    })
}

/// Closed-form total transfer of the matched three-way splitter; kept as a
/// cross-check against the engine value.
fn three_way_closed_form(transmissivity: f64, squeeze: f64) -> f64 {
    let amp = (1.0 + squeeze * squeeze).sqrt();
    let sum_sq = (amp + squeeze) * (amp + squeeze);
    let t = transmissivity;
    t * sum_sq / (t * sum_sq + 1.0 - t)
        + sum_sq * (1.0 - t) / (2.0 * (1.0 - t) * squeeze * squeeze + 1.0)
}

/// Three-way splitter with the amplifier matched to the correlated source
/// (`G = μ`, `g = ν`): the input is halved against a vacuum, both halves are
/// tapped with transmissivity `T` against the source beams, the transmitted
/// halves recombine into the kept output and the reflected halves are
/// amplified into the two readouts.
pub fn scheme_three_way(transmissivity: f64, squeeze: f64, alpha: f64) -> Result<ThreeWayResult> {
    let circuit = build_three_way_circuit(transmissivity, squeeze, squeeze, alpha)?;
    let metrics = three_way_metrics(&circuit, effective_noise_reduction(squeeze))?;
    let amp_gain = (1.0 + squeeze * squeeze).sqrt();
    let t3_total = metrics.total_transfer;
    Ok(ThreeWayResult {
        transmissivity,
        squeeze,
        amp_gain,
        alpha,
        t3_total,
        t3_closed_form: three_way_closed_form(transmissivity, squeeze),
        t_op: squeeze / (amp_gain + 2.0 * squeeze),
        t3_max: 1.0 + 2.0 * squeeze / amp_gain,
        metrics,
    })
}

/// Mismatch study: three-way splitter with independent amplifier squeeze and
/// source squeeze. The closed-form cross-checks of [`scheme_three_way`] only
/// apply to the matched case, so this returns plain metrics.
pub fn scheme_three_way_general(
    transmissivity: f64,
    amp_squeeze: f64,
    source_squeeze: f64,
    alpha: f64,
) -> Result<SchemeMetrics> {
    let circuit = build_three_way_circuit(transmissivity, amp_squeeze, source_squeeze, alpha)?;
    three_way_metrics(&circuit, effective_noise_reduction(source_squeeze))
}

// ---------------------------------------------------------------------------
// Single-tap variant
// ---------------------------------------------------------------------------

fn build_single_tap(transmissivity: f64, squeeze: f64, alpha: f64) -> Result<BuiltScheme> {
    let mut net = Network::new();
    let input = net.coherent(real(alpha));
    let v1 = net.fresh_vacuum();
    let v2 = net.fresh_vacuum();
    let (beam_a, beam_b) = two_mode_squeezer(&v1, &v2, squeeze)?;

    // single tap: the whole input meets one source beam
    let (c1, a1_raw) = beam_splitter(&input, &beam_a, transmissivity)?;
    let a1 = a1_raw.phase_shift(PI);

    // the partner beam is split against a vacuum port; one output feeds the
    // amplifier, the other is detected for electronic subtraction
    let sub_vac = net.fresh_vacuum();
    let beam_b_neg = beam_b.phase_shift(PI);
    let (sub_arm, b1_raw) = beam_splitter(&sub_vac, &beam_b_neg, transmissivity)?;
    let b1 = b1_raw.phase_shift(PI);

    let (a_out, b_out) = two_mode_squeezer(&a1, &b1, squeeze)?;

    let c_raw = observe(&c1, 0.0);
    let sub_obs = observe(&sub_arm, 0.0);
    let gain = optimal_gain(&c_raw, &sub_obs)?;
    let c_port = combine(&[(&c_raw, 1.0), (&sub_obs, -gain)])?;

    Ok(BuiltScheme {
        ports: vec![
            ("a_out".into(), observe(&a_out, 0.0)),
            ("b_out".into(), observe(&b_out, 0.0)),
            ("c_out".into(), c_port),
        ],
        reference: observe(&input, 0.0),
        s_e: Some(effective_noise_reduction(squeeze)),
    })
}

/// Single-tap variant of the three-way splitter: the input meets one source
/// beam directly and the partner beam is split against a vacuum for the
/// subtraction arm. The vacuum entering that second splitter caps the total
/// transfer at 3/2.
pub fn scheme_three_way_single_tap(
    transmissivity: f64,
    squeeze: f64,
    alpha: f64,
) -> Result<SchemeMetrics> {
    scheme_metrics(build_single_tap(transmissivity, squeeze, alpha)?)
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// Nondemolition-measurement criteria of the matched three-way splitter:
/// input/output and input/readout correlations, readout agreement, and the
/// conditional variances of the kept output given one or both readouts.
pub fn qnd_report(transmissivity: f64, squeeze: f64, alpha: f64) -> Result<QndReport> {
    if !(transmissivity > 0.0 && transmissivity < 1.0) {
        return Err(Error::OutOfRange {
            name: "transmissivity",
            value: transmissivity,
            lo: 0.0,
            hi: 1.0,
        });
    }
    if squeeze <= 0.0 {
        return Err(Error::NonPositive {
            name: "squeeze",
            value: squeeze,
        });
    }
    let circuit = build_three_way_circuit(transmissivity, squeeze, squeeze, alpha)?;
    let c_in_c = correlation(&circuit.input_obs, &circuit.c_out_obs)?;
    let c_in_a = correlation(&circuit.input_obs, &circuit.a_out_obs)?;
    let c_in_b = correlation(&circuit.input_obs, &circuit.b_out_obs)?;
    let c_ab = correlation(&circuit.a_out_obs, &circuit.b_out_obs)?;
    let v_a = conditional_variance(&circuit.c_out_obs, &[&circuit.a_out_obs])?;
    let v_b = conditional_variance(&circuit.c_out_obs, &[&circuit.b_out_obs])?;
    let v_ab = conditional_variance(&circuit.c_out_obs, &[&circuit.a_out_obs, &circuit.b_out_obs])?;
    Ok(QndReport {
        c_in_c,
        c_in_a,
        c_in_b,
        c_ab,
        v_c_given_a: v_a.variance,
        v_c_given_b: v_b.variance,
        v_c_given_ab: v_ab.variance,
        sum_rule: c_in_a * c_in_a + c_in_b * c_in_b + c_in_c * c_in_c,
        sequential_ratio: v_ab.variance / v_a.variance,
    })
}

/// Reads how much of the input-splitting vacuum reaches each output of the
/// matched three-way splitter.
pub fn vacuum_leakage(transmissivity: f64, squeeze: f64) -> Result<LeakageReport> {
    let circuit = build_three_way_circuit(transmissivity, squeeze, squeeze, 0.0)?;
    let (ann, cre) = circuit.c_out.vacuum_coefficient(circuit.splitter_vacuum);
    let c_out_coefficient = (ann.norm_sqr() + cre.norm_sqr()).sqrt();
    // |f|^2 with f = c + d* is this vacuum's share of the X-quadrature noise
    let contribution = |mode: &FieldMode| -> f64 {
        let (c, d) = mode.vacuum_coefficient(circuit.splitter_vacuum);
        (c + d.conj()).norm_sqr()
    };
    Ok(LeakageReport {
        c_out_coefficient,
        a_out_contribution: contribution(&circuit.a_out),
        b_out_contribution: contribution(&circuit.b_out),
    })
}

/// Maximizes the three-way total transfer over the tap transmissivity with a
/// 1001-point grid pre-scan followed by golden-section refinement of the
/// bracketing interval down to 1e-10.
pub fn optimize_transmissivity(squeeze: f64) -> Result<TransmissivityOptimum> {
    if squeeze <= 0.0 {
        return Err(Error::NonPositive {
            name: "squeeze",
            value: squeeze,
        });
    }
    let eval = |t: f64| {
        scheme_three_way(t, squeeze, 1.0)
            .expect("three-way scheme with in-range parameters")
            .t3_total
    };

    let mut best_index = 0usize;
    let mut best = f64::NEG_INFINITY;
    for index in 0..=1000usize {
        let value = eval(index as f64 / 1000.0);
        if value > best {
            best = value;
            best_index = index;
        }
    }
    let mut lo = ((best_index as f64 - 1.0) / 1000.0).max(0.0);
    let mut hi = ((best_index as f64 + 1.0) / 1000.0).min(1.0);

    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    while hi - lo > 1e-10 {
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = eval(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = eval(x2);
        }
    }
    let t_op = 0.5 * (lo + hi);
    Ok(TransmissivityOptimum {
        t_op,
        t3_max: eval(t_op),
    })
}
