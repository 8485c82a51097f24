//! Intercept-resend eavesdropping on generalized BB84 and on B92.
//!
//! A single transmission is modelled as three stages:
//!
//! 1. Alice prepares a signal state, and the protocol fixes which outcome of
//!    Bob's measurement would expose an eavesdropper (the *detection state*).
//! 2. Eve, if present, measures and resends a state.
//! 3. Bob's measurement fires the detection outcome with Born probability.
//!
//! Detection events:
//!
//! - BB84: Alice and Bob use the same basis; detection is Bob reading the bit
//!   Alice did not send.
//! - B92: Alice sends `u_b` and Bob measures `P_{1−b} = 1 − |u_b⟩⟨u_b|`;
//!   detection is that conclusive outcome, which contradicts bit `b`.
//!
//! [`exact_enumeration`] multiplies out every branch. [`simulate`] samples the
//! same branches with a counter-based generator. Both are checked against the
//! closed forms `(N/2)(1 − N/2)` and `(N/4)(1 − N/2)` where `N` is the linear
//! nonorthogonality of the signal states.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::measures::n0;
use crate::qstate::{orthogonal_complement, overlap2, Basis2, PureState2};
use crate::{Error, Result};

/// Two orthonormal bases `{α↑, α↓}`, `{β↑, β↓}` with `|⟨α↑|β↑⟩|² = s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bb84Spec {
    s: f64,
}

impl Bb84Spec {
    pub fn new(s: f64) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::domain("overlap", s, "(0, 1)"));
        }
        Ok(Self { s })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn alpha_basis(&self) -> Basis2 {
        Basis2::computational()
    }

    /// `β↑ = √s|↑⟩ + √(1−s)|↓⟩`, `β↓ = √(1−s)|↑⟩ − √s|↓⟩`.
    pub fn beta_basis(&self) -> Basis2 {
        let up = PureState2::real_weighted(self.s).expect("s in (0, 1)");
        let down = PureState2::new((1.0 - self.s).sqrt().into(), (-self.s.sqrt()).into())
            .expect("normalized by construction");
        Basis2::new(up, down).expect("orthogonal by construction")
    }
}

/// Signal states `u₀ = |↑⟩` and `u₁ = √t|↑⟩ + √(1−t)|↓⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct B92Spec {
    t: f64,
}

impl B92Spec {
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::domain("overlap", t, "(0, 1)"));
        }
        Ok(Self { t })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn signal(&self, bit: usize) -> PureState2 {
        match bit {
            0 => PureState2::up(),
            _ => PureState2::real_weighted(self.t).expect("t in (0, 1)"),
        }
    }

    /// The state onto which `P_k = 1 − |u_{1−k}⟩⟨u_{1−k}|` projects. Its
    /// outcome excludes `u_{1−k}` and so identifies bit `k`.
    pub fn conclusive_state(&self, k: usize) -> PureState2 {
        orthogonal_complement(&self.signal(1 - k))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Protocol {
    Bb84(Bb84Spec),
    B92(B92Spec),
}

impl Protocol {
    pub fn name(&self) -> &'static str {
        match self {
            Protocol::Bb84(_) => "bb84",
            Protocol::B92(_) => "b92",
        }
    }

    /// `s` for BB84, `t` for B92.
    pub fn overlap(&self) -> f64 {
        match self {
            Protocol::Bb84(spec) => spec.s,
            Protocol::B92(spec) => spec.t,
        }
    }

    /// Builds a protocol from its name and signal overlap.
    pub fn parse(name: &str, overlap: f64) -> Result<Self> {
        match name {
            "bb84" => Ok(Protocol::Bb84(Bb84Spec::new(overlap)?)),
            "b92" => Ok(Protocol::B92(B92Spec::new(overlap)?)),
            other => Err(Error::Parse {
                what: "protocol",
                reason: format!("unknown protocol {other:?} (expected bb84 or b92)"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EveStrategy {
    None,
    /// Measure in one of the two signal bases, chosen uniformly; resend the
    /// eigenstate found.
    BasisIntercept,
    /// B92 only: measure `P₀` or `P₁`, chosen uniformly. A conclusive outcome
    /// resends the identified signal state, an inconclusive one resends the
    /// collapsed state.
    ProjectorIntercept,
}

impl EveStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            EveStrategy::None => "none",
            EveStrategy::BasisIntercept => "basis",
            EveStrategy::ProjectorIntercept => "projector",
        }
    }
}

impl fmt::Display for EveStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EveStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(EveStrategy::None),
            "basis" => Ok(EveStrategy::BasisIntercept),
            "projector" => Ok(EveStrategy::ProjectorIntercept),
            other => Err(Error::Parse {
                what: "eve strategy",
                reason: format!("unknown strategy {other:?} (expected none, basis or projector)"),
            }),
        }
    }
}

fn check_supported(protocol: &Protocol, eve: EveStrategy) -> Result<()> {
    if matches!(protocol, Protocol::Bb84(_)) && eve == EveStrategy::ProjectorIntercept {
        return Err(Error::Unsupported(
            "the projector intercept is defined for b92 only".into(),
        ));
    }
    Ok(())
}

/// Linear nonorthogonality of the four cross pairs
/// `(α↑,β↑), (α↑,β↓), (α↓,β↑), (α↓,β↓)`.
pub fn bb84_cross_nonortho(spec: &Bb84Spec) -> [f64; 4] {
    let a = spec.alpha_basis();
    let b = spec.beta_basis();
    [
        n0(a.b0(), b.b0()),
        n0(a.b0(), b.b1()),
        n0(a.b1(), b.b0()),
        n0(a.b1(), b.b1()),
    ]
}

/// `(Ñ/2)(1 − Ñ/2)` with `Ñ = n0(α↑, β↑)`.
pub fn bb84_detection_analytic(spec: &Bb84Spec) -> f64 {
    let n = n0(spec.alpha_basis().b0(), spec.beta_basis().b0());
    0.5 * n * (1.0 - 0.5 * n)
}

/// `(N̄/2)(1 − N̄/2)` for the basis intercept, `(N̄/4)(1 − N̄/2)` for the
/// projector intercept, 0 without Eve; `N̄ = n0(u₀, u₁)`.
pub fn b92_detection_analytic(spec: &B92Spec, eve: EveStrategy) -> f64 {
    let n = n0(&spec.signal(0), &spec.signal(1));
    match eve {
        EveStrategy::None => 0.0,
        EveStrategy::BasisIntercept => 0.5 * n * (1.0 - 0.5 * n),
        EveStrategy::ProjectorIntercept => 0.25 * n * (1.0 - 0.5 * n),
    }
}

/// Closed-form detection probability for any supported combination.
pub fn detection_analytic(protocol: &Protocol, eve: EveStrategy) -> Result<f64> {
    check_supported(protocol, eve)?;
    Ok(match (protocol, eve) {
        (_, EveStrategy::None) => 0.0,
        (Protocol::Bb84(spec), _) => bb84_detection_analytic(spec),
        (Protocol::B92(spec), eve) => b92_detection_analytic(spec, eve),
    })
}

/// One of Alice's equally likely preparations.
#[derive(Debug, Clone, Copy)]
struct Preparation {
    sent: PureState2,
    /// Bob's outcome that signals an eavesdropper.
    detect: PureState2,
}

fn preparations(protocol: &Protocol) -> Vec<Preparation> {
    match protocol {
        Protocol::Bb84(spec) => [spec.alpha_basis(), spec.beta_basis()]
            .iter()
            .flat_map(|b| {
                [
                    Preparation {
                        sent: *b.b0(),
                        detect: *b.b1(),
                    },
                    Preparation {
                        sent: *b.b1(),
                        detect: *b.b0(),
                    },
                ]
            })
            .collect(),
        Protocol::B92(spec) => (0..2)
            .map(|bit| Preparation {
                sent: spec.signal(bit),
                detect: spec.conclusive_state(1 - bit),
            })
            .collect(),
    }
}

/// Eve's equally likely measurement choices. Each is a list of
/// `(projector state, state resent on that outcome)` covering a complete
/// two-outcome measurement.
fn eve_measurements(protocol: &Protocol, eve: EveStrategy) -> Vec<[(PureState2, PureState2); 2]> {
    let by_basis = |b: Basis2| [(*b.b0(), *b.b0()), (*b.b1(), *b.b1())];
    match (eve, protocol) {
        (EveStrategy::None, _) => Vec::new(),
        (EveStrategy::BasisIntercept, Protocol::Bb84(spec)) => {
            vec![by_basis(spec.alpha_basis()), by_basis(spec.beta_basis())]
        }
        (EveStrategy::BasisIntercept, Protocol::B92(spec)) => vec![
            by_basis(Basis2::containing(spec.signal(0))),
            by_basis(Basis2::containing(spec.signal(1))),
        ],
        (EveStrategy::ProjectorIntercept, Protocol::B92(spec)) => (0..2)
            .map(|k| {
                let conclusive = spec.conclusive_state(k);
                let collapsed = orthogonal_complement(&conclusive);
                [(conclusive, spec.signal(k)), (collapsed, collapsed)]
            })
            .collect(),
        (EveStrategy::ProjectorIntercept, Protocol::Bb84(_)) => unreachable!("rejected earlier"),
    }
}

/// Probability of projecting `psi` onto `first` in a complete two-outcome
/// measurement whose other element is `second`. Normalizing by the pair sum
/// keeps the two outcomes summing to one in floating point.
fn outcome_prob(psi: &PureState2, first: &PureState2, second: &PureState2) -> f64 {
    let a = overlap2(psi, first);
    let b = overlap2(psi, second);
    a / (a + b)
}

/// Probability that Bob's measurement in the basis containing `detect` gives
/// the `detect` outcome.
fn detect_prob(received: &PureState2, detect: &PureState2) -> f64 {
    outcome_prob(received, detect, &orthogonal_complement(detect))
}

/// Exact single-transmission detection probability, summing over Alice's
/// preparation, Eve's choice, Eve's outcome and Bob's outcome.
pub fn exact_enumeration(protocol: &Protocol, eve: EveStrategy) -> Result<f64> {
    check_supported(protocol, eve)?;
    let preps = preparations(protocol);
    let eves = eve_measurements(protocol, eve);
    let w_prep = 1.0 / preps.len() as f64;
    let mut total = 0.0;
    for prep in &preps {
        if eves.is_empty() {
            total += w_prep * detect_prob(&prep.sent, &prep.detect);
            continue;
        }
        let w_eve = 1.0 / eves.len() as f64;
        for meas in &eves {
            for (k, (proj, resend)) in meas.iter().enumerate() {
                let p_outcome = outcome_prob(&prep.sent, proj, &meas[1 - k].0);
                total += w_prep * w_eve * p_outcome * detect_prob(resend, &prep.detect);
            }
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionStats {
    pub trials: u64,
    pub detections: u64,
    pub estimate: f64,
    /// `√(est(1 − est)/trials)`.
    pub stderr: f64,
    pub analytic: f64,
    pub zscore: f64,
}

impl DetectionStats {
    fn new(trials: u64, detections: u64, analytic: f64) -> Self {
        let n = trials as f64;
        let estimate = detections as f64 / n;
        let stderr = (estimate * (1.0 - estimate) / n).sqrt();
        let diff = estimate - analytic;
        // With a degenerate estimate (0 or 1) fall back to the analytic spread.
        let sigma = if stderr > 0.0 {
            stderr
        } else {
            (analytic * (1.0 - analytic) / n).sqrt()
        };
        let zscore = if diff == 0.0 { 0.0 } else { diff / sigma };
        Self {
            trials,
            detections,
            estimate,
            stderr,
            analytic,
            zscore,
        }
    }
}

const BLOCK: u64 = 1 << 14;

/// Key for the per-trial generators derived from the user seed.
fn base_key(seed: u64) -> [u8; 32] {
    ChaCha8Rng::seed_from_u64(seed).get_seed()
}

fn run_trial(
    key: [u8; 32],
    index: u64,
    preps: &[Preparation],
    eves: &[[(PureState2, PureState2); 2]],
) -> bool {
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    let prep = &preps[rng.random_range(0..preps.len())];
    let received = if eves.is_empty() {
        prep.sent
    } else {
        let meas = &eves[rng.random_range(0..eves.len())];
        let first = outcome_prob(&prep.sent, &meas[0].0, &meas[1].0);
        if rng.random::<f64>() < first {
            meas[0].1
        } else {
            meas[1].1
        }
    };
    rng.random::<f64>() < detect_prob(&received, &prep.detect)
}

/// Monte Carlo estimate of the detection probability.
///
/// Trial `i` draws from its own ChaCha8 stream `i` under a key derived from
/// `seed`, so the counts are identical however the work is split across the
/// current rayon pool.
pub fn simulate(
    protocol: &Protocol,
    eve: EveStrategy,
    trials: u64,
    seed: u64,
) -> Result<DetectionStats> {
    check_supported(protocol, eve)?;
    if trials == 0 {
        return Err(Error::domain("trials", 0.0, "[1, ∞)"));
    }
    let analytic = detection_analytic(protocol, eve)?;
    let preps = preparations(protocol);
    let eves = eve_measurements(protocol, eve);
    let key = base_key(seed);
    let blocks = trials.div_ceil(BLOCK);
    let detections: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * BLOCK;
            let hi = (lo + BLOCK).min(trials);
            (lo..hi)
                .filter(|&i| run_trial(key, i, &preps, &eves))
                .count() as u64
        })
        .sum();
    Ok(DetectionStats::new(trials, detections, analytic))
}

/// JSON record of a detection-probability run. Monte Carlo fields are `null`
/// for exact enumeration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionRecord {
    pub protocol: String,
    pub s_or_t: f64,
    pub eve: String,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub detections: Option<u64>,
    pub estimate: f64,
    pub stderr: f64,
    pub analytic: f64,
    pub zscore: Option<f64>,
}

impl DetectionRecord {
    pub fn from_simulation(
        protocol: &Protocol,
        eve: EveStrategy,
        seed: u64,
        stats: &DetectionStats,
    ) -> Self {
        use crate::fmt::sig12;
        Self {
            protocol: protocol.name().into(),
            s_or_t: sig12(protocol.overlap()),
            eve: eve.name().into(),
            trials: Some(stats.trials),
            seed: Some(seed),
            detections: Some(stats.detections),
            estimate: sig12(stats.estimate),
            stderr: sig12(stats.stderr),
            analytic: sig12(stats.analytic),
            zscore: Some(sig12(stats.zscore)),
        }
    }

    pub fn from_exact(protocol: &Protocol, eve: EveStrategy) -> Result<Self> {
        use crate::fmt::sig12;
        Ok(Self {
            protocol: protocol.name().into(),
            s_or_t: sig12(protocol.overlap()),
            eve: eve.name().into(),
            trials: None,
            seed: None,
            detections: None,
            estimate: sig12(exact_enumeration(protocol, eve)?),
            stderr: 0.0,
            analytic: sig12(detection_analytic(protocol, eve)?),
            zscore: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn bb84(s: f64) -> Protocol {
        Protocol::Bb84(Bb84Spec::new(s).unwrap())
    }

    fn b92(t: f64) -> Protocol {
        Protocol::B92(B92Spec::new(t).unwrap())
    }

    #[test]
    fn specs_validate_overlap() {
        for bad in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(Bb84Spec::new(bad).is_err());
            assert!(B92Spec::new(bad).is_err());
        }
    }

    #[test]
    fn bb84_bases_are_orthonormal_with_requested_overlap() {
        let spec = Bb84Spec::new(0.3).unwrap();
        let (a, b) = (spec.alpha_basis(), spec.beta_basis());
        assert_abs_diff_eq!(overlap2(a.b0(), b.b0()), 0.3, epsilon = 1e-15);
        assert!(overlap2(b.b0(), b.b1()) <= 1e-30);
    }

    #[test]
    fn b92_projectors_are_rank_one_complements() {
        let spec = B92Spec::new(0.3).unwrap();
        // P₀ annihilates u₁, P₁ annihilates u₀
        assert!(overlap2(&spec.conclusive_state(0), &spec.signal(1)) <= 1e-30);
        assert!(overlap2(&spec.conclusive_state(1), &spec.signal(0)) <= 1e-30);
    }

    #[test]
    fn cross_nonortho_examples() {
        assert!(bb84_cross_nonortho(&Bb84Spec::new(0.5).unwrap())
            .iter()
            .all(|&v| (v - 1.0).abs() <= 1e-12));
        assert!(bb84_cross_nonortho(&Bb84Spec::new(0.9).unwrap())
            .iter()
            .all(|&v| (v - 0.2).abs() <= 1e-12));
        assert!(bb84_cross_nonortho(&Bb84Spec::new(1.0 - 1e-12).unwrap())
            .iter()
            .all(|&v| v.abs() <= 1e-11));
    }

    #[test]
    fn analytic_examples() {
        assert_abs_diff_eq!(
            bb84_detection_analytic(&Bb84Spec::new(0.5).unwrap()),
            0.25,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            bb84_detection_analytic(&Bb84Spec::new(0.9).unwrap()),
            0.09,
            epsilon = 1e-12
        );
        assert!(bb84_detection_analytic(&Bb84Spec::new(1e-12).unwrap()) <= 1e-11);
        let s = B92Spec::new(0.5).unwrap();
        assert_abs_diff_eq!(
            b92_detection_analytic(&s, EveStrategy::BasisIntercept),
            0.25,
            epsilon = 1e-15
        );
        let s = B92Spec::new(0.1).unwrap();
        assert_abs_diff_eq!(
            b92_detection_analytic(&s, EveStrategy::ProjectorIntercept),
            0.045,
            epsilon = 1e-12
        );
        assert_eq!(b92_detection_analytic(&s, EveStrategy::None), 0.0);
    }

    #[test]
    fn enumeration_examples() {
        // √(1/2) is irrational, so allow two ulps
        let e = exact_enumeration(&bb84(0.5), EveStrategy::BasisIntercept).unwrap();
        assert_eq!(e, 0.25);
        assert_abs_diff_eq!(
            exact_enumeration(&bb84(0.7), EveStrategy::BasisIntercept).unwrap(),
            0.21,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            exact_enumeration(&b92(0.3), EveStrategy::ProjectorIntercept).unwrap(),
            0.105,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            exact_enumeration(&b92(0.5), EveStrategy::BasisIntercept).unwrap(),
            0.25,
            epsilon = 1e-12
        );
        for p in [bb84(0.4), b92(0.4)] {
            assert_eq!(exact_enumeration(&p, EveStrategy::None).unwrap(), 0.0);
        }
    }

    #[test]
    fn projector_intercept_rejected_for_bb84() {
        let p = bb84(0.5);
        assert!(matches!(
            exact_enumeration(&p, EveStrategy::ProjectorIntercept),
            Err(Error::Unsupported(_))
        ));
        assert!(simulate(&p, EveStrategy::ProjectorIntercept, 10, 1).is_err());
    }

    #[test]
    fn simulate_without_eve_never_detects() {
        for p in [bb84(0.37), b92(0.81)] {
            let st = simulate(&p, EveStrategy::None, 20_000, 3).unwrap();
            assert_eq!(st.detections, 0);
            assert_eq!(st.zscore, 0.0);
        }
    }

    #[test]
    fn simulate_rejects_zero_trials() {
        assert!(matches!(
            simulate(&bb84(0.5), EveStrategy::BasisIntercept, 0, 1),
            Err(Error::Domain {
                param: "trials",
                ..
            })
        ));
    }

    #[test]
    fn simulate_is_thread_count_independent() {
        let p = b92(0.2);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| simulate(&p, EveStrategy::ProjectorIntercept, 100_003, 11).unwrap())
        };
        assert_eq!(run(1), run(4));
        let other_seed = simulate(&p, EveStrategy::ProjectorIntercept, 100_003, 12).unwrap();
        assert_ne!(run(2).detections, other_seed.detections);
    }

    #[test]
    fn simulate_matches_analytic() {
        let st = simulate(&bb84(0.8), EveStrategy::BasisIntercept, 200_000, 5).unwrap();
        assert!(st.zscore.abs() <= 4.0, "{st:?}");
        assert_abs_diff_eq!(st.analytic, 0.16, epsilon = 1e-12);
    }

    #[test]
    fn record_round_trips_through_json() {
        let p = b92(0.1);
        let st = simulate(&p, EveStrategy::BasisIntercept, 1000, 7).unwrap();
        let rec = DetectionRecord::from_simulation(&p, EveStrategy::BasisIntercept, 7, &st);
        let json = serde_json::to_string(&rec).unwrap();
        let back: DetectionRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rec);
        let exact = DetectionRecord::from_exact(&p, EveStrategy::BasisIntercept).unwrap();
        let v: serde_json::Value = serde_json::to_value(&exact).unwrap();
        assert!(v["trials"].is_null() && v["zscore"].is_null());
        assert_eq!(v["analytic"], 0.09);
    }

    #[test]
    fn strategy_names_round_trip() {
        for e in [
            EveStrategy::None,
            EveStrategy::BasisIntercept,
            EveStrategy::ProjectorIntercept,
        ] {
            assert_eq!(e.name().parse::<EveStrategy>().unwrap(), e);
        }
        assert!("sometimes".parse::<EveStrategy>().is_err());
        assert!(Protocol::parse("e91", 0.5).is_err());
    }

    proptest! {
        #[test]
        fn enumeration_matches_closed_forms(x in 1e-6f64..1.0 - 1e-6) {
            let e = exact_enumeration(&bb84(x), EveStrategy::BasisIntercept).unwrap();
            prop_assert!((e - x * (1.0 - x)).abs() <= 1e-12);
            let basis = exact_enumeration(&b92(x), EveStrategy::BasisIntercept).unwrap();
            let proj = exact_enumeration(&b92(x), EveStrategy::ProjectorIntercept).unwrap();
            prop_assert!((proj - 0.5 * basis).abs() <= 1e-12);
        }

        #[test]
        fn detection_symmetric_under_complement(x in 1e-6f64..1.0 - 1e-6) {
            for eve in [EveStrategy::BasisIntercept, EveStrategy::ProjectorIntercept] {
                let a = exact_enumeration(&b92(x), eve).unwrap();
                let b = exact_enumeration(&b92(1.0 - x), eve).unwrap();
                prop_assert!((a - b).abs() <= 1e-12);
            }
            let a = exact_enumeration(&bb84(x), EveStrategy::BasisIntercept).unwrap();
            let b = exact_enumeration(&bb84(1.0 - x), EveStrategy::BasisIntercept).unwrap();
            prop_assert!((a - b).abs() <= 1e-12);
        }

        #[test]
        fn cross_pairs_equal(s in 1e-6f64..1.0 - 1e-6) {
            let v = bb84_cross_nonortho(&Bb84Spec::new(s).unwrap());
            prop_assert!(v.iter().all(|&x| (x - v[0]).abs() <= 1e-12));
        }
    }
}
