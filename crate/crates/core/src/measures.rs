//! Nonorthogonality measures for pairs of pure qubit states, and the Schmidt
//! entropy of bipartite pure states.
//!
//! All three pair measures depend on the states only through `s = |⟨ψ₂|ψ₁⟩|²`:
//!
//! - `n0 = 1 − 2|s − 1/2|`, twice the error probability of discriminating one
//!   state in a basis containing the other;
//! - `n1 = h(s)`, the binary entropy of that measurement;
//! - `n2`, the least total outcome entropy produced by measuring both states
//!   in one common basis.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::qstate::{
    from_bloch, measure_in_basis, overlap2, Basis2, Density2, PureState2, NORM_TOL, RENORM_LIMIT,
};
use crate::{Error, Result};

/// Binary Shannon entropy in bits, with `0·log₂0 = 0`.
///
/// Arguments within 1e−12 outside `[0, 1]` are clamped; anything further out is
/// a domain error.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-NORM_TOL..=1.0 + NORM_TOL).contains(&x) {
        return Err(Error::domain("x", x, "[0, 1]"));
    }
    Ok(entropy_unchecked(x.clamp(0.0, 1.0)))
}

#[inline]
fn entropy_unchecked(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -(x * x.log2() + (1.0 - x) * (1.0 - x).log2())
}

/// Linear measure `1 − 2|s − 1/2|`.
pub fn n0(psi1: &PureState2, psi2: &PureState2) -> f64 {
    n0_from_overlap(overlap2(psi1, psi2))
}

pub fn n0_from_overlap(s: f64) -> f64 {
    1.0 - 2.0 * (s - 0.5).abs()
}

/// Entropic measure `h(s)`.
pub fn n1(psi1: &PureState2, psi2: &PureState2) -> f64 {
    entropy_unchecked(overlap2(psi1, psi2))
}

/// Outcome entropy of measuring `x` in basis `b`.
pub fn selective_info(x: &PureState2, b: &Basis2) -> f64 {
    let (p0, _) = measure_in_basis(x, b);
    entropy_unchecked(p0)
}

/// Search parameters for [`n2`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct N2SearchConfig {
    /// Grid points in `θ ∈ [0, π]`, endpoints included.
    pub theta_steps: usize,
    /// Grid points in `φ ∈ [0, 2π)`.
    pub phi_steps: usize,
    /// Number of step halvings in the local refinement.
    pub refine_iters: usize,
    /// Objective change below which the final refinement round counts as converged.
    pub tolerance: f64,
}

impl Default for N2SearchConfig {
    fn default() -> Self {
        Self {
            theta_steps: 256,
            phi_steps: 256,
            refine_iters: 40,
            tolerance: 1e-10,
        }
    }
}

impl N2SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.theta_steps < 64 || self.phi_steps < 64 {
            return Err(Error::Config(format!(
                "n2 grid resolution must be at least 64 per angle (got {}×{})",
                self.theta_steps, self.phi_steps
            )));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::Config(format!(
                "n2 tolerance must be positive (got {})",
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// Outcome of the [`n2`] search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct N2Result {
    /// Minimum summed selective information over both states, in bits.
    pub value: f64,
    /// Bloch angles of the minimizing basis vector `b0`.
    pub theta: f64,
    pub phi: f64,
    /// Best value on the coarse grid, before refinement.
    pub grid_value: f64,
    pub converged: bool,
}

impl N2Result {
    /// Per-state average, `value / 2`.
    pub fn average(&self) -> f64 {
        0.5 * self.value
    }
}

/// `selective_info(ψ₁, b) + selective_info(ψ₂, b)` for `b0 = from_bloch(θ, φ)`.
pub fn n2_objective(psi1: &PureState2, psi2: &PureState2, theta: f64, phi: f64) -> f64 {
    let b = Basis2::containing(from_bloch(theta, phi));
    selective_info(psi1, &b) + selective_info(psi2, &b)
}

/// Exhaustive grid minimum of [`n2_objective`]: `(value, θ, φ)`.
///
/// Ties resolve to the smallest `(θ, φ)` in lexicographic order, independent of
/// how the rows are split across threads.
pub fn n2_grid(
    psi1: &PureState2,
    psi2: &PureState2,
    theta_steps: usize,
    phi_steps: usize,
) -> (f64, f64, f64) {
    let theta_at = |k: usize| PI * k as f64 / (theta_steps - 1) as f64;
    let phi_at = |l: usize| 2.0 * PI * l as f64 / phi_steps as f64;
    let (value, k, l) = (0..theta_steps)
        .into_par_iter()
        .map(|k| {
            let theta = theta_at(k);
            let mut best = (f64::INFINITY, k, 0);
            for l in 0..phi_steps {
                let v = n2_objective(psi1, psi2, theta, phi_at(l));
                if v < best.0 {
                    best = (v, k, l);
                }
            }
            best
        })
        .reduce(
            || (f64::INFINITY, usize::MAX, usize::MAX),
            |a, b| {
                if b.0 < a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
                    b
                } else {
                    a
                }
            },
        );
    (value, theta_at(k), phi_at(l))
}

fn bloch_angles(x: &PureState2) -> (f64, f64) {
    let theta = 2.0 * x.a_down().norm().atan2(x.a_up().norm());
    let phi = x.a_down().arg() - x.a_up().arg();
    (theta, phi)
}

/// Compass search on `(θ, φ)` with step halving. Returns the final point, its
/// value, and the objective decrease achieved in the last round.
fn refine(
    f: &impl Fn(f64, f64) -> f64,
    start: (f64, f64),
    step0: f64,
    halvings: usize,
) -> ((f64, f64), f64, f64) {
    const MAX_MOVES_PER_ROUND: usize = 10_000;
    let (mut theta, mut phi) = start;
    let mut value = f(theta, phi);
    let mut step = step0;
    let mut last_gain = f64::INFINITY;
    for _ in 0..halvings {
        let round_start = value;
        for _ in 0..MAX_MOVES_PER_ROUND {
            let candidates = [
                (theta + step, phi),
                (theta - step, phi),
                (theta, phi + step),
                (theta, phi - step),
            ];
            let mut moved = false;
            for (t, p) in candidates {
                let v = f(t, p);
                if v < value {
                    value = v;
                    theta = t;
                    phi = p;
                    moved = true;
                    break;
                }
            }
            if !moved {
                break;
            }
        }
        last_gain = round_start - value;
        step *= 0.5;
    }
    ((theta, phi), value, last_gain)
}

/// Minimum total selective information of `ψ₁` and `ψ₂` over a single
/// projective qubit basis.
///
/// A coarse `(θ, φ)` grid locates the basin; compass search refines from the
/// grid winner and from the two aligned bases `b0 = ψ₁`, `b0 = ψ₂` (whose value
/// is exactly `n1`), keeping the best. If the final round still moved the
/// objective by more than the tolerance the result is returned with
/// `converged = false`.
pub fn n2(psi1: &PureState2, psi2: &PureState2, cfg: &N2SearchConfig) -> Result<N2Result> {
    cfg.validate()?;
    let f = |t: f64, p: f64| n2_objective(psi1, psi2, t, p);
    let (grid_value, gt, gp) = n2_grid(psi1, psi2, cfg.theta_steps, cfg.phi_steps);
    let step0 = PI / (cfg.theta_steps - 1) as f64;

    let starts = [(gt, gp), bloch_angles(psi1), bloch_angles(psi2)];
    let mut best: Option<((f64, f64), f64, f64)> = None;
    for start in starts {
        let cand = refine(&f, start, step0, cfg.refine_iters);
        if best.is_none_or(|b| cand.1 < b.1) {
            best = Some(cand);
        }
    }
    let ((theta, phi), value, last_gain) = best.expect("at least one start");
    Ok(N2Result {
        value,
        theta,
        phi,
        grid_value,
        converged: last_gain <= cfg.tolerance,
    })
}

/// A bipartite pure state given by its `d₁ × d₂` amplitude matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    amps: DMatrix<Complex64>,
}

impl BipartiteState {
    /// `amps[i][j]` is the amplitude of `|i⟩|j⟩`. Normalization follows the
    /// same accept / renormalize / reject policy as [`PureState2::new`].
    pub fn new(amps: DMatrix<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Config("empty amplitude matrix".into()));
        }
        if amps.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("bipartite amplitudes"));
        }
        let norm_sq: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        let dev = (norm_sq - 1.0).abs();
        if dev <= NORM_TOL {
            Ok(Self { amps })
        } else if dev <= RENORM_LIMIT {
            let n = norm_sq.sqrt();
            Ok(Self {
                amps: amps.map(|c| c / n),
            })
        } else {
            Err(Error::NotNormalized { norm_sq })
        }
    }

    pub fn from_rows<const C: usize>(rows: &[[Complex64; C]]) -> Result<Self> {
        let m = DMatrix::from_fn(rows.len(), C, |i, j| rows[i][j]);
        Self::new(m)
    }

    /// `|a⟩ ⊗ |b⟩`.
    pub fn product(a: &PureState2, b: &PureState2) -> Self {
        let va = [a.a_up(), a.a_down()];
        let vb = [b.a_up(), b.a_down()];
        Self {
            amps: DMatrix::from_fn(2, 2, |i, j| va[i] * vb[j]),
        }
    }

    pub fn amplitudes(&self) -> &DMatrix<Complex64> {
        &self.amps
    }

    /// Squared Schmidt coefficients, descending.
    pub fn schmidt_weights(&self) -> Vec<f64> {
        let sv = self.amps.clone().svd(false, false).singular_values;
        let mut w: Vec<f64> = sv.iter().map(|s| s * s).collect();
        w.sort_by(|a, b| b.total_cmp(a));
        w
    }

    /// Reduced density matrix of subsystem 1, `A·A†`. Requires `d₁ = 2`.
    pub fn reduced_first(&self) -> Result<Density2> {
        if self.amps.nrows() != 2 {
            return Err(Error::Unsupported(format!(
                "reduced qubit state needs d1 = 2 (got {})",
                self.amps.nrows()
            )));
        }
        let r = &self.amps * self.amps.adjoint();
        Ok(Density2::from_entries_unchecked([
            [r[(0, 0)], r[(0, 1)]],
            [r[(1, 0)], r[(1, 1)]],
        ]))
    }
}

/// Entanglement entropy `ξ = −Σ σᵢ² log₂ σᵢ²` over the Schmidt coefficients.
pub fn schmidt_xi(s: &BipartiteState) -> f64 {
    s.schmidt_weights()
        .into_iter()
        .filter(|&w| w > 0.0)
        .map(|w| -w * w.log2())
        .sum::<f64>()
        .max(0.0)
}

/// The local Schmidt basis of subsystem 1 (eigenbasis of its reduced state).
pub fn schmidt_basis(s: &BipartiteState) -> Result<Basis2> {
    Ok(s.reduced_first()?.eigen().1)
}

/// Outcome entropy of measuring subsystem 1 of `s` in basis `b`.
pub fn local_measurement_entropy(s: &BipartiteState, b: &Basis2) -> Result<f64> {
    let rho = s.reduced_first()?;
    Ok(entropy_unchecked(rho.expectation(b.b0()).clamp(0.0, 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::orthogonal_complement;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    // Reference values from a 40-digit mpmath evaluation of the binary entropy.
    const H_025: f64 = 0.811_278_124_459_132_9;
    const H_09: f64 = 0.468_995_593_589_281_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_abs_diff_eq!(binary_entropy(0.25).unwrap(), H_025, epsilon = 1e-15);
        assert_eq!(binary_entropy(1.0 + 5e-13).unwrap(), 0.0);
        assert!(binary_entropy(-1e-6).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn n0_examples() {
        let plus = from_bloch(PI / 2.0, 0.0);
        assert_abs_diff_eq!(n0(&plus, &PureState2::up()), 1.0, epsilon = 1e-15);
        assert_eq!(n0(&PureState2::up(), &PureState2::down()), 0.0);
        assert_eq!(n0(&plus, &plus), 0.0);
        let s = PureState2::real_weighted(0.9).unwrap();
        let v = n0(&s, &PureState2::up());
        assert_abs_diff_eq!(v, 0.2, epsilon = 1e-12);
        // error-probability reading: twice the smaller outcome probability
        assert_abs_diff_eq!(v, 2.0 * f64::min(0.9, 0.1), epsilon = 1e-12);
    }

    #[test]
    fn n1_examples() {
        let plus = from_bloch(PI / 2.0, 0.0);
        assert_abs_diff_eq!(n1(&plus, &PureState2::up()), 1.0, epsilon = 1e-15);
        assert_eq!(n1(&PureState2::up(), &PureState2::down()), 0.0);
        assert_eq!(n1(&PureState2::up(), &PureState2::up()), 0.0);
        let s = PureState2::real_weighted(0.25).unwrap();
        assert_abs_diff_eq!(n1(&s, &PureState2::up()), H_025, epsilon = 1e-6);
    }

    #[test]
    fn selective_info_examples() {
        let b = Basis2::computational();
        assert_eq!(selective_info(&PureState2::up(), &b), 0.0);
        assert_abs_diff_eq!(
            selective_info(&from_bloch(PI / 2.0, 1.0), &b),
            1.0,
            epsilon = 1e-15
        );
        let x = PureState2::real_weighted(0.25).unwrap();
        assert_abs_diff_eq!(selective_info(&x, &b), H_025, epsilon = 1e-12);
    }

    #[test]
    fn n2_trivial_pairs() {
        let cfg = N2SearchConfig::default();
        let psi = from_bloch(0.7, 2.1);
        let r = n2(&psi, &psi.with_phase(0.4), &cfg).unwrap();
        assert!(r.value <= 1e-9, "{r:?}");
        let r = n2(&psi, &orthogonal_complement(&psi), &cfg).unwrap();
        assert!(r.value <= 1e-9, "{r:?}");
        assert!(r.converged);
    }

    #[test]
    fn n2_at_half_overlap_is_the_aligned_value() {
        let plus = from_bloch(PI / 2.0, 0.3);
        let up = PureState2::up();
        let r = n2(&plus, &up, &N2SearchConfig::default()).unwrap();
        assert!((0.99..=1.0 + 1e-12).contains(&r.value), "{r:?}");
        assert!(r.value <= r.grid_value);
        assert_abs_diff_eq!(r.average(), r.value / 2.0);
    }

    #[test]
    fn n2_config_validation() {
        let bad = N2SearchConfig {
            theta_steps: 32,
            ..Default::default()
        };
        assert!(matches!(bad.validate(), Err(Error::Config(_))));
        let bad = N2SearchConfig {
            tolerance: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn xi_examples() {
        let prod = BipartiteState::product(&from_bloch(0.3, 0.2), &from_bloch(2.0, -1.0));
        assert_abs_diff_eq!(schmidt_xi(&prod), 0.0, epsilon = 1e-12);
        let bell =
            BipartiteState::from_rows(&[[c(FRAC_1_SQRT_2), c(0.0)], [c(0.0), c(FRAC_1_SQRT_2)]])
                .unwrap();
        assert_abs_diff_eq!(schmidt_xi(&bell), 1.0, epsilon = 1e-12);
        let s =
            BipartiteState::from_rows(&[[c(0.9f64.sqrt()), c(0.0)], [c(0.0), c(0.1f64.sqrt())]])
                .unwrap();
        assert_abs_diff_eq!(schmidt_xi(&s), H_09, epsilon = 1e-12);
    }

    #[test]
    fn xi_for_qutrit_partner() {
        // √0.5|0,0⟩ + √0.3|1,1⟩ + √0.2|1,2⟩: reduced spectrum on qubit 1 is (0.5, 0.5).
        let s = BipartiteState::from_rows(&[
            [c(0.5f64.sqrt()), c(0.0), c(0.0)],
            [c(0.0), c(0.3f64.sqrt()), c(0.2f64.sqrt())],
        ])
        .unwrap();
        assert_abs_diff_eq!(schmidt_xi(&s), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn local_entropy_examples() {
        let s =
            BipartiteState::from_rows(&[[c(0.9f64.sqrt()), c(0.0)], [c(0.0), c(0.1f64.sqrt())]])
                .unwrap();
        let sb = schmidt_basis(&s).unwrap();
        assert_abs_diff_eq!(
            local_measurement_entropy(&s, &sb).unwrap(),
            schmidt_xi(&s),
            epsilon = 1e-12
        );
        let rotated = Basis2::containing(from_bloch(PI / 2.0, 0.0));
        assert_abs_diff_eq!(
            local_measurement_entropy(&s, &rotated).unwrap(),
            1.0,
            epsilon = 1e-12
        );

        let a = from_bloch(1.0, 0.5);
        let prod = BipartiteState::product(&a, &PureState2::down());
        let aligned = Basis2::containing(a);
        assert!(local_measurement_entropy(&prod, &aligned).unwrap() <= 1e-12);
        assert!(local_measurement_entropy(&prod, &Basis2::computational()).unwrap() >= 0.0);
    }

    #[test]
    fn local_entropy_needs_qubit_first_factor() {
        let s = BipartiteState::new(DMatrix::from_element(3, 1, c(1.0 / 3f64.sqrt()))).unwrap();
        assert!(local_measurement_entropy(&s, &Basis2::computational()).is_err());
        assert_abs_diff_eq!(schmidt_xi(&s), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn bipartite_rejects_unnormalized() {
        assert!(matches!(
            BipartiteState::from_rows(&[[c(1.0), c(1.0)]]),
            Err(Error::NotNormalized { .. })
        ));
    }

    proptest! {
        #[test]
        fn entropy_symmetric(x in 0.0f64..=1.0) {
            let a = binary_entropy(x).unwrap();
            let b = binary_entropy(1.0 - x).unwrap();
            prop_assert!((a - b).abs() <= 1e-12);
        }

        #[test]
        fn n0_n1_depend_only_on_overlap(
            t1 in 0.0..PI, p1 in 0.0..2.0*PI, t2 in 0.0..PI, p2 in 0.0..2.0*PI, g in -PI..PI
        ) {
            let x = from_bloch(t1, p1);
            let y = from_bloch(t2, p2);
            let s = overlap2(&x, &y);
            // a different pair realizing the same overlap
            let u = PureState2::up();
            let v = PureState2::real_weighted(s).unwrap();
            prop_assert!((n0(&x, &y) - n0(&u, &v)).abs() <= 1e-12);
            prop_assert!((n1(&x, &y) - n1(&u, &v)).abs() <= 1e-12);
            prop_assert!((n0(&x, &y) - n0(&y, &x.with_phase(g))).abs() <= 1e-12);
            prop_assert!((n1(&x, &y) - n1(&y, &x.with_phase(g))).abs() <= 1e-12);
        }
    }
}
