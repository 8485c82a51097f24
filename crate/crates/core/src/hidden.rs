//! Two-state nonorthogonal preparations of `ρ = diag(p, 1 − p)`.
//!
//! Every such preparation is `ρ = z|φ₁⟩⟨φ₁| + (1 − z)|φ₂⟩⟨φ₂|` with
//!
//! ```text
//! |φ₁⟩ = z^{-1/2}     (√p α |↑⟩ + √(1−p) β* |↓⟩)
//! |φ₂⟩ = (1−z)^{-1/2} (√p β |↑⟩ − √(1−p) α* |↓⟩)
//! z    = 2p|α|² + 1 − p − |α|²
//! ```
//!
//! for complex `|α|² + |β|² = 1`. With the conventions `p ≥ 1/2`, `|α|² ≥ 1/2`
//! the weight satisfies `1/2 ≤ z ≤ p`, and everything below is a function of
//! `(p, z)` alone through the ratio `Q = p(1−p) / (z(1−z))`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::measures::n0_from_overlap;
use crate::qstate::{
    density_from_p, orthogonal_complement, overlap2, Density2, DiagonalDensity, PureState2,
    NORM_TOL, RENORM_LIMIT,
};
use crate::{Error, Result};

/// `p̃ = (1 + √2/2) / 2`, the only `p` whose state is a 50/50 mixture of two
/// states with squared overlap 1/2.
pub const IDEAL_P: f64 = 0.5 * (1.0 + FRAC_1_SQRT_2);

/// Agreement required between the direct and branch-wise ensemble formulas.
const BRANCH_TOL: f64 = 1e-12;

/// The amplitudes `(α, β)` selecting one decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionParams {
    alpha: Complex64,
    beta: Complex64,
}

impl DecompositionParams {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        if ![alpha.re, alpha.im, beta.re, beta.im]
            .iter()
            .all(|x| x.is_finite())
        {
            return Err(Error::NonFinite("decomposition parameters"));
        }
        let norm_sq = alpha.norm_sqr() + beta.norm_sqr();
        let dev = (norm_sq - 1.0).abs();
        let (alpha, beta) = if dev <= NORM_TOL {
            (alpha, beta)
        } else if dev <= RENORM_LIMIT {
            let n = norm_sq.sqrt();
            (alpha / n, beta / n)
        } else {
            return Err(Error::NotNormalized { norm_sq });
        };
        if alpha.norm_sqr() < 0.5 - NORM_TOL {
            return Err(Error::domain("|alpha|^2", alpha.norm_sqr(), "[1/2, 1]"));
        }
        Ok(Self { alpha, beta })
    }

    /// `α = √a e^{iφα}`, `β = √(1−a) e^{iφβ}`.
    pub fn from_alpha_sq(alpha_sq: f64, alpha_phase: f64, beta_phase: f64) -> Result<Self> {
        if !(0.5..=1.0).contains(&alpha_sq) {
            return Err(Error::domain("|alpha|^2", alpha_sq, "[1/2, 1]"));
        }
        Self::new(
            Complex64::from_polar(alpha_sq.sqrt(), alpha_phase),
            Complex64::from_polar((1.0 - alpha_sq).sqrt(), beta_phase),
        )
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn alpha_sq(&self) -> f64 {
        self.alpha.norm_sqr().clamp(0.5, 1.0)
    }
}

/// A concrete two-state preparation of `diag(p, 1 − p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    pub z: f64,
    pub phi1: PureState2,
    pub phi2: PureState2,
    pub source_p: f64,
}

impl Decomposition {
    /// `z|φ₁⟩⟨φ₁| + (1 − z)|φ₂⟩⟨φ₂|`.
    pub fn mixture(&self) -> Density2 {
        Density2::mixture(&[(self.z, self.phi1), (1.0 - self.z, self.phi2)])
    }

    /// Largest entrywise deviation of the mixture from `diag(p, 1 − p)`.
    pub fn reconstruction_error(&self) -> f64 {
        let target = DiagonalDensity::matrix(&density_from_p(self.source_p).expect("validated p"));
        self.mixture().max_abs_diff(&target)
    }

    pub fn overlap2(&self) -> f64 {
        overlap2(&self.phi1, &self.phi2)
    }
}

fn check_p(p: f64) -> Result<()> {
    density_from_p(p).map(|_| ())
}

/// Validates `1/2 ≤ z ≤ p` (1e−12 slack for rounded weights) and clamps.
fn check_pz(p: f64, z: f64) -> Result<f64> {
    check_p(p)?;
    if !(z >= 0.5 - NORM_TOL && z <= p + NORM_TOL) {
        return Err(Error::domain("z", z, "[1/2, p]"));
    }
    Ok(z.clamp(0.5, p))
}

/// `Q = p(1−p) / (z(1−z))`; the pure endpoint `p = z = 1` is taken as `Q = 1`
/// (orthogonal limit).
fn q_ratio(p: f64, z: f64) -> f64 {
    let zz = z * (1.0 - z);
    if zz == 0.0 {
        return 1.0;
    }
    (p * (1.0 - p) / zz).clamp(0.0, 1.0)
}

/// `z = 2p|α|² + 1 − p − |α|²`.
pub fn z_of_alpha(p: f64, alpha_sq: f64) -> Result<f64> {
    check_p(p)?;
    if !(0.5 - NORM_TOL..=1.0 + NORM_TOL).contains(&alpha_sq) {
        return Err(Error::domain("|alpha|^2", alpha_sq, "[1/2, 1]"));
    }
    let a = alpha_sq.clamp(0.5, 1.0);
    // p·a + (1−p)(1−a) is the same polynomial, exact at a = 1/2 and a = 1
    Ok((p * a + (1.0 - p) * (1.0 - a)).clamp(0.5, p))
}

/// Builds `(z, φ₁, φ₂)` for `ρ = diag(p, 1 − p)` and parameters `(α, β)`.
///
/// The unnormalized vectors have squared norms `z` and `1 − z`; they are divided
/// by their computed norms rather than by `√z`, `√(1−z)`.
///
/// For the pure state `p = 1` only `|α|² = 1` is accepted; `φ₂` then carries
/// zero weight and is returned as the complement of `φ₁`.
pub fn decompose(p: f64, params: &DecompositionParams) -> Result<Decomposition> {
    let z = z_of_alpha(p, params.alpha_sq())?;
    let (alpha, beta) = (params.alpha, params.beta);

    if p == 1.0 {
        if params.alpha_sq() < 1.0 - NORM_TOL {
            return Err(Error::DegenerateDecomposition(format!(
                "a pure state (p = 1) only admits |alpha|^2 = 1, got {}",
                params.alpha_sq()
            )));
        }
        let phi1 = PureState2::new(alpha / alpha.norm(), Complex64::new(0.0, 0.0))?;
        return Ok(Decomposition {
            z: 1.0,
            phi1,
            phi2: orthogonal_complement(&phi1),
            source_p: p,
        });
    }

    let (sp, sq) = (p.sqrt(), (1.0 - p).sqrt());
    let phi1 = PureState2::normalized(sp * alpha, sq * beta.conj())?;
    let phi2 = PureState2::normalized(sp * beta, -sq * alpha.conj())?;
    Ok(Decomposition {
        z,
        phi1,
        phi2,
        source_p: p,
    })
}

/// `|⟨φ₂|φ₁⟩|² = 1 − p(1−p) / (z(1−z))`.
pub fn hidden_overlap(p: f64, z: f64) -> Result<f64> {
    let z = check_pz(p, z)?;
    Ok(1.0 - q_ratio(p, z))
}

/// Linear nonorthogonality of the preparation pair, `1 − 2|1/2 − Q|`.
pub fn pair_nonortho(p: f64, z: f64) -> Result<f64> {
    let z = check_pz(p, z)?;
    Ok(n0_from_overlap(1.0 - q_ratio(p, z)))
}

/// Which closed form of the ensemble nonorthogonality applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Squared overlap below 1/2: `4(1−z) − 4p(1−p)/z`.
    LowOverlap,
    /// Squared overlap at least 1/2: `4p(1−p)/z`.
    HighOverlap,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::LowOverlap => "low_overlap",
            Branch::HighOverlap => "high_overlap",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleNonortho {
    /// `2 min(z, 1−z) · N_pair`.
    pub value: f64,
    pub branch: Branch,
    /// The same quantity from the branch closed form.
    pub branch_value: f64,
}

/// Average nonorthogonality per pair of systems in the ensemble.
///
/// Evaluated both directly and through the overlap-dependent closed form; a
/// disagreement beyond 1e−12 is reported as [`Error::Invariant`].
pub fn ensemble_nonortho(p: f64, z: f64) -> Result<EnsembleNonortho> {
    let z = check_pz(p, z)?;
    let q = q_ratio(p, z);
    let direct = 2.0 * z.min(1.0 - z) * n0_from_overlap(1.0 - q);
    let pq = p * (1.0 - p);
    let (branch, branch_value) = if 1.0 - q < 0.5 {
        (Branch::LowOverlap, 4.0 * (1.0 - z) - 4.0 * pq / z)
    } else {
        (Branch::HighOverlap, 4.0 * pq / z)
    };
    if (direct - branch_value).abs() > BRANCH_TOL {
        return Err(Error::Invariant(format!(
            "ensemble nonorthogonality at p = {p}, z = {z}: direct {direct} vs {} form {branch_value}",
            branch.label()
        )));
    }
    Ok(EnsembleNonortho {
        value: direct,
        branch,
        branch_value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaxPair {
    /// Weight at which the two preparation states have squared overlap 1/2.
    Feasible { z: f64 },
    /// No decomposition of this `ρ` reaches unit pair nonorthogonality.
    Infeasible,
}

impl MaxPair {
    pub fn z(self) -> Option<f64> {
        match self {
            MaxPair::Feasible { z } => Some(z),
            MaxPair::Infeasible => None,
        }
    }
}

/// Solves `z(1−z) = 2p(1−p)` for `z ≥ 1/2`.
///
/// Real roots need `p(1−p) ≤ 1/8`, i.e. `p ≥ p̃`. A discriminant within 1e−12
/// below zero is treated as zero so that `p̃` itself is feasible. The pure state
/// `p = 1` is infeasible: its only decomposition is trivial.
pub fn max_pair_z(p: f64) -> Result<MaxPair> {
    check_p(p)?;
    if p == 1.0 {
        return Ok(MaxPair::Infeasible);
    }
    let disc = 1.0 - 8.0 * p * (1.0 - p);
    if disc < -NORM_TOL {
        return Ok(MaxPair::Infeasible);
    }
    Ok(MaxPair::Feasible {
        z: 0.5 * (1.0 + disc.max(0.0).sqrt()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxEnsemble {
    pub value: f64,
    pub branch: Branch,
    /// Maximizing weight; always 1/2.
    pub z: f64,
}

/// Maximum of [`ensemble_nonortho`] over `z ∈ [1/2, p]`, attained at `z = 1/2`:
/// `2 − 8p(1−p)` when `p(1−p) > 1/8`, else `8p(1−p)`.
pub fn max_ensemble(p: f64) -> Result<MaxEnsemble> {
    check_p(p)?;
    let pq = p * (1.0 - p);
    let (value, branch) = if pq > 0.125 {
        (2.0 - 8.0 * pq, Branch::LowOverlap)
    } else {
        (8.0 * pq, Branch::HighOverlap)
    };
    Ok(MaxEnsemble {
        value,
        branch,
        z: 0.5,
    })
}

/// `diag(p̃, 1 − p̃)`.
pub fn ideal_rho() -> DiagonalDensity {
    density_from_p(IDEAL_P).expect("p̃ lies in [1/2, 1]")
}

/// Relabels `p < 1/2` and `|α|² < 1/2` into the canonical ranges by swapping the
/// roles of the eigenvectors and of `α, β` respectively.
pub fn canonicalize(p: f64, alpha_sq: f64) -> (f64, f64) {
    (p.max(1.0 - p), alpha_sq.max(1.0 - alpha_sq))
}
