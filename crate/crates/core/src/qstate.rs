//! Two-dimensional complex states, orthonormal bases and 2×2 density matrices.
//!
//! Index 0 is `|↑⟩` and index 1 is `|↓⟩` everywhere in the crate. Global phases
//! are stored as given; two states are "equal" when their overlap is 1.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::{Error, Result};

/// Deviation of the squared norm accepted without touching the amplitudes.
pub const NORM_TOL: f64 = 1e-12;
/// Deviation beyond which constructors reject instead of renormalizing.
pub const RENORM_LIMIT: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A normalized qubit ket `a_up|↑⟩ + a_down|↓⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState2 {
    up: Complex64,
    down: Complex64,
}

impl PureState2 {
    pub fn new(up: Complex64, down: Complex64) -> Result<Self> {
        if !(up.re.is_finite() && up.im.is_finite() && down.re.is_finite() && down.im.is_finite()) {
            return Err(Error::NonFinite("state amplitudes"));
        }
        let norm_sq = up.norm_sqr() + down.norm_sqr();
        let dev = (norm_sq - 1.0).abs();
        if dev <= NORM_TOL {
            Ok(Self { up, down })
        } else if dev <= RENORM_LIMIT {
            let n = norm_sq.sqrt();
            Ok(Self {
                up: up / n,
                down: down / n,
            })
        } else {
            Err(Error::NotNormalized { norm_sq })
        }
    }

    /// Scales any nonzero finite vector to unit norm.
    pub fn normalized(up: Complex64, down: Complex64) -> Result<Self> {
        let n = (up.norm_sqr() + down.norm_sqr()).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::NotNormalized { norm_sq: n * n });
        }
        Self::new(up / n, down / n)
    }

    /// Builds a state from amplitudes that are normalized by construction
    /// (trigonometric or square-root parametrizations).
    pub(crate) fn from_parts(up: Complex64, down: Complex64) -> Self {
        debug_assert!((up.norm_sqr() + down.norm_sqr() - 1.0).abs() <= RENORM_LIMIT);
        Self { up, down }
    }

    pub fn up() -> Self {
        Self {
            up: ONE,
            down: ZERO,
        }
    }

    pub fn down() -> Self {
        Self {
            up: ZERO,
            down: ONE,
        }
    }

    /// Real-amplitude state `√w|↑⟩ + √(1−w)|↓⟩`.
    pub fn real_weighted(w: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::domain("weight", w, "[0, 1]"));
        }
        Ok(Self::from_parts(
            Complex64::new(w.sqrt(), 0.0),
            Complex64::new((1.0 - w).sqrt(), 0.0),
        ))
    }

    pub fn a_up(&self) -> Complex64 {
        self.up
    }

    pub fn a_down(&self) -> Complex64 {
        self.down
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState2) -> Complex64 {
        self.up.conj() * other.up + self.down.conj() * other.down
    }

    /// Multiplies the state by the unit phase `e^{iφ}`.
    pub fn with_phase(&self, phase: f64) -> Self {
        let u = Complex64::from_polar(1.0, phase);
        Self {
            up: self.up * u,
            down: self.down * u,
        }
    }

    /// Bloch vector `(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)`.
    pub fn bloch_vector(&self) -> [f64; 3] {
        let c = self.up.conj() * self.down;
        [
            2.0 * c.re,
            2.0 * c.im,
            self.up.norm_sqr() - self.down.norm_sqr(),
        ]
    }

    /// `|self⟩⟨self|`.
    pub fn projector(&self) -> Density2 {
        Density2::from_entries_unchecked([
            [self.up * self.up.conj(), self.up * self.down.conj()],
            [self.down * self.up.conj(), self.down * self.down.conj()],
        ])
    }
}

impl fmt::Display for PureState2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{};{},{}",
            self.up.re, self.up.im, self.down.re, self.down.im
        )
    }
}

/// Parses the state literal `"re,im;re,im"` (amplitude on `|↑⟩` first).
impl FromStr for PureState2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |reason: String| Error::Parse {
            what: "state literal",
            reason,
        };
        let parts: Vec<&str> = s.split(';').collect();
        if parts.len() != 2 {
            return Err(parse_err(format!(
                "expected two ';'-separated amplitudes in {s:?}"
            )));
        }
        let mut amps = [ZERO; 2];
        for (amp, part) in amps.iter_mut().zip(&parts) {
            let comps: Vec<&str> = part.split(',').map(str::trim).collect();
            if comps.len() != 2 {
                return Err(parse_err(format!("expected 're,im' but got {part:?}")));
            }
            let re: f64 = comps[0]
                .parse()
                .map_err(|e| parse_err(format!("{:?}: {e}", comps[0])))?;
            let im: f64 = comps[1]
                .parse()
                .map_err(|e| parse_err(format!("{:?}: {e}", comps[1])))?;
            *amp = Complex64::new(re, im);
        }
        PureState2::new(amps[0], amps[1])
    }
}

/// `|⟨y|x⟩|²`, clamped to `[0, 1]` against rounding.
pub fn overlap2(x: &PureState2, y: &PureState2) -> f64 {
    y.inner(x).norm_sqr().clamp(0.0, 1.0)
}

/// `cos(θ/2)|↑⟩ + e^{iφ} sin(θ/2)|↓⟩`. Any real `θ` is accepted.
pub fn from_bloch(theta: f64, phi: f64) -> PureState2 {
    let (s, c) = (0.5 * theta).sin_cos();
    PureState2::from_parts(Complex64::new(c, 0.0), Complex64::from_polar(s, phi))
}

/// The state orthogonal to `x`: `(a, b) ↦ (−b*, a*)`.
pub fn orthogonal_complement(x: &PureState2) -> PureState2 {
    PureState2::from_parts(-x.down.conj(), x.up.conj())
}

/// An orthonormal measurement basis of the qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Basis2 {
    b0: PureState2,
    b1: PureState2,
}

impl Basis2 {
    pub fn new(b0: PureState2, b1: PureState2) -> Result<Self> {
        let ip = b0.inner(&b1).norm();
        if ip > NORM_TOL {
            return Err(Error::NotOrthogonal { overlap2: ip * ip });
        }
        Ok(Self { b0, b1 })
    }

    /// The basis `{b0, b0⊥}`.
    pub fn containing(b0: PureState2) -> Self {
        Self {
            b0,
            b1: orthogonal_complement(&b0),
        }
    }

    pub fn computational() -> Self {
        Self {
            b0: PureState2::up(),
            b1: PureState2::down(),
        }
    }

    pub fn b0(&self) -> &PureState2 {
        &self.b0
    }

    pub fn b1(&self) -> &PureState2 {
        &self.b1
    }
}

/// Outcome probabilities `(p0, p1)` of measuring `x` in basis `b`.
pub fn measure_in_basis(x: &PureState2, b: &Basis2) -> (f64, f64) {
    (overlap2(x, &b.b0), overlap2(x, &b.b1))
}

/// The diagonal density matrix `p|↑⟩⟨↑| + (1−p)|↓⟩⟨↓|` with `p ≥ 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalDensity {
    p: f64,
}

impl DiagonalDensity {
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Eigenvalues `[p, 1 − p]`.
    pub fn eigenvalues(&self) -> [f64; 2] {
        [self.p, 1.0 - self.p]
    }

    pub fn matrix(&self) -> Density2 {
        Density2::from_entries_unchecked([
            [Complex64::new(self.p, 0.0), ZERO],
            [ZERO, Complex64::new(1.0 - self.p, 0.0)],
        ])
    }
}

/// Rejects `p` outside `[1/2, 1]`; callers relabel the eigenvectors first.
pub fn density_from_p(p: f64) -> Result<DiagonalDensity> {
    if !(0.5..=1.0).contains(&p) {
        return Err(Error::domain("p", p, "[1/2, 1]"));
    }
    Ok(DiagonalDensity { p })
}

/// A general 2×2 density matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Density2 {
    m: [[Complex64; 2]; 2],
}

impl Density2 {
    /// Validates hermiticity, unit trace and eigenvalues in `[0, 1]`, each to 1e−12.
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        if m.iter()
            .flatten()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::NonFinite("density matrix"));
        }
        let rho = Self { m };
        let herm = (m[0][1] - m[1][0].conj()).norm() + m[0][0].im.abs() + m[1][1].im.abs();
        if herm > NORM_TOL {
            return Err(Error::Invariant(format!(
                "density matrix is not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > NORM_TOL {
            return Err(Error::domain("trace", tr, "1"));
        }
        let [lo, hi] = rho.eigenvalues();
        if lo < -NORM_TOL || hi > 1.0 + NORM_TOL {
            return Err(Error::Invariant(format!(
                "density matrix eigenvalues {lo}, {hi} outside [0, 1]"
            )));
        }
        Ok(rho)
    }

    pub(crate) fn from_entries_unchecked(m: [[Complex64; 2]; 2]) -> Self {
        Self { m }
    }

    /// `Σ wᵢ |ψᵢ⟩⟨ψᵢ|`; weights are not required to sum to one.
    pub fn mixture(terms: &[(f64, PureState2)]) -> Self {
        let mut m = [[ZERO; 2]; 2];
        for (w, psi) in terms {
            let pr = psi.projector();
            for (row, prow) in m.iter_mut().zip(pr.m.iter()) {
                for (e, pe) in row.iter_mut().zip(prow) {
                    *e += pe * *w;
                }
            }
        }
        Self { m }
    }

    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.m
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.m[row][col]
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0].re + self.m[1][1].re
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Density2) -> f64 {
        self.m
            .iter()
            .flatten()
            .zip(other.m.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `⟨x|ρ|x⟩`.
    pub fn expectation(&self, x: &PureState2) -> f64 {
        let v = [x.up, x.down];
        let mut acc = ZERO;
        for (i, vi) in v.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                acc += vi.conj() * self.m[i][j] * vj;
            }
        }
        acc.re
    }

    /// Eigenvalues in ascending order, treating the matrix as Hermitian.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let (mean, r) = self.mean_radius();
        [mean - r, mean + r]
    }

    /// Eigenvalues (ascending) with an orthonormal eigenbasis; `b0` belongs to
    /// the larger eigenvalue. Degenerate spectra return the computational basis.
    pub fn eigen(&self) -> ([f64; 2], Basis2) {
        let (mean, r) = self.mean_radius();
        let (a, d, c) = (self.m[0][0].re, self.m[1][1].re, self.m[0][1]);
        let hi = mean + r;
        let v = if a >= d {
            (Complex64::new(hi - d, 0.0), c.conj())
        } else {
            (c, Complex64::new(hi - a, 0.0))
        };
        let n = (v.0.norm_sqr() + v.1.norm_sqr()).sqrt();
        let basis = if n <= f64::EPSILON {
            Basis2::computational()
        } else {
            Basis2::containing(PureState2::from_parts(v.0 / n, v.1 / n))
        };
        ([mean - r, hi], basis)
    }

    fn mean_radius(&self) -> (f64, f64) {
        let a = self.m[0][0].re;
        let d = self.m[1][1].re;
        let c = 0.5 * (self.m[0][1] + self.m[1][0].conj());
        let half = 0.5 * (a - d);
        (0.5 * (a + d), (half * half + c.norm_sqr()).sqrt())
    }
}
