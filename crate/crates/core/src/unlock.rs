//! Classical information needed to unlock hidden nonorthogonality.
//!
//! For a preparation with weight `z` of `ρ = diag(p, 1 − p)`:
//!
//! - `U = h(z)` bits per system identify which preparation state each system is in;
//! - `I = h(p)` bits do the same for the orthogonal (eigenvector) preparation;
//! - `E = U − I ≥ 0` is the excess, nonnegative because `z ≤ p`.
//!
//! `U / N_ens` and `E / N_ens` are the per-nbit costs (`N_ens` counts pairs, so
//! the bits needed per nbit are `2U / N_ens`). [`conjecture_sweep`] evaluates
//! them on a `(p, z)` grid.

use std::io::Write;

use rayon::prelude::*;

use crate::fmt::format_sig12;
use crate::hidden::ensemble_nonortho;
use crate::measures::binary_entropy;
use crate::qstate::{density_from_p, NORM_TOL};
use crate::{Error, Result};

pub const CSV_HEADER: &str = "p,z,U,I,E,N_ens,ratio_U,ratio_E,bits_per_nbit";

/// Ratios are left undefined when `N_ens` does not exceed this.
pub const DEFAULT_EPS: f64 = 1e-9;

/// `U = h(z)`.
pub fn unlock_info(z: f64) -> Result<f64> {
    binary_entropy(z).map_err(|_| Error::domain("z", z, "[0, 1]"))
}

/// `I = h(p)` for `p ∈ [1/2, 1]`.
pub fn orthogonal_info(p: f64) -> Result<f64> {
    density_from_p(p)?;
    binary_entropy(p)
}

fn check_pz(p: f64, z: f64) -> Result<()> {
    density_from_p(p)?;
    if !(z >= 0.5 - NORM_TOL && z <= p + NORM_TOL) {
        return Err(Error::domain("z", z, "[1/2, p]"));
    }
    Ok(())
}

/// `E = h(z) − h(p)` for `1/2 ≤ z ≤ p ≤ 1`.
pub fn excess_info(p: f64, z: f64) -> Result<f64> {
    check_pz(p, z)?;
    Ok(unlock_info(z.clamp(0.5, p))? - orthogonal_info(p)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnlockReport {
    pub p: f64,
    pub z: f64,
    pub u: f64,
    pub i: f64,
    pub e: f64,
    pub n_ens: f64,
    /// `U / N_ens`, `None` when `N_ens ≤ ε`.
    pub ratio_u: Option<f64>,
    /// `E / N_ens`, `None` when `N_ens ≤ ε`.
    pub ratio_e: Option<f64>,
    /// `2U / N_ens`, `None` when `N_ens ≤ ε`.
    pub bits_per_nbit: Option<f64>,
}

impl UnlockReport {
    pub fn ratios_defined(&self) -> bool {
        self.ratio_u.is_some()
    }

    fn write_csv_row(&self, w: &mut impl Write) -> std::io::Result<()> {
        let opt = |x: Option<f64>| x.map(format_sig12).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            format_sig12(self.p),
            format_sig12(self.z),
            format_sig12(self.u),
            format_sig12(self.i),
            format_sig12(self.e),
            format_sig12(self.n_ens),
            opt(self.ratio_u),
            opt(self.ratio_e),
            opt(self.bits_per_nbit),
        )
    }
}

/// All unlocking quantities at `(p, z)`.
pub fn unlock_report(p: f64, z: f64, eps: f64) -> Result<UnlockReport> {
    check_pz(p, z)?;
    let z = z.clamp(0.5, p);
    let u = unlock_info(z)?;
    let i = orthogonal_info(p)?;
    let e = u - i;
    let n_ens = ensemble_nonortho(p, z)?.value;
    let (ratio_u, ratio_e, bits_per_nbit) = if n_ens > eps {
        (Some(u / n_ens), Some(e / n_ens), Some(2.0 * u / n_ens))
    } else {
        (None, None, None)
    };
    Ok(UnlockReport {
        p,
        z,
        u,
        i,
        e,
        n_ens,
        ratio_u,
        ratio_e,
        bits_per_nbit,
    })
}

/// The `(p, z)` lattice `p = p_min + i·p_step ≤ p_max`, `z = 1/2 + j·z_step ≤ p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    pub p_min: f64,
    pub p_max: f64,
    pub p_step: f64,
    pub z_step: f64,
    pub eps: f64,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            p_min: 0.5,
            p_max: 1.0,
            p_step: 5e-4,
            z_step: 5e-4,
            eps: DEFAULT_EPS,
        }
    }
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.p_step > 0.0 && self.p_step.is_finite()) {
            return Err(Error::domain("p_step", self.p_step, "(0, ∞)"));
        }
        if !(self.z_step > 0.0 && self.z_step.is_finite()) {
            return Err(Error::domain("z_step", self.z_step, "(0, ∞)"));
        }
        if self.eps.is_nan() || self.eps <= 0.0 {
            return Err(Error::domain("eps", self.eps, "(0, ∞)"));
        }
        density_from_p(self.p_min).map_err(|_| Error::domain("p_min", self.p_min, "[1/2, 1]"))?;
        density_from_p(self.p_max).map_err(|_| Error::domain("p_max", self.p_max, "[1/2, 1]"))?;
        Ok(())
    }

    /// Grid values of `p`; empty when `p_max < p_min`.
    pub fn p_values(&self) -> Vec<f64> {
        if self.p_max < self.p_min {
            return Vec::new();
        }
        let n = ((self.p_max - self.p_min) / self.p_step + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| (self.p_min + i as f64 * self.p_step).min(self.p_max))
            .collect()
    }

    /// Grid values of `z` for a given `p`.
    pub fn z_values(&self, p: f64) -> impl Iterator<Item = f64> + '_ {
        let n = ((p - 0.5) / self.z_step + 1e-9).floor() as usize;
        (0..=n).map(move |j| (0.5 + j as f64 * self.z_step).min(p))
    }
}

/// A grid location with its value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub value: f64,
    pub p: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub grid: SweepGrid,
    /// Every evaluated point in `(p, z)` lexicographic order.
    pub rows: Vec<UnlockReport>,
    /// Points whose ratios are undefined (`N_ens ≤ ε`).
    pub excluded: usize,
    /// Smallest `U / N_ens`; ties go to the lexicographically first point.
    pub min_ratio_u: GridPoint,
    /// Smallest `U − I` over all rows (should never be negative).
    pub min_excess: GridPoint,
    pub e_below_one: usize,
    pub e_at_least_one: usize,
    /// First grid point with `E / N_ens < 1`.
    pub witness_e_below: Option<UnlockReport>,
    /// First grid point with `E / N_ens ≥ 1`.
    pub witness_e_at_least: Option<UnlockReport>,
}

impl SweepResult {
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for row in &self.rows {
            row.write_csv_row(&mut w)?;
        }
        w.flush()
    }
}

/// Evaluates [`unlock_report`] on every grid point and summarizes the per-nbit
/// ratios. Rows are computed in parallel on the current rayon pool and merged in
/// grid order, so the result does not depend on the thread count.
pub fn conjecture_sweep(grid: &SweepGrid) -> Result<SweepResult> {
    grid.validate()?;
    let ps = grid.p_values();
    let per_p: Vec<Vec<UnlockReport>> = ps
        .par_iter()
        .map(|&p| {
            grid.z_values(p)
                .map(|z| unlock_report(p, z, grid.eps))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<UnlockReport> = per_p.into_iter().flatten().collect();

    let mut excluded = 0;
    let mut min_ratio_u: Option<GridPoint> = None;
    let mut min_excess: Option<GridPoint> = None;
    let (mut below, mut at_least) = (0, 0);
    let (mut w_below, mut w_at_least) = (None, None);
    for r in &rows {
        if min_excess.is_none_or(|m| r.e < m.value) {
            min_excess = Some(GridPoint {
                value: r.e,
                p: r.p,
                z: r.z,
            });
        }
        let (Some(ru), Some(re)) = (r.ratio_u, r.ratio_e) else {
            excluded += 1;
            continue;
        };
        if min_ratio_u.is_none_or(|m| ru < m.value) {
            min_ratio_u = Some(GridPoint {
                value: ru,
                p: r.p,
                z: r.z,
            });
        }
        if re < 1.0 {
            below += 1;
            w_below.get_or_insert(*r);
        } else {
            at_least += 1;
            w_at_least.get_or_insert(*r);
        }
    }
    let Some(min_ratio_u) = min_ratio_u else {
        return Err(Error::Config(
            "sweep grid has no point with N_ens above the exclusion threshold".into(),
        ));
    };
    Ok(SweepResult {
        grid: *grid,
        excluded,
        min_ratio_u,
        min_excess: min_excess.expect("nonempty rows"),
        e_below_one: below,
        e_at_least_one: at_least,
        witness_e_below: w_below,
        witness_e_at_least: w_at_least,
        rows,
    })
}
