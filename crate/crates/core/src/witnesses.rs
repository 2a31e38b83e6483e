//! Per-state entanglement diagnostics.
//!
//! * negativity `N = ||rho^{T_B}||_1 - 1`, positive iff the state is NPT;
//! * realignment value `R = ||rho^R||_1 - 1`, positive values certify
//!   entanglement, including PPT (bound) entanglement;
//! * the smallest eigenvalue of `rho^{T_B}`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{
    hermitian_eigenvalues, partial_transpose, realign, trace_norm, DensityMatrix, Subsystem,
};

/// Negativity values within this distance of zero are reported as exactly zero.
pub const NEGATIVITY_CLAMP: f64 = 1e-12;

/// A state counts as PPT while its negativity stays at or below this band.
pub const ZERO_BAND: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub negativity: f64,
    pub ccnr: f64,
    pub lambda_min: f64,
}

impl WitnessReport {
    /// Negative partial transpose, judged against [`ZERO_BAND`].
    pub fn is_npt(&self) -> bool {
        self.negativity > ZERO_BAND
    }

    /// PPT and the realignment criterion fires.
    pub fn is_ccnr_detected_ppt(&self) -> bool {
        !self.is_npt() && self.ccnr > 0.0
    }
}

fn clamp_negativity(raw: f64) -> f64 {
    if raw.abs() <= NEGATIVITY_CLAMP {
        0.0
    } else {
        raw
    }
}

/// Negativity with respect to a chosen subsystem.
pub fn negativity_on(rho: &DensityMatrix, subsystem: Subsystem) -> Result<f64> {
    let pt = partial_transpose(rho, subsystem)?;
    let negativity = clamp_negativity(trace_norm(&pt)? - 1.0);
    debug_assert!({
        let negative_sum: f64 = hermitian_eigenvalues(&pt)?.iter().filter(|&&l| l < 0.0).sum();
        (negativity - 2.0 * negative_sum.abs()).abs() < 1e-9
    });
    Ok(negativity)
}

/// Negativity via the partial transpose on B.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    negativity_on(rho, Subsystem::B)
}

/// Realignment value; not clamped, since its sign is the signal.
pub fn ccnr(rho: &DensityMatrix) -> Result<f64> {
    Ok(trace_norm(&realign(rho)?)? - 1.0)
}

pub fn min_pt_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    let pt = partial_transpose(rho, Subsystem::B)?;
    Ok(hermitian_eigenvalues(&pt)?[0])
}

/// All three diagnostics, sharing one partial transpose.
pub fn witness_report(rho: &DensityMatrix) -> Result<WitnessReport> {
    let pt = partial_transpose(rho, Subsystem::B)?;
    Ok(WitnessReport {
        negativity: clamp_negativity(trace_norm(&pt)? - 1.0),
        ccnr: ccnr(rho)?,
        lambda_min: hermitian_eigenvalues(&pt)?[0],
    })
}
