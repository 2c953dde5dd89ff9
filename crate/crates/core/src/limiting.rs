//! Cell-center recovery and the positivity-preserving scaling limiter.
//!
//! A cell average is the Simpson tensor combination of its center value
//! and its eight interface traces with weights 16/36 (center), 1/36
//! (corners) and 4/36 (edge midpoints). Inverting this gives the center
//! value. The limiter pulls the center toward the average until density
//! and internal energy are positive, and applies the same factor to the
//! traces so that the decomposition stays exact.

use crate::error::{Error, Result};
use crate::mesh::trace::{CORNERS, EDGES};
use crate::mesh::CellTraceSet;
use crate::state::ConservedState;

/// Lower bound on density and internal energy targeted by the limiter.
pub const PP_EPSILON: f64 = 1e-13;

/// Center value `(36 Ū − Σ corners − 4 Σ edges)/16`.
#[inline]
pub fn center_value(avg: &ConservedState, traces: &[ConservedState; 8]) -> ConservedState {
    let mut out = [0.0; 8];
    for k in 0..8 {
        let c: f64 = CORNERS.iter().map(|&s| traces[s][k]).sum();
        let e: f64 = EDGES.iter().map(|&s| traces[s][k]).sum();
        out[k] = (36.0 * avg[k] - c - 4.0 * e) / 16.0;
    }
    ConservedState(out)
}

/// Simpson tensor combination `(16 center + Σ corners + 4 Σ edges)/36`.
#[inline]
pub fn simpson_combination(center: &ConservedState, traces: &[ConservedState; 8]) -> ConservedState {
    let mut out = [0.0; 8];
    for k in 0..8 {
        let c: f64 = CORNERS.iter().map(|&s| traces[s][k]).sum();
        let e: f64 = EDGES.iter().map(|&s| traces[s][k]).sum();
        out[k] = (16.0 * center[k] + c + 4.0 * e) / 36.0;
    }
    ConservedState(out)
}

/// Scaling factor that lifts `value` to at least `eps` by moving toward
/// `mean`. Returns 1 when no lifting is needed.
#[inline]
fn lift_factor(mean: f64, value: f64, eps: f64) -> f64 {
    if value >= eps {
        return 1.0;
    }
    let den = mean - value;
    if den > 0.0 {
        ((mean - eps) / den).clamp(0.0, 1.0)
    } else {
        // mean ≤ value < eps: the formula degenerates; only the average
        // itself is safe.
        0.0
    }
}

/// Result of limiting one cell.
#[derive(Clone, Copy, Debug)]
pub struct Limited {
    /// Combined factor `θ1 θ2` (after any roundoff safeguard).
    pub theta: f64,
    pub set: CellTraceSet,
}

/// Positivity-preserving limiter for the center value and the companion
/// scaling of the traces. The margins are `min(eps, ρ̄)` and `min(eps, 𝓔̄)`.
pub fn pp_limit(avg: &ConservedState, center: &ConservedState, traces: &[ConservedState; 8], eps: f64) -> Result<Limited> {
    if !avg.is_admissible() {
        return Err(Error::Invariant(format!("pp_limit: inadmissible cell average {:?}", avg.0)));
    }
    let rho_bar = avg.rho();
    let eps1 = eps.min(rho_bar);
    let theta1 = lift_factor(rho_bar, center.rho(), eps1);
    let mid = avg.lerp(center, theta1);

    let e_bar = avg.internal_energy_unchecked();
    let eps2 = eps.min(e_bar);
    let e_mid = if mid.rho() > 0.0 { mid.internal_energy_unchecked() } else { f64::NEG_INFINITY };
    let theta2 = lift_factor(e_bar, e_mid, eps2);

    let set = CellTraceSet { center: *center, traces: *traces };
    let mut theta = theta1 * theta2;
    let mut out = set.blend_toward(avg, theta);
    // The internal energy is concave, so the verbatim factor is safe in
    // exact arithmetic. Shrink further only if roundoff says otherwise.
    let mut tries = 0;
    while !out.all_admissible() {
        tries += 1;
        theta = if tries > 3 { 0.0 } else { 0.5 * theta };
        out = set.blend_toward(avg, theta);
        if theta == 0.0 {
            break;
        }
    }
    Ok(Limited { theta, set: out })
}
