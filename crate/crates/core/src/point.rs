//! Semi-discrete evolution of the point values.
//!
//! Point values evolve the nonconservative system `W_t + J^x W_x + J^y
//! W_y = 0` in the reformulated variables. Derivatives normal to an edge
//! are taken from the biquadratic reconstruction of the upwind and
//! downwind cell, written as fixed coefficient stencils over the cell's
//! point values and its average `W̄`. Derivatives along an edge are
//! central differences of the two vertices. At a vertex both directions
//! use three-point one-sided differences along the grid lines.
//! Upwinding uses `(J ± αI)/2` with the global viscosities.

use crate::error::{Error, Result};
use crate::mesh::trace::{CORNERS, EDGES};
use crate::mesh::{CellTraceSet, Grid2, Mesh, PaddedField};
use crate::state::{to_reform, GasParams, ReformState, NVAR};
use rayon::prelude::*;

/// The two 8×8 Jacobians of the reformulated system at one state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobianPair {
    pub jx: [[f64; NVAR]; NVAR],
    pub jy: [[f64; NVAR]; NVAR],
}

/// Scalar coefficients from which both Jacobians are assembled.
#[derive(Clone, Copy, Debug)]
pub struct JacCoeffs {
    v: [f64; 3],
    b: [f64; 3],
    /// `ρ q'(ρ)`.
    rho_dq: f64,
    /// `γ p / (ρ² q'(ρ))`.
    sound: f64,
    inv_rho: f64,
    /// `p / ρ`.
    p_rho: f64,
}

impl JacCoeffs {
    #[inline]
    pub fn new(w: &ReformState, g: &GasParams) -> JacCoeffs {
        let rho = g.rho_of_q(w[0]);
        let ln_rho = rho.ln();
        let p_rho = (w[7] + (g.gamma - 1.0) * ln_rho).exp();
        let dq = g.dq_drho(rho);
        JacCoeffs {
            v: [w[1], w[2], w[3]],
            b: [w[4], w[5], w[6]],
            rho_dq: rho * dq,
            sound: g.gamma * p_rho / (rho * dq),
            inv_rho: 1.0 / rho,
            p_rho,
        }
    }

    /// `J^x d`.
    #[inline]
    pub fn apply_x(&self, d: &ReformState) -> ReformState {
        let (v, b, ir) = (self.v[0], self.b, self.inv_rho);
        ReformState([
            v * d[0] + self.rho_dq * d[1],
            self.sound * d[0] + v * d[1] + b[1] * ir * d[5] + b[2] * ir * d[6] + self.p_rho * d[7],
            v * d[2] - b[0] * ir * d[5],
            v * d[3] - b[0] * ir * d[6],
            v * d[4],
            b[1] * d[1] - b[0] * d[2] + v * d[5],
            b[2] * d[1] - b[0] * d[3] + v * d[6],
            v * d[7],
        ])
    }

    /// `J^y d`.
    #[inline]
    pub fn apply_y(&self, d: &ReformState) -> ReformState {
        let (v, b, ir) = (self.v[1], self.b, self.inv_rho);
        ReformState([
            v * d[0] + self.rho_dq * d[2],
            v * d[1] - b[1] * ir * d[4],
            self.sound * d[0] + v * d[2] + b[0] * ir * d[4] + b[2] * ir * d[6] + self.p_rho * d[7],
            v * d[3] - b[1] * ir * d[6],
            -b[1] * d[1] + b[0] * d[2] + v * d[4],
            v * d[5],
            b[2] * d[2] - b[1] * d[3] + v * d[6],
            v * d[7],
        ])
    }
}

/// The Jacobians `J^x`, `J^y` at `w` as dense matrices.
pub fn jacobians(w: &ReformState, g: &GasParams) -> Result<JacobianPair> {
    if !w.is_finite() {
        return Err(Error::Domain(format!("jacobians: non-finite state {:?}", w.0)));
    }
    let c = JacCoeffs::new(w, g);
    let mut jx = [[0.0; NVAR]; NVAR];
    let mut jy = [[0.0; NVAR]; NVAR];
    for col in 0..NVAR {
        let mut e = ReformState::ZERO;
        e[col] = 1.0;
        let (cx, cy) = (c.apply_x(&e), c.apply_y(&e));
        for row in 0..NVAR {
            jx[row][col] = cx[row];
            jy[row][col] = cy[row];
        }
    }
    Ok(JacobianPair { jx, jy })
}

/// Derivative at an edge midpoint from the reconstruction of the cell on
/// the minus side, scaled by `h`: `(−36W̄ + 8W_far + 16W_self + 4ΣW_tan +
/// ΣW_corner)/(4h)`. The same expression negated is the derivative from
/// the cell on the plus side.
#[inline]
pub fn edge_one_sided(
    wbar: &ReformState,
    far: &ReformState,
    this: &ReformState,
    tan: [&ReformState; 2],
    corners: [&ReformState; 4],
    h: f64,
) -> ReformState {
    let mut out = [0.0; NVAR];
    let s = 0.25 / h;
    for k in 0..NVAR {
        let c = corners[0][k] + corners[1][k] + corners[2][k] + corners[3][k];
        out[k] = (-36.0 * wbar[k] + 8.0 * far[k] + 16.0 * this[k] + 4.0 * (tan[0][k] + tan[1][k]) + c) * s;
    }
    ReformState(out)
}

/// Three-point one-sided derivative `(W_far − 4W_mid + 3W_self)/h` toward
/// the minus side. Negated it is the plus-side derivative.
#[inline]
pub fn vertex_one_sided(far: &ReformState, mid: &ReformState, this: &ReformState, h: f64) -> ReformState {
    let mut out = [0.0; NVAR];
    for k in 0..NVAR {
        out[k] = (far[k] - 4.0 * mid[k] + 3.0 * this[k]) / h;
    }
    ReformState(out)
}

/// Central difference `(W_plus − W_minus)/h`.
#[inline]
pub fn central(minus: &ReformState, plus: &ReformState, h: f64) -> ReformState {
    let mut out = [0.0; NVAR];
    for k in 0..NVAR {
        out[k] = (plus[k] - minus[k]) / h;
    }
    ReformState(out)
}

/// Upwind-split normal term `J (D⁺ + D⁻)/2 + α (D⁺ − D⁻)/2`, where `D⁺`
/// is the derivative from the minus side.
#[inline]
fn upwind(apply: impl Fn(&ReformState) -> ReformState, dp: &ReformState, dm: &ReformState, alpha: f64, mu: f64) -> ReformState {
    let mut mean = [0.0; NVAR];
    let mut half = [0.0; NVAR];
    for k in 0..NVAR {
        mean[k] = 0.5 * (dp[k] + dm[k]);
        half[k] = 0.5 * (dp[k] - dm[k]);
    }
    let jm = apply(&ReformState(mean));
    let mut out = [0.0; NVAR];
    for k in 0..NVAR {
        out[k] = mu * jm[k] + alpha * half[k];
    }
    ReformState(out)
}

/// `W̄` from a cell's hatted states: Simpson combination of `Ψ` of the
/// stored center and the eight traces. Returns `(Ŵc, W̄)`.
pub fn avg_w(hatted: &CellTraceSet, g: &GasParams) -> Result<(ReformState, ReformState)> {
    let wc = to_reform(&hatted.center, g).map_err(|e| Error::Invariant(format!("cell center after limiting: {e}")))?;
    let mut wt = [ReformState::ZERO; 8];
    for (s, t) in hatted.traces.iter().enumerate() {
        wt[s] = to_reform(t, g).map_err(|e| Error::Invariant(format!("hatted trace: {e}")))?;
    }
    Ok((wc, simpson_w(&wc, &wt)))
}

/// `(16 Wc + Σ corners + 4 Σ edges)/36`.
#[inline]
pub fn simpson_w(wc: &ReformState, wt: &[ReformState; 8]) -> ReformState {
    let mut out = [0.0; NVAR];
    for k in 0..NVAR {
        let c: f64 = CORNERS.iter().map(|&s| wt[s][k]).sum();
        let e: f64 = EDGES.iter().map(|&s| wt[s][k]).sum();
        out[k] = (16.0 * wc[k] + c + 4.0 * e) / 36.0;
    }
    ReformState(out)
}

/// Rates for all stored point values, in `DofField` layout.
#[derive(Clone, Debug)]
pub struct PointRates {
    pub ex: Vec<ReformState>,
    pub ey: Vec<ReformState>,
    pub vx: Vec<ReformState>,
}

/// Point-value rates for every `ex`, `ey` and `vx` slot.
///
/// `wbar` holds `W̄` for every padded cell. `alpha` are the global
/// viscosities (already including the flux scale `mu`).
pub fn point_rhs(p: &PaddedField, wbar: &Grid2<ReformState>, alpha: (f64, f64), mu: f64, mesh: &Mesh, g: &GasParams) -> Result<PointRates> {
    let (nx, ny) = (mesh.nx as isize, mesh.ny as isize);
    let (dx, dy) = (mesh.dx, mesh.dy);

    let ex: Vec<ReformState> = (0..ny)
        .into_par_iter()
        .flat_map_iter(|j| {
            (0..=nx).map(move |k| {
                let this = p.ex.get(k, j);
                let corners_a = [p.vx.get(k - 1, j), p.vx.get(k, j), p.vx.get(k - 1, j + 1), p.vx.get(k, j + 1)];
                let corners_b = [p.vx.get(k, j), p.vx.get(k + 1, j), p.vx.get(k, j + 1), p.vx.get(k + 1, j + 1)];
                let dp = edge_one_sided(
                    wbar.get(k - 1, j),
                    p.ex.get(k - 1, j),
                    this,
                    [p.ey.get(k - 1, j), p.ey.get(k - 1, j + 1)],
                    corners_a,
                    dx,
                );
                let dm = -edge_one_sided(wbar.get(k, j), p.ex.get(k + 1, j), this, [p.ey.get(k, j), p.ey.get(k, j + 1)], corners_b, dx);
                let dyv = central(p.vx.get(k, j), p.vx.get(k, j + 1), dy);
                let c = JacCoeffs::new(this, g);
                let nrm = upwind(|d| c.apply_x(d), &dp, &dm, alpha.0, mu);
                let tan = c.apply_y(&dyv);
                -(nrm + tan * mu)
            })
        })
        .collect();

    let ey: Vec<ReformState> = (0..=ny)
        .into_par_iter()
        .flat_map_iter(|k| {
            (0..nx).map(move |i| {
                let this = p.ey.get(i, k);
                let corners_a = [p.vx.get(i, k - 1), p.vx.get(i + 1, k - 1), p.vx.get(i, k), p.vx.get(i + 1, k)];
                let corners_b = [p.vx.get(i, k), p.vx.get(i + 1, k), p.vx.get(i, k + 1), p.vx.get(i + 1, k + 1)];
                let dp = edge_one_sided(
                    wbar.get(i, k - 1),
                    p.ey.get(i, k - 1),
                    this,
                    [p.ex.get(i, k - 1), p.ex.get(i + 1, k - 1)],
                    corners_a,
                    dy,
                );
                let dm = -edge_one_sided(wbar.get(i, k), p.ey.get(i, k + 1), this, [p.ex.get(i, k), p.ex.get(i + 1, k)], corners_b, dy);
                let dxv = central(p.vx.get(i, k), p.vx.get(i + 1, k), dx);
                let c = JacCoeffs::new(this, g);
                let nrm = upwind(|d| c.apply_y(d), &dp, &dm, alpha.1, mu);
                let tan = c.apply_x(&dxv);
                -(nrm + tan * mu)
            })
        })
        .collect();

    let vx: Vec<ReformState> = (0..=ny)
        .into_par_iter()
        .flat_map_iter(|l| {
            (0..=nx).map(move |k| {
                let this = p.vx.get(k, l);
                let dxp = vertex_one_sided(p.vx.get(k - 1, l), p.ey.get(k - 1, l), this, dx);
                let dxm = -vertex_one_sided(p.vx.get(k + 1, l), p.ey.get(k, l), this, dx);
                let dyp = vertex_one_sided(p.vx.get(k, l - 1), p.ex.get(k, l - 1), this, dy);
                let dym = -vertex_one_sided(p.vx.get(k, l + 1), p.ex.get(k, l), this, dy);
                let c = JacCoeffs::new(this, g);
                let tx = upwind(|d| c.apply_x(d), &dxp, &dxm, alpha.0, mu);
                let ty = upwind(|d| c.apply_y(d), &dyp, &dym, alpha.1, mu);
                -(tx + ty)
            })
        })
        .collect();

    for (name, v) in [("ex", &ex), ("ey", &ey), ("vx", &vx)] {
        if let Some(pos) = v.iter().position(|r| !r.is_finite()) {
            return Err(Error::Invariant(format!("non-finite point rate at {name}[{pos}]")));
        }
    }
    Ok(PointRates { ex, ey, vx })
}
