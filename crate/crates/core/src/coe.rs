//! Convex oscillation elimination.
//!
//! Each cell carries a biquadratic built from its nine nodal states (the
//! eight traces and the center). Its discrepancy to the four neighbor
//! polynomials, measured in a velocity- and field-weighted seminorm and
//! normalized by the largest deviation of any cell from the domain mean,
//! gives directional damping rates. The cell's states are then blended
//! toward the cell average by `θ = exp(−C0 (σ1 Δt/Δx + σ2 Δt/Δy))`.
//!
//! Under `U ↦ P U` with `P = diag(μ, μ, μ, μ, √μ, √μ, √μ, μ)` the squared
//! seminorm scales by `μ²`, so the ratio entering `σ` is unchanged.

use crate::error::{Error, Result};
use crate::indicator::TroubleMask;
use crate::mesh::trace::{D, L, LD, LU, R, RD, RU, U};
use crate::mesh::{CellTraceSet, Grid2, Mesh};
use crate::state::{fast_speed_unchecked, ConservedState, Direction, GasParams};
use rayon::prelude::*;

/// Default damping strength.
pub const DEFAULT_C0: f64 = 43.0;

/// Relative density floor used for velocities inside the seminorm when a
/// polynomial dips to nonpositive density between its nodes.
pub const VELOCITY_RHO_FLOOR: f64 = 1e-3;

/// Tuning of the damping.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoeParams {
    pub c0: f64,
    /// Gauss points per direction.
    pub quad_points: usize,
}

impl Default for CoeParams {
    fn default() -> Self {
        CoeParams { c0: DEFAULT_C0, quad_points: 3 }
    }
}

impl CoeParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c0 > 0.0 && self.c0.is_finite()) {
            return Err(Error::Config(format!("c0 must be positive, got {}", self.c0)));
        }
        if self.quad_points < 3 {
            return Err(Error::Config(format!("quad_points must be at least 3, got {}", self.quad_points)));
        }
        Ok(())
    }
}

/// Seminorm of the difference `d = U − Ǔ` with velocity and field
/// weights taken from `U` and `Ǔ`.
#[inline]
fn seminorm_core(u: &ConservedState, uc: &ConservedState, d: &ConservedState, rho_u: f64, rho_c: f64) -> f64 {
    let v = [u[1] / rho_u, u[2] / rho_u, u[3] / rho_u];
    let w = [uc[1] / rho_c, uc[2] / rho_c, uc[3] / rho_c];
    let v2: f64 = v.iter().map(|x| x * x).sum();
    let w2: f64 = w.iter().map(|x| x * x).sum();
    let mut s = d[7] * d[7] + 0.125 * (v2 * v2 + w2 * w2) * d[0] * d[0];
    for l in 0..3 {
        s += 0.125 * (v[l] * v[l] + w[l] * w[l]) * d[1 + l] * d[1 + l];
        s += 0.125 * (u[4 + l] * u[4 + l] + uc[4 + l] * uc[4 + l]) * d[4 + l] * d[4 + l];
    }
    s
}

/// Squared seminorm `‖U − Ǔ‖★²` of two states with positive density.
pub fn star_norm_sq(u: &ConservedState, uc: &ConservedState) -> Result<f64> {
    if !(u[0] > 0.0 && uc[0] > 0.0) {
        return Err(Error::Domain(format!("star_norm_sq: nonpositive density ({}, {})", u[0], uc[0])));
    }
    Ok(seminorm_core(u, uc, &(*u - *uc), u[0], uc[0]))
}

/// Squared seminorm with velocities computed from `max(ρ, floor)`.
#[inline]
pub fn star_norm_sq_floored(u: &ConservedState, uc: &ConservedState, floor: f64) -> f64 {
    seminorm_core(u, uc, &(*u - *uc), u[0].max(floor), uc[0].max(floor))
}

/// Floored seminorm of `(base + du) − (base + dc)` with the difference
/// taken as `du − dc`, so that equal offsets give exactly zero.
#[inline]
fn star_norm_sq_offsets(base: &ConservedState, du: &ConservedState, dc: &ConservedState, floor: f64) -> f64 {
    let (u, uc) = (*base + *du, *base + *dc);
    seminorm_core(&u, &uc, &(*du - *dc), u[0].max(floor), uc[0].max(floor))
}

/// Quadratic Lagrange basis on the nodes `{−½, 0, ½}` at `ξ`.
#[inline]
pub fn lagrange3(xi: f64) -> [f64; 3] {
    [2.0 * xi * (xi - 0.5), 1.0 - 4.0 * xi * xi, 2.0 * xi * (xi + 0.5)]
}

/// Biquadratic interpolant on the reference cell `[−½, ½]²` through the
/// nine nodal states. `nodes[b][a]` sits at `(ξ_a, η_b)` with node
/// coordinates `−½, 0, ½`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Biquadratic {
    pub nodes: [[ConservedState; 3]; 3],
}

impl Biquadratic {
    /// Interpolant of a cell's traces and center.
    pub fn reconstruct(set: &CellTraceSet) -> Biquadratic {
        let t = &set.traces;
        Biquadratic { nodes: [[t[LD], t[D], t[RD]], [t[L], set.center, t[R]], [t[LU], t[U], t[RU]]] }
    }

    /// Value at reference coordinates `(ξ, η)`; outside `[−½, ½]²` this
    /// is the polynomial extension.
    #[inline]
    pub fn eval(&self, xi: f64, eta: f64) -> ConservedState {
        let (lx, ly) = (lagrange3(xi), lagrange3(eta));
        let mut out = ConservedState::ZERO;
        for b in 0..3 {
            for a in 0..3 {
                out += self.nodes[b][a] * (lx[a] * ly[b]);
            }
        }
        out
    }

    /// `P(ξ, η) − base`, summed from the nodal offsets so that a
    /// polynomial with all nodes equal to `base` gives exactly zero.
    #[inline]
    pub fn eval_offset(&self, xi: f64, eta: f64, base: &ConservedState) -> ConservedState {
        let (lx, ly) = (lagrange3(xi), lagrange3(eta));
        let mut out = ConservedState::ZERO;
        for b in 0..3 {
            for a in 0..3 {
                out += (self.nodes[b][a] - *base) * (lx[a] * ly[b]);
            }
        }
        out
    }

    /// Simpson tensor quadrature of the interpolant, normalized to a mean.
    pub fn simpson_mean(&self) -> ConservedState {
        const W: [f64; 3] = [1.0, 4.0, 1.0];
        let mut out = ConservedState::ZERO;
        for b in 0..3 {
            for a in 0..3 {
                out += self.nodes[b][a] * (W[a] * W[b]);
            }
        }
        out * (1.0 / 36.0)
    }
}

/// Gauss–Legendre rule on `[−½, ½]` with weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(q: usize) -> GaussRule {
        if q == 3 {
            let x = 0.5 * (0.6f64).sqrt();
            return GaussRule { nodes: vec![-x, 0.0, x], weights: vec![5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0] };
        }
        // Newton iteration on the Legendre polynomial P_q from the
        // Chebyshev initial guesses.
        let mut nodes = Vec::with_capacity(q);
        let mut weights = Vec::with_capacity(q);
        for i in 0..q {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=q {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = q as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes.push(-0.5 * x);
            weights.push(1.0 / ((1.0 - x * x) * dp * dp));
        }
        GaussRule { nodes, weights }
    }

    /// `∫ f` over a cell of the given area, with `f` in reference coordinates.
    #[inline]
    pub fn integrate(&self, area: f64, f: impl Fn(f64, f64) -> f64) -> f64 {
        let mut s = 0.0;
        for (wy, &y) in self.weights.iter().zip(&self.nodes) {
            for (wx, &x) in self.weights.iter().zip(&self.nodes) {
                s += wx * wy * f(x, y);
            }
        }
        area * s
    }
}

/// `(∫_cell ‖P − Ū^Ω‖★²)^{1/2}` for one cell.
pub fn cell_deviation(p: &Biquadratic, mean: &ConservedState, floor: f64, rule: &GaussRule, area: f64) -> f64 {
    let zero = ConservedState::ZERO;
    rule.integrate(area, |x, y| star_norm_sq_offsets(mean, &p.eval_offset(x, y, mean), &zero, floor)).sqrt()
}

/// `Θ = max_cells (∫ ‖P − Ū^Ω‖★²)^{1/2}` over the interior cells of a
/// padded polynomial grid, with `Ū^Ω` the mean of the interior averages.
pub fn normalization_theta(polys: &Grid2<Biquadratic>, avg: &Grid2<ConservedState>, mesh: &Mesh, rule: &GaussRule) -> f64 {
    let (nx, ny) = (mesh.nx, mesh.ny);
    // Accumulate offsets from the first cell so a constant field has a
    // mean equal to its value.
    let first = *avg.get(0, 0);
    let mut sum = ConservedState::ZERO;
    for j in 0..ny as isize {
        for i in 0..nx as isize {
            sum += *avg.get(i, j) - first;
        }
    }
    let mean = first + sum * (1.0 / (nx * ny) as f64);
    let area = mesh.cell_area();
    (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = ((idx % nx) as isize, (idx / nx) as isize);
            let floor = VELOCITY_RHO_FLOOR * avg.get(i, j)[0];
            cell_deviation(polys.get(i, j), &mean, floor, rule, area)
        })
        .reduce(|| 0.0, f64::max)
}

/// `η = (∫_cell ‖P − P_nb‖★²)^{1/2}` where the neighbor polynomial is
/// evaluated on this cell after shifting by `(sx, sy)` cells.
pub fn discrepancy(p: &Biquadratic, nb: &Biquadratic, shift: (f64, f64), floor: f64, rule: &GaussRule, area: f64) -> f64 {
    let base = p.nodes[1][1];
    rule.integrate(area, |x, y| {
        let du = p.eval_offset(x, y, &base);
        let dn = nb.eval_offset(x + shift.0, y + shift.1, &base);
        star_norm_sq_offsets(&base, &du, &dn, floor)
    })
    .sqrt()
}

/// `λℓ = μ (|v̄ℓ| + c_{f,ℓ}(Ū))`.
#[inline]
pub fn max_wave_speed(avg: &ConservedState, dir: Direction, mu: f64, g: &GasParams) -> f64 {
    mu * ((avg[1 + dir.axis()] / avg[0]).abs() + fast_speed_unchecked(avg, dir, g))
}

/// Directional damping rates `(σ1, σ2)` of cell `(i, j)`:
/// `σℓ = λℓ (η⁻ + η⁺)/(2Θ)`, zero when `Θ = 0`.
#[allow(clippy::too_many_arguments)]
pub fn damping_sigma(
    polys: &Grid2<Biquadratic>,
    avg: &ConservedState,
    i: isize,
    j: isize,
    theta_norm: f64,
    mu: f64,
    mesh: &Mesh,
    g: &GasParams,
    rule: &GaussRule,
) -> (f64, f64) {
    if theta_norm == 0.0 {
        return (0.0, 0.0);
    }
    let p = polys.get(i, j);
    let floor = VELOCITY_RHO_FLOOR * avg[0];
    let area = mesh.cell_area();
    // A point at reference ξ in this cell sits at ξ − 1 in the east
    // neighbor's coordinates and at ξ + 1 in the west neighbor's.
    let eta_l = discrepancy(p, polys.get(i - 1, j), (1.0, 0.0), floor, rule, area);
    let eta_r = discrepancy(p, polys.get(i + 1, j), (-1.0, 0.0), floor, rule, area);
    let eta_d = discrepancy(p, polys.get(i, j - 1), (0.0, 1.0), floor, rule, area);
    let eta_u = discrepancy(p, polys.get(i, j + 1), (0.0, -1.0), floor, rule, area);
    let l1 = max_wave_speed(avg, Direction::X, mu, g);
    let l2 = max_wave_speed(avg, Direction::Y, mu, g);
    (l1 * (eta_l + eta_r) / (2.0 * theta_norm), l2 * (eta_d + eta_u) / (2.0 * theta_norm))
}

/// `θ^OE = exp(−C0 (σ1 Δt/Δx + σ2 Δt/Δy))`.
#[inline]
pub fn theta_oe(sigma: (f64, f64), dt: f64, mesh: &Mesh, c0: f64) -> f64 {
    (-c0 * (sigma.0 * dt / mesh.dx + sigma.1 * dt / mesh.dy)).exp()
}

/// Blend every state of a cell toward its average by `θ`.
#[inline]
pub fn coe_blend(set: &CellTraceSet, avg: &ConservedState, theta: f64) -> CellTraceSet {
    set.blend_toward(avg, theta)
}

/// Per interior cell damping factors (1 outside the mask) and `Θ`.
///
/// `sets` and `avg` are padded grids; ghost cells provide the neighbor
/// polynomials at the domain boundary. A given `theta_norm` replaces the
/// freshly computed normalization. When no cell is flagged nothing is
/// evaluated and the returned normalization is the given one, if any.
#[allow(clippy::too_many_arguments)]
pub fn damping_factors(
    sets: &Grid2<CellTraceSet>,
    avg: &Grid2<ConservedState>,
    mask: &TroubleMask,
    dt: f64,
    mu: f64,
    mesh: &Mesh,
    g: &GasParams,
    params: &CoeParams,
    theta_norm: Option<f64>,
) -> (Vec<f64>, Option<f64>) {
    if mask.count() == 0 {
        return (vec![1.0; mesh.nx * mesh.ny], theta_norm);
    }
    let rule = GaussRule::new(params.quad_points);
    let polys = sets.map(Biquadratic::reconstruct);
    let theta_norm = theta_norm.unwrap_or_else(|| normalization_theta(&polys, avg, mesh, &rule));
    let nx = mesh.nx;
    let factors = (0..nx * mesh.ny)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % nx, idx / nx);
            if !mask.get(i, j) {
                return 1.0;
            }
            let (ii, jj) = (i as isize, j as isize);
            let sigma = damping_sigma(&polys, avg.get(ii, jj), ii, jj, theta_norm, mu, mesh, g, &rule);
            theta_oe(sigma, dt, mesh, params.c0)
        })
        .collect();
    (factors, Some(theta_norm))
}
