//! Conservative cell-average right-hand side.
//!
//! Each edge flux is the Simpson combination of three two-state
//! Lax–Friedrichs fluxes evaluated at the edge's two vertices and its
//! midpoint, using the one-sided limited traces of the two adjacent
//! cells. Jumps of the normal magnetic field across an edge feed the
//! discrete Godunov–Powell source. Both are computed once per edge.

use crate::error::{Error, Result};
use crate::mesh::trace::{D, L, LD, LU, R, RD, RU, U};
use crate::mesh::{CellTraceSet, Grid2, Mesh};
use crate::state::{pp_wave_estimate_pre, ConservedState, Direction, GasParams, WaveData};
use rayon::prelude::*;

/// Physical flux `F_ℓ(U)` without an admissibility check.
#[inline]
pub fn physical_flux_unchecked(u: &ConservedState, dir: Direction, g: &GasParams) -> ConservedState {
    let rho = u[0];
    let v = [u[1] / rho, u[2] / rho, u[3] / rho];
    let b = [u[4], u[5], u[6]];
    let b2 = b[0] * b[0] + b[1] * b[1] + b[2] * b[2];
    let m2 = u[1] * v[0] + u[2] * v[1] + u[3] * v[2];
    let p = (g.gamma - 1.0) * (u[7] - 0.5 * m2 - 0.5 * b2);
    let ptot = p + 0.5 * b2;
    let vb = v[0] * b[0] + v[1] * b[1] + v[2] * b[2];
    match dir {
        Direction::X => ConservedState([
            u[1],
            u[1] * v[0] - b[0] * b[0] + ptot,
            u[1] * v[1] - b[0] * b[1],
            u[1] * v[2] - b[0] * b[2],
            0.0,
            v[0] * b[1] - v[1] * b[0],
            v[0] * b[2] - v[2] * b[0],
            v[0] * (u[7] + ptot) - b[0] * vb,
        ]),
        Direction::Y => ConservedState([
            u[2],
            u[2] * v[0] - b[1] * b[0],
            u[2] * v[1] - b[1] * b[1] + ptot,
            u[2] * v[2] - b[1] * b[2],
            v[1] * b[0] - v[0] * b[1],
            0.0,
            v[1] * b[2] - v[2] * b[1],
            v[1] * (u[7] + ptot) - b[1] * vb,
        ]),
    }
}

/// Physical flux `F_ℓ(U)` of an admissible state.
pub fn physical_flux(u: &ConservedState, dir: Direction, g: &GasParams) -> Result<ConservedState> {
    if !u.is_admissible() {
        return Err(Error::Domain(format!("physical_flux: inadmissible state {:?}", u.0)));
    }
    Ok(physical_flux_unchecked(u, dir, g))
}

/// Godunov–Powell source vector `S(U) = (0, B, v, v·B)`.
#[inline]
pub fn powell_vector(u: &ConservedState) -> ConservedState {
    let v = u.velocity();
    let b = u.b();
    ConservedState([0.0, b[0], b[1], b[2], v[0], v[1], v[2], v[0] * b[0] + v[1] * b[1] + v[2] * b[2]])
}

/// Lax–Friedrichs flux `(F(U⁻) + F(U⁺) − α(U⁺ − U⁻))/2`.
#[inline]
pub fn lf_flux(um: &ConservedState, up: &ConservedState, dir: Direction, alpha: f64, g: &GasParams) -> ConservedState {
    lf_flux_scaled(um, up, dir, alpha, 1.0, g)
}

/// Lax–Friedrichs flux of the system with physical flux `μ F`.
#[inline]
fn lf_flux_scaled(um: &ConservedState, up: &ConservedState, dir: Direction, alpha: f64, mu: f64, g: &GasParams) -> ConservedState {
    let fm = physical_flux_unchecked(um, dir, g);
    let fp = physical_flux_unchecked(up, dir, g);
    let mut out = [0.0; 8];
    for k in 0..8 {
        out[k] = 0.5 * (mu * (fm[k] + fp[k]) - alpha * (up[k] - um[k]));
    }
    ConservedState(out)
}

/// Simpson weights of the three points along an edge.
pub const SIMPSON_W: [f64; 3] = [1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0];

/// Simpson combination of three LF fluxes over the pairs `(minus, plus)`
/// listed along one edge.
pub fn edge_flux(pairs: &[(ConservedState, ConservedState); 3], dir: Direction, alpha: f64, g: &GasParams) -> ConservedState {
    let f: Vec<ConservedState> = pairs.iter().map(|(m, p)| lf_flux(m, p, dir, alpha, g)).collect();
    crate::mesh::simpson_edge_average(&f[0], &f[1], &f[2])
}

/// The three `(minus, plus)` trace pairs on the x-edge between `left`
/// and `right`, ordered bottom vertex, midpoint, top vertex.
#[inline]
pub fn x_edge_pairs(left: &CellTraceSet, right: &CellTraceSet) -> [(ConservedState, ConservedState); 3] {
    [(left.traces[RD], right.traces[LD]), (left.traces[R], right.traces[L]), (left.traces[RU], right.traces[LU])]
}

/// The three `(minus, plus)` trace pairs on the y-edge between `down`
/// and `up`, ordered left vertex, midpoint, right vertex.
#[inline]
pub fn y_edge_pairs(down: &CellTraceSet, up: &CellTraceSet) -> [(ConservedState, ConservedState); 3] {
    [(down.traces[LU], up.traces[LD]), (down.traces[U], up.traces[D]), (down.traces[RU], up.traces[RD])]
}

/// Flux and Powell edge term of one edge.
#[derive(Clone, Copy, Debug, Default)]
pub struct EdgeTerms {
    pub flux: ConservedState,
    pub source: ConservedState,
}

/// Flux and Powell source term `𝒮 = Σ w [[B_n]] S(⟨U⟩)` of one edge.
#[inline]
pub fn edge_terms(pairs: &[(ConservedState, ConservedState); 3], dir: Direction, alpha: f64, mu: f64, g: &GasParams) -> EdgeTerms {
    let bi = dir.b_index();
    let mut flux = ConservedState::ZERO;
    let mut source = ConservedState::ZERO;
    for (w, (m, p)) in SIMPSON_W.iter().zip(pairs.iter()) {
        flux += lf_flux_scaled(m, p, dir, alpha, mu, g) * *w;
        let jump = p[bi] - m[bi];
        if jump != 0.0 {
            let mean = (*m + *p) * 0.5;
            source += powell_vector(&mean) * (mu * w * jump);
        }
    }
    EdgeTerms { flux, source }
}

/// Powell source of one cell from the edge terms of its four edges.
#[inline]
pub fn powell_source(
    west: &ConservedState,
    east: &ConservedState,
    south: &ConservedState,
    north: &ConservedState,
    mesh: &Mesh,
) -> ConservedState {
    (*west + *east) * (0.5 / mesh.dx) + (*south + *north) * (0.5 / mesh.dy)
}

/// Global viscosities `(α1, α2)` including the β jump terms.
///
/// `sets` is the padded grid of hatted trace sets; the maxima run over
/// interior cells and over all edges that carry a flux.
pub fn global_viscosity(sets: &Grid2<CellTraceSet>, mesh: &Mesh, g: &GasParams) -> (f64, f64) {
    let (nx, ny) = (mesh.nx as isize, mesh.ny as isize);
    let wave = |u: &ConservedState, d: Direction| WaveData::new(u, d, g);
    let pair = |a: &ConservedState, b: &ConservedState, d: Direction| {
        let (wa, wb) = (wave(a, d), wave(b, d));
        pp_wave_estimate_pre(&wa, &wb).max(pp_wave_estimate_pre(&wb, &wa))
    };

    // α̂: per interior cell, its own opposite traces and the neighbors'
    // facing traces, each in both argument orders.
    let (a1, a2) = (0..ny)
        .into_par_iter()
        .map(|j| {
            let mut a1 = 0.0f64;
            let mut a2 = 0.0f64;
            for i in 0..nx {
                let c = sets.get(i, j);
                let (w, e) = (sets.get(i - 1, j), sets.get(i + 1, j));
                let (s, n) = (sets.get(i, j - 1), sets.get(i, j + 1));
                for (rs, ls) in [(RU, LU), (R, L), (RD, LD)] {
                    a1 = a1.max(pair(&c.traces[rs], &c.traces[ls], Direction::X));
                    a1 = a1.max(pair(&e.traces[ls], &w.traces[rs], Direction::X));
                }
                for (us, ds) in [(RU, RD), (U, D), (LU, LD)] {
                    a2 = a2.max(pair(&c.traces[us], &c.traces[ds], Direction::Y));
                    a2 = a2.max(pair(&n.traces[ds], &s.traces[us], Direction::Y));
                }
            }
            (a1, a2)
        })
        .reduce(|| (0.0, 0.0), |x, y| (x.0.max(y.0), x.1.max(y.1)));

    let beta = |m: &ConservedState, p: &ConservedState, bi: usize| (p[bi] - m[bi]).abs() / (2.0 * (0.5 * (m[0] + p[0])).sqrt());
    let b1 = (0..ny)
        .into_par_iter()
        .map(|j| {
            let mut b = 0.0f64;
            for k in 0..=nx {
                for (m, p) in x_edge_pairs(sets.get(k - 1, j), sets.get(k, j)) {
                    b = b.max(beta(&m, &p, 4));
                }
            }
            b
        })
        .reduce(|| 0.0, f64::max);
    let b2 = (0..=ny)
        .into_par_iter()
        .map(|k| {
            let mut b = 0.0f64;
            for i in 0..nx {
                for (m, p) in y_edge_pairs(sets.get(i, k - 1), sets.get(i, k)) {
                    b = b.max(beta(&m, &p, 5));
                }
            }
            b
        })
        .reduce(|| 0.0, f64::max);
    (a1 + b1, a2 + b2)
}

/// Cell-average rates `L0 = −ΔF/Δ − S` for every interior cell, with
/// fluxes scaled by `mu` (1 for the physical system).
pub fn average_rhs(sets: &Grid2<CellTraceSet>, alpha: (f64, f64), mu: f64, mesh: &Mesh, g: &GasParams) -> Result<Vec<ConservedState>> {
    let (nx, ny) = (mesh.nx, mesh.ny);
    let xw = nx + 1;
    let xe: Vec<EdgeTerms> = (0..ny * xw)
        .into_par_iter()
        .map(|idx| {
            let (k, j) = ((idx % xw) as isize, (idx / xw) as isize);
            edge_terms(&x_edge_pairs(sets.get(k - 1, j), sets.get(k, j)), Direction::X, alpha.0, mu, g)
        })
        .collect();
    let ye: Vec<EdgeTerms> = (0..(ny + 1) * nx)
        .into_par_iter()
        .map(|idx| {
            let (i, k) = ((idx % nx) as isize, (idx / nx) as isize);
            edge_terms(&y_edge_pairs(sets.get(i, k - 1), sets.get(i, k)), Direction::Y, alpha.1, mu, g)
        })
        .collect();
    let rates: Vec<ConservedState> = (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % nx, idx / nx);
            let (w, e) = (&xe[j * xw + i], &xe[j * xw + i + 1]);
            let (s, n) = (&ye[j * nx + i], &ye[(j + 1) * nx + i]);
            let mut r = [0.0; 8];
            for k in 0..8 {
                r[k] = -(e.flux[k] - w.flux[k]) / mesh.dx
                    - (n.flux[k] - s.flux[k]) / mesh.dy
                    - (0.5 * (w.source[k] + e.source[k]) / mesh.dx + 0.5 * (s.source[k] + n.source[k]) / mesh.dy);
            }
            ConservedState(r)
        })
        .collect();
    if let Some(pos) = rates.iter().position(|r| !r.is_finite()) {
        return Err(Error::Invariant(format!("non-finite average rate in cell ({}, {})", pos % nx, pos / nx)));
    }
    Ok(rates)
}
