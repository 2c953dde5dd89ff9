//! Grid geometry and storage of the dual degrees of freedom.
//!
//! Each cell `(i, j)` owns one conserved cell average. Point values live
//! on shared slots: x-edge midpoints `ex(k, j)` at `(x_k, y_{j+1/2})`
//! with `k ∈ 0..=nx`, y-edge midpoints `ey(i, k)` at `(x_{i+1/2}, y_k)`
//! and vertices `vx(k, l)` at `(x_k, y_l)`. Here `x_k = x0 + k·dx` is a
//! cell face, so cell `i` spans `[x_i, x_{i+1}]`.
//!
//! Ghost layers are never stored: [`ghost_view`] materializes a padded
//! copy with one extra cell (and its points) on every side.

use crate::error::{Error, Result};
use crate::state::{ConservedState, GasParams, Primitive, ReformState};

/// Side of the rectangular domain, used to index `Mesh::bc`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left = 0,
    Right = 1,
    Bottom = 2,
    Top = 3,
}

/// Prescribed inflow on part or all of one side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Inflow {
    /// The injected state. `None` is a configuration error caught by
    /// [`Mesh::validate`].
    pub state: Option<Primitive>,
    /// Open interval of the tangential coordinate where the inflow
    /// applies. `None` means the whole side. Outside the window the side
    /// behaves as outflow.
    pub window: Option<(f64, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Boundary {
    Periodic,
    Outflow,
    Inflow(Inflow),
}

/// Uniform Cartesian mesh with per-side boundary tags
/// `[left, right, bottom, top]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub bc: [Boundary; 4],
}

impl Mesh {
    /// Mesh covering `[x0, x1] × [y0, y1]`.
    pub fn new(nx: usize, ny: usize, (x0, x1): (f64, f64), (y0, y1): (f64, f64), bc: [Boundary; 4]) -> Result<Mesh> {
        let m = Mesh { nx, ny, x0, y0, dx: (x1 - x0) / nx as f64, dy: (y1 - y0) / ny as f64, bc };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 3 || self.ny < 3 {
            return Err(Error::Config(format!("mesh needs at least 3x3 cells, got {}x{}", self.nx, self.ny)));
        }
        if !(self.dx > 0.0 && self.dy > 0.0) {
            return Err(Error::Config("mesh spacing must be positive".into()));
        }
        let periodic_x = [&self.bc[0], &self.bc[1]].map(|b| matches!(b, Boundary::Periodic));
        let periodic_y = [&self.bc[2], &self.bc[3]].map(|b| matches!(b, Boundary::Periodic));
        if periodic_x[0] != periodic_x[1] || periodic_y[0] != periodic_y[1] {
            return Err(Error::Config("periodic boundaries must be paired".into()));
        }
        for b in &self.bc {
            if let Boundary::Inflow(inf) = b {
                if inf.state.is_none() {
                    return Err(Error::Config("inflow boundary without a prescribed state".into()));
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn cell_center(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x0 + (i as f64 + 0.5) * self.dx, self.y0 + (j as f64 + 0.5) * self.dy)
    }

    #[inline]
    pub fn face_x(&self, k: isize) -> f64 {
        self.x0 + k as f64 * self.dx
    }

    #[inline]
    pub fn face_y(&self, l: isize) -> f64 {
        self.y0 + l as f64 * self.dy
    }

    #[inline]
    pub fn center_x(&self, i: isize) -> f64 {
        self.x0 + (i as f64 + 0.5) * self.dx
    }

    #[inline]
    pub fn center_y(&self, j: isize) -> f64 {
        self.y0 + (j as f64 + 0.5) * self.dy
    }

    pub fn periodic_x(&self) -> bool {
        matches!(self.bc[0], Boundary::Periodic)
    }

    pub fn periodic_y(&self) -> bool {
        matches!(self.bc[2], Boundary::Periodic)
    }

    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }
}

/// Position of one of the eight interface points of a cell.
pub mod trace {
    pub const LD: usize = 0;
    pub const D: usize = 1;
    pub const RD: usize = 2;
    pub const L: usize = 3;
    pub const R: usize = 4;
    pub const LU: usize = 5;
    pub const U: usize = 6;
    pub const RU: usize = 7;
    /// Corner slots.
    pub const CORNERS: [usize; 4] = [LD, RD, LU, RU];
    /// Edge-midpoint slots.
    pub const EDGES: [usize; 4] = [D, L, R, U];
}

/// Storage slot of a shared point value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointRef {
    Ex(usize, usize),
    Ey(usize, usize),
    Vx(usize, usize),
}

/// The eight point slots of cell `(i, j)` in trace order
/// `LD, D, RD, L, R, LU, U, RU`.
pub fn cell_points(i: usize, j: usize) -> [PointRef; 8] {
    [
        PointRef::Vx(i, j),
        PointRef::Ey(i, j),
        PointRef::Vx(i + 1, j),
        PointRef::Ex(i, j),
        PointRef::Ex(i + 1, j),
        PointRef::Vx(i, j + 1),
        PointRef::Ey(i, j + 1),
        PointRef::Vx(i + 1, j + 1),
    ]
}

/// All degrees of freedom on the mesh.
#[derive(Clone, Debug, PartialEq)]
pub struct DofField {
    pub nx: usize,
    pub ny: usize,
    /// `nx × ny` cell averages, i fastest.
    pub avg: Vec<ConservedState>,
    /// `(nx+1) × ny` x-edge midpoints.
    pub ex: Vec<ReformState>,
    /// `nx × (ny+1)` y-edge midpoints.
    pub ey: Vec<ReformState>,
    /// `(nx+1) × (ny+1)` vertices.
    pub vx: Vec<ReformState>,
}

impl DofField {
    pub fn zeros(nx: usize, ny: usize) -> DofField {
        DofField {
            nx,
            ny,
            avg: vec![ConservedState::ZERO; nx * ny],
            ex: vec![ReformState::ZERO; (nx + 1) * ny],
            ey: vec![ReformState::ZERO; nx * (ny + 1)],
            vx: vec![ReformState::ZERO; (nx + 1) * (ny + 1)],
        }
    }

    #[inline]
    pub fn avg_at(&self, i: usize, j: usize) -> &ConservedState {
        &self.avg[j * self.nx + i]
    }
    #[inline]
    pub fn avg_mut(&mut self, i: usize, j: usize) -> &mut ConservedState {
        &mut self.avg[j * self.nx + i]
    }
    #[inline]
    pub fn ex_at(&self, k: usize, j: usize) -> &ReformState {
        &self.ex[j * (self.nx + 1) + k]
    }
    #[inline]
    pub fn ex_mut(&mut self, k: usize, j: usize) -> &mut ReformState {
        &mut self.ex[j * (self.nx + 1) + k]
    }
    #[inline]
    pub fn ey_at(&self, i: usize, k: usize) -> &ReformState {
        &self.ey[k * self.nx + i]
    }
    #[inline]
    pub fn ey_mut(&mut self, i: usize, k: usize) -> &mut ReformState {
        &mut self.ey[k * self.nx + i]
    }
    #[inline]
    pub fn vx_at(&self, k: usize, l: usize) -> &ReformState {
        &self.vx[l * (self.nx + 1) + k]
    }
    #[inline]
    pub fn vx_mut(&mut self, k: usize, l: usize) -> &mut ReformState {
        &mut self.vx[l * (self.nx + 1) + k]
    }

    pub fn point(&self, p: PointRef) -> &ReformState {
        match p {
            PointRef::Ex(k, j) => self.ex_at(k, j),
            PointRef::Ey(i, k) => self.ey_at(i, k),
            PointRef::Vx(k, l) => self.vx_at(k, l),
        }
    }

    /// Shapes agree with the mesh.
    pub fn matches(&self, mesh: &Mesh) -> bool {
        let (nx, ny) = (mesh.nx, mesh.ny);
        self.nx == nx
            && self.ny == ny
            && self.avg.len() == nx * ny
            && self.ex.len() == (nx + 1) * ny
            && self.ey.len() == nx * (ny + 1)
            && self.vx.len() == (nx + 1) * (ny + 1)
    }

    /// Make duplicated periodic point slots bitwise equal by copying the
    /// low-side slot onto the high-side one.
    pub fn sync_periodic(&mut self, mesh: &Mesh) {
        let (nx, ny) = (self.nx, self.ny);
        if mesh.periodic_x() {
            for j in 0..ny {
                *self.ex_mut(nx, j) = *self.ex_at(0, j);
            }
            for l in 0..=ny {
                *self.vx_mut(nx, l) = *self.vx_at(0, l);
            }
        }
        if mesh.periodic_y() {
            for i in 0..nx {
                *self.ey_mut(i, ny) = *self.ey_at(i, 0);
            }
            for k in 0..=nx {
                *self.vx_mut(k, ny) = *self.vx_at(k, 0);
            }
        }
    }

    /// Total of the cell averages times the cell area, per component.
    pub fn totals(&self, mesh: &Mesh) -> [f64; 8] {
        let mut t = [0.0; 8];
        for u in &self.avg {
            for k in 0..8 {
                t[k] += u[k];
            }
        }
        t.map(|x| x * mesh.cell_area())
    }
}

/// Per-cell one-sided conserved states: center plus 8 interface traces.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct CellTraceSet {
    pub center: ConservedState,
    /// Indexed by the constants in [`trace`].
    pub traces: [ConservedState; 8],
}

impl CellTraceSet {
    /// Blend every state toward `avg`: `avg + theta (state − avg)`.
    pub fn blend_toward(&self, avg: &ConservedState, theta: f64) -> CellTraceSet {
        CellTraceSet { center: avg.lerp(&self.center, theta), traces: self.traces.map(|t| avg.lerp(&t, theta)) }
    }

    pub fn all_admissible(&self) -> bool {
        self.center.is_admissible() && self.traces.iter().all(|t| t.is_admissible())
    }
}

/// Simpson edge average `(a + 4b + c)/6`.
#[inline]
pub fn simpson_edge_average(a: &ConservedState, b: &ConservedState, c: &ConservedState) -> ConservedState {
    let mut out = [0.0; 8];
    for k in 0..8 {
        out[k] = (a[k] + 4.0 * b[k] + c[k]) / 6.0;
    }
    ConservedState(out)
}

/// Dense 2D array with a one-element halo on every side, addressed by
/// signed indices starting at `-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid2<T> {
    pub data: Vec<T>,
    /// Number of entries per row including the halo.
    pub w: usize,
    pub h: usize,
}

impl<T: Copy> Grid2<T> {
    pub fn filled(w: usize, h: usize, v: T) -> Grid2<T> {
        Grid2 { data: vec![v; w * h], w, h }
    }

    #[inline]
    pub fn get(&self, i: isize, j: isize) -> &T {
        debug_assert!(i >= -1 && j >= -1 && ((i + 1) as usize) < self.w && ((j + 1) as usize) < self.h);
        &self.data[(j + 1) as usize * self.w + (i + 1) as usize]
    }

    #[inline]
    pub fn get_mut(&mut self, i: isize, j: isize) -> &mut T {
        let w = self.w;
        &mut self.data[(j + 1) as usize * w + (i + 1) as usize]
    }

    /// Apply `f` to every entry, preserving layout.
    pub fn map<U: Copy + Send, F: Fn(&T) -> U + Sync + Send>(&self, f: F) -> Grid2<U>
    where
        T: Sync,
    {
        use rayon::prelude::*;
        Grid2 { data: self.data.par_iter().map(f).collect(), w: self.w, h: self.h }
    }
}

/// Padded copy of a [`DofField`] with one ghost layer.
///
/// Index ranges: `avg(i, j)` for `i ∈ -1..=nx`, `j ∈ -1..=ny`;
/// `ex(k, j)` for `k ∈ -1..=nx+1`; `ey(i, k)` for `k ∈ -1..=ny+1`;
/// `vx(k, l)` for `k ∈ -1..=nx+1`, `l ∈ -1..=ny+1`.
#[derive(Clone, Debug)]
pub struct PaddedField {
    pub nx: usize,
    pub ny: usize,
    pub avg: Grid2<ConservedState>,
    pub ex: Grid2<ReformState>,
    pub ey: Grid2<ReformState>,
    pub vx: Grid2<ReformState>,
}

/// Ghost-side classification of one padded index along one axis.
#[derive(Clone, Copy)]
struct AxisMap {
    src: usize,
    ghost: Option<usize>,
}

fn map_axis(idx: isize, n: usize, is_face: bool, periodic: bool, lo_side: usize) -> AxisMap {
    let n_i = n as isize;
    let max = if is_face { n_i } else { n_i - 1 };
    let ghost = if idx < 0 {
        Some(lo_side)
    } else if idx > max {
        Some(lo_side + 1)
    } else {
        None
    };
    let src = if periodic {
        if is_face {
            if idx < 0 {
                idx + n_i
            } else if idx > n_i {
                idx - n_i
            } else {
                idx
            }
        } else {
            idx.rem_euclid(n_i)
        }
    } else {
        idx.clamp(0, max)
    };
    AxisMap { src: src as usize, ghost }
}

fn in_window(window: Option<(f64, f64)>, pos: f64, spacing: f64) -> bool {
    match window {
        None => true,
        Some((lo, hi)) => {
            let tol = 1e-9 * spacing;
            pos > lo + tol && pos < hi - tol
        }
    }
}

/// Inflow state for a ghost point, if the side is inflow and the
/// tangential position is inside its window.
pub fn inflow_at(mesh: &Mesh, side: usize, x: f64, y: f64) -> Option<&Primitive> {
    if let Boundary::Inflow(inf) = &mesh.bc[side] {
        let (pos, spacing) = if side < 2 { (y, mesh.dy) } else { (x, mesh.dx) };
        if in_window(inf.window, pos, spacing) {
            return inf.state.as_ref();
        }
    }
    None
}

/// Resolve a padded location: either a source index into interior
/// storage or a prescribed inflow state. Corners (ghost in both axes)
/// always use the periodic/outflow mapping.
fn resolve(mesh: &Mesh, ix: isize, iy: isize, x_face: bool, y_face: bool) -> std::result::Result<(usize, usize), &Primitive> {
    let ax = map_axis(ix, mesh.nx, x_face, mesh.periodic_x(), 0);
    let ay = map_axis(iy, mesh.ny, y_face, mesh.periodic_y(), 2);
    let x = if x_face { mesh.face_x(ix) } else { mesh.center_x(ix) };
    let y = if y_face { mesh.face_y(iy) } else { mesh.center_y(iy) };
    match (ax.ghost, ay.ghost) {
        (Some(s), None) | (None, Some(s)) => match inflow_at(mesh, s, x, y) {
            Some(p) => Err(p),
            None => Ok((ax.src, ay.src)),
        },
        _ => Ok((ax.src, ay.src)),
    }
}

/// Materialize the field with one ghost layer according to the mesh's
/// boundary tags.
pub fn ghost_view(field: &DofField, mesh: &Mesh, g: &GasParams) -> Result<PaddedField> {
    if !field.matches(mesh) {
        return Err(Error::Config("field shape does not match mesh".into()));
    }
    mesh.validate()?;
    let (nx, ny) = (mesh.nx, mesh.ny);

    let mut avg = Grid2::filled(nx + 2, ny + 2, ConservedState::ZERO);
    for j in -1..=ny as isize {
        for i in -1..=nx as isize {
            *avg.get_mut(i, j) = match resolve(mesh, i, j, false, false) {
                Ok((si, sj)) => *field.avg_at(si, sj),
                Err(p) => p.to_conserved(g.gamma),
            };
        }
    }

    let fill_points = |w: usize, h: usize, xf: bool, yf: bool, get: &dyn Fn(usize, usize) -> ReformState| {
        let mut grid = Grid2::filled(w, h, ReformState::ZERO);
        for j in -1..(h as isize - 1) {
            for i in -1..(w as isize - 1) {
                *grid.get_mut(i, j) = match resolve(mesh, i, j, xf, yf) {
                    Ok((si, sj)) => get(si, sj),
                    Err(p) => p.to_reform(g),
                };
            }
        }
        grid
    };

    let ex = fill_points(nx + 3, ny + 2, true, false, &|k, j| *field.ex_at(k, j));
    let ey = fill_points(nx + 2, ny + 3, false, true, &|i, k| *field.ey_at(i, k));
    let vx = fill_points(nx + 3, ny + 3, true, true, &|k, l| *field.vx_at(k, l));

    Ok(PaddedField { nx, ny, avg, ex, ey, vx })
}

impl PaddedField {
    /// The eight point values of padded cell `(i, j)` in trace order.
    #[inline]
    pub fn cell_points(&self, i: isize, j: isize) -> [ReformState; 8] {
        [
            *self.vx.get(i, j),
            *self.ey.get(i, j),
            *self.vx.get(i + 1, j),
            *self.ex.get(i, j),
            *self.ex.get(i + 1, j),
            *self.vx.get(i, j + 1),
            *self.ey.get(i, j + 1),
            *self.vx.get(i + 1, j + 1),
        ]
    }
}
