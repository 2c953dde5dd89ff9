//! Benchmark registry: initial and boundary data, exact solutions, error
//! norms and the mesh-refinement driver.
//!
//! Every problem is addressable by a registry name (see [`NAMES`]).
//! Initial cell averages are 3×3 Gauss quadratures of the conserved
//! initial state and point values are pointwise samples of the
//! reformulated state.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::coe::GaussRule;
use crate::error::{Error, Result};
use crate::mesh::{Boundary, DofField, Inflow, Mesh};
use crate::scheme::{SchemeOptions, Solver};
use crate::state::{ConservedState, GasParams, Primitive, QForm};

/// Vortex strength at which the central pressure drops to about `5.3e-12`.
pub const VORTEX_EXTREME_MU: f64 = 5.389489439;

/// Registry names accepted by [`ProblemSpec::by_name`].
pub const NAMES: &[&str] = &[
    "alfven",
    "vortex",
    "vortex_extreme",
    "orszag_tang",
    "rotor",
    "blast1",
    "blast2",
    "shock_cloud",
    "jet800",
    "jet800_b2000",
    "jet800_b20000",
    "jet2000",
    "jet10000",
];

/// Initial-condition family with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Problem {
    /// Circularly polarized Alfvén wave inclined at `π/4`.
    Alfven,
    /// Isentropic magnetic vortex of strength `mu` advected by `(1, 1)`.
    Vortex {
        mu: f64,
    },
    OrszagTang,
    Rotor,
    /// Pressure pulse `p0` in a uniform field `(b0, 0, 0)`.
    Blast {
        p0: f64,
        b0: f64,
    },
    ShockCloud,
    /// Jet with inflow speed `speed` along a field `(0, b0, 0)`.
    Jet {
        speed: f64,
        b0: f64,
    },
}

/// Everything needed to set up one benchmark run.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub name: String,
    pub problem: Problem,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub gamma: f64,
    pub rho_ref: f64,
    /// `[left, right, bottom, top]`.
    pub bc: [Boundary; 4],
    pub t_end: f64,
    pub default_mesh: (usize, usize),
}

const OUTFLOW4: [Boundary; 4] = [Boundary::Outflow; 4];
const PERIODIC4: [Boundary; 4] = [Boundary::Periodic; 4];

fn alfven_angle() -> f64 {
    PI / 4.0
}

impl ProblemSpec {
    pub fn by_name(name: &str) -> Result<ProblemSpec> {
        let sqrt4pi = (4.0 * PI).sqrt();
        let five3 = 5.0 / 3.0;
        let (problem, x_range, y_range, gamma, bc, t_end, default_mesh) = match name {
            "alfven" => {
                let a = alfven_angle();
                (Problem::Alfven, (0.0, 1.0 / a.cos()), (0.0, 1.0 / a.sin()), five3, PERIODIC4, 1.0, (20, 20))
            }
            "vortex" => (Problem::Vortex { mu: 1.0 }, (-10.0, 10.0), (-10.0, 10.0), five3, PERIODIC4, 0.05, (40, 40)),
            "vortex_extreme" => (Problem::Vortex { mu: VORTEX_EXTREME_MU }, (-10.0, 10.0), (-10.0, 10.0), five3, PERIODIC4, 0.05, (40, 40)),
            "orszag_tang" => (Problem::OrszagTang, (0.0, 2.0 * PI), (0.0, 2.0 * PI), five3, PERIODIC4, 0.75, (100, 100)),
            "rotor" => (Problem::Rotor, (0.0, 1.0), (0.0, 1.0), five3, OUTFLOW4, 0.295, (100, 100)),
            "blast1" => (Problem::Blast { p0: 1e3, b0: 100.0 / sqrt4pi }, (-0.5, 0.5), (-0.5, 0.5), 1.4, OUTFLOW4, 0.01, (100, 100)),
            "blast2" => (Problem::Blast { p0: 1e4, b0: 1000.0 / sqrt4pi }, (-0.5, 0.5), (-0.5, 0.5), 1.4, OUTFLOW4, 0.001, (100, 100)),
            "shock_cloud" => {
                let right = Boundary::Inflow(Inflow { state: Some(shock_cloud_right()), window: None });
                (
                    Problem::ShockCloud,
                    (0.0, 1.0),
                    (0.0, 1.0),
                    five3,
                    [Boundary::Outflow, right, Boundary::Outflow, Boundary::Outflow],
                    0.06,
                    (100, 100),
                )
            }
            "jet800" | "jet800_b2000" | "jet800_b20000" | "jet2000" | "jet10000" => {
                let (speed, b2, t_end) = match name {
                    "jet800" => (800.0, 200.0, 0.002),
                    "jet800_b2000" => (800.0, 2000.0, 0.002),
                    "jet800_b20000" => (800.0, 20000.0, 0.002),
                    "jet2000" => (2000.0, 20000.0, 0.00075),
                    _ => (10000.0, 20000.0, 0.00015),
                };
                let problem = Problem::Jet { speed, b0: f64::sqrt(b2) };
                let inflow = Boundary::Inflow(Inflow { state: Some(jet_state(1.4, speed, b2.sqrt())), window: Some((-0.05, 0.05)) });
                (
                    problem,
                    (-0.5, 0.5),
                    (0.0, 1.5),
                    1.4,
                    [Boundary::Outflow, Boundary::Outflow, inflow, Boundary::Outflow],
                    t_end,
                    (100, 150),
                )
            }
            _ => {
                return Err(Error::Config(format!("unknown problem '{name}', expected one of {}", NAMES.join(", "))));
            }
        };
        Ok(ProblemSpec { name: name.to_string(), problem, x_range, y_range, gamma, rho_ref: 1.0, bc, t_end, default_mesh })
    }

    /// Mesh with `nx × ny` cells over the problem domain.
    pub fn mesh(&self, nx: usize, ny: usize) -> Result<Mesh> {
        Mesh::new(nx, ny, self.x_range, self.y_range, self.bc)
    }

    pub fn gas(&self, q_form: QForm) -> Result<GasParams> {
        GasParams::new(self.gamma, self.rho_ref, q_form)
    }

    /// Initial primitive state at `(x, y)`.
    pub fn ic(&self, x: f64, y: f64) -> Primitive {
        match self.problem {
            Problem::Alfven => alfven(x, y, 0.0),
            Problem::Vortex { mu } => vortex(x, y, mu),
            Problem::OrszagTang => {
                let g = self.gamma;
                Primitive { rho: g * g, v: [-y.sin(), x.sin(), 0.0], b: [-y.sin(), (2.0 * x).sin(), 0.0], p: g }
            }
            Problem::Rotor => rotor(x, y),
            Problem::Blast { p0, b0 } => {
                let p = if (x * x + y * y).sqrt() <= 0.1 { p0 } else { 0.1 };
                Primitive { rho: 1.0, v: [0.0; 3], b: [b0, 0.0, 0.0], p }
            }
            Problem::ShockCloud => {
                if x < 0.6 {
                    shock_cloud_left()
                } else {
                    let mut s = shock_cloud_right();
                    let (dx, dy) = (x - 0.8, y - 0.5);
                    if (dx * dx + dy * dy).sqrt() < 0.15 {
                        s.rho = 10.0;
                    }
                    s
                }
            }
            Problem::Jet { b0, .. } => Primitive { rho: 0.1 * self.gamma, v: [0.0; 3], b: [0.0, b0, 0.0], p: 1.0 },
        }
    }

    /// Exact solution at time `t`, when one is known.
    pub fn exact(&self, x: f64, y: f64, t: f64) -> Option<Primitive> {
        match self.problem {
            Problem::Alfven => Some(alfven(x, y, t)),
            Problem::Vortex { mu } => {
                let wrap = |s: f64, (lo, hi): (f64, f64)| lo + (s - lo).rem_euclid(hi - lo);
                Some(vortex(wrap(x - t, self.x_range), wrap(y - t, self.y_range), mu))
            }
            _ => None,
        }
    }

    /// True when [`ProblemSpec::exact`] returns values.
    pub fn has_exact(&self) -> bool {
        matches!(self.problem, Problem::Alfven | Problem::Vortex { .. })
    }

    /// Shared-slot field initialized from the initial condition.
    pub fn init_field(&self, mesh: &Mesh, g: &GasParams) -> Result<DofField> {
        init_field_with(mesh, g, |x, y| self.ic(x, y))
    }
}

/// `(ρ, v, B, p)` of the Alfvén wave; the phase travels as `β + t`.
pub fn alfven(x: f64, y: f64, t: f64) -> Primitive {
    let a = alfven_angle();
    let (sa, ca) = a.sin_cos();
    let beta = x * ca + y * sa + t;
    let (s, c) = (2.0 * PI * beta).sin_cos();
    let v = [-0.1 * sa * s, 0.1 * ca * s, 0.1 * c];
    Primitive { rho: 1.0, v, b: [ca + v[0], sa + v[1], v[2]], p: 0.1 }
}

/// Vortex of strength `mu` centered at the origin on the background
/// `(1, 1, 1, 0, 0, 0, 0, 1)`.
pub fn vortex(x: f64, y: f64, mu: f64) -> Primitive {
    let r2 = x * x + y * y;
    let e = (0.5 * (1.0 - r2)).exp();
    let dv = mu / (2f64.sqrt() * PI) * e;
    let db = mu / (2.0 * PI) * e;
    let dp = -mu * mu * (1.0 + r2) / (8.0 * PI * PI) * (1.0 - r2).exp();
    Primitive { rho: 1.0, v: [1.0 - dv * y, 1.0 + dv * x, 0.0], b: [-db * y, db * x, 0.0], p: 1.0 + dp }
}

fn rotor(x: f64, y: f64) -> Primitive {
    let (r1, r2) = (0.1, 0.115);
    let b = [2.5 / (4.0 * PI).sqrt(), 0.0, 0.0];
    let (dx, dy) = (x - 0.5, y - 0.5);
    let r = (dx * dx + dy * dy).sqrt();
    if r <= r1 {
        Primitive { rho: 10.0, v: [-dy / r1, dx / r1, 0.0], b, p: 0.5 }
    } else if r <= r2 {
        let phi = (r2 - r) / (r2 - r1);
        Primitive { rho: 1.0 + 9.0 * phi, v: [-phi * dy / r, phi * dx / r, 0.0], b, p: 0.5 }
    } else {
        Primitive { rho: 1.0, v: [0.0; 3], b, p: 0.5 }
    }
}

fn shock_cloud_left() -> Primitive {
    Primitive { rho: 3.86859, v: [0.0; 3], b: [0.0, 2.1826182, -2.1826182], p: 167.345 }
}

/// Pre-shock state, also injected through the right boundary.
pub fn shock_cloud_right() -> Primitive {
    Primitive { rho: 1.0, v: [-11.2536, 0.0, 0.0], b: [0.0, 0.56418958, 0.56418958], p: 1.0 }
}

/// Injected jet state `(γ, 0, speed, 0, 0, B0, 0, 1)`.
pub fn jet_state(gamma: f64, speed: f64, b0: f64) -> Primitive {
    Primitive { rho: gamma, v: [0.0, speed, 0.0], b: [0.0, b0, 0.0], p: 1.0 }
}

/// Coordinate of offset `a` (in cells) from the domain midpoint. Written
/// this way so mirror-image samples of a symmetric domain are exact
/// negatives of each other.
#[inline]
fn coord(lo: f64, n: usize, d: f64, a: f64) -> f64 {
    (lo + 0.5 * n as f64 * d) + a * d
}

/// Physical location of x-face `k` and cell-midline `i + 1/2` etc.
fn x_of(mesh: &Mesh, a: f64) -> f64 {
    coord(mesh.x0, mesh.nx, mesh.dx, a - 0.5 * mesh.nx as f64)
}

fn y_of(mesh: &Mesh, a: f64) -> f64 {
    coord(mesh.y0, mesh.ny, mesh.dy, a - 0.5 * mesh.ny as f64)
}

fn checked(p: Primitive, x: f64, y: f64) -> Result<Primitive> {
    if p.is_admissible() {
        Ok(p)
    } else {
        Err(Error::Config(format!("initial state at ({x}, {y}) is not admissible: {p:?}")))
    }
}

/// Field with Gauss-averaged cells and sampled point values of `ic`.
pub fn init_field_with<F>(mesh: &Mesh, g: &GasParams, ic: F) -> Result<DofField>
where
    F: Fn(f64, f64) -> Primitive + Sync,
{
    let (nx, ny) = (mesh.nx, mesh.ny);
    let rule = GaussRule::new(3);
    let mut f = DofField::zeros(nx, ny);
    f.avg = (0..nx * ny)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k % nx, k / nx);
            let node = |a: f64, b: f64| -> Result<ConservedState> {
                // Offsets from the domain midpoint are formed before
                // adding the Gauss node so that mirrored nodes agree.
                let x = coord(mesh.x0, nx, mesh.dx, (i as f64 + 0.5 - 0.5 * nx as f64) + a);
                let y = coord(mesh.y0, ny, mesh.dy, (j as f64 + 0.5 - 0.5 * ny as f64) + b);
                Ok(checked(ic(x, y), x, y)?.to_conserved(g.gamma))
            };
            // Symmetric nodes are paired before weighting so the sum is
            // invariant under reflection of the cell.
            let pair = |v: [ConservedState; 3]| rule.weights[0] * (v[0] + v[2]) + rule.weights[1] * v[1];
            let [n0, n1, n2] = [rule.nodes[0], rule.nodes[1], rule.nodes[2]];
            let row = |b: f64| -> Result<ConservedState> { Ok(pair([node(n0, b)?, node(n1, b)?, node(n2, b)?])) };
            let acc = pair([row(n0)?, row(n1)?, row(n2)?]);
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let sample = |x: f64, y: f64| checked(ic(x, y), x, y).map(|p| p.to_reform(g));
    f.ex = (0..(nx + 1) * ny)
        .into_par_iter()
        .map(|idx| {
            let (k, j) = (idx % (nx + 1), idx / (nx + 1));
            sample(x_of(mesh, k as f64), y_of(mesh, j as f64 + 0.5))
        })
        .collect::<Result<Vec<_>>>()?;
    f.ey = (0..nx * (ny + 1))
        .into_par_iter()
        .map(|idx| {
            let (i, k) = (idx % nx, idx / nx);
            sample(x_of(mesh, i as f64 + 0.5), y_of(mesh, k as f64))
        })
        .collect::<Result<Vec<_>>>()?;
    f.vx = (0..(nx + 1) * (ny + 1))
        .into_par_iter()
        .map(|idx| {
            let (k, l) = (idx % (nx + 1), idx / (nx + 1));
            sample(x_of(mesh, k as f64), y_of(mesh, l as f64))
        })
        .collect::<Result<Vec<_>>>()?;
    f.sync_periodic(mesh);
    Ok(f)
}

/// Locations `(x, y)` of every distinct point-value slot with its
/// primitive value. On periodic sides the duplicated last slot is
/// skipped.
pub fn point_samples(field: &DofField, mesh: &Mesh, g: &GasParams) -> Vec<(f64, f64, Primitive)> {
    let (nx, ny) = (mesh.nx, mesh.ny);
    let kx = if mesh.periodic_x() { nx } else { nx + 1 };
    let ky = if mesh.periodic_y() { ny } else { ny + 1 };
    let mut out = Vec::with_capacity(kx * ny + nx * ky + kx * ky);
    for j in 0..ny {
        for k in 0..kx {
            out.push((x_of(mesh, k as f64), y_of(mesh, j as f64 + 0.5), Primitive::from_reform(field.ex_at(k, j), g)));
        }
    }
    for k in 0..ky {
        for i in 0..nx {
            out.push((x_of(mesh, i as f64 + 0.5), y_of(mesh, k as f64), Primitive::from_reform(field.ey_at(i, k), g)));
        }
    }
    for l in 0..ky {
        for k in 0..kx {
            out.push((x_of(mesh, k as f64), y_of(mesh, l as f64), Primitive::from_reform(field.vx_at(k, l), g)));
        }
    }
    out
}

/// Discrete error norms of a group of primitive components.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ErrorNorms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

/// Component groups reported by the convergence driver, as indices into
/// `(ρ, v1, v2, v3, B1, B2, B3, p)`.
pub const VELOCITY: [usize; 2] = [1, 2];
pub const MAGNETIC: [usize; 2] = [4, 5];

/// Norm convention written into convergence output.
pub const NORM_CONVENTION: &str = "point values (edges and vertices), primitive variables; \
l1 = sum over components of the DoF-mean |e|, l2 = sqrt of the sum over components of the DoF-mean e^2, \
linf = max over components and DoFs of |e|";

/// Errors of `comps` over every distinct point-value location against
/// `exact(x, y)`. See [`NORM_CONVENTION`].
pub fn error_norms<F>(field: &DofField, mesh: &Mesh, g: &GasParams, exact: F, comps: &[usize]) -> ErrorNorms
where
    F: Fn(f64, f64) -> Primitive + Sync,
{
    let samples = point_samples(field, mesh, g);
    let n = samples.len() as f64;
    let per_point: Vec<Vec<f64>> = samples
        .par_iter()
        .map(|(x, y, p)| {
            let (a, e) = (p.to_array(), exact(*x, *y).to_array());
            comps.iter().map(|&c| a[c] - e[c]).collect()
        })
        .collect();
    let mut out = ErrorNorms::default();
    let mut l2 = 0.0;
    for c in 0..comps.len() {
        let (mut s1, mut s2) = (0.0, 0.0);
        for e in &per_point {
            s1 += e[c].abs();
            s2 += e[c] * e[c];
            out.linf = out.linf.max(e[c].abs());
        }
        out.l1 += s1 / n;
        l2 += s2 / n;
    }
    out.l2 = l2.sqrt();
    out
}

/// Observed order between two refinement levels; `None` when undefined.
pub fn observed_order(e_coarse: f64, e_fine: f64, n_coarse: usize, n_fine: usize) -> Option<f64> {
    if e_coarse > 0.0 && e_fine > 0.0 && e_coarse.is_finite() && e_fine.is_finite() && n_fine != n_coarse {
        Some((e_coarse / e_fine).ln() / (n_fine as f64 / n_coarse as f64).ln())
    } else {
        None
    }
}

/// One mesh level of a convergence study.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    /// One entry per component group.
    pub errors: Vec<ErrorNorms>,
}

/// Per-mesh errors with pairwise orders.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTable {
    pub problem: String,
    pub groups: Vec<String>,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// Orders `(l1, l2, linf)` of `group` between row `r − 1` and `r`.
    pub fn orders(&self, r: usize, group: usize) -> [Option<f64>; 3] {
        if r == 0 {
            return [None; 3];
        }
        let (a, b) = (&self.rows[r - 1], &self.rows[r]);
        let (ea, eb) = (a.errors[group], b.errors[group]);
        [observed_order(ea.l1, eb.l1, a.n, b.n), observed_order(ea.l2, eb.l2, a.n, b.n), observed_order(ea.linf, eb.linf, a.n, b.n)]
    }

    fn fmt_order(o: Option<f64>) -> String {
        o.map_or_else(|| "—".to_string(), |v| format!("{v:.2}"))
    }

    /// Aligned plain-text table.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {}; norms: {}", self.problem, NORM_CONVENTION);
        for (gi, gname) in self.groups.iter().enumerate() {
            let _ = writeln!(s, "[{gname}]");
            let _ = writeln!(s, "{:>6}  {:>12} {:>6}  {:>12} {:>6}  {:>12} {:>6}", "N", "l1", "order", "l2", "order", "linf", "order");
            for (r, row) in self.rows.iter().enumerate() {
                let e = row.errors[gi];
                let o = self.orders(r, gi).map(Self::fmt_order);
                let _ =
                    writeln!(s, "{:>6}  {:>12.3e} {:>6}  {:>12.3e} {:>6}  {:>12.3e} {:>6}", row.n, e.l1, o[0], e.l2, o[1], e.linf, o[2]);
            }
        }
        s
    }

    /// CSV with one line per (mesh, group).
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,group,l1,l1_order,l2,l2_order,linf,linf_order\n");
        for (r, row) in self.rows.iter().enumerate() {
            for (gi, gname) in self.groups.iter().enumerate() {
                let e = row.errors[gi];
                let o = self.orders(r, gi).map(Self::fmt_order);
                let _ = writeln!(s, "{},{},{:.17e},{},{:.17e},{},{:.17e},{}", row.n, gname, e.l1, o[0], e.l2, o[1], e.linf, o[2]);
            }
        }
        s
    }
}

/// Refinement study where `solve(n)` returns the errors of every group
/// on an `n × n` mesh.
pub fn convergence_with<F>(problem: &str, groups: &[&str], meshes: &[usize], mut solve: F) -> Result<ConvergenceTable>
where
    F: FnMut(usize) -> Result<Vec<ErrorNorms>>,
{
    let mut rows = Vec::with_capacity(meshes.len());
    for &n in meshes {
        let errors = solve(n)?;
        if errors.len() != groups.len() {
            return Err(Error::Invariant(format!("expected {} error groups, got {}", groups.len(), errors.len())));
        }
        rows.push(ConvergenceRow { n, errors });
    }
    Ok(ConvergenceTable { problem: problem.to_string(), groups: groups.iter().map(|s| s.to_string()).collect(), rows })
}

/// Run `spec` to its end time on an `n × n` mesh and measure the
/// velocity and magnetic errors against the exact solution.
pub fn solve_and_measure(spec: &ProblemSpec, opts: SchemeOptions, q_form: QForm, n: usize) -> Result<Vec<ErrorNorms>> {
    if !spec.has_exact() {
        return Err(Error::Config(format!("problem '{}' has no exact solution", spec.name)));
    }
    let mesh = spec.mesh(n, n)?;
    let g = spec.gas(q_form)?;
    let field = spec.init_field(&mesh, &g)?;
    let mut solver = Solver::new(mesh, g, opts, field)?;
    solver.run_until(spec.t_end, None, |_, _| {})?;
    let t = solver.t;
    let exact = |x: f64, y: f64| spec.exact(x, y, t).expect("exact solution available");
    Ok([VELOCITY, MAGNETIC].iter().map(|c| error_norms(&solver.field, &solver.mesh, &solver.gas, exact, c)).collect())
}

/// Convergence study of the full scheme on `spec`.
pub fn convergence(spec: &ProblemSpec, opts: SchemeOptions, q_form: QForm, meshes: &[usize]) -> Result<ConvergenceTable> {
    convergence_with(&spec.name, &["v1,v2", "B1,B2"], meshes, |n| solve_and_measure(spec, opts, q_form, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::physical_flux_unchecked;
    use crate::state::Direction;

    fn gas(spec: &ProblemSpec) -> GasParams {
        spec.gas(QForm::Softplus).unwrap()
    }

    #[test]
    fn every_problem_initializes_admissibly() {
        for name in NAMES {
            let spec = ProblemSpec::by_name(name).unwrap();
            let (nx, ny) = spec.default_mesh;
            assert!(nx <= 200 && ny <= 200, "{name}");
            let mesh = spec.mesh(nx, ny).unwrap();
            let f = spec.init_field(&mesh, &gas(&spec)).unwrap();
            assert!(f.avg.iter().all(|u| u.is_admissible()), "{name}");
            assert!(f.ex.iter().chain(&f.ey).chain(&f.vx).all(|w| w.is_finite()), "{name}");
        }
    }

    #[test]
    fn unknown_problem_is_rejected() {
        assert!(matches!(ProblemSpec::by_name("sod"), Err(Error::Config(_))));
    }

    #[test]
    fn alfven_zero_phase() {
        // β = 0 at the origin.
        let p = alfven(0.0, 0.0, 0.0);
        let a = PI / 4.0;
        assert_eq!(p.v, [0.0, 0.0, 0.1]);
        assert_eq!(p.b, [a.cos(), a.sin(), 0.1]);
        assert_eq!((p.rho, p.p), (1.0, 0.1));
    }

    #[test]
    fn alfven_is_time_periodic() {
        for &(x, y) in &[(0.1, 0.2), (0.7, 1.3), (1.4, 0.05)] {
            let (a, b) = (alfven(x, y, 0.0).to_array(), alfven(x, y, 1.0).to_array());
            for k in 0..8 {
                assert!((a[k] - b[k]).abs() < 1e-14, "{k}");
            }
        }
    }

    /// Residual of `∂t U + ∂x F + ∂y G` by centered differences.
    fn residual(f: impl Fn(f64, f64, f64) -> Primitive, x: f64, y: f64, t: f64, gamma: f64) -> f64 {
        let g = GasParams::new(gamma, 1.0, QForm::Softplus).unwrap();
        let h = 1e-4;
        let u = |x, y, t| f(x, y, t).to_conserved(gamma);
        let dt = (u(x, y, t + h) - u(x, y, t - h)) * (0.5 / h);
        let dx = (physical_flux_unchecked(&u(x + h, y, t), Direction::X, &g) - physical_flux_unchecked(&u(x - h, y, t), Direction::X, &g))
            * (0.5 / h);
        let dy = (physical_flux_unchecked(&u(x, y + h, t), Direction::Y, &g) - physical_flux_unchecked(&u(x, y - h, t), Direction::Y, &g))
            * (0.5 / h);
        (dt + dx + dy).max_abs()
    }

    #[test]
    fn alfven_exact_solves_the_pde() {
        for &(x, y, t) in &[(0.3, 0.4, 0.5), (1.1, 0.2, 0.25), (0.0, 0.9, 0.8)] {
            assert!(residual(alfven, x, y, t, 5.0 / 3.0) < 1e-6);
        }
        // The opposite propagation direction is not a solution.
        let wrong = |x, y, t: f64| alfven(x, y, -t);
        assert!(residual(wrong, 0.3, 0.4, 0.5, 5.0 / 3.0) > 1e-2);
    }

    #[test]
    fn vortex_exact_solves_the_pde() {
        let spec = ProblemSpec::by_name("vortex").unwrap();
        let f = |x, y, t| spec.exact(x, y, t).unwrap();
        for &(x, y, t) in &[(0.3, -0.4, 0.02), (1.2, 0.7, 0.05), (-0.5, 1.5, 0.0)] {
            assert!(residual(f, x, y, t, 5.0 / 3.0) < 1e-6);
        }
    }

    #[test]
    fn vortex_extreme_center_pressure() {
        let p = vortex(0.0, 0.0, VORTEX_EXTREME_MU).p;
        assert!(p > 0.0 && (p - 5.3e-12).abs() < 0.2e-12, "{p:e}");
    }

    #[test]
    fn orszag_tang_thermodynamics_are_uniform() {
        let spec = ProblemSpec::by_name("orszag_tang").unwrap();
        let g = 5.0 / 3.0;
        for &(x, y) in &[(0.1, 0.2), (3.0, 5.0)] {
            let p = spec.ic(x, y);
            assert_eq!((p.rho, p.p), (g * g, g));
        }
    }

    #[test]
    fn rotor_regions() {
        let spec = ProblemSpec::by_name("rotor").unwrap();
        let p = spec.ic(0.55, 0.5);
        assert_eq!(p.rho, 10.0);
        assert!((p.v[1] - 0.05 / 0.1).abs() < 1e-14 && p.v[0].abs() < 1e-14);
        let p = spec.ic(0.5 + 0.1075, 0.5);
        assert!((p.rho - 5.5).abs() < 1e-12);
        assert!((p.v[1] - 0.5).abs() < 1e-12);
        let p = spec.ic(0.9, 0.9);
        assert_eq!((p.rho, p.v, p.p), (1.0, [0.0; 3], 0.5));
    }

    #[test]
    fn jet_inflow_state() {
        let spec = ProblemSpec::by_name("jet800").unwrap();
        match spec.bc[2] {
            Boundary::Inflow(inf) => {
                assert_eq!(inf.state.unwrap(), jet_state(1.4, 800.0, 200f64.sqrt()));
                assert_eq!(inf.window, Some((-0.05, 0.05)));
            }
            ref b => panic!("{b:?}"),
        }
    }

    #[test]
    fn blast_averages_are_mirror_symmetric() {
        let spec = ProblemSpec::by_name("blast1").unwrap();
        let mesh = spec.mesh(40, 40).unwrap();
        let f = spec.init_field(&mesh, &gas(&spec)).unwrap();
        for j in 0..40 {
            for i in 0..40 {
                let a = f.avg_at(i, j);
                let m = f.avg_at(39 - i, j);
                assert_eq!(a.rho(), m.rho());
                assert_eq!(a.energy(), m.energy());
            }
        }
    }

    #[test]
    fn averages_integrate_polynomials_exactly() {
        // The 3-point Gauss rule is exact for quintics in each direction.
        let mesh = Mesh::new(4, 3, (0.0, 2.0), (-1.0, 2.0), [Boundary::Outflow; 4]).unwrap();
        let g = GasParams::new(1.4, 1.0, QForm::Softplus).unwrap();
        let rho = |x: f64, y: f64| 2.0 + x.powi(5) * 0.01 + y.powi(4) * 0.02;
        let f = init_field_with(&mesh, &g, |x, y| Primitive { rho: rho(x, y), v: [0.0; 3], b: [0.0; 3], p: 1.0 }).unwrap();
        for j in 0..3 {
            for i in 0..4 {
                let (xa, xb) = (mesh.face_x(i as isize), mesh.face_x(i as isize + 1));
                let (ya, yb) = (mesh.face_y(j as isize), mesh.face_y(j as isize + 1));
                let exact = (2.0 * (xb - xa) * (yb - ya)
                    + 0.01 / 6.0 * (xb.powi(6) - xa.powi(6)) * (yb - ya)
                    + 0.02 / 5.0 * (xb - xa) * (yb.powi(5) - ya.powi(5)))
                    / mesh.cell_area();
                assert!((f.avg_at(i, j).rho() - exact).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn inadmissible_ic_is_a_config_error() {
        let mesh = Mesh::new(3, 3, (0.0, 1.0), (0.0, 1.0), [Boundary::Outflow; 4]).unwrap();
        let g = GasParams::new(1.4, 1.0, QForm::Softplus).unwrap();
        let r = init_field_with(&mesh, &g, |_, _| Primitive { rho: 1.0, v: [0.0; 3], b: [0.0; 3], p: -1.0 });
        assert!(matches!(r, Err(Error::Config(_))));
    }

    #[test]
    fn error_norms_of_exact_and_offset_fields() {
        let spec = ProblemSpec::by_name("alfven").unwrap();
        let g = gas(&spec);
        let mesh = spec.mesh(8, 8).unwrap();
        let f = spec.init_field(&mesh, &g).unwrap();
        let e = error_norms(&f, &mesh, &g, |x, y| alfven(x, y, 0.0), &VELOCITY);
        assert!(e.l1 < 1e-15 && e.l2 < 1e-15 && e.linf < 1e-15, "{e:?}");
        let d = 1e-3;
        let shifted = |x, y| {
            let mut p = alfven(x, y, 0.0);
            p.v[1] += d;
            p
        };
        let e = error_norms(&f, &mesh, &g, shifted, &VELOCITY);
        assert!((e.l1 - d).abs() < 1e-14 && (e.linf - d).abs() < 1e-14 && (e.l2 - d).abs() < 1e-14, "{e:?}");
    }

    #[test]
    fn point_samples_skip_periodic_duplicates() {
        let spec = ProblemSpec::by_name("alfven").unwrap();
        let mesh = spec.mesh(5, 4).unwrap();
        let f = spec.init_field(&mesh, &gas(&spec)).unwrap();
        assert_eq!(point_samples(&f, &mesh, &gas(&spec)).len(), 5 * 4 * 3);
        let spec = ProblemSpec::by_name("rotor").unwrap();
        let mesh = spec.mesh(5, 4).unwrap();
        let f = spec.init_field(&mesh, &gas(&spec)).unwrap();
        assert_eq!(point_samples(&f, &mesh, &gas(&spec)).len(), 6 * 4 + 5 * 5 + 6 * 5);
    }

    #[test]
    fn orders_and_undefined_orders() {
        assert!((observed_order(8e-3, 1e-3, 20, 40).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(observed_order(0.0, 0.0, 20, 40), None);
        // The exact sampler used as the "scheme" gives zero errors and
        // undefined orders.
        let spec = ProblemSpec::by_name("alfven").unwrap();
        let g = gas(&spec);
        let table = convergence_with("alfven", &["v1,v2"], &[8, 16], |n| {
            let mesh = spec.mesh(n, n)?;
            let f = spec.init_field(&mesh, &g)?;
            Ok(vec![error_norms(&f, &mesh, &g, |x, y| alfven(x, y, 0.0), &VELOCITY)])
        })
        .unwrap();
        assert_eq!(table.rows.len(), 2);
        assert_eq!(table.orders(1, 0), [None; 3]);
        assert!(table.to_text().contains('—'));
        assert_eq!(table.to_csv().lines().count(), 3);
    }
}
