//! Time stepping: the per-stage pipeline and the SSP-RK3 driver.
//!
//! One stage turns the current degrees of freedom into rates:
//! ghost fill, per-cell DDF projection of the magnetic traces, center
//! recovery and positivity limiting, troubled-cell detection, COE
//! blending, global viscosities, the conservative average update and the
//! point-value update. The three Shu–Osher stages combine these rates
//! convexly.

use crate::coe::{damping_factors, CoeParams};
use crate::ddf::{ddf_project, discrete_divergence, divergence_scale};
use crate::error::{Error, Result};
use crate::flux::{average_rhs, global_viscosity};
use crate::indicator::{detect, IndicatorMode, TroubleMask, DEFAULT_DELTA};
use crate::limiting::{center_value, pp_limit, PP_EPSILON};
use crate::mesh::{ghost_view, inflow_at, CellTraceSet, DofField, Grid2, Mesh, PaddedField};
use crate::point::{point_rhs, simpson_w, PointRates};
use crate::state::{fast_speed_unchecked, to_conserved_unchecked, to_reform, ConservedState, Direction, GasParams, ReformState};
use rayon::prelude::*;

/// Upper bound on `Δt (α1/Δx + α2/Δy)` under which a forward-Euler
/// step keeps the averages admissible.
pub const PP_CFL_LIMIT: f64 = 1.0 / 6.0;

/// When the COE normalization `Θ` is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ThetaUpdate {
    #[default]
    EveryStage,
    OncePerStep,
}

/// Scheme switches and parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchemeOptions {
    pub cfl: f64,
    pub ddf: bool,
    pub pp: bool,
    pub coe: bool,
    pub indicator: IndicatorMode,
    pub delta: f64,
    pub coe_params: CoeParams,
    pub theta_update: ThetaUpdate,
    /// Multiplier `μ` of the physical flux (1 for ideal MHD).
    pub flux_scale: f64,
    /// Absolute positivity margin of the limiter.
    pub pp_epsilon: f64,
}

impl Default for SchemeOptions {
    fn default() -> Self {
        SchemeOptions {
            cfl: 0.1,
            ddf: true,
            pp: true,
            coe: true,
            indicator: IndicatorMode::TwoSpeed,
            delta: DEFAULT_DELTA,
            coe_params: CoeParams::default(),
            theta_update: ThetaUpdate::EveryStage,
            flux_scale: 1.0,
            pp_epsilon: PP_EPSILON,
        }
    }
}

impl SchemeOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl < PP_CFL_LIMIT) {
            return Err(Error::Config(format!("cfl must lie in (0, 1/6), got {}", self.cfl)));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(Error::Config(format!("delta must be nonnegative, got {}", self.delta)));
        }
        if !(self.flux_scale > 0.0 && self.flux_scale.is_finite()) {
            return Err(Error::Config(format!("flux_scale must be positive, got {}", self.flux_scale)));
        }
        if !(self.pp_epsilon > 0.0 && self.pp_epsilon.is_finite()) {
            return Err(Error::Config(format!("pp_epsilon must be positive, got {}", self.pp_epsilon)));
        }
        self.coe_params.validate()
    }

    /// True when every ingredient of the positivity guarantee is active.
    pub fn pp_guaranteed(&self) -> bool {
        self.pp
    }
}

/// `Δt = cfl / (α1/Δx + α2/Δy)`.
pub fn compute_dt(alpha: (f64, f64), mesh: &Mesh, cfl: f64) -> Result<f64> {
    if !(cfl > 0.0 && cfl < PP_CFL_LIMIT) {
        return Err(Error::Config(format!("cfl must lie in (0, 1/6), got {cfl}")));
    }
    let rate = alpha.0 / mesh.dx + alpha.1 / mesh.dy;
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(Error::Invariant(format!("viscosities must be positive and finite, got {alpha:?}")));
    }
    Ok(cfl / rate)
}

/// Per-step diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepLog {
    pub step: usize,
    /// Time at the end of the step.
    pub t: f64,
    pub dt: f64,
    /// Largest stage viscosities.
    pub alpha: (f64, f64),
    pub min_rho: f64,
    pub min_internal_energy: f64,
    /// Largest relative discrete divergence of the hatted traces over
    /// all stages.
    pub max_div: f64,
    /// Troubled cells in the first stage.
    pub troubled: usize,
    pub min_theta_oe: f64,
}

impl StepLog {
    pub const HEADER: &'static str = "step,t,dt,alpha1,alpha2,min_rho,min_internal_energy,max_div,troubled,min_theta_oe";

    pub fn csv_line(&self) -> String {
        format!(
            "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{},{:.17e}",
            self.step,
            self.t,
            self.dt,
            self.alpha.0,
            self.alpha.1,
            self.min_rho,
            self.min_internal_energy,
            self.max_div,
            self.troubled,
            self.min_theta_oe
        )
    }
}

/// Limited cell states before COE, plus the reformulated traces.
struct Prepared {
    padded: PaddedField,
    /// `W̃` traces after DDF projection, per padded cell.
    wt: Grid2<[ReformState; 8]>,
    checked: Grid2<CellTraceSet>,
    theta_pp: Grid2<f64>,
    mask: TroubleMask,
}

/// Everything a stage produces.
struct StageEval {
    avg_rates: Vec<ConservedState>,
    point_rates: PointRates,
    alpha: (f64, f64),
    max_div: f64,
    troubled: usize,
    min_theta_oe: f64,
    theta_norm: Option<f64>,
    cfl_ratio: f64,
}

/// Fields exposed for diagnostics and output.
#[derive(Clone, Debug)]
pub struct Diagnostics {
    pub mask: TroubleMask,
    /// Per interior cell COE factor (1 where not applied).
    pub theta_oe: Vec<f64>,
    /// Per interior cell relative divergence of the hatted traces.
    pub divergence: Vec<f64>,
}

/// Solver state: mesh, options, current field and time.
#[derive(Clone, Debug)]
pub struct Solver {
    pub mesh: Mesh,
    pub gas: GasParams,
    pub opts: SchemeOptions,
    pub field: DofField,
    pub t: f64,
    pub steps: usize,
}

impl Solver {
    pub fn new(mesh: Mesh, gas: GasParams, opts: SchemeOptions, field: DofField) -> Result<Solver> {
        opts.validate()?;
        mesh.validate()?;
        if !field.matches(&mesh) {
            return Err(Error::Config("field shape does not match mesh".into()));
        }
        check_field(&field, "initial field")?;
        let mut s = Solver { mesh, gas, opts, field, t: 0.0, steps: 0 };
        s.field.sync_periodic(&s.mesh);
        impose_inflow_points(&mut s.field, &s.mesh, &s.gas);
        Ok(s)
    }

    fn prepare(&self, field: &DofField) -> Result<Prepared> {
        let mesh = &self.mesh;
        let g = &self.gas;
        let padded = ghost_view(field, mesh, g)?;
        let (w, h) = (mesh.nx + 2, mesh.ny + 2);
        let opts = self.opts;
        let cells: Vec<Result<([ReformState; 8], CellTraceSet, f64)>> = (0..w * h)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = ((idx % w) as isize - 1, (idx / w) as isize - 1);
                let mut wt = padded.cell_points(i, j);
                if opts.ddf {
                    ddf_project(&mut wt, mesh.dx, mesh.dy);
                }
                let traces = wt.map(|p| to_conserved_unchecked(&p, g));
                let avg = padded.avg.get(i, j);
                let center = center_value(avg, &traces);
                if opts.pp {
                    let lim =
                        pp_limit(avg, &center, &traces, opts.pp_epsilon).map_err(|e| Error::Invariant(format!("cell ({i}, {j}): {e}")))?;
                    Ok((wt, lim.set, lim.theta))
                } else {
                    Ok((wt, CellTraceSet { center, traces }, 1.0))
                }
            })
            .collect();
        let mut wts = Vec::with_capacity(w * h);
        let mut sets = Vec::with_capacity(w * h);
        let mut thetas = Vec::with_capacity(w * h);
        for c in cells {
            let (a, b, t) = c?;
            wts.push(a);
            sets.push(b);
            thetas.push(t);
        }
        let mask = if opts.coe {
            detect(&padded.avg, mesh, g, opts.delta, opts.indicator)?
        } else {
            TroubleMask::uniform(mesh.nx, mesh.ny, false)
        };
        Ok(Prepared {
            padded,
            wt: Grid2 { data: wts, w, h },
            checked: Grid2 { data: sets, w, h },
            theta_pp: Grid2 { data: thetas, w, h },
            mask,
        })
    }

    /// Viscosities of a set of hatted (or checked) traces.
    /// Global viscosities: the positivity-preserving estimate over the
    /// traces, raised where needed to the fast speeds `|vℓ| + c_{f,ℓ}` of
    /// the point values so that the point upwinding stays dissipative.
    fn alpha_of(&self, sets: &Grid2<CellTraceSet>, padded: &PaddedField) -> (f64, f64) {
        let (a1, a2) = global_viscosity(sets, &self.mesh, &self.gas);
        let (p1, p2) = point_speeds(padded, &self.gas);
        (self.opts.flux_scale * a1.max(p1), self.opts.flux_scale * a2.max(p2))
    }

    /// Padded location that a ghost cell duplicates under periodicity,
    /// if that location is interior.
    fn periodic_source(&self, i: isize, j: isize) -> Option<(isize, isize)> {
        let (nx, ny) = (self.mesh.nx as isize, self.mesh.ny as isize);
        let si = if self.mesh.periodic_x() { i.rem_euclid(nx) } else { i };
        let sj = if self.mesh.periodic_y() { j.rem_euclid(ny) } else { j };
        let interior = (0..nx).contains(&si) && (0..ny).contains(&sj);
        let is_ghost = !((0..nx).contains(&i) && (0..ny).contains(&j));
        (interior && is_ghost).then_some((si, sj))
    }

    /// COE, viscosities and both right-hand sides for a prepared stage.
    fn finish(&self, prep: &Prepared, dt: f64, theta_norm: Option<f64>) -> Result<(StageEval, Diagnostics)> {
        let mesh = &self.mesh;
        let g = &self.gas;
        let (nx, ny) = (mesh.nx, mesh.ny);
        let (w, h) = (nx + 2, ny + 2);

        let (factors, th) = if self.opts.coe {
            damping_factors(
                &prep.checked,
                &prep.padded.avg,
                &prep.mask,
                dt,
                self.opts.flux_scale,
                mesh,
                g,
                &self.opts.coe_params,
                theta_norm,
            )
        } else {
            (vec![1.0; nx * ny], None)
        };

        let mut hatted = prep.checked.clone();
        let mut combined = prep.theta_pp.clone();
        for j in 0..ny {
            for i in 0..nx {
                let f = factors[j * nx + i];
                if f != 1.0 {
                    let (ii, jj) = (i as isize, j as isize);
                    *hatted.get_mut(ii, jj) = prep.checked.get(ii, jj).blend_toward(prep.padded.avg.get(ii, jj), f);
                    *combined.get_mut(ii, jj) *= f;
                }
            }
        }
        for j in -1..=ny as isize {
            for i in -1..=nx as isize {
                if let Some((si, sj)) = self.periodic_source(i, j) {
                    *hatted.get_mut(i, j) = *hatted.get(si, sj);
                    *combined.get_mut(i, j) = *combined.get(si, sj);
                }
            }
        }

        let alpha = self.alpha_of(&hatted, &prep.padded);
        let cfl_ratio = dt * (alpha.0 / mesh.dx + alpha.1 / mesh.dy);

        let divergence: Vec<f64> = (0..nx * ny)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = ((idx % nx) as isize, (idx / nx) as isize);
                let t = hatted.get(i, j).traces;
                discrete_divergence(&t, mesh.dx, mesh.dy).abs() / divergence_scale(&t, mesh.dx, mesh.dy)
            })
            .collect();
        let max_div = divergence.iter().cloned().fold(0.0, f64::max);

        let avg_rates = average_rhs(&hatted, alpha, self.opts.flux_scale, mesh, g)?;

        let wbar_cells: Vec<Result<ReformState>> = (0..w * h)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = ((idx % w) as isize - 1, (idx / w) as isize - 1);
                let set = hatted.get(i, j);
                let wc = to_reform(&set.center, g).map_err(|e| Error::Invariant(format!("cell ({i}, {j}) center after limiting: {e}")))?;
                let wt = if *combined.get(i, j) == 1.0 {
                    *prep.wt.get(i, j)
                } else {
                    let mut out = [ReformState::ZERO; 8];
                    for (s, u) in set.traces.iter().enumerate() {
                        out[s] = to_reform(u, g).map_err(|e| Error::Invariant(format!("cell ({i}, {j}) trace {s}: {e}")))?;
                    }
                    out
                };
                Ok(simpson_w(&wc, &wt))
            })
            .collect();
        let mut wbar = Vec::with_capacity(w * h);
        for r in wbar_cells {
            wbar.push(r?);
        }
        let wbar = Grid2 { data: wbar, w, h };
        let point_rates = point_rhs(&prep.padded, &wbar, alpha, self.opts.flux_scale, mesh, g)?;

        let troubled = prep.mask.count();
        let min_theta_oe = factors.iter().cloned().fold(1.0, f64::min);
        Ok((
            StageEval { avg_rates, point_rates, alpha, max_div, troubled, min_theta_oe, theta_norm: th, cfl_ratio },
            Diagnostics { mask: prep.mask.clone(), theta_oe: factors, divergence },
        ))
    }

    /// Diagnostics of the current field for a step of size `dt`.
    pub fn diagnostics(&self, dt: f64) -> Result<Diagnostics> {
        let prep = self.prepare(&self.field)?;
        Ok(self.finish(&prep, dt, None)?.1)
    }

    /// Time step from the current field's pre-COE viscosities.
    pub fn stable_dt(&self) -> Result<f64> {
        let prep = self.prepare(&self.field)?;
        compute_dt(self.alpha_of(&prep.checked, &prep.padded), &self.mesh, self.opts.cfl)
    }

    /// One SSP-RK3 step of size at most `dt_max` (use `f64::INFINITY`
    /// for the CFL-limited step). Returns the step log.
    pub fn step(&mut self, dt_max: f64) -> Result<StepLog> {
        let prep0 = self.prepare(&self.field)?;
        let mut dt = compute_dt(self.alpha_of(&prep0.checked, &prep0.padded), &self.mesh, self.opts.cfl)?.min(dt_max);
        for _attempt in 0..20 {
            match self.try_step(&prep0, dt)? {
                Ok((field, log)) => {
                    self.field = field;
                    self.t += dt;
                    self.steps += 1;
                    return Ok(StepLog { step: self.steps, t: self.t, ..log });
                }
                Err(ratio) => {
                    dt *= 0.9 * self.opts.cfl / ratio.max(self.opts.cfl);
                }
            }
        }
        Err(Error::Invariant(format!("could not satisfy the positivity CFL bound at t = {}", self.t)))
    }

    /// One forward-Euler stage of size at most `dt_max` from the current
    /// field, without advancing the solver. Returns the new field and the
    /// step used; the step is shrunk until the positivity CFL bound holds.
    pub fn forward_euler(&self, dt_max: f64) -> Result<(DofField, f64)> {
        let prep = self.prepare(&self.field)?;
        let mut dt = compute_dt(self.alpha_of(&prep.checked, &prep.padded), &self.mesh, self.opts.cfl)?.min(dt_max);
        for _attempt in 0..20 {
            let (e, _) = self.finish(&prep, dt, None)?;
            if e.cfl_ratio < PP_CFL_LIMIT {
                let out = self.combine(&self.field, 0.0, &self.field, 1.0, &e, dt, "forward Euler")?;
                return Ok((out, dt));
            }
            dt *= 0.9 * self.opts.cfl / e.cfl_ratio.max(self.opts.cfl);
        }
        Err(Error::Invariant(format!("could not satisfy the positivity CFL bound at t = {}", self.t)))
    }

    /// Semi-discrete rates of the current field with COE evaluated for a
    /// step `dt`: average rates, point rates and the viscosities used.
    pub fn rates(&self, dt: f64) -> Result<(Vec<ConservedState>, PointRates, (f64, f64))> {
        let prep = self.prepare(&self.field)?;
        let (e, _) = self.finish(&prep, dt, None)?;
        Ok((e.avg_rates, e.point_rates, e.alpha))
    }

    /// Attempt a step of size `dt`. The inner `Err` carries the observed
    /// CFL ratio when a stage violates the bound.
    #[allow(clippy::type_complexity)]
    fn try_step(&self, prep0: &Prepared, dt: f64) -> Result<std::result::Result<(DofField, StepLog), f64>> {
        let mut log = StepLog {
            step: 0,
            t: 0.0,
            dt,
            alpha: (0.0, 0.0),
            min_rho: f64::INFINITY,
            min_internal_energy: f64::INFINITY,
            max_div: 0.0,
            troubled: 0,
            min_theta_oe: 1.0,
        };
        let u0 = &self.field;
        let mut theta_norm = None;
        let acc = |e: &StageEval, log: &mut StepLog| {
            log.alpha = (log.alpha.0.max(e.alpha.0), log.alpha.1.max(e.alpha.1));
            log.max_div = log.max_div.max(e.max_div);
            log.min_theta_oe = log.min_theta_oe.min(e.min_theta_oe);
        };

        // Stage 1.
        let (e, _) = self.finish(prep0, dt, theta_norm)?;
        if e.cfl_ratio >= PP_CFL_LIMIT {
            return Ok(Err(e.cfl_ratio));
        }
        if self.opts.theta_update == ThetaUpdate::OncePerStep {
            theta_norm = e.theta_norm;
        }
        log.troubled = e.troubled;
        acc(&e, &mut log);
        let u1 = self.combine(u0, 0.0, u0, 1.0, &e, dt, "stage 1")?;

        // Stage 2.
        let p1 = self.prepare(&u1)?;
        let (e, _) = self.finish(&p1, dt, theta_norm)?;
        if e.cfl_ratio >= PP_CFL_LIMIT {
            return Ok(Err(e.cfl_ratio));
        }
        acc(&e, &mut log);
        let u2 = self.combine(u0, 0.75, &u1, 0.25, &e, dt, "stage 2")?;

        // Stage 3.
        let p2 = self.prepare(&u2)?;
        let (e, _) = self.finish(&p2, dt, theta_norm)?;
        if e.cfl_ratio >= PP_CFL_LIMIT {
            return Ok(Err(e.cfl_ratio));
        }
        acc(&e, &mut log);
        let u3 = self.combine(u0, 1.0 / 3.0, &u2, 2.0 / 3.0, &e, dt, "stage 3")?;

        for u in &u3.avg {
            log.min_rho = log.min_rho.min(u.rho());
            log.min_internal_energy = log.min_internal_energy.min(u.internal_energy_unchecked());
        }
        Ok(Ok((u3, log)))
    }

    /// `a·U0 + b·(U + dt L(U))`, followed by boundary handling and the
    /// admissibility checks.
    #[allow(clippy::too_many_arguments)]
    fn combine(&self, u0: &DofField, a: f64, u: &DofField, b: f64, e: &StageEval, dt: f64, stage: &str) -> Result<DofField> {
        let mut out = u.clone();
        let lin_c = |x0: &ConservedState, x: &ConservedState, r: &ConservedState| {
            if a == 0.0 {
                *x + *r * dt
            } else {
                *x0 * a + (*x + *r * dt) * b
            }
        };
        let lin_w = |x0: &ReformState, x: &ReformState, r: &ReformState| {
            if a == 0.0 {
                *x + *r * dt
            } else {
                *x0 * a + (*x + *r * dt) * b
            }
        };
        for (k, o) in out.avg.iter_mut().enumerate() {
            *o = lin_c(&u0.avg[k], &u.avg[k], &e.avg_rates[k]);
        }
        for (k, o) in out.ex.iter_mut().enumerate() {
            *o = lin_w(&u0.ex[k], &u.ex[k], &e.point_rates.ex[k]);
        }
        for (k, o) in out.ey.iter_mut().enumerate() {
            *o = lin_w(&u0.ey[k], &u.ey[k], &e.point_rates.ey[k]);
        }
        for (k, o) in out.vx.iter_mut().enumerate() {
            *o = lin_w(&u0.vx[k], &u.vx[k], &e.point_rates.vx[k]);
        }
        out.sync_periodic(&self.mesh);
        impose_inflow_points(&mut out, &self.mesh, &self.gas);
        check_field(&out, &format!("{stage} at t = {}", self.t)).map_err(|err| {
            if self.opts.pp_guaranteed() {
                Error::Invariant(format!("{err} (positivity guarantee violated)"))
            } else {
                err
            }
        })?;
        Ok(out)
    }

    /// Advance to `t_end`, calling `on_step` after every step. Stops
    /// early if `max_steps` is reached.
    pub fn run_until(&mut self, t_end: f64, max_steps: Option<usize>, mut on_step: impl FnMut(&Solver, &StepLog)) -> Result<Vec<StepLog>> {
        let mut logs = Vec::new();
        let tol = 1e-12 * t_end.abs().max(1.0);
        while self.t < t_end - tol {
            if max_steps.is_some_and(|m| logs.len() >= m) {
                break;
            }
            let log = self.step(t_end - self.t)?;
            on_step(self, &log);
            logs.push(log);
        }
        Ok(logs)
    }
}

/// Largest `|vℓ| + c_{f,ℓ}` over all point values of a padded field.
fn point_speeds(padded: &PaddedField, g: &GasParams) -> (f64, f64) {
    padded
        .ex
        .data
        .par_iter()
        .chain(padded.ey.data.par_iter())
        .chain(padded.vx.data.par_iter())
        .map(|w| {
            let u = to_conserved_unchecked(w, g);
            (w[1].abs() + fast_speed_unchecked(&u, Direction::X, g), w[2].abs() + fast_speed_unchecked(&u, Direction::Y, g))
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)))
}

/// Abort on inadmissible averages or non-finite point values.
fn check_field(f: &DofField, ctx: &str) -> Result<()> {
    if let Some(k) = f.avg.iter().position(|u| !u.is_admissible()) {
        return Err(Error::Invariant(format!("{ctx}: inadmissible average in cell ({}, {}): {:?}", k % f.nx, k / f.nx, f.avg[k].0)));
    }
    for (name, v) in [("ex", &f.ex), ("ey", &f.ey), ("vx", &f.vx)] {
        if let Some(k) = v.iter().position(|w| !w.is_finite()) {
            return Err(Error::Invariant(format!("{ctx}: non-finite point value {name}[{k}]")));
        }
    }
    Ok(())
}

/// Overwrite boundary point values that lie inside an inflow window by
/// the inflow state.
fn impose_inflow_points(f: &mut DofField, mesh: &Mesh, g: &GasParams) {
    let (nx, ny) = (mesh.nx, mesh.ny);
    for (side, k) in [(0usize, 0usize), (1, nx)] {
        for j in 0..ny {
            if let Some(p) = inflow_at(mesh, side, mesh.face_x(k as isize), mesh.center_y(j as isize)) {
                *f.ex_mut(k, j) = p.to_reform(g);
            }
        }
        for l in 0..=ny {
            if let Some(p) = inflow_at(mesh, side, mesh.face_x(k as isize), mesh.face_y(l as isize)) {
                *f.vx_mut(k, l) = p.to_reform(g);
            }
        }
    }
    for (side, k) in [(2usize, 0usize), (3, ny)] {
        for i in 0..nx {
            if let Some(p) = inflow_at(mesh, side, mesh.center_x(i as isize), mesh.face_y(k as isize)) {
                *f.ey_mut(i, k) = p.to_reform(g);
            }
        }
        for l in 0..=nx {
            if let Some(p) = inflow_at(mesh, side, mesh.face_x(l as isize), mesh.face_y(k as isize)) {
                *f.vx_mut(l, k) = p.to_reform(g);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Boundary;
    use crate::state::{Primitive, QForm};

    fn periodic_mesh(n: usize) -> Mesh {
        Mesh::new(n, n, (0.0, 1.0), (0.0, 1.0), [Boundary::Periodic; 4]).unwrap()
    }

    fn uniform_field(mesh: &Mesh, g: &GasParams, p: Primitive) -> DofField {
        let mut f = DofField::zeros(mesh.nx, mesh.ny);
        let u = p.to_conserved(g.gamma);
        let w = p.to_reform(g);
        f.avg.iter_mut().for_each(|x| *x = u);
        f.ex.iter_mut().for_each(|x| *x = w);
        f.ey.iter_mut().for_each(|x| *x = w);
        f.vx.iter_mut().for_each(|x| *x = w);
        f
    }

    #[test]
    fn compute_dt_examples() {
        let m = Mesh::new(3, 3, (0.0, 3.0), (0.0, 3.0), [Boundary::Periodic; 4]).unwrap();
        assert!((compute_dt((1.0, 1.0), &m, 0.1).unwrap() - 0.05).abs() < 1e-16);
        assert!(compute_dt((1.0, 1.0), &m, 1.0 / 6.0).is_err());
        assert!(compute_dt((1.0, 1.0), &m, 0.0).is_err());
        let opts = SchemeOptions { cfl: 0.2, ..Default::default() };
        assert!(opts.validate().is_err());
    }

    #[test]
    fn uniform_field_is_a_fixed_point() {
        let g = GasParams::new(5.0 / 3.0, 1.0, QForm::Softplus).unwrap();
        let mesh = periodic_mesh(6);
        let p = Primitive { rho: 1.2, v: [0.3, -0.2, 0.1], b: [0.4, 0.5, -0.1], p: 0.9 };
        let f = uniform_field(&mesh, &g, p);
        let mut s = Solver::new(mesh, g, SchemeOptions::default(), f.clone()).unwrap();
        let log = s.step(f64::INFINITY).unwrap();
        assert!(log.dt > 0.0);
        for (a, b) in s.field.avg.iter().zip(&f.avg) {
            assert!((*a - *b).max_abs() <= 1e-14 * b.max_abs());
        }
        for (a, b) in s.field.vx.iter().zip(&f.vx) {
            assert!((*a - *b).max_abs() <= 1e-13 * b.max_abs().max(1.0));
        }
        assert_eq!(log.troubled, 0);
    }

    #[test]
    fn rk3_order_on_scalar_surrogate() {
        // The Shu–Osher combination applied to u' = λu gives the cubic
        // Taylor polynomial of exp(λ dt).
        let lam = -0.7f64;
        for dt in [0.1, 0.05] {
            let u0 = 1.0;
            let u1 = u0 + dt * lam * u0;
            let u2 = 0.75 * u0 + 0.25 * (u1 + dt * lam * u1);
            let u3 = u0 / 3.0 + 2.0 / 3.0 * (u2 + dt * lam * u2);
            let z = lam * dt;
            assert!((u3 - (1.0 + z + z * z / 2.0 + z * z * z / 6.0)).abs() < 1e-15);
            assert!((u3 - z.exp()).abs() <= 1.1 * z.powi(4).abs() / 24.0);
        }
    }
}
