//! Randomized property suites run by `pampa selftest` and the acceptance
//! tests.
//!
//! Each suite returns a [`Check`] with a pass flag and a one-line summary.
//! All randomness comes from a seeded ChaCha generator, so a failing seed
//! can be replayed.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::gql::{eq1_margin, wu1_margin, wu2_margin, GqlProbe};
use crate::limiting::PP_EPSILON;
use crate::mesh::{Boundary, DofField, Mesh};
use crate::point::{central, edge_one_sided, vertex_one_sided};
use crate::problems::init_field_with;
use crate::scheme::{SchemeOptions, Solver};
use crate::state::{to_conserved, Direction, GasParams, Primitive, QForm, ReformState, NVAR};

/// Outcome of one property suite.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn line(&self) -> String {
        format!("{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

/// Sample counts and seed for the suites.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Random state pairs and probes for the linear inequalities.
    pub gql_samples: usize,
    /// Random fields for single forward-Euler steps.
    pub euler_fields: usize,
    /// Random fields for the COE invariance checks.
    pub coe_fields: usize,
    /// Steps compared in the evolution-invariance check.
    pub evolution_steps: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig { seed: 20240607, gql_samples: 100_000, euler_fields: 1000, coe_fields: 10, evolution_steps: 10 }
    }
}

/// Flux scales used by the invariance checks.
pub const MU_VALUES: [f64; 3] = [1e-3, 1.0, 1e3];

/// Relative tolerance for the inequality margins.
pub const GQL_REL_TOL: f64 = 1e-12;

/// Ten units in the last place of 1, the strict bound on damping
/// factors in `(0, 1]`.
pub const THETA_TOL: f64 = 10.0 * f64::EPSILON;

/// Roundoff bound on damping factors used by the self-test. Scaling the
/// point values passes through `ln`/`exp`, which alone moves `θ^OE` by
/// tens of ulp.
pub const THETA_ROUNDOFF_TOL: f64 = 1e-12;

/// Relative tolerance for scaled-flux trajectories.
pub const EVOLUTION_REL_TOL: f64 = 1e-12;

/// Relative tolerance for derivative stencils on polynomial data.
pub const STENCIL_REL_TOL: f64 = 1e-12;

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    10f64.powf(rng.gen_range(lo..hi))
}

fn vec3(rng: &mut ChaCha8Rng, r: f64) -> [f64; 3] {
    [rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r)]
}

/// Random admissible state spanning several decades of density,
/// pressure and plasma beta.
pub fn random_primitive(rng: &mut ChaCha8Rng) -> Primitive {
    Primitive { rho: log_uniform(rng, -4.0, 2.0), v: vec3(rng, 5.0), b: vec3(rng, 5.0), p: log_uniform(rng, -6.0, 2.0) }
}

fn gas(q_form: QForm) -> GasParams {
    GasParams::new(5.0 / 3.0, 1.0, q_form).expect("valid gas")
}

fn periodic_mesh(n: usize) -> Mesh {
    Mesh::new(n, n, (0.0, 1.0), (0.0, 1.0), [Boundary::Periodic; 4]).expect("valid mesh")
}

/// The three inequalities behind the positivity proof, on random pairs,
/// probes and divergence weights.
pub fn gql_suite(cfg: &SelftestConfig) -> Check {
    let g = gas(QForm::Softplus);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = [f64::INFINITY; 3];
    let mut failures = 0usize;
    for _ in 0..cfg.gql_samples {
        let u = random_primitive(&mut rng).to_conserved(g.gamma);
        let ut = random_primitive(&mut rng).to_conserved(g.gamma);
        let probe = GqlProbe { v_star: vec3(&mut rng, 10.0), b_star: vec3(&mut rng, 10.0) };
        let dir = if rng.gen_bool(0.5) { Direction::X } else { Direction::Y };
        let xi = rng.gen_range(-10.0..10.0);
        let margins = [eq1_margin(&u, &ut, dir, &g), wu1_margin(&u, &ut, &probe, dir, &g), wu2_margin(&u, xi, &probe)];
        for (w, m) in worst.iter_mut().zip(&margins) {
            *w = w.min(m.value / m.scale.max(f64::MIN_POSITIVE));
        }
        failures += margins.iter().filter(|m| !m.holds(GQL_REL_TOL)).count();
    }
    Check {
        name: "gql-inequalities",
        passed: failures == 0,
        detail: format!(
            "{} samples, {failures} violations, worst relative margins {:.2e} / {:.2e} / {:.2e}",
            cfg.gql_samples, worst[0], worst[1], worst[2]
        ),
    }
}

/// Field with random admissible averages and independently random point
/// values on a small periodic mesh.
pub fn random_rough_field(rng: &mut ChaCha8Rng, mesh: &Mesh, g: &GasParams) -> DofField {
    let moderate = |rng: &mut ChaCha8Rng| Primitive {
        rho: log_uniform(rng, -2.0, 1.0),
        v: vec3(rng, 2.0),
        b: vec3(rng, 2.0),
        p: log_uniform(rng, -3.0, 1.0),
    };
    let mut f = DofField::zeros(mesh.nx, mesh.ny);
    f.avg.iter_mut().for_each(|u| *u = moderate(rng).to_conserved(g.gamma));
    for v in [&mut f.ex, &mut f.ey, &mut f.vx] {
        v.iter_mut().for_each(|w| *w = moderate(rng).to_reform(g));
    }
    f.sync_periodic(mesh);
    f
}

/// Single forward-Euler steps under the positivity CFL bound keep every
/// average admissible.
pub fn forward_euler_suite(cfg: &SelftestConfig) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_0001);
    let mut failures = Vec::new();
    let mut min_e = f64::INFINITY;
    for n in 0..cfg.euler_fields {
        let q_form = if n % 2 == 0 { QForm::Softplus } else { QForm::Rational };
        let g = gas(q_form);
        let mesh = periodic_mesh(4);
        let f = random_rough_field(&mut rng, &mesh, &g);
        let result = Solver::new(mesh, g, SchemeOptions::default(), f).and_then(|s| s.forward_euler(f64::INFINITY));
        match result {
            Ok((out, _)) => {
                let e = out.avg.iter().map(|u| u.internal_energy_unchecked()).fold(f64::INFINITY, f64::min);
                min_e = min_e.min(e);
                if !out.avg.iter().all(|u| u.is_admissible()) {
                    failures.push(format!("field {n}: inadmissible average"));
                }
            }
            Err(e) => failures.push(format!("field {n}: {e}")),
        }
    }
    Check {
        name: "forward-euler-positivity",
        passed: failures.is_empty(),
        detail: format!(
            "{} random fields, {} failures, min internal energy {min_e:.3e}{}",
            cfg.euler_fields,
            failures.len(),
            failures.first().map(|s| format!(", first: {s}")).unwrap_or_default()
        ),
    }
}

/// Point values stay admissible for any finite update, however large the
/// step, because the reformulated variables map onto the admissible set.
pub fn point_positivity(cfg: &SelftestConfig) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_0002);
    let mut checked = 0usize;
    let mut failures = 0usize;
    for n in 0..cfg.coe_fields.max(1) {
        let q_form = if n % 2 == 0 { QForm::Softplus } else { QForm::Rational };
        let g = gas(q_form);
        let mesh = periodic_mesh(4);
        let f = random_rough_field(&mut rng, &mesh, &g);
        let Ok(s) = Solver::new(mesh, g, SchemeOptions::default(), f.clone()) else {
            failures += 1;
            continue;
        };
        let Ok(dt) = s.stable_dt() else {
            failures += 1;
            continue;
        };
        let Ok((_, rates, _)) = s.rates(dt) else {
            failures += 1;
            continue;
        };
        for factor in [1.0, 1e2, 1e4] {
            for (w, r) in f.ex.iter().zip(&rates.ex).chain(f.ey.iter().zip(&rates.ey)).chain(f.vx.iter().zip(&rates.vx)) {
                let next = *w + *r * (factor * dt);
                let p = Primitive::from_reform(&next, &g);
                // Overflow or underflow of the exponentials is a
                // floating-point range limit, not a positivity failure.
                let representable = next.is_finite()
                    && p.p.is_finite()
                    && p.rho.is_finite()
                    && next[0] > -EXP_RANGE
                    && next[7] + g.gamma * p.rho.ln() > -EXP_RANGE;
                if !representable {
                    continue;
                }
                checked += 1;
                if !(p.rho > 0.0 && p.p > 0.0) || to_conserved(&next, &g).is_err() {
                    failures += 1;
                }
            }
        }
    }
    Check {
        name: "point-positivity",
        passed: failures == 0 && checked > 0,
        detail: format!("{checked} updated point values with steps up to 1e4 x stable, {failures} inadmissible"),
    }
}

/// Magnitude beyond which `exp` leaves the normal double range.
const EXP_RANGE: f64 = 700.0;

/// Random biquadratic in each of the eight components.
struct Poly {
    c: [[f64; 9]; NVAR],
}

impl Poly {
    fn random(rng: &mut ChaCha8Rng, quadratic: bool) -> Poly {
        let mut c = [[0.0; 9]; NVAR];
        for row in &mut c {
            for (k, v) in row.iter_mut().enumerate() {
                // Basis x^a y^b with a, b ≤ 2; index k = 3a + b.
                let (a, b) = (k / 3, k % 3);
                *v = if quadratic || a + b <= 1 { rng.gen_range(-2.0..2.0) } else { 0.0 };
            }
        }
        Poly { c }
    }

    fn eval(&self, x: f64, y: f64) -> ReformState {
        let (px, py) = ([1.0, x, x * x], [1.0, y, y * y]);
        ReformState(self.c.map(|row| (0..9).map(|k| row[k] * px[k / 3] * py[k % 3]).sum()))
    }

    fn dx(&self, x: f64, y: f64) -> ReformState {
        let (px, py) = ([0.0, 1.0, 2.0 * x], [1.0, y, y * y]);
        ReformState(self.c.map(|row| (0..9).map(|k| row[k] * px[k / 3] * py[k % 3]).sum()))
    }

    fn dy(&self, x: f64, y: f64) -> ReformState {
        let (px, py) = ([1.0, x, x * x], [0.0, 1.0, 2.0 * y]);
        ReformState(self.c.map(|row| (0..9).map(|k| row[k] * px[k / 3] * py[k % 3]).sum()))
    }

    /// Exact average over `[x0, x0 + hx] × [y0, y0 + hy]`.
    fn average(&self, x0: f64, hx: f64, y0: f64, hy: f64) -> ReformState {
        let mx = |a: usize| {
            let (l, r) = (x0, x0 + hx);
            (r.powi(a as i32 + 1) - l.powi(a as i32 + 1)) / ((a as f64 + 1.0) * hx)
        };
        let my = |b: usize| {
            let (l, r) = (y0, y0 + hy);
            (r.powi(b as i32 + 1) - l.powi(b as i32 + 1)) / ((b as f64 + 1.0) * hy)
        };
        ReformState(self.c.map(|row| (0..9).map(|k| row[k] * mx(k / 3) * my(k % 3)).sum()))
    }
}

fn rel_err(a: &ReformState, b: &ReformState, scale: f64) -> f64 {
    (*a - *b).max_abs() / scale.max(1.0)
}

/// Every derivative stencil reproduces derivatives of affine and
/// biquadratic data.
pub fn stencil_exactness(cfg: &SelftestConfig) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_0003);
    let mut worst = 0.0f64;
    let trials = 200;
    for t in 0..trials {
        let p = Poly::random(&mut rng, t % 2 == 1);
        let (hx, hy) = (log_uniform(&mut rng, -3.0, 0.0), log_uniform(&mut rng, -3.0, 0.0));
        let (x0, y0) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        // Cell [x0 - hx, x0] × [y0, y0 + hy] on the minus side of the
        // x-edge at x0; the y-edge case is the same with axes swapped.
        let ym = y0 + 0.5 * hy;
        let edge_x = edge_one_sided(
            &p.average(x0 - hx, hx, y0, hy),
            &p.eval(x0 - hx, ym),
            &p.eval(x0, ym),
            [&p.eval(x0 - 0.5 * hx, y0), &p.eval(x0 - 0.5 * hx, y0 + hy)],
            [&p.eval(x0 - hx, y0), &p.eval(x0, y0), &p.eval(x0 - hx, y0 + hy), &p.eval(x0, y0 + hy)],
            hx,
        );
        let exact = p.dx(x0, ym);
        let scale = exact.max_abs().max(p.eval(x0, ym).max_abs() / hx);
        worst = worst.max(rel_err(&edge_x, &exact, scale));

        // Plus-side cell [x0, x0 + hx]: negated stencil with mirrored points.
        let edge_plus = -edge_one_sided(
            &p.average(x0, hx, y0, hy),
            &p.eval(x0 + hx, ym),
            &p.eval(x0, ym),
            [&p.eval(x0 + 0.5 * hx, y0), &p.eval(x0 + 0.5 * hx, y0 + hy)],
            [&p.eval(x0, y0), &p.eval(x0 + hx, y0), &p.eval(x0, y0 + hy), &p.eval(x0 + hx, y0 + hy)],
            hx,
        );
        worst = worst.max(rel_err(&edge_plus, &exact, scale));

        let xm = x0 + 0.5 * hx;
        let edge_y = edge_one_sided(
            &p.average(x0, hx, y0 - hy, hy),
            &p.eval(xm, y0 - hy),
            &p.eval(xm, y0),
            [&p.eval(x0, y0 - 0.5 * hy), &p.eval(x0 + hx, y0 - 0.5 * hy)],
            [&p.eval(x0, y0 - hy), &p.eval(x0, y0), &p.eval(x0 + hx, y0 - hy), &p.eval(x0 + hx, y0)],
            hy,
        );
        let exact_y = p.dy(xm, y0);
        let scale_y = exact_y.max_abs().max(p.eval(xm, y0).max_abs() / hy);
        worst = worst.max(rel_err(&edge_y, &exact_y, scale_y));

        // Vertex stencils: one-sided from either side and central.
        let v = (x0, y0);
        let vs = exact_scale(&p, v, hx);
        let from_minus = vertex_one_sided(&p.eval(x0 - hx, y0), &p.eval(x0 - 0.5 * hx, y0), &p.eval(x0, y0), hx);
        let from_plus = -vertex_one_sided(&p.eval(x0 + hx, y0), &p.eval(x0 + 0.5 * hx, y0), &p.eval(x0, y0), hx);
        let cen = central(&p.eval(x0, y0 - 0.5 * hy), &p.eval(x0, y0 + 0.5 * hy), hy);
        worst = worst.max(rel_err(&from_minus, &p.dx(x0, y0), vs));
        worst = worst.max(rel_err(&from_plus, &p.dx(x0, y0), vs));
        worst = worst.max(rel_err(&cen, &p.dy(x0, y0), exact_scale(&p, v, hy)));
    }
    Check {
        name: "stencil-exactness",
        passed: worst <= STENCIL_REL_TOL,
        detail: format!("{trials} affine/biquadratic cases, worst relative error {worst:.2e} (tol {STENCIL_REL_TOL:.0e})"),
    }
}

fn exact_scale(p: &Poly, (x, y): (f64, f64), h: f64) -> f64 {
    p.dx(x, y).max_abs().max(p.dy(x, y).max_abs()).max(p.eval(x, y).max_abs() / h)
}

/// Smooth random state with a contact-like jump along a random line, so
/// that the indicator flags cells along the jump.
pub fn random_jump_ic(rng: &mut ChaCha8Rng) -> impl Fn(f64, f64) -> Primitive + Sync + Clone {
    let k: [f64; 4] = [1.0, 2.0, 1.0, 2.0].map(|m: f64| m * if rng.gen_bool(0.5) { 1.0 } else { -1.0 });
    let ph: [f64; 8] = std::array::from_fn(|_| rng.gen_range(0.0..2.0 * PI));
    let amp = rng.gen_range(0.05..0.3);
    let pressure_ratio = log_uniform(rng, 0.5, 1.5);
    let angle = rng.gen_range(0.0..PI);
    let (nx, ny) = (angle.cos(), angle.sin());
    let b0 = vec3(rng, 1.0);
    move |x: f64, y: f64| {
        let s = |m: usize, a: f64, b: f64| (2.0 * PI * (a * x + b * y) + ph[m]).sin();
        let d = (x - 0.5) * nx + (y - 0.5) * ny;
        let inside = d.abs() < 0.25;
        Primitive {
            rho: (1.0 + amp * s(0, k[0], k[1])) * if inside { 2.0 } else { 1.0 },
            v: [amp * s(1, k[1], k[2]), amp * s(2, k[2], k[3]), amp * s(3, k[0], k[3])],
            b: [b0[0] + amp * s(4, 0.0, k[1]), b0[1] + amp * s(5, k[0], 0.0), b0[2] + amp * s(6, k[2], k[1])],
            p: (1.0 + amp * s(7, k[3], k[0])) * if inside { pressure_ratio } else { 1.0 },
        }
    }
}

/// Apply the scaling `ρ, m, E ↦ μ(·)`, `B ↦ √μ B` to every DoF.
pub fn scale_field(f: &DofField, mu: f64, g: &GasParams) -> DofField {
    let s = mu.sqrt();
    let scale_prim = |p: Primitive| Primitive { rho: mu * p.rho, v: p.v, b: p.b.map(|b| s * b), p: mu * p.p };
    let mut out = f.clone();
    for u in &mut out.avg {
        for k in 0..NVAR {
            u[k] *= if (4..7).contains(&k) { s } else { mu };
        }
    }
    for v in [&mut out.ex, &mut out.ey, &mut out.vx] {
        for w in v.iter_mut() {
            *w = scale_prim(Primitive::from_reform(w, g)).to_reform(g);
        }
    }
    out
}

/// Result of the scale-invariance comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaleReport {
    /// Largest `|θ^OE(PU) − θ^OE(U)|` over cells, fields and scales.
    pub max_dtheta: f64,
    /// Troubled cells summed over the unscaled fields.
    pub flagged: usize,
    /// Structural mismatches: changed masks or damping outside the mask.
    pub problems: Vec<String>,
}

/// Compare damping factors of random fields with those of their images
/// under `ρ, m, E ↦ μ(·)`, `B ↦ √μ B`. The limiter margin is scaled
/// along with the state so that the scaled run is the exact image.
pub fn coe_scale_deviation(cfg: &SelftestConfig) -> Result<ScaleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_0004);
    let g = gas(QForm::Softplus);
    let mut report = ScaleReport { max_dtheta: 0.0, flagged: 0, problems: Vec::new() };
    for n in 0..cfg.coe_fields {
        let mesh = periodic_mesh(16);
        let f = init_field_with(&mesh, &g, random_jump_ic(&mut rng))?;
        let base = Solver::new(mesh.clone(), g, SchemeOptions::default(), f.clone())?;
        let dt = base.stable_dt()?;
        let d0 = base.diagnostics(dt)?;
        report.flagged += d0.mask.count();
        for (k, th) in d0.theta_oe.iter().enumerate() {
            if !d0.mask.flags[k] && *th != 1.0 {
                report.problems.push(format!("field {n}: damping outside the mask"));
            }
        }
        for mu in MU_VALUES {
            let opts = SchemeOptions { pp_epsilon: mu * PP_EPSILON, ..Default::default() };
            let d1 = Solver::new(mesh.clone(), g, opts, scale_field(&f, mu, &g))?.diagnostics(dt)?;
            if d1.mask != d0.mask {
                report.problems.push(format!("field {n}, mu {mu:e}: troubled mask changed"));
            }
            for (a, b) in d0.theta_oe.iter().zip(&d1.theta_oe) {
                report.max_dtheta = report.max_dtheta.max((a - b).abs());
            }
        }
    }
    Ok(report)
}

/// Damping factors are invariant under the state scaling up to roundoff,
/// and damping stays local to troubled cells.
pub fn coe_scale_invariance(cfg: &SelftestConfig) -> Result<Check> {
    let r = coe_scale_deviation(cfg)?;
    let passed = r.problems.is_empty() && r.max_dtheta <= THETA_ROUNDOFF_TOL && r.flagged > 0;
    Ok(Check {
        name: "coe-scale-invariance",
        passed,
        detail: format!(
            "{} fields x mu in {{1e-3, 1, 1e3}}, {} troubled cells, max |dtheta| {:.2e} (tol {THETA_ROUNDOFF_TOL:.0e}; {} 10 ulp){}",
            cfg.coe_fields,
            r.flagged,
            r.max_dtheta,
            if r.max_dtheta <= THETA_TOL { "within" } else { "exceeds" },
            r.problems.first().map(|s| format!(", {s}")).unwrap_or_default()
        ),
    })
}

/// Maximum over all DoFs of the difference relative to the largest
/// magnitude of the same kind.
pub fn field_rel_diff(a: &DofField, b: &DofField) -> f64 {
    let avg_scale = a.avg.iter().map(|u| u.max_abs()).fold(0.0, f64::max);
    let avg = a.avg.iter().zip(&b.avg).map(|(x, y)| (*x - *y).max_abs()).fold(0.0, f64::max) / avg_scale;
    let pts = |x: &[ReformState], y: &[ReformState]| {
        let s = x.iter().map(|w| w.max_abs()).fold(0.0, f64::max);
        x.iter().zip(y).map(|(p, q)| (*p - *q).max_abs()).fold(0.0, f64::max) / s
    };
    avg.max(pts(&a.ex, &b.ex)).max(pts(&a.ey, &b.ey)).max(pts(&a.vx, &b.vx))
}

/// Full steps with the fluxes scaled by `μ` and the step by `1/μ`
/// reproduce the unscaled trajectory.
pub fn evolution_invariance(cfg: &SelftestConfig) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_0005);
    let g = gas(QForm::Softplus);
    let mesh = periodic_mesh(12);
    let f = init_field_with(&mesh, &g, random_jump_ic(&mut rng))?;
    let mut worst = 0.0f64;
    let mut troubled = 0usize;
    for mu in MU_VALUES {
        let mut base = Solver::new(mesh.clone(), g, SchemeOptions::default(), f.clone())?;
        let opts = SchemeOptions { flux_scale: mu, ..Default::default() };
        let mut scaled = Solver::new(mesh.clone(), g, opts, f.clone())?;
        for _ in 0..cfg.evolution_steps {
            let dt = 0.5 * base.stable_dt()?;
            let l0 = base.step(dt)?;
            let l1 = scaled.step(dt / mu)?;
            troubled += l0.troubled;
            worst = worst.max((l1.dt * mu - l0.dt).abs() / l0.dt);
            worst = worst.max(field_rel_diff(&base.field, &scaled.field));
        }
    }
    Ok(Check {
        name: "coe-evolution-invariance",
        passed: worst <= EVOLUTION_REL_TOL,
        detail: format!(
            "{} steps x mu in {{1e-3, 1, 1e3}}, {troubled} troubled cell-steps, max relative deviation {worst:.2e} (tol {EVOLUTION_REL_TOL:.0e})",
            cfg.evolution_steps
        ),
    })
}

/// Run every suite. Errors inside a suite are reported as failures.
pub fn run_all(cfg: &SelftestConfig) -> Vec<Check> {
    let fallible =
        |name: &'static str, r: Result<Check>| r.unwrap_or_else(|e| Check { name, passed: false, detail: format!("error: {e}") });
    vec![
        gql_suite(cfg),
        forward_euler_suite(cfg),
        point_positivity(cfg),
        stencil_exactness(cfg),
        fallible("coe-scale-invariance", coe_scale_invariance(cfg)),
        fallible("coe-evolution-invariance", evolution_invariance(cfg)),
    ]
}
