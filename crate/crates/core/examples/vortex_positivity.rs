//! Extreme-strength isentropic vortex with a near-vacuum center.
//!
//! Runs the vortex with `μ = 5.389489439` once with the positivity
//! limiter and once without it, and reports the smallest pressure seen.
//!
//! ```text
//! cargo run --release --example vortex_positivity -- 40
//! ```

use pampa_mhd::problems::{ProblemSpec, VORTEX_EXTREME_MU};
use pampa_mhd::scheme::{SchemeOptions, Solver};
use pampa_mhd::QForm;

fn main() -> anyhow::Result<()> {
    let n: usize = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(40);
    let spec = ProblemSpec::by_name("vortex_extreme")?;
    let mesh = spec.mesh(n, n)?;
    let g = spec.gas(QForm::Softplus)?;
    println!("vortex strength {VORTEX_EXTREME_MU}, {n} x {n} cells, t_end = {}", spec.t_end);
    for pp in [true, false] {
        let opts = SchemeOptions { pp, ..Default::default() };
        let field = spec.init_field(&mesh, &g)?;
        let min_p0 = field.avg.iter().map(|u| u.pressure(g.gamma)).fold(f64::INFINITY, f64::min);
        let label = if pp { "with limiter" } else { "without limiter" };
        let mut solver = match Solver::new(mesh.clone(), g, opts, field) {
            Ok(s) => s,
            Err(e) => {
                println!("{label}: rejected at start: {e}");
                continue;
            }
        };
        let mut min_p = min_p0;
        match solver.run_until(spec.t_end, None, |s, _| {
            min_p = min_p.min(s.field.avg.iter().map(|u| u.pressure(g.gamma)).fold(f64::INFINITY, f64::min));
        }) {
            Ok(logs) => println!("{label}: completed {} steps, min average pressure {min_p:.3e}", logs.len()),
            Err(e) => println!("{label}: aborted after {} steps: {e}", solver.steps),
        }
    }
    Ok(())
}
