//! Low-beta blast wave.
//!
//! Runs Blast I (`p0 = 1000`, `B0 = 100/√(4π)`) or Blast II with
//! `blast2` as the second argument, logging the smallest density and
//! internal energy per step.
//!
//! ```text
//! cargo run --release --example blast -- 100 blast1 0.01
//! ```

use pampa_mhd::problems::ProblemSpec;
use pampa_mhd::scheme::{SchemeOptions, Solver};
use pampa_mhd::QForm;

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(50);
    let name = args.next().unwrap_or_else(|| "blast1".into());
    let spec = ProblemSpec::by_name(&name)?;
    let t_end: f64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(spec.t_end);
    let mesh = spec.mesh(n, n)?;
    let g = spec.gas(QForm::Softplus)?;
    let mut solver = Solver::new(mesh, g, SchemeOptions::default(), spec.init_field(&spec.mesh(n, n)?, &g)?)?;
    let (mut min_rho, mut min_e) = (f64::INFINITY, f64::INFINITY);
    solver.run_until(t_end, None, |_, l| {
        min_rho = min_rho.min(l.min_rho);
        min_e = min_e.min(l.min_internal_energy);
        if l.step % 100 == 0 {
            println!(
                "step {:5} t {:.3e} dt {:.2e} troubled {:5} min rho {:.3e} min e {:.3e}",
                l.step, l.t, l.dt, l.troubled, l.min_rho, l.min_internal_energy
            );
        }
    })?;
    println!("{name}: {} steps to t = {t_end}, min density {min_rho:.3e}, min internal energy {min_e:.3e}", solver.steps);
    Ok(())
}
