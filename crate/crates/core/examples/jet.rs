//! High-Mach magnetized jet.
//!
//! Runs one of the jet problems (`jet800`, `jet800_b2000`,
//! `jet800_b20000`, `jet2000`, `jet10000`) on a coarse mesh and reports
//! the step count and the smallest density and pressure.
//!
//! ```text
//! cargo run --release --example jet -- jet800 40 60 0.0005
//! ```

use pampa_mhd::problems::ProblemSpec;
use pampa_mhd::scheme::{SchemeOptions, Solver};
use pampa_mhd::QForm;

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "jet800".into());
    let nx: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(40);
    let ny: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(60);
    let spec = ProblemSpec::by_name(&name)?;
    let t_end: f64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(spec.t_end / 2.0);
    let mesh = spec.mesh(nx, ny)?;
    let g = spec.gas(QForm::Softplus)?;
    let mut solver = Solver::new(mesh.clone(), g, SchemeOptions::default(), spec.init_field(&mesh, &g)?)?;
    let logs = solver.run_until(t_end, None, |_, l| {
        if l.step % 200 == 0 {
            println!("step {:5} t {:.3e} alpha ({:.3e}, {:.3e}) troubled {}", l.step, l.t, l.alpha.0, l.alpha.1, l.troubled);
        }
    })?;
    let min_rho = logs.iter().map(|l| l.min_rho).fold(f64::INFINITY, f64::min);
    let min_p = solver.field.avg.iter().map(|u| u.pressure(g.gamma)).fold(f64::INFINITY, f64::min);
    println!("{name}: {} steps to t = {t_end:e}, min density {min_rho:.3e}, final min pressure {min_p:.3e}", logs.len());
    Ok(())
}
