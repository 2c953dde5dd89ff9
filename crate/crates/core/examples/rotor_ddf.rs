//! Rotor problem with and without the divergence-free projection.
//!
//! The projection keeps the discrete divergence of every cell's traces
//! at roundoff; without it the divergence grows with the solution.
//!
//! ```text
//! cargo run --release --example rotor_ddf -- 64 0.05
//! ```

use pampa_mhd::problems::ProblemSpec;
use pampa_mhd::scheme::{SchemeOptions, Solver};
use pampa_mhd::QForm;

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(64);
    let t_end: f64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(0.05);
    let spec = ProblemSpec::by_name("rotor")?;
    let mesh = spec.mesh(n, n)?;
    let g = spec.gas(QForm::Softplus)?;
    for ddf in [true, false] {
        let opts = SchemeOptions { ddf, ..Default::default() };
        let mut solver = Solver::new(mesh.clone(), g, opts, spec.init_field(&mesh, &g)?)?;
        let logs = solver.run_until(t_end, None, |_, _| {})?;
        let max_div = logs.iter().map(|l| l.max_div).fold(0.0, f64::max);
        let min_rho = logs.iter().map(|l| l.min_rho).fold(f64::INFINITY, f64::min);
        println!("ddf {:5}: {} steps, max relative trace divergence {max_div:.3e}, min density {min_rho:.4}", ddf, logs.len());
    }
    Ok(())
}
