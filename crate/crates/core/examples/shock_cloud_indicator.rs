//! Troubled-cell map of the shock–cloud interaction.
//!
//! Prints the indicator mask as text (`#` troubled, `.` smooth) for the
//! initial data and after a number of steps.
//!
//! ```text
//! cargo run --release --example shock_cloud_indicator -- 60 40
//! ```

use pampa_mhd::indicator::TroubleMask;
use pampa_mhd::problems::ProblemSpec;
use pampa_mhd::scheme::{SchemeOptions, Solver};
use pampa_mhd::QForm;

fn show(mask: &TroubleMask) {
    for j in (0..mask.ny).rev().step_by(2) {
        let row: String = (0..mask.nx).map(|i| if mask.get(i, j) { '#' } else { '.' }).collect();
        println!("{row}");
    }
}

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(60);
    let steps: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(40);
    let spec = ProblemSpec::by_name("shock_cloud")?;
    let mesh = spec.mesh(n, n)?;
    let g = spec.gas(QForm::Softplus)?;
    let mut solver = Solver::new(mesh, g, SchemeOptions::default(), spec.init_field(&spec.mesh(n, n)?, &g)?)?;
    let d = solver.diagnostics(solver.stable_dt()?)?;
    println!("initial data: {} troubled cells", d.mask.count());
    show(&d.mask);
    solver.run_until(spec.t_end, Some(steps), |_, _| {})?;
    let d = solver.diagnostics(solver.stable_dt()?)?;
    println!("after {} steps (t = {:.4}): {} troubled cells", solver.steps, solver.t, d.mask.count());
    show(&d.mask);
    Ok(())
}
