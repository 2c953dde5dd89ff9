//! Orszag–Tang vortex with conservation and divergence diagnostics.
//!
//! Prints the relative mass drift, the largest discrete divergence of
//! the projected traces and the troubled-cell count every few steps, and
//! writes a CSV/VTK snapshot at the end.
//!
//! ```text
//! cargo run --release --example orszag_tang -- 100 0.5 out
//! ```

use std::path::PathBuf;

use pampa_mhd::io::{write_snapshot, Format, SnapshotField};
use pampa_mhd::problems::ProblemSpec;
use pampa_mhd::scheme::{SchemeOptions, Solver};
use pampa_mhd::QForm;

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(64);
    let t_end: f64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(0.5);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out".into()));
    let spec = ProblemSpec::by_name("orszag_tang")?;
    let mesh = spec.mesh(n, n)?;
    let g = spec.gas(QForm::Softplus)?;
    let field = spec.init_field(&mesh, &g)?;
    let mass0 = field.totals(&mesh)[0];
    let mut solver = Solver::new(mesh.clone(), g, SchemeOptions::default(), field)?;
    let mut max_div = 0.0f64;
    solver.run_until(t_end, None, |s, l| {
        max_div = max_div.max(l.max_div);
        if l.step % 50 == 0 {
            let drift = (s.field.totals(&s.mesh)[0] - mass0).abs() / mass0;
            println!("step {:5} t {:.4} troubled {:5} mass drift {drift:.2e} max div {:.2e}", l.step, l.t, l.troubled, l.max_div);
        }
    })?;
    let drift = (solver.field.totals(&mesh)[0] - mass0).abs() / mass0;
    println!("t = {t_end}: {} steps, mass drift {drift:.2e}, max relative divergence {max_div:.2e}", solver.steps);
    let diag = solver.diagnostics(solver.stable_dt()?)?;
    let paths =
        write_snapshot(&out, "orszag_tang", &solver.field, &mesh, &g, Some(&diag), &SnapshotField::ALL, &[Format::Csv, Format::Vtk])?;
    for p in paths {
        println!("wrote {}", p.display());
    }
    Ok(())
}
