//! Mesh-refinement study of the circularly polarized Alfvén wave.
//!
//! Runs the full scheme to `t = 1` on `N × N` meshes and prints the
//! velocity and magnetic errors with observed orders.
//!
//! ```text
//! cargo run --release --example alfven_convergence -- 20 40 80
//! ```

use pampa_mhd::problems::{convergence, ProblemSpec};
use pampa_mhd::scheme::SchemeOptions;
use pampa_mhd::QForm;

fn main() -> anyhow::Result<()> {
    let mut meshes: Vec<usize> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    if meshes.is_empty() {
        meshes = vec![20, 40, 80];
    }
    let spec = ProblemSpec::by_name("alfven")?;
    let table = convergence(&spec, SchemeOptions::default(), QForm::Softplus, &meshes)?;
    print!("{}", table.to_text());
    Ok(())
}
