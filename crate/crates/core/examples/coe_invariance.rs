//! Scale and evolution invariance of the oscillation damping.
//!
//! Maps random fields by `ρ, m, E ↦ μ(·)`, `B ↦ √μ B` and compares the
//! damping factors, then runs the flux-scaled system with `dt/μ` against
//! the unscaled one.
//!
//! ```text
//! cargo run --release --example coe_invariance -- 10
//! ```

use pampa_mhd::selftest::{coe_scale_deviation, evolution_invariance, SelftestConfig, THETA_TOL};

fn main() -> anyhow::Result<()> {
    let fields: usize = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(10);
    let cfg = SelftestConfig { coe_fields: fields, ..Default::default() };
    let r = coe_scale_deviation(&cfg)?;
    println!(
        "scale map: {fields} fields, {} troubled cells, max |dtheta| = {:.3e} ({:.1} ulp of 1)",
        r.flagged,
        r.max_dtheta,
        r.max_dtheta / THETA_TOL * 10.0
    );
    for p in &r.problems {
        println!("  {p}");
    }
    println!("{}", evolution_invariance(&cfg)?.line());
    Ok(())
}
