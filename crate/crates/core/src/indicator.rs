//! Troubled-cell detection by a Lax-type entropy test on cell averages.
//!
//! At every interface the fast characteristic speeds `λ± = v_n ± c_f` of
//! the two adjacent cell averages are compared. Characteristics that
//! converge into the interface by more than `δ · max(c_f)` mark both
//! adjacent cells as troubled. The test is evaluated the same way in
//! both directions and in both orientations, so mirrored data gives a
//! mirrored mask.

use crate::error::{Error, Result};
use crate::mesh::{Grid2, Mesh};
use crate::state::{fast_speed_unchecked, ConservedState, Direction, GasParams};
use rayon::prelude::*;
use std::str::FromStr;

/// Which characteristic families enter the test.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IndicatorMode {
    /// The two fast families.
    #[default]
    TwoSpeed,
    /// The fast families plus the entropy family `v_n`.
    ThreeSpeed,
    /// No detection: every cell is treated as troubled.
    Off,
}

impl FromStr for IndicatorMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "two" | "two_speed" => Ok(IndicatorMode::TwoSpeed),
            "three" | "three_speed" => Ok(IndicatorMode::ThreeSpeed),
            "off" | "none" => Ok(IndicatorMode::Off),
            other => Err(Error::Config(format!("unknown indicator mode '{other}' (expected two|three|off)"))),
        }
    }
}

/// Default relative threshold `δ`. Smooth benchmark data at desk-scale
/// resolution produce relative speed jumps of a few percent per cell, so
/// the threshold sits above that while shocks exceed it by far.
pub const DEFAULT_DELTA: f64 = 0.1;

/// Per-cell troubled flags on the interior grid, row-major in `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TroubleMask {
    pub nx: usize,
    pub ny: usize,
    pub flags: Vec<bool>,
}

impl TroubleMask {
    pub fn uniform(nx: usize, ny: usize, v: bool) -> TroubleMask {
        TroubleMask { nx, ny, flags: vec![v; nx * ny] }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.flags[j * self.nx + i]
    }

    pub fn count(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }

    /// True when every flag of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &TroubleMask) -> bool {
        self.flags.iter().zip(&other.flags).all(|(&a, &b)| !a || b)
    }
}

/// Whether the interface between `a` (minus side) and `b` (plus side)
/// carries converging characteristics.
fn interface_flag(a: &ConservedState, b: &ConservedState, dir: Direction, g: &GasParams, delta: f64, three: bool) -> bool {
    let ax = dir.axis();
    let (va, vb) = (a[1 + ax] / a[0], b[1 + ax] / b[0]);
    let (ca, cb) = (fast_speed_unchecked(a, dir, g), fast_speed_unchecked(b, dir, g));
    let thr = delta * ca.max(cb);
    let plus = (va + ca) - (vb + cb) > thr;
    let minus = (va - ca) - (vb - cb) > thr;
    plus || minus || (three && va - vb > thr)
}

/// Detect troubled cells from padded cell averages (`avg(i, j)` for
/// `i ∈ -1..=nx`, `j ∈ -1..=ny`). Interfaces on the domain boundary use
/// the ghost averages; only interior cells are marked.
pub fn detect(avg: &Grid2<ConservedState>, mesh: &Mesh, g: &GasParams, delta: f64, mode: IndicatorMode) -> Result<TroubleMask> {
    let (nx, ny) = (mesh.nx, mesh.ny);
    if mode == IndicatorMode::Off {
        return Ok(TroubleMask::uniform(nx, ny, true));
    }
    if let Some(pos) = avg.data.iter().position(|u| !u.is_admissible()) {
        return Err(Error::Invariant(format!("indicator: inadmissible average at padded index ({}, {})", pos % avg.w, pos / avg.w)));
    }
    let three = mode == IndicatorMode::ThreeSpeed;
    // xf(k, j): interface between cells k−1 and k; yf(i, k) likewise.
    let xf: Vec<bool> = (0..ny * (nx + 1))
        .into_par_iter()
        .map(|idx| {
            let (k, j) = ((idx % (nx + 1)) as isize, (idx / (nx + 1)) as isize);
            interface_flag(avg.get(k - 1, j), avg.get(k, j), Direction::X, g, delta, three)
        })
        .collect();
    let yf: Vec<bool> = (0..(ny + 1) * nx)
        .into_par_iter()
        .map(|idx| {
            let (i, k) = ((idx % nx) as isize, (idx / nx) as isize);
            interface_flag(avg.get(i, k - 1), avg.get(i, k), Direction::Y, g, delta, three)
        })
        .collect();
    let flags = (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % nx, idx / nx);
            xf[j * (nx + 1) + i] || xf[j * (nx + 1) + i + 1] || yf[j * nx + i] || yf[(j + 1) * nx + i]
        })
        .collect();
    Ok(TroubleMask { nx, ny, flags })
}
