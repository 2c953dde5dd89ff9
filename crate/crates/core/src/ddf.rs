//! Discrete divergence of a cell's magnetic traces and the per-cell
//! projection that makes it vanish.
//!
//! The discrete divergence uses Simpson averages of the normal field
//! along each of the four edges. The projection shifts the normal
//! component on the three points of each edge by a constant, splitting
//! the correction between the x and y directions in proportion to the
//! aspect ratio. Only the cell's private copies are changed.

use crate::mesh::trace::{D, L, LD, LU, R, RD, RU, U};
use std::ops::IndexMut;

const B1: usize = 4;
const B2: usize = 5;

/// Simpson edge averages `(B̄x_L, B̄x_R, B̄y_D, B̄y_U)` of the normal field.
#[inline]
pub fn edge_normal_averages<T: IndexMut<usize, Output = f64>>(t: &[T; 8]) -> [f64; 4] {
    [
        (t[LD][B1] + 4.0 * t[L][B1] + t[LU][B1]) / 6.0,
        (t[RD][B1] + 4.0 * t[R][B1] + t[RU][B1]) / 6.0,
        (t[LD][B2] + 4.0 * t[D][B2] + t[RD][B2]) / 6.0,
        (t[LU][B2] + 4.0 * t[U][B2] + t[RU][B2]) / 6.0,
    ]
}

/// Discrete divergence of the traces of one cell (trace order
/// `LD, D, RD, L, R, LU, U, RU`; any state type with `B1, B2` at
/// components 4 and 5).
#[inline]
pub fn discrete_divergence<T: IndexMut<usize, Output = f64>>(t: &[T; 8], dx: f64, dy: f64) -> f64 {
    let [l, r, d, u] = edge_normal_averages(t);
    (r - l) / dx + (u - d) / dy
}

/// Scale used to judge a divergence as zero: `max(|B1|/dx, |B2|/dy, 1)`
/// over the cell's traces.
pub fn divergence_scale<T: IndexMut<usize, Output = f64>>(t: &[T; 8], dx: f64, dy: f64) -> f64 {
    t.iter().fold(1.0f64, |m, s| m.max(s[B1].abs() / dx).max(s[B2].abs() / dy))
}

/// Project the traces onto the discretely divergence-free set in place.
/// Returns the divergence before projection.
#[inline]
pub fn ddf_project<T: IndexMut<usize, Output = f64>>(t: &mut [T; 8], dx: f64, dy: f64) -> f64 {
    let div = discrete_divergence(t, dx, dy);
    if div == 0.0 {
        return 0.0;
    }
    let rx = dx / dy;
    let ry = dy / dx;
    let a1 = dx * div / (2.0 * (1.0 + rx * rx));
    let a2 = dy * div / (2.0 * (1.0 + ry * ry));
    for s in [RD, R, RU] {
        t[s][B1] -= a1;
    }
    for s in [LD, L, LU] {
        t[s][B1] += a1;
    }
    for s in [LU, U, RU] {
        t[s][B2] -= a2;
    }
    for s in [LD, D, RD] {
        t[s][B2] += a2;
    }
    div
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::ReformState;
    use proptest::prelude::*;

    /// Reference-cell offsets of the trace slots in units of (dx, dy).
    const OFFS: [(f64, f64); 8] = [(-0.5, -0.5), (0.0, -0.5), (0.5, -0.5), (-0.5, 0.0), (0.5, 0.0), (-0.5, 0.5), (0.0, 0.5), (0.5, 0.5)];

    fn sample(f: impl Fn(f64, f64) -> (f64, f64), x0: f64, y0: f64, dx: f64, dy: f64) -> [ReformState; 8] {
        OFFS.map(|(a, b)| {
            let (b1, b2) = f(x0 + a * dx, y0 + b * dy);
            let mut w = ReformState::ZERO;
            w[B1] = b1;
            w[B2] = b2;
            w
        })
    }

    #[test]
    fn uniform_and_linear_free_fields() {
        let t = sample(|_, _| (1.5, -2.0), 0.3, 0.1, 0.1, 0.2);
        assert_eq!(discrete_divergence(&t, 0.1, 0.2), 0.0);
        let t = sample(|x, y| (x, -y), 0.3, 0.7, 0.1, 0.1);
        assert!(discrete_divergence(&t, 0.1, 0.1).abs() < 1e-13);
    }

    #[test]
    fn quadratic_b1_matches_quadrature() {
        // B1 = x² on [0,1]²: right edge average 1, left edge average 0.
        let t = sample(|x, _| (x * x, 0.0), 0.5, 0.5, 1.0, 1.0);
        assert!((discrete_divergence(&t, 1.0, 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn square_cell_coefficients() {
        let mut t = sample(|x, _| (x * x, 0.0), 0.5, 0.5, 1.0, 1.0);
        let before = t;
        let div = ddf_project(&mut t, 1.0, 1.0);
        // A1 = A2 = div/4 at aspect ratio one.
        assert!((before[R][B1] - t[R][B1] - div / 4.0).abs() < 1e-15);
        assert!((t[D][B2] - before[D][B2] - div / 4.0).abs() < 1e-15);
        // Tangential components untouched.
        assert_eq!(t[R][B2], before[R][B2]);
        assert_eq!(t[U][B1], before[U][B1]);
    }

    #[test]
    fn free_input_is_identity() {
        let mut t = sample(|x, y| (2.0 * x + y, 3.0 * x - 2.0 * y), 0.0, 0.0, 0.5, 0.25);
        let div0 = discrete_divergence(&t, 0.5, 0.25);
        assert!(div0.abs() < 1e-14);
        let mut exact = t;
        for s in exact.iter_mut() {
            s[B1] = 0.0;
            s[B2] = 0.0;
        }
        let mut z = exact;
        assert_eq!(ddf_project(&mut z, 0.5, 0.25), 0.0);
        assert_eq!(z, exact);
        let before = t;
        ddf_project(&mut t, 0.5, 0.25);
        for s in 0..8 {
            assert!((t[s][B1] - before[s][B1]).abs() < 1e-14);
            assert!((t[s][B2] - before[s][B2]).abs() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn projection_zeroes_divergence(
            b in prop::array::uniform8(prop::array::uniform3(-10.0f64..10.0)),
            ldx in -3.0f64..0.0, ldy in -3.0f64..0.0,
        ) {
            let (dx, dy) = (10f64.powf(ldx), 10f64.powf(ldy));
            let mut t = b.map(|bb| {
                let mut w = ReformState::ZERO;
                w[0] = 0.3;
                w[4] = bb[0];
                w[5] = bb[1];
                w[6] = bb[2];
                w
            });
            let orig = t;
            let scale = divergence_scale(&t, dx, dy);
            let div0 = ddf_project(&mut t, dx, dy);
            prop_assert!(discrete_divergence(&t, dx, dy).abs() <= 1e-13 * scale);

            // Idempotence up to the roundoff-level residual.
            let mut t2 = t;
            ddf_project(&mut t2, dx, dy);
            for s in 0..8 {
                prop_assert!((t2[s][B1] - t[s][B1]).abs() <= 1e-13 * scale * dx);
                prop_assert!((t2[s][B2] - t[s][B2]).abs() <= 1e-13 * scale * dy);
            }

            // Edge means shift by exactly ∓A and nothing else changes.
            let e0 = edge_normal_averages(&orig);
            let e1 = edge_normal_averages(&t);
            let a1 = dx * div0 / (2.0 * (1.0 + (dx / dy).powi(2)));
            let a2 = dy * div0 / (2.0 * (1.0 + (dy / dx).powi(2)));
            let tol = 1e-14 * (10.0 + a1.abs() + a2.abs());
            prop_assert!((e1[0] - e0[0] - a1).abs() <= tol);
            prop_assert!((e1[1] - e0[1] + a1).abs() <= tol);
            prop_assert!((e1[2] - e0[2] - a2).abs() <= tol);
            prop_assert!((e1[3] - e0[3] + a2).abs() <= tol);
            for s in 0..8 {
                prop_assert_eq!(t[s][6], orig[s][6]);
                prop_assert_eq!(t[s][0], orig[s][0]);
            }
        }
    }
}
