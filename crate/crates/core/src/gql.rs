//! Linear inequalities behind the positivity proof of the average update.
//!
//! The admissible set equals the set of states with `U·n1 > 0` and
//! `U·n* + |B*|²/2 > 0` for every probe `(v*, B*)`. The three estimates
//! here bound the flux and source contributions along those directions.
//! Each check returns its margin (left side minus right side) together
//! with a magnitude scale so callers can judge violations relative to
//! roundoff.

use crate::flux::{physical_flux_unchecked, powell_vector};
use crate::state::{pp_wave_estimate_pre, ConservedState, Direction, GasParams, WaveData};

/// Free parameters `(v*, B*)` of the linearization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GqlProbe {
    pub v_star: [f64; 3],
    pub b_star: [f64; 3],
}

impl GqlProbe {
    /// `n1 = (1, 0, …, 0)`.
    pub const N1: ConservedState = ConservedState([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);

    /// `n* = (|v*|²/2, −v*, −B*, 1)`.
    pub fn n_star(&self) -> ConservedState {
        let v = self.v_star;
        let b = self.b_star;
        ConservedState([0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]), -v[0], -v[1], -v[2], -b[0], -b[1], -b[2], 1.0])
    }

    pub fn b_star_sq(&self) -> f64 {
        self.b_star.iter().map(|x| x * x).sum()
    }

    pub fn v_dot_b(&self) -> f64 {
        (0..3).map(|k| self.v_star[k] * self.b_star[k]).sum()
    }
}

/// Signed margin of an inequality and the magnitude of its terms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Margin {
    pub value: f64,
    pub scale: f64,
}

impl Margin {
    /// True when `value ≥ −rel · scale`.
    pub fn holds(&self, rel: f64) -> bool {
        self.value >= -rel * self.scale
    }
}

/// `Σ |a_k b_k|`, the roundoff scale of `a·b`.
fn abs_dot(a: &ConservedState, b: &ConservedState) -> f64 {
    (0..8).map(|k| (a[k] * b[k]).abs()).sum()
}

/// `αℓ(U, Ũ)` for admissible states.
pub fn alpha(u: &ConservedState, ut: &ConservedState, dir: Direction, g: &GasParams) -> f64 {
    pp_wave_estimate_pre(&WaveData::new(u, dir, g), &WaveData::new(ut, dir, g))
}

/// `−(Fℓ(U) − Fℓ(Ũ))·n1 + αℓ(U, Ũ)(U + Ũ)·n1`, strictly positive for
/// admissible pairs.
pub fn eq1_margin(u: &ConservedState, ut: &ConservedState, dir: Direction, g: &GasParams) -> Margin {
    let a = alpha(u, ut, dir, g);
    let (f, ft) = (physical_flux_unchecked(u, dir, g), physical_flux_unchecked(ut, dir, g));
    let lhs = -(f[0] - ft[0]);
    let rhs = -a * (u[0] + ut[0]);
    Margin { value: lhs - rhs, scale: f[0].abs() + ft[0].abs() + a * (u[0] + ut[0]) }
}

/// Margin of the flux inequality along `n*`:
/// `−(F(U) − F(Ũ))·n* + α((U + Ũ)·n* + |B*|²) + (Bℓ − B̃ℓ)(v*·B*)`.
pub fn wu1_margin(u: &ConservedState, ut: &ConservedState, probe: &GqlProbe, dir: Direction, g: &GasParams) -> Margin {
    let a = alpha(u, ut, dir, g);
    let n = probe.n_star();
    let (f, ft) = (physical_flux_unchecked(u, dir, g), physical_flux_unchecked(ut, dir, g));
    let bi = dir.b_index();
    let bs2 = probe.b_star_sq();
    let vb = probe.v_dot_b();
    let lhs = -((f - ft).dot(&n));
    let sum = (*u + *ut).dot(&n) + bs2;
    let value = lhs + a * sum + (u[bi] - ut[bi]) * vb;
    let scale = abs_dot(&f, &n) + abs_dot(&ft, &n) + a * (abs_dot(u, &n) + abs_dot(ut, &n) + bs2) + (u[bi].abs() + ut[bi].abs()) * vb.abs();
    Margin { value, scale }
}

/// Margin of the source inequality:
/// `−ξ S(U)·n* − ξ(v*·B*) + |ξ|/√ρ (U·n* + |B*|²/2)`.
pub fn wu2_margin(u: &ConservedState, xi: f64, probe: &GqlProbe) -> Margin {
    let n = probe.n_star();
    let s = powell_vector(u);
    let vb = probe.v_dot_b();
    let bs2 = probe.b_star_sq();
    let k = xi.abs() / u.rho().sqrt();
    let value = -xi * s.dot(&n) - xi * vb + k * (u.dot(&n) + 0.5 * bs2);
    let scale = xi.abs() * (abs_dot(&s, &n) + vb.abs()) + k * (abs_dot(u, &n) + 0.5 * bs2);
    Margin { value, scale }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{Primitive, QForm};
    use proptest::prelude::*;

    fn gas() -> GasParams {
        GasParams::new(5.0 / 3.0, 1.0, QForm::Softplus).unwrap()
    }

    fn prim() -> impl Strategy<Value = Primitive> {
        (-4.0f64..2.0, prop::array::uniform3(-5.0f64..5.0), prop::array::uniform3(-5.0f64..5.0), -6.0f64..2.0)
            .prop_map(|(lr, v, b, lp)| Primitive { rho: 10f64.powf(lr), v, b, p: 10f64.powf(lp) })
    }

    #[test]
    fn probe_vectors() {
        let p = GqlProbe { v_star: [1.0, 2.0, 2.0], b_star: [0.0, 3.0, 4.0] };
        assert_eq!(p.n_star(), ConservedState([4.5, -1.0, -2.0, -2.0, 0.0, -3.0, -4.0, 1.0]));
        assert_eq!(p.b_star_sq(), 25.0);
        assert_eq!(p.v_dot_b(), 14.0);
    }

    #[test]
    fn n_star_form_recovers_internal_energy() {
        // With v* = v and B* = B the linear form equals ρe.
        let g = gas();
        let pr = Primitive { rho: 1.3, v: [0.4, -0.2, 0.9], b: [1.1, 0.5, -0.3], p: 0.6 };
        let u = pr.to_conserved(g.gamma);
        let probe = GqlProbe { v_star: pr.v, b_star: pr.b };
        let val = u.dot(&probe.n_star()) + 0.5 * probe.b_star_sq();
        assert!((val - 0.6 / (g.gamma - 1.0)).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn inequalities_hold(
            a in prim(), b in prim(),
            vs in prop::array::uniform3(-10.0f64..10.0),
            bs in prop::array::uniform3(-10.0f64..10.0),
            xi in -10.0f64..10.0,
        ) {
            let g = gas();
            let (u, ut) = (a.to_conserved(g.gamma), b.to_conserved(g.gamma));
            let probe = GqlProbe { v_star: vs, b_star: bs };
            for dir in [Direction::X, Direction::Y] {
                let m = eq1_margin(&u, &ut, dir, &g);
                prop_assert!(m.value > 0.0, "eq1 {:?}", m);
                let m = wu1_margin(&u, &ut, &probe, dir, &g);
                prop_assert!(m.holds(1e-12), "wu1 {:?}", m);
            }
            let m = wu2_margin(&u, xi, &probe);
            prop_assert!(m.holds(1e-12), "wu2 {:?}", m);
        }
    }
}
