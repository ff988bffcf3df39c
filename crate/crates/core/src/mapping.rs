//! The `(s, θ₁, θ₂)` ⇄ state map of the annular toroid and the torus-knot
//! identities of maximally entangled states.
//!
//! Every state with `r > 0` has a unique parameter triple. Maximally entangled
//! states (`|s| = ½`) collapse a whole `(θ₁, θ₂)` family onto one vector and
//! are described by a [`KnotDescriptor`] instead.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::error::Result;
use crate::states::{
    entanglement_s, radius_from_s, reduced_state, GeometricParams, KnotDescriptor, Qubit, Surface,
    TwoQubit,
};

/// Below this shared radius the angles cannot be recovered and the state is
/// reported as a knot.
pub const KNOT_THRESHOLD: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ParamsOrKnot {
    Params(GeometricParams),
    Knot(KnotDescriptor),
}

impl ParamsOrKnot {
    pub fn params(&self) -> Option<&GeometricParams> {
        match self {
            ParamsOrKnot::Params(p) => Some(p),
            ParamsOrKnot::Knot(_) => None,
        }
    }

    pub fn knot(&self) -> Option<&KnotDescriptor> {
        match self {
            ParamsOrKnot::Knot(k) => Some(k),
            ParamsOrKnot::Params(_) => None,
        }
    }
}

/// `(√(½+r), 0, 0, sgn(s)·√(½−r))`: the state on the `θ₁ = θ₂ = 0` line
/// with entanglement `s`.
pub fn chi0_from_s(s: f64) -> Result<TwoQubit> {
    let r = radius_from_s(s)?;
    let alpha = (0.5 + r).sqrt();
    // sgn(s)·√(½−r) = s/√(½+r), without the cancellation in ½ − r near s = 0
    TwoQubit::normalized([alpha, 0.0, 0.0, s.clamp(-0.5, 0.5) / alpha])
}

/// `R(θ₁)⊗R(θ₂)·χ₀(s)`, phase-fixed.
pub fn state_from_params(s: f64, theta1: Angle, theta2: Angle) -> Result<TwoQubit> {
    let chi0 = chi0_from_s(s)?;
    let (a0, d0) = (chi0.alpha(), chi0.delta());
    let (s1, c1) = theta1.half().sin_cos();
    let (s2, c2) = theta2.half().sin_cos();
    TwoQubit::normalized([
        a0 * c1 * c2 + d0 * s1 * s2,
        a0 * c1 * s2 - d0 * s1 * c2,
        a0 * s1 * c2 - d0 * c1 * s2,
        a0 * s1 * s2 + d0 * c1 * c2,
    ])
}

/// Statepoint angle of a reduced density matrix, `atan2(c, p_top − ½)`.
/// A reduced state on the axis gives 0 or π.
fn reduced_angle(chi: &TwoQubit, qubit: Qubit) -> Angle {
    let rho = reduced_state(chi, qubit);
    Angle::new(rho.c().atan2(0.5 * (rho.p_top() - rho.p_bot())))
}

/// Inverse of [`state_from_params`] away from knots; a [`KnotDescriptor`]
/// when the shared radius is at most [`KNOT_THRESHOLD`].
pub fn params_from_state(chi: &TwoQubit) -> ParamsOrKnot {
    let s = entanglement_s(chi);
    let measured_r = reduced_state(chi, Qubit::One)
        .radius()
        .max(reduced_state(chi, Qubit::Two).radius());
    if measured_r <= KNOT_THRESHOLD {
        return ParamsOrKnot::Knot(knot_from_state(chi, Surface::from_sign(s)));
    }
    ParamsOrKnot::Params(GeometricParams {
        s,
        theta1: reduced_angle(chi, Qubit::One),
        theta2: reduced_angle(chi, Qubit::Two),
        r: radius_from_s(s).expect("s is clamped"),
    })
}

// Each estimate sums two entries that carry the same signal, so neither
// cos(ξ/2) ≈ 0 nor sin(ξ/2) ≈ 0 cancels it.
fn knot_from_state(chi: &TwoQubit, surface: Surface) -> KnotDescriptor {
    let [a, b, g, d] = chi.to_array();
    let half = match surface {
        Surface::Outer => (g - b).atan2(a + d),
        Surface::Inner => (b + g).atan2(a - d),
    };
    KnotDescriptor {
        surface,
        xi: Angle::new(2.0 * half),
    }
}

/// `χ₊(ξ) = (cos ξ/2, −sin ξ/2, sin ξ/2, cos ξ/2)/√2` or
/// `χ₋(ξ) = (cos ξ/2, sin ξ/2, sin ξ/2, −cos ξ/2)/√2`, phase-fixed.
pub fn maximally_entangled(surface: Surface, xi: Angle) -> TwoQubit {
    let (sin, cos) = xi.half().sin_cos();
    let (sin, cos) = (FRAC_1_SQRT_2 * sin, FRAC_1_SQRT_2 * cos);
    let v = match surface {
        Surface::Outer => [cos, -sin, sin, cos],
        Surface::Inner => [cos, sin, sin, -cos],
    };
    TwoQubit::normalized(v).expect("unit vector")
}

impl KnotDescriptor {
    pub fn state(&self) -> TwoQubit {
        maximally_entangled(self.surface, self.xi)
    }
}

/// The knot that `(θ₁, θ₂)` lands on at `s = ±½`: `ξ = θ₁ − θ₂` on the outer
/// surface, `ξ = θ₁ + θ₂` on the inner one.
pub fn knot_equivalent(theta1: Angle, theta2: Angle, surface: Surface) -> KnotDescriptor {
    let xi = match surface {
        Surface::Outer => theta1 - theta2,
        Surface::Inner => theta1 + theta2,
    };
    KnotDescriptor { surface, xi }
}
