//! Embedding of two-qubit states into the annular toroid.
//!
//! A state with parameters `(s, θ₁, θ₂)` sits at tube radius
//! `ρ = ρ_sep + s` around the tube center circle, at tube angle `θ₂` and
//! ring angle `θ₁`. The separable states fill the `s = 0` shell; the outer
//! and inner bounding surfaces (`s = ±½`) carry the torus knots.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::mapping::{params_from_state, ParamsOrKnot};
use crate::scene::{Position, Primitive, Scene, TorusParams};
use crate::states::{GeometricParams, KnotDescriptor, Surface, TwoQubit};

pub const DEFAULT_KNOT_SAMPLES: usize = 256;
pub const MIN_KNOT_SAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToroidConfig {
    pub major_radius: f64,
    pub separable_tube_radius: f64,
}

impl Default for ToroidConfig {
    fn default() -> Self {
        ToroidConfig {
            major_radius: 3.0,
            separable_tube_radius: 1.25,
        }
    }
}

impl ToroidConfig {
    pub fn new(major_radius: f64, separable_tube_radius: f64) -> Result<Self> {
        let cfg = ToroidConfig {
            major_radius,
            separable_tube_radius,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.major_radius.is_finite() && self.separable_tube_radius.is_finite()) {
            return Err(GeoError::BadConfig("radii must be finite".into()));
        }
        if self.separable_tube_radius <= 0.5 {
            return Err(GeoError::BadConfig(format!(
                "separable_tube_radius {} must exceed 1/2",
                self.separable_tube_radius
            )));
        }
        if self.major_radius <= self.separable_tube_radius + 0.5 {
            return Err(GeoError::BadConfig(format!(
                "major_radius {} must exceed separable_tube_radius + 1/2 = {}",
                self.major_radius,
                self.separable_tube_radius + 0.5
            )));
        }
        Ok(())
    }

    pub fn tube_radius(&self, s: f64) -> f64 {
        self.separable_tube_radius + s
    }

    /// Point at tube radius `rho` and angles `(θ₁, θ₂)`.
    pub fn embed(&self, rho: f64, theta1: f64, theta2: f64) -> [f64; 3] {
        let (s1, c1) = theta1.sin_cos();
        let (s2, c2) = theta2.sin_cos();
        let ring = self.major_radius + rho * c2;
        [ring * c1, ring * s1, rho * s2]
    }

    /// Center of the tube cross-section at ring angle `θ₁`.
    pub fn tube_center(&self, theta1: f64) -> [f64; 3] {
        let (s1, c1) = theta1.sin_cos();
        [self.major_radius * c1, self.major_radius * s1, 0.0]
    }

    /// Distance from `p` to the torus of tube radius `rho`.
    pub fn distance_to_surface(&self, p: [f64; 3], rho: f64) -> f64 {
        let ring = p[0].hypot(p[1]) - self.major_radius;
        (ring.hypot(p[2]) - rho).abs()
    }
}

fn params_point(p: &GeometricParams, cfg: &ToroidConfig) -> [f64; 3] {
    cfg.embed(cfg.tube_radius(p.s), p.theta1.radians(), p.theta2.radians())
}

/// 3-D statepoint of a regular (non-knot) state.
pub fn statepoint_3d(p: &ParamsOrKnot, cfg: &ToroidConfig) -> Result<[f64; 3]> {
    match p {
        ParamsOrKnot::Params(g) => Ok(params_point(g, cfg)),
        ParamsOrKnot::Knot(_) => Err(GeoError::KnotInput),
    }
}

/// Angles `(θ₁, θ₂)` of the knot at curve parameter `t`.
pub fn knot_angles(k: &KnotDescriptor, t: f64) -> (f64, f64) {
    let xi = k.xi.radians();
    match k.surface {
        Surface::Outer => (t, t - xi),
        Surface::Inner => (t, xi - t),
    }
}

/// Closed polyline of the knot; the last sample repeats the first. `samples`
/// counts distinct points.
pub fn knot_curve(k: &KnotDescriptor, cfg: &ToroidConfig, samples: usize) -> Result<Vec<[f64; 3]>> {
    if samples < MIN_KNOT_SAMPLES {
        return Err(GeoError::Domain {
            what: "knot curve needs at least 16 samples",
            value: samples as f64,
        });
    }
    let rho = cfg.tube_radius(0.5 * k.surface.sign());
    let mut curve: Vec<[f64; 3]> = (0..samples)
        .map(|i| {
            let (t1, t2) = knot_angles(k, TAU * i as f64 / samples as f64);
            cfg.embed(rho, t1, t2)
        })
        .collect();
    curve.push(curve[0]);
    Ok(curve)
}

const BASIS_MARKERS: [(&str, f64, f64); 4] = [
    ("|00>", 0.0, 0.0),
    ("|01>", 0.0, PI),
    ("|10>", PI, 0.0),
    ("|11>", PI, PI),
];

/// Scene for `chi`: the three torus surfaces, the four basis markers, the
/// statepoint (or knot polyline), the radial segment to the nearer bounding
/// surface, and numeric annotations.
pub fn toroid_scene(chi: &TwoQubit, cfg: &ToroidConfig) -> Scene {
    toroid_scene_with_samples(chi, cfg, DEFAULT_KNOT_SAMPLES)
}

pub fn toroid_scene_with_samples(chi: &TwoQubit, cfg: &ToroidConfig, samples: usize) -> Scene {
    let mut scene = Scene::new();
    for (id, label, s, style) in [
        ("surface.outer", "outer surface (s = +1/2)", 0.5, "translucent"),
        ("surface.separable", "separable shell (s = 0)", 0.0, "highlight"),
        ("surface.inner", "inner surface (s = -1/2)", -0.5, "translucent"),
    ] {
        scene.push(Primitive::Torus {
            id: id.into(),
            label: label.into(),
            params: TorusParams {
                major_radius: cfg.major_radius,
                tube_radius: cfg.tube_radius(s),
                s,
            },
            style: Some(style.into()),
        });
    }
    for (label, t1, t2) in BASIS_MARKERS {
        let id = format!("marker.{}", &label[1..3]);
        let p = cfg.embed(cfg.separable_tube_radius, t1, t2);
        scene.point(&id, label, Position::Xyz(p), Some("basis"));
    }

    match params_from_state(chi) {
        ParamsOrKnot::Params(p) => {
            let point = params_point(&p, cfg);
            scene.point("statepoint", "state", Position::Xyz(point), Some("statepoint"));
            // Radial segment to the nearer bounding surface; s = 0 goes outward.
            let toward = if p.s < 0.0 { -0.5 } else { 0.5 };
            let surface = cfg.embed(
                cfg.tube_radius(toward),
                p.theta1.radians(),
                p.theta2.radians(),
            );
            scene.segment("radial", "1/2 - |s|", &point, &surface);
            scene.annotate(
                "readout",
                format!(
                    "s = {:.6}, r = {:.6}, theta1 = {:.6}, theta2 = {:.6}",
                    p.s,
                    p.r,
                    p.theta1.radians(),
                    p.theta2.radians()
                ),
                &point,
            );
        }
        ParamsOrKnot::Knot(k) => {
            let curve = knot_curve(&k, cfg, samples.max(MIN_KNOT_SAMPLES)).expect("sample count checked");
            let anchor = curve[0];
            scene.push(Primitive::Polyline {
                id: "knot".into(),
                label: format!("knot {}", k.surface.symbol()),
                samples: curve.into_iter().map(|p| p.to_vec()).collect(),
                closed: true,
                style: Some("knot".into()),
            });
            scene.annotate(
                "readout",
                format!(
                    "s = {:.6}, r = 0, surface = {}, xi = {:.6}",
                    0.5 * k.surface.sign(),
                    k.surface.symbol(),
                    k.xi.radians()
                ),
                &anchor,
            );
        }
    }
    scene
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use crate::mapping::{maximally_entangled, state_from_params};
    use crate::scene::distance;
    use proptest::prelude::*;

    fn regular(s: f64, t1: f64, t2: f64) -> ParamsOrKnot {
        ParamsOrKnot::Params(GeometricParams::new(s, Angle::new(t1), Angle::new(t2)).unwrap())
    }

    #[test]
    fn config_validation() {
        assert!(ToroidConfig::default().validate().is_ok());
        assert!(ToroidConfig::new(3.0, 0.5).is_err());
        assert!(ToroidConfig::new(1.7, 1.25).is_err());
        assert!(ToroidConfig::new(1.76, 1.25).is_ok());
    }

    #[test]
    fn statepoint_spot_values() {
        let cfg = ToroidConfig::default();
        assert_eq!(statepoint_3d(&regular(0.0, 0.0, 0.0), &cfg).unwrap(), [4.25, 0.0, 0.0]);
        assert_eq!(statepoint_3d(&regular(0.5, 0.0, 0.0), &cfg).unwrap(), [4.75, 0.0, 0.0]);
        assert_eq!(statepoint_3d(&regular(-0.5, 0.0, 0.0), &cfg).unwrap(), [3.75, 0.0, 0.0]);
        let knot = ParamsOrKnot::Knot(KnotDescriptor {
            surface: Surface::Outer,
            xi: Angle::ZERO,
        });
        assert_eq!(statepoint_3d(&knot, &cfg), Err(GeoError::KnotInput));
    }

    #[test]
    fn knot_curve_definitions() {
        let cfg = ToroidConfig::default();
        for surface in [Surface::Outer, Surface::Inner] {
            let k = KnotDescriptor {
                surface,
                xi: Angle::ZERO,
            };
            let curve = knot_curve(&k, &cfg, 64).unwrap();
            assert_eq!(curve.len(), 65);
            assert_eq!(curve[0], curve[64]);
            for (i, p) in curve.iter().take(64).enumerate() {
                let t = TAU * i as f64 / 64.0;
                let t2 = if surface == Surface::Outer { t } else { -t };
                let expected = statepoint_3d(&regular(0.5 * surface.sign(), t, t2), &cfg).unwrap();
                assert!(distance(p, &expected) < 1e-12);
            }
        }
        let k = KnotDescriptor {
            surface: Surface::Outer,
            xi: Angle::ZERO,
        };
        assert!(knot_curve(&k, &cfg, 8).is_err());
    }

    #[test]
    fn scene_for_basis_state() {
        let cfg = ToroidConfig::default();
        let scene = toroid_scene(&TwoQubit::ZERO_ZERO, &cfg);
        let marker = match scene.get("marker.00") {
            Some(Primitive::Point { position, .. }) => position.coords().to_vec(),
            _ => panic!("missing marker"),
        };
        let point = match scene.get("statepoint") {
            Some(Primitive::Point { position, .. }) => position.coords().to_vec(),
            _ => panic!("missing statepoint"),
        };
        assert!(distance(&marker, &point) < 1e-12);
        assert!(scene.get("knot").is_none());
        assert!(scene.inconsistencies(1e-9).is_empty());
    }

    #[test]
    fn scene_for_bell_state() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = TwoQubit::new(h, 0.0, 0.0, h).unwrap();
        let scene = toroid_scene(&bell, &ToroidConfig::default());
        assert!(scene.get("statepoint").is_none());
        match scene.get("knot") {
            Some(Primitive::Polyline { samples, closed, .. }) => {
                assert!(*closed);
                assert_eq!(samples.len(), DEFAULT_KNOT_SAMPLES + 1);
            }
            other => panic!("expected knot polyline, got {other:?}"),
        }
    }

    #[test]
    fn radial_segment_length() {
        let cfg = ToroidConfig::default();
        for (s, want) in [(0.3, 0.2), (-0.3, 0.2), (0.0, 0.5), (0.45, 0.05)] {
            let chi = state_from_params(s, Angle::new(0.7), Angle::new(-2.0)).unwrap();
            let scene = toroid_scene(&chi, &cfg);
            match scene.get("radial") {
                Some(Primitive::Segment { length, .. }) => assert!((length - want).abs() < 1e-9),
                _ => panic!("missing radial segment"),
            }
        }
    }

    proptest! {
        #[test]
        fn separable_points_on_shell(t1 in -PI..PI, t2 in -PI..PI) {
            let cfg = ToroidConfig::default();
            let p = statepoint_3d(&regular(0.0, t1, t2), &cfg).unwrap();
            prop_assert!(cfg.distance_to_surface(p, cfg.separable_tube_radius) < 1e-12);
        }

        #[test]
        fn knot_points_map_back(xi in -PI..PI, outer in any::<bool>()) {
            let surface = if outer { Surface::Outer } else { Surface::Inner };
            let k = KnotDescriptor { surface, xi: Angle::new(xi) };
            for i in 0..32 {
                let (t1, t2) = knot_angles(&k, TAU * i as f64 / 32.0);
                let chi = state_from_params(0.5 * surface.sign(), Angle::new(t1), Angle::new(t2)).unwrap();
                prop_assert!(chi.max_diff(&maximally_entangled(surface, k.xi)) < 1e-12);
                let back = *params_from_state(&chi).knot().unwrap();
                prop_assert_eq!(back.surface, surface);
                prop_assert!(back.xi.distance(k.xi) < 1e-9);
            }
        }

        #[test]
        fn embedding_separates_grid_neighbors(s in -0.49f64..0.49, t1 in -PI..PI, t2 in -PI..PI,
                                              ds in -0.01f64..0.01, d1 in -0.01f64..0.01, d2 in -0.01f64..0.01) {
            prop_assume!(ds.abs() + d1.abs() + d2.abs() > 1e-6);
            prop_assume!((s + ds).abs() <= 0.49);
            let cfg = ToroidConfig::default();
            let p = statepoint_3d(&regular(s, t1, t2), &cfg).unwrap();
            let q = statepoint_3d(&regular(s + ds, t1 + d1, t2 + d2), &cfg).unwrap();
            prop_assert!(distance(&p, &q) > 1e-9);
        }
    }
}
