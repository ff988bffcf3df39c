//! Seeded property-oracle suites over the whole engine.
//!
//! The sample stream is ChaCha8 seeded from a `u64`, so a seed fully
//! determines every sample and every reported error within one build.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::angle::Angle;
use crate::bloch::{bloch_scene, density_from_statepoint, measurement_probs, mix, statepoint_from_density, BasisAxis, BlochPoint};
use crate::gates::{apply_gate, apply_sequence, parse_sequence, ALL_GATES};
use crate::mapping::{maximally_entangled, params_from_state, state_from_params, ParamsOrKnot};
use crate::scene::distance;
use crate::states::{entanglement_s, ket_from_angle, partial_trace, tensor_product, KnotDescriptor, Qubit, Surface, TwoQubit};
use crate::toroid::{knot_curve, statepoint_3d, ToroidConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub samples: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl SuiteReport {
    fn new(name: &'static str, samples: usize, max_error: f64, tolerance: f64) -> Self {
        SuiteReport {
            name,
            samples,
            max_error,
            tolerance,
            // a zero tolerance demands exact equality
            passed: max_error.is_finite() && (max_error < tolerance || max_error == tolerance && tolerance == 0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: usize,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }
}

pub fn random_state(rng: &mut impl Rng) -> TwoQubit {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 > 1e-6 && n2 <= 1.0 {
            return TwoQubit::normalized(v).expect("nonzero");
        }
    }
}

pub fn random_angle(rng: &mut impl Rng) -> Angle {
    Angle::new(rng.gen_range(-PI..PI))
}

fn random_point(rng: &mut impl Rng) -> BlochPoint {
    BlochPoint {
        r: rng.gen_range(0.0..=0.5),
        theta: random_angle(rng),
    }
}

fn suite_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs every suite. `samples` scales the larger suites; mixing uses a tenth
/// of it and knot collapse a hundredth (at least 100 each).
pub fn run_all(samples: usize, seed: u64) -> VerifyReport {
    let small = (samples / 10).max(100);
    let tiny = (samples / 100).max(100);
    let mut suites = vec![
        shared_radius(samples, &mut suite_rng(seed, 1)),
        right_triangle(samples, &mut suite_rng(seed, 2)),
        segment_identities(samples, &mut suite_rng(seed, 3)),
        probabilities_sum(samples, &mut suite_rng(seed, 4)),
        mixing_centroid(small, &mut suite_rng(seed, 5)),
        mixing_split_ratio(small, &mut suite_rng(seed, 6)),
        bijection(samples, &mut suite_rng(seed, 7)),
        gate_closure(samples, &mut suite_rng(seed, 9)),
        gate_involution(samples, &mut suite_rng(seed, 10)),
        knot_closure(tiny, &mut suite_rng(seed, 11)),
        separable_shell(samples, &mut suite_rng(seed, 12)),
    ];
    suites.extend(knot_collapse(tiny, &mut suite_rng(seed, 8)));
    suites.extend(spot_values());
    VerifyReport {
        seed,
        samples,
        suites,
    }
}

pub fn shared_radius(n: usize, rng: &mut impl Rng) -> SuiteReport {
    let err = (0..n)
        .map(|_| {
            let chi = random_state(rng);
            (partial_trace(&chi, Qubit::One).radius() - partial_trace(&chi, Qubit::Two).radius()).abs()
        })
        .fold(0.0, f64::max);
    SuiteReport::new("shared_radius", n, err, 1e-12)
}

pub fn right_triangle(n: usize, rng: &mut impl Rng) -> SuiteReport {
    let err = (0..n)
        .map(|_| {
            let chi = random_state(rng);
            let s = entanglement_s(&chi);
            let r = partial_trace(&chi, Qubit::One).radius();
            (s * s + r * r - 0.25).abs()
        })
        .fold(0.0, f64::max);
    SuiteReport::new("right_triangle", n, err, 1e-12)
}

pub fn segment_identities(n: usize, rng: &mut impl Rng) -> SuiteReport {
    let mut err: f64 = 0.0;
    for _ in 0..n {
        let theta = random_angle(rng);
        let basis = BasisAxis::new(random_angle(rng));
        let sc = bloch_scene(&density_from_statepoint(&BlochPoint { r: 0.5, theta }), &basis);
        let half = (theta - basis.axis_angle).half();
        let (a, b) = (half.cos(), half.sin());
        let len = |id| sc.length(id).unwrap_or(f64::NAN);
        for e in [
            len("BD") - a * a,
            len("AD") - b * b,
            len("SD") - (a * b).abs(),
        ] {
            err = err.max(if e.is_nan() { f64::INFINITY } else { e.abs() });
        }
    }
    SuiteReport::new("segment_identities", n, err, 1e-12)
}

/// Reports the largest |p0 + p1 − 1|, which must be exactly zero.
pub fn probabilities_sum(n: usize, rng: &mut impl Rng) -> SuiteReport {
    let mut err: f64 = 0.0;
    for _ in 0..n {
        let rho = density_from_statepoint(&random_point(rng));
        let (p0, p1) = measurement_probs(&rho, &BasisAxis::new(random_angle(rng)));
        let out_of_range = !(0.0..=1.0).contains(&p0) || !(0.0..=1.0).contains(&p1);
        err = err.max(if out_of_range { 1.0 } else { (p0 + p1 - 1.0).abs() });
    }
    SuiteReport::new("probabilities_sum", n, err, 0.0)
}

pub fn mixing_centroid(n: usize, rng: &mut impl Rng) -> SuiteReport {
    let mut err: f64 = 0.0;
    for i in 0..n {
        let k = 2 + i % 2;
        let pts: Vec<BlochPoint> = (0..k).map(|_| random_point(rng)).collect();
        let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.01..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let comps: Vec<_> = pts
            .iter()
            .zip(&weights)
            .map(|(p, w)| (density_from_statepoint(p), *w))
            .collect();
        let got = statepoint_from_density(&mix(&comps).expect("valid weights")).cartesian();
        let mut want = [0.0; 2];
        for (p, w) in pts.iter().zip(&weights) {
            let c = p.cartesian();
            want[0] += w * c[0];
            want[1] += w * c[1];
        }
        err = err.max(distance(&got, &want));
    }
    SuiteReport::new("mixing_centroid", n, err, 1e-12)
}

/// Relative error of |S₁S| / |SS₂| against p₂ / p₁. Pairs closer than 1e−3
/// are redrawn since the ratio is meaningless when S₁ ≈ S₂.
pub fn mixing_split_ratio(n: usize, rng: &mut impl Rng) -> SuiteReport {
    let mut err: f64 = 0.0;
    let mut used = 0;
    while used < n {
        let (p1, p2) = (random_point(rng), random_point(rng));
        let (c1, c2) = (p1.cartesian(), p2.cartesian());
        let gap = distance(&c1, &c2);
        if gap < 1e-3 {
            continue;
        }
        let w1 = rng.gen_range(0.01..0.99);
        let w2 = 1.0 - w1;
        let m = mix(&[(density_from_statepoint(&p1), w1), (density_from_statepoint(&p2), w2)]).expect("valid weights");
        let s = statepoint_from_density(&m).cartesian();
        let ratio = distance(&c1, &s) / distance(&s, &c2);
        err = err.max((ratio - w2 / w1).abs() / (w2 / w1).max(1.0));
        used += 1;
    }
    SuiteReport::new("mixing_split_ratio", n, err, 1e-9)
}

pub fn bijection(n: usize, rng: &mut impl Rng) -> SuiteReport {
    let mut err: f64 = 0.0;
    for _ in 0..n {
        let s = rng.gen_range(-0.499..=0.499);
        let (t1, t2) = (random_angle(rng), random_angle(rng));
        let chi = state_from_params(s, t1, t2).expect("s in range");
        match params_from_state(&chi) {
            ParamsOrKnot::Params(p) => {
                err = err.max((p.s - s).abs()).max(p.theta1.distance(t1)).max(p.theta2.distance(t2));
            }
            ParamsOrKnot::Knot(_) => err = f64::INFINITY,
        }
    }
    SuiteReport::new("bijection", n, err, 1e-9)
}

/// For each random ξ, many `(θ₁, θ₂)` on the knot must give one vector
/// (first report) and recover ξ (second report).
pub fn knot_collapse(n: usize, rng: &mut impl Rng) -> [SuiteReport; 2] {
    let mut vec_err: f64 = 0.0;
    let mut xi_err: f64 = 0.0;
    for surface in [Surface::Outer, Surface::Inner] {
        let xi = random_angle(rng);
        let reference = maximally_entangled(surface, xi);
        for _ in 0..n {
            let t1 = random_angle(rng);
            let t2 = match surface {
                Surface::Outer => t1 - xi,
                Surface::Inner => xi - t1,
            };
            let chi = state_from_params(0.5 * surface.sign(), t1, t2).expect("s in range");
            vec_err = vec_err.max(chi.max_diff(&reference));
            match params_from_state(&chi) {
                ParamsOrKnot::Knot(k) if k.surface == surface => xi_err = xi_err.max(k.xi.distance(xi)),
                _ => xi_err = f64::INFINITY,
            }
        }
    }
    [
        SuiteReport::new("knot_collapse", 2 * n, vec_err, 1e-12),
        SuiteReport::new("knot_xi_recovery", 2 * n, xi_err, 1e-9),
    ]
}

pub fn gate_closure(n: usize, rng: &mut impl Rng) -> SuiteReport {
    let err = (0..n)
        .map(|_| {
            let chi = random_state(rng);
            let g = ALL_GATES[rng.gen_range(0..ALL_GATES.len())];
            (apply_gate(&chi, g).norm() - 1.0).abs()
        })
        .fold(0.0, f64::max);
    SuiteReport::new("gate_closure", n, err, 1e-12)
}

pub fn gate_involution(n: usize, rng: &mut impl Rng) -> SuiteReport {
    let err = (0..n)
        .map(|_| {
            let chi = random_state(rng);
            let g = ALL_GATES[rng.gen_range(0..ALL_GATES.len())];
            apply_gate(&apply_gate(&chi, g), g).max_diff(&chi)
        })
        .fold(0.0, f64::max);
    SuiteReport::new("gate_involution", n, err, 1e-12)
}

/// Knot polylines close, and unwrapped angles advance by exactly one turn.
pub fn knot_closure(n: usize, rng: &mut impl Rng) -> SuiteReport {
    let cfg = ToroidConfig::default();
    let mut err: f64 = 0.0;
    for i in 0..n {
        let surface = if i % 2 == 0 { Surface::Outer } else { Surface::Inner };
        let k = KnotDescriptor {
            surface,
            xi: random_angle(rng),
        };
        let curve = knot_curve(&k, &cfg, 64).expect("enough samples");
        err = err.max(distance(&curve[0], &curve[curve.len() - 1]));
        let (w1, w2) = winding(&curve, &cfg);
        let want2 = match surface {
            Surface::Outer => TAU,
            Surface::Inner => -TAU,
        };
        err = err.max((w1 - TAU).abs()).max((w2 - want2).abs());
    }
    SuiteReport::new("knot_closure", n, err, 1e-12)
}

/// Total unwrapped ring and tube angle swept along a closed polyline.
pub fn winding(curve: &[[f64; 3]], cfg: &ToroidConfig) -> (f64, f64) {
    let angles: Vec<(f64, f64)> = curve
        .iter()
        .map(|p| {
            let ring = p[1].atan2(p[0]);
            let radial = p[0].hypot(p[1]) - cfg.major_radius;
            (ring, p[2].atan2(radial))
        })
        .collect();
    let step = |a: f64, b: f64| Angle::new(b - a).radians();
    angles.windows(2).fold((0.0, 0.0), |(w1, w2), w| {
        (w1 + step(w[0].0, w[1].0), w2 + step(w[0].1, w[1].1))
    })
}

pub fn separable_shell(n: usize, rng: &mut impl Rng) -> SuiteReport {
    let cfg = ToroidConfig::default();
    let err = (0..n)
        .map(|_| {
            let chi = tensor_product(&ket_from_angle(random_angle(rng)), &ket_from_angle(random_angle(rng)));
            match statepoint_3d(&params_from_state(&chi), &cfg) {
                Ok(p) => cfg.distance_to_surface(p, cfg.separable_tube_radius),
                Err(_) => f64::INFINITY,
            }
        })
        .fold(0.0, f64::max);
    SuiteReport::new("separable_shell", n, err, 1e-12)
}

/// χ±(0) to 1e−15, Bell preparation to 1e−12, default-config statepoint of
/// |00⟩ to 1e−12.
pub fn spot_values() -> [SuiteReport; 3] {
    let h = FRAC_1_SQRT_2;
    let plus = maximally_entangled(Surface::Outer, Angle::ZERO).to_array();
    let minus = maximally_entangled(Surface::Inner, Angle::ZERO).to_array();
    let chi_err = plus
        .iter()
        .zip([h, 0.0, 0.0, h])
        .chain(minus.iter().zip([h, 0.0, 0.0, -h]))
        .map(|(got, want)| (got - want).abs())
        .fold(0.0, f64::max);
    let bell = apply_sequence(&TwoQubit::ZERO_ZERO, &parse_sequence("H1,CNOT12").expect("valid tokens"));
    let bell_err = (entanglement_s(&bell) - 0.5).abs();
    let p = statepoint_3d(&params_from_state(&TwoQubit::ZERO_ZERO), &ToroidConfig::default()).expect("regular");
    [
        SuiteReport::new("spot_chi_pm", 1, chi_err, 1e-15),
        SuiteReport::new("spot_bell_s", 1, bell_err, 1e-12),
        SuiteReport::new("spot_toroid_origin", 1, distance(&p, &[4.25, 0.0, 0.0]), 1e-12),
    ]
}

/// The winding of a knot's own curve on the default toroid.
pub fn knot_winding(surface: Surface, xi: Angle, samples: usize) -> (f64, f64) {
    let cfg = ToroidConfig::default();
    let curve = knot_curve(&KnotDescriptor { surface, xi }, &cfg, samples).expect("enough samples");
    winding(&curve, &cfg)
}
