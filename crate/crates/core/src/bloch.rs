//! Bloch Circle geometry: statepoints, measurement bases, the segment
//! readouts of the circle diagram, and mixing by the centroid rule.
//!
//! Lab coordinates put the center `C` at the origin and the standard `|0⟩`
//! pole at `(0, ½)`. A statepoint at radius `r` and angle `θ` sits at
//! `(r·sin θ, r·cos θ)`, so positive angles lie on the right-hand side where
//! the off-diagonal element is positive.

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::error::{GeoError, Result};
use crate::scene::{distance, Position, Scene};
use crate::states::DensityMatrix;

pub const CIRCLE_RADIUS: f64 = 0.5;

/// Tolerance for the mixing weights summing to one.
pub const WEIGHT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochPoint {
    pub r: f64,
    pub theta: Angle,
}

impl BlochPoint {
    pub fn new(r: f64, theta: Angle) -> Result<Self> {
        if !(0.0..=CIRCLE_RADIUS + 1e-12).contains(&r) {
            return Err(GeoError::Domain {
                what: "statepoint radius must lie in [0, 1/2]",
                value: r,
            });
        }
        Ok(BlochPoint {
            r: r.min(CIRCLE_RADIUS),
            theta,
        })
    }

    pub fn is_pure(&self) -> bool {
        (self.r - CIRCLE_RADIUS).abs() < 1e-9
    }

    pub fn cartesian(&self) -> [f64; 2] {
        let (sin, cos) = self.theta.radians().sin_cos();
        [self.r * sin, self.r * cos]
    }

    pub fn from_cartesian(p: [f64; 2]) -> Self {
        let r = p[0].hypot(p[1]).min(CIRCLE_RADIUS);
        let theta = if r == 0.0 {
            Angle::ZERO
        } else {
            Angle::new(p[0].atan2(p[1]))
        };
        BlochPoint { r, theta }
    }
}

/// Orientation of a measurement diameter; 0 is the standard |0⟩/|1⟩ axis.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BasisAxis {
    pub axis_angle: Angle,
}

impl BasisAxis {
    pub const STANDARD: BasisAxis = BasisAxis {
        axis_angle: Angle::ZERO,
    };

    pub fn new(axis_angle: Angle) -> Self {
        BasisAxis { axis_angle }
    }
}

/// Rotated diagonal state `R(θ)·diag(p₀, p₁)·R(θ)ᵀ` with `p₀,₁ = ½ ± r`.
pub fn density_from_statepoint(p: &BlochPoint) -> DensityMatrix {
    let p0 = 0.5 + p.r;
    let p1 = 0.5 - p.r;
    let (sin, cos) = p.theta.half().sin_cos();
    DensityMatrix::clamped(
        p0 * cos * cos + p1 * sin * sin,
        (p0 - p1) * sin * cos,
        p1 * cos * cos + p0 * sin * sin,
    )
}

/// Inverse of [`density_from_statepoint`]. The center maps to `θ = 0`.
pub fn statepoint_from_density(rho: &DensityMatrix) -> BlochPoint {
    BlochPoint::from_cartesian(statepoint_cartesian(rho))
}

/// Lab coordinates of the statepoint, `(c, p_top − ½)`; linear in `ρ`.
pub fn statepoint_cartesian(rho: &DensityMatrix) -> [f64; 2] {
    [rho.c(), 0.5 * (rho.p_top() - rho.p_bot())]
}

// 2×2 real matrices as row-major arrays.
type Mat2 = [[f64; 2]; 2];

fn rotation(theta: f64) -> Mat2 {
    let (sin, cos) = (0.5 * theta).sin_cos();
    [[cos, -sin], [sin, cos]]
}

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn transpose(a: &Mat2) -> Mat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

/// Expresses `rho` in the basis whose |0⟩ pole sits at `basis.axis_angle`:
/// `R(−φ)·ρ·R(−φ)ᵀ`. The statepoint angle shifts by `−φ`; `r` is unchanged.
pub fn rebase_density(rho: &DensityMatrix, basis: &BasisAxis) -> DensityMatrix {
    let rot = rotation(-basis.axis_angle.radians());
    let m = [[rho.p_top(), rho.c()], [rho.c(), rho.p_bot()]];
    let out = mul(&mul(&rot, &m), &transpose(&rot));
    DensityMatrix::clamped(out[0][0], 0.5 * (out[0][1] + out[1][0]), out[1][1])
}

/// Outcome probabilities `(p0, p1)` for a projective measurement along
/// `basis`. Clamped so they lie in [0, 1] and sum to 1.
pub fn measurement_probs(rho: &DensityMatrix, basis: &BasisAxis) -> (f64, f64) {
    let rebased = rebase_density(rho, basis);
    let p0 = rebased.p_top().clamp(0.0, 1.0);
    (p0, 1.0 - p0)
}

/// `Σ pᵢ ρᵢ`. Weights must be nonnegative and sum to one.
pub fn mix(components: &[(DensityMatrix, f64)]) -> Result<DensityMatrix> {
    if components.is_empty() {
        return Err(GeoError::BadWeights("empty mixture".into()));
    }
    if let Some((_, w)) = components.iter().find(|(_, w)| !w.is_finite() || *w < 0.0) {
        return Err(GeoError::BadWeights(format!("negative or non-finite weight {w}")));
    }
    let total: f64 = components.iter().map(|(_, w)| w).sum();
    if (total - 1.0).abs() > WEIGHT_TOLERANCE {
        return Err(GeoError::BadWeights(format!("weights sum to {total}")));
    }
    let (mut top, mut c, mut bot) = (0.0, 0.0, 0.0);
    for (rho, w) in components {
        top += w * rho.p_top();
        c += w * rho.c();
        bot += w * rho.p_bot();
    }
    Ok(DensityMatrix::clamped(top, c, bot))
}

/// Mixedness segment length `|s| = √(¼ − r²)`.
pub fn mixedness(r: f64) -> f64 {
    ((0.5 - r) * (0.5 + r)).max(0.0).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledSegment {
    pub id: String,
    pub label: String,
    pub from: [f64; 2],
    pub to: [f64; 2],
    pub length: f64,
}

/// The labeled construction of the circle diagram for one state and basis.
///
/// `A`/`B` are the |0⟩/|1⟩ ends of the basis diameter, `C` the center, `S`
/// the statepoint, `D` the foot of the perpendicular from `S` onto `AB`, and
/// `P` the perimeter end of the mixedness segment drawn from `S`
/// perpendicular to `CS`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlochScene {
    pub circle_radius: f64,
    pub basis: BasisAxis,
    /// Statepoint in lab coordinates.
    pub statepoint: BlochPoint,
    /// Density matrix expressed in `basis`.
    pub rebased: DensityMatrix,
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub c: [f64; 2],
    pub d: [f64; 2],
    pub s: [f64; 2],
    pub p: [f64; 2],
    pub segments: Vec<LabeledSegment>,
    /// Sign of the |1⟩ amplitude in `basis` (pure states) or 0.
    pub b_sign: i8,
    /// Sign of the off-diagonal element in `basis`.
    pub c_sign: i8,
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

fn unit(angle: f64) -> [f64; 2] {
    let (sin, cos) = angle.sin_cos();
    [sin, cos]
}

fn scale(v: [f64; 2], k: f64) -> [f64; 2] {
    [v[0] * k, v[1] * k]
}

impl BlochScene {
    pub fn segment(&self, id: &str) -> Option<&LabeledSegment> {
        self.segments.iter().find(|s| s.id == id)
    }

    /// Length of the named segment, or `None` if the scene omits it.
    pub fn length(&self, id: &str) -> Option<f64> {
        self.segment(id).map(|s| s.length)
    }

    /// Shared-schema scene with 2-D points. `prefix` namespaces the ids so
    /// several circles can share one id space.
    pub fn to_scene(&self, prefix: &str) -> Scene {
        let mut scene = Scene::new();
        let id = |name: &str| format!("{prefix}{name}");
        scene.point(&id("circle"), "Bloch Circle", Position::Xy(self.c), Some("circle"));
        for (name, pos, style) in [
            ("A", self.a, "basis"),
            ("B", self.b, "basis"),
            ("C", self.c, "center"),
            ("D", self.d, "foot"),
            ("S", self.s, "statepoint"),
            ("P", self.p, "perimeter"),
        ] {
            scene.point(&id(name), name, Position::Xy(pos), Some(style));
        }
        for seg in &self.segments {
            scene.segment_with_length(&id(&seg.id), &seg.label, &seg.from, &seg.to, seg.length);
        }
        let rb = &self.rebased;
        scene.annotate(
            &id("readout"),
            format!(
                "r = {:.6}, theta = {:.6}, rho = [[{:.6}, {:.6}], [{:.6}, {:.6}]]",
                self.statepoint.r,
                self.statepoint.theta.radians(),
                rb.p_top(),
                rb.c(),
                rb.c(),
                rb.p_bot()
            ),
            &self.s,
        );
        scene.annotate(
            &id("signs"),
            format!("sign(b) = {}, sign(c) = {}", self.b_sign, self.c_sign),
            &self.d,
        );
        scene
    }
}

/// Builds the labeled circle construction for `rho` measured along `basis`.
pub fn bloch_scene(rho: &DensityMatrix, basis: &BasisAxis) -> BlochScene {
    let point = statepoint_from_density(rho);
    let rebased = rebase_density(rho, basis);
    let (p0, p1) = measurement_probs(rho, basis);

    let phi = basis.axis_angle.radians();
    let theta = point.theta.radians();
    let rel = (point.theta - basis.axis_angle).radians();
    let axis = unit(phi);

    let a = scale(axis, CIRCLE_RADIUS);
    let b = scale(axis, -CIRCLE_RADIUS);
    let c = [0.0, 0.0];
    let s = scale(unit(theta), point.r);
    let d = scale(axis, point.r * rel.cos());
    let perp = [theta.cos(), -theta.sin()];
    let s_len = mixedness(point.r);
    let p = [s[0] + s_len * perp[0], s[1] + s_len * perp[1]];

    let seg = |id: &str, label: &str, from: [f64; 2], to: [f64; 2], length: f64| LabeledSegment {
        id: id.into(),
        label: label.into(),
        from,
        to,
        length,
    };
    let mut segments = Vec::new();
    if point.is_pure() {
        segments.push(seg("AS", "b", a, s, distance(&a, &s)));
        segments.push(seg("BS", "a", b, s, distance(&b, &s)));
    }
    segments.push(seg("BD", "a²", b, d, p0));
    segments.push(seg("AD", "b²", a, d, p1));
    segments.push(seg("SD", "c", s, d, rebased.c().abs()));
    segments.push(seg("CS", "r", c, s, point.r));
    segments.push(seg("SP", "|s|", s, p, s_len));

    let b_sign = if point.is_pure() { sign((0.5 * rel).sin()) } else { 0 };
    BlochScene {
        circle_radius: CIRCLE_RADIUS,
        basis: *basis,
        statepoint: point,
        rebased,
        a,
        b,
        c,
        d,
        s,
        p,
        segments,
        b_sign,
        c_sign: sign(rebased.c()),
    }
}
