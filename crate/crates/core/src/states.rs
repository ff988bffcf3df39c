//! State types for the real-amplitude subspace and the algebra that connects
//! them: tensor products, partial traces and the entanglement parameter `s`.
//!
//! Two-qubit amplitudes are ordered (|00⟩, |01⟩, |10⟩, |11⟩) with qubit 1 as
//! the left tensor factor, so `q1 ⊗ q2 = (a₁a₂, a₁b₂, b₁a₂, b₁b₂)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::error::{GeoError, Result};

/// Tolerance on the norm of caller-supplied vectors.
pub const NORM_TOLERANCE: f64 = 1e-9;
/// Entries below this magnitude count as zero for phase fixing.
pub const ZERO_EPS: f64 = 1e-12;

/// One of the two qubits of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Qubit {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl Qubit {
    pub fn other(self) -> Qubit {
        match self {
            Qubit::One => Qubit::Two,
            Qubit::Two => Qubit::One,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Qubit::One => 1,
            Qubit::Two => 2,
        }
    }
}

impl TryFrom<u8> for Qubit {
    type Error = GeoError;

    fn try_from(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Qubit::One),
            2 => Ok(Qubit::Two),
            other => Err(GeoError::BadIndex(format!("qubit {other} (expected 1 or 2)"))),
        }
    }
}

/// Scales `v` to unit norm and flips its sign so the first nonzero entry is
/// positive. Works for any fixed-length real amplitude vector.
pub fn normalize_phase<const N: usize>(v: [f64; N]) -> Result<[f64; N]> {
    if v.iter().all(|x| x.abs() < ZERO_EPS) {
        return Err(GeoError::ZeroVector);
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let lead = v.iter().copied().find(|x| x.abs() >= ZERO_EPS).unwrap_or(1.0);
    let scale = lead.signum() / norm;
    Ok(v.map(|x| x * scale))
}

fn check_norm(v: &[f64]) -> Result<()> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(GeoError::NotNormalized {
            norm,
            tolerance: NORM_TOLERANCE,
        });
    }
    Ok(())
}

/// Pure one-qubit state `a|0⟩ + b|1⟩` with real amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitVector {
    a: f64,
    b: f64,
}

impl QubitVector {
    /// Requires unit norm within [`NORM_TOLERANCE`]; the result is
    /// renormalized and phase-fixed.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        check_norm(&[a, b])?;
        Self::normalized(a, b)
    }

    /// Accepts any nonzero vector.
    pub fn normalized(a: f64, b: f64) -> Result<Self> {
        let [a, b] = normalize_phase([a, b])?;
        Ok(QubitVector { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn to_array(self) -> [f64; 2] {
        [self.a, self.b]
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::clamped(self.a * self.a, self.a * self.b, self.b * self.b)
    }
}

/// `(cos θ/2, sin θ/2)`, phase-fixed.
pub fn ket_from_angle(theta: Angle) -> QubitVector {
    let (sin, cos) = theta.half().sin_cos();
    // θ ∈ (−π, π] keeps cos(θ/2) ≥ 0, so only θ = π can need the sign fix.
    QubitVector::normalized(cos, sin).expect("unit vector")
}

/// Real pure two-qubit state `α|00⟩ + β|01⟩ + γ|10⟩ + δ|11⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTwoQubit")]
pub struct TwoQubit {
    pub(crate) alpha: f64,
    pub(crate) beta: f64,
    pub(crate) gamma: f64,
    pub(crate) delta: f64,
}

impl TwoQubit {
    pub const ZERO_ZERO: TwoQubit = TwoQubit {
        alpha: 1.0,
        beta: 0.0,
        gamma: 0.0,
        delta: 0.0,
    };

    /// Requires unit norm within [`NORM_TOLERANCE`]; the result is
    /// renormalized and phase-fixed.
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        check_norm(&[alpha, beta, gamma, delta])?;
        Self::normalized([alpha, beta, gamma, delta])
    }

    /// Accepts any nonzero vector.
    pub fn normalized(v: [f64; 4]) -> Result<Self> {
        let [alpha, beta, gamma, delta] = normalize_phase(v)?;
        Ok(TwoQubit {
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    pub fn from_array(v: [f64; 4]) -> Result<Self> {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }

    pub fn norm(&self) -> f64 {
        self.to_array().iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest componentwise difference.
    pub fn max_diff(&self, other: &TwoQubit) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Deserialize)]
struct RawTwoQubit {
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
}

impl TryFrom<RawTwoQubit> for TwoQubit {
    type Error = GeoError;

    fn try_from(r: RawTwoQubit) -> Result<Self> {
        TwoQubit::new(r.alpha, r.beta, r.gamma, r.delta)
    }
}

impl fmt::Display for TwoQubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.alpha, self.beta, self.gamma, self.delta
        )
    }
}

/// Real symmetric one-qubit density matrix `[[p_top, c], [c, p_bot]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDensity")]
pub struct DensityMatrix {
    p_top: f64,
    c: f64,
    p_bot: f64,
}

#[derive(Deserialize)]
struct RawDensity {
    p_top: f64,
    c: f64,
    p_bot: f64,
}

impl TryFrom<RawDensity> for DensityMatrix {
    type Error = GeoError;

    fn try_from(r: RawDensity) -> Result<Self> {
        DensityMatrix::new(r.p_top, r.c, r.p_bot)
    }
}

impl DensityMatrix {
    pub const MAXIMALLY_MIXED: DensityMatrix = DensityMatrix {
        p_top: 0.5,
        c: 0.0,
        p_bot: 0.5,
    };

    pub fn new(p_top: f64, c: f64, p_bot: f64) -> Result<Self> {
        let tol = NORM_TOLERANCE;
        if !(p_top.is_finite() && c.is_finite() && p_bot.is_finite()) {
            return Err(GeoError::Domain {
                what: "density matrix entries must be finite",
                value: f64::NAN,
            });
        }
        if (p_top + p_bot - 1.0).abs() > tol {
            return Err(GeoError::Domain {
                what: "density matrix trace must be 1",
                value: p_top + p_bot,
            });
        }
        for p in [p_top, p_bot] {
            if !(-tol..=1.0 + tol).contains(&p) {
                return Err(GeoError::Domain {
                    what: "diagonal entries must be probabilities",
                    value: p,
                });
            }
        }
        if c * c > p_top * p_bot + tol {
            return Err(GeoError::Domain {
                what: "off-diagonal violates positive semidefiniteness",
                value: c,
            });
        }
        Ok(Self::clamped(p_top, c, p_bot))
    }

    /// For values produced by closed-form arithmetic on valid inputs: clamps
    /// the diagonal into [0, 1] and |c| to ½.
    ///
    /// |c| is deliberately not clamped to √(p_top·p_bot): near a pole the
    /// square root turns rounding noise in the tiny diagonal entry into a
    /// much larger error in `c`.
    pub(crate) fn clamped(p_top: f64, c: f64, p_bot: f64) -> Self {
        DensityMatrix {
            p_top: p_top.clamp(0.0, 1.0),
            c: c.clamp(-0.5, 0.5),
            p_bot: p_bot.clamp(0.0, 1.0),
        }
    }

    pub fn p_top(&self) -> f64 {
        self.p_top
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn p_bot(&self) -> f64 {
        self.p_bot
    }

    /// Distance of the statepoint from the Bloch Circle center.
    pub fn radius(&self) -> f64 {
        (0.5 * (self.p_top - self.p_bot)).hypot(self.c)
    }

    pub fn trace(&self) -> f64 {
        self.p_top + self.p_bot
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.p_top, self.c, self.p_bot]
    }

    pub fn max_diff(&self, other: &DensityMatrix) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

/// Which torus surface a maximally entangled state lives on: `Outer` for
/// s = +½, `Inner` for s = −½.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Surface {
    Outer,
    Inner,
}

impl Surface {
    pub fn from_sign(s: f64) -> Surface {
        if s >= 0.0 {
            Surface::Outer
        } else {
            Surface::Inner
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Surface::Outer => 1.0,
            Surface::Inner => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Surface::Outer => '+',
            Surface::Inner => '-',
        }
    }
}

/// Toroid coordinates `(s, θ₁, θ₂)` of a two-qubit state. `r` is derived
/// from `s` and cached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometricParams {
    pub s: f64,
    pub theta1: Angle,
    pub theta2: Angle,
    pub r: f64,
}

impl GeometricParams {
    pub fn new(s: f64, theta1: Angle, theta2: Angle) -> Result<Self> {
        let r = radius_from_s(s)?;
        Ok(GeometricParams {
            s: s.clamp(-0.5, 0.5),
            theta1,
            theta2,
            r,
        })
    }
}

/// Identity of a maximally entangled state: surface and knot angle ξ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnotDescriptor {
    pub surface: Surface,
    pub xi: Angle,
}

/// `q1 ⊗ q2`, phase-fixed.
pub fn tensor_product(q1: &QubitVector, q2: &QubitVector) -> TwoQubit {
    let (a1, b1, a2, b2) = (q1.a, q1.b, q2.a, q2.b);
    TwoQubit::normalized([a1 * a2, a1 * b2, b1 * a2, b1 * b2]).expect("product of unit vectors")
}

/// Partial trace over `traced`: the density matrix of the *other* qubit.
///
/// Tracing out qubit 1 gives `(α²+γ², αβ+γδ, β²+δ²)`; tracing out qubit 2
/// gives `(α²+β², αγ+βδ, γ²+δ²)`.
pub fn partial_trace(chi: &TwoQubit, traced: Qubit) -> DensityMatrix {
    let TwoQubit {
        alpha,
        beta,
        gamma,
        delta,
    } = *chi;
    match traced {
        Qubit::One => DensityMatrix::clamped(
            alpha * alpha + gamma * gamma,
            alpha * beta + gamma * delta,
            beta * beta + delta * delta,
        ),
        Qubit::Two => DensityMatrix::clamped(
            alpha * alpha + beta * beta,
            alpha * gamma + beta * delta,
            gamma * gamma + delta * delta,
        ),
    }
}

/// Reduced density matrix of `qubit`.
pub fn reduced_state(chi: &TwoQubit, qubit: Qubit) -> DensityMatrix {
    partial_trace(chi, qubit.other())
}

/// `s = αδ − βγ`, clamped to [−½, ½].
pub fn entanglement_s(chi: &TwoQubit) -> f64 {
    (chi.alpha * chi.delta - chi.beta * chi.gamma).clamp(-0.5, 0.5)
}

/// `r = √(¼ − s²)`.
pub fn radius_from_s(s: f64) -> Result<f64> {
    if !s.is_finite() || s.abs() > 0.5 + 1e-9 {
        return Err(GeoError::Domain {
            what: "|s| must not exceed 1/2",
            value: s,
        });
    }
    let s = s.clamp(-0.5, 0.5);
    Ok(((0.5 - s) * (0.5 + s)).max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn close(a: [f64; 4], b: [f64; 4], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn ket_spot_values() {
        assert_eq!(ket_from_angle(Angle::ZERO).to_array(), [1.0, 0.0]);
        let k = ket_from_angle(Angle::new(PI));
        assert_abs_diff_eq!(k.a(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(k.b(), 1.0, epsilon = 1e-15);
        let k = ket_from_angle(Angle::new(PI / 2.0));
        assert_abs_diff_eq!(k.a(), FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(k.b(), FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn phase_normalization_examples() {
        assert_eq!(normalize_phase([-1.0, 0.0, 0.0, 0.0]).unwrap(), [1.0, 0.0, 0.0, 0.0]);
        let h = FRAC_1_SQRT_2;
        let v = normalize_phase([0.0, -0.5, -0.5, -h]).unwrap();
        assert!(close(v, [0.0, 0.5, 0.5, h], 1e-15));
        assert_eq!(normalize_phase([0.6, 0.8]).unwrap(), [0.6, 0.8]);
        assert_eq!(normalize_phase([0.0, 1e-13]), Err(GeoError::ZeroVector));
    }

    #[test]
    fn constructors_check_norm() {
        assert!(matches!(
            TwoQubit::new(1.0, 1.0, 0.0, 0.0),
            Err(GeoError::NotNormalized { .. })
        ));
        assert!(QubitVector::new(0.6, -0.8).is_ok());
        assert!(TwoQubit::normalized([2.0, 0.0, 0.0, 0.0]).is_ok());
    }

    #[test]
    fn tensor_examples() {
        let zero = ket_from_angle(Angle::ZERO);
        assert_eq!(tensor_product(&zero, &zero).to_array(), [1.0, 0.0, 0.0, 0.0]);
        let plus = ket_from_angle(Angle::new(PI / 2.0));
        let t = tensor_product(&plus, &zero).to_array();
        assert!(close(t, [FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0], 1e-15));
    }

    #[test]
    fn partial_trace_examples() {
        let rho = partial_trace(&TwoQubit::ZERO_ZERO, Qubit::One);
        assert_eq!(rho.to_array(), [1.0, 0.0, 0.0]);
        let bell = TwoQubit::new(FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2).unwrap();
        for q in [Qubit::One, Qubit::Two] {
            let rho = partial_trace(&bell, q);
            assert!(rho.max_diff(&DensityMatrix::MAXIMALLY_MIXED) < 1e-15);
        }
    }

    #[test]
    fn reduced_state_belongs_to_the_named_qubit() {
        // |0⟩ ⊗ |1⟩: qubit 1 sits at |0⟩, qubit 2 at |1⟩.
        let chi = TwoQubit::new(0.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(reduced_state(&chi, Qubit::One).to_array(), [1.0, 0.0, 0.0]);
        assert_eq!(reduced_state(&chi, Qubit::Two).to_array(), [0.0, 0.0, 1.0]);
    }

    #[test]
    fn entanglement_examples() {
        assert_eq!(entanglement_s(&TwoQubit::ZERO_ZERO), 0.0);
        let h = FRAC_1_SQRT_2;
        assert_abs_diff_eq!(
            entanglement_s(&TwoQubit::new(h, 0.0, 0.0, h).unwrap()),
            0.5,
            epsilon = 1e-15
        );
        let minus = TwoQubit::new(h, 0.0, 0.0, -h).unwrap();
        assert_eq!(minus.to_array(), [h, 0.0, 0.0, -h]);
        assert_abs_diff_eq!(entanglement_s(&minus), -0.5, epsilon = 1e-15);
    }

    #[test]
    fn radius_examples() {
        assert_eq!(radius_from_s(0.0).unwrap(), 0.5);
        assert_eq!(radius_from_s(0.5).unwrap(), 0.0);
        assert_eq!(radius_from_s(-0.5).unwrap(), 0.0);
        // oracle: √(0.25 − 0.09)
        assert_abs_diff_eq!(radius_from_s(0.3).unwrap(), 0.4, epsilon = 1e-15);
        assert_eq!(radius_from_s(0.5 + 1e-13).unwrap(), 0.0);
        assert!(matches!(radius_from_s(0.6), Err(GeoError::Domain { .. })));
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::new(0.6, 0.0, 0.6).is_err());
        assert!(DensityMatrix::new(0.5, 0.5, 0.5).is_ok());
        assert!(DensityMatrix::new(0.5, 0.6, 0.5).is_err());
        assert!(DensityMatrix::new(1.2, 0.0, -0.2).is_err());
        assert!(DensityMatrix::new(0.75, 0.2, 0.25).is_ok());
    }

    #[test]
    fn deserialization_validates() {
        let ok: TwoQubit = serde_json::from_str(r#"{"alpha":-1,"beta":0,"gamma":0,"delta":0}"#).unwrap();
        assert_eq!(ok, TwoQubit::ZERO_ZERO);
        assert!(serde_json::from_str::<TwoQubit>(r#"{"alpha":2,"beta":0,"gamma":0,"delta":0}"#).is_err());
        assert!(serde_json::from_str::<DensityMatrix>(r#"{"p_top":0.9,"c":0.5,"p_bot":0.1}"#).is_err());
    }

    fn unit4() -> impl Strategy<Value = [f64; 4]> {
        prop::array::uniform4(-1.0f64..1.0)
            .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
    }

    proptest! {
        #[test]
        fn shared_radius_and_right_triangle(v in unit4()) {
            let chi = TwoQubit::normalized(v).unwrap();
            let r1 = partial_trace(&chi, Qubit::One).radius();
            let r2 = partial_trace(&chi, Qubit::Two).radius();
            prop_assert!((r1 - r2).abs() < 1e-12);
            let s = entanglement_s(&chi);
            prop_assert!((s * s + r1 * r1 - 0.25).abs() < 1e-12);
        }

        #[test]
        fn phase_normalization_idempotent(v in unit4()) {
            let once = normalize_phase(v).unwrap();
            let twice = normalize_phase(once).unwrap();
            prop_assert!(close(once, twice, 1e-15));
            let n: f64 = once.iter().map(|x| x * x).sum();
            prop_assert!((n - 1.0).abs() < 1e-15);
            let lead = once.iter().find(|x| x.abs() >= ZERO_EPS).unwrap();
            prop_assert!(*lead > 0.0);
        }

        #[test]
        fn products_are_separable(t1 in -PI..PI, t2 in -PI..PI) {
            let chi = tensor_product(&ket_from_angle(Angle::new(t1)), &ket_from_angle(Angle::new(t2)));
            // symbolic identity a₁a₂·b₁b₂ − a₁b₂·b₁a₂ = 0
            prop_assert!(entanglement_s(&chi).abs() < 1e-12);
        }

        #[test]
        fn reduced_states_are_valid(v in unit4()) {
            let chi = TwoQubit::normalized(v).unwrap();
            for q in [Qubit::One, Qubit::Two] {
                let rho = partial_trace(&chi, q);
                prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
                prop_assert!(rho.c() * rho.c() <= rho.p_top() * rho.p_bot() + 1e-12);
            }
        }
    }
}
