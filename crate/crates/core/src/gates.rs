//! Real orthogonal gates on two qubits, and parameter-space trajectories for
//! animating between states.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::error::{GeoError, Result};
use crate::mapping::{params_from_state, ParamsOrKnot};
use crate::states::{GeometricParams, Qubit, TwoQubit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    X(Qubit),
    Z(Qubit),
    H(Qubit),
    Cnot { control: Qubit, target: Qubit },
    Cz,
    Swap,
}

pub const ALL_GATES: [Gate; 10] = [
    Gate::X(Qubit::One),
    Gate::X(Qubit::Two),
    Gate::Z(Qubit::One),
    Gate::Z(Qubit::Two),
    Gate::H(Qubit::One),
    Gate::H(Qubit::Two),
    Gate::Cnot {
        control: Qubit::One,
        target: Qubit::Two,
    },
    Gate::Cnot {
        control: Qubit::Two,
        target: Qubit::One,
    },
    Gate::Cz,
    Gate::Swap,
];

impl Gate {
    pub fn cnot(control: u8, target: u8) -> Result<Gate> {
        let control = Qubit::try_from(control)?;
        let target = Qubit::try_from(target)?;
        if control == target {
            return Err(GeoError::BadIndex("CNOT control and target must differ".into()));
        }
        Ok(Gate::Cnot { control, target })
    }

    pub fn token(&self) -> String {
        match self {
            Gate::X(q) => format!("X{}", q.index()),
            Gate::Z(q) => format!("Z{}", q.index()),
            Gate::H(q) => format!("H{}", q.index()),
            Gate::Cnot { control, target } => format!("CNOT{}{}", control.index(), target.index()),
            Gate::Cz => "CZ".into(),
            Gate::Swap => "SWAP".into(),
        }
    }

    /// The 4×4 matrix in the (|00⟩, |01⟩, |10⟩, |11⟩) basis.
    pub fn matrix(&self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for (col, basis) in (0..4).map(|i| {
            let mut e = [0.0; 4];
            e[i] = 1.0;
            (i, e)
        }) {
            let out = self.act(basis);
            for row in 0..4 {
                m[row][col] = out[row];
            }
        }
        m
    }

    fn act(&self, v: [f64; 4]) -> [f64; 4] {
        let [a, b, g, d] = v;
        let h = FRAC_1_SQRT_2;
        match *self {
            Gate::X(Qubit::One) => [g, d, a, b],
            Gate::X(Qubit::Two) => [b, a, d, g],
            Gate::Z(Qubit::One) => [a, b, -g, -d],
            Gate::Z(Qubit::Two) => [a, -b, g, -d],
            Gate::H(Qubit::One) => [h * (a + g), h * (b + d), h * (a - g), h * (b - d)],
            Gate::H(Qubit::Two) => [h * (a + b), h * (a - b), h * (g + d), h * (g - d)],
            Gate::Cnot {
                control: Qubit::One,
                ..
            } => [a, b, d, g],
            Gate::Cnot {
                control: Qubit::Two,
                ..
            } => [a, d, g, b],
            Gate::Cz => [a, b, g, -d],
            Gate::Swap => [a, g, b, d],
        }
    }
}

impl FromStr for Gate {
    type Err = GeoError;

    fn from_str(token: &str) -> Result<Gate> {
        let t = token.trim().to_ascii_uppercase();
        let one = |q: &str| -> Result<Qubit> {
            match q {
                "1" => Ok(Qubit::One),
                "2" => Ok(Qubit::Two),
                _ => Err(GeoError::UnknownGate(token.to_string())),
            }
        };
        match t.as_str() {
            "CZ" => Ok(Gate::Cz),
            "SWAP" => Ok(Gate::Swap),
            "CNOT12" => Gate::cnot(1, 2),
            "CNOT21" => Gate::cnot(2, 1),
            _ if t.len() == 2 => {
                let q = one(&t[1..])?;
                match &t[..1] {
                    "X" => Ok(Gate::X(q)),
                    "Z" => Ok(Gate::Z(q)),
                    "H" => Ok(Gate::H(q)),
                    _ => Err(GeoError::UnknownGate(token.to_string())),
                }
            }
            _ => Err(GeoError::UnknownGate(token.to_string())),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

impl Serialize for Gate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.token())
    }
}

impl<'de> Deserialize<'de> for Gate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let token = String::deserialize(d)?;
        token.parse().map_err(serde::de::Error::custom)
    }
}

pub type GateSequence = Vec<Gate>;

/// Parses a comma-separated token list such as `H1,CNOT12`.
pub fn parse_sequence(text: &str) -> Result<GateSequence> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

pub fn apply_gate(chi: &TwoQubit, gate: Gate) -> TwoQubit {
    TwoQubit::normalized(gate.act(chi.to_array())).expect("orthogonal maps preserve norm")
}

pub fn apply_sequence(chi: &TwoQubit, seq: &[Gate]) -> TwoQubit {
    seq.iter().fold(*chi, |state, g| apply_gate(&state, *g))
}

/// Linear interpolation in `(s, θ₁, θ₂)` along the shortest angular arcs,
/// `steps` samples including both endpoints. Not a unitary path.
pub fn trajectory(start: &TwoQubit, end: &TwoQubit, steps: usize) -> Result<Vec<GeometricParams>> {
    if steps < 2 {
        return Err(GeoError::TooFewSteps(steps));
    }
    let regular = |chi: &TwoQubit| match params_from_state(chi) {
        ParamsOrKnot::Params(p) => Ok(p),
        ParamsOrKnot::Knot(_) => Err(GeoError::KnotEndpoint),
    };
    let from = regular(start)?;
    let to = regular(end)?;
    let ds = to.s - from.s;
    let d1 = from.theta1.shortest_delta(to.theta1);
    let d2 = from.theta2.shortest_delta(to.theta2);
    let last = (steps - 1) as f64;
    let mut path: Vec<GeometricParams> = (0..steps)
        .map(|i| {
            let t = i as f64 / last;
            GeometricParams::new(
                from.s + t * ds,
                Angle::new(from.theta1.radians() + t * d1),
                Angle::new(from.theta2.radians() + t * d2),
            )
        })
        .collect::<Result<_>>()?;
    path[0] = from;
    path[steps - 1] = to;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::state_from_params;
    use crate::states::entanglement_s;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    const H: f64 = FRAC_1_SQRT_2;

    fn matvec(m: &[[f64; 4]; 4], v: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (i, row) in m.iter().enumerate() {
            out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    // Kronecker product of two 2×2 matrices, qubit 1 on the left.
    fn kron(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = a[i / 2][j / 2] * b[i % 2][j % 2];
            }
        }
        m
    }

    #[test]
    fn matrices_match_textbook_forms() {
        let id = [[1.0, 0.0], [0.0, 1.0]];
        let x = [[0.0, 1.0], [1.0, 0.0]];
        let z = [[1.0, 0.0], [0.0, -1.0]];
        let h = [[H, H], [H, -H]];
        assert_eq!(Gate::X(Qubit::One).matrix(), kron(x, id));
        assert_eq!(Gate::X(Qubit::Two).matrix(), kron(id, x));
        assert_eq!(Gate::Z(Qubit::One).matrix(), kron(z, id));
        assert_eq!(Gate::Z(Qubit::Two).matrix(), kron(id, z));
        assert_eq!(Gate::H(Qubit::One).matrix(), kron(h, id));
        assert_eq!(Gate::H(Qubit::Two).matrix(), kron(id, h));
        let cnot12 = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
        ];
        assert_eq!(Gate::cnot(1, 2).unwrap().matrix(), cnot12);
        let cnot21 = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
        ];
        assert_eq!(Gate::cnot(2, 1).unwrap().matrix(), cnot21);
        let swap = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        assert_eq!(Gate::Swap.matrix(), swap);
        let mut cz = [[0.0; 4]; 4];
        for (i, row) in cz.iter_mut().enumerate() {
            row[i] = if i == 3 { -1.0 } else { 1.0 };
        }
        assert_eq!(Gate::Cz.matrix(), cz);
    }

    #[test]
    fn tokens_roundtrip() {
        for g in ALL_GATES {
            assert_eq!(g.token().parse::<Gate>().unwrap(), g);
        }
        assert_eq!("cnot12".parse::<Gate>().unwrap(), Gate::cnot(1, 2).unwrap());
        assert!(matches!("X3".parse::<Gate>(), Err(GeoError::UnknownGate(_))));
        assert!(matches!("CNOT11".parse::<Gate>(), Err(GeoError::UnknownGate(_))));
        assert!(matches!(Gate::cnot(1, 1), Err(GeoError::BadIndex(_))));
        assert!(matches!(Gate::cnot(0, 2), Err(GeoError::BadIndex(_))));
    }

    #[test]
    fn bit_flip_on_qubit_two() {
        let out = apply_gate(&TwoQubit::ZERO_ZERO, Gate::X(Qubit::Two));
        assert_eq!(out.to_array(), [0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn bell_preparation() {
        let seq = parse_sequence("H1, CNOT12").unwrap();
        let out = apply_sequence(&TwoQubit::ZERO_ZERO, &seq);
        // explicit matrix-product oracle
        let h1 = Gate::H(Qubit::One).matrix();
        let cx = Gate::cnot(1, 2).unwrap().matrix();
        let expected = matvec(&cx, matvec(&h1, [1.0, 0.0, 0.0, 0.0]));
        assert!(out.to_array().iter().zip(expected).all(|(a, b)| (a - b).abs() < 1e-15));
        assert!((out.alpha() - H).abs() < 1e-15 && (out.delta() - H).abs() < 1e-15);
        assert!((entanglement_s(&out) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sequences() {
        let chi = state_from_params(0.2, Angle::new(0.4), Angle::new(-1.1)).unwrap();
        assert_eq!(apply_sequence(&chi, &[]), chi);
        let twice = apply_sequence(&chi, &[Gate::X(Qubit::One), Gate::X(Qubit::One)]);
        assert!(twice.max_diff(&chi) < 1e-15);
        assert!(parse_sequence("H1,FOO").is_err());
        assert!(parse_sequence("").unwrap().is_empty());
    }

    #[test]
    fn trajectory_examples() {
        let chi = state_from_params(0.1, Angle::new(0.3), Angle::new(0.9)).unwrap();
        let path = trajectory(&chi, &chi, 5).unwrap();
        assert!(path.windows(2).all(|w| w[0] == w[1]));

        let one = TwoQubit::new(0.0, 1.0, 0.0, 0.0).unwrap();
        let path = trajectory(&TwoQubit::ZERO_ZERO, &one, 3).unwrap();
        assert!((path[1].theta2.radians() - PI / 2.0).abs() < 1e-15);
        assert_eq!(path[1].s, 0.0);

        let end = state_from_params(0.4, Angle::ZERO, Angle::ZERO).unwrap();
        let path = trajectory(&TwoQubit::ZERO_ZERO, &end, 5).unwrap();
        for (i, p) in path.iter().enumerate() {
            assert!((p.s - 0.1 * i as f64).abs() < 1e-12);
        }

        let bell = apply_sequence(&TwoQubit::ZERO_ZERO, &parse_sequence("H1,CNOT12").unwrap());
        assert_eq!(trajectory(&bell, &one, 4), Err(GeoError::KnotEndpoint));
        assert_eq!(trajectory(&one, &one, 1), Err(GeoError::TooFewSteps(1)));
    }

    #[test]
    fn trajectory_takes_short_arc_across_pi() {
        let start = state_from_params(0.0, Angle::new(3.0), Angle::ZERO).unwrap();
        let end = state_from_params(0.0, Angle::new(-3.0), Angle::ZERO).unwrap();
        let path = trajectory(&start, &end, 3).unwrap();
        assert!((path[1].theta1.radians() - PI).abs() < 1e-9);
    }

    fn state() -> impl Strategy<Value = TwoQubit> {
        prop::array::uniform4(-1.0f64..1.0)
            .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
            .prop_map(|v| TwoQubit::normalized(v).unwrap())
    }

    proptest! {
        #[test]
        fn closure_and_involution(chi in state(), idx in 0usize..ALL_GATES.len()) {
            let g = ALL_GATES[idx];
            let out = apply_gate(&chi, g);
            prop_assert!((out.norm() - 1.0).abs() < 1e-12);
            prop_assert!(apply_gate(&out, g).max_diff(&chi) < 1e-12);
            if let ParamsOrKnot::Params(p) = params_from_state(&out) {
                prop_assert!((p.s * p.s + p.r * p.r - 0.25).abs() < 1e-12);
            }
        }

        #[test]
        fn swap_exchanges_angles(s in -0.49f64..0.49, t1 in -PI..PI, t2 in -PI..PI) {
            let chi = state_from_params(s, Angle::new(t1), Angle::new(t2)).unwrap();
            let out = params_from_state(&apply_gate(&chi, Gate::Swap));
            let p = out.params().unwrap();
            prop_assert!((p.s - s).abs() < 1e-9);
            prop_assert!(p.theta1.distance(Angle::new(t2)) < 1e-9);
            prop_assert!(p.theta2.distance(Angle::new(t1)) < 1e-9);
        }
    }
}
