//! Wire messages. Every message is a JSON object with `type` and `seq`.
//!
//! Clients send commands (`seq` is the client's own counter, echoed back as
//! `reply_to`); the server answers each with a full `snapshot` or an `error`,
//! numbered from one per-session counter that never repeats or decreases.

use serde::{Deserialize, Serialize};

use qubitgeo_core::{
    Angle, DensityMatrix, GeometricParams, KnotDescriptor, Scene, Surface, ToroidConfig, TwoQubit,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Command {
    SetState { vector: Vec<f64> },
    SetParams { s: f64, theta1: f64, theta2: f64 },
    SetKnot { surface: Surface, xi: f64 },
    ApplyGate { token: String },
    SetBasis { qubit: u8, angle: f64 },
    SetToroid { config: ToroidConfig },
    Undo,
    Snapshot,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClientMessage {
    #[serde(default)]
    pub seq: Option<u64>,
    #[serde(flatten)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    BadVector,
    BadParams,
    BadGate,
    EmptyHistory,
    /// The message was not valid JSON or not a known command.
    BadMessage,
    UnknownSession,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, thiserror::Error)]
#[error("{code:?}: {message}")]
pub struct ProtocolError {
    pub code: ErrorCode,
    pub message: String,
}

impl ProtocolError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        ProtocolError {
            code,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Placement {
    Point(GeometricParams),
    Knot(KnotDescriptor),
}

impl Placement {
    pub fn knot(&self) -> Option<&KnotDescriptor> {
        match self {
            Placement::Knot(k) => Some(k),
            Placement::Point(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Readouts {
    pub state: TwoQubit,
    pub s: f64,
    pub r: f64,
    pub placement: Placement,
    /// Reduced density matrices of qubit 1 and qubit 2.
    pub reduced: [DensityMatrix; 2],
    pub bases: [Angle; 2],
    /// `(p0, p1)` for each qubit in its current basis.
    pub probabilities: [[f64; 2]; 2],
    pub toroid: ToroidConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub session: String,
    pub seq: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reply_to: Option<u64>,
    pub readouts: Readouts,
    pub toroid_scene: Scene,
    pub bloch_scenes: [Scene; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    Snapshot(Box<Snapshot>),
    Error {
        session: String,
        seq: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        reply_to: Option<u64>,
        code: ErrorCode,
        message: String,
    },
}

impl ServerMessage {
    pub fn seq(&self) -> u64 {
        match self {
            ServerMessage::Snapshot(s) => s.seq,
            ServerMessage::Error { seq, .. } => *seq,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("messages serialize")
    }
}
