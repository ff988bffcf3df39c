use std::collections::VecDeque;

use qubitgeo_core::{
    bloch_scene, maximally_entangled, measurement_probs, params_from_state, radius_from_s,
    reduced_state, state_from_params, toroid_scene, Angle, BasisAxis, Gate, ParamsOrKnot, Qubit, ToroidConfig, TwoQubit,
};

use crate::protocol::{
    ClientMessage, Command, ErrorCode, Placement, ProtocolError, Readouts, ServerMessage, Snapshot,
};

pub const HISTORY_CAP: usize = 256;

/// Everything a command can change; undo restores a whole frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub state: TwoQubit,
    pub bases: [BasisAxis; 2],
    pub toroid: ToroidConfig,
}

impl Default for Frame {
    fn default() -> Self {
        Frame {
            state: TwoQubit::ZERO_ZERO,
            bases: [BasisAxis::STANDARD; 2],
            toroid: ToroidConfig::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Session {
    id: String,
    current: Frame,
    history: VecDeque<Frame>,
    seq: u64,
}

impl Session {
    pub fn new(id: impl Into<String>) -> Self {
        Self::with_frame(id, Frame::default())
    }

    pub fn with_frame(id: impl Into<String>, frame: Frame) -> Self {
        Session {
            id: id.into(),
            current: frame,
            history: VecDeque::new(),
            seq: 0,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn frame(&self) -> &Frame {
        &self.current
    }

    pub fn history_len(&self) -> usize {
        self.history.len()
    }

    /// Applies `cmd` and returns a full snapshot. On error the frame and
    /// history are untouched; the sequence counter still advances so the
    /// caller can number the error message.
    pub fn handle(&mut self, cmd: &Command) -> Result<Snapshot, (u64, ProtocolError)> {
        match self.next_frame(cmd) {
            Ok(Some(frame)) => {
                if self.history.len() == HISTORY_CAP {
                    self.history.pop_front();
                }
                self.history.push_back(self.current);
                self.current = frame;
            }
            Ok(None) => {}
            Err(e) => return Err((self.bump(), e)),
        }
        let seq = self.bump();
        Ok(build_snapshot(&self.id, seq, &self.current))
    }

    /// Protocol-level wrapper: always yields exactly one outbound message.
    pub fn respond(&mut self, msg: &ClientMessage) -> ServerMessage {
        let reply_to = msg.seq;
        match self.handle(&msg.command) {
            Ok(mut snap) => {
                snap.reply_to = reply_to;
                ServerMessage::Snapshot(Box::new(snap))
            }
            Err((seq, e)) => ServerMessage::Error {
                session: self.id.clone(),
                seq,
                reply_to,
                code: e.code,
                message: e.message,
            },
        }
    }

    /// Numbers an error that arose outside command handling, e.g. an
    /// unparseable message.
    pub fn error(&mut self, reply_to: Option<u64>, e: ProtocolError) -> ServerMessage {
        ServerMessage::Error {
            session: self.id.clone(),
            seq: self.bump(),
            reply_to,
            code: e.code,
            message: e.message,
        }
    }

    fn bump(&mut self) -> u64 {
        self.seq += 1;
        self.seq
    }

    /// `Ok(None)` for commands that do not change the frame.
    fn next_frame(&mut self, cmd: &Command) -> Result<Option<Frame>, ProtocolError> {
        let mut frame = self.current;
        match cmd {
            Command::Snapshot => return Ok(None),
            Command::Undo => {
                return match self.history.pop_back() {
                    Some(prev) => {
                        self.current = prev;
                        Ok(None)
                    }
                    None => Err(ProtocolError::new(ErrorCode::EmptyHistory, "nothing to undo")),
                }
            }
            Command::SetState { vector } => {
                let v: [f64; 4] = vector.as_slice().try_into().map_err(|_| {
                    ProtocolError::new(
                        ErrorCode::BadVector,
                        format!("expected 4 amplitudes, got {}", vector.len()),
                    )
                })?;
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(ProtocolError::new(ErrorCode::BadVector, "amplitudes must be finite"));
                }
                frame.state = TwoQubit::normalized(v).map_err(|e| ProtocolError::new(ErrorCode::BadVector, e.to_string()))?;
            }
            Command::SetParams { s, theta1, theta2 } => {
                if !(theta1.is_finite() && theta2.is_finite()) {
                    return Err(ProtocolError::new(ErrorCode::BadParams, "angles must be finite"));
                }
                frame.state = state_from_params(*s, Angle::new(*theta1), Angle::new(*theta2))
                    .map_err(|e| ProtocolError::new(ErrorCode::BadParams, e.to_string()))?;
            }
            Command::SetKnot { surface, xi } => {
                if !xi.is_finite() {
                    return Err(ProtocolError::new(ErrorCode::BadParams, "xi must be finite"));
                }
                frame.state = maximally_entangled(*surface, Angle::new(*xi));
            }
            Command::ApplyGate { token } => {
                let gate: Gate = token
                    .parse()
                    .map_err(|e: qubitgeo_core::GeoError| ProtocolError::new(ErrorCode::BadGate, e.to_string()))?;
                frame.state = qubitgeo_core::apply_gate(&frame.state, gate);
            }
            Command::SetBasis { qubit, angle } => {
                let q = Qubit::try_from(*qubit).map_err(|e| ProtocolError::new(ErrorCode::BadParams, e.to_string()))?;
                if !angle.is_finite() {
                    return Err(ProtocolError::new(ErrorCode::BadParams, "angle must be finite"));
                }
                frame.bases[usize::from(q.index()) - 1] = BasisAxis::new(Angle::new(*angle));
            }
            Command::SetToroid { config } => {
                config
                    .validate()
                    .map_err(|e| ProtocolError::new(ErrorCode::BadParams, e.to_string()))?;
                frame.toroid = *config;
            }
        }
        Ok(Some(frame))
    }
}

pub fn readouts(frame: &Frame) -> Readouts {
    let chi = frame.state;
    let reduced = [reduced_state(&chi, Qubit::One), reduced_state(&chi, Qubit::Two)];
    let probs = |i: usize| {
        let (p0, p1) = measurement_probs(&reduced[i], &frame.bases[i]);
        [p0, p1]
    };
    let (s, r, placement) = match params_from_state(&chi) {
        ParamsOrKnot::Params(p) => (p.s, p.r, Placement::Point(p)),
        ParamsOrKnot::Knot(k) => {
            let s = 0.5 * k.surface.sign();
            (s, radius_from_s(s).expect("|s| = 1/2"), Placement::Knot(k))
        }
    };
    Readouts {
        state: chi,
        s,
        r,
        placement,
        reduced,
        bases: [frame.bases[0].axis_angle, frame.bases[1].axis_angle],
        probabilities: [probs(0), probs(1)],
        toroid: frame.toroid,
    }
}

pub fn build_snapshot(session: &str, seq: u64, frame: &Frame) -> Snapshot {
    let readouts = readouts(frame);
    let bloch = |i: usize, prefix: &str| bloch_scene(&readouts.reduced[i], &frame.bases[i]).to_scene(prefix);
    Snapshot {
        session: session.to_string(),
        seq,
        reply_to: None,
        toroid_scene: toroid_scene(&frame.state, &frame.toroid),
        bloch_scenes: [bloch(0, "q1."), bloch(1, "q2.")],
        readouts,
    }
}
