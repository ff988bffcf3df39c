//! Interactive session service: one mutable two-qubit state per session,
//! driven by JSON commands over a WebSocket, answered with full snapshots.

pub mod protocol;
pub mod server;
pub mod session;

pub use protocol::{ClientMessage, Command, ErrorCode, ProtocolError, ServerMessage, Snapshot};
pub use server::{bind, router, AppState};
pub use session::{build_snapshot, Frame, Session, HISTORY_CAP};
