use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use futures::{SinkExt, StreamExt};
use serde::Serialize;
use tokio::net::TcpListener;
use tokio::sync::{Mutex, RwLock};

use crate::protocol::{ClientMessage, Command, ErrorCode, ProtocolError};
use crate::session::{Frame, Session};

type Shared = Arc<Mutex<Session>>;

#[derive(Clone, Default)]
pub struct AppState {
    sessions: Arc<RwLock<HashMap<String, Shared>>>,
    initial: Frame,
}

impl AppState {
    /// New sessions start from `initial` (default: |00>, standard bases).
    pub fn with_initial(initial: Frame) -> Self {
        AppState {
            sessions: Default::default(),
            initial,
        }
    }

    pub async fn session_count(&self) -> usize {
        self.sessions.read().await.len()
    }
}

#[derive(Serialize)]
struct Created {
    id: String,
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", delete(remove))
        .route("/sessions/{id}/ws", get(connect))
        .with_state(state)
}

/// Binds `addr` and serves until the task is dropped. Returns the bound
/// address so callers can pass port 0.
pub async fn bind(
    addr: SocketAddr,
    state: AppState,
) -> std::io::Result<(SocketAddr, impl std::future::Future<Output = std::io::Result<()>>)> {
    let listener = TcpListener::bind(addr).await?;
    let local = listener.local_addr()?;
    let app = router(state);
    Ok((local, async move { axum::serve(listener, app).await }))
}

async fn create(State(app): State<AppState>) -> (StatusCode, Json<Created>) {
    let id = uuid::Uuid::new_v4().to_string();
    let session = Session::with_frame(id.clone(), app.initial);
    app.sessions
        .write()
        .await
        .insert(id.clone(), Arc::new(Mutex::new(session)));
    tracing::debug!(%id, "session created");
    (StatusCode::CREATED, Json(Created { id }))
}

async fn remove(State(app): State<AppState>, Path(id): Path<String>) -> StatusCode {
    match app.sessions.write().await.remove(&id) {
        Some(_) => StatusCode::NO_CONTENT,
        None => StatusCode::NOT_FOUND,
    }
}

async fn connect(State(app): State<AppState>, Path(id): Path<String>, ws: WebSocketUpgrade) -> Response {
    let session = app.sessions.read().await.get(&id).cloned();
    match session {
        Some(session) => ws.on_upgrade(move |socket| run_socket(socket, session)),
        None => {
            let body = Json(ProtocolError::new(ErrorCode::UnknownSession, format!("no session {id}")));
            (StatusCode::NOT_FOUND, body).into_response()
        }
    }
}

async fn run_socket(socket: WebSocket, session: Shared) {
    let (mut tx, mut rx) = socket.split();
    let hello = session.lock().await.respond(&ClientMessage {
        seq: None,
        command: Command::Snapshot,
    });
    if tx.send(Message::Text(hello.to_json().into())).await.is_err() {
        return;
    }
    while let Some(Ok(msg)) = rx.next().await {
        let text = match msg {
            Message::Text(t) => t.to_string(),
            // invalid UTF-8 falls through to a bad_message reply
            Message::Binary(b) => String::from_utf8(b.to_vec()).unwrap_or_default(),
            Message::Close(_) => break,
            Message::Ping(_) | Message::Pong(_) => continue,
        };
        let reply = {
            let mut s = session.lock().await;
            match serde_json::from_str::<ClientMessage>(&text) {
                Ok(cmd) => s.respond(&cmd),
                Err(e) => {
                    let reply_to = serde_json::from_str::<serde_json::Value>(&text)
                        .ok()
                        .and_then(|v| v.get("seq").and_then(|n| n.as_u64()));
                    s.error(reply_to, ProtocolError::new(ErrorCode::BadMessage, e.to_string()))
                }
            }
        };
        if tx.send(Message::Text(reply.to_json().into())).await.is_err() {
            break;
        }
    }
}
