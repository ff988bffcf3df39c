use std::net::SocketAddr;

use futures::{SinkExt, StreamExt};
use qubitgeo_core::{statepoint_3d, ParamsOrKnot, Primitive};
use qubitgeo_session::{bind, AppState};
use serde_json::{json, Value};
use tokio_tungstenite::tungstenite::Message;

async fn start() -> SocketAddr {
    let (addr, serve) = bind("127.0.0.1:0".parse().unwrap(), AppState::default()).await.unwrap();
    tokio::spawn(serve);
    addr
}

async fn new_session(addr: SocketAddr) -> String {
    let resp = reqwest::Client::new()
        .post(format!("http://{addr}/sessions"))
        .send()
        .await
        .unwrap();
    assert_eq!(resp.status(), 201);
    let body: Value = resp.json().await.unwrap();
    body["id"].as_str().unwrap().to_string()
}

type Ws = tokio_tungstenite::WebSocketStream<tokio_tungstenite::MaybeTlsStream<tokio::net::TcpStream>>;

async fn recv(ws: &mut Ws) -> Value {
    loop {
        match ws.next().await.unwrap().unwrap() {
            Message::Text(t) => return serde_json::from_str(&t).unwrap(),
            _ => continue,
        }
    }
}

async fn send(ws: &mut Ws, v: Value) -> Value {
    ws.send(Message::Text(v.to_string().into())).await.unwrap();
    recv(ws).await
}

fn check_consistent(snap: &Value) {
    let r: qubitgeo_session::protocol::Readouts = serde_json::from_value(snap["readouts"].clone()).unwrap();
    let toroid: qubitgeo_core::Scene = serde_json::from_value(snap["toroid_scene"].clone()).unwrap();
    assert!(toroid.inconsistencies(1e-9).is_empty());
    for scene in snap["bloch_scenes"].as_array().unwrap() {
        let scene: qubitgeo_core::Scene = serde_json::from_value(scene.clone()).unwrap();
        assert!(scene.inconsistencies(1e-9).is_empty());
    }
    for p in r.probabilities {
        assert!((p[0] + p[1] - 1.0).abs() < 1e-9);
    }
    let placement = qubitgeo_core::params_from_state(&r.state);
    match (placement, toroid.get("statepoint")) {
        (ParamsOrKnot::Params(_), Some(Primitive::Point { position, .. })) => {
            let expected = statepoint_3d(&placement, &r.toroid).unwrap();
            let d = qubitgeo_core::scene::distance(position.coords(), &expected);
            assert!(d < 1e-9, "statepoint off by {d}");
        }
        (ParamsOrKnot::Knot(_), None) => assert!(toroid.get("knot").is_some()),
        other => panic!("placement and scene disagree: {other:?}"),
    }
}

#[tokio::test]
async fn session_round_trip() {
    let addr = start().await;
    let id = new_session(addr).await;
    let (mut ws, _) = tokio_tungstenite::connect_async(format!("ws://{addr}/sessions/{id}/ws"))
        .await
        .unwrap();

    let hello = recv(&mut ws).await;
    assert_eq!(hello["type"], "snapshot");
    assert_eq!(hello["session"], id.as_str());
    check_consistent(&hello);
    let mut last = hello["seq"].as_u64().unwrap();

    let h = send(&mut ws, json!({"type": "apply_gate", "seq": 1, "token": "H1"})).await;
    check_consistent(&h);
    assert_eq!(h["reply_to"], 1);
    let bell = send(&mut ws, json!({"type": "apply_gate", "seq": 2, "token": "CNOT12"})).await;
    check_consistent(&bell);
    assert_eq!(bell["readouts"]["placement"]["kind"], "knot");
    assert!((bell["readouts"]["s"].as_f64().unwrap() - 0.5).abs() < 1e-12);

    let undone = send(&mut ws, json!({"type": "undo", "seq": 3})).await;
    assert_eq!(undone["readouts"], h["readouts"]);
    assert_eq!(undone["toroid_scene"], h["toroid_scene"]);

    let bad = send(&mut ws, json!({"type": "apply_gate", "seq": 4, "token": "Y1"})).await;
    assert_eq!(bad["type"], "error");
    assert_eq!(bad["code"], "bad_gate");
    assert_eq!(bad["reply_to"], 4);

    ws.send(Message::Text(r#"{"seq": 5, "type": "jump"#.into())).await.unwrap();
    let garbled = recv(&mut ws).await;
    assert_eq!(garbled["code"], "bad_message");

    let unchanged = send(&mut ws, json!({"type": "snapshot", "seq": 6})).await;
    assert_eq!(unchanged["readouts"], h["readouts"]);

    for msg in [&h, &bell, &undone, &bad, &garbled, &unchanged] {
        let seq = msg["seq"].as_u64().unwrap();
        assert!(seq > last, "seq {seq} after {last}");
        last = seq;
    }

    let params = send(&mut ws, json!({"type": "set_params", "s": 0.0, "theta1": 0.0, "theta2": 0.0})).await;
    check_consistent(&params);
    let toroid: qubitgeo_core::Scene = serde_json::from_value(params["toroid_scene"].clone()).unwrap();
    let (Some(Primitive::Point { position: a, .. }), Some(Primitive::Point { position: b, .. })) =
        (toroid.get("statepoint"), toroid.get("marker.00"))
    else {
        panic!("missing points")
    };
    assert!(qubitgeo_core::scene::distance(a.coords(), b.coords()) < 1e-12);
}

#[tokio::test]
async fn unknown_and_deleted_sessions() {
    let addr = start().await;
    let client = reqwest::Client::new();
    assert!(tokio_tungstenite::connect_async(format!("ws://{addr}/sessions/nope/ws"))
        .await
        .is_err());

    let id = new_session(addr).await;
    let del = client.delete(format!("http://{addr}/sessions/{id}")).send().await.unwrap();
    assert_eq!(del.status(), 204);
    let again = client.delete(format!("http://{addr}/sessions/{id}")).send().await.unwrap();
    assert_eq!(again.status(), 404);
    assert!(tokio_tungstenite::connect_async(format!("ws://{addr}/sessions/{id}/ws"))
        .await
        .is_err());
}

#[tokio::test]
async fn sessions_are_independent() {
    let addr = start().await;
    let a = new_session(addr).await;
    let b = new_session(addr).await;
    assert_ne!(a, b);
    let (mut wa, _) = tokio_tungstenite::connect_async(format!("ws://{addr}/sessions/{a}/ws")).await.unwrap();
    let (mut wb, _) = tokio_tungstenite::connect_async(format!("ws://{addr}/sessions/{b}/ws")).await.unwrap();
    recv(&mut wa).await;
    recv(&mut wb).await;
    send(&mut wa, json!({"type": "apply_gate", "token": "X1"})).await;
    let sb = send(&mut wb, json!({"type": "snapshot"})).await;
    assert_eq!(sb["readouts"]["state"], json!({"alpha": 1.0, "beta": 0.0, "gamma": 0.0, "delta": 0.0}));
}
