use std::sync::Arc;

use plot94_core::backend::{interpret_hpgl, PageSetup};
use plot94_service::{render_spec, revisioned_display_list_json, serve, PanelSpec, SessionStore};
use reqwest::{Client, StatusCode};
use serde_json::{json, Value};

async fn start() -> (String, Arc<SessionStore>) {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let store = Arc::new(SessionStore::default());
    tokio::spawn(serve(listener, store.clone()));
    (format!("http://{addr}"), store)
}

async fn new_session(c: &Client, base: &str) -> String {
    let r = c.post(format!("{base}/sessions")).send().await.unwrap();
    assert_eq!(r.status(), StatusCode::CREATED);
    r.json::<Value>().await.unwrap()["id"].as_str().unwrap().to_owned()
}

#[tokio::test]
async fn fresh_session_serves_sinc() {
    let (base, _) = start().await;
    let c = Client::new();
    let id = new_session(&c, &base).await;

    let s: Value = c.get(format!("{base}/sessions/{id}")).send().await.unwrap().json().await.unwrap();
    assert_eq!(s["panels"].as_array().unwrap().len(), 1);
    assert_eq!(s["panels"][0]["spec"]["demo"], "sinc");
    assert_eq!(s["panels"][0]["revision"], 1);

    let r = c
        .get(format!("{base}/sessions/{id}/panels/0/displaylist"))
        .send()
        .await
        .unwrap();
    assert_eq!(r.headers()["content-type"], "application/json");
    let text = r.text().await.unwrap();
    assert!(text.starts_with(r#"{"revision":1,"commands":[["#));
    let v: Value = serde_json::from_str(&text).unwrap();
    let cmds = v["commands"].as_array().unwrap();
    assert!(!cmds.is_empty());
    assert!(cmds.iter().all(|c| ["M", "L", "K", "P"].contains(&c[0].as_str().unwrap())));
    assert_eq!(v["bbox"].as_array().unwrap().len(), 4);

    let missing = c
        .get(format!("{base}/sessions/{id}/panels/99/displaylist"))
        .send()
        .await
        .unwrap();
    assert_eq!(missing.status(), StatusCode::NOT_FOUND);
    let nobody = c.get(format!("{base}/sessions/nope")).send().await.unwrap();
    assert_eq!(nobody.status(), StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn validation_lists_fields() {
    let (base, _) = start().await;
    let c = Client::new();
    let id = new_session(&c, &base).await;
    let r = c
        .put(format!("{base}/sessions/{id}/panels/0"))
        .json(&json!({"demo": "nosuch", "euler": {"phi": 0, "theta": 0, "psi": 0}, "resolution": 1}))
        .send()
        .await
        .unwrap();
    assert_eq!(r.status(), StatusCode::UNPROCESSABLE_ENTITY);
    let v: Value = r.json().await.unwrap();
    let fields: Vec<&str> = v["fields"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["field"].as_str().unwrap())
        .collect();
    assert_eq!(fields, ["demo", "resolution"]);

    let garbage = c
        .put(format!("{base}/sessions/{id}/panels/0"))
        .body("{")
        .send()
        .await
        .unwrap();
    assert_eq!(garbage.status(), StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn panels_grow_and_shrink() {
    let (base, _) = start().await;
    let c = Client::new();
    let id = new_session(&c, &base).await;
    let r: Value = c
        .post(format!("{base}/sessions/{id}/panels"))
        .send()
        .await
        .unwrap()
        .json()
        .await
        .unwrap();
    assert_eq!(r["index"], 1);
    assert_eq!(r["revision"], 2);
    let d: Value = c
        .delete(format!("{base}/sessions/{id}/panels/0"))
        .send()
        .await
        .unwrap()
        .json()
        .await
        .unwrap();
    assert_eq!(d["revision"], 3);
    let last = c
        .delete(format!("{base}/sessions/{id}/panels/0"))
        .send()
        .await
        .unwrap();
    assert_eq!(last.status(), StatusCode::CONFLICT);
}

#[tokio::test]
async fn turning_the_saddle_changes_its_list() {
    let (base, store) = start().await;
    let c = Client::new();
    let id = new_session(&c, &base).await;
    let mut spec = json!({"demo": "saddle", "euler": {"phi": 0.0, "theta": -1.0, "psi": 0.0}, "resolution": 16});
    let url = format!("{base}/sessions/{id}/panels/0");
    let r1: Value = c.put(&url).json(&spec).send().await.unwrap().json().await.unwrap();
    let a = store.panel(&id, 0).unwrap();
    spec["euler"]["phi"] = json!(std::f64::consts::FRAC_PI_4);
    let r2: Value = c.put(&url).json(&spec).send().await.unwrap().json().await.unwrap();
    let b = store.panel(&id, 0).unwrap();
    assert!(r2["revision"].as_u64() > r1["revision"].as_u64());
    assert_ne!(a.list, b.list);

    // The cached list is what a fresh render of the spec produces.
    let fresh = render_spec(&serde_json::from_value::<PanelSpec>(spec).unwrap()).unwrap();
    assert_eq!(*b.list, fresh);
    let served = c
        .get(format!("{url}/displaylist"))
        .send()
        .await
        .unwrap()
        .text()
        .await
        .unwrap();
    assert_eq!(served, revisioned_display_list_json(b.revision, &fresh));
}

#[tokio::test]
async fn exports() {
    let (base, store) = start().await;
    let c = Client::new();
    let id = new_session(&c, &base).await;
    let url = format!("{base}/sessions/{id}/panels/0/export");

    let r = c.get(format!("{url}?format=hpgl")).send().await.unwrap();
    assert_eq!(r.headers()["content-type"], "application/vnd.hp-hpgl");
    let hpgl = r.text().await.unwrap();
    assert!(hpgl.starts_with("IN;"));
    let replay = interpret_hpgl(&hpgl, PageSetup::default().margin_mm).unwrap();
    let want = store.panel(&id, 0).unwrap().list.trajectory();
    assert_eq!(replay.len(), want.len());
    for (a, b) in replay.iter().zip(&want) {
        assert_eq!(a.len(), b.len());
        for (p, q) in a.iter().zip(b) {
            assert!(p.distance(*q) <= 0.025);
        }
    }

    let r = c.get(format!("{url}?format=svg")).send().await.unwrap();
    assert_eq!(r.headers()["content-type"], "image/svg+xml");
    assert!(r.text().await.unwrap().starts_with("<?xml"));

    let r = c.get(format!("{url}?format=pdf")).send().await.unwrap();
    assert_eq!(r.status(), StatusCode::BAD_REQUEST);
}
