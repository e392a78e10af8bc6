use helgraph_core::interchange;
use helgraph_core::synthetic::{generate, SyntheticParams};
use helgraph_wasm::{hg_alloc, hg_call, hg_free, hg_open, hg_result_ptr};
use serde_json::Value;

fn send(f: unsafe extern "C" fn(*const u8, usize) -> u32, bytes: &[u8]) -> Value {
    let ptr = hg_alloc(bytes.len());
    unsafe {
        std::ptr::copy_nonoverlapping(bytes.as_ptr(), ptr, bytes.len());
        let n = f(ptr, bytes.len()) as usize;
        hg_free(ptr, bytes.len());
        let out = std::slice::from_raw_parts(hg_result_ptr(), n);
        serde_json::from_slice(out).unwrap()
    }
}

#[test]
fn call_before_open_is_an_error() {
    let v = send(hg_call, br#"{"op":"state"}"#);
    assert_eq!(v["error"]["kind"], "BadRequest");
}

#[test]
fn open_then_drive_the_session() {
    let g = generate(&SyntheticParams { project_count: 8, ..Default::default() }).unwrap();
    let meta = send(hg_open, &interchange::write(&g));
    assert_eq!(meta["kinds"]["project"], 8);

    let state = send(hg_call, br#"{"op":"state"}"#);
    assert_eq!(state["visible"].as_array().unwrap().len(), 9);

    let project = g.id_at(g.children(g.roots()[0])[0]).as_str().to_owned();
    let req = format!(r#"{{"op":"expand","id":"{project}"}}"#);
    let state = send(hg_call, req.as_bytes());
    assert!(state["visible"].as_array().unwrap().len() > 9);

    let layout = send(hg_call, br#"{"op":"layout"}"#);
    assert_eq!(layout["positions"].as_object().unwrap().len(), state["visible"].as_array().unwrap().len());

    let glyphs = send(hg_call, format!(r#"{{"op":"glyphs","ids":["{project}"]}}"#).as_bytes());
    assert_eq!(glyphs[&project]["iconId"], "project");

    let bad = send(hg_open, b"{not json");
    assert_eq!(bad["error"]["kind"], "BadRequest");
    // A failed open keeps the previous session.
    assert!(send(hg_call, br#"{"op":"meta"}"#).get("error").is_none());
}
