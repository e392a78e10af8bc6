//! Portable core module for exported bundles.
//!
//! The viewer talks to it through a byte-buffer ABI: it allocates a buffer
//! with [`hg_alloc`], copies UTF-8 in, and calls [`hg_open`] with an
//! interchange document or [`hg_call`] with a JSON command (the same tagged
//! commands the HTTP server accepts). Both return the byte length of a JSON
//! response that stays readable at [`hg_result_ptr`] until the next call.

use std::cell::RefCell;
use std::sync::Arc;

use helgraph_core::api::{execute_json, ApiError, GraphMeta};
use helgraph_core::config::EngineConfig;
use helgraph_core::interchange;
use helgraph_core::session::DiagramSession;
use serde_json::Value;

/// One loaded graph and its session.
#[derive(Debug)]
pub struct Engine {
    session: DiagramSession,
}

impl Engine {
    pub fn open(document: &[u8], config: EngineConfig) -> Result<Self, String> {
        let graph = interchange::parse(document).map_err(|e| e.to_string())?;
        Ok(Self { session: DiagramSession::new(Arc::new(graph), config) })
    }

    pub fn meta(&self) -> GraphMeta {
        GraphMeta::of(self.session.graph())
    }

    pub fn call(&mut self, request: &str) -> Value {
        execute_json(&mut self.session, request)
    }

    pub fn session(&self) -> &DiagramSession {
        &self.session
    }
}

thread_local! {
    static ENGINE: RefCell<Option<Engine>> = const { RefCell::new(None) };
    static RESULT: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn publish(v: &Value) -> u32 {
    let bytes = serde_json::to_vec(v).expect("json values serialize");
    let len = bytes.len() as u32;
    RESULT.with(|r| *r.borrow_mut() = bytes);
    len
}

fn error(message: String) -> Value {
    ApiError::BadRequest(message).to_json()
}

/// # Safety
/// `ptr..ptr+len` must be a live allocation from [`hg_alloc`].
unsafe fn input<'a>(ptr: *const u8, len: usize) -> &'a [u8] {
    if len == 0 {
        &[]
    } else {
        std::slice::from_raw_parts(ptr, len)
    }
}

#[no_mangle]
pub extern "C" fn hg_alloc(len: usize) -> *mut u8 {
    let mut buf = Vec::<u8>::with_capacity(len.max(1));
    let ptr = buf.as_mut_ptr();
    std::mem::forget(buf);
    ptr
}

/// # Safety
/// `ptr` and `len` must come from one [`hg_alloc`] call.
#[no_mangle]
pub unsafe extern "C" fn hg_free(ptr: *mut u8, len: usize) {
    drop(Vec::from_raw_parts(ptr, 0, len.max(1)));
}

/// Loads an interchange document with the default configuration and
/// answers with the graph metadata.
///
/// # Safety
/// See [`input`].
#[no_mangle]
pub unsafe extern "C" fn hg_open(ptr: *const u8, len: usize) -> u32 {
    let doc = input(ptr, len);
    match Engine::open(doc, EngineConfig::default()) {
        Ok(engine) => {
            let meta = serde_json::to_value(engine.meta()).expect("meta serializes");
            ENGINE.with(|e| *e.borrow_mut() = Some(engine));
            publish(&meta)
        }
        Err(msg) => publish(&error(msg)),
    }
}

/// Executes one JSON command against the open session.
///
/// # Safety
/// See [`input`].
#[no_mangle]
pub unsafe extern "C" fn hg_call(ptr: *const u8, len: usize) -> u32 {
    let v = match std::str::from_utf8(input(ptr, len)) {
        Ok(req) => ENGINE.with(|e| match e.borrow_mut().as_mut() {
            Some(engine) => engine.call(req),
            None => error("no graph is open".into()),
        }),
        Err(e) => error(e.to_string()),
    };
    publish(&v)
}

#[no_mangle]
pub extern "C" fn hg_result_ptr() -> *const u8 {
    RESULT.with(|r| r.borrow().as_ptr())
}
