//! Self-contained static bundles.
//!
//! ```text
//! index.html
//! assets/viewer.js, assets/viewer.css
//! data/graph.helgraph.json   canonical interchange document
//! data/config.json           engine configuration
//! core/helgraph_core.wasm    in-process core module
//! ```

use std::path::{Path, PathBuf};

use helgraph_core::config::EngineConfig;
use helgraph_core::{interchange, EntityGraph};
use thiserror::Error;

pub const INDEX_HTML: &str = include_str!("../assets/index.html");
pub const VIEWER_JS: &str = include_str!("../assets/viewer.js");
pub const VIEWER_CSS: &str = include_str!("../assets/viewer.css");

/// Core module built alongside this binary; empty if the build was skipped.
pub const CORE_MODULE: &[u8] = include_bytes!(concat!(env!("OUT_DIR"), "/helgraph_core.wasm"));

pub const DATA_FILE: &str = "data/graph.helgraph.json";
pub const CONFIG_FILE: &str = "data/config.json";
pub const CORE_FILE: &str = "core/helgraph_core.wasm";

#[derive(Debug, Error)]
#[error("cannot write {}: {source}", path.display())]
pub struct ExportError {
    pub path: PathBuf,
    #[source]
    pub source: std::io::Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExportReport {
    pub files: Vec<PathBuf>,
    pub core_module: bool,
}

/// Writes the bundle into `dir`, creating it if needed. Output is a pure
/// function of the inputs. `core_module` overrides the built-in module.
pub fn export_bundle(
    graph: &EntityGraph,
    config: &EngineConfig,
    dir: &Path,
    core_module: Option<&[u8]>,
) -> Result<ExportReport, ExportError> {
    let module = core_module.unwrap_or(CORE_MODULE);
    let config_json = serde_json::to_vec_pretty(config).expect("config serializes");
    let document = interchange::write(graph);
    let mut entries: Vec<(&str, &[u8])> = vec![
        ("index.html", INDEX_HTML.as_bytes()),
        ("assets/viewer.js", VIEWER_JS.as_bytes()),
        ("assets/viewer.css", VIEWER_CSS.as_bytes()),
        (DATA_FILE, &document),
        (CONFIG_FILE, &config_json),
    ];
    if !module.is_empty() {
        entries.push((CORE_FILE, module));
    }
    let mut files = Vec::with_capacity(entries.len());
    for (rel, bytes) in entries {
        let path = dir.join(rel);
        let io = |source| ExportError { path: path.clone(), source };
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(io)?;
        }
        std::fs::write(&path, bytes).map_err(io)?;
        files.push(PathBuf::from(rel));
    }
    Ok(ExportReport { files, core_module: !module.is_empty() })
}
