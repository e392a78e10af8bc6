//! Command-line front end for helgraph: the HTTP session server and the
//! static bundle exporter.

pub mod export;
pub mod server;
