use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use helgraph::export::export_bundle;
use helgraph::server::{router, AppState, ServerOptions, DEFAULT_MAX_RATE};
use helgraph_core::config::EngineConfig;
use helgraph_core::synthetic::{generate, SyntheticParams};
use helgraph_core::{extractor, interchange, EntityGraph};

#[derive(Parser)]
#[command(name = "helgraph", version, about = "Interactive diagrams of codebases")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run an extractor over a source tree and save the graph.
    Analyze {
        source: PathBuf,
        /// Program that prints an interchange document for the source path.
        #[arg(long)]
        extractor: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write a synthetic codebase-shaped graph.
    Generate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        projects: u32,
        #[arg(long, default_value_t = 2)]
        namespace_depth: u32,
        #[arg(long, default_value_t = 4)]
        types_per_namespace: u32,
        #[arg(long, default_value_t = 5)]
        members_per_type: u32,
        #[arg(long, default_value_t = 0.02)]
        diagnostic_rate: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Serve the session API and viewer over local HTTP.
    Serve {
        graph: PathBuf,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// 0 picks a free port.
        #[arg(long, default_value_t = 7878)]
        port: u16,
        /// TOML configuration; `HELGRAPH_CONFIG` takes precedence.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Most layout snapshots streamed per second.
        #[arg(long, default_value_t = DEFAULT_MAX_RATE)]
        max_rate: f64,
    },
    /// Write a static bundle that runs without a server.
    Export {
        graph: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Core module to ship instead of the built-in one.
        #[arg(long)]
        wasm: Option<PathBuf>,
    },
}

fn read_graph(path: &Path) -> Result<EntityGraph> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    interchange::parse(&bytes).with_context(|| format!("parsing {}", path.display()))
}

fn write_graph(graph: &EntityGraph, path: &Path) -> Result<()> {
    std::fs::write(path, interchange::write(graph)).with_context(|| format!("writing {}", path.display()))
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Cmd::Analyze { source, extractor, output } => {
            let graph = extractor::extract(&extractor, &source)?;
            write_graph(&graph, &output)?;
            eprintln!("wrote {} entities to {}", graph.len(), output.display());
        }
        Cmd::Generate {
            seed,
            projects,
            namespace_depth,
            types_per_namespace,
            members_per_type,
            diagnostic_rate,
            output,
        } => {
            let params = SyntheticParams {
                seed,
                project_count: projects,
                namespace_depth,
                types_per_namespace,
                members_per_type,
                diagnostic_rate,
            };
            let graph = generate(&params)?;
            write_graph(&graph, &output)?;
            eprintln!("wrote {} entities to {}", graph.len(), output.display());
        }
        Cmd::Serve { graph, host, port, config, max_rate } => {
            if max_rate.is_nan() || max_rate <= 0.0 {
                bail!("--max-rate must be positive");
            }
            let g = read_graph(&graph)?;
            let engine = EngineConfig::discover(config.as_deref())?;
            let state = AppState::new(g, engine, ServerOptions { max_rate, config_path: config });
            serve(state, &host, port)?;
        }
        Cmd::Export { graph, output, config, wasm } => {
            let g = read_graph(&graph)?;
            let engine = EngineConfig::discover(config.as_deref())?;
            let module = match wasm {
                Some(p) => Some(std::fs::read(&p).with_context(|| format!("reading {}", p.display()))?),
                None => None,
            };
            let report = export_bundle(&g, &engine, &output, module.as_deref())?;
            if !report.core_module {
                eprintln!("warning: no core module available; pass --wasm to include one");
            }
            eprintln!("exported {} files to {}", report.files.len(), output.display());
        }
    }
    Ok(())
}

#[tokio::main]
async fn serve(state: AppState, host: &str, port: u16) -> Result<()> {
    let addr: SocketAddr = format!("{host}:{port}").parse().with_context(|| format!("bad address {host}:{port}"))?;
    let listener = tokio::net::TcpListener::bind(addr).await.with_context(|| format!("binding {addr}"))?;
    let bound = listener.local_addr()?;
    println!("listening on http://{bound}");
    std::io::stdout().flush()?;
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            tokio::signal::ctrl_c().await.ok();
        })
        .await?;
    Ok(())
}
