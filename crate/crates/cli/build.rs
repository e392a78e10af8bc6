//! Builds the portable core module embedded in exported bundles.
//!
//! Runs a nested cargo build of `helgraph-wasm` for `wasm32-unknown-unknown`
//! into a private target directory. When the target is unavailable, or
//! `HELGRAPH_SKIP_WASM` is set, the bundle ships without the module and
//! `export --wasm <file>` can supply one.

use std::env;
use std::path::PathBuf;
use std::process::Command;

fn main() {
    println!("cargo:rerun-if-env-changed=HELGRAPH_SKIP_WASM");
    println!("cargo:rerun-if-changed=../wasm/src");
    println!("cargo:rerun-if-changed=../wasm/Cargo.toml");
    println!("cargo:rerun-if-changed=../core/src");
    println!("cargo:rerun-if-changed=../core/Cargo.toml");

    let out = PathBuf::from(env::var_os("OUT_DIR").expect("cargo sets OUT_DIR"));
    let dest = out.join("helgraph_core.wasm");
    if env::var_os("HELGRAPH_SKIP_WASM").is_some() {
        skip(&dest, "HELGRAPH_SKIP_WASM is set");
        return;
    }
    let manifest = PathBuf::from(env::var_os("CARGO_MANIFEST_DIR").expect("cargo sets it"))
        .join("../wasm/Cargo.toml");
    let target_dir = out.join("wasm-target");
    let cargo = env::var_os("CARGO").unwrap_or_else(|| "cargo".into());

    let mut cmd = Command::new(cargo);
    cmd.args(["build", "--release", "--target", "wasm32-unknown-unknown", "--manifest-path"])
        .arg(&manifest)
        .arg("--target-dir")
        .arg(&target_dir);
    // Settings of the outer build must not leak into the nested one.
    for (key, _) in env::vars_os() {
        let key = key.to_string_lossy();
        let outer_cargo = key.starts_with("CARGO_") && key != "CARGO_HOME";
        let outer_rust = key.starts_with("RUST") && !key.starts_with("RUSTUP_");
        if outer_cargo || outer_rust {
            cmd.env_remove(key.as_ref());
        }
    }
    match cmd.status() {
        Ok(s) if s.success() => {
            let built = target_dir.join("wasm32-unknown-unknown/release/helgraph_wasm.wasm");
            std::fs::copy(&built, &dest).expect("copy the built module");
        }
        Ok(s) => skip(&dest, &format!("nested build exited with {s}")),
        Err(e) => skip(&dest, &format!("could not run cargo: {e}")),
    }
}

fn skip(dest: &PathBuf, why: &str) {
    println!("cargo:warning=exported bundles will not include the core module ({why})");
    std::fs::write(dest, b"").expect("write placeholder");
}
