use std::env;
use std::path::Path;

// Debian ships cblas symbols inside libopenblas but no libcblas.so; give the
// linker a libcblas alias so `-lcblas` from netlib-src resolves.
fn main() {
    let out = env::var("OUT_DIR").unwrap();
    let alias = Path::new(&out).join("libcblas.so");
    if !alias.exists() {
        let _ = std::os::unix::fs::symlink("/usr/lib/x86_64-linux-gnu/libopenblas.so", &alias);
    }
    println!("cargo:rustc-link-search=native={out}");
}
