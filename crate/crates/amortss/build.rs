fn main() {
    // The QZ decomposition (LAPACKE_dgges) comes from the system LAPACK.
    println!("cargo:rustc-link-lib=dylib=lapacke");
    println!("cargo:rustc-link-lib=dylib=lapack");
    println!("cargo:rerun-if-changed=build.rs");
}
