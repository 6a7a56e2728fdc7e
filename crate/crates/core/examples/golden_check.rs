//! Re-runs every stored result under `golden/` and reports drift, exactly as
//! `memcortex verify` does.

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/golden");
    let code = memcortex::cli::main_with_args(["memcortex", "verify", "--golden", dir]);
    std::process::exit(code);
}
