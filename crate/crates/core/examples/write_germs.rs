//! Regenerate the checked-in germ files in their canonical byte form.
//!
//! Usage: cargo run -p garside-core --example write_germs [DIR]

use garside_core::germfile::{a2_germ_file, counterexample_germ_file};

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "germs".to_string());
    std::fs::create_dir_all(&dir).expect("create output directory");
    for (name, file) in [
        ("a2.germ", a2_germ_file()),
        ("counterexample.germ", counterexample_germ_file()),
    ] {
        let path = format!("{dir}/{name}");
        std::fs::write(&path, file.to_string_pretty()).expect("write germ file");
        println!("wrote {path}");
    }
}
