//! Fixtures shared by the benchmarks.

use std::path::PathBuf;

use brane_core::{Labeling, TilingFile, TorusQuiver};

pub fn tiling_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../tilings")
        .join(format!("{name}.tiling"))
}

/// Loads a bundled tiling with its labels.
pub fn load(name: &str) -> (TilingFile, TorusQuiver, Option<Labeling>) {
    let text = std::fs::read_to_string(tiling_path(name)).expect("bundled tiling");
    let file = TilingFile::parse(&text).expect("bundled tiling parses");
    let q = file.quiver().expect("bundled tiling resolves");
    let lab = file.labeling(&q).expect("bundled labels");
    (file, q, lab)
}
