#![allow(dead_code)]

use std::path::PathBuf;

use mcdynamo_core::TorusGrid;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

pub fn load(name: &str, k: u16) -> TorusGrid {
    let text = std::fs::read_to_string(data_path(name)).expect("data file");
    TorusGrid::parse(&text, k).expect("valid grid")
}

pub fn set(g: &TorusGrid, cells: &[(usize, usize)]) -> mcdynamo_core::CellSet {
    mcdynamo_core::CellSet::from_positions(g.rows(), g.cols(), cells.iter().copied()).unwrap()
}
