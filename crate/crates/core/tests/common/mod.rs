#![allow(dead_code)]

pub mod props;

use std::path::PathBuf;

use gored::module_cat::Module;
use gored::presentation::{parse_presentation, Certified};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn load(name: &str) -> Certified {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    parse_presentation(&text).unwrap().certify(None).unwrap()
}

pub fn simple(c: &Certified, label: &str) -> Module {
    let v = c.algebra.vertex_index(label).unwrap();
    Module::simple(c.algebra.clone(), v).unwrap()
}

pub fn simples(c: &Certified) -> Vec<(String, Module)> {
    (0..c.algebra.num_vertices())
        .map(|v| (format!("S{}", c.algebra.vertex_labels()[v]), Module::simple(c.algebra.clone(), v).unwrap()))
        .collect()
}

pub const FIXTURES: [&str; 6] = ["ex46.alg", "ex47.alg", "ex47C.alg", "ex48.alg", "loop-x2.alg", "loop-x3.alg"];
