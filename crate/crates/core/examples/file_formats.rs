//! Matrix CSV (shortest round-trip floats, exact "p/q" rationals) and the JSON layouts of
//! vector systems, graphs and cut decompositions.

use std::error::Error;
use std::path::Path;

use elliptope4::frames::{simplex_etf, Graph};
use elliptope4::io::{
    cut_decomposition_from_json, cut_decomposition_to_json, export_matrix, export_rational_matrix, graph_from_json,
    graph_to_json, import_matrix, read_vector_system, write_vector_system, Format,
};
use elliptope4::pseudomoments::etf_degree4;
use elliptope4::separability::CutDecomposition;

pub struct Summary {
    pub exact_round_trip: bool,
    pub float_round_trip: bool,
    pub frame_round_trip: bool,
    pub json_round_trip: bool,
}

pub fn run_example(dir: &Path) -> Result<Summary, Box<dyn Error>> {
    let sys = simplex_etf(5)?;
    let y = etf_degree4(&sys, 1e-10)?;

    let exact_path = dir.join("y5.csv");
    export_rational_matrix(y.exact().ok_or("exact")?, &exact_path, Format::Csv)?;
    let exact_round_trip = import_matrix(&exact_path)?.exact() == y.exact();

    let float_path = dir.join("y5_float.csv");
    let noisy = y.matrix().scale(1.0 / 3.0);
    export_matrix(&noisy, &float_path, Format::Csv)?;
    let back = import_matrix(&float_path)?.to_dense();
    let float_round_trip = (0..noisy.rows())
        .all(|i| (0..noisy.cols()).all(|j| back[(i, j)].to_bits() == noisy[(i, j)].to_bits()));

    let frame_path = dir.join("simplex5.json");
    write_vector_system(&sys, &frame_path)?;
    let frame_round_trip = read_vector_system(&frame_path)? == sys;

    let graph = Graph::new(4, [(0, 1), (1, 2), (2, 3)])?;
    let dec = CutDecomposition::uniform(3);
    let json_round_trip = graph_from_json(&graph_to_json(&graph))? == graph
        && cut_decomposition_from_json(&cut_decomposition_to_json(&dec))? == dec;

    println!("exact CSV round trip: {exact_round_trip}");
    println!("float CSV round trip (bit-identical): {float_round_trip}");
    println!("vector system JSON round trip: {frame_round_trip}");
    println!("graph / cut decomposition JSON round trip: {json_round_trip}");
    println!("first row of {}: {}", exact_path.display(), std::fs::read_to_string(&exact_path)?.lines().next().unwrap_or(""));
    Ok(Summary { exact_round_trip, float_round_trip, frame_round_trip, json_round_trip })
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let dir = std::env::temp_dir().join("elliptope4-formats");
    std::fs::create_dir_all(&dir)?;
    run_example(&dir).map(|_| ())
}
