use elliptope4::frames::{etf_28_7, simplex_etf, Graph};
use elliptope4::io::*;
use elliptope4::numkit::{ratio, DenseMatrix, RationalMatrix};
use elliptope4::pseudomoments::etf_degree4;
use elliptope4::separability::CutDecomposition;
use proptest::prelude::*;

#[test]
fn rational_gram_is_written_with_fraction_tokens() {
    let g = etf_28_7().exact_gram().unwrap().clone();
    let text = rational_to_csv(&g);
    let first: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    assert_eq!(first.len(), 28);
    assert_eq!(first[0], "1");
    assert!(first[1..].iter().all(|t| *t == "1/3" || *t == "-1/3"));
    match parse_matrix_csv(&text).unwrap() {
        MatrixData::Exact(back) => assert_eq!(back, g),
        MatrixData::Float(_) => panic!("fraction tokens should parse exactly"),
    }
}

#[test]
fn exact_and_float_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = etf_28_7().exact_gram().unwrap().clone();
    for (name, format) in [("g.csv", Format::Csv), ("g.json", Format::Json)] {
        let path = dir.path().join(name);
        export_rational_matrix(&g, &path, format).unwrap();
        assert_eq!(import_matrix(&path).unwrap().exact().unwrap(), &g);
    }

    let sys = simplex_etf(5).unwrap();
    let y = etf_degree4(&elliptope4::frames::VectorSystem::new(sys.synthesis().clone()), 1e-10).unwrap();
    let m = y.matrix().clone();
    for (name, format) in [("y.csv", Format::Csv), ("y.json", Format::Json)] {
        let path = dir.path().join(name);
        export_matrix(&m, &path, format).unwrap();
        let back = import_matrix(&path).unwrap().to_dense();
        assert!(back.as_slice().iter().zip(m.as_slice()).all(|(a, b)| a.to_bits() == b.to_bits()), "{name}");
    }
}

#[test]
fn empty_path_is_an_error() {
    let m = DenseMatrix::identity(2);
    assert!(export_matrix(&m, "", Format::Csv).is_err());
    assert!(export_rational_matrix(&RationalMatrix::identity(2), "", Format::Json).is_err());
    let dir = tempfile::tempdir().unwrap();
    assert!(export_matrix(&m, dir.path().join("missing/dir/m.csv"), Format::Csv).is_err());
    assert!(import_matrix(dir.path().join("nope.csv")).is_err());
}

#[test]
fn malformed_csv_is_rejected() {
    assert!(parse_matrix_csv("1,2\n3").is_err());
    assert!(parse_matrix_csv("1,x/2\n3,4").is_err());
    assert!(parse_matrix_csv("1,1/0").is_err());
    assert!(parse_matrix_csv("").is_err());
}

#[test]
fn csv_numeral_typing() {
    assert!(matches!(parse_matrix_csv("1,-1/4\n3/8,2").unwrap(), MatrixData::Exact(_)));
    assert!(matches!(parse_matrix_csv("1,0.5\n0.5,1").unwrap(), MatrixData::Float(_)));
    assert!(matches!(parse_matrix_csv("1,1e-3\n1e-3,1").unwrap(), MatrixData::Float(_)));
    let exact = parse_matrix_csv("1,-1/4").unwrap();
    assert_eq!(exact.exact().unwrap()[(0, 1)], ratio(-1, 4));
}

#[test]
fn vector_system_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("frame.json");
    let sys = etf_28_7();
    write_vector_system(&sys, &path).unwrap();
    let back = read_vector_system(&path).unwrap();
    assert_eq!(back.synthesis(), sys.synthesis());
    assert_eq!(back.exact_gram(), sys.exact_gram());
    let v = read_json(&path).unwrap();
    assert_eq!(v["N"], 28);
    assert_eq!(v["r"], 7);

    let plain = simplex_etf(4).unwrap();
    let p = vector_system_from_json(&vector_system_to_json(&plain)).unwrap();
    assert_eq!(p.synthesis(), plain.synthesis());

    assert!(vector_system_from_json(&serde_json::json!({"N": 3, "r": 1, "V": [[1.0, 1.0]]})).is_err());
}

#[test]
fn graph_and_decomposition_round_trip() {
    let g = Graph::new(4, [(0, 1), (2, 3), (1, 3)]).unwrap();
    let v = graph_to_json(&g);
    assert_eq!(graph_from_json(&v).unwrap(), g);

    let dec = CutDecomposition::uniform(3);
    let back = cut_decomposition_from_json(&cut_decomposition_to_json(&dec)).unwrap();
    assert_eq!(back, dec);
}

#[test]
fn sidecars() {
    assert_eq!(moments_sidecar(5)["indexing"], "pair-major");
    let w = witness_sidecar(5, 4);
    assert_eq!(witness_block_size(&w).unwrap(), 4);
    assert_eq!(sidecar_path(std::path::Path::new("out/Y.csv")), std::path::PathBuf::from("out/Y.json"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn float_csv_is_bit_exact(rows in 1usize..5, cols in 1usize..5, data in prop::collection::vec(any::<f64>().prop_filter("finite", |x| x.is_finite()), 25)) {
        let m = DenseMatrix::from_fn(rows, cols, |i, j| data[i * 5 + j]);
        let text = dense_to_csv(&m);
        let back = parse_matrix_csv(&text).unwrap().to_dense();
        prop_assert!(back.as_slice().iter().zip(m.as_slice()).all(|(a, b)| a.to_bits() == b.to_bits() || (*a == 0.0 && *b == 0.0)));
    }

    #[test]
    fn rational_csv_is_exact(p in prop::collection::vec(-1000i64..1000, 9), q in prop::collection::vec(1i64..50, 9)) {
        let m = RationalMatrix::from_fn(3, 3, |i, j| ratio(p[i * 3 + j], q[i * 3 + j]));
        let back = parse_matrix_csv(&rational_to_csv(&m)).unwrap();
        prop_assert_eq!(back.exact().unwrap(), &m);
    }
}
