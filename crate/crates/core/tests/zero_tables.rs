use std::path::Path;

use mesoszeta::zeros::{cached_zeros, find_zeros, load_zero_table, save_zero_table, verify_table};
use mesoszeta::Error;

fn oracle() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/first_100_zeros.txt")
}

#[test]
fn oracle_file_ingests_and_verifies() {
    let table = load_zero_table(&oracle(), Some(236.6), None).unwrap();
    assert_eq!(table.len(), 100);
    assert!(table.precision() <= 1e-20);
    assert_eq!(verify_table(&table).unwrap(), 100);
    // a declared height beyond the data fails certification
    let tall = load_zero_table(&oracle(), Some(300.0), None).unwrap();
    assert!(matches!(verify_table(&tall), Err(Error::Certification { .. })));
}

#[test]
fn computed_matches_oracle() {
    let oracle = load_zero_table(&oracle(), Some(236.6), None).unwrap();
    let computed = find_zeros(10.0, 236.6, 1e-9).unwrap();
    assert_eq!(computed.len(), 100);
    for (a, b) in computed.ordinates().iter().zip(oracle.ordinates()) {
        assert!((a - b).abs() < 1e-8);
    }
}

#[test]
fn cache_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let first = cached_zeros(dir.path(), 300.0).unwrap();
    let file = dir.path().join("zeros_300.txt");
    let stamp = std::fs::metadata(&file).unwrap().modified().unwrap();
    let again = cached_zeros(dir.path(), 250.0).unwrap();
    assert_eq!(again.ordinates(), first.ordinates());
    assert_eq!(std::fs::metadata(&file).unwrap().modified().unwrap(), stamp);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    cached_zeros(dir.path(), 400.0).unwrap();
    assert!(dir.path().join("zeros_400.txt").exists());
}

#[test]
fn save_and_load_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let table = find_zeros(100.0, 200.0, 1e-9).unwrap();
    let path = dir.path().join("slice.txt");
    save_zero_table(&table, &path).unwrap();
    let back = load_zero_table(&path, None, None).unwrap();
    assert_eq!(back.ordinates(), table.ordinates());
    assert_eq!((back.lower(), back.height(), back.precision()), (100.0, 200.0, table.precision()));
    assert_eq!(verify_table(&back).unwrap(), 79);
}
