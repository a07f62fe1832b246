use std::path::PathBuf;

use tunnelcheck::golden;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("goldens")
}

#[test]
fn committed_corpus_matches_regeneration() {
    let diff = golden::corpus_diff(&corpus_dir()).unwrap();
    assert!(diff.is_empty(), "stale corpus files: {diff:?}; regenerate with `tunnelcheck goldens --write`");
}

#[test]
fn primary_paths_reproduce_goldens() {
    let checks = golden::verify_corpus(&corpus_dir()).unwrap();
    assert!(checks.len() > 300);
    let bad: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn regeneration_into_empty_dir_is_identical() {
    let dir = std::env::temp_dir().join(format!("tunnelcheck-goldens-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let names = golden::regenerate_goldens(&dir).unwrap();
    for n in &names {
        let fresh = std::fs::read(dir.join(n)).unwrap();
        let committed = std::fs::read(corpus_dir().join(n)).unwrap();
        assert_eq!(fresh, committed, "{n}");
    }
    assert!(golden::corpus_diff(&dir).unwrap().is_empty());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn corpus_records_carry_provenance_and_tolerance() {
    for f in golden::generate_corpus().unwrap() {
        let text = std::fs::read_to_string(corpus_dir().join(f.name)).unwrap();
        for r in golden::parse_corpus_csv(&text).unwrap() {
            assert!(r.tolerance > 0.0, "{}", r.case_id);
        }
    }
}
