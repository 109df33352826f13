// Every chapter listed in SUMMARY.md must be compiled as doc-tests.

use std::path::Path;

#[test]
fn every_chapter_is_doc_tested() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../book/src");
    let summary = std::fs::read_to_string(root.join("SUMMARY.md")).unwrap();
    let lib = include_str!("../src/lib.rs");
    let mut chapters = 0;
    for line in summary.lines() {
        let Some(start) = line.find("](") else { continue };
        let file = &line[start + 2..line[start..].find(')').unwrap() + start];
        assert!(root.join(file).exists(), "{file} is listed but missing");
        assert!(
            lib.contains(&format!("book/src/{file}\")")),
            "{file} is not included in the book crate"
        );
        chapters += 1;
    }
    assert_eq!(
        chapters,
        lib.matches("include_str!").count(),
        "lib.rs includes a chapter not in SUMMARY.md"
    );
}
