//! Shared fixtures and helpers for the CLI integration tests.

// Each test target uses its own subset of these helpers.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

/// The four-concept politics/parliament thesaurus sample: one domain, one
/// microthesaurus, one top term, one descriptor.
pub const MINI_EUROVOC_TTL: &str = r#"@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
@prefix skos: <http://www.w3.org/2004/02/skos/core#> .
@prefix dcterms: <http://purl.org/dc/terms/> .
@prefix ev: <http://eurovoc.europa.eu/> .
@prefix evs: <http://eurovoc.europa.eu/schema#> .

<http://eurovoc.europa.eu/100142>
    rdf:type evs:Domain ;
    skos:prefLabel "04 POLITICS"@en .

<http://eurovoc.europa.eu/100166>
    rdf:type evs:MicroThesaurus ;
    skos:prefLabel "0421 parliament"@en ;
    dcterms:subject ev:100142 ;
    skos:hasTopConcept ev:41 .

<http://eurovoc.europa.eu/41>
    rdf:type evs:ThesaurusConcept ;
    skos:prefLabel "powers of parliament"@en ;
    skos:inScheme ev:100166 .

<http://eurovoc.europa.eu/1599>
    rdf:type evs:ThesaurusConcept ;
    skos:prefLabel "legislative period"@en ;
    skos:inScheme ev:100166 ;
    skos:broader ev:41 .
"#;

/// A minimal JRC-Acquis style XML document.
pub fn jrc_xml(celex: &str, body: &str, codes: &[&str]) -> String {
    let class_codes: String = codes
        .iter()
        .map(|c| format!("    <classCode scheme=\"eurovoc\">{c}</classCode>\n"))
        .collect();
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <TEI.2 id=\"jrc{celex}-en\" n=\"{celex}\" lang=\"en\">\n\
         <teiHeader>\n  <profileDesc>\n   <textClass>\n{class_codes}   </textClass>\n  </profileDesc>\n</teiHeader>\n\
         <text>\n <body>\n  <div type=\"body\">\n   <p n=\"1\">{body}</p>\n  </div>\n </body>\n</text>\n\
         </TEI.2>\n"
    )
}

/// Writes a small JRC fixture directory; ids are `d1`, `d2`, `d3`.
pub fn write_jrc_fixture(dir: &Path) {
    let files = [
        ("d1.xml", jrc_xml("31979D0501", "council decision one", &["1599"])),
        ("d2.xml", jrc_xml("31979D0502", "council regulation two", &["1599", "41"])),
        ("d3.xml", jrc_xml("31979D0503", "parliament report three", &["41"])),
    ];
    for (name, content) in files {
        std::fs::write(dir.join(name), content).unwrap();
    }
}

pub fn lmtc_bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_lmtc"))
}

/// Runs the binary with `--out-dir out_dir` appended.
pub fn run_lmtc(args: &[&str], out_dir: &Path) -> Output {
    Command::new(lmtc_bin())
        .args(args)
        .arg("--out-dir")
        .arg(out_dir)
        .output()
        .expect("binary runs")
}

pub fn assert_success(output: &Output) {
    assert!(
        output.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

pub fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}
