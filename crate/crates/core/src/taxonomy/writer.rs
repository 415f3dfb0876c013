//! Turtle-subset serialization of a [`Thesaurus`].
//!
//! The output parses back to a graph equal to the input: same ids, kinds,
//! edges and labels. Concepts are emitted in id order with a fixed predicate
//! order, so serialization is deterministic.

use alloc::string::String;
use alloc::vec::Vec;

use super::turtle::{
    DCTERMS_SUBJECT, EVS_DOMAIN, EVS_MICRO_THESAURUS, EVS_THESAURUS_CONCEPT, RDF_TYPE,
    SKOS_ALT_LABEL, SKOS_BROADER, SKOS_HAS_TOP_CONCEPT, SKOS_IN_SCHEME, SKOS_PREF_LABEL,
};
use super::{ConceptKind, Object, Thesaurus};

const PREFIXES: [(&str, &str); 5] = [
    ("rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"),
    ("skos", "http://www.w3.org/2004/02/skos/core#"),
    ("dcterms", "http://purl.org/dc/terms/"),
    ("ev", "http://eurovoc.europa.eu/"),
    ("evs", "http://eurovoc.europa.eu/schema#"),
];

fn is_local_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

fn compress(iri: &str) -> String {
    for (pfx, base) in PREFIXES {
        if let Some(local) = iri.strip_prefix(base) {
            if !local.is_empty() && local.chars().all(is_local_char) {
                let mut s = String::from(pfx);
                s.push(':');
                s.push_str(local);
                return s;
            }
        }
    }
    let mut s = String::from("<");
    s.push_str(iri);
    s.push('>');
    s
}

fn escape(value: &str) -> String {
    let mut s = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            '\\' => s.push_str("\\\\"),
            '"' => s.push_str("\\\""),
            '\n' => s.push_str("\\n"),
            '\t' => s.push_str("\\t"),
            '\r' => s.push_str("\\r"),
            other => s.push(other),
        }
    }
    s
}

fn literal(value: &str, lang: &str) -> String {
    let mut s = String::from("\"");
    s.push_str(&escape(value));
    s.push('"');
    if !lang.is_empty() {
        s.push('@');
        s.push_str(lang);
    }
    s
}

fn object(o: &Object) -> String {
    match o {
        Object::Iri(iri) => compress(iri),
        Object::Literal { value, lang } => literal(value, lang.as_deref().unwrap_or("")),
    }
}

/// Serializes the thesaurus to the Turtle subset accepted by
/// [`super::parse_turtle`].
pub fn serialize_turtle(th: &Thesaurus) -> String {
    let mut out = String::new();
    for (pfx, base) in PREFIXES {
        out.push_str("@prefix ");
        out.push_str(pfx);
        out.push_str(": <");
        out.push_str(base);
        out.push_str("> .\n");
    }
    for concept in th.concepts() {
        let mut pairs: Vec<(String, String)> = Vec::new();
        let type_iri = match concept.kind {
            ConceptKind::Domain => EVS_DOMAIN,
            ConceptKind::MicroThesaurus => EVS_MICRO_THESAURUS,
            ConceptKind::TopTerm | ConceptKind::Descriptor => EVS_THESAURUS_CONCEPT,
        };
        pairs.push((compress(RDF_TYPE), compress(type_iri)));
        for (lang, value) in &concept.pref_labels {
            pairs.push((compress(SKOS_PREF_LABEL), literal(value, lang)));
        }
        for (lang, values) in &concept.alt_labels {
            for value in values {
                pairs.push((compress(SKOS_ALT_LABEL), literal(value, lang)));
            }
        }
        for target in &concept.broader {
            pairs.push((compress(SKOS_BROADER), compress(target.as_str())));
        }
        for target in &concept.in_scheme {
            pairs.push((compress(SKOS_IN_SCHEME), compress(target.as_str())));
        }
        for target in &concept.has_top_concept {
            pairs.push((compress(SKOS_HAS_TOP_CONCEPT), compress(target.as_str())));
        }
        for target in &concept.subject {
            pairs.push((compress(DCTERMS_SUBJECT), compress(target.as_str())));
        }
        for (predicate, objects) in &concept.other {
            for o in objects {
                pairs.push((compress(predicate), object(o)));
            }
        }

        out.push('\n');
        out.push('<');
        out.push_str(concept.id.as_str());
        out.push_str(">\n");
        for (i, (p, o)) in pairs.iter().enumerate() {
            out.push_str("    ");
            out.push_str(p);
            out.push(' ');
            out.push_str(o);
            out.push_str(if i + 1 == pairs.len() { " .\n" } else { " ;\n" });
        }
    }
    out
}
