//! The EuroVoc concept graph: parsing, hierarchy queries, and label-set
//! reduction.
//!
//! EuroVoc organizes its concepts in four levels. Domains sit at the top,
//! each domain groups microthesauri (`dcterms:subject` points from a
//! microthesaurus to its domain), microthesauri contain top terms and
//! descriptors (`skos:inScheme`), and descriptors hang under top terms via
//! `skos:broader`. Documents are labeled with descriptors; replacing those
//! labels with the top terms, microthesauri or domains they belong to yields
//! coarser label sets.

mod turtle;
mod writer;

pub use turtle::{parse_turtle, TurtleError};
pub use writer::serialize_turtle;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

/// An EuroVoc concept identifier: the expanded, absolute IRI.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConceptId(String);

const EUROVOC_BASE: &str = "http://eurovoc.europa.eu/";

impl ConceptId {
    /// Wraps an absolute IRI. The IRI must have a scheme and contain no
    /// whitespace or angle brackets.
    pub fn new(iri: impl Into<String>) -> Result<Self, TaxonomyError> {
        let iri = iri.into();
        if iri.is_empty() {
            return Err(TaxonomyError::InvalidIri(iri, "empty IRI"));
        }
        if iri
            .chars()
            .any(|c| c.is_whitespace() || c.is_control() || matches!(c, '<' | '>' | '"'))
        {
            return Err(TaxonomyError::InvalidIri(iri, "forbidden character"));
        }
        let scheme_ok = match iri.find(':') {
            Some(pos) if pos > 0 => {
                let scheme = &iri[..pos];
                scheme.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                    && scheme
                        .chars()
                        .all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
            }
            _ => false,
        };
        if !scheme_ok {
            return Err(TaxonomyError::InvalidIri(iri, "missing or invalid scheme"));
        }
        Ok(ConceptId(iri))
    }

    /// Builds the IRI for a numeric EuroVoc code, e.g. `1599` →
    /// `http://eurovoc.europa.eu/1599`.
    pub fn eurovoc(code: &str) -> Self {
        let mut iri = String::from(EUROVOC_BASE);
        iri.push_str(code);
        ConceptId(iri)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ConceptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Where a concept sits in the EuroVoc hierarchy.
///
/// Domains and microthesauri carry explicit `rdf:type`s. A
/// `evs:ThesaurusConcept` is a top term when it is the object of a
/// `skos:hasTopConcept` edge or has no `skos:broader` edge; otherwise it is a
/// descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConceptKind {
    Domain,
    MicroThesaurus,
    TopTerm,
    Descriptor,
}

impl fmt::Display for ConceptKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConceptKind::Domain => "domain",
            ConceptKind::MicroThesaurus => "microthesaurus",
            ConceptKind::TopTerm => "top term",
            ConceptKind::Descriptor => "descriptor",
        };
        f.write_str(s)
    }
}

/// The label-set granularity: descriptors (as annotated), top terms,
/// microthesauri, or domains. Ordered from most specific to most general.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LabelLevel {
    #[serde(rename = "DE")]
    De,
    #[serde(rename = "TT")]
    Tt,
    #[serde(rename = "MT")]
    Mt,
    #[serde(rename = "DO")]
    Do,
}

impl LabelLevel {
    pub const ALL: [LabelLevel; 4] = [LabelLevel::De, LabelLevel::Tt, LabelLevel::Mt, LabelLevel::Do];

    pub fn as_str(self) -> &'static str {
        match self {
            LabelLevel::De => "DE",
            LabelLevel::Tt => "TT",
            LabelLevel::Mt => "MT",
            LabelLevel::Do => "DO",
        }
    }

    /// Case-insensitive parse of `DE`/`TT`/`MT`/`DO`.
    pub fn parse(s: &str) -> Option<LabelLevel> {
        match s.to_ascii_uppercase().as_str() {
            "DE" => Some(LabelLevel::De),
            "TT" => Some(LabelLevel::Tt),
            "MT" => Some(LabelLevel::Mt),
            "DO" => Some(LabelLevel::Do),
            _ => None,
        }
    }
}

impl fmt::Display for LabelLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An object position in a statement: an IRI or a (possibly language-tagged)
/// string literal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Object {
    Iri(String),
    Literal { value: String, lang: Option<String> },
}

/// One node of the concept graph with its labels and outgoing edges.
///
/// Language tags key the label maps; the empty string stands for an untagged
/// literal. `other` holds statements with unrecognized predicates; they
/// survive a parse/serialize round trip but no query looks at them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Concept {
    pub id: ConceptId,
    pub kind: ConceptKind,
    pub pref_labels: BTreeMap<String, String>,
    pub alt_labels: BTreeMap<String, Vec<String>>,
    pub broader: BTreeSet<ConceptId>,
    pub in_scheme: BTreeSet<ConceptId>,
    pub subject: BTreeSet<ConceptId>,
    pub has_top_concept: BTreeSet<ConceptId>,
    pub other: BTreeMap<String, Vec<Object>>,
}

impl Concept {
    pub(crate) fn new(id: ConceptId, kind: ConceptKind) -> Self {
        Concept {
            id,
            kind,
            pref_labels: BTreeMap::new(),
            alt_labels: BTreeMap::new(),
            broader: BTreeSet::new(),
            in_scheme: BTreeSet::new(),
            subject: BTreeSet::new(),
            has_top_concept: BTreeSet::new(),
            other: BTreeMap::new(),
        }
    }

    pub fn pref_label(&self, lang: &str) -> Option<&str> {
        self.pref_labels.get(lang).map(String::as_str)
    }
}

/// Concept counts per hierarchy level.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KindCounts {
    pub domains: usize,
    pub micro_thesauri: usize,
    pub top_terms: usize,
    pub descriptors: usize,
}

/// The edge predicates a [`ValidationFinding`] can point at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgePredicate {
    Broader,
    InScheme,
    Subject,
    HasTopConcept,
}

impl fmt::Display for EdgePredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EdgePredicate::Broader => "skos:broader",
            EdgePredicate::InScheme => "skos:inScheme",
            EdgePredicate::Subject => "dcterms:subject",
            EdgePredicate::HasTopConcept => "skos:hasTopConcept",
        };
        f.write_str(s)
    }
}

/// A single well-formedness violation found by [`Thesaurus::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationFinding {
    /// An edge whose target is not a concept of the thesaurus.
    DanglingEdge {
        from: ConceptId,
        predicate: EdgePredicate,
        to: ConceptId,
    },
    /// A `skos:broader` edge pointing at a domain.
    BroaderToDomain { from: ConceptId, to: ConceptId },
    /// A microthesaurus with no `dcterms:subject` edge resolving to a domain.
    MicroThesaurusWithoutDomain(ConceptId),
    /// A descriptor whose broader closure reaches no microthesaurus.
    DescriptorWithoutMicrothesaurus(ConceptId),
    /// A top term that is not `skos:inScheme` of any microthesaurus.
    TopTermNotInScheme(ConceptId),
}

impl fmt::Display for ValidationFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationFinding::DanglingEdge { from, predicate, to } => {
                write!(f, "dangling edge: {from} --{predicate}--> {to}")
            }
            ValidationFinding::BroaderToDomain { from, to } => {
                write!(f, "broader edge into a domain: {from} --skos:broader--> {to}")
            }
            ValidationFinding::MicroThesaurusWithoutDomain(id) => {
                write!(f, "microthesaurus without a domain: {id}")
            }
            ValidationFinding::DescriptorWithoutMicrothesaurus(id) => {
                write!(f, "descriptor with empty in-scheme closure: {id}")
            }
            ValidationFinding::TopTermNotInScheme(id) => {
                write!(f, "top term not in scheme of any microthesaurus: {id}")
            }
        }
    }
}

/// Outcome of [`Thesaurus::validate`]: per-kind counts plus every violation.
/// An empty findings list means the thesaurus is well-formed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub counts: KindCounts,
    pub findings: Vec<ValidationFinding>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Whether reductions walk the full `skos:broader` closure or only direct
/// links. Closure is the default: it also resolves descriptors that lack a
/// direct `skos:inScheme` edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionMode {
    Closure,
    DirectOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TaxonomyError {
    #[error("invalid IRI `{0}`: {1}")]
    InvalidIri(String, &'static str),
    #[error("unknown concept `{0}`")]
    UnknownConcept(ConceptId),
    #[error("`{id}` is a {kind}; reductions start from descriptors or top terms")]
    NotALabelConcept { id: ConceptId, kind: ConceptKind },
    #[error("no {level} concepts reachable from `{id}`")]
    EmptyReduction { id: ConceptId, level: LabelLevel },
}

/// The parsed concept graph. Immutable after construction; reverse indexes
/// are exact inverses of the forward edges.
#[derive(Clone, Debug, Default)]
pub struct Thesaurus {
    concepts: BTreeMap<ConceptId, Concept>,
    narrower: BTreeMap<ConceptId, BTreeSet<ConceptId>>,
    scheme_members: BTreeMap<ConceptId, BTreeSet<ConceptId>>,
    subject_of: BTreeMap<ConceptId, BTreeSet<ConceptId>>,
}

impl PartialEq for Thesaurus {
    fn eq(&self, other: &Self) -> bool {
        // Indexes are derived, so concept equality is graph equality.
        self.concepts == other.concepts
    }
}

impl Eq for Thesaurus {}

impl Thesaurus {
    pub(crate) fn from_concepts(concepts: BTreeMap<ConceptId, Concept>) -> Self {
        let mut narrower: BTreeMap<ConceptId, BTreeSet<ConceptId>> = BTreeMap::new();
        let mut scheme_members: BTreeMap<ConceptId, BTreeSet<ConceptId>> = BTreeMap::new();
        let mut subject_of: BTreeMap<ConceptId, BTreeSet<ConceptId>> = BTreeMap::new();
        for concept in concepts.values() {
            for target in &concept.broader {
                narrower.entry(target.clone()).or_default().insert(concept.id.clone());
            }
            for target in &concept.in_scheme {
                scheme_members.entry(target.clone()).or_default().insert(concept.id.clone());
            }
            for target in &concept.subject {
                subject_of.entry(target.clone()).or_default().insert(concept.id.clone());
            }
        }
        Thesaurus { concepts, narrower, scheme_members, subject_of }
    }

    pub fn get(&self, id: &ConceptId) -> Option<&Concept> {
        self.concepts.get(id)
    }

    pub fn contains(&self, id: &ConceptId) -> bool {
        self.concepts.contains_key(id)
    }

    pub fn concepts(&self) -> impl Iterator<Item = &Concept> {
        self.concepts.values()
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    /// Concepts with a `skos:broader` edge to `id`.
    pub fn narrower_of(&self, id: &ConceptId) -> impl Iterator<Item = &ConceptId> {
        self.narrower.get(id).into_iter().flatten()
    }

    /// Concepts that are `skos:inScheme` of `id`.
    pub fn scheme_members_of(&self, id: &ConceptId) -> impl Iterator<Item = &ConceptId> {
        self.scheme_members.get(id).into_iter().flatten()
    }

    /// Microthesauri whose `dcterms:subject` is `id`.
    pub fn subjects_pointing_at(&self, id: &ConceptId) -> impl Iterator<Item = &ConceptId> {
        self.subject_of.get(id).into_iter().flatten()
    }

    pub fn kind_counts(&self) -> KindCounts {
        let mut counts = KindCounts::default();
        for c in self.concepts.values() {
            match c.kind {
                ConceptKind::Domain => counts.domains += 1,
                ConceptKind::MicroThesaurus => counts.micro_thesauri += 1,
                ConceptKind::TopTerm => counts.top_terms += 1,
                ConceptKind::Descriptor => counts.descriptors += 1,
            }
        }
        counts
    }

    /// Reflexive-transitive closure of `skos:broader`, skipping targets that
    /// do not resolve.
    fn broader_closure(&self, start: &ConceptId) -> BTreeSet<ConceptId> {
        let mut seen: BTreeSet<ConceptId> = BTreeSet::new();
        let mut stack: Vec<ConceptId> = alloc::vec![start.clone()];
        while let Some(id) = stack.pop() {
            if !seen.insert(id.clone()) {
                continue;
            }
            if let Some(c) = self.concepts.get(&id) {
                for parent in &c.broader {
                    if !seen.contains(parent) {
                        stack.push(parent.clone());
                    }
                }
            }
        }
        seen
    }

    fn label_concept(&self, id: &ConceptId) -> Result<&Concept, TaxonomyError> {
        let c = self
            .concepts
            .get(id)
            .ok_or_else(|| TaxonomyError::UnknownConcept(id.clone()))?;
        match c.kind {
            ConceptKind::Descriptor | ConceptKind::TopTerm => Ok(c),
            kind => Err(TaxonomyError::NotALabelConcept { id: id.clone(), kind }),
        }
    }

    /// Top terms reachable from `id` through `skos:broader`. A top term maps
    /// to itself. Empty results signal a hierarchy gap and are an error.
    pub fn to_top_terms(
        &self,
        id: &ConceptId,
        mode: ReductionMode,
    ) -> Result<BTreeSet<ConceptId>, TaxonomyError> {
        let c = self.label_concept(id)?;
        let candidates: BTreeSet<ConceptId> = match mode {
            ReductionMode::Closure => self.broader_closure(id),
            ReductionMode::DirectOnly => {
                let mut s: BTreeSet<ConceptId> = c.broader.clone();
                s.insert(id.clone());
                s
            }
        };
        let out: BTreeSet<ConceptId> = candidates
            .into_iter()
            .filter(|cid| {
                self.concepts
                    .get(cid)
                    .is_some_and(|c| c.kind == ConceptKind::TopTerm)
            })
            .collect();
        if out.is_empty() {
            return Err(TaxonomyError::EmptyReduction { id: id.clone(), level: LabelLevel::Tt });
        }
        Ok(out)
    }

    /// Microthesauri of `id`: the union of `skos:inScheme` targets over `id`
    /// and (in closure mode) all its broader ancestors.
    pub fn to_microthesauri(
        &self,
        id: &ConceptId,
        mode: ReductionMode,
    ) -> Result<BTreeSet<ConceptId>, TaxonomyError> {
        let c = self.label_concept(id)?;
        let sources: BTreeSet<ConceptId> = match mode {
            ReductionMode::Closure => self.broader_closure(id),
            ReductionMode::DirectOnly => core::iter::once(id.clone()).collect(),
        };
        let _ = c;
        let mut out: BTreeSet<ConceptId> = BTreeSet::new();
        for source in &sources {
            if let Some(concept) = self.concepts.get(source) {
                for scheme in &concept.in_scheme {
                    if self
                        .concepts
                        .get(scheme)
                        .is_some_and(|c| c.kind == ConceptKind::MicroThesaurus)
                    {
                        out.insert(scheme.clone());
                    }
                }
            }
        }
        if out.is_empty() {
            return Err(TaxonomyError::EmptyReduction { id: id.clone(), level: LabelLevel::Mt });
        }
        Ok(out)
    }

    /// Domains of `id`: the union of `dcterms:subject` targets over its
    /// microthesauri.
    pub fn to_domains(
        &self,
        id: &ConceptId,
        mode: ReductionMode,
    ) -> Result<BTreeSet<ConceptId>, TaxonomyError> {
        let mts = self.to_microthesauri(id, mode)?;
        let mut out: BTreeSet<ConceptId> = BTreeSet::new();
        for mt in &mts {
            if let Some(concept) = self.concepts.get(mt) {
                for domain in &concept.subject {
                    if self
                        .concepts
                        .get(domain)
                        .is_some_and(|c| c.kind == ConceptKind::Domain)
                    {
                        out.insert(domain.clone());
                    }
                }
            }
        }
        if out.is_empty() {
            return Err(TaxonomyError::EmptyReduction { id: id.clone(), level: LabelLevel::Do });
        }
        Ok(out)
    }

    /// Replaces a label set with its reduction at `level`. `DE` is the
    /// identity; other levels take the union of per-label reductions.
    pub fn reduce_labels(
        &self,
        labels: &BTreeSet<ConceptId>,
        level: LabelLevel,
        mode: ReductionMode,
    ) -> Result<BTreeSet<ConceptId>, TaxonomyError> {
        if level == LabelLevel::De {
            return Ok(labels.clone());
        }
        let mut out: BTreeSet<ConceptId> = BTreeSet::new();
        for label in labels {
            let reduced = match level {
                LabelLevel::De => unreachable!(),
                LabelLevel::Tt => self.to_top_terms(label, mode)?,
                LabelLevel::Mt => self.to_microthesauri(label, mode)?,
                LabelLevel::Do => self.to_domains(label, mode)?,
            };
            out.extend(reduced);
        }
        Ok(out)
    }

    /// Like [`Thesaurus::reduce_labels`] but drops labels that cannot be
    /// resolved instead of failing, returning them alongside the result.
    pub fn reduce_labels_lossy(
        &self,
        labels: &BTreeSet<ConceptId>,
        level: LabelLevel,
        mode: ReductionMode,
    ) -> (BTreeSet<ConceptId>, Vec<ConceptId>) {
        if level == LabelLevel::De {
            return (labels.clone(), Vec::new());
        }
        let mut out: BTreeSet<ConceptId> = BTreeSet::new();
        let mut dropped: Vec<ConceptId> = Vec::new();
        for label in labels {
            let reduced = match level {
                LabelLevel::De => unreachable!(),
                LabelLevel::Tt => self.to_top_terms(label, mode),
                LabelLevel::Mt => self.to_microthesauri(label, mode),
                LabelLevel::Do => self.to_domains(label, mode),
            };
            match reduced {
                Ok(set) => out.extend(set),
                Err(_) => dropped.push(label.clone()),
            }
        }
        (out, dropped)
    }

    /// Checks structural well-formedness and returns per-kind counts plus all
    /// findings. Never fails; an empty findings list means well-formed.
    pub fn validate(&self) -> ValidationReport {
        let mut findings: Vec<ValidationFinding> = Vec::new();
        for concept in self.concepts.values() {
            let edge_sets: [(EdgePredicate, &BTreeSet<ConceptId>); 4] = [
                (EdgePredicate::Broader, &concept.broader),
                (EdgePredicate::InScheme, &concept.in_scheme),
                (EdgePredicate::Subject, &concept.subject),
                (EdgePredicate::HasTopConcept, &concept.has_top_concept),
            ];
            for (predicate, targets) in edge_sets {
                for target in targets {
                    if !self.concepts.contains_key(target) {
                        findings.push(ValidationFinding::DanglingEdge {
                            from: concept.id.clone(),
                            predicate,
                            to: target.clone(),
                        });
                    }
                }
            }
            for target in &concept.broader {
                if self
                    .concepts
                    .get(target)
                    .is_some_and(|c| c.kind == ConceptKind::Domain)
                {
                    findings.push(ValidationFinding::BroaderToDomain {
                        from: concept.id.clone(),
                        to: target.clone(),
                    });
                }
            }
            match concept.kind {
                ConceptKind::MicroThesaurus => {
                    let has_domain = concept.subject.iter().any(|d| {
                        self.concepts.get(d).is_some_and(|c| c.kind == ConceptKind::Domain)
                    });
                    if !has_domain {
                        findings.push(ValidationFinding::MicroThesaurusWithoutDomain(
                            concept.id.clone(),
                        ));
                    }
                }
                ConceptKind::Descriptor => {
                    if self.to_microthesauri(&concept.id, ReductionMode::Closure).is_err() {
                        findings.push(ValidationFinding::DescriptorWithoutMicrothesaurus(
                            concept.id.clone(),
                        ));
                    }
                }
                ConceptKind::TopTerm => {
                    let in_mt = concept.in_scheme.iter().any(|s| {
                        self.concepts
                            .get(s)
                            .is_some_and(|c| c.kind == ConceptKind::MicroThesaurus)
                    });
                    if !in_mt {
                        findings.push(ValidationFinding::TopTermNotInScheme(concept.id.clone()));
                    }
                }
                ConceptKind::Domain => {}
            }
        }
        ValidationReport { counts: self.kind_counts(), findings }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    // The four-concept politics/parliament sample: one domain, one
    // microthesaurus, one top term, one descriptor.
    pub(crate) const MINI_EUROVOC: &str = r#"
@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
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

    fn ev(code: &str) -> ConceptId {
        ConceptId::eurovoc(code)
    }

    fn mini() -> Thesaurus {
        parse_turtle(MINI_EUROVOC).unwrap()
    }

    #[test]
    fn concept_id_rejects_bad_iris() {
        assert!(ConceptId::new("").is_err());
        assert!(ConceptId::new("no-scheme").is_err());
        assert!(ConceptId::new("http://a b").is_err());
        assert!(ConceptId::new("http://eurovoc.europa.eu/1599").is_ok());
    }

    #[test]
    fn label_levels_order_by_generality() {
        assert!(LabelLevel::De < LabelLevel::Tt);
        assert!(LabelLevel::Tt < LabelLevel::Mt);
        assert!(LabelLevel::Mt < LabelLevel::Do);
        assert_eq!(LabelLevel::parse("mt"), Some(LabelLevel::Mt));
        assert_eq!(LabelLevel::parse("XX"), None);
    }

    #[test]
    fn mini_eurovoc_kinds_and_labels() {
        let th = mini();
        assert_eq!(th.len(), 4);
        assert_eq!(th.get(&ev("100142")).unwrap().kind, ConceptKind::Domain);
        assert_eq!(th.get(&ev("100166")).unwrap().kind, ConceptKind::MicroThesaurus);
        assert_eq!(th.get(&ev("41")).unwrap().kind, ConceptKind::TopTerm);
        let descriptor = th.get(&ev("1599")).unwrap();
        assert_eq!(descriptor.kind, ConceptKind::Descriptor);
        assert_eq!(descriptor.pref_label("en"), Some("legislative period"));
        assert_eq!(descriptor.broader, BTreeSet::from([ev("41")]));
        assert_eq!(descriptor.in_scheme, BTreeSet::from([ev("100166")]));
        assert_eq!(th.get(&ev("100142")).unwrap().pref_label("en"), Some("04 POLITICS"));
    }

    #[test]
    fn mini_eurovoc_validates_clean() {
        let report = mini().validate();
        assert!(report.is_clean(), "unexpected findings: {:?}", report.findings);
        assert_eq!(
            report.counts,
            KindCounts { domains: 1, micro_thesauri: 1, top_terms: 1, descriptors: 1 }
        );
    }

    #[test]
    fn descriptor_reduces_to_each_level() {
        let th = mini();
        let d = ev("1599");
        assert_eq!(
            th.to_top_terms(&d, ReductionMode::Closure).unwrap(),
            BTreeSet::from([ev("41")])
        );
        assert_eq!(
            th.to_microthesauri(&d, ReductionMode::Closure).unwrap(),
            BTreeSet::from([ev("100166")])
        );
        assert_eq!(
            th.to_domains(&d, ReductionMode::Closure).unwrap(),
            BTreeSet::from([ev("100142")])
        );
    }

    #[test]
    fn top_term_maps_to_itself() {
        let th = mini();
        assert_eq!(
            th.to_top_terms(&ev("41"), ReductionMode::Closure).unwrap(),
            BTreeSet::from([ev("41")])
        );
        assert_eq!(
            th.to_microthesauri(&ev("41"), ReductionMode::Closure).unwrap(),
            BTreeSet::from([ev("100166")])
        );
    }

    #[test]
    fn unknown_concept_is_an_error() {
        let th = mini();
        let missing = ev("999999");
        assert!(matches!(
            th.to_top_terms(&missing, ReductionMode::Closure),
            Err(TaxonomyError::UnknownConcept(_))
        ));
    }

    #[test]
    fn reduction_rejects_domain_input() {
        let th = mini();
        assert!(matches!(
            th.to_top_terms(&ev("100142"), ReductionMode::Closure),
            Err(TaxonomyError::NotALabelConcept { .. })
        ));
    }

    #[test]
    fn reduce_labels_de_is_identity() {
        let th = mini();
        let labels = BTreeSet::from([ev("1599"), ev("41")]);
        assert_eq!(
            th.reduce_labels(&labels, LabelLevel::De, ReductionMode::Closure).unwrap(),
            labels
        );
    }

    #[test]
    fn reduce_labels_collapses_duplicates() {
        let th = mini();
        let labels = BTreeSet::from([ev("1599"), ev("41")]);
        assert_eq!(
            th.reduce_labels(&labels, LabelLevel::Mt, ReductionMode::Closure).unwrap(),
            BTreeSet::from([ev("100166")])
        );
        assert_eq!(
            th.reduce_labels(&labels, LabelLevel::Tt, ReductionMode::Closure).unwrap(),
            BTreeSet::from([ev("41")])
        );
        assert_eq!(
            th.reduce_labels(&labels, LabelLevel::Do, ReductionMode::Closure).unwrap(),
            BTreeSet::from([ev("100142")])
        );
    }

    #[test]
    fn reduce_labels_lossy_drops_unknown() {
        let th = mini();
        let labels = BTreeSet::from([ev("1599"), ev("424242")]);
        let (reduced, dropped) =
            th.reduce_labels_lossy(&labels, LabelLevel::Tt, ReductionMode::Closure);
        assert_eq!(reduced, BTreeSet::from([ev("41")]));
        assert_eq!(dropped, vec![ev("424242")]);
    }

    // Two broader chains from one descriptor, reaching two top terms in two
    // microthesauri under two domains.
    const POLY: &str = r#"
@prefix skos: <http://www.w3.org/2004/02/skos/core#> .
@prefix dcterms: <http://purl.org/dc/terms/> .
@prefix ev: <http://eurovoc.europa.eu/> .
@prefix evs: <http://eurovoc.europa.eu/schema#> .

ev:d1 a evs:Domain .
ev:d2 a evs:Domain .
ev:m1 a evs:MicroThesaurus ; dcterms:subject ev:d1 ; skos:hasTopConcept ev:t1 .
ev:m2 a evs:MicroThesaurus ; dcterms:subject ev:d2 ; skos:hasTopConcept ev:t2 .
ev:t1 a evs:ThesaurusConcept ; skos:inScheme ev:m1 .
ev:t2 a evs:ThesaurusConcept ; skos:inScheme ev:m2 .
ev:mid a evs:ThesaurusConcept ; skos:broader ev:t2 ; skos:inScheme ev:m2 .
ev:x a evs:ThesaurusConcept ; skos:broader ev:t1 , ev:mid ; skos:inScheme ev:m1 .
"#;

    // Brute-force closure oracle: iterate edge expansion to a fixed point.
    fn closure_oracle(th: &Thesaurus, start: &ConceptId) -> BTreeSet<ConceptId> {
        let mut set = BTreeSet::from([start.clone()]);
        loop {
            let mut grew = false;
            for id in set.clone() {
                if let Some(c) = th.get(&id) {
                    for b in &c.broader {
                        grew |= set.insert(b.clone());
                    }
                }
            }
            if !grew {
                return set;
            }
        }
    }

    #[test]
    fn polyhierarchy_reaches_both_chains() {
        let th = parse_turtle(POLY).unwrap();
        let x = ev("x");
        assert_eq!(
            th.to_top_terms(&x, ReductionMode::Closure).unwrap(),
            BTreeSet::from([ev("t1"), ev("t2")])
        );
        assert_eq!(
            th.to_microthesauri(&x, ReductionMode::Closure).unwrap(),
            BTreeSet::from([ev("m1"), ev("m2")])
        );
        assert_eq!(
            th.to_domains(&x, ReductionMode::Closure).unwrap(),
            BTreeSet::from([ev("d1"), ev("d2")])
        );
        // Closure matches the brute-force fixed point.
        let oracle = closure_oracle(&th, &x);
        let tops: BTreeSet<ConceptId> = oracle
            .iter()
            .filter(|id| th.get(id).is_some_and(|c| c.kind == ConceptKind::TopTerm))
            .cloned()
            .collect();
        assert_eq!(th.to_top_terms(&x, ReductionMode::Closure).unwrap(), tops);
    }

    #[test]
    fn direct_only_mode_skips_ancestors() {
        let th = parse_turtle(POLY).unwrap();
        let x = ev("x");
        // Directly broader: t1 (a top term) and mid (not one).
        assert_eq!(
            th.to_top_terms(&x, ReductionMode::DirectOnly).unwrap(),
            BTreeSet::from([ev("t1")])
        );
        // Direct in-scheme only reaches m1.
        assert_eq!(
            th.to_microthesauri(&x, ReductionMode::DirectOnly).unwrap(),
            BTreeSet::from([ev("m1")])
        );
    }

    #[test]
    fn tt_reduction_can_grow_a_label_set() {
        // Polyhierarchy permits |TT labels| > |DE labels| for one document.
        let th = parse_turtle(POLY).unwrap();
        let labels = BTreeSet::from([ev("x")]);
        let tt = th.reduce_labels(&labels, LabelLevel::Tt, ReductionMode::Closure).unwrap();
        assert!(tt.len() > labels.len());
    }

    #[test]
    fn validate_reports_dangling_edge() {
        let ttl = r#"
@prefix skos: <http://www.w3.org/2004/02/skos/core#> .
@prefix ev: <http://eurovoc.europa.eu/> .
@prefix evs: <http://eurovoc.europa.eu/schema#> .
ev:m a evs:MicroThesaurus .
ev:d a evs:ThesaurusConcept ; skos:broader ev:gone ; skos:inScheme ev:m .
"#;
        let th = parse_turtle(ttl).unwrap();
        let report = th.validate();
        let dangling: Vec<_> = report
            .findings
            .iter()
            .filter(|f| matches!(f, ValidationFinding::DanglingEdge { .. }))
            .collect();
        assert_eq!(dangling.len(), 1);
    }

    #[test]
    fn validate_flags_microthesaurus_without_domain() {
        let ttl = r#"
@prefix evs: <http://eurovoc.europa.eu/schema#> .
@prefix ev: <http://eurovoc.europa.eu/> .
ev:m a evs:MicroThesaurus .
"#;
        let report = parse_turtle(ttl).unwrap().validate();
        assert!(report
            .findings
            .iter()
            .any(|f| matches!(f, ValidationFinding::MicroThesaurusWithoutDomain(_))));
    }

    #[test]
    fn validate_flags_broader_into_domain() {
        let ttl = r#"
@prefix skos: <http://www.w3.org/2004/02/skos/core#> .
@prefix evs: <http://eurovoc.europa.eu/schema#> .
@prefix ev: <http://eurovoc.europa.eu/> .
ev:d a evs:Domain .
ev:c a evs:ThesaurusConcept ; skos:broader ev:d .
"#;
        let report = parse_turtle(ttl).unwrap().validate();
        assert!(report
            .findings
            .iter()
            .any(|f| matches!(f, ValidationFinding::BroaderToDomain { .. })));
    }

    #[test]
    fn reduction_distributes_over_union() {
        let th = parse_turtle(POLY).unwrap();
        let s1 = BTreeSet::from([ev("x")]);
        let s2 = BTreeSet::from([ev("mid"), ev("t1")]);
        let union: BTreeSet<ConceptId> = s1.union(&s2).cloned().collect();
        for level in [LabelLevel::Tt, LabelLevel::Mt, LabelLevel::Do] {
            let left = th.reduce_labels(&union, level, ReductionMode::Closure).unwrap();
            let mut right = th.reduce_labels(&s1, level, ReductionMode::Closure).unwrap();
            right.extend(th.reduce_labels(&s2, level, ReductionMode::Closure).unwrap());
            assert_eq!(left, right, "level {level}");
        }
    }
}
