//! Parser for the Turtle subset used by EuroVoc dumps.
//!
//! Supported syntax: `@prefix` declarations, statements of the form
//! `subject predicate object (';' predicate object)* '.'` with `,`-separated
//! object lists, `<iri>` and `pfx:local` terms, `a` as an alias for
//! `rdf:type`, string literals with optional `@lang` tags, and `#` line
//! comments. Blank nodes, collections, numeric literals and multi-line
//! strings are out of scope.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Concept, ConceptId, ConceptKind, Object, Thesaurus};

pub(crate) const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub(crate) const SKOS_PREF_LABEL: &str = "http://www.w3.org/2004/02/skos/core#prefLabel";
pub(crate) const SKOS_ALT_LABEL: &str = "http://www.w3.org/2004/02/skos/core#altLabel";
pub(crate) const SKOS_BROADER: &str = "http://www.w3.org/2004/02/skos/core#broader";
pub(crate) const SKOS_IN_SCHEME: &str = "http://www.w3.org/2004/02/skos/core#inScheme";
pub(crate) const SKOS_HAS_TOP_CONCEPT: &str = "http://www.w3.org/2004/02/skos/core#hasTopConcept";
pub(crate) const DCTERMS_SUBJECT: &str = "http://purl.org/dc/terms/subject";

pub(crate) const EVS_DOMAIN: &str = "http://eurovoc.europa.eu/schema#Domain";
pub(crate) const EVS_MICRO_THESAURUS: &str = "http://eurovoc.europa.eu/schema#MicroThesaurus";
pub(crate) const EVS_THESAURUS_CONCEPT: &str = "http://eurovoc.europa.eu/schema#ThesaurusConcept";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TurtleError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: u32, col: u32, msg: String },
    #[error("line {line}, column {col}: undeclared prefix `{prefix}:`")]
    UndeclaredPrefix { line: u32, col: u32, prefix: String },
    #[error("conflicting rdf:type for `{subject}`: `{first}` vs `{second}`")]
    ConflictingType { subject: ConceptId, first: String, second: String },
}

fn syntax(line: u32, col: u32, msg: impl Into<String>) -> TurtleError {
    TurtleError::Syntax { line, col, msg: msg.into() }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    IriRef(String),
    Pname { prefix: String, local: String },
    Literal { value: String, lang: Option<String> },
    KwPrefix,
    KwA,
    Dot,
    Semicolon,
    Comma,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: u32,
    col: u32,
}

struct Lexer<'a> {
    rest: &'a str,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { rest: src, line: 1, col: 1 }
    }

    fn peek(&self) -> Option<char> {
        self.rest.chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.rest.chars().next()?;
        self.rest = &self.rest[c.len_utf8()..];
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn is_name_char(c: char) -> bool {
        c.is_alphanumeric() || c == '_' || c == '-'
    }

    fn read_name(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if Self::is_name_char(c) {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }

    fn tokens(mut self) -> Result<Vec<Token>, TurtleError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else { break };
            let tok = match c {
                '.' => {
                    self.bump();
                    Tok::Dot
                }
                ';' => {
                    self.bump();
                    Tok::Semicolon
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '<' => {
                    self.bump();
                    let mut iri = String::new();
                    loop {
                        match self.bump() {
                            Some('>') => break,
                            Some('\n') | None => {
                                return Err(syntax(line, col, "unterminated IRI reference"))
                            }
                            Some(ch) => iri.push(ch),
                        }
                    }
                    Tok::IriRef(iri)
                }
                '"' => {
                    self.bump();
                    let mut value = String::new();
                    loop {
                        match self.bump() {
                            Some('"') => break,
                            Some('\\') => match self.bump() {
                                Some('"') => value.push('"'),
                                Some('\\') => value.push('\\'),
                                Some('n') => value.push('\n'),
                                Some('t') => value.push('\t'),
                                Some('r') => value.push('\r'),
                                Some(other) => {
                                    return Err(syntax(
                                        self.line,
                                        self.col,
                                        format!("unsupported escape `\\{other}`"),
                                    ))
                                }
                                None => {
                                    return Err(syntax(line, col, "unterminated string literal"))
                                }
                            },
                            Some('\n') | None => {
                                return Err(syntax(
                                    line,
                                    col,
                                    "unterminated string literal (multi-line strings are unsupported)",
                                ))
                            }
                            Some(ch) => value.push(ch),
                        }
                    }
                    let lang = if self.peek() == Some('@') {
                        self.bump();
                        let tag = self.read_name();
                        if tag.is_empty() || !tag.chars().next().unwrap().is_ascii_alphabetic() {
                            return Err(syntax(self.line, self.col, "invalid language tag"));
                        }
                        Some(tag)
                    } else {
                        None
                    };
                    Tok::Literal { value, lang }
                }
                '@' => {
                    self.bump();
                    let word = self.read_name();
                    if word == "prefix" {
                        Tok::KwPrefix
                    } else {
                        return Err(syntax(line, col, format!("unsupported directive `@{word}`")));
                    }
                }
                ':' => {
                    self.bump();
                    let local = self.read_name();
                    Tok::Pname { prefix: String::new(), local }
                }
                c if Self::is_name_char(c) => {
                    let name = self.read_name();
                    if self.peek() == Some(':') {
                        self.bump();
                        let local = self.read_name();
                        Tok::Pname { prefix: name, local }
                    } else if name == "a" {
                        Tok::KwA
                    } else {
                        return Err(syntax(line, col, format!("unexpected token `{name}`")));
                    }
                }
                other => {
                    return Err(syntax(line, col, format!("unexpected character `{other}`")));
                }
            };
            out.push(Token { tok, line, col });
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
struct Triple {
    line: u32,
    col: u32,
    subject: ConceptId,
    predicate: String,
    object: Object,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    prefixes: BTreeMap<String, String>,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<Token, TurtleError> {
        match self.next() {
            Some(t) if &t.tok == want => Ok(t),
            Some(t) => Err(syntax(t.line, t.col, format!("expected {what}"))),
            None => Err(syntax(0, 0, format!("unexpected end of input, expected {what}"))),
        }
    }

    fn end_of_input(&self) -> (u32, u32) {
        self.tokens
            .last()
            .map(|t| (t.line, t.col))
            .unwrap_or((1, 1))
    }

    fn expand(&self, tok: &Token) -> Result<ConceptId, TurtleError> {
        match &tok.tok {
            Tok::IriRef(iri) => ConceptId::new(iri.clone())
                .map_err(|e| syntax(tok.line, tok.col, e.to_string())),
            Tok::Pname { prefix, local } => {
                let base = self.prefixes.get(prefix).ok_or_else(|| TurtleError::UndeclaredPrefix {
                    line: tok.line,
                    col: tok.col,
                    prefix: prefix.clone(),
                })?;
                let mut iri = base.clone();
                iri.push_str(local);
                ConceptId::new(iri).map_err(|e| syntax(tok.line, tok.col, e.to_string()))
            }
            _ => Err(syntax(tok.line, tok.col, "expected an IRI or prefixed name")),
        }
    }

    fn parse_prefix_decl(&mut self) -> Result<(), TurtleError> {
        let name = match self.next() {
            Some(Token { tok: Tok::Pname { prefix, local }, line, col }) => {
                if !local.is_empty() {
                    return Err(syntax(line, col, "expected `pfx:` in @prefix declaration"));
                }
                prefix
            }
            Some(t) => return Err(syntax(t.line, t.col, "expected a prefix name")),
            None => {
                let (l, c) = self.end_of_input();
                return Err(syntax(l, c, "unexpected end of input in @prefix declaration"));
            }
        };
        let iri = match self.next() {
            Some(Token { tok: Tok::IriRef(iri), .. }) => iri,
            Some(t) => return Err(syntax(t.line, t.col, "expected an IRI in @prefix declaration")),
            None => {
                let (l, c) = self.end_of_input();
                return Err(syntax(l, c, "unexpected end of input in @prefix declaration"));
            }
        };
        self.expect(&Tok::Dot, "`.` after @prefix declaration")?;
        self.prefixes.insert(name, iri);
        Ok(())
    }

    fn parse_verb(&mut self, tok: Token) -> Result<String, TurtleError> {
        match &tok.tok {
            Tok::KwA => Ok(RDF_TYPE.to_string()),
            Tok::IriRef(_) | Tok::Pname { .. } => Ok(self.expand(&tok)?.as_str().to_string()),
            _ => Err(syntax(tok.line, tok.col, "expected a predicate")),
        }
    }

    fn parse_object(&mut self) -> Result<(Object, u32, u32), TurtleError> {
        match self.next() {
            Some(Token { tok: Tok::Literal { value, lang }, line, col }) => {
                Ok((Object::Literal { value, lang }, line, col))
            }
            Some(tok @ Token { tok: Tok::IriRef(_) | Tok::Pname { .. }, .. }) => {
                let (line, col) = (tok.line, tok.col);
                Ok((Object::Iri(self.expand(&tok)?.as_str().to_string()), line, col))
            }
            Some(t) => Err(syntax(t.line, t.col, "expected an object (IRI or string literal)")),
            None => {
                let (l, c) = self.end_of_input();
                Err(syntax(l, c, "unexpected end of input, expected an object"))
            }
        }
    }

    fn parse_statement(&mut self, subject_tok: Token, triples: &mut Vec<Triple>) -> Result<(), TurtleError> {
        let subject = self.expand(&subject_tok)?;
        loop {
            let verb_tok = match self.next() {
                Some(t) => t,
                None => {
                    let (l, c) = self.end_of_input();
                    return Err(syntax(l, c, "unexpected end of input, expected a predicate"));
                }
            };
            let predicate = self.parse_verb(verb_tok)?;
            loop {
                let (object, line, col) = self.parse_object()?;
                triples.push(Triple {
                    line,
                    col,
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                });
                match self.peek().map(|t| t.tok.clone()) {
                    Some(Tok::Comma) => {
                        self.next();
                    }
                    _ => break,
                }
            }
            match self.next() {
                Some(Token { tok: Tok::Semicolon, .. }) => {
                    // Tolerate a trailing `;` before the closing dot.
                    if let Some(Token { tok: Tok::Dot, .. }) = self.peek() {
                        self.next();
                        return Ok(());
                    }
                }
                Some(Token { tok: Tok::Dot, .. }) => return Ok(()),
                Some(t) => {
                    return Err(syntax(t.line, t.col, "expected `;`, `,` or `.`"));
                }
                None => {
                    let (l, c) = self.end_of_input();
                    return Err(syntax(l, c, "statement not terminated with `.`"));
                }
            }
        }
    }
}

/// Parses a Turtle-subset document into a [`Thesaurus`].
///
/// The result contains exactly the concepts and edges expressed in the input;
/// prefixed names are expanded and language tags preserved. Edge targets that
/// never appear as subjects stay dangling and are reported by
/// [`Thesaurus::validate`], not dropped.
pub fn parse_turtle(text: &str) -> Result<Thesaurus, TurtleError> {
    let tokens = Lexer::new(text).tokens()?;
    let mut parser = Parser { tokens, pos: 0, prefixes: BTreeMap::new() };
    let mut triples: Vec<Triple> = Vec::new();
    while let Some(tok) = parser.next() {
        match tok.tok {
            Tok::KwPrefix => parser.parse_prefix_decl()?,
            Tok::IriRef(_) | Tok::Pname { .. } => parser.parse_statement(tok, &mut triples)?,
            _ => return Err(syntax(tok.line, tok.col, "expected a subject or @prefix")),
        }
    }
    build(triples)
}

#[derive(Default)]
struct RawConcept {
    explicit_type: Option<&'static str>,
    pref_labels: BTreeMap<String, String>,
    alt_labels: BTreeMap<String, Vec<String>>,
    broader: alloc::collections::BTreeSet<ConceptId>,
    in_scheme: alloc::collections::BTreeSet<ConceptId>,
    subject: alloc::collections::BTreeSet<ConceptId>,
    has_top_concept: alloc::collections::BTreeSet<ConceptId>,
    other: BTreeMap<String, Vec<Object>>,
}

fn iri_object(triple: &Triple) -> Result<ConceptId, TurtleError> {
    match &triple.object {
        Object::Iri(iri) => {
            ConceptId::new(iri.clone()).map_err(|e| syntax(triple.line, triple.col, e.to_string()))
        }
        Object::Literal { .. } => Err(syntax(
            triple.line,
            triple.col,
            format!("predicate <{}> expects an IRI object", triple.predicate),
        )),
    }
}

fn literal_object(triple: &Triple) -> Result<(String, Option<String>), TurtleError> {
    match &triple.object {
        Object::Literal { value, lang } => Ok((value.clone(), lang.clone())),
        Object::Iri(_) => Err(syntax(
            triple.line,
            triple.col,
            format!("predicate <{}> expects a string literal", triple.predicate),
        )),
    }
}

fn build(triples: Vec<Triple>) -> Result<Thesaurus, TurtleError> {
    let mut raw: BTreeMap<ConceptId, RawConcept> = BTreeMap::new();
    let mut top_candidates: alloc::collections::BTreeSet<ConceptId> =
        alloc::collections::BTreeSet::new();

    for triple in &triples {
        let entry = raw.entry(triple.subject.clone()).or_default();
        match triple.predicate.as_str() {
            RDF_TYPE => {
                let ty = match &triple.object {
                    Object::Iri(iri) => iri.clone(),
                    Object::Literal { .. } => {
                        return Err(syntax(triple.line, triple.col, "rdf:type expects an IRI object"))
                    }
                };
                let known = match ty.as_str() {
                    EVS_DOMAIN => Some(EVS_DOMAIN),
                    EVS_MICRO_THESAURUS => Some(EVS_MICRO_THESAURUS),
                    EVS_THESAURUS_CONCEPT => Some(EVS_THESAURUS_CONCEPT),
                    _ => None,
                };
                match known {
                    Some(kind) => match entry.explicit_type {
                        None => entry.explicit_type = Some(kind),
                        Some(existing) if existing == kind => {}
                        Some(existing) => {
                            return Err(TurtleError::ConflictingType {
                                subject: triple.subject.clone(),
                                first: existing.to_string(),
                                second: kind.to_string(),
                            })
                        }
                    },
                    None => entry
                        .other
                        .entry(RDF_TYPE.to_string())
                        .or_default()
                        .push(Object::Iri(ty)),
                }
            }
            SKOS_PREF_LABEL => {
                let (value, lang) = literal_object(triple)?;
                entry.pref_labels.insert(lang.unwrap_or_default(), value);
            }
            SKOS_ALT_LABEL => {
                let (value, lang) = literal_object(triple)?;
                entry.alt_labels.entry(lang.unwrap_or_default()).or_default().push(value);
            }
            SKOS_BROADER => {
                entry.broader.insert(iri_object(triple)?);
            }
            SKOS_IN_SCHEME => {
                entry.in_scheme.insert(iri_object(triple)?);
            }
            SKOS_HAS_TOP_CONCEPT => {
                let target = iri_object(triple)?;
                entry.has_top_concept.insert(target.clone());
                top_candidates.insert(target);
            }
            DCTERMS_SUBJECT => {
                entry.subject.insert(iri_object(triple)?);
            }
            _ => {
                entry
                    .other
                    .entry(triple.predicate.clone())
                    .or_default()
                    .push(triple.object.clone());
            }
        }
    }

    let mut concepts: BTreeMap<ConceptId, Concept> = BTreeMap::new();
    for (id, mut r) in raw {
        let kind = match r.explicit_type {
            Some(EVS_DOMAIN) => ConceptKind::Domain,
            Some(EVS_MICRO_THESAURUS) => ConceptKind::MicroThesaurus,
            _ => {
                if top_candidates.contains(&id) || r.broader.is_empty() {
                    ConceptKind::TopTerm
                } else {
                    ConceptKind::Descriptor
                }
            }
        };
        let mut concept = Concept::new(id.clone(), kind);
        concept.pref_labels = r.pref_labels;
        for values in r.alt_labels.values_mut() {
            values.sort();
            values.dedup();
        }
        concept.alt_labels = r.alt_labels;
        concept.broader = r.broader;
        concept.in_scheme = r.in_scheme;
        concept.subject = r.subject;
        concept.has_top_concept = r.has_top_concept;
        for objects in r.other.values_mut() {
            objects.sort();
            objects.dedup();
        }
        concept.other = r.other;
        concepts.insert(id, concept);
    }
    Ok(Thesaurus::from_concepts(concepts))
}
