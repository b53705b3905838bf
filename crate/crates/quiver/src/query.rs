//! SPARQL basic-graph-pattern parsing into a directed labeled query graph.
//!
//! Supported surface: optional `PREFIX pfx: <iri>` lines, then
//! `SELECT ?v... WHERE { s p o . s p o . ... }` where each term is a
//! variable, an IRI, a bare identifier, or a quoted literal. Predicates must
//! be constant.

use crate::error::{Error, Result};
use crate::ingest::{Dictionary, EntityId, PredicateId};
use serde::Serialize;
use std::collections::{HashMap, HashSet};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Term {
    Variable(String),
    /// IRIs and bare identifiers, stored without angle brackets.
    Iri(String),
    /// Literals keep their quotes, matching the ingest canonical form.
    Literal(String),
}

impl Term {
    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable(_))
    }

    /// Canonical text used for dictionary lookups of constants.
    pub fn lookup_key(&self) -> &str {
        match self {
            Term::Variable(v) => v,
            Term::Iri(s) => s,
            Term::Literal(s) => s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryVertex {
    pub id: usize,
    pub term: Term,
}

impl QueryVertex {
    pub fn is_constant(&self) -> bool {
        !self.term.is_variable()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryEdge {
    pub from: usize,
    pub to: usize,
    /// Predicate term text (IRI or bare identifier).
    pub predicate: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryGraph {
    pub vertices: Vec<QueryVertex>,
    pub edges: Vec<QueryEdge>,
    /// SELECT variables in declaration order.
    pub projection: Vec<String>,
}

impl QueryGraph {
    pub fn vertex_of(&self, term: &Term) -> Option<usize> {
        self.vertices.iter().position(|v| &v.term == term)
    }

    pub fn constant_vertices(&self) -> Vec<usize> {
        self.vertices.iter().filter(|v| v.is_constant()).map(|v| v.id).collect()
    }

    pub fn has_constants(&self) -> bool {
        self.vertices.iter().any(|v| v.is_constant())
    }

    /// Number of distinct constant vertices.
    pub fn constant_count(&self) -> usize {
        self.constant_vertices().len()
    }

    /// Edges incident to `v` (self-loops once).
    pub fn incident(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.from == v || e.to == v)
            .map(|(i, _)| i)
            .collect()
    }

    /// True if the undirected multigraph has a cycle (parallel edges and
    /// self-loops count).
    pub fn has_cycle(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        for e in &self.edges {
            if e.from == e.to {
                return true;
            }
            let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
            if a == b {
                return true;
            }
            parent[a] = b;
        }
        false
    }

    /// Variable name of a vertex, if it is one.
    pub fn var_name(&self, v: usize) -> Option<&str> {
        match &self.vertices[v].term {
            Term::Variable(name) => Some(name),
            _ => None,
        }
    }
}

/// Split edges into light (≥1 constant endpoint) and heavy (variables only).
pub fn classify_edges(g: &QueryGraph) -> (Vec<usize>, Vec<usize>) {
    let mut light = Vec::new();
    let mut heavy = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        if g.vertices[e.from].is_constant() || g.vertices[e.to].is_constant() {
            light.push(i);
        } else {
            heavy.push(i);
        }
    }
    (light, heavy)
}

/// Query with constants and predicates resolved against a dictionary.
/// Unresolvable ids stay `None` and simply match nothing.
#[derive(Debug, Clone)]
pub struct ResolvedQuery {
    pub graph: QueryGraph,
    /// Per edge: predicate id, `None` when absent from the data.
    pub predicate_ids: Vec<Option<PredicateId>>,
    /// Per vertex: entity id for constants, `None` for variables or
    /// constants absent from the data.
    pub constant_ids: Vec<Option<EntityId>>,
}

pub fn resolve(graph: &QueryGraph, dict: &Dictionary) -> ResolvedQuery {
    let predicate_ids = graph
        .edges
        .iter()
        .map(|e| dict.predicate_id(&e.predicate))
        .collect();
    let constant_ids = graph
        .vertices
        .iter()
        .map(|v| {
            if v.is_constant() {
                dict.entity_id(v.term.lookup_key())
            } else {
                None
            }
        })
        .collect();
    ResolvedQuery { graph: graph.clone(), predicate_ids, constant_ids }
}

struct Tokenizer<'a> {
    text: &'a str,
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),    // keywords, bare identifiers, prefixed names
    Var(String),     // ?name
    Iri(String),     // <...> without brackets
    Literal(String), // "..." with quotes
    LBrace,
    RBrace,
    Dot,
}

impl<'a> Tokenizer<'a> {
    fn new(text: &'a str) -> Self {
        Tokenizer { text, pos: 0 }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::QuerySyntax { pos: self.pos, msg: msg.into() }
    }

    fn next_tok(&mut self) -> Result<Option<Tok>> {
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() && (bytes[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
        if self.pos >= bytes.len() {
            return Ok(None);
        }
        let rest = &self.text[self.pos..];
        let c = rest.chars().next().unwrap();
        let tok = match c {
            '{' => {
                self.pos += 1;
                Tok::LBrace
            }
            '}' => {
                self.pos += 1;
                Tok::RBrace
            }
            '.' => {
                self.pos += 1;
                Tok::Dot
            }
            '?' | '$' => {
                let end = rest[1..]
                    .find(|ch: char| !(ch.is_alphanumeric() || ch == '_'))
                    .map(|i| i + 1)
                    .unwrap_or(rest.len());
                if end == 1 {
                    return Err(self.err("empty variable name"));
                }
                let name = rest[1..end].to_string();
                self.pos += end;
                Tok::Var(name)
            }
            '<' => match rest.find('>') {
                Some(end) => {
                    let iri = rest[1..end].to_string();
                    self.pos += end + 1;
                    Tok::Iri(iri)
                }
                None => return Err(self.err("unclosed '<'")),
            },
            '"' => {
                let mut escaped = false;
                let mut close = None;
                for (i, ch) in rest.char_indices().skip(1) {
                    if escaped {
                        escaped = false;
                    } else if ch == '\\' {
                        escaped = true;
                    } else if ch == '"' {
                        close = Some(i);
                        break;
                    }
                }
                match close {
                    Some(i) => {
                        let lit = rest[..=i].to_string();
                        self.pos += i + 1;
                        Tok::Literal(lit)
                    }
                    None => return Err(self.err("unclosed string literal")),
                }
            }
            _ => {
                let end = rest
                    .find(|ch: char| ch.is_whitespace() || "{}".contains(ch))
                    .unwrap_or(rest.len());
                // '.' terminates a bare word only at its end (IRIs may embed dots)
                let word = rest[..end].trim_end_matches('.');
                let trimmed = end - (rest[..end].len() - word.len());
                if word.is_empty() {
                    return Err(self.err(format!("unexpected character '{c}'")));
                }
                self.pos += trimmed;
                Tok::Word(word.to_string())
            }
        };
        Ok(Some(tok))
    }
}

/// Parse query text into a [`QueryGraph`]. Vertices are deduplicated by
/// term; projection order follows the SELECT clause.
pub fn parse_query(text: &str) -> Result<QueryGraph> {
    let mut tz = Tokenizer::new(text);
    let mut prefixes: HashMap<String, String> = HashMap::new();

    // prefix declarations, then SELECT
    let mut tok = tz.next_tok()?;
    loop {
        match &tok {
            Some(Tok::Word(w)) if w.eq_ignore_ascii_case("prefix") => {
                let name = match tz.next_tok()? {
                    Some(Tok::Word(w)) if w.ends_with(':') => {
                        w.trim_end_matches(':').to_string()
                    }
                    _ => return Err(tz.err("expected 'pfx:' after PREFIX")),
                };
                let iri = match tz.next_tok()? {
                    Some(Tok::Iri(iri)) => iri,
                    _ => return Err(tz.err("expected <iri> in PREFIX declaration")),
                };
                prefixes.insert(name, iri);
                tok = tz.next_tok()?;
            }
            Some(Tok::Word(w)) if w.eq_ignore_ascii_case("select") => break,
            _ => return Err(tz.err("expected SELECT")),
        }
    }

    // projection variables
    let mut projection = Vec::new();
    let mut seen_vars = HashSet::new();
    loop {
        match tz.next_tok()? {
            Some(Tok::Var(v)) => {
                if seen_vars.insert(v.clone()) {
                    projection.push(v);
                }
            }
            Some(Tok::Word(w)) if w.eq_ignore_ascii_case("where") => break,
            _ => return Err(tz.err("expected ?variable or WHERE")),
        }
    }
    if projection.is_empty() {
        return Err(tz.err("SELECT needs at least one variable"));
    }
    match tz.next_tok()? {
        Some(Tok::LBrace) => {}
        _ => return Err(tz.err("expected '{' after WHERE")),
    }

    // triple patterns
    let mut vertices: Vec<QueryVertex> = Vec::new();
    let mut by_term: HashMap<Term, usize> = HashMap::new();
    let mut edges = Vec::new();
    let expand = |tok: Tok, tz: &Tokenizer| -> Result<Term> {
        match tok {
            Tok::Var(v) => Ok(Term::Variable(v)),
            Tok::Iri(iri) => Ok(Term::Iri(iri)),
            Tok::Literal(l) => Ok(Term::Literal(l)),
            Tok::Word(w) => {
                if let Some((pfx, local)) = w.split_once(':') {
                    if let Some(base) = prefixes.get(pfx) {
                        return Ok(Term::Iri(format!("{base}{local}")));
                    }
                }
                Ok(Term::Iri(w))
            }
            _ => Err(tz.err("expected a term")),
        }
    };
    loop {
        let first = match tz.next_tok()? {
            Some(Tok::RBrace) | None => break,
            Some(Tok::Dot) => continue,
            Some(t) => t,
        };
        let subject = expand(first, &tz)?;
        let pred_tok = tz.next_tok()?.ok_or_else(|| tz.err("expected predicate"))?;
        if matches!(pred_tok, Tok::Var(_)) {
            return Err(Error::Unsupported("variable predicates".into()));
        }
        let predicate = match expand(pred_tok, &tz)? {
            Term::Iri(p) => p,
            _ => return Err(tz.err("predicate must be an IRI or identifier")),
        };
        let obj_tok = tz.next_tok()?.ok_or_else(|| tz.err("expected object"))?;
        let object = expand(obj_tok, &tz)?;

        let mut intern = |term: Term| -> usize {
            if let Some(&id) = by_term.get(&term) {
                return id;
            }
            let id = vertices.len();
            vertices.push(QueryVertex { id, term: term.clone() });
            by_term.insert(term, id);
            id
        };
        let from = intern(subject);
        let to = intern(object);
        edges.push(QueryEdge { from, to, predicate });
    }

    let g = QueryGraph { vertices, edges, projection };
    validate(&g)?;
    Ok(g)
}

fn validate(g: &QueryGraph) -> Result<()> {
    let edge_vars: HashSet<&str> = g
        .edges
        .iter()
        .flat_map(|e| [e.from, e.to])
        .filter_map(|v| g.var_name(v))
        .collect();
    for p in &g.projection {
        if !edge_vars.contains(p.as_str()) {
            return Err(Error::InvalidQuery(format!(
                "projected variable ?{p} does not occur in any triple pattern"
            )));
        }
    }
    Ok(())
}
