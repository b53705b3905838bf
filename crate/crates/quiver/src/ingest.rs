//! N-Triples ingestion: parse, predicate-filter, and dictionary-encode RDF
//! triples into the coordinate-form RDF matrix.
//!
//! Entities (subjects and objects) share one 0-based id space; predicates get
//! their own 1-based id space, so that 0 can mean "empty cell" in matrix form.

use crate::error::{Error, Result};
use std::collections::{HashMap, HashSet};
use std::io::{BufRead, BufReader, Read};

/// One parsed triple, terms in canonical text form: IRIs and plain
/// identifiers without angle brackets, literals with their quotes kept.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RawTriple {
    pub subject: String,
    pub predicate: String,
    pub object: String,
}

pub type EntityId = u32;
pub type PredicateId = u32;

/// Bijective string<->id maps produced by [`encode`].
#[derive(Debug, Clone, Default)]
pub struct Dictionary {
    pub entity_to_id: HashMap<String, EntityId>,
    pub predicate_to_id: HashMap<String, PredicateId>,
    pub entities: Vec<String>,
    pub predicates: Vec<String>, // predicates[0] corresponds to id 1
}

impl Dictionary {
    pub fn entity_id(&self, term: &str) -> Option<EntityId> {
        self.entity_to_id.get(term).copied()
    }

    pub fn predicate_id(&self, term: &str) -> Option<PredicateId> {
        self.predicate_to_id.get(term).copied()
    }

    pub fn entity_name(&self, id: EntityId) -> &str {
        &self.entities[id as usize]
    }

    pub fn predicate_name(&self, id: PredicateId) -> &str {
        &self.predicates[(id - 1) as usize]
    }

    pub fn entity_count(&self) -> usize {
        self.entities.len()
    }

    pub fn predicate_count(&self) -> usize {
        self.predicates.len()
    }
}

/// The encoded RDF matrix in coordinate form. Multiple entries may share a
/// (row, col) pair as long as their predicate differs (RDF is a multigraph);
/// exact duplicates are removed at encode time.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TripleSet {
    /// Entity count; rows and cols are in `[0, n)`.
    pub n: usize,
    /// Entries as (row = subject id, col = object id, val = predicate id).
    pub triples: Vec<(EntityId, EntityId, PredicateId)>,
}

impl TripleSet {
    /// Membership test used by result re-verification and the oracle.
    pub fn contains(&self, s: EntityId, p: PredicateId, o: EntityId) -> bool {
        self.triples.iter().any(|&(r, c, v)| r == s && c == o && v == p)
    }
}

/// Parse the N-Triples subset: one triple per line, three whitespace-separated
/// terms closed by `.`; `#` comments and blank lines are skipped.
pub fn parse_ntriples<R: Read>(reader: R) -> Result<Vec<RawTriple>> {
    let buf = BufReader::new(reader);
    let mut out = Vec::new();
    for (idx, line) in buf.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_line(line, lineno)?);
    }
    Ok(out)
}

pub fn parse_ntriples_str(text: &str) -> Result<Vec<RawTriple>> {
    parse_ntriples(text.as_bytes())
}

fn parse_line(line: &str, lineno: usize) -> Result<RawTriple> {
    let mut terms = Vec::new();
    let mut rest = line;
    let mut terminated = false;
    while !rest.is_empty() {
        rest = rest.trim_start();
        if rest.is_empty() {
            break;
        }
        if rest.starts_with('.') && rest[1..].trim().is_empty() {
            terminated = true;
            break;
        }
        let (term, tail) = next_term(rest, lineno)?;
        terms.push(term);
        rest = tail;
    }
    if !terminated {
        return Err(Error::Parse {
            line: lineno,
            msg: "missing terminating '.'".into(),
        });
    }
    if terms.len() != 3 {
        return Err(Error::Parse {
            line: lineno,
            msg: format!("expected 3 terms before '.', found {}", terms.len()),
        });
    }
    let object = terms.pop().unwrap();
    let predicate = terms.pop().unwrap();
    let subject = terms.pop().unwrap();
    if subject.starts_with('"') {
        return Err(Error::Parse {
            line: lineno,
            msg: "literal not allowed in subject position".into(),
        });
    }
    if predicate.starts_with('"') {
        return Err(Error::Parse {
            line: lineno,
            msg: "literal not allowed in predicate position".into(),
        });
    }
    Ok(RawTriple { subject, predicate, object })
}

/// Scan one term off the front of `rest`. IRIs lose their angle brackets,
/// literals keep their surrounding quotes so they never collide with IRIs.
fn next_term(rest: &str, lineno: usize) -> Result<(String, &str)> {
    let bytes = rest.as_bytes();
    match bytes[0] {
        b'<' => match rest.find('>') {
            Some(end) => Ok((rest[1..end].to_string(), &rest[end + 1..])),
            None => Err(Error::Parse { line: lineno, msg: "unclosed '<'".into() }),
        },
        b'"' => {
            let mut escaped = false;
            for (i, ch) in rest.char_indices().skip(1) {
                if escaped {
                    escaped = false;
                } else if ch == '\\' {
                    escaped = true;
                } else if ch == '"' {
                    return Ok((rest[..=i].to_string(), &rest[i + 1..]));
                }
            }
            Err(Error::Parse { line: lineno, msg: "unclosed string literal".into() })
        }
        _ => {
            let end = rest
                .find(|c: char| c.is_whitespace())
                .unwrap_or(rest.len());
            Ok((rest[..end].to_string(), &rest[end..]))
        }
    }
}

/// Keep only triples whose predicate occurs in the query, preserving order.
pub fn filter_predicates(raw: &[RawTriple], query_predicates: &HashSet<String>) -> Vec<RawTriple> {
    raw.iter()
        .filter(|t| query_predicates.contains(&t.predicate))
        .cloned()
        .collect()
}

/// Dictionary-encode: entity ids by first appearance in subject-then-object
/// order per triple, in file order; predicate ids 1-based by first appearance.
/// Exact duplicate triples are dropped (RDF set semantics).
pub fn encode(filtered: &[RawTriple]) -> (Dictionary, TripleSet) {
    let mut dict = Dictionary::default();
    let mut triples = Vec::with_capacity(filtered.len());
    let mut seen = HashSet::new();
    for t in filtered {
        let s = intern_entity(&mut dict, &t.subject);
        let p = intern_predicate(&mut dict, &t.predicate);
        let o = intern_entity(&mut dict, &t.object);
        if seen.insert((s, o, p)) {
            triples.push((s, o, p));
        }
    }
    let n = dict.entities.len();
    (dict, TripleSet { n, triples })
}

fn intern_entity(dict: &mut Dictionary, term: &str) -> EntityId {
    if let Some(&id) = dict.entity_to_id.get(term) {
        return id;
    }
    let id = dict.entities.len() as EntityId;
    dict.entities.push(term.to_string());
    dict.entity_to_id.insert(term.to_string(), id);
    id
}

fn intern_predicate(dict: &mut Dictionary, term: &str) -> PredicateId {
    if let Some(&id) = dict.predicate_to_id.get(term) {
        return id;
    }
    let id = dict.predicates.len() as PredicateId + 1;
    dict.predicates.push(term.to_string());
    dict.predicate_to_id.insert(term.to_string(), id);
    id
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;

    #[test]
    fn parses_simple_line() {
        let triples = parse_ntriples_str("<User0> <follows> <User1> .").unwrap();
        assert_eq!(
            triples,
            vec![RawTriple {
                subject: "User0".into(),
                predicate: "follows".into(),
                object: "User1".into(),
            }]
        );
    }

    #[test]
    fn empty_stream_is_empty() {
        assert!(parse_ntriples_str("").unwrap().is_empty());
    }

    #[test]
    fn arity_violation_reports_line() {
        let err = parse_ntriples_str("<a> <b> .").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn literal_objects_and_comments() {
        let text = "# header\n\n<p1> <title> \"a small title\" .\n";
        let triples = parse_ntriples_str(text).unwrap();
        assert_eq!(triples[0].object, "\"a small title\"");
    }

    #[test]
    fn filter_keeps_query_predicates_in_order() {
        let raw = fixture::raw_triples();
        let preds: HashSet<String> =
            ["follows", "actor", "director"].iter().map(|s| s.to_string()).collect();
        let kept = filter_predicates(&raw, &preds);
        assert_eq!(kept.len(), 11);
        assert!(kept.iter().all(|t| t.predicate != "FriendOf"));

        let only_friend: HashSet<String> = ["FriendOf".to_string()].into_iter().collect();
        assert_eq!(filter_predicates(&raw, &only_friend).len(), 1);
        assert!(filter_predicates(&raw, &HashSet::new()).is_empty());
    }

    #[test]
    fn encode_reproduces_fixture_ids() {
        let (dict, tset) = fixture::encoded();
        assert_eq!(tset.n, 8);
        assert_eq!(tset.triples.len(), 11);
        let expect = [
            ("User0", 0),
            ("User1", 1),
            ("Product0", 2),
            ("User2", 3),
            ("User3", 4),
            ("User4", 5),
            ("Product1", 6),
            ("Product2", 7),
        ];
        for (name, id) in expect {
            assert_eq!(dict.entity_id(name), Some(id), "{name}");
        }
        assert_eq!(dict.predicate_id("follows"), Some(1));
        assert_eq!(dict.predicate_id("actor"), Some(2));
        assert_eq!(dict.predicate_id("director"), Some(3));
    }

    #[test]
    fn encode_edge_cases() {
        let (dict, tset) = encode(&[]);
        assert_eq!(tset.n, 0);
        assert!(tset.triples.is_empty());
        assert_eq!(dict.entity_count(), 0);

        let selfloop = vec![RawTriple {
            subject: "a".into(),
            predicate: "p".into(),
            object: "a".into(),
        }];
        let (_, tset) = encode(&selfloop);
        assert_eq!(tset.n, 1);
        assert_eq!(tset.triples, vec![(0, 0, 1)]);
    }

    #[test]
    fn encode_dedupes_identical_triples() {
        let t = RawTriple { subject: "a".into(), predicate: "p".into(), object: "b".into() };
        let (_, tset) = encode(&[t.clone(), t]);
        assert_eq!(tset.triples.len(), 1);
    }

    #[test]
    fn round_trip_through_reverse_maps() {
        let raw = fixture::filtered_triples();
        let (dict, tset) = encode(&raw);
        // decode every encoded entry and compare with the (deduped) input
        let decoded: Vec<RawTriple> = tset
            .triples
            .iter()
            .map(|&(s, o, p)| RawTriple {
                subject: dict.entity_name(s).to_string(),
                predicate: dict.predicate_name(p).to_string(),
                object: dict.entity_name(o).to_string(),
            })
            .collect();
        assert_eq!(decoded, raw);
        // id density
        assert_eq!(dict.entity_count(), tset.n);
        let max_pred = tset.triples.iter().map(|t| t.2).max().unwrap();
        assert_eq!(max_pred as usize, dict.predicate_count());
    }
}
