//! The small social/movie sample dataset and query used throughout the
//! documentation, unit tests, and golden tests. The same data ships as
//! `fixtures/social_movies.nt` / `fixtures/movie_circle.rq` for the CLI.

use crate::ingest::{self, Dictionary, RawTriple, TripleSet};
use std::collections::HashSet;

/// Twelve triples over users and movie products. One triple carries the
/// predicate `FriendOf`, which no bundled query mentions.
pub const SOCIAL_MOVIES_NT: &str = "\
<User0> <follows> <User1> .
<Product0> <actor> <User0> .
<Product0> <director> <User1> .
<Product0> <director> <User3> .
<Product0> <actor> <User4> .
<User3> <FriendOf> <User0> .
<User1> <follows> <User0> .
<Product1> <director> <User2> .
<Product1> <director> <User4> .
<User3> <follows> <User4> .
<User4> <follows> <User1> .
<Product2> <director> <User4> .
";

/// Four-pattern query: a product, its actor and director, the director
/// follows the actor, and someone follows the director.
pub const MOVIE_CIRCLE_RQ: &str = "\
SELECT ?v0 ?v1 ?v2 ?v3 WHERE {
  ?v0 <actor> ?v1 .
  ?v0 <director> ?v2 .
  ?v2 <follows> ?v1 .
  ?v3 <follows> ?v2 .
}
";

pub fn raw_triples() -> Vec<RawTriple> {
    ingest::parse_ntriples_str(SOCIAL_MOVIES_NT).expect("fixture parses")
}

/// The fixture filtered to the query's predicates (drops `FriendOf`).
pub fn filtered_triples() -> Vec<RawTriple> {
    let preds: HashSet<String> =
        ["follows", "actor", "director"].iter().map(|s| s.to_string()).collect();
    ingest::filter_predicates(&raw_triples(), &preds)
}

/// Filter-then-encode of the fixture, the form every golden test starts from.
pub fn encoded() -> (Dictionary, TripleSet) {
    ingest::encode(&filtered_triples())
}
