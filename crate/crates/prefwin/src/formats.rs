//! File formats: the `poset-profile v1` text format for partial profiles,
//! and CSV ingestion of ratings tables and pairwise-comparison tables.
//!
//! The profile format is line-oriented:
//!
//! ```text
//! # poset-profile v1
//! candidates: 3
//! voters: 2
//! names: a,b,c
//! 0: 0>1,1>2
//! 1:
//! ```
//!
//! The `names:` line is optional. Each voter line lists direct preference
//! pairs; the transitive closure is taken on parse, and [`write_profile`]
//! emits the transitive reduction, so write∘parse is the identity on
//! canonical documents.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Read;

use thiserror::Error;

use crate::orders::{OrderError, PartialOrder, PartialProfile};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("voter {voter}: {source}")]
    Vote { voter: usize, source: OrderError },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Profile(OrderError),
}

/// A parsed `poset-profile v1` document.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileDocument {
    pub profile: PartialProfile,
    pub names: Option<Vec<String>>,
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

fn parse_header<T: std::str::FromStr>(
    text: Option<&(usize, &str)>,
    key: &str,
) -> Result<T, FormatError> {
    let &(lineno, line) = text.ok_or_else(|| syntax(0, format!("missing `{key}:` header")))?;
    let value = line
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix(':'))
        .ok_or_else(|| syntax(lineno, format!("expected `{key}: …`")))?;
    value
        .trim()
        .parse()
        .map_err(|_| syntax(lineno, format!("invalid `{key}` value `{}`", value.trim())))
}

/// Parse a `poset-profile v1` document.
pub fn parse_profile(text: &str) -> Result<ProfileDocument, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (lineno, magic) = lines.next().ok_or_else(|| syntax(0, "empty document"))?;
    if magic != "# poset-profile v1" {
        return Err(syntax(lineno, "expected `# poset-profile v1`"));
    }
    let rest: Vec<(usize, &str)> = lines.collect();
    let m: usize = parse_header(rest.first(), "candidates")?;
    let n: usize = parse_header(rest.get(1), "voters")?;
    let mut body = &rest[2..];
    let mut names = None;
    if let Some(&(lineno, line)) = body.first() {
        if let Some(list) = line.strip_prefix("names:") {
            let parsed: Vec<String> = list.split(',').map(|s| s.trim().to_string()).collect();
            if parsed.len() != m {
                return Err(syntax(lineno, format!("expected {m} names, got {}", parsed.len())));
            }
            names = Some(parsed);
            body = &body[1..];
        }
    }
    let mut votes: Vec<Option<PartialOrder>> = vec![None; n];
    for &(lineno, line) in body {
        let (id, pairs_text) = line
            .split_once(':')
            .ok_or_else(|| syntax(lineno, "expected `<voter>: <pairs>`"))?;
        let voter: usize = id
            .trim()
            .parse()
            .map_err(|_| syntax(lineno, format!("invalid voter id `{}`", id.trim())))?;
        if voter >= n {
            return Err(syntax(lineno, format!("voter id {voter} out of range (n = {n})")));
        }
        if votes[voter].is_some() {
            return Err(syntax(lineno, format!("duplicate voter id {voter}")));
        }
        let mut pairs = Vec::new();
        for token in pairs_text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (a, b) = token
                .split_once('>')
                .ok_or_else(|| syntax(lineno, format!("expected `i>j`, got `{token}`")))?;
            let a: usize = a
                .trim()
                .parse()
                .map_err(|_| syntax(lineno, format!("invalid candidate `{}`", a.trim())))?;
            let b: usize = b
                .trim()
                .parse()
                .map_err(|_| syntax(lineno, format!("invalid candidate `{}`", b.trim())))?;
            pairs.push((a, b));
        }
        let order = PartialOrder::from_pairs(m, pairs)
            .map_err(|source| FormatError::Vote { voter, source })?;
        votes[voter] = Some(order);
    }
    let missing: Vec<usize> = (0..n).filter(|&v| votes[v].is_none()).collect();
    if let Some(&v) = missing.first() {
        return Err(syntax(0, format!("no line for voter {v}")));
    }
    let profile = PartialProfile::new(votes.into_iter().map(Option::unwrap).collect())
        .map_err(FormatError::Profile)?;
    Ok(ProfileDocument { profile, names })
}

/// Serialize a profile canonically: voters in order, each vote as its
/// sorted transitive-reduction pairs.
pub fn write_profile(doc: &ProfileDocument) -> String {
    let profile = &doc.profile;
    let mut out = String::new();
    out.push_str("# poset-profile v1\n");
    writeln!(out, "candidates: {}", profile.m()).unwrap();
    writeln!(out, "voters: {}", profile.votes().len()).unwrap();
    if let Some(names) = &doc.names {
        writeln!(out, "names: {}", names.join(",")).unwrap();
    }
    for (v, vote) in profile.votes().iter().enumerate() {
        let mut pairs: Vec<(usize, usize)> = vote
            .transitive_reduction()
            .iter()
            .enumerate()
            .flat_map(|(a, succ)| succ.iter().map(move |&b| (a, b)))
            .collect();
        pairs.sort_unstable();
        let text: Vec<String> = pairs.iter().map(|(a, b)| format!("{a}>{b}")).collect();
        writeln!(out, "{v}: {}", text.join(",")).unwrap();
    }
    out
}

/// A profile ingested from a table, with the user and item labels behind
/// the numeric voter and candidate indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub profile: PartialProfile,
    pub items: Vec<String>,
    pub users: Vec<String>,
    /// Users whose kept pairwise comparisons were cyclic (always empty for
    /// ratings input, which is acyclic by construction).
    pub dropped_users: Vec<String>,
}

/// Build one vote per user from a headered CSV of `user,item,rating` rows:
/// item `a` is preferred to `b` exactly when the user rates `a` strictly
/// higher. Unrated items are incomparable to everything.
pub fn ingest_ratings(input: impl Read) -> Result<Ingested, FormatError> {
    let mut reader = csv::Reader::from_reader(input);
    // BTreeMaps keep user and item indices independent of row order.
    let mut ratings: BTreeMap<String, Vec<(String, f64)>> = BTreeMap::new();
    let mut items: BTreeSet<String> = BTreeSet::new();
    for record in reader.deserialize() {
        let (user, item, rating): (String, String, f64) = record?;
        items.insert(item.clone());
        ratings.entry(user).or_default().push((item, rating));
    }
    let items: Vec<String> = items.into_iter().collect();
    let index: BTreeMap<&str, usize> =
        items.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let m = items.len();
    let mut users = Vec::new();
    let mut votes = Vec::new();
    for (user, rated) in ratings {
        let mut pairs = Vec::new();
        for (a, ra) in &rated {
            for (b, rb) in &rated {
                if ra > rb {
                    pairs.push((index[a.as_str()], index[b.as_str()]));
                }
            }
        }
        votes.push(PartialOrder::from_pairs(m, pairs).expect("ratings are acyclic"));
        users.push(user);
    }
    let profile = PartialProfile::new(votes).map_err(FormatError::Profile)?;
    Ok(Ingested { profile, items, users, dropped_users: Vec::new() })
}

/// Build one vote per user from a headered CSV of
/// `user,a,b,preferred,confidence` rows, keeping rows whose confidence
/// reaches `threshold`. Users whose kept pairs are cyclic are dropped and
/// reported.
pub fn ingest_pairwise(input: impl Read, threshold: f64) -> Result<Ingested, FormatError> {
    let mut reader = csv::Reader::from_reader(input);
    let mut by_user: BTreeMap<String, Vec<(String, String)>> = BTreeMap::new();
    let mut items: BTreeSet<String> = BTreeSet::new();
    for record in reader.deserialize() {
        let (user, a, b, preferred, confidence): (String, String, String, String, f64) = record?;
        items.insert(a.clone());
        items.insert(b.clone());
        let entry = by_user.entry(user).or_default();
        if confidence >= threshold {
            let other = if preferred == a { b } else { a };
            entry.push((preferred, other));
        }
    }
    let items: Vec<String> = items.into_iter().collect();
    let index: BTreeMap<&str, usize> =
        items.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let m = items.len();
    let mut users = Vec::new();
    let mut votes = Vec::new();
    let mut dropped_users = Vec::new();
    for (user, pairs) in by_user {
        let pairs = pairs
            .iter()
            .map(|(a, b)| (index[a.as_str()], index[b.as_str()]));
        match PartialOrder::from_pairs(m, pairs) {
            Ok(order) => {
                votes.push(order);
                users.push(user);
            }
            Err(OrderError::Cycle { .. }) => dropped_users.push(user),
            Err(other) => return Err(FormatError::Profile(other)),
        }
    }
    let profile = PartialProfile::new(votes).map_err(FormatError::Profile)?;
    Ok(Ingested { profile, items, users, dropped_users })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::posetgen::gen_rsm_mix_profile;

    #[test]
    fn empty_votes_document() {
        let text = "# poset-profile v1\ncandidates: 3\nvoters: 2\n0:\n1:\n";
        let doc = parse_profile(text).unwrap();
        assert_eq!(doc.profile.m(), 3);
        assert_eq!(doc.profile.votes().len(), 2);
        assert!(doc.profile.votes().iter().all(|v| v.pair_count() == 0));
        assert_eq!(doc.names, None);
    }

    #[test]
    fn names_and_closure() {
        let text = "# poset-profile v1\ncandidates: 3\nvoters: 1\nnames: x,y,z\n0: 0>1,1>2\n";
        let doc = parse_profile(text).unwrap();
        assert_eq!(doc.names.as_deref(), Some(&["x".into(), "y".into(), "z".into()][..]));
        // Closure adds 0 > 2.
        assert!(doc.profile.votes()[0].gt(0, 2));
        // Canonical output keeps the reduction only.
        assert_eq!(write_profile(&doc), text);
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let cases = [
            ("# wrong\ncandidates: 2\nvoters: 1\n0:\n", 1),
            ("# poset-profile v1\ncandidates: x\nvoters: 1\n0:\n", 2),
            ("# poset-profile v1\ncandidates: 2\nvoters: 1\n0: 0<1\n", 4),
            ("# poset-profile v1\ncandidates: 2\nvoters: 1\n7: 0>1\n", 4),
            ("# poset-profile v1\ncandidates: 2\nvoters: 2\n0:\n0:\n", 5),
        ];
        for (text, want_line) in cases {
            match parse_profile(text) {
                Err(FormatError::Syntax { line, .. }) => assert_eq!(line, want_line, "{text:?}"),
                other => panic!("expected syntax error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn cyclic_vote_reports_voter() {
        let text = "# poset-profile v1\ncandidates: 2\nvoters: 2\n0:\n1: 0>1,1>0\n";
        match parse_profile(text) {
            Err(FormatError::Vote { voter: 1, source: OrderError::Cycle { .. } }) => {}
            other => panic!("expected cycle error for voter 1, got {other:?}"),
        }
    }

    #[test]
    fn random_profiles_round_trip() {
        for seed in 0..20 {
            let profile = gen_rsm_mix_profile(6, 8, seed);
            let doc = ProfileDocument { profile, names: None };
            let text = write_profile(&doc);
            let parsed = parse_profile(&text).unwrap();
            assert_eq!(parsed, doc);
            assert_eq!(write_profile(&parsed), text);
        }
    }

    #[test]
    fn ratings_chain_and_ties() {
        let csv = "user,item,rating\nu1,a,5\nu1,b,3\nu1,c,1\nu2,a,2\nu2,b,2\n";
        let got = ingest_ratings(csv.as_bytes()).unwrap();
        assert_eq!(got.items, ["a", "b", "c"]);
        assert_eq!(got.users, ["u1", "u2"]);
        let v1 = &got.profile.votes()[0];
        assert!(v1.gt(0, 1) && v1.gt(1, 2) && v1.gt(0, 2));
        // u2's tie leaves a and b incomparable, and c unrated.
        let v2 = &got.profile.votes()[1];
        assert_eq!(v2.pair_count(), 0);
        assert!(got.dropped_users.is_empty());
    }

    #[test]
    fn ratings_agree_with_sorting() {
        use crate::testutil::TestRng;
        let mut rng = TestRng::new(5);
        for _ in 0..30 {
            let m = 2 + rng.below(5) as usize;
            let mut csv = String::from("user,item,rating\n");
            let mut scores = Vec::new();
            for item in 0..m {
                if rng.chance(4, 5) {
                    let r = rng.below(10) as f64 / 2.0;
                    writeln!(csv, "u,i{item},{r}").unwrap();
                    scores.push((item, r));
                }
            }
            if scores.is_empty() {
                continue;
            }
            let got = ingest_ratings(csv.as_bytes()).unwrap();
            let vote = &got.profile.votes()[0];
            let idx = |item: usize| {
                got.items.iter().position(|s| *s == format!("i{item}")).unwrap()
            };
            for &(a, ra) in &scores {
                for &(b, rb) in &scores {
                    assert_eq!(vote.gt(idx(a), idx(b)), ra > rb);
                }
            }
        }
    }

    #[test]
    fn pairwise_threshold_and_cycles() {
        let csv = "user,a,b,preferred,confidence\n\
                   u1,x,y,x,0.9\nu1,y,z,y,0.4\n\
                   u2,x,y,x,0.8\nu2,x,y,y,0.8\n";
        // High threshold: all rows dropped, everyone keeps an empty vote.
        let all_empty = ingest_pairwise(csv.as_bytes(), 2.0).unwrap();
        assert!(all_empty.profile.votes().iter().all(|v| v.pair_count() == 0));
        assert!(all_empty.dropped_users.is_empty());
        // At 0.5, u1 keeps only x > y; u2's kept rows form a 2-cycle.
        let got = ingest_pairwise(csv.as_bytes(), 0.5).unwrap();
        assert_eq!(got.users, ["u1"]);
        assert_eq!(got.dropped_users, ["u2"]);
        let x = got.items.iter().position(|s| s == "x").unwrap();
        let y = got.items.iter().position(|s| s == "y").unwrap();
        assert_eq!(got.profile.votes()[0].pair_count(), 1);
        assert!(got.profile.votes()[0].gt(x, y));
    }

    #[test]
    fn pairwise_density_monotone_in_threshold() {
        use crate::testutil::TestRng;
        let mut rng = TestRng::new(23);
        let mut csv = String::from("user,a,b,preferred,confidence\n");
        // Each user answers consistently with a hidden ranking, so no user
        // is ever dropped and raising the threshold can only remove pairs.
        for user in 0..6 {
            let mut hidden: Vec<usize> = (0..5).collect();
            for i in (1..5).rev() {
                hidden.swap(i, rng.below(i + 1));
            }
            for a in 0..5usize {
                for b in a + 1..5 {
                    if rng.chance(1, 2) {
                        let pa = hidden.iter().position(|&x| x == a).unwrap();
                        let pb = hidden.iter().position(|&x| x == b).unwrap();
                        let p = if pa < pb { a } else { b };
                        let conf = rng.below(100) as f64 / 100.0;
                        writeln!(csv, "u{user},i{a},i{b},i{p},{conf}").unwrap();
                    }
                }
            }
        }
        let mut last = usize::MAX;
        for threshold in [0.0, 0.25, 0.5, 0.75, 1.01] {
            let got = ingest_pairwise(csv.as_bytes(), threshold).unwrap();
            assert!(got.dropped_users.is_empty());
            let pairs: usize = got.profile.votes().iter().map(|v| v.pair_count()).sum();
            assert!(pairs <= last, "threshold {threshold}");
            last = pairs;
        }
    }
}
