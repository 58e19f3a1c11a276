use std::collections::{BTreeSet, HashMap};

use super::{GameModel, ModelError, Transition};
use crate::formula::KEYWORDS;

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_state_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '\''))
}

fn syntax(line: usize, message: impl Into<String>) -> ModelError {
    ModelError::Syntax { line, message: message.into() }
}

/// Parses and validates a model file.
///
/// ```text
/// unit
/// players: ctrl, env
/// state s0 owner=env labels={start}
/// edge s0 -> s0 weight=0
/// ```
pub fn load_model(text: &str) -> Result<GameModel, ModelError> {
    let mut unit = false;
    let mut players: Option<Vec<String>> = None;
    let mut states: Vec<String> = Vec::new();
    let mut owners: Vec<usize> = Vec::new();
    let mut labels: Vec<BTreeSet<String>> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<(usize, String, i64, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if body == "unit" {
            if players.is_some() || !states.is_empty() {
                return Err(syntax(line, "`unit` must come before all declarations"));
            }
            unit = true;
        } else if let Some(rest) = body.strip_prefix("players:") {
            if players.is_some() {
                return Err(syntax(line, "players declared twice"));
            }
            let mut ps = Vec::new();
            for p in rest.split(',').map(str::trim) {
                if !is_ident(p) {
                    return Err(syntax(line, format!("bad player name `{p}`")));
                }
                if KEYWORDS.contains(&p) {
                    return Err(ModelError::ReservedName { line, name: p.to_string() });
                }
                if ps.iter().any(|q| q == p) {
                    return Err(syntax(line, format!("player `{p}` listed twice")));
                }
                ps.push(p.to_string());
            }
            players = Some(ps);
        } else if let Some(rest) = body.strip_prefix("state ") {
            let ps = players.as_ref().ok_or_else(|| syntax(line, "`players:` must precede states"))?;
            let (name, owner, ls) = parse_state(line, rest)?;
            let owner_id = ps
                .iter()
                .position(|p| *p == owner)
                .ok_or(ModelError::UnknownPlayer { line, name: owner.clone() })?;
            if let Some(&prev) = index.get(&name) {
                if owners[prev] != owner_id {
                    return Err(ModelError::TwoOwners { line, name });
                }
                return Err(ModelError::DuplicateState { line, name });
            }
            index.insert(name.clone(), states.len());
            states.push(name);
            owners.push(owner_id);
            labels.push(ls);
        } else if let Some(rest) = body.strip_prefix("edge ") {
            let (src, dst, w) = parse_edge(line, rest)?;
            if unit && w.abs() > 1 {
                return Err(ModelError::NonUnitWeight { line, weight: w });
            }
            edges.push((line, src, w, dst));
        } else {
            return Err(syntax(line, format!("unrecognised line `{body}`")));
        }
    }

    let players = players.ok_or(ModelError::NoPlayers)?;
    let mut transitions = Vec::with_capacity(edges.len());
    for (line, src, w, dst) in edges {
        let find = |n: &String| index.get(n).copied().ok_or(ModelError::UnknownState { line, name: n.clone() });
        transitions.push(Transition { source: find(&src)?, weight: w, target: find(&dst)? });
    }
    GameModel::from_parts(players, states, owners, labels, transitions, unit)
}

fn parse_state(line: usize, rest: &str) -> Result<(String, String, BTreeSet<String>), ModelError> {
    let rest = rest.trim();
    let (name, attrs) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
    if !is_state_name(name) {
        return Err(syntax(line, format!("bad state name `{name}`")));
    }
    let mut owner = None;
    let mut labels = BTreeSet::new();
    let mut attrs = attrs.trim();
    while !attrs.is_empty() {
        if let Some(r) = attrs.strip_prefix("owner=") {
            let (o, tail) = r.split_once(char::is_whitespace).unwrap_or((r, ""));
            owner = Some(o.to_string());
            attrs = tail.trim_start();
        } else if let Some(r) = attrs.strip_prefix("labels={") {
            let (inner, tail) = r.split_once('}').ok_or_else(|| syntax(line, "unterminated label set"))?;
            for l in inner.split(',').map(str::trim).filter(|l| !l.is_empty()) {
                if !is_ident(l) {
                    return Err(syntax(line, format!("bad label `{l}`")));
                }
                if KEYWORDS.contains(&l) {
                    return Err(ModelError::ReservedName { line, name: l.to_string() });
                }
                labels.insert(l.to_string());
            }
            attrs = tail.trim_start();
        } else {
            return Err(syntax(line, format!("unexpected `{attrs}`")));
        }
    }
    let owner = owner.ok_or_else(|| syntax(line, format!("state `{name}` has no owner")))?;
    Ok((name.to_string(), owner, labels))
}

fn parse_edge(line: usize, rest: &str) -> Result<(String, String, i64), ModelError> {
    let toks: Vec<&str> = rest.split_whitespace().collect();
    match toks.as_slice() {
        [src, "->", dst, w] => {
            let w = w
                .strip_prefix("weight=")
                .ok_or_else(|| syntax(line, "expected `weight=INT`"))?;
            let w: i64 = w.parse().map_err(|_| syntax(line, format!("bad weight `{w}`")))?;
            Ok((src.to_string(), dst.to_string(), w))
        }
        _ => Err(syntax(line, "expected `edge SRC -> DST weight=INT`")),
    }
}
