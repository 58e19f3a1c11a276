//! Line-oriented text dumps of games and arenas.
//!
//! ```text
//! entry v0
//! credit 2
//! V v0 Verifier 0      # provenance
//! E v0 -1 v1
//! ```
//!
//! Arena dumps add a counter column to `V` lines (`inf` for values above the cap).

use std::collections::HashMap;
use std::fmt::Write as _;

use super::arena::{ArenaNode, Counter, FiniteArena};
use super::{GameBuilder, GameError, OneCounterParityGame, Player};

fn player_name(p: Player) -> &'static str {
    match p {
        Player::Verifier => "Verifier",
        Player::Falsifier => "Falsifier",
    }
}

/// Deterministic dump of a game: vertices in id order, edges grouped by source.
pub fn dump_game(g: &OneCounterParityGame) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {} vertices, {} edges", g.vertex_count(), g.edge_count());
    let _ = writeln!(out, "entry v{}", g.entry);
    if g.initial_credit > 0 {
        let _ = writeln!(out, "credit {}", g.initial_credit);
    }
    for (i, v) in g.vertices().iter().enumerate() {
        let _ = write!(out, "V v{i} {} {}", player_name(v.owner), v.color);
        if !v.provenance.is_empty() || !v.labels.is_empty() {
            let _ = write!(out, "  # {}", v.provenance);
            if !v.labels.is_empty() {
                let _ = write!(out, " {{{}}}", v.labels.join(","));
            }
        }
        out.push('\n');
    }
    for (s, w, t) in g.edges() {
        let _ = writeln!(out, "E v{s} {w} v{t}");
    }
    out
}

/// Deterministic dump of a finite arena, one counter column per configuration.
pub fn dump_arena(a: &FiniteArena) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {} arena vertices, cap {}, mode {:?}", a.len(), a.cap, a.mode);
    for i in 0..a.len() {
        let (name, counter) = match a.nodes[i] {
            ArenaNode::Config { vertex, counter: Counter::Exact(c) } => (format!("v{vertex}"), c.to_string()),
            ArenaNode::Config { vertex, counter: Counter::Above } => (format!("v{vertex}"), "inf".to_string()),
            ArenaNode::Resolver { target, weight } => (format!("resolve_v{target}_{weight}"), "inf".to_string()),
            ArenaNode::TopWin => ("top_win".to_string(), "-".to_string()),
            ArenaNode::TopLose => ("top_lose".to_string(), "-".to_string()),
            ArenaNode::Plain => (format!("n{i}"), "-".to_string()),
        };
        let _ = writeln!(out, "V a{i} {} {} {counter}  # {name}", player_name(a.owner[i]), a.color[i]);
    }
    for (s, ts) in a.succ.iter().enumerate() {
        for t in ts {
            let _ = writeln!(out, "E a{s} 0 a{t}");
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DumpError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown vertex `{name}`")]
    UnknownVertex { line: usize, name: String },
    #[error("line {line}: vertex `{name}` declared twice")]
    DuplicateVertex { line: usize, name: String },
    #[error("dump declares no vertices")]
    Empty,
    #[error(transparent)]
    Game(#[from] GameError),
}

/// A parsed game dump together with the vertex names it used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedDump {
    pub game: OneCounterParityGame,
    pub names: Vec<String>,
    /// Counter column of each `V` line, when present and numeric.
    pub counters: Vec<Option<u64>>,
}

fn syntax(line: usize, message: impl Into<String>) -> DumpError {
    DumpError::Syntax { line, message: message.into() }
}

/// Parses the format written by [`dump_game`]. Without an `entry` line the first
/// vertex is the entry. The result is validated.
pub fn parse_game_dump(text: &str) -> Result<ParsedDump, DumpError> {
    let mut b = GameBuilder::new();
    let mut names = Vec::new();
    let mut counters = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<(usize, String, i64, String)> = Vec::new();
    let mut entry: Option<(usize, String)> = None;
    let mut credit = 0u64;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let (body, comment) = match raw.find('#') {
            Some(p) => (&raw[..p], raw[p + 1..].trim()),
            None => (raw, ""),
        };
        let toks: Vec<&str> = body.split_whitespace().collect();
        let Some(&head) = toks.first() else { continue };
        match head {
            "V" => {
                if !(4..=5).contains(&toks.len()) {
                    return Err(syntax(line_no, "expected `V name owner color [counter]`"));
                }
                let owner = match toks[2].to_ascii_lowercase().as_str() {
                    "verifier" => Player::Verifier,
                    "falsifier" => Player::Falsifier,
                    other => return Err(syntax(line_no, format!("unknown owner `{other}`"))),
                };
                let color: u32 = toks[3]
                    .parse()
                    .map_err(|_| syntax(line_no, format!("bad color `{}`", toks[3])))?;
                let counter = match toks.get(4) {
                    None | Some(&"-") | Some(&"inf") => None,
                    Some(c) => Some(c.parse::<u64>().map_err(|_| syntax(line_no, format!("bad counter `{c}`")))?),
                };
                let name = toks[1].to_string();
                if ids.contains_key(&name) {
                    return Err(DumpError::DuplicateVertex { line: line_no, name });
                }
                let id = b.add_vertex(owner, color, comment);
                ids.insert(name.clone(), id);
                names.push(name);
                counters.push(counter);
            }
            "E" => {
                if toks.len() != 4 {
                    return Err(syntax(line_no, "expected `E src weight dst`"));
                }
                let w: i64 = toks[2]
                    .parse()
                    .map_err(|_| syntax(line_no, format!("bad weight `{}`", toks[2])))?;
                edges.push((line_no, toks[1].to_string(), w, toks[3].to_string()));
            }
            "entry" if toks.len() == 2 => entry = Some((line_no, toks[1].to_string())),
            "credit" if toks.len() == 2 => {
                credit = toks[1]
                    .parse()
                    .map_err(|_| syntax(line_no, format!("bad credit `{}`", toks[1])))?;
            }
            other => return Err(syntax(line_no, format!("unexpected `{other}`"))),
        }
    }
    if names.is_empty() {
        return Err(DumpError::Empty);
    }
    let lookup = |line: usize, name: &str| {
        ids.get(name).copied().ok_or_else(|| DumpError::UnknownVertex { line, name: name.to_string() })
    };
    for (line, s, w, t) in &edges {
        let (s, t) = (lookup(*line, s)?, lookup(*line, t)?);
        b.add_edge(s, *w, t);
    }
    let entry = match entry {
        Some((line, name)) => lookup(line, &name)?,
        None => 0,
    };
    let mut game = b.build(entry)?;
    game.initial_credit = credit;
    Ok(ParsedDump { game, names, counters })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut b = GameBuilder::new();
        let v = b.add_vertex(Player::Verifier, 0, "prop p");
        let w = b.add_vertex(Player::Falsifier, 3, "");
        b.add_edge(v, 1, w);
        b.add_edge(w, -1, v);
        b.add_edge(w, 0, w);
        let mut g = b.build(w).unwrap();
        g.initial_credit = 2;
        let text = dump_game(&g);
        let parsed = parse_game_dump(&text).unwrap();
        assert_eq!(parsed.game.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
        assert_eq!(parsed.game.entry, 1);
        assert_eq!(parsed.game.initial_credit, 2);
        assert_eq!(parsed.game.vertex(0).provenance, "prop p");
        assert_eq!(dump_game(&parsed.game), text);
    }

    #[test]
    fn errors_carry_lines() {
        assert_eq!(
            parse_game_dump("V a Verifier 0\nE a 0 b\n"),
            Err(DumpError::UnknownVertex { line: 2, name: "b".into() })
        );
        assert!(matches!(parse_game_dump("V a Someone 0\n"), Err(DumpError::Syntax { line: 1, .. })));
        assert!(matches!(parse_game_dump("V a Verifier 0\nE a -1 a\n"), Err(DumpError::Game(_))));
        assert_eq!(parse_game_dump("# nothing\n"), Err(DumpError::Empty));
    }
}
