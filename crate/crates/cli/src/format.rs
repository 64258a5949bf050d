//! File formats: the `TEDSC v1` instance text format and its JSON mirror,
//! the walk-per-line schedule format and the ground-truth sidecar.
//!
//! Instance text format, one item per line, `#` starting a comment:
//!
//! ```text
//! TEDSC v1
//! n 3
//! edge 0 1
//! edge 1 2
//! demand 0 1 1
//! demand 1 2 3
//! param k 1
//! param h none
//! param variant unconstrained
//! ```
//!
//! Schedules hold one walk per line as unit-step `(vertex,time)` pairs,
//! for example `(0,1) (1,2) (1,3) (2,4)`.

use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt::{self, Write as _};
use tedsc::generators::GroundTruth;
use tedsc::{Demand, DirectedGraph, Instance, Schedule, TemporalWalk, Time, Variant, VertexId};
use thiserror::Error;

pub const HEADER: &str = "TEDSC v1";

/// A malformed input file. Lines and columns are 1-based; line 0 refers
/// to the file as a whole.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    fn new(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Self { line, col, msg: msg.into() }
    }
}

/// Whitespace-separated token with its 1-based column.
#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    col: usize,
}

/// Non-empty lines with comments removed, as (line number, tokens).
fn tokenized(text: &str) -> impl Iterator<Item = (usize, Vec<Token<'_>>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (j, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(j),
                (true, Some(s)) => {
                    tokens.push(Token { text: &line[s..j], col: line[..s].chars().count() + 1 });
                    start = None;
                }
                _ => {}
            }
        }
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn number<T: std::str::FromStr>(line: usize, tok: Token<'_>, what: &str) -> Result<T, ParseError> {
    tok.text.parse().map_err(|_| ParseError::new(line, tok.col, format!("expected {what}, found `{}`", tok.text)))
}

fn arity(line: usize, tokens: &[Token<'_>], n: usize, usage: &str) -> Result<(), ParseError> {
    match tokens.len().cmp(&n) {
        std::cmp::Ordering::Equal => Ok(()),
        std::cmp::Ordering::Less => {
            let last = tokens.last().unwrap();
            let col = last.col + last.text.chars().count();
            Err(ParseError::new(line, col, format!("missing value, expected `{usage}`")))
        }
        std::cmp::Ordering::Greater => {
            Err(ParseError::new(line, tokens[n].col, format!("unexpected `{}`, expected `{usage}`", tokens[n].text)))
        }
    }
}

/// Parses an instance in the text format, or in the JSON mirror when the
/// first non-blank character is `{`.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    if text.trim_start().starts_with('{') {
        parse_instance_json(text)
    } else {
        parse_instance_text(text)
    }
}

pub fn parse_instance_text(text: &str) -> Result<Instance, ParseError> {
    let mut lines = tokenized(text);
    match lines.next() {
        Some((line, t)) if t.len() == 2 && t[0].text == "TEDSC" && t[1].text == "v1" => {
            let _ = line;
        }
        Some((line, t)) => return Err(ParseError::new(line, t[0].col, format!("expected header `{HEADER}`"))),
        None => return Err(ParseError::new(1, 1, format!("empty file, expected header `{HEADER}`"))),
    }
    let mut n: Option<usize> = None;
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    let mut edge_set = HashSet::new();
    let mut demands = Vec::new();
    let mut demand_set = HashSet::new();
    let (mut k, mut h, mut variant) = (None, None, None);
    let mut h_at = (0, 0);
    let last_line = text.lines().count().max(1);
    for (line, t) in lines {
        let vertex = |tok: Token<'_>, n: Option<usize>| -> Result<VertexId, ParseError> {
            let Some(n) = n else { return Err(ParseError::new(line, tok.col, "`n` must come before edges and demands")) };
            let v: VertexId = number(line, tok, "a vertex id")?;
            if v >= n {
                return Err(ParseError::new(line, tok.col, format!("vertex {v} out of range for n = {n}")));
            }
            Ok(v)
        };
        match t[0].text {
            "n" => {
                arity(line, &t, 2, "n <int>")?;
                if n.is_some() {
                    return Err(ParseError::new(line, 1, "`n` given twice"));
                }
                n = Some(number(line, t[1], "a vertex count")?);
            }
            "edge" => {
                arity(line, &t, 3, "edge <u> <v>")?;
                let (u, v) = (vertex(t[1], n)?, vertex(t[2], n)?);
                if u == v {
                    return Err(ParseError::new(line, t[2].col, format!("self-loop on vertex {u}")));
                }
                if !edge_set.insert((u, v)) {
                    return Err(ParseError::new(line, t[1].col, format!("duplicate edge ({u}, {v})")));
                }
                edges.push((u, v));
            }
            "demand" => {
                arity(line, &t, 4, "demand <u> <v> <t>")?;
                let (u, v) = (vertex(t[1], n)?, vertex(t[2], n)?);
                let time: Time = number(line, t[3], "a time step")?;
                if !edge_set.contains(&(u, v)) {
                    return Err(ParseError::new(line, t[1].col, format!("({u}, {v}) is not a declared edge")));
                }
                if time == 0 {
                    return Err(ParseError::new(line, t[3].col, "time steps start at 1"));
                }
                if !demand_set.insert((u, v, time)) {
                    return Err(ParseError::new(line, t[1].col, format!("duplicate demand ({u}, {v}, {time})")));
                }
                demands.push(Demand::new(u, v, time));
            }
            "param" => {
                if t.len() < 2 {
                    return Err(ParseError::new(line, t[0].col + 5, "expected `param <k|h|variant> <value>`"));
                }
                match t[1].text {
                    "k" => {
                        arity(line, &t, 3, "param k <int>")?;
                        k = Some(number::<usize>(line, t[2], "a walk count")?);
                    }
                    "h" => {
                        arity(line, &t, 3, "param h <int|none>")?;
                        h = Some(match t[2].text {
                            "none" => None,
                            _ => Some(number::<u64>(line, t[2], "a bound or `none`")?),
                        });
                        h_at = (line, t[2].col);
                    }
                    "variant" => {
                        arity(line, &t, 3, "param variant <unconstrained|length|lifespan>")?;
                        variant = Some(t[2].text.parse::<Variant>().map_err(|e| ParseError::new(line, t[2].col, e))?);
                    }
                    other => return Err(ParseError::new(line, t[1].col, format!("unknown parameter `{other}`"))),
                }
            }
            other => return Err(ParseError::new(line, t[0].col, format!("unknown directive `{other}`"))),
        }
    }
    let missing = |what: &str| ParseError::new(last_line, 1, format!("missing `{what}`"));
    let n = n.ok_or_else(|| missing("n <int>"))?;
    let k = k.ok_or_else(|| missing("param k <int>"))?;
    let variant = variant.ok_or_else(|| missing("param variant"))?;
    let h = h.flatten();
    match (variant, h) {
        (Variant::Unconstrained, Some(_)) => {
            return Err(ParseError::new(h_at.0, h_at.1, "the unconstrained variant takes `param h none`"))
        }
        (Variant::Length | Variant::Lifespan, None) => {
            let (line, col) = if h_at.0 == 0 { (last_line, 1) } else { h_at };
            return Err(ParseError::new(line, col, format!("the {variant} variant needs `param h <int>`")));
        }
        _ => {}
    }
    let graph = DirectedGraph::new(n, edges).map_err(|e| ParseError::new(0, 0, e.to_string()))?;
    Instance::new(graph, demands, k, h, variant).map_err(|e| ParseError::new(0, 0, e.to_string()))
}

/// Canonical text form: header, `n`, edges in graph order, demands by
/// time, then the parameters.
pub fn write_instance(inst: &Instance) -> String {
    let mut s = format!("{HEADER}\nn {}\n", inst.n());
    for &(u, v) in inst.graph().edges() {
        let _ = writeln!(s, "edge {u} {v}");
    }
    for d in inst.demands() {
        let _ = writeln!(s, "demand {} {} {}", d.u, d.v, d.t);
    }
    let h = inst.h().map_or("none".to_string(), |h| h.to_string());
    let _ = write!(s, "param k {}\nparam h {h}\nparam variant {}\n", inst.k(), inst.variant());
    s
}

/// JSON mirror of the text format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceJson {
    pub format: String,
    pub n: usize,
    pub edges: Vec<(VertexId, VertexId)>,
    pub demands: Vec<(VertexId, VertexId, Time)>,
    pub k: usize,
    pub h: Option<u64>,
    pub variant: String,
}

impl From<&Instance> for InstanceJson {
    fn from(inst: &Instance) -> Self {
        Self {
            format: HEADER.to_string(),
            n: inst.n(),
            edges: inst.graph().edges().to_vec(),
            demands: inst.demands().iter().map(|d| (d.u, d.v, d.t)).collect(),
            k: inst.k(),
            h: inst.h(),
            variant: inst.variant().name().to_string(),
        }
    }
}

pub fn write_instance_json(inst: &Instance) -> String {
    let mut s = serde_json::to_string_pretty(&InstanceJson::from(inst)).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn parse_instance_json(text: &str) -> Result<Instance, ParseError> {
    let j: InstanceJson =
        serde_json::from_str(text).map_err(|e| ParseError::new(e.line(), e.column(), e.to_string()))?;
    if j.format != HEADER {
        return Err(ParseError::new(0, 0, format!("expected format `{HEADER}`, found `{}`", j.format)));
    }
    let whole = |e: &dyn fmt::Display| ParseError::new(0, 0, e.to_string());
    let variant: Variant = j.variant.parse().map_err(|e: String| whole(&e))?;
    let graph = DirectedGraph::new(j.n, j.edges).map_err(|e| whole(&e))?;
    let demands = j.demands.into_iter().map(|(u, v, t)| Demand::new(u, v, t));
    Instance::new(graph, demands, j.k, j.h, variant).map_err(|e| whole(&e))
}

/// Parses a schedule: one walk per line as unit-step `(v,t)` pairs.
pub fn parse_schedule(text: &str) -> Result<Schedule, ParseError> {
    let mut walks = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut steps: Vec<(VertexId, Time)> = Vec::new();
        let mut rest = content;
        let col_of = |r: &str| content[..content.len() - r.len()].chars().count() + 1;
        loop {
            rest = rest.trim_start();
            if rest.is_empty() {
                break;
            }
            if !rest.starts_with('(') {
                return Err(ParseError::new(line, col_of(rest), "expected `(vertex,time)`"));
            }
            let Some(close) = rest.find(')') else {
                return Err(ParseError::new(line, col_of(rest), "unclosed `(`"));
            };
            let inner = &rest[1..close];
            let Some((a, b)) = inner.split_once(',') else {
                return Err(ParseError::new(line, col_of(rest) + 1, "expected `vertex,time` inside parentheses"));
            };
            let at = col_of(rest) + 1;
            let v = a.trim().parse().map_err(|_| ParseError::new(line, at, format!("bad vertex `{}`", a.trim())))?;
            let t = b.trim().parse().map_err(|_| ParseError::new(line, at, format!("bad time `{}`", b.trim())))?;
            steps.push((v, t));
            rest = &rest[close + 1..];
        }
        if steps.is_empty() {
            continue;
        }
        let walk = TemporalWalk::from_steps(&steps).map_err(|e| ParseError::new(line, 1, e.to_string()))?;
        walks.push(walk);
    }
    Ok(Schedule::new(walks))
}

/// One walk per line in unit-step expanded form.
pub fn write_schedule(sched: &Schedule) -> String {
    let mut s = String::new();
    for w in sched.walks() {
        let steps: Vec<String> = w.steps().map(|(v, t)| format!("({v},{t})")).collect();
        s.push_str(&steps.join(" "));
        s.push('\n');
    }
    s
}

pub fn write_truth(truth: GroundTruth) -> String {
    format!("truth {truth}\n")
}

pub fn parse_truth(text: &str) -> Result<GroundTruth, ParseError> {
    let mut lines = tokenized(text);
    let Some((line, t)) = lines.next() else { return Err(ParseError::new(1, 1, "expected `truth <value>`")) };
    if t[0].text != "truth" {
        return Err(ParseError::new(line, t[0].col, "expected `truth <value>`"));
    }
    arity(line, &t, 2, "truth <feasible|infeasible|unknown>")?;
    let truth = match t[1].text {
        "feasible" => GroundTruth::Feasible,
        "infeasible" => GroundTruth::Infeasible,
        "unknown" => GroundTruth::Unknown,
        other => return Err(ParseError::new(line, t[1].col, format!("unknown truth value `{other}`"))),
    };
    if let Some((line, t)) = lines.next() {
        return Err(ParseError::new(line, t[0].col, "unexpected content after the truth line"));
    }
    Ok(truth)
}
