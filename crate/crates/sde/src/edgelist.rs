// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Whitespace-separated weighted edge lists.
//!
//! Each line is `u v [w]` with integer node ids and an optional positive
//! weight (default 1). Blank lines and `#` comments are skipped. A leading
//! `n=<count>` line fixes the node count; otherwise it is the largest id plus one.

use std::collections::HashSet;

use sde_core::Graph;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EdgeListError {
    #[error("line {line}: link {u}-{v} listed twice")]
    DuplicateLink { line: usize, u: usize, v: usize },
    #[error("line {line}: weight {w} is not positive")]
    NegativeWeight { line: usize, w: f64 },
    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: usize },
    #[error("line {line}: {msg}")]
    ParseError { line: usize, msg: String },
}

fn parse_error<T>(line: usize, msg: impl Into<String>) -> Result<T, EdgeListError> {
    Err(EdgeListError::ParseError {
        line,
        msg: msg.into(),
    })
}

/// Parses an edge list with 0-based ids, or 1-based ids when `one_based` is set.
pub fn parse_weighted_edge_list(text: &str, one_based: bool) -> Result<Graph, EdgeListError> {
    let mut declared: Option<usize> = None;
    let mut links: Vec<(usize, usize, f64)> = Vec::new();
    let mut seen = HashSet::new();
    let mut max_id: Option<usize> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or_default().trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("n=") {
            if declared.is_some() || !links.is_empty() {
                return parse_error(line, "`n=` must precede all links and appear once");
            }
            match rest.trim().parse::<usize>() {
                Ok(n) if n > 0 => declared = Some(n),
                _ => return parse_error(line, format!("bad node count `{rest}`")),
            }
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return parse_error(
                line,
                format!("expected `u v [w]`, found {} fields", fields.len()),
            );
        }
        let id = |s: &str| -> Result<usize, EdgeListError> {
            let v: usize = s
                .parse()
                .or_else(|_| parse_error(line, format!("bad node id `{s}`")))?;
            if one_based {
                v.checked_sub(1).ok_or_else(|| EdgeListError::ParseError {
                    line,
                    msg: "node id 0 in a 1-based list".into(),
                })
            } else {
                Ok(v)
            }
        };
        let (u, v) = (id(fields[0])?, id(fields[1])?);
        let w = match fields.get(2) {
            None => 1.0,
            Some(s) => s
                .parse::<f64>()
                .ok()
                .filter(|w| w.is_finite())
                .map_or_else(|| parse_error(line, format!("bad weight `{s}`")), Ok)?,
        };
        if u == v {
            return Err(EdgeListError::SelfLoop { line, node: u });
        }
        if w <= 0.0 {
            return Err(EdgeListError::NegativeWeight { line, w });
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(EdgeListError::DuplicateLink { line, u, v });
        }
        if let Some(n) = declared {
            if u.max(v) >= n {
                return parse_error(line, format!("node id {} exceeds n={n}", u.max(v)));
            }
        }
        max_id = Some(max_id.map_or(u.max(v), |m: usize| m.max(u).max(v)));
        links.push((u, v, w));
    }
    let n = match (declared, max_id) {
        (Some(n), _) => n,
        (None, Some(m)) => m + 1,
        (None, None) => return parse_error(last_line.max(1), "no links and no `n=` directive"),
    };
    Ok(Graph::from_links(n, links).expect("links were validated"))
}

/// Writes `g` as a 0-based edge list with an `n=` directive.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("n={}\n", g.n());
    for (u, v, w) in g.links() {
        if w == 1.0 {
            out.push_str(&format!("{u} {v}\n"));
        } else {
            out.push_str(&format!("{u} {v} {w}\n"));
        }
    }
    out
}
