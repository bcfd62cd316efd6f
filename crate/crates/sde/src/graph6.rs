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

//! graph6 codec for simple undirected graphs, following the nauty `formats.txt`
//! layout: a size prefix, then the upper triangle of the adjacency matrix in
//! column order `(0,1), (0,2), (1,2), (0,3), ...`, packed big-endian into
//! 6-bit groups offset by 63.

use sde_core::Graph;
use thiserror::Error;

pub const HEADER: &str = ">>graph6<<";

const SINGLE_BYTE_MAX: usize = 62;
const FOUR_BYTE_MAX: usize = 258_047;
const EIGHT_BYTE_MAX: u64 = 68_719_476_735;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("malformed graph6: {0}")]
    MalformedGraph6(String),
    #[error("graph6 cannot encode weighted links")]
    WeightedUnsupported,
}

fn malformed<T>(why: impl Into<String>) -> Result<T, Graph6Error> {
    Err(Graph6Error::MalformedGraph6(why.into()))
}

/// A parsed graph6 line together with its source text.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph6Record {
    pub raw: String,
    pub graph: Graph,
}

fn group_value(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(0u64, |acc, &b| (acc << 6) | u64::from(b - 63))
}

fn decode_size(bytes: &[u8]) -> Result<(usize, &[u8]), Graph6Error> {
    match bytes {
        [] => malformed("empty line"),
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return malformed("truncated eight-byte size");
            }
            let n = group_value(&rest[..6]);
            if n <= FOUR_BYTE_MAX as u64 {
                return malformed("eight-byte size used for a small graph");
            }
            let n = usize::try_from(n).or_else(|_| malformed("size exceeds address space"))?;
            Ok((n, &rest[6..]))
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return malformed("truncated four-byte size");
            }
            let n = group_value(&rest[..3]) as usize;
            if n <= SINGLE_BYTE_MAX {
                return malformed("four-byte size used for a small graph");
            }
            Ok((n, &rest[3..]))
        }
        [b, rest @ ..] => Ok(((b - 63) as usize, rest)),
    }
}

/// Parses one graph6 line; a leading `>>graph6<<` header and trailing line
/// terminator are tolerated.
pub fn parse_graph6(line: &str) -> Result<Graph, Graph6Error> {
    let line = line.trim_end_matches(['\n', '\r']);
    let line = line.strip_prefix(HEADER).unwrap_or(line);
    let bytes = line.as_bytes();
    if let Some(pos) = bytes.iter().position(|b| !(63..=126).contains(b)) {
        return malformed(format!(
            "byte {} at offset {pos} is outside 63..126",
            bytes[pos]
        ));
    }
    let (n, body) = decode_size(bytes)?;
    if n == 0 {
        return malformed("graph has no nodes");
    }
    let bits = n * (n - 1) / 2;
    let need = bits.div_ceil(6);
    if body.len() != need {
        return malformed(format!(
            "expected {need} adjacency bytes for n={n}, found {}",
            body.len()
        ));
    }
    let mut links = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1 {
                links.push((i, j));
            }
            k += 1;
        }
    }
    if bits % 6 != 0 && (body[need - 1] - 63) & ((1 << (6 - bits % 6)) - 1) != 0 {
        return malformed("nonzero padding bits");
    }
    Ok(Graph::from_unweighted(n, links).expect("decoded links are simple"))
}

/// Encodes an unweighted graph; the size prefix uses the shortest valid form.
pub fn encode_graph6(g: &Graph) -> Result<String, Graph6Error> {
    if !g.is_unweighted() {
        return Err(Graph6Error::WeightedUnsupported);
    }
    let n = g.n();
    let mut out: Vec<u8> = Vec::with_capacity(8 + n * n / 12);
    let push_groups = |out: &mut Vec<u8>, v: u64, groups: u32| {
        for s in (0..groups).rev() {
            out.push(((v >> (6 * s)) & 63) as u8 + 63);
        }
    };
    if n <= SINGLE_BYTE_MAX {
        out.push(n as u8 + 63);
    } else if n <= FOUR_BYTE_MAX {
        out.push(126);
        push_groups(&mut out, n as u64, 3);
    } else {
        assert!(n as u64 <= EIGHT_BYTE_MAX, "graph too large for graph6");
        out.extend([126, 126]);
        push_groups(&mut out, n as u64, 6);
    }
    let (mut acc, mut filled) = (0u8, 0);
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_link(i, j));
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                (acc, filled) = (0, 0);
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 output is ASCII"))
}

/// Parses every non-blank line, keeping 1-based line numbers for failures.
pub fn parse_graph6_lines(text: &str) -> Vec<(usize, Result<Graph6Record, Graph6Error>)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let l = l.trim();
            (
                i + 1,
                parse_graph6(l).map(|graph| Graph6Record {
                    raw: l.to_string(),
                    graph,
                }),
            )
        })
        .collect()
}
