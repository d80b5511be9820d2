//! Plain-text fan documents.
//!
//! ```text
//! # the projective plane
//! rank: 2
//! rays:
//!   [1,0]
//!   [0,1]
//!   [-1,-1]
//! max_cones:
//!   [0,1]
//!   [1,2]
//!   [2,0]
//! ```
//!
//! `#` starts a comment; whitespace is insignificant.

use thiserror::Error;

use crate::error::Error;
use crate::fan::Fan;
use crate::lattice_linalg::IntVector;
use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("field `{field}`: {message}")]
    Semantic { field: String, message: String },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Preamble,
    Rays,
    Cones,
}

/// Parses a fan document. Non-primitive rays are normalized by the fan
/// constructor.
pub fn parse_fan(text: &str) -> Result<Fan, FanParseError> {
    let mut rank: Option<usize> = None;
    let mut rays: Option<Vec<IntVector>> = None;
    let mut cones: Option<Vec<Vec<usize>>> = None;
    let mut section = Section::Preamble;

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let compact: String = content.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            continue;
        }
        let syntax = |message: String| FanParseError::Syntax { line: line_no, message };
        let rest = if let Some(v) = compact.strip_prefix("rank:") {
            if rank.is_some() {
                return Err(syntax("duplicate `rank`".into()));
            }
            let n = v
                .parse::<usize>()
                .map_err(|_| syntax(format!("rank must be a non-negative integer, got `{v}`")))?;
            rank = Some(n);
            section = Section::Preamble;
            continue;
        } else if let Some(v) = compact.strip_prefix("rays:") {
            if rays.is_some() {
                return Err(syntax("duplicate `rays`".into()));
            }
            rays = Some(Vec::new());
            section = Section::Rays;
            v.to_string()
        } else if let Some(v) = compact.strip_prefix("max_cones:") {
            if cones.is_some() {
                return Err(syntax("duplicate `max_cones`".into()));
            }
            cones = Some(Vec::new());
            section = Section::Cones;
            v.to_string()
        } else {
            compact
        };
        for item in split_brackets(&rest).map_err(&syntax)? {
            match section {
                Section::Preamble => {
                    return Err(syntax(format!(
                        "unexpected `[{}]` outside `rays`/`max_cones`",
                        item.join(",")
                    )))
                }
                Section::Rays => {
                    let v = item
                        .iter()
                        .map(|s| s.parse::<BigInt>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| syntax(format!("ray entries must be integers: {item:?}")))?;
                    rays.as_mut().expect("section open").push(IntVector(v));
                }
                Section::Cones => {
                    let v = item
                        .iter()
                        .map(|s| s.parse::<usize>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| syntax(format!("cone entries must be ray indices: {item:?}")))?;
                    cones.as_mut().expect("section open").push(v);
                }
            }
        }
    }

    let missing =
        |field: &str| FanParseError::Semantic { field: field.to_string(), message: "missing".to_string() };
    let rank = rank.ok_or_else(|| missing("rank"))?;
    let rays = rays.ok_or_else(|| missing("rays"))?;
    let cones = cones.ok_or_else(|| missing("max_cones"))?;
    Fan::new(rank, rays, cones).map_err(semantic)
}

fn semantic(e: Error) -> FanParseError {
    let (field, message) = match &e {
        Error::ZeroRank | Error::RankTooLarge(_) => ("rank", e.to_string()),
        Error::ZeroRay(i) => ("rays", format!("zero ray at index {i}")),
        Error::NoRays | Error::RayDimension { .. } | Error::DuplicateRay { .. } => ("rays", e.to_string()),
        _ => ("max_cones", e.to_string()),
    };
    FanParseError::Semantic { field: field.to_string(), message }
}

/// Splits `[a,b][c]` into `[["a","b"],["c"]]`.
fn split_brackets(s: &str) -> Result<Vec<Vec<String>>, String> {
    let mut out = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let Some(body) = rest.strip_prefix('[') else {
            return Err(format!("expected `[`, found `{rest}`"));
        };
        let Some(end) = body.find(']') else {
            return Err("unterminated `[`".to_string());
        };
        let inner = &body[..end];
        let items =
            if inner.is_empty() { Vec::new() } else { inner.split(',').map(str::to_string).collect() };
        if items.iter().any(String::is_empty) {
            return Err(format!("empty entry in `[{inner}]`"));
        }
        out.push(items);
        rest = body[end + 1..].trim_start_matches(',');
    }
    Ok(out)
}

/// Serializes a fan in the document format accepted by [`parse_fan`].
pub fn to_text(fan: &Fan) -> String {
    let mut s = format!("rank: {}\nrays:\n", fan.rank());
    for r in fan.rays() {
        s.push_str(&format!("  {r}\n"));
    }
    s.push_str("max_cones:\n");
    for c in fan.max_cones() {
        let idx: Vec<String> = c.ray_indices().iter().map(usize::to_string).collect();
        s.push_str(&format!("  [{}]\n", idx.join(",")));
    }
    s
}
