//! Text form of a tile set:
//!
//! ```text
//! tileset v1
//! blank <id>
//! tile <id> role=<role> edges=<c0>,<c1>,<c2>,<c3>,<c4>,<c5>,<c6>
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use thiserror::Error;

use crate::heptagrid::SIDES;

use super::{split_edge_list, EdgeColor, Role, TilePrototype, TileSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TilesetError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("missing `tileset v1` header")]
    Header,
    #[error("missing `blank` line")]
    NoBlank,
}

pub(crate) fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '-' | '.'))
}

impl TileSet {
    pub fn to_text(&self) -> String {
        let mut out = String::from("tileset v1\n");
        let _ = writeln!(out, "blank {}", self.blank.id);
        for p in &self.prototypes {
            let edges: Vec<String> = p.edges.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "tile {} role={} edges={}", p.id, p.role, edges.join(","));
        }
        out
    }

    pub fn parse(text: &str) -> Result<TileSet, TilesetError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some((_, "tileset v1")) => {}
            _ => return Err(TilesetError::Header),
        }
        let mut blank = None;
        let mut prototypes = Vec::new();
        for (line, l) in lines {
            let err = |reason: String| TilesetError::Syntax { line, reason };
            let mut words = l.split_whitespace();
            match words.next() {
                Some("blank") => {
                    let id = words.next().ok_or_else(|| err("blank needs an id".into()))?;
                    if !valid_id(id) || words.next().is_some() || blank.is_some() {
                        return Err(err(format!("bad blank line {l:?}")));
                    }
                    blank = Some(TilePrototype::new(
                        id,
                        Role::Blank,
                        std::array::from_fn(|_| EdgeColor::blank()),
                    ));
                }
                Some("tile") => {
                    let id = words.next().ok_or_else(|| err("tile needs an id".into()))?;
                    if !valid_id(id) {
                        return Err(err(format!("bad id {id:?}")));
                    }
                    let role = words
                        .next()
                        .and_then(|w| w.strip_prefix("role="))
                        .ok_or_else(|| err("expected role=<role>".into()))?
                        .parse::<Role>()
                        .map_err(err)?;
                    let list = words
                        .next()
                        .and_then(|w| w.strip_prefix("edges="))
                        .ok_or_else(|| err("expected edges=<list>".into()))?;
                    if words.next().is_some() {
                        return Err(err("trailing text".into()));
                    }
                    let colors = split_edge_list(list)
                        .iter()
                        .map(|t| t.parse::<EdgeColor>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(err)?;
                    let edges: [EdgeColor; SIDES] = colors
                        .try_into()
                        .map_err(|v: Vec<_>| err(format!("expected {SIDES} edges, found {}", v.len())))?;
                    prototypes.push(TilePrototype::new(id, role, edges));
                }
                _ => return Err(err(format!("unrecognised line {l:?}"))),
            }
        }
        Ok(TileSet {
            prototypes,
            blank: blank.ok_or(TilesetError::NoBlank)?,
        })
    }
}
