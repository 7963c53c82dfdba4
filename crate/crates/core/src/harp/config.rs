//! Text form of a configuration:
//!
//! ```text
//! config v1
//! tileset <path>
//! cell <address> tile=<id> rot=<0..6>
//! ```
//!
//! The `tileset` line is optional. Cells are written in address order;
//! addresses use the `C` / `s<k>:<i>.<i>...` form.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::heptagrid::{TileAddress, SIDES};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    pub tile: String,
    pub rot: u8,
}

/// Finitely many non-blank tiles; every other cell holds the blank tile.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Configuration {
    pub tileset: Option<String>,
    pub cells: BTreeMap<TileAddress, Placement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("missing `config v1` header")]
    Header,
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("line {line}: cell {address} placed twice")]
    Duplicate { line: usize, address: String },
}

impl Configuration {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn place(&mut self, address: TileAddress, tile: impl Into<String>, rot: u8) {
        self.cells.insert(
            address,
            Placement {
                tile: tile.into(),
                rot: rot % SIDES as u8,
            },
        );
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, address: &TileAddress) -> Option<&Placement> {
        self.cells.get(address)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("config v1\n");
        if let Some(ts) = &self.tileset {
            let _ = writeln!(out, "tileset {ts}");
        }
        for (a, p) in &self.cells {
            let _ = writeln!(out, "cell {a} tile={} rot={}", p.tile, p.rot);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Configuration, ConfigError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some((_, "config v1")) => {}
            _ => return Err(ConfigError::Header),
        }
        let mut cfg = Configuration::new();
        for (line, l) in lines {
            let err = |reason: String| ConfigError::Syntax { line, reason };
            let words: Vec<&str> = l.split_whitespace().collect();
            match words.as_slice() {
                ["tileset", path] if cfg.tileset.is_none() && cfg.cells.is_empty() => {
                    cfg.tileset = Some(path.to_string());
                }
                ["cell", addr, tile, rot] => {
                    let address: TileAddress = addr.parse().map_err(|e| err(format!("{e}")))?;
                    let tile = tile
                        .strip_prefix("tile=")
                        .filter(|t| !t.is_empty())
                        .ok_or_else(|| err("expected tile=<id>".into()))?;
                    let rot: u8 = rot
                        .strip_prefix("rot=")
                        .and_then(|r| r.parse().ok())
                        .filter(|&r| (r as usize) < SIDES)
                        .ok_or_else(|| err("expected rot=<0..6>".into()))?;
                    if cfg.cells.contains_key(&address) {
                        return Err(ConfigError::Duplicate {
                            line,
                            address: address.to_string(),
                        });
                    }
                    cfg.place(address, tile, rot);
                }
                _ => return Err(err(format!("unrecognised line {l:?}"))),
            }
        }
        Ok(cfg)
    }
}
