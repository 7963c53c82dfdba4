//! Verifies that a finite configuration is a valid tiling: matching colours
//! across every shared edge and blank edges facing the blank background.

use std::fmt;

use thiserror::Error;

use crate::harp::Configuration;
use crate::heptagrid::{AdjacencyMap, Neighbor, TileAddress, SIDES};
use crate::reduction::{EdgeColor, TileSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    ColorMismatch {
        a: TileAddress,
        edge_a: u8,
        b: TileAddress,
        edge_b: u8,
        color_a: EdgeColor,
        color_b: EdgeColor,
    },
    /// A coloured edge facing a cell that holds the blank tile.
    NonBlankBoundary {
        address: TileAddress,
        edge: u8,
        color: EdgeColor,
    },
    UnknownTile {
        address: TileAddress,
        tile: String,
    },
    EmptyConfiguration,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ColorMismatch {
                a,
                edge_a,
                b,
                edge_b,
                color_a,
                color_b,
            } => write!(
                f,
                "colour mismatch: {a} edge {edge_a} is {color_a}, {b} edge {edge_b} is {color_b}"
            ),
            Violation::NonBlankBoundary { address, edge, color } => {
                write!(f, "{address} edge {edge} is {color} but faces a blank cell")
            }
            Violation::UnknownTile { address, tile } => write!(f, "{address} holds unknown tile {tile}"),
            Violation::EmptyConfiguration => write!(f, "configuration has no non-blank tile"),
        }
    }
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::ColorMismatch { .. } => "ColorMismatch",
            Violation::NonBlankBoundary { .. } => "NonBlankBoundary",
            Violation::UnknownTile { .. } => "UnknownTile",
            Violation::EmptyConfiguration => "EmptyConfiguration",
        }
    }

    /// Cell the violation is reported at, if any.
    pub fn address(&self) -> Option<&TileAddress> {
        match self {
            Violation::ColorMismatch { a, .. } => Some(a),
            Violation::NonBlankBoundary { address, .. } | Violation::UnknownTile { address, .. } => Some(address),
            Violation::EmptyConfiguration => None,
        }
    }

    pub fn edge(&self) -> Option<u8> {
        match self {
            Violation::ColorMismatch { edge_a, .. } => Some(*edge_a),
            Violation::NonBlankBoundary { edge, .. } => Some(*edge),
            _ => None,
        }
    }

    /// `VIOLATION <kind> <address> <edge> <detail>`, with `-` for a missing
    /// address or edge.
    pub fn line(&self) -> String {
        let address = self.address().map_or("-".to_string(), ToString::to_string);
        let edge = self.edge().map_or("-".to_string(), |e| e.to_string());
        format!("VIOLATION {} {address} {edge} {self}", self.kind())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("patch of {levels} levels does not surround {address}; use a deeper patch")]
    PatchTooSmall { address: String, levels: u32 },
}

/// Returns every violation in `cfg`; an empty list means a valid finite
/// tiling. Each placed cell must be an interior cell of `patch`.
pub fn check(cfg: &Configuration, ts: &TileSet, patch: &AdjacencyMap) -> Result<Vec<Violation>, CheckError> {
    let protos = ts.by_id();
    let mut slots = vec![None; patch.len()];
    let mut out = Vec::new();
    for (address, placement) in &cfg.cells {
        let index = patch
            .index_of(address)
            .filter(|&i| patch.is_interior(i))
            .ok_or_else(|| CheckError::PatchTooSmall {
                address: address.to_string(),
                levels: patch.levels(),
            })?;
        match protos.get(placement.tile.as_str()) {
            Some(p) if p.id == ts.blank.id => {}
            Some(p) => slots[index] = Some((*p, placement.rot)),
            None => out.push(Violation::UnknownTile {
                address: address.clone(),
                tile: placement.tile.clone(),
            }),
        }
    }
    if slots.iter().all(Option::is_none) && out.is_empty() {
        out.push(Violation::EmptyConfiguration);
    }

    for (i, slot) in slots.iter().enumerate() {
        let Some((p, rot)) = slot else { continue };
        for e in 0..SIDES {
            let color = p.edge(e, *rot);
            let Neighbor::Tile { index: j, edge: f } = patch.neighbor(i, e) else {
                unreachable!("placed cells are interior");
            };
            match &slots[j] {
                Some((q, qrot)) => {
                    let other = q.edge(f as usize, *qrot);
                    // each shared edge is reported once, from its lower end
                    if color != other && (i, e) < (j, f as usize) {
                        out.push(Violation::ColorMismatch {
                            a: patch.tile(i).address.clone(),
                            edge_a: e as u8,
                            b: patch.tile(j).address.clone(),
                            edge_b: f,
                            color_a: color.clone(),
                            color_b: other.clone(),
                        });
                    }
                }
                None if !color.is_blank() => out.push(Violation::NonBlankBoundary {
                    address: patch.tile(i).address.clone(),
                    edge: e as u8,
                    color: color.clone(),
                }),
                None => {}
            }
        }
    }
    Ok(out)
}

/// True when `cfg` is a valid tiling with at least one non-blank tile.
pub fn is_finite_solution(cfg: &Configuration, ts: &TileSet, patch: &AdjacencyMap) -> Result<bool, CheckError> {
    Ok(check(cfg, ts, patch)?.is_empty())
}

/// Smallest patch depth that surrounds every placed cell.
pub fn levels_needed(cfg: &Configuration) -> u32 {
    cfg.cells
        .keys()
        .map(|a| if a.is_center() { 0 } else { a.level() + 1 })
        .max()
        .unwrap_or(0)
}
