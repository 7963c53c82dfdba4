//! Compiles a Turing machine into a finite set of heptagonal prototiles
//! whose finite tilings encode halting computations.

mod color;
mod compile;
mod format;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::heptagrid::SIDES;

pub use color::{split_edge_list, EdgeColor, Flow, Tag};
pub use compile::{compile, prototile_census};
pub use format::TilesetError;

/// What part of the construction a prototile plays.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Blank,
    Root,
    RootHalt,
    BorderL,
    BorderR,
    BorderRExec,
    Inside,
    ChordPass,
    ChordDepart,
    ChordExec,
    TransitSignal,
    SilverEmit,
    SilverTransit,
    SilverChordCross,
    CornerLeft,
    CornerRight,
    BorderSilverEnd,
}

impl Role {
    pub const ALL: [Role; 17] = [
        Role::Blank,
        Role::Root,
        Role::RootHalt,
        Role::BorderL,
        Role::BorderR,
        Role::BorderRExec,
        Role::Inside,
        Role::ChordPass,
        Role::ChordDepart,
        Role::ChordExec,
        Role::TransitSignal,
        Role::SilverEmit,
        Role::SilverTransit,
        Role::SilverChordCross,
        Role::CornerLeft,
        Role::CornerRight,
        Role::BorderSilverEnd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Role::Blank => "blank",
            Role::Root => "root",
            Role::RootHalt => "rootHalt",
            Role::BorderL => "borderL",
            Role::BorderR => "borderR",
            Role::BorderRExec => "borderRExec",
            Role::Inside => "inside",
            Role::ChordPass => "chordPass",
            Role::ChordDepart => "chordDepart",
            Role::ChordExec => "chordExec",
            Role::TransitSignal => "transitSignal",
            Role::SilverEmit => "silverEmit_i",
            Role::SilverTransit => "silverTransit",
            Role::SilverChordCross => "silverChordCross",
            Role::CornerLeft => "cornerLeft_m",
            Role::CornerRight => "cornerRight_n",
            Role::BorderSilverEnd => "borderSilverEnd",
        }
    }

    /// Border roles sit on the rim of the harp and may show blank edges.
    pub fn is_border(self) -> bool {
        !matches!(
            self,
            Role::Inside | Role::ChordPass | Role::ChordDepart | Role::ChordExec | Role::TransitSignal
        )
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Role::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown role {s:?}"))
    }
}

/// A prototile: seven edge colours, counterclockwise from edge 0, which is
/// the father edge when the tile is placed unrotated in a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TilePrototype {
    pub id: String,
    pub role: Role,
    pub edges: [EdgeColor; SIDES],
}

impl TilePrototype {
    pub fn new(id: impl Into<String>, role: Role, edges: [EdgeColor; SIDES]) -> Self {
        TilePrototype {
            id: id.into(),
            role,
            edges,
        }
    }

    /// Colour shown on cell edge `e` when placed with rotation `rot`:
    /// prototype edge `i` lands on cell edge `(i + rot) mod 7`.
    pub fn edge(&self, e: usize, rot: u8) -> &EdgeColor {
        &self.edges[(e + SIDES - rot as usize % SIDES) % SIDES]
    }

    pub fn rotated(&self, rot: u8) -> [EdgeColor; SIDES] {
        std::array::from_fn(|e| self.edge(e, rot).clone())
    }

    pub fn is_all_blank(&self) -> bool {
        self.edges.iter().all(EdgeColor::is_blank)
    }
}

/// The compiled prototiles together with the distinguished blank tile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TileSet {
    pub prototypes: Vec<TilePrototype>,
    pub blank: TilePrototype,
}

impl TileSet {
    pub fn len(&self) -> usize {
        self.prototypes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prototypes.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&TilePrototype> {
        if id == self.blank.id {
            return Some(&self.blank);
        }
        self.prototypes.iter().find(|p| p.id == id)
    }

    pub fn by_id(&self) -> HashMap<&str, &TilePrototype> {
        let mut map: HashMap<&str, &TilePrototype> = self.prototypes.iter().map(|p| (p.id.as_str(), p)).collect();
        map.insert(self.blank.id.as_str(), &self.blank);
        map
    }

    pub fn role_counts(&self) -> BTreeMap<Role, usize> {
        let mut out = BTreeMap::new();
        for p in &self.prototypes {
            *out.entry(p.role).or_insert(0) += 1;
        }
        out
    }
}

/// A defect found by [`validate_tileset`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TilesetViolation {
    DuplicateId(String),
    BlankEdgeOnInnerRole {
        id: String,
        edge: usize,
    },
    MalformedColor {
        id: String,
        edge: usize,
        reason: String,
    },
    BlankTileNotBlank,
    BlankTileInSet(String),
    RotationDuplicate {
        first: String,
        second: String,
    },
    /// A colour with no counterpart at a matching position anywhere in the set.
    Unmatched {
        id: String,
        edge: usize,
    },
}

impl fmt::Display for TilesetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TilesetViolation::DuplicateId(id) => write!(f, "duplicate id {id}"),
            TilesetViolation::BlankEdgeOnInnerRole { id, edge } => {
                write!(f, "{id}: blank edge {edge} on a non-border role")
            }
            TilesetViolation::MalformedColor { id, edge, reason } => {
                write!(f, "{id}: edge {edge}: {reason}")
            }
            TilesetViolation::BlankTileNotBlank => write!(f, "blank tile has a coloured edge"),
            TilesetViolation::BlankTileInSet(id) => write!(f, "blank tile {id} listed among prototiles"),
            TilesetViolation::RotationDuplicate { first, second } => {
                write!(f, "{first} and {second} coincide up to rotation")
            }
            TilesetViolation::Unmatched { id, edge } => {
                write!(f, "{id}: edge {edge} has no matching partner")
            }
        }
    }
}

/// Smallest rotation of an edge cycle, used to compare tiles up to rotation.
fn canonical_cycle(edges: &[EdgeColor; SIDES]) -> Vec<&EdgeColor> {
    (0..SIDES)
        .map(|r| (0..SIDES).map(|i| &edges[(i + r) % SIDES]).collect::<Vec<_>>())
        .min()
        .expect("seven rotations")
}

/// Position class used by the matching check: the father edge pairs with a
/// son edge; every other colour pairs with any other occurrence.
fn is_tree_tag(c: &EdgeColor) -> bool {
    matches!(c.tag, Tag::Tree(_) | Tag::BorderL | Tag::BorderR)
}

/// Checks the structural rules every compiled tile set must satisfy.
pub fn validate_tileset(ts: &TileSet) -> Vec<TilesetViolation> {
    let mut out = Vec::new();
    if !ts.blank.is_all_blank() {
        out.push(TilesetViolation::BlankTileNotBlank);
    }
    let mut seen = HashMap::new();
    for p in &ts.prototypes {
        if p.id == ts.blank.id || p.role == Role::Blank {
            out.push(TilesetViolation::BlankTileInSet(p.id.clone()));
        }
        if seen.insert(p.id.as_str(), ()).is_some() {
            out.push(TilesetViolation::DuplicateId(p.id.clone()));
        }
        for (e, c) in p.edges.iter().enumerate() {
            if let Err(reason) = c.well_formed() {
                out.push(TilesetViolation::MalformedColor {
                    id: p.id.clone(),
                    edge: e,
                    reason,
                });
            }
            if c.is_blank() && !p.role.is_border() {
                out.push(TilesetViolation::BlankEdgeOnInnerRole {
                    id: p.id.clone(),
                    edge: e,
                });
            }
        }
    }

    let mut cycles: HashMap<Vec<&EdgeColor>, &str> = HashMap::new();
    for p in &ts.prototypes {
        // the halting root is the one tile allowed to look like the blank tile
        if p.role == Role::RootHalt {
            continue;
        }
        if p.is_all_blank() {
            out.push(TilesetViolation::RotationDuplicate {
                first: ts.blank.id.clone(),
                second: p.id.clone(),
            });
            continue;
        }
        if let Some(first) = cycles.insert(canonical_cycle(&p.edges), &p.id) {
            out.push(TilesetViolation::RotationDuplicate {
                first: first.to_string(),
                second: p.id.clone(),
            });
        }
    }

    // (colour, is father edge) occurrences
    let mut occurrences: HashMap<(&EdgeColor, bool), usize> = HashMap::new();
    for p in &ts.prototypes {
        for (e, c) in p.edges.iter().enumerate() {
            *occurrences.entry((c, e == 0)).or_insert(0) += 1;
        }
    }
    for p in &ts.prototypes {
        for (e, c) in p.edges.iter().enumerate() {
            if c.is_blank() {
                continue;
            }
            let partners = if is_tree_tag(c) {
                occurrences.get(&(c, e != 0)).copied().unwrap_or(0)
            } else {
                let total = occurrences.get(&(c, true)).copied().unwrap_or(0)
                    + occurrences.get(&(c, false)).copied().unwrap_or(0);
                total - 1
            };
            if partners == 0 {
                out.push(TilesetViolation::Unmatched {
                    id: p.id.clone(),
                    edge: e,
                });
            }
        }
    }
    out
}
