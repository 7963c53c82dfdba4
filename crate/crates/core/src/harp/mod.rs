//! The harp: the finite tiling of one sector that encodes a halting run.
//!
//! Level `n` of sector 0 stands for time `n`. Cell `k` of the tape lives on
//! chord `k`, which starts at the rightmost tile of level `k` and descends
//! through middle sons. The head travels along a level from one chord to the
//! next, and the last level carries the silver signal spreading away from the
//! tile where the machine halts.

mod config;

use std::collections::HashMap;

use thiserror::Error;

use crate::heptagrid::{edge_roles, level_size, AddressError, EdgeRole, TileAddress, SIDES};
use crate::machine::{run, MachineError, Move, StateId, Symbol, Trace, TuringMachine};
use crate::reduction::{compile, EdgeColor, Flow, Tag, TileSet};

pub use config::{ConfigError, Configuration, Placement};

/// Deepest harp we build; level 12 alone has 121393 tiles.
pub const MAX_HARP_LEVEL: u32 = 12;

#[derive(Debug, Error)]
pub enum HarpError {
    #[error("machine did not halt within {steps} steps")]
    NotHaltedWithinBudget { steps: usize },
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error("halting time {halt_time} needs more than {max} levels")]
    TooDeep { halt_time: usize, max: u32 },
    #[error("chord {k} does not reach level {n}")]
    NoChord { k: u32, n: u32 },
    #[error(transparent)]
    Address(#[from] AddressError),
    #[error("no prototile carries the colours found at {address}: {edges}")]
    MissingPrototype { address: String, edges: String },
}

/// Tile of chord `k` on level `n` of sector 0.
pub fn chord_of(k: u32, n: u32) -> Result<TileAddress, HarpError> {
    if k > n {
        return Err(HarpError::NoChord { k, n });
    }
    let mut tile = TileAddress::from_rank(0, k, level_size(k)? - 1)?;
    for _ in k..n {
        tile = tile.child(1)?;
    }
    Ok(tile)
}

/// Where the head is on one level and how it got there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelVisit {
    pub level: u32,
    pub state: StateId,
    pub cell: usize,
    pub read: Symbol,
    /// Move made on the previous level; `None` on level 0.
    pub arrival: Option<Move>,
    /// The chord tile where this level's transition executes.
    pub execution: TileAddress,
    /// Tiles walked along the level, from the chord the head came down on to
    /// `execution`, both included; empty when the head did not move sideways.
    pub path: Vec<TileAddress>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Itinerary {
    pub visits: Vec<LevelVisit>,
}

/// Ranks of chords `0..=n` on level `n`, increasing with the chord index.
fn chord_ranks(n: u32) -> Result<Vec<u64>, HarpError> {
    (0..=n).map(|k| Ok(chord_of(k, n)?.rank())).collect()
}

/// Follows the head through the levels of the harp, one level per snapshot.
pub fn route_signal(trace: &Trace) -> Result<Itinerary, HarpError> {
    let levels = trace.snapshots.len();
    if levels > MAX_HARP_LEVEL as usize + 1 {
        return Err(HarpError::TooDeep {
            halt_time: levels - 1,
            max: MAX_HARP_LEVEL,
        });
    }
    let mut visits = Vec::with_capacity(levels);
    for n in 0..levels {
        let level = n as u32;
        let ranks = chord_ranks(level)?;
        let cell = trace.head(n);
        let arrival = n.checked_sub(1).and_then(|p| trace.executed[p]).map(|t| t.movement);
        let to = ranks[cell];
        let from = match arrival {
            Some(Move::L | Move::R) => ranks[trace.head(n - 1)],
            _ => to,
        };
        let path = if from == to {
            Vec::new()
        } else if from < to {
            (from..=to)
                .map(|r| TileAddress::from_rank(0, level, r))
                .collect::<Result<Vec<_>, _>>()?
        } else {
            (to..=from)
                .rev()
                .map(|r| TileAddress::from_rank(0, level, r))
                .collect::<Result<Vec<_>, _>>()?
        };
        visits.push(LevelVisit {
            level,
            state: trace.state(n),
            cell,
            read: trace.symbol(n, cell),
            arrival,
            execution: TileAddress::from_rank(0, level, to)?,
            path,
        });
    }
    Ok(Itinerary { visits })
}

/// Edge colours of the intended harp, derived straight from the trace.
struct Painter<'a> {
    tm: &'a TuringMachine,
    trace: &'a Trace,
    last: u32,
    chords: Vec<Vec<u64>>,
    /// Lateral edges `r` (between ranks `r` and `r + 1`) crossed by the head.
    crossing: Vec<Option<(u64, u64)>>,
    emitter: u64,
}

impl<'a> Painter<'a> {
    fn new(tm: &'a TuringMachine, trace: &'a Trace, itinerary: &Itinerary, last: u32) -> Result<Self, HarpError> {
        let chords = (0..=last).map(chord_ranks).collect::<Result<Vec<_>, _>>()?;
        let crossing = itinerary
            .visits
            .iter()
            .map(|v| {
                let a = v.path.first().map(TileAddress::rank)?;
                let b = v.path.last().map(TileAddress::rank)?;
                (a != b).then(|| (a.min(b), a.max(b)))
            })
            .collect();
        let emitter = chords[last as usize][trace.head(last as usize)];
        Ok(Painter {
            tm,
            trace,
            last,
            chords,
            crossing,
            emitter,
        })
    }

    fn head(&self, n: u32) -> Option<(&str, Move)> {
        let t = self.trace.executed[n as usize - 1]?;
        Some((self.tm.state_name(self.trace.state(n as usize)), t.movement))
    }

    /// Colour of the edge between `x` and its father.
    fn tree(&self, x: &TileAddress) -> EdgeColor {
        let n = x.level();
        if x.is_leftmost() {
            return EdgeColor::bare(Tag::BorderL);
        }
        if x.is_rightmost() {
            return EdgeColor::bare(Tag::BorderR);
        }
        match self.chords[n as usize].binary_search(&x.rank()) {
            Ok(k) => {
                let sym = self.tm.symbol_name(self.trace.symbol(n as usize, k));
                let here = self.trace.head(n as usize - 1) == k;
                EdgeColor::chord(sym, if here { self.head(n) } else { None })
            }
            Err(_) => EdgeColor::tree(x.son_index().expect("non-root tile")),
        }
    }

    /// Colour of the lateral edge between ranks `r` and `r + 1` of level `n`.
    fn lateral(&self, n: u32, r: u64) -> EdgeColor {
        let head = match self.crossing[n as usize] {
            Some((a, b)) if a <= r && r < b => self.head(n),
            _ => None,
        };
        if n < self.last {
            EdgeColor::level(head)
        } else {
            let flow = if r < self.emitter { Flow::L } else { Flow::R };
            EdgeColor::silver(flow, head)
        }
    }

    fn paint(&self, x: &TileAddress) -> Result<[EdgeColor; SIDES], HarpError> {
        let n = x.level();
        let r = x.rank();
        let Some(kind) = x.kind() else {
            return Ok(std::array::from_fn(|_| EdgeColor::blank()));
        };
        let roles = edge_roles(kind);
        let mut out: [EdgeColor; SIDES] = std::array::from_fn(|_| EdgeColor::blank());
        for (e, role) in roles.iter().enumerate() {
            out[e] = match *role {
                EdgeRole::Father if n == 0 => EdgeColor::blank(),
                EdgeRole::Father => self.tree(x),
                EdgeRole::Son(_) if n == self.last => EdgeColor::blank(),
                EdgeRole::Son(k) => self.tree(&x.child(k)?),
                EdgeRole::LeftLateral if r == 0 => EdgeColor::blank(),
                EdgeRole::LeftLateral => self.lateral(n, r - 1),
                EdgeRole::RightLateral if x.is_rightmost() => EdgeColor::blank(),
                EdgeRole::RightLateral => self.lateral(n, r),
                EdgeRole::Nephew if x.is_rightmost() || n == self.last => EdgeColor::blank(),
                EdgeRole::Uncle if x.is_leftmost() => EdgeColor::blank(),
                EdgeRole::Nephew | EdgeRole::Uncle => EdgeColor::bare(Tag::Inside),
            };
        }
        Ok(out)
    }
}

/// A halting run laid out as a finite configuration.
#[derive(Clone, Debug)]
pub struct Harp {
    pub config: Configuration,
    pub tileset: TileSet,
    pub itinerary: Itinerary,
    pub trace: Trace,
    pub halt_time: usize,
}

/// Runs `tm` for at most `max_steps` steps and, if it halts, builds the
/// harp: every tile of sector 0 on levels `0..=halt_time`, unrotated.
pub fn build_harp(tm: &TuringMachine, max_steps: usize) -> Result<Harp, HarpError> {
    let trace = run(tm, max_steps)?;
    let t = trace
        .halt_time
        .ok_or(HarpError::NotHaltedWithinBudget { steps: max_steps })?;
    if t > MAX_HARP_LEVEL as usize {
        return Err(HarpError::TooDeep {
            halt_time: t,
            max: MAX_HARP_LEVEL,
        });
    }
    let tileset = compile(tm);
    let lookup: HashMap<&[EdgeColor; SIDES], &str> =
        tileset.prototypes.iter().map(|p| (&p.edges, p.id.as_str())).collect();
    let itinerary = route_signal(&trace)?;
    let painter = Painter::new(tm, &trace, &itinerary, t as u32)?;

    let mut config = Configuration::new();
    for n in 0..=t as u32 {
        for r in 0..level_size(n)? {
            let x = TileAddress::from_rank(0, n, r)?;
            let edges = painter.paint(&x)?;
            let Some(id) = lookup.get(&edges) else {
                let shown: Vec<String> = edges.iter().map(ToString::to_string).collect();
                return Err(HarpError::MissingPrototype {
                    address: x.to_string(),
                    edges: shown.join(","),
                });
            };
            config.place(x, *id, 0);
        }
    }
    Ok(Harp {
        config,
        tileset,
        itinerary,
        trace,
        halt_time: t,
    })
}
