use std::collections::HashMap;

use num_complex::Complex64;
use thiserror::Error;

use super::address::{AddressError, TileAddress, SECTORS};
use super::geometry::{canonical_vertices, neighbor_transform, DiscPoint, Mobius, SIDES};

/// Largest patch depth we generate; deeper rings crowd the disc boundary
/// beyond what double precision separates reliably.
pub const MAX_PATCH_LEVELS: u32 = 10;

/// Centers closer than this (Euclidean, in the disc) are the same tile.
const DEDUP_TOLERANCE: f64 = 1e-9;
const BUCKET: f64 = 1e-7;

/// A two-father tile is kept by the father that sees the other father
/// immediately clockwise of the shared edge, i.e. on the tile's edge 6.
const OTHER_FATHER_EDGE: usize = 6;

#[derive(Debug, Error)]
pub enum PatchError {
    #[error("patch budget exhausted: requested {requested} levels, reached {reached}")]
    Budget { requested: u32, reached: u32 },
    #[error(transparent)]
    Address(#[from] AddressError),
    #[error("inconsistent geometry at ring {ring}: {detail}")]
    Geometry { ring: u32, detail: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Neighbor {
    Tile { index: usize, edge: u8 },
    Outside,
}

#[derive(Clone, Debug)]
pub struct PatchTile {
    pub address: TileAddress,
    frame: Mobius,
    pub neighbors: [Neighbor; SIDES],
}

impl PatchTile {
    pub fn center(&self) -> DiscPoint {
        self.frame.center()
    }

    /// Vertex `k` is shared by edges `k - 1` and `k`.
    pub fn vertices(&self) -> [DiscPoint; SIDES] {
        let v = canonical_vertices();
        std::array::from_fn(|k| self.frame.apply(v[k]).into())
    }

    fn neighbor_center(&self, e: usize) -> Complex64 {
        self.frame
            .compose(&neighbor_transform(e))
            .apply(Complex64::new(0.0, 0.0))
    }
}

/// The central tile and the seven sector trees down to a fixed level, with
/// full edge adjacency. Immutable once built.
#[derive(Clone, Debug)]
pub struct AdjacencyMap {
    levels: u32,
    tiles: Vec<PatchTile>,
    index: HashMap<TileAddress, usize>,
}

#[derive(Default)]
struct SpatialIndex {
    buckets: HashMap<(i64, i64), Vec<(Complex64, usize)>>,
}

impl SpatialIndex {
    fn key(z: Complex64) -> (i64, i64) {
        ((z.re / BUCKET).floor() as i64, (z.im / BUCKET).floor() as i64)
    }

    fn find(&self, z: Complex64) -> Option<usize> {
        let (kx, ky) = Self::key(z);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(v) = self.buckets.get(&(kx + dx, ky + dy)) {
                    if let Some(&(_, i)) = v.iter().find(|(w, _)| (w - z).norm() < DEDUP_TOLERANCE) {
                        return Some(i);
                    }
                }
            }
        }
        None
    }

    fn insert(&mut self, z: Complex64, i: usize) {
        self.buckets.entry(Self::key(z)).or_default().push((z, i));
    }
}

struct Candidate {
    center: Complex64,
    fathers: Vec<(usize, usize)>,
}

/// Generates the patch by reflecting heptagons outward ring by ring and
/// labels each new tile with its Fibonacci-tree address.
pub fn build_patch(levels: u32) -> Result<AdjacencyMap, PatchError> {
    if levels > MAX_PATCH_LEVELS {
        return Err(PatchError::Budget {
            requested: levels,
            reached: MAX_PATCH_LEVELS,
        });
    }
    let mut frames = vec![Mobius::identity()];
    let mut addresses = vec![TileAddress::center()];
    let mut spatial = SpatialIndex::default();
    spatial.insert(Complex64::new(0.0, 0.0), 0);

    for s in 0..SECTORS {
        let frame = neighbor_transform(s as usize);
        spatial.insert(frame.apply(Complex64::new(0.0, 0.0)), frames.len());
        frames.push(frame);
        addresses.push(TileAddress::sector_root(s)?);
    }
    let mut ring: Vec<usize> = (1..=SECTORS as usize).collect();

    for level in 1..=levels {
        let ring_no = level + 1;
        let mut fresh = SpatialIndex::default();
        let mut cands: Vec<Candidate> = Vec::new();
        for &x in &ring {
            for e in 0..SIDES {
                let c = frames[x]
                    .compose(&neighbor_transform(e))
                    .apply(Complex64::new(0.0, 0.0));
                if spatial.find(c).is_some() {
                    continue;
                }
                match fresh.find(c) {
                    Some(i) => cands[i].fathers.push((x, e)),
                    None => {
                        fresh.insert(c, cands.len());
                        cands.push(Candidate {
                            center: c,
                            fathers: vec![(x, e)],
                        });
                    }
                }
            }
        }

        // (father, father's edge, frame) for every new tile
        let mut chosen: Vec<(usize, usize, Mobius)> = Vec::with_capacity(cands.len());
        for cand in &cands {
            let pick = match cand.fathers.as_slice() {
                [(x, e)] => (*x, *e),
                [first, second] => {
                    let sees_other_on_6 = |(x, e): (usize, usize), other: usize| {
                        let frame = frames[x].compose(&neighbor_transform(e));
                        let other_center = frames[other].apply(Complex64::new(0.0, 0.0));
                        let c = frame
                            .compose(&neighbor_transform(OTHER_FATHER_EDGE))
                            .apply(Complex64::new(0.0, 0.0));
                        (c - other_center).norm() < DEDUP_TOLERANCE
                    };
                    if sees_other_on_6(*first, second.0) {
                        *first
                    } else if sees_other_on_6(*second, first.0) {
                        *second
                    } else {
                        return Err(PatchError::Geometry {
                            ring: ring_no,
                            detail: "fathers of a shared tile are not adjacent".into(),
                        });
                    }
                }
                other => {
                    return Err(PatchError::Geometry {
                        ring: ring_no,
                        detail: format!("tile with {} fathers", other.len()),
                    })
                }
            };
            let frame = frames[pick.0].compose(&neighbor_transform(pick.1));
            chosen.push((pick.0, pick.1, frame));
        }

        // sons of each father, left to right = clockwise = decreasing edge index
        let mut by_father: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, &(f, _, _)) in chosen.iter().enumerate() {
            by_father.entry(f).or_default().push(i);
        }
        let mut next = Vec::with_capacity(cands.len());
        for &x in &ring {
            let mut sons = by_father.remove(&x).unwrap_or_default();
            let kind = addresses[x].kind().expect("ring tiles are tree nodes");
            if sons.len() != kind.son_count() {
                return Err(PatchError::Geometry {
                    ring: ring_no,
                    detail: format!(
                        "{} has {} sons, expected {} for kind {kind}",
                        addresses[x],
                        sons.len(),
                        kind.son_count()
                    ),
                });
            }
            sons.sort_by_key(|&i| std::cmp::Reverse(chosen[i].1));
            for (k, &i) in sons.iter().enumerate() {
                let address = addresses[x].child(k as u8)?;
                let id = frames.len();
                spatial.insert(cands[i].center, id);
                frames.push(chosen[i].2);
                addresses.push(address);
                next.push(id);
            }
        }
        ring = next;
    }

    // ring-major, then sector, then rank
    let mut order: Vec<usize> = (0..frames.len()).collect();
    order.sort_by(|&a, &b| addresses[a].cmp(&addresses[b]));
    let mut new_id = vec![0usize; frames.len()];
    for (n, &old) in order.iter().enumerate() {
        new_id[old] = n;
    }

    let mut tiles = Vec::with_capacity(frames.len());
    for &old in &order {
        tiles.push(PatchTile {
            address: addresses[old].clone(),
            frame: frames[old],
            neighbors: [Neighbor::Outside; SIDES],
        });
    }
    for i in 0..tiles.len() {
        let own = tiles[i].center().as_complex();
        for e in 0..SIDES {
            let c = tiles[i].neighbor_center(e);
            let Some(j) = spatial.find(c).map(|old| new_id[old]) else {
                continue;
            };
            let back = (0..SIDES).find(|&f| (tiles[j].neighbor_center(f) - own).norm() < DEDUP_TOLERANCE);
            let Some(back) = back else {
                return Err(PatchError::Geometry {
                    ring: tiles[i].address.ring(),
                    detail: format!("no reciprocal edge from {} to {}", tiles[j].address, tiles[i].address),
                });
            };
            tiles[i].neighbors[e] = Neighbor::Tile {
                index: j,
                edge: back as u8,
            };
        }
    }
    let index = tiles.iter().enumerate().map(|(i, t)| (t.address.clone(), i)).collect();
    Ok(AdjacencyMap { levels, tiles, index })
}

impl AdjacencyMap {
    /// Deepest tree level contained in the patch.
    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn tiles(&self) -> &[PatchTile] {
        &self.tiles
    }

    pub fn tile(&self, index: usize) -> &PatchTile {
        &self.tiles[index]
    }

    pub fn index_of(&self, address: &TileAddress) -> Option<usize> {
        self.index.get(address).copied()
    }

    pub fn neighbor(&self, index: usize, edge: usize) -> Neighbor {
        self.tiles[index].neighbors[edge]
    }

    /// Neighbor address across `edge`, with the reciprocal edge index.
    pub fn neighbor_of(&self, address: &TileAddress, edge: usize) -> Option<(TileAddress, u8)> {
        let i = self.index_of(address)?;
        match self.tiles[i].neighbors[edge] {
            Neighbor::Tile { index, edge } => Some((self.tiles[index].address.clone(), edge)),
            Neighbor::Outside => None,
        }
    }

    pub fn geometric_center(&self, address: &TileAddress) -> Option<DiscPoint> {
        self.index_of(address).map(|i| self.tiles[i].center())
    }

    /// True when every edge of the tile leads to another tile of the patch.
    pub fn is_interior(&self, index: usize) -> bool {
        self.tiles[index]
            .neighbors
            .iter()
            .all(|n| matches!(n, Neighbor::Tile { .. }))
    }

    /// Copy of the patch whose edge numbering is shifted by `offset` on every
    /// tile: old edge `e` becomes edge `e + offset`.
    pub fn with_edge_offset(&self, offset: usize) -> AdjacencyMap {
        let mut out = self.clone();
        for (i, t) in self.tiles.iter().enumerate() {
            for e in 0..SIDES {
                out.tiles[i].neighbors[(e + offset) % SIDES] = match t.neighbors[e] {
                    Neighbor::Tile { index, edge } => Neighbor::Tile {
                        index,
                        edge: ((edge as usize + offset) % SIDES) as u8,
                    },
                    Neighbor::Outside => Neighbor::Outside,
                };
            }
        }
        out
    }
}
