//! Fibonacci-tree coordinates for the heptagrid.
//!
//! The plane is split into a central heptagon and seven sectors. Each sector
//! is spanned by a tree whose nodes come in two kinds: `W` nodes have three
//! sons `(B, W, W)` and `B` nodes have two sons `(B, W)`, ordered left to
//! right. A tile is addressed by its sector and the list of son indices
//! leading from the sector root to it.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use thiserror::Error;

/// Number of sectors around the central tile.
pub const SECTORS: u8 = 7;

/// Deepest tree level whose width still fits in a `u64`.
pub const MAX_LEVEL: u32 = 45;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    W,
    B,
}

impl NodeKind {
    pub fn son_kinds(self) -> &'static [NodeKind] {
        match self {
            NodeKind::W => &[NodeKind::B, NodeKind::W, NodeKind::W],
            NodeKind::B => &[NodeKind::B, NodeKind::W],
        }
    }

    pub fn son_count(self) -> usize {
        self.son_kinds().len()
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeKind::W => f.write_str("W"),
            NodeKind::B => f.write_str("B"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AddressError {
    #[error("tree level {0} exceeds the representable range (max {MAX_LEVEL})")]
    Overflow(u32),
    #[error("sector {0} out of range 0..7")]
    BadSector(u8),
    #[error("son index {index} invalid for a {kind} node")]
    BadSon { kind: NodeKind, index: u8 },
    #[error("rank {rank} out of range for level {level} (width {width})")]
    BadRank { level: u32, rank: u64, width: u64 },
    #[error("cannot parse address {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// Returned by [`TileAddress::lateral`] when the step would leave the sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("border of the sector reached")]
pub struct BorderExceeded;

/// Counts of `(W, B)` nodes `depth` levels below a node of the given kind.
fn level_counts(kind: NodeKind, depth: u32) -> Result<(u64, u64), AddressError> {
    let (mut w, mut b) = match kind {
        NodeKind::W => (1u64, 0u64),
        NodeKind::B => (0, 1),
    };
    for _ in 0..depth {
        let nw = w
            .checked_mul(2)
            .and_then(|x| x.checked_add(b))
            .ok_or(AddressError::Overflow(depth))?;
        let nb = w.checked_add(b).ok_or(AddressError::Overflow(depth))?;
        w = nw;
        b = nb;
    }
    w.checked_add(b).ok_or(AddressError::Overflow(depth))?;
    Ok((w, b))
}

/// Number of descendants `depth` levels below a node of the given kind.
pub fn subtree_width(kind: NodeKind, depth: u32) -> Result<u64, AddressError> {
    let (w, b) = level_counts(kind, depth)?;
    Ok(w + b)
}

/// Number of tiles at level `n` of one sector tree: 1, 3, 8, 21, 55, ...
pub fn level_size(n: u32) -> Result<u64, AddressError> {
    subtree_width(NodeKind::W, n)
}

/// Combinatorial coordinate of a heptagon: the central cell or a node of one
/// of the seven sector trees.
#[derive(Clone, Debug)]
pub struct TileAddress {
    sector: Option<u8>,
    path: Vec<u8>,
    rank: u64,
    kind: NodeKind,
}

impl TileAddress {
    pub fn center() -> Self {
        TileAddress {
            sector: None,
            path: Vec::new(),
            rank: 0,
            kind: NodeKind::W,
        }
    }

    pub fn sector_root(sector: u8) -> Result<Self, AddressError> {
        if sector >= SECTORS {
            return Err(AddressError::BadSector(sector));
        }
        Ok(TileAddress {
            sector: Some(sector),
            path: Vec::new(),
            rank: 0,
            kind: NodeKind::W,
        })
    }

    /// Builds an address from a sector and a path of son indices.
    pub fn from_path(sector: u8, path: &[u8]) -> Result<Self, AddressError> {
        let mut a = Self::sector_root(sector)?;
        for &i in path {
            a = a.child(i)?;
        }
        Ok(a)
    }

    /// The tile of the given rank (counted left to right) at a tree level.
    pub fn from_rank(sector: u8, level: u32, rank: u64) -> Result<Self, AddressError> {
        if level > MAX_LEVEL {
            return Err(AddressError::Overflow(level));
        }
        let width = level_size(level)?;
        if rank >= width {
            return Err(AddressError::BadRank { level, rank, width });
        }
        let mut a = Self::sector_root(sector)?;
        let mut rest = rank;
        for depth in (0..level).rev() {
            let mut chosen = None;
            for (i, &k) in a.kind.son_kinds().iter().enumerate() {
                let w = subtree_width(k, depth)?;
                if rest < w {
                    chosen = Some(i as u8);
                    break;
                }
                rest -= w;
            }
            // rank < width guarantees a son is found at every step
            a = a.child(chosen.expect("rank within level width"))?;
        }
        Ok(a)
    }

    pub fn is_center(&self) -> bool {
        self.sector.is_none()
    }

    pub fn sector(&self) -> Option<u8> {
        self.sector
    }

    pub fn path(&self) -> &[u8] {
        &self.path
    }

    /// Tree level; 0 for sector roots and for the center.
    pub fn level(&self) -> u32 {
        self.path.len() as u32
    }

    /// Distance in tiles from the central cell.
    pub fn ring(&self) -> u32 {
        match self.sector {
            None => 0,
            Some(_) => self.level() + 1,
        }
    }

    pub fn rank(&self) -> u64 {
        self.rank
    }

    /// Node kind, `None` for the center.
    pub fn kind(&self) -> Option<NodeKind> {
        self.sector.map(|_| self.kind)
    }

    /// Index of this tile among its father's sons.
    pub fn son_index(&self) -> Option<u8> {
        self.path.last().copied()
    }

    pub fn child(&self, index: u8) -> Result<TileAddress, AddressError> {
        let Some(sector) = self.sector else {
            return Self::sector_root(index);
        };
        let kinds = self.kind.son_kinds();
        let Some(&kind) = kinds.get(index as usize) else {
            return Err(AddressError::BadSon { kind: self.kind, index });
        };
        let level = self.level() + 1;
        if level > MAX_LEVEL {
            return Err(AddressError::Overflow(level));
        }
        // sons of the nodes to the left of us, then our own earlier sons
        let mut rank = 0u64;
        let mut prefix = TileAddress::sector_root(sector)?;
        for &step in &self.path {
            let remaining = level - prefix.level() - 1;
            for &k in &prefix.kind.son_kinds()[..step as usize] {
                rank += subtree_width(k, remaining)?;
            }
            prefix = prefix.child_unranked(step);
        }
        rank += kinds[..index as usize].len() as u64;
        let mut path = self.path.clone();
        path.push(index);
        Ok(TileAddress {
            sector: Some(sector),
            path,
            rank,
            kind,
        })
    }

    fn child_unranked(&self, index: u8) -> TileAddress {
        let mut path = self.path.clone();
        path.push(index);
        TileAddress {
            sector: self.sector,
            path,
            rank: 0,
            kind: self.kind.son_kinds()[index as usize],
        }
    }

    /// Sons in left-to-right order; the center has the seven sector roots.
    pub fn sons(&self) -> Result<Vec<TileAddress>, AddressError> {
        let n = if self.is_center() {
            SECTORS as usize
        } else {
            self.kind.son_count()
        };
        (0..n as u8).map(|i| self.child(i)).collect()
    }

    pub fn father(&self) -> Option<TileAddress> {
        let sector = self.sector?;
        if self.path.is_empty() {
            return Some(TileAddress::center());
        }
        TileAddress::from_path(sector, &self.path[..self.path.len() - 1]).ok()
    }

    /// Same-level neighbor inside the same sector tree.
    pub fn lateral(&self, dir: Direction) -> Result<TileAddress, BorderExceeded> {
        let sector = self.sector.ok_or(BorderExceeded)?;
        let rank = match dir {
            Direction::Left => self.rank.checked_sub(1).ok_or(BorderExceeded)?,
            Direction::Right => self.rank + 1,
        };
        TileAddress::from_rank(sector, self.level(), rank).map_err(|_| BorderExceeded)
    }

    pub fn is_leftmost(&self) -> bool {
        self.sector.is_some() && self.rank == 0
    }

    pub fn is_rightmost(&self) -> bool {
        self.sector.is_some() && level_size(self.level()).is_ok_and(|w| self.rank + 1 == w)
    }

    /// One descent step along a chord: the middle son of a `W` node, the
    /// left son of a `B` node.
    pub fn chord_successor(&self) -> Result<TileAddress, AddressError> {
        match self.kind {
            NodeKind::W => self.child(1),
            NodeKind::B => self.child(0),
        }
    }

    fn sort_key(&self) -> (bool, u8, u32, u64) {
        (self.sector.is_some(), self.sector.unwrap_or(0), self.level(), self.rank)
    }
}

impl PartialEq for TileAddress {
    fn eq(&self, other: &Self) -> bool {
        self.sector == other.sector && self.path == other.path
    }
}

impl Eq for TileAddress {}

impl Hash for TileAddress {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.sector.hash(state);
        self.path.hash(state);
    }
}

impl Ord for TileAddress {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for TileAddress {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TileAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(sector) = self.sector else {
            return f.write_str("C");
        };
        write!(f, "s{sector}:")?;
        for (i, step) in self.path.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{step}")?;
        }
        Ok(())
    }
}

impl FromStr for TileAddress {
    type Err = AddressError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| AddressError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        if text == "C" {
            return Ok(TileAddress::center());
        }
        let rest = text.strip_prefix('s').ok_or_else(|| err("expected `C` or `s<k>:`"))?;
        let (sector, path) = rest.split_once(':').ok_or_else(|| err("missing `:`"))?;
        let sector: u8 = sector.parse().map_err(|_| err("bad sector number"))?;
        let steps = if path.is_empty() {
            Vec::new()
        } else {
            path.split('.')
                .map(|s| s.parse::<u8>().map_err(|_| err("bad son index")))
                .collect::<Result<Vec<_>, _>>()?
        };
        TileAddress::from_path(sector, &steps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_sizes() {
        let sizes: Vec<u64> = (0..6).map(|n| level_size(n).unwrap()).collect();
        assert_eq!(sizes, vec![1, 3, 8, 21, 55, 144]);
        for n in 1..40 {
            let s = |k| level_size(k).unwrap();
            assert_eq!(s(n + 1), 3 * s(n) - s(n - 1));
        }
        assert!(level_size(MAX_LEVEL).is_ok());
        assert!(matches!(level_size(MAX_LEVEL + 1), Err(AddressError::Overflow(_))));
    }

    #[test]
    fn sons_and_kinds() {
        let c = TileAddress::center();
        assert_eq!(c.sons().unwrap().len(), 7);
        let root = TileAddress::sector_root(0).unwrap();
        let kinds: Vec<_> = root.sons().unwrap().iter().map(|a| a.kind().unwrap()).collect();
        assert_eq!(kinds, vec![NodeKind::B, NodeKind::W, NodeKind::W]);
        let b = &root.sons().unwrap()[0];
        let kinds: Vec<_> = b.sons().unwrap().iter().map(|a| a.kind().unwrap()).collect();
        assert_eq!(kinds, vec![NodeKind::B, NodeKind::W]);
        assert!(matches!(b.child(2), Err(AddressError::BadSon { .. })));
    }

    #[test]
    fn father_inverts_sons() {
        assert_eq!(TileAddress::center().father(), None);
        let root = TileAddress::sector_root(3).unwrap();
        assert_eq!(root.father(), Some(TileAddress::center()));
        let mut frontier = vec![root];
        for _ in 0..5 {
            let mut next = Vec::new();
            for a in &frontier {
                for s in a.sons().unwrap() {
                    assert_eq!(s.father().as_ref(), Some(a));
                    next.push(s);
                }
            }
            frontier = next;
        }
    }

    #[test]
    fn ranks_enumerate_levels_in_order() {
        let mut level = vec![TileAddress::sector_root(0).unwrap()];
        for n in 0..7u32 {
            for (r, a) in level.iter().enumerate() {
                assert_eq!(a.rank(), r as u64);
                assert_eq!(a.level(), n);
                assert_eq!(&TileAddress::from_rank(0, n, r as u64).unwrap(), a);
            }
            level = level.iter().flat_map(|a| a.sons().unwrap()).collect();
        }
    }

    #[test]
    fn lateral_steps() {
        let leftmost = TileAddress::from_rank(0, 2, 0).unwrap();
        assert_eq!(leftmost.lateral(Direction::Left), Err(BorderExceeded));
        let rightmost = TileAddress::from_rank(0, 2, 7).unwrap();
        assert!(rightmost.is_rightmost());
        assert_eq!(rightmost.lateral(Direction::Right), Err(BorderExceeded));
        let a = TileAddress::from_rank(0, 1, 0).unwrap();
        assert_eq!(a.lateral(Direction::Right).unwrap().rank(), 1);
        for r in 0..20 {
            let a = TileAddress::from_rank(2, 3, r).unwrap();
            let back = a.lateral(Direction::Right).unwrap().lateral(Direction::Left).unwrap();
            assert_eq!(back, a);
        }
    }

    #[test]
    fn chord_successor_rule() {
        let root = TileAddress::sector_root(0).unwrap();
        assert_eq!(root.chord_successor().unwrap().son_index(), Some(1));
        let b = root.child(0).unwrap();
        assert_eq!(b.chord_successor().unwrap().son_index(), Some(0));
        assert_eq!(b.chord_successor().unwrap().level(), b.level() + 1);
    }

    #[test]
    fn text_form() {
        // s0:1.0 is a B node, which has no son 2
        assert!(matches!(
            "s0:1.0.2".parse::<TileAddress>(),
            Err(AddressError::BadSon { .. })
        ));
        let a: TileAddress = "s0:1.0.1".parse().unwrap();
        assert_eq!(a.level(), 3);
        assert_eq!("C".parse::<TileAddress>().unwrap(), TileAddress::center());
        let b = TileAddress::from_path(4, &[1, 2, 0]).unwrap();
        assert_eq!(b.to_string(), "s4:1.2.0");
        assert_eq!(b.to_string().parse::<TileAddress>().unwrap(), b);
        assert_eq!(TileAddress::sector_root(6).unwrap().to_string(), "s6:");
        assert!("s7:".parse::<TileAddress>().is_err());
        assert!("x".parse::<TileAddress>().is_err());
    }
}
