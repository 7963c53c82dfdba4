//! Combinatorial and geometric model of the heptagrid, the {7,3} tiling of
//! the hyperbolic plane.

mod address;
mod geometry;
mod patch;

pub use address::{
    level_size, subtree_width, AddressError, BorderExceeded, Direction, NodeKind, TileAddress, MAX_LEVEL, SECTORS,
};
pub use geometry::{
    canonical_vertices, circumradius, cosh_circumradius, hyperbolic_distance, inradius, neighbor_transform, DiscPoint,
    Mobius, SIDES,
};
pub use patch::{build_patch, AdjacencyMap, Neighbor, PatchError, PatchTile, MAX_PATCH_LEVELS};

/// What lies across a given edge of a tree node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeRole {
    Father,
    /// Son with the given index, counted left to right.
    Son(u8),
    LeftLateral,
    RightLateral,
    /// Left son of the right lateral neighbor.
    Nephew,
    /// Left lateral neighbor of the father; only `B` nodes have one.
    Uncle,
}

/// Edge roles of a tree node, indexed by edge number (counterclockwise from
/// the father edge).
pub fn edge_roles(kind: NodeKind) -> [EdgeRole; SIDES] {
    use EdgeRole::*;
    match kind {
        NodeKind::W => [Father, RightLateral, Nephew, Son(2), Son(1), Son(0), LeftLateral],
        NodeKind::B => [Father, RightLateral, Nephew, Son(1), Son(0), LeftLateral, Uncle],
    }
}

/// Edge index of the given role, if the kind has it.
pub fn edge_of(kind: NodeKind, role: EdgeRole) -> Option<usize> {
    edge_roles(kind).iter().position(|&r| r == role)
}
