//! SVG pictures of patches and configurations in the Poincaré disc.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::harp::Configuration;
use crate::heptagrid::{AdjacencyMap, DiscPoint, TileAddress, SIDES};
use crate::reduction::{Role, TileSet};

/// Every role, in declaration order.
pub const ROLES: [Role; 17] = [
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

#[derive(Clone, Debug, PartialEq)]
pub struct RenderStyle {
    pub fills: BTreeMap<Role, String>,
    /// Fill of cells that hold no tile.
    pub neutral: String,
    /// Stroke width in disc units (the disc has radius 1).
    pub stroke_width: f64,
    pub disc_radius_px: u32,
    /// Cells on deeper levels are left out.
    pub depth_limit: Option<u32>,
    /// Polylines through the edge midpoints of border tiles.
    pub guides: bool,
}

impl Default for RenderStyle {
    fn default() -> Self {
        let fills = ROLES
            .iter()
            .map(|&r| {
                let c = match r {
                    Role::Blank => "#ffffff",
                    Role::Root => "#d62728",
                    Role::RootHalt => "#8c1a1a",
                    Role::BorderL => "#1f77b4",
                    Role::BorderR => "#17becf",
                    Role::BorderRExec => "#0e6f7a",
                    Role::Inside => "#e4e4e4",
                    Role::ChordPass => "#98df8a",
                    Role::ChordDepart => "#2ca02c",
                    Role::ChordExec => "#ff7f0e",
                    Role::TransitSignal => "#ffbb78",
                    Role::SilverEmit => "#9467bd",
                    Role::SilverTransit => "#c0c0c8",
                    Role::SilverChordCross => "#8f8fa0",
                    Role::CornerLeft => "#393b79",
                    Role::CornerRight => "#637939",
                    Role::BorderSilverEnd => "#e377c2",
                };
                (r, c.to_string())
            })
            .collect();
        RenderStyle {
            fills,
            neutral: "#fafafa".into(),
            stroke_width: 0.002,
            disc_radius_px: 400,
            depth_limit: None,
            guides: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("no fill colour for role {0}")]
    MissingRoleColor(String),
    #[error("cell {0} is not in the layout")]
    OutsideLayout(String),
    #[error("cell {address} holds unknown tile {tile}")]
    UnknownTile { address: String, tile: String },
}

/// Heptagon vertices of every patch cell, sorted by address.
pub fn layout(patch: &AdjacencyMap) -> Vec<(TileAddress, [DiscPoint; SIDES])> {
    let mut out: Vec<_> = patch
        .tiles()
        .iter()
        .map(|t| (t.address.clone(), t.vertices()))
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

struct Canvas {
    half: f64,
}

impl Canvas {
    fn xy(&self, p: DiscPoint) -> (f64, f64) {
        (self.half * (1.0 + p.x), self.half * (1.0 - p.y))
    }

    fn points<'p>(&self, pts: impl IntoIterator<Item = &'p DiscPoint>) -> String {
        let mut s = String::new();
        for (i, &p) in pts.into_iter().enumerate() {
            let (x, y) = self.xy(p);
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{x:.4},{y:.4}");
        }
        s
    }
}

/// Midpoint of the edge two heptagons share, if they share one.
fn shared_midpoint(a: &[DiscPoint; SIDES], b: &[DiscPoint; SIDES]) -> Option<DiscPoint> {
    let common: Vec<&DiscPoint> = a
        .iter()
        .filter(|p| b.iter().any(|q| (p.x - q.x).hypot(p.y - q.y) < 1e-6))
        .collect();
    match common[..] {
        [p, q] => Some(DiscPoint::new((p.x + q.x) / 2.0, (p.y + q.y) / 2.0)),
        _ => None,
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// One `<polygon>` per layout cell, coloured by the role of the tile placed
/// there or neutral when the cell is empty. `layout` must be sorted by
/// address, as [`layout`] returns it.
pub fn to_svg(
    layout: &[(TileAddress, [DiscPoint; SIDES])],
    placed: Option<(&Configuration, &TileSet)>,
    style: &RenderStyle,
) -> Result<String, RenderError> {
    let mut roles: BTreeMap<&TileAddress, (Role, &str)> = BTreeMap::new();
    if let Some((cfg, ts)) = placed {
        let protos = ts.by_id();
        for (address, p) in &cfg.cells {
            let proto = protos.get(p.tile.as_str()).ok_or_else(|| RenderError::UnknownTile {
                address: address.to_string(),
                tile: p.tile.clone(),
            })?;
            if layout.binary_search_by(|(a, _)| a.cmp(address)).is_err() {
                return Err(RenderError::OutsideLayout(address.to_string()));
            }
            if !style.fills.contains_key(&proto.role) {
                return Err(RenderError::MissingRoleColor(proto.role.to_string()));
            }
            roles.insert(address, (proto.role, proto.id.as_str()));
        }
    }

    let size = 2 * style.disc_radius_px.max(8);
    let canvas = Canvas {
        half: size as f64 / 2.0,
    };
    let stroke = style.stroke_width * canvas.half;
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let h = canvas.half;
    let _ = writeln!(
        svg,
        r##"<circle cx="{h}" cy="{h}" r="{h}" fill="#ffffff" stroke="#444444" stroke-width="{stroke:.4}"/>"##
    );
    let _ = writeln!(
        svg,
        r##"<g stroke="#333333" stroke-width="{stroke:.4}" stroke-linejoin="round">"##
    );
    let mut borders = Vec::new();
    for (address, vertices) in layout {
        if style
            .depth_limit
            .is_some_and(|d| !address.is_center() && address.level() > d)
        {
            continue;
        }
        let points = canvas.points(vertices);
        match roles.get(address) {
            Some(&(role, id)) => {
                let _ = writeln!(
                    svg,
                    r#"<polygon points="{points}" fill="{}" data-role="{role}"><title>{address} {}</title></polygon>"#,
                    style.fills[&role],
                    escape(id)
                );
                if matches!(
                    role,
                    Role::BorderL | Role::BorderR | Role::BorderRExec | Role::CornerLeft | Role::CornerRight
                ) {
                    borders.push((address, role, vertices));
                }
            }
            None => {
                let _ = writeln!(svg, r#"<polygon points="{points}" fill="{}"/>"#, style.neutral);
            }
        }
    }
    svg.push_str("</g>\n");
    if style.guides && !borders.is_empty() {
        let _ = writeln!(
            svg,
            r##"<g fill="none" stroke="#d62728" stroke-width="{:.4}" stroke-dasharray="4 3">"##,
            2.0 * stroke
        );
        for left in [true, false] {
            let mut side: Vec<_> = borders
                .iter()
                .filter(|(_, r, _)| matches!(r, Role::BorderL | Role::CornerLeft) == left)
                .collect();
            side.sort_by_key(|(a, _, _)| (a.sector(), a.level()));
            let mids: Vec<DiscPoint> = side
                .windows(2)
                .filter_map(|w| shared_midpoint(w[0].2, w[1].2))
                .collect();
            if mids.len() > 1 {
                let _ = writeln!(svg, r#"<polyline points="{}"/>"#, canvas.points(&mids));
            }
        }
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
