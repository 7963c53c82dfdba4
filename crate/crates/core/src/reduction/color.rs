use std::fmt;
use std::str::FromStr;

use crate::machine::{valid_name, Move};

/// Structural part of an edge colour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Blank,
    /// Uncle/nephew links between neighbouring subtrees.
    Inside,
    /// Father-son link along the left border of the harp.
    BorderL,
    /// Father-son link along the right border; implies the blank symbol.
    BorderR,
    /// Lateral link on the closing level.
    Silver,
    /// Father-son link to the son with the given index.
    Tree(u8),
    /// Lateral link between tiles of one level.
    Level,
}

/// Direction in which the silver signal spreads away from the halting tile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flow {
    L,
    R,
}

impl Flow {
    pub fn token(self) -> &'static str {
        match self {
            Flow::L => "L",
            Flow::R => "R",
        }
    }
}

/// Colour carried by one edge of a prototile.
///
/// Token grammar: `<tag>[:<key>=<value>(,<key>=<value>)*]` with tags `blank`,
/// `in`, `bl`, `br`, `ag`, `v0`, `v1`, `v2`, `h` and keys in the fixed order
/// `flow`, `sym`, `q`, `d`. Examples: `v1:sym=1`, `h:q=q0,d=R`,
/// `ag:flow=L`, `v1:sym=_,q=q2,d=S`, `ag:flow=L,q=q1,d=R`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeColor {
    pub tag: Tag,
    pub flow: Option<Flow>,
    pub sym: Option<String>,
    /// Computing signal: current state and the move that brought it here.
    pub head: Option<(String, Move)>,
}

impl EdgeColor {
    pub fn bare(tag: Tag) -> Self {
        EdgeColor {
            tag,
            flow: None,
            sym: None,
            head: None,
        }
    }

    pub fn blank() -> Self {
        Self::bare(Tag::Blank)
    }

    pub fn is_blank(&self) -> bool {
        self.tag == Tag::Blank
    }

    pub fn tree(slot: u8) -> Self {
        Self::bare(Tag::Tree(slot))
    }

    /// Chord link carrying a tape symbol and, when the head descends along
    /// it, the state and the move just made.
    pub fn chord(sym: &str, head: Option<(&str, Move)>) -> Self {
        EdgeColor {
            tag: Tag::Tree(1),
            flow: None,
            sym: Some(sym.to_string()),
            head: head.map(|(q, m)| (q.to_string(), m)),
        }
    }

    pub fn level(head: Option<(&str, Move)>) -> Self {
        EdgeColor {
            tag: Tag::Level,
            flow: None,
            sym: None,
            head: head.map(|(q, m)| (q.to_string(), m)),
        }
    }

    pub fn silver(flow: Flow, head: Option<(&str, Move)>) -> Self {
        EdgeColor {
            tag: Tag::Silver,
            flow: Some(flow),
            sym: None,
            head: head.map(|(q, m)| (q.to_string(), m)),
        }
    }

    /// Checks which payloads may ride on which tag.
    pub fn well_formed(&self) -> Result<(), String> {
        match self.tag {
            Tag::Blank | Tag::Inside | Tag::BorderL | Tag::BorderR => {
                if self.flow.is_some() || self.sym.is_some() || self.head.is_some() {
                    return Err(format!("{self}: tag carries no payload"));
                }
            }
            Tag::Tree(slot) => {
                if slot > 2 {
                    return Err(format!("{self}: son slot out of range"));
                }
                if self.flow.is_some() {
                    return Err(format!("{self}: flow only on silver edges"));
                }
                if self.head.is_some() && (self.sym.is_none() || slot != 1) {
                    return Err(format!("{self}: head descends only along a chord"));
                }
            }
            Tag::Level => {
                if self.flow.is_some() || self.sym.is_some() {
                    return Err(format!("{self}: level edges carry only the head"));
                }
            }
            Tag::Silver => {
                if self.flow.is_none() || self.sym.is_some() {
                    return Err(format!("{self}: silver edges need a flow and no symbol"));
                }
            }
        }
        if let Some((_, Move::S)) = &self.head {
            if self.tag != Tag::Tree(1) {
                return Err(format!("{self}: stay moves travel only down a chord"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for EdgeColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tag {
            Tag::Blank => f.write_str("blank")?,
            Tag::Inside => f.write_str("in")?,
            Tag::BorderL => f.write_str("bl")?,
            Tag::BorderR => f.write_str("br")?,
            Tag::Silver => f.write_str("ag")?,
            Tag::Tree(k) => write!(f, "v{k}")?,
            Tag::Level => f.write_str("h")?,
        }
        let mut sep = ':';
        let mut field = |f: &mut fmt::Formatter<'_>, key: &str, value: &str| {
            let r = write!(f, "{sep}{key}={value}");
            sep = ',';
            r
        };
        if let Some(flow) = self.flow {
            field(f, "flow", flow.token())?;
        }
        if let Some(sym) = &self.sym {
            field(f, "sym", sym)?;
        }
        if let Some((q, d)) = &self.head {
            field(f, "q", q)?;
            field(f, "d", d.token())?;
        }
        Ok(())
    }
}

impl FromStr for EdgeColor {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let (tag, rest) = match text.split_once(':') {
            Some((t, r)) => (t, Some(r)),
            None => (text, None),
        };
        let tag = match tag {
            "blank" => Tag::Blank,
            "in" => Tag::Inside,
            "bl" => Tag::BorderL,
            "br" => Tag::BorderR,
            "ag" => Tag::Silver,
            "h" => Tag::Level,
            "v0" => Tag::Tree(0),
            "v1" => Tag::Tree(1),
            "v2" => Tag::Tree(2),
            other => return Err(format!("unknown colour tag {other:?}")),
        };
        let mut color = EdgeColor::bare(tag);
        let mut q = None;
        let mut d = None;
        if let Some(rest) = rest {
            let mut last = 0;
            for field in rest.split(',') {
                let (key, value) = field
                    .split_once('=')
                    .ok_or_else(|| format!("expected key=value in {text:?}"))?;
                let order = match key {
                    "flow" => 1,
                    "sym" => 2,
                    "q" => 3,
                    "d" => 4,
                    other => return Err(format!("unknown key {other:?} in {text:?}")),
                };
                if order <= last {
                    return Err(format!("keys out of order in {text:?}"));
                }
                last = order;
                match key {
                    "flow" => {
                        color.flow = Some(match value {
                            "L" => Flow::L,
                            "R" => Flow::R,
                            _ => return Err(format!("bad flow {value:?}")),
                        })
                    }
                    "d" => d = Some(Move::parse(value).ok_or_else(|| format!("bad move {value:?}"))?),
                    _ => {
                        if !valid_name(value) {
                            return Err(format!("bad name {value:?} in {text:?}"));
                        }
                        if key == "sym" {
                            color.sym = Some(value.to_string());
                        } else {
                            q = Some(value.to_string());
                        }
                    }
                }
            }
            if rest.is_empty() {
                return Err(format!("empty payload in {text:?}"));
            }
        }
        color.head = match (q, d) {
            (Some(q), Some(d)) => Some((q, d)),
            (None, None) => None,
            _ => return Err(format!("`q` and `d` go together in {text:?}")),
        };
        color.well_formed()?;
        Ok(color)
    }
}

/// Splits a comma-separated edge list where payload fields also use commas:
/// a field without a `:` that contains `=` continues the previous token.
pub fn split_edge_list(list: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for part in list.split(',') {
        let continues = !part.contains(':') && part.contains('=') && !out.is_empty();
        if continues {
            let last = out.last_mut().expect("checked non-empty");
            last.push(',');
            last.push_str(part);
        } else {
            out.push(part.to_string());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens() {
        for t in [
            "blank",
            "in",
            "bl",
            "br",
            "v0",
            "v2",
            "h",
            "v1:sym=1",
            "h:q=q0,d=R",
            "ag:flow=L",
            "v1:sym=_,q=q2,d=S",
            "ag:flow=R,q=a,d=L",
        ] {
            let c: EdgeColor = t.parse().unwrap_or_else(|e| panic!("{t}: {e}"));
            assert_eq!(c.to_string(), t);
        }
    }

    #[test]
    fn rejects_misplaced_payloads() {
        for t in [
            "blank:sym=1",
            "v0:q=a,d=R",
            "h:sym=1",
            "ag",
            "h:q=a",
            "v1:q=a,d=R,sym=1",
            "h:q=a,d=S",
            "x",
        ] {
            assert!(t.parse::<EdgeColor>().is_err(), "{t}");
        }
    }

    #[test]
    fn edge_lists() {
        let parts = split_edge_list("v1:sym=_,q=q0,d=R,h,h:q=a,d=L,blank");
        assert_eq!(parts, vec!["v1:sym=_,q=q0,d=R", "h", "h:q=a,d=L", "blank"]);
    }
}
