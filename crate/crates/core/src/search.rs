//! Bounded search for finite tilings around the central tile of a patch.
//!
//! Every finite tiling can be moved so that one of its tiles covers the
//! center, so the search tries each rotated prototile there and then fills,
//! depth first, every cell that a placed tile demands (a coloured edge facing
//! an empty cell). The most constrained cell is filled first.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::harp::Configuration;
use crate::heptagrid::{build_patch, AdjacencyMap, Neighbor, PatchError, TileAddress, SIDES};
use crate::reduction::{EdgeColor, TileSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Depth of the patch; only cells with all neighbours inside it are used.
    pub radius: u32,
    /// Largest number of tiles in a candidate tiling.
    pub max_cells: usize,
    /// Search nodes allowed for each tile tried at the center.
    pub max_nodes: u64,
    pub time_limit: Option<Duration>,
    pub threads: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            radius: 4,
            max_cells: 1000,
            max_nodes: 200_000,
            time_limit: None,
            threads: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Found(Configuration),
    /// Some branch was cut by the node or time budget. `depth` is the most
    /// tiles any branch held at once.
    BudgetExhausted {
        nodes: u64,
        depth: usize,
    },
    /// The whole space allowed by the radius and cell bound was explored.
    NoneInSpace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub verdict: Verdict,
    pub nodes: u64,
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Patch(#[from] PatchError),
    #[error("could not start worker threads: {0}")]
    Threads(String),
}

struct Candidate {
    proto: usize,
    rot: u8,
    colors: [u32; SIDES],
}

type Bits = Vec<u64>;

struct Space<'a> {
    ts: &'a TileSet,
    patch: AdjacencyMap,
    cands: Vec<Candidate>,
    /// `index[e][c]`: candidates showing colour `c` on edge `e`.
    index: Vec<Vec<Bits>>,
    words: usize,
}

const BLANK: u32 = 0;

impl<'a> Space<'a> {
    fn new(ts: &'a TileSet, patch: AdjacencyMap) -> Self {
        let mut ids: HashMap<EdgeColor, u32> = HashMap::new();
        ids.insert(EdgeColor::blank(), BLANK);
        let mut seen = HashSet::new();
        let mut cands = Vec::new();
        for (proto, p) in ts.prototypes.iter().enumerate() {
            for rot in 0..SIDES as u8 {
                let colors = p.rotated(rot).map(|c| {
                    let next = ids.len() as u32;
                    *ids.entry(c).or_insert(next)
                });
                if seen.insert(colors) {
                    cands.push(Candidate { proto, rot, colors });
                }
            }
        }
        let words = cands.len().div_ceil(64);
        let mut index = vec![vec![vec![0u64; words]; ids.len()]; SIDES];
        for (k, c) in cands.iter().enumerate() {
            for e in 0..SIDES {
                index[e][c.colors[e] as usize][k / 64] |= 1 << (k % 64);
            }
        }
        Space {
            ts,
            patch,
            cands,
            index,
            words,
        }
    }

    fn configuration(&self, placed: &[(usize, usize)]) -> Configuration {
        let mut cfg = Configuration::new();
        for &(cell, k) in placed {
            let c = &self.cands[k];
            cfg.place(
                self.patch.tile(cell).address.clone(),
                self.ts.prototypes[c.proto].id.clone(),
                c.rot,
            );
        }
        cfg
    }
}

enum Stop {
    Nodes,
    Time,
    Aborted,
    Enough,
}

struct Dfs<'s, 'a> {
    space: &'s Space<'a>,
    budget: &'s SearchBudget,
    deadline: Option<Instant>,
    cell: Vec<Option<usize>>,
    demand: Vec<u32>,
    frontier: BTreeSet<usize>,
    stack: Vec<(usize, usize)>,
    nodes: u64,
    depth: usize,
    abort: Option<(&'s AtomicUsize, usize)>,
    solutions: Vec<Vec<(usize, usize)>>,
    want: usize,
}

impl<'s, 'a> Dfs<'s, 'a> {
    fn new(space: &'s Space<'a>, budget: &'s SearchBudget, deadline: Option<Instant>, want: usize) -> Self {
        let n = space.patch.len();
        Dfs {
            space,
            budget,
            deadline,
            cell: vec![None; n],
            demand: vec![0; n],
            frontier: BTreeSet::new(),
            stack: Vec::new(),
            nodes: 0,
            depth: 0,
            abort: None,
            solutions: Vec::new(),
            want,
        }
    }

    fn options(&self, cell: usize) -> Option<Bits> {
        if !self.space.patch.is_interior(cell) {
            return None;
        }
        let mut mask = vec![u64::MAX; self.space.words];
        for e in 0..SIDES {
            let Neighbor::Tile { index: j, edge: f } = self.space.patch.neighbor(cell, e) else {
                return None;
            };
            if let Some(k) = self.cell[j] {
                let color = self.space.cands[k].colors[f as usize];
                let allowed = &self.space.index[e][color as usize];
                mask.iter_mut().zip(allowed).for_each(|(m, a)| *m &= a);
            }
        }
        let extra = self.space.words * 64 - self.space.cands.len();
        if extra > 0 {
            let last = mask.len() - 1;
            mask[last] &= u64::MAX >> extra;
        }
        Some(mask)
    }

    fn place(&mut self, cell: usize, k: usize) {
        self.cell[cell] = Some(k);
        self.frontier.remove(&cell);
        self.stack.push((cell, k));
        self.depth = self.depth.max(self.stack.len());
        let colors = self.space.cands[k].colors;
        for (e, &color) in colors.iter().enumerate() {
            if color == BLANK {
                continue;
            }
            if let Neighbor::Tile { index: j, .. } = self.space.patch.neighbor(cell, e) {
                self.demand[j] += 1;
                if self.cell[j].is_none() {
                    self.frontier.insert(j);
                }
            }
        }
    }

    fn unplace(&mut self) {
        let (cell, k) = self.stack.pop().expect("placed before");
        self.cell[cell] = None;
        let colors = self.space.cands[k].colors;
        for (e, &color) in colors.iter().enumerate() {
            if color == BLANK {
                continue;
            }
            if let Neighbor::Tile { index: j, .. } = self.space.patch.neighbor(cell, e) {
                self.demand[j] -= 1;
                if self.demand[j] == 0 {
                    self.frontier.remove(&j);
                }
            }
        }
        if self.demand[cell] > 0 {
            self.frontier.insert(cell);
        }
    }

    fn run(&mut self) -> Result<(), Stop> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(Stop::Nodes);
        }
        if self.nodes.is_multiple_of(1024) {
            if self.deadline.is_some_and(|d| Instant::now() >= d) {
                return Err(Stop::Time);
            }
            if let Some((flag, me)) = self.abort {
                if flag.load(Ordering::Relaxed) < me {
                    return Err(Stop::Aborted);
                }
            }
        }
        if self.frontier.is_empty() {
            self.solutions.push(self.stack.clone());
            return if self.solutions.len() >= self.want {
                Err(Stop::Enough)
            } else {
                Ok(())
            };
        }
        if self.stack.len() >= self.budget.max_cells {
            return Ok(());
        }
        let mut best: Option<(u32, usize, Bits)> = None;
        for &c in &self.frontier {
            let Some(mask) = self.options(c) else {
                return Ok(());
            };
            let count: u32 = mask.iter().map(|w| w.count_ones()).sum();
            if count == 0 {
                return Ok(());
            }
            if best.as_ref().is_none_or(|b| count < b.0) {
                best = Some((count, c, mask));
            }
        }
        let (_, c, mask) = best.expect("frontier is not empty");
        for (w, word) in mask.iter().enumerate() {
            let mut bits = *word;
            while bits != 0 {
                let k = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                self.place(c, k);
                let r = self.run();
                self.unplace();
                r?;
            }
        }
        Ok(())
    }
}

enum AnchorResult {
    Found(Vec<Vec<(usize, usize)>>),
    Exhausted,
    Empty,
}

struct AnchorRun {
    result: AnchorResult,
    nodes: u64,
    depth: usize,
}

fn search_anchor(
    space: &Space<'_>,
    budget: &SearchBudget,
    deadline: Option<Instant>,
    k: usize,
    want: usize,
    abort: Option<(&AtomicUsize, usize)>,
) -> AnchorRun {
    let mut dfs = Dfs::new(space, budget, deadline, want);
    dfs.abort = abort;
    dfs.place(0, k);
    let stop = dfs.run().err();
    let result = match stop {
        _ if !dfs.solutions.is_empty() => AnchorResult::Found(std::mem::take(&mut dfs.solutions)),
        Some(Stop::Nodes | Stop::Time | Stop::Aborted) => AnchorResult::Exhausted,
        _ => AnchorResult::Empty,
    };
    AnchorRun {
        result,
        nodes: dfs.nodes,
        depth: dfs.depth,
    }
}

fn prepare<'a>(ts: &'a TileSet, budget: &SearchBudget) -> Result<Space<'a>, SearchError> {
    Ok(Space::new(ts, build_patch(budget.radius)?))
}

fn pool(budget: &SearchBudget) -> Result<rayon::ThreadPool, SearchError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(budget.threads.max(1))
        .build()
        .map_err(|e| SearchError::Threads(e.to_string()))
}

/// Looks for a finite tiling with at least one non-blank tile. The verdict
/// does not depend on the number of threads.
pub fn find_finite_tiling(ts: &TileSet, budget: &SearchBudget) -> Result<SearchOutcome, SearchError> {
    use rayon::prelude::*;
    let space = prepare(ts, budget)?;
    let deadline = budget.time_limit.map(|d| Instant::now() + d);
    // lowest anchor known to succeed; anchors above it stop early
    let best = AtomicUsize::new(usize::MAX);
    let runs: Vec<AnchorRun> = pool(budget)?.install(|| {
        (0..space.cands.len())
            .into_par_iter()
            .map(|k| {
                if best.load(Ordering::Relaxed) < k {
                    return AnchorRun {
                        result: AnchorResult::Exhausted,
                        nodes: 0,
                        depth: 0,
                    };
                }
                let r = search_anchor(&space, budget, deadline, k, 1, Some((&best, k)));
                if matches!(r.result, AnchorResult::Found(_)) {
                    best.fetch_min(k, Ordering::Relaxed);
                }
                r
            })
            .collect()
    });
    let winner = best.load(Ordering::Relaxed);
    let (mut nodes, mut depth) = (0, 0);
    let mut exhausted = false;
    let mut found = None;
    for (k, run) in runs.into_iter().enumerate() {
        if k > winner {
            break;
        }
        nodes += run.nodes;
        depth = depth.max(run.depth);
        match run.result {
            AnchorResult::Found(mut s) => found = Some(s.swap_remove(0)),
            AnchorResult::Exhausted => exhausted = true,
            AnchorResult::Empty => {}
        }
    }
    let verdict = match found {
        Some(placed) => Verdict::Found(space.configuration(&placed)),
        None if exhausted => Verdict::BudgetExhausted { nodes, depth },
        None => Verdict::NoneInSpace,
    };
    Ok(SearchOutcome { verdict, nodes })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolutionCount {
    Exact(usize),
    BudgetExhausted { nodes: u64, depth: usize },
}

/// Counts the distinct finite tilings that cover the center. Tilings reached
/// from several anchors are counted once.
pub fn count_solutions(ts: &TileSet, budget: &SearchBudget) -> Result<SolutionCount, SearchError> {
    use rayon::prelude::*;
    let space = prepare(ts, budget)?;
    let deadline = budget.time_limit.map(|d| Instant::now() + d);
    let runs: Vec<AnchorRun> = pool(budget)?.install(|| {
        (0..space.cands.len())
            .into_par_iter()
            .map(|k| search_anchor(&space, budget, deadline, k, usize::MAX, None))
            .collect()
    });
    let mut distinct: HashSet<Vec<(TileAddress, [u32; SIDES])>> = HashSet::new();
    let (mut nodes, mut depth) = (0, 0);
    let mut exhausted = false;
    for run in runs {
        nodes += run.nodes;
        depth = depth.max(run.depth);
        match run.result {
            AnchorResult::Found(all) => {
                for placed in all {
                    let mut key: Vec<_> = placed
                        .iter()
                        .map(|&(cell, k)| (space.patch.tile(cell).address.clone(), space.cands[k].colors))
                        .collect();
                    key.sort();
                    distinct.insert(key);
                }
            }
            AnchorResult::Exhausted => exhausted = true,
            AnchorResult::Empty => {}
        }
    }
    Ok(if exhausted {
        SolutionCount::BudgetExhausted { nodes, depth }
    } else {
        SolutionCount::Exact(distinct.len())
    })
}
