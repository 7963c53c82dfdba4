use std::collections::{BTreeMap, BTreeSet};

use crate::heptagrid::{edge_roles, EdgeRole, NodeKind, SIDES};
use crate::machine::{Move, StateId, Symbol, TuringMachine};

use super::{EdgeColor, Flow, Role, Tag, TilePrototype, TileSet};

/// Non-chord tree positions: the son slot under the father fixes the kind.
#[derive(Clone, Copy, Debug)]
enum Slot {
    B0,
    W1,
    W2,
}

impl Slot {
    const ALL: [Slot; 3] = [Slot::B0, Slot::W1, Slot::W2];

    fn kind(self) -> NodeKind {
        match self {
            Slot::B0 => NodeKind::B,
            _ => NodeKind::W,
        }
    }

    fn father(self) -> EdgeColor {
        EdgeColor::tree(match self {
            Slot::B0 => 0,
            Slot::W1 => 1,
            Slot::W2 => 2,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Slot::B0 => "B0",
            Slot::W1 => "W1",
            Slot::W2 => "W2",
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Arrival {
    Above,
    Left,
    Right,
}

impl Arrival {
    fn name(self) -> &'static str {
        match self {
            Arrival::Above => "above",
            Arrival::Left => "left",
            Arrival::Right => "right",
        }
    }
}

/// Edge colours of a tree node by role; unset roles are blank.
struct Sides {
    father: EdgeColor,
    right: EdgeColor,
    left: EdgeColor,
    nephew: EdgeColor,
    uncle: EdgeColor,
    sons: [EdgeColor; 3],
}

impl Sides {
    fn new(father: EdgeColor) -> Self {
        Sides {
            father,
            right: EdgeColor::blank(),
            left: EdgeColor::blank(),
            nephew: EdgeColor::blank(),
            uncle: EdgeColor::blank(),
            sons: [EdgeColor::blank(), EdgeColor::blank(), EdgeColor::blank()],
        }
    }

    /// Sides of a tile strictly inside the harp above its last level.
    fn inner(kind: NodeKind, father: EdgeColor) -> Self {
        let mut s = Sides::new(father);
        s.right = EdgeColor::level(None);
        s.left = EdgeColor::level(None);
        s.nephew = EdgeColor::bare(Tag::Inside);
        if kind == NodeKind::B {
            s.uncle = EdgeColor::bare(Tag::Inside);
            s.sons = [EdgeColor::tree(0), EdgeColor::tree(1), EdgeColor::blank()];
        } else {
            s.sons = [EdgeColor::tree(0), EdgeColor::tree(1), EdgeColor::tree(2)];
        }
        s
    }

    /// Sides of a tile on the last level: laterals carry the silver flow.
    fn last(kind: NodeKind, father: EdgeColor, left: EdgeColor, right: EdgeColor) -> Self {
        let mut s = Sides::new(father);
        s.left = left;
        s.right = right;
        if kind == NodeKind::B {
            s.uncle = EdgeColor::bare(Tag::Inside);
        }
        s
    }

    fn assemble(self, kind: NodeKind) -> [EdgeColor; SIDES] {
        let roles = edge_roles(kind);
        std::array::from_fn(|e| match roles[e] {
            EdgeRole::Father => self.father.clone(),
            EdgeRole::RightLateral => self.right.clone(),
            EdgeRole::LeftLateral => self.left.clone(),
            EdgeRole::Nephew => self.nephew.clone(),
            EdgeRole::Uncle => self.uncle.clone(),
            EdgeRole::Son(k) => self.sons[k as usize].clone(),
        })
    }
}

/// Which signal payloads the machine can actually produce.
struct Plan<'a> {
    tm: &'a TuringMachine,
    /// `(written, next state, move)` of the rules into working states that
    /// the head can enter: the first rule, and any rule some output of this
    /// set leads into.
    outputs: BTreeSet<(Symbol, StateId, Move)>,
    /// States that travel along a level, with the direction of travel.
    lateral: BTreeSet<(StateId, Move)>,
}

fn lateral_of(outputs: &BTreeSet<(Symbol, StateId, Move)>) -> BTreeSet<(StateId, Move)> {
    outputs
        .iter()
        .filter(|o| o.2 != Move::S)
        .map(|&(_, q, m)| (q, m))
        .collect()
}

impl<'a> Plan<'a> {
    fn new(tm: &'a TuringMachine) -> Self {
        // shrink from all outputs until every counted rule can be entered
        let mut outputs: BTreeSet<_> = tm
            .rules()
            .filter(|(_, t)| !tm.is_halt(t.state))
            .map(|(_, t)| (t.write, t.state, t.movement))
            .collect();
        loop {
            let lateral = lateral_of(&outputs);
            let next: BTreeSet<_> = tm
                .rules()
                .filter(|&((q, s), t)| {
                    let first = q == tm.start() && s == tm.blank();
                    let entered = outputs.contains(&(s, q, Move::S))
                        || lateral.contains(&(q, Move::L))
                        || lateral.contains(&(q, Move::R));
                    !tm.is_halt(q) && !tm.is_halt(t.state) && (first || entered)
                })
                .map(|(_, t)| (t.write, t.state, t.movement))
                .collect();
            if next == outputs {
                break;
            }
            outputs = next;
        }
        let lateral = lateral_of(&outputs);
        Plan { tm, outputs, lateral }
    }

    fn sym(&self, s: Symbol) -> &str {
        self.tm.symbol_name(s)
    }

    fn state(&self, q: StateId) -> &str {
        self.tm.state_name(q)
    }

    fn chord(&self, s: Symbol, head: Option<(StateId, Move)>) -> EdgeColor {
        EdgeColor::chord(self.sym(s), head.map(|(q, m)| (self.state(q), m)))
    }

    fn h(&self, head: Option<(StateId, Move)>) -> EdgeColor {
        EdgeColor::level(head.map(|(q, m)| (self.state(q), m)))
    }

    fn ag(&self, flow: Flow, head: Option<(StateId, Move)>) -> EdgeColor {
        EdgeColor::silver(flow, head.map(|(q, m)| (self.state(q), m)))
    }

    /// Chord colour leaving a tile that executes the rule for `(q, s)`.
    fn output(&self, q: StateId, s: Symbol) -> Option<EdgeColor> {
        let t = self.tm.transition(q, s)?;
        (!self.tm.is_halt(t.state)).then(|| self.chord(t.write, Some((t.state, t.movement))))
    }

    fn arrivals(&self, q: StateId, s: Symbol) -> Vec<Arrival> {
        let mut out = Vec::new();
        if self.outputs.contains(&(s, q, Move::S)) {
            out.push(Arrival::Above);
        }
        if self.lateral.contains(&(q, Move::R)) {
            out.push(Arrival::Left);
        }
        if self.lateral.contains(&(q, Move::L)) {
            out.push(Arrival::Right);
        }
        out
    }

    fn working_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.tm.states().filter(|&q| !self.tm.is_halt(q))
    }
}

fn opposite(m: Move) -> Flow {
    if m == Move::R {
        Flow::L
    } else {
        Flow::R
    }
}

/// Builds the prototiles for `tm`. Only signal payloads that some rule can
/// emit are compiled, so every coloured edge has a partner in the set.
pub fn compile(tm: &TuringMachine) -> TileSet {
    let plan = Plan::new(tm);
    let mut out: Vec<TilePrototype> = Vec::new();
    let blank = EdgeColor::blank;
    let w = NodeKind::W;
    let b = NodeKind::B;
    let blank_sym = tm.blank();
    let mut push = |id: String, role: Role, edges: [EdgeColor; SIDES]| {
        out.push(TilePrototype::new(id, role, edges));
    };

    // root
    match plan.output(tm.start(), blank_sym).filter(|_| !tm.is_halt(tm.start())) {
        Some(first) => {
            let mut s = Sides::new(blank());
            s.sons = [EdgeColor::bare(Tag::BorderL), first, EdgeColor::bare(Tag::BorderR)];
            push("root".into(), Role::Root, s.assemble(w));
        }
        None => push("rootHalt".into(), Role::RootHalt, std::array::from_fn(|_| blank())),
    }

    // left border
    let mut s = Sides::inner(b, EdgeColor::bare(Tag::BorderL));
    s.left = blank();
    s.uncle = blank();
    s.sons[0] = EdgeColor::bare(Tag::BorderL);
    push("borderL".into(), Role::BorderL, s.assemble(b));
    let s = Sides::last(b, EdgeColor::bare(Tag::BorderL), blank(), plan.ag(Flow::L, None));
    let mut edges = s.assemble(b);
    edges[SIDES - 1] = blank();
    push("cornerL".into(), Role::CornerLeft, edges);

    // right border
    let border_r = |son1: EdgeColor, left: EdgeColor| {
        let mut s = Sides::new(EdgeColor::bare(Tag::BorderR));
        s.sons = [EdgeColor::tree(0), son1, EdgeColor::bare(Tag::BorderR)];
        s.left = left;
        s.assemble(w)
    };
    push(
        "borderR".into(),
        Role::BorderR,
        border_r(plan.chord(blank_sym, None), plan.h(None)),
    );
    for q in plan.working_states() {
        if !plan.lateral.contains(&(q, Move::R)) {
            continue;
        }
        let arriving = Some((q, Move::R));
        match plan.output(q, blank_sym) {
            Some(o) => push(
                format!("borderR.exec.{}", plan.state(q)),
                Role::BorderRExec,
                border_r(o, plan.h(arriving)),
            ),
            None => push(
                format!("borderR.halt.{}", plan.state(q)),
                Role::BorderSilverEnd,
                Sides::last(w, EdgeColor::bare(Tag::BorderR), plan.ag(Flow::L, arriving), blank()).assemble(w),
            ),
        }
    }
    push(
        "cornerR".into(),
        Role::CornerRight,
        Sides::last(w, EdgeColor::bare(Tag::BorderR), plan.ag(Flow::R, None), blank()).assemble(w),
    );

    // plain inner tiles and the travelling head
    for slot in Slot::ALL {
        let k = slot.kind();
        push(
            format!("inside.{}", slot.name()),
            Role::Inside,
            Sides::inner(k, slot.father()).assemble(k),
        );
    }
    for slot in Slot::ALL {
        let k = slot.kind();
        for &(q, d) in &plan.lateral {
            let mut s = Sides::inner(k, slot.father());
            s.left = plan.h(Some((q, d)));
            s.right = plan.h(Some((q, d)));
            push(
                format!("transit.{}.{}.{}", slot.name(), plan.state(q), d),
                Role::TransitSignal,
                s.assemble(k),
            );
        }
    }

    // chords
    let chord_tile = |father: EdgeColor, son1: EdgeColor, left: EdgeColor, right: EdgeColor| {
        let mut s = Sides::inner(w, father);
        s.sons[1] = son1;
        s.left = left;
        s.right = right;
        s.assemble(w)
    };
    for s in tm.symbols() {
        let plain = plan.chord(s, None);
        push(
            format!("chord.{}", plan.sym(s)),
            Role::ChordPass,
            chord_tile(plain.clone(), plain, plan.h(None), plan.h(None)),
        );
    }
    for &(s, q, d) in plan.outputs.iter().filter(|o| o.2 != Move::S) {
        let head = plan.h(Some((q, d)));
        let (left, right) = if d == Move::R {
            (plan.h(None), head)
        } else {
            (head, plan.h(None))
        };
        push(
            format!("chord.{}.depart.{}.{}", plan.sym(s), plan.state(q), d),
            Role::ChordDepart,
            chord_tile(plan.chord(s, Some((q, d))), plan.chord(s, None), left, right),
        );
    }
    for q in plan.working_states() {
        for s in tm.symbols() {
            let Some(o) = plan.output(q, s) else { continue };
            for a in plan.arrivals(q, s) {
                let (father, left, right) = match a {
                    Arrival::Above => (plan.chord(s, Some((q, Move::S))), plan.h(None), plan.h(None)),
                    Arrival::Left => (plan.chord(s, None), plan.h(Some((q, Move::R))), plan.h(None)),
                    Arrival::Right => (plan.chord(s, None), plan.h(None), plan.h(Some((q, Move::L)))),
                };
                push(
                    format!("exec.{}.{}.{}", plan.state(q), plan.sym(s), a.name()),
                    Role::ChordExec,
                    chord_tile(father, o.clone(), left, right),
                );
            }
        }
    }

    // the last level
    for s in tm.symbols() {
        for f in [Flow::L, Flow::R] {
            push(
                format!("silver.chord.{}.{}", plan.sym(s), f.token()),
                Role::SilverChordCross,
                Sides::last(w, plan.chord(s, None), plan.ag(f, None), plan.ag(f, None)).assemble(w),
            );
        }
    }
    for &(s, q, d) in plan.outputs.iter().filter(|o| o.2 != Move::S) {
        let f = opposite(d);
        let head = plan.ag(f, Some((q, d)));
        let (left, right) = if d == Move::R {
            (plan.ag(f, None), head)
        } else {
            (head, plan.ag(f, None))
        };
        push(
            format!("silver.chord.{}.depart.{}.{}", plan.sym(s), plan.state(q), d),
            Role::SilverChordCross,
            Sides::last(w, plan.chord(s, Some((q, d))), left, right).assemble(w),
        );
    }
    for q in plan.working_states() {
        for s in tm.symbols() {
            if !tm.halts_on(q, s) {
                continue;
            }
            for a in plan.arrivals(q, s) {
                let (father, left, right) = match a {
                    Arrival::Above => (
                        plan.chord(s, Some((q, Move::S))),
                        plan.ag(Flow::L, None),
                        plan.ag(Flow::R, None),
                    ),
                    Arrival::Left => (
                        plan.chord(s, None),
                        plan.ag(Flow::L, Some((q, Move::R))),
                        plan.ag(Flow::R, None),
                    ),
                    Arrival::Right => (
                        plan.chord(s, None),
                        plan.ag(Flow::L, None),
                        plan.ag(Flow::R, Some((q, Move::L))),
                    ),
                };
                push(
                    format!("emit.{}.{}.{}", plan.state(q), plan.sym(s), a.name()),
                    Role::SilverEmit,
                    Sides::last(w, father, left, right).assemble(w),
                );
            }
        }
    }
    for slot in Slot::ALL {
        let k = slot.kind();
        for f in [Flow::L, Flow::R] {
            push(
                format!("silver.{}.{}", slot.name(), f.token()),
                Role::SilverTransit,
                Sides::last(k, slot.father(), plan.ag(f, None), plan.ag(f, None)).assemble(k),
            );
        }
        for &(q, d) in &plan.lateral {
            let c = plan.ag(opposite(d), Some((q, d)));
            push(
                format!("silver.{}.{}.{}.{}", slot.name(), opposite(d).token(), plan.state(q), d),
                Role::SilverTransit,
                Sides::last(k, slot.father(), c.clone(), c).assemble(k),
            );
        }
    }

    TileSet {
        prototypes: out,
        blank: TilePrototype::new("blank", Role::Blank, std::array::from_fn(|_| blank())),
    }
}

/// Number of prototiles [`compile`] produces for each role, counted from the
/// machine's rule table without building any tile.
///
/// With `O` the set of `(written, next state, move)` over the rules into
/// working states that the head can enter (the first rule, or one that some
/// other member of `O` leads into, by moving sideways or by staying on the
/// symbol it wrote), `M = |{o ∈ O : move ≠ S}|`, `Λ` the set of `(state, L|R)` pairs
/// occurring in `O`, and `a(q, s)` the number of ways the head can reach a
/// chord in state `q` over symbol `s` (from above if `(s, q, S) ∈ O`, from
/// the left if `(q, R) ∈ Λ`, from the right if `(q, L) ∈ Λ`):
///
/// | role | count |
/// |---|---|
/// | root or rootHalt | 1 |
/// | borderL, cornerLeft_m, borderR, cornerRight_n | 1 each |
/// | borderRExec / borderSilverEnd | states `q` with `(q, R) ∈ Λ` whose rule on blank continues / halts |
/// | inside | 3 (son slots B0, W1, W2) |
/// | transitSignal | `3 · |Λ|` |
/// | chordPass | `|Σ|` |
/// | chordDepart | `M` |
/// | chordExec / silverEmit_i | sum of `a(q, s)` over continuing / halting rules |
/// | silverChordCross | `2 · |Σ| + M` |
/// | silverTransit | `6 + 3 · |Λ|` |
pub fn prototile_census(tm: &TuringMachine) -> BTreeMap<Role, usize> {
    let working: Vec<StateId> = tm.states().filter(|&q| !tm.is_halt(q)).collect();
    let symbols: Vec<Symbol> = tm.symbols().collect();
    // rules into working states, dropped one at a time while no output of
    // the remaining rules leads into them
    let mut live: Vec<(StateId, Symbol)> = working
        .iter()
        .flat_map(|&q| symbols.iter().map(move |&s| (q, s)))
        .filter(|&(q, s)| tm.transition(q, s).is_some_and(|t| !tm.is_halt(t.state)))
        .collect();
    let output_of = |&(q, s): &(StateId, Symbol)| {
        let t = tm.transition(q, s).expect("live rules exist");
        (t.write, t.state, t.movement)
    };
    while let Some(dead) = live.iter().position(|&(q, s)| {
        let fed = live
            .iter()
            .map(output_of)
            .any(|(w, p, m)| p == q && (m != Move::S || w == s));
        !fed && (q, s) != (tm.start(), tm.blank())
    }) {
        live.remove(dead);
    }
    let outputs: BTreeSet<_> = live.iter().map(output_of).collect();
    let moving = outputs.iter().filter(|o| o.2 != Move::S).count();
    let travels = |q: StateId, m: Move| outputs.iter().any(|o| o.1 == q && o.2 == m);
    let lateral: usize = working
        .iter()
        .map(|&q| travels(q, Move::L) as usize + travels(q, Move::R) as usize)
        .sum();
    let ways_in = |q: StateId, s: Symbol| {
        outputs.contains(&(s, q, Move::S)) as usize + travels(q, Move::R) as usize + travels(q, Move::L) as usize
    };

    let mut census = BTreeMap::new();
    let root_halts = tm.is_halt(tm.start()) || tm.halts_on(tm.start(), tm.blank());
    census.insert(if root_halts { Role::RootHalt } else { Role::Root }, 1);
    for role in [Role::BorderL, Role::CornerLeft, Role::BorderR, Role::CornerRight] {
        census.insert(role, 1);
    }
    let enter_right = working.iter().filter(|&&q| travels(q, Move::R));
    let halting_right = enter_right.clone().filter(|&&q| tm.halts_on(q, tm.blank())).count();
    census.insert(Role::BorderRExec, enter_right.count() - halting_right);
    census.insert(Role::BorderSilverEnd, halting_right);
    census.insert(Role::Inside, 3);
    census.insert(Role::TransitSignal, 3 * lateral);
    census.insert(Role::ChordPass, symbols.len());
    census.insert(Role::ChordDepart, moving);
    let (mut exec, mut emit) = (0, 0);
    for &q in &working {
        for &s in &symbols {
            if tm.halts_on(q, s) {
                emit += ways_in(q, s);
            } else {
                exec += ways_in(q, s);
            }
        }
    }
    census.insert(Role::ChordExec, exec);
    census.insert(Role::SilverEmit, emit);
    census.insert(Role::SilverChordCross, 2 * symbols.len() + moving);
    census.insert(Role::SilverTransit, 6 + 3 * lateral);
    census.retain(|_, n| *n > 0);
    census
}
