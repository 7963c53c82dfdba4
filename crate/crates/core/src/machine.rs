//! Deterministic Turing machines on a semi-infinite tape, started on an empty
//! tape with the head on cell 0.
//!
//! Machine file format, one directive per line, `#` starts a comment:
//!
//! ```text
//! states: q0 q1 halt
//! alphabet: _ 1
//! blank: _
//! start: q0
//! halts: halt
//! rule: q0 _ -> q1 1 R
//! ```
//!
//! Names are non-empty runs of ASCII letters, digits, `_`, `-` and `'`.
//! `states`, `alphabet`, `blank` and `start` appear exactly once; `halts`
//! at most once. The transition table must be total on non-halting states
//! and empty on halting ones.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    L,
    R,
    S,
}

impl Move {
    pub fn offset(self) -> i64 {
        match self {
            Move::L => -1,
            Move::R => 1,
            Move::S => 0,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Move::L => "L",
            Move::R => "R",
            Move::S => "S",
        }
    }

    pub fn parse(s: &str) -> Option<Move> {
        match s {
            "L" => Some(Move::L),
            "R" => Some(Move::R),
            "S" => Some(Move::S),
            _ => None,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub state: StateId,
    pub write: Symbol,
    pub movement: Move,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("invalid machine: {0}")]
    Invalid(String),
    #[error("head moved left of cell 0 at step {step}")]
    LeftEdgeViolation { step: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TuringMachine {
    states: Vec<String>,
    alphabet: Vec<String>,
    blank: Symbol,
    start: StateId,
    halts: BTreeSet<StateId>,
    delta: BTreeMap<(StateId, Symbol), Transition>,
}

pub fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '\'')
}

impl TuringMachine {
    /// Builds a machine from names, checking every structural invariant.
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        blank: &str,
        start: &str,
        halts: &[&str],
        rules: &[(&str, &str, &str, &str, Move)],
    ) -> Result<Self, MachineError> {
        let invalid = |m: String| MachineError::Invalid(m);
        for n in states.iter().chain(&alphabet) {
            if !valid_name(n) {
                return Err(invalid(format!("bad name {n:?}")));
            }
        }
        let state = |n: &str| {
            states
                .iter()
                .position(|s| s == n)
                .map(StateId)
                .ok_or_else(|| invalid(format!("unknown state {n:?}")))
        };
        let symbol = |n: &str| {
            alphabet
                .iter()
                .position(|s| s == n)
                .map(Symbol)
                .ok_or_else(|| invalid(format!("unknown symbol {n:?}")))
        };
        let blank = symbol(blank)?;
        let start = state(start)?;
        let halts = halts.iter().map(|h| state(h)).collect::<Result<BTreeSet<_>, _>>()?;
        let mut delta = BTreeMap::new();
        for &(q, s, q2, s2, m) in rules {
            let key = (state(q)?, symbol(s)?);
            let t = Transition {
                state: state(q2)?,
                write: symbol(s2)?,
                movement: m,
            };
            if delta.insert(key, t).is_some() {
                return Err(invalid(format!("duplicate rule for ({q}, {s})")));
            }
        }
        let tm = TuringMachine {
            states,
            alphabet,
            blank,
            start,
            halts,
            delta,
        };
        tm.check()?;
        Ok(tm)
    }

    fn check(&self) -> Result<(), MachineError> {
        let unique = |v: &[String], what: &str| {
            let set: BTreeSet<_> = v.iter().collect();
            if set.len() != v.len() {
                Err(MachineError::Invalid(format!("duplicate {what} name")))
            } else {
                Ok(())
            }
        };
        unique(&self.states, "state")?;
        unique(&self.alphabet, "symbol")?;
        for q in 0..self.states.len() {
            for s in 0..self.alphabet.len() {
                let (q, s) = (StateId(q), Symbol(s));
                let defined = self.delta.contains_key(&(q, s));
                if self.is_halt(q) && defined {
                    return Err(MachineError::Invalid(format!(
                        "rule defined on halting state {}",
                        self.state_name(q)
                    )));
                }
                if !self.is_halt(q) && !defined {
                    return Err(MachineError::Invalid(format!(
                        "non-total transition table: no rule for ({}, {})",
                        self.state_name(q),
                        self.symbol_name(s)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse_machine(text)
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (0..self.alphabet.len()).map(Symbol)
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn symbol_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.0]
    }

    pub fn symbol_name(&self, s: Symbol) -> &str {
        &self.alphabet[s.0]
    }

    pub fn state_by_name(&self, n: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == n).map(StateId)
    }

    pub fn symbol_by_name(&self, n: &str) -> Option<Symbol> {
        self.alphabet.iter().position(|s| s == n).map(Symbol)
    }

    pub fn blank(&self) -> Symbol {
        self.blank
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn is_halt(&self, q: StateId) -> bool {
        self.halts.contains(&q)
    }

    pub fn halts(&self) -> impl Iterator<Item = StateId> + '_ {
        self.halts.iter().copied()
    }

    pub fn transition(&self, q: StateId, s: Symbol) -> Option<Transition> {
        self.delta.get(&(q, s)).copied()
    }

    pub fn rules(&self) -> impl Iterator<Item = ((StateId, Symbol), Transition)> + '_ {
        self.delta.iter().map(|(k, v)| (*k, *v))
    }

    pub fn rule_count(&self) -> usize {
        self.delta.len()
    }

    /// Whether executing the rule for `(q, s)` enters a halting state.
    pub fn halts_on(&self, q: StateId, s: Symbol) -> bool {
        self.transition(q, s).is_some_and(|t| self.is_halt(t.state))
    }

    /// Canonical text form, accepted by [`TuringMachine::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("states: {}\n", self.states.join(" ")));
        out.push_str(&format!("alphabet: {}\n", self.alphabet.join(" ")));
        out.push_str(&format!("blank: {}\n", self.symbol_name(self.blank)));
        out.push_str(&format!("start: {}\n", self.state_name(self.start)));
        let halts: Vec<&str> = self.halts.iter().map(|&h| self.state_name(h)).collect();
        out.push_str(&format!("halts: {}\n", halts.join(" ")));
        for ((q, s), t) in &self.delta {
            out.push_str(&format!(
                "rule: {} {} -> {} {} {}\n",
                self.state_name(*q),
                self.symbol_name(*s),
                self.state_name(t.state),
                self.symbol_name(t.write),
                t.movement
            ));
        }
        out
    }
}

fn parse_machine(text: &str) -> Result<TuringMachine, ParseError> {
    struct Tok<'a> {
        text: &'a str,
        column: usize,
    }
    fn tokens(line: &str, from: usize) -> Vec<Tok<'_>> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
            if i < from {
                continue;
            }
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    out.push(Tok {
                        text: &line[s..i],
                        column: s + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        out
    }

    let mut states: Option<(usize, Vec<String>)> = None;
    let mut alphabet: Option<(usize, Vec<String>)> = None;
    let mut blank: Option<(usize, usize, String)> = None;
    let mut start: Option<(usize, usize, String)> = None;
    let mut halts: Option<Vec<(usize, usize, String)>> = None;
    let mut rules: Vec<(usize, Vec<(usize, String)>)> = Vec::new();

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let err = |column: usize, reason: String| ParseError {
            line: line_no,
            column,
            reason,
        };
        let indent = line.len() - line.trim_start().len();
        let Some(colon) = line.find(':') else {
            return Err(err(indent + 1, "expected `<directive>:`".into()));
        };
        let key = line[..colon].trim();
        let toks = tokens(line, colon + 1);
        for t in &toks {
            if t.text != "->" && !valid_name(t.text) {
                return Err(err(t.column, format!("invalid name {:?}", t.text)));
            }
        }
        let names = || toks.iter().map(|t| t.text.to_string()).collect::<Vec<_>>();
        let single = |what: &str| -> Result<(usize, usize, String), ParseError> {
            match toks.as_slice() {
                [t] => Ok((line_no, t.column, t.text.to_string())),
                _ => Err(err(colon + 2, format!("`{what}:` takes exactly one name"))),
            }
        };
        let dup = |present: bool| -> Result<(), ParseError> {
            if present {
                Err(err(indent + 1, format!("duplicate `{key}:` directive")))
            } else {
                Ok(())
            }
        };
        match key {
            "states" => {
                dup(states.is_some())?;
                states = Some((line_no, names()));
            }
            "alphabet" => {
                dup(alphabet.is_some())?;
                alphabet = Some((line_no, names()));
            }
            "blank" => {
                dup(blank.is_some())?;
                blank = Some(single("blank")?);
            }
            "start" => {
                dup(start.is_some())?;
                start = Some(single("start")?);
            }
            "halts" => {
                dup(halts.is_some())?;
                halts = Some(toks.iter().map(|t| (line_no, t.column, t.text.to_string())).collect());
            }
            "rule" => {
                if toks.len() != 6 || toks[2].text != "->" {
                    return Err(err(colon + 2, "expected `rule: <q> <s> -> <q'> <s'> <L|R|S>`".into()));
                }
                rules.push((line_no, toks.iter().map(|t| (t.column, t.text.to_string())).collect()));
            }
            other => return Err(err(indent + 1, format!("unknown directive {other:?}"))),
        }
    }

    let end = text.lines().count().max(1);
    let missing = |what: &str| ParseError {
        line: end,
        column: 1,
        reason: format!("missing `{what}:` directive"),
    };
    let (states_line, states) = states.ok_or_else(|| missing("states"))?;
    let (alpha_line, alphabet) = alphabet.ok_or_else(|| missing("alphabet"))?;
    let (bl, bc, blank) = blank.ok_or_else(|| missing("blank"))?;
    let (sl, sc, start) = start.ok_or_else(|| missing("start"))?;
    let halts = halts.unwrap_or_default();

    let dup_in = |v: &[String], line: usize, what: &str| -> Result<(), ParseError> {
        let mut seen = BTreeSet::new();
        for n in v {
            if !seen.insert(n) {
                return Err(ParseError {
                    line,
                    column: 1,
                    reason: format!("duplicate {what} {n:?}"),
                });
            }
        }
        Ok(())
    };
    dup_in(&states, states_line, "state")?;
    dup_in(&alphabet, alpha_line, "symbol")?;
    if states.is_empty() {
        return Err(ParseError {
            line: states_line,
            column: 1,
            reason: "no states".into(),
        });
    }

    let st = |line: usize, column: usize, n: &str| {
        states
            .iter()
            .position(|s| s == n)
            .map(StateId)
            .ok_or_else(|| ParseError {
                line,
                column,
                reason: format!("unknown state {n:?}"),
            })
    };
    let sy = |line: usize, column: usize, n: &str| {
        alphabet
            .iter()
            .position(|s| s == n)
            .map(Symbol)
            .ok_or_else(|| ParseError {
                line,
                column,
                reason: format!("unknown symbol {n:?}"),
            })
    };
    let blank = sy(bl, bc, &blank)?;
    let start = st(sl, sc, &start)?;
    let mut halt_set = BTreeSet::new();
    for (l, c, h) in &halts {
        halt_set.insert(st(*l, *c, h)?);
    }
    let mut delta = BTreeMap::new();
    for (line, toks) in &rules {
        let q = st(*line, toks[0].0, &toks[0].1)?;
        let s = sy(*line, toks[1].0, &toks[1].1)?;
        let q2 = st(*line, toks[3].0, &toks[3].1)?;
        let s2 = sy(*line, toks[4].0, &toks[4].1)?;
        let m = Move::parse(&toks[5].1).ok_or_else(|| ParseError {
            line: *line,
            column: toks[5].0,
            reason: format!("bad move {:?}, expected L, R or S", toks[5].1),
        })?;
        if halt_set.contains(&q) {
            return Err(ParseError {
                line: *line,
                column: toks[0].0,
                reason: format!("rule defined on halting state {:?}", toks[0].1),
            });
        }
        let t = Transition {
            state: q2,
            write: s2,
            movement: m,
        };
        if delta.insert((q, s), t).is_some() {
            return Err(ParseError {
                line: *line,
                column: toks[0].0,
                reason: format!("duplicate rule for ({}, {})", toks[0].1, toks[1].1),
            });
        }
    }
    for (q, q_name) in states.iter().enumerate() {
        if halt_set.contains(&StateId(q)) {
            continue;
        }
        for (s, s_name) in alphabet.iter().enumerate() {
            if !delta.contains_key(&(StateId(q), Symbol(s))) {
                return Err(ParseError {
                    line: end,
                    column: 1,
                    reason: format!("non-total transition table: no rule for ({}, {})", q_name, s_name),
                });
            }
        }
    }
    Ok(TuringMachine {
        states,
        alphabet,
        blank,
        start,
        halts: halt_set,
        delta,
    })
}

/// Machine configuration at one time step, before that step's transition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub state: StateId,
    pub head: usize,
    /// Cells `0..tape.len()`; every later cell is blank.
    pub tape: Vec<Symbol>,
}

impl Snapshot {
    pub fn symbol_at(&self, cell: usize, blank: Symbol) -> Symbol {
        self.tape.get(cell).copied().unwrap_or(blank)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    /// `snapshots[n]` is the configuration at time `n`.
    pub snapshots: Vec<Snapshot>,
    /// Time of the step whose transition enters a halting state; `None` if
    /// the budget ran out first.
    pub halt_time: Option<usize>,
    /// Tape after the last executed transition.
    pub final_tape: Vec<Symbol>,
    pub blank: Symbol,
    /// Transition executed at each time, aligned with `snapshots`.
    pub executed: Vec<Option<Transition>>,
}

impl Trace {
    pub fn halted(&self) -> bool {
        self.halt_time.is_some()
    }

    pub fn state(&self, n: usize) -> StateId {
        self.snapshots[n].state
    }

    pub fn head(&self, n: usize) -> usize {
        self.snapshots[n].head
    }

    pub fn symbol(&self, n: usize, cell: usize) -> Symbol {
        self.snapshots[n].symbol_at(cell, self.blank)
    }

    /// Rightmost cell ever under the head.
    pub fn max_excursion(&self) -> usize {
        self.snapshots.iter().map(|s| s.head).max().unwrap_or(0)
    }
}

/// Runs the machine from an empty tape for at most `max_steps + 1`
/// transitions (times `0..=max_steps`).
pub fn run(tm: &TuringMachine, max_steps: usize) -> Result<Trace, MachineError> {
    let mut snap = Snapshot {
        state: tm.start,
        head: 0,
        tape: Vec::new(),
    };
    let mut trace = Trace {
        snapshots: Vec::new(),
        halt_time: None,
        final_tape: Vec::new(),
        blank: tm.blank,
        executed: Vec::new(),
    };
    if tm.is_halt(tm.start) {
        trace.snapshots.push(snap.clone());
        trace.executed.push(None);
        trace.halt_time = Some(0);
        return Ok(trace);
    }
    for n in 0..=max_steps {
        trace.snapshots.push(snap.clone());
        let read = snap.symbol_at(snap.head, tm.blank);
        let t = tm
            .transition(snap.state, read)
            .expect("transition table is total on non-halting states");
        trace.executed.push(Some(t));
        if snap.tape.len() <= snap.head {
            snap.tape.resize(snap.head + 1, tm.blank);
        }
        snap.tape[snap.head] = t.write;
        snap.state = t.state;
        if tm.is_halt(t.state) {
            trace.halt_time = Some(n);
            break;
        }
        snap.head = match t.movement {
            Move::L => snap
                .head
                .checked_sub(1)
                .ok_or(MachineError::LeftEdgeViolation { step: n })?,
            Move::R => snap.head + 1,
            Move::S => snap.head,
        };
    }
    trace.final_tape = snap.tape;
    Ok(trace)
}

/// Symbol of cell `k` at every recorded time.
pub fn cell_history(trace: &Trace, k: usize) -> Vec<(usize, Symbol)> {
    (0..trace.snapshots.len()).map(|n| (n, trace.symbol(n, k))).collect()
}
