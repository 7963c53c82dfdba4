use proptest::prelude::*;

use harp_core::checker::{check, levels_needed};
use harp_core::harp::{build_harp, Configuration, HarpError};
use harp_core::heptagrid::{build_patch, level_size, TileAddress};
use harp_core::machine::{run, MachineError, Move, TuringMachine};
use harp_core::reduction::{compile, prototile_census, validate_tileset, EdgeColor, Flow, TileSet};

const ALPHABET: [&str; 3] = ["_", "1", "2"];
const MOVES: [&str; 3] = ["L", "R", "S"];

/// A machine with `n` working states plus `halt`, a total transition table
/// and rule choices drawn from `picks`.
fn machine_text(n: usize, symbols: usize, picks: &[(usize, usize, usize)]) -> String {
    let states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let mut text = format!(
        "states: {} halt\nalphabet: {}\nblank: _\nstart: q0\nhalts: halt\n",
        states.join(" "),
        ALPHABET[..symbols].join(" ")
    );
    let mut pick = picks.iter().cycle();
    for q in &states {
        for s in &ALPHABET[..symbols] {
            let &(next, write, mv) = pick.next().unwrap();
            let next = if next % (n + 1) == n {
                "halt".to_string()
            } else {
                states[next % (n + 1)].clone()
            };
            text += &format!(
                "rule: {q} {s} -> {next} {} {}\n",
                ALPHABET[write % symbols],
                MOVES[mv % 3]
            );
        }
    }
    text
}

fn machines() -> impl Strategy<Value = TuringMachine> {
    (
        1usize..=3,
        1usize..=3,
        prop::collection::vec((0usize..8, 0usize..3, 0usize..3), 1..12),
    )
        .prop_map(|(n, k, picks)| TuringMachine::parse(&machine_text(n, k, &picks)).unwrap())
}

fn addresses() -> impl Strategy<Value = TileAddress> {
    (0u8..7, 0u32..9, any::<u64>()).prop_map(|(s, n, r)| {
        let r = r % level_size(n).unwrap();
        TileAddress::from_rank(s, n, r).unwrap()
    })
}

fn colors() -> impl Strategy<Value = EdgeColor> {
    let head = prop::option::of((prop::sample::select(vec!["q0", "a_1", "halt"]), 0usize..2));
    let sym = prop::sample::select(vec!["_", "1", "x2"]);
    prop_oneof![
        Just(EdgeColor::blank()),
        (0u8..3).prop_map(EdgeColor::tree),
        (sym.clone(), head.clone())
            .prop_map(|(s, h)| { EdgeColor::chord(s, h.map(|(q, m)| (q, [Move::L, Move::R, Move::S][m]))) }),
        head.clone()
            .prop_map(|h| EdgeColor::level(h.map(|(q, m)| (q, [Move::L, Move::R][m])))),
        (any::<bool>(), head).prop_map(|(l, h)| {
            EdgeColor::silver(
                if l { Flow::L } else { Flow::R },
                h.map(|(q, m)| (q, [Move::L, Move::R][m])),
            )
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rank_round_trips(a in addresses()) {
        let back = TileAddress::from_rank(a.sector().unwrap(), a.level(), a.rank()).unwrap();
        prop_assert_eq!(&back, &a);
        let parsed: TileAddress = a.to_string().parse().unwrap();
        prop_assert_eq!(parsed, a);
    }

    #[test]
    fn sons_know_their_father(a in addresses()) {
        for son in a.sons().unwrap() {
            prop_assert_eq!(son.father(), Some(a.clone()));
            prop_assert_eq!(son.level(), a.level() + 1);
        }
        let width = a.sons().unwrap().len();
        prop_assert_eq!(width, a.kind().unwrap().son_count());
    }

    #[test]
    fn colour_tokens_round_trip(c in colors()) {
        let back: EdgeColor = c.to_string().parse().unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert!(c.well_formed().is_ok());
    }

    #[test]
    fn configurations_round_trip(cells in prop::collection::vec((addresses(), 0usize..3, 0u8..7), 0..20)) {
        let mut cfg = Configuration::new();
        for (a, t, rot) in cells {
            cfg.place(a, ["x", "chord._", "exec.q0._.above"][t], rot);
        }
        let text = cfg.to_text();
        let back = Configuration::parse(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(back, cfg);
    }

    #[test]
    fn runs_are_deterministic_and_monotone(tm in machines(), a in 0usize..30, b in 0usize..30) {
        let (short, long) = (a.min(b), a.max(b));
        let (Ok(x), Ok(y)) = (run(&tm, short), run(&tm, short)) else { return Ok(()) };
        prop_assert_eq!(&x, &y);
        match run(&tm, long) {
            Ok(z) => {
                if let Some(t) = x.halt_time {
                    prop_assert_eq!(z.halt_time, Some(t));
                    prop_assert_eq!(&z.snapshots, &x.snapshots);
                } else {
                    prop_assert_eq!(&z.snapshots[..x.snapshots.len()], &x.snapshots[..]);
                }
            }
            Err(MachineError::LeftEdgeViolation { step }) => prop_assert!(step >= x.snapshots.len() - 1),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn machine_text_round_trips(tm in machines()) {
        prop_assert_eq!(TuringMachine::parse(&tm.to_text()).unwrap(), tm);
    }

    #[test]
    fn compiled_tilesets_are_valid(tm in machines()) {
        let ts = compile(&tm);
        let v = validate_tileset(&ts);
        prop_assert!(v.is_empty(), "{:?}", v);
        prop_assert_eq!(prototile_census(&tm), ts.role_counts());
        let text = ts.to_text();
        prop_assert_eq!(TileSet::parse(&text).unwrap().to_text(), text);
    }

    /// One extra working state over a one-letter alphabet adds exactly one rule.
    #[test]
    fn adding_a_rule_never_shrinks_the_census(
        n in 1usize..=3,
        picks in prop::collection::vec((0usize..8, 0usize..3, 0usize..3), 1..6),
        extra in (0usize..5, 0usize..3),
    ) {
        let base = machine_text(n, 1, &picks);
        let before = prototile_census(&TuringMachine::parse(&base).unwrap());
        let target = match extra.0 % (n + 2) {
            k if k < n => format!("q{k}"),
            k if k == n => "p".to_string(),
            _ => "halt".to_string(),
        };
        let grown = base
            .replace("states: ", "states: p ")
            + &format!("rule: p _ -> {target} _ {}\n", MOVES[extra.1]);
        let tm = TuringMachine::parse(&grown).unwrap();
        prop_assert_eq!(tm.rule_count(), n + 1);
        let after = prototile_census(&tm);
        for (role, count) in &before {
            prop_assert!(after.get(role).copied().unwrap_or(0) >= *count, "{role}: {:?} -> {:?}", before, after);
        }
    }

    #[test]
    fn halting_runs_give_valid_harps(tm in machines()) {
        match build_harp(&tm, 5) {
            Ok(h) => {
                let expected: u64 = (0..=h.halt_time as u32).map(|n| level_size(n).unwrap()).sum();
                prop_assert_eq!(h.config.len() as u64, expected);
                let patch = build_patch(levels_needed(&h.config)).unwrap();
                let v = check(&h.config, &h.tileset, &patch).unwrap();
                prop_assert!(v.is_empty(), "{}", v[0]);
            }
            Err(HarpError::NotHaltedWithinBudget { .. } | HarpError::Machine(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
