use harp_core::checker::{check, is_finite_solution, levels_needed};
use harp_core::harp::build_harp;
use harp_core::heptagrid::build_patch;
use harp_core::machine::TuringMachine;
use harp_core::reduction::{compile, EdgeColor, Role, TilePrototype, TileSet};
use harp_core::search::{count_solutions, find_finite_tiling, SearchBudget, SolutionCount, Verdict};

fn fixture(name: &str) -> TuringMachine {
    let path = format!("{}/../../fixtures/{name}.tm", env!("CARGO_MANIFEST_DIR"));
    TuringMachine::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn budget(radius: u32) -> SearchBudget {
    SearchBudget {
        radius,
        max_cells: 400,
        max_nodes: 50_000,
        ..SearchBudget::default()
    }
}

#[test]
fn finds_tilings_for_halting_machines() {
    for (name, t) in [
        ("halt_now", 0u32),
        ("stay_halt", 1),
        ("bounce", 2),
        ("incrementer", 3),
        ("shuffle", 3),
    ] {
        let ts = compile(&fixture(name));
        let out = find_finite_tiling(&ts, &budget(t + 1)).unwrap();
        let Verdict::Found(cfg) = &out.verdict else {
            panic!("{name}: {:?} after {} nodes", out.verdict, out.nodes);
        };
        let patch = build_patch(levels_needed(cfg).max(t + 1)).unwrap();
        assert!(check(cfg, &ts, &patch).unwrap().is_empty(), "{name}");
        let harp = build_harp(&fixture(name), 10).unwrap();
        assert_eq!(cfg.len(), harp.config.len(), "{name}");
    }
}

#[test]
fn loopers_have_no_small_tiling() {
    for name in ["loop_stay", "loop_right", "loop_zigzag"] {
        let ts = compile(&fixture(name));
        let out = find_finite_tiling(
            &ts,
            &SearchBudget {
                max_cells: 20,
                ..budget(3)
            },
        )
        .unwrap();
        assert_eq!(out.verdict, Verdict::NoneInSpace, "{name}");
    }
}

#[test]
fn thread_count_does_not_change_the_answer() {
    let ts = compile(&fixture("bounce"));
    let one = find_finite_tiling(&ts, &budget(3)).unwrap();
    let four = find_finite_tiling(
        &ts,
        &SearchBudget {
            threads: 4,
            ..budget(3)
        },
    )
    .unwrap();
    assert_eq!(one.verdict, four.verdict);
    let ts = compile(&fixture("loop_right"));
    let one = find_finite_tiling(&ts, &budget(3)).unwrap();
    let four = find_finite_tiling(
        &ts,
        &SearchBudget {
            threads: 4,
            ..budget(3)
        },
    )
    .unwrap();
    assert_eq!(one.verdict, four.verdict);
}

fn kind(v: &Verdict) -> &'static str {
    match v {
        Verdict::Found(_) => "found",
        Verdict::NoneInSpace => "none",
        Verdict::BudgetExhausted { .. } => "exhausted",
    }
}

#[test]
fn verdict_ignores_prototype_order() {
    for (name, radius) in [("bounce", 3), ("incrementer", 4), ("loop_zigzag", 3)] {
        let ts = compile(&fixture(name));
        let mut reversed = ts.clone();
        reversed.prototypes.reverse();
        let b = budget(radius);
        let a = find_finite_tiling(&ts, &b).unwrap();
        let r = find_finite_tiling(&reversed, &b).unwrap();
        assert_eq!(kind(&a.verdict), kind(&r.verdict), "{name}");
        if let Verdict::Found(cfg) = &r.verdict {
            let patch = build_patch(levels_needed(cfg)).unwrap();
            assert!(is_finite_solution(cfg, &reversed, &patch).unwrap(), "{name}");
        }
    }
}

fn blank() -> TilePrototype {
    TilePrototype {
        id: "blank".into(),
        role: Role::Blank,
        edges: std::array::from_fn(|_| EdgeColor::blank()),
    }
}

#[test]
fn trivial_tilesets() {
    let empty = TileSet {
        prototypes: vec![],
        blank: blank(),
    };
    assert_eq!(
        find_finite_tiling(&empty, &budget(2)).unwrap().verdict,
        Verdict::NoneInSpace
    );
    assert_eq!(count_solutions(&empty, &budget(2)).unwrap(), SolutionCount::Exact(0));

    let lone = TileSet {
        prototypes: vec![TilePrototype {
            id: "lone".into(),
            ..blank()
        }],
        blank: blank(),
    };
    let Verdict::Found(cfg) = find_finite_tiling(&lone, &budget(2)).unwrap().verdict else {
        panic!("a tile with blank edges stands alone");
    };
    assert_eq!(cfg.len(), 1);

    // colours on every edge: no finite cluster can ever close
    let stuck = TileSet {
        prototypes: vec![TilePrototype {
            id: "stuck".into(),
            role: Role::Inside,
            edges: std::array::from_fn(|_| EdgeColor::level(None)),
        }],
        blank: blank(),
    };
    for radius in 1..=4 {
        assert_eq!(
            find_finite_tiling(&stuck, &budget(radius)).unwrap().verdict,
            Verdict::NoneInSpace
        );
    }
}

#[test]
fn solution_counts() {
    let ts = compile(&fixture("halt_now"));
    assert_eq!(count_solutions(&ts, &budget(2)).unwrap(), SolutionCount::Exact(1));
    let ts = compile(&fixture("incrementer"));
    let small = SearchBudget {
        max_cells: 32,
        max_nodes: 10_000_000,
        threads: 4,
        ..budget(4)
    };
    assert_eq!(count_solutions(&ts, &small).unwrap(), SolutionCount::Exact(0));
}

#[test]
fn tight_budget_is_reported() {
    let ts = compile(&fixture("incrementer"));
    let out = find_finite_tiling(
        &ts,
        &SearchBudget {
            max_nodes: 5,
            ..budget(4)
        },
    )
    .unwrap();
    let Verdict::BudgetExhausted { nodes, depth } = out.verdict else {
        panic!("{:?}", out.verdict);
    };
    assert!(nodes > 0 && depth > 0);
}
