use std::collections::HashSet;

use harp_core::machine::TuringMachine;
use harp_core::reduction::{
    compile, prototile_census, validate_tileset, EdgeColor, Role, TileSet, TilesetError, TilesetViolation,
};

const FIXTURES: [&str; 11] = [
    "halt_now",
    "stay_halt",
    "bounce",
    "incrementer",
    "shuffle",
    "loop_stay",
    "loop_right",
    "loop_zigzag",
    "left_edge",
    "count_slow",
    "count_fast",
];

fn fixture(name: &str) -> TuringMachine {
    let path = format!("{}/../../fixtures/{name}.tm", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    TuringMachine::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn compiled_sets_are_valid() {
    for name in FIXTURES {
        let ts = compile(&fixture(name));
        let v = validate_tileset(&ts);
        assert!(
            v.is_empty(),
            "{name}: {}",
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
        );
    }
}

#[test]
fn census_matches_compilation() {
    for name in FIXTURES {
        let tm = fixture(name);
        let census = prototile_census(&tm);
        let ts = compile(&tm);
        assert_eq!(census, ts.role_counts(), "{name}");
        assert_eq!(census.values().sum::<usize>(), ts.len(), "{name}");
    }
}

#[test]
fn census_depends_on_the_table_not_the_running_time() {
    let slow = fixture("count_slow");
    let fast = fixture("count_fast");
    assert_eq!(prototile_census(&slow), prototile_census(&fast));
}

#[test]
fn text_round_trip_is_byte_identical() {
    for name in FIXTURES {
        let ts = compile(&fixture(name));
        let text = ts.to_text();
        let back = TileSet::parse(&text).unwrap();
        assert_eq!(back, ts, "{name}");
        assert_eq!(back.to_text(), text, "{name}");
    }
}

#[test]
fn inner_roles_have_no_blank_edges() {
    let ts = compile(&fixture("shuffle"));
    for p in &ts.prototypes {
        if !p.role.is_border() {
            assert!(p.edges.iter().all(|c| !c.is_blank()), "{}", p.id);
        }
    }
}

#[test]
fn every_role_appears_for_a_rich_machine() {
    let mut roles: HashSet<Role> = HashSet::new();
    for name in ["shuffle", "incrementer", "bounce"] {
        roles.extend(compile(&fixture(name)).role_counts().into_keys());
    }
    roles.extend(compile(&fixture("halt_now")).role_counts().into_keys());
    for r in Role::ALL {
        if r != Role::Blank {
            assert!(roles.contains(&r), "{r} never compiled");
        }
    }
}

#[test]
fn halting_start_gives_the_blank_root() {
    let ts = compile(&fixture("halt_now"));
    let root = ts.prototypes.iter().find(|p| p.role == Role::RootHalt).unwrap();
    assert!(root.is_all_blank());
    assert!(ts.prototypes.iter().all(|p| p.role != Role::Root));
}

#[test]
fn empty_table_leaves_skeleton_and_silver() {
    let tm = TuringMachine::parse("states: h\nalphabet: _ 1\nblank: _\nstart: h\nhalts: h\n").unwrap();
    assert_eq!(tm.rule_count(), 0);
    let census = prototile_census(&tm);
    let skeleton_and_silver = [
        Role::RootHalt,
        Role::BorderL,
        Role::BorderR,
        Role::CornerLeft,
        Role::CornerRight,
        Role::Inside,
        Role::ChordPass,
        Role::SilverChordCross,
        Role::SilverTransit,
    ];
    assert!(census.keys().all(|r| skeleton_and_silver.contains(r)), "{census:?}");
    assert_eq!(census, compile(&tm).role_counts());
    assert!(validate_tileset(&compile(&tm)).is_empty());
}

#[test]
fn validator_flags_defects() {
    let mut ts = compile(&fixture("bounce"));
    let inside = ts.prototypes.iter().position(|p| p.role == Role::Inside).unwrap();
    let mut twin = ts.prototypes[inside].clone();
    twin.edges.rotate_left(3);
    twin.id = "twin".into();
    ts.prototypes.push(twin);
    let mut dup = ts.prototypes[0].clone();
    dup.edges[0] = "v2".parse().unwrap();
    ts.prototypes.push(dup);
    let chord = ts.prototypes.iter().position(|p| p.role == Role::ChordPass).unwrap();
    ts.prototypes[chord].edges[1] = EdgeColor::blank();
    let v = validate_tileset(&ts);
    assert!(v
        .iter()
        .any(|x| matches!(x, TilesetViolation::RotationDuplicate { second, .. } if second == "twin")));
    assert!(v.iter().any(|x| matches!(x, TilesetViolation::DuplicateId(_))));
    assert!(v
        .iter()
        .any(|x| matches!(x, TilesetViolation::BlankEdgeOnInnerRole { edge: 1, .. })));
}

#[test]
fn lonely_colours_are_reported() {
    let mut ts = compile(&fixture("bounce"));
    let p = ts.prototypes.iter_mut().find(|p| p.role == Role::ChordPass).unwrap();
    p.edges[1] = "h:q=nowhere,d=R".parse().unwrap();
    let v = validate_tileset(&ts);
    assert!(v
        .iter()
        .any(|x| matches!(x, TilesetViolation::Unmatched { edge: 1, .. })));
}

#[test]
fn malformed_files_are_rejected() {
    assert_eq!(TileSet::parse("tile x role=inside edges=h"), Err(TilesetError::Header));
    assert_eq!(TileSet::parse("tileset v1\n"), Err(TilesetError::NoBlank));
    let bad = [
        "tileset v1\nblank b\ntile x role=inside edges=h,h,h\n",
        "tileset v1\nblank b\ntile x role=nobody edges=h,h,h,h,h,h,h\n",
        "tileset v1\nblank b\ntile x role=inside edges=h,h,h,h,h,h,zz\n",
        "tileset v1\nblank b\nblank c\n",
        "tileset v1\nblank b\nwhat\n",
    ];
    for text in bad {
        assert!(
            matches!(TileSet::parse(text), Err(TilesetError::Syntax { .. })),
            "{text}"
        );
    }
}
