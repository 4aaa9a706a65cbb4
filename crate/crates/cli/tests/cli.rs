use std::path::PathBuf;
use std::process::{Command, Output};

fn freearr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freearr")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> String {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_string_lossy().into_owned()
}

fn golden(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../golden").join(name).to_string_lossy().into_owned()
}

const BOOLEAN: &str = "[1] [0] [0]\n[0] [1] [0]\n[0] [0] [1]\n";

#[test]
fn boolean_file() {
    let f = scratch("boolean.txt", BOOLEAN);
    let o = freearr(&["chi", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(x-1)^3\n");
    let o = freearr(&["free", &f]);
    assert!(stdout(&o).starts_with("Free(1, 1, 1)\n"));
    assert!(stdout(&freearr(&["indfree", &f])).starts_with("inductively free"));
}

#[test]
fn exit_code_matrix() {
    let dup = scratch("dup.txt", "# a repeated hyperplane\n[1] [0] [0]\n[0] [1] [0]\n[0] [0] [1]\n[2] [0] [0]\n");
    let garbage = scratch("garbage.txt", "[1] [0] [0]\n[0] [1 [0]\n");
    let pencil = scratch("pencil.txt", "[1] [0] [0]\n[0] [1] [0]\n[1] [1] [0]\n");
    let boolean = scratch("boolean2.txt", BOOLEAN);
    let cases: &[(&[&str], i32)] = &[
        (&["chi", "paper13"], 0),
        (&["free", "paper13"], 1),
        (&["free", "paper13", "--at", "3"], 0),
        (&["free", "paper13", "--at", "quad 2 3/2"], 1),
        (&["free", "paper13", "--at", "quad 4 1 1"], 1),
        (&["free", "paper13", "--at", "1/0"], 1),
        (&["free", "nonexistent-file"], 1),
        (&["chi", &dup], 1),
        (&["chi", &garbage], 1),
        (&["chi", &pencil], 1),
        (&["recfree", &boolean, "--max-states", "0"], 2),
        (&["recfree", &boolean, "--max-n", "2"], 1),
        (&["recfree", &boolean], 0),
        (&["abe", &boolean], 0),
        (&["iso", "paper13", "paper15"], 0),
    ];
    for (args, code) in cases {
        let o = freearr(args);
        assert_eq!(o.status.code(), Some(*code), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        if *code == 1 {
            assert!(o.stdout.is_empty());
            assert!(!o.stderr.is_empty());
        }
    }
}

#[test]
fn parse_errors_carry_positions() {
    let garbage = scratch("garbage2.txt", "[1] [0] [0]\n[0] [1 [0]\n");
    let err = String::from_utf8(freearr(&["chi", &garbage]).stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn listings_round_trip() {
    for (input, at) in [("paper13", Some("3")), ("paper13", Some("-1")), ("paper15", Some("3")), ("paper15", None)] {
        let mut args = vec!["lattice", input];
        if let Some(v) = at {
            args.extend(["--at", v]);
        }
        let listing = scratch(&format!("listing-{input}-{}.txt", at.unwrap_or("generic")), &stdout(&freearr(&args)));
        args[0] = "verify-lattice";
        args.push(&listing);
        assert_eq!(freearr(&args).status.code(), Some(0), "{args:?}");
    }
    // a lattice with a different incidence structure is rejected
    let other = scratch("listing-other.txt", &stdout(&freearr(&["lattice", "paper13", "--at", "2"])));
    assert_eq!(freearr(&["verify-lattice", "paper13", &other, "--at", "3"]).status.code(), Some(1));
}

#[test]
fn golden_listings_are_current() {
    for (input, file) in [("paper13", "family13_generic.txt"), ("paper15", "family15_generic.txt")] {
        let want = std::fs::read_to_string(golden(file)).unwrap();
        assert_eq!(stdout(&freearr(&["lattice", input])), want);
    }
}

#[test]
fn replayed_chains() {
    let boolean = scratch("boolean3.txt", BOOLEAN);
    let good = scratch("good-chain.txt", "# through a double point\nadd 1; 1; 0\n");
    let bad = scratch("bad-chain.txt", "add 1; 1; 1\n");
    let o = freearr(&["recfree", &boolean, "--replay", &good]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("chain of 1 moves is valid"));
    let o = freearr(&["recfree", &boolean, "--replay", &bad]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_mirrors_text() {
    let text = stdout(&freearr(&["report", "paper15", "--at", "3"]));
    let json: serde_json::Value = serde_json::from_str(&stdout(&freearr(&["report", "paper15", "--at", "3", "--format", "json"]))).unwrap();
    assert!(text.contains(&format!("chi: {}\n", json["chi"].as_str().unwrap())));
    assert!(text.contains(&format!("freeness: {}", json["freeness"].as_str().unwrap())));
    assert!(text.contains(&format!("automorphisms: {}\n", json["aut_order"])));
    assert_eq!(json["recursive"]["verdict"], "NotRF");
    assert_eq!(json["inductively_free"], false);
    assert_eq!(json["consistent"], true);
}

#[test]
fn moduli_lists_both_quadratic_factors() {
    let out = stdout(&freearr(&["moduli", "paper15"]));
    assert!(out.contains("t^2 + t - 1 = 0"));
    assert!(out.contains("t^2 - 3*t + 1 = 0"));
}
