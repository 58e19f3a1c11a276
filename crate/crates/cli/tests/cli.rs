use std::fs;
use std::process::{Command, Output};

fn qatl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qatl")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn scratch(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("qatl-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

const VENDING: &str = include_str!("../../core/models/vending.ocg");
const ENERGY: &str = include_str!("../../core/models/energy.ocg");

#[test]
fn verdicts_map_to_exit_codes() {
    let m = scratch("vending.ocg", VENDING);
    let ok = qatl(&["check", "--model", &m, "--formula", "<<ctrl>> G ((Request & r >= 3) -> F Dispense)", "--state", "start"]);
    assert_eq!(code(&ok), 0);
    let first = String::from_utf8(ok.stdout).unwrap();
    let json: serde_json::Value = serde_json::from_str(first.lines().next().unwrap()).unwrap();
    assert_eq!(json["verdict"], "VERIFIED");

    let e = scratch("energy.ocg", ENERGY);
    let low = qatl(&["check", "--model", &e, "--formula", "<<Sys>> G r > 0", "--state", "s0", "--counter", "2"]);
    assert_eq!(code(&low), 1);
    let high = qatl(&[
        "check", "--model", &e, "--formula", "<<Sys>> G r > 0", "--state", "s0", "--counter", "3", "--engine", "refeval",
    ]);
    assert_eq!(code(&high), 0);
}

#[test]
fn failures_have_their_own_codes() {
    assert_eq!(code(&qatl(&["check", "--bogus"])), 10);
    assert_eq!(code(&qatl(&["check", "--model", "/nonexistent/m.ocg", "--formula", "p", "--state", "s"])), 11);
    let m = scratch("vending2.ocg", VENDING);
    assert_eq!(code(&qatl(&["check", "--model", &m, "--formula", "<<ctrl>> (", "--state", "start"])), 12);
    assert_eq!(code(&qatl(&["check", "--model", &m, "--formula", "Release", "--state", "nowhere"])), 12);
    let bad = scratch("bad.ocg", "players: A\nstate s owner=Z\n");
    assert_eq!(code(&qatl(&["check", "--model", &bad, "--formula", "p", "--state", "s"])), 12);
}

#[test]
fn examples_print_a_loadable_model() {
    let o = qatl(&["examples"]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("players: ctrl, env"));
    assert!(out.contains("<<ctrl>> G"));
}

#[test]
fn gen_hardness_output_checks() {
    let tm = scratch(
        "marker.tm",
        "states: q0, q1, qf\ninitial: q0\naccept: qf\nq0,1 -> q1,a,R\nq1,# -> qf,#,L\n",
    );
    let o = qatl(&["gen-hardness", "--tm", &tm, "--word", "1", "--tape", "3"]);
    assert_eq!(code(&o), 0);
    let model = scratch("marker.ocg", &String::from_utf8(o.stdout).unwrap());
    let v = qatl(&["check", "--model", &model, "--formula", "<<Verifier>> F accept", "--state", "s0", "--cap", "16"]);
    assert_eq!(code(&v), 0);
    assert_eq!(code(&qatl(&["gen-hardness", "--tm", &tm, "--word", "2", "--tape", "3"])), 12);
}

#[test]
fn dumped_games_solve_standalone() {
    let m = scratch("vending3.ocg", VENDING);
    let o = qatl(&[
        "check", "--model", &m, "--formula", "<<ctrl>> G ((Request & r >= 3) -> F Dispense)", "--state", "start", "--dump-game",
    ]);
    let text = String::from_utf8(o.stdout).unwrap();
    let dump: String = text.lines().take_while(|l| !l.starts_with('{')).map(|l| format!("{l}\n")).collect();
    let arena = scratch("vending.game", &dump);
    let s = qatl(&["solve-arena", &arena]);
    assert_eq!(code(&s), 0, "{}", String::from_utf8_lossy(&s.stderr));
    assert_eq!(code(&qatl(&["solve-arena", &scratch("junk.game", "nonsense\n")])), 12);
}
