//! Exit codes and output shape of the command-line front end.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brieskorn")).args(args).output().unwrap()
}

#[test]
fn analyze_prints_a_text_report() {
    let out = run(&["analyze", "y^2 + x^3 - 3*x"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!out.stdout.is_empty());
}

#[test]
fn json_to_stdout_is_parseable_and_stable() {
    let a = run(&["analyze", "x^2*y^2 + 2*x*y + x", "--json", "-"]);
    let b = run(&["analyze", "x^2*y^2 + 2*x*y + x", "--json", "-"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.trim_start().starts_with('{') && text.ends_with("}\n"));
    assert!(text.contains("\"tame\": false"));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(run(&["analyze", "x^2"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "7/3"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "x^^2"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "y^2 + x^3", "--probe", "zz"]).status.code(), Some(2));
}

#[test]
fn corpus_filter_passes() {
    let out = run(&["corpus", "two_morse"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS") && text.contains("1/1"), "{text}");
}
