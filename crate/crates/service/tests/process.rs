//! Runs the built binary: environment overrides and a live server.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpStream;
use std::process::{Command, Stdio};

const BIN: &str = env!("CARGO_BIN_EXE_snacs-hi");

#[test]
fn env_overrides_flags() {
    let out = Command::new(BIN)
        .args(["lookup", "ko"])
        .env("SNACS_HI_LEXICON", "/nonexistent.tsv")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nonexistent"));
}

fn get(addr: &str, path: &str) -> String {
    let mut s = TcpStream::connect(addr).unwrap();
    write!(s, "GET {path} HTTP/1.1\r\nHost: x\r\nConnection: close\r\n\r\n").unwrap();
    let mut buf = String::new();
    s.read_to_string(&mut buf).unwrap();
    buf
}

#[test]
fn serve_answers_over_tcp() {
    let dir = tempfile::tempdir().unwrap();
    let mut child = Command::new(BIN)
        .args(["serve", "--port", "0", "--seed-gold"])
        .env("SNACS_HI_CORPUS", dir.path())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(child.stdout.take().unwrap()).read_line(&mut line).unwrap();
    let addr = line.trim().strip_prefix("listening on http://").expect(&line).to_string();

    let docs = get(&addr, "/documents");
    let lexicon = get(&addr, "/lexicon/zzz");
    child.kill().unwrap();
    child.wait().unwrap();

    assert!(docs.starts_with("HTTP/1.1 200"), "{docs}");
    assert!(docs.contains(r#""id":"gold","version":1"#), "{docs}");
    assert!(lexicon.starts_with("HTTP/1.1 404"), "{lexicon}");
    assert!(dir.path().join("gold.tsv").exists());
}
