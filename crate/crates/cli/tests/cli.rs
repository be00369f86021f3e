use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn qpkc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpkc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

struct Keys {
    _dir: TempDir,
    public: PathBuf,
    private: PathBuf,
    out: Output,
}

fn keygen(seed: &str) -> Keys {
    let dir = TempDir::new().unwrap();
    let public = dir.path().join("key.pub");
    let private = dir.path().join("key.priv");
    let out = qpkc(&[
        "keygen",
        "--m",
        "4",
        "--n",
        "16",
        "--t",
        "2",
        "--seed",
        seed,
        "--pub",
        public.to_str().unwrap(),
        "--priv",
        private.to_str().unwrap(),
    ]);
    Keys {
        _dir: dir,
        public,
        private,
        out,
    }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn keygen_reports_parameters_and_is_deterministic() {
    let a = keygen("1");
    assert_eq!(code(&a.out), 0, "{}", stderr(&a.out));
    let text = stdout(&a.out);
    assert!(
        text.starts_with("n=16 k=8 t=2\nfingerprint sha256:"),
        "{text}"
    );
    assert!(std::fs::read_to_string(&a.public)
        .unwrap()
        .starts_with("QPKC-PUB v1\n"));
    assert!(std::fs::read_to_string(&a.private)
        .unwrap()
        .starts_with("QPKC-PRIV v1\n"));

    let b = keygen("1");
    assert_eq!(stdout(&b.out), text);
    assert_eq!(
        std::fs::read(&a.private).unwrap(),
        std::fs::read(&b.private).unwrap()
    );
    assert_ne!(stdout(&keygen("2").out), text);
}

#[test]
fn keygen_rejects_bad_input() {
    let missing_seed = qpkc(&[
        "keygen", "--m", "4", "--n", "16", "--t", "2", "--pub", "x", "--priv", "y",
    ]);
    assert_eq!(code(&missing_seed), 1);
    assert!(stderr(&missing_seed).contains("--seed"));
    let dir = TempDir::new().unwrap();
    let (pubp, privp) = (dir.path().join("a"), dir.path().join("b"));
    for (m, n, t) in [
        ("4", "17", "2"),
        ("4", "16", "4"),
        ("1", "2", "1"),
        ("4", "16", "0"),
    ] {
        let o = qpkc(&[
            "keygen",
            "--m",
            m,
            "--n",
            n,
            "--t",
            t,
            "--seed",
            "1",
            "--pub",
            p(&pubp),
            "--priv",
            p(&privp),
        ]);
        assert_eq!(code(&o), 1, "m={m} n={n} t={t}");
        assert!(stdout(&o).is_empty());
    }
}

#[test]
fn encrypt_then_decrypt() {
    let k = keygen("3");
    let zero = qpkc(&[
        "encrypt",
        "--pub",
        p(&k.public),
        "--msg",
        "00000000",
        "--seed",
        "4",
    ]);
    assert_eq!(code(&zero), 0);
    let ct = stdout(&zero);
    assert_eq!(ct.trim().len(), 16);
    assert_eq!(ct.trim().chars().filter(|&c| c == '1').count(), 2);

    for msg in ["10110001", "11111111", "00000001"] {
        let enc = qpkc(&[
            "encrypt",
            "--pub",
            p(&k.public),
            "--msg",
            msg,
            "--seed",
            "9",
        ]);
        let ct = stdout(&enc);
        let dec = qpkc(&["decrypt", "--priv", p(&k.private), "--ct", ct.trim()]);
        assert_eq!(code(&dec), 0, "{}", stderr(&dec));
        assert_eq!(stdout(&dec).trim(), msg);
    }
}

#[test]
fn encrypt_decrypt_errors_have_distinct_codes() {
    let k = keygen("5");
    let malformed = qpkc(&[
        "encrypt",
        "--pub",
        p(&k.public),
        "--msg",
        "0101010x",
        "--seed",
        "1",
    ]);
    assert_eq!(code(&malformed), 1);
    let short = qpkc(&[
        "encrypt",
        "--pub",
        p(&k.public),
        "--msg",
        "0101",
        "--seed",
        "1",
    ]);
    assert_eq!(code(&short), 2);
    assert!(stderr(&short).contains("the key needs 8"));
    let no_seed = qpkc(&["encrypt", "--pub", p(&k.public), "--msg", "01010101"]);
    assert_eq!(code(&no_seed), 1);

    // heavy words are mostly outside the decoding radius
    let mut saw_failure = false;
    for word in [
        "1111100000000000",
        "1010101010101010",
        "1111111100000000",
        "0000000011111111",
    ] {
        let o = qpkc(&["decrypt", "--priv", p(&k.private), "--ct", word]);
        match code(&o) {
            0 => assert_eq!(stdout(&o).trim().len(), 8),
            3 => {
                assert!(stderr(&o).contains("decryption failed"));
                saw_failure = true;
            }
            other => panic!("exit {other}: {}", stderr(&o)),
        }
    }
    assert!(saw_failure);
}

#[test]
fn corrupted_key_files_are_rejected() {
    let k = keygen("6");
    let text = std::fs::read_to_string(&k.private).unwrap();
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.priv");
    // flip one bit of the first scrambler row
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let s_row = lines.iter().position(|l| l == "S:").unwrap() + 1;
    let first = if lines[s_row].starts_with('0') {
        "1"
    } else {
        "0"
    };
    lines[s_row].replace_range(0..1, first);
    std::fs::write(&bad, lines.join("\n") + "\n").unwrap();
    let o = qpkc(&["decrypt", "--priv", p(&bad), "--ct", "0000000000000000"]);
    // a different S may still be invertible; a permutation entry cannot be duplicated
    if code(&o) == 0 {
        let p_line = lines.iter().position(|l| l.starts_with("P:")).unwrap();
        lines[p_line] = "P: 0 0 1 2 3 4 5 6 7 8 9 10 11 12 13 14".into();
        std::fs::write(&bad, lines.join("\n") + "\n").unwrap();
    }
    let o = qpkc(&["decrypt", "--priv", p(&bad), "--ct", "0000000000000000"]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));

    std::fs::write(&bad, "QPKC-PUB v1\nn=16 k=8 t=2\n").unwrap();
    let o = qpkc(&[
        "encrypt",
        "--pub",
        p(&bad),
        "--msg",
        "00000000",
        "--seed",
        "1",
    ]);
    assert_eq!(code(&o), 2);
    let o = qpkc(&[
        "encrypt",
        "--pub",
        "/nonexistent/key",
        "--msg",
        "00000000",
        "--seed",
        "1",
    ]);
    assert_eq!(code(&o), 2);
}

const TERMS: &str = "0.7071067811865476:00000001,0.7071067811865476:00000010";

fn qdemo(extra: &[&str]) -> Output {
    let mut args = vec!["qdemo", "--m", "4", "--n", "16", "--t", "2", "--seed", "1"];
    args.extend_from_slice(extra);
    qpkc(&args)
}

#[test]
fn qdemo_recovers_the_state() {
    let o = qdemo(&["--terms", TERMS]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.ends_with("fidelity 1.000000000000000\n"), "{text}");
    assert!(text.contains("measured syn = "));
    assert!(text.contains("p=1.000000000000000"));
    assert!(text.contains("recovered e' = "));
    assert!(text.contains("layout=[msg:8 code:16]"));
    assert_eq!(stdout(&qdemo(&["--terms", TERMS])), text);

    let timed = stdout(&qdemo(&["--terms", TERMS, "--timings"]));
    let untimed: String = timed
        .lines()
        .filter(|l| !l.starts_with("time "))
        .map(|l| format!("{l}\n"))
        .collect();
    assert_eq!(untimed, text);
}

#[test]
fn qdemo_basis_term_matches_classical_encryption() {
    let k = keygen("1");
    let dir = TempDir::new().unwrap();
    let ct_path = dir.path().join("ct.qstate");
    let o = qdemo(&["--terms", "1:10110001", "--ct-out", p(&ct_path)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let classical = stdout(&qpkc(&[
        "encrypt",
        "--pub",
        p(&k.public),
        "--msg",
        "10110001",
        "--seed",
        "1",
    ]));
    let state = std::fs::read_to_string(&ct_path).unwrap();
    let lines: Vec<&str> = state.lines().collect();
    assert_eq!(lines[..2], ["QSTATE v1", "layout: code:16"]);
    assert_eq!(lines.len(), 3);
    assert!(
        lines[2].ends_with(&format!(" {}", classical.trim())),
        "{state}"
    );
}

#[test]
fn qdemo_state_files_round_trip() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("in.qstate");
    let output = dir.path().join("out.qstate");
    std::fs::write(
        &input,
        "QSTATE v1\nlayout: msg:8\n6.0000000000000000e-1 0 00000011\n0 -8.0000000000000000e-1 11000000\n",
    )
    .unwrap();
    let o = qdemo(&["--state-in", p(&input), "--state-out", p(&output)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let back = std::fs::read_to_string(&output).unwrap();
    assert_eq!(back.lines().count(), 4);
    assert!(back.contains(" 00000011\n") && back.contains(" 11000000\n"));
}

#[test]
fn qdemo_rejects_bad_terms_before_work() {
    for terms in [
        "1:00000001,1:00000010",
        "1:0000001",
        "0.6:00000001,0.8:00000001",
        "x:00000001",
    ] {
        let o = qdemo(&["--terms", terms]);
        assert_eq!(code(&o), 1, "{terms}: {}", stderr(&o));
        assert!(stdout(&o).is_empty());
    }
    assert_eq!(code(&qdemo(&[])), 1);
}

#[test]
fn selftest_quick_and_fault_injection() {
    let o = qpkc(&["selftest", "--level", "quick"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));

    let o = qpkc(&["selftest", "--level", "quick", "--inject-fault", "0,3"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("FAIL key identities m=4 n=16 t=2: G H^T != 0"));
    assert!(stderr(&o).contains("key identities m=4 n=16 t=2"));
}

#[test]
fn selftest_full_passes() {
    let o = qpkc(&["selftest", "--level", "full"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS quantum round trip m=10 n=1024 t=50, 8 terms"));
    assert!(stdout(&o).contains("time keygen m=10 n=1024 t=50"));
}

#[test]
fn help_exits_zero() {
    let o = qpkc(&["--help"]);
    assert_eq!(code(&o), 0);
    assert!(!stdout(&o).contains("inject-fault"));
}
