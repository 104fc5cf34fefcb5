use std::fs;
use std::process::{Command, Output};

fn roadgist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_roadgist")).args(args).output().unwrap()
}

#[test]
fn help_exits_zero_and_lists_defaults() {
    let out = roadgist(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for sub in ["extract", "pca", "cluster", "train", "predict", "crossval", "encode", "synth"] {
        assert!(text.contains(sub), "{sub} missing from help");
    }
    let cv = String::from_utf8(roadgist(&["crossval", "--help"]).stdout).unwrap();
    for flag in ["--folds <FOLDS>", "[default: 10]", "[default: 512]", "[default: 0.125]", "--seed", "[default: 1]"] {
        assert!(cv.contains(flag), "{flag} missing:\n{cv}");
    }
    let ex = String::from_utf8(roadgist(&["extract", "--help"]).stdout).unwrap();
    assert!(ex.contains("[default: 8,8,8,8]") && ex.contains("[default: 256]"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(roadgist(&[]).status.code(), Some(1));
    assert_eq!(roadgist(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(roadgist(&["crossval", "--cache"]).status.code(), Some(1));
    assert_eq!(roadgist(&["crossval", "--cache", "x", "--out-dir", "y", "--folds", "1"]).status.code(), Some(1));
    assert_eq!(roadgist(&["predict", "--model", "m"]).status.code(), Some(1));
}

#[test]
fn data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "# nothing here\n").unwrap();
    let out = roadgist(&["extract", "--manifest", empty.to_str().unwrap(), "--out", "x.fmds"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "a.png,intersection\n").unwrap();
    let out = roadgist(&["extract", "--manifest", bad.to_str().unwrap(), "--out", "x.fmds"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));

    let junk = dir.path().join("junk.fmds");
    fs::write(&junk, b"not a cache").unwrap();
    let out = roadgist(&["pca", "--cache", junk.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn synth_writes_manifest_and_images() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s");
    let st = roadgist(&["synth", "--seed", "4", "--per-class", "1", "--out-dir", out.to_str().unwrap()]);
    assert_eq!(st.status.code(), Some(0));
    let manifest = fs::read_to_string(out.join("manifest.csv")).unwrap();
    assert_eq!(manifest.lines().count(), 8);
    for line in manifest.lines() {
        let (path, _) = line.split_once(',').unwrap();
        assert!(out.join(path).exists());
    }
}
