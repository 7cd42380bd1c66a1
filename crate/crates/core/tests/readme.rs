use std::path::Path;
use std::process::Command;

/// `$ confluence ...` lines of the README, with the exit status given by a trailing `# exit N`.
fn commands(text: &str) -> Vec<(Vec<String>, i32)> {
    let mut out = Vec::new();
    for line in text.lines() {
        let Some(rest) = line.trim().strip_prefix("$ confluence ") else { continue };
        let (cmd, note) = rest.split_once('#').unwrap_or((rest, ""));
        let expect = note.trim().strip_prefix("exit ").map_or(0, |n| n.trim().parse().unwrap());
        out.push((cmd.split_whitespace().map(String::from).collect(), expect));
    }
    out
}

#[test]
fn readme_commands_run() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let text = std::fs::read_to_string(root.join("README.md")).unwrap();
    let cmds = commands(&text);
    assert!(cmds.len() >= 10, "too few commands found");
    for (args, expect) in cmds {
        let o = Command::new(env!("CARGO_BIN_EXE_confluence")).args(&args).current_dir(&root).output().unwrap();
        assert_eq!(o.status.code(), Some(expect), "confluence {}: {}", args.join(" "), String::from_utf8_lossy(&o.stderr));
        if expect != 1 {
            let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
            assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
        }
    }
}
