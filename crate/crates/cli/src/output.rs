use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use cone_spectral::coneop::Verdict;
use sha2::{Digest, Sha256};

/// Output directory with a provenance line on every CSV and a MANIFEST of digests.
pub struct Artifacts {
    dir: PathBuf,
    provenance: String,
    files: Vec<(String, String)>,
    pub svg: bool,
}

impl Artifacts {
    pub fn create(dir: &Path, subcommand: &str, config_digest: &str, seed: u64, profile: &str, svg: bool) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Artifacts {
            dir: dir.to_path_buf(),
            provenance: format!("# config_sha256={config_digest} subcommand={subcommand} seed={seed} profile={profile}"),
            files: Vec::new(),
            svg,
        })
    }

    fn write(&mut self, name: &str, body: &str) -> std::io::Result<()> {
        fs::write(self.dir.join(name), body)?;
        self.files.push((name.to_string(), hex::encode(Sha256::digest(body.as_bytes()))));
        Ok(())
    }

    /// `body` starts with its header row; the provenance comment goes first.
    pub fn csv(&mut self, name: &str, body: &str) -> std::io::Result<()> {
        let text = format!("{}\n{body}", self.provenance);
        self.write(name, &text)
    }

    pub fn svg_file(&mut self, name: &str, body: &str) -> std::io::Result<()> {
        if self.svg {
            self.write(name, body)?;
        }
        Ok(())
    }

    /// Lists every file written so far; `complete = false` marks a run cut
    /// short by an error.
    pub fn finish(&mut self, complete: bool, note: Option<&str>) -> std::io::Result<()> {
        let mut m = String::new();
        let _ = writeln!(m, "{}", self.provenance);
        let _ = writeln!(m, "status: {}", if complete { "complete" } else { "incomplete" });
        if let Some(n) = note {
            let _ = writeln!(m, "note: {}", n.replace('\n', " "));
        }
        for (name, digest) in &self.files {
            let _ = writeln!(m, "{digest}  {name}");
        }
        fs::write(self.dir.join("MANIFEST"), m)
    }
}

/// One row of a subcommand's `checks.csv`.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub value: String,
    pub criterion: String,
    pub verdict: Verdict,
}

impl Check {
    pub fn new(name: &str, value: impl ToString, criterion: impl ToString, verdict: Verdict) -> Self {
        Check {
            name: name.to_string(),
            value: value.to_string(),
            criterion: criterion.to_string(),
            verdict,
        }
    }

    pub fn bool(name: &str, value: impl ToString, criterion: impl ToString, ok: bool) -> Self {
        Self::new(name, value, criterion, Verdict::from_bool(ok))
    }
}

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::True => "PASS",
        Verdict::False => "FAIL",
        Verdict::Undecided => "UNDECIDED",
    }
}

pub fn checks_csv(checks: &[Check]) -> String {
    let mut s = String::from("check,value,criterion,verdict\n");
    for c in checks {
        let _ = writeln!(s, "{},{},{},{}", c.name, c.value, c.criterion, verdict_str(c.verdict));
    }
    s
}

/// 0 if every check passes, 2 on any failure, otherwise 3 on any undecided check.
pub fn exit_code(checks: &[Check]) -> i32 {
    if checks.iter().any(|c| c.verdict == Verdict::False) {
        2
    } else if checks.iter().any(|c| c.verdict == Verdict::Undecided) {
        3
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_and_provenance() {
        let dir = tempfile::tempdir().unwrap();
        let mut a = Artifacts::create(dir.path(), "spectrum", "abc", 7, "default", false).unwrap();
        a.csv("x.csv", "h1,h2\n1,2\n").unwrap();
        a.svg_file("x.svg", "<svg/>").unwrap();
        a.finish(false, Some("stopped")).unwrap();
        let x = fs::read_to_string(dir.path().join("x.csv")).unwrap();
        assert!(x.starts_with("# config_sha256=abc subcommand=spectrum seed=7 profile=default\nh1,h2\n"));
        assert!(!dir.path().join("x.svg").exists());
        let m = fs::read_to_string(dir.path().join("MANIFEST")).unwrap();
        assert!(m.contains("status: incomplete") && m.contains("note: stopped"));
        let digest = hex::encode(Sha256::digest(x.as_bytes()));
        assert!(m.contains(&format!("{digest}  x.csv")));
    }

    #[test]
    fn exit_codes() {
        let pass = Check::bool("a", 1, "", true);
        let und = Check::new("b", 1, "", Verdict::Undecided);
        let fail = Check::bool("c", 1, "", false);
        assert_eq!(exit_code(std::slice::from_ref(&pass)), 0);
        assert_eq!(exit_code(&[pass.clone(), und.clone()]), 3);
        assert_eq!(exit_code(&[und, fail, pass]), 2);
    }
}
