//! Append-only run manifest (`manifest.jsonl`), one JSON object per line.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prune::VerdictKind;
use crate::search::{SearchConfig, SearchMode};

pub const MANIFEST_SCHEMA: u32 = 1;

/// Final state of one class within a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "kebab-case")]
pub enum Outcome {
    Pruned { kind: VerdictKind },
    Exhausted { count: usize },
    BudgetExpired { count: usize },
    RunningCheckpointed { count: usize },
}

impl Outcome {
    /// Whether re-running the class cannot change the result.
    pub fn is_final(&self) -> bool {
        matches!(self, Outcome::Pruned { .. } | Outcome::Exhausted { .. })
    }

    pub fn label(&self) -> String {
        match self {
            Outcome::Pruned { kind } => format!("pruned ({})", serde_json::to_value(kind).unwrap().as_str().unwrap()),
            Outcome::Exhausted { count } => format!("exhausted ({count} solutions)"),
            Outcome::BudgetExpired { count } => format!("budget-expired ({count} solutions)"),
            Outcome::RunningCheckpointed { count } => {
                format!("running-checkpointed ({count} solutions)")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifacts {
    pub solutions: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub groups: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub schema: u32,
    /// Seconds since the Unix epoch at which the invocation started.
    pub run_started: u64,
    pub n: usize,
    pub class_id: usize,
    pub paper_class: Option<usize>,
    pub mode: SearchMode,
    pub config: SearchConfig,
    pub outcome: Outcome,
    pub nodes_visited: u64,
    pub elapsed_secs: f64,
    pub artifacts: Artifacts,
}

#[derive(Clone, Debug)]
pub struct Manifest {
    path: PathBuf,
}

impl Manifest {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Manifest { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn entries(&self) -> Result<Vec<ManifestEntry>> {
        let text = match fs::read_to_string(&self.path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                serde_json::from_str(l).map_err(|e| Error::Parse {
                    line: i + 1,
                    message: e.to_string(),
                })
            })
            .collect()
    }

    pub fn append(&self, entry: &ManifestEntry) -> Result<()> {
        if let Some(dir) = self.path.parent() {
            fs::create_dir_all(dir)?;
        }
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(f, "{}", serde_json::to_string(entry)?)?;
        Ok(())
    }

    /// Latest final entry for the class in the given mode, if any.
    pub fn completed(&self, n: usize, class_id: usize, mode: SearchMode) -> Result<Option<ManifestEntry>> {
        Ok(self
            .entries()?
            .into_iter()
            .rev()
            .find(|e| e.n == n && e.class_id == class_id && e.mode == mode && e.outcome.is_final()))
    }

    /// Latest entry per class for dimension `n`, ordered by class.
    pub fn latest(&self, n: usize) -> Result<Vec<ManifestEntry>> {
        let mut out: Vec<ManifestEntry> = Vec::new();
        for e in self.entries()?.into_iter().filter(|e| e.n == n) {
            match out.iter_mut().find(|o| o.class_id == e.class_id) {
                Some(o) => *o = e,
                None => out.push(e),
            }
        }
        out.sort_by_key(|e| e.class_id);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(class_id: usize, outcome: Outcome) -> ManifestEntry {
        ManifestEntry {
            schema: MANIFEST_SCHEMA,
            run_started: 0,
            n: 4,
            class_id,
            paper_class: None,
            mode: SearchMode::Exhaustive,
            config: SearchConfig::default(),
            outcome,
            nodes_visited: 1,
            elapsed_secs: 0.5,
            artifacts: Artifacts::default(),
        }
    }

    #[test]
    fn append_and_query() {
        let dir = tempfile::tempdir().unwrap();
        let m = Manifest::new(dir.path().join("manifest.jsonl"));
        assert!(m.entries().unwrap().is_empty());
        m.append(&entry(1, Outcome::RunningCheckpointed { count: 0 })).unwrap();
        assert!(m.completed(4, 1, SearchMode::Exhaustive).unwrap().is_none());
        m.append(&entry(1, Outcome::Exhausted { count: 0 })).unwrap();
        m.append(&entry(2, Outcome::Pruned { kind: VerdictKind::RejectedDim })).unwrap();
        assert!(m.completed(4, 1, SearchMode::Exhaustive).unwrap().is_some());
        assert!(m.completed(4, 1, SearchMode::Randomized).unwrap().is_none());
        let latest = m.latest(4).unwrap();
        assert_eq!(latest.len(), 2);
        assert_eq!(latest[0].outcome, Outcome::Exhausted { count: 0 });
        let line = fs::read_to_string(m.path()).unwrap();
        assert!(line.contains("\"state\":\"running-checkpointed\""));
    }

    #[test]
    fn corrupt_line_reports_its_number() {
        let dir = tempfile::tempdir().unwrap();
        let m = Manifest::new(dir.path().join("manifest.jsonl"));
        m.append(&entry(1, Outcome::Exhausted { count: 0 })).unwrap();
        fs::write(m.path(), fs::read_to_string(m.path()).unwrap() + "{oops\n").unwrap();
        assert!(matches!(m.entries(), Err(Error::Parse { line: 2, .. })));
    }
}
