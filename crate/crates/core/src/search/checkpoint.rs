//! Binary checkpoints of a split search.
//!
//! Layout (little endian): magic `APNCKPT\0`, version `u32`, 32-byte run
//! digest, `n: u8`, then the jobs. Each job stores its status, its prefix,
//! the path to resume from, the nodes visited so far and the solutions found
//! so far.

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use super::engine::{SearchConfig, SearchContext};
use crate::error::{Error, Result};
use crate::vbf::Lut;

const MAGIC: &[u8; 8] = b"APNCKPT\0";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JobStatus {
    Pending,
    Started,
    Done,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobState {
    pub status: JobStatus,
    pub prefix: Vec<u16>,
    /// Absolute path of the node to revisit; empty unless `Started`.
    pub resume: Vec<u16>,
    pub nodes: u64,
    pub max_depth: usize,
    pub solutions: Vec<Lut>,
}

impl JobState {
    pub fn pending(prefix: Vec<u16>) -> Self {
        JobState {
            status: JobStatus::Pending,
            prefix,
            resume: Vec::new(),
            nodes: 0,
            max_depth: 0,
            solutions: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub digest: [u8; 32],
    pub n: usize,
    pub jobs: Vec<JobState>,
}

/// Digest of everything that shapes the search tree. A checkpoint is only
/// resumed under the same digest.
pub fn run_digest(ctx: &SearchContext, cfg: &SearchConfig) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(b"apn-search tree v1");
    h.update([ctx.n as u8]);
    for m in [&ctx.b, &ctx.a] {
        for r in m.rows() {
            h.update(r.to_le_bytes());
        }
    }
    for v in ctx.base.table() {
        h.update(v.to_le_bytes());
    }
    h.update(cfg.threshold_t.to_le_bytes());
    h.update((cfg.commutant_budget as u64).to_le_bytes());
    h.update((cfg.split_depth as u64).to_le_bytes());
    h.update((ctx.pair_count() as u64).to_le_bytes());
    h.finalize().into()
}

fn put_u16s(out: &mut Vec<u8>, v: &[u16]) {
    out.extend((v.len() as u32).to_le_bytes());
    for x in v {
        out.extend(x.to_le_bytes());
    }
}

struct Reader<'a>(&'a [u8]);

impl Reader<'_> {
    fn take(&mut self, k: usize) -> Result<&[u8]> {
        if self.0.len() < k {
            return Err(Error::Checkpoint("truncated file".into()));
        }
        let (head, tail) = self.0.split_at(k);
        self.0 = tail;
        Ok(head)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn u16s(&mut self, max: usize) -> Result<Vec<u16>> {
        let len = self.u32()? as usize;
        if len > max {
            return Err(Error::Checkpoint(format!("length {len} exceeds {max}")));
        }
        Ok(self
            .take(2 * len)?
            .chunks_exact(2)
            .map(|c| u16::from_le_bytes([c[0], c[1]]))
            .collect())
    }
}

impl Checkpoint {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend(MAGIC);
        out.extend(CHECKPOINT_VERSION.to_le_bytes());
        out.extend(self.digest);
        out.push(self.n as u8);
        out.extend((self.jobs.len() as u32).to_le_bytes());
        for j in &self.jobs {
            out.push(match j.status {
                JobStatus::Pending => 0,
                JobStatus::Started => 1,
                JobStatus::Done => 2,
            });
            put_u16s(&mut out, &j.prefix);
            put_u16s(&mut out, &j.resume);
            out.extend(j.nodes.to_le_bytes());
            out.extend((j.max_depth as u64).to_le_bytes());
            out.extend((j.solutions.len() as u32).to_le_bytes());
            for s in &j.solutions {
                put_u16s(&mut out, s.table());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader(bytes);
        if r.take(8)? != MAGIC {
            return Err(Error::Checkpoint("not a checkpoint file".into()));
        }
        let version = r.u32()?;
        if version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!("unsupported version {version}")));
        }
        let digest: [u8; 32] = r.take(32)?.try_into().unwrap();
        let n = r.u8()? as usize;
        crate::gf2::check_dimension(n).map_err(|_| Error::Checkpoint(format!("bad dimension {n}")))?;
        let size = 1usize << n;
        let count = r.u32()?;
        let mut jobs = Vec::new();
        for _ in 0..count {
            let status = match r.u8()? {
                0 => JobStatus::Pending,
                1 => JobStatus::Started,
                2 => JobStatus::Done,
                s => return Err(Error::Checkpoint(format!("bad job status {s}"))),
            };
            let prefix = r.u16s(size)?;
            let resume = r.u16s(size)?;
            let nodes = r.u64()?;
            let max_depth = r.u64()? as usize;
            let sols = r.u32()?;
            let mut solutions = Vec::new();
            for _ in 0..sols {
                let t = r.u16s(size)?;
                solutions.push(Lut::new(n, t).map_err(|e| Error::Checkpoint(e.to_string()))?);
            }
            jobs.push(JobState {
                status,
                prefix,
                resume,
                nodes,
                max_depth,
                solutions,
            });
        }
        if !r.0.is_empty() {
            return Err(Error::Checkpoint("trailing bytes".into()));
        }
        Ok(Checkpoint { digest, n, jobs })
    }

    /// Writes to a temporary sibling and renames it over `path`.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&self.to_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// `Ok(None)` if the file does not exist.
    pub fn load(path: &Path) -> Result<Option<Self>> {
        let mut bytes = Vec::new();
        match fs::File::open(path) {
            Ok(mut f) => f.read_to_end(&mut bytes)?,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        Checkpoint::from_bytes(&bytes).map(Some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Checkpoint {
        Checkpoint {
            digest: [7; 32],
            n: 3,
            jobs: vec![
                JobState::pending(vec![1, 2]),
                JobState {
                    status: JobStatus::Started,
                    prefix: vec![3],
                    resume: vec![3, 5, 6],
                    nodes: 99,
                    max_depth: 4,
                    solutions: vec![Lut::identity(3)],
                },
            ],
        }
    }

    #[test]
    fn bytes_round_trip() {
        let c = sample();
        assert_eq!(Checkpoint::from_bytes(&c.to_bytes()).unwrap(), c);
    }

    #[test]
    fn damaged_files_are_rejected() {
        let bytes = sample().to_bytes();
        assert!(Checkpoint::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(Checkpoint::from_bytes(&bad).is_err());
        let mut long = bytes;
        long.push(0);
        assert!(Checkpoint::from_bytes(&long).is_err());
    }

    #[test]
    fn save_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.ckpt");
        assert!(Checkpoint::load(&path).unwrap().is_none());
        sample().save(&path).unwrap();
        assert_eq!(Checkpoint::load(&path).unwrap().unwrap(), sample());
    }
}
