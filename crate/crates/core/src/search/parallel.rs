//! Splitting the search tree into independent jobs and running them on a
//! thread pool with optional checkpointing.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Instant;

use super::checkpoint::{run_digest, Checkpoint, JobState, JobStatus};
use super::engine::{
    random_search_context, Engine, Limits, SearchConfig, SearchContext, SearchMode, SearchReport,
    StopReason,
};
use crate::error::{Error, Result};
use crate::vbf::Lut;

#[derive(Debug, Default)]
pub struct RunOptions<'a> {
    /// Worker threads; 0 means one per available core.
    pub threads: usize,
    /// Checkpoint file, resumed from if it exists.
    pub checkpoint: Option<PathBuf>,
    /// Set externally (e.g. by a signal handler) to stop all workers.
    pub cancel: Option<&'a AtomicBool>,
}

/// Feasible orbit-choice prefixes of length `cfg.split_depth` (shorter where
/// the table completes earlier), in traversal order.
pub fn split_work(ctx: &SearchContext, cfg: &SearchConfig) -> Vec<Vec<u16>> {
    let limits = Limits {
        checkpoint_interval: u64::MAX,
        ..Limits::default()
    };
    let mut engine = Engine::new(ctx, limits);
    if !engine.start_feasible() {
        return Vec::new();
    }
    engine.collect_prefixes(cfg.split_depth)
}

fn stop_rank(s: StopReason) -> u8 {
    match s {
        StopReason::Completed => 0,
        StopReason::Cancelled => 1,
        StopReason::NodeBudget => 2,
        StopReason::TimeBudget => 3,
        StopReason::SolutionLimit => 4,
    }
}

fn thread_count(requested: usize) -> usize {
    if requested > 0 {
        requested
    } else {
        thread::available_parallelism().map_or(1, |n| n.get())
    }
}

/// Runs the search described by `ctx` and `cfg` on several threads. In
/// exhaustive mode the tree is cut at `cfg.split_depth` and progress can be
/// checkpointed; in randomized mode each thread runs its own restarts with
/// seed `cfg.rng_seed + thread index`.
pub fn parallel_search(ctx: &SearchContext, cfg: &SearchConfig, opts: &RunOptions) -> Result<SearchReport> {
    cfg.validate()?;
    let threads = thread_count(opts.threads);
    if cfg.mode == SearchMode::Randomized {
        return parallel_random(ctx, cfg, threads);
    }
    let started = Instant::now();
    let digest = run_digest(ctx, cfg);
    let loaded = match &opts.checkpoint {
        Some(p) => Checkpoint::load(p)?,
        None => None,
    };
    let state = match loaded {
        Some(c) if c.digest != digest || c.n != ctx.n() => {
            return Err(Error::Checkpoint(
                "checkpoint belongs to a different tuple or configuration".into(),
            ))
        }
        Some(c) => c,
        None => Checkpoint {
            digest,
            n: ctx.n(),
            jobs: split_work(ctx, cfg).into_iter().map(JobState::pending).collect(),
        },
    };
    let todo: Vec<usize> = (0..state.jobs.len())
        .filter(|&i| state.jobs[i].status != JobStatus::Done)
        .collect();
    let state = Mutex::new(state);
    let next = AtomicUsize::new(0);
    let halt = AtomicBool::new(false);
    let total_nodes = AtomicU64::new(0);
    let found = AtomicUsize::new(0);
    let failures = AtomicU64::new(0);
    let worst = Mutex::new(StopReason::Completed);
    let deadline = cfg.time_budget.map(|d| started + d);
    let save = |c: &Checkpoint| -> Result<()> {
        match &opts.checkpoint {
            Some(p) => c.save(p),
            None => Ok(()),
        }
    };
    let save_error: Mutex<Option<Error>> = Mutex::new(None);

    thread::scope(|s| {
        for _ in 0..threads.min(todo.len().max(1)) {
            s.spawn(|| loop {
                if halt.load(Ordering::Relaxed) || opts.cancel.is_some_and(|c| c.load(Ordering::Relaxed)) {
                    break;
                }
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&job) = todo.get(k) else { break };
                let carried = state.lock().unwrap().jobs[job].clone();
                let spent = total_nodes.load(Ordering::Relaxed);
                let mut hook = |path: &[u16], nodes: u64, sols: &[Lut]| {
                    let mut st = state.lock().unwrap();
                    let j = &mut st.jobs[job];
                    j.status = JobStatus::Started;
                    j.resume = path.to_vec();
                    j.nodes = carried.nodes + nodes;
                    j.solutions = carried.solutions.iter().chain(sols).cloned().collect();
                    if let Err(e) = save(&st) {
                        save_error.lock().unwrap().get_or_insert(e);
                    }
                };
                let limits = Limits {
                    deadline,
                    node_limit: cfg.node_budget.map(|b| b.saturating_sub(spent)),
                    max_solutions: cfg
                        .max_solutions
                        .map(|m| m.saturating_sub(found.load(Ordering::Relaxed)).max(1)),
                    cancel: Some(&halt),
                    checkpoint_interval: cfg.checkpoint_interval,
                    checkpoint: Some(&mut hook),
                };
                let mut engine = Engine::new(ctx, limits);
                assert!(engine.apply_prefix(&carried.prefix), "stored prefix is feasible");
                if carried.status == JobStatus::Started {
                    engine.resume_from(carried.resume.clone());
                }
                let external = opts.cancel;
                // forward the external flag into the shared halt flag
                if external.is_some_and(|c| c.load(Ordering::Relaxed)) {
                    halt.store(true, Ordering::Relaxed);
                }
                engine.run();
                let stop = engine.stop;
                let path = engine.path().to_vec();
                total_nodes.fetch_add(engine.nodes, Ordering::Relaxed);
                failures.fetch_add(engine.verification_failures, Ordering::Relaxed);
                found.fetch_add(engine.solutions.len(), Ordering::Relaxed);
                let mut st = state.lock().unwrap();
                let j = &mut st.jobs[job];
                j.nodes = carried.nodes + engine.nodes;
                j.max_depth = carried.max_depth.max(engine.max_depth);
                j.solutions = carried.solutions.iter().chain(&engine.solutions).cloned().collect();
                match stop {
                    None => {
                        j.status = JobStatus::Done;
                        j.resume.clear();
                    }
                    Some(reason) => {
                        j.status = JobStatus::Started;
                        j.resume = path;
                        // a halt caused by another worker is reported by that worker
                        let reason = if reason == StopReason::Cancelled
                            && !external.is_some_and(|c| c.load(Ordering::Relaxed))
                        {
                            StopReason::Completed
                        } else {
                            reason
                        };
                        let mut w = worst.lock().unwrap();
                        if stop_rank(reason) > stop_rank(*w) {
                            *w = reason;
                        }
                        halt.store(true, Ordering::Relaxed);
                    }
                }
                drop(st);
            });
        }
        // relay external cancellation while workers run
        if let Some(c) = opts.cancel {
            s.spawn(|| {
                while next.load(Ordering::Relaxed) <= todo.len() && !halt.load(Ordering::Relaxed) {
                    if c.load(Ordering::Relaxed) {
                        halt.store(true, Ordering::Relaxed);
                        break;
                    }
                    thread::sleep(std::time::Duration::from_millis(20));
                }
            });
        }
    });
    let state = state.into_inner().unwrap();
    save(&state)?;
    if let Some(e) = save_error.into_inner().unwrap() {
        return Err(e);
    }
    let mut stop = worst.into_inner().unwrap();
    if opts.cancel.is_some_and(|c| c.load(Ordering::Relaxed)) && stop == StopReason::Completed {
        stop = StopReason::Cancelled;
    }
    let all_done = state.jobs.iter().all(|j| j.status == JobStatus::Done);
    if !all_done && stop == StopReason::Completed {
        stop = StopReason::Cancelled;
    }
    let mut seen = BTreeSet::new();
    let mut solutions: Vec<Lut> = state
        .jobs
        .iter()
        .flat_map(|j| j.solutions.iter().cloned())
        .filter(|s| seen.insert(s.table().to_vec()))
        .collect();
    solutions.sort_by(|a, b| a.table().cmp(b.table()));
    if let Some(m) = cfg.max_solutions {
        solutions.truncate(m);
    }
    Ok(SearchReport {
        solutions,
        nodes_visited: state.jobs.iter().map(|j| j.nodes).sum(),
        max_depth_reached: state.jobs.iter().map(|j| j.max_depth).max().unwrap_or(0),
        elapsed: started.elapsed(),
        exhausted: all_done,
        stop,
        verification_failures: failures.into_inner(),
    })
}

fn parallel_random(ctx: &SearchContext, cfg: &SearchConfig, threads: usize) -> Result<SearchReport> {
    let reports: Vec<Result<SearchReport>> = thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|i| {
                let mut c = cfg.clone();
                c.rng_seed = cfg.rng_seed.wrapping_add(i as u64);
                c.node_budget = cfg.node_budget.map(|b| b / threads as u64 + u64::from((i as u64) < b % threads as u64));
                s.spawn(move || random_search_context(ctx, &c))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut merged: Option<SearchReport> = None;
    for r in reports {
        let r = r?;
        merged = Some(match merged {
            None => r,
            Some(m) => {
                let stop = if stop_rank(r.stop) > stop_rank(m.stop) { r.stop } else { m.stop };
                let mut x = m.merge(r);
                x.stop = stop;
                x
            }
        });
    }
    let mut out = merged.expect("at least one thread");
    let mut seen = BTreeSet::new();
    out.solutions.retain(|s| seen.insert(s.table().to_vec()));
    out.solutions.sort_by(|a, b| a.table().cmp(b.table()));
    out.exhausted = false;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::enumerate_classes;
    use crate::search::engine::search_context;

    fn sorted(mut v: Vec<Lut>) -> Vec<Lut> {
        v.sort_by(|a, b| a.table().cmp(b.table()));
        v
    }

    #[test]
    fn split_jobs_reproduce_the_single_thread_result() {
        for t in enumerate_classes(3).iter().chain(&enumerate_classes(4)) {
            for depth in [0, 1, 2, 5] {
                let cfg = SearchConfig {
                    split_depth: depth,
                    ..SearchConfig::default()
                };
                let ctx = SearchContext::new(t, &cfg).unwrap();
                let single = search_context(&ctx, &cfg).unwrap();
                let opts = RunOptions {
                    threads: 3,
                    ..RunOptions::default()
                };
                let par = parallel_search(&ctx, &cfg, &opts).unwrap();
                assert_eq!(sorted(single.solutions), par.solutions);
                assert!(par.exhausted);
                assert_eq!(par.stop, StopReason::Completed);
            }
        }
    }

    #[test]
    fn interrupted_run_resumes_to_the_same_result() {
        let t = enumerate_classes(4).into_iter().find(|t| t.p == 2).unwrap();
        let base = SearchConfig {
            threshold_t: -1,
            split_depth: 2,
            checkpoint_interval: 50,
            ..SearchConfig::default()
        };
        let ctx = SearchContext::new(&t, &base).unwrap();
        let full = parallel_search(&ctx, &base, &RunOptions::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.ckpt");
        let opts = RunOptions {
            threads: 1,
            checkpoint: Some(path.clone()),
            cancel: None,
        };
        let mut rounds = 0;
        let nodes = loop {
            rounds += 1;
            let cfg = SearchConfig {
                node_budget: Some(300),
                ..base.clone()
            };
            let r = parallel_search(&ctx, &cfg, &opts).unwrap();
            if r.exhausted {
                assert_eq!(r.solutions, full.solutions);
                break r.nodes_visited;
            }
            assert_eq!(r.stop, StopReason::NodeBudget);
            assert!(rounds < 10_000);
        };
        assert!(rounds > 1);
        assert!(nodes >= full.nodes_visited);
    }

    #[test]
    fn foreign_checkpoint_is_rejected() {
        let classes = enumerate_classes(3);
        let cfg = SearchConfig::default();
        let dir = tempfile::tempdir().unwrap();
        let opts = RunOptions {
            threads: 1,
            checkpoint: Some(dir.path().join("x.ckpt")),
            cancel: None,
        };
        let c0 = SearchContext::new(&classes[0], &cfg).unwrap();
        parallel_search(&c0, &cfg, &opts).unwrap();
        let c1 = SearchContext::new(&classes[1], &cfg).unwrap();
        assert!(matches!(parallel_search(&c1, &cfg, &opts), Err(Error::Checkpoint(_))));
    }

    #[test]
    fn preset_cancel_stops_immediately() {
        let t = &enumerate_classes(4)[0];
        let cfg = SearchConfig::default();
        let ctx = SearchContext::new(t, &cfg).unwrap();
        let flag = AtomicBool::new(true);
        let opts = RunOptions {
            threads: 2,
            checkpoint: None,
            cancel: Some(&flag),
        };
        let r = parallel_search(&ctx, &cfg, &opts).unwrap();
        assert_eq!(r.stop, StopReason::Cancelled);
        assert!(!r.exhausted);
    }
}
