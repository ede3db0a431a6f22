//! Depth-first orbit assignment for APN permutations with `F o A = B o F`.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::partial::{DdtAccumulator, PartialLut};
use crate::classify::AutoTuple;
use crate::error::{Error, Result};
use crate::gf2::{commutant, fixed_space, is_extendable, order, point_orders, Gf2Matrix};
use crate::vbf::{is_apn, monomial_lut, verify_le_automorphism, FiniteField, Lut};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Exhaustive,
    Randomized,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Canonical-representative checks run at depths `<= threshold_t`;
    /// `-1` disables them.
    pub threshold_t: i32,
    pub mode: SearchMode,
    /// Wall-clock budget; required in randomized mode.
    pub time_budget: Option<Duration>,
    /// Total node budget (all restarts together in randomized mode).
    pub node_budget: Option<u64>,
    pub rng_seed: u64,
    /// Commutant elements per side used by the canonical check.
    pub commutant_budget: usize,
    /// Pre-fill `F` on the fixed space of `A` with `x^3` (dimension 3 only).
    pub seed_fixed_points: bool,
    /// Orbit depth at which the tree is cut into independent jobs.
    pub split_depth: usize,
    /// Stop after this many solutions.
    pub max_solutions: Option<usize>,
    /// Randomized mode: nodes per shuffle before restarting.
    pub restart_nodes: u64,
    /// Nodes between checkpoint callbacks.
    pub checkpoint_interval: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            threshold_t: 2,
            mode: SearchMode::Exhaustive,
            time_budget: None,
            node_budget: None,
            rng_seed: 0,
            commutant_budget: 32,
            seed_fixed_points: false,
            split_depth: 0,
            max_solutions: None,
            restart_nodes: 1 << 22,
            checkpoint_interval: 10_000_000,
        }
    }
}

impl SearchConfig {
    pub fn randomized(time_budget: Duration, rng_seed: u64) -> Self {
        SearchConfig {
            threshold_t: -1,
            mode: SearchMode::Randomized,
            time_budget: Some(time_budget),
            rng_seed,
            ..SearchConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.threshold_t < -1 {
            return Err(Error::InvalidInput(format!(
                "threshold {} is below -1",
                self.threshold_t
            )));
        }
        if self.mode == SearchMode::Randomized && self.time_budget.is_none() {
            return Err(Error::InvalidInput(
                "randomized search needs a time budget".into(),
            ));
        }
        if self.restart_nodes == 0 || self.checkpoint_interval == 0 {
            return Err(Error::InvalidInput("node intervals must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    /// The whole (sub)tree was traversed.
    Completed,
    SolutionLimit,
    TimeBudget,
    NodeBudget,
    Cancelled,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchReport {
    pub solutions: Vec<Lut>,
    pub nodes_visited: u64,
    pub max_depth_reached: usize,
    pub elapsed: Duration,
    pub exhausted: bool,
    pub stop: StopReason,
    /// Complete tables that failed re-verification (never emitted).
    pub verification_failures: u64,
}

impl SearchReport {
    pub(crate) fn empty(stop: StopReason) -> Self {
        SearchReport {
            solutions: Vec::new(),
            nodes_visited: 0,
            max_depth_reached: 0,
            elapsed: Duration::ZERO,
            exhausted: false,
            stop,
            verification_failures: 0,
        }
    }

    /// Combines reports of independent jobs. The stop reason is the first
    /// that is not `Completed`.
    pub fn merge(mut self, other: SearchReport) -> SearchReport {
        self.solutions.extend(other.solutions);
        self.nodes_visited += other.nodes_visited;
        self.max_depth_reached = self.max_depth_reached.max(other.max_depth_reached);
        self.elapsed = self.elapsed.max(other.elapsed);
        self.exhausted &= other.exhausted;
        if self.stop == StopReason::Completed {
            self.stop = other.stop;
        }
        self.verification_failures += other.verification_failures;
        self
    }
}

/// Builds `F` on `Ord(A, 1)` from an APN permutation `g3` of that space:
/// `F(pi_A(c)) = pi_B(g3(c))`, every other entry undefined except `F(0) = 0`.
pub fn seed_fixed_points(t: &AutoTuple, g3: &Lut) -> Result<PartialLut> {
    seed_for(&t.b, &t.a, Some(g3))
}

fn seed_for(b: &Gf2Matrix, a: &Gf2Matrix, g3: Option<&Lut>) -> Result<PartialLut> {
    let fa = fixed_space(a, 1);
    let fb = fixed_space(b, 1);
    if fa.dim != fb.dim {
        return Err(Error::DimensionMismatch {
            expected: fa.dim,
            got: fb.dim,
        });
    }
    let k = fa.dim;
    let mut lut = PartialLut::pinned(a.n())?;
    if k == 0 {
        return Ok(lut);
    }
    if matches!(k, 1 | 2 | 4) {
        return Err(Error::InvalidInput(format!(
            "no APN permutation seed exists in dimension {k}"
        )));
    }
    if !is_extendable(a) || !is_extendable(b) {
        return Err(Error::NotExtendable);
    }
    let default_g3;
    let g3 = match g3 {
        Some(g) => g,
        None if k == 3 => {
            default_g3 = monomial_lut(&FiniteField::with_default_modulus(3)?, 3);
            &default_g3
        }
        None => {
            return Err(Error::InvalidInput(format!(
                "no default seed for a {k}-dimensional fixed space"
            )))
        }
    };
    if g3.n() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: g3.n(),
        });
    }
    if !g3.is_permutation() || !is_apn(g3) || g3.get(0) != 0 {
        return Err(Error::InvalidInput(
            "seed must be an APN permutation fixing 0".into(),
        ));
    }
    for c in 1..1u16 << k {
        lut.set(fa.embed(c), fb.embed(g3.get(c)));
    }
    Ok(lut)
}

/// Immutable search data shared by all jobs of one tuple.
#[derive(Clone, Debug)]
pub struct SearchContext {
    pub(crate) n: usize,
    pub(crate) a: Gf2Matrix,
    pub(crate) b: Gf2Matrix,
    a_img: Vec<u16>,
    b_img: Vec<u16>,
    ord_a: Vec<u64>,
    /// For each point order, the outputs of that order under `B`, ascending.
    candidates: Vec<(u64, Vec<u16>)>,
    /// Image tables of the commutant subsets.
    ca: Vec<Vec<u16>>,
    cb: Vec<Vec<u16>>,
    /// Index pairs into `ca` x `cb` used by the canonical check.
    pairs: Vec<(u32, u32)>,
    pub(crate) threshold: i32,
    pub(crate) base: PartialLut,
}

impl SearchContext {
    pub fn new(t: &AutoTuple, cfg: &SearchConfig) -> Result<Self> {
        SearchContext::for_matrices(&t.b, &t.a, cfg, None)
    }

    /// Context for any pair of equal-order matrices, optionally starting
    /// from a given partial table (e.g. from [`seed_fixed_points`]).
    pub fn for_matrices(
        b: &Gf2Matrix,
        a: &Gf2Matrix,
        cfg: &SearchConfig,
        start: Option<PartialLut>,
    ) -> Result<Self> {
        cfg.validate()?;
        if a.n() != b.n() {
            return Err(Error::DimensionMismatch {
                expected: b.n(),
                got: a.n(),
            });
        }
        let (oa, ob) = (order(a)?, order(b)?);
        if oa != ob {
            return Err(Error::OrderMismatch { a: oa, b: ob });
        }
        let n = a.n();
        let base = match start {
            Some(s) => s,
            None if cfg.seed_fixed_points => seed_for(b, a, None)?,
            None => PartialLut::pinned(n)?,
        };
        if base.n() != n || base.get(0) != Some(0) {
            return Err(Error::InvalidInput("start table must fix F(0) = 0".into()));
        }
        let ord_a = point_orders(a);
        let ord_b = point_orders(b);
        let mut candidates: Vec<(u64, Vec<u16>)> = Vec::new();
        for (y, &o) in ord_b.iter().enumerate() {
            match candidates.iter_mut().find(|(k, _)| *k == o) {
                Some((_, v)) => v.push(y as u16),
                None => candidates.push((o, vec![y as u16])),
            }
        }
        let mut ctx = SearchContext {
            n,
            a: *a,
            b: *b,
            a_img: a.image_table(),
            b_img: b.image_table(),
            ord_a,
            candidates,
            ca: Vec::new(),
            cb: Vec::new(),
            pairs: Vec::new(),
            threshold: cfg.threshold_t,
            base,
        };
        if cfg.threshold_t >= 0 {
            let ca = commutant(a, cfg.commutant_budget);
            let cb = commutant(b, cfg.commutant_budget);
            ctx.set_commutant_subsets(&ca, &cb)?;
        }
        Ok(ctx)
    }

    /// Replaces the canonical-check subsets. Every element must commute with
    /// its matrix. When the start table defines more than `F(0)`, only pairs
    /// that preserve the start table are kept.
    pub fn set_commutant_subsets(&mut self, ca: &[Gf2Matrix], cb: &[Gf2Matrix]) -> Result<()> {
        for (set, m) in [(ca, &self.a), (cb, &self.b)] {
            if let Some(bad) = set.iter().find(|c| c.mul(m) != m.mul(c) || !c.is_invertible()) {
                return Err(Error::InvalidInput(format!(
                    "{bad:?} is not an invertible element of the commutant"
                )));
            }
        }
        self.ca = ca.iter().map(Gf2Matrix::image_table).collect();
        self.cb = cb.iter().map(Gf2Matrix::image_table).collect();
        let base = &self.base;
        let defined: Vec<u16> = (0..base.size() as u16).filter(|&x| base.is_defined(x)).collect();
        self.pairs.clear();
        for (i, ta) in self.ca.iter().enumerate() {
            for (j, tb) in self.cb.iter().enumerate() {
                let trivial = ca[i].is_identity() && cb[j].is_identity();
                let keeps_start = defined.iter().all(|&x| {
                    base.get(ta[x as usize])
                        .is_some_and(|v| tb[v as usize] == base.table()[x as usize])
                });
                if !trivial && keeps_start {
                    self.pairs.push((i as u32, j as u32));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    fn candidates_for(&self, ord: u64) -> &[u16] {
        self.candidates
            .iter()
            .find(|(k, _)| *k == ord)
            .map_or(&[], |(_, v)| v.as_slice())
    }

    /// Whether no kept pair maps the partial table to something
    /// lexicographically smaller on the positions both sides define.
    pub(crate) fn is_smallest_fast(&self, lut: &PartialLut) -> bool {
        let table = lut.table();
        let undef = lut.undef();
        for &(i, j) in &self.pairs {
            let ca = &self.ca[i as usize];
            let cb = &self.cb[j as usize];
            for x in 0..table.len() {
                let fx = table[x];
                if fx == undef {
                    break;
                }
                let fu = table[ca[x] as usize];
                if fu == undef {
                    break;
                }
                let g = cb[fu as usize];
                if g < fx {
                    return false;
                }
                if g > fx {
                    break;
                }
            }
        }
        true
    }

    /// Whether a complete table solves the tuple.
    pub(crate) fn verify(&self, lut: &Lut) -> bool {
        lut.is_permutation()
            && is_apn(lut)
            && verify_le_automorphism(lut, &self.a, &self.b).unwrap_or(false)
    }
}

/// Whether `c_B o partial o c_A` is never lexicographically smaller than
/// `partial` for `c_A` in `ca` and `c_B` in `cb`. Comparison runs from input
/// 0 and stops at the first position undefined on either side, so a `false`
/// answer holds for every completion.
pub fn is_smallest(partial: &PartialLut, ca: &[Gf2Matrix], cb: &[Gf2Matrix]) -> bool {
    let ta: Vec<Vec<u16>> = ca.iter().map(Gf2Matrix::image_table).collect();
    let tb: Vec<Vec<u16>> = cb.iter().map(Gf2Matrix::image_table).collect();
    let table = partial.table();
    let undef = partial.undef();
    for a in &ta {
        for b in &tb {
            for x in 0..table.len() {
                let (fx, fu) = (table[x], table[a[x] as usize]);
                if fx == undef || fu == undef {
                    break;
                }
                let g = b[fu as usize];
                if g < fx {
                    return false;
                }
                if g > fx {
                    break;
                }
            }
        }
    }
    true
}

/// Per-run limits and hooks.
#[derive(Default)]
pub(crate) struct Limits<'a> {
    pub deadline: Option<Instant>,
    pub node_limit: Option<u64>,
    pub max_solutions: Option<usize>,
    pub cancel: Option<&'a AtomicBool>,
    pub checkpoint_interval: u64,
    pub checkpoint: Option<&'a mut dyn FnMut(&[u16], u64, &[Lut])>,
}

/// Mutable state of one depth-first traversal.
pub(crate) struct Engine<'c, 'l> {
    ctx: &'c SearchContext,
    lut: PartialLut,
    ddt: DdtAccumulator,
    /// Chosen output for each orbit on the current path.
    path: Vec<u16>,
    order: Option<Vec<Vec<u16>>>,
    resume: Vec<u16>,
    resuming: bool,
    scratch: Vec<u16>,
    pub nodes: u64,
    pub max_depth: usize,
    pub solutions: Vec<Lut>,
    pub verification_failures: u64,
    pub stop: Option<StopReason>,
    limits: Limits<'l>,
}

impl<'c, 'l> Engine<'c, 'l> {
    pub fn new(ctx: &'c SearchContext, limits: Limits<'l>) -> Self {
        let lut = ctx.base.clone();
        let mut ddt = DdtAccumulator::new(ctx.n);
        // replay the start table so the accumulator matches it
        let mut replay = PartialLut::new(ctx.n).expect("valid dimension");
        for x in 0..lut.size() as u16 {
            if let Some(y) = lut.get(x) {
                replay.set(x, y);
                ddt.add_ddt_information(&replay, x);
            }
        }
        Engine {
            ctx,
            lut,
            ddt,
            path: Vec::new(),
            order: None,
            resume: Vec::new(),
            resuming: false,
            scratch: Vec::new(),
            nodes: 0,
            max_depth: 0,
            solutions: Vec::new(),
            verification_failures: 0,
            stop: None,
            limits,
        }
    }

    /// Uses a per-position shuffled candidate order.
    pub fn shuffle<R: Rng>(&mut self, rng: &mut R) {
        let size = 1usize << self.ctx.n;
        let order = (0..size)
            .map(|x| {
                let mut c = self.ctx.candidates_for(self.ctx.ord_a[x]).to_vec();
                c.shuffle(rng);
                c
            })
            .collect();
        self.order = Some(order);
    }

    /// Continue a traversal from a checkpointed path.
    pub fn resume_from(&mut self, path: Vec<u16>) {
        self.resuming = !path.is_empty();
        self.resume = path;
    }

    pub fn start_feasible(&self) -> bool {
        DdtAccumulator::from_scratch(&self.lut)
            .counts()
            .chunks(1 << self.ctx.n)
            .skip(1)
            .all(|row| row.iter().all(|&c| c <= 2))
    }

    fn next_free(&self, from: usize) -> usize {
        (from..self.lut.size())
            .find(|&x| !self.lut.is_defined(x as u16))
            .unwrap_or(self.lut.size())
    }

    /// Assigns the orbit of `x` starting at `y`. Returns how many entries
    /// were set and whether all passed the APN check.
    #[inline]
    fn assign_orbit(&mut self, x: u16, y: u16, len: u64) -> (u64, bool) {
        let (mut xs, mut ys) = (x, y);
        for i in 0..len {
            self.lut.set(xs, ys);
            if !self.ddt.add_ddt_information(&self.lut, xs) {
                return (i + 1, false);
            }
            xs = self.ctx.a_img[xs as usize];
            ys = self.ctx.b_img[ys as usize];
        }
        (len, true)
    }

    fn undo_orbit(&mut self, x: u16, assigned: u64) {
        let mut xs = std::mem::take(&mut self.scratch);
        xs.clear();
        let mut cur = x;
        for _ in 0..assigned {
            xs.push(cur);
            cur = self.ctx.a_img[cur as usize];
        }
        for &c in xs.iter().rev() {
            self.ddt.remove_ddt_information(&self.lut, c);
            self.lut.clear(c);
        }
        self.scratch = xs;
    }

    fn check_limits(&mut self) -> bool {
        if let Some(c) = self.limits.cancel {
            if c.load(Ordering::Relaxed) {
                self.stop = Some(StopReason::Cancelled);
                return false;
            }
        }
        if self.limits.node_limit.is_some_and(|l| self.nodes >= l) {
            self.stop = Some(StopReason::NodeBudget);
            return false;
        }
        if self.nodes % 1024 == 0 {
            if let Some(d) = self.limits.deadline {
                if Instant::now() >= d {
                    self.stop = Some(StopReason::TimeBudget);
                    return false;
                }
            }
        }
        true
    }

    /// Applies a prefix of orbit choices. Returns `false` if some choice is
    /// not feasible.
    pub fn apply_prefix(&mut self, prefix: &[u16]) -> bool {
        let mut from = 0;
        for &y in prefix {
            let x = self.next_free(from);
            if x == self.lut.size() || self.lut.is_used(y) {
                return false;
            }
            let len = self.ctx.ord_a[x];
            let (k, ok) = self.assign_orbit(x as u16, y, len);
            if !ok {
                self.undo_orbit(x as u16, k);
                return false;
            }
            self.path.push(y);
            from = x + 1;
        }
        true
    }

    /// Runs the recursion below the current path. Returns `false` once a
    /// limit stops the run.
    pub fn run(&mut self) -> bool {
        let depth = self.path.len();
        let from = if depth == 0 { 0 } else { self.next_free(0) };
        self.next_val(depth, from, None)
    }

    /// Collects the feasible paths of length `depth`, applying the canonical
    /// check exactly as the full recursion would.
    pub fn collect_prefixes(&mut self, depth: usize) -> Vec<Vec<u16>> {
        let mut out = Vec::new();
        self.next_val(0, 0, Some((depth, &mut out)));
        out
    }

    fn next_val(&mut self, depth: usize, from: usize, mut collect: Option<(usize, &mut Vec<Vec<u16>>)>) -> bool {
        if let Some((target, ref mut out)) = collect {
            if depth == target {
                out.push(self.path.clone());
                return true;
            }
        }
        if !self.check_limits() {
            return false;
        }
        self.nodes += 1;
        self.max_depth = self.max_depth.max(depth);
        #[cfg(test)]
        assert!(self.orbits_consistent());
        if self.nodes % self.limits.checkpoint_interval == 0 {
            if let Some(cb) = self.limits.checkpoint.as_mut() {
                cb(&self.path, self.nodes, &self.solutions);
            }
        }
        let x = self.next_free(from);
        if x == self.lut.size() {
            if let Some((_, out)) = collect {
                out.push(self.path.clone());
                return true;
            }
            return self.emit();
        }
        let len = self.ctx.ord_a[x];
        let resume_target = if self.resuming && depth < self.resume.len() {
            Some(self.resume[depth])
        } else {
            self.resuming = false;
            None
        };
        let ctx = self.ctx;
        let count = match &self.order {
            Some(o) => o[x].len(),
            None => ctx.candidates_for(len).len(),
        };
        let mut skipping = resume_target.is_some();
        for idx in 0..count {
            let y = match &self.order {
                Some(o) => o[x][idx],
                None => ctx.candidates_for(len)[idx],
            };
            if skipping {
                if Some(y) != resume_target {
                    continue;
                }
                skipping = false;
            } else if resume_target.is_some() {
                self.resuming = false;
            }
            if self.lut.is_used(y) {
                continue;
            }
            let (k, ok) = self.assign_orbit(x as u16, y, len);
            let mut go_on = true;
            if ok && (depth as i64 > ctx.threshold as i64 || ctx.is_smallest_fast(&self.lut)) {
                self.path.push(y);
                let sub = collect.as_mut().map(|(t, o)| (*t, &mut **o));
                go_on = self.next_val(depth + 1, x + 1, sub);
                // a stopped run keeps the path of the node it stopped at
                if go_on {
                    self.path.pop();
                }
            }
            self.undo_orbit(x as u16, k);
            if !go_on {
                return false;
            }
        }
        self.resuming = false;
        true
    }

    #[cfg(test)]
    /// Whether `F(A x)` is undefined or equals `B F(x)` for every defined `x`.
    fn orbits_consistent(&self) -> bool {
        (0..self.lut.size() as u16).all(|x| match self.lut.get(x) {
            Some(y) => self
                .lut
                .get(self.ctx.a_img[x as usize])
                .is_none_or(|v| v == self.ctx.b_img[y as usize]),
            None => true,
        })
    }

    fn emit(&mut self) -> bool {
        let lut = self.lut.to_lut().expect("complete");
        if self.ctx.verify(&lut) {
            self.solutions.push(lut);
        } else {
            self.verification_failures += 1;
        }
        if self
            .limits
            .max_solutions
            .is_some_and(|m| self.solutions.len() >= m)
        {
            self.stop = Some(StopReason::SolutionLimit);
            return false;
        }
        true
    }

    /// Path at the point the run stopped; resuming from it revisits that node.
    pub fn path(&self) -> &[u16] {
        &self.path
    }

    pub fn into_report(self, started: Instant, exhaustive: bool) -> SearchReport {
        let stop = self.stop.unwrap_or(StopReason::Completed);
        SearchReport {
            solutions: self.solutions,
            nodes_visited: self.nodes,
            max_depth_reached: self.max_depth,
            elapsed: started.elapsed(),
            exhausted: exhaustive && stop == StopReason::Completed,
            stop,
            verification_failures: self.verification_failures,
        }
    }
}

/// Exhaustive (or randomized, per `cfg.mode`) search on a single thread.
pub fn dfs_search(t: &AutoTuple, cfg: &SearchConfig) -> Result<SearchReport> {
    let ctx = SearchContext::new(t, cfg)?;
    search_context(&ctx, cfg)
}

pub fn search_context(ctx: &SearchContext, cfg: &SearchConfig) -> Result<SearchReport> {
    if cfg.mode == SearchMode::Randomized {
        return random_search_context(ctx, cfg);
    }
    let started = Instant::now();
    let limits = Limits {
        deadline: cfg.time_budget.map(|d| started + d),
        node_limit: cfg.node_budget,
        max_solutions: cfg.max_solutions,
        checkpoint_interval: cfg.checkpoint_interval,
        ..Limits::default()
    };
    let mut engine = Engine::new(ctx, limits);
    if !engine.start_feasible() {
        return Ok(SearchReport {
            exhausted: true,
            ..SearchReport::empty(StopReason::Completed)
        });
    }
    engine.run();
    Ok(engine.into_report(started, true))
}

/// Repeated shuffled searches without canonical checks until the time or
/// node budget runs out. Solutions are deduplicated; `exhausted` is false.
pub fn random_search(t: &AutoTuple, cfg: &SearchConfig) -> Result<SearchReport> {
    let mut cfg = cfg.clone();
    cfg.mode = SearchMode::Randomized;
    cfg.threshold_t = -1;
    let ctx = SearchContext::new(t, &cfg)?;
    random_search_context(&ctx, &cfg)
}

pub(crate) fn random_search_context(ctx: &SearchContext, cfg: &SearchConfig) -> Result<SearchReport> {
    cfg.validate()?;
    let started = Instant::now();
    let budget = cfg.time_budget.unwrap_or(Duration::ZERO);
    if budget.is_zero() || cfg.node_budget == Some(0) {
        return Ok(SearchReport::empty(StopReason::TimeBudget));
    }
    let deadline = started + budget;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut seen = BTreeSet::new();
    let mut total = SearchReport::empty(StopReason::TimeBudget);
    // canonical checks are off in randomized mode
    let mut plain = ctx.clone();
    plain.threshold = -1;
    loop {
        let remaining_nodes = cfg.node_budget.map(|b| b - total.nodes_visited);
        let limits = Limits {
            deadline: Some(deadline),
            node_limit: Some(remaining_nodes.map_or(cfg.restart_nodes, |r| r.min(cfg.restart_nodes))),
            max_solutions: cfg.max_solutions.map(|m| m.saturating_sub(seen.len())),
            checkpoint_interval: u64::MAX,
            ..Limits::default()
        };
        let mut engine = Engine::new(&plain, limits);
        engine.shuffle(&mut rng);
        engine.run();
        let stop = engine.stop.unwrap_or(StopReason::Completed);
        total.nodes_visited += engine.nodes;
        total.max_depth_reached = total.max_depth_reached.max(engine.max_depth);
        total.verification_failures += engine.verification_failures;
        for s in engine.solutions {
            if seen.insert(s.table().to_vec()) {
                total.solutions.push(s);
            }
        }
        let out_of_nodes = cfg.node_budget.is_some_and(|b| total.nodes_visited >= b);
        match stop {
            StopReason::NodeBudget if !out_of_nodes => continue,
            StopReason::NodeBudget => total.stop = StopReason::NodeBudget,
            // a shuffled traversal finished the whole tree; restarting adds nothing
            other => total.stop = other,
        }
        break;
    }
    total.elapsed = started.elapsed();
    total.exhausted = false;
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::enumerate_classes;

    /// Tuple of `x -> x^3` on F_32 under multiplication by a generator.
    fn cube_tuple() -> AutoTuple {
        let f = FiniteField::with_default_modulus(5).unwrap();
        let g = f.generator();
        AutoTuple::new(&f.mult_matrix(f.pow(g, 3)), &f.mult_matrix(g)).unwrap()
    }

    fn quick(t: &AutoTuple, threshold: i32) -> SearchReport {
        let cfg = SearchConfig {
            threshold_t: threshold,
            ..SearchConfig::default()
        };
        dfs_search(t, &cfg).unwrap()
    }

    #[test]
    fn identity_subsets_never_prune() {
        let mut p = PartialLut::pinned(3).unwrap();
        p.set(1, 5);
        p.set(2, 3);
        let id = [Gf2Matrix::identity(3)];
        assert!(is_smallest(&p, &id, &id));
    }

    #[test]
    fn smaller_transform_is_detected() {
        let f = monomial_lut(&FiniteField::with_default_modulus(3).unwrap(), 3);
        let m = Gf2Matrix::from_rows(3, &[0b010, 0b001, 0b100]).unwrap();
        let g = f.linear_transform(&m, &Gf2Matrix::identity(3)).unwrap();
        let to_partial = |l: &Lut| {
            let mut p = PartialLut::new(3).unwrap();
            for x in 0..8 {
                p.set(x, l.get(x));
            }
            p
        };
        let (pf, pg) = (to_partial(&f), to_partial(&g));
        // g = f o m, f = g o m^{-1}
        let (small, big, c) = if g.table() < f.table() {
            (&pg, &pf, m)
        } else {
            (&pf, &pg, m.inverse().unwrap())
        };
        let id = [Gf2Matrix::identity(3)];
        assert!(!is_smallest(big, &[c], &id));
        assert!(is_smallest(small, &[Gf2Matrix::identity(3)], &id));
    }

    #[test]
    fn n4_tuples_have_no_solutions() {
        for t in enumerate_classes(4) {
            let r = quick(&t, -1);
            assert!(r.solutions.is_empty(), "class {}", t.class_id);
            assert!(r.exhausted);
        }
    }

    #[test]
    fn n3_solutions_verify_and_canonical_check_keeps_some() {
        for t in enumerate_classes(3) {
            let all = quick(&t, -1);
            let canon = quick(&t, 8);
            assert!(canon.solutions.len() <= all.solutions.len());
            assert_eq!(all.solutions.is_empty(), canon.solutions.is_empty());
            for s in &all.solutions {
                assert!(s.is_permutation() && is_apn(s));
                assert!(verify_le_automorphism(s, &t.a, &t.b).unwrap());
            }
        }
    }

    #[test]
    fn rejects_mismatched_orders() {
        let cfg = SearchConfig::default();
        let a = Gf2Matrix::companion("x^3+x+1".parse().unwrap()).unwrap();
        let b = Gf2Matrix::identity(1)
            .direct_sum(&Gf2Matrix::companion("x^2+x+1".parse().unwrap()).unwrap())
            .unwrap();
        assert!(matches!(
            SearchContext::for_matrices(&b, &a, &cfg, None),
            Err(Error::OrderMismatch { .. })
        ));
        let bad = SearchConfig {
            mode: SearchMode::Randomized,
            ..SearchConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn solution_limit_stops_early() {
        let t = cube_tuple();
        let cfg = SearchConfig {
            threshold_t: -1,
            max_solutions: Some(1),
            ..SearchConfig::default()
        };
        let r = dfs_search(&t, &cfg).unwrap();
        assert_eq!(r.solutions.len(), 1);
        assert_eq!(r.stop, StopReason::SolutionLimit);
        assert!(!r.exhausted);
    }

    #[test]
    fn random_search_budget_zero_and_reproducible() {
        let t = enumerate_classes(6)
            .into_iter()
            .find(|t| t.paper_class == Some(5))
            .unwrap();
        let zero = SearchConfig::randomized(Duration::ZERO, 1);
        let r = random_search(&t, &zero).unwrap();
        assert!(r.solutions.is_empty() && r.nodes_visited == 0 && !r.exhausted);
        let cfg = SearchConfig {
            node_budget: Some(5000),
            restart_nodes: 700,
            ..SearchConfig::randomized(Duration::from_secs(600), 42)
        };
        let r1 = random_search(&t, &cfg).unwrap();
        let r2 = random_search(&t, &cfg).unwrap();
        assert_eq!(r1.nodes_visited, 5000);
        assert_eq!(r1.stop, StopReason::NodeBudget);
        assert_eq!(r1.solutions, r2.solutions);
        assert!(!r1.exhausted);
        // a tree smaller than one restart ends the run early
        let tiny = random_search(&cube_tuple(), &cfg).unwrap();
        assert_eq!(tiny.stop, StopReason::Completed);
        assert!(!tiny.solutions.is_empty() && !tiny.exhausted);
    }

    #[test]
    fn seeding_rules() {
        let c = |s: &str| Gf2Matrix::companion(s.parse().unwrap()).unwrap();
        let block = c("x^2+1");
        let three = Gf2Matrix::block_diag(&[block, block, block]).unwrap();
        let t = AutoTuple::new(&three, &three).unwrap();
        let g3 = monomial_lut(&FiniteField::with_default_modulus(3).unwrap(), 3);
        let seed = seed_fixed_points(&t, &g3).unwrap();
        assert_eq!(seed.defined_count(), 8);
        for x in 0..64u16 {
            if let Some(y) = seed.get(x) {
                assert_eq!(three.apply(x), x);
                assert_eq!(three.apply(y), y);
            }
        }
        let free = enumerate_classes(6).into_iter().find(|t| t.paper_class == Some(5)).unwrap();
        assert_eq!(seed_fixed_points(&free, &g3).unwrap(), PartialLut::pinned(6).unwrap());
        let two = enumerate_classes(6).into_iter().find(|t| t.paper_class == Some(6)).unwrap();
        assert!(seed_fixed_points(&two, &Lut::identity(2)).is_err());
    }

    #[test]
    fn orbits_stay_consistent_at_every_node() {
        // test builds assert the invariant inside the traversal
        for t in enumerate_classes(4).iter().chain(&enumerate_classes(5)[4..5]) {
            let r = quick(t, -1);
            assert!(r.nodes_visited > 0);
        }
    }
}
