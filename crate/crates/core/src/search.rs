//! Exhaustive counting of rainbow-free colorings.
//!
//! Elements are colored one at a time in a fixed order. After coloring the
//! element at position `i` only the progressions whose last element (in that
//! order) sits at `i` are checked, so every progression is tested exactly once
//! along any root-to-leaf path.
//!
//! The tree can be cut at some depth into independent subtrees. Each subtree
//! produces per-color-count leaf tallies and a node count; these are summed,
//! so counts and statistics do not depend on how the tree was cut or on the
//! number of workers.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::Ratio;
use rayon::prelude::*;

use crate::colorings::{Color, Coloring};
use crate::error::{Error, Result};
use crate::numbers::{is_prime, list_kaps, Structure, StructureKind};
use crate::orbits::orbit_assignment_order;

pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000_000;
pub const MAX_COLORS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ExhaustiveDfs,
    SymmetryReduced,
    Formula,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ExhaustiveDfs => "dfs",
            Method::SymmetryReduced => "symmetric",
            Method::Formula => "formula",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Upper limit on attempted assignments, summed over all subtrees.
    pub budget: u64,
    pub workers: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: DEFAULT_NODE_BUDGET, workers: 1 }
    }
}

impl SearchConfig {
    pub fn with_workers(workers: usize) -> Self {
        SearchConfig { workers, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub structure: String,
    pub r: usize,
    pub k: usize,
    /// `Some(s)` for counts restricted to colorings onto a fixed `s`-set.
    pub exact: Option<usize>,
    pub count: BigUint,
    /// Entry `s` counts the colorings that use exactly `s` colors. Empty for
    /// closed-form results.
    pub by_colors_used: Vec<BigUint>,
    pub method: Method,
    pub elapsed: Duration,
    pub nodes: u64,
    pub leaves: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AwResult {
    pub structure: String,
    pub k: usize,
    pub value: usize,
    /// A rainbow-free exact `(value - 1)`-coloring.
    pub witness: Option<Coloring>,
}

/// Static part of a search: assignment order and the progressions to check at
/// each position.
struct Plan {
    len: usize,
    k: usize,
    /// `support_slot[pos]` is the support index of the element at `pos`.
    support_slot: Vec<usize>,
    starts: Vec<usize>,
    others: Vec<u16>,
}

fn assignment_order(s: &Structure) -> Vec<usize> {
    if s.kind() == StructureKind::Cyclic && s.is_full() && s.n() > 2 && is_prime(s.n() as u64) {
        if let Ok(order) = orbit_assignment_order(s.n() as u64) {
            return order;
        }
    }
    s.support().to_vec()
}

impl Plan {
    fn new(s: &Structure, k: usize) -> Self {
        let order = assignment_order(s);
        let len = order.len();
        let mut pos_of = vec![usize::MAX; s.n() + 1];
        for (p, &x) in order.iter().enumerate() {
            pos_of[x] = p;
        }
        let mut per_pos: Vec<Vec<u16>> = vec![Vec::new(); len];
        for ap in list_kaps(s, k) {
            let mut positions: Vec<usize> = ap.elements.iter().map(|&x| pos_of[x]).collect();
            positions.sort_unstable();
            let last = positions.pop().expect("k >= 2");
            per_pos[last].extend(positions.iter().map(|&p| p as u16));
        }
        let mut starts = Vec::with_capacity(len + 1);
        let mut others = Vec::new();
        for bucket in per_pos {
            starts.push(others.len());
            others.extend(bucket);
        }
        starts.push(others.len());
        let support_slot = order.iter().map(|&x| s.index_of(x).expect("order covers support")).collect();
        Plan { len, k, support_slot, starts, others }
    }

    #[inline]
    fn rainbow_at(&self, pos: usize, x: Color, colors: &[Color]) -> bool {
        let checks = &self.others[self.starts[pos]..self.starts[pos + 1]];
        if self.k == 3 {
            checks.chunks_exact(2).any(|pair| {
                let a = colors[pair[0] as usize];
                let b = colors[pair[1] as usize];
                a != b && a != x && b != x
            })
        } else {
            checks.chunks_exact(self.k - 1).any(|rest| {
                let mask = rest.iter().fold(1u32 << x, |m, &p| m | 1 << colors[p as usize]);
                mask.count_ones() as usize == self.k
            })
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Mode {
    /// Colors available: `0..palette`.
    palette: usize,
    /// Only colorings whose colors first appear in the order 0, 1, 2, ...
    canonical: bool,
    /// Only colorings that use every available color.
    exact: bool,
}

enum Halt {
    Budget,
    Stopped,
}

const FLUSH_EVERY: u64 = 1 << 16;

struct Meter<'a> {
    nodes: u64,
    unflushed: u64,
    shared: &'a AtomicU64,
    budget: u64,
}

impl<'a> Meter<'a> {
    fn new(shared: &'a AtomicU64, budget: u64) -> Self {
        Meter { nodes: 0, unflushed: 0, shared, budget }
    }

    #[inline]
    fn tick(&mut self) -> std::result::Result<(), Halt> {
        self.nodes += 1;
        self.unflushed += 1;
        if self.unflushed >= FLUSH_EVERY {
            return self.flush();
        }
        Ok(())
    }

    fn flush(&mut self) -> std::result::Result<(), Halt> {
        let total = self.shared.fetch_add(self.unflushed, Ordering::Relaxed) + self.unflushed;
        self.unflushed = 0;
        if total > self.budget {
            Err(Halt::Budget)
        } else {
            Ok(())
        }
    }
}

/// Depth-first extension of `colors[..pos]` up to position `stop`, calling
/// `on_leaf` with the prefix and its color mask at each surviving node of
/// depth `stop`.
#[allow(clippy::too_many_arguments)]
fn dfs<F>(
    plan: &Plan,
    mode: Mode,
    pos: usize,
    stop: usize,
    colors: &mut [Color],
    mask: u32,
    meter: &mut Meter<'_>,
    on_leaf: &mut F,
) -> std::result::Result<(), Halt>
where
    F: FnMut(&[Color], u32) -> ControlFlow<()>,
{
    if pos == stop {
        return match on_leaf(&colors[..pos], mask) {
            ControlFlow::Continue(()) => Ok(()),
            ControlFlow::Break(()) => Err(Halt::Stopped),
        };
    }
    let used = mask.count_ones() as usize;
    let hi = if mode.canonical { (used + 1).min(mode.palette) } else { mode.palette };
    let remaining_after = plan.len - pos - 1;
    for x in 0..hi as Color {
        meter.tick()?;
        let next = mask | 1 << x;
        if mode.exact && mode.palette - next.count_ones() as usize > remaining_after {
            continue;
        }
        if plan.rainbow_at(pos, x, colors) {
            continue;
        }
        colors[pos] = x;
        dfs(plan, mode, pos + 1, stop, colors, next, meter, on_leaf)?;
    }
    Ok(())
}

struct Prefix {
    colors: Vec<Color>,
    mask: u32,
}

/// Cuts the tree into subtrees: level by level until there are enough
/// prefixes to keep `workers` threads busy. A single worker gets the root.
fn split(plan: &Plan, mode: Mode, workers: usize, meter: &mut Meter<'_>) -> std::result::Result<(usize, Vec<Prefix>), Halt> {
    let mut prefixes = vec![Prefix { colors: Vec::new(), mask: 0 }];
    let mut depth = 0;
    let target = if workers <= 1 { 1 } else { 64 * workers };
    let mut scratch = vec![0 as Color; plan.len];
    while prefixes.len() < target && depth < plan.len {
        let mut next = Vec::new();
        for p in &prefixes {
            scratch[..depth].copy_from_slice(&p.colors);
            dfs(plan, mode, depth, depth + 1, &mut scratch, p.mask, meter, &mut |c, m| {
                next.push(Prefix { colors: c.to_vec(), mask: m });
                ControlFlow::Continue(())
            })?;
        }
        prefixes = next;
        depth += 1;
    }
    Ok((depth, prefixes))
}

#[derive(Clone)]
struct Tally {
    buckets: Vec<u64>,
    nodes: u64,
}

impl Tally {
    fn zero(palette: usize) -> Self {
        Tally { buckets: vec![0; palette + 1], nodes: 0 }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.buckets.iter_mut().zip(other.buckets) {
            *a += b;
        }
        self.nodes += other.nodes;
        self
    }
}

fn with_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(job))
}

fn budget_error(budget: u64) -> Error {
    Error::BudgetExceeded { budget }
}

/// Leaf tallies by number of colors used, plus the total node count.
fn run_count(plan: &Plan, mode: Mode, cfg: &SearchConfig) -> Result<Tally> {
    let shared = AtomicU64::new(0);
    let mut meter = Meter::new(&shared, cfg.budget);
    let (depth, prefixes) = split(plan, mode, cfg.workers, &mut meter).map_err(|_| budget_error(cfg.budget))?;
    let _ = meter.flush();
    let split_nodes = meter.nodes;

    let subtree = |p: &Prefix| -> Result<Tally> {
        let mut colors = vec![0 as Color; plan.len];
        colors[..depth].copy_from_slice(&p.colors);
        let mut meter = Meter::new(&shared, cfg.budget);
        let mut tally = Tally::zero(mode.palette);
        let res = dfs(plan, mode, depth, plan.len, &mut colors, p.mask, &mut meter, &mut |_, m| {
            tally.buckets[m.count_ones() as usize] += 1;
            ControlFlow::Continue(())
        });
        if res.is_err() {
            return Err(budget_error(cfg.budget));
        }
        let _ = meter.flush();
        tally.nodes = meter.nodes;
        Ok(tally)
    };

    let total = if cfg.workers <= 1 {
        prefixes.iter().map(subtree).try_fold(Tally::zero(mode.palette), |acc, t| t.map(|t| acc.merge(t)))?
    } else {
        with_pool(cfg.workers, || {
            prefixes
                .par_iter()
                .map(subtree)
                .try_reduce(|| Tally::zero(mode.palette), |a, b| Ok(a.merge(b)))
        })??
    };
    let total = Tally { nodes: total.nodes + split_nodes, ..total };
    if total.nodes > cfg.budget {
        return Err(budget_error(cfg.budget));
    }
    Ok(total)
}

fn validate(s: &Structure, r: usize, k: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("progression length k={k} must be at least 3")));
    }
    if r == 0 || r > MAX_COLORS {
        return Err(Error::InvalidParameter(format!("r={r} must lie in [1, {MAX_COLORS}]")));
    }
    if s.len() > u16::MAX as usize {
        return Err(Error::InvalidParameter("support too large".into()));
    }
    Ok(())
}

fn falling_factorial(r: usize, s: usize) -> BigUint {
    (0..s).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(r - i))
}

/// Number of `r`-colorings of the support with no rainbow `k`-AP.
pub fn count_rainbow_free(s: &Structure, r: usize, k: usize, method: Method, cfg: &SearchConfig) -> Result<CountReport> {
    validate(s, r, k)?;
    let start = Instant::now();
    let plan = Plan::new(s, k);
    let canonical = match method {
        Method::ExhaustiveDfs => false,
        Method::SymmetryReduced => true,
        Method::Formula => {
            return Err(Error::InvalidParameter("closed forms live in the formulas module".into()))
        }
    };
    let mode = Mode { palette: r, canonical, exact: false };
    let tally = run_count(&plan, mode, cfg)?;
    let by_colors_used: Vec<BigUint> = tally
        .buckets
        .iter()
        .enumerate()
        .map(|(used, &b)| if canonical { BigUint::from(b) * falling_factorial(r, used) } else { BigUint::from(b) })
        .collect();
    Ok(CountReport {
        structure: s.key(),
        r,
        k,
        exact: None,
        count: by_colors_used.iter().sum(),
        by_colors_used,
        method,
        elapsed: start.elapsed(),
        nodes: tally.nodes,
        leaves: tally.buckets.iter().sum(),
    })
}

/// Number of colorings of the support onto one fixed set of `s_colors`
/// colors (surjective) with no rainbow `k`-AP.
pub fn count_exact_color(
    s: &Structure,
    r: usize,
    s_colors: usize,
    k: usize,
    method: Method,
    cfg: &SearchConfig,
) -> Result<CountReport> {
    validate(s, r, k)?;
    if s_colors == 0 || s_colors > r {
        return Err(Error::InvalidParameter(format!("exact color count {s_colors} must lie in [1, r={r}]")));
    }
    let start = Instant::now();
    let plan = Plan::new(s, k);
    let canonical = match method {
        Method::ExhaustiveDfs => false,
        Method::SymmetryReduced => true,
        Method::Formula => {
            return Err(Error::InvalidParameter("closed forms live in the formulas module".into()))
        }
    };
    let mode = Mode { palette: s_colors, canonical, exact: true };
    let tally = run_count(&plan, mode, cfg)?;
    let raw = BigUint::from(tally.buckets[s_colors]);
    let count = if canonical { raw * falling_factorial(s_colors, s_colors) } else { raw };
    let mut by_colors_used = vec![BigUint::default(); s_colors + 1];
    by_colors_used[s_colors] = count.clone();
    Ok(CountReport {
        structure: s.key(),
        r,
        k,
        exact: Some(s_colors),
        count,
        by_colors_used,
        method,
        elapsed: start.elapsed(),
        nodes: tally.nodes,
        leaves: tally.buckets.iter().sum(),
    })
}

/// Options for [`enumerate_rainbow_free`].
#[derive(Debug, Clone, Copy)]
pub struct Enumeration {
    /// Only surjective colorings.
    pub exact: bool,
    /// One coloring per color permutation class (first occurrences in order).
    pub canonical: bool,
    pub budget: u64,
}

/// Visits rainbow-free `r`-colorings one by one, sequentially, in
/// lexicographic order of the assignment sequence. Returns the node count.
pub fn enumerate_rainbow_free<F>(s: &Structure, r: usize, k: usize, opts: Enumeration, mut visit: F) -> Result<u64>
where
    F: FnMut(&Coloring) -> ControlFlow<()>,
{
    validate(s, r, k)?;
    let plan = Plan::new(s, k);
    let mode = Mode { palette: r, canonical: opts.canonical, exact: opts.exact };
    let shared = AtomicU64::new(0);
    let mut meter = Meter::new(&shared, opts.budget);
    let mut colors = vec![0 as Color; plan.len];
    let mut current = Coloring::from_parts_unchecked(s.clone(), r, vec![1; s.len()]);
    let res = dfs(&plan, mode, 0, plan.len, &mut colors, 0, &mut meter, &mut |c, _| {
        let out = current.colors_mut();
        for (pos, &x) in c.iter().enumerate() {
            out[plan.support_slot[pos]] = x + 1;
        }
        visit(&current)
    });
    match res {
        Err(Halt::Budget) => Err(budget_error(opts.budget)),
        _ => {
            if meter.nodes > opts.budget {
                return Err(budget_error(opts.budget));
            }
            Ok(meter.nodes)
        }
    }
}

/// The first (in assignment order) canonical rainbow-free coloring using
/// exactly `r` colors, if any.
pub fn find_rainbow_free_exact(s: &Structure, r: usize, k: usize, cfg: &SearchConfig) -> Result<Option<Coloring>> {
    validate(s, r, k)?;
    if r > s.len() {
        return Ok(None);
    }
    let plan = Plan::new(s, k);
    let mode = Mode { palette: r, canonical: true, exact: true };
    let shared = AtomicU64::new(0);
    let mut meter = Meter::new(&shared, cfg.budget);
    let (depth, prefixes) = split(&plan, mode, cfg.workers, &mut meter).map_err(|_| budget_error(cfg.budget))?;
    let _ = meter.flush();

    let subtree = |p: &Prefix| -> Option<Result<Vec<Color>>> {
        let mut colors = vec![0 as Color; plan.len];
        colors[..depth].copy_from_slice(&p.colors);
        let mut meter = Meter::new(&shared, cfg.budget);
        let mut found = None;
        let res = dfs(&plan, mode, depth, plan.len, &mut colors, p.mask, &mut meter, &mut |c, _| {
            found = Some(c.to_vec());
            ControlFlow::Break(())
        });
        let _ = meter.flush();
        match (res, found) {
            (_, Some(c)) => Some(Ok(c)),
            (Err(Halt::Budget), None) => Some(Err(budget_error(cfg.budget))),
            _ => None,
        }
    };

    let first = if cfg.workers <= 1 {
        prefixes.iter().find_map(subtree)
    } else {
        with_pool(cfg.workers, || prefixes.par_iter().find_map_first(subtree))?
    };
    match first {
        None => {
            if shared.load(Ordering::Relaxed) > cfg.budget {
                return Err(budget_error(cfg.budget));
            }
            Ok(None)
        }
        Some(Err(e)) => Err(e),
        Some(Ok(by_pos)) => {
            let mut colors = vec![0 as Color; s.len()];
            for (pos, &x) in by_pos.iter().enumerate() {
                colors[plan.support_slot[pos]] = x + 1;
            }
            Ok(Some(Coloring::new(s.clone(), r, colors)?))
        }
    }
}

/// Anti-van der Waerden number: the least `r` for which every exact
/// `r`-coloring contains a rainbow `k`-AP. The search climbs from `r = k - 1`.
pub fn compute_aw(s: &Structure, k: usize, cfg: &SearchConfig) -> Result<AwResult> {
    validate(s, k, k)?;
    if list_kaps(s, k).is_empty() {
        return Err(Error::UndefinedAw(s.key(), k));
    }
    let mut witness = None;
    let mut r = k - 1;
    loop {
        if r > MAX_COLORS {
            return Err(Error::InvalidParameter(format!("aw search exceeded {MAX_COLORS} colors")));
        }
        match find_rainbow_free_exact(s, r, k, cfg)? {
            Some(c) => {
                witness = Some(c);
                r += 1;
            }
            None => return Ok(AwResult { structure: s.key(), k, value: r, witness }),
        }
    }
}

fn interval_set(n: usize, elements: &[usize], what: &str) -> Result<Structure> {
    Structure::with_support(StructureKind::Interval, n, elements)
        .map_err(|e| Error::Precondition(format!("{what}: {e}")))
}

/// Whether `{x, y}` (`x < y`) lies in some 3-AP of `A`.
fn pair_in_ap(a: &Structure, x: usize, y: usize) -> bool {
    (2 * x > y && a.contains(2 * x - y)) || a.contains(2 * y - x) || ((x + y).is_multiple_of(2) && a.contains((x + y) / 2))
}

/// Pairs `a < b` in `I` such that `{a, b}` lies in no 3-AP of `A`.
pub fn prop10_pair_count(i: &[usize], a: &[usize], n: usize) -> Result<u64> {
    let i_set = interval_set(n, i, "I")?;
    let a_set = interval_set(n, a, "A")?;
    if let Some(x) = i_set.support().iter().find(|&&x| !a_set.contains(x)) {
        return Err(Error::Precondition(format!("I is not contained in A ({x})")));
    }
    let elems = i_set.support();
    let mut count = 0;
    for (idx, &x) in elems.iter().enumerate() {
        for &y in &elems[idx + 1..] {
            if !pair_in_ap(&a_set, x, y) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `|I|^2/4 + |I|(n - |A|)/2`.
pub fn prop10_bound(i_len: usize, a_len: usize, n: usize) -> Ratio<i64> {
    let i = i_len as i64;
    Ratio::new(i * i, 4) + Ratio::new(i * (n as i64 - a_len as i64), 2)
}

/// Pairs `(a, b)` with `a` in `I1`, `b` in `I2` such that `{a, b}` lies in some
/// 3-AP of `A`.
pub fn prop11_pair_count(i1: &[usize], i2: &[usize], a: &[usize], n: usize) -> Result<u64> {
    let s1 = interval_set(n, i1, "I1")?;
    let s2 = interval_set(n, i2, "I2")?;
    let a_set = interval_set(n, a, "A")?;
    if let Some(x) = s1.support().iter().find(|&&x| s2.contains(x)) {
        return Err(Error::Precondition(format!("I1 and I2 share {x}")));
    }
    if let Some(x) = s1.support().iter().chain(s2.support()).find(|&&x| !a_set.contains(x)) {
        return Err(Error::Precondition(format!("I1 and I2 are not contained in A ({x})")));
    }
    if s1.len() > s2.len() {
        return Err(Error::Precondition(format!("|I1| = {} exceeds |I2| = {}", s1.len(), s2.len())));
    }
    let mut count = 0;
    for &x in s1.support() {
        for &y in s2.support() {
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            if pair_in_ap(&a_set, lo, hi) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `|I1||I2|/9 - 3|I1|(n - |A|)`.
pub fn prop11_bound(i1_len: usize, i2_len: usize, a_len: usize, n: usize) -> Ratio<i64> {
    let (i1, i2) = (i1_len as i64, i2_len as i64);
    Ratio::new(i1 * i2, 9) - Ratio::from_integer(3 * i1 * (n as i64 - a_len as i64))
}

/// `|I| >= 73n/74`.
pub fn prop11_hypothesis(i_len: usize, n: usize) -> bool {
    74 * i_len >= 73 * n
}
