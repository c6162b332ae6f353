//! The `rainbow` command-line tool: counts, anti-van der Waerden numbers,
//! orbit decompositions, verification campaigns and timing, with an
//! append-only result cache.
//!
//! Exit codes: 0 success, 1 i/o error, 2 invalid arguments, 3 node budget
//! exceeded, 4 failed verification, 5 cache integrity error.

pub mod args;
pub mod cache;
pub mod error;
pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::time::{Duration, Instant};

use clap::Parser;

use rainbow_core::formulas::closed_form_count;
use rainbow_core::orbits::orbit_decompose;
use rainbow_core::search::{compute_aw, count_exact_color, count_rainbow_free, AwResult};
use rainbow_core::{CountReport, Method, SearchConfig, Structure, StructureKind};

use crate::args::{AwArgs, BenchArgs, Cli, Command, CountArgs, Format, MethodArg, OrbitsArgs, StructureArgs, VerifyArgs};
use crate::cache::Cache;
use crate::error::{CliError, CliResult, EXIT_OK, EXIT_PARSE};
use crate::output::{AwOutput, BenchRun, CountOutput};
use crate::verify::Check;

pub fn build_structure(a: &StructureArgs) -> CliResult<Structure> {
    let (kind, n) = match (a.interval, a.cyclic) {
        (Some(n), None) => (StructureKind::Interval, n),
        (None, Some(n)) => (StructureKind::Cyclic, n),
        _ => return Err(CliError::Usage("give exactly one of --interval and --cyclic".into())),
    };
    let s = match (&a.elements, &a.minus) {
        (Some(e), _) => Structure::with_support(kind, n, e)?,
        (None, Some(m)) => Structure::without(kind, n, m)?,
        (None, None) => match kind {
            StructureKind::Interval => Structure::interval(n),
            StructureKind::Cyclic => Structure::cyclic(n)?,
        },
    };
    Ok(s)
}

/// Cache key of a count: structure, colors, progression length and, for
/// exact-color counts, the number of colors used.
pub fn count_key(s: &Structure, r: usize, k: usize, exact: Option<usize>) -> String {
    match exact {
        Some(e) => format!("{}/r={r}/k={k}/exact={e}", s.key()),
        None => format!("{}/r={r}/k={k}", s.key()),
    }
}

pub fn aw_key(s: &Structure, k: usize) -> String {
    format!("aw/{}/k={k}", s.key())
}

struct Context {
    cfg: SearchConfig,
    format: Format,
    cache: Option<Cache>,
    recompute: bool,
}

impl Context {
    fn cached(&self, key: &str) -> Option<(String, String)> {
        if self.recompute {
            return None;
        }
        self.cache.as_ref()?.get(key).map(|r| (r.count.clone(), r.method.clone()))
    }

    fn remember(&mut self, key: &str, count: &str, method: &str) -> CliResult<()> {
        match self.cache.as_mut() {
            Some(c) => c.store(key, count, method),
            None => Ok(()),
        }
    }
}

fn parse_count(text: &str) -> CliResult<num_bigint::BigUint> {
    text.parse().map_err(|_| CliError::Cache(format!("count {text:?} is not a decimal integer")))
}

fn compute_count(a: &CountArgs, s: &Structure, cfg: &SearchConfig) -> CliResult<CountReport> {
    let (r, k) = (a.r as usize, a.k as usize);
    let method = match a.method {
        MethodArg::Dfs => Method::ExhaustiveDfs,
        MethodArg::Symmetric => Method::SymmetryReduced,
        MethodArg::Formula => {
            if a.exact.is_some() {
                return Err(CliError::Usage("--exact is not available with --method formula".into()));
            }
            return Ok(closed_form_count(s, r, k)?);
        }
    };
    Ok(match a.exact {
        Some(e) => count_exact_color(s, r, e as usize, k, method, cfg)?,
        None => count_rainbow_free(s, r, k, method, cfg)?,
    })
}

fn cmd_count(a: &CountArgs, ctx: &mut Context) -> CliResult<String> {
    let s = build_structure(&a.structure)?;
    let (r, k, exact) = (a.r as usize, a.k as usize, a.exact.map(|e| e as usize));
    let key = count_key(&s, r, k, exact);
    if let Some((count, method)) = ctx.cached(&key) {
        let report = CountReport {
            structure: s.key(),
            r,
            k,
            exact,
            count: parse_count(&count)?,
            by_colors_used: Vec::new(),
            method: Method::ExhaustiveDfs,
            elapsed: Duration::ZERO,
            nodes: 0,
            leaves: 0,
        };
        return Ok(CountOutput { key, report, cached_from: Some(method) }.render(ctx.format));
    }
    let report = compute_count(a, &s, &ctx.cfg)?;
    ctx.remember(&key, &report.count.to_string(), report.method.name())?;
    Ok(CountOutput { key, report, cached_from: None }.render(ctx.format))
}

fn cmd_aw(a: &AwArgs, ctx: &mut Context) -> CliResult<String> {
    let s = build_structure(&a.structure)?;
    let k = a.k as usize;
    let key = aw_key(&s, k);
    if let Some((value, method)) = ctx.cached(&key) {
        let value = value.parse().map_err(|_| CliError::Cache(format!("aw value {value:?} out of range")))?;
        let result = AwResult { structure: s.key(), k, value, witness: None };
        return Ok(AwOutput { key, result, cached_from: Some(method), elapsed: Duration::ZERO }.render(ctx.format));
    }
    let start = Instant::now();
    let result = compute_aw(&s, k, &ctx.cfg)?;
    let elapsed = start.elapsed();
    ctx.remember(&key, &result.value.to_string(), "search")?;
    Ok(AwOutput { key, result, cached_from: None, elapsed }.render(ctx.format))
}

fn cmd_orbits(a: &OrbitsArgs, ctx: &Context) -> CliResult<String> {
    let start = Instant::now();
    let d = orbit_decompose(a.p)?;
    Ok(output::orbits(&d, start.elapsed(), ctx.format))
}

const DEFAULT_PAIRS: [(u64, u64); 4] = [(1, 3), (1, 5), (2, 3), (3, 3)];

/// Runs the selected campaigns. Returns the rendered report and the number of
/// failed checks.
fn cmd_verify(a: &VerifyArgs, ctx: &Context) -> CliResult<(String, usize)> {
    let start = Instant::now();
    let cfg = &ctx.cfg;
    let on = |flag: bool| flag || a.all;
    let rs = |default: &[usize]| a.r.clone().unwrap_or_else(|| default.to_vec());
    let mut checks: Vec<Check> = Vec::new();
    let mut any = false;
    if on(a.prime_formula) {
        any = true;
        checks.extend(verify::prime_formula(a.max_p.unwrap_or(13), &rs(&[3]), cfg)?);
    }
    if on(a.aw_characterization) {
        any = true;
        checks.extend(verify::aw_characterization(a.max_n.unwrap_or(20), cfg)?);
    }
    if on(a.aw_prime_range) {
        any = true;
        checks.extend(verify::aw_prime_range(a.max_p.unwrap_or(19), cfg)?);
    }
    if on(a.cyclic_lower_bound) {
        any = true;
        checks.extend(verify::cyclic_lower_bound(a.max_n.unwrap_or(20), cfg)?);
    }
    if on(a.product_bound) {
        any = true;
        let pairs = if a.pairs.is_empty() { DEFAULT_PAIRS.to_vec() } else { a.pairs.clone() };
        checks.extend(verify::product_bound(&pairs, cfg)?);
    }
    if on(a.subset_monotonicity) {
        any = true;
        checks.extend(verify::subset_monotonicity(a.max_n.unwrap_or(10), cfg)?);
    }
    if on(a.three_color_share) {
        any = true;
        let top = a.max_n.unwrap_or(14);
        if top < 11 {
            return Err(CliError::Usage("three-color share needs max-n >= 11".into()));
        }
        checks.extend(verify::two_color_share(10..=top, 0.02, cfg)?);
    }
    if on(a.hypergraph) {
        any = true;
        let top = a.max_n.unwrap_or(40);
        if top < 7 {
            return Err(CliError::Usage("hypergraph campaign needs max-n >= 7".into()));
        }
        checks.extend(verify::hypergraph(7..=top, &rs(&[3, 4, 5]))?);
    }
    if on(a.pair_bounds) {
        any = true;
        checks.extend(verify::pair_bounds(a.samples, a.seed, a.max_n.unwrap_or(60))?);
    }
    if on(a.orbit_invariants) {
        any = true;
        checks.extend(verify::orbit_invariants(a.max_p.unwrap_or(2000), 3..=8)?);
    }
    if !any {
        return Err(CliError::Usage("select at least one campaign (see `rainbow verify --help`)".into()));
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    Ok((output::checks(&checks, start.elapsed(), ctx.format), failed))
}

fn cmd_bench(a: &BenchArgs, ctx: &Context) -> CliResult<String> {
    let s = build_structure(&a.structure)?;
    let (r, k) = (a.r as usize, a.k as usize);
    let mut runs = Vec::new();
    for method in [Method::ExhaustiveDfs, Method::SymmetryReduced] {
        let mut run = BenchRun { method: method.name(), count: String::new(), nodes: 0, times: Vec::new() };
        for _ in 0..a.repeat {
            let rep = count_rainbow_free(&s, r, k, method, &ctx.cfg)?;
            run.count = rep.count.to_string();
            run.nodes = rep.nodes;
            run.times.push(rep.elapsed);
        }
        runs.push(run);
    }
    if let Ok(rep) = closed_form_count(&s, r, k) {
        runs.push(BenchRun { method: "formula", count: rep.count.to_string(), nodes: 0, times: vec![rep.elapsed] });
    }
    Ok(output::bench(&count_key(&s, r, k, None), ctx.cfg.workers as u64, &runs, ctx.format))
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    let cache = cli.cache.as_deref().map(Cache::open).transpose()?;
    let mut ctx = Context {
        cfg: SearchConfig { budget: cli.budget, workers: cli.workers as usize },
        format: cli.format,
        cache,
        recompute: cli.recompute,
    };
    let text = match &cli.command {
        Command::Count(a) => cmd_count(a, &mut ctx)?,
        Command::Aw(a) => cmd_aw(a, &mut ctx)?,
        Command::Orbits(a) => cmd_orbits(a, &ctx)?,
        Command::Bench(a) => cmd_bench(a, &ctx)?,
        Command::Verify(a) => {
            let (text, failed) = cmd_verify(a, &ctx)?;
            out.write_all(text.as_bytes())?;
            if failed > 0 {
                return Err(CliError::Verification(failed));
            }
            return Ok(());
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
