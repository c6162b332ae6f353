//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde_json::Value;

use rainbow_cli::verify::{self, Check};
use rainbow_core::formulas::thm5_exact_zp;
use rainbow_core::search::count_rainbow_free;
use rainbow_core::{Method, SearchConfig, Structure};

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    note: String,
}

fn from_checks(checks: &[Check], elapsed: Duration, limit: Duration) -> Outcome {
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
    let mut note = format!("{} checks, {} failed, {:.1}s (limit {}s)", checks.len(), failed.len(), elapsed.as_secs_f64(), limit.as_secs());
    for c in failed.iter().take(3) {
        note.push_str(&format!("\n    {} {}: expected {}, got {}", c.campaign, c.case, c.expected, c.actual));
        if let Some(d) = &c.detail {
            note.push_str(&format!(" [{d}]"));
        }
    }
    Outcome { pass: failed.is_empty() && !checks.is_empty() && elapsed <= limit, note }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn campaign(limit_secs: u64, f: impl FnOnce() -> Result<Vec<Check>, rainbow_cli::error::CliError>) -> Outcome {
    let (res, elapsed) = timed(f);
    match res {
        Ok(checks) => from_checks(&checks, elapsed, Duration::from_secs(limit_secs)),
        Err(e) => Outcome { pass: false, note: format!("error: {e}") },
    }
}

fn prime_formula_exactness() -> Outcome {
    let cfg = SearchConfig::default();
    let (small, elapsed) = timed(|| -> Result<Vec<Check>, rainbow_cli::error::CliError> {
        let mut checks = verify::prime_formula(13, &[3], &cfg)?;
        checks.extend(verify::prime_formula(11, &[4], &cfg)?);
        Ok(checks)
    });
    let small = match small {
        Ok(c) => from_checks(&c, elapsed, Duration::from_secs(60)),
        Err(e) => return Outcome { pass: false, note: format!("error: {e}") },
    };
    let (z17, elapsed17) = timed(|| count_rainbow_free(&Structure::cyclic(17).unwrap(), 3, 3, Method::ExhaustiveDfs, &cfg));
    let formula = thm5_exact_zp(3, 17).unwrap().value.to_integer();
    let big_ok = match &z17 {
        Ok(rep) => {
            rep.count == BigUint::from(393_315u32)
                && formula == 393_315.into()
                && elapsed17 <= Duration::from_secs(30 * 60)
        }
        Err(_) => false,
    };
    let z17_note = match z17 {
        Ok(rep) => format!("Z_17 r=3: {} (formula {formula}) in {:.1}s, {} nodes", rep.count, elapsed17.as_secs_f64(), rep.nodes),
        Err(e) => format!("Z_17 r=3: {e}"),
    };
    Outcome { pass: small.pass && big_ok, note: format!("{}; {z17_note}", small.note) }
}

fn lemma_and_prime_range() -> Outcome {
    let cfg = SearchConfig::default();
    campaign(600, || {
        let mut checks = verify::aw_characterization(20, &cfg)?;
        checks.extend(verify::aw_prime_range(19, &cfg)?);
        Ok(checks)
    })
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("elapsed_ms");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn run_json(args: &[String], workers: u32) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_rainbow"))
        .args(args)
        .args(["--workers", &workers.to_string(), "--format", "json"])
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.code() != Some(0) {
        return Err(format!("{args:?} exited with {:?}", out.status.code()));
    }
    let mut v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    strip_timing(&mut v);
    Ok(v.to_string())
}

fn determinism() -> Outcome {
    let split = |s: &str| s.split(' ').map(String::from).collect::<Vec<_>>();
    let mut jobs: Vec<Vec<String>> = vec![
        split("verify --prime-formula --max-p 13 -r 3"),
        split("verify --prime-formula --max-p 11 -r 4"),
        split("count --cyclic 17 -r 3"),
        split("verify --cyclic-lower-bound --max-n 20"),
        split("verify --aw-characterization --max-n 20"),
        split("verify --aw-prime-range --max-p 19"),
        split("verify --product-bound --pairs 1,3 1,5 2,3 3,3"),
    ];
    for n in 3..=20 {
        jobs.push(split(&format!("aw --cyclic {n}")));
        jobs.push(split(&format!("count --cyclic {n} -r 3 --method symmetric")));
    }
    let mut mismatches = Vec::new();
    for job in &jobs {
        match (run_json(job, 1), run_json(job, 8)) {
            (Ok(a), Ok(b)) if a == b => {}
            (Ok(_), Ok(_)) => mismatches.push(format!("{}: output differs", job.join(" "))),
            (Err(e), _) | (_, Err(e)) => mismatches.push(e),
        }
    }
    Outcome {
        pass: mismatches.is_empty(),
        note: format!("{} jobs at 1 and 8 workers, {} differ{}", jobs.len(), mismatches.len(), mismatches.first().map(|m| format!(": {m}")).unwrap_or_default()),
    }
}

fn main() {
    let cfg = SearchConfig::default();
    let criteria: Vec<Criterion> = vec![
        ("exact prime formula vs exhaustive count", Box::new(prime_formula_exactness)),
        ("two-color count is exact iff aw(Z_n,3)=3, n<=20", Box::new(|| campaign(600, || verify::cyclic_lower_bound(20, &cfg)))),
        ("aw characterization vs search, n<=20; aw(Z_p,3) in {3,4}, p<=19", Box::new(lemma_and_prime_range)),
        ("product recurrence lower bound", Box::new(|| {
            campaign(60, || verify::product_bound(&[(1, 3), (1, 5), (2, 3), (3, 3)], &cfg))
        })),
        ("proper subsets of [n] have fewer colorings, n<=10", Box::new(|| campaign(600, || verify::subset_monotonicity(10, &cfg)))),
        ("three-color share below 2% at n=14 and decreasing on 10..=14", Box::new(|| {
            campaign(600, || verify::two_color_share(10..=14, 0.02, &cfg))
        })),
        ("hypergraph statistics, 7<=n<=40, r in {3,4,5}", Box::new(|| campaign(60, || verify::hypergraph(7..=40, &[3, 4, 5])))),
        ("pair-count inequalities on 10^4 random instances", Box::new(|| campaign(60, || verify::pair_bounds(10_000, 2024, 60)))),
        ("orbit invariants, p<=2000, and formula identity, r=3..8", Box::new(|| campaign(60, || verify::orbit_invariants(2000, 3..=8)))),
        ("byte-identical JSON at 1 and 8 workers", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        if !outcome.pass {
            failed += 1;
        }
        println!("criterion {:>2} {status}: {title}: {}", i + 1, outcome.note);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
