//! Oracle-versus-formula campaigns. Each returns one [`Check`] per case, or
//! one aggregated check when a campaign sweeps many small instances.

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rainbow_core::colorings::{has_rainbow_3ap, rainbow_hypergraph_stats};
use rainbow_core::formulas::{aw_zn3_is_3, cor6_rhs, eq1_lower_bound, thm5_exact_zp};
use rainbow_core::numbers::{count_3aps_interval, is_prime, mult_order};
use rainbow_core::orbits::{orbit_decompose, structured_exact3_count};
use rainbow_core::search::{
    compute_aw, count_rainbow_free, prop10_bound, prop10_pair_count, prop11_bound, prop11_hypothesis,
    prop11_pair_count,
};
use rainbow_core::{Error, Method, SearchConfig, Structure, StructureKind};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub campaign: &'static str,
    pub case: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    /// Counterexample or extra context.
    pub detail: Option<String>,
}

impl Check {
    fn new(campaign: &'static str, case: String, expected: String, actual: String, pass: bool) -> Check {
        Check { campaign, case, expected, actual, pass, detail: None }
    }

    /// Summarises a sweep: passes when no failures were collected, and keeps
    /// the first few counterexamples.
    fn sweep(campaign: &'static str, case: String, total: usize, failures: Vec<String>) -> Check {
        let pass = failures.is_empty();
        let detail = (!pass).then(|| failures.iter().take(5).cloned().collect::<Vec<_>>().join("; "));
        Check {
            campaign,
            case,
            expected: "0 violations".into(),
            actual: format!("{} violations in {total}", failures.len()),
            pass,
            detail,
        }
    }
}

// Desk-scale ceilings for the campaigns that run the search.
pub const MAX_SEARCH_P: u64 = 31;
pub const MAX_SEARCH_N: usize = 24;
pub const MAX_SUBSET_N: usize = 16;
pub const MAX_ORBIT_P: u64 = 1_000_000;

fn limit<T: PartialOrd + std::fmt::Display>(what: &str, value: T, max: T) -> CliResult<()> {
    if value > max {
        return Err(CliError::Usage(format!("{what} = {value} exceeds the limit {max}")));
    }
    Ok(())
}

fn odd_primes(max: u64) -> impl Iterator<Item = u64> {
    (3..=max).filter(|&p| is_prime(p))
}

fn zn(n: usize) -> CliResult<Structure> {
    Ok(Structure::cyclic(n)?)
}

fn oracle(s: &Structure, r: usize, cfg: &SearchConfig) -> CliResult<BigUint> {
    Ok(count_rainbow_free(s, r, 3, Method::ExhaustiveDfs, cfg)?.count)
}

/// Exhaustive count of `Z_p` against the closed form, for odd primes `p <= max_p`.
pub fn prime_formula(max_p: u64, rs: &[usize], cfg: &SearchConfig) -> CliResult<Vec<Check>> {
    limit("max-p", max_p, MAX_SEARCH_P)?;
    let mut out = Vec::new();
    for p in odd_primes(max_p) {
        for &r in rs {
            if r < 3 {
                return Err(CliError::Usage(format!("r = {r}: the prime formula needs r >= 3")));
            }
            let formula = thm5_exact_zp(r as u64, p)?.value.to_integer();
            let count = BigInt::from(oracle(&zn(p as usize)?, r, cfg)?);
            let pass = count == formula;
            out.push(Check::new("prime-formula", format!("p={p} r={r}"), formula.to_string(), count.to_string(), pass));
        }
    }
    Ok(out)
}

/// The number-theoretic test for `aw(Z_n, 3) = 3` against the searched value.
pub fn aw_characterization(max_n: usize, cfg: &SearchConfig) -> CliResult<Vec<Check>> {
    limit("max-n", max_n, MAX_SEARCH_N)?;
    let mut out = Vec::new();
    for n in 1..=max_n {
        let ch = aw_zn3_is_3(n as u64)?;
        let clause = ch.clause.map(|c| format!(" clause {}", c.label())).unwrap_or_default();
        let expected = format!("holds={}{clause}", ch.holds);
        let check = match compute_aw(&zn(n)?, 3, cfg) {
            Ok(aw) => Check::new(
                "aw-characterization",
                format!("n={n}"),
                expected,
                format!("aw={}", aw.value),
                ch.holds == (aw.value == 3),
            ),
            // Z_1 and Z_2 have no 3-AP, so aw is undefined and the test is vacuous.
            Err(Error::UndefinedAw(..)) => Check::new(
                "aw-characterization",
                format!("n={n}"),
                expected,
                "aw undefined".into(),
                n <= 2,
            ),
            Err(e) => return Err(e.into()),
        };
        out.push(check);
    }
    Ok(out)
}

/// `aw(Z_p, 3)` is 3 or 4, with a verified witness.
pub fn aw_prime_range(max_p: u64, cfg: &SearchConfig) -> CliResult<Vec<Check>> {
    limit("max-p", max_p, MAX_SEARCH_P)?;
    let mut out = Vec::new();
    for p in odd_primes(max_p) {
        let aw = compute_aw(&zn(p as usize)?, 3, cfg)?;
        let witness_ok = aw.witness.as_ref().is_some_and(|w| {
            w.is_exact() && w.colors_used() == aw.value - 1 && has_rainbow_3ap(w).is_none()
        });
        let mut check = Check::new(
            "aw-prime-range",
            format!("p={p}"),
            "3 or 4".into(),
            aw.value.to_string(),
            (3..=4).contains(&aw.value) && witness_ok,
        );
        if !witness_ok {
            check.detail = Some("witness missing or not rainbow-free".into());
        }
        out.push(check);
    }
    Ok(out)
}

/// `g_3(Z_n) = 3 * 2^n - 3` exactly when `aw(Z_n, 3) = 3` holds by the
/// characterization, and strictly more otherwise.
pub fn cyclic_lower_bound(max_n: usize, cfg: &SearchConfig) -> CliResult<Vec<Check>> {
    limit("max-n", max_n, MAX_SEARCH_N)?;
    let mut out = Vec::new();
    for n in 1..=max_n {
        let holds = aw_zn3_is_3(n as u64)?.holds;
        let lb = eq1_lower_bound(3, n as u64)?.value.to_integer();
        let count = BigInt::from(oracle(&zn(n)?, 3, cfg)?);
        let (expected, pass) = if holds { (format!("= {lb}"), count == lb) } else { (format!("> {lb}"), count > lb) };
        out.push(Check::new("cyclic-lower-bound", format!("n={n}"), expected, count.to_string(), pass));
    }
    Ok(out)
}

/// The product recurrence bound on `g_3(Z_{np})` against the oracle.
pub fn product_bound(pairs: &[(u64, u64)], cfg: &SearchConfig) -> CliResult<Vec<Check>> {
    let mut out = Vec::new();
    for &(n, p) in pairs {
        limit("n*p", (n * p) as usize, MAX_SEARCH_N)?;
        let g_zn = BigInt::from(oracle(&zn(n as usize)?, 3, cfg)?);
        let rhs = cor6_rhs(3, n, p, &g_zn)?.value.to_integer();
        let count = BigInt::from(oracle(&zn((n * p) as usize)?, 3, cfg)?);
        let mut check = Check::new(
            "product-bound",
            format!("n={n} p={p}"),
            format!(">= {rhs}"),
            count.to_string(),
            rhs <= count,
        );
        check.detail = Some(format!("g_3(Z_{n}) = {g_zn}"));
        out.push(check);
    }
    Ok(out)
}

fn interval_subset(n: usize, mask: u64) -> CliResult<Structure> {
    let elems: Vec<usize> = (1..=n).filter(|x| mask >> (x - 1) & 1 == 1).collect();
    Ok(Structure::with_support(StructureKind::Interval, n, &elems)?)
}

fn describe_mask(n: usize, mask: u64) -> String {
    let elems: Vec<String> = (1..=n).filter(|x| mask >> (x - 1) & 1 == 1).map(|x| x.to_string()).collect();
    format!("{{{}}}", elems.join(","))
}

/// `g_3(A) < g_3([n])` for every proper subset `A` of `[n]`.
pub fn subset_monotonicity(max_n: usize, cfg: &SearchConfig) -> CliResult<Vec<Check>> {
    limit("max-n", max_n, MAX_SUBSET_N)?;
    let mut out = Vec::new();
    for n in 1..=max_n {
        let full = oracle(&Structure::interval(n), 3, cfg)?;
        let mut failures = Vec::new();
        let subsets = (1u64 << n) - 1;
        for mask in 0..subsets {
            let c = oracle(&interval_subset(n, mask)?, 3, cfg)?;
            if c >= full {
                failures.push(format!("A={} g={c} vs g([n])={full}", describe_mask(n, mask)));
            }
        }
        out.push(Check::sweep("subset-monotonicity", format!("n={n}"), subsets as usize, failures));
    }
    Ok(out)
}

/// Share of rainbow-free 3-colorings of `[n]` that use all three colors.
pub fn three_color_share(n: usize, cfg: &SearchConfig) -> CliResult<f64> {
    let rep = count_rainbow_free(&Structure::interval(n), 3, 3, Method::ExhaustiveDfs, cfg)?;
    let three = rep.by_colors_used[3].to_f64().unwrap_or(f64::NAN);
    Ok(three / rep.count.to_f64().unwrap_or(f64::NAN))
}

/// The share of colorings using three colors is below `threshold` at the top
/// of the range and strictly decreasing across it.
pub fn two_color_share(ns: std::ops::RangeInclusive<usize>, threshold: f64, cfg: &SearchConfig) -> CliResult<Vec<Check>> {
    limit("n", *ns.end(), MAX_SEARCH_N)?;
    let shares: Vec<(usize, f64)> = ns.clone().map(|n| Ok((n, three_color_share(n, cfg)?))).collect::<CliResult<_>>()?;
    let listing = shares.iter().map(|(n, s)| format!("n={n}: {:.4}", s)).collect::<Vec<_>>().join(", ");
    let (top_n, top) = *shares.last().ok_or_else(|| CliError::Usage("empty range".into()))?;
    let mut below = Check::new(
        "three-color-share",
        format!("n={top_n} below {threshold}"),
        format!("< {threshold}"),
        format!("{top:.6}"),
        top < threshold,
    );
    below.detail = Some(listing.clone());
    let decreasing = shares.windows(2).all(|w| w[1].1 < w[0].1);
    let mut trend = Check::new(
        "three-color-share",
        format!("decreasing on n={}..={}", ns.start(), ns.end()),
        "strictly decreasing".into(),
        if decreasing { "strictly decreasing".into() } else { "not monotone".into() },
        decreasing,
    );
    trend.detail = Some(listing);
    Ok(vec![below, trend])
}

/// Edge count, triple co-degree and pair co-degree of the rainbow hypergraph.
pub fn hypergraph(ns: std::ops::RangeInclusive<usize>, rs: &[usize]) -> CliResult<Vec<Check>> {
    let mut out = Vec::new();
    for n in ns {
        for &r in rs {
            let st = rainbow_hypergraph_stats(n, r)?;
            let edges = (r * (r - 1) * (r - 2)) as u128 * count_3aps_interval(n as u64) as u128;
            let d2 = 3 * (r as u64 - 2);
            let pass = st.edge_count == edges && st.max_codegree_3 == 1 && st.max_codegree_2 == d2;
            out.push(Check::new(
                "hypergraph",
                format!("n={n} r={r}"),
                format!("|E|={edges} d3=1 d2={d2}"),
                format!("|E|={} d3={} d2={}", st.edge_count, st.max_codegree_3, st.max_codegree_2),
                pass,
            ));
        }
    }
    Ok(out)
}

fn random_subset(rng: &mut ChaCha8Rng, from: &[usize]) -> Vec<usize> {
    let keep: f64 = rng.gen();
    from.iter().copied().filter(|_| rng.gen_bool(keep)).collect()
}

/// Random instances of the two pair-count inequalities.
pub fn pair_bounds(samples: usize, seed: u64, max_n: usize) -> CliResult<Vec<Check>> {
    if max_n < 3 {
        return Err(CliError::Usage("max-n must be at least 3".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures10 = Vec::new();
    for _ in 0..samples {
        let n = rng.gen_range(1..=max_n);
        let a = random_subset(&mut rng, &(1..=n).collect::<Vec<_>>());
        let i = random_subset(&mut rng, &a);
        let count = prop10_pair_count(&i, &a, n)?;
        let bound = prop10_bound(i.len(), a.len(), n);
        if Ratio::from_integer(count as i64) > bound {
            failures10.push(format!("n={n} A={a:?} I={i:?}: {count} > {bound}"));
        }
    }
    // Below 74 the size hypothesis forces I = A = [n].
    let mut failures11 = Vec::new();
    let mut tested11 = 0;
    for _ in 0..samples {
        let n = rng.gen_range(3..=max_n);
        let a: Vec<usize> = (1..=n).collect();
        let a_len = if n >= 74 { rng.gen_range(n - n / 74..=n) } else { n };
        let a = &a[..a_len];
        let i_len = rng.gen_range(a_len.min(n * 73 / 74)..=a_len);
        let i = &a[..i_len];
        if !prop11_hypothesis(i.len(), n) {
            continue;
        }
        tested11 += 1;
        let (mut i1, mut i2): (Vec<usize>, Vec<usize>) = i.iter().partition(|_| rng.gen_bool(0.5));
        if i1.len() > i2.len() {
            std::mem::swap(&mut i1, &mut i2);
        }
        let count = prop11_pair_count(&i1, &i2, a, n)?;
        let bound = prop11_bound(i1.len(), i2.len(), a.len(), n);
        if Ratio::from_integer(count as i64) < bound {
            failures11.push(format!("n={n} I1={i1:?}: {count} < {bound}"));
        }
    }
    Ok(vec![
        Check::sweep("pair-bounds", format!("uncovered pairs, {samples} samples, n<={max_n}"), samples, failures10),
        Check::sweep("pair-bounds", format!("covered cross pairs, {tested11} samples, 3<=n<={max_n}"), tested11, failures11),
    ])
}

/// Partition, closure, size and count invariants of the orbit decomposition,
/// and the identity linking the prime formula to the structured count.
pub fn orbit_invariants(max_p: u64, rs: std::ops::RangeInclusive<u64>) -> CliResult<Vec<Check>> {
    limit("max-p", max_p, MAX_ORBIT_P)?;
    let (mut partition, mut closure, mut size, mut count, mut identity) = (vec![], vec![], vec![], vec![], vec![]);
    let mut primes = 0;
    for p in odd_primes(max_p) {
        primes += 1;
        let d = orbit_decompose(p)?;
        let ord = mult_order(2, p)?;
        let c = if ord % 2 == 0 { 1 } else { 2 };
        let mut seen = vec![false; p as usize];
        for o in &d.orbits {
            for &x in &o.elements {
                if x == 0 || x >= p || std::mem::replace(&mut seen[x as usize], true) {
                    partition.push(format!("p={p}: {x} repeated or out of range"));
                }
                if !o.contains(2 * x % p) || !o.contains(p - x) {
                    closure.push(format!("p={p}: orbit of {} not closed at {x}", o.representative));
                }
            }
            if o.len() as u64 != c * ord {
                size.push(format!("p={p}: orbit of {} has size {}", o.representative, o.len()));
            }
        }
        if seen[1..].iter().any(|s| !s) {
            partition.push(format!("p={p}: not every nonzero residue is covered"));
        }
        if d.count() as u64 != (p - 1) / (c * ord) {
            count.push(format!("p={p}: {} orbits", d.count()));
        }
        for r in rs.clone() {
            let diff = thm5_exact_zp(r, p)?.value.to_integer() - eq1_lower_bound(r, p)?.value.to_integer();
            let structured = structured_exact3_count(p, r)?;
            if diff != structured {
                identity.push(format!("p={p} r={r}: {diff} != {structured}"));
            }
        }
    }
    let case = |what: &str| format!("{what}, odd primes <= {max_p}");
    Ok(vec![
        Check::sweep("orbit-invariants", case("partition"), primes, partition),
        Check::sweep("orbit-invariants", case("closure"), primes, closure),
        Check::sweep("orbit-invariants", case("size c*ord"), primes, size),
        Check::sweep("orbit-invariants", case("count (p-1)/(c*ord)"), primes, count),
        Check::sweep(
            "orbit-identity",
            format!("formula minus two-color part, r={}..={}, odd primes <= {max_p}", rs.start(), rs.end()),
            primes,
            identity,
        ),
    ])
}
