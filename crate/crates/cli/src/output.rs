//! Rendering of results as JSON, CSV or text.
//!
//! JSON objects have sorted keys and counts are decimal strings. The only
//! timing field is `elapsed_ms`.

use std::fmt::Write as _;
use std::time::Duration;

use serde_json::{json, Value};

use rainbow_core::orbits::OrbitDecomposition;
use rainbow_core::search::AwResult;
use rainbow_core::{CountReport, Method};

use crate::args::Format;
use crate::verify::Check;

pub const CSV_HEADER: &str = "key,count,method,elapsed_ms";

pub fn millis(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_row(key: &str, count: &str, method: &str, elapsed: f64) -> String {
    format!("{},{},{},{}\n", csv_field(key), csv_field(count), csv_field(method), elapsed)
}

/// A count as served to the user: fresh from a computation or from the cache.
#[derive(Debug, Clone)]
pub struct CountOutput {
    pub key: String,
    pub report: CountReport,
    /// Method of the cached record, when the count came from the cache.
    pub cached_from: Option<String>,
}

impl CountOutput {
    pub fn method(&self) -> &str {
        if self.cached_from.is_some() {
            "cached"
        } else {
            self.report.method.name()
        }
    }

    pub fn to_json(&self) -> Value {
        let r = &self.report;
        let searched = self.cached_from.is_none() && r.method != Method::Formula;
        json!({
            "key": self.key,
            "structure": r.structure,
            "r": r.r,
            "k": r.k,
            "exact": r.exact,
            "count": r.count.to_string(),
            "by_colors_used": r.by_colors_used.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "method": self.method(),
            "cached_from": self.cached_from,
            "nodes": searched.then_some(r.nodes),
            "leaves": searched.then_some(r.leaves),
            "elapsed_ms": millis(r.elapsed),
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => line(&self.to_json()),
            Format::Csv => {
                format!("{CSV_HEADER}\n{}", csv_row(&self.key, &self.report.count.to_string(), self.method(), millis(self.report.elapsed)))
            }
            Format::Text => {
                let mut s = format!("{}: {} ({}", self.key, self.report.count, self.method());
                if let Some(m) = &self.cached_from {
                    let _ = write!(s, " from {m}");
                }
                let _ = write!(s, ", {} ms)", millis(self.report.elapsed));
                if self.cached_from.is_none() && !self.report.by_colors_used.is_empty() {
                    let parts: Vec<String> = self
                        .report
                        .by_colors_used
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                        .map(|(s, c)| format!("{s}: {c}"))
                        .collect();
                    let _ = write!(s, "\n  by colors used: {}", parts.join(", "));
                }
                s.push('\n');
                s
            }
        }
    }
}

pub fn line(v: &Value) -> String {
    let mut s = v.to_string();
    s.push('\n');
    s
}

#[derive(Debug, Clone)]
pub struct AwOutput {
    pub key: String,
    pub result: AwResult,
    pub cached_from: Option<String>,
    pub elapsed: Duration,
}

impl AwOutput {
    pub fn method(&self) -> &str {
        if self.cached_from.is_some() {
            "cached"
        } else {
            "search"
        }
    }

    pub fn to_json(&self) -> Value {
        let witness = self.result.witness.as_ref().map(|w| {
            json!({
                "support": w.structure().support(),
                "colors": w.colors(),
            })
        });
        json!({
            "key": self.key,
            "structure": self.result.structure,
            "k": self.result.k,
            "value": self.result.value,
            "witness": witness,
            "method": self.method(),
            "cached_from": self.cached_from,
            "elapsed_ms": millis(self.elapsed),
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => line(&self.to_json()),
            Format::Csv => format!("{CSV_HEADER}\n{}", csv_row(&self.key, &self.result.value.to_string(), self.method(), millis(self.elapsed))),
            Format::Text => {
                let mut s = format!("{}: {}\n", self.key, self.result.value);
                if let Some(w) = &self.result.witness {
                    let pairs: Vec<String> =
                        w.structure().support().iter().zip(w.colors()).map(|(x, c)| format!("{x}:{c}")).collect();
                    let _ = writeln!(s, "  witness ({} colors): {}", w.colors_used(), pairs.join(" "));
                }
                s
            }
        }
    }
}

pub fn orbits(d: &OrbitDecomposition, elapsed: Duration, format: Format) -> String {
    let key = format!("orbits/p={}", d.p);
    match format {
        Format::Json => {
            let orbits: Vec<Value> = d
                .orbits
                .iter()
                .map(|o| json!({"representative": o.representative, "size": o.len(), "elements": o.elements}))
                .collect();
            line(&json!({
                "key": key,
                "p": d.p,
                "ord": d.ord,
                "c": d.c,
                "count": d.count(),
                "orbits": orbits,
                "elapsed_ms": millis(elapsed),
            }))
        }
        Format::Csv => format!("{CSV_HEADER}\n{}", csv_row(&key, &d.count().to_string(), "closure", millis(elapsed))),
        Format::Text => {
            let mut s = format!("Z_{}: ord_p(2) = {}, c = {}, {} orbit(s)\n", d.p, d.ord, d.c, d.count());
            for o in &d.orbits {
                let elems: Vec<String> = o.elements.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(s, "  [{}] size {}: {}", o.representative, o.len(), elems.join(" "));
            }
            s
        }
    }
}

pub fn checks(checks: &[Check], elapsed: Duration, format: Format) -> String {
    let failed = checks.iter().filter(|c| !c.pass).count();
    match format {
        Format::Json => {
            let list: Vec<Value> = checks
                .iter()
                .map(|c| {
                    json!({
                        "campaign": c.campaign,
                        "case": c.case,
                        "expected": c.expected,
                        "actual": c.actual,
                        "pass": c.pass,
                        "detail": c.detail,
                    })
                })
                .collect();
            line(&json!({
                "checks": list,
                "passed": checks.len() - failed,
                "failed": failed,
                "elapsed_ms": millis(elapsed),
            }))
        }
        Format::Csv => {
            let mut s = format!("{CSV_HEADER}\n");
            for c in checks {
                let key = format!("{}/{}", c.campaign, c.case);
                s.push_str(&csv_row(&key, &c.actual, if c.pass { "pass" } else { "fail" }, millis(elapsed)));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for c in checks {
                let status = if c.pass { "PASS" } else { "FAIL" };
                let _ = writeln!(s, "{status} {} {}: expected {}, got {}", c.campaign, c.case, c.expected, c.actual);
                if let (false, Some(d)) = (c.pass, &c.detail) {
                    let _ = writeln!(s, "     {d}");
                }
            }
            let _ = writeln!(s, "{} passed, {failed} failed", checks.len() - failed);
            s
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchRun {
    pub method: &'static str,
    pub count: String,
    pub nodes: u64,
    pub times: Vec<Duration>,
}

impl BenchRun {
    fn best(&self) -> Duration {
        self.times.iter().copied().min().unwrap_or_default()
    }

    fn median(&self) -> Duration {
        let mut t = self.times.clone();
        t.sort();
        t.get(t.len() / 2).copied().unwrap_or_default()
    }
}

pub fn bench(key: &str, workers: u64, runs: &[BenchRun], format: Format) -> String {
    match format {
        Format::Json => {
            let list: Vec<Value> = runs
                .iter()
                .map(|b| {
                    let secs = b.best().as_secs_f64();
                    json!({
                        "method": b.method,
                        "count": b.count,
                        "nodes": b.nodes,
                        "best_ms": millis(b.best()),
                        "median_ms": millis(b.median()),
                        "nodes_per_sec": if secs > 0.0 { (b.nodes as f64 / secs).round() } else { 0.0 },
                    })
                })
                .collect();
            line(&json!({"key": key, "workers": workers, "runs": list}))
        }
        Format::Csv => {
            let mut s = format!("{CSV_HEADER}\n");
            for b in runs {
                s.push_str(&csv_row(key, &b.count, b.method, millis(b.best())));
            }
            s
        }
        Format::Text => {
            let mut s = format!("{key} ({workers} worker(s))\n");
            for b in runs {
                let _ = writeln!(
                    s,
                    "  {:<10} count {} nodes {} best {} ms median {} ms",
                    b.method,
                    b.count,
                    b.nodes,
                    millis(b.best()),
                    millis(b.median())
                );
            }
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("say \"x\""), "\"say \"\"x\"\"\"");
    }

    #[test]
    fn millis_rounds_to_microseconds() {
        assert_eq!(millis(Duration::from_micros(1500)), 1.5);
        assert_eq!(millis(Duration::from_nanos(1_234_567)), 1.235);
    }

    #[test]
    fn json_keys_are_sorted() {
        let text = line(&json!({"zeta": 1, "alpha": 2, "mid": {"b": 1, "a": 2}}));
        assert_eq!(text, "{\"alpha\":2,\"mid\":{\"a\":2,\"b\":1},\"zeta\":1}\n");
    }
}
