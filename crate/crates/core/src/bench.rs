//! Benchmark harness: Fibonacci-style addition chains over generated fields.

use std::fmt::Write as _;
use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::fieldgen;
use crate::jacobian::{Config, JacobianCtx, OpCounters, Strategy};

/// CPU time of the calling thread.
pub fn thread_cpu_time() -> Duration {
    let mut ts = libc::timespec { tv_sec: 0, tv_nsec: 0 };
    // SAFETY: ts is a valid out-pointer for the duration of the call.
    let rc = unsafe { libc::clock_gettime(libc::CLOCK_THREAD_CPUTIME_ID, &mut ts) };
    assert_eq!(rc, 0, "clock_gettime failed");
    Duration::new(ts.tv_sec as u64, ts.tv_nsec as u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub strategy: Strategy,
    pub caching: bool,
}

impl BenchConfig {
    pub const ALL: [BenchConfig; 4] = [
        BenchConfig { strategy: Strategy::Linear, caching: false },
        BenchConfig { strategy: Strategy::Linear, caching: true },
        BenchConfig { strategy: Strategy::Binary, caching: false },
        BenchConfig { strategy: Strategy::Binary, caching: true },
    ];

    pub fn label(&self) -> String {
        format!("{}_{}", self.strategy.name(), if self.caching { "caching" } else { "no_caching" })
    }
}

#[derive(Clone, Debug, Default)]
pub struct ChainStats {
    pub additions: u64,
    pub cpu: Duration,
    pub counters: OpCounters,
}

impl ChainStats {
    pub fn merge(&mut self, o: &ChainStats) {
        self.additions += o.additions;
        self.cpu += o.cpu;
        let c = &mut self.counters;
        c.ssrr_calls += o.counters.ssrr_calls;
        c.partial_additions += o.counters.partial_additions;
        c.infinite_cache_hits += o.counters.infinite_cache_hits;
        c.infinite_cache_misses += o.counters.infinite_cache_misses;
        c.ssrr_cache_hits += o.counters.ssrr_cache_hits;
        c.ssrr_cache_misses += o.counters.ssrr_cache_misses;
    }

    pub fn ms_per_addition(&self) -> f64 {
        if self.additions == 0 {
            return 0.0;
        }
        self.cpu.as_secs_f64() * 1000.0 / self.additions as f64
    }

    pub fn ssrr_per_addition(&self) -> f64 {
        if self.additions == 0 {
            return 0.0;
        }
        self.counters.ssrr_calls as f64 / self.additions as f64
    }
}

/// `D_{k+1} = D_k + D_{k-1}` from two random reduced seeds; only the
/// additions are timed.
pub fn run_chain(ctx: &mut JacobianCtx, seed: u64, length: usize) -> Result<ChainStats> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = ctx.random_element(&mut rng)?;
    let mut b = ctx.random_element(&mut rng)?;
    let before = ctx.counters();
    let t0 = thread_cpu_time();
    for _ in 0..length {
        let c = ctx.add(&a, &b)?;
        a = b;
        b = c;
    }
    let cpu = thread_cpu_time() - t0;
    Ok(ChainStats { additions: length as u64, cpu, counters: ctx.counters().since(&before) })
}

/// Runs every chain on one field under one configuration.
pub fn bench_field(field: &Field, cfg: BenchConfig, chains: usize, length: usize, seed: u64) -> Result<ChainStats> {
    let mut ctx = JacobianCtx::new(field, Config::new(cfg.strategy, cfg.caching))?;
    let mut total = ChainStats::default();
    for c in 0..chains {
        let s = run_chain(&mut ctx, seed.wrapping_add(c as u64), length)?;
        total.merge(&s);
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepKind {
    Genus,
    Degree,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldRecipe {
    pub method: Method,
    pub p: u32,
    pub n: usize,
    pub cf: u32,
    pub genus: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Tang,
    Adhoc,
}

impl FieldRecipe {
    pub fn generate(&self, seed: u64) -> Result<Field> {
        match self.method {
            Method::Tang => fieldgen::gen_tang(self.p, self.n, self.cf, seed),
            Method::Adhoc => fieldgen::gen_adhoc(self.p, self.n, self.cf, self.genus, seed),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub x: u32,
    pub recipe: FieldRecipe,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub kind: SweepKind,
    pub name: String,
    pub points: Vec<SweepPoint>,
    pub fields: usize,
    pub chains: usize,
    pub length: usize,
}

pub const P16: u32 = 32771;

/// `n = 3` Tang fields: `g = 3 cf - 2`.
pub fn genus_sweep(p: u32, cfs: &[u32]) -> Vec<SweepPoint> {
    cfs.iter()
        .map(|&cf| SweepPoint {
            x: fieldgen::eq3_bound(3, cf),
            recipe: FieldRecipe { method: Method::Tang, p, n: 3, cf, genus: None },
        })
        .collect()
}

pub fn degree_sweep(p: u32, genus: u32, cf_max: u32, ns: &[usize]) -> Vec<SweepPoint> {
    ns.iter()
        .map(|&n| SweepPoint {
            x: n as u32,
            recipe: FieldRecipe { method: Method::Adhoc, p, n, cf: cf_max, genus: Some(genus) },
        })
        .collect()
}

pub fn preset(name: &str) -> Result<Sweep> {
    let cfs: Vec<u32> = (2..=19).collect();
    let s = match name {
        "fig1" => Sweep { kind: SweepKind::Genus, name: name.into(), points: genus_sweep(P16, &cfs), fields: 5, chains: 5, length: 1000 },
        "fig1-small" => Sweep { kind: SweepKind::Genus, name: name.into(), points: genus_sweep(P16, &[2, 3, 4]), fields: 1, chains: 1, length: 20 },
        "fig2" => Sweep { kind: SweepKind::Degree, name: name.into(), points: degree_sweep(P16, 15, 6, &[3, 4, 5, 6, 7, 8]), fields: 5, chains: 5, length: 1000 },
        "fig2-small" => Sweep { kind: SweepKind::Degree, name: name.into(), points: degree_sweep(P16, 4, 3, &[3, 4]), fields: 1, chains: 1, length: 20 },
        _ => return Err(Error::Invalid(format!("unknown preset {name}"))),
    };
    Ok(s)
}

fn parse_range(s: &str) -> Result<Vec<u32>> {
    let bad = || Error::Invalid(format!("bad value list {s:?}"));
    let mut out = Vec::new();
    for part in s.split(',') {
        if let Some((a, b)) = part.split_once("..") {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.trim().parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

/// `genus=4,7,10`, `cf=2..5` (Tang, `n = 3`) or `degree=3..8` (ad-hoc,
/// `genus` fixed by `target_genus`).
pub fn parse_sweep(spec: &str, p: u32, target_genus: u32, cf_max: u32) -> Result<Vec<SweepPoint>> {
    let (kind, vals) = spec.split_once('=').ok_or_else(|| Error::Invalid(format!("sweep spec {spec:?} lacks '='")))?;
    let vals = parse_range(vals)?;
    match kind {
        "cf" => {
            if vals.contains(&0) {
                return Err(Error::Invalid("cf must be positive".into()));
            }
            Ok(genus_sweep(p, &vals))
        }
        "genus" => {
            let mut cfs = Vec::new();
            for g in vals {
                if g < 4 || (g + 2) % 3 != 0 {
                    return Err(Error::Invalid(format!("genus {g} is not 3 cf - 2 for a Tang cubic")));
                }
                cfs.push((g + 2) / 3);
            }
            Ok(genus_sweep(p, &cfs))
        }
        "degree" => {
            if vals.iter().any(|&n| n < 2) {
                return Err(Error::Invalid("degree must be at least 2".into()));
            }
            let ns: Vec<usize> = vals.iter().map(|&n| n as usize).collect();
            Ok(degree_sweep(p, target_genus, cf_max, &ns))
        }
        _ => Err(Error::Invalid(format!("unknown sweep kind {kind:?}"))),
    }
}

#[derive(Clone, Debug)]
pub struct PointResult {
    pub x: u32,
    pub stats: Vec<(BenchConfig, ChainStats)>,
}

pub fn header(kind: SweepKind, configs: &[BenchConfig]) -> String {
    let mut h = String::from(match kind {
        SweepKind::Genus => "genus",
        SweepKind::Degree => "degree",
    });
    for c in configs {
        write!(h, " {}_milliseconds_per_addition", c.label()).unwrap();
    }
    for c in configs {
        write!(h, " {}_ssrr_calls_mean", c.label()).unwrap();
    }
    h
}

pub fn row(r: &PointResult) -> String {
    let mut s = r.x.to_string();
    for (_, st) in &r.stats {
        write!(s, " {:.4}", st.ms_per_addition()).unwrap();
    }
    for (_, st) in &r.stats {
        write!(s, " {:.4}", st.ssrr_per_addition()).unwrap();
    }
    s
}

/// Benchmarks one sweep point: `fields` generated fields, every config on
/// each, optionally across `parallel` threads (one field per thread).
pub fn run_point(pt: &SweepPoint, configs: &[BenchConfig], sweep: &Sweep, seed: u64, parallel: usize) -> Result<PointResult> {
    let seeds: Vec<u64> = (0..sweep.fields as u64).map(|i| seed.wrapping_mul(1_000_003).wrapping_add(pt.x as u64 * 101 + i)).collect();
    let one = |fs: u64| -> Result<Vec<ChainStats>> {
        let field = pt.recipe.generate(fs)?;
        configs.iter().map(|&c| bench_field(&field, c, sweep.chains, sweep.length, fs)).collect()
    };
    let per_field: Vec<Result<Vec<ChainStats>>> = if parallel <= 1 {
        seeds.iter().map(|&s| one(s)).collect()
    } else {
        let mut out = Vec::with_capacity(seeds.len());
        for chunk in seeds.chunks(parallel) {
            let res: Vec<_> = std::thread::scope(|sc| {
                let hs: Vec<_> = chunk.iter().map(|&s| sc.spawn(move || one(s))).collect();
                hs.into_iter().map(|h| h.join().expect("bench thread panicked")).collect()
            });
            out.extend(res);
        }
        out
    };
    let mut totals = vec![ChainStats::default(); configs.len()];
    for r in per_field {
        for (t, s) in totals.iter_mut().zip(r?) {
            t.merge(&s);
        }
    }
    Ok(PointResult { x: pt.x, stats: configs.iter().copied().zip(totals).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_parsing() {
        let pts = parse_sweep("genus=4,7", P16, 15, 6).unwrap();
        assert_eq!(pts.iter().map(|p| p.recipe.cf).collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(parse_sweep("cf=2..4", P16, 15, 6).unwrap().len(), 3);
        assert!(parse_sweep("genus=5", P16, 15, 6).is_err());
        assert!(parse_sweep("degree=1..3", P16, 15, 6).is_err());
        assert!(parse_sweep("colour=3", P16, 15, 6).is_err());
        assert!(parse_sweep("cf", P16, 15, 6).is_err());
    }

    #[test]
    fn fig1_header_and_genera() {
        let s = preset("fig1").unwrap();
        assert_eq!(s.points.first().unwrap().x, 4);
        assert_eq!(s.points.last().unwrap().x, 55);
        let h = header(s.kind, &BenchConfig::ALL);
        assert!(h.starts_with("genus linear_no_caching_milliseconds_per_addition linear_caching_milliseconds_per_addition binary_no_caching_milliseconds_per_addition binary_caching_milliseconds_per_addition"));
        assert!(header(SweepKind::Degree, &BenchConfig::ALL).starts_with("degree "));
    }
}
