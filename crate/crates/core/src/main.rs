use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ffjac::bench::{self, BenchConfig, Sweep};
use ffjac::divisor::Divisor;
use ffjac::field::{make_field, Field, FunctionField};
use ffjac::fieldgen;
use ffjac::jacobian::{Config, JacobianCtx, Strategy};
use ffjac::selftest;

#[derive(Parser)]
#[command(name = "ffjac", version, about = "Jacobian arithmetic in global function fields")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Tang,
    Adhoc,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Linear,
    Binary,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum CacheArg {
    On,
    Off,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate random function fields as JSON files.
    Gen {
        #[arg(long, value_enum, default_value = "tang")]
        method: MethodArg,
        #[arg(long, default_value_t = bench::P16)]
        p: u32,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Tang: exact C_f; ad-hoc: upper bound.
        #[arg(long, default_value_t = 2)]
        cf: u32,
        /// Ad-hoc only: required genus.
        #[arg(long)]
        genus: Option<u32>,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Time addition chains and write a dat table.
    Bench {
        #[arg(long, conflicts_with = "sweep")]
        preset: Option<String>,
        /// e.g. `genus=4,7,10`, `cf=2..5`, `degree=3..8`
        #[arg(long)]
        sweep: Option<String>,
        #[arg(long, default_value_t = bench::P16)]
        p: u32,
        /// Genus of degree-sweep fields.
        #[arg(long, default_value_t = 15)]
        target_genus: u32,
        #[arg(long, default_value_t = 6)]
        cf_max: u32,
        #[arg(long, value_enum, default_value = "both")]
        strategy: StrategyArg,
        #[arg(long, value_enum, default_value = "both")]
        cache: CacheArg,
        #[arg(long)]
        chains: Option<usize>,
        #[arg(long)]
        chain_length: Option<usize>,
        #[arg(long)]
        fields: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Dat file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        parallel_fields: usize,
    },
    /// Run the built-in property and oracle checks.
    Selftest {
        #[arg(long, value_enum, default_value = "quick")]
        level: LevelArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Reduce a degree-zero divisor and print its representative.
    Reduce {
        /// Field JSON; defaults to y^2 = x^5 + 1 over F_7.
        #[arg(long)]
        field: Option<PathBuf>,
        /// Divisor JSON (list of place terms); zero when absent.
        #[arg(long, conflicts_with = "random")]
        divisor: Option<PathBuf>,
        /// Reduce a random divisor instead.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "linear")]
        strategy: StrategyArg,
    },
}

type AnyResult<T> = std::result::Result<T, Box<dyn std::error::Error>>;

fn usage(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Gen { method, p, n, cf, genus, count, seed, out } => gen(method, p, n, cf, genus, count, seed, out),
        Cmd::Bench { preset, sweep, p, target_genus, cf_max, strategy, cache, chains, chain_length, fields, seed, out, parallel_fields } => {
            let base = match (preset, sweep) {
                (Some(name), _) => bench::preset(&name),
                (None, Some(spec)) => bench::parse_sweep(&spec, p, target_genus, cf_max).map(|points| Sweep {
                    kind: if spec.starts_with("degree") { bench::SweepKind::Degree } else { bench::SweepKind::Genus },
                    name: spec.clone(),
                    points,
                    fields: 5,
                    chains: 5,
                    length: 1000,
                }),
                (None, None) => return usage("bench needs --preset or --sweep"),
            };
            let mut sw = match base {
                Ok(s) => s,
                Err(e) => return usage(&e.to_string()),
            };
            sw.fields = fields.unwrap_or(sw.fields);
            sw.chains = chains.unwrap_or(sw.chains);
            sw.length = chain_length.unwrap_or(sw.length);
            if sw.fields == 0 || sw.chains == 0 || sw.length == 0 {
                return usage("--fields, --chains and --chain-length must be positive");
            }
            run_bench(&sw, &configs(strategy, cache), seed, out, parallel_fields.max(1))
        }
        Cmd::Selftest { level, seed } => {
            let level = match level {
                LevelArg::Quick => selftest::Level::Quick,
                LevelArg::Full => selftest::Level::Full,
            };
            let checks = selftest::run(level, seed);
            let mut ok = true;
            for c in &checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                println!("{tag} {} {}", c.name, c.detail);
                ok &= c.passed;
            }
            if !ok {
                return ExitCode::FAILURE;
            }
            Ok(())
        }
        Cmd::Reduce { field, divisor, random, seed, strategy } => reduce(field, divisor, random, seed, strategy),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn configs(strategy: StrategyArg, cache: CacheArg) -> Vec<BenchConfig> {
    BenchConfig::ALL
        .into_iter()
        .filter(|c| match strategy {
            StrategyArg::Linear => c.strategy == Strategy::Linear,
            StrategyArg::Binary => c.strategy == Strategy::Binary,
            StrategyArg::Both => true,
        })
        .filter(|c| match cache {
            CacheArg::On => c.caching,
            CacheArg::Off => !c.caching,
            CacheArg::Both => true,
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn gen(method: MethodArg, p: u32, n: usize, cf: u32, genus: Option<u32>, count: usize, seed: u64, out: PathBuf) -> AnyResult<()> {
    fs::create_dir_all(&out)?;
    for i in 0..count as u64 {
        let s = seed.wrapping_add(i);
        let (f, tag) = match method {
            MethodArg::Tang => (fieldgen::gen_tang(p, n, cf, s)?, "tang"),
            MethodArg::Adhoc => (fieldgen::gen_adhoc(p, n, cf, genus, s)?, "adhoc"),
        };
        let path = out.join(format!("{tag}_p{p}_n{n}_cf{cf}_s{s}.json"));
        fs::write(&path, f.to_json())?;
        println!("{} genus={}", path.display(), f.genus());
    }
    Ok(())
}

fn run_bench(sw: &Sweep, configs: &[BenchConfig], seed: u64, out: Option<PathBuf>, parallel: usize) -> AnyResult<()> {
    let mut w: Box<dyn Write> = match &out {
        Some(p) => Box::new(fs::File::create(p)?),
        None => Box::new(std::io::stdout()),
    };
    writeln!(w, "# ffjac {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(w, "# sweep {} ({} points)", sw.name, sw.points.len())?;
    writeln!(w, "# seed {seed} fields {} chains {} chain_length {}", sw.fields, sw.chains, sw.length)?;
    writeln!(w, "# cpu milliseconds per addition, thread CPU time around the addition loop")?;
    writeln!(w, "{}", bench::header(sw.kind, configs))?;
    for pt in &sw.points {
        let r = bench::run_point(pt, configs, sw, seed, parallel)?;
        writeln!(w, "{}", bench::row(&r))?;
        w.flush()?;
    }
    Ok(())
}

fn reduce(field: Option<PathBuf>, divisor: Option<PathBuf>, random: bool, seed: u64, strategy: StrategyArg) -> AnyResult<()> {
    let f: Field = match field {
        Some(p) => FunctionField::from_json(&fs::read_to_string(p)?)?,
        None => make_field(7, &[vec![-1, 0, 0, 0, 0, -1], vec![]])?,
    };
    let strategy = match strategy {
        StrategyArg::Binary => Strategy::Binary,
        _ => Strategy::Linear,
    };
    let mut ctx = JacobianCtx::new(&f, Config::new(strategy, true))?;
    let d = if random {
        ctx.random_divisor(&mut ChaCha8Rng::seed_from_u64(seed))?
    } else if let Some(p) = divisor {
        Divisor::from_json(&f, &fs::read_to_string(p)?)?
    } else {
        Divisor::zero(&f)
    };
    let c = ctx.reduce(&d)?;
    println!("genus={} A={}", ctx.genus(), ctx.base_place().key());
    println!("r={}", c.r());
    println!("{}", ctx.to_json(&c)?);
    Ok(())
}
