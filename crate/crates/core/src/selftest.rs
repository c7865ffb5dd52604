//! Self-test suites run by `ffjac selftest`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::field::{make_field, Field};
use crate::fieldgen;
use crate::jacobian::{Config, JacobianCtx, ReducedClassRep, Strategy};
use crate::oracles;
use crate::riemann_roch::dimension;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn fail(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

pub fn small_fields() -> Result<Vec<(String, Field)>> {
    Ok(vec![
        ("y^2=x^3+x/F5".into(), make_field(5, &[vec![0, -1, 0, -1], vec![]])?),
        ("y^2=x^5+1/F7".into(), make_field(7, &[vec![-1, 0, 0, 0, 0, -1], vec![]])?),
        ("tang(n=3,cf=2)/F32771".into(), fieldgen::gen_tang(32771, 3, 2, 1)?),
    ])
}

/// `D~ >= 0`, `v_A(D~) = 0`, `deg D~ = r <= g`, `l(D~ - A) = 0`, `l(D~) <= 1`.
pub fn check_reduced(ctx: &JacobianCtx, c: &ReducedClassRep) -> Result<()> {
    let dt = ctx.dtilde(c)?;
    if !dt.is_effective() {
        return Err(fail("D~ not effective"));
    }
    if dt.degree() != c.r() as i64 || c.r() > ctx.genus() {
        return Err(fail(format!("r = {} with deg D~ = {}", c.r(), dt.degree())));
    }
    if dt.valuation(ctx.base_place()) != 0 {
        return Err(fail("A in the support of D~"));
    }
    let a = Divisor::from_place(ctx.field(), ctx.base_place(), 1);
    if dimension(&dt.sub(&a)?)? != 0 || dimension(&dt)? > 1 {
        return Err(fail("D~ is not reduced"));
    }
    Ok(())
}

fn group_laws(field: &Field, seed: u64, rounds: usize) -> Result<()> {
    let mut ctx = JacobianCtx::new(field, Config::default())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = ctx.zero();
    for _ in 0..rounds {
        let a = ctx.random_element(&mut rng)?;
        let b = ctx.random_element(&mut rng)?;
        let c = ctx.random_element(&mut rng)?;
        if ctx.add(&a, &z)? != a {
            return Err(fail("a + 0 != a"));
        }
        let na = ctx.neg(&a)?;
        if ctx.add(&a, &na)? != z {
            return Err(fail("a - a != 0"));
        }
        let ab = ctx.add(&a, &b)?;
        if ab != ctx.add(&b, &a)? {
            return Err(fail("a + b != b + a"));
        }
        let bc = ctx.add(&b, &c)?;
        if ctx.add(&ab, &c)? != ctx.add(&a, &bc)? {
            return Err(fail("(a + b) + c != a + (b + c)"));
        }
        for x in [&a, &na, &ab, &bc] {
            check_reduced(&ctx, x)?;
        }
    }
    Ok(())
}

fn uniqueness(field: &Field, seed: u64, rounds: usize) -> Result<()> {
    let mut ctx = JacobianCtx::new(field, Config::default())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..rounds {
        let d = ctx.random_divisor(&mut rng)?;
        let h = field.random_element(&mut rng, 2, 1);
        if h.is_zero() {
            continue;
        }
        let dh = d.add(&Divisor::principal(field, &h)?)?;
        if ctx.reduce(&d)? != ctx.reduce(&dh)? {
            return Err(fail("reduce(D + div h) != reduce(D)"));
        }
    }
    Ok(())
}

fn strategies_agree(field: &Field, seed: u64, rounds: usize) -> Result<()> {
    let mut lin = JacobianCtx::new(field, Config::new(Strategy::Linear, false))?;
    let mut bin = JacobianCtx::new(field, Config::new(Strategy::Binary, true))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..rounds {
        let d = lin.random_divisor(&mut rng)?;
        if lin.reduce(&d)? != bin.reduce(&d)? {
            return Err(fail("linear and binary reductions differ"));
        }
    }
    Ok(())
}

/// Both strategies return the `r` and `div(a)` of the exhaustive scan.
pub fn oracle_agreement(field: &Field, seed: u64, rounds: usize) -> Result<()> {
    let mut lin = JacobianCtx::new(field, Config::new(Strategy::Linear, true))?;
    let mut bin = JacobianCtx::new(field, Config::new(Strategy::Binary, true))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..rounds {
        let d = lin.random_divisor(&mut rng)?;
        let (r0, a0) = oracles::brute_hr_min(&lin, &d)?;
        let div0 = Divisor::principal(field, &a0)?;
        for (r, a) in [lin.hr_min_linear(&d)?, bin.hr_min_binary(&d)?] {
            if r != r0 || Divisor::principal(field, &a)? != div0 {
                return Err(fail(format!("HR-Min gave r = {r}, oracle r = {r0}")));
            }
        }
    }
    Ok(())
}

/// `#Pic^0 * c = 0` for random `c`.
pub fn order_annihilates(field: &Field, seed: u64, rounds: usize) -> Result<u128> {
    let h = oracles::jacobian_order(field)?;
    let mut ctx = JacobianCtx::new(field, Config::default())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = i64::try_from(h).map_err(|_| fail("order too large"))?;
    for _ in 0..rounds {
        let c = ctx.random_element(&mut rng)?;
        if !ctx.scalar_mul(k, &c)?.is_zero() {
            return Err(fail(format!("{h} * c != 0")));
        }
    }
    Ok(h)
}

pub fn tiny_fields() -> Result<Vec<(String, Field)>> {
    Ok(vec![
        ("y^2+y=x^3/F2".into(), make_field(2, &[vec![0, 0, 0, -1], vec![1]])?),
        ("y^2+y=x^5/F2".into(), make_field(2, &[vec![0, 0, 0, 0, 0, -1], vec![1]])?),
        ("y^2=x^5+2x+1/F3".into(), make_field(3, &[vec![-1, -2, 0, 0, 0, -1], vec![]])?),
    ])
}

pub fn run(level: Level, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    let mut record = |name: String, r: Result<String>| {
        let (passed, detail) = match r {
            Ok(d) => (true, d),
            Err(e) => (false, e.to_string()),
        };
        out.push(Check { name, passed, detail });
    };
    let fields = match small_fields() {
        Ok(f) => f,
        Err(e) => {
            record("field construction".into(), Err(e));
            return out;
        }
    };
    for (name, f) in &fields {
        record(format!("group laws {name}"), group_laws(f, seed, 5).map(|_| String::new()));
        record(format!("uniqueness {name}"), uniqueness(f, seed + 1, 5).map(|_| String::new()));
        record(format!("strategies agree {name}"), strategies_agree(f, seed + 2, 5).map(|_| String::new()));
    }
    if level == Level::Full {
        for (name, f) in &fields {
            record(format!("oracle HR-Min {name}"), oracle_agreement(f, seed + 3, 10).map(|_| String::new()));
        }
        match tiny_fields() {
            Ok(tiny) => {
                for (name, f) in &tiny {
                    record(format!("order annihilation {name}"), order_annihilates(f, seed + 4, 10).map(|h| format!("order {h}")));
                }
            }
            Err(e) => record("tiny fields".into(), Err(e)),
        }
    }
    out
}
