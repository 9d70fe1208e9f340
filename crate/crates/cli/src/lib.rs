//! The `cmkit` command-line front end: curve files in, JSON reports out.

pub mod cache;
pub mod report;
pub mod spec;

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use cmkit_core::algebra::{IntPoly, PrimePower};
use cmkit_core::curves::{CurveDescriptor, EllipticCurveData};
use cmkit_core::motive::{
    assemble_zeta, cm_tensor_decompose, kunneth, match_decompositions, recurrence_discrepancies, Level, MatchEntry,
    MatchOutcome, MatchSide,
};
use cmkit_core::quadfield::{verify_lemma62, WeilNumber};
use cmkit_core::ranks::{bb_rank, l_euler_compare, picard_number, tate_class_dim};
use num_bigint::BigInt;
use serde_json::{json, Value};

use cache::PointCountCache;
use report::int;
use spec::{load_curve, parse_integer, CurveSpec};

/// A domain error, reported as `{"error": code, "detail": ...}` with exit code 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: String,
    pub detail: String,
}

impl CliError {
    pub fn new(code: &str, detail: String) -> Self {
        Self { code: code.to_string(), detail }
    }

    pub fn spec(detail: String) -> Self {
        Self::new("InvalidCurveSpec", detail)
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": self.code, "detail": self.detail })
    }
}

const WRAPPERS: [&str; 6] = ["Curve", "Motive", "Algebra", "Field", "Rank", "Quad"];

/// The innermost variant name of a (possibly wrapped) error.
fn variant_name(debug: &str) -> String {
    let end = debug.find(['(', ')', ' ', '{']).unwrap_or(debug.len());
    let name = &debug[..end];
    if WRAPPERS.contains(&name) && debug[end..].starts_with('(') {
        return variant_name(&debug[end + 1..]);
    }
    name.to_string()
}

macro_rules! domain_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::new(&variant_name(&format!("{e:?}")), e.to_string())
            }
        }
    )*};
}

domain_error!(
    cmkit_core::curves::CurveError,
    cmkit_core::motive::MotiveError,
    cmkit_core::ranks::RankError,
    cmkit_core::quadfield::QuadError,
    cmkit_core::algebra::AlgebraError
);

#[derive(Debug, Parser)]
#[command(name = "cmkit", version, about = "Frobenius and motivic invariants of powers of CM elliptic curves")]
pub struct Cli {
    /// Point-count cache (JSON lines); defaults to $CMKIT_CACHE.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LevelArg {
    F,
    Q,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trace, ordinarity and CM data of an elliptic curve.
    Classify {
        #[arg(long)]
        curve: PathBuf,
    },
    /// Zeta function of E^g (or E^g x C) with point-count cross-check.
    Zeta {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value_t = 1)]
        power: u32,
        #[arg(long)]
        base: Option<PathBuf>,
        /// Number of extension degrees to compare.
        #[arg(long, default_value_t = 6)]
        counts: usize,
    },
    /// Decomposition of the g-fold tensor power of h1(E), or of h^n with --degree.
    Decompose {
        #[arg(long)]
        g: u32,
        #[arg(long, value_enum, default_value = "q", ignore_case = true)]
        level: LevelArg,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        base: Option<PathBuf>,
    },
    /// Dimension of Tate classes in H^{2i}.
    TateRank {
        #[arg(long, alias = "fiber")]
        curve: PathBuf,
        #[arg(long)]
        power: u32,
        #[arg(long)]
        codim: u32,
        #[arg(long)]
        base: Option<PathBuf>,
    },
    /// Picard number with the closed-form cross-check.
    Picard {
        #[arg(long, alias = "fiber")]
        curve: PathBuf,
        #[arg(long)]
        power: u32,
        #[arg(long)]
        base: Option<PathBuf>,
    },
    /// Predicted rank: order of vanishing of L(H^{2i-1}(E^g)) over the base.
    BbRank {
        #[arg(long, alias = "curve")]
        fiber: PathBuf,
        #[arg(long)]
        power: u32,
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        codim: u32,
    },
    /// Euler product versus cohomological L-function.
    Lcheck {
        #[arg(long, alias = "curve")]
        fiber: PathBuf,
        #[arg(long)]
        power: u32,
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        codim: u32,
        #[arg(long, default_value_t = 6)]
        order: usize,
        /// Comma-separated P1 used on the cohomological side only.
        #[arg(long)]
        override_p1: Option<String>,
    },
    /// Exhaustive check of the multiplicative independence of Frobenius.
    WeilVerify {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value_t = 5)]
        max_r: u32,
        #[arg(long, default_value_t = 5)]
        max_s: u32,
    },
    /// Matches two decompositions by their Frobenius polynomials.
    Match {
        #[arg(long)]
        input: PathBuf,
    },
}

pub struct Context {
    pub cache: PointCountCache,
}

impl Context {
    pub fn new(cache_path: Option<&Path>) -> Self {
        let cache = match cache_path {
            Some(p) => PointCountCache::open(p),
            None => PointCountCache::disabled(),
        };
        Self { cache }
    }

    /// `|E(F_{q^n})|`, through the cache.
    fn point_count(&mut self, spec: &CurveSpec, curve: &EllipticCurveData, n: u32) -> Result<BigInt, CliError> {
        let id = spec.curve_id();
        if let Some(c) = self.cache.get(&id, n) {
            return Ok(c.clone());
        }
        let count = curve.point_count(n)?;
        self.cache.insert(&id, n, &count);
        Ok(count)
    }
}

fn load_base(path: Option<&PathBuf>) -> Result<Option<CurveSpec>, CliError> {
    path.map(|p| load_curve(p)).transpose()
}

fn witnesses(w: &[String]) -> Value {
    Value::Array(w.iter().map(|s| json!(s)).collect())
}

pub fn execute(cmd: &Command, ctx: &mut Context) -> Result<Value, CliError> {
    match cmd {
        Command::Classify { curve } => {
            let spec = load_curve(curve)?;
            let e = spec.elliptic()?;
            let cm = e.classify();
            let count = ctx.point_count(&spec, &e, 1)?;
            Ok(json!({
                "q": int(e.q()),
                "trace": int(e.trace()),
                "point_count": int(count),
                "ordinary": e.is_ordinary(),
                "classification": cm.classification.to_string(),
                "cm_disc": int(cm.cm_disc),
                "cm_m": cm.m.map(int),
                "conductor": cm.conductor.map(int),
                "alpha": e.alpha().map(|a| report::element(a.value())),
            }))
        }
        Command::Zeta { curve, power, base, counts } => {
            let spec = load_curve(curve)?;
            let e = spec.elliptic()?;
            let base = load_base(base.as_ref())?;
            let base_desc = base.as_ref().map(|b| &b.descriptor);
            let z = assemble_zeta(&e, *power, base_desc)?;
            let from_zeta = z.point_counts(*counts)?;
            let base_counts = match base_desc {
                Some(c) => c.point_counts(*counts)?,
                None => vec![BigInt::from(1); *counts],
            };
            let mut fiber = Vec::with_capacity(*counts);
            for n in 1..=*counts as u32 {
                fiber.push(ctx.point_count(&spec, &e, n)?);
            }
            let expected: Vec<BigInt> = fiber
                .iter()
                .zip(&base_counts)
                .map(|(f, b)| num_traits::pow(f.clone(), *power as usize) * b)
                .collect();
            Ok(json!({
                "q": int(z.q),
                "dimension": int(z.dimension),
                "parts": z.parts.iter().map(report::poly).collect::<Vec<_>>(),
                "point_counts": from_zeta.iter().map(int).collect::<Vec<_>>(),
                "fiber_counts": fiber.iter().map(int).collect::<Vec<_>>(),
                "consistent": from_zeta == expected,
            }))
        }
        Command::Decompose { g, level, degree, base } => {
            let level = match level {
                LevelArg::F => Level::F,
                LevelArg::Q => Level::Q,
            };
            let base = load_base(base.as_ref())?;
            let base_desc = base.as_ref().map(|b| &b.descriptor);
            let genus = base_desc.map_or(0, CurveDescriptor::genus);
            let d = match degree {
                Some(n) => kunneth(*g, *n, base_desc, level)?,
                None => cm_tensor_decompose(*g, level),
            };
            let mut out = report::decomposition(&d);
            let obj = out.as_object_mut().expect("object");
            obj.insert("dimension".into(), int(d.to_q_level().dimension(genus)));
            obj.insert("total_multiplicity".into(), int(d.total_multiplicity()));
            if degree.is_none() {
                let disc: Vec<Value> = recurrence_discrepancies(*g)
                    .iter()
                    .map(|r| {
                        json!({
                            "i": int(r.i),
                            "j": int(r.j),
                            "recurrence": int(&r.recurrence),
                            "q_level": int(&r.q_level),
                            "f_level_plain": int(r.f_level_plain),
                        })
                    })
                    .collect();
                obj.insert("recurrence_discrepancies".into(), Value::Array(disc));
            }
            Ok(out)
        }
        Command::TateRank { curve, power, codim, base } => {
            let e = load_curve(curve)?.elliptic()?;
            let base = load_base(base.as_ref())?;
            let r = tate_class_dim(&e, *power, *codim, base.as_ref().map(|b| &b.descriptor))?;
            Ok(json!({
                "tate_dim": int(r.tate_dim),
                "predicted_chow_dim": int(r.predicted_chow_dim),
                "witnesses": witnesses(&r.witnesses),
            }))
        }
        Command::Picard { curve, power, base } => {
            let e = load_curve(curve)?.elliptic()?;
            let base = load_base(base.as_ref())?;
            let r = picard_number(&e, *power, base.as_ref().map(|b| &b.descriptor))?;
            Ok(json!({
                "picard": int(r.picard),
                "closed_form": int(r.closed_form),
                "hom_rank": r.hom_rank.map(int),
                "witnesses": witnesses(&r.witnesses),
            }))
        }
        Command::BbRank { fiber, power, base, codim } => {
            let e = load_curve(fiber)?.elliptic()?;
            let c = load_curve(base)?.descriptor;
            let r = bb_rank(&e, *power, *codim, &c)?;
            Ok(json!({
                "bb_rank": int(r.bb_rank),
                "order_of_vanishing": int(r.order_of_vanishing),
                "prediction_only": r.prediction_only,
                "witnesses": witnesses(&r.witnesses),
            }))
        }
        Command::Lcheck { fiber, power, base, codim, order, override_p1 } => {
            let e = load_curve(fiber)?.elliptic()?;
            let c = load_curve(base)?.descriptor;
            let p1 = match override_p1 {
                Some(text) => parse_poly(text)?,
                None => c.p1(),
            };
            let r = l_euler_compare(&e, *power, *codim, &c, &p1, *order)?;
            Ok(json!({
                "passed": r.passed(),
                "order": int(r.order),
                "first_mismatch": r.first_mismatch.map(int),
                "euler": r.euler.iter().map(report::rational).collect::<Vec<_>>(),
                "cohomological": r.cohomological.iter().map(report::rational).collect::<Vec<_>>(),
            }))
        }
        Command::WeilVerify { curve, max_r, max_s } => {
            let e = load_curve(curve)?.elliptic()?;
            let alpha = e.alpha().ok_or_else(|| CliError::new("NotOrdinary", "no Frobenius root in an imaginary quadratic field".into()))?;
            let r = verify_lemma62(alpha, *max_r, *max_s)?;
            Ok(json!({
                "alpha": report::element(alpha.value()),
                "cm_m": int(alpha.field().m()),
                "valuations": [int(r.valuations.0), int(r.valuations.1)],
                "checks": int(r.checks),
                "passed": r.passed(),
                "witnesses": r.witnesses.iter().map(|w| json!(w.to_string())).collect::<Vec<_>>(),
            }))
        }
        Command::Match { input } => run_match(input),
    }
}

fn parse_poly(text: &str) -> Result<IntPoly, CliError> {
    let coeffs = text
        .split(',')
        .map(|c| c.trim().parse::<BigInt>().map_err(|_| CliError::new("InvalidPolynomial", text.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntPoly::new(coeffs))
}

fn run_match(path: &Path) -> Result<Value, CliError> {
    let bad = |d: String| CliError::new("InvalidMatchInput", d);
    let text = std::fs::read_to_string(path).map_err(|e| CliError::new("Io", format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| bad("expected an object".into()))?;
    if let Some(k) = obj.keys().find(|k| !["q", "fields", "left", "right"].contains(&k.as_str())) {
        return Err(bad(format!("unknown key \"{k}\"")));
    }
    let q = obj
        .get("q")
        .and_then(parse_integer)
        .and_then(|q| u64::try_from(q).ok())
        .ok_or_else(|| bad("\"q\" must be an integer".into()))?;
    let q = PrimePower::from_value(q)?;
    let mut alphas = BTreeMap::new();
    for (m, trace) in obj.get("fields").and_then(Value::as_object).ok_or_else(|| bad("\"fields\" must map m to a trace".into()))? {
        let m: i64 = m.parse().map_err(|_| bad(format!("bad field key {m}")))?;
        let a = parse_integer(trace)
            .and_then(|a| i64::try_from(a).ok())
            .ok_or_else(|| bad(format!("bad trace for m = {m}")))?;
        let alpha = WeilNumber::frobenius(q, a).ok_or_else(|| bad(format!("trace {a} has no imaginary Frobenius root")))?;
        if alpha.field().m() != m {
            return Err(bad(format!("trace {a} gives Q(√{}), not Q(√{m})", alpha.field().m())));
        }
        alphas.insert(m, alpha);
    }
    let entries = |key: &str| -> Result<Vec<MatchEntry>, CliError> {
        obj.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| bad(format!("\"{key}\" must be an array")))?
            .iter()
            .map(|e| {
                let get = |k: &str| e.get(k).and_then(parse_integer).and_then(|v| i64::try_from(v).ok());
                match (get("m"), get("r"), get("s")) {
                    (Some(m), Some(r), Some(s)) if r >= 0 => Ok(MatchEntry { m, r: r as u32, s }),
                    _ => Err(bad(format!("bad entry {e}"))),
                }
            })
            .collect()
    };
    let outcome = match_decompositions(&entries("left")?, &entries("right")?, &alphas)?;
    Ok(match outcome {
        MatchOutcome::Matched(perm) => json!({ "matched": true, "permutation": perm.iter().map(int).collect::<Vec<_>>() }),
        MatchOutcome::NoMatch { side, index, poly } => json!({
            "matched": false,
            "unmatched": {
                "side": match side { MatchSide::Left => "left", MatchSide::Right => "right" },
                "index": int(index),
                "polynomial": poly,
            },
        }),
    })
}

/// Parses arguments, runs the command and returns `(exit code, stdout)`.
pub fn run<I, T>(args: I, env_cache: Option<PathBuf>) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if e.use_stderr() {
                eprint!("{e}");
                return (code, String::new());
            }
            return (code, e.to_string());
        }
    };
    let cache_path = cli.cache.clone().or(env_cache);
    let mut ctx = Context::new(cache_path.as_deref());
    match execute(&cli.command, &mut ctx) {
        Ok(v) => (0, render(&v)),
        Err(e) => (1, render(&e.to_json())),
    }
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}
