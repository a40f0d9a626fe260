// Copyright (c) 2026, The pellsurf Authors
// SPDX-License-Identifier: Apache-2.0

//! The `pellsurf` command line.
//!
//! Exit codes: 0 on success, 1 on a domain error (bad point, non-fundamental
//! discriminant, failed verification), 2 on a usage error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::classmap::{
    class_of_point, coverage_of_points, image_scan, kernel_test, kernel_witness_search, point_to_form, tilde_form,
};
use crate::error::{Error, Result};
use crate::forms::FormClassGroup;
use crate::json::{triple, JsonInt};
use crate::qfield::FieldContext;
use crate::search::{
    axiom_suite, enumerate_points, gcd_power_check, homomorphism_suite, oracle_suite, SuiteReport,
    DEFAULT_ASSOC_SAMPLES, DEFAULT_SEED,
};
use crate::surface::{newpoint_test, parse_point_file, write_point_file, NewpointVerdict, SurfacePoint, YamamotoPoint};

/// Environment variable capping the worker thread count (0 or unset = automatic).
pub const THREADS_ENV: &str = "PELLSURF_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "pellsurf",
    version,
    about = "Group law and class maps on Pell surfaces Q0(B, C) = A^n"
)]
struct Cli {
    /// Emit one JSON object per result line.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Field {
    /// Fundamental discriminant.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_int)]
    delta: BigInt,
}

#[derive(Args, Debug)]
struct Level {
    #[command(flatten)]
    field: Field,
    /// Surface level n >= 1.
    #[arg(long)]
    n: u32,
}

#[derive(Args, Debug)]
struct OnePoint {
    #[command(flatten)]
    level: Level,
    /// Point as A,B,C.
    #[arg(allow_hyphen_values = true, value_parser = parse_triple)]
    point: Triple,
}

#[derive(Args, Debug)]
struct Cache {
    /// Class-group cache file (JSON object keyed by discriminant).
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Region {
    #[arg(long)]
    max_a: u64,
    /// Bound on |B| and |C|, used when delta > 0.
    #[arg(long = "box", default_value_t = 1)]
    box_bound: u64,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Show the field data for a discriminant.
    Ctx(Field),
    /// Validate a point.
    Check(OnePoint),
    /// Add two points.
    Add {
        #[command(flatten)]
        level: Level,
        #[arg(allow_hyphen_values = true, value_parser = parse_triple)]
        p: Triple,
        #[arg(allow_hyphen_values = true, value_parser = parse_triple)]
        q: Triple,
    },
    /// Negate a point.
    Neg(OnePoint),
    /// Scalar multiple k P.
    Mul {
        #[command(flatten)]
        pt: OnePoint,
        #[arg(long)]
        k: u64,
    },
    /// Lift a point from level m to level n.
    Lift {
        #[command(flatten)]
        field: Field,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(allow_hyphen_values = true, value_parser = parse_triple)]
        point: Triple,
    },
    /// Convert to or from Yamamoto coordinates X^2 - delta Y^2 = 4 Z^n.
    Yamamoto {
        #[command(flatten)]
        level: Level,
        /// Point A,B,C to convert.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple, conflicts_with = "from", required_unless_present = "from")]
        to: Option<Triple>,
        /// Yamamoto point X,Y,Z to convert back.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
        from: Option<Triple>,
    },
    /// Power-residue test for points not coming from lower levels.
    Newpoint {
        #[command(flatten)]
        pt: OnePoint,
        /// Prime p dividing n.
        #[arg(long)]
        p: u64,
    },
    /// The forms attached to a point.
    Toform(OnePoint),
    /// Class of a point in the narrow class group.
    Classof {
        #[command(flatten)]
        pt: OnePoint,
        #[command(flatten)]
        cache: Cache,
    },
    /// Decide whether a point maps to the trivial class.
    Kernel {
        #[command(flatten)]
        pt: OnePoint,
        /// Also search for a representation witness up to this bound.
        #[arg(long)]
        bound: Option<u64>,
        #[command(flatten)]
        cache: Cache,
    },
    /// Narrow class group with composition table.
    Classgroup {
        #[command(flatten)]
        field: Field,
        #[command(flatten)]
        cache: Cache,
    },
    /// The n-torsion subgroup.
    Torsion {
        #[command(flatten)]
        level: Level,
        #[command(flatten)]
        cache: Cache,
    },
    /// Enumerate points with |A| <= max-a.
    Enumerate {
        #[command(flatten)]
        level: Level,
        #[command(flatten)]
        region: Region,
        /// Write the points to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Which n-torsion classes the enumerated points reach.
    Scan {
        #[command(flatten)]
        level: Level,
        #[command(flatten)]
        region: Region,
        /// Use the points in this file instead of enumerating.
        #[arg(long)]
        points: Option<PathBuf>,
        #[command(flatten)]
        cache: Cache,
    },
    /// Run a verification suite on enumerated or supplied points.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[command(flatten)]
        level: Level,
        #[arg(long, default_value_t = 12)]
        max_a: u64,
        #[arg(long = "box", default_value_t = 1)]
        box_bound: u64,
        /// Use the points in this file instead of enumerating.
        #[arg(long)]
        points: Option<PathBuf>,
        /// Associativity triples to sample.
        #[arg(long, default_value_t = DEFAULT_ASSOC_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        cache: Cache,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Suite {
    Axioms,
    Gcdpower,
    Homomorphism,
    Oracle,
}

type Triple = (BigInt, BigInt, BigInt);

fn parse_int(s: &str) -> std::result::Result<BigInt, String> {
    s.trim().parse().map_err(|_| format!("{s:?} is not an integer"))
}

fn parse_triple(s: &str) -> std::result::Result<Triple, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected A,B,C but got {s:?}"));
    }
    Ok((parse_int(parts[0])?, parse_int(parts[1])?, parse_int(parts[2])?))
}

/// Runs the CLI with process stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI writing to the given streams. Returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) => t,
            Err(_) => {
                let _ = writeln!(err, "error: {THREADS_ENV} must be a non-negative integer");
                return 2;
            }
        },
        Err(_) => 0,
    };
    let result = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => {
            let (r, buf) = pool.install(|| {
                let mut buf = Vec::new();
                (dispatch(&cli, &mut buf), buf)
            });
            let _ = out.write_all(&buf);
            r
        }
        Err(e) => Err(Error::Internal(e.to_string())),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

struct Printer<'a> {
    json: bool,
    out: &'a mut dyn Write,
}

impl Printer<'_> {
    fn emit(&mut self, text: impl AsRef<str>, value: Value) -> Result<()> {
        let line = if self.json {
            value.to_string()
        } else {
            text.as_ref().to_string()
        };
        writeln!(self.out, "{line}").map_err(|e| Error::Internal(e.to_string()))
    }
}

fn pt_json(p: &SurfacePoint) -> Value {
    json!(triple(p.a(), p.b(), p.c()))
}

fn form_json(f: &crate::forms::QuadraticForm) -> Value {
    json!(triple(&f.a, &f.b, &f.c))
}

fn point(ctx: &FieldContext, n: u32, t: &Triple) -> Result<SurfacePoint> {
    SurfacePoint::new(ctx, n, t.0.clone(), t.1.clone(), t.2.clone())
}

fn load_point_file(path: &Path, ctx: &FieldContext, n: u32) -> Result<Vec<Triple>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let file = parse_point_file(&text)?;
    if let Some(d) = &file.delta {
        if d != ctx.delta() {
            return Err(Error::Parse(format!(
                "{}: header delta {d} does not match --delta {}",
                path.display(),
                ctx.delta()
            )));
        }
    }
    if let Some(m) = file.n {
        if m != n {
            return Err(Error::MixedLevels(n, m));
        }
    }
    Ok(file.points)
}

/// Computes the class group, going through the cache file when one is given.
///
/// A cached entry is revalidated on load; a missing entry is computed and written back.
pub fn class_group_cached(ctx: &FieldContext, cache: Option<&Path>) -> Result<FormClassGroup> {
    let Some(path) = cache else {
        return FormClassGroup::new(ctx);
    };
    let io = |e: std::io::Error| Error::Parse(format!("{}: {e}", path.display()));
    let mut entries: BTreeMap<String, Value> = if path.exists() {
        let text = std::fs::read_to_string(path).map_err(io)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
    } else {
        BTreeMap::new()
    };
    let key = ctx.delta().to_string();
    if let Some(v) = entries.get(&key) {
        let g = FormClassGroup::from_json_value(v.clone())?;
        if g.delta() != ctx.delta() {
            return Err(Error::Parse(format!("cache entry {key} has delta {}", g.delta())));
        }
        return Ok(g);
    }
    let g = FormClassGroup::new(ctx)?;
    entries.insert(key, g.to_json_value());
    let text = serde_json::to_string_pretty(&entries).map_err(|e| Error::Internal(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(io)?;
    Ok(g)
}

fn suite_exit(p: &mut Printer<'_>, rep: &SuiteReport) -> Result<i32> {
    let mut text = format!(
        "{} delta={} n={} points={} {}",
        rep.suite,
        rep.delta,
        rep.n,
        rep.points,
        if rep.passed { "PASS" } else { "FAIL" }
    );
    for (k, v) in &rep.checks {
        text.push_str(&format!(" {k}={v}"));
    }
    for f in &rep.failures {
        text.push_str(&format!("\n  {}: {}", f.check, f.detail));
    }
    let value = serde_json::to_value(rep).map_err(|e| Error::Internal(e.to_string()))?;
    p.emit(text, value)?;
    Ok(if rep.passed { 0 } else { 1 })
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let mut p = Printer { json: cli.json, out };
    match &cli.cmd {
        Cmd::Ctx(f) => {
            let ctx = FieldContext::new(f.delta.clone())?;
            let v = json!({
                "delta": JsonInt::from(ctx.delta()),
                "m": JsonInt::from(ctx.m()),
                "sigma": ctx.sigma(),
                "imaginary": ctx.is_imaginary(),
            });
            p.emit(ctx.to_string(), v)?;
        }
        Cmd::Check(a) => {
            let ctx = FieldContext::new(a.level.field.delta.clone())?;
            let pt = point(&ctx, a.level.n, &a.point)?;
            p.emit(format!("ok {pt}"), json!({"point": pt_json(&pt), "valid": true}))?;
        }
        Cmd::Add { level, p: a, q: b } => {
            let ctx = FieldContext::new(level.field.delta.clone())?;
            let x = point(&ctx, level.n, a)?;
            let y = point(&ctx, level.n, b)?;
            let (s, e) = x.add_traced(&ctx, &y)?;
            p.emit(s.to_string(), json!({"point": pt_json(&s), "e": JsonInt::from(e)}))?;
        }
        Cmd::Neg(a) => {
            let ctx = FieldContext::new(a.level.field.delta.clone())?;
            let s = point(&ctx, a.level.n, &a.point)?.negate(&ctx);
            p.emit(s.to_string(), json!({"point": pt_json(&s)}))?;
        }
        Cmd::Mul { pt, k } => {
            let ctx = FieldContext::new(pt.level.field.delta.clone())?;
            let s = point(&ctx, pt.level.n, &pt.point)?.scalar_mul(&ctx, *k)?;
            p.emit(s.to_string(), json!({"point": pt_json(&s), "k": k}))?;
        }
        Cmd::Lift { field, m, n, point: t } => {
            let ctx = FieldContext::new(field.delta.clone())?;
            let s = point(&ctx, *m, t)?.lift(&ctx, *n)?;
            p.emit(s.to_string(), json!({"point": pt_json(&s), "n": n}))?;
        }
        Cmd::Yamamoto { level, to, from } => {
            let ctx = FieldContext::new(level.field.delta.clone())?;
            if let Some(t) = to {
                let y = point(&ctx, level.n, t)?.to_yamamoto(&ctx);
                p.emit(y.to_string(), json!({"yamamoto": triple(&y.x, &y.y, &y.z)}))?;
            } else if let Some((x, y, z)) = from {
                let yp = YamamotoPoint::new(x.clone(), y.clone(), z.clone());
                let s = SurfacePoint::from_yamamoto(&ctx, level.n, &yp)?;
                p.emit(s.to_string(), json!({"point": pt_json(&s)}))?;
            }
        }
        Cmd::Newpoint { pt, p: prime } => {
            let ctx = FieldContext::new(pt.level.field.delta.clone())?;
            let s = point(&ctx, pt.level.n, &pt.point)?;
            let verdict = match newpoint_test(&ctx, &s, *prime)? {
                NewpointVerdict::ProvenNew => "proven-new",
                NewpointVerdict::Inconclusive => "inconclusive",
            };
            p.emit(verdict, json!({"point": pt_json(&s), "p": prime, "verdict": verdict}))?;
        }
        Cmd::Toform(a) => {
            let ctx = FieldContext::new(a.level.field.delta.clone())?;
            let s = point(&ctx, a.level.n, &a.point)?;
            let tilde = tilde_form(&ctx, &s)?;
            let q = point_to_form(&ctx, &s)?;
            let r = q.reduced()?;
            p.emit(
                format!("form {q} reduced {r} tilde {tilde}"),
                json!({"form": form_json(&q), "reduced": form_json(&r), "tilde": form_json(&tilde)}),
            )?;
        }
        Cmd::Classof { pt, cache } => {
            let ctx = FieldContext::new(pt.level.field.delta.clone())?;
            let s = point(&ctx, pt.level.n, &pt.point)?;
            let g = class_group_cached(&ctx, cache.cache.as_deref())?;
            let i = class_of_point(&g, &ctx, &s)?;
            let rep = &g.reps()[i];
            p.emit(
                format!("class {i} {rep} order {}", g.element_order(i)),
                json!({"point": pt_json(&s), "class": i, "rep": form_json(rep), "order": g.element_order(i)}),
            )?;
        }
        Cmd::Kernel { pt, bound, cache } => {
            let ctx = FieldContext::new(pt.level.field.delta.clone())?;
            let s = point(&ctx, pt.level.n, &pt.point)?;
            let g = class_group_cached(&ctx, cache.cache.as_deref())?;
            let in_kernel = kernel_test(&g, &ctx, &s)?;
            let mut text = format!("kernel={in_kernel}");
            let mut v = json!({"point": pt_json(&s), "kernel": in_kernel});
            if let Some(b) = bound {
                let w = kernel_witness_search(&ctx, &s, *b)?;
                match &w.witness {
                    Some((t, u)) => text.push_str(&format!(" witness={t},{u}")),
                    None => text.push_str(" witness=none"),
                }
                text.push_str(&format!(" conclusive={}", w.conclusive));
                v["witness"] = match &w.witness {
                    Some((t, u)) => json!([JsonInt::from(t), JsonInt::from(u)]),
                    None => Value::Null,
                };
                v["conclusive"] = json!(w.conclusive);
            }
            p.emit(text, v)?;
        }
        Cmd::Classgroup { field, cache } => {
            let ctx = FieldContext::new(field.delta.clone())?;
            let g = class_group_cached(&ctx, cache.cache.as_deref())?;
            let mut text = format!("order {}", g.order());
            for (i, r) in g.reps().iter().enumerate() {
                let mark = if i == g.identity() { " identity" } else { "" };
                text.push_str(&format!("\n{i} {r} order {}{mark}", g.element_order(i)));
            }
            p.emit(text, g.to_json_value())?;
        }
        Cmd::Torsion { level, cache } => {
            let ctx = FieldContext::new(level.field.delta.clone())?;
            let g = class_group_cached(&ctx, cache.cache.as_deref())?;
            let t = g.torsion_subgroup(u64::from(level.n));
            let reps: Vec<Value> = t.iter().map(|&i| form_json(&g.reps()[i])).collect();
            let text = t
                .iter()
                .map(|&i| format!("{i} {}", g.reps()[i]))
                .collect::<Vec<_>>()
                .join("\n");
            p.emit(
                format!("order {}\n{text}", t.len()),
                json!({"delta": JsonInt::from(ctx.delta()), "n": level.n, "classes": t, "reps": reps}),
            )?;
        }
        Cmd::Enumerate { level, region, out } => {
            let ctx = FieldContext::new(level.field.delta.clone())?;
            let rep = enumerate_points(&ctx, level.n, region.max_a, region.box_bound)?;
            match out {
                Some(path) => {
                    let text = if cli.json {
                        rep.to_json_value().to_string() + "\n"
                    } else {
                        write_point_file(ctx.delta(), level.n, &rep.points)
                    };
                    std::fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                    p.emit(
                        format!("wrote {} points to {}", rep.points.len(), path.display()),
                        json!({"points": rep.points.len(), "out": path.display().to_string(), "complete": rep.complete}),
                    )?;
                }
                None => {
                    let text = write_point_file(ctx.delta(), level.n, &rep.points);
                    p.emit(text.trim_end(), rep.to_json_value())?;
                }
            }
        }
        Cmd::Scan {
            level,
            region,
            points,
            cache,
        } => {
            let ctx = FieldContext::new(level.field.delta.clone())?;
            let g = class_group_cached(&ctx, cache.cache.as_deref())?;
            let rep = match points {
                Some(path) => {
                    let pts = load_point_file(path, &ctx, level.n)?
                        .iter()
                        .map(|t| point(&ctx, level.n, t))
                        .collect::<Result<Vec<_>>>()?;
                    coverage_of_points(&g, &ctx, level.n, region.max_a, &pts)?
                }
                None => image_scan(&g, &ctx, level.n, region.max_a, region.box_bound)?,
            };
            let text = format!(
                "hit {:?} torsion {:?} surjective={}",
                rep.hit_classes, rep.torsion, rep.surjective
            );
            let v = serde_json::to_value(&rep).map_err(|e| Error::Internal(e.to_string()))?;
            p.emit(text, v)?;
        }
        Cmd::Verify {
            suite,
            level,
            max_a,
            box_bound,
            points,
            samples,
            seed,
            cache,
        } => {
            let ctx = FieldContext::new(level.field.delta.clone())?;
            let n = level.n;
            let raw: Vec<Triple> = match points {
                Some(path) => load_point_file(path, &ctx, n)?,
                None => enumerate_points(&ctx, n, *max_a, *box_bound)?
                    .points
                    .iter()
                    .map(|p| p.coords())
                    .collect(),
            };
            let rep = match suite {
                Suite::Axioms => axiom_suite(&ctx, n, &raw, *samples, *seed),
                other => {
                    let pts = raw.iter().map(|t| point(&ctx, n, t)).collect::<Result<Vec<_>>>()?;
                    match other {
                        Suite::Gcdpower => gcd_power_check(&ctx, n, &pts),
                        Suite::Homomorphism => {
                            let g = class_group_cached(&ctx, cache.cache.as_deref())?;
                            homomorphism_suite(&g, &ctx, n, &pts)
                        }
                        Suite::Oracle => oracle_suite(&ctx, n, &pts),
                        Suite::Axioms => unreachable!(),
                    }
                }
            };
            return suite_exit(&mut p, &rep);
        }
    }
    Ok(0)
}
