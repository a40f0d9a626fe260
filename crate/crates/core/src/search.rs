// Copyright (c) 2026, The pellsurf Authors
// SPDX-License-Identifier: Apache-2.0

//! Point enumeration and the exhaustive verification suites built on it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classmap::{class_of_point, point_ideal, point_to_form};
use crate::error::{Error, Result};
use crate::forms::FormClassGroup;
use crate::ideals::IntegralIdeal;
use crate::json::{triple, JsonInt};
use crate::qfield::{gcd, integer_nth_root, perfect_square_root, FieldContext};
use crate::surface::SurfacePoint;

/// Default number of sampled associativity triples.
pub const DEFAULT_ASSOC_SAMPLES: usize = 2000;
/// Default seed for the associativity sampler.
pub const DEFAULT_SEED: u64 = 0x5eed_2009;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationReport {
    pub delta: BigInt,
    pub n: u32,
    pub max_a: u64,
    pub box_bound: u64,
    /// True when the list is every point with `|A| <= max_a`; false when it is only complete inside the box.
    pub complete: bool,
    /// Sorted by `(A, B, C)`, no duplicates.
    pub points: Vec<SurfacePoint>,
    /// Number of points per `|A|`.
    pub stats: BTreeMap<u64, usize>,
}

#[derive(Serialize, Deserialize)]
struct EnumerationJson {
    delta: JsonInt,
    n: u32,
    max_a: u64,
    #[serde(rename = "box")]
    box_bound: u64,
    complete: bool,
    points: Vec<[JsonInt; 3]>,
    stats: Vec<AStat>,
}

#[derive(Serialize, Deserialize)]
struct AStat {
    abs_a: u64,
    count: usize,
}

impl EnumerationReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        let j = EnumerationJson {
            delta: (&self.delta).into(),
            n: self.n,
            max_a: self.max_a,
            box_bound: self.box_bound,
            complete: self.complete,
            points: self.points.iter().map(|p| triple(p.a(), p.b(), p.c())).collect(),
            stats: self
                .stats
                .iter()
                .map(|(&abs_a, &count)| AStat { abs_a, count })
                .collect(),
        };
        serde_json::to_value(j).expect("report serializes")
    }

    /// Parses and revalidates every point.
    pub fn from_json_value(v: serde_json::Value) -> Result<Self> {
        let j: EnumerationJson = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
        let ctx = FieldContext::new(j.delta.0.clone())?;
        let points = j
            .points
            .into_iter()
            .map(|[a, b, c]| SurfacePoint::new(&ctx, j.n, a.0, b.0, c.0))
            .collect::<Result<Vec<_>>>()?;
        Ok(EnumerationReport {
            delta: j.delta.0,
            n: j.n,
            max_a: j.max_a,
            box_bound: j.box_bound,
            complete: j.complete,
            points,
            stats: j.stats.into_iter().map(|s| (s.abs_a, s.count)).collect(),
        })
    }
}

/// All primitive points with `1 <= |A| <= max_a`.
///
/// For `delta < 0` the search is complete: `4 A^n = (2B + sigma C)^2 + |delta| C^2`
/// bounds `C`, and `B` comes from solving the quadratic exactly. For `delta > 0`
/// only points with `|B|, |C| <= box_bound` are found. Negative `A` occurs only for
/// odd `n` and `delta > 0`.
pub fn enumerate_points(ctx: &FieldContext, n: u32, max_a: u64, box_bound: u64) -> Result<EnumerationReport> {
    if n == 0 {
        return Err(Error::BadLevel);
    }
    if max_a == 0 || box_bound == 0 {
        return Err(Error::PreconditionViolated("max_a and box must be at least 1".into()));
    }
    let mut a_values: Vec<i64> = Vec::new();
    for a in 1..=max_a {
        let a = i64::try_from(a).map_err(|_| Error::PreconditionViolated("max_a too large".into()))?;
        a_values.push(a);
        if n % 2 == 1 && !ctx.is_imaginary() {
            a_values.push(-a);
        }
    }
    let per_a: Vec<Vec<SurfacePoint>> = a_values
        .par_iter()
        .map(|&a| points_with_a(ctx, n, &BigInt::from(a), box_bound))
        .collect();
    let mut points: Vec<SurfacePoint> = per_a.into_iter().flatten().collect();
    points.sort_by_key(|p| p.coords());
    points.dedup();
    let mut stats = BTreeMap::new();
    for p in &points {
        let abs_a = p.a().abs().to_u64().expect("|A| <= max_a");
        *stats.entry(abs_a).or_insert(0) += 1;
    }
    Ok(EnumerationReport {
        delta: ctx.delta().clone(),
        n,
        max_a,
        box_bound,
        complete: ctx.is_imaginary(),
        points,
        stats,
    })
}

fn points_with_a(ctx: &FieldContext, n: u32, a: &BigInt, box_bound: u64) -> Vec<SurfacePoint> {
    let norm = num_traits::pow::pow(a.clone(), n as usize);
    let four_n = BigInt::from(4) * &norm;
    let box_big = BigInt::from(box_bound);
    let c_max = if ctx.is_imaginary() {
        (&four_n / ctx.delta().abs()).sqrt()
    } else {
        box_big.clone()
    };
    let sigma = ctx.sigma_big();
    let mut out = Vec::new();
    let mut c = -&c_max;
    while c <= c_max {
        // B^2 + sigma C B - (m C^2 + A^n) = 0 has discriminant delta C^2 + 4 A^n
        let disc = ctx.delta() * &c * &c + &four_n;
        if let Some(root) = perfect_square_root(&disc) {
            for r in [root.clone(), -&root] {
                let num = -&sigma * &c + r;
                if num.is_odd() {
                    continue;
                }
                let b: BigInt = num / 2;
                if !ctx.is_imaginary() && b.abs() > box_big {
                    continue;
                }
                if let Ok(p) = SurfacePoint::new(ctx, n, a.clone(), b, c.clone()) {
                    out.push(p);
                }
            }
        }
        c += 1;
    }
    out
}

/// One failed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub check: String,
    pub detail: String,
}

/// Result of a verification suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub delta: JsonInt,
    pub n: u32,
    pub points: usize,
    /// Number of individual checks run, per check name.
    pub checks: BTreeMap<String, usize>,
    pub failures: Vec<Failure>,
    pub passed: bool,
}

impl SuiteReport {
    fn new(suite: &str, ctx: &FieldContext, n: u32, points: usize) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            delta: ctx.delta().into(),
            n,
            points,
            checks: BTreeMap::new(),
            failures: Vec::new(),
            passed: true,
        }
    }

    fn record(&mut self, check: &str, ok: bool, detail: impl FnOnce() -> String) {
        *self.checks.entry(check.to_string()).or_insert(0) += 1;
        if !ok {
            self.passed = false;
            self.failures.push(Failure {
                check: check.to_string(),
                detail: detail(),
            });
        }
    }

    pub fn failure_count(&self) -> usize {
        self.failures.len()
    }
}

fn show(p: &(BigInt, BigInt, BigInt)) -> String {
    format!("{},{},{}", p.0, p.1, p.2)
}

/// Group axioms on a point set given as raw coordinates.
///
/// Every input is validated first; invalid inputs are reported as closure failures.
/// Closure, commutativity, identity and inverses are checked exhaustively;
/// associativity on `samples` triples drawn by a ChaCha8 generator seeded with `seed`.
pub fn axiom_suite(
    ctx: &FieldContext,
    n: u32,
    raw: &[(BigInt, BigInt, BigInt)],
    samples: usize,
    seed: u64,
) -> SuiteReport {
    let mut rep = SuiteReport::new("axioms", ctx, n, raw.len());
    let mut pts = Vec::with_capacity(raw.len());
    for r in raw {
        match SurfacePoint::new(ctx, n, r.0.clone(), r.1.clone(), r.2.clone()) {
            Ok(p) => {
                rep.record("closure", true, String::new);
                pts.push(p);
            }
            Err(e) => rep.record("closure", false, || format!("input {} rejected: {e}", show(r))),
        }
    }
    let id = SurfacePoint::identity(n);
    let len = pts.len();
    let mut sums: Vec<Vec<Option<SurfacePoint>>> = vec![vec![None; len]; len];
    for i in 0..len {
        for j in i..len {
            match pts[i].add(ctx, &pts[j]) {
                Ok(s) => {
                    rep.record("closure", true, String::new);
                    sums[i][j] = Some(s);
                }
                Err(e) => rep.record("closure", false, || format!("{} + {}: {e}", pts[i], pts[j])),
            }
        }
    }
    for i in 0..len {
        for j in (i + 1)..len {
            let other = pts[j].add(ctx, &pts[i]).ok();
            rep.record("commutativity", other == sums[i][j], || {
                format!("{} + {} != {} + {}", pts[i], pts[j], pts[j], pts[i])
            });
        }
    }
    for p in &pts {
        let ok = p.add(ctx, &id).as_ref() == Ok(p) && id.add(ctx, p).as_ref() == Ok(p);
        rep.record("identity", ok, || format!("{p} + identity != {p}"));
        let neg = p.negate(ctx);
        let (a, b, c) = neg.coords();
        let valid = SurfacePoint::new(ctx, n, a, b, c).is_ok();
        let ok = valid && p.add(ctx, &neg).map(|s| s.is_identity()).unwrap_or(false);
        rep.record("inverse", ok, || format!("{p} + ({neg}) is not the identity"));
    }
    if len > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let (i, j, k) = (rng.gen_range(0..len), rng.gen_range(0..len), rng.gen_range(0..len));
            let (p, q, r) = (&pts[i], &pts[j], &pts[k]);
            let left = p.add(ctx, q).and_then(|s| s.add(ctx, r));
            let right = q.add(ctx, r).and_then(|s| p.add(ctx, &s));
            let ok = left.is_ok() && left == right;
            rep.record("associativity", ok, || {
                format!("({p} + {q}) + {r} != {p} + ({q} + {r})")
            });
        }
    }
    rep
}

/// For every ordered pair, `gcd(u, v)` of `alpha_1 alpha_2 = u + v omega` is an `n`-th power `e^n`,
/// and `alpha_1 alpha_2 = e^n alpha_3` for the sum `alpha_3`.
pub fn gcd_power_check(ctx: &FieldContext, n: u32, points: &[SurfacePoint]) -> SuiteReport {
    let mut rep = SuiteReport::new("gcdpower", ctx, n, points.len());
    for p in points {
        for q in points {
            let prod = ctx.mul(&p.element(), &q.element());
            let d = gcd(&prod.b, &prod.c);
            let root = integer_nth_root(&d, n);
            rep.record("nth_power", root.is_some(), || {
                format!("{p}, {q}: gcd {d} is not an {n}-th power")
            });
            if root.is_none() {
                continue;
            }
            let ok = match p.add(ctx, q) {
                Ok(s) => s.element().scale(&d) == prod,
                Err(_) => false,
            };
            rep.record("element_relation", ok, || {
                format!("{p}, {q}: alpha1 alpha2 != {d} alpha3")
            });
        }
    }
    rep
}

/// `class(p + q) = class(p) * class(q)` for all pairs, and every image class is `n`-torsion.
pub fn homomorphism_suite(group: &FormClassGroup, ctx: &FieldContext, n: u32, points: &[SurfacePoint]) -> SuiteReport {
    let mut rep = SuiteReport::new("homomorphism", ctx, n, points.len());
    let mut classes = Vec::with_capacity(points.len());
    for p in points {
        match point_to_form(ctx, p).and_then(|f| group.index_of(&f)) {
            Ok(i) => {
                let ok = group.pow(i, u64::from(n)) == group.identity();
                rep.record("torsion", ok, || format!("class of {p} has order not dividing {n}"));
                classes.push(Some(i));
            }
            Err(e) => {
                rep.record("torsion", false, || format!("{p}: {e}"));
                classes.push(None);
            }
        }
    }
    for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate().skip(i) {
            let (Some(ci), Some(cj)) = (classes[i], classes[j]) else {
                continue;
            };
            let got = p.add(ctx, q).and_then(|s| class_of_point(group, ctx, &s));
            let ok = got.as_ref() == Ok(&group.mul(ci, cj));
            rep.record("homomorphism", ok, || {
                format!("class({p} + {q}) != class({p}) class({q})")
            });
        }
    }
    rep
}

/// Form path against ideal path, for every point with `A > 0`.
///
/// Checks `Q_P ~ Q_a` for `a = point_ideal(P)`, `a^n = (B + C omega)`, that `Q_P`
/// is primitive of discriminant `delta` (positive definite when `delta < 0`), and
/// for `n >= 2` that `(alpha) + (alpha') = (1)`.
pub fn oracle_suite(ctx: &FieldContext, n: u32, points: &[SurfacePoint]) -> SuiteReport {
    let mut rep = SuiteReport::new("oracle", ctx, n, points.len());
    for p in points.iter().filter(|p| p.a().is_positive()) {
        let form = match point_to_form(ctx, p) {
            Ok(f) => f,
            Err(e) => {
                rep.record("form", false, || format!("{p}: {e}"));
                continue;
            }
        };
        let ok = form.is_primitive() && form.disc() == *ctx.delta() && (!ctx.is_imaginary() || form.a.is_positive());
        rep.record("form", ok, || {
            format!(
                "{p}: Q_P = {form} is not a primitive form of discriminant {}",
                ctx.delta()
            )
        });
        let ideal = match point_ideal(ctx, p) {
            Ok(i) => i,
            Err(e) => {
                rep.record("ideal", false, || format!("{p}: {e}"));
                continue;
            }
        };
        let principal = IntegralIdeal::from_element(ctx, &p.element()).expect("points are nonzero");
        rep.record("ideal_power", ideal.pow(ctx, n) == principal, || {
            format!("{p}: ({ideal})^{n} != ({})", p.element())
        });
        let agree = ideal.to_form(ctx).and_then(|g| form.is_equivalent(&g)).unwrap_or(false);
        rep.record("form_vs_ideal", agree, || {
            format!("{p}: Q_P not equivalent to the form of {ideal}")
        });
        if n >= 2 {
            let conj = IntegralIdeal::from_element(ctx, &ctx.conj(&p.element())).expect("points are nonzero");
            rep.record("coprime_conjugates", principal.sum(&conj).is_unit(), || {
                format!("{p}: (alpha) + (alpha') != (1)")
            });
        }
    }
    rep
}
