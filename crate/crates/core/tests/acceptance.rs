// Copyright (c) 2026, The pellsurf Authors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use pellsurf_core::classmap::{coverage_of_points, image_scan, kernel_test, kernel_witness_search, point_to_form};
use pellsurf_core::search::{axiom_suite, enumerate_points, gcd_power_check, homomorphism_suite, oracle_suite};
use pellsurf_core::surface::{is_power_residue, newpoint_test, NewpointVerdict};
use pellsurf_core::{Error, FieldContext, FormClassGroup, QuadraticForm, SurfacePoint};

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ctx(d: i64) -> FieldContext {
    FieldContext::new(d).expect("fundamental")
}

fn pt(k: &FieldContext, n: u32, a: i64, b: i64, c: i64) -> std::result::Result<SurfacePoint, String> {
    SurfacePoint::new(k, n, a, b, c).map_err(|e| format!("({a},{b},{c}): {e}"))
}

fn minus23_set() -> (FieldContext, Vec<SurfacePoint>) {
    let k = ctx(-23);
    let pts = enumerate_points(&k, 3, 12, 1).expect("enumerate").points;
    (k, pts)
}

fn ac1() -> Check {
    let start = Instant::now();
    let k = ctx(229);
    let s = pt(&k, 3, 3, 92, 13)?
        .add(&k, &pt(&k, 3, 3, 17, -2)?)
        .map_err(|e| e.to_string())?;
    ensure(s == pt(&k, 3, 9, 82, 11)?, format!("first sum is {s}"))?;
    let t = s.add(&k, &pt(&k, 3, 9, 93, -11)?).map_err(|e| e.to_string())?;
    ensure(t.is_identity(), format!("second sum is {t}"))?;
    let took = start.elapsed();
    ensure(took < Duration::from_secs(1), format!("took {took:?}"))?;
    Ok(format!(
        "(3,92,13)+(3,17,-2) = {s}, then + (9,93,-11) = {t} in {took:?}"
    ))
}

fn ac2() -> Check {
    let k = ctx(-23);
    let l = pt(&k, 1, 6, 1, -1)?.lift(&k, 3).map_err(|e| e.to_string())?;
    ensure(l == pt(&k, 3, 6, -11, 5)?, format!("lift is {l}"))?;
    Ok(format!("lift of (6,1,-1) from level 1 to 3 = {l}"))
}

fn ac3() -> Check {
    let k = ctx(-23);
    let g = FormClassGroup::new(&k).map_err(|e| e.to_string())?;
    let p = pt(&k, 3, 2, 1, 1)?;
    let f = point_to_form(&k, &p).map_err(|e| e.to_string())?;
    ensure(f == QuadraticForm::new(2, 3, 4), format!("Q_P = {f}"))?;
    let r = f.reduced().map_err(|e| e.to_string())?;
    ensure(r == QuadraticForm::new(2, -1, 3), format!("reduced = {r}"))?;
    ensure(!kernel_test(&g, &k, &p).map_err(|e| e.to_string())?, "kernel_test true")?;
    let w = kernel_witness_search(&k, &p, 10_000).map_err(|e| e.to_string())?;
    ensure(w.witness.is_none() && w.conclusive, format!("witness search {w:?}"))?;
    Ok(format!(
        "Q_P = {f}, reduced {r}, not in kernel, conclusive search finds no (T,U)"
    ))
}

fn ac4() -> Check {
    let start = Instant::now();
    let (k, pts) = minus23_set();
    let raw: Vec<_> = pts.iter().map(|p| p.coords()).collect();
    let rep = axiom_suite(&k, 3, &raw, 2000, 20090101);
    let took = start.elapsed();
    ensure(
        rep.passed,
        format!("{} failures, first {:?}", rep.failures.len(), rep.failures.first()),
    )?;
    ensure(
        rep.checks.get("associativity") == Some(&2000),
        "associativity sample count",
    )?;
    ensure(took < Duration::from_secs(60), format!("took {took:?}"))?;
    Ok(format!("{} points, checks {:?}, {took:?}", pts.len(), rep.checks))
}

fn ac5() -> Check {
    let (k, pts) = minus23_set();
    let rep = gcd_power_check(&k, 3, &pts);
    ensure(rep.passed, format!("{:?}", rep.failures.first()))?;
    Ok(format!("{} ordered pairs, every gcd a cube", rep.checks["nth_power"]))
}

fn ac6() -> Check {
    let (k, pts) = minus23_set();
    let g = FormClassGroup::new(&k).map_err(|e| e.to_string())?;
    let rep = homomorphism_suite(&g, &k, 3, &pts);
    ensure(rep.passed, format!("{:?}", rep.failures.first()))?;
    Ok(format!(
        "{} pairs, {} torsion checks",
        rep.checks["homomorphism"], rep.checks["torsion"]
    ))
}

fn ac7() -> Check {
    let k = ctx(-23);
    let g = FormClassGroup::new(&k).map_err(|e| e.to_string())?;
    let r = image_scan(&g, &k, 3, 12, 1).map_err(|e| e.to_string())?;
    ensure(r.surjective && r.torsion.len() == 3, format!("delta -23: {r:?}"))?;
    let k = ctx(229);
    let g = FormClassGroup::new(&k).map_err(|e| e.to_string())?;
    let pts = vec![
        SurfacePoint::identity(3),
        pt(&k, 3, 3, 92, 13)?,
        pt(&k, 3, 3, 17, -2)?,
        pt(&k, 3, 9, 82, 11)?,
        pt(&k, 3, 9, 93, -11)?,
    ];
    let r2 = coverage_of_points(&g, &k, 3, 9, &pts).map_err(|e| e.to_string())?;
    ensure(r2.surjective && r2.torsion.len() == 3, format!("delta 229: {r2:?}"))?;
    Ok(format!(
        "Cl(-23)[3] hit {:?}, Cl+(229)[3] hit {:?}",
        r.hit_classes, r2.hit_classes
    ))
}

/// Reduced definite forms counted by a direct double loop.
fn definite_class_number(delta: i64) -> usize {
    let mut h = 0;
    let mut a = 1i64;
    while 3 * a * a <= -delta {
        for b in -a + 1..=a {
            let num = b * b - delta;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) || a.gcd(&b).gcd(&c) != 1 {
                continue;
            }
            h += 1;
        }
        a += 1;
    }
    h
}

/// Narrow class number by counting cycles of Zagier-reduced forms
/// (`a, c > 0`, `b > a + c`), a reduction theory independent of the library's.
fn zagier_class_number(delta: i64) -> usize {
    let s = (delta as f64).sqrt();
    let step = |(a, b, c): (i64, i64, i64)| {
        let n = ((b as f64 + s) / (2.0 * c as f64)).floor() as i64 + 1;
        (c, 2 * c * n - b, c * n * n - b * n + a)
    };
    let mut forms = BTreeSet::new();
    for b in 1..=delta {
        let four_ac = b * b - delta;
        if four_ac <= 0 || four_ac % 4 != 0 {
            continue;
        }
        let ac = four_ac / 4;
        for a in 1..=ac {
            if ac % a == 0 {
                let c = ac / a;
                if b > a + c && a.gcd(&b).gcd(&c) == 1 {
                    forms.insert((a, b, c));
                }
            }
        }
    }
    let mut cycles = 0;
    while let Some(&start) = forms.iter().next() {
        cycles += 1;
        let mut f = start;
        loop {
            forms.remove(&f);
            f = step(f);
            if f == start {
                break;
            }
        }
    }
    cycles
}

fn ac8() -> Check {
    let mut out = Vec::new();
    for (d, want) in [(-23i64, 3usize), (-4, 1), (229, 3), (12, 2)] {
        let h = FormClassGroup::new(&ctx(d)).map_err(|e| e.to_string())?.order();
        let oracle = if d < 0 {
            definite_class_number(d)
        } else {
            zagier_class_number(d)
        };
        ensure(
            h == want && oracle == want,
            format!("delta {d}: library {h}, oracle {oracle}, expected {want}"),
        )?;
        out.push(format!("h({d})={h}"));
    }
    let mut swept = 0;
    for d in (-400i64..=400).filter(|&d| d != 0 && d != 1) {
        let Ok(k) = FieldContext::new(d) else { continue };
        let h = FormClassGroup::new(&k).map_err(|e| e.to_string())?.order();
        let oracle = if d < 0 {
            definite_class_number(d)
        } else {
            zagier_class_number(d)
        };
        ensure(h == oracle, format!("delta {d}: library {h}, oracle {oracle}"))?;
        swept += 1;
    }
    out.push(format!("and {swept} discriminants in [-400, 400] agree"));
    Ok(out.join(" "))
}

fn ac9() -> Check {
    let (k, pts) = minus23_set();
    let rep = oracle_suite(&k, 3, &pts);
    ensure(rep.passed, format!("{:?}", rep.failures.first()))?;
    Ok(format!("{} points, checks {:?}", rep.points, rep.checks))
}

fn ac10() -> Check {
    let k = ctx(-23);
    for (a, b, c) in [(2, 1, 1), (3, 1, 2)] {
        let v = newpoint_test(&k, &pt(&k, 3, a, b, c)?, 3).map_err(|e| e.to_string())?;
        ensure(v == NewpointVerdict::Inconclusive, format!("({a},{b},{c}) gave {v:?}"))?;
    }
    let cubes: BTreeSet<i64> = (0..13i64).map(|x| x.pow(3) % 13).collect();
    ensure(
        cubes == BTreeSet::from([0, 1, 5, 8, 12]),
        format!("cubes mod 13 = {cubes:?}"),
    )?;
    let found: Vec<SurfacePoint> = enumerate_points(&k, 3, 13, 1)
        .map_err(|e| e.to_string())?
        .points
        .into_iter()
        .filter(|p| p.a() == &BigInt::from(13))
        .collect();
    ensure(!found.is_empty(), "no A = 13 points")?;
    let p = pt(&k, 3, 13, 31, 12)?;
    ensure(found.contains(&p), "(13,31,12) not enumerated")?;
    let x = (k.trace(&p.element()))
        .mod_floor(&BigInt::from(13))
        .to_i64()
        .unwrap_or(-1);
    ensure(
        !cubes.contains(&x) && !is_power_residue(&BigInt::from(x), 3, 13),
        format!("2B+C = {x} mod 13"),
    )?;
    let v = newpoint_test(&k, &p, 3).map_err(|e| e.to_string())?;
    ensure(v == NewpointVerdict::ProvenNew, format!("(13,31,12) gave {v:?}"))?;
    for q in &found {
        let t = k
            .trace(&q.element())
            .mod_floor(&BigInt::from(13))
            .to_i64()
            .unwrap_or(-1);
        let expect = if cubes.contains(&t) {
            NewpointVerdict::Inconclusive
        } else {
            NewpointVerdict::ProvenNew
        };
        ensure(
            newpoint_test(&k, q, 3).map_err(|e| e.to_string())? == expect,
            format!("{q}"),
        )?;
    }
    let bad = SurfacePoint::new(&k, 3, 13, 37, 6);
    ensure(
        matches!(bad, Err(Error::NotOnSurface(..))),
        format!("(13,37,6) gave {bad:?}"),
    )?;
    Ok(format!(
        "(2,1,1), (3,1,2) inconclusive; (13,31,12) proven new (2B+C = {x} mod 13); (13,37,6) rejected, Q0(37,6) = 1807 != 2197"
    ))
}

fn ac11() -> Check {
    let (k, pts) = minus23_set();
    for p in &pts {
        let y = p.to_yamamoto(&k);
        let lhs = &y.x * &y.x - k.delta() * &y.y * &y.y;
        let rhs = BigInt::from(4) * num_traits::pow(y.z.clone(), 3);
        ensure(lhs == rhs, format!("{p} -> {y} off surface"))?;
        ensure(y.x.gcd(&y.z).is_one(), format!("{p} -> {y}: gcd(X, Z) != 1"))?;
        let back = SurfacePoint::from_yamamoto(&k, 3, &y).map_err(|e| e.to_string())?;
        ensure(&back == p, format!("{p} -> {y} -> {back}"))?;
    }
    Ok(format!("{} points round-trip", pts.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("worked addition on delta=229, n=3", ac1),
        ("lift from level 1 to 3 on delta=-23", ac2),
        ("kernel example (2,1,1) on delta=-23", ac3),
        ("group axioms on delta=-23, n=3, A<=12", ac4),
        ("gcd of every pair is a cube", ac5),
        ("homomorphism onto Cl(-23)[3]", ac6),
        ("surjectivity onto the 3-torsion", ac7),
        ("class numbers against independent oracles", ac8),
        ("form path agrees with ideal path", ac9),
        ("newpoint criterion", ac10),
        ("Yamamoto bijection", ac11),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match res {
            Ok(detail) => println!("AC{:<2} PASS  {name}: {detail} [{:?}]", i + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("AC{:<2} FAIL  {name}: {why} [{:?}]", i + 1, t.elapsed());
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:?}",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
