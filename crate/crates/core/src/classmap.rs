// Copyright (c) 2026, The pellsurf Authors
// SPDX-License-Identifier: Apache-2.0

//! From surface points to narrow form classes.
//!
//! A point `P = (A, B, C)` gives the form `~Q_P = (A, 2B + sigma C, A^(n-1))` of
//! discriminant `delta * C^2`. Translating its middle coefficient to a multiple of `C`
//! and dividing out ("underiving") yields `Q_P = (A, 2 beta + sigma, gamma)` of
//! discriminant `delta`, where `beta = B / C mod |A|` and `gamma = Q0(beta, 1) / A`.
//! The same form is attached to the ideal `(A, beta + omega)`, whose `n`-th power is
//! `(B + C omega)`; that ideal path is kept as an independent check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{FormClassGroup, QuadraticForm};
use crate::ideals::IntegralIdeal;
use crate::json::JsonInt;
use crate::qfield::{mod_inverse, perfect_square_root, FieldContext};
use crate::search::enumerate_points;
use crate::surface::SurfacePoint;

/// `(A, 2B + sigma C, A^(n-1))`, of discriminant `delta C^2`; possibly imprimitive.
pub fn tilde_form(ctx: &FieldContext, p: &SurfacePoint) -> Result<QuadraticForm> {
    if ctx.is_imaginary() && p.a().is_negative() {
        return Err(Error::NegativeLeadingCoefficient);
    }
    let f = QuadraticForm::new(
        p.a().clone(),
        ctx.trace(&p.element()),
        num_traits::pow::pow(p.a().clone(), p.n() as usize - 1),
    );
    let expected = ctx.delta() * p.c() * p.c();
    if f.disc() != expected {
        return Err(Error::Internal(format!("disc of {f} is not delta C^2 = {expected}")));
    }
    Ok(f)
}

/// `beta = B * C^{-1} mod |A|`, least nonnegative.
fn beta(ctx: &FieldContext, p: &SurfacePoint) -> Result<BigInt> {
    if ctx.is_imaginary() && p.a().is_negative() {
        return Err(Error::NegativeA);
    }
    let modulus = p.a().abs();
    let inv = mod_inverse(p.c(), &modulus)
        .ok_or_else(|| Error::Internal(format!("C = {} is not invertible mod {modulus}", p.c())))?;
    Ok((p.b() * inv).mod_floor(&modulus))
}

/// The underived form `Q_P = (A, 2 beta + sigma, Q0(beta, 1) / A)`.
pub fn point_to_form(ctx: &FieldContext, p: &SurfacePoint) -> Result<QuadraticForm> {
    let beta = beta(ctx, p)?;
    let q = ctx.q0(&beta, &BigInt::one());
    if !q.is_multiple_of(p.a()) {
        return Err(Error::Internal(format!(
            "Q0({beta}, 1) = {q} is not divisible by A = {}",
            p.a()
        )));
    }
    let f = QuadraticForm::new(p.a().clone(), BigInt::from(2) * &beta + ctx.sigma_big(), q / p.a());
    debug_assert!(f.is_primitive() && f.disc() == *ctx.delta());
    Ok(f)
}

/// The ideal `(|A|, beta + omega)` with `n`-th power `(B + C omega)`.
pub fn point_ideal(ctx: &FieldContext, p: &SurfacePoint) -> Result<IntegralIdeal> {
    let beta = beta(ctx, p)?;
    let i = IntegralIdeal::from_hnf(ctx, p.a().abs(), beta, BigInt::one())
        .map_err(|e| Error::Internal(format!("point ideal: {e}")))?;
    debug_assert_eq!(
        Some(i.pow(ctx, p.n())),
        IntegralIdeal::from_element(ctx, &p.element()).ok()
    );
    Ok(i)
}

/// Class index of `Q_P` in `group`; always an `n`-torsion class.
pub fn class_of_point(group: &FormClassGroup, ctx: &FieldContext, p: &SurfacePoint) -> Result<usize> {
    if group.delta() != ctx.delta() {
        return Err(Error::DiscMismatch(group.delta().clone(), ctx.delta().clone()));
    }
    let i = group.index_of(&point_to_form(ctx, p)?)?;
    if group.pow(i, u64::from(p.n())) != group.identity() {
        return Err(Error::Internal(format!("class of {p} is not {}-torsion", p.n())));
    }
    Ok(i)
}

/// `P` maps to the trivial class, equivalently `Q_P` represents 1.
pub fn kernel_test(group: &FormClassGroup, ctx: &FieldContext, p: &SurfacePoint) -> Result<bool> {
    Ok(class_of_point(group, ctx, p)? == group.identity())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelWitness {
    /// `(T, U)` with `~Q_P(T, U) = C^2` and `T + kU = 0 mod C`, if one was found.
    pub witness: Option<(BigInt, BigInt)>,
    /// Whether a missing witness proves there is none. Only possible for `delta < 0`.
    pub conclusive: bool,
}

/// Scans `|T|, |U| <= bound` for a representation of `C^2` by `~Q_P` that comes from
/// a representation of 1 by `Q_P`.
///
/// With `alpha = B + C omega` and `k = (B - C beta) / A` we have
/// `~Q_P(T, U) = N(T A + U alpha) / A` and `T A + U alpha = (T + kU) A + U C (beta + omega)`.
/// So `Q_P(x, y) = 1` with `x = (T + kU) / C`, `y = U` exactly when `~Q_P(T, U) = C^2`
/// and `C` divides `T + kU`. Coprimality of `(T, U)` is neither necessary nor
/// sufficient: on `delta = -4`, `n = 2` the point `(13, -5, -12)` is in the kernel but
/// `13 T^2 - 10 T U + 13 U^2 = 144` has only the imprimitive solutions `(3, 3)`, `(2, -2)`
/// and their negatives.
///
/// For each `U` the equation is a quadratic in `T` with discriminant
/// `delta C^2 U^2 + 4 A C^2`, solved exactly. For `delta < 0` the solutions satisfy
/// `U^2 <= 4A/|delta|` and `T^2 <= 4A^(n-1)/|delta|`, so a large enough bound makes a
/// negative answer conclusive. `C = 0` is degenerate (target 0) and returns no witness;
/// [`kernel_test`] decides that case.
pub fn kernel_witness_search(ctx: &FieldContext, p: &SurfacePoint, bound: u64) -> Result<KernelWitness> {
    let f = tilde_form(ctx, p)?;
    if p.c().is_zero() {
        return Ok(KernelWitness {
            witness: None,
            conclusive: false,
        });
    }
    let bound = BigInt::from(bound);
    let c2 = p.c() * p.c();
    let (u_max, conclusive) = if ctx.is_imaginary() {
        let abs_d = ctx.delta().abs();
        let u_region = (BigInt::from(4) * &f.a / &abs_d).sqrt();
        let t_region = (BigInt::from(4) * &f.c / &abs_d).sqrt();
        let conclusive = bound >= u_region && bound >= t_region;
        (u_region.min(bound.clone()), conclusive)
    } else {
        (bound.clone(), false)
    };
    let k = (p.b() - p.c() * beta(ctx, p)?) / p.a();
    let two_a = BigInt::from(2) * &f.a;
    let mut u = BigInt::zero();
    while u <= u_max {
        let candidates = if u.is_zero() {
            vec![u.clone()]
        } else {
            vec![u.clone(), -&u]
        };
        for uu in candidates {
            let disc = ctx.delta() * &c2 * &uu * &uu + BigInt::from(4) * &f.a * &c2;
            let Some(root) = perfect_square_root(&disc) else {
                continue;
            };
            for r in [root.clone(), -&root] {
                let num = -&f.b * &uu + r;
                if !num.is_multiple_of(&two_a) {
                    continue;
                }
                let t = num / &two_a;
                if t.abs() <= bound && (&t + &uu * &k).is_multiple_of(p.c()) {
                    debug_assert_eq!(f.eval(&t, &uu), c2);
                    return Ok(KernelWitness {
                        witness: Some((t, uu)),
                        conclusive: true,
                    });
                }
            }
        }
        u += 1;
    }
    Ok(KernelWitness {
        witness: None,
        conclusive,
    })
}

/// Which torsion classes a point set reaches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub delta: JsonInt,
    pub n: u32,
    pub max_a: u64,
    pub hit_classes: Vec<usize>,
    pub torsion: Vec<usize>,
    pub surjective: bool,
}

/// Maps each point through [`class_of_point`] and compares with `Cl+[n]`.
pub fn coverage_of_points(
    group: &FormClassGroup,
    ctx: &FieldContext,
    n: u32,
    max_a: u64,
    points: &[SurfacePoint],
) -> Result<CoverageReport> {
    let mut hit = std::collections::BTreeSet::new();
    for p in points {
        if p.n() != n {
            return Err(Error::MixedLevels(n, p.n()));
        }
        hit.insert(class_of_point(group, ctx, p)?);
    }
    let torsion = group.torsion_subgroup(u64::from(n));
    let hit_classes: Vec<usize> = hit.into_iter().collect();
    Ok(CoverageReport {
        delta: ctx.delta().into(),
        n,
        max_a,
        surjective: hit_classes == torsion,
        hit_classes,
        torsion,
    })
}

/// Enumerates points with `|A| <= max_a` (and `|B|, |C| <= box_bound` when `delta > 0`)
/// and reports which `n`-torsion classes they hit.
pub fn image_scan(
    group: &FormClassGroup,
    ctx: &FieldContext,
    n: u32,
    max_a: u64,
    box_bound: u64,
) -> Result<CoverageReport> {
    let report = enumerate_points(ctx, n, max_a, box_bound)?;
    coverage_of_points(group, ctx, n, max_a, &report.points)
}
