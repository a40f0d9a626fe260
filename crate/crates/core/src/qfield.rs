// Copyright (c) 2026, The pellsurf Authors
// SPDX-License-Identifier: Apache-2.0

//! Fundamental discriminants and exact arithmetic in the maximal order `Z[omega]`,
//! where `omega = (sigma + sqrt(delta)) / 2` and `delta = 4m + sigma`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest `|delta|` accepted by [`FieldContext::new`]; squarefreeness is checked by trial division.
pub const MAX_ABS_DISCRIMINANT: u64 = 1_000_000_000_000;

/// A validated fundamental discriminant together with `m`, `sigma` and the sign.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldContext {
    delta: BigInt,
    m: BigInt,
    sigma: u8,
}

/// The element `b + c*omega` of the maximal order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QuadInt {
    pub b: BigInt,
    pub c: BigInt,
}

impl QuadInt {
    pub fn new(b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        QuadInt {
            b: b.into(),
            c: c.into(),
        }
    }

    pub fn one() -> Self {
        QuadInt::new(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.b.is_zero() && self.c.is_zero()
    }

    /// No rational prime divides the element, i.e. `gcd(b, c) = 1`.
    pub fn is_primitive(&self) -> bool {
        self.b.gcd(&self.c).is_one()
    }

    pub fn scale(&self, k: &BigInt) -> QuadInt {
        QuadInt {
            b: &self.b * k,
            c: &self.c * k,
        }
    }

    pub fn neg(&self) -> QuadInt {
        QuadInt {
            b: -&self.b,
            c: -&self.c,
        }
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_negative() {
            write!(f, "{} - {}w", self.b, -&self.c)
        } else {
            write!(f, "{} + {}w", self.b, self.c)
        }
    }
}

impl FieldContext {
    /// Validates `delta` as a fundamental discriminant.
    pub fn new(delta: impl Into<BigInt>) -> Result<Self> {
        let delta: BigInt = delta.into();
        if delta.abs() > BigInt::from(MAX_ABS_DISCRIMINANT) {
            return Err(Error::DiscriminantTooLarge(delta));
        }
        if !is_fundamental(&delta) {
            return Err(Error::NotFundamental(delta));
        }
        let four = BigInt::from(4);
        let sigma_big = delta.mod_floor(&four);
        let m = (&delta - &sigma_big) / &four;
        let sigma = if sigma_big.is_one() { 1 } else { 0 };
        Ok(FieldContext { delta, m, sigma })
    }

    pub fn delta(&self) -> &BigInt {
        &self.delta
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    pub fn sigma(&self) -> u8 {
        self.sigma
    }

    pub fn sigma_big(&self) -> BigInt {
        BigInt::from(self.sigma)
    }

    pub fn is_imaginary(&self) -> bool {
        self.delta.is_negative()
    }

    /// The principal form `Q0(x, y) = x^2 + sigma*x*y - m*y^2`.
    pub fn q0(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let mut v = x * x - &self.m * y * y;
        if self.sigma == 1 {
            v += x * y;
        }
        v
    }

    /// Product in the basis `{1, omega}`, using `omega^2 = sigma*omega + m`.
    pub fn mul(&self, x: &QuadInt, y: &QuadInt) -> QuadInt {
        let cc = &x.c * &y.c;
        let b = &x.b * &y.b + &self.m * &cc;
        let mut c = &x.b * &y.c + &y.b * &x.c;
        if self.sigma == 1 {
            c += cc;
        }
        QuadInt { b, c }
    }

    /// Galois conjugate: `omega' = sigma - omega`.
    pub fn conj(&self, x: &QuadInt) -> QuadInt {
        let b = if self.sigma == 1 { &x.b + &x.c } else { x.b.clone() };
        QuadInt { b, c: -&x.c }
    }

    pub fn norm(&self, x: &QuadInt) -> BigInt {
        self.q0(&x.b, &x.c)
    }

    pub fn trace(&self, x: &QuadInt) -> BigInt {
        BigInt::from(2) * &x.b + &self.sigma_big() * &x.c
    }

    pub fn pow(&self, x: &QuadInt, mut k: u32) -> QuadInt {
        let mut base = x.clone();
        let mut acc = QuadInt::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `omega * x`.
    pub fn mul_omega(&self, x: &QuadInt) -> QuadInt {
        self.mul(x, &QuadInt::new(0, 1))
    }

    /// Sign of the real embedding `b + c*(sigma + sqrt(delta))/2`; only meaningful for `delta > 0`.
    pub fn real_sign(&self, x: &QuadInt) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        // sign of (2b + sigma c) + c sqrt(delta)
        let rat = self.trace(x);
        let irr = &x.c;
        let sgn = |v: &BigInt| v.sign();
        match (sgn(&rat), sgn(irr)) {
            (num_bigint::Sign::NoSign, num_bigint::Sign::NoSign) => Ordering::Equal,
            (r, i) if r != num_bigint::Sign::Minus && i != num_bigint::Sign::Minus => Ordering::Greater,
            (r, i) if r != num_bigint::Sign::Plus && i != num_bigint::Sign::Plus => Ordering::Less,
            (r, _) => {
                // opposite signs: compare rat^2 with c^2 delta
                let lhs = &rat * &rat;
                let rhs = irr * irr * &self.delta;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => {
                        if r == num_bigint::Sign::Plus {
                            Ordering::Greater
                        } else {
                            Ordering::Less
                        }
                    }
                    Ordering::Less => {
                        if r == num_bigint::Sign::Plus {
                            Ordering::Less
                        } else {
                            Ordering::Greater
                        }
                    }
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    /// Totally positive: positive norm and, for real fields, a positive real embedding.
    pub fn is_totally_positive(&self, x: &QuadInt) -> bool {
        if !self.norm(x).is_positive() {
            return false;
        }
        self.is_imaginary() || self.real_sign(x) == std::cmp::Ordering::Greater
    }
}

impl fmt::Display for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "delta={} m={} sigma={} {}",
            self.delta,
            self.m,
            self.sigma,
            if self.is_imaginary() { "imaginary" } else { "real" }
        )
    }
}

/// Squarefree test by trial division up to `sqrt(|x|)`.
pub(crate) fn is_squarefree(x: &BigInt) -> bool {
    let mut n = x.abs();
    if n.is_zero() {
        return false;
    }
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if n.is_multiple_of(&p) {
            n /= &p;
            if n.is_multiple_of(&p) {
                return false;
            }
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    true
}

fn is_fundamental(delta: &BigInt) -> bool {
    if delta.is_zero() || delta.is_one() {
        return false;
    }
    if !delta.is_negative() && perfect_square_root(delta).is_some() {
        return false;
    }
    let four = BigInt::from(4);
    match delta.mod_floor(&four).to_string().as_str() {
        "1" => is_squarefree(delta),
        "0" => {
            let m = delta / &four;
            let r = m.mod_floor(&four);
            (r == BigInt::from(2) || r == BigInt::from(3)) && is_squarefree(&m)
        }
        _ => false,
    }
}

pub(crate) fn perfect_square_root(x: &BigInt) -> Option<BigInt> {
    if x.is_negative() {
        return None;
    }
    let r = x.sqrt();
    if &r * &r == *x {
        Some(r)
    } else {
        None
    }
}

/// Returns `e >= 0` with `e^n = x` exactly, if one exists.
pub fn integer_nth_root(x: &BigInt, n: u32) -> Option<BigInt> {
    if n == 0 || x.is_negative() {
        return None;
    }
    let r = x.nth_root(n);
    if num_traits::pow::pow(r.clone(), n as usize) == *x {
        Some(r)
    } else {
        None
    }
}

/// Nonnegative gcd with `gcd(x, 0) = |x|`.
pub fn gcd(x: &BigInt, y: &BigInt) -> BigInt {
    x.gcd(y)
}

/// Extended gcd: returns `(g, u, v)` with `u*x + v*y = g >= 0`.
pub fn xgcd(x: &BigInt, y: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut r0, mut r1) = (x.clone(), y.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = r0.div_floor(&r1);
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let s2 = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_negative() {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Inverse of `x` modulo `modulus > 0`, as the least nonnegative residue.
pub fn mod_inverse(x: &BigInt, modulus: &BigInt) -> Option<BigInt> {
    if modulus.is_one() {
        return Some(BigInt::zero());
    }
    let (g, u, _) = xgcd(&x.mod_floor(modulus), modulus);
    if g.is_one() {
        Some(u.mod_floor(modulus))
    } else {
        None
    }
}
