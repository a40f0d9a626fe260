// Copyright (c) 2026, The pellsurf Authors
// SPDX-License-Identifier: Apache-2.0

//! Integral ideals of the maximal order as lattices `Z*a + Z*(b + c*omega)` in
//! Hermite normal form (`0 <= b < a`, `c | a`, `c | b`). Two ideals are equal
//! exactly when their normal forms are.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::forms::QuadraticForm;
use crate::qfield::{FieldContext, QuadInt};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegralIdeal {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

/// Hermite normal form of the Z-span of `gens`, or `None` if the span has rank < 2.
fn hnf(gens: &[QuadInt]) -> Option<(BigInt, BigInt, BigInt)> {
    let mut rows: Vec<(BigInt, BigInt)> = gens.iter().map(|g| (g.b.clone(), g.c.clone())).collect();
    // Euclid on the omega column: afterwards only rows[0] may have a nonzero omega part.
    loop {
        let pivot = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.1.is_zero())
            .min_by(|x, y| x.1 .1.abs().cmp(&y.1 .1.abs()))
            .map(|(i, _)| i);
        let Some(p) = pivot else { break };
        rows.swap(0, p);
        let (pb, pc) = rows[0].clone();
        let mut done = true;
        for r in rows.iter_mut().skip(1) {
            if r.1.is_zero() {
                continue;
            }
            let q = r.1.div_floor(&pc);
            r.0 -= &q * &pb;
            r.1 -= &q * &pc;
            if !r.1.is_zero() {
                done = false;
            }
        }
        if done {
            break;
        }
    }
    let (mut b, mut c) = rows[0].clone();
    if c.is_zero() {
        return None;
    }
    if c.is_negative() {
        b = -b;
        c = -c;
    }
    let a = rows[1..].iter().fold(BigInt::zero(), |g, r| g.gcd(&r.0));
    if a.is_zero() {
        return None;
    }
    let b = b.mod_floor(&a);
    Some((a, b, c))
}

impl IntegralIdeal {
    /// Builds the ideal with the given HNF coordinates, checking it is closed under `omega`.
    pub fn from_hnf(ctx: &FieldContext, a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        if !a.is_positive() || !c.is_positive() || b.is_negative() || b >= a {
            return Err(Error::Parse(format!("({a}, {b}, {c}) is not in Hermite normal form")));
        }
        let i = IntegralIdeal { a, b, c };
        if !i.is_ideal(ctx) {
            return Err(Error::Parse(format!("{i} is not closed under multiplication by omega")));
        }
        Ok(i)
    }

    pub fn unit() -> Self {
        IntegralIdeal {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::one(),
        }
    }

    /// The Z-span of the given elements, closed off as an ideal by also adding `omega * g`.
    pub fn generated_by(ctx: &FieldContext, gens: &[QuadInt]) -> Result<Self> {
        let mut all = Vec::with_capacity(2 * gens.len());
        for g in gens {
            all.push(ctx.mul_omega(g));
            all.push(g.clone());
        }
        Self::from_lattice(&all).ok_or(Error::ZeroElement)
    }

    fn from_lattice(gens: &[QuadInt]) -> Option<Self> {
        hnf(gens).map(|(a, b, c)| IntegralIdeal { a, b, c })
    }

    /// The principal ideal `(alpha)`.
    pub fn from_element(ctx: &FieldContext, alpha: &QuadInt) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(Self::from_lattice(&[alpha.clone(), ctx.mul_omega(alpha)]).expect("nonzero principal ideal has rank 2"))
    }

    /// The principal ideal generated by a rational integer.
    pub fn rational(k: &BigInt) -> Result<Self> {
        if k.is_zero() {
            return Err(Error::ZeroElement);
        }
        let k = k.abs();
        Ok(IntegralIdeal {
            a: k.clone(),
            b: BigInt::zero(),
            c: k,
        })
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn basis(&self) -> [QuadInt; 2] {
        [
            QuadInt::new(self.a.clone(), 0),
            QuadInt::new(self.b.clone(), self.c.clone()),
        ]
    }

    pub fn norm(&self) -> BigInt {
        &self.a * &self.c
    }

    pub fn is_unit(&self) -> bool {
        self.a.is_one()
    }

    /// `omega` times each basis vector stays in the lattice.
    pub fn is_ideal(&self, ctx: &FieldContext) -> bool {
        self.basis().iter().all(|g| self.contains(&ctx.mul_omega(g)))
    }

    pub fn contains(&self, x: &QuadInt) -> bool {
        if !x.c.is_multiple_of(&self.c) {
            return false;
        }
        let k = &x.c / &self.c;
        (&x.b - &k * &self.b).is_multiple_of(&self.a)
    }

    pub fn mul(&self, ctx: &FieldContext, other: &IntegralIdeal) -> IntegralIdeal {
        let mut prods = Vec::with_capacity(4);
        for x in self.basis() {
            for y in other.basis() {
                prods.push(ctx.mul(&x, &y));
            }
        }
        Self::from_lattice(&prods).expect("product of nonzero ideals is nonzero")
    }

    pub fn pow(&self, ctx: &FieldContext, mut k: u32) -> IntegralIdeal {
        let mut base = self.clone();
        let mut acc = IntegralIdeal::unit();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(ctx, &base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(ctx, &base);
            }
        }
        acc
    }

    /// Ideal sum, i.e. the gcd of the two ideals.
    pub fn sum(&self, other: &IntegralIdeal) -> IntegralIdeal {
        let gens: Vec<QuadInt> = self.basis().into_iter().chain(other.basis()).collect();
        Self::from_lattice(&gens).expect("sum of nonzero ideals is nonzero")
    }

    pub fn conj(&self, ctx: &FieldContext) -> IntegralIdeal {
        let gens: Vec<QuadInt> = self.basis().iter().map(|g| ctx.conj(g)).collect();
        Self::from_lattice(&gens).expect("conjugate of a nonzero ideal is nonzero")
    }

    /// Splits off the rational content: `self = (content) * primitive part`.
    pub fn primitive_part(&self) -> (BigInt, IntegralIdeal) {
        let k = self.c.clone();
        let p = IntegralIdeal {
            a: &self.a / &k,
            b: &self.b / &k,
            c: BigInt::one(),
        };
        (k, p)
    }

    /// The norm form `N(a x + (b + omega) y) / a = (a, 2b + sigma, Q0(b, 1)/a)` of a primitive ideal.
    pub fn to_form(&self, ctx: &FieldContext) -> Result<QuadraticForm> {
        if !self.c.is_one() {
            return Err(Error::NonPrimitiveIdeal(self.c.clone()));
        }
        let gamma = ctx.q0(&self.b, &BigInt::one());
        if !gamma.is_multiple_of(&self.a) {
            return Err(Error::Internal(format!("{self} is not an ideal")));
        }
        Ok(QuadraticForm::new(
            self.a.clone(),
            BigInt::from(2) * &self.b + ctx.sigma_big(),
            gamma / &self.a,
        ))
    }
}

impl fmt::Display for IntegralIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_one() {
            write!(f, "[{}, {} + w]", self.a, self.b)
        } else {
            write!(f, "[{}, {} + {}w]", self.a, self.b, self.c)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(d: i64) -> FieldContext {
        FieldContext::new(d).unwrap()
    }

    fn qi(b: i64, c: i64) -> QuadInt {
        QuadInt::new(b, c)
    }

    fn ideal(k: &FieldContext, a: i64, b: i64, c: i64) -> IntegralIdeal {
        IntegralIdeal::from_hnf(k, a.into(), b.into(), c.into()).unwrap()
    }

    #[test]
    fn from_element_examples() {
        let k = ctx(-23);
        let i = IntegralIdeal::from_element(&k, &qi(1, 1)).unwrap();
        assert_eq!(i, ideal(&k, 8, 1, 1));
        assert_eq!(i.norm(), BigInt::from(8));
        assert_eq!(
            IntegralIdeal::from_element(&k, &qi(1, 0)).unwrap(),
            IntegralIdeal::unit()
        );
        let two = IntegralIdeal::from_element(&k, &qi(2, 0)).unwrap();
        assert_eq!(two, ideal(&k, 2, 0, 2));
        assert_eq!(two.norm(), BigInt::from(4));
        assert_eq!(IntegralIdeal::from_element(&k, &qi(0, 0)), Err(Error::ZeroElement));
    }

    #[test]
    fn from_hnf_rejects_non_ideals() {
        let k = ctx(-23);
        assert!(IntegralIdeal::from_hnf(&k, 5.into(), 0.into(), 1.into()).is_err());
        assert!(IntegralIdeal::from_hnf(&k, 3.into(), 0.into(), 1.into()).is_ok());
        assert!(IntegralIdeal::from_hnf(&k, 2.into(), 2.into(), 1.into()).is_err());
        assert!(IntegralIdeal::from_hnf(&k, 2.into(), 1.into(), 1.into()).is_ok());
    }

    #[test]
    fn mul_examples() {
        let k = ctx(-23);
        let a = ideal(&k, 2, 1, 1);
        assert_eq!(a.mul(&k, &IntegralIdeal::unit()), a);
        let x = IntegralIdeal::from_element(&k, &qi(1, 1)).unwrap();
        let y = IntegralIdeal::from_element(&k, &qi(1, 2)).unwrap();
        let xy = IntegralIdeal::from_element(&k, &qi(-11, 5)).unwrap();
        assert_eq!(x.mul(&k, &y), xy);
        // 2 splits in Q(sqrt -23): (2, 1 + w)(2, 1 + w)' = (2)
        let p = a.conj(&k);
        assert_ne!(p, a);
        assert_eq!(a.mul(&k, &p), IntegralIdeal::rational(&2.into()).unwrap());
        assert_eq!(a.mul(&k, &p).norm(), a.norm() * a.norm());
    }

    #[test]
    fn sum_examples() {
        let k = ctx(-23);
        let x = IntegralIdeal::from_element(&k, &qi(1, 1)).unwrap();
        let xc = IntegralIdeal::from_element(&k, &qi(2, -1)).unwrap();
        assert!(x.sum(&xc).is_unit());
        assert_eq!(x.sum(&x), x);
        let y = IntegralIdeal::from_element(&k, &qi(3, 3)).unwrap();
        let s = y.sum(&y.conj(&k));
        assert!(!s.is_unit());
        assert!(s.norm().is_multiple_of(&BigInt::from(3)));
    }

    #[test]
    fn conj_examples() {
        let k = ctx(-23);
        assert_eq!(IntegralIdeal::unit().conj(&k), IntegralIdeal::unit());
        for (b, c) in [(1, 1), (3, -2), (-11, 5), (7, 4), (0, 3)] {
            let a = qi(b, c);
            let i = IntegralIdeal::from_element(&k, &a).unwrap();
            assert_eq!(i.conj(&k), IntegralIdeal::from_element(&k, &k.conj(&a)).unwrap());
            assert_eq!(i.conj(&k).conj(&k), i);
        }
    }

    #[test]
    fn norm_examples() {
        let k = ctx(-23);
        assert_eq!(
            IntegralIdeal::from_element(&k, &qi(1, 1)).unwrap().norm(),
            BigInt::from(8)
        );
        assert_eq!(IntegralIdeal::unit().norm(), BigInt::one());
        assert_eq!(ideal(&k, 2, 0, 2).norm(), BigInt::from(4));
    }

    #[test]
    fn to_form_examples() {
        let k = ctx(-23);
        assert_eq!(IntegralIdeal::unit().to_form(&k).unwrap(), QuadraticForm::principal(&k));
        assert_eq!(ideal(&k, 2, 1, 1).to_form(&k).unwrap(), QuadraticForm::new(2, 3, 4));
        let k = ctx(229);
        assert_eq!(ideal(&k, 3, 2, 1).to_form(&k).unwrap(), QuadraticForm::new(3, 5, -17));
        let k = ctx(-23);
        assert_eq!(ideal(&k, 2, 0, 2).to_form(&k), Err(Error::NonPrimitiveIdeal(2.into())));
    }

    #[test]
    fn primitive_part_splits_content() {
        let k = ctx(-23);
        let i = IntegralIdeal::from_element(&k, &qi(3, 3)).unwrap();
        let (content, p) = i.primitive_part();
        assert_eq!(content, BigInt::from(3));
        assert_eq!(p, IntegralIdeal::from_element(&k, &qi(1, 1)).unwrap());
    }

    fn field() -> impl Strategy<Value = FieldContext> {
        prop::sample::select(vec![-23i64, -4, -3, -84, -431, 5, 12, 229, 1001, 892])
            .prop_map(|d| FieldContext::new(d).unwrap())
    }

    fn element() -> impl Strategy<Value = QuadInt> {
        (-300i64..300, -300i64..300)
            .prop_filter("nonzero", |(b, c)| *b != 0 || *c != 0)
            .prop_map(|(b, c)| qi(b, c))
    }

    proptest! {
        #[test]
        fn principal_ideals_are_multiplicative(k in field(), x in element(), y in element()) {
            let ix = IntegralIdeal::from_element(&k, &x).unwrap();
            let iy = IntegralIdeal::from_element(&k, &y).unwrap();
            prop_assert!(ix.is_ideal(&k));
            prop_assert_eq!(ix.norm(), k.norm(&x).abs());
            let prod = ix.mul(&k, &iy);
            prop_assert_eq!(&prod, &IntegralIdeal::from_element(&k, &k.mul(&x, &y)).unwrap());
            prop_assert_eq!(prod.norm(), ix.norm() * iy.norm());
        }

        #[test]
        fn ideal_times_conjugate_is_rational(k in field(), x in element(), y in element()) {
            let i = IntegralIdeal::generated_by(&k, &[x, y]).unwrap();
            prop_assert!(i.is_ideal(&k));
            let n = i.norm();
            prop_assert_eq!(i.mul(&k, &i.conj(&k)), IntegralIdeal::rational(&n).unwrap());
        }

        #[test]
        fn totally_positive_generators_map_to_the_principal_class(k in field(), x in element()) {
            prop_assume!(k.is_totally_positive(&x));
            let (_, p) = IntegralIdeal::from_element(&k, &x).unwrap().primitive_part();
            let f = p.to_form(&k).unwrap();
            prop_assert_eq!(f.disc(), k.delta().clone());
            prop_assert!(f.is_equivalent(&QuadraticForm::principal(&k)).unwrap());
        }
    }
}
