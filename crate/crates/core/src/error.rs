// Copyright (c) 2026, The pellsurf Authors
// SPDX-License-Identifier: Apache-2.0

use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(BigInt),
    #[error("discriminant {0} exceeds the supported bound |delta| <= 10^12")]
    DiscriminantTooLarge(BigInt),

    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("discriminant {0} is a perfect square")]
    SquareDiscriminant(BigInt),
    #[error("discriminant mismatch: {0} vs {1}")]
    DiscMismatch(BigInt, BigInt),
    #[error("form is not primitive")]
    NonPrimitiveForm,
    #[error("no class representative found for form ({0}, {1}, {2})")]
    NotFound(BigInt, BigInt, BigInt),

    #[error("the zero element does not generate an ideal")]
    ZeroElement,
    #[error("ideal has content {0}; divide it out first")]
    NonPrimitiveIdeal(BigInt),

    #[error("point ({0}, {1}, {2}) is not on surface")]
    NotOnSurface(BigInt, BigInt, BigInt),
    #[error("point is not primitive: gcd(B, C) != 1")]
    NotPrimitive,
    #[error("A must be positive when n is even")]
    BadSign,
    #[error("points on S_1 need gcd(A, delta) = 1")]
    S1GcdViolation,
    #[error("level must be at least 1")]
    BadLevel,
    #[error("gcd {0} is not an n-th power (n = {1})")]
    GcdNotPower(BigInt, u32),
    #[error("points live on different levels: {0} vs {1}")]
    MixedLevels(u32, u32),
    #[error("point is not on the Yamamoto surface X^2 - delta Y^2 = 4 Z^n")]
    NotOnYamamoto,
    #[error("X - sigma Y must be even")]
    ParityViolation,
    #[error("{0} does not divide {1}")]
    NotDivisor(u32, u32),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("|A| = {0} exceeds the trial-division bound 10^12")]
    FactorLimitExceeded(BigInt),

    #[error("leading coefficient must be positive for delta < 0")]
    NegativeLeadingCoefficient,
    #[error("A must be positive for delta < 0")]
    NegativeA,

    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}
