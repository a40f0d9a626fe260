// Copyright (c) 2026, The pellsurf Authors
// SPDX-License-Identifier: Apache-2.0

//! The group law on Pell surfaces `Q0(B, C) = A^n` and its map to class groups.
//!
//! The primitive integer points on such a surface form an abelian group. This crate
//! implements that group law with explicit gcd-based formulas, the surjective
//! homomorphism onto the `n`-torsion of the narrow class group of `Q(sqrt(delta))`,
//! and the binary quadratic form and ideal machinery both sides of that map need.
//!
//! Module map:
//! - [`qfield`]: fundamental discriminants and the maximal order `Z[omega]`.
//! - [`forms`]: binary quadratic forms, reduction, composition, narrow class groups.
//! - [`ideals`]: integral ideals as Hermite normal form lattices.
//! - [`surface`]: surface points, the group law, Yamamoto coordinates, lifting.
//! - [`classmap`]: points to forms and ideals, kernel tests, image coverage.
//! - [`search`]: point enumeration and the verification suites.
//! - [`cli`]: the `pellsurf` command line front end.

pub mod classmap;
pub mod cli;
pub mod error;
pub mod forms;
pub mod ideals;
pub mod json;
pub mod qfield;
pub mod search;
pub mod surface;

pub use error::{Error, Result};
pub use forms::{FormClassGroup, Mat2, QuadraticForm};
pub use ideals::IntegralIdeal;
pub use qfield::{integer_nth_root, FieldContext, QuadInt};
pub use surface::{NewpointVerdict, SurfacePoint, YamamotoPoint};
