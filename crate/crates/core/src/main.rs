// Copyright (c) 2026, The pellsurf Authors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(pellsurf_core::cli::run(std::env::args_os()));
}
