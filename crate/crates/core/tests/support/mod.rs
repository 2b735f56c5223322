// SPDX-License-Identifier: Apache-2.0

//! Checks shared by the integration tests and the acceptance run.

#![allow(dead_code)]

pub mod golden;
pub mod perturb;
pub mod sim_props;
pub mod worked;

/// Resolves from either sibling crate.
pub const GOLDEN_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/golden");
