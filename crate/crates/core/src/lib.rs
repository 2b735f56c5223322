// SPDX-License-Identifier: Apache-2.0

pub mod answer;
pub mod benchmark;
pub mod question;
pub mod render;
pub mod rng;
pub mod score;
pub mod scenario;
pub mod sim;
pub mod skill;
pub mod verify;
