// SPDX-License-Identifier: Apache-2.0

//! File formats and command-line front end for `mergesam-core`.
//!
//! The [`interchange`] module reads and writes the mask-set, embedding and
//! change-map files exchanged with the segmentation exporter; [`commands`]
//! implements the `run`, `cva`, `cva-sam` and `eval` subcommands.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod interchange;
pub mod report;

pub use error::{CliError, Result};
