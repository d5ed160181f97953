//! Library side of the `purify` command: sweeps, cost tables, Zeno runs and
//! the verification suite.

pub mod config;
pub mod costs;
pub mod format;
pub mod gadget;
pub mod sweep;
pub mod verify;
pub mod zeno;
