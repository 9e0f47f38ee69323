//! The guide's code listings, compiled and run as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}

#[doc = include_str!("../../../book/src/microdata.md")]
mod microdata {}

#[doc = include_str!("../../../book/src/shocks.md")]
mod shocks {}

#[doc = include_str!("../../../book/src/fiscal_rules.md")]
mod fiscal_rules {}

#[doc = include_str!("../../../book/src/poverty.md")]
mod poverty {}

#[doc = include_str!("../../../book/src/scenarios.md")]
mod scenarios {}

#[doc = include_str!("../../../book/src/cli.md")]
mod cli {}
