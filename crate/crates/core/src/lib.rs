//! A static tax-benefit microsimulation engine for measuring how an income
//! shock and the policy response to it move child poverty.
//!
//! The pipeline runs in a fixed order over household microdata:
//!
//! 1. [`shock`] turns labor-survey cell aggregates into income-change factors
//!    and applies them to wages and self-employment income;
//! 2. [`fiscal`] evaluates the tax wedge, guaranteed minimum assistance,
//!    allowances and the one-off and basic-income transfers month by month;
//! 3. [`poverty`] equivalizes disposable income and measures relative and
//!    absolute poverty with survey weights;
//! 4. [`scenario`] composes the above into single-factor counterfactuals, the
//!    combined scenario, an uncertainty band and grouped breakdowns.
//!
//! [`microdata`] holds the population model, CSV I/O and a seedable
//! synthetic generator that stands in for confidential survey microdata.
//!
//! The guide under `book/` walks through each stage; its code listings are
//! compiled and run as doctests of this crate.

/// Defines a fieldless enum with a fixed snake_case name per variant, used
/// for CSV cells and JSON keys alike.
macro_rules! named_enum {
    ($(#[$meta:meta])* pub enum $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash,
                 serde::Serialize, serde::Deserialize, schemars::JsonSchema)]
        pub enum $name {
            $(#[serde(rename = $text)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl std::fmt::Display for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl std::str::FromStr for $name {
            type Err = crate::UnknownName;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(crate::UnknownName {
                        kind: stringify!($name),
                        value: s.to_owned(),
                    }),
                }
            }
        }
    };
}

mod csv_table;
pub mod error;
pub mod fiscal;
pub mod microdata;
pub mod money;
pub mod nace;
pub mod poverty;
pub mod scenario;
pub mod shock;

#[cfg(doctest)]
mod book;

pub use error::{Error, Result, Stage};

/// A string that names no variant of the expected enum.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown {kind} `{value}`")]
pub struct UnknownName {
    pub kind: &'static str,
    pub value: String,
}
