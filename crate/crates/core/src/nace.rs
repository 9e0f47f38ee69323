//! NACE Rev.2 industry codes.
//!
//! The wage-cell universe uses 89 two-digit codes: the 88 NACE Rev.2
//! divisions plus `00` for an activity that was not stated. Self-employment
//! cells use the 21 one-letter sections; `00` belongs to none of them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// One-letter NACE Rev.2 section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NaceSection {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    I,
    J,
    K,
    L,
    M,
    N,
    O,
    P,
    Q,
    R,
    S,
    T,
    U,
}

impl NaceSection {
    pub const ALL: [NaceSection; 21] = [
        Self::A,
        Self::B,
        Self::C,
        Self::D,
        Self::E,
        Self::F,
        Self::G,
        Self::H,
        Self::I,
        Self::J,
        Self::K,
        Self::L,
        Self::M,
        Self::N,
        Self::O,
        Self::P,
        Self::Q,
        Self::R,
        Self::S,
        Self::T,
        Self::U,
    ];

    /// Inclusive range of two-digit divisions in this section.
    pub const fn divisions(self) -> (u8, u8) {
        match self {
            Self::A => (1, 3),
            Self::B => (5, 9),
            Self::C => (10, 33),
            Self::D => (35, 35),
            Self::E => (36, 39),
            Self::F => (41, 43),
            Self::G => (45, 47),
            Self::H => (49, 53),
            Self::I => (55, 56),
            Self::J => (58, 63),
            Self::K => (64, 66),
            Self::L => (68, 68),
            Self::M => (69, 75),
            Self::N => (77, 82),
            Self::O => (84, 84),
            Self::P => (85, 85),
            Self::Q => (86, 88),
            Self::R => (90, 93),
            Self::S => (94, 96),
            Self::T => (97, 98),
            Self::U => (99, 99),
        }
    }

    pub fn letter(self) -> char {
        (b'A' + self as u8) as char
    }

    pub fn from_letter(c: char) -> Option<Self> {
        let c = c.to_ascii_uppercase();
        if !c.is_ascii_uppercase() {
            return None;
        }
        Self::ALL.get((c as u8 - b'A') as usize).copied()
    }
}

impl fmt::Display for NaceSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Two-digit industry code from the 89-code wage-cell universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Nace2(u8);

/// Code used when the activity is not stated.
pub const NOT_STATED: Nace2 = Nace2(0);

impl Nace2 {
    pub const COUNT: usize = 89;

    pub fn new(code: u8) -> Option<Self> {
        (code == 0 || section_of(code).is_some()).then_some(Nace2(code))
    }

    pub const fn code(self) -> u8 {
        self.0
    }

    pub fn section(self) -> Option<NaceSection> {
        section_of(self.0)
    }

    /// All 89 codes in ascending order.
    pub fn all() -> impl Iterator<Item = Nace2> {
        (0u8..=99).filter_map(Nace2::new)
    }
}

fn section_of(code: u8) -> Option<NaceSection> {
    NaceSection::ALL.into_iter().find(|s| {
        let (lo, hi) = s.divisions();
        (lo..=hi).contains(&code)
    })
}

impl fmt::Display for Nace2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02}", self.0)
    }
}

impl Serialize for Nace2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{0}` is not a two-digit code of the 89-code NACE universe")]
pub struct NaceParseError(pub String);

impl FromStr for Nace2 {
    type Err = NaceParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() != 2 || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(NaceParseError(s.to_owned()));
        }
        s.parse::<u8>()
            .ok()
            .and_then(Nace2::new)
            .ok_or_else(|| NaceParseError(s.to_owned()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn universe_sizes() {
        assert_eq!(Nace2::all().count(), Nace2::COUNT);
        assert_eq!(NaceSection::ALL.len(), 21);
        let with_section = Nace2::all().filter(|c| c.section().is_some()).count();
        assert_eq!(with_section, 88);
    }

    #[test]
    fn parsing_and_sections() {
        assert_eq!("56".parse::<Nace2>().unwrap().section(), Some(NaceSection::I));
        assert_eq!("00".parse::<Nace2>().unwrap().section(), None);
        assert!("04".parse::<Nace2>().is_err());
        assert!("5".parse::<Nace2>().is_err());
        assert_eq!(NaceSection::from_letter('q'), Some(NaceSection::Q));
        assert_eq!(NaceSection::from_letter('V'), None);
        assert_eq!(NaceSection::U.letter(), 'U');
    }
}
