use std::fmt;

use crate::error::{Error, Result};

/// A cell color: a finite value in `1..=k`, or the static `INF` sentinel.
///
/// The derived ordering puts `Inf` above every finite color. Structural
/// equality (`==`) treats two `Inf` values as equal so grids can be compared;
/// the recoloring rule itself uses [`Color::matches`], under which `Inf`
/// equals nothing, not even another `Inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    Finite(u16),
    Inf,
}

impl Color {
    pub const INF_TOKEN: &'static str = "INF";

    /// Rule-level equality: both finite and the same value.
    #[inline]
    pub fn matches(self, other: Color) -> bool {
        match (self, other) {
            (Color::Finite(a), Color::Finite(b)) => a == b,
            _ => false,
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        matches!(self, Color::Finite(_))
    }

    #[inline]
    pub fn value(self) -> Option<u16> {
        match self {
            Color::Finite(v) => Some(v),
            Color::Inf => None,
        }
    }
}

impl From<u16> for Color {
    fn from(v: u16) -> Self {
        Color::Finite(v)
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::Finite(v) => write!(f, "{v}"),
            Color::Inf => f.write_str(Color::INF_TOKEN),
        }
    }
}

/// The ordered color set `{1..k}`; `k` is the target color of a dynamo.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Palette {
    k: u16,
}

impl Palette {
    pub fn new(k: u16) -> Result<Self> {
        if k < 2 {
            return Err(Error::Palette(k));
        }
        Ok(Palette { k })
    }

    /// Two colors: 1 is white, 2 is black.
    pub fn bicolor() -> Self {
        Palette { k: 2 }
    }

    #[inline]
    pub fn k(self) -> u16 {
        self.k
    }

    #[inline]
    pub fn top(self) -> Color {
        Color::Finite(self.k)
    }

    /// `INF` or a finite color in `1..=k`.
    pub fn admits(self, c: Color) -> bool {
        match c {
            Color::Finite(v) => (1..=self.k).contains(&v),
            Color::Inf => true,
        }
    }

    pub fn colors(self) -> impl Iterator<Item = Color> {
        (1..=self.k).map(Color::Finite)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inf_is_above_every_finite_color() {
        for v in [1u16, 2, 100, u16::MAX] {
            assert!(Color::Inf > Color::Finite(v));
        }
    }

    #[test]
    fn inf_never_matches() {
        assert!(!Color::Inf.matches(Color::Inf));
        assert!(!Color::Inf.matches(Color::Finite(3)));
        assert!(Color::Finite(3).matches(Color::Finite(3)));
        assert!(!Color::Finite(3).matches(Color::Finite(4)));
    }

    #[test]
    fn palette_requires_two_colors() {
        assert_eq!(Palette::new(1), Err(Error::Palette(1)));
        assert_eq!(Palette::new(0), Err(Error::Palette(0)));
        let p = Palette::new(6).unwrap();
        assert!(p.admits(Color::Finite(6)));
        assert!(p.admits(Color::Inf));
        assert!(!p.admits(Color::Finite(7)));
        assert!(!p.admits(Color::Finite(0)));
        assert_eq!(p.colors().count(), 6);
    }
}
