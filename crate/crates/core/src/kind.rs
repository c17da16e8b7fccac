//! Mean identifiers.

use core::fmt;
use core::str::FromStr;

/// One of the seven means.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeanKind {
    /// Harmonic mean `2xy / (x + y)`.
    H,
    /// Geometric mean `sqrt(xy)`.
    G,
    /// Arithmetic mean `(x + y) / 2`.
    A,
    /// Quadratic (root mean square) mean `sqrt((x^2 + y^2) / 2)`.
    Q,
    /// Seiffert mean `(x - y) / (2 asin((x - y) / (x + y)))`.
    P,
    /// Logarithmic mean `(x - y) / (ln x - ln y)`.
    L,
    /// Identric mean `exp((x ln x - y ln y) / (x - y) - 1)`.
    I,
}

impl MeanKind {
    /// All seven kinds in canonical order.
    pub const ALL: [MeanKind; 7] = [
        MeanKind::H,
        MeanKind::G,
        MeanKind::A,
        MeanKind::Q,
        MeanKind::P,
        MeanKind::L,
        MeanKind::I,
    ];

    /// One-letter tag.
    pub fn as_str(self) -> &'static str {
        match self {
            MeanKind::H => "H",
            MeanKind::G => "G",
            MeanKind::A => "A",
            MeanKind::Q => "Q",
            MeanKind::P => "P",
            MeanKind::L => "L",
            MeanKind::I => "I",
        }
    }

    /// `true` for `H`, `G`, `A`, `Q`.
    pub fn is_classical(self) -> bool {
        matches!(self, MeanKind::H | MeanKind::G | MeanKind::A | MeanKind::Q)
    }
}

impl fmt::Display for MeanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Unknown mean name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseKindError;

impl fmt::Display for ParseKindError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected one of H, G, A, Q, P, L, I")
    }
}

impl FromStr for MeanKind {
    type Err = ParseKindError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let table: [(&str, &str, MeanKind); 7] = [
            ("h", "harmonic", MeanKind::H),
            ("g", "geometric", MeanKind::G),
            ("a", "arithmetic", MeanKind::A),
            ("q", "quadratic", MeanKind::Q),
            ("p", "seiffert", MeanKind::P),
            ("l", "logarithmic", MeanKind::L),
            ("i", "identric", MeanKind::I),
        ];
        table
            .iter()
            .find(|(tag, long, _)| s.eq_ignore_ascii_case(tag) || s.eq_ignore_ascii_case(long))
            .map(|&(_, _, k)| k)
            .ok_or(ParseKindError)
    }
}
