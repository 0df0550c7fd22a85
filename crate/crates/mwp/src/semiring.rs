//! The five-valued mwp semiring extended with a local failure element.
//!
//! Flow coefficients order as `0 < m < w < p < ∞`. Join is max under this
//! order; product is max on the non-zero values with `0` annihilating and
//! `m` acting as unit. The extra top value `∞` ("i" in reports) marks a
//! flow with no polynomial bound without aborting the whole analysis.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A flow-growth coefficient between two program variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Coefficient {
    /// No flow.
    #[serde(rename = "0")]
    Zero,
    /// Maximum-like dependence (identity flow).
    #[serde(rename = "m")]
    M,
    /// Weak polynomial (additive accumulation).
    #[serde(rename = "w")]
    W,
    /// Polynomial dependence.
    #[serde(rename = "p")]
    P,
    /// No polynomial bound; local failure marker.
    #[serde(rename = "i")]
    Inf,
}

impl Coefficient {
    pub const ALL: [Coefficient; 5] = [
        Coefficient::Zero,
        Coefficient::M,
        Coefficient::W,
        Coefficient::P,
        Coefficient::Inf,
    ];

    /// Semiring addition: max under the total order. `Zero` is the unit,
    /// `Inf` absorbs.
    pub fn join(self, other: Coefficient) -> Coefficient {
        self.max(other)
    }

    /// Semiring multiplication. `Zero` annihilates (even against `Inf`:
    /// a non-existent flow cannot fail), `M` is the unit, and any other
    /// pair composes by worst case.
    pub fn times(self, other: Coefficient) -> Coefficient {
        if self == Coefficient::Zero || other == Coefficient::Zero {
            Coefficient::Zero
        } else {
            self.max(other)
        }
    }

    pub fn is_zero(self) -> bool {
        self == Coefficient::Zero
    }

    /// One-letter report name: "0", "m", "w", "p", "i".
    pub fn symbol(self) -> &'static str {
        match self {
            Coefficient::Zero => "0",
            Coefficient::M => "m",
            Coefficient::W => "w",
            Coefficient::P => "p",
            Coefficient::Inf => "i",
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}
