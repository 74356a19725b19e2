use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element `aᵏbˡ` of the Klein-bottle group `⟨a, b | abab⁻¹⟩`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KleinWord {
    pub k: i64,
    pub l: i64,
}

fn parity_sign(l: i64) -> i64 {
    if l.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

impl KleinWord {
    pub const IDENTITY: KleinWord = KleinWord { k: 0, l: 0 };
    pub const A: KleinWord = KleinWord { k: 1, l: 0 };
    pub const B: KleinWord = KleinWord { k: 0, l: 1 };

    pub const fn new(k: i64, l: i64) -> Self {
        KleinWord { k, l }
    }

    /// `(k, l)(m, n) = (k + (−1)ˡm, l + n)`
    pub fn mul(self, rhs: KleinWord) -> KleinWord {
        KleinWord { k: self.k + parity_sign(self.l) * rhs.k, l: self.l + rhs.l }
    }

    pub fn inverse(self) -> KleinWord {
        KleinWord { k: -parity_sign(self.l) * self.k, l: -self.l }
    }

    pub fn pow(self, e: i64) -> KleinWord {
        let base = if e < 0 { self.inverse() } else { self };
        (0..e.unsigned_abs()).fold(KleinWord::IDENTITY, |acc, _| acc.mul(base))
    }

    /// Whether `aᵏ` is orientation preserving in the standard action, i.e. `l` even.
    pub fn preserves_orientation(self) -> bool {
        self.l.rem_euclid(2) == 0
    }
}

impl fmt::Display for KleinWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a^{} b^{}", self.k, self.l)
    }
}

/// One of `a`, `a⁻¹`, `b`, `b⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    pub fn word(self) -> KleinWord {
        match self {
            Letter::A => KleinWord::new(1, 0),
            Letter::AInv => KleinWord::new(-1, 0),
            Letter::B => KleinWord::new(0, 1),
            Letter::BInv => KleinWord::new(0, -1),
        }
    }
}

/// Parses words such as `abab⁻¹`, `aba^-1B` or `a b A`; an upper-case letter
/// is the inverse.
pub fn parse_letters(s: &str) -> Result<Vec<Letter>> {
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let base = match chars[i] {
            'a' => Letter::A,
            'A' => Letter::AInv,
            'b' => Letter::B,
            'B' => Letter::BInv,
            c => return Err(Error::parse("Klein word", format!("unexpected '{c}' in {s:?}"))),
        };
        i += 1;
        let inverted = if chars[i..].starts_with(&['⁻', '¹']) {
            i += 2;
            true
        } else if chars[i..].starts_with(&['^', '-', '1']) {
            i += 3;
            true
        } else {
            false
        };
        out.push(match (base, inverted) {
            (l, false) => l,
            (Letter::A, true) => Letter::AInv,
            (Letter::AInv, true) => Letter::A,
            (Letter::B, true) => Letter::BInv,
            (Letter::BInv, true) => Letter::B,
        });
    }
    Ok(out)
}

/// Folds a word into its normal form `aᵏbˡ`.
pub fn klein_normal_form(word: &[Letter]) -> KleinWord {
    word.iter().fold(KleinWord::IDENTITY, |acc, l| acc.mul(l.word()))
}

impl FromStr for KleinWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(klein_normal_form(&parse_letters(s)?))
    }
}

/// Whether `(a1, b1)` is again a standard generating pair: `a1 = a^{±1}` and
/// `b1 = aᵏb^{±1}`.
pub fn is_standard_pair(a1: KleinWord, b1: KleinWord) -> bool {
    a1.l == 0 && a1.k.abs() == 1 && b1.l.abs() == 1
}
