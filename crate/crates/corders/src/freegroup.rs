//! Exact free-group word arithmetic and ball enumeration over a fixed finite rank.
//!
//! Words are stored as freely reduced sequences of signed letters.  The global
//! composition convention is: in a word `w = s_k … s_1` the *rightmost* letter
//! `s_1` acts first, so `w(x) = s_k(… s_1(x) …)`.  Every other module shares
//! this convention.
//!
//! Text encoding: a lowercase letter is a generator, the corresponding
//! uppercase letter its inverse (`"a"`, `"A"`, `"b"`, `"B"`, …) and `"e"` is
//! the empty word.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// The alphabet of a free group of the given rank: the signed letters are
/// exactly `a_1, a_1⁻¹, …, a_n, a_n⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Alphabet {
    rank: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("rank must be at least 1, got {0}")]
    BadRank(u32),
    #[error("rank {0} exceeds the text-encoding limit of 26 generators")]
    RankTooLargeForText(u32),
    #[error("alphabet mismatch: rank {0} vs rank {1}")]
    AlphabetMismatch(u32, u32),
    #[error("parse error at position {pos}: {reason}")]
    Parse { pos: usize, reason: String },
    #[error("commutator product needs an even rank, got {0}")]
    OddRank(u32),
}

impl Alphabet {
    pub fn new(rank: u32) -> Result<Self, WordError> {
        if rank == 0 {
            return Err(WordError::BadRank(rank));
        }
        Ok(Alphabet { rank })
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// All 2n signed letters in the fixed enumeration order
    /// `a_1 < a_1⁻¹ < a_2 < a_2⁻¹ < …`.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.rank).flat_map(|g| {
            [
                Letter {
                    gen: g,
                    inverse: false,
                },
                Letter {
                    gen: g,
                    inverse: true,
                },
            ]
        })
    }
}

/// A signed letter `a_gen` (generator) or `a_gen⁻¹` (inverse).
///
/// `Ord` realizes the fixed letter order `a_1 < a_1⁻¹ < a_2 < a_2⁻¹ < …`
/// used by shortlex enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: u32,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: u32, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    /// Index in the letter enumeration `0..2n`.
    pub fn index(self) -> usize {
        (self.gen as usize) * 2 + usize::from(self.inverse)
    }

    pub fn from_index(idx: usize) -> Self {
        Letter {
            gen: (idx / 2) as u32,
            inverse: idx % 2 == 1,
        }
    }

    pub fn to_char(self) -> char {
        let base = if self.inverse { b'A' } else { b'a' };
        (base + self.gen as u8) as char
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'a'..='z' => Some(Letter {
                gen: c as u32 - 'a' as u32,
                inverse: false,
            }),
            'A'..='Z' => Some(Letter {
                gen: c as u32 - 'A' as u32,
                inverse: true,
            }),
            _ => None,
        }
    }
}

/// A freely reduced word: no adjacent `s s⁻¹` pair occurs.  The empty
/// sequence is the group identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedWord {
    alphabet: Alphabet,
    letters: Vec<Letter>,
}

impl ReducedWord {
    pub fn identity(alphabet: Alphabet) -> Self {
        ReducedWord {
            alphabet,
            letters: Vec::new(),
        }
    }

    /// Build a word from raw letters, performing free reduction.
    pub fn from_letters(
        alphabet: Alphabet,
        letters: impl IntoIterator<Item = Letter>,
    ) -> Result<Self, WordError> {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if l.gen >= alphabet.rank {
                return Err(WordError::Parse {
                    pos: out.len(),
                    reason: format!("letter index {} beyond rank {}", l.gen + 1, alphabet.rank),
                });
            }
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Ok(ReducedWord {
            alphabet,
            letters: out,
        })
    }

    pub fn generator(alphabet: Alphabet, gen: u32) -> Result<Self, WordError> {
        Self::from_letters(alphabet, [Letter::new(gen, false)])
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Free-group multiplication: free reduction of the concatenation.
    pub fn multiply(&self, other: &ReducedWord) -> Result<ReducedWord, WordError> {
        if self.alphabet != other.alphabet {
            return Err(WordError::AlphabetMismatch(
                self.alphabet.rank,
                other.alphabet.rank,
            ));
        }
        let mut out = self.letters.clone();
        for &l in &other.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Ok(ReducedWord {
            alphabet: self.alphabet,
            letters: out,
        })
    }

    /// Group inverse: reversed sequence with each letter sign-flipped.
    pub fn invert(&self) -> ReducedWord {
        ReducedWord {
            alphabet: self.alphabet,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Parse the compact text encoding (`"aBAb"`, `"e"` for the identity).
    pub fn parse(alphabet: Alphabet, s: &str) -> Result<Self, WordError> {
        if alphabet.rank > 26 {
            return Err(WordError::RankTooLargeForText(alphabet.rank));
        }
        if s == "e" {
            return Ok(Self::identity(alphabet));
        }
        let mut letters = Vec::with_capacity(s.len());
        for (pos, c) in s.chars().enumerate() {
            let l = Letter::from_char(c).ok_or_else(|| WordError::Parse {
                pos,
                reason: format!("illegal character {c:?}"),
            })?;
            if l.gen >= alphabet.rank {
                return Err(WordError::Parse {
                    pos,
                    reason: format!("letter {c:?} beyond rank {}", alphabet.rank),
                });
            }
            letters.push(l);
        }
        Self::from_letters(alphabet, letters)
    }

    pub fn is_reduced(letters: &[Letter]) -> bool {
        letters.windows(2).all(|w| w[0] != w[1].inverse())
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// Shortlex comparison: length first, then lexicographic in the fixed letter
/// order.  `ReducedWord`'s derived `Ord` is *not* shortlex (it is plain
/// lexicographic over the letter vector), so ball enumeration sorts with this.
pub fn shortlex_cmp(a: &ReducedWord, b: &ReducedWord) -> std::cmp::Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.letters.cmp(&b.letters))
}

/// All reduced words of length at most `radius`, each exactly once, in
/// shortlex order.
pub fn ball(alphabet: Alphabet, radius: u32) -> Vec<ReducedWord> {
    let mut out = vec![ReducedWord::identity(alphabet)];
    let mut frontier: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &frontier {
            for l in alphabet.letters() {
                if w.last() == Some(&l.inverse()) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        // Children of shortlex-sorted parents are generated in shortlex order
        // already: same length, parents in lex order, letters appended in the
        // letter order.
        for v in &next {
            out.push(ReducedWord {
                alphabet,
                letters: v.clone(),
            });
        }
        frontier = next;
    }
    out
}

/// The product of commutators `[a_1,b_1⁻¹]⋯[a_m,b_m⁻¹]` for a rank-2m
/// alphabet with generators paired as `(a_1,b_1) = (g_0,g_1)`,
/// `(a_2,b_2) = (g_2,g_3)`, and so on; each factor is the word
/// `a b⁻¹ a⁻¹ b` (rightmost letter acts first, so it applies `b`, then
/// `a⁻¹`, then `b⁻¹`, then `a`).
///
/// This orientation is the positive generator of the basepoint-gap
/// stabilizer for the standard cyclic arrangement x₀, D(a), D(b), D(a⁻¹),
/// D(b⁻¹), …: its attracting fixed point lies in D(a_1), the domain
/// immediately counterclockwise of the basepoint, so its lifted powers
/// climb one sheet per application and straddle the deck translation as
/// the extension-order chains require.
pub fn commutator_product(alphabet: Alphabet) -> Result<ReducedWord, WordError> {
    if !alphabet.rank.is_multiple_of(2) {
        return Err(WordError::OddRank(alphabet.rank));
    }
    let mut letters = Vec::new();
    for pair in 0..alphabet.rank / 2 {
        let a = Letter::new(2 * pair, false);
        let b = Letter::new(2 * pair + 1, false);
        letters.extend([a, b.inverse(), a.inverse(), b]);
    }
    ReducedWord::from_letters(alphabet, letters)
}

/// `1 + Σ_{i=1..r} 2n(2n−1)^{i−1}`: the number of reduced words of length ≤ r.
pub fn ball_size(rank: u32, radius: u32) -> u64 {
    let two_n = 2 * rank as u64;
    let mut total = 1u64;
    let mut layer = 1u64;
    for i in 1..=radius as u64 {
        layer = if i == 1 { two_n } else { layer * (two_n - 1) };
        total += layer;
    }
    total
}
