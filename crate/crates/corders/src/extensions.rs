//! Left orders on the central extensions F_{2n} × ℤ induced by circular
//! orders through covering dynamics: positions on the line over the k-fold
//! cover, exact comparison, cofinality brackets, and the distinguishing
//! chains of commutator powers.
//!
//! Every central extension of a free group by ℤ is trivial, so elements are
//! plain pairs `(w, m)` with the product group law.  The order is read off
//! the line model: the fixed-point lift of each letter composes to a genuine
//! homomorphism (the fixed-point lift of `s⁻¹` is the inverse lift of `s`,
//! by uniqueness of lifts with fixed points), and the central generator `z`
//! acts as the positive deck translation of the line over the k-cover —
//! one deck unit is `k` base-circle sheets.

use crate::circle::{line_cmp, CircleError, Cover, CoverPoint};
use crate::freegroup::{Alphabet, ReducedWord, WordError};
use crate::orders::{OrderError, OrderValue};
use crate::pingpong::{
    lift_fixed_points, preset_schottky, realize_moebius, LiftedRealization, PingPongError,
};
use serde::Serialize;
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExtError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Circle(#[from] CircleError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    PingPong(#[from] PingPongError),
    #[error("cofinality search for {element} exceeded the bound {bound}: evidence of non-cofinality")]
    SearchBound { element: String, bound: i64 },
    #[error("chain comparison failed: expected {expected} < {found}")]
    ChainBroken { expected: String, found: String },
    #[error("bad extension element syntax {0:?} (expected word:m)")]
    Parse(String),
}

/// An element `(w, m)` of F × ℤ; `m` is the central coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtElement {
    pub w: ReducedWord,
    pub m: i64,
}

impl ExtElement {
    pub fn new(w: ReducedWord, m: i64) -> Self {
        ExtElement { w, m }
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        ExtElement {
            w: ReducedWord::identity(alphabet),
            m: 0,
        }
    }

    /// The central generator z = (ε, 1).
    pub fn z(alphabet: Alphabet) -> Self {
        ExtElement {
            w: ReducedWord::identity(alphabet),
            m: 1,
        }
    }

    /// Product group law of the trivial extension.
    pub fn multiply(&self, other: &ExtElement) -> Result<ExtElement, WordError> {
        Ok(ExtElement {
            w: self.w.multiply(&other.w)?,
            m: self.m + other.m,
        })
    }

    pub fn invert(&self) -> ExtElement {
        ExtElement {
            w: self.w.invert(),
            m: -self.m,
        }
    }

    pub fn pow(&self, n: i64) -> Result<ExtElement, WordError> {
        let mut out = ExtElement::identity(self.w.alphabet());
        let step = if n >= 0 { self.clone() } else { self.invert() };
        for _ in 0..n.abs() {
            out = out.multiply(&step)?;
        }
        Ok(out)
    }

    /// Parse the `word:m` text form (`e:1` is z).
    pub fn parse(alphabet: Alphabet, s: &str) -> Result<Self, ExtError> {
        let (ws, ms) = s.split_once(':').ok_or_else(|| ExtError::Parse(s.into()))?;
        let w = ReducedWord::parse(alphabet, ws.trim())?;
        let m: i64 = ms
            .trim()
            .parse()
            .map_err(|_| ExtError::Parse(s.into()))?;
        Ok(ExtElement { w, m })
    }
}

impl fmt::Display for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.w, self.m)
    }
}

/// The exact line position of `(w, m)`: the lifted word applied to the
/// basepoint lift `(x₀, 0)` on the line model, shifted by `m` deck units
/// (`m · k` base-circle sheets).
pub fn position(
    realization: &LiftedRealization,
    e: &ExtElement,
) -> Result<CoverPoint, CircleError> {
    let start = CoverPoint::new(realization.base().basepoint().clone(), 0);
    let mut p = realization.line_point(&e.w, &start)?;
    p.sheet += e.m * i64::from(realization.k());
    Ok(p)
}

/// The total left-invariant order on F × ℤ induced by the lifted action:
/// sign of `position(e₁) − position(e₂)` in the line order.
pub fn ext_compare(
    realization: &LiftedRealization,
    e1: &ExtElement,
    e2: &ExtElement,
) -> Result<OrderValue, OrderError> {
    if e1 == e2 {
        return Ok(0);
    }
    let p1 = position(realization, e1).map_err(OrderError::Circle)?;
    let p2 = position(realization, e2).map_err(OrderError::Circle)?;
    let cover = Cover::line(realization.cover().cut.clone());
    match line_cmp(&cover, &p1, &p2).map_err(OrderError::Circle)? {
        Ordering::Less => Ok(-1),
        Ordering::Greater => Ok(1),
        // Distinct group elements at one position: the basepoint lift has a
        // nontrivial stabilizer, contradicting the covering construction.
        Ordering::Equal => Err(OrderError::StabilizerViolation {
            word: e2
                .invert()
                .multiply(e1)
                .map_err(OrderError::Word)?
                .to_string(),
        }),
    }
}

/// Search bound for cofinality brackets.
pub const COFINALITY_BOUND: i64 = 1 << 10;

/// One cofinality bracket: `z^k ≤ g < z^{k+1}`.
#[derive(Debug, Clone, Serialize)]
pub struct CofinalityBracket {
    pub element: String,
    pub exponent: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CofinalityReport {
    pub brackets: Vec<CofinalityBracket>,
}

impl fmt::Display for CofinalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.brackets {
            writeln!(
                f,
                "z^{} <= {} < z^{}",
                b.exponent,
                b.element,
                b.exponent + 1
            )?;
        }
        Ok(())
    }
}

/// For each queried element find the exponent `k` with `z^k ≤ g < z^{k+1}`,
/// expanding the search outward from 0; exceeding [`COFINALITY_BOUND`] is
/// reported as evidence of non-cofinality, never an infinite loop.
pub fn cofinality_check(
    realization: &LiftedRealization,
    elements: &[ExtElement],
) -> Result<CofinalityReport, ExtError> {
    let cover = Cover::line(realization.cover().cut.clone());
    let deck = i64::from(realization.k());
    let mut brackets = Vec::new();
    for g in elements {
        let pos = position(realization, g)?;
        // z^k sits at (x₀, k·deck); the bracket condition is a pure
        // line-order comparison against the shifted basepoint lift.
        let base = CoverPoint::new(realization.base().basepoint().clone(), 0);
        let at = |k: i64| CoverPoint::new(base.base.clone(), k * deck);
        let le = |a: &CoverPoint, b: &CoverPoint| -> Result<bool, ExtError> {
            Ok(line_cmp(&cover, a, b)? != Ordering::Greater)
        };
        let mut found = None;
        for abs in 0..=COFINALITY_BOUND {
            for k in if abs == 0 { vec![0] } else { vec![abs, -abs] } {
                if le(&at(k), &pos)? && !le(&at(k + 1), &pos)? {
                    found = Some(k);
                    break;
                }
            }
            if found.is_some() {
                break;
            }
        }
        let exponent = found.ok_or_else(|| ExtError::SearchBound {
            element: g.to_string(),
            bound: COFINALITY_BOUND,
        })?;
        brackets.push(CofinalityBracket {
            element: g.to_string(),
            exponent,
        });
    }
    Ok(CofinalityReport { brackets })
}

/// The verified distinguishing chain for the k-lift order on F₂ × ℤ:
/// id < c < c² < … < c^{k−1} < z < c^k, with c = [a, b].
#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub k: u32,
    /// The chain elements in ascending verified order, as `word:m` strings.
    pub chain: Vec<String>,
    pub verified: bool,
}

impl fmt::Display for ChainReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k = {}: {}", self.k, self.chain.join(" < "))?;
        if !self.verified {
            write!(f, "  [NOT VERIFIED]")?;
        }
        Ok(())
    }
}

/// The standard certified k-lift of the rank-2n Schottky action (Möbius
/// realization, fixed-point lifts), the realization behind every extension
/// order in this module.
pub fn standard_klift_realization(n: u32, k: u32) -> Result<LiftedRealization, PingPongError> {
    let cfg = preset_schottky(n);
    let action = realize_moebius(&cfg)?;
    lift_fixed_points(&cfg, &action, k)
}

/// Build and verify the chain for the n=1, k-lift order; every consecutive
/// comparison is computed by [`ext_compare`] and a failure is an error (the
/// chain is ground truth, not a hypothesis).
pub fn chain_report(k: u32) -> Result<ChainReport, ExtError> {
    assert!(k >= 2);
    let realization = standard_klift_realization(1, k)?;
    let alphabet = realization.base().alphabet();
    let c = ExtElement::new(crate::freegroup::commutator_product(alphabet)?, 0);
    let mut chain = vec![ExtElement::identity(alphabet)];
    for i in 1..k {
        chain.push(c.pow(i64::from(i))?);
    }
    chain.push(ExtElement::z(alphabet));
    chain.push(c.pow(i64::from(k))?);
    for pair in chain.windows(2) {
        if ext_compare(&realization, &pair[0], &pair[1])? != -1 {
            return Err(ExtError::ChainBroken {
                expected: pair[0].to_string(),
                found: pair[1].to_string(),
            });
        }
    }
    Ok(ChainReport {
        k,
        chain: chain.iter().map(|e| e.to_string()).collect(),
        verified: true,
    })
}
