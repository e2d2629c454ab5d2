//! Circular and left orders on free groups: lazy oracles, materialized
//! tables, axiom validation, conversions, conjugation, completion, and the
//! midpoint embedding back into the rational circle.
//!
//! A circular order value is an `i8` in {−1, 0, +1}: 0 exactly on triples
//! with a repeated element, ±1 the cyclic orientation otherwise.

use crate::circle::{cyclic_ord, ProjectivePoint};
use crate::freegroup::{ball, shortlex_cmp, Alphabet, ReducedWord, WordError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};
use thiserror::Error;

pub type OrderValue = i8;

#[derive(Debug, Error)]
pub enum OrderError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Circle(#[from] crate::circle::CircleError),
    #[error("basepoint stabilizer is nontrivial: {word} fixes the basepoint")]
    StabilizerViolation { word: String },
    #[error("membership inconsistency for {word}: fixes basepoint = {fixes}, declared member = {member}")]
    MembershipInconsistency {
        word: String,
        fixes: bool,
        member: bool,
    },
    #[error("left order inconsistency on triple ({0}, {1}, {2}): coboundary value ±3")]
    LeftOrderInconsistency(String, String, String),
    #[error("midpoint embedding: {found} admissible gaps (expected exactly 1) when placing element #{index}")]
    BadGapCount { index: usize, found: usize },
    #[error("table is not a valid circular order: {0}")]
    InvalidTable(String),
    #[error("CSV format error at line {line}: {reason}")]
    Csv { line: usize, reason: String },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

/// A lazy circular-order evaluator.  Implementations must be pure; tables
/// are materialized from oracles in parallel.
pub trait CircularOracle: Sync {
    fn alphabet(&self) -> Alphabet;
    fn eval(&self, u: &ReducedWord, v: &ReducedWord, w: &ReducedWord)
        -> Result<OrderValue, OrderError>;
}

/// A lazy left-order evaluator over an element type `E`: returns −1, 0, +1
/// for <, =, > respectively.
pub trait LeftOrderOracle<E>: Sync {
    fn cmp(&self, a: &E, b: &E) -> Result<OrderValue, OrderError>;
}

impl<E, F> LeftOrderOracle<E> for F
where
    F: Fn(&E, &E) -> Result<OrderValue, OrderError> + Sync,
{
    fn cmp(&self, a: &E, b: &E) -> Result<OrderValue, OrderError> {
        self(a, b)
    }
}

// ---------------------------------------------------------------------------
// Materialized tables
// ---------------------------------------------------------------------------

/// A total table of circular-order values over all ordered triples of a
/// shortlex-enumerated ball.  All ordered triples are stored (flat `i8`
/// array) so antisymmetry is a checked property, not an assumption.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderTable {
    radius: u32,
    alphabet: Alphabet,
    words: Vec<ReducedWord>,
    index: HashMap<ReducedWord, usize>,
    values: Vec<i8>,
}

impl OrderTable {
    /// Evaluate the oracle on every ordered triple of `ball(radius)`,
    /// in parallel.
    pub fn materialize<O: CircularOracle>(oracle: &O, radius: u32) -> Result<Self, OrderError> {
        let alphabet = oracle.alphabet();
        let words = ball(alphabet, radius);
        let n = words.len();
        let rows: Result<Vec<Vec<i8>>, OrderError> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![0i8; n * n];
                for j in 0..n {
                    for k in 0..n {
                        row[j * n + k] = oracle.eval(&words[i], &words[j], &words[k])?;
                    }
                }
                Ok(row)
            })
            .collect();
        let values = rows?.concat();
        let index = words.iter().cloned().zip(0..).collect();
        Ok(OrderTable {
            radius,
            alphabet,
            words,
            index,
            values,
        })
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// The ball, in shortlex order.
    pub fn words(&self) -> &[ReducedWord] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word_index(&self, w: &ReducedWord) -> Option<usize> {
        self.index.get(w).copied()
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize, k: usize) -> i8 {
        let n = self.words.len();
        self.values[(i * n + j) * n + k]
    }

    pub fn value_words(&self, u: &ReducedWord, v: &ReducedWord, w: &ReducedWord) -> Option<i8> {
        Some(self.value(
            self.word_index(u)?,
            self.word_index(v)?,
            self.word_index(w)?,
        ))
    }

    /// Build directly from parts (used by the CSV reader and by tests that
    /// construct deliberate violations).
    pub fn from_parts(
        radius: u32,
        alphabet: Alphabet,
        values: Vec<i8>,
    ) -> Result<Self, OrderError> {
        let words = ball(alphabet, radius);
        let n = words.len();
        if values.len() != n * n * n {
            return Err(OrderError::InvalidTable(format!(
                "expected {} values, got {}",
                n * n * n,
                values.len()
            )));
        }
        let index = words.iter().cloned().zip(0..).collect();
        Ok(OrderTable {
            radius,
            alphabet,
            words,
            index,
            values,
        })
    }

    pub fn set_value(&mut self, i: usize, j: usize, k: usize, v: i8) {
        let n = self.words.len();
        self.values[(i * n + j) * n + k] = v;
    }

    /// Write the table as CSV: header `w1,w2,w3,c`, rows in shortlex triple
    /// order, byte-stable across runs.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), OrderError> {
        writeln!(out, "w1,w2,w3,c")?;
        let n = self.words.len();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    writeln!(
                        out,
                        "{},{},{},{}",
                        self.words[i],
                        self.words[j],
                        self.words[k],
                        self.value(i, j, k)
                    )?;
                }
            }
        }
        Ok(())
    }

    /// Parse a table produced by [`write_csv`].  The alphabet rank and
    /// radius are inferred from the words; totality is verified.
    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self, OrderError> {
        let mut lines = reader.lines().enumerate();
        match lines.next() {
            Some((_, Ok(h))) if h.trim() == "w1,w2,w3,c" => {}
            Some((_, Ok(h))) => {
                return Err(OrderError::Csv {
                    line: 1,
                    reason: format!("bad header {h:?}"),
                })
            }
            Some((_, Err(e))) => return Err(e.into()),
            None => {
                return Err(OrderError::Csv {
                    line: 1,
                    reason: "empty file".into(),
                })
            }
        }
        let mut rows: Vec<(String, String, String, i8)> = Vec::new();
        let mut max_gen = 0u32;
        let mut max_len = 0usize;
        for (ln, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.trim().split(',').collect();
            if parts.len() != 4 {
                return Err(OrderError::Csv {
                    line: ln + 1,
                    reason: format!("expected 4 fields, got {}", parts.len()),
                });
            }
            let c: i8 = parts[3].parse().map_err(|_| OrderError::Csv {
                line: ln + 1,
                reason: format!("bad value {:?}", parts[3]),
            })?;
            if !(-1..=1).contains(&c) {
                return Err(OrderError::Csv {
                    line: ln + 1,
                    reason: format!("value {c} out of range"),
                });
            }
            for w in &parts[..3] {
                if *w != "e" {
                    for ch in w.chars() {
                        let g = ch.to_ascii_lowercase() as u32 - 'a' as u32;
                        max_gen = max_gen.max(g);
                    }
                    max_len = max_len.max(w.chars().count());
                }
            }
            rows.push((
                parts[0].to_string(),
                parts[1].to_string(),
                parts[2].to_string(),
                c,
            ));
        }
        let alphabet = Alphabet::new(max_gen + 1)?;
        let radius = max_len as u32;
        let words = ball(alphabet, radius);
        let n = words.len();
        if rows.len() != n * n * n {
            return Err(OrderError::InvalidTable(format!(
                "expected {} rows for rank {} radius {}, got {}",
                n * n * n,
                max_gen + 1,
                radius,
                rows.len()
            )));
        }
        let mut values = vec![0i8; n * n * n];
        let index: HashMap<ReducedWord, usize> = words.iter().cloned().zip(0..).collect();
        for (ri, (w1, w2, w3, c)) in rows.iter().enumerate() {
            let lookup = |s: &str| -> Result<usize, OrderError> {
                let w = ReducedWord::parse(alphabet, s)?;
                index.get(&w).copied().ok_or_else(|| {
                    OrderError::InvalidTable(format!("word {s} outside ball({radius})"))
                })
            };
            let (i, j, k) = (lookup(w1)?, lookup(w2)?, lookup(w3)?);
            let expect = ((ri / (n * n)) % n, (ri / n) % n, ri % n);
            if (i, j, k) != expect {
                return Err(OrderError::InvalidTable(format!(
                    "row {} out of shortlex triple order",
                    ri + 2
                )));
            }
            values[(i * n + j) * n + k] = *c;
        }
        Self::from_parts(radius, alphabet, values)
    }
}

impl CircularOracle for OrderTable {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn eval(
        &self,
        u: &ReducedWord,
        v: &ReducedWord,
        w: &ReducedWord,
    ) -> Result<OrderValue, OrderError> {
        self.value_words(u, v, w).ok_or_else(|| {
            OrderError::InvalidTable(format!("triple ({u}, {v}, {w}) outside ball({})", self.radius))
        })
    }
}

// ---------------------------------------------------------------------------
// Axiom validation
// ---------------------------------------------------------------------------

pub const WITNESS_CAP: usize = 1000;

/// A category of axiom violations: the total count plus up to
/// [`WITNESS_CAP`] printable witness tuples.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ViolationSet {
    pub total: u64,
    pub witnesses: Vec<String>,
}

impl ViolationSet {
    fn merge(mut self, other: ViolationSet) -> ViolationSet {
        self.total += other.total;
        for w in other.witnesses {
            if self.witnesses.len() >= WITNESS_CAP {
                break;
            }
            self.witnesses.push(w);
        }
        self
    }

    fn push(&mut self, w: impl FnOnce() -> String) {
        self.total += 1;
        if self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push(w());
        }
    }
}

/// Result of the exhaustive circular-order axiom check on a table.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CocycleReport {
    /// Value 0 on a non-degenerate triple, or nonzero on a degenerate one.
    pub degeneracy: ViolationSet,
    /// A transposition of a triple that fails to flip the sign.
    pub antisymmetry: ViolationSet,
    /// A quadruple violating the alternating-sum identity.
    pub cocycle: ViolationSet,
    /// A translated triple with a different value.
    pub left_invariance: ViolationSet,
}

impl CocycleReport {
    pub fn passed(&self) -> bool {
        self.degeneracy.total == 0
            && self.antisymmetry.total == 0
            && self.cocycle.total == 0
            && self.left_invariance.total == 0
    }
}

impl fmt::Display for CocycleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "circular-order check: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        )?;
        for (name, set) in [
            ("degeneracy", &self.degeneracy),
            ("antisymmetry", &self.antisymmetry),
            ("cocycle", &self.cocycle),
            ("left-invariance", &self.left_invariance),
        ] {
            writeln!(f, "  {name}: {} violation(s)", set.total)?;
            for w in set.witnesses.iter().take(5) {
                writeln!(f, "    {w}")?;
            }
            if set.witnesses.len() > 5 {
                writeln!(f, "    … ({} witnesses recorded)", set.witnesses.len())?;
            }
        }
        Ok(())
    }
}

/// Exhaustively verify the circular-order axioms on a table: degeneracy,
/// antisymmetry under transpositions, the cocycle identity on all ordered
/// quadruples, and left invariance for every translation staying inside the
/// ball.  Violations are reported with witnesses, never raised as errors.
pub fn check_cocycle(t: &OrderTable) -> CocycleReport {
    let n = t.len();
    let words = t.words();

    // Degeneracy + antisymmetry, one O(n³) pass, parallel over the first
    // index.
    let (degeneracy, antisymmetry) = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut deg = ViolationSet::default();
            let mut anti = ViolationSet::default();
            for j in 0..n {
                for k in 0..n {
                    let v = t.value(i, j, k);
                    let repeated = i == j || j == k || i == k;
                    if repeated != (v == 0) {
                        deg.push(|| {
                            format!("({}, {}, {}) ↦ {v}", words[i], words[j], words[k])
                        });
                    }
                    if v != -t.value(j, i, k) || v != -t.value(i, k, j) {
                        anti.push(|| {
                            format!(
                                "({}, {}, {}): {v} vs swapped {} / {}",
                                words[i],
                                words[j],
                                words[k],
                                t.value(j, i, k),
                                t.value(i, k, j)
                            )
                        });
                    }
                }
            }
            (deg, anti)
        })
        .reduce(
            || (ViolationSet::default(), ViolationSet::default()),
            |(d1, a1), (d2, a2)| (d1.merge(d2), a1.merge(a2)),
        );

    // Cocycle identity on all n⁴ ordered quadruples (a1,a2,a3,a4):
    // c(a2,a3,a4) − c(a1,a3,a4) + c(a1,a2,a4) − c(a1,a2,a3) = 0.
    // Inner loop over a4 reads three contiguous rows.
    let cocycle = (0..n)
        .into_par_iter()
        .map(|a1| {
            let mut set = ViolationSet::default();
            for a2 in 0..n {
                for a3 in 0..n {
                    let c123 = t.value(a1, a2, a3);
                    let r234 = &t.values[(a2 * n + a3) * n..(a2 * n + a3) * n + n];
                    let r134 = &t.values[(a1 * n + a3) * n..(a1 * n + a3) * n + n];
                    let r124 = &t.values[(a1 * n + a2) * n..(a1 * n + a2) * n + n];
                    for a4 in 0..n {
                        if r234[a4] - r134[a4] + r124[a4] - c123 != 0 {
                            set.push(|| {
                                format!(
                                    "({}, {}, {}, {})",
                                    words[a1], words[a2], words[a3], words[a4]
                                )
                            });
                        }
                    }
                }
            }
            set
        })
        .reduce(ViolationSet::default, ViolationSet::merge);

    // Left invariance: for each g ≠ ε in the ball, over all triples whose
    // translations stay in the ball.
    let left_invariance = (0..n)
        .into_par_iter()
        .map(|gi| {
            let mut set = ViolationSet::default();
            if words[gi].is_empty() {
                return set;
            }
            let g = &words[gi];
            let trans: Vec<Option<usize>> = words
                .iter()
                .map(|u| g.multiply(u).ok().and_then(|gu| t.word_index(&gu)))
                .collect();
            let dom: Vec<usize> = (0..n).filter(|&u| trans[u].is_some()).collect();
            for &u in &dom {
                for &v in &dom {
                    for &w in &dom {
                        let (tu, tv, tw) =
                            (trans[u].unwrap(), trans[v].unwrap(), trans[w].unwrap());
                        if t.value(u, v, w) != t.value(tu, tv, tw) {
                            set.push(|| {
                                format!(
                                    "g = {}, triple ({}, {}, {}): {} vs {}",
                                    g,
                                    words[u],
                                    words[v],
                                    words[w],
                                    t.value(u, v, w),
                                    t.value(tu, tv, tw)
                                )
                            });
                        }
                    }
                }
            }
            set
        })
        .reduce(ViolationSet::default, ViolationSet::merge);

    CocycleReport {
        degeneracy,
        antisymmetry,
        cocycle,
        left_invariance,
    }
}

// ---------------------------------------------------------------------------
// Conversions and wrappers
// ---------------------------------------------------------------------------

/// The conjugate order `c_g(x, y, z) = c(xg, yg, zg)`.
pub struct ConjugateOracle<'a, O: CircularOracle> {
    inner: &'a O,
    g: ReducedWord,
}

pub fn conjugate<O: CircularOracle>(inner: &O, g: ReducedWord) -> ConjugateOracle<'_, O> {
    ConjugateOracle { inner, g }
}

impl<O: CircularOracle> CircularOracle for ConjugateOracle<'_, O> {
    fn alphabet(&self) -> Alphabet {
        self.inner.alphabet()
    }

    fn eval(
        &self,
        u: &ReducedWord,
        v: &ReducedWord,
        w: &ReducedWord,
    ) -> Result<OrderValue, OrderError> {
        self.inner.eval(
            &u.multiply(&self.g)?,
            &v.multiply(&self.g)?,
            &w.multiply(&self.g)?,
        )
    }
}

/// The coboundary circular order of a left order:
/// `c(g₁,g₂,g₃) = c′(g₂,g₃) − c′(g₁,g₃) + c′(g₁,g₂)` with `c′(x,y) = +1`
/// iff `x > y`.  The coboundary sum lands in {−1, 0, +1} for any genuine
/// total order; a value ±3 witnesses an intransitive input and is reported
/// as an error.
pub struct FromLeftOrder<'a, L> {
    alphabet: Alphabet,
    lo: &'a L,
}

pub fn from_left_order<L: LeftOrderOracle<ReducedWord>>(
    alphabet: Alphabet,
    lo: &L,
) -> FromLeftOrder<'_, L> {
    FromLeftOrder { alphabet, lo }
}

/// The shared coboundary computation, also used by order completion.
pub fn coboundary_value<E, L: LeftOrderOracle<E> + ?Sized>(
    lo: &L,
    g1: &E,
    g2: &E,
    g3: &E,
    describe: impl Fn(&E) -> String,
) -> Result<OrderValue, OrderError> {
    let cpr = |x: &E, y: &E| -> Result<i8, OrderError> { Ok(-lo.cmp(x, y)?) };
    let v = cpr(g2, g3)? - cpr(g1, g3)? + cpr(g1, g2)?;
    if v.abs() > 1 {
        return Err(OrderError::LeftOrderInconsistency(
            describe(g1),
            describe(g2),
            describe(g3),
        ));
    }
    Ok(v)
}

impl<L: LeftOrderOracle<ReducedWord>> CircularOracle for FromLeftOrder<'_, L> {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn eval(
        &self,
        u: &ReducedWord,
        v: &ReducedWord,
        w: &ReducedWord,
    ) -> Result<OrderValue, OrderError> {
        coboundary_value(self.lo, u, v, w, |x| x.to_string())
    }
}

/// Deterministic scan in shortlex triple order; `None` means agreement on
/// the whole ball.
#[allow(clippy::type_complexity)]
pub fn compare_on_ball<O1: CircularOracle, O2: CircularOracle>(
    o1: &O1,
    o2: &O2,
    radius: u32,
) -> Result<Option<(ReducedWord, ReducedWord, ReducedWord, i8, i8)>, OrderError> {
    let words = ball(o1.alphabet(), radius);
    for u in &words {
        for v in &words {
            for w in &words {
                let (x, y) = (o1.eval(u, v, w)?, o2.eval(u, v, w)?);
                if x != y {
                    return Ok(Some((u.clone(), v.clone(), w.clone(), x, y)));
                }
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Orbit orders from exact actions
// ---------------------------------------------------------------------------

/// The orbit order of an exact action read from a basepoint with (lazily
/// checked) trivial stabilizer: `c(g₁,g₂,g₃) = cyclic_ord` of the orbit
/// points.  `point` must map a word to the exact image of the basepoint.
pub struct OrbitOrder<F> {
    alphabet: Alphabet,
    point: F,
}

pub fn order_from_action<F>(alphabet: Alphabet, point: F) -> OrbitOrder<F>
where
    F: Fn(&ReducedWord) -> Result<ProjectivePoint, OrderError> + Sync,
{
    OrbitOrder { alphabet, point }
}

impl<F> CircularOracle for OrbitOrder<F>
where
    F: Fn(&ReducedWord) -> Result<ProjectivePoint, OrderError> + Sync,
{
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn eval(
        &self,
        u: &ReducedWord,
        v: &ReducedWord,
        w: &ReducedWord,
    ) -> Result<OrderValue, OrderError> {
        let pts = [(self.point)(u)?, (self.point)(v)?, (self.point)(w)?];
        let elems = [u, v, w];
        // An orbit collision of distinct group elements means v⁻¹u fixes
        // the basepoint: the trivial-stabilizer hypothesis fails.
        for i in 0..3 {
            for j in (i + 1)..3 {
                if elems[i] != elems[j] && pts[i] == pts[j] {
                    return Err(OrderError::StabilizerViolation {
                        word: elems[j].invert().multiply(elems[i])?.to_string(),
                    });
                }
            }
        }
        if u == v || v == w || u == w {
            return Ok(0);
        }
        Ok(cyclic_ord(&pts[0], &pts[1], &pts[2]))
    }
}

// ---------------------------------------------------------------------------
// Order completion along a stabilizer subgroup
// ---------------------------------------------------------------------------

/// One completed-order evaluation, generic over the group element type so
/// that genuine product groups (e.g. F × ℤ actions with a kernel factor)
/// can be completed with the same logic as free-group actions.
///
/// `point` is the orbit map, `inv_mul(a, b) = a⁻¹b`, `in_k` decides
/// membership in the basepoint stabilizer `K`, and `k_order` is a left
/// order on `K` (−1 = less).  Cases:
/// three distinct orbit points → orientation; all equal → coboundary of the
/// `K`-order on {id, g₁⁻¹g₂, g₁⁻¹g₃}; exactly two equal → rotate the equal
/// pair into the first two positions (cyclic rotations preserve the value)
/// and return +1 iff g₂⁻¹g₁ is positive in `K`.
#[allow(clippy::too_many_arguments)]
pub fn complete_value<E: Clone + PartialEq>(
    g1: &E,
    g2: &E,
    g3: &E,
    identity: &E,
    point: impl Fn(&E) -> Result<ProjectivePoint, OrderError>,
    inv_mul: impl Fn(&E, &E) -> E,
    in_k: impl Fn(&E) -> bool,
    k_order: &impl LeftOrderOracle<E>,
    describe: impl Fn(&E) -> String,
) -> Result<OrderValue, OrderError> {
    if g1 == g2 || g2 == g3 || g1 == g3 {
        return Ok(0);
    }
    let pts = [point(g1)?, point(g2)?, point(g3)?];
    let gs = [g1, g2, g3];
    // Exact membership/fixing consistency on the three difference elements.
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        let d = inv_mul(gs[i], gs[j]);
        let fixes = pts[i] == pts[j];
        let member = in_k(&d);
        if fixes != member {
            return Err(OrderError::MembershipInconsistency {
                word: describe(&d),
                fixes,
                member,
            });
        }
    }
    let eq = [pts[0] == pts[1], pts[1] == pts[2], pts[0] == pts[2]];
    match eq.iter().filter(|&&b| b).count() {
        0 => Ok(cyclic_ord(&pts[0], &pts[1], &pts[2])),
        3 => coboundary_value(
            k_order,
            identity,
            &inv_mul(g1, g2),
            &inv_mul(g1, g3),
            describe,
        ),
        1 => {
            // Rotate so the equal pair sits in positions 1, 2.
            let (h1, h2) = if eq[0] {
                (g1, g2)
            } else if eq[1] {
                (g2, g3)
            } else {
                (g3, g1)
            };
            // +1 iff h₂⁻¹h₁ is negative in K: consistent with the all-equal
            // coboundary case, which reads K as increasing counterclockwise
            // around the blown-up orbit point.
            let d = inv_mul(h2, h1);
            Ok(-k_order.cmp(&d, identity)?)
        }
        _ => unreachable!("two equalities force the third"),
    }
}

// ---------------------------------------------------------------------------
// Midpoint embedding
// ---------------------------------------------------------------------------

/// Embed the table's enumerated ball into [0, 1): the first element at 0,
/// the second at 1/2, each later element at the arc-length midpoint of the
/// unique gap between cyclically consecutive placed points that is
/// compatible with the table.  Re-extracting cyclic orientations from the
/// coordinates reproduces the table exactly (tested property).
pub fn midpoint_embed(t: &OrderTable) -> Result<Vec<BigRational>, OrderError> {
    let n = t.len();
    let mut coords: Vec<BigRational> = Vec::with_capacity(n);
    if n >= 1 {
        coords.push(BigRational::zero());
    }
    if n >= 2 {
        coords.push(BigRational::new(BigInt::one(), BigInt::from(2)));
    }
    for m in 2..n {
        // Placed indices sorted by coordinate; gaps are consecutive pairs
        // including the wrap-around.
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&i, &j| coords[i].cmp(&coords[j]));
        let mut admissible: Vec<(usize, usize)> = Vec::new();
        for s in 0..m {
            let u = order[s];
            let v = order[(s + 1) % m];
            if t.value(u, m, v) == 1 {
                admissible.push((u, v));
            }
        }
        if admissible.len() != 1 {
            return Err(OrderError::BadGapCount {
                index: m,
                found: admissible.len(),
            });
        }
        let (u, v) = admissible[0];
        let (cu, cv) = (&coords[u], &coords[v]);
        let two = BigRational::from(BigInt::from(2));
        let mid = if cu < cv {
            (cu + cv) / &two
        } else {
            // The gap wraps through 1 ≡ 0.
            let m = (cu + cv + BigRational::one()) / &two;
            if m >= BigRational::one() {
                m - BigRational::one()
            } else {
                m
            }
        };
        coords.push(mid);
    }
    Ok(coords)
}

/// Cyclic orientation of three distinct coordinates in [0, 1): +1 iff they
/// read counterclockwise (increasing with wrap-around).
pub fn unit_circle_ord(x: &BigRational, y: &BigRational, z: &BigRational) -> i8 {
    if x == y || y == z || x == z {
        return 0;
    }
    let asc = [(x, y), (y, z), (z, x)]
        .iter()
        .filter(|(a, b)| a < b)
        .count();
    if asc == 2 {
        1
    } else {
        -1
    }
}

/// Helper for the round-trip property: verify that the embedding's
/// coordinates re-extract the table, returning the first mismatching triple.
#[allow(clippy::type_complexity)]
pub fn embed_roundtrip_check(
    t: &OrderTable,
    coords: &[BigRational],
) -> Option<(usize, usize, usize, i8, i8)> {
    let n = t.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let got = unit_circle_ord(&coords[i], &coords[j], &coords[k]);
                let want = t.value(i, j, k);
                if got != want {
                    return Some((i, j, k, want, got));
                }
            }
        }
    }
    None
}

/// Shortlex triple comparison helper used by deterministic scans.
pub fn shortlex_triple_cmp(
    a: &(ReducedWord, ReducedWord, ReducedWord),
    b: &(ReducedWord, ReducedWord, ReducedWord),
) -> std::cmp::Ordering {
    shortlex_cmp(&a.0, &b.0)
        .then_with(|| shortlex_cmp(&a.1, &b.1))
        .then_with(|| shortlex_cmp(&a.2, &b.2))
}
