//! Combinatorial ping-pong configurations on the circle, the recursive
//! order evaluator, preset constructions (Schottky, three-boundary, standard
//! k-lifts), exact Möbius/PL realizations, and the finite-radius gap/orbit
//! heuristic.
//!
//! A configuration records the cyclic arrangement of attracting-domain
//! components and the basepoint marker, together with the containment data
//! `s(C) ⊂ D_j(s)` for every signed letter `s` and every slot `C` that is
//! not a component of `s⁻¹`.  That finite data determines the cyclic order
//! of the whole basepoint orbit.

use crate::circle::{
    arc_interior_point, cut_cmp, cyclic_ord, in_open_arc, CircleError, CircleMap, Cover,
    CoverPoint, CoverSelfMap, LiftedMap, MoebiusMap, PLCircleMap, ProjectivePoint,
};
use crate::freegroup::{
    ball, commutator_product, Alphabet, Letter, ReducedWord, WordError,
};
use crate::orders::{CircularOracle, OrderError, OrderValue};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PingPongError {
    #[error("invalid configuration:\n{}", .0.join("\n"))]
    InvalidConfig(Vec<String>),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Circle(#[from] CircleError),
    #[error("operation requires connected domains (one component per letter)")]
    DisconnectedDomains,
    #[error("certification failed for letter {letter}: {detail}")]
    Certification { letter: char, detail: String },
    #[error("realization retries exhausted: {0}")]
    RetriesExhausted(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}

// ---------------------------------------------------------------------------
// Slots and configurations
// ---------------------------------------------------------------------------

/// A position in the cyclic arrangement: either the basepoint marker (the
/// gap holding x₀) or one connected component of an attracting domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    Basepoint,
    Component { letter: Letter, index: u32 },
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Basepoint => f.write_str("x0"),
            Slot::Component { letter, index } => write!(f, "D({})[{}]", letter.to_char(), index),
        }
    }
}

/// A combinatorial ping-pong configuration.  Construct with
/// [`PingPongConfig::new`] and check with [`PingPongConfig::validate`];
/// evaluation operations require a validated configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PingPongConfig {
    alphabet: Alphabet,
    slots: Vec<Slot>,
    /// `containment[letter.index()][slot_idx]` = target component index of
    /// `letter`, `None` where undefined (components of the inverse letter).
    containment: Vec<Vec<Option<u32>>>,
    // Derived lookup tables (computed leniently; `validate` reports holes).
    marker: usize,
    positions: Vec<usize>,
    comp_slot: Vec<Vec<Option<usize>>>,
    comp_step: Vec<Vec<Option<usize>>>,
    m: Vec<u32>,
}

impl PingPongConfig {
    pub fn new(
        alphabet: Alphabet,
        slots: Vec<Slot>,
        containment: Vec<Vec<Option<u32>>>,
    ) -> Self {
        let n = slots.len();
        let nl = 2 * alphabet.rank() as usize;
        let marker = slots
            .iter()
            .position(|s| matches!(s, Slot::Basepoint))
            .unwrap_or(0);
        let positions = (0..n).map(|i| (i + n - marker) % n).collect();
        let mut m = vec![0u32; nl];
        for s in &slots {
            if let Slot::Component { letter, index } = s {
                m[letter.index()] = m[letter.index()].max(index + 1);
            }
        }
        let mut comp_slot: Vec<Vec<Option<usize>>> =
            m.iter().map(|&k| vec![None; k as usize]).collect();
        for (i, s) in slots.iter().enumerate() {
            if let Slot::Component { letter, index } = s {
                let entry = &mut comp_slot[letter.index()][*index as usize];
                if entry.is_none() {
                    *entry = Some(i);
                }
            }
        }
        let mut comp_step = vec![vec![None; n]; nl];
        for li in 0..nl {
            #[allow(clippy::needless_range_loop)]
            for si in 0..n {
                if let Some(Some(&j)) = containment.get(li).map(|row| {
                    row.get(si)
                        .and_then(|o| o.as_ref())
                        .filter(|&&j| (j as usize) < comp_slot[li].len())
                }) {
                    comp_step[li][si] = comp_slot[li][j as usize];
                }
            }
        }
        PingPongConfig {
            alphabet,
            slots,
            containment,
            marker,
            positions,
            comp_slot,
            comp_step,
            m,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn marker_index(&self) -> usize {
        self.marker
    }

    /// Number of components of the letter's attracting domain.
    pub fn num_components(&self, letter: Letter) -> u32 {
        self.m[letter.index()]
    }

    /// Cyclic position measured from the basepoint marker (marker = 0).
    pub fn position(&self, slot_idx: usize) -> usize {
        self.positions[slot_idx]
    }

    pub fn containment_of(&self, letter: Letter, slot_idx: usize) -> Option<u32> {
        self.containment[letter.index()][slot_idx]
    }

    pub fn slot_of_component(&self, letter: Letter, index: u32) -> Option<usize> {
        self.comp_slot[letter.index()]
            .get(index as usize)
            .copied()
            .flatten()
    }

    /// All domains connected (exactly one component per letter)?
    pub fn connected_domains(&self) -> bool {
        self.m.iter().all(|&k| k == 1)
    }

    /// Schema and order-compatibility check; violations are report content,
    /// never panics.
    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        let n = self.slots.len();
        let nl = 2 * self.alphabet.rank() as usize;
        let markers = self
            .slots
            .iter()
            .filter(|s| matches!(s, Slot::Basepoint))
            .count();
        if markers != 1 {
            v.push(format!("expected exactly 1 basepoint marker, found {markers}"));
        }
        for li in 0..nl {
            let letter = Letter::from_index(li);
            let m = self.m[li];
            if m == 0 {
                v.push(format!("letter {} has no components", letter.to_char()));
            }
            for (idx, slot) in self.comp_slot[li].iter().enumerate() {
                if slot.is_none() {
                    v.push(format!(
                        "letter {} is missing component index {idx}",
                        letter.to_char()
                    ));
                }
            }
        }
        // Each component slot exactly once.
        for (i, s) in self.slots.iter().enumerate() {
            if self.slots[..i].contains(s) {
                v.push(format!("duplicate slot {s} at index {i}"));
            }
            if let Slot::Component { letter, .. } = s {
                if letter.gen >= self.alphabet.rank() {
                    v.push(format!("slot {s} uses a letter beyond rank"));
                }
            }
        }
        if self.containment.len() != nl {
            v.push(format!(
                "containment has {} letter rows, expected {nl}",
                self.containment.len()
            ));
            return ValidationReport { violations: v };
        }
        for li in 0..nl {
            let letter = Letter::from_index(li);
            if self.containment[li].len() != n {
                v.push(format!(
                    "containment row for {} has {} slots, expected {n}",
                    letter.to_char(),
                    self.containment[li].len()
                ));
                continue;
            }
            for (si, entry) in self.containment[li].iter().enumerate() {
                let excluded = matches!(
                    self.slots[si],
                    Slot::Component { letter: l, .. } if l == letter.inverse()
                );
                match (excluded, entry) {
                    (true, Some(_)) => v.push(format!(
                        "containment for {} defined on excluded slot {}",
                        letter.to_char(),
                        self.slots[si]
                    )),
                    (false, None) => v.push(format!(
                        "containment for {} missing on slot {}",
                        letter.to_char(),
                        self.slots[si]
                    )),
                    (false, &Some(j)) if j >= self.m[li] => v.push(format!(
                        "containment for {} on slot {} targets component {j} ≥ m = {}",
                        letter.to_char(),
                        self.slots[si],
                        self.m[li]
                    )),
                    _ => {}
                }
            }
            // Order-compatibility: a homeomorphism maps the complement of
            // D(s⁻¹) into D(s) preserving cyclic order, so reading sources
            // cyclically, the target positions are weakly cyclically
            // monotone (at most one strict descent).
            let mut sources: Vec<usize> = (0..n)
                .filter(|&si| self.containment[li].get(si).map(|e| e.is_some()) == Some(true))
                .collect();
            sources.sort_by_key(|&si| self.positions[si]);
            let targets: Vec<Option<usize>> = sources
                .iter()
                .map(|&si| {
                    self.containment[li][si]
                        .and_then(|j| self.slot_of_component(letter, j))
                        .map(|slot| self.positions[slot])
                })
                .collect();
            if targets.iter().all(|t| t.is_some()) && !targets.is_empty() {
                let q: Vec<usize> = targets.into_iter().flatten().collect();
                let descents = (0..q.len())
                    .filter(|&i| q[i] > q[(i + 1) % q.len()])
                    .count();
                if descents > 1 {
                    v.push(format!(
                        "containment targets for {} are not weakly cyclically monotone \
                         ({descents} descents)",
                        letter.to_char()
                    ));
                }
            }
        }
        ValidationReport { violations: v }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            f.write_str("ok")
        } else {
            for v in &self.violations {
                writeln!(f, "violation: {v}")?;
            }
            Ok(())
        }
    }
}

// --- JSON form -------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum SlotRepr {
    Basepoint,
    Component { letter: String, index: u32 },
}

#[derive(Serialize, Deserialize)]
struct ConfigRepr {
    rank: u32,
    slots: Vec<SlotRepr>,
    containment: BTreeMap<String, BTreeMap<String, u32>>,
}

impl Serialize for PingPongConfig {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let slots = self
            .slots
            .iter()
            .map(|slot| match slot {
                Slot::Basepoint => SlotRepr::Basepoint,
                Slot::Component { letter, index } => SlotRepr::Component {
                    letter: letter.to_char().to_string(),
                    index: *index,
                },
            })
            .collect();
        let mut containment = BTreeMap::new();
        for li in 0..self.containment.len() {
            let letter = Letter::from_index(li);
            let mut row = BTreeMap::new();
            for (si, entry) in self.containment[li].iter().enumerate() {
                if let Some(j) = entry {
                    row.insert(si.to_string(), *j);
                }
            }
            containment.insert(letter.to_char().to_string(), row);
        }
        ConfigRepr {
            rank: self.alphabet.rank(),
            slots,
            containment,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PingPongConfig {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = ConfigRepr::deserialize(d)?;
        let alphabet = Alphabet::new(repr.rank).map_err(D::Error::custom)?;
        let parse_letter = |s: &str| -> Result<Letter, D::Error> {
            let c = s
                .chars()
                .next()
                .filter(|_| s.chars().count() == 1)
                .ok_or_else(|| D::Error::custom(format!("bad letter {s:?}")))?;
            let l = Letter::from_char(c)
                .filter(|l| l.gen < repr.rank)
                .ok_or_else(|| D::Error::custom(format!("letter {s:?} outside rank")))?;
            Ok(l)
        };
        let slots = repr
            .slots
            .iter()
            .map(|s| {
                Ok(match s {
                    SlotRepr::Basepoint => Slot::Basepoint,
                    SlotRepr::Component { letter, index } => Slot::Component {
                        letter: parse_letter(letter)?,
                        index: *index,
                    },
                })
            })
            .collect::<Result<Vec<_>, D::Error>>()?;
        let nl = 2 * repr.rank as usize;
        let mut containment = vec![vec![None; slots.len()]; nl];
        for (ls, row) in &repr.containment {
            let letter = parse_letter(ls)?;
            for (slot_ref, target) in row {
                let si: usize = slot_ref
                    .parse()
                    .map_err(|_| D::Error::custom(format!("bad slot ref {slot_ref:?}")))?;
                if si >= slots.len() {
                    return Err(D::Error::custom(format!("slot ref {si} out of range")));
                }
                containment[letter.index()][si] = Some(*target);
            }
        }
        Ok(PingPongConfig::new(alphabet, slots, containment))
    }
}

// ---------------------------------------------------------------------------
// The order evaluator
// ---------------------------------------------------------------------------

/// The slot containing `w(x₀)`: the marker for the empty word, otherwise
/// the component reached by following the containment data letter by letter
/// (rightmost letter first).  Requires a validated configuration.
pub fn comp(cfg: &PingPongConfig, w: &ReducedWord) -> Slot {
    cfg.slots[comp_slice(cfg, w.letters())]
}

fn comp_slice(cfg: &PingPongConfig, letters: &[Letter]) -> usize {
    let mut slot = cfg.marker;
    for l in letters.iter().rev() {
        slot = cfg.comp_step[l.index()][slot]
            .expect("containment must be total on a validated configuration");
    }
    slot
}

/// Cyclic orientation of three distinct positions on a cycle of any length.
fn pos_ord(p0: usize, p1: usize, p2: usize) -> i8 {
    let asc = [(p0, p1), (p1, p2), (p2, p0)]
        .iter()
        .filter(|(a, b)| a < b)
        .count();
    if asc == 2 {
        1
    } else {
        -1
    }
}

/// The circular-order value of a word triple, computed purely from the
/// configuration's combinatorics.
///
/// Recursion: a repeated word gives 0; three pairwise-distinct containment
/// slots give the cyclic order of the slot positions; a common leading
/// letter `s` on all three words strips to `(s⁻¹w₁, s⁻¹w₂, s⁻¹w₃)` by left
/// invariance; when exactly two words share a containment slot (hence a
/// leading letter `s`), the third word and the basepoint both lie outside
/// that component, so the value equals that of the pair against the
/// identity — after a left shift, the triple `(s⁻¹w_i, s⁻¹w_j, s⁻¹)` —
/// adjusted by the sign of the permutation restoring the original
/// positions.  Total length strictly decreases at every step.
pub fn eval_triple(
    cfg: &PingPongConfig,
    w1: &ReducedWord,
    w2: &ReducedWord,
    w3: &ReducedWord,
) -> OrderValue {
    let budget = w1.len() + w2.len() + w3.len();
    let mut steps = 0usize;
    eval_rec(
        cfg,
        [w1.letters(), w2.letters(), w3.letters()],
        &mut steps,
        budget,
    )
}

fn eval_rec(cfg: &PingPongConfig, ws: [&[Letter]; 3], steps: &mut usize, budget: usize) -> i8 {
    assert!(*steps <= budget, "termination measure violated");
    if ws[0] == ws[1] || ws[1] == ws[2] || ws[0] == ws[2] {
        return 0;
    }
    let slots = [
        comp_slice(cfg, ws[0]),
        comp_slice(cfg, ws[1]),
        comp_slice(cfg, ws[2]),
    ];
    if slots[0] != slots[1] && slots[1] != slots[2] && slots[0] != slots[2] {
        return pos_ord(
            cfg.positions[slots[0]],
            cfg.positions[slots[1]],
            cfg.positions[slots[2]],
        );
    }
    let heads = [ws[0].first(), ws[1].first(), ws[2].first()];
    if heads[0].is_some() && heads[0] == heads[1] && heads[1] == heads[2] {
        *steps += 1;
        return eval_rec(cfg, [&ws[0][1..], &ws[1][1..], &ws[2][1..]], steps, budget);
    }
    // Exactly one pair shares a slot (two equal pairs would force all three
    // equal, handled above).
    let (i, j, l) = if slots[0] == slots[1] {
        (0, 1, 2)
    } else if slots[1] == slots[2] {
        (1, 2, 0)
    } else {
        (0, 2, 1)
    };
    let s = ws[i][0];
    debug_assert_eq!(ws[j][0], s);
    let third = [s.inverse()];
    *steps += 1;
    let v = eval_rec(cfg, [&ws[i][1..], &ws[j][1..], &third], steps, budget);
    // (i, j, l) = (0,1,2) and (1,2,0) are even permutations; (0,2,1) is odd.
    if l == 1 {
        -v
    } else {
        v
    }
}

impl CircularOracle for PingPongConfig {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn eval(
        &self,
        u: &ReducedWord,
        v: &ReducedWord,
        w: &ReducedWord,
    ) -> Result<OrderValue, OrderError> {
        Ok(eval_triple(self, u, v, w))
    }
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

fn full_containment(
    alphabet: Alphabet,
    slots: &[Slot],
    target: impl Fn(Letter, usize) -> Option<u32>,
) -> Vec<Vec<Option<u32>>> {
    let nl = 2 * alphabet.rank() as usize;
    (0..nl)
        .map(|li| {
            let letter = Letter::from_index(li);
            (0..slots.len())
                .map(|si| {
                    let excluded = matches!(
                        slots[si],
                        Slot::Component { letter: l, .. } if l == letter.inverse()
                    );
                    if excluded {
                        None
                    } else {
                        target(letter, si)
                    }
                })
                .collect()
        })
        .collect()
}

/// The rank-2n Schottky configuration: connected domains in the cyclic
/// order x₀, D(a₁), D(b₁), D(a₁⁻¹), D(b₁⁻¹), D(a₂), …, D(b_n⁻¹); all
/// containment targets are forced (each letter has a single component).
pub fn preset_schottky(n: u32) -> PingPongConfig {
    assert!(n >= 1);
    let alphabet = Alphabet::new(2 * n).expect("positive rank");
    let mut slots = vec![Slot::Basepoint];
    for pair in 0..n {
        let a = Letter::new(2 * pair, false);
        let b = Letter::new(2 * pair + 1, false);
        for letter in [a, b, a.inverse(), b.inverse()] {
            slots.push(Slot::Component { letter, index: 0 });
        }
    }
    let containment = full_containment(alphabet, &slots, |_, _| Some(0));
    PingPongConfig::new(alphabet, slots, containment)
}

/// The rank-2 three-boundary configuration: connected domains in the cyclic
/// order D(a), D(a⁻¹), D(b), D(b⁻¹), with the basepoint marker placed in the
/// gap between D(b⁻¹) and D(a).  Its orbit order is the standard
/// non-isolation example: the complement of the minimal set has a gap the
/// orbit never enters (see [`gap_orbit_check`]).
pub fn preset_three_boundary() -> PingPongConfig {
    let alphabet = Alphabet::new(2).expect("rank 2");
    let a = Letter::new(0, false);
    let b = Letter::new(1, false);
    let slots = vec![
        Slot::Basepoint,
        Slot::Component { letter: a, index: 0 },
        Slot::Component { letter: a.inverse(), index: 0 },
        Slot::Component { letter: b, index: 0 },
        Slot::Component { letter: b.inverse(), index: 0 },
    ];
    let containment = full_containment(alphabet, &slots, |_, _| Some(0));
    PingPongConfig::new(alphabet, slots, containment)
}

/// Resolve a preset specifier: `schottky<N>`, `three_boundary` (or
/// `three-boundary`), `klift_schottky<N>_<K>`.
pub fn preset_by_name(name: &str) -> Option<PingPongConfig> {
    if name == "three_boundary" || name == "three-boundary" {
        return Some(preset_three_boundary());
    }
    if let Some(n) = name.strip_prefix("schottky") {
        let n: u32 = n.parse().ok().filter(|&n| n >= 1)?;
        return Some(preset_schottky(n));
    }
    if let Some(rest) = name.strip_prefix("klift_schottky") {
        let (n, k) = rest.split_once('_')?;
        let n: u32 = n.parse().ok().filter(|&n| n >= 1)?;
        let k: u32 = k.parse().ok().filter(|&k| k >= 1)?;
        return klift(&preset_schottky(n), k).ok();
    }
    None
}

// ---------------------------------------------------------------------------
// Standard k-lifts
// ---------------------------------------------------------------------------

/// The combinatorial standard k-lift of a connected-domain configuration:
/// each letter acquires k components (one per sheet of the cyclic cover cut
/// at the basepoint marker), slots repeat the base cyclic order sheet by
/// sheet, and the containment sheet shift counts crossings of the cut.
/// `k = 1` returns the input unchanged.  The sheet-shift rule's sole
/// correctness authority is agreement with the exact fixed-point-lift orbit
/// order (tested exhaustively); on any disagreement the exact lift wins.
pub fn klift(cfg: &PingPongConfig, k: u32) -> Result<PingPongConfig, PingPongError> {
    assert!(k >= 1);
    if !cfg.connected_domains() {
        return Err(PingPongError::DisconnectedDomains);
    }
    if k == 1 {
        return Ok(cfg.clone());
    }
    let alphabet = cfg.alphabet();
    // Base component slots in cyclic order starting just after the marker.
    let mut base_comps: Vec<(Letter, usize)> = cfg
        .slots()
        .iter()
        .enumerate()
        .filter_map(|(i, s)| match s {
            Slot::Component { letter, .. } => Some((*letter, cfg.position(i))),
            Slot::Basepoint => None,
        })
        .collect();
    base_comps.sort_by_key(|&(_, p)| p);
    let base_pos = |l: Letter| -> usize {
        base_comps
            .iter()
            .find(|&&(c, _)| c == l)
            .map(|&(_, p)| p)
            .expect("connected domains")
    };
    let mut slots = vec![Slot::Basepoint];
    for r in 0..k {
        for &(letter, _) in &base_comps {
            slots.push(Slot::Component { letter, index: r });
        }
    }
    let containment = full_containment(alphabet, &slots, |s, si| {
        let d_s = u32::from(base_pos(s) > base_pos(s.inverse()));
        let (src_pos, r) = match slots[si] {
            Slot::Basepoint => (0usize, 0u32),
            Slot::Component { letter, index } => (base_pos(letter), index),
        };
        let shift = u32::from(src_pos > base_pos(s.inverse()));
        Some((r + shift + k - d_s) % k)
    });
    Ok(PingPongConfig::new(alphabet, slots, containment))
}

/// The sufficient realization criterion for the standard k-lift of the
/// rank-2n Schottky order: the lift is the dynamical realization of its
/// orbit order whenever gcd(k, 2n−1) = 1.  Only sufficiency is asserted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KliftVerdict {
    /// gcd(k, 2n−1) = 1: the sufficient condition holds.
    Realization,
    /// The sufficient condition fails; no claim either way.
    CriterionFails { gcd: u64 },
}

impl fmt::Display for KliftVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KliftVerdict::Realization => f.write_str("realization (sufficient condition holds)"),
            KliftVerdict::CriterionFails { gcd } => {
                write!(f, "criterion fails (gcd = {gcd}; sufficient condition not met)")
            }
        }
    }
}

pub fn klift_is_realization(n: u32, k: u32) -> KliftVerdict {
    assert!(n >= 1 && k >= 1);
    let g = num_integer::gcd(u64::from(k), u64::from(2 * n - 1));
    if g == 1 {
        KliftVerdict::Realization
    } else {
        KliftVerdict::CriterionFails { gcd: g }
    }
}

/// The word generating the linear part of the k-lifted Schottky order's
/// gap stabilizer: the commutator product `[a₁,b₁]⋯[a_n,b_n]` raised to
/// the k-th power.
pub fn linear_part_generator(alphabet: Alphabet, k: u32) -> Result<ReducedWord, WordError> {
    let c = commutator_product(alphabet)?;
    let mut out = ReducedWord::identity(alphabet);
    for _ in 0..k {
        out = out.multiply(&c)?;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Exact realizations
// ---------------------------------------------------------------------------

/// An exact circle action of the free group: one homeomorphism per positive
/// generator, a basepoint, and (when built from a configuration) one arc
/// per component slot, aligned with the configuration's slot indices.
#[derive(Debug, Clone)]
pub struct RealizedAction {
    alphabet: Alphabet,
    gens: Vec<CircleMap>,
    invs: Vec<CircleMap>,
    basepoint: ProjectivePoint,
    /// Indexed like the configuration's slots; `None` at the marker.
    arcs: Vec<Option<(ProjectivePoint, ProjectivePoint)>>,
}

impl RealizedAction {
    pub fn new(
        alphabet: Alphabet,
        gens: Vec<CircleMap>,
        basepoint: ProjectivePoint,
        arcs: Vec<Option<(ProjectivePoint, ProjectivePoint)>>,
    ) -> Self {
        assert_eq!(gens.len(), alphabet.rank() as usize);
        let invs = gens.iter().map(|g| g.inverse()).collect();
        RealizedAction {
            alphabet,
            gens,
            invs,
            basepoint,
            arcs,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn basepoint(&self) -> &ProjectivePoint {
        &self.basepoint
    }

    pub fn arcs(&self) -> &[Option<(ProjectivePoint, ProjectivePoint)>] {
        &self.arcs
    }

    pub fn map_for(&self, letter: Letter) -> &CircleMap {
        if letter.inverse {
            &self.invs[letter.gen as usize]
        } else {
            &self.gens[letter.gen as usize]
        }
    }

    pub fn generator(&self, gen: u32) -> &CircleMap {
        &self.gens[gen as usize]
    }

    /// Apply a word to an arbitrary point (rightmost letter first).
    pub fn apply_point(&self, w: &ReducedWord, x: &ProjectivePoint) -> ProjectivePoint {
        let mut cur = x.clone();
        for l in w.letters().iter().rev() {
            cur = self.map_for(*l).apply(&cur);
        }
        cur
    }

    /// The orbit point `w(x₀)`.
    pub fn orbit_point(&self, w: &ReducedWord) -> ProjectivePoint {
        self.apply_point(w, &self.basepoint)
    }
}

/// The deterministic arc layout shared by every realization: the basepoint
/// at 0, the i-th component slot (in cyclic slot order after the marker)
/// on the arc [2i−1, 2i], and the covering cut at −1 (inside the
/// basepoint's gap).
pub fn default_arcs(cfg: &PingPongConfig) -> Vec<Option<(ProjectivePoint, ProjectivePoint)>> {
    let n = cfg.slots().len();
    let mut arcs = vec![None; n];
    let mut order: Vec<usize> = (0..n).filter(|&i| i != cfg.marker_index()).collect();
    order.sort_by_key(|&i| cfg.position(i));
    for (rank, &slot) in order.iter().enumerate() {
        let i = rank as i64 + 1;
        arcs[slot] = Some((
            ProjectivePoint::from_int(2 * i - 1),
            ProjectivePoint::from_int(2 * i),
        ));
    }
    arcs
}

/// The basepoint used by every realization.
pub fn standard_basepoint() -> ProjectivePoint {
    ProjectivePoint::from_int(0)
}

/// The covering cut used by every realization (inside the basepoint gap).
pub fn standard_cut() -> ProjectivePoint {
    ProjectivePoint::from_int(-1)
}

/// Exact certification that an action with arcs realizes the configuration:
/// arcs present and cyclically ordered with the basepoint in the marker
/// gap, and every containment relation verified by endpoint-image
/// comparisons (a monotone image arc lies in an open target arc iff the
/// four points cut_lo, image_lo, image_hi, cut_hi read counterclockwise).
pub fn certify_action(cfg: &PingPongConfig, action: &RealizedAction) -> Result<(), PingPongError> {
    let n = cfg.slots().len();
    // Boundary sequence in cyclic slot order: x₀ at the marker, lo/hi at
    // each component.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| cfg.position(i));
    let mut boundary: Vec<ProjectivePoint> = Vec::new();
    for &i in &order {
        match &cfg.slots()[i] {
            Slot::Basepoint => boundary.push(action.basepoint().clone()),
            Slot::Component { letter, .. } => {
                let (lo, hi) = action.arcs().get(i).and_then(|a| a.clone()).ok_or_else(|| {
                    PingPongError::Certification {
                        letter: letter.to_char(),
                        detail: format!("missing arc for slot {}", cfg.slots()[i]),
                    }
                })?;
                boundary.push(lo);
                boundary.push(hi);
            }
        }
    }
    let b = boundary.len();
    for i in 0..b {
        if cyclic_ord(&boundary[i], &boundary[(i + 1) % b], &boundary[(i + 2) % b]) != 1 {
            return Err(PingPongError::Certification {
                letter: '?',
                detail: format!(
                    "arc boundaries out of cyclic order near {}",
                    boundary[(i + 1) % b]
                ),
            });
        }
    }
    // Containments.
    for li in 0..2 * cfg.alphabet().rank() as usize {
        let letter = Letter::from_index(li);
        let map = action.map_for(letter);
        for si in 0..n {
            let Some(j) = cfg.containment_of(letter, si) else {
                continue;
            };
            let tslot = cfg
                .slot_of_component(letter, j)
                .ok_or_else(|| PingPongError::Certification {
                    letter: letter.to_char(),
                    detail: format!("target component {j} has no slot"),
                })?;
            let (t_lo, t_hi) =
                action.arcs()[tslot]
                    .clone()
                    .ok_or_else(|| PingPongError::Certification {
                        letter: letter.to_char(),
                        detail: "target slot has no arc".into(),
                    })?;
            let ok = match &cfg.slots()[si] {
                Slot::Basepoint => {
                    let p = map.apply(action.basepoint());
                    in_open_arc(&t_lo, &p, &t_hi)
                }
                Slot::Component { .. } => {
                    let (lo, hi) = action.arcs()[si].clone().unwrap();
                    let (u, v) = (map.apply(&lo), map.apply(&hi));
                    cyclic_ord(&t_lo, &u, &v) == 1 && cyclic_ord(&u, &v, &t_hi) == 1
                }
            };
            if !ok {
                return Err(PingPongError::Certification {
                    letter: letter.to_char(),
                    detail: format!(
                        "image of {} is not inside target {}",
                        cfg.slots()[si],
                        cfg.slots()[tslot]
                    ),
                });
            }
        }
    }
    Ok(())
}

/// Hyperbolic Möbius realization of a connected-domain configuration: each
/// positive generator fixes the midpoints of its two domain arcs
/// (attracting in D(s), repelling in D(s⁻¹)) with stretch factor λ,
/// starting at λ = 1000 and increasing until the exact certification
/// passes.
pub fn realize_moebius(cfg: &PingPongConfig) -> Result<RealizedAction, PingPongError> {
    let report = cfg.validate();
    if !report.ok() {
        return Err(PingPongError::InvalidConfig(report.violations));
    }
    if !cfg.connected_domains() {
        return Err(PingPongError::DisconnectedDomains);
    }
    let arcs = default_arcs(cfg);
    let mid = |letter: Letter| -> ProjectivePoint {
        let slot = cfg.slot_of_component(letter, 0).expect("connected");
        let (lo, hi) = arcs[slot].clone().expect("component arc");
        let (flo, fhi) = (lo.affine().unwrap(), hi.affine().unwrap());
        ProjectivePoint::from_rational(&((flo + fhi) / BigInt::from(2)))
    };
    let mut lambda = BigInt::from(1000);
    let mut last_err = None;
    for _ in 0..6 {
        let gens: Result<Vec<CircleMap>, CircleError> = (0..cfg.alphabet().rank())
            .map(|g| {
                let s = Letter::new(g, false);
                Ok(CircleMap::Moebius(MoebiusMap::hyperbolic(
                    &mid(s),
                    &mid(s.inverse()),
                    lambda.clone(),
                )?))
            })
            .collect();
        let action = RealizedAction::new(cfg.alphabet(), gens?, standard_basepoint(), arcs.clone());
        match certify_action(cfg, &action) {
            Ok(()) => return Ok(action),
            Err(e) => last_err = Some(e),
        }
        lambda *= 1000;
    }
    Err(PingPongError::RetriesExhausted(format!(
        "Möbius certification failed up to λ = {lambda}: {}",
        last_err.map(|e| e.to_string()).unwrap_or_default()
    )))
}

/// Piecewise-projective realization of an arbitrary valid configuration:
/// arcs from [`default_arcs`], each positive generator pinned so that every
/// source slot lands in its prescribed sub-arc of the target component and
/// every excluded component's endpoints map to the gaps bracketing the
/// sources its inverse must capture.  Exact certification runs before
/// returning.
pub fn realize_pl(cfg: &PingPongConfig) -> Result<RealizedAction, PingPongError> {
    let report = cfg.validate();
    if !report.ok() {
        return Err(PingPongError::InvalidConfig(report.violations));
    }
    let arcs = default_arcs(cfg);
    let basepoint = standard_basepoint();
    let n = cfg.slots().len();
    let arc_of = |slot: usize| arcs[slot].clone().expect("component arc");
    let rat = |p: &ProjectivePoint| p.affine().expect("finite layout");

    let mut gens = Vec::new();
    for g in 0..cfg.alphabet().rank() {
        let s = Letter::new(g, false);
        let s_inv = s.inverse();
        let excluded: Vec<usize> = (0..n)
            .filter(|&i| {
                matches!(cfg.slots()[i], Slot::Component { letter, .. } if letter == s_inv)
            })
            .collect();
        let cut_pos = excluded
            .iter()
            .map(|&i| cfg.position(i))
            .max()
            .ok_or_else(|| PingPongError::Unsupported("letter without inverse components".into()))?;
        let mut sources: Vec<usize> = (0..n)
            .filter(|&i| cfg.containment_of(s, i).is_some())
            .collect();
        sources.sort_by_key(|&i| (cfg.position(i) + n - cut_pos) % n);
        // Maximal runs of equal targets; a run wrapping past the cut is
        // rejoined by rotating the source list to a run boundary.
        let target_of = |src: usize| cfg.containment_of(s, src).unwrap();
        if sources.len() > 1 && target_of(sources[0]) == target_of(*sources.last().unwrap()) {
            let first_target = target_of(sources[0]);
            if sources.iter().any(|&x| target_of(x) != first_target) {
                let split = sources
                    .iter()
                    .position(|&x| target_of(x) != first_target)
                    .unwrap();
                sources.rotate_left(split);
            }
        }
        let mut runs: Vec<(u32, Vec<usize>)> = Vec::new();
        for &src in &sources {
            let t = target_of(src);
            match runs.last_mut() {
                Some((rt, v)) if *rt == t => v.push(src),
                _ => runs.push((t, vec![src])),
            }
        }
        // Pins for the sources: occupant t of a target arc [U, V] shared by
        // m sources gets the sub-arc [U+(3t+1)δ, U+(3t+2)δ], δ = (V−U)/(3m+1).
        let mut pins: Vec<(ProjectivePoint, ProjectivePoint)> = Vec::new();
        // Sub-arc bounds per source, kept for the excluded-component pins.
        let mut source_span: Vec<Option<(BigRational, BigRational)>> = vec![None; n];
        for (tcomp, members) in &runs {
            let tslot = cfg.slot_of_component(s, *tcomp).expect("validated");
            let (t_lo, t_hi) = arc_of(tslot);
            let (u, v) = (rat(&t_lo), rat(&t_hi));
            let m = members.len() as i64;
            let delta = (&v - &u) / BigRational::from(BigInt::from(3 * m + 1));
            for (t, &src) in members.iter().enumerate() {
                let t = t as i64;
                let sub_lo = &u + &delta * BigRational::from(BigInt::from(3 * t + 1));
                let sub_hi = &u + &delta * BigRational::from(BigInt::from(3 * t + 2));
                match cfg.slots()[src] {
                    Slot::Basepoint => {
                        let mid = (&sub_lo + &sub_hi) / BigRational::from(BigInt::from(2));
                        pins.push((basepoint.clone(), ProjectivePoint::from_rational(&mid)));
                        source_span[src] = Some((mid.clone(), mid));
                    }
                    Slot::Component { .. } => {
                        let (lo, hi) = arc_of(src);
                        pins.push((lo, ProjectivePoint::from_rational(&sub_lo)));
                        pins.push((hi, ProjectivePoint::from_rational(&sub_hi)));
                        source_span[src] = Some((sub_lo, sub_hi));
                    }
                }
            }
        }
        // Pins for the excluded components: s must carry D(s⁻¹)_j onto an
        // arc bracketing exactly the sources that s⁻¹ sends into
        // component j.
        for &ex in &excluded {
            let j = match cfg.slots()[ex] {
                Slot::Component { index, .. } => index,
                Slot::Basepoint => unreachable!(),
            };
            let (ex_lo, ex_hi) = arc_of(ex);
            // Cyclic neighbours of the excluded slot among the sources.
            let prev = sources
                .iter()
                .copied()
                .min_by_key(|&src| (cfg.position(ex) + n - cfg.position(src)) % n)
                .expect("sources nonempty");
            let next = sources
                .iter()
                .copied()
                .min_by_key(|&src| (cfg.position(src) + n - cfg.position(ex)) % n)
                .expect("sources nonempty");
            let t_prev = cfg
                .slot_of_component(s, target_of(prev))
                .expect("validated");
            let t_next = cfg
                .slot_of_component(s, target_of(next))
                .expect("validated");
            let t_prev_hi = arc_of(t_prev).1;
            let t_next_lo = arc_of(t_next).0;
            // Sources of s⁻¹ captured by component j, in cyclic order
            // starting from the previous source's target.
            let mut captured: Vec<usize> = (0..n)
                .filter(|&i| cfg.containment_of(s_inv, i) == Some(j))
                .collect();
            if captured.is_empty() {
                return Err(PingPongError::Unsupported(format!(
                    "component {} of {} captures no sources",
                    j,
                    s_inv.to_char()
                )));
            }
            captured.sort_by_key(|&i| (cfg.position(i) + n - cfg.position(t_prev)) % n);
            let first_lo = match cfg.slots()[captured[0]] {
                Slot::Basepoint => basepoint.clone(),
                Slot::Component { .. } => arc_of(captured[0]).0,
            };
            let last_hi = match cfg.slots()[*captured.last().unwrap()] {
                Slot::Basepoint => basepoint.clone(),
                Slot::Component { .. } => arc_of(*captured.last().unwrap()).1,
            };
            pins.push((ex_lo, arc_interior_point(&t_prev_hi, &first_lo)));
            pins.push((ex_hi, arc_interior_point(&last_hi, &t_next_lo)));
        }
        // Sort breakpoints along the circle (all finite, none at the cut).
        pins.sort_by(|(a, _), (b, _)| cut_cmp(&standard_cut(), a, b));
        let map = PLCircleMap::new(pins)?;
        gens.push(CircleMap::PL(map));
    }
    let action = RealizedAction::new(cfg.alphabet(), gens, basepoint, arcs);
    certify_action(cfg, &action)?;
    Ok(action)
}

// ---------------------------------------------------------------------------
// Fixed-point lifts of realizations
// ---------------------------------------------------------------------------

/// A realization lifted to the k-fold cyclic cover by fixed-point lifts of
/// each generator; the basepoint lift sits on sheet 0.
#[derive(Debug, Clone)]
pub struct LiftedRealization {
    base: RealizedAction,
    cover: Cover,
    /// Indexed by `Letter::index()`.
    lifts: Vec<LiftedMap>,
}

impl LiftedRealization {
    pub fn base(&self) -> &RealizedAction {
        &self.base
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn k(&self) -> u32 {
        self.cover.sheets
    }

    pub fn lift_for(&self, letter: Letter) -> &LiftedMap {
        &self.lifts[letter.index()]
    }

    /// The lifted orbit point `ŵ(x̃₀)` on the k-cover.
    pub fn lifted_point(&self, w: &ReducedWord) -> Result<CoverPoint, CircleError> {
        let mut cur = CoverPoint::new(self.base.basepoint().clone(), 0);
        for l in w.letters().iter().rev() {
            cur = self.lift_for(*l).apply(&cur)?;
        }
        Ok(cur)
    }

    /// The same composite read on the line model (integer sheets).
    pub fn line_point(&self, w: &ReducedWord, start: &CoverPoint) -> Result<CoverPoint, CircleError> {
        let mut cur = start.clone();
        for l in w.letters().iter().rev() {
            cur = self.lift_for(*l).on_line().apply(&cur)?;
        }
        Ok(cur)
    }

    /// The composite self-map of the cover given by a word (for rotation
    /// numbers).
    pub fn word_self_map(&self, w: &ReducedWord) -> CoverSelfMap {
        let lifts = w
            .letters()
            .iter()
            .map(|l| self.lift_for(*l).clone())
            .collect();
        CoverSelfMap::new(lifts, self.cover.clone())
    }

    /// Structural sample points for rotation-number certification: the
    /// basepoint and all arc endpoints of the base realization.
    pub fn sample_points(&self) -> Vec<ProjectivePoint> {
        let mut pts = vec![self.base.basepoint().clone()];
        for (lo, hi) in self.base.arcs().iter().flatten() {
            pts.push(lo.clone());
            pts.push(hi.clone());
        }
        pts
    }
}

impl CircularOracle for LiftedRealization {
    fn alphabet(&self) -> Alphabet {
        self.base.alphabet()
    }

    fn eval(
        &self,
        u: &ReducedWord,
        v: &ReducedWord,
        w: &ReducedWord,
    ) -> Result<OrderValue, OrderError> {
        let elems = [u, v, w];
        let pts = [
            self.lifted_point(u).map_err(OrderError::Circle)?,
            self.lifted_point(v).map_err(OrderError::Circle)?,
            self.lifted_point(w).map_err(OrderError::Circle)?,
        ];
        for i in 0..3 {
            for j in (i + 1)..3 {
                if elems[i] != elems[j]
                    && pts[i].base == pts[j].base
                    && self.cover.sheets >= 1
                    && pts[i].sheet.rem_euclid(i64::from(self.cover.sheets))
                        == pts[j].sheet.rem_euclid(i64::from(self.cover.sheets))
                {
                    return Err(OrderError::StabilizerViolation {
                        word: elems[j]
                            .invert()
                            .multiply(elems[i])
                            .map_err(OrderError::Word)?
                            .to_string(),
                    });
                }
            }
        }
        if u == v || v == w || u == w {
            return Ok(0);
        }
        crate::circle::cover_cyclic_ord(&self.cover, &pts[0], &pts[1], &pts[2])
            .map_err(OrderError::Circle)
    }
}

/// Lift each letter of a connected-domain realization to the k-fold cover
/// cut at −1, choosing for every signed letter the lift with fixed points:
/// reference at the counterclockwise entry endpoint of its attracting arc,
/// displacement 0 (the reference, its image, and the attracting fixed point
/// all lie in the attracting arc, which the cut avoids).
pub fn lift_fixed_points(
    cfg: &PingPongConfig,
    action: &RealizedAction,
    k: u32,
) -> Result<LiftedRealization, PingPongError> {
    assert!(k >= 1);
    if !cfg.connected_domains() {
        return Err(PingPongError::DisconnectedDomains);
    }
    let cover = Cover::cyclic(standard_cut(), k);
    let mut lifts = Vec::new();
    for li in 0..2 * cfg.alphabet().rank() as usize {
        let letter = Letter::from_index(li);
        let slot = cfg
            .slot_of_component(letter, 0)
            .ok_or(PingPongError::DisconnectedDomains)?;
        let (lo, _) = action.arcs()[slot]
            .clone()
            .ok_or_else(|| PingPongError::Unsupported("realization carries no arcs".into()))?;
        lifts.push(LiftedMap::new(
            action.map_for(letter).clone(),
            cover.clone(),
            lo,
            0,
        )?);
    }
    Ok(LiftedRealization {
        base: action.clone(),
        cover,
        lifts,
    })
}

// ---------------------------------------------------------------------------
// Gap/orbit heuristic
// ---------------------------------------------------------------------------

/// Status of one gap between consecutive component arcs.
#[derive(Debug, Clone)]
pub struct GapStatus {
    /// Slot indices of the arcs bounding the gap (counterclockwise:
    /// after `from_slot`, before `to_slot`).
    pub from_slot: usize,
    pub to_slot: usize,
    /// Whether the gap's complement component at the tested depth contains
    /// an orbit point of the ball.
    pub visited: bool,
    /// A word whose orbit point witnesses the visit.
    pub witness: Option<String>,
}

/// Finite-radius evidence report: for each gap between consecutive domain
/// arcs, whether the ball-`radius` orbit reaches the complement component
/// containing that gap once all depth-`radius` image arcs are removed.
#[derive(Debug, Clone)]
pub struct GapReport {
    pub radius: u32,
    pub gaps: Vec<GapStatus>,
}

impl GapReport {
    pub fn all_visited(&self) -> bool {
        self.gaps.iter().all(|g| g.visited)
    }

    pub fn unvisited(&self) -> Vec<usize> {
        (0..self.gaps.len())
            .filter(|&i| !self.gaps[i].visited)
            .collect()
    }
}

impl fmt::Display for GapReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "gap/orbit scan at radius {} (finite-radius heuristic: an unvisited gap \
             is evidence against realization, not a certificate)",
            self.radius
        )?;
        for (i, g) in self.gaps.iter().enumerate() {
            match (&g.visited, &g.witness) {
                (true, Some(w)) => {
                    writeln!(f, "  gap {i}: visited (orbit point of {w})")?;
                }
                _ => writeln!(f, "  gap {i}: NOT visited at this radius")?,
            }
        }
        Ok(())
    }
}

/// For each gap between cyclically consecutive component arcs, decide
/// whether an orbit point `w(x₀)` with |w| ≤ radius lies in the same
/// complement component as the gap, after removing every depth-`radius`
/// image arc `w(C)` (|w| = radius, `C` not a component of the inverse of
/// w's rightmost letter — those are exactly the arcs on which the image is
/// defined by the ping-pong data).
pub fn gap_orbit_check(
    cfg: &PingPongConfig,
    action: &RealizedAction,
    radius: u32,
) -> Result<GapReport, PingPongError> {
    let n = cfg.slots().len();
    if action.arcs().len() != n {
        return Err(PingPongError::Unsupported(
            "realization carries no arcs".into(),
        ));
    }
    let words = ball(cfg.alphabet(), radius);
    // Depth-exactly-`radius` image arcs.
    let mut endpoints: Vec<ProjectivePoint> = Vec::new();
    for w in &words {
        if w.len() != radius as usize {
            continue;
        }
        let rightmost = w.letters().last().copied();
        for (si, slot) in cfg.slots().iter().enumerate() {
            let Slot::Component { letter, .. } = slot else {
                continue;
            };
            if rightmost.map(|r| *letter == r.inverse()) == Some(true) {
                continue;
            }
            let (lo, hi) = action.arcs()[si].clone().unwrap();
            endpoints.push(action.apply_point(w, &lo));
            endpoints.push(action.apply_point(w, &hi));
        }
    }
    let orbit: Vec<(&ReducedWord, ProjectivePoint)> =
        words.iter().map(|w| (w, action.orbit_point(w))).collect();
    let cut = standard_cut();

    // Component slots in cyclic order; gap i runs from arc i's hi to arc
    // (i+1)'s lo.
    let mut comps: Vec<usize> = (0..n).filter(|&i| i != cfg.marker_index()).collect();
    comps.sort_by_key(|&i| cfg.position(i));
    let m = comps.len();
    let mut gaps = Vec::new();
    for gi in 0..m {
        let from = comps[gi];
        let to = comps[(gi + 1) % m];
        // The gap between the last and first arcs (through the cut)
        // contains the basepoint: trivially visited by the empty word.
        if gi == m - 1 {
            gaps.push(GapStatus {
                from_slot: from,
                to_slot: to,
                visited: true,
                witness: Some("e".into()),
            });
            continue;
        }
        let sample = arc_interior_point(
            &action.arcs()[from].clone().unwrap().1,
            &action.arcs()[to].clone().unwrap().0,
        );
        // Nearest depth-`radius` endpoints around the sample in the cut
        // order bound the complement component containing the gap.
        let mut pred: Option<&ProjectivePoint> = None;
        let mut succ: Option<&ProjectivePoint> = None;
        let (mut lowest, mut highest): (Option<&ProjectivePoint>, Option<&ProjectivePoint>) =
            (None, None);
        for e in &endpoints {
            match cut_cmp(&cut, e, &sample) {
                Ordering::Less => {
                    if pred.map(|p| cut_cmp(&cut, p, e) == Ordering::Less) != Some(false) {
                        pred = Some(e);
                    }
                }
                Ordering::Greater => {
                    if succ.map(|p| cut_cmp(&cut, e, p) == Ordering::Less) != Some(false) {
                        succ = Some(e);
                    }
                }
                Ordering::Equal => {}
            }
            if lowest.map(|p| cut_cmp(&cut, e, p) == Ordering::Less) != Some(false) {
                lowest = Some(e);
            }
            if highest.map(|p| cut_cmp(&cut, p, e) == Ordering::Less) != Some(false) {
                highest = Some(e);
            }
        }
        let lo_bound = pred.or(highest);
        let hi_bound = succ.or(lowest);
        let (visited, witness) = match (lo_bound, hi_bound) {
            (Some(lo), Some(hi)) if lo != hi => {
                let hit = orbit
                    .iter()
                    .find(|(_, p)| in_open_arc(lo, p, hi));
                (hit.is_some(), hit.map(|(w, _)| w.to_string()))
            }
            // No bounding arcs at this depth: the whole circle minus
            // nothing — every orbit point counts.
            _ => (true, Some("e".into())),
        };
        gaps.push(GapStatus {
            from_slot: from,
            to_slot: to,
            visited,
            witness,
        });
    }
    Ok(GapReport { radius, gaps })
}
