//! Exact models of the circle: the rational projective line, Möbius and
//! piecewise-projective circle homeomorphisms, covering spaces, lifts and
//! certified rotation numbers.  No floating point anywhere.
//!
//! Orientation convention: counterclockwise means increasing affine
//! coordinate `p/q`, wrapping through the point at infinity.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CircleError {
    #[error("(0,0) is not a point of the projective line")]
    ZeroPoint,
    #[error("Möbius matrix must have positive determinant, got {0}")]
    NonPositiveDeterminant(BigInt),
    #[error("piecewise map needs at least 2 breakpoint/value pairs, got {0}")]
    TooFewBreakpoints(usize),
    #[error("breakpoints are not strictly cyclically ordered (index {0})")]
    BreakpointsNotCyclic(usize),
    #[error("values are not strictly cyclically ordered (index {0})")]
    ValuesNotCyclic(usize),
    #[error("cut point collision: {0} is a queried point of the cover")]
    CutPointCollision(ProjectivePoint),
    #[error("bump is not the identity outside the stated arc (breakpoint {0} moves)")]
    BumpSupport(ProjectivePoint),
    #[error("bump must fix both endpoints of its support arc")]
    BumpEndpoints,
}

// ---------------------------------------------------------------------------
// Projective points
// ---------------------------------------------------------------------------

/// A point of the rational projective line in canonical homogeneous
/// coordinates: `gcd(|p|,|q|) = 1` and `q > 0`, or `(1, 0)` for the point at
/// infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    p: BigInt,
    q: BigInt,
}

impl ProjectivePoint {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, CircleError> {
        let (p, q) = (p.into(), q.into());
        if p.is_zero() && q.is_zero() {
            return Err(CircleError::ZeroPoint);
        }
        Ok(Self::canonical(p, q))
    }

    fn canonical(p: BigInt, q: BigInt) -> Self {
        if q.is_zero() {
            return ProjectivePoint {
                p: BigInt::one(),
                q: BigInt::zero(),
            };
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / &g, q / g);
        if q.is_negative() {
            p = -p;
            q = -q;
        }
        ProjectivePoint { p, q }
    }

    pub fn infinity() -> Self {
        ProjectivePoint {
            p: BigInt::one(),
            q: BigInt::zero(),
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        ProjectivePoint {
            p: n.into(),
            q: BigInt::one(),
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::canonical(r.numer().clone(), r.denom().clone())
    }

    /// `num/den` as a convenience constructor; `den` must be nonzero unless
    /// `num` is.
    pub fn frac(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Self::canonical(num.into(), den.into())
    }

    pub fn is_infinity(&self) -> bool {
        self.q.is_zero()
    }

    /// The affine coordinate `p/q`; `None` for the point at infinity.
    pub fn affine(&self) -> Option<BigRational> {
        if self.is_infinity() {
            None
        } else {
            Some(BigRational::new(self.p.clone(), self.q.clone()))
        }
    }

    pub fn homogeneous(&self) -> (&BigInt, &BigInt) {
        (&self.p, &self.q)
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            f.write_str("inf")
        } else if self.q.is_one() {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

// JSON form: a two-element array of decimal strings ["p", "q"].
impl Serialize for ProjectivePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.p.to_string(), self.q.to_string()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjectivePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [p, q]: [String; 2] = Deserialize::deserialize(d)?;
        let p = BigInt::from_str(&p).map_err(D::Error::custom)?;
        let q = BigInt::from_str(&q).map_err(D::Error::custom)?;
        ProjectivePoint::new(p, q).map_err(D::Error::custom)
    }
}

fn det2(a: &ProjectivePoint, b: &ProjectivePoint) -> BigInt {
    &a.p * &b.q - &a.q * &b.p
}

fn sign_to_i8(s: num_bigint::Sign) -> i8 {
    match s {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

/// The orientation of an ordered triple of projective points:
/// `0` iff two coincide, `+1` iff `x, y, z` read counterclockwise.
///
/// With canonical representatives (second coordinate nonnegative), the
/// orientation is the sign of the product of the three pairwise determinants.
pub fn cyclic_ord(x: &ProjectivePoint, y: &ProjectivePoint, z: &ProjectivePoint) -> i8 {
    sign_to_i8(det2(x, y).sign()) * sign_to_i8(det2(y, z).sign()) * sign_to_i8(det2(z, x).sign())
}

/// Linear position of `x` relative to `y` on the circle cut at `cut`:
/// `Less` means `x` comes strictly before `y` when travelling
/// counterclockwise starting just after `cut`.  Callers must ensure neither
/// point equals the cut.
pub fn cut_cmp(cut: &ProjectivePoint, x: &ProjectivePoint, y: &ProjectivePoint) -> Ordering {
    if x == y {
        return Ordering::Equal;
    }
    match cyclic_ord(cut, x, y) {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => Ordering::Equal,
    }
}

/// Whether `x` lies strictly inside the counterclockwise open arc from `a`
/// to `b` (for `a ≠ b`).
pub fn in_open_arc(a: &ProjectivePoint, x: &ProjectivePoint, b: &ProjectivePoint) -> bool {
    cyclic_ord(a, x, b) == 1
}

// ---------------------------------------------------------------------------
// Möbius maps
// ---------------------------------------------------------------------------

/// An orientation-preserving Möbius transformation, stored as a 2×2 integer
/// matrix with positive determinant acting on homogeneous coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoebiusMap {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl MoebiusMap {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self, CircleError> {
        let m = MoebiusMap {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        };
        let det = m.det();
        if !det.is_positive() {
            return Err(CircleError::NonPositiveDeterminant(det));
        }
        Ok(m.reduced())
    }

    pub fn identity() -> Self {
        MoebiusMap {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    fn reduced(self) -> Self {
        let g = self.a.gcd(&self.b).gcd(&self.c).gcd(&self.d);
        if g.is_one() || g.is_zero() {
            return self;
        }
        MoebiusMap {
            a: self.a / &g,
            b: self.b / &g,
            c: self.c / &g,
            d: self.d / g,
        }
    }

    pub fn apply(&self, x: &ProjectivePoint) -> ProjectivePoint {
        let (p, q) = x.homogeneous();
        ProjectivePoint::canonical(&self.a * p + &self.b * q, &self.c * p + &self.d * q)
    }

    /// The inverse transformation (adjugate matrix; same determinant sign).
    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
        .reduced()
    }

    pub fn compose(&self, inner: &MoebiusMap) -> MoebiusMap {
        MoebiusMap {
            a: &self.a * &inner.a + &self.b * &inner.c,
            b: &self.a * &inner.b + &self.b * &inner.d,
            c: &self.c * &inner.a + &self.d * &inner.c,
            d: &self.c * &inner.b + &self.d * &inner.d,
        }
        .reduced()
    }

    /// The hyperbolic transformation `P · diag(λ, 1) · adj(P)` whose columns
    /// of `P` are the attracting and repelling fixed points; `λ > 1` is the
    /// stretch factor along the attracting eigendirection.
    pub fn hyperbolic(
        attracting: &ProjectivePoint,
        repelling: &ProjectivePoint,
        lambda: impl Into<BigInt>,
    ) -> Result<Self, CircleError> {
        let lambda: BigInt = lambda.into();
        let (ap, aq) = attracting.homogeneous();
        let (rp, rq) = repelling.homogeneous();
        let m = MoebiusMap {
            a: ap * &lambda * rq - rp * aq,
            b: ap * rp - ap * &lambda * rp,
            c: aq * &lambda * rq - rq * aq,
            d: rq * ap - aq * &lambda * rp,
        };
        let det = m.det();
        if !det.is_positive() {
            return Err(CircleError::NonPositiveDeterminant(det));
        }
        Ok(m.reduced())
    }
}

impl Serialize for MoebiusMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [
            [self.a.to_string(), self.b.to_string()],
            [self.c.to_string(), self.d.to_string()],
        ]
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MoebiusMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [[a, b], [c, dd]]: [[String; 2]; 2] = Deserialize::deserialize(d)?;
        let parse = |s: &String| BigInt::from_str(s).map_err(D::Error::custom);
        MoebiusMap::new(parse(&a)?, parse(&b)?, parse(&c)?, parse(&dd)?).map_err(D::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Piecewise-projective circle maps
// ---------------------------------------------------------------------------

/// A deterministic rational point strictly inside the counterclockwise open
/// arc from `a` to `b` (`a ≠ b`); may be the point at infinity.
pub fn arc_interior_point(a: &ProjectivePoint, b: &ProjectivePoint) -> ProjectivePoint {
    assert!(a != b, "empty arc has no interior point");
    if a.is_infinity() {
        let b = b.affine().unwrap();
        return ProjectivePoint::from_rational(&(b - BigRational::one()));
    }
    if b.is_infinity() {
        let a = a.affine().unwrap();
        return ProjectivePoint::from_rational(&(a + BigRational::one()));
    }
    let (fa, fb) = (a.affine().unwrap(), b.affine().unwrap());
    if fa < fb {
        ProjectivePoint::from_rational(&((fa + fb) / BigInt::from(2)))
    } else {
        ProjectivePoint::infinity()
    }
}

/// Order-preserving rational coordinate for points of a closed
/// counterclockwise arc `[lo, hi]`, avoiding infinity on that arc.  The
/// anchor is a point of the complementary arc; the chart is the affine
/// coordinate when the anchor is infinity and `x ↦ 1/(w − x)` otherwise.
/// The chart depends only on the arc's endpoints.
#[derive(Debug, Clone)]
struct ArcChart {
    anchor: Option<BigRational>,
}

impl ArcChart {
    fn for_arc(lo: &ProjectivePoint, hi: &ProjectivePoint) -> ArcChart {
        ArcChart {
            anchor: arc_interior_point(hi, lo).affine(),
        }
    }

    fn to_chart(&self, x: &ProjectivePoint) -> BigRational {
        match &self.anchor {
            None => x.affine().expect("infinity must not lie in the arc"),
            Some(w) => {
                // 1/(w − p/q) = q·wd / (q·wn − p·wd)
                let (p, q) = x.homogeneous();
                BigRational::new(q * w.denom(), q * w.numer() - p * w.denom())
            }
        }
    }

    #[allow(clippy::wrong_self_convention)]
    fn from_chart(&self, y: &BigRational) -> ProjectivePoint {
        match &self.anchor {
            None => ProjectivePoint::from_rational(y),
            Some(w) => {
                if y.is_zero() {
                    ProjectivePoint::infinity()
                } else {
                    ProjectivePoint::from_rational(&(w - y.recip()))
                }
            }
        }
    }
}

/// An orientation-preserving circle homeomorphism given by breakpoint/value
/// pairs, evaluated between breakpoints by affine interpolation in the
/// deterministic charts of [`ArcChart`].  Because the chart depends only on
/// the arc endpoints, the swapped-pairs map is the exact inverse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PLCircleMap {
    pairs: Vec<(ProjectivePoint, ProjectivePoint)>,
}

impl PLCircleMap {
    pub fn new(pairs: Vec<(ProjectivePoint, ProjectivePoint)>) -> Result<Self, CircleError> {
        if pairs.len() < 2 {
            return Err(CircleError::TooFewBreakpoints(pairs.len()));
        }
        let n = pairs.len();
        if n >= 3 {
            for i in 0..n {
                if cyclic_ord(&pairs[i].0, &pairs[(i + 1) % n].0, &pairs[(i + 2) % n].0) != 1 {
                    return Err(CircleError::BreakpointsNotCyclic(i));
                }
                if cyclic_ord(&pairs[i].1, &pairs[(i + 1) % n].1, &pairs[(i + 2) % n].1) != 1 {
                    return Err(CircleError::ValuesNotCyclic(i));
                }
            }
        } else {
            if pairs[0].0 == pairs[1].0 {
                return Err(CircleError::BreakpointsNotCyclic(0));
            }
            if pairs[0].1 == pairs[1].1 {
                return Err(CircleError::ValuesNotCyclic(0));
            }
        }
        Ok(PLCircleMap { pairs })
    }

    pub fn identity_on(points: &[ProjectivePoint]) -> Result<Self, CircleError> {
        Self::new(points.iter().map(|p| (p.clone(), p.clone())).collect())
    }

    pub fn pairs(&self) -> &[(ProjectivePoint, ProjectivePoint)] {
        &self.pairs
    }

    pub fn apply(&self, x: &ProjectivePoint) -> ProjectivePoint {
        let n = self.pairs.len();
        for (b, v) in &self.pairs {
            if b == x {
                return v.clone();
            }
        }
        let i = (0..n)
            .find(|&i| in_open_arc(&self.pairs[i].0, x, &self.pairs[(i + 1) % n].0))
            .expect("breakpoints cover the circle");
        let (b1, v1) = &self.pairs[i];
        let (b2, v2) = &self.pairs[(i + 1) % n];
        let src = ArcChart::for_arc(b1, b2);
        let dst = ArcChart::for_arc(v1, v2);
        let (xc, b1c, b2c) = (src.to_chart(x), src.to_chart(b1), src.to_chart(b2));
        let (v1c, v2c) = (dst.to_chart(v1), dst.to_chart(v2));
        let y = &v1c + (xc - &b1c) * (v2c - &v1c) / (b2c - b1c);
        dst.from_chart(&y)
    }

    /// The inverse homeomorphism: swapped breakpoint/value pairs.
    pub fn inverse(&self) -> PLCircleMap {
        PLCircleMap {
            pairs: self
                .pairs
                .iter()
                .map(|(b, v)| (v.clone(), b.clone()))
                .collect(),
        }
    }
}

/// An exact circle homeomorphism: Möbius, piecewise projective, or a formal
/// composition (needed because the exact composition of two piecewise maps
/// is generally not breakpoint-interpolated again).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CircleMap {
    Moebius(MoebiusMap),
    PL(PLCircleMap),
    /// Applied rightmost-first, like words.
    Composed(Vec<CircleMap>),
}

impl CircleMap {
    pub fn apply(&self, x: &ProjectivePoint) -> ProjectivePoint {
        match self {
            CircleMap::Moebius(m) => m.apply(x),
            CircleMap::PL(m) => m.apply(x),
            CircleMap::Composed(ms) => {
                let mut cur = x.clone();
                for m in ms.iter().rev() {
                    cur = m.apply(&cur);
                }
                cur
            }
        }
    }

    pub fn inverse(&self) -> CircleMap {
        match self {
            CircleMap::Moebius(m) => CircleMap::Moebius(m.inverse()),
            CircleMap::PL(m) => CircleMap::PL(m.inverse()),
            CircleMap::Composed(ms) => {
                CircleMap::Composed(ms.iter().rev().map(|m| m.inverse()).collect())
            }
        }
    }
}

/// The exact composition `bump ∘ map`, after verifying that `bump` is the
/// identity outside the counterclockwise closed arc `[arc_lo, arc_hi]`.
///
/// The support claim is checked exactly: both arc endpoints must be fixed
/// breakpoints of `bump`, and every breakpoint outside the open arc must be
/// fixed (between consecutive fixed breakpoints the chart interpolation is
/// the identity).
pub fn perturb(
    map: &CircleMap,
    bump: &PLCircleMap,
    arc_lo: &ProjectivePoint,
    arc_hi: &ProjectivePoint,
) -> Result<CircleMap, CircleError> {
    let fixed = |p: &ProjectivePoint| bump.pairs.iter().any(|(b, v)| b == p && v == p);
    if !fixed(arc_lo) || !fixed(arc_hi) {
        return Err(CircleError::BumpEndpoints);
    }
    for (b, v) in &bump.pairs {
        if b != arc_lo && b != arc_hi && !in_open_arc(arc_lo, b, arc_hi) && b != v {
            return Err(CircleError::BumpSupport(b.clone()));
        }
    }
    Ok(CircleMap::Composed(vec![
        CircleMap::PL(bump.clone()),
        map.clone(),
    ]))
}

// ---------------------------------------------------------------------------
// Covers and lifts
// ---------------------------------------------------------------------------

/// A cyclic cover of the circle, cut open at a distinguished point.
/// `sheets = 0` is the line model (sheet indices range over all of ℤ);
/// `sheets = k > 0` is the k-fold cyclic cover (sheet indices mod k).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cover {
    pub cut: ProjectivePoint,
    pub sheets: u32,
}

impl Cover {
    pub fn line(cut: ProjectivePoint) -> Self {
        Cover { cut, sheets: 0 }
    }

    pub fn cyclic(cut: ProjectivePoint, k: u32) -> Self {
        assert!(k >= 1);
        Cover { cut, sheets: k }
    }

    fn norm_sheet(&self, s: i64) -> i64 {
        if self.sheets == 0 {
            s
        } else {
            s.rem_euclid(i64::from(self.sheets))
        }
    }
}

/// A sheet-indexed point of a cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverPoint {
    pub base: ProjectivePoint,
    pub sheet: i64,
}

impl CoverPoint {
    pub fn new(base: ProjectivePoint, sheet: i64) -> Self {
        CoverPoint { base, sheet }
    }
}

/// Compare two line-model points: sheet first, then position in the cut
/// order.  Errors if either base point equals the cut.
pub fn line_cmp(cover: &Cover, x: &CoverPoint, y: &CoverPoint) -> Result<Ordering, CircleError> {
    for p in [x, y] {
        if p.base == cover.cut {
            return Err(CircleError::CutPointCollision(p.base.clone()));
        }
    }
    Ok(x.sheet
        .cmp(&y.sheet)
        .then_with(|| cut_cmp(&cover.cut, &x.base, &y.base)))
}

/// Cyclic orientation of three points of a k-fold cover, induced by the cut
/// order on (sheet mod k, base-position) keys.
pub fn cover_cyclic_ord(
    cover: &Cover,
    x: &CoverPoint,
    y: &CoverPoint,
    z: &CoverPoint,
) -> Result<i8, CircleError> {
    assert!(cover.sheets >= 1, "cyclic order needs a cyclic cover");
    for p in [x, y, z] {
        if p.base == cover.cut {
            return Err(CircleError::CutPointCollision(p.base.clone()));
        }
    }
    let key_cmp = |u: &CoverPoint, v: &CoverPoint| {
        cover
            .norm_sheet(u.sheet)
            .cmp(&cover.norm_sheet(v.sheet))
            .then_with(|| cut_cmp(&cover.cut, &u.base, &v.base))
    };
    let (xy, yz, zx) = (key_cmp(x, y), key_cmp(y, z), key_cmp(z, x));
    if xy == Ordering::Equal || yz == Ordering::Equal || zx == Ordering::Equal {
        return Ok(0);
    }
    // Three distinct keys in a linear order are positively oriented iff the
    // triple is a cyclic rotation of the sorted order, i.e. exactly two of
    // the three consecutive comparisons ascend.
    let n_asc = [xy, yz, zx]
        .iter()
        .filter(|&&o| o == Ordering::Less)
        .count();
    Ok(if n_asc == 2 { 1 } else { -1 })
}

/// A lift of a circle homeomorphism to a cover, specified by a reference
/// point and its image's sheet displacement.  The sheet displacement at any
/// other point is computed by exact crossing counts of the cut point along
/// the arcs reference→point and image-of-reference→image-of-point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftedMap {
    pub map: CircleMap,
    pub cover: Cover,
    pub reference: ProjectivePoint,
    pub displacement: i64,
}

impl LiftedMap {
    pub fn new(
        map: CircleMap,
        cover: Cover,
        reference: ProjectivePoint,
        displacement: i64,
    ) -> Result<Self, CircleError> {
        if reference == cover.cut || map.apply(&reference) == cover.cut {
            return Err(CircleError::CutPointCollision(cover.cut.clone()));
        }
        Ok(LiftedMap {
            map,
            cover,
            reference,
            displacement,
        })
    }

    pub fn apply(&self, p: &CoverPoint) -> Result<CoverPoint, CircleError> {
        let c = &self.cover.cut;
        if &p.base == c {
            return Err(CircleError::CutPointCollision(p.base.clone()));
        }
        let fx = self.map.apply(&p.base);
        if &fx == c {
            return Err(CircleError::CutPointCollision(fx));
        }
        let r = &self.reference;
        let fr = self.map.apply(r);
        // Crossings of the cut along the counterclockwise arcs r→x and
        // f(r)→f(x); each arc is traversed once, so each count is 0 or 1.
        let src = i64::from(&p.base != r && in_open_arc(r, c, &p.base));
        let img = i64::from(fx != fr && in_open_arc(&fr, c, &fx));
        let sheet = self
            .cover
            .norm_sheet(p.sheet + self.displacement + img - src);
        Ok(CoverPoint::new(fx, sheet))
    }

    /// The same lift read on the line model (integer sheets).
    pub fn on_line(&self) -> LiftedMap {
        LiftedMap {
            map: self.map.clone(),
            cover: Cover::line(self.cover.cut.clone()),
            reference: self.reference.clone(),
            displacement: self.displacement,
        }
    }
}

/// Apply a composite of lifts (rightmost acts first).
pub fn lift_apply_seq(lifts: &[&LiftedMap], p: &CoverPoint) -> Result<CoverPoint, CircleError> {
    let mut cur = p.clone();
    for lm in lifts.iter().rev() {
        cur = lm.apply(&cur)?;
    }
    Ok(cur)
}

// ---------------------------------------------------------------------------
// Rotation numbers
// ---------------------------------------------------------------------------

/// Result of an exact rotation-number computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RotationNumber {
    /// Certified exact value `p/q` in deck units of the covered circle.
    Rational { p: i64, q: i64 },
    /// No rational with admissible denominator could be certified.
    Undetermined,
}

impl RotationNumber {
    pub fn rational(p: i64, q: i64) -> Self {
        let g = gcd_i64(p.abs().max(1), q);
        RotationNumber::Rational { p: p / g, q: q / g }
    }

    /// Reduce mod 1 (deck units), e.g. to compare circle rotation numbers.
    pub fn mod_one(self) -> Self {
        match self {
            RotationNumber::Rational { p, q } => RotationNumber::Rational {
                p: p.rem_euclid(q),
                q,
            },
            u => u,
        }
    }
}

impl fmt::Display for RotationNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RotationNumber::Rational { p, q } => write!(f, "{p}/{q}"),
            RotationNumber::Undetermined => f.write_str("undetermined"),
        }
    }
}

/// A self-map of a k-fold cover presented as a composite of lifted maps
/// (rightmost acts first).  One full turn of the covered circle is
/// `deck = k` base-circle sheets.
pub struct CoverSelfMap {
    pub lifts: Vec<LiftedMap>,
    pub cover: Cover,
}

impl CoverSelfMap {
    pub fn new(lifts: Vec<LiftedMap>, cover: Cover) -> Self {
        CoverSelfMap { lifts, cover }
    }

    fn deck(&self) -> i64 {
        i64::from(self.cover.sheets.max(1))
    }

    /// One application on the line model.
    fn step(&self, p: &CoverPoint) -> Result<CoverPoint, CircleError> {
        let mut cur = p.clone();
        for lm in self.lifts.iter().rev() {
            cur = lm.on_line().apply(&cur)?;
        }
        Ok(cur)
    }
}

/// Certified rotation number of the composite lift, in deck units.
///
/// Iterates the lift on `basepoint`, maintaining the floor `d_N` of the
/// displacement after `N` steps.  Candidate rationals `p/q` with
/// `q ≤ max_denominator` inside the rigorous enclosure
/// `[(d_N−1)/N, (d_N+2)/N]` are certified by exhibiting, among the sample
/// points, a sign change or zero of `x ↦ F^q(x) − p·deck − x` (continuous on
/// the line, so a sign change proves a fixed point and hence the exact
/// value).  `N` is doubled until the enclosure is finer than `1/(2Q²)` —
/// below the spacing of distinct denominators-≤-Q rationals — and then until
/// the step cap `2^16` if still uncertified; returns `Undetermined` at the
/// cap.  Certification is sound, so a returned rational is exact regardless
/// of enclosure subtleties.
pub fn rotation_number(
    f: &CoverSelfMap,
    basepoint: &ProjectivePoint,
    max_denominator: i64,
    samples: &[ProjectivePoint],
) -> Result<RotationNumber, CircleError> {
    assert!(max_denominator >= 1);
    let deck = f.deck();
    let start = CoverPoint::new(basepoint.clone(), 0);
    let cap: i64 = 1 << 16;

    let mut cur = start.clone();
    let mut n: i64 = 0;
    let mut target: i64 = 1;
    let mut tried: Vec<(i64, i64)> = Vec::new();
    loop {
        while n < target {
            cur = f.step(&cur)?;
            n += 1;
        }
        // d_N = floor of the displacement in deck units: sheet plus the
        // fractional cut-order offset between the end point and the start.
        let whole = cur.sheet.div_euclid(deck);
        let rem = cur.sheet.rem_euclid(deck);
        let frac_nonneg =
            rem > 0 || cut_cmp(&f.cover.cut, &start.base, &cur.base) != Ordering::Greater;
        let d_n = if frac_nonneg { whole } else { whole - 1 };
        for (p, q) in rationals_in_interval(d_n - 1, d_n + 2, n, max_denominator) {
            if tried.contains(&(p, q)) {
                continue;
            }
            if certify(f, p, q, basepoint, samples)? {
                return Ok(RotationNumber::Rational { p, q });
            }
            tried.push((p, q));
        }
        if target >= cap {
            return Ok(RotationNumber::Undetermined);
        }
        target *= 2;
    }
}

/// All reduced rationals `p/q` with `q ≤ qmax` and `lo/n ≤ p/q ≤ hi/n`.
fn rationals_in_interval(lo: i64, hi: i64, n: i64, qmax: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for q in 1..=qmax {
        let pmin = (lo * q).div_euclid(n) + i64::from((lo * q).rem_euclid(n) != 0);
        let pmax = (hi * q).div_euclid(n);
        for p in pmin..=pmax {
            let g = gcd_i64(p.abs().max(1), q);
            let cand = (p / g, q / g);
            if !out.contains(&cand) {
                out.push(cand);
            }
        }
    }
    out
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd_i64(b, a % b)
    }
}

/// Certify rotation number `p/q` by finding sample points on both sides of
/// (or on) the graph of `F^q − p·deck`.
fn certify(
    f: &CoverSelfMap,
    p: i64,
    q: i64,
    basepoint: &ProjectivePoint,
    samples: &[ProjectivePoint],
) -> Result<bool, CircleError> {
    let deck = f.deck();
    let cover_line = Cover::line(f.cover.cut.clone());
    let mut seen_le = false;
    let mut seen_ge = false;
    for base in std::iter::once(basepoint).chain(samples.iter()) {
        if base == &f.cover.cut {
            continue;
        }
        for sheet in 0..deck {
            let u = CoverPoint::new(base.clone(), sheet);
            let mut img = u.clone();
            let mut skip = false;
            for _ in 0..q {
                match f.step(&img) {
                    Ok(x) => img = x,
                    Err(_) => {
                        skip = true;
                        break;
                    }
                }
            }
            if skip {
                continue;
            }
            img.sheet -= p * deck;
            match line_cmp(&cover_line, &img, &u) {
                Ok(Ordering::Equal) => return Ok(true),
                Ok(Ordering::Less) => seen_le = true,
                Ok(Ordering::Greater) => seen_ge = true,
                Err(_) => continue,
            }
            if seen_le && seen_ge {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
