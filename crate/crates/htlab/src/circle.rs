//! Piecewise-linear circle homeomorphisms: the circle model of `T_n`.
//!
//! A [`PLCircleMap`] is an orientation-preserving homeomorphism of `R/Z`,
//! stored as its breakpoints in `[0, 1)` together with the images of those
//! breakpoints as values of a lift (so the image list is strictly increasing
//! and rises by exactly 1 over one full turn). Canonical form keeps only
//! breakpoints where the slope actually changes; a pure rotation is anchored
//! at 0. Elements of `T_n` correspond to maps whose breakpoints and values
//! are n-adic and whose slopes are powers of n; [`to_circle_map`] and
//! [`from_circle_map`] convert both ways exactly.

use crate::cantor::{make_element, CantorError, MembershipClass, Prefix, VElement};
use crate::numerics::{CirclePoint, NRational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircleError {
    #[error("element does not act on the circle: it lies in V\\T")]
    NotInT,
    #[error("value {0} is not {1}-adic")]
    NotNAdic(NRational, u32),
    #[error("slope {0} is not a power of {1}")]
    NotPowerOfN(NRational, u32),
    #[error("invalid circle map: {0}")]
    InvalidMap(String),
    #[error("arc length must lie strictly between 0 and 1, got {0}")]
    InvalidArc(NRational),
    #[error(transparent)]
    Cantor(#[from] CantorError),
}

/// An orientation-preserving piecewise-linear homeomorphism of the circle.
#[derive(Clone, PartialEq, Eq)]
pub struct PLCircleMap {
    breaks: Vec<CirclePoint>,
    images: Vec<NRational>,
}

/// One affine piece in lift coordinates, covering `[x_lo, x_hi)`.
#[derive(Clone)]
struct Seg {
    x_lo: NRational,
    x_hi: NRational,
    y_lo: NRational,
    slope: NRational,
}

impl Seg {
    fn y_at(&self, x: &NRational) -> NRational {
        &self.y_lo + &self.slope * (x - &self.x_lo)
    }

    fn displacement_at(&self, x: &NRational) -> NRational {
        self.y_at(x) - x
    }
}

fn cyclic_slopes(breaks: &[CirclePoint], images: &[NRational]) -> Vec<NRational> {
    let m = breaks.len();
    let one = NRational::one();
    (0..m)
        .map(|i| {
            let (x1, y1) = if i + 1 < m {
                (breaks[i + 1].value().clone(), images[i + 1].clone())
            } else {
                (breaks[0].value() + &one, &images[0] + &one)
            };
            (y1 - &images[i]) / (x1 - breaks[i].value())
        })
        .collect()
}

impl PLCircleMap {
    /// Validates and canonicalizes a breakpoint/image description.
    ///
    /// Requirements: the lists are nonempty and of equal length, breakpoints
    /// strictly increase within `[0, 1)`, images strictly increase with
    /// `images[0]` in `[0, 1)` and a total rise of less than 1 across the
    /// list (the wrap segment supplies the remainder).
    pub fn new(breaks: Vec<CirclePoint>, images: Vec<NRational>) -> Result<Self, CircleError> {
        let fail = |msg: &str| Err(CircleError::InvalidMap(msg.to_owned()));
        if breaks.is_empty() {
            return fail("need at least one breakpoint");
        }
        if breaks.len() != images.len() {
            return fail("breakpoint and image counts differ");
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return fail("breakpoints must strictly increase");
        }
        if images.windows(2).any(|w| w[0] >= w[1]) {
            return fail("images must strictly increase");
        }
        if images[0] < NRational::zero() || images[0] >= NRational::one() {
            return fail("first image must lie in [0, 1)");
        }
        if images[images.len() - 1].clone() - &images[0] >= NRational::one() {
            return fail("images must rise by less than 1 across the breakpoint list");
        }
        Ok(Self::canonical(breaks, images))
    }

    fn canonical(breaks: Vec<CirclePoint>, images: Vec<NRational>) -> Self {
        let slopes = cyclic_slopes(&breaks, &images);
        let m = breaks.len();
        if slopes.iter().all(|s| *s == slopes[0]) {
            // Constant slope forces slope 1: a rotation, anchored at 0.
            let offset = (&images[0] - breaks[0].value()).rem_mod1();
            return PLCircleMap { breaks: vec![CirclePoint::zero()], images: vec![offset] };
        }
        let mut kept_breaks = Vec::new();
        let mut kept_images = Vec::new();
        for i in 0..m {
            if slopes[(i + m - 1) % m] != slopes[i] {
                kept_breaks.push(breaks[i].clone());
                kept_images.push(images[i].clone());
            }
        }
        let shift = NRational::from_integer(kept_images[0].floor_int());
        if !shift.is_zero() {
            for y in &mut kept_images {
                *y = &*y - &shift;
            }
        }
        PLCircleMap { breaks: kept_breaks, images: kept_images }
    }

    pub fn identity() -> Self {
        Self::rotation(&NRational::zero())
    }

    pub fn rotation(offset: &NRational) -> Self {
        PLCircleMap {
            breaks: vec![CirclePoint::zero()],
            images: vec![offset.rem_mod1()],
        }
    }

    pub fn breakpoints(&self) -> &[CirclePoint] {
        &self.breaks
    }

    /// Images of the breakpoints as lift values.
    pub fn image_lifts(&self) -> &[NRational] {
        &self.images
    }

    /// Slope of each segment, indexed by the breakpoint that starts it.
    pub fn slopes(&self) -> Vec<NRational> {
        cyclic_slopes(&self.breaks, &self.images)
    }

    pub fn is_identity(&self) -> bool {
        self.breaks.len() == 1 && self.images[0].is_zero()
    }

    /// The offset when the map is a rotation.
    pub fn rotation_offset(&self) -> Option<&NRational> {
        (self.breaks.len() == 1).then_some(&self.images[0])
    }

    fn segments(&self) -> Vec<Seg> {
        let m = self.breaks.len();
        let slopes = self.slopes();
        (0..m)
            .map(|i| {
                let x_hi = if i + 1 < m {
                    self.breaks[i + 1].value().clone()
                } else {
                    self.breaks[0].value() + NRational::one()
                };
                Seg {
                    x_lo: self.breaks[i].value().clone(),
                    x_hi,
                    y_lo: self.images[i].clone(),
                    slope: slopes[i].clone(),
                }
            })
            .collect()
    }

    /// Index of the segment whose half-open domain contains `x`, where `x`
    /// has already been reduced into `[breaks[0], breaks[0] + 1)`.
    fn segment_index(&self, x: &NRational) -> usize {
        self.breaks.partition_point(|b| b.value() <= x) - 1
    }

    /// Value of the lift at an arbitrary real argument.
    pub fn eval_lift(&self, x: &NRational) -> NRational {
        let x0 = self.breaks[0].value();
        let shift = NRational::from_integer((x - x0).floor_int());
        let xr = x - &shift;
        let i = self.segment_index(&xr);
        let m = self.breaks.len();
        let (x_i, y_i) = (self.breaks[i].value(), &self.images[i]);
        let (x_next, y_next) = if i + 1 < m {
            (self.breaks[i + 1].value().clone(), self.images[i + 1].clone())
        } else {
            (x0 + NRational::one(), &self.images[0] + NRational::one())
        };
        let slope = (y_next - y_i) / (&x_next - x_i);
        y_i + slope * (xr - x_i) + shift
    }

    pub fn evaluate(&self, x: &CirclePoint) -> CirclePoint {
        CirclePoint::new(self.eval_lift(x.value()))
    }

    fn slope_at(&self, x: &NRational) -> NRational {
        let x0 = self.breaks[0].value();
        let shift = NRational::from_integer((x - x0).floor_int());
        let xr = x - shift;
        self.slopes()[self.segment_index(&xr)].clone()
    }

    /// Composition `self . other`: `other` acts first.
    pub fn compose(&self, other: &PLCircleMap) -> PLCircleMap {
        let other_inv = other.invert();
        let mut cuts: Vec<CirclePoint> = other.breaks.clone();
        cuts.extend(self.breaks.iter().map(|b| other_inv.evaluate(b)));
        cuts.sort();
        cuts.dedup();
        let mut images: Vec<NRational> = cuts
            .iter()
            .map(|c| self.eval_lift(&other.eval_lift(c.value())))
            .collect();
        let shift = NRational::from_integer(images[0].floor_int());
        if !shift.is_zero() {
            for y in &mut images {
                *y = &*y - &shift;
            }
        }
        PLCircleMap::new(cuts, images).expect("composite of homeomorphisms is a homeomorphism")
    }

    pub fn invert(&self) -> PLCircleMap {
        let mut pairs: Vec<(CirclePoint, NRational)> = self
            .breaks
            .iter()
            .zip(&self.images)
            .map(|(x, y)| {
                let k = NRational::from_integer(y.floor_int());
                (CirclePoint::new(y.clone()), x.value() - k)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let breaks: Vec<CirclePoint> = pairs.iter().map(|(b, _)| b.clone()).collect();
        let mut images: Vec<NRational> = pairs.into_iter().map(|(_, y)| y).collect();
        let shift = NRational::from_integer(images[0].floor_int());
        if !shift.is_zero() {
            for y in &mut images {
                *y = &*y - &shift;
            }
        }
        PLCircleMap::new(breaks, images).expect("inverse of a homeomorphism is a homeomorphism")
    }

    /// All fixed points and fixed intervals, classified by one-sided slopes.
    pub fn fixed_points(&self) -> FixedPointReport {
        if self.is_identity() {
            return FixedPointReport {
                points: Vec::new(),
                fixed_intervals: vec![FixedInterval::WholeCircle],
            };
        }
        let segs = self.segments();
        let m = segs.len();
        let one = NRational::one();
        let slopes = self.slopes();

        let mut interior: Vec<(CirclePoint, NRational)> = Vec::new();
        let mut fixed_lift: Vec<(NRational, NRational)> = Vec::new();
        for seg in &segs {
            let d_lo = seg.displacement_at(&seg.x_lo);
            if seg.slope == one {
                if d_lo.is_integer() {
                    fixed_lift.push((seg.x_lo.clone(), seg.x_hi.clone()));
                }
                continue;
            }
            let d_hi = seg.displacement_at(&seg.x_hi);
            let (lo, hi) = if d_lo < d_hi { (&d_lo, &d_hi) } else { (&d_hi, &d_lo) };
            let mut k = ceil_int(lo);
            let k_max = hi.floor_int();
            while k <= k_max {
                // y_lo + s (x - x_lo) - x = k
                let x = &seg.x_lo
                    + (NRational::from_integer(k.clone()) - &d_lo) / (&seg.slope - &one);
                if x > seg.x_lo && x < seg.x_hi {
                    interior.push((CirclePoint::new(x), seg.slope.clone()));
                }
                k += 1;
            }
        }

        let mut points: Vec<FixedPointInfo> = Vec::new();
        for i in 0..m {
            if (&self.images[i] - self.breaks[i].value()).is_integer() {
                let left = slopes[(i + m - 1) % m].clone();
                let right = slopes[i].clone();
                let kind = classify_slopes(&left, &right);
                points.push(FixedPointInfo {
                    location: self.breaks[i].clone(),
                    kind,
                    left_slope: left,
                    right_slope: right,
                });
            }
        }
        for (location, slope) in interior {
            let kind = classify_slopes(&slope, &slope);
            points.push(FixedPointInfo {
                location,
                kind,
                left_slope: slope.clone(),
                right_slope: slope,
            });
        }
        points.sort_by(|a, b| a.location.cmp(&b.location));

        // Merge adjacent fixed segments, including across the wrap point.
        let mut merged: Vec<(NRational, NRational)> = Vec::new();
        for (u, v) in fixed_lift {
            match merged.last_mut() {
                Some(last) if last.1 == u => last.1 = v,
                _ => merged.push((u, v)),
            }
        }
        if merged.len() >= 2 {
            let wrap_hi = self.breaks[0].value() + &one;
            if merged[0].0 == *self.breaks[0].value() && merged[merged.len() - 1].1 == wrap_hi {
                let (head_lo, head_hi) = merged.remove(0);
                let last = merged.last_mut().unwrap();
                debug_assert_eq!(head_lo + &one, last.1);
                last.1 = head_hi + &one;
            }
        }
        let mut fixed_intervals: Vec<FixedInterval> = merged
            .into_iter()
            .map(|(u, v)| {
                let arc = Arc::new(CirclePoint::new(u.clone()), v - u)
                    .expect("a proper fixed interval is a valid arc");
                FixedInterval::Arc(arc)
            })
            .collect();
        fixed_intervals.sort_by(|a, b| match (a, b) {
            (FixedInterval::Arc(x), FixedInterval::Arc(y)) => x.start().cmp(y.start()),
            _ => std::cmp::Ordering::Equal,
        });
        FixedPointReport { points, fixed_intervals }
    }

    /// Image of a closed arc; an arc shorter than the full circle stays so.
    pub fn image_of_arc(&self, arc: &Arc) -> Arc {
        let y1 = self.eval_lift(arc.start.value());
        let y2 = self.eval_lift(&(arc.start.value() + &arc.length));
        Arc::new(CirclePoint::new(y1.clone()), y2 - y1)
            .expect("homeomorphic image of a proper arc is a proper arc")
    }

    /// Largest slope taken on a positive-length piece of the arc.
    pub fn max_slope_on(&self, arc: &Arc) -> NRational {
        let segs = self.segments();
        let x0 = self.breaks[0].value();
        let one = NRational::one();
        let start = {
            let s = arc.start.value();
            s - NRational::from_integer((s - x0).floor_int())
        };
        let end = &start + &arc.length;
        let mut best: Option<NRational> = None;
        let mut cur = start;
        while cur < end {
            let (reduced, bump) = if cur >= x0 + &one {
                (&cur - &one, one.clone())
            } else {
                (cur.clone(), NRational::zero())
            };
            let idx = segs.partition_point(|s| s.x_lo <= reduced) - 1;
            let seg = &segs[idx];
            if best.as_ref().is_none_or(|b| seg.slope > *b) {
                best = Some(seg.slope.clone());
            }
            cur = &seg.x_hi + bump;
        }
        best.expect("arc has positive length")
    }

    /// Certifies that the map strictly shrinks circle distance between any
    /// two points of the arc: the slope bound `L <= 1/2`, or else
    /// `max_slope * L < 1 - L` so that images stay closer the short way
    /// around than their sources were.
    pub fn contraction_certificate(&self, arc: &Arc) -> ContractionCertificate {
        let max_slope = self.max_slope_on(arc);
        let one = NRational::one();
        let half = NRational::new(1.into(), 2.into()).unwrap();
        let len = arc.length.clone();
        let certified = max_slope < one
            && (len <= half || &max_slope * &len < NRational::one() - &len);
        ContractionCertificate {
            arc: arc.clone(),
            max_slope,
            arc_length: len,
            verdict: if certified {
                ContractionVerdict::Certified
            } else {
                ContractionVerdict::NotCertified
            },
        }
    }
}

fn classify_slopes(left: &NRational, right: &NRational) -> FixedPointKind {
    let one = NRational::one();
    if *left < one && *right < one {
        FixedPointKind::Attracting
    } else if *left > one && *right > one {
        FixedPointKind::Repelling
    } else if *left == one && *right == one {
        FixedPointKind::InteriorOfFixedInterval
    } else {
        FixedPointKind::SemiStable
    }
}

fn ceil_int(x: &NRational) -> BigInt {
    -(-x).floor_int()
}

impl std::fmt::Debug for PLCircleMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PL{{")?;
        for (i, (b, y)) in self.breaks.iter().zip(&self.images).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}->{y}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct RawMap {
    breaks: Vec<CirclePoint>,
    images: Vec<NRational>,
}

impl Serialize for PLCircleMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let raw = RawMap { breaks: self.breaks.clone(), images: self.images.clone() };
        raw.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PLCircleMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawMap::deserialize(deserializer)?;
        PLCircleMap::new(raw.breaks, raw.images).map_err(D::Error::custom)
    }
}

/// A closed arc of the circle with length strictly between 0 and 1,
/// described by its start point and length (it may wrap through 0).
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct Arc {
    start: CirclePoint,
    length: NRational,
}

impl Arc {
    pub fn new(start: CirclePoint, length: NRational) -> Result<Self, CircleError> {
        if length <= NRational::zero() || length >= NRational::one() {
            return Err(CircleError::InvalidArc(length));
        }
        Ok(Arc { start, length })
    }

    pub fn start(&self) -> &CirclePoint {
        &self.start
    }

    pub fn length(&self) -> &NRational {
        &self.length
    }

    pub fn end(&self) -> CirclePoint {
        self.start.translate(&self.length)
    }

    pub fn contains_point(&self, p: &CirclePoint) -> bool {
        (p.value() - self.start.value()).rem_mod1() <= self.length
    }

    /// The closure of the complement: shares both endpoints with `self`.
    pub fn complement(&self) -> Arc {
        Arc {
            start: self.end(),
            length: NRational::one() - &self.length,
        }
    }

    /// Containment of closed arcs; `strictly` demands the inner arc lie in
    /// the open interior.
    pub fn contains_arc(&self, inner: &Arc, strictly: bool) -> bool {
        let offset = (inner.start.value() - self.start.value()).rem_mod1();
        let reach = offset.clone() + &inner.length;
        if strictly {
            !offset.is_zero() && reach < self.length
        } else {
            reach <= self.length
        }
    }

    pub fn is_disjoint_from(&self, other: &Arc) -> bool {
        !self.contains_point(&other.start) && !other.contains_point(&self.start)
    }
}

impl std::fmt::Debug for Arc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end())
    }
}

impl<'de> Deserialize<'de> for Arc {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct RawArc {
            start: CirclePoint,
            length: NRational,
        }
        let raw = RawArc::deserialize(deserializer)?;
        Arc::new(raw.start, raw.length).map_err(D::Error::custom)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum FixedPointKind {
    /// Both one-sided slopes below 1.
    Attracting,
    /// Both one-sided slopes above 1.
    Repelling,
    /// Slope 1 on exactly one side, or opposite behaviors on the two sides.
    SemiStable,
    /// Slope 1 on both sides; the neighbors are fixed as well.
    InteriorOfFixedInterval,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FixedPointInfo {
    pub location: CirclePoint,
    pub kind: FixedPointKind,
    pub left_slope: NRational,
    pub right_slope: NRational,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum FixedInterval {
    WholeCircle,
    Arc(Arc),
}

/// Exact inventory of the fixed-point set of a map.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FixedPointReport {
    /// Isolated fixed points plus fixed breakpoints, sorted by location.
    pub points: Vec<FixedPointInfo>,
    pub fixed_intervals: Vec<FixedInterval>,
}

impl FixedPointReport {
    pub fn count_kind(&self, kind: FixedPointKind) -> usize {
        self.points.iter().filter(|p| p.kind == kind).count()
    }

    pub fn points_of_kind(&self, kind: FixedPointKind) -> Vec<&FixedPointInfo> {
        self.points.iter().filter(|p| p.kind == kind).collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum ContractionVerdict {
    Certified,
    NotCertified,
}

/// Witness that a map contracts an arc, with the exact slope bound used.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ContractionCertificate {
    pub arc: Arc,
    pub max_slope: NRational,
    pub arc_length: NRational,
    pub verdict: ContractionVerdict,
}

impl ContractionCertificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == ContractionVerdict::Certified
    }
}

/// The circle action of an element of `T_n`. Fails with `NotInT` when the
/// element has a genuine discontinuity.
pub fn to_circle_map(g: &VElement) -> Result<PLCircleMap, CircleError> {
    if g.classify() == MembershipClass::InVNotT {
        return Err(CircleError::NotInT);
    }
    let pairs = g.pairs();
    let breaks: Vec<CirclePoint> = pairs
        .iter()
        .map(|(w, _)| CirclePoint::new(w.interval_start()))
        .collect();
    let mut images = Vec::with_capacity(pairs.len());
    let mut lift = pairs[0].1.interval_start();
    for (i, (_, v)) in pairs.iter().enumerate() {
        if i > 0 {
            lift = lift + pairs[i - 1].1.interval_length();
            debug_assert_eq!(CirclePoint::new(lift.clone()), CirclePoint::new(v.interval_start()));
        }
        images.push(lift.clone());
    }
    PLCircleMap::new(breaks, images)
        .map_err(|_| CircleError::InvalidMap("element does not define a circle map".into()))
}

/// Recovers the prefix-replacement element of a map all of whose breakpoints
/// and values are n-adic and whose slopes are powers of n.
pub fn from_circle_map(m: &PLCircleMap, n: u32) -> Result<VElement, CircleError> {
    if n < 2 {
        return Err(CantorError::BadArity(n).into());
    }
    for b in m.breakpoints() {
        if !b.value().is_n_adic(n) {
            return Err(CircleError::NotNAdic(b.value().clone(), n));
        }
    }
    for y in m.image_lifts() {
        if !y.is_n_adic(n) {
            return Err(CircleError::NotNAdic(y.clone(), n));
        }
    }
    for s in m.slopes() {
        if s.power_of_n_exponent(n).ok().flatten().is_none() {
            return Err(CircleError::NotPowerOfN(s, n));
        }
    }
    let mut pairs: Vec<(Prefix, Prefix)> = Vec::new();
    let root = Prefix::empty(n)?;
    refine(m, n, &root, 0, &mut pairs);
    Ok(make_element(n, pairs).expect("refinement yields a valid element"))
}

/// Splits the cone of `w` until the map is affine on it with a cone image,
/// then emits the corresponding pair.
fn refine(m: &PLCircleMap, n: u32, w: &Prefix, depth: usize, out: &mut Vec<(Prefix, Prefix)>) {
    assert!(depth <= 4096, "cone refinement did not terminate");
    let x = w.interval_start();
    let x_hi = &x + w.interval_length();
    let affine = !m
        .breakpoints()
        .iter()
        .any(|b| *b.value() > x && *b.value() < x_hi);
    if affine {
        let k = m
            .slope_at(&x)
            .power_of_n_exponent(n)
            .expect("slopes are positive")
            .expect("slopes were checked to be powers of n");
        let target_depth = w.len() as i64 - k;
        if target_depth >= 0 {
            let y = m.eval_lift(&x).rem_mod1();
            let scaled = y * NRational::pow_of(n, target_depth);
            if scaled.is_integer() {
                let v = prefix_from_index(n, target_depth as usize, scaled.floor_int());
                out.push((w.clone(), v));
                return;
            }
        }
    }
    for d in 1..=n {
        refine(m, n, &w.concat(&[d]), depth + 1, out);
    }
}

/// The depth-`len` prefix whose cone starts at `index * n^-len`.
fn prefix_from_index(n: u32, len: usize, mut index: BigInt) -> Prefix {
    let base = BigInt::from(n);
    let mut digits = vec![0u32; len];
    for slot in digits.iter_mut().rev() {
        let (q, r) = index.div_rem(&base);
        *slot = r.to_u32().expect("digit fits") + 1;
        index = q;
    }
    debug_assert!(index.is_zero());
    Prefix::new(n, digits).expect("digits are in range")
}
