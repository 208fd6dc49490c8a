//! The explicit free pair `a, b` inside `T_n` and its ping-pong table.
//!
//! For each arity `n >= 2` the construction starts from an increasing map
//! `f` of `[0, 1/n]` with slopes `n^3, 1, 1/n^3`, extends it to the whole
//! circle by conjugating with the reflection `h(x) = 1 - (n-1)x`, and takes
//! `b` to be the conjugate of the resulting map `a` by the rotation by
//! `1/n^2`. Four closed arcs of length `1/n^3` around the attracting fixed
//! points form the table; [`verify_pingpong`] checks every hypothesis of
//! the contracting ping-pong criterion in exact arithmetic and returns an
//! auditable certificate.

use crate::cantor::{CantorError, VElement};
use crate::circle::{
    from_circle_map, Arc, CircleError, ContractionCertificate, FixedPointKind, PLCircleMap,
};
use crate::numerics::{CirclePoint, NRational};
use num_bigint::BigInt;
use serde::de::{Error as _, Unexpected};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A generator or inverse generator, written `a`, `A`, `b`, `B` with
/// capitals denoting inverses.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }

    pub fn from_symbol(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'A' => Some(Letter::AInv),
            'b' => Some(Letter::B),
            'B' => Some(Letter::BInv),
            _ => None,
        }
    }
}

impl std::fmt::Display for Letter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.symbol().to_string())
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        let mut chars = s.chars();
        match (chars.next().and_then(Letter::from_symbol), chars.next()) {
            (Some(l), None) => Ok(l),
            _ => Err(D::Error::invalid_value(
                Unexpected::Str(&s),
                &"one of \"a\", \"A\", \"b\", \"B\"",
            )),
        }
    }
}

fn pw(n: u32, e: u32) -> BigInt {
    BigInt::from(n).pow(e)
}

fn q(num: BigInt, den: BigInt) -> NRational {
    NRational::new(num, den).expect("denominator is a positive power")
}

/// An increasing piecewise-linear map of a closed interval, as its knots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalMap {
    knots: Vec<(NRational, NRational)>,
}

impl IntervalMap {
    fn new(knots: Vec<(NRational, NRational)>) -> Self {
        debug_assert!(knots.len() >= 2);
        debug_assert!(knots.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1));
        IntervalMap { knots }
    }

    pub fn knots(&self) -> &[(NRational, NRational)] {
        &self.knots
    }

    /// Value at `x`, which must lie between the first and last knot.
    pub fn evaluate(&self, x: &NRational) -> NRational {
        let first = &self.knots[0].0;
        let last = &self.knots[self.knots.len() - 1].0;
        assert!(x >= first && x <= last, "argument outside the domain interval");
        let i = (self.knots.partition_point(|(kx, _)| kx <= x) - 1).min(self.knots.len() - 2);
        let (x0, y0) = &self.knots[i];
        let (x1, y1) = &self.knots[i + 1];
        y0 + (y1 - y0) / (x1 - x0) * (x - x0)
    }

    pub fn slopes(&self) -> Vec<NRational> {
        self.knots
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
            .collect()
    }
}

/// The seed homeomorphism of `[0, 1/n]`: three segments of slopes
/// `n^3`, `1`, `1/n^3`, fixing both endpoints.
pub fn build_f(n: u32) -> IntervalMap {
    assert!(n >= 2, "arity must be at least 2");
    let one = BigInt::from(1);
    let x1 = q(pw(n, 3) - &one, pw(n, 7));
    let y1 = q(pw(n, 3) - &one, pw(n, 4));
    let x2 = NRational::pow_of(n, -4);
    let y2 = q(pw(n, 6) - pw(n, 3) + &one, pw(n, 7));
    let end = NRational::pow_of(n, -1);
    IntervalMap::new(vec![
        (NRational::zero(), NRational::zero()),
        (x1, y1),
        (x2, y2),
        (end.clone(), end),
    ])
}

/// The generating pair: `a` is `f` on `[0, 1/n]` glued with its conjugate
/// under `h(x) = 1 - (n-1)x` on `[1/n, 1]`; `b` is `a` conjugated by the
/// rotation by `1/n^2`.
pub fn build_generators(n: u32) -> (PLCircleMap, PLCircleMap) {
    assert!(n >= 2, "arity must be at least 2");
    let f = build_f(n);
    let h = |v: &NRational| NRational::one() - NRational::from_integer(n - 1) * v;
    let mut knots = f.knots().to_vec();
    let inner = &f.knots()[1..f.knots().len() - 1];
    for (x, y) in inner.iter().rev() {
        knots.push((h(x), h(y)));
    }
    let breaks = knots.iter().map(|(x, _)| CirclePoint::new(x.clone())).collect();
    let images = knots.into_iter().map(|(_, y)| y).collect();
    let a = PLCircleMap::new(breaks, images).expect("generator knots form a homeomorphism");
    let rot = PLCircleMap::rotation(&NRational::pow_of(n, -2));
    let b = rot.compose(&a).compose(&rot.invert());
    (a, b)
}

/// The four ping-pong arcs, keyed by letter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcSet {
    #[serde(rename = "a")]
    pub a: Arc,
    #[serde(rename = "A")]
    pub a_inv: Arc,
    #[serde(rename = "b")]
    pub b: Arc,
    #[serde(rename = "B")]
    pub b_inv: Arc,
}

impl ArcSet {
    pub fn get(&self, c: Letter) -> &Arc {
        match c {
            Letter::A => &self.a,
            Letter::AInv => &self.a_inv,
            Letter::B => &self.b,
            Letter::BInv => &self.b_inv,
        }
    }
}

/// Closed arcs of length `1/n^3`: `P(a^{-1})` spans `[-(n-1)/n^4, 1/n^4]`
/// through 0, `P(a)` spans `[(n^3-1)/n^4, (n^3+n-1)/n^4]`, and the arcs for
/// `b` are their translates by `1/n^2`.
pub fn build_arcs(n: u32) -> ArcSet {
    assert!(n >= 2, "arity must be at least 2");
    let len = NRational::pow_of(n, -3);
    let one = BigInt::from(1);
    let a_inv = Arc::new(
        CirclePoint::new(q(&one - BigInt::from(n), pw(n, 4))),
        len.clone(),
    )
    .expect("length 1/n^3 is proper");
    let a = Arc::new(
        CirclePoint::new(q(pw(n, 3) - &one, pw(n, 4))),
        len.clone(),
    )
    .expect("length 1/n^3 is proper");
    let shift = NRational::pow_of(n, -2);
    let b_inv = Arc::new(a_inv.start().translate(&shift), len.clone()).expect("proper");
    let b = Arc::new(a.start().translate(&shift), len).expect("proper");
    ArcSet { a, a_inv, b, b_inv }
}

/// The generators in both representations together with their arcs.
#[derive(Clone, Debug, Serialize)]
pub struct PingPongSystem {
    pub n: u32,
    pub a: PLCircleMap,
    pub b: PLCircleMap,
    pub a_element: VElement,
    pub b_element: VElement,
    pub arcs: ArcSet,
}

pub fn build_system(n: u32) -> Result<PingPongSystem, CircleError> {
    if n < 2 {
        return Err(CantorError::BadArity(n).into());
    }
    let (a, b) = build_generators(n);
    let a_element = from_circle_map(&a, n)?;
    let b_element = from_circle_map(&b, n)?;
    Ok(PingPongSystem {
        n,
        a,
        b,
        a_element,
        b_element,
        arcs: build_arcs(n),
    })
}

impl PingPongSystem {
    pub fn map_for(&self, c: Letter) -> PLCircleMap {
        match c {
            Letter::A => self.a.clone(),
            Letter::AInv => self.a.invert(),
            Letter::B => self.b.clone(),
            Letter::BInv => self.b.invert(),
        }
    }

    pub fn element_for(&self, c: Letter) -> VElement {
        match c {
            Letter::A => self.a_element.clone(),
            Letter::AInv => self.a_element.invert(),
            Letter::B => self.b_element.clone(),
            Letter::BInv => self.b_element.invert(),
        }
    }

    pub fn arc_for(&self, c: Letter) -> &Arc {
        self.arcs.get(c)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AttractorCheck {
    pub letter: Letter,
    pub arc: Arc,
    pub attracting_point: Option<CirclePoint>,
    pub unique_attracting: bool,
    pub inside_arc: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DisjointnessCheck {
    pub first: Letter,
    pub second: Letter,
    pub disjoint: bool,
}

/// One of the four endpoint inequalities, stated as `lhs < rhs`.
#[derive(Clone, Debug, Serialize)]
pub struct NamedInequality {
    pub name: String,
    pub lhs: NRational,
    pub rhs: NRational,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContainmentCheck {
    pub letter: Letter,
    pub source: Arc,
    pub image: Arc,
    pub target: Arc,
    pub strictly_inside: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionCheck {
    pub letter: Letter,
    pub certificate: ContractionCertificate,
}

/// Exact record of every hypothesis of the contracting ping-pong criterion.
#[derive(Clone, Debug, Serialize)]
pub struct PingPongCertificate {
    pub n: u32,
    pub attractor_checks: Vec<AttractorCheck>,
    pub disjointness: Vec<DisjointnessCheck>,
    pub inequalities: Vec<NamedInequality>,
    pub containments: Vec<ContainmentCheck>,
    pub contractions: Vec<ContractionCheck>,
    pub verdict: bool,
}

impl PingPongCertificate {
    pub fn holds(&self) -> bool {
        self.verdict
    }
}

/// Checks that each generator has a unique attracting fixed point inside
/// its arc, that the four arcs are pairwise disjoint (recording the four
/// endpoint inequalities), that each letter maps the complement of its
/// inverse's arc strictly inside its own arc, and that each such
/// restriction carries a contraction certificate.
pub fn verify_pingpong(sys: &PingPongSystem) -> PingPongCertificate {
    let attractor_checks: Vec<AttractorCheck> = Letter::ALL
        .iter()
        .map(|&c| {
            let report = sys.map_for(c).fixed_points();
            let attracting = report.points_of_kind(FixedPointKind::Attracting);
            let unique_attracting = attracting.len() == 1;
            let attracting_point = attracting.first().map(|p| p.location.clone());
            let arc = sys.arc_for(c).clone();
            let inside_arc = unique_attracting
                && attracting_point
                    .as_ref()
                    .is_some_and(|p| arc.contains_point(p));
            AttractorCheck {
                letter: c,
                arc,
                attracting_point,
                unique_attracting,
                inside_arc,
                holds: unique_attracting && inside_arc,
            }
        })
        .collect();

    let mut disjointness = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let (x, y) = (Letter::ALL[i], Letter::ALL[j]);
            disjointness.push(DisjointnessCheck {
                first: x,
                second: y,
                disjoint: sys.arc_for(x).is_disjoint_from(sys.arc_for(y)),
            });
        }
    }

    let ends = |c: Letter| sys.arc_for(c).end().value().clone();
    let starts = |c: Letter| sys.arc_for(c).start().value().clone();
    let inequalities: Vec<NamedInequality> = [
        ("end(P(a^-1)) < start(P(b^-1))", ends(Letter::AInv), starts(Letter::BInv)),
        ("end(P(b^-1)) < start(P(a))", ends(Letter::BInv), starts(Letter::A)),
        ("end(P(a)) < start(P(b))", ends(Letter::A), starts(Letter::B)),
        ("end(P(b)) < start(P(a^-1))", ends(Letter::B), starts(Letter::AInv)),
    ]
    .into_iter()
    .map(|(name, lhs, rhs)| NamedInequality {
        name: name.to_owned(),
        holds: lhs < rhs,
        lhs,
        rhs,
    })
    .collect();

    let mut containments = Vec::new();
    let mut contractions = Vec::new();
    for &c in &Letter::ALL {
        let map = sys.map_for(c);
        let source = sys.arc_for(c.inverse()).complement();
        let image = map.image_of_arc(&source);
        let target = sys.arc_for(c).clone();
        let strictly_inside = target.contains_arc(&image, true);
        containments.push(ContainmentCheck { letter: c, source: source.clone(), image, target, strictly_inside });
        contractions.push(ContractionCheck {
            letter: c,
            certificate: map.contraction_certificate(&source),
        });
    }

    let verdict = attractor_checks.iter().all(|c| c.holds)
        && disjointness.iter().all(|c| c.disjoint)
        && inequalities.iter().all(|c| c.holds)
        && containments.iter().all(|c| c.strictly_inside)
        && contractions.iter().all(|c| c.certificate.is_certified());

    PingPongCertificate {
        n: sys.n,
        attractor_checks,
        disjointness,
        inequalities,
        containments,
        contractions,
        verdict,
    }
}
