//! Elements of `V_n` as prefix-replacement bijections of the n-ary Cantor set.
//!
//! Points of the Cantor set are infinite words over the alphabet `{1, ..., n}`.
//! An element is a finite list of pairs `(w_i -> v_i)` where the `w_i` and the
//! `v_i` each form a complete antichain of finite prefixes; the element sends
//! `w_i k` to `v_i k` for every infinite tail `k`. Canonical form merges every
//! fully split caret, so equality of group elements is structural equality.

use crate::numerics::{CirclePoint, NRational};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CantorError {
    #[error("arity must be at least 2, got {0}")]
    BadArity(u32),
    #[error("digit {digit} is out of range for arity {arity}")]
    ArityMismatch { digit: u32, arity: u32 },
    #[error("arity {found} does not match arity {expected}")]
    MixedArity { expected: u32, found: u32 },
    #[error("prefixes do not form an antichain: {0:?} is a prefix of {1:?}")]
    NotAntichain(String, String),
    #[error("antichain does not cover the whole Cantor set")]
    IncompletePartition,
    #[error("an element needs at least one pair")]
    EmptyPairs,
    #[error("period must be nonempty")]
    EmptyPeriod,
    #[error("malformed prefix literal {0:?}")]
    BadPrefix(String),
}

/// A finite word over `{1, ..., arity}` naming a cone of the Cantor set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Prefix {
    arity: u32,
    digits: Vec<u32>,
}

impl Prefix {
    pub fn new(arity: u32, digits: Vec<u32>) -> Result<Self, CantorError> {
        if arity < 2 {
            return Err(CantorError::BadArity(arity));
        }
        for &d in &digits {
            if d < 1 || d > arity {
                return Err(CantorError::ArityMismatch { digit: d, arity });
            }
        }
        Ok(Prefix { arity, digits })
    }

    pub fn empty(arity: u32) -> Result<Self, CantorError> {
        Prefix::new(arity, Vec::new())
    }

    /// Parses a digit string such as `"211"`. Arities above 9 use
    /// dot-separated digits (`"1.10.2"`); the empty string is the root.
    pub fn parse(arity: u32, s: &str) -> Result<Self, CantorError> {
        if s.is_empty() {
            return Prefix::empty(arity);
        }
        let digits: Vec<u32> = if s.contains('.') {
            s.split('.')
                .map(|part| part.parse().map_err(|_| CantorError::BadPrefix(s.to_owned())))
                .collect::<Result<_, _>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .filter(|&d| d >= 1)
                        .ok_or_else(|| CantorError::BadPrefix(s.to_owned()))
                })
                .collect::<Result<_, _>>()?
        };
        Prefix::new(arity, digits)
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn is_prefix_of(&self, other: &Prefix) -> bool {
        other.digits.starts_with(&self.digits)
    }

    pub fn concat(&self, suffix: &[u32]) -> Prefix {
        let mut digits = self.digits.clone();
        digits.extend_from_slice(suffix);
        Prefix { arity: self.arity, digits }
    }

    /// Left endpoint of the cone's interval in `[0, 1)`: `sum (d_i - 1) n^-i`.
    pub fn interval_start(&self) -> NRational {
        let mut acc = NRational::zero();
        for (i, &d) in self.digits.iter().enumerate() {
            let term = NRational::from_integer(d - 1) * NRational::pow_of(self.arity, -(i as i64 + 1));
            acc = acc + term;
        }
        acc
    }

    pub fn interval_length(&self) -> NRational {
        NRational::pow_of(self.arity, -(self.len() as i64))
    }
}

impl PartialOrd for Prefix {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Prefix {
    /// Lexicographic order on digit strings; a word precedes its extensions.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.digits.cmp(&other.digits)
    }
}

impl fmt::Display for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arity <= 9 {
            for d in &self.digits {
                write!(f, "{d}")?;
            }
        } else {
            for (i, d) in self.digits.iter().enumerate() {
                if i > 0 {
                    write!(f, ".")?;
                }
                write!(f, "{d}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An eventually periodic point `pre . (per)^inf` of the Cantor set,
/// stored in its unique minimal form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CantorPoint {
    pre: Prefix,
    per: Prefix,
}

impl CantorPoint {
    /// Canonicalizes: the period is primitive (not a proper power) and the
    /// preperiod is as short as possible.
    pub fn new(pre: Prefix, per: Prefix) -> Result<Self, CantorError> {
        if pre.arity() != per.arity() {
            return Err(CantorError::MixedArity { expected: pre.arity(), found: per.arity() });
        }
        if per.is_empty() {
            return Err(CantorError::EmptyPeriod);
        }
        let arity = pre.arity();
        let mut pre = pre.digits;
        let mut per = per.digits;
        per = primitive_root(&per).to_vec();
        while let Some(&last) = pre.last() {
            if last != *per.last().unwrap() {
                break;
            }
            pre.pop();
            let moved = per.pop().unwrap();
            per.insert(0, moved);
        }
        Ok(CantorPoint {
            pre: Prefix { arity, digits: pre },
            per: Prefix { arity, digits: per },
        })
    }

    pub fn arity(&self) -> u32 {
        self.pre.arity()
    }

    pub fn preperiod(&self) -> &Prefix {
        &self.pre
    }

    pub fn period(&self) -> &Prefix {
        &self.per
    }

    /// The i-th digit (0-based) of the infinite expansion.
    pub fn digit(&self, i: usize) -> u32 {
        if i < self.pre.len() {
            self.pre.digits[i]
        } else {
            self.per.digits[(i - self.pre.len()) % self.per.len()]
        }
    }

    pub fn starts_with(&self, w: &Prefix) -> bool {
        w.digits.iter().enumerate().all(|(i, &d)| self.digit(i) == d)
    }

    /// Drops the first `k` digits.
    pub fn strip(&self, k: usize) -> CantorPoint {
        let arity = self.arity();
        if k <= self.pre.len() {
            let pre = self.pre.digits[k..].to_vec();
            CantorPoint::new(
                Prefix { arity, digits: pre },
                self.per.clone(),
            )
            .expect("suffix of a valid point is valid")
        } else {
            let r = (k - self.pre.len()) % self.per.len();
            let mut per = self.per.digits.clone();
            per.rotate_left(r);
            CantorPoint::new(Prefix::empty(arity).unwrap(), Prefix { arity, digits: per })
                .expect("rotated period is valid")
        }
    }

    /// Prepends a prefix.
    pub fn prepend(&self, v: &Prefix) -> CantorPoint {
        let mut pre = v.digits.clone();
        pre.extend_from_slice(&self.pre.digits);
        CantorPoint::new(
            Prefix { arity: self.arity(), digits: pre },
            self.per.clone(),
        )
        .expect("prepending keeps the point valid")
    }

    /// The corresponding point of the circle, `sum (d_i - 1) n^-i`.
    pub fn circle_value(&self) -> CirclePoint {
        let n = self.arity();
        let head = self.pre.interval_start();
        let block = self.per.interval_start();
        let shrink = NRational::pow_of(n, -(self.per.len() as i64));
        let tail = block / (NRational::one() - shrink);
        CirclePoint::new(head + NRational::pow_of(n, -(self.pre.len() as i64)) * tail)
    }

    /// The n-ary digit expansion of a rational circle point. For n-adic
    /// points this is the expansion with an all-ones tail, matching the
    /// right-continuous interval model.
    pub fn from_circle(x: &CirclePoint, arity: u32) -> Result<CantorPoint, CantorError> {
        if arity < 2 {
            return Err(CantorError::BadArity(arity));
        }
        let n = NRational::from_integer(arity);
        let mut digits: Vec<u32> = Vec::new();
        let mut seen: Vec<NRational> = Vec::new();
        let mut state = x.value().clone();
        loop {
            if let Some(j) = seen.iter().position(|s| *s == state) {
                let pre = Prefix::new(arity, digits[..j].to_vec())?;
                let per = Prefix::new(arity, digits[j..].to_vec())?;
                return CantorPoint::new(pre, per);
            }
            seen.push(state.clone());
            let scaled = &state * &n;
            let whole = scaled.floor_int();
            let digit_index: u32 = whole.try_into().expect("digit of a value in [0,1) fits in u32");
            digits.push(digit_index + 1);
            state = scaled.rem_mod1();
        }
    }
}

impl fmt::Display for CantorPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})*", self.pre, self.per)
    }
}

impl fmt::Debug for CantorPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for CantorPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("CantorPoint", 2)?;
        s.serialize_field("pre", &self.pre.to_string())?;
        s.serialize_field("per", &self.per.to_string())?;
        s.end()
    }
}

/// Shortest word `u` with `word = u^m`.
fn primitive_root(word: &[u32]) -> &[u32] {
    let k = word.len();
    for d in 1..=k {
        if k % d == 0 && word.chunks(d).all(|c| c == &word[..d]) {
            return &word[..d];
        }
    }
    word
}

/// Membership of an element in the chain `F_n <= T_n <= V_n`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum MembershipClass {
    /// Order-preserving: the sorted domain antichain maps to the sorted range
    /// antichain in the same order.
    InF,
    /// A nontrivial cyclic rotation of the sorted order.
    InTNotF,
    /// Any other bijection of the antichains.
    InVNotT,
}

impl fmt::Display for MembershipClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MembershipClass::InF => "F",
            MembershipClass::InTNotF => "T\\F",
            MembershipClass::InVNotT => "V\\T",
        };
        write!(f, "{s}")
    }
}

/// Result of a bounded order computation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Order {
    Finite(u64),
    Exceeded,
}

/// An element of `V_n` in canonical (fully caret-reduced) form, with pairs
/// sorted by domain prefix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VElement {
    arity: u32,
    pairs: Vec<(Prefix, Prefix)>,
}

/// Validates antichains, sorts by domain, and reduces to canonical form.
pub fn make_element(n: u32, pairs: Vec<(Prefix, Prefix)>) -> Result<VElement, CantorError> {
    if n < 2 {
        return Err(CantorError::BadArity(n));
    }
    if pairs.is_empty() {
        return Err(CantorError::EmptyPairs);
    }
    for (w, v) in &pairs {
        for p in [w, v] {
            if p.arity() != n {
                return Err(CantorError::MixedArity { expected: n, found: p.arity() });
            }
        }
    }
    let mut pairs = pairs;
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    check_complete_antichain(n, pairs.iter().map(|p| &p.0))?;
    let mut ranges: Vec<&Prefix> = pairs.iter().map(|p| &p.1).collect();
    ranges.sort();
    check_complete_antichain(n, ranges.into_iter())?;
    reduce_carets(n, &mut pairs);
    Ok(VElement { arity: n, pairs })
}

/// Checks that sorted prefixes are pairwise incomparable and that their cones
/// tile the whole Cantor set (Kraft sum equal to 1).
fn check_complete_antichain<'a>(
    n: u32,
    sorted: impl Iterator<Item = &'a Prefix>,
) -> Result<(), CantorError> {
    let sorted: Vec<&Prefix> = sorted.collect();
    for pair in sorted.windows(2) {
        if pair[0].is_prefix_of(pair[1]) {
            return Err(CantorError::NotAntichain(pair[0].to_string(), pair[1].to_string()));
        }
    }
    let max_len = sorted.iter().map(|p| p.len()).max().unwrap_or(0);
    let base = BigInt::from(n);
    let mut total = BigInt::zero();
    for p in &sorted {
        total += base.pow((max_len - p.len()) as u32);
    }
    if total != base.pow(max_len as u32) {
        return Err(CantorError::IncompletePartition);
    }
    Ok(())
}

/// Repeatedly merges sibling blocks `(w1 -> v1), ..., (wn -> vn)` into
/// `(w -> v)` until no block remains. Input must be sorted by domain;
/// sortedness is preserved.
fn reduce_carets(n: u32, pairs: &mut Vec<(Prefix, Prefix)>) {
    let n = n as usize;
    'scan: loop {
        if pairs.len() < n {
            return;
        }
        for i in 0..=pairs.len() - n {
            if let Some(merged) = merge_block(&pairs[i..i + n]) {
                pairs.splice(i..i + n, [merged]);
                continue 'scan;
            }
        }
        return;
    }
}

fn merge_block(block: &[(Prefix, Prefix)]) -> Option<(Prefix, Prefix)> {
    let (w0, v0) = &block[0];
    if w0.is_empty() || v0.is_empty() {
        return None;
    }
    let (wp, vp) = (&w0.digits[..w0.len() - 1], &v0.digits[..v0.len() - 1]);
    for (i, (w, v)) in block.iter().enumerate() {
        let d = (i + 1) as u32;
        if w.digits.len() != wp.len() + 1
            || &w.digits[..wp.len()] != wp
            || *w.digits.last().unwrap() != d
            || v.digits.len() != vp.len() + 1
            || &v.digits[..vp.len()] != vp
            || *v.digits.last().unwrap() != d
        {
            return None;
        }
    }
    let arity = w0.arity();
    Some((
        Prefix { arity, digits: wp.to_vec() },
        Prefix { arity, digits: vp.to_vec() },
    ))
}

impl VElement {
    pub fn identity(n: u32) -> Result<Self, CantorError> {
        let root = Prefix::empty(n)?;
        Ok(VElement { arity: n, pairs: vec![(root.clone(), root)] })
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    /// Pairs `(domain, range)` sorted by domain prefix.
    pub fn pairs(&self) -> &[(Prefix, Prefix)] {
        &self.pairs
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.len() == 1
    }

    /// Composition `self . other`: `other` acts first.
    pub fn compose(&self, other: &VElement) -> Result<VElement, CantorError> {
        if self.arity != other.arity {
            return Err(CantorError::MixedArity { expected: self.arity, found: other.arity });
        }
        let mut out = Vec::new();
        for (w_h, v_h) in &other.pairs {
            // Domains of `self` whose cones meet the cone of v_h: either a
            // contiguous run of extensions of v_h, or a single prefix of v_h.
            let lo = self.pairs.partition_point(|(w, _)| w < v_h);
            let mut run = false;
            for (w_g, v_g) in self.pairs[lo..].iter().take_while(|(w, _)| v_h.is_prefix_of(w)) {
                run = true;
                out.push((w_h.concat(&w_g.digits[v_h.len()..]), v_g.clone()));
            }
            if !run {
                let (w_g, v_g) = &self.pairs[lo - 1];
                debug_assert!(w_g.is_prefix_of(v_h));
                out.push((w_h.clone(), v_g.concat(&v_h.digits[w_g.len()..])));
            }
        }
        make_element(self.arity, out)
    }

    pub fn invert(&self) -> VElement {
        let swapped = self.pairs.iter().map(|(w, v)| (v.clone(), w.clone())).collect();
        make_element(self.arity, swapped).expect("inverse of a valid element is valid")
    }

    /// Applies the element to a point of the Cantor set.
    pub fn apply_point(&self, kappa: &CantorPoint) -> Result<CantorPoint, CantorError> {
        if self.arity != kappa.arity() {
            return Err(CantorError::MixedArity { expected: self.arity, found: kappa.arity() });
        }
        let (w, v) = self
            .pairs
            .iter()
            .find(|(w, _)| kappa.starts_with(w))
            .expect("a complete antichain matches every point");
        Ok(kappa.strip(w.len()).prepend(v))
    }

    /// Index map of the sorted domain antichain into the sorted range
    /// antichain: identity for `F_n`, a nontrivial rotation for `T_n \ F_n`.
    pub fn classify(&self) -> MembershipClass {
        let k = self.pairs.len();
        let mut sorted_ranges: Vec<&Prefix> = self.pairs.iter().map(|(_, v)| v).collect();
        sorted_ranges.sort();
        let perm: Vec<usize> = self
            .pairs
            .iter()
            .map(|(_, v)| sorted_ranges.binary_search(&v).expect("range prefix is present"))
            .collect();
        if perm.iter().enumerate().all(|(i, &p)| p == i) {
            return MembershipClass::InF;
        }
        let c = perm[0];
        if perm.iter().enumerate().all(|(i, &p)| p == (i + c) % k) {
            MembershipClass::InTNotF
        } else {
            MembershipClass::InVNotT
        }
    }

    /// A pair `(w, v)` with one prefix a proper extension of the other
    /// certifies infinite order: writing the longer side as the shorter
    /// side followed by `s`, the k-th power still moves the point
    /// `v s s s...`, so no power is the identity.
    fn has_nested_pair(&self) -> bool {
        self.pairs
            .iter()
            .any(|(w, v)| w != v && (w.is_prefix_of(v) || v.is_prefix_of(w)))
    }

    /// Smallest `k >= 1` with `self^k = 1`, or `Exceeded` past the bound.
    pub fn order_of(&self, bound: u64) -> Order {
        let mut power = self.clone();
        for k in 1..=bound {
            if power.is_identity() {
                return Order::Finite(k);
            }
            if power.has_nested_pair() {
                return Order::Exceeded;
            }
            power = self.compose(&power).expect("same arity");
        }
        Order::Exceeded
    }

    /// Points of the circle where the right-continuous interval model of the
    /// element jumps. Empty exactly when the element lies in `T_n`.
    pub fn discontinuity_points(&self) -> Vec<CirclePoint> {
        let k = self.pairs.len();
        let starts: Vec<NRational> = self.pairs.iter().map(|(w, _)| w.interval_start()).collect();
        let mut out = Vec::new();
        for i in 0..k {
            let prev = &self.pairs[(i + k - 1) % k];
            let left_limit = CirclePoint::new(prev.1.interval_start() + prev.1.interval_length());
            let right_limit = CirclePoint::new(self.pairs[i].1.interval_start());
            if left_limit != right_limit {
                out.push(CirclePoint::new(starts[i].clone()));
            }
        }
        out
    }
}

impl fmt::Debug for VElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V{}{{", self.arity)?;
        for (i, (w, v)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{w}->{v}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct RawElement {
    n: u32,
    pairs: Vec<(String, String)>,
}

impl Serialize for VElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let raw = RawElement {
            n: self.arity,
            pairs: self
                .pairs
                .iter()
                .map(|(w, v)| (w.to_string(), v.to_string()))
                .collect(),
        };
        raw.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawElement::deserialize(deserializer)?;
        let mut pairs = Vec::with_capacity(raw.pairs.len());
        for (w, v) in &raw.pairs {
            let w = Prefix::parse(raw.n, w).map_err(D::Error::custom)?;
            let v = Prefix::parse(raw.n, v).map_err(D::Error::custom)?;
            pairs.push((w, v));
        }
        make_element(raw.n, pairs).map_err(D::Error::custom)
    }
}
