//! Bounded searches over reduced words in the ping-pong generators.
//!
//! Words over `a, A, b, B` (capitals are inverses, rightmost letter acts
//! first) are enumerated in length-then-lexicographic order and evaluated
//! both as circle maps and as prefix-replacement elements. On top of the
//! enumeration sit the desk-checkable claims: no word is the identity
//! ([`free_certificate`]), every word has exactly one attracting and one
//! repelling fixed point in the predicted arcs ([`attracting_census`]),
//! and point stabilizers and centralizers look cyclic or trivial on the
//! sampled range ([`stabilizer_probe`], [`centralizer_probe`]).

use crate::cantor::{MembershipClass, VElement};
use crate::circle::{to_circle_map, FixedPointKind, FixedPointReport, PLCircleMap};
use crate::numerics::CirclePoint;
use crate::pingpong::{verify_pingpong, Letter, PingPongSystem};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreecertError {
    #[error("the ping-pong certificate does not hold for this system")]
    PingPongNotVerified,
    #[error("element arity {found} does not match the system arity {expected}")]
    ArityMismatch { expected: u32, found: u32 },
    #[error("element is continuous (it lies in T_n), expected one in V_n \\ T_n")]
    NotInVMinusT,
    #[error("word {0:?} is not freely reduced")]
    NotReduced(String),
    #[error("words must be nonempty")]
    EmptyWord,
    #[error("unknown letter {0:?}, expected one of a, A, b, B")]
    BadLetter(char),
}

/// A nonempty freely reduced word in the generators, e.g. `"abA"` for
/// `a b a^{-1}` with the rightmost letter applied first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self, FreecertError> {
        if letters.is_empty() {
            return Err(FreecertError::EmptyWord);
        }
        if letters.windows(2).any(|w| w[1] == w[0].inverse()) {
            let text: String = letters.iter().map(|l| l.symbol()).collect();
            return Err(FreecertError::NotReduced(text));
        }
        Ok(Word { letters })
    }

    pub fn parse(s: &str) -> Result<Self, FreecertError> {
        let letters = s
            .chars()
            .map(|c| Letter::from_symbol(c).ok_or(FreecertError::BadLetter(c)))
            .collect::<Result<Vec<_>, _>>()?;
        Word::new(letters)
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

    pub fn first(&self) -> Letter {
        self.letters[0]
    }

    pub fn last(&self) -> Letter {
        *self.letters.last().unwrap()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.len() == 1 || self.first() != self.last().inverse()
    }

    /// Splits `self = u g u^{-1}` with `g` cyclically reduced, returning
    /// the conjugator letters `u` and the core `g`.
    pub fn cyclic_decomposition(&self) -> (Vec<Letter>, Word) {
        let (lo, hi) = core_range(&self.letters);
        let core = Word::new(self.letters[lo..hi].to_vec())
            .expect("the core of a reduced word is nonempty and reduced");
        (self.letters[..lo].to_vec(), core)
    }

    /// Free reduction of the concatenation; `None` if everything cancels.
    pub fn concat_reduced(&self, other: &Word) -> Option<Word> {
        let mut stack = self.letters.clone();
        for &l in &other.letters {
            if stack.last() == Some(&l.inverse()) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        if stack.is_empty() {
            None
        } else {
            Some(Word { letters: stack })
        }
    }

    /// The freely reduced power `self^k` for `k != 0`.
    pub fn power(&self, k: i64) -> Word {
        assert!(k != 0, "the zeroth power is the empty word");
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = base.clone();
        for _ in 1..k.unsigned_abs() {
            acc = acc
                .concat_reduced(&base)
                .expect("powers of a nonempty reduced word never cancel away");
        }
        acc
    }
}

fn core_range(letters: &[Letter]) -> (usize, usize) {
    let mut lo = 0;
    let mut hi = letters.len();
    while hi - lo >= 2 && letters[hi - 1] == letters[lo].inverse() {
        lo += 1;
        hi -= 1;
    }
    (lo, hi)
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl std::fmt::Debug for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl std::str::FromStr for Word {
    type Err = FreecertError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Word::parse(&s).map_err(D::Error::custom)
    }
}

/// All reduced words of length `1..=max_len`, in length-then-lex order
/// with the letter order `a < A < b < B`.
pub fn enumerate_reduced(max_len: usize) -> impl Iterator<Item = Word> {
    ReducedWords { max_len, state: Vec::new() }
}

struct ReducedWords {
    max_len: usize,
    state: Vec<Letter>,
}

fn minimal_after(prev: Option<Letter>) -> Letter {
    match prev {
        None => Letter::A,
        Some(p) => Letter::ALL
            .into_iter()
            .find(|l| *l != p.inverse())
            .unwrap(),
    }
}

fn next_after(prev: Option<Letter>, cur: Letter) -> Option<Letter> {
    Letter::ALL
        .into_iter()
        .find(|l| *l > cur && prev.is_none_or(|p| *l != p.inverse()))
}

impl Iterator for ReducedWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.state.is_empty() {
            if self.max_len == 0 {
                return None;
            }
            self.state.push(Letter::A);
            return Some(Word { letters: self.state.clone() });
        }
        let mut i = self.state.len();
        loop {
            if i == 0 {
                if self.state.len() == self.max_len {
                    return None;
                }
                let target = self.state.len() + 1;
                self.state.clear();
                for _ in 0..target {
                    let next = minimal_after(self.state.last().copied());
                    self.state.push(next);
                }
                return Some(Word { letters: self.state.clone() });
            }
            i -= 1;
            let prev = i.checked_sub(1).map(|j| self.state[j]);
            if let Some(next) = next_after(prev, self.state[i]) {
                self.state[i] = next;
                for j in i + 1..self.state.len() {
                    self.state[j] = minimal_after(Some(self.state[j - 1]));
                }
                return Some(Word { letters: self.state.clone() });
            }
        }
    }
}

/// Number of reduced words of length `1..=max_len`.
pub fn reduced_word_count(max_len: usize) -> u64 {
    (0..max_len).map(|l| 4 * 3u64.pow(l as u32)).sum()
}

fn thread_budget() -> usize {
    std::env::var("HTLAB_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .map(|k| k.clamp(1, 4))
        .unwrap_or(4)
}

/// Depth-first scan over all reduced words up to `max_len`, carrying the
/// circle map and element of each node so that extending a word by one
/// letter costs a single composition in each representation. Work is
/// partitioned by first letter across up to `workers` threads; results
/// come back in length-then-lex order regardless of the partition.
fn scan_words<T, F>(sys: &PingPongSystem, max_len: usize, workers: usize, visit: &F) -> Vec<(Word, T)>
where
    T: Send,
    F: Fn(&[Letter], &PLCircleMap, &VElement) -> Option<T> + Sync,
{
    let maps: Vec<PLCircleMap> = Letter::ALL.iter().map(|&c| sys.map_for(c)).collect();
    let elements: Vec<VElement> = Letter::ALL.iter().map(|&c| sys.element_for(c)).collect();
    let run_root = |root: usize| {
        let mut letters = vec![Letter::ALL[root]];
        let mut out = Vec::new();
        dfs(
            &mut letters,
            &maps[root],
            &elements[root],
            &maps,
            &elements,
            max_len,
            visit,
            &mut out,
        );
        out
    };
    let mut found: Vec<(Word, T)> = if max_len == 0 {
        Vec::new()
    } else if workers <= 1 {
        (0..4).flat_map(run_root).collect()
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers.min(4))
                .map(|w| {
                    let run_root = &run_root;
                    scope.spawn(move || {
                        (0..4)
                            .filter(|root| root % workers.min(4) == w)
                            .flat_map(run_root)
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("word scan worker panicked"))
                .collect()
        })
    };
    found.sort_by(|a, b| a.0.cmp(&b.0));
    found
}

#[allow(clippy::too_many_arguments)]
fn dfs<T, F>(
    letters: &mut Vec<Letter>,
    map: &PLCircleMap,
    element: &VElement,
    maps: &[PLCircleMap],
    elements: &[VElement],
    max_len: usize,
    visit: &F,
    out: &mut Vec<(Word, T)>,
) where
    F: Fn(&[Letter], &PLCircleMap, &VElement) -> Option<T>,
{
    if let Some(t) = visit(letters, map, element) {
        out.push((Word { letters: letters.clone() }, t));
    }
    if letters.len() == max_len {
        return;
    }
    let banned = letters.last().unwrap().inverse();
    for (i, &l) in Letter::ALL.iter().enumerate() {
        if l == banned {
            continue;
        }
        letters.push(l);
        let child_map = map.compose(&maps[i]);
        let child_element = element.compose(&elements[i]).expect("generators share arity");
        dfs(letters, &child_map, &child_element, maps, elements, max_len, visit, out);
        letters.pop();
    }
}

/// Right-to-left composition of the word in both representations. The two
/// are checked against each other before returning.
pub fn evaluate_word(sys: &PingPongSystem, w: &Word) -> (PLCircleMap, VElement) {
    let mut map: Option<PLCircleMap> = None;
    let mut element: Option<VElement> = None;
    for &l in w.letters() {
        let m = sys.map_for(l);
        let e = sys.element_for(l);
        map = Some(match map {
            None => m,
            Some(acc) => acc.compose(&m),
        });
        element = Some(match element {
            None => e,
            Some(acc) => acc.compose(&e).expect("generators share arity"),
        });
    }
    let (map, element) = (map.unwrap(), element.unwrap());
    assert_eq!(
        to_circle_map(&element).expect("words in the generators act on the circle"),
        map,
        "circle and prefix-replacement evaluations diverged for {w}"
    );
    (map, element)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FreeCheckFailure {
    /// The word canonicalizes to the identity in both representations.
    Identity,
    /// `g(P(e))` is not contained in `P(d)`.
    ImageEscapes { e: Letter, d: Letter },
    /// `P(d)` and `P(e)` are not disjoint.
    ArcsMeet { e: Letter, d: Letter },
}

#[derive(Clone, Debug, Serialize)]
pub struct FreeCertViolation {
    pub word: Word,
    pub failure: FreeCheckFailure,
}

#[derive(Clone, Debug, Serialize)]
pub struct FreeCertReport {
    pub n: u32,
    pub max_length: usize,
    pub words_checked: u64,
    pub violations: Vec<FreeCertViolation>,
}

impl FreeCertReport {
    pub fn all_free(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every reduced word `g = d...c` up to `max_len`: `g` is not the
/// identity, and with `e` the first letter outside `{c^{-1}, d}`, the arc
/// `P(e)` is disjoint from `P(d)` and `g(P(e))` lands inside `P(d)`.
pub fn free_certificate(
    sys: &PingPongSystem,
    max_len: usize,
) -> Result<FreeCertReport, FreecertError> {
    if !verify_pingpong(sys).holds() {
        return Err(FreecertError::PingPongNotVerified);
    }
    Ok(free_certificate_unchecked(sys, max_len))
}

/// The same scan without validating the table first; negative controls
/// use this to watch a deliberately broken system fail.
pub fn free_certificate_unchecked(sys: &PingPongSystem, max_len: usize) -> FreeCertReport {
    let found = scan_words(sys, max_len, thread_budget(), &|letters, map, element| {
        let identity = map.is_identity();
        assert_eq!(identity, element.is_identity(), "representations diverged");
        if identity {
            return Some(FreeCheckFailure::Identity);
        }
        let d = letters[0];
        let c = *letters.last().unwrap();
        let e = Letter::ALL
            .into_iter()
            .find(|&x| x != c.inverse() && x != d)
            .expect("two of four letters are excluded at most");
        if !sys.arc_for(d).is_disjoint_from(sys.arc_for(e)) {
            return Some(FreeCheckFailure::ArcsMeet { e, d });
        }
        let image = map.image_of_arc(sys.arc_for(e));
        if !sys.arc_for(d).contains_arc(&image, false) {
            return Some(FreeCheckFailure::ImageEscapes { e, d });
        }
        None
    });
    FreeCertReport {
        n: sys.n,
        max_length: max_len,
        words_checked: reduced_word_count(max_len),
        violations: found
            .into_iter()
            .map(|(word, failure)| FreeCertViolation { word, failure })
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WordCensusEntry {
    pub word: Word,
    pub is_identity: bool,
    pub report: FixedPointReport,
    pub localization_ok: bool,
}

impl WordCensusEntry {
    /// Exactly one attracting and one repelling point, nothing else.
    pub fn structure_ok(&self) -> bool {
        !self.is_identity
            && self.report.fixed_intervals.is_empty()
            && self.report.points.len() == 2
            && self.report.count_kind(FixedPointKind::Attracting) == 1
            && self.report.count_kind(FixedPointKind::Repelling) == 1
    }
}

/// Fixed-point inventory of every reduced word up to `max_len`. The
/// localization check places the attracting point of the cyclically
/// reduced core `g = d...c` in `P(d)` and its repelling point in
/// `P(c^{-1})`; for words that are not cyclically reduced it is applied to
/// the core, while the structure counts refer to the word itself.
pub fn attracting_census(
    sys: &PingPongSystem,
    max_len: usize,
) -> Result<Vec<WordCensusEntry>, FreecertError> {
    if !verify_pingpong(sys).holds() {
        return Err(FreecertError::PingPongNotVerified);
    }
    let maps: Vec<PLCircleMap> = Letter::ALL.iter().map(|&c| sys.map_for(c)).collect();
    let found = scan_words(sys, max_len, thread_budget(), &|letters, map, element| {
        let report = map.fixed_points();
        let (lo, hi) = core_range(letters);
        let core_report = if lo == 0 {
            report.clone()
        } else {
            let mut core = maps[Letter::ALL.iter().position(|&l| l == letters[lo]).unwrap()].clone();
            for &l in &letters[lo + 1..hi] {
                core = core.compose(&maps[Letter::ALL.iter().position(|&x| x == l).unwrap()]);
            }
            core.fixed_points()
        };
        let d = letters[lo];
        let c = letters[hi - 1];
        let attracting = core_report.points_of_kind(FixedPointKind::Attracting);
        let repelling = core_report.points_of_kind(FixedPointKind::Repelling);
        let localization_ok = attracting.len() == 1
            && repelling.len() == 1
            && sys.arc_for(d).contains_point(&attracting[0].location)
            && sys.arc_for(c.inverse()).contains_point(&repelling[0].location);
        Some((element.is_identity(), report, localization_ok))
    });
    Ok(found
        .into_iter()
        .map(|(word, (is_identity, report, localization_ok))| WordCensusEntry {
            word,
            is_identity,
            report,
            localization_ok,
        })
        .collect())
}

/// Verdict for a bounded sample of a subgroup: empty, exactly the powers
/// of one shortest word within the bound, or something larger.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SampleStructure {
    Trivial,
    CyclicOnSample,
    NotCyclic,
}

fn classify_sample(words: &[Word], max_len: usize) -> SampleStructure {
    if words.is_empty() {
        return SampleStructure::Trivial;
    }
    let shortest = &words[0];
    let mut powers: Vec<Word> = Vec::new();
    for sign in [1i64, -1] {
        let mut k = sign;
        loop {
            let p = shortest.power(k);
            if p.len() > max_len {
                break;
            }
            powers.push(p);
            k += sign;
        }
    }
    powers.sort();
    if powers == words {
        SampleStructure::CyclicOnSample
    } else {
        SampleStructure::NotCyclic
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizerReport {
    pub point: CirclePoint,
    pub max_length: usize,
    pub fixing_words: Vec<Word>,
    pub structure: SampleStructure,
}

/// Every reduced word up to `max_len` whose circle map fixes `p`.
pub fn stabilizer_probe(sys: &PingPongSystem, p: &CirclePoint, max_len: usize) -> StabilizerReport {
    let found = scan_words(sys, max_len, thread_budget(), &|_, map, _| {
        (map.evaluate(p) == *p).then_some(())
    });
    let fixing_words: Vec<Word> = found.into_iter().map(|(w, ())| w).collect();
    let structure = classify_sample(&fixing_words, max_len);
    StabilizerReport {
        point: p.clone(),
        max_length: max_len,
        fixing_words,
        structure,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralizerProbeResult {
    pub alpha: VElement,
    pub max_length: usize,
    pub commuting_words: Vec<Word>,
    pub structure: SampleStructure,
}

/// Every reduced word up to `max_len` whose element commutes with `alpha`
/// (exact canonical-form comparison of the two compositions).
pub fn centralizer_probe(
    sys: &PingPongSystem,
    alpha: &VElement,
    max_len: usize,
) -> Result<CentralizerProbeResult, FreecertError> {
    if alpha.arity() != sys.n {
        return Err(FreecertError::ArityMismatch { expected: sys.n, found: alpha.arity() });
    }
    let found = scan_words(sys, max_len, thread_budget(), &|_, _, element| {
        let left = element.compose(alpha).expect("arities match");
        let right = alpha.compose(element).expect("arities match");
        (left == right).then_some(())
    });
    let commuting_words: Vec<Word> = found.into_iter().map(|(w, ())| w).collect();
    let structure = classify_sample(&commuting_words, max_len);
    Ok(CentralizerProbeResult {
        alpha: alpha.clone(),
        max_length: max_len,
        commuting_words,
        structure,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscontinuityStabilizerReport {
    pub alpha: VElement,
    pub discontinuities: Vec<CirclePoint>,
    pub commuting_words: Vec<Word>,
    /// Commuting words whose map fails to permute the discontinuity set.
    pub violations: Vec<Word>,
}

impl DiscontinuityStabilizerReport {
    pub fn all_permute(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For a genuinely discontinuous `alpha`, checks that the circle map of
/// every commuting word permutes the discontinuity set of `alpha`.
pub fn discontinuity_stabilizer_check(
    sys: &PingPongSystem,
    alpha: &VElement,
    max_len: usize,
) -> Result<DiscontinuityStabilizerReport, FreecertError> {
    if alpha.arity() != sys.n {
        return Err(FreecertError::ArityMismatch { expected: sys.n, found: alpha.arity() });
    }
    if alpha.classify() != MembershipClass::InVNotT {
        return Err(FreecertError::NotInVMinusT);
    }
    let points = alpha.discontinuity_points();
    let found = scan_words(sys, max_len, thread_budget(), &|_, map, element| {
        let left = element.compose(alpha).expect("arities match");
        let right = alpha.compose(element).expect("arities match");
        if left != right {
            return None;
        }
        let mut image: Vec<CirclePoint> = points.iter().map(|p| map.evaluate(p)).collect();
        image.sort();
        Some(image == points)
    });
    let mut commuting_words = Vec::new();
    let mut violations = Vec::new();
    for (word, permutes) in found {
        if !permutes {
            violations.push(word.clone());
        }
        commuting_words.push(word);
    }
    Ok(DiscontinuityStabilizerReport {
        alpha: alpha.clone(),
        discontinuities: points,
        commuting_words,
        violations,
    })
}
