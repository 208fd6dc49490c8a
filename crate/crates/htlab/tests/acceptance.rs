//! Acceptance gate: one test per advertised claim, each printing a
//! one-line verdict (visible with `--nocapture`) with the measured
//! runtime. Every comparison is exact rational arithmetic.

mod common;

use std::time::{Duration, Instant};

use common::*;
use htlab::cantor::{make_element, CantorPoint, MembershipClass, Order, Prefix, VElement};
use htlab::circle::{from_circle_map, to_circle_map, Arc};
use htlab::freecert::{
    attracting_census, centralizer_probe, discontinuity_stabilizer_check, free_certificate,
    free_certificate_unchecked, stabilizer_probe, FreeCheckFailure, FreecertError,
    SampleStructure, Word,
};
use htlab::numerics::{nrat, CirclePoint, NRational};
use htlab::pingpong::{build_system, verify_pingpong, Letter};
use rand::seq::SliceRandom;

fn q(p: i64, d: i64) -> NRational {
    nrat(p, d).unwrap()
}

fn cp(p: i64, d: i64) -> CirclePoint {
    CirclePoint::new(q(p, d))
}

fn arc(p: i64, d: i64, len_p: i64, len_d: i64) -> Arc {
    Arc::new(cp(p, d), q(len_p, len_d)).unwrap()
}

fn rotation_element(n: u32) -> VElement {
    let pairs = (1..=n)
        .map(|i| {
            (
                Prefix::new(n, vec![i]).unwrap(),
                Prefix::new(n, vec![i % n + 1]).unwrap(),
            )
        })
        .collect();
    make_element(n, pairs).unwrap()
}

fn sigma_element() -> VElement {
    let p = |s: &str| Prefix::parse(2, s).unwrap();
    make_element(
        2,
        vec![
            (p("11"), p("11")),
            (p("12"), p("21")),
            (p("21"), p("12")),
            (p("22"), p("22")),
        ],
    )
    .unwrap()
}

fn pass(criterion: u32, elapsed: Duration, detail: &str) {
    println!("PASS criterion {criterion}: {detail} [{elapsed:.2?}]");
}

#[test]
fn criterion_1_pingpong_certification() {
    let start = Instant::now();
    for n in 2..=10u32 {
        let tick = Instant::now();
        let sys = build_system(n).unwrap();
        let cert = verify_pingpong(&sys);
        assert!(cert.holds(), "certificate failed at n = {n}");
        assert_eq!(cert.attractor_checks.len(), 4);
        assert!(cert.attractor_checks.iter().all(|c| c.holds));
        assert_eq!(cert.disjointness.len(), 6);
        assert!(cert.disjointness.iter().all(|c| c.disjoint));
        assert_eq!(cert.inequalities.len(), 4);
        assert!(cert.inequalities.iter().all(|c| c.holds && c.lhs < c.rhs));
        assert_eq!(cert.containments.len(), 4);
        assert!(cert.containments.iter().all(|c| c.strictly_inside));
        assert_eq!(cert.contractions.len(), 4);
        assert!(cert.contractions.iter().all(|c| c.certificate.is_certified()));
        let elapsed = tick.elapsed();
        assert!(
            elapsed < Duration::from_secs(1),
            "n = {n} took {elapsed:?}, budget is 1 s"
        );
        if n == 2 {
            let contain_a = &cert.containments[0];
            assert_eq!(contain_a.letter, Letter::A);
            assert_eq!(contain_a.image, arc(57, 128, 7, 64));
            assert_eq!(contain_a.target, arc(7, 16, 1, 8));
            let second = &cert.inequalities[1];
            assert_eq!((second.lhs.clone(), second.rhs.clone()), (q(5, 16), q(7, 16)));
            let contraction_a = &cert.contractions[0].certificate;
            assert_eq!(contraction_a.max_slope, q(1, 8));
            assert_eq!(contraction_a.arc_length, q(7, 8));
            assert!(q(7, 64) < q(8, 64));
        }
    }
    pass(1, start.elapsed(), "ping-pong certificates pass for n = 2..=10");
}

#[test]
fn criterion_2_freeness_at_desk_scale() {
    let start = Instant::now();
    for n in [2u32, 3] {
        let sys = build_system(n).unwrap();
        let report = free_certificate(&sys, 10).unwrap();
        assert_eq!(report.words_checked, 118_096);
        assert!(
            report.all_free(),
            "violations at n = {n}: {:?}",
            report.violations
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(600), "took {elapsed:?}");
    pass(2, elapsed, "118096 reduced words of length <= 10 are free, n = 2 and 3");
}

#[test]
fn criterion_3_attracting_census() {
    let start = Instant::now();
    for n in [2u32, 3] {
        let sys = build_system(n).unwrap();
        let entries = attracting_census(&sys, 6).unwrap();
        assert_eq!(entries.len(), 1456);
        let mut cyclically_reduced = 0;
        for entry in &entries {
            assert!(
                entry.structure_ok(),
                "bad fixed-point structure for {} at n = {n}",
                entry.word
            );
            assert!(
                entry.localization_ok,
                "bad localization for {} at n = {n}",
                entry.word
            );
            if entry.word.is_cyclically_reduced() {
                cyclically_reduced += 1;
            }
        }
        assert!(cyclically_reduced > 0);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    pass(3, elapsed, "every word of length <= 6 has one attracting and one repelling point, localized");
}

#[test]
fn criterion_4_group_algebra_suite() {
    let start = Instant::now();
    let mut rng = rng(0xacce_0004);
    let arities = [2u32, 3, 5];
    for _ in 0..500 {
        let n = *arities.choose(&mut rng).unwrap();
        let g = random_v_element(&mut rng, n, 3);
        let h = random_v_element(&mut rng, n, 3);
        let k = random_v_element(&mut rng, n, 3);
        let left = g.compose(&h).unwrap().compose(&k).unwrap();
        let right = g.compose(&h.compose(&k).unwrap()).unwrap();
        assert_eq!(left, right);
        assert!(g.compose(&g.invert()).unwrap().is_identity());
        assert_eq!(make_element(n, g.pairs().to_vec()).unwrap(), g);
        let kappa = random_cantor_point(&mut rng, n);
        assert_eq!(
            g.compose(&h).unwrap().apply_point(&kappa).unwrap(),
            g.apply_point(&h.apply_point(&kappa).unwrap()).unwrap()
        );
        let t = random_t_element(&mut rng, n, 3);
        assert_eq!(from_circle_map(&to_circle_map(&t).unwrap(), n).unwrap(), t);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    pass(4, elapsed, "500 random cases: group laws, canonical forms, evaluation, conversion");
}

#[test]
fn criterion_5_stabilizer_of_zero() {
    let start = Instant::now();
    let sys = build_system(2).unwrap();
    let report = stabilizer_probe(&sys, &CirclePoint::zero(), 8);
    let expected: Vec<Word> = (1..=8)
        .flat_map(|len| {
            [
                Word::parse(&"a".repeat(len)).unwrap(),
                Word::parse(&"A".repeat(len)).unwrap(),
            ]
        })
        .collect();
    assert_eq!(report.fixing_words, expected);
    assert_eq!(report.structure, SampleStructure::CyclicOnSample);
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    pass(5, elapsed, "stabilizer of 0 at length <= 8 is exactly the powers of a");
}

#[test]
fn criterion_6_centralizer_probes() {
    let start = Instant::now();
    for n in [2u32, 3] {
        let sys = build_system(n).unwrap();
        let rho = rotation_element(n);
        let probe = centralizer_probe(&sys, &rho, 6).unwrap();
        assert!(probe.commuting_words.is_empty(), "n = {n}");
        assert_eq!(probe.structure, SampleStructure::Trivial);
        let probe = centralizer_probe(&sys, &sys.a_element, 6).unwrap();
        let expected: Vec<Word> = (1..=6)
            .flat_map(|len| {
                [
                    Word::parse(&"a".repeat(len)).unwrap(),
                    Word::parse(&"A".repeat(len)).unwrap(),
                ]
            })
            .collect();
        assert_eq!(probe.commuting_words, expected, "n = {n}");
        assert_eq!(probe.structure, SampleStructure::CyclicOnSample);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    pass(6, elapsed, "centralizer samples: rotation is trivial, a gives exactly its powers");
}

#[test]
fn criterion_7_discontinuity_stabilizer() {
    let start = Instant::now();
    let sys = build_system(2).unwrap();
    let sigma = sigma_element();
    let report = discontinuity_stabilizer_check(&sys, &sigma, 5).unwrap();
    assert_eq!(report.discontinuities, vec![cp(1, 4), cp(1, 2), cp(3, 4)]);
    assert!(report.discontinuities.iter().all(|p| p.value().is_n_adic(2)));
    assert!(report.all_permute());
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    pass(7, elapsed, "3 dyadic discontinuities; all commuting words of length <= 5 permute them");
}

#[test]
fn criterion_8_order_and_membership() {
    let start = Instant::now();
    for n in 2..=6u32 {
        assert_eq!(rotation_element(n).order_of(10), Order::Finite(n as u64));
    }
    assert_eq!(VElement::identity(2).unwrap().classify(), MembershipClass::InF);
    assert_eq!(rotation_element(2).classify(), MembershipClass::InTNotF);
    assert_eq!(sigma_element().classify(), MembershipClass::InVNotT);
    for n in [2u32, 3] {
        let sys = build_system(n).unwrap();
        assert_eq!(sys.a_element.order_of(500), Order::Exceeded);
        assert_eq!(sys.b_element.order_of(500), Order::Exceeded);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    pass(8, elapsed, "rotation orders, membership classes, infinite-order generators");
}

#[test]
fn criterion_9_negative_controls() {
    let start = Instant::now();

    let mut shifted = build_system(2).unwrap();
    shifted.arcs.a = Arc::new(
        shifted.arcs.a.start().translate(&q(1, 2)),
        shifted.arcs.a.length().clone(),
    )
    .unwrap();
    let cert = verify_pingpong(&shifted);
    assert!(!cert.holds());
    let named = cert
        .attractor_checks
        .iter()
        .find(|c| c.letter == Letter::A)
        .unwrap();
    assert!(named.unique_attracting);
    assert!(!named.inside_arc);
    assert!(!named.holds);

    let mut cancelled = build_system(2).unwrap();
    cancelled.b = cancelled.a.invert();
    cancelled.b_element = cancelled.a_element.invert();
    assert_eq!(
        free_certificate(&cancelled, 2).unwrap_err(),
        FreecertError::PingPongNotVerified
    );
    let report = free_certificate_unchecked(&cancelled, 2);
    assert!(report
        .violations
        .iter()
        .any(|v| v.word == Word::parse("ab").unwrap()
            && v.failure == FreeCheckFailure::Identity));

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    pass(9, elapsed, "corrupted systems fail with the offending check named");
}

#[test]
fn acceptance_smoke_for_cantor_round_trip_helpers() {
    // Guard for the helpers the suite itself leans on.
    let mut rng = rng(0xacce_0000);
    for _ in 0..50 {
        let kappa = random_cantor_point(&mut rng, 2);
        let x = kappa.circle_value();
        let back = CantorPoint::from_circle(&x, 2).unwrap();
        assert_eq!(back.circle_value(), x);
    }
}
