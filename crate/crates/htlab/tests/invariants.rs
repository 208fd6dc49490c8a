//! Randomized and exhaustive property checks that tie the layers
//! together: canonical forms, group laws, the circle model, fixed-point
//! classification, and word evaluation.

mod common;

use common::*;
use htlab::cantor::{make_element, CantorPoint, MembershipClass, Prefix};
use htlab::circle::{from_circle_map, to_circle_map, FixedPointKind, PLCircleMap};
use htlab::freecert::{attracting_census, enumerate_reduced, evaluate_word, Word};
use htlab::numerics::{circle_distance, nrat, CirclePoint};
use htlab::pingpong::{build_system, verify_pingpong, Letter};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const ARITIES: [u32; 3] = [2, 3, 5];

#[test]
fn canonical_form_survives_block_expansion() {
    let mut rng = rng(0x5eed_0001);
    for _ in 0..500 {
        let n = *ARITIES.choose(&mut rng).unwrap();
        let g = random_v_element(&mut rng, n, 4);
        let mut pairs: Vec<(Prefix, Prefix)> = g.pairs().to_vec();
        let i = rng.gen_range(0..pairs.len());
        let (w, v) = pairs.swap_remove(i);
        for d in 1..=n {
            pairs.push((w.concat(&[d]), v.concat(&[d])));
        }
        let expanded = make_element(n, pairs).unwrap();
        assert_eq!(expanded, g);
    }
}

#[test]
fn group_laws_hold_on_canonical_forms() {
    let mut rng = rng(0x5eed_0002);
    for _ in 0..200 {
        let n = *ARITIES.choose(&mut rng).unwrap();
        let g = random_v_element(&mut rng, n, 3);
        let h = random_v_element(&mut rng, n, 3);
        let k = random_v_element(&mut rng, n, 3);
        let left = g.compose(&h).unwrap().compose(&k).unwrap();
        let right = g.compose(&h.compose(&k).unwrap()).unwrap();
        assert_eq!(left, right);
        assert!(g.compose(&g.invert()).unwrap().is_identity());
        assert!(g.invert().compose(&g).unwrap().is_identity());
    }
}

#[test]
fn point_evaluation_is_a_homomorphism() {
    let mut rng = rng(0x5eed_0003);
    for _ in 0..500 {
        let n = *ARITIES.choose(&mut rng).unwrap();
        let g = random_v_element(&mut rng, n, 3);
        let h = random_v_element(&mut rng, n, 3);
        let kappa = random_cantor_point(&mut rng, n);
        let combined = g.compose(&h).unwrap().apply_point(&kappa).unwrap();
        let stepwise = g
            .apply_point(&h.apply_point(&kappa).unwrap())
            .unwrap();
        assert_eq!(combined, stepwise);
    }
}

#[test]
fn membership_class_is_multiplicative() {
    let mut rng = rng(0x5eed_0004);
    for _ in 0..200 {
        let n = *ARITIES.choose(&mut rng).unwrap();
        let f1 = random_f_element(&mut rng, n, 3);
        let f2 = random_f_element(&mut rng, n, 3);
        assert_eq!(f1.compose(&f2).unwrap().classify(), MembershipClass::InF);
        let t1 = random_t_element(&mut rng, n, 3);
        let t2 = random_t_element(&mut rng, n, 3);
        assert_ne!(
            t1.compose(&t2).unwrap().classify(),
            MembershipClass::InVNotT
        );
    }
}

#[test]
fn discontinuities_detect_exactly_the_noncontinuous_elements() {
    let mut rng = rng(0x5eed_0005);
    for _ in 0..200 {
        let n = *ARITIES.choose(&mut rng).unwrap();
        let g = random_v_element(&mut rng, n, 4);
        let points = g.discontinuity_points();
        assert_eq!(
            points.is_empty(),
            g.classify() != MembershipClass::InVNotT,
            "{g:?}"
        );
        for p in &points {
            assert!(p.value().is_n_adic(n));
        }
        for pair in points.windows(2) {
            assert!(pair[0] < pair[1]);
        }
    }
}

#[test]
fn circle_conversion_round_trips() {
    let mut rng = rng(0x5eed_0006);
    for _ in 0..300 {
        let n = *ARITIES.choose(&mut rng).unwrap();
        let g = random_t_element(&mut rng, n, 4);
        let m = to_circle_map(&g).unwrap();
        assert_eq!(from_circle_map(&m, n).unwrap(), g);
    }
}

#[test]
fn circle_evaluation_matches_the_cantor_action() {
    let mut rng = rng(0x5eed_0007);
    for _ in 0..500 {
        let n = *ARITIES.choose(&mut rng).unwrap();
        let g = random_t_element(&mut rng, n, 3);
        let m = to_circle_map(&g).unwrap();
        let x = random_n_adic(&mut rng, n);
        let kappa = CantorPoint::from_circle(&x, n).unwrap();
        assert_eq!(
            m.evaluate(&x),
            g.apply_point(&kappa).unwrap().circle_value()
        );
    }
}

#[test]
fn to_circle_map_intertwines_composition() {
    let mut rng = rng(0x5eed_0008);
    for _ in 0..100 {
        let n = *ARITIES.choose(&mut rng).unwrap();
        let g = random_t_element(&mut rng, n, 3);
        let h = random_t_element(&mut rng, n, 3);
        let composed = to_circle_map(&g.compose(&h).unwrap()).unwrap();
        let chained = to_circle_map(&g).unwrap().compose(&to_circle_map(&h).unwrap());
        assert_eq!(composed, chained);
    }
}

fn swap_kind(kind: FixedPointKind) -> FixedPointKind {
    match kind {
        FixedPointKind::Attracting => FixedPointKind::Repelling,
        FixedPointKind::Repelling => FixedPointKind::Attracting,
        other => other,
    }
}

#[test]
fn inversion_swaps_attracting_and_repelling() {
    let mut rng = rng(0x5eed_0009);
    let mut maps: Vec<PLCircleMap> = Vec::new();
    for n in [2, 3] {
        let sys = build_system(n).unwrap();
        maps.extend(Letter::ALL.iter().map(|&c| sys.map_for(c)));
    }
    for _ in 0..100 {
        let n = *ARITIES.choose(&mut rng).unwrap();
        let g = random_t_element(&mut rng, n, 4);
        maps.push(to_circle_map(&g).unwrap());
    }
    for m in &maps {
        let forward = m.fixed_points();
        let backward = m.invert().fixed_points();
        let expect: Vec<(CirclePoint, FixedPointKind)> = forward
            .points
            .iter()
            .map(|p| (p.location.clone(), swap_kind(p.kind)))
            .collect();
        let got: Vec<(CirclePoint, FixedPointKind)> = backward
            .points
            .iter()
            .map(|p| (p.location.clone(), p.kind))
            .collect();
        assert_eq!(got, expect);
        assert_eq!(backward.fixed_intervals, forward.fixed_intervals);
    }
}

#[test]
fn attracting_points_attract_nearby_orbits() {
    let step = nrat(1, 1024).unwrap();
    for n in [2u32, 3] {
        let sys = build_system(n).unwrap();
        for &letter in &Letter::ALL {
            let m = sys.map_for(letter);
            for info in m.fixed_points().points {
                if info.kind != FixedPointKind::Attracting {
                    continue;
                }
                for offset in [step.clone(), -step.clone()] {
                    let mut x = info.location.translate(&offset);
                    let mut dist = circle_distance(&x, &info.location);
                    for _ in 0..60 {
                        x = m.evaluate(&x);
                        let next = circle_distance(&x, &info.location);
                        assert!(next < dist, "orbit failed to approach {:?}", info.location);
                        dist = next;
                    }
                }
            }
        }
    }
}

#[test]
fn certified_contractions_shrink_random_pairs() {
    let mut rng = rng(0x5eed_000a);
    for n in [2u32, 3] {
        let sys = build_system(n).unwrap();
        let cert = verify_pingpong(&sys);
        for check in &cert.contractions {
            assert!(check.certificate.is_certified());
            let m = sys.map_for(check.letter);
            let arc = &check.certificate.arc;
            let mut checked = 0;
            while checked < 200 {
                let s = nrat(rng.gen_range(0..=10_000), 10_000).unwrap();
                let t = nrat(rng.gen_range(0..=10_000), 10_000).unwrap();
                let x = arc.start().translate(&(arc.length().clone() * s));
                let y = arc.start().translate(&(arc.length().clone() * t));
                if x == y {
                    continue;
                }
                assert!(
                    circle_distance(&m.evaluate(&x), &m.evaluate(&y))
                        < circle_distance(&x, &y)
                );
                checked += 1;
            }
        }
    }
}

fn random_word(rng: &mut ChaCha8Rng, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    for _ in 0..len {
        let choices: Vec<Letter> = Letter::ALL
            .into_iter()
            .filter(|&l| letters.last().map_or(true, |&p| l != p.inverse()))
            .collect();
        letters.push(*choices.choose(rng).unwrap());
    }
    Word::new(letters).unwrap()
}

#[test]
fn fixed_point_reports_are_conjugation_equivariant() {
    let mut rng = rng(0x5eed_000b);
    let sys = build_system(2).unwrap();
    for _ in 0..100 {
        let w_len = rng.gen_range(1..=4);
        let u_len = rng.gen_range(1..=3);
        let w = random_word(&mut rng, w_len);
        let u = random_word(&mut rng, u_len);
        let (g, _) = evaluate_word(&sys, &w);
        let (u_map, _) = evaluate_word(&sys, &u);
        let conjugate = u_map.compose(&g).compose(&u_map.invert());
        let original = g.fixed_points();
        let transported: Vec<_> = {
            let mut v: Vec<_> = original
                .points
                .iter()
                .map(|p| {
                    (
                        u_map.evaluate(&p.location),
                        p.kind,
                        p.left_slope.clone(),
                        p.right_slope.clone(),
                    )
                })
                .collect();
            v.sort_by(|a, b| a.0.cmp(&b.0));
            v
        };
        let found: Vec<_> = conjugate
            .fixed_points()
            .points
            .iter()
            .map(|p| {
                (
                    p.location.clone(),
                    p.kind,
                    p.left_slope.clone(),
                    p.right_slope.clone(),
                )
            })
            .collect();
        assert_eq!(found, transported);
        assert!(original.fixed_intervals.is_empty());
        assert!(conjugate.fixed_points().fixed_intervals.is_empty());
    }
}

#[test]
fn census_respects_inversion() {
    let sys = build_system(2).unwrap();
    let entries = attracting_census(&sys, 4).unwrap();
    let locate = |word: &Word, kind: FixedPointKind| -> CirclePoint {
        let entry = entries.iter().find(|e| &e.word == word).unwrap();
        let points = entry.report.points_of_kind(kind);
        assert_eq!(points.len(), 1);
        points[0].location.clone()
    };
    for entry in &entries {
        let inverse = entry.word.inverse();
        assert_eq!(
            locate(&entry.word, FixedPointKind::Attracting),
            locate(&inverse, FixedPointKind::Repelling)
        );
    }
}

#[test]
fn word_evaluations_agree_across_representations() {
    let sys2 = build_system(2).unwrap();
    for w in enumerate_reduced(6) {
        evaluate_word(&sys2, &w);
    }
    let sys3 = build_system(3).unwrap();
    for w in enumerate_reduced(4) {
        evaluate_word(&sys3, &w);
    }
}
