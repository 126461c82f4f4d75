//! One pass/fail line per acceptance criterion.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_traits::Zero;

use essentri_core::angles::{build_angle_system, enumerate_taut, solve_angle_lp, AngleMode, AngleVector, LpStatus};
use essentri_core::certify::{
    certify_essential, certify_strongly_essential, replay_group_certificates, CertifyOptions, Method,
};
use essentri_core::fixtures;
use essentri_core::format::parse_document;
use essentri_core::gaussian::rat;
use essentri_core::geom::{solve_shapes_newton, verify_shapes};
use essentri_core::isomorphism::are_isomorphic;
use essentri_core::moves::{extend_taut, pachner_2_3, pachner_3_2, pillow_0_2, taut_pillow_sites};
use essentri_core::pi1::{
    enumerate_cosets, homology, presentation_closed, spine_presentation, Answer, Budget, GroupContext, Question, Word,
};
use essentri_core::skeleton::{build_skeleton, Classification};

use common::{random_triangulation, same_cycle, M136_CYCLES};

fn a1() {
    let doc = parse_document(fixtures::M136).unwrap();
    let skel = build_skeleton(&doc.triangulation).unwrap();
    assert_eq!(skel.edge_count(), 7);
    assert_eq!(skel.degrees(), vec![4, 4, 10, 10, 6, 4, 4]);
    for (e, want) in M136_CYCLES.iter().enumerate() {
        let got: Vec<(usize, [usize; 2])> = skel.edges[e].corners.iter().map(|c| (c.tet, c.edge())).collect();
        assert!(same_cycle(&got, want), "edge {e}: {got:?} vs {want:?}");
    }
}

fn a2() {
    let tri = fixtures::m136();
    let strict = solve_angle_lp(&tri, AngleMode::Strict).unwrap();
    assert_eq!(strict.status, LpStatus::Infeasible);
    assert_eq!(strict.optimum, Some(rat(0, 1)));
    let taut = enumerate_taut(&tri, 64).unwrap();
    assert!(!taut.is_empty());
    let system = build_angle_system(&tri).unwrap();
    assert!(taut.iter().all(|x| x.is_taut() && system.satisfied_by(x)));
}

fn a3() {
    let doc = parse_document(fixtures::M136).unwrap();
    let report = verify_shapes(&doc.triangulation, doc.shapes.as_ref().unwrap()).unwrap();
    assert_eq!(report.edges.len(), 7);
    for e in &report.edges {
        assert!(e.product.is_one(), "edge {} product {}", e.edge, e.product);
        assert!((e.argument_sum - 2.0).abs() < 1e-9, "edge {} argument {}", e.edge, e.argument_sum);
    }
    assert_eq!(report.flat, vec![3, 5]);
    assert!(report.passed);
}

fn a4() {
    let tri = fixtures::figure_eight();
    let lp = solve_angle_lp(&tri, AngleMode::Strict).unwrap();
    assert_eq!(lp.optimum, Some(rat(1, 3)));
    assert_eq!(lp.witness, Some(AngleVector::new(vec![rat(1, 3); 6])));
    let v = certify_strongly_essential(&tri, &CertifyOptions::default()).unwrap();
    assert_eq!(v.strongly_essential, Some(Answer::Yes));
    assert_eq!(v.headline_tags(), vec!["strict_angle".to_string()]);
    assert!(v.edges.iter().all(|e| e.certificate.tag() == "strict_angle"));
}

fn a5() {
    let tri = fixtures::m136();
    let tauts = enumerate_taut(&tri, 1000).unwrap();
    assert!(!tauts.is_empty());
    let opts = CertifyOptions { budget: Budget::small(), ..CertifyOptions::default() };
    let mut checked = 0;
    // The move and its verdicts depend only on the site, not on the taut structure.
    let mut seen = std::collections::BTreeMap::new();
    for taut in &tauts {
        let sites = taut_pillow_sites(&tri, taut).unwrap();
        assert!(!sites.is_empty());
        for (edge, side) in sites {
            let out = seen.entry((edge, side)).or_insert_with(|| {
                let (out, record) = pillow_0_2(&tri, edge, side).unwrap();
                let skel = build_skeleton(&out).unwrap();
                let d2 = record.degree_two_edge.unwrap();
                assert_eq!(skel.edges[d2].degree(), 2);
                let strict = solve_angle_lp(&out, AngleMode::Strict).unwrap();
                assert_eq!(strict.status, LpStatus::Infeasible);
                let v = certify_strongly_essential(&out, &opts).unwrap();
                assert_ne!(v.strongly_essential, Some(Answer::Yes));
                out
            });
            let moved = extend_taut(&tri, edge, side, taut).unwrap();
            assert!(moved.is_taut() && build_angle_system(out).unwrap().satisfied_by(&moved));
            checked += 1;
        }
    }
    println!("    A5: {} taut structures, {checked} (structure, site) pairs, {} distinct sites", tauts.len(), seen.len());
}

fn a6() {
    let tri = fixtures::quaternionic();
    let skel = build_skeleton(&tri).unwrap();
    assert!(tri.is_closed());
    assert_eq!(skel.vertex_count, 1);
    assert_eq!(skel.classification, Classification::ClosedManifold1Vertex);
    assert_eq!(tri.tet_count(), 2);
    assert_eq!(skel.edge_count(), 3);
    let p = presentation_closed(&tri).unwrap();
    assert_eq!(homology(&p).to_string(), "Z2 + Z2");
    let table = enumerate_cosets(&p, &[], 10_000).unwrap();
    assert_eq!(table.len(), 8);
    let v = certify_essential(&tri, &CertifyOptions::default()).unwrap();
    assert_eq!(v.essential, Answer::Yes);
    assert!(v.edges.iter().all(|e| e.essential == Answer::Yes && e.certificate.tag() == "group(word)"));
    assert!(replay_group_certificates(&tri, &v, &Budget::default()).unwrap());
}

fn a7() {
    let budget = Budget::small();
    let mut replayed = 0;
    let mut round_trips = 0;
    for seed in 0..100u64 {
        let tri = random_triangulation(seed, 6);
        let skel = build_skeleton(&tri).unwrap();
        let n = tri.tet_count();
        // (i) partitions and Euler characteristic
        assert_eq!(skel.degrees().iter().sum::<usize>(), 6 * n);
        assert_eq!(skel.faces.len(), 2 * n);
        assert_eq!(skel.links.iter().map(|l| l.triangle_count).sum::<usize>(), 4 * n);
        let chi = skel.vertex_count as i64 - skel.edge_count() as i64 + skel.faces.len() as i64 - n as i64;
        assert_eq!(chi, skel.euler_characteristic);
        assert!(skel.link_formula_holds());
        // (ii) 2-3 then 3-2
        let before = homology(&spine_presentation(&tri).unwrap().presentation);
        for face in 0..skel.faces.len() {
            let Ok((up, rec)) = pachner_2_3(&tri, face) else { continue };
            let (down, _) = pachner_3_2(&up, rec.created_edges[0]).unwrap();
            assert!(are_isomorphic(&tri, &down).is_some(), "seed {seed} face {face}");
            assert_eq!(homology(&spine_presentation(&up).unwrap().presentation), before);
            round_trips += 1;
            break;
        }
        // (iii) exact LP residuals
        for mode in [AngleMode::Semi, AngleMode::Strict] {
            let lp = solve_angle_lp(&tri, mode).unwrap();
            if let Some(w) = &lp.witness {
                let system = build_angle_system(&tri).unwrap();
                assert!(system.residuals(w).unwrap().iter().all(Zero::is_zero));
            }
        }
        // (iv) group certificates replay
        let p = spine_presentation(&tri).unwrap().presentation;
        if p.generator_count > 0 {
            let ctx = GroupContext::new(&p, &budget);
            let k = p.generator_count as i32;
            for letters in [vec![1], vec![1, 1], vec![1, -k, -1, k], vec![k, k, 1]] {
                let w = Word::from_letters(letters).reduced();
                let v = ctx.decide_word(&w);
                if v.answer != Answer::Unknown {
                    assert!(ctx.replay(&Question::Nontrivial { w }, &v), "seed {seed}");
                    replayed += 1;
                }
            }
        }
    }
    // (v) Newton on the figure-eight
    let tri = fixtures::figure_eight();
    let out = solve_shapes_newton(&tri, &[Complex64::new(0.3, 1.1); 2], 1e-13, 50).unwrap();
    assert!(out.residual < 1e-12);
    let target = Complex64::new(0.5, 0.75f64.sqrt());
    assert!(out.shapes.iter().all(|z| (z - target).norm() < 1e-9));
    println!("    A7: 100 random triangulations, {round_trips} 2-3/3-2 round trips, {replayed} group verdicts replayed");
}

fn a8() {
    let tri = fixtures::m136();
    let tauts = enumerate_taut(&tri, 1).unwrap();
    let (edge, side) = taut_pillow_sites(&tri, &tauts[0]).unwrap()[0];
    let pillow = pillow_0_2(&tri, edge, side).unwrap().0;
    let cases = [
        ("m136", fixtures::m136(), Some(fixtures::m136_shapes())),
        ("figure-eight", fixtures::figure_eight(), None),
        ("quaternionic", fixtures::quaternionic(), None),
        ("m136 pillow", pillow, None),
    ];
    for (name, t, shapes) in cases {
        let opts = CertifyOptions { exhaustive: true, shapes, budget: Budget::small(), ..CertifyOptions::default() };
        let v = certify_strongly_essential(&t, &opts).unwrap();
        assert!(v.conflicts().is_empty(), "{name}: {:?}", v.conflicts());
        let methods: Vec<String> = v.resolving_methods().iter().map(Method::to_string).collect();
        println!("    A8: {name}: {v}; sources agreeing: {}", methods.join(", "));
    }
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn(), Duration); 8] = [
        ("A1 parsing and skeleton", a1, Duration::from_secs(1)),
        ("A2 angle LP", a2, Duration::from_secs(5)),
        ("A3 exact gluing verification", a3, Duration::from_secs(1)),
        ("A4 strict implies strongly essential", a4, Duration::from_secs(1)),
        ("A5 0-2 counterexample property", a5, Duration::from_secs(30)),
        ("A6 group certificates", a6, Duration::from_secs(5)),
        ("A7 property suites", a7, Duration::from_secs(120)),
        ("A8 verdict consistency", a8, Duration::from_secs(120)),
    ];
    let mut failed = Vec::new();
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check));
        let took = start.elapsed();
        let timing = if took <= limit { String::new() } else { format!(", over the {limit:?} limit") };
        match result {
            Ok(()) => println!("PASS {name} ({took:.2?}{timing})"),
            Err(_) => {
                println!("FAIL {name} ({took:.2?}{timing})");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
