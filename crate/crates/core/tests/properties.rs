mod common;

use num_traits::Zero;
use proptest::prelude::*;

use essentri_core::angles::{build_angle_system, solve_angle_lp, AngleMode};
use essentri_core::format::{from_json, parse_triangulation, to_json, to_table};
use essentri_core::gaussian::GaussianRational;
use essentri_core::isomorphism::are_isomorphic;
use essentri_core::moves::{pachner_2_3, pachner_3_2};
use essentri_core::pi1::{homology, spine_presentation, Answer, Budget, GroupContext, Question, Word};
use essentri_core::skeleton::build_skeleton;
use essentri_core::{Mode, Perm4};

use common::random_triangulation;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn skeleton_partitions_every_piece(seed in any::<u64>()) {
        let tri = random_triangulation(seed, 6);
        let skel = build_skeleton(&tri).unwrap();
        let n = tri.tet_count();
        let mut corners: Vec<(usize, usize)> =
            skel.edges.iter().flat_map(|e| e.corners.iter().map(|c| (c.tet, c.edge_index()))).collect();
        corners.sort();
        corners.dedup();
        prop_assert_eq!(corners.len(), 6 * n);
        prop_assert_eq!(skel.faces.iter().map(|f| f.representatives.len()).sum::<usize>(), 4 * n);
        prop_assert_eq!(skel.links.iter().map(|l| l.triangle_count).sum::<usize>(), 4 * n);
        prop_assert!(skel.link_formula_holds());
    }

    #[test]
    fn relabelling_preserves_the_skeleton_shape(seed in any::<u64>(), shift in 0usize..6, p in 0usize..24) {
        let tri = random_triangulation(seed, 6);
        let n = tri.tet_count();
        let map: Vec<usize> = (0..n).map(|t| (t + shift) % n).collect();
        let perm = Perm4::all().nth(p).unwrap();
        let other = tri.relabel(&map).relabel_vertices(&vec![perm; n]);
        prop_assert!(other.validate_mode(Mode::Closed).is_valid());
        let iso = are_isomorphic(&tri, &other);
        prop_assert!(iso.is_some_and(|i| i.verify(&tri, &other)));
        let mut a = build_skeleton(&tri).unwrap().degrees();
        let mut b = build_skeleton(&other).unwrap().degrees();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn both_formats_round_trip(seed in any::<u64>()) {
        let tri = random_triangulation(seed, 6);
        let json = from_json(&to_json(&tri)).unwrap();
        let table = parse_triangulation(&to_table(&tri, None)).unwrap();
        prop_assert_eq!(json.gluings(), tri.gluings());
        prop_assert_eq!(table.gluings(), tri.gluings());
    }

    #[test]
    fn two_three_round_trip_keeps_homology(seed in any::<u64>(), pick in any::<usize>()) {
        let tri = random_triangulation(seed, 5);
        let faces = build_skeleton(&tri).unwrap().faces.len();
        let face = pick % faces;
        if let Ok((up, rec)) = pachner_2_3(&tri, face) {
            prop_assert_eq!(up.tet_count(), tri.tet_count() + 1);
            prop_assert_eq!(build_skeleton(&up).unwrap().edge_count(), build_skeleton(&tri).unwrap().edge_count() + 1);
            let (down, _) = pachner_3_2(&up, rec.created_edges[0]).unwrap();
            prop_assert!(are_isomorphic(&tri, &down).is_some());
            prop_assert_eq!(
                homology(&spine_presentation(&up).unwrap().presentation),
                homology(&spine_presentation(&tri).unwrap().presentation)
            );
        }
    }

    #[test]
    fn lp_witnesses_have_zero_residual(seed in any::<u64>()) {
        let tri = random_triangulation(seed, 6);
        let system = build_angle_system(&tri).unwrap();
        for mode in [AngleMode::Semi, AngleMode::Strict] {
            let lp = solve_angle_lp(&tri, mode).unwrap();
            if let Some(w) = &lp.witness {
                prop_assert!(system.residuals(w).unwrap().iter().all(Zero::is_zero));
                if mode == AngleMode::Semi {
                    prop_assert!(w.is_semi());
                }
            }
            if mode == AngleMode::Strict && lp.is_feasible() {
                prop_assert!(lp.witness.as_ref().unwrap().is_strict());
            }
        }
    }

    #[test]
    fn gaussian_text_round_trips(a in -50i64..50, b in 1i64..20, c in -50i64..50, d in 1i64..20) {
        let z = GaussianRational::from_ratios((a, b), (c, d));
        prop_assert_eq!(z.to_string().parse::<GaussianRational>().unwrap(), z);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn group_verdicts_replay(seed in any::<u64>(), letters in proptest::collection::vec(1i32..4, 1..6), signs in any::<u8>()) {
        let tri = random_triangulation(seed, 4);
        let p = spine_presentation(&tri).unwrap().presentation;
        prop_assume!(p.generator_count > 0);
        let k = p.generator_count as i32;
        let w = Word::from_letters(
            letters.iter().enumerate().map(|(i, &l)| {
                let g = (l - 1) % k + 1;
                if signs >> (i % 8) & 1 == 1 { -g } else { g }
            }),
        )
        .reduced();
        let ctx = GroupContext::new(&p, &Budget::small());
        let v = ctx.decide_word(&w);
        if v.answer != Answer::Unknown {
            let q = Question::Nontrivial { w: w.clone() };
            prop_assert!(ctx.replay(&q, &v));
        }
        let h = vec![Word::gen(0)];
        let m = ctx.decide_membership(&h, &w);
        if m.answer != Answer::Unknown {
            let q = Question::Member { h, w };
            prop_assert!(ctx.replay(&q, &m));
        }
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn newton_finds_the_regular_figure_eight(re in 0.2f64..0.8, im in 0.5f64..1.3) {
        let tri = essentri_core::fixtures::figure_eight();
        let start = [num_complex::Complex64::new(re, im); 2];
        let out = essentri_core::geom::solve_shapes_newton(&tri, &start, 1e-13, 60).unwrap();
        prop_assert!(out.residual < 1e-12);
        let target = num_complex::Complex64::new(0.5, 0.75f64.sqrt());
        prop_assert!(out.shapes.iter().all(|z| (z - target).norm() < 1e-9));
    }

    #[test]
    fn verdicts_are_coherent(seed in any::<u64>()) {
        use essentri_core::certify::{certify_strongly_essential, CertifyOptions};
        let tri = random_triangulation(seed, 4);
        let opts = CertifyOptions { budget: Budget::small(), ..CertifyOptions::default() };
        if let Ok(v) = certify_strongly_essential(&tri, &opts) {
            for e in &v.edges {
                prop_assert_eq!(e.essential == Answer::Unknown, e.certificate.tag() == "budget_exhausted");
            }
            if v.strongly_essential == Some(Answer::Yes) {
                prop_assert_eq!(v.essential, Answer::Yes);
            }
            prop_assert!(essentri_core::certify::replay_group_certificates(&tri, &v, &Budget::small()).unwrap());
            let again = certify_strongly_essential(&tri, &opts).unwrap();
            prop_assert_eq!(again, v);
        }
    }
}
