//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `--nocapture` to see them).

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use common::{battery, Lcg};
use ringlab_core::analysis::{self, BleachOutcome};
use ringlab_core::oracle::{self, ExpressionKind};
use ringlab_core::ring::{Elem, Ring, RingExpr};
use ringlab_core::sylvester::{self, LRMode, LRProblem, Method};
use ringlab_core::usc;

fn report(name: &str, ok: bool, detail: &str) {
    println!(
        "[acceptance] {name}: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "{name} failed: {detail}");
}

/// The `(n, base)` instances whose triangular rings must be uniquely
/// strongly clean.
fn usc_instances() -> Vec<(&'static Ring, &'static str)> {
    let b = battery();
    vec![
        (&b.t2_z2, "T2(Z2)"),
        (&b.t3_z2, "T3(Z2)"),
        (&b.t2_z4, "T2(Z4)"),
        (&b.t3_z4, "T3(Z4)"),
        (&b.t2_z2xz2, "T2(Z2 x Z2)"),
        (&b.t3_z2xz2, "T3(Z2 x Z2)"),
        (&b.t2_f2x2, "T2(F2[x]/(x^2))"),
        (&b.t3_f2x2, "T3(F2[x]/(x^2))"),
        (&b.t2_z8, "T2(Z8)"),
    ]
}

#[test]
fn criterion_01_usc_census_over_uniquely_clean_bases() {
    let start = Instant::now();
    for (ring, name) in usc_instances() {
        let census = oracle::uniqueness_census(ring, ExpressionKind::StronglyClean).unwrap();
        let expected = BTreeMap::from([(1usize, ring.card())]);
        assert_eq!(census, expected, "census of {name} is {census:?}");
    }
    report(
        "criterion 1 (strongly clean census is {{1: |R|}} on all nine instances)",
        true,
        &format!("{} ms", start.elapsed().as_millis()),
    );
}

#[test]
fn criterion_02_t_n_z2_usc_but_not_uniquely_clean() {
    let start = Instant::now();
    let b = battery();
    let mut ok = true;
    for ring in [&b.t2_z2, &b.t3_z2] {
        let report = analysis::classify(ring);
        ok &= report.uniquely_strongly_clean.holds() == Some(true);
        ok &= report.uniquely_clean.holds() == Some(false);
    }
    report(
        "criterion 2 (T2(Z2), T3(Z2) uniquely strongly clean, not uniquely clean)",
        ok,
        &format!("{} ms", start.elapsed().as_millis()),
    );
}

#[test]
fn criterion_03_negative_controls() {
    let start = Instant::now();
    let b = battery();
    let mut ok = true;
    for (ring, name) in [(&b.t2_z3, "T2(Z3)"), (&b.t2_z6, "T2(Z6)")] {
        let census = oracle::uniqueness_census(ring, ExpressionKind::StronglyClean).unwrap();
        let has_bad_bucket = census.iter().any(|(&count, &elems)| count != 1 && elems > 0);
        assert!(has_bad_bucket, "{name} census {census:?} has only count-1 buckets");
        ok &= has_bad_bucket;
    }
    report(
        "criterion 3 (T2(Z3), T2(Z6) censuses contain a bucket != 1)",
        ok,
        &format!("{} ms", start.elapsed().as_millis()),
    );
}

#[test]
fn criterion_04_decomposition_matches_oracle_bit_exact() {
    let start = Instant::now();
    let mut checked = 0u64;
    for (ring, name) in usc_instances() {
        for a in ring.elements() {
            let expr = usc::strongly_clean_decompose(ring, a)
                .unwrap_or_else(|e| panic!("decomposition failed in {name} at {a}: {e}"));
            let list = oracle::expressions(ring, a, ExpressionKind::StronglyClean).unwrap();
            assert_eq!(
                list.expressions.len(),
                1,
                "{name}: oracle found {} expressions for {a}",
                list.expressions.len()
            );
            assert_eq!(
                (list.expressions[0].idempotent, list.expressions[0].unit),
                (expr.idempotent, expr.unit),
                "{name}: mismatch at element {a}"
            );
            checked += 1;
        }
    }
    report(
        "criterion 4 (decomposition equals the oracle's unique expression)",
        true,
        &format!("{checked} elements, {} ms", start.elapsed().as_millis()),
    );
}

#[test]
fn criterion_05_series_solver_equals_brute_force() {
    let start = Instant::now();
    let b = battery();
    let mut solved = 0u64;
    for (ring, name) in [
        (&b.z8, "Z8"),
        (&b.t2_z2, "T2(Z2)"),
        (&b.t2_z4, "T2(Z4)"),
    ] {
        let units = analysis::units(ring).unwrap();
        let jac = analysis::jacobson_radical(ring).unwrap();
        for a in units.iter() {
            for bb in jac.iter() {
                for v in ring.elements() {
                    let p = LRProblem::new(ring.clone(), a, bb, v, LRMode::AUnitBRadical)
                        .unwrap();
                    let series = sylvester::solve_lr(&p, Method::Series).unwrap();
                    let brute = sylvester::solve_lr(&p, Method::Brute).unwrap();
                    assert_eq!(series, brute, "{name}: a={a} b={bb} v={v}");
                    assert_eq!(sylvester::apply_lr(ring, a, bb, series), v);
                    solved += 1;
                }
                // the series operator inverts x -> a*x - x*b pointwise
                for x in ring.elements() {
                    let image = sylvester::apply_lr(ring, a, bb, x);
                    let back =
                        sylvester::solve_series_unit_nilpotent(ring, a, bb, image).unwrap();
                    assert_eq!(back, x, "{name}: phi((l_a - r_b)({x})) != {x}");
                }
            }
        }
    }
    report(
        "criterion 5 (series = brute force, residuals hold, series inverts the map)",
        true,
        &format!("{solved} solves, {} ms", start.elapsed().as_millis()),
    );
}

#[test]
fn criterion_06_usc_t2_implies_uniquely_bleached_base() {
    let start = Instant::now();
    let b = battery();
    let mut usc_bases = 0;
    for (base, t2) in b.t2_pairs() {
        let family = analysis::clean_family(t2).unwrap();
        if family.uniquely_strongly_clean.holds() == Some(true) {
            usc_bases += 1;
            assert!(
                analysis::is_uniquely_bleached(base).unwrap().holds(),
                "{base} carries a USC T2 but is not uniquely bleached"
            );
        }
    }
    assert!(usc_bases >= 5, "expected at least five USC instances");
    // every commutative battery ring is uniquely bleached
    for ring in battery().bases() {
        assert!(ring.is_commutative());
        assert!(
            matches!(
                analysis::is_uniquely_bleached(ring).unwrap(),
                BleachOutcome::Bleached
            ),
            "commutative ring {ring} not uniquely bleached"
        );
    }
    report(
        "criterion 6 (USC T2 forces a uniquely bleached base; commutative rings bleached)",
        true,
        &format!(
            "{usc_bases} USC bases, {} ms",
            start.elapsed().as_millis()
        ),
    );
}

#[test]
fn criterion_07_bicommutant_idempotent_unique_and_constructed() {
    let start = Instant::now();
    let b = battery();
    let mut checked = 0u64;
    for (ring, name) in [
        (&b.t2_z2, "T2(Z2)"),
        (&b.t3_z2, "T3(Z2)"),
        (&b.t2_z4, "T2(Z4)"),
    ] {
        for a in ring.elements() {
            let list = oracle::expressions(ring, a, ExpressionKind::Bicommutant).unwrap();
            assert_eq!(
                list.expressions.len(),
                1,
                "{name}: {} bicommutant expressions for {a}",
                list.expressions.len()
            );
            let expr = usc::bicommutant_decompose(ring, a).unwrap();
            assert_eq!(expr.idempotent, list.expressions[0].idempotent, "{name} at {a}");
            let sc = usc::strongly_clean_decompose(ring, a).unwrap();
            assert_eq!(
                expr.idempotent, sc.idempotent,
                "{name}: bicommutant and strongly clean idempotents differ at {a}"
            );
            checked += 1;
        }
    }
    report(
        "criterion 7 (unique bicommutant idempotent, returned by the construction)",
        true,
        &format!("{checked} elements, {} ms", start.elapsed().as_millis()),
    );
}

#[test]
fn criterion_08_signed_decomposition() {
    let start = Instant::now();
    let b = battery();
    for a in b.t2_z4.elements() {
        let list = oracle::expressions(&b.t2_z4, a, ExpressionKind::Signed).unwrap();
        assert_eq!(
            list.expressions.len(),
            1,
            "T2(Z4): {} signed expressions for {a}",
            list.expressions.len()
        );
        let expr = usc::signed_decompose(&b.t2_z4, a).unwrap();
        assert_eq!(expr.idempotent, list.expressions[0].idempotent, "T2(Z4) at {a}");
    }
    // Boolean base spot check on seeded random elements
    let ring = &b.t2_z2xz2;
    let mut rng = Lcg::new(0);
    for _ in 0..10 {
        let a = Elem(rng.next() % ring.card());
        let signed = usc::signed_decompose(ring, a).unwrap();
        let comm2 = oracle::expressions(ring, a, ExpressionKind::Bicommutant).unwrap();
        assert_eq!(comm2.expressions.len(), 1, "T2(Z2 x Z2) at {a}");
        assert_eq!(
            signed.idempotent, comm2.expressions[0].idempotent,
            "T2(Z2 x Z2) at {a}"
        );
    }
    report(
        "criterion 8 (unique signed idempotent on T2(Z4); Boolean-base spot check)",
        true,
        &format!("{} ms", start.elapsed().as_millis()),
    );
}

#[test]
fn criterion_09_local_bases() {
    let start = Instant::now();
    let b = battery();
    for (base, t2, name) in [
        (&b.z4, &b.t2_z4, "Z4"),
        (&b.z8, &b.t2_z8, "Z8"),
        (&b.f2x2, &b.t2_f2x2, "F2[x]/(x^2)"),
    ] {
        assert!(analysis::check_local(base).is_true(), "{name} not local");
        assert!(
            analysis::check_residue_z2(base).is_true(),
            "{name} residue is not Z2"
        );
        let family = analysis::clean_family(t2).unwrap();
        assert_eq!(
            family.uniquely_strongly_clean.holds(),
            Some(true),
            "T2({name}) not USC"
        );
    }
    assert!(analysis::check_local(&b.z9).is_true());
    let jac9 = analysis::jacobson_radical(&b.z9).unwrap();
    assert_eq!(b.z9.card() / jac9.len() as u64, 3);
    let census = oracle::uniqueness_census(&b.t2_z9, ExpressionKind::StronglyClean).unwrap();
    assert!(
        census.iter().any(|(&count, &elems)| count != 1 && elems > 0),
        "T2(Z9) census {census:?} has only count-1 buckets"
    );
    report(
        "criterion 9 (local bases: residue Z2 gives USC T2, Z9 does not)",
        true,
        &format!("{} ms", start.elapsed().as_millis()),
    );
}

#[test]
fn criterion_10_structural_consistency() {
    let start = Instant::now();
    let b = battery();
    for (ring, name) in [
        (&b.t2_z2, "T2(Z2)"),
        (&b.t3_z2, "T3(Z2)"),
        (&b.t2_z4, "T2(Z4)"),
        (&b.t3_z4, "T3(Z4)"),
    ] {
        let criterion = analysis::jacobson_radical(ring).unwrap();
        let structural = analysis::jacobson_radical_structural(ring).unwrap();
        assert_eq!(
            criterion.members(),
            structural.members(),
            "radical mismatch on {name}"
        );
    }
    // every uniquely clean battery base has Boolean R/J and 2 in J
    let mut uc_names = Vec::new();
    for base in b.bases() {
        let rep = analysis::classify(base);
        if rep.uniquely_clean.holds() != Some(true) {
            continue;
        }
        uc_names.push(base.expr().to_string());
        let jac = analysis::jacobson_radical(base).unwrap();
        assert!(
            jac.contains(base.from_int(2)),
            "2 not in the radical of {base}"
        );
        let quotient = Ring::new(RingExpr::Quotient {
            base: Box::new(base.expr().clone()),
            generators: jac.iter().map(|e| e.0).collect(),
        })
        .unwrap();
        assert!(
            analysis::check_boolean(&quotient).is_true(),
            "R/J not Boolean for {base}"
        );
    }
    uc_names.sort();
    let mut expected = vec![
        "Z2".to_string(),
        "Z4".to_string(),
        "Z8".to_string(),
        "Z2 x Z2".to_string(),
        "F2[x]/(x^2)".to_string(),
    ];
    expected.sort();
    assert_eq!(uc_names, expected, "unexpected set of uniquely clean bases");
    report(
        "criterion 10 (structural radical agrees; R/J Boolean with 2 in J for UC bases)",
        true,
        &format!("{} ms", start.elapsed().as_millis()),
    );
}
