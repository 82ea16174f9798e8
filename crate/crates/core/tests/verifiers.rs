mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::SCAN_EXCEPTIONS;
use twoprim_core::arith::{odd_prime_powers, PrimePowerCtx};
use twoprim_core::ffield::build_field;
use twoprim_core::verify::{self, build_gamma_set, check_lines_fast, recheck_witness, TwoPrimitiveList};
use twoprim_core::{FieldElem, QuadExtField, Witness};

const TRANSLATE_EXCEPTIONS: [u64; 6] = [5, 7, 11, 13, 31, 41];
const LINE_EXCEPTIONS: [u64; 8] = [3, 5, 7, 9, 11, 13, 31, 41];

fn field(q: u64) -> QuadExtField {
    build_field(&PrimePowerCtx::new(q).unwrap()).unwrap()
}

#[test]
fn translate_routes_agree_up_to_241() {
    for (q, _, _) in odd_prime_powers(3, 241) {
        let f = field(q);
        let fast = verify::verify_translate_fast(&f);
        let paper = verify::verify_translate_paper(&f);
        assert_eq!(fast.holds, paper.holds, "q = {q}");
        assert_eq!(fast.holds, !TRANSLATE_EXCEPTIONS.contains(&q), "q = {q}");
    }
}

#[test]
fn line_routes_agree_up_to_100() {
    for &q in SCAN_EXCEPTIONS.iter().filter(|&&q| q <= 100) {
        let f = field(q);
        let fast = verify::verify_line_fast(&f);
        let paper = verify::verify_line_paper(&f);
        assert_eq!(fast.holds, paper.holds, "q = {q}");
        assert_eq!(fast.witness, paper.witness, "q = {q}");
        assert_eq!(fast.holds, !LINE_EXCEPTIONS.contains(&q), "q = {q}");
    }
}

#[test]
fn line_exceptions_up_to_1021() {
    let failing: Vec<u64> = SCAN_EXCEPTIONS
        .iter()
        .copied()
        .filter(|&q| q <= 1021)
        .filter(|&q| !verify::verify_line_fast(&field(q)).holds)
        .collect();
    assert_eq!(failing, LINE_EXCEPTIONS);
}

#[test]
fn settled_prime_powers_have_the_line_property() {
    for (q, _, _) in odd_prime_powers(3, 1000).into_iter().filter(|(q, _, _)| !SCAN_EXCEPTIONS.contains(q)) {
        assert!(verify::verify_line_fast(&field(q)).holds, "q = {q}");
    }
}

#[test]
fn translate_classes_partition_the_complement() {
    for (q, _, _) in odd_prime_powers(3, 50) {
        let f = field(q);
        let mut classes: BTreeMap<FieldElem, u64> = BTreeMap::new();
        for i in 0..f.size() {
            let u = f.unpack(i);
            if let Ok(key) = f.translate_class_key(&u) {
                *classes.entry(key).or_default() += 1;
            }
        }
        assert_eq!(classes.len() as u64, q - 1, "q = {q}");
        assert!(classes.values().all(|&n| n == q), "q = {q}");
    }
}

#[test]
fn line_verdicts_invariant_under_subfield_scaling() {
    for (q, _, _) in odd_prime_powers(3, 27) {
        let f = field(q);
        let list = TwoPrimitiveList::build(&f);
        let b0 = f.pow(&f.primitive(), q + 1);
        for gamma in build_gamma_set(&f).gammas {
            let scaled = f.mul(&gamma, &b0);
            let (plain, _) = check_lines_fast(&f, &list, &gamma).unwrap();
            let (moved, _) = check_lines_fast(&f, &list, &scaled).unwrap();
            assert_eq!(plain.complete, moved.complete, "q = {q}, gamma = {gamma}");
            if q <= 13 {
                let accepted = verify::check_lines_paper(&f, &scaled).unwrap();
                assert_eq!(accepted.len() as u64 == q - 1, plain.complete, "q = {q}, gamma = {gamma}");
            }
        }
    }
}

fn line_set(f: &QuadExtField, alpha: &FieldElem, theta: &FieldElem, sub: &[FieldElem]) -> Vec<u64> {
    let mut pts: Vec<u64> = sub.iter().map(|x| f.pack(&f.mul(alpha, &f.add(theta, x)))).collect();
    pts.sort_unstable();
    pts
}

fn lines_through(f: &QuadExtField, alphas: &[FieldElem]) -> BTreeSet<Vec<u64>> {
    let sub = f.subfield_elements();
    let mut out = BTreeSet::new();
    for alpha in alphas {
        for i in 0..f.size() {
            let theta = f.unpack(i);
            if !f.in_subfield(&theta) {
                out.insert(line_set(f, alpha, &theta, &sub));
            }
        }
    }
    out
}

#[test]
fn gamma_set_lines_cover_all_lines() {
    for q in [3u64, 5, 7, 9] {
        let f = field(q);
        let all: Vec<FieldElem> = (1..f.size()).map(|i| f.unpack(i)).collect();
        let gammas = build_gamma_set(&f).gammas;
        assert_eq!(lines_through(&f, &gammas), lines_through(&f, &all), "q = {q}");
    }
}

#[test]
fn verdicts_for_named_fields() {
    let f = field(43);
    assert!(verify::verify_translate_fast(&f).holds);
    assert!(verify::verify_line_fast(&f).holds);
    assert!(verify::verify_line_paper(&f).holds);

    let f = field(3);
    assert!(verify::verify_translate_paper(&f).holds);
    assert!(!verify::verify_line_paper(&f).holds);

    let f = field(31);
    let report = verify::verify_line_fast(&f);
    assert!(!report.holds);
    let witness = report.witness.unwrap();
    assert!(matches!(witness, Witness::Line { .. }));
    assert!(recheck_witness(&f, &witness).unwrap());

    assert!(verify::verify_line_fast(&field(1021)).holds);
    assert!(verify::verify_translate_fast(&field(3541)).holds);
}

#[test]
fn every_failure_witness_rechecks() {
    for &q in &LINE_EXCEPTIONS {
        let f = field(q);
        for report in [verify::verify_translate_fast(&f), verify::verify_line_fast(&f)] {
            assert_eq!(report.holds, report.witness.is_none());
            if let Some(w) = report.witness {
                assert!(recheck_witness(&f, &w).unwrap(), "q = {q}, {w}");
            }
        }
    }
}
