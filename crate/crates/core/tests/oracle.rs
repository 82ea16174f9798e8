use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twoprim_core::arith::{euler_phi, factorize, PrimePowerCtx};
use twoprim_core::charoracle::{CharIndex, CharacterTable, ComplexVal};
use twoprim_core::ffield::build_field;
use twoprim_core::verify::TwoPrimitiveList;
use twoprim_core::{FieldElem, QuadExtField};

fn field(q: u64) -> QuadExtField {
    build_field(&PrimePowerCtx::new(q).unwrap()).unwrap()
}

/// One element per translate class.
fn class_representatives(f: &QuadExtField) -> Vec<FieldElem> {
    let tr = f.translate_indexer();
    let mut seen = BTreeSet::new();
    (0..f.size())
        .map(|i| f.unpack(i))
        .filter(|u| {
            let idx = tr.index(u);
            idx != 0 && seen.insert(idx)
        })
        .collect()
}

#[test]
fn characters_are_multiplicative() {
    let f = field(13);
    let t = CharacterTable::new(&f).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let chi = CharIndex::new(rng.gen_range(0..f.order()), f.order());
        let u = f.unpack(rng.gen_range(1..f.size()));
        let v = f.unpack(rng.gen_range(1..f.size()));
        let lhs = t.char_eval(chi, &f.mul(&u, &v)).unwrap();
        let rhs = t.char_eval(chi, &u).unwrap() * t.char_eval(chi, &v).unwrap();
        assert!((lhs - rhs).abs() < 1e-9);
    }
}

#[test]
fn translate_sums_take_two_shapes() {
    for q in [5u64, 7, 9, 11, 13] {
        let f = field(q);
        let t = CharacterTable::new(&f).unwrap();
        let sqrt_q = (q as f64).sqrt();
        let reps = class_representatives(&f);
        assert_eq!(reps.len() as u64, q - 1);
        for tt in 1..f.order() {
            let chi = CharIndex::new(tt, f.order());
            for theta in &reps {
                let b = t.translate_sum_b(chi, theta).unwrap();
                if (q + 1) % chi.order == 0 {
                    assert!((b - ComplexVal::new(-1.0, 0.0)).abs() < 1e-6, "q = {q}, t = {tt}");
                } else {
                    assert!((b.abs() - sqrt_q).abs() < 1e-6, "q = {q}, t = {tt}");
                }
            }
        }
    }
}

#[test]
fn omega_matches_m_free_predicate() {
    for q in [5u64, 7, 9] {
        let f = field(q);
        let t = CharacterTable::new(&f).unwrap();
        let ms = factorize(f.order()).squarefree_divisors();
        for i in 1..f.size() {
            let x = f.unpack(i);
            for &m in &ms {
                let want = if t.is_m_free(&x, m).unwrap() { 1.0 } else { 0.0 };
                assert!((t.omega_m(&x, m).unwrap() - want).abs() < 1e-6, "q = {q}, x = {x}, m = {m}");
            }
        }
    }
}

#[test]
fn w_matches_power_residue_test() {
    for q in [5u64, 7, 9, 11, 13] {
        let f = field(q);
        let t = CharacterTable::new(&f).unwrap();
        for i in 1..f.size() {
            let x = f.unpack(i);
            for k in [1u64, 2, 4] {
                let want = if t.is_kth_power(&x, k).unwrap() { 1.0 } else { 0.0 };
                assert!((t.w_k_indicator(&x, k).unwrap() - want).abs() < 1e-6, "q = {q}, x = {x}, k = {k}");
            }
        }
    }
}

#[test]
fn gamma_forms_agree_with_exact_predicate() {
    for q in [5u64, 7, 9, 11] {
        let f = field(q);
        let t = CharacterTable::new(&f).unwrap();
        let rs = f.ctx().rprime_factorization().divisors();
        for i in 1..f.size() {
            let x = f.unpack(i);
            for &r in &rs {
                let product = t.gamma_r(&x, r).unwrap();
                let expanded = t.gamma_r_expanded(&x, r).unwrap();
                let want = if t.gamma_r_exact(&x, r).unwrap() { 1.0 } else { 0.0 };
                assert!((product - expanded).abs() < 1e-6, "q = {q}, x = {x}, r = {r}");
                assert!((product - want).abs() < 1e-6, "q = {q}, x = {x}, r = {r}");
            }
        }
    }
}

#[test]
fn gamma_is_one_on_two_primitive_elements() {
    let f = field(7);
    let t = CharacterTable::new(&f).unwrap();
    let rp = f.ctx().rprime;
    let list = TwoPrimitiveList::build(&f);
    for i in 0..list.len() {
        let x = f.from_coords(list.coords(i)).unwrap();
        assert!((t.gamma_r(&x, rp).unwrap() - 1.0).abs() < 1e-6);
    }
    let fourth = f.pow(&f.primitive(), 4);
    assert!(t.gamma_r(&fourth, rp).unwrap().abs() < 1e-6);
}

#[test]
fn gamma_sums_to_two_primitive_count() {
    for q in [5u64, 7, 9] {
        let f = field(q);
        let t = CharacterTable::new(&f).unwrap();
        let rp = f.ctx().rprime;
        let total: f64 = (1..f.size()).map(|i| t.gamma_r(&f.unpack(i), rp).unwrap()).sum();
        let want = euler_phi(&factorize(f.order() / 2)) as f64;
        assert!((total - want).abs() < 1e-6, "q = {q}");
    }
}

#[test]
fn line_count_identity() {
    for q in [7u64, 11, 13] {
        let f = field(q);
        let t = CharacterTable::new(&f).unwrap();
        let rs = f.ctx().rprime_factorization().divisors();
        for alpha in [f.one(), f.primitive()] {
            for theta in class_representatives(&f) {
                for &r in &rs {
                    let n = t.count_n_r(&theta, &alpha, r).unwrap();
                    assert!((n.direct as f64 - n.via_formula).abs() < 1e-3, "q = {q}, r = {r}, {n:?}");
                }
            }
        }
    }
}

#[test]
fn line_counts_at_extremes() {
    let f = field(5);
    let t = CharacterTable::new(&f).unwrap();
    let rp = f.ctx().rprime;
    let mut empty_line = false;
    for i in 1..f.size() {
        let alpha = f.unpack(i);
        for theta in class_representatives(&f) {
            empty_line |= t.count_n_r(&theta, &alpha, rp).unwrap().direct == 0;
        }
    }
    assert!(empty_line);

    let f = field(43);
    let t = CharacterTable::new(&f).unwrap();
    let rp = f.ctx().rprime;
    for theta in class_representatives(&f) {
        assert!(t.count_n_r(&theta, &f.one(), rp).unwrap().direct >= 1);
    }
}

#[test]
fn y_sums_within_character_bounds() {
    for q in [7u64, 11, 13] {
        let f = field(q);
        let t = CharacterTable::new(&f).unwrap();
        let bound = 4.0 * (q as f64).sqrt() + 1e-6;
        for theta in class_representatives(&f) {
            for tt in 1..f.order() {
                let chi = CharIndex::new(tt, f.order());
                if chi.order == 1 || f.ctx().rprime % chi.order != 0 {
                    continue;
                }
                let y = t.y_sum(chi, &theta, &f.one()).unwrap();
                assert!(y.abs() <= bound, "q = {q}, t = {tt}, |Y| = {}", y.abs());
            }
        }
    }
}

/// A random pairwise-coprime-over-`r0` family with lcm `m`, built from the
/// prime factors of `R′`.
fn random_family(rng: &mut ChaCha8Rng, primes: &[u64]) -> (u64, u64, Vec<u64>) {
    let mut shuffled = primes.to_vec();
    for i in (1..shuffled.len()).rev() {
        shuffled.swap(i, rng.gen_range(0..=i));
    }
    let r0_len = rng.gen_range(0..shuffled.len());
    let r0: u64 = shuffled[..r0_len].iter().product();
    let rest = &shuffled[r0_len..];
    let s = rng.gen_range(1..=rest.len());
    let mut rs = vec![r0; s];
    for (i, &p) in rest.iter().enumerate() {
        let slot = if i < s { i } else { rng.gen_range(0..s) };
        rs[slot] *= p;
    }
    let m = rs.iter().fold(r0, |acc, &r| acc * (r / r0));
    (m, r0, rs)
}

#[test]
fn sieve_inequality_on_random_families() {
    let candidates: Vec<u64> = [7u64, 11, 13, 17, 19, 23, 25, 27, 29, 31, 37, 41]
        .into_iter()
        .filter(|&q| PrimePowerCtx::new(q).unwrap().rprime > 1)
        .collect();
    let fields: Vec<QuadExtField> = candidates.iter().map(|&q| field(q)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let f = &fields[rng.gen_range(0..fields.len())];
        let t = CharacterTable::new(f).unwrap();
        let primes: Vec<u64> = f.ctx().rprime_factorization().primes().collect();
        let (m, r0, rs) = random_family(&mut rng, &primes);
        let theta = loop {
            let u = f.unpack(rng.gen_range(1..f.size()));
            if !f.in_subfield(&u) {
                break u;
            }
        };
        let alpha = f.unpack(rng.gen_range(1..f.size()));
        assert!(
            t.check_sieve_inequality(&theta, &alpha, m, r0, &rs).unwrap(),
            "q = {}, m = {m}, r0 = {r0}, {rs:?}",
            f.q()
        );
    }
}
