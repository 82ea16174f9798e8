//! Exhaustive verification of the translate and line properties for
//! 2-primitive elements.
//!
//! Two independent routes are provided for each property:
//!
//! - the *paper* route works with exponents of the fixed primitive element `a`
//!   and decides class membership pairwise via `((a^i − a^j)/γ)^{q−1} = 1`;
//! - the *fast* route numbers classes with a linear [`ClassIndexer`] and marks
//!   a bitmap, stopping as soon as all `q − 1` classes are hit.
//!
//! Line verification only needs the `q + 1` multipliers `γ` of [`GammaSet`]:
//! every `α ∈ F_{q^2}^*` is `γ·b` for some such `γ` and `b ∈ F_q^*`, and
//! multipliers differing by an `F_q^*` factor define the same lines.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::time::Duration;

use crate::arith::gcd;
use crate::ffield::{ClassIndexer, QuadExtField};
use crate::{Error, FieldElem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PropertyKind {
    Translate,
    Line,
}

impl PropertyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PropertyKind::Translate => "translate",
            PropertyKind::Line => "line",
        }
    }
}

/// A class containing no 2-primitive element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Witness {
    /// The translate class with key `θ^q − θ`.
    Translate { key: FieldElem },
    /// The line `{γ(θ + x)}` with `θ^q − θ = key`.
    Line { gamma: FieldElem, key: FieldElem },
}

impl core::fmt::Display for Witness {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Witness::Translate { key } => write!(f, "key={key}"),
            Witness::Line { gamma, key } => write!(f, "gamma={gamma};key={key}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub q: u64,
    pub property: PropertyKind,
    pub holds: bool,
    /// Present exactly when `holds` is false.
    pub witness: Option<Witness>,
    /// Classes found to contain a 2-primitive element, summed over every `γ`
    /// for the line property.
    pub classes_covered: u64,
    /// Wall time; left at zero by this crate, filled in by timed drivers.
    pub elapsed: Duration,
}

/// The 2-primitive elements `a^j`, `gcd(j, q² − 1) = 2`, in ascending `j`.
#[derive(Debug, Clone)]
pub struct TwoPrimitiveList {
    n: usize,
    exponents: Vec<u64>,
    coords: Vec<u32>,
}

impl TwoPrimitiveList {
    pub fn build(fld: &QuadExtField) -> Self {
        let n = fld.degree();
        let order = fld.order();
        let half = order / 2;
        let a2 = fld.mul(&fld.primitive(), &fld.primitive());
        let mut exponents = Vec::new();
        let mut coords = Vec::new();
        let mut cur = a2;
        for m in 1..half {
            // j = 2m, and gcd(2m, 2·half) = 2 iff gcd(m, half) = 1.
            if gcd(m, half) == 1 {
                exponents.push(2 * m);
                coords.extend_from_slice(cur.coords());
            }
            cur = fld.mul(&cur, &a2);
        }
        TwoPrimitiveList { n, exponents, coords }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// Coordinate slice of the `i`-th element.
    pub fn coords(&self, i: usize) -> &[u32] {
        &self.coords[i * self.n..(i + 1) * self.n]
    }

    /// Coordinate slices in ascending exponent order.
    pub fn iter(&self) -> core::slice::ChunksExact<'_, u32> {
        self.coords.chunks_exact(self.n)
    }
}

/// The multipliers `A′ ∪ ζA′`: `a^j` and `ζa^j` for `j = m(q − 1)`,
/// `0 ≤ m < (q + 1)/2`.
#[derive(Debug, Clone)]
pub struct GammaSet<'a> {
    pub field: &'a QuadExtField,
    pub gammas: Vec<FieldElem>,
}

pub fn build_gamma_set(fld: &QuadExtField) -> GammaSet<'_> {
    let q = fld.q();
    let step = fld.pow(&fld.primitive(), q - 1);
    let zeta = fld.zeta();
    let mut gammas = Vec::with_capacity(q as usize + 1);
    let mut cur = fld.one();
    for _ in 0..q.div_ceil(2) {
        gammas.push(cur);
        gammas.push(fld.mul(&zeta, &cur));
        cur = fld.mul(&cur, &step);
    }
    GammaSet { field: fld, gammas }
}

/// Bitmap over class indices `[0, q)`.
#[derive(Debug, Clone)]
pub struct ClassMarks {
    words: Vec<u64>,
    marked: u64,
}

impl ClassMarks {
    pub fn new(classes: u64) -> Self {
        ClassMarks { words: vec![0; classes.div_ceil(64) as usize], marked: 0 }
    }

    /// Returns true when `index` was not marked before.
    #[inline]
    pub fn mark(&mut self, index: u64) -> bool {
        let (w, b) = ((index / 64) as usize, index % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        if fresh {
            self.words[w] |= 1 << b;
            self.marked += 1;
        }
        fresh
    }

    #[inline]
    pub fn is_marked(&self, index: u64) -> bool {
        self.words[(index / 64) as usize] & (1 << (index % 64)) != 0
    }

    pub fn count(&self) -> u64 {
        self.marked
    }
}

/// Marks of one fast class sweep.
#[derive(Debug, Clone)]
pub struct ClassCover {
    pub marks: ClassMarks,
    pub complete: bool,
}

impl ClassCover {
    pub fn covered(&self) -> u64 {
        self.marks.count()
    }
}

/// Mark the class of every 2-primitive element under `indexer`, stopping once
/// all `q − 1` nonzero classes are hit.
pub fn sweep_classes(list: &TwoPrimitiveList, indexer: &ClassIndexer) -> ClassCover {
    let target = indexer.classes() - 1;
    let mut marks = ClassMarks::new(indexer.classes());
    for coords in list.iter() {
        let idx = indexer.index_coords(coords);
        if idx != 0 && marks.mark(idx) && marks.count() == target {
            return ClassCover { marks, complete: true };
        }
    }
    let complete = marks.count() == target;
    ClassCover { marks, complete }
}

/// Translate key of the first element `θ ∉ F_q` (in packed order) whose class
/// under `indexer` is unmarked; the line of `γ` through `γθ` then misses every
/// 2-primitive element.
pub fn first_uncovered_key(fld: &QuadExtField, marks: &ClassMarks) -> Option<FieldElem> {
    let tr = fld.translate_indexer();
    (0..fld.size()).map(|i| fld.unpack(i)).find_map(|theta| {
        let idx = tr.index(&theta);
        (idx != 0 && !marks.is_marked(idx)).then(|| fld.translate_class_key(&theta).expect("outside F_q"))
    })
}

/// Fast sweep for the lines of one `γ`, with the witness key when incomplete.
pub fn check_lines_fast(
    fld: &QuadExtField,
    list: &TwoPrimitiveList,
    gamma: &FieldElem,
) -> Result<(ClassCover, Option<FieldElem>), Error> {
    let cover = sweep_classes(list, &fld.line_indexer(gamma)?);
    let missing = if cover.complete { None } else { first_uncovered_key(fld, &cover.marks) };
    Ok((cover, missing))
}

/// Untimed report; `holds` iff there is no witness.
pub fn report(fld: &QuadExtField, property: PropertyKind, witness: Option<Witness>, covered: u64) -> PropertyReport {
    PropertyReport {
        q: fld.q(),
        property,
        holds: witness.is_none(),
        witness,
        classes_covered: covered,
        elapsed: Duration::ZERO,
    }
}

/// Translate property via class indexing.
pub fn verify_translate_fast(fld: &QuadExtField) -> PropertyReport {
    let list = TwoPrimitiveList::build(fld);
    let cover = sweep_classes(&list, &fld.translate_indexer());
    let witness = if cover.complete {
        None
    } else {
        Some(Witness::Translate {
            key: first_uncovered_key(fld, &cover.marks).expect("an incomplete cover misses a class"),
        })
    };
    report(fld, PropertyKind::Translate, witness, cover.covered())
}

/// Line property via class indexing, every `γ` of the [`GammaSet`] in order.
pub fn verify_line_fast(fld: &QuadExtField) -> PropertyReport {
    let list = TwoPrimitiveList::build(fld);
    let gammas = build_gamma_set(fld);
    let mut covered = 0;
    let mut witness = None;
    for gamma in &gammas.gammas {
        let (cover, missing) = check_lines_fast(fld, &list, gamma).expect("gammas are nonzero");
        covered += cover.covered();
        if let (None, Some(key)) = (witness, missing) {
            witness = Some(Witness::Line { gamma: *gamma, key });
        }
    }
    report(fld, PropertyKind::Line, witness, covered)
}

/// Literal exponent loop for one multiplier: accept `j` with
/// `gcd(j, q² − 1) = 2` when `((a^i − a^j)/γ)^{q−1} ≠ 1` for every accepted
/// `i`; succeed once `q − 1` exponents are accepted. Returns the accepted
/// `(j, a^j)` pairs.
pub fn check_lines_paper(fld: &QuadExtField, gamma: &FieldElem) -> Result<Vec<(u64, FieldElem)>, Error> {
    let gamma_inv = fld.inv(gamma)?;
    let q = fld.q();
    let order = fld.order();
    let one = fld.one();
    let a = fld.primitive();
    let mut accepted: Vec<(u64, FieldElem)> = Vec::new();
    let mut aj = fld.one();
    for j in 1..order - 1 {
        aj = fld.mul(&aj, &a);
        if gcd(j, order) != 2 {
            continue;
        }
        let not_in_line = accepted.iter().all(|(_, ai)| {
            let d = fld.mul(&fld.sub(ai, &aj), &gamma_inv);
            fld.pow(&d, q - 1) != one
        });
        if not_in_line {
            accepted.push((j, aj));
            if accepted.len() as u64 == q - 1 {
                break;
            }
        }
    }
    Ok(accepted)
}

/// Key of the first `θ ∉ F_q` whose translate key is not among the line keys
/// of `accepted` for `γ`.
fn first_missing_key(fld: &QuadExtField, gamma: &FieldElem, accepted: &[(u64, FieldElem)]) -> FieldElem {
    let seen: BTreeSet<FieldElem> =
        accepted.iter().filter_map(|(_, u)| fld.line_class_key(u, gamma).expect("nonzero gamma")).collect();
    (0..fld.size())
        .filter_map(|i| fld.translate_class_key(&fld.unpack(i)).ok())
        .find(|key| !seen.contains(key))
        .expect("fewer than q - 1 classes accepted")
}

/// Exponent-loop counterpart of [`check_lines_fast`]: the number of accepted
/// exponents and, when short of `q − 1`, the key of a missed line.
pub fn check_lines_paper_cover(fld: &QuadExtField, gamma: &FieldElem) -> Result<(u64, Option<FieldElem>), Error> {
    let accepted = check_lines_paper(fld, gamma)?;
    let covered = accepted.len() as u64;
    let missing = (covered != fld.q() - 1).then(|| first_missing_key(fld, gamma, &accepted));
    Ok((covered, missing))
}

pub fn verify_translate_paper(fld: &QuadExtField) -> PropertyReport {
    let (covered, missing) = check_lines_paper_cover(fld, &fld.one()).expect("one is nonzero");
    report(fld, PropertyKind::Translate, missing.map(|key| Witness::Translate { key }), covered)
}

pub fn verify_line_paper(fld: &QuadExtField) -> PropertyReport {
    let gammas = build_gamma_set(fld);
    let mut covered = 0;
    let mut witness = None;
    for gamma in &gammas.gammas {
        let (n, missing) = check_lines_paper_cover(fld, gamma).expect("gammas are nonzero");
        covered += n;
        if let (None, Some(key)) = (witness, missing) {
            witness = Some(Witness::Line { gamma: *gamma, key });
        }
    }
    report(fld, PropertyKind::Line, witness, covered)
}

/// Order by repeated multiplication.
fn naive_order(fld: &QuadExtField, u: &FieldElem) -> u64 {
    let one = fld.one();
    let mut v = *u;
    let mut t = 1;
    while v != one {
        v = fld.mul(&v, u);
        t += 1;
    }
    t
}

/// Members of the class a witness names, found by scanning all of `F_{q^2}`
/// with exponentiation-based subfield tests.
pub fn witness_members(fld: &QuadExtField, witness: &Witness) -> Result<Vec<FieldElem>, Error> {
    let q = fld.q();
    let (gamma_inv, key) = match witness {
        Witness::Translate { key } => (fld.one(), *key),
        Witness::Line { gamma, key } => (fld.inv(gamma)?, *key),
    };
    Ok((1..fld.size())
        .map(|i| fld.unpack(i))
        .filter(|u| {
            let v = fld.mul(u, &gamma_inv);
            let vq = fld.pow(&v, q);
            vq != v && fld.sub(&vq, &v) == key
        })
        .collect())
}

/// Independent check of a failure witness: the named translate or line has
/// exactly `q` elements, none of multiplicative order `(q² − 1)/2`.
pub fn recheck_witness(fld: &QuadExtField, witness: &Witness) -> Result<bool, Error> {
    let members = witness_members(fld, witness)?;
    let target = fld.order() / 2;
    Ok(members.len() as u64 == fld.q() && members.iter().all(|u| naive_order(fld, u) != target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{euler_phi, factorize, PrimePowerCtx};
    use crate::ffield::build_field;

    fn field(q: u64) -> QuadExtField {
        build_field(&PrimePowerCtx::new(q).unwrap()).unwrap()
    }

    #[test]
    fn two_primitive_list_census() {
        for q in [3u64, 5, 7, 9, 11, 13, 43] {
            let f = field(q);
            let list = TwoPrimitiveList::build(&f);
            assert_eq!(list.len() as u64, euler_phi(&factorize(f.order() / 2)));
            for (i, &j) in list.exponents().iter().enumerate() {
                assert_eq!(list.coords(i), f.pow(&f.primitive(), j).coords());
            }
        }
    }

    #[test]
    fn gamma_set_shape() {
        let f = field(3);
        let g = build_gamma_set(&f);
        assert_eq!(g.gammas.len(), 4);
        assert_eq!(g.gammas[0], f.one());
        assert_eq!(g.gammas[1], f.zeta());
        for q in [5u64, 7, 9, 11, 25] {
            let f = field(q);
            let g = build_gamma_set(&f);
            assert_eq!(g.gammas.len() as u64, q + 1);
            assert!(g.gammas.iter().all(|x| !x.is_zero()));
        }
    }

    #[test]
    fn gamma_set_covers_multiplicative_group() {
        for q in [3u64, 5, 7, 9] {
            let f = field(q);
            let g = build_gamma_set(&f);
            let sub: Vec<FieldElem> = f.subfield_elements().into_iter().filter(|x| !x.is_zero()).collect();
            let mut products: Vec<u64> =
                g.gammas.iter().flat_map(|gm| sub.iter().map(|b| f.pack(&f.mul(gm, b)))).collect();
            products.sort();
            products.dedup();
            assert_eq!(products, (1..f.size()).collect::<Vec<_>>(), "q = {q}");
        }
    }

    #[test]
    fn small_translate_verdicts() {
        for (q, expect) in [(3u64, true), (5, false), (7, false), (9, true), (11, false), (13, false), (17, true)] {
            let f = field(q);
            let fast = verify_translate_fast(&f);
            let paper = verify_translate_paper(&f);
            assert_eq!(fast.holds, expect, "fast q = {q}");
            assert_eq!(paper.holds, expect, "paper q = {q}");
            if expect {
                assert_eq!(fast.classes_covered, q - 1);
                assert_eq!(paper.classes_covered, q - 1);
            } else {
                assert!(recheck_witness(&f, &fast.witness.unwrap()).unwrap());
                assert!(recheck_witness(&f, &paper.witness.unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn small_line_verdicts() {
        for (q, expect) in [(3u64, false), (5, false), (9, false), (17, true), (19, true)] {
            let f = field(q);
            let fast = verify_line_fast(&f);
            let paper = verify_line_paper(&f);
            assert_eq!(fast.holds, expect, "fast q = {q}");
            assert_eq!(paper.holds, expect, "paper q = {q}");
            if !expect {
                assert!(recheck_witness(&f, &fast.witness.unwrap()).unwrap());
                assert!(recheck_witness(&f, &paper.witness.unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn witness_recheck_rejects_good_class() {
        let f = field(17);
        let key = f.translate_class_key(&f.primitive()).unwrap();
        assert!(!recheck_witness(&f, &Witness::Translate { key }).unwrap());
    }
}
