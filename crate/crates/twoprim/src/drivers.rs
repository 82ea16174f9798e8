//! Timed, parallel front ends for the core verifiers.
//!
//! Results do not depend on the thread count: translate marking is idempotent
//! and only stops early once every class is hit, and the line witness is taken
//! from the lowest failing `γ` index.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use twoprim_core::verify::{
    self, build_gamma_set, check_lines_fast, check_lines_paper_cover, ClassMarks, TwoPrimitiveList,
};
use twoprim_core::{FieldElem, PropertyKind, PropertyReport, QuadExtField, Witness};

/// Which implementation decides a property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    /// Exponent loop with pairwise `((a^i − a^j)/γ)^{q−1}` tests.
    Paper,
    /// Linear class indexing with a bitmap.
    Fast,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::Paper => "paper",
            Route::Fast => "fast",
        }
    }
}

/// Run one verifier and record its wall time.
pub fn verify(fld: &QuadExtField, property: PropertyKind, route: Route) -> PropertyReport {
    let start = Instant::now();
    let mut report = match (property, route) {
        (PropertyKind::Translate, Route::Fast) => translate_fast(fld),
        (PropertyKind::Translate, Route::Paper) => verify::verify_translate_paper(fld),
        (PropertyKind::Line, route) => line(fld, route),
    };
    report.elapsed = start.elapsed();
    report
}

const BLOCK: usize = 4096;

struct SharedMarks {
    words: Vec<AtomicU64>,
    count: AtomicU64,
}

impl SharedMarks {
    fn new(classes: u64) -> Self {
        SharedMarks { words: (0..classes.div_ceil(64)).map(|_| AtomicU64::new(0)).collect(), count: AtomicU64::new(0) }
    }

    /// Marks `index`; returns the running count if the bit was fresh.
    fn mark(&self, index: u64) -> Option<u64> {
        let bit = 1u64 << (index % 64);
        let prev = self.words[(index / 64) as usize].fetch_or(bit, Ordering::Relaxed);
        (prev & bit == 0).then(|| self.count.fetch_add(1, Ordering::Relaxed) + 1)
    }

    fn into_marks(self, classes: u64) -> ClassMarks {
        let mut marks = ClassMarks::new(classes);
        for (w, word) in self.words.into_iter().enumerate() {
            let mut bits = word.into_inner();
            while bits != 0 {
                marks.mark(w as u64 * 64 + bits.trailing_zeros() as u64);
                bits &= bits - 1;
            }
        }
        marks
    }
}

fn translate_fast(fld: &QuadExtField) -> PropertyReport {
    let list = TwoPrimitiveList::build(fld);
    let indexer = fld.translate_indexer();
    let classes = indexer.classes();
    let target = classes - 1;
    let shared = SharedMarks::new(classes);
    let done = AtomicBool::new(false);
    (0..list.len().div_ceil(BLOCK)).into_par_iter().for_each(|b| {
        if done.load(Ordering::Relaxed) {
            return;
        }
        for i in b * BLOCK..((b + 1) * BLOCK).min(list.len()) {
            let idx = indexer.index_coords(list.coords(i));
            if idx != 0 && shared.mark(idx) == Some(target) {
                done.store(true, Ordering::Relaxed);
                return;
            }
        }
    });
    let marks = shared.into_marks(classes);
    let covered = marks.count();
    let witness = (covered != target).then(|| Witness::Translate {
        key: verify::first_uncovered_key(fld, &marks).expect("an incomplete cover misses a class"),
    });
    verify::report(fld, PropertyKind::Translate, witness, covered)
}

fn line(fld: &QuadExtField, route: Route) -> PropertyReport {
    let gammas = build_gamma_set(fld).gammas;
    let list = (route == Route::Fast).then(|| TwoPrimitiveList::build(fld));
    let per_gamma: Vec<(u64, Option<FieldElem>)> = gammas
        .par_iter()
        .map(|gamma| match &list {
            Some(list) => {
                let (cover, missing) = check_lines_fast(fld, list, gamma).expect("gammas are nonzero");
                (cover.covered(), missing)
            }
            None => check_lines_paper_cover(fld, gamma).expect("gammas are nonzero"),
        })
        .collect();
    let covered = per_gamma.iter().map(|(n, _)| n).sum();
    let witness = gammas
        .iter()
        .zip(&per_gamma)
        .find_map(|(gamma, (_, missing))| missing.map(|key| Witness::Line { gamma: *gamma, key }));
    verify::report(fld, PropertyKind::Line, witness, covered)
}
