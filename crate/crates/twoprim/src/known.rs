//! Published results the drivers compare against.

/// Odd prime powers in `[3, 2^20]` that neither character-sum condition settles.
pub const SCAN_EXCEPTIONS: [u64; 101] = [
    3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31, 37, 41, 43, 47, 49, 53, 59, 61, 67, 71, 73, 79, 81, 83, 89, 97,
    101, 103, 109, 113, 121, 125, 127, 131, 137, 139, 149, 151, 157, 169, 173, 181, 191, 197, 199, 211, 229, 239, 241,
    269, 281, 307, 311, 331, 337, 349, 361, 373, 379, 389, 409, 419, 421, 461, 463, 509, 521, 529, 569, 571, 601, 617,
    631, 659, 661, 701, 761, 769, 841, 859, 881, 911, 1009, 1021, 1231, 1289, 1301, 1331, 1429, 1609, 1741, 1849, 1861,
    2029, 2281, 2311, 2729, 3541,
];

/// `q` without the translate property.
pub const TRANSLATE_EXCEPTIONS: [u64; 6] = [5, 7, 11, 13, 31, 41];

/// `q` without the line property.
pub const LINE_EXCEPTIONS: [u64; 8] = [3, 5, 7, 9, 11, 13, 31, 41];

/// Scan range with published counts.
pub const SCAN_RANGE: (u64, u64) = (3, 1_048_576);
pub const SCAN_TOTAL: usize = 82_247;
pub const SCAN_BASIC_FAILURES: usize = 2_425;
pub const SCAN_MAX_BASIC_FAILURE: u64 = 1_044_889;

/// `(t1, t2)` pairs for which the sieving bound is claimed to settle every `q`.
pub const ALGORITHM1_CLAIMS: [(u32, u32); 2] = [(11, 13), (10, 10)];

/// Largest `q` for which the line property is checked by default.
pub const DEFAULT_LINE_MAX_Q: u64 = 1021;

/// Restriction of a sorted exception list to the `q` actually examined.
pub fn expected_within(list: &[u64], examined: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = examined.iter().copied().filter(|q| list.contains(q)).collect();
    out.sort_unstable();
    out.dedup();
    out
}
