#![allow(dead_code)]

/// The prime powers left over by the criteria scan.
pub const SCAN_EXCEPTIONS: [u64; 101] = [
    3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31, 37, 41, 43, 47, 49, 53, 59, 61, 67, 71, 73, 79, 81, 83, 89, 97,
    101, 103, 109, 113, 121, 125, 127, 131, 137, 139, 149, 151, 157, 169, 173, 181, 191, 197, 199, 211, 229, 239, 241,
    269, 281, 307, 311, 331, 337, 349, 361, 373, 379, 389, 409, 419, 421, 461, 463, 509, 521, 529, 569, 571, 601, 617,
    631, 659, 661, 701, 761, 769, 841, 859, 881, 911, 1009, 1021, 1231, 1289, 1301, 1331, 1429, 1609, 1741, 1849, 1861,
    2029, 2281, 2311, 2729, 3541,
];
