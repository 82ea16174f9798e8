//! Exact integer number theory on 64-bit values.
//!
//! Everything here is total on its stated domain and allocation-light; the
//! only floating point output is [`w_bound_constant`].

use alloc::vec;
use alloc::vec::Vec;

use crate::Error;

/// Trial division bound used by [`factorize`] before switching to Pollard rho.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// A positive integer with its prime factorisation, primes strictly ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// The factored integer.
    pub fn value(&self) -> u64 {
        self.value
    }

    /// `(prime, multiplicity)` pairs in ascending prime order.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Distinct primes in ascending order.
    pub fn primes(&self) -> impl DoubleEndedIterator<Item = u64> + ExactSizeIterator + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Factorisation of `self.value() * other.value()`. The product must fit in a `u64`.
    pub fn mul(&self, other: &Factorization) -> Factorization {
        let value = self.value.checked_mul(other.value).expect("factorization product overflows u64");
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() || j < other.factors.len() {
            match (self.factors.get(i), other.factors.get(j)) {
                (Some(&(p, e)), Some(&(r, f))) if p == r => {
                    factors.push((p, e + f));
                    i += 1;
                    j += 1;
                }
                (Some(&(p, e)), Some(&(r, _))) if p < r => {
                    factors.push((p, e));
                    i += 1;
                }
                (Some(&(p, e)), None) => {
                    factors.push((p, e));
                    i += 1;
                }
                (_, Some(&(r, f))) => {
                    factors.push((r, f));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Factorization { value, factors }
    }

    /// Factorisation of a divisor `d` of `self.value()`, by trial division with
    /// the known primes.
    pub fn restrict(&self, d: u64) -> Result<Factorization, Error> {
        if d == 0 || self.value % d != 0 {
            return Err(Error::NotADivisor { divisor: d, of: self.value });
        }
        let mut rest = d;
        let mut factors = Vec::new();
        for p in self.primes() {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            if e > 0 {
                factors.push((p, e));
            }
        }
        debug_assert_eq!(rest, 1);
        Ok(Factorization { value: d, factors })
    }

    /// All divisors in ascending order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Square-free divisors in ascending order.
    pub fn squarefree_divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for p in self.primes() {
            let len = divs.len();
            for i in 0..len {
                divs.push(divs[i] * p);
            }
        }
        divs.sort_unstable();
        divs
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Brent's variant; `n` must be odd and composite.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
        let mut g = 1u64;
        let mut r = 1u64;
        let mut acc = 1u64;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    acc = mul_mod(acc, x.abs_diff(y), n);
                }
                g = gcd(acc, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Complete factorisation of `n ≥ 1`: trial division up to
/// [`TRIAL_DIVISION_LIMIT`], then Miller–Rabin and Pollard rho on the cofactor.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut rest = n;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut push = |p: u64, rest: &mut u64| {
        let mut e = 0;
        while *rest % p == 0 {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut rest);
    let mut d = 3u64;
    while d <= TRIAL_DIVISION_LIMIT && d * d <= rest {
        push(d, &mut rest);
        d += 2;
    }
    if rest > 1 {
        if d * d > rest {
            factors.push((rest, 1));
        } else {
            let mut big = Vec::new();
            split_into(rest, &mut big);
            big.sort_unstable();
            for p in big {
                match factors.last_mut() {
                    Some((last, e)) if *last == p => *e += 1,
                    _ => factors.push((p, 1)),
                }
            }
        }
    }
    Factorization { value: n, factors }
}

/// Möbius function of `fact.value()`.
pub fn mobius(fact: &Factorization) -> i32 {
    if fact.is_squarefree() {
        if fact.omega() % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        0
    }
}

/// Euler's totient of `fact.value()`.
pub fn euler_phi(fact: &Factorization) -> u64 {
    fact.factors.iter().fold(1u64, |acc, &(p, e)| acc * (p - 1) * p.pow(e - 1))
}

/// `W(n)`, the number of square-free divisors, `2^ω(n)`.
pub fn num_squarefree_divisors(fact: &Factorization) -> u64 {
    1u64 << fact.omega()
}

/// The constant `c_{R,a} = 2^j / (p_1⋯p_j)^{1/a}` over the distinct primes
/// `p_i ≤ 2^a` of `R`, so that `W(R) ≤ c_{R,a} R^{1/a}`.
pub fn w_bound_constant(fact: &Factorization, a: u32) -> f64 {
    assert!(a >= 1, "w_bound_constant requires a >= 1");
    let cap = if a >= 64 { u64::MAX } else { 1u64 << a };
    let mut log2_c = 0.0f64;
    for p in fact.primes().filter(|&p| p <= cap) {
        log2_c += 1.0 - libm::log2(p as f64) / a as f64;
    }
    libm::exp2(log2_c)
}

/// Product of the distinct odd primes of `fact.value()`.
pub fn squarefree_odd_radical(fact: &Factorization) -> u64 {
    fact.primes().filter(|&p| p != 2).product()
}

/// Sieve of Eratosthenes: all primes `≤ n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Primes in `[lo, hi]` by a segmented sieve.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let lo = lo.max(2);
    let base = primes_up_to(isqrt(hi));
    const SEGMENT: u64 = 1 << 18;
    let mut out = Vec::new();
    let mut start = lo;
    loop {
        let end = start.saturating_add(SEGMENT - 1).min(hi);
        let mut composite = vec![false; (end - start + 1) as usize];
        for &p in &base {
            if p * p > end {
                break;
            }
            let first = (start.div_ceil(p) * p).max(p * p);
            let mut m = first;
            while m <= end {
                composite[(m - start) as usize] = true;
                m += p;
            }
        }
        out.extend(composite.iter().enumerate().filter(|(_, &c)| !c).map(|(i, _)| start + i as u64));
        if end == hi {
            break;
        }
        start = end + 1;
    }
    out
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = libm::sqrt(n as f64) as u64;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

/// `Some((p, k))` when `q = p^k` with `p` prime and `k ≥ 1`.
pub fn as_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let fact = factorize(q);
    match fact.factors() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

/// A prime power `q = p^k` with the factorisation of `q² − 1` and the
/// quantities derived from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePowerCtx {
    pub p: u64,
    pub k: u32,
    pub q: u64,
    /// Factorisation of `q² − 1`.
    pub fact_q2m1: Factorization,
    /// `d` with `q² − 1 = 2^d · odd_part`.
    pub two_adic_d: u32,
    pub odd_part: u64,
    /// `R′`: the square-free radical of `odd_part`.
    pub rprime: u64,
    /// `t(q)`: number of distinct primes of `q² − 1`.
    pub t_q: usize,
}

impl PrimePowerCtx {
    /// Context for an odd prime power `q < 2^32`.
    pub fn new(q: u64) -> Result<Self, Error> {
        let (p, k) = as_prime_power(q).ok_or(Error::NotOddPrimePower(q))?;
        Self::from_parts(p, k)
    }

    /// Context for `q = p^k`, with `p` an odd prime.
    pub fn from_parts(p: u64, k: u32) -> Result<Self, Error> {
        let q = p.checked_pow(k).filter(|&q| q < 1 << 32).ok_or(Error::Invalid("q must be below 2^32"))?;
        if p == 2 || !is_prime(p) || k == 0 {
            return Err(Error::NotOddPrimePower(q));
        }
        let fact_q2m1 = factorize(q - 1).mul(&factorize(q + 1));
        let (two_adic_d, odd_part) = match fact_q2m1.factors().first() {
            Some(&(2, d)) => (d, fact_q2m1.value() >> d),
            _ => unreachable!("q^2 - 1 is even for odd q"),
        };
        let rprime = squarefree_odd_radical(&fact_q2m1);
        let t_q = fact_q2m1.omega();
        Ok(PrimePowerCtx { p, k, q, fact_q2m1, two_adic_d, odd_part, rprime, t_q })
    }

    /// `q² − 1`.
    pub fn order(&self) -> u64 {
        self.fact_q2m1.value()
    }

    /// Factorisation of `R′`.
    pub fn rprime_factorization(&self) -> Factorization {
        self.fact_q2m1.restrict(self.rprime).expect("R' divides q^2 - 1")
    }

    /// True when `q ≡ 1 (mod 4)`.
    pub fn is_one_mod_four(&self) -> bool {
        self.q % 4 == 1
    }
}

/// All odd prime powers in `[lo, hi]`, ascending.
pub fn odd_prime_powers(lo: u64, hi: u64) -> Vec<(u64, u64, u32)> {
    let lo = lo.max(3);
    if lo > hi {
        return Vec::new();
    }
    let mut out: Vec<(u64, u64, u32)> =
        primes_in_range(lo, hi).into_iter().filter(|&p| p != 2).map(|p| (p, p, 1)).collect();
    for p in primes_up_to(isqrt(hi)).into_iter().filter(|&p| p != 2) {
        let mut k = 2;
        let mut pk = p * p;
        while pk <= hi {
            if pk >= lo {
                out.push((pk, p, k));
            }
            k += 1;
            match pk.checked_mul(p) {
                Some(next) => pk = next,
                None => break,
            }
        }
    }
    out.sort_unstable();
    out
}

/// Contexts for every odd prime power in `[lo, hi]`, ascending.
pub fn enumerate_odd_prime_powers(lo: u64, hi: u64) -> Vec<PrimePowerCtx> {
    odd_prime_powers(lo, hi)
        .into_iter()
        .map(|(_, p, k)| PrimePowerCtx::from_parts(p, k).expect("enumerated odd prime power"))
        .collect()
}
