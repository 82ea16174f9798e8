//! Multiplicative character sums over small `F_{q^2}`, used as a numerical
//! oracle for the identities behind [`crate::criteria`].
//!
//! Characters are `χ_t(a^j) = e^{2πi·tj/(q²−1)}`, evaluated through a discrete
//! logarithm table built by one sweep over the powers of `a`. Every quantity
//! also has an exact counterpart decided from multiplicative orders, so the
//! character expansions can be compared against ground truth.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Mul, Sub};

use crate::arith::{euler_phi, gcd, lcm, mobius, Factorization};
use crate::ffield::QuadExtField;
use crate::{Error, FieldElem};

/// Largest `q` the oracle accepts.
pub const ORACLE_CAP: u64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexVal {
    pub re: f64,
    pub im: f64,
}

impl ComplexVal {
    pub const ZERO: ComplexVal = ComplexVal { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Self {
        ComplexVal { re, im }
    }

    /// `e^{iφ}`.
    pub fn from_angle(phi: f64) -> Self {
        let (s, c) = libm::sincos(phi);
        ComplexVal { re: c, im: s }
    }

    pub fn abs(self) -> f64 {
        libm::hypot(self.re, self.im)
    }

    pub fn scale(self, k: f64) -> Self {
        ComplexVal { re: self.re * k, im: self.im * k }
    }
}

impl Add for ComplexVal {
    type Output = ComplexVal;
    fn add(self, o: ComplexVal) -> ComplexVal {
        ComplexVal { re: self.re + o.re, im: self.im + o.im }
    }
}

impl AddAssign for ComplexVal {
    fn add_assign(&mut self, o: ComplexVal) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl Sub for ComplexVal {
    type Output = ComplexVal;
    fn sub(self, o: ComplexVal) -> ComplexVal {
        ComplexVal { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for ComplexVal {
    type Output = ComplexVal;
    fn mul(self, o: ComplexVal) -> ComplexVal {
        ComplexVal { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

/// The character `χ_t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharIndex {
    pub t: u64,
    /// `(q² − 1)/gcd(t, q² − 1)`.
    pub order: u64,
}

impl CharIndex {
    pub fn new(t: u64, group_order: u64) -> Self {
        let t = t % group_order;
        CharIndex { t, order: group_order / gcd(t, group_order) }
    }

    pub fn is_trivial(&self) -> bool {
        self.t == 0
    }
}

/// Direct and character-expansion values of `N_R(θ, α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NCount {
    pub direct: u64,
    pub via_formula: f64,
}

/// Discrete-log backed character table for one field.
pub struct CharacterTable<'a> {
    fld: &'a QuadExtField,
    /// `dlog[pack(a^j)] = j`; slot 0 (the zero element) is unused.
    dlog: Vec<u32>,
    /// `roots[k] = e^{2πik/(q² − 1)}`.
    roots: Vec<ComplexVal>,
    subfield: Vec<FieldElem>,
}

impl<'a> CharacterTable<'a> {
    /// Table for `q ≤` [`ORACLE_CAP`].
    pub fn new(fld: &'a QuadExtField) -> Result<Self, Error> {
        if fld.q() > ORACLE_CAP {
            return Err(Error::OracleCap { q: fld.q(), cap: ORACLE_CAP });
        }
        let mut dlog = vec![u32::MAX; fld.size() as usize];
        let a = fld.primitive();
        let mut cur = fld.one();
        for j in 0..fld.order() {
            dlog[fld.pack(&cur) as usize] = j as u32;
            cur = fld.mul(&cur, &a);
        }
        let n = fld.order();
        let roots = (0..n).map(|k| ComplexVal::from_angle(2.0 * core::f64::consts::PI * k as f64 / n as f64)).collect();
        Ok(CharacterTable { fld, dlog, roots, subfield: fld.subfield_elements() })
    }

    /// Bytes held by a table for `q`.
    pub fn footprint(q: u64) -> u64 {
        let size = q * q;
        size * core::mem::size_of::<u32>() as u64 + size * core::mem::size_of::<ComplexVal>() as u64
    }

    pub fn field(&self) -> &QuadExtField {
        self.fld
    }

    fn group_order(&self) -> u64 {
        self.fld.order()
    }

    /// `log_a(u)`.
    pub fn dlog(&self, u: &FieldElem) -> Result<u64, Error> {
        if u.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.dlog[self.fld.pack(u) as usize] as u64)
    }

    /// All characters of exact order `d`, ascending `t`.
    pub fn characters_of_order(&self, d: u64) -> Result<Vec<CharIndex>, Error> {
        let n = self.group_order();
        self.require_divisor(d)?;
        Ok((0..d).filter(|&s| gcd(s, d) == 1).map(|s| CharIndex::new(s * (n / d), n)).collect())
    }

    fn require_divisor(&self, d: u64) -> Result<(), Error> {
        let n = self.group_order();
        if d == 0 || n % d != 0 {
            return Err(Error::NotADivisor { divisor: d, of: n });
        }
        Ok(())
    }

    #[inline]
    fn eval_log(&self, t: u64, j: u64) -> ComplexVal {
        let n = self.group_order();
        self.roots[((t as u128 * j as u128) % n as u128) as usize]
    }

    /// `χ(u)` for `u ≠ 0`.
    pub fn char_eval(&self, chi: CharIndex, u: &FieldElem) -> Result<ComplexVal, Error> {
        Ok(self.eval_log(chi.t, self.dlog(u)?))
    }

    /// `B = Σ_{x ∈ F_q} χ(θ + x)` for `θ ∉ F_q`.
    pub fn translate_sum_b(&self, chi: CharIndex, theta: &FieldElem) -> Result<ComplexVal, Error> {
        if self.fld.in_subfield(theta) {
            return Err(Error::InSubfield);
        }
        let mut acc = ComplexVal::ZERO;
        for x in &self.subfield {
            acc += self.char_eval(chi, &self.fld.add(theta, x))?;
        }
        Ok(acc)
    }

    fn factor_divisor(&self, m: u64) -> Result<Factorization, Error> {
        self.fld.ctx().fact_q2m1.restrict(m)
    }

    /// `Ω_m(x) = θ(m) Σ_{d|m} μ(d)/φ(d) Σ_{ord χ = d} χ(x)`, ≈ 1 on `m`-free
    /// elements and ≈ 0 elsewhere.
    pub fn omega_m(&self, x: &FieldElem, m: u64) -> Result<f64, Error> {
        let j = self.dlog(x)?;
        let m_fact = self.factor_divisor(m)?;
        let mut acc = 0.0;
        for d in m_fact.divisors() {
            let d_fact = m_fact.restrict(d)?;
            let mu = mobius(&d_fact);
            if mu == 0 {
                continue;
            }
            let inner: f64 = self.characters_of_order(d)?.iter().map(|c| self.eval_log(c.t, j).re).sum();
            acc += mu as f64 / euler_phi(&d_fact) as f64 * inner;
        }
        Ok(euler_phi(&m_fact) as f64 / m as f64 * acc)
    }

    /// `w_k(x) = (1/k) Σ_{d|k} Σ_{ord χ = d} χ(x)`, ≈ 1 on `k`-th powers.
    pub fn w_k_indicator(&self, x: &FieldElem, k: u64) -> Result<f64, Error> {
        let j = self.dlog(x)?;
        self.require_divisor(k)?;
        let n = self.group_order();
        let sum: f64 = (0..k).map(|s| self.eval_log(s * (n / k), j).re).sum();
        Ok(sum / k as f64)
    }

    /// `Γ_R(x) = Ω_R(x)(w_2(x) − w_4(x))`.
    pub fn gamma_r(&self, x: &FieldElem, r: u64) -> Result<f64, Error> {
        self.require_rprime_divisor(r)?;
        Ok(self.omega_m(x, r)? * (self.w_k_indicator(x, 2)? - self.w_k_indicator(x, 4)?))
    }

    /// `Γ_R` through the expanded double sum with weights `ℓ_δ = ±1/2`.
    pub fn gamma_r_expanded(&self, x: &FieldElem, r: u64) -> Result<f64, Error> {
        self.require_rprime_divisor(r)?;
        let j = self.dlog(x)?;
        let r_fact = self.factor_divisor(r)?;
        let mut acc = 0.0;
        for d in r_fact.divisors() {
            let d_fact = r_fact.restrict(d)?;
            let mu = mobius(&d_fact);
            if mu == 0 {
                continue;
            }
            let chis = self.characters_of_order(d)?;
            for delta in [1u64, 2, 4] {
                let ell = if delta == 4 { -0.5 } else { 0.5 };
                for psi in self.characters_of_order(delta)? {
                    let inner: f64 = chis.iter().map(|c| self.eval_log(c.t + psi.t, j).re).sum();
                    acc += mu as f64 / euler_phi(&d_fact) as f64 * ell * inner;
                }
            }
        }
        Ok(euler_phi(&r_fact) as f64 / r as f64 / 2.0 * acc)
    }

    fn require_rprime_divisor(&self, r: u64) -> Result<(), Error> {
        let rp = self.fld.ctx().rprime;
        if r == 0 || rp % r != 0 {
            return Err(Error::NotADivisor { divisor: r, of: rp });
        }
        Ok(())
    }

    /// `m`-free: `gcd(m, (q² − 1)/ord x) = 1`.
    pub fn is_m_free(&self, x: &FieldElem, m: u64) -> Result<bool, Error> {
        self.require_divisor(m)?;
        let ord = self.fld.element_order(x)?;
        Ok(gcd(m, self.group_order() / ord) == 1)
    }

    /// `x` is a `k`-th power: `x^{(q² − 1)/k} = 1`.
    pub fn is_kth_power(&self, x: &FieldElem, k: u64) -> Result<bool, Error> {
        self.require_divisor(k)?;
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.fld.pow(x, self.group_order() / k) == self.fld.one())
    }

    /// Exact `Γ_R`: `R`-free, a square, and not a fourth power.
    pub fn gamma_r_exact(&self, x: &FieldElem, r: u64) -> Result<bool, Error> {
        self.require_rprime_divisor(r)?;
        Ok(self.is_m_free(x, r)? && self.is_kth_power(x, 2)? && !self.is_kth_power(x, 4)?)
    }

    fn line_points(&self, theta: &FieldElem, alpha: &FieldElem) -> Result<Vec<FieldElem>, Error> {
        if self.fld.in_subfield(theta) {
            return Err(Error::InSubfield);
        }
        if alpha.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.subfield.iter().map(|x| self.fld.mul(alpha, &self.fld.add(theta, x))).collect())
    }

    /// `X(χ_t) = Σ_x χ_t(α(θ + x))` for the combined index `t`.
    fn x_sum(&self, t: u64, logs: &[u64]) -> ComplexVal {
        let mut acc = ComplexVal::ZERO;
        for &j in logs {
            acc += self.eval_log(t, j);
        }
        acc
    }

    /// `Y(χ) = X(χ, χ_0) + X(χ, η) − X(χ, η_1) − X(χ, η_2)` on the line `α(θ + F_q)`.
    pub fn y_sum(&self, chi: CharIndex, theta: &FieldElem, alpha: &FieldElem) -> Result<ComplexVal, Error> {
        let logs = self.line_logs(theta, alpha)?;
        Ok(self.y_from_logs(chi, &logs))
    }

    fn line_logs(&self, theta: &FieldElem, alpha: &FieldElem) -> Result<Vec<u64>, Error> {
        self.line_points(theta, alpha)?.iter().map(|u| self.dlog(u)).collect()
    }

    fn y_from_logs(&self, chi: CharIndex, logs: &[u64]) -> ComplexVal {
        let n = self.group_order();
        let (eta, eta1, eta2) = (n / 2, n / 4, 3 * n / 4);
        self.x_sum(chi.t, logs) + self.x_sum(chi.t + eta, logs)
            - self.x_sum(chi.t + eta1, logs)
            - self.x_sum(chi.t + eta2, logs)
    }

    /// `N_R(θ, α)` counted directly and through
    /// `4 N_R / θ(R) = Σ_{d|R} μ(d)/φ(d) Σ_{ord χ = d} Y(χ)`.
    pub fn count_n_r(&self, theta: &FieldElem, alpha: &FieldElem, r: u64) -> Result<NCount, Error> {
        self.require_rprime_divisor(r)?;
        let points = self.line_points(theta, alpha)?;
        let mut direct = 0;
        for u in &points {
            if self.gamma_r_exact(u, r)? {
                direct += 1;
            }
        }
        let logs: Vec<u64> = points.iter().map(|u| self.dlog(u)).collect::<Result<_, _>>()?;
        let r_fact = self.factor_divisor(r)?;
        let mut acc = ComplexVal::ZERO;
        for d in r_fact.divisors() {
            let d_fact = r_fact.restrict(d)?;
            let mu = mobius(&d_fact);
            if mu == 0 {
                continue;
            }
            let mut inner = ComplexVal::ZERO;
            for chi in self.characters_of_order(d)? {
                inner += self.y_from_logs(chi, &logs);
            }
            acc += inner.scale(mu as f64 / euler_phi(&d_fact) as f64);
        }
        let theta_r = euler_phi(&r_fact) as f64 / r as f64;
        Ok(NCount { direct, via_formula: acc.re * theta_r / 4.0 })
    }

    fn count_direct(&self, theta: &FieldElem, alpha: &FieldElem, r: u64) -> Result<u64, Error> {
        let mut n = 0;
        for u in self.line_points(theta, alpha)? {
            if self.gamma_r_exact(&u, r)? {
                n += 1;
            }
        }
        Ok(n)
    }

    /// `N_m ≥ Σ N_{r_i} − (s − 1) N_{r_0}` for divisors `r_1..r_s` of `m | R′`
    /// with pairwise gcd `r_0` and lcm `m`.
    pub fn check_sieve_inequality(
        &self,
        theta: &FieldElem,
        alpha: &FieldElem,
        m: u64,
        r0: u64,
        rs: &[u64],
    ) -> Result<bool, Error> {
        validate_family(self.fld.ctx().rprime, m, r0, rs)?;
        let lhs = self.count_direct(theta, alpha, m)? as i64;
        let mut rhs = -((rs.len() as i64 - 1) * self.count_direct(theta, alpha, r0)? as i64);
        for &r in rs {
            rhs += self.count_direct(theta, alpha, r)? as i64;
        }
        Ok(lhs >= rhs)
    }
}

/// Checks the hypotheses on a sieving divisor family.
pub fn validate_family(rprime: u64, m: u64, r0: u64, rs: &[u64]) -> Result<(), Error> {
    if m == 0 || rprime % m != 0 {
        return Err(Error::NotADivisor { divisor: m, of: rprime });
    }
    if rs.is_empty() {
        return Err(Error::BadDivisorFamily("empty family"));
    }
    if r0 == 0 || rs.iter().any(|&r| r == 0 || m % r != 0 || r % r0 != 0) {
        return Err(Error::BadDivisorFamily("members must divide m and be multiples of r0"));
    }
    for (i, &a) in rs.iter().enumerate() {
        if rs[i + 1..].iter().any(|&b| gcd(a, b) != r0) {
            return Err(Error::BadDivisorFamily("pairwise gcd must equal r0"));
        }
    }
    if rs.iter().fold(1, |acc, &r| lcm(acc, r)) != m {
        return Err(Error::BadDivisorFamily("lcm must equal m"));
    }
    Ok(())
}
