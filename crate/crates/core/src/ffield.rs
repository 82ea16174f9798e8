//! Arithmetic in `F_{q^2}`, `q = p^k` odd, realised as a single degree `2k`
//! extension of `F_p`.
//!
//! `F_q` is never given coordinates of its own: it is the fixed field of the
//! `q`-power Frobenius, and membership is decided by `u^q = u`. Because the
//! `q`-power map is `F_p`-linear it is stored as a matrix, which also makes the
//! translate key `u ↦ u^q − u` a linear map. [`ClassIndexer`] exploits this to
//! number translate classes (and, after composing with multiplication by
//! `γ^{-1}`, the lines of `γ`) with a handful of multiply-adds.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{gcd, PrimePowerCtx};
use crate::Error;

/// Largest supported degree of `F_{q^2}` over its prime field. Covers every odd
/// prime power below `2^32` (`3^20 < 2^32`).
pub const MAX_DEGREE: usize = 40;

/// An element of `F_{q^2}`: coordinates against the power basis `1, x, …, x^{n−1}`
/// of the defining modulus. Unused trailing slots are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    len: u8,
    coords: [u32; MAX_DEGREE],
}

impl FieldElem {
    fn zero_of(len: usize) -> Self {
        FieldElem { len: len as u8, coords: [0; MAX_DEGREE] }
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords[..self.len as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FieldElem {
    /// Colon-separated coordinates, constant term first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                f.write_str(":")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElem({self})")
    }
}

/// `F_p[x] / (f)` for a monic `f` of degree `n`.
#[derive(Debug, Clone)]
struct PolyRing {
    p: u64,
    n: usize,
    /// Low coefficients `f_0 .. f_{n−1}` of the monic modulus.
    low: Vec<u64>,
}

impl PolyRing {
    fn elem(&self, coeffs: &[u64]) -> FieldElem {
        let mut e = FieldElem::zero_of(self.n);
        for (slot, &c) in e.coords.iter_mut().zip(coeffs) {
            *slot = (c % self.p) as u32;
        }
        e
    }

    fn one(&self) -> FieldElem {
        self.elem(&[1])
    }

    fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let (n, p) = (self.n, self.p as u128);
        let mut prod = [0u128; 2 * MAX_DEGREE];
        for (i, &ai) in a.coords[..n].iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.coords[..n].iter().enumerate() {
                prod[i + j] += ai as u128 * bj as u128;
            }
        }
        for i in (n..2 * n - 1).rev() {
            let c = prod[i] % p;
            if c == 0 {
                continue;
            }
            for (j, &fj) in self.low.iter().enumerate() {
                prod[i - n + j] += c * ((p - fj as u128) % p);
            }
        }
        let mut out = FieldElem::zero_of(n);
        for (slot, &v) in out.coords[..n].iter_mut().zip(&prod[..n]) {
            *slot = (v % p) as u32;
        }
        out
    }

    fn pow(&self, base: &FieldElem, mut exp: u64) -> FieldElem {
        let mut acc = self.one();
        let mut b = *base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            exp >>= 1;
            if exp > 0 {
                b = self.mul(&b, &b);
            }
        }
        acc
    }
}

// Dense polynomials over F_p, lowest coefficient first, no trailing zeros.
fn poly_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    crate::arith::pow_mod(a, p - 2, p)
}

fn poly_rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let lead_inv = inv_mod_p(b[db], p);
    while a.len() > db {
        let top = *a.last().unwrap();
        if top != 0 {
            let c = crate::arith::mul_mod(top, lead_inv, p);
            let shift = a.len() - 1 - db;
            for (j, &bj) in b.iter().enumerate() {
                let sub = crate::arith::mul_mod(c, bj, p);
                a[shift + j] = (a[shift + j] + p - sub) % p;
            }
        }
        a.pop();
        a = poly_trim(a);
    }
    a
}

fn poly_gcd(a: Vec<u64>, b: Vec<u64>, p: u64) -> Vec<u64> {
    let (mut a, mut b) = (poly_trim(a), poly_trim(b));
    while !b.is_empty() {
        let r = poly_rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test: `f` (monic, degree `n`) is irreducible iff `x^{p^n} ≡ x` and
/// `gcd(x^{p^{n/r}} − x, f) = 1` for each prime `r | n`.
fn is_irreducible(ring: &PolyRing) -> bool {
    let (n, p) = (ring.n, ring.p);
    if ring.low[0] == 0 {
        return false;
    }
    let x = ring.elem(&[0, 1]);
    let mut frob_powers = Vec::with_capacity(n + 1);
    let mut h = x;
    frob_powers.push(h);
    for _ in 0..n {
        h = ring.pow(&h, p);
        frob_powers.push(h);
    }
    if frob_powers[n] != x {
        return false;
    }
    let mut modulus: Vec<u64> = ring.low.clone();
    modulus.push(1);
    let n_fact = crate::arith::factorize(n as u64);
    let irreducible = n_fact.primes().all(|r| {
        let h = &frob_powers[n / r as usize];
        let mut diff: Vec<u64> = h.coords().iter().map(|&c| c as u64).collect();
        diff[1] = (diff[1] + p - 1) % p;
        poly_gcd(modulus.clone(), diff, p).len() == 1
    });
    irreducible
}

/// `F_{q^2}` with a fixed modulus, primitive element `a` and `ζ = a^{odd part}`.
#[derive(Debug, Clone)]
pub struct QuadExtField {
    ctx: PrimePowerCtx,
    ring: PolyRing,
    /// Column `i` holds the coordinates of `(x^i)^q`; row-major `n × n`.
    frob_q: Vec<u64>,
    a: FieldElem,
    zeta: FieldElem,
}

/// Field for an odd prime power context. Deterministic: the modulus is the
/// first irreducible monic polynomial in ascending coefficient order and `a`
/// the first primitive candidate among `x, x + 1, x + 2, …`.
pub fn build_field(ctx: &PrimePowerCtx) -> Result<QuadExtField, Error> {
    QuadExtField::new(ctx.clone())
}

impl QuadExtField {
    pub fn new(ctx: PrimePowerCtx) -> Result<Self, Error> {
        if ctx.q % 2 == 0 {
            return Err(Error::NotOddPrimePower(ctx.q));
        }
        let n = 2 * ctx.k as usize;
        if n > MAX_DEGREE {
            return Err(Error::DegreeTooLarge { q: ctx.q, degree: n });
        }
        let p = ctx.p;
        let ring = first_irreducible(p, n);
        let mut fld =
            QuadExtField { ring, frob_q: Vec::new(), a: FieldElem::zero_of(n), zeta: FieldElem::zero_of(n), ctx };
        fld.frob_q = fld.frobenius_matrix();
        fld.a = fld.find_primitive();
        fld.zeta = fld.pow(&fld.a, fld.ctx.odd_part);
        Ok(fld)
    }

    fn frobenius_matrix(&self) -> Vec<u64> {
        let n = self.ring.n;
        let xq = self.ring.pow(&self.ring.elem(&[0, 1]), self.ctx.q);
        let mut m = vec![0u64; n * n];
        let mut col = self.one();
        for c in 0..n {
            for r in 0..n {
                m[r * n + c] = col.coords[r] as u64;
            }
            col = self.ring.mul(&col, &xq);
        }
        m
    }

    fn find_primitive(&self) -> FieldElem {
        let p = self.ring.p;
        let linear = (0..p).map(|c| self.ring.elem(&[c, 1]));
        let rest = (0..self.size()).map(|i| self.unpack(i));
        linear.chain(rest).find(|u| !u.is_zero() && self.is_primitive(u)).expect("F_{q^2}^* is cyclic")
    }

    fn is_primitive(&self, u: &FieldElem) -> bool {
        let order = self.order();
        let one = self.one();
        self.pow(u, order) == one && self.ctx.fact_q2m1.primes().all(|l| self.pow(u, order / l) != one)
    }

    pub fn ctx(&self) -> &PrimePowerCtx {
        &self.ctx
    }

    pub fn q(&self) -> u64 {
        self.ctx.q
    }

    pub fn p(&self) -> u64 {
        self.ring.p
    }

    /// Degree of `F_{q^2}` over `F_p`.
    pub fn degree(&self) -> usize {
        self.ring.n
    }

    /// `q² − 1`, the order of the multiplicative group.
    pub fn order(&self) -> u64 {
        self.ctx.order()
    }

    /// `q²`, the number of elements.
    pub fn size(&self) -> u64 {
        self.order() + 1
    }

    /// Low coefficients of the monic defining polynomial.
    pub fn modulus(&self) -> &[u64] {
        &self.ring.low
    }

    /// The fixed primitive element `a`.
    pub fn primitive(&self) -> FieldElem {
        self.a
    }

    /// `ζ = a^{odd part of q² − 1}`, a primitive `2^d`-th root of unity.
    pub fn zeta(&self) -> FieldElem {
        self.zeta
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::zero_of(self.ring.n)
    }

    pub fn one(&self) -> FieldElem {
        self.ring.one()
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, c: u64) -> FieldElem {
        self.ring.elem(&[c])
    }

    /// Element with the given coordinates; every coordinate must be below `p`.
    pub fn from_coords(&self, coords: &[u32]) -> Result<FieldElem, Error> {
        if coords.len() != self.ring.n || coords.iter().any(|&c| c as u64 >= self.ring.p) {
            return Err(Error::Invalid("coordinates must be n residues below p"));
        }
        let mut e = self.zero();
        e.coords[..coords.len()].copy_from_slice(coords);
        Ok(e)
    }

    /// Base-`p` packing of the coordinates, a bijection onto `[0, q²)`.
    pub fn pack(&self, u: &FieldElem) -> u64 {
        u.coords().iter().rev().fold(0u64, |acc, &c| acc * self.ring.p + c as u64)
    }

    pub fn unpack(&self, mut index: u64) -> FieldElem {
        let mut e = self.zero();
        for slot in e.coords[..self.ring.n].iter_mut() {
            *slot = (index % self.ring.p) as u32;
            index /= self.ring.p;
        }
        e
    }

    pub fn add(&self, u: &FieldElem, v: &FieldElem) -> FieldElem {
        let p = self.ring.p;
        let mut out = *u;
        for (o, &b) in out.coords[..self.ring.n].iter_mut().zip(&v.coords) {
            *o = ((*o as u64 + b as u64) % p) as u32;
        }
        out
    }

    pub fn neg(&self, u: &FieldElem) -> FieldElem {
        let p = self.ring.p;
        let mut out = *u;
        for o in out.coords[..self.ring.n].iter_mut() {
            *o = ((p - *o as u64) % p) as u32;
        }
        out
    }

    pub fn sub(&self, u: &FieldElem, v: &FieldElem) -> FieldElem {
        self.add(u, &self.neg(v))
    }

    pub fn mul(&self, u: &FieldElem, v: &FieldElem) -> FieldElem {
        self.ring.mul(u, v)
    }

    /// Multiplication by an element of the prime field.
    pub fn scale(&self, u: &FieldElem, c: u64) -> FieldElem {
        let p = self.ring.p;
        let c = c % p;
        let mut out = *u;
        for o in out.coords[..self.ring.n].iter_mut() {
            *o = crate::arith::mul_mod(*o as u64, c, p) as u32;
        }
        out
    }

    /// `u^e`; for nonzero `u` the exponent is reduced modulo `q² − 1`.
    pub fn pow(&self, u: &FieldElem, e: u64) -> FieldElem {
        if u.is_zero() {
            return if e == 0 { self.one() } else { self.zero() };
        }
        self.ring.pow(u, e % self.order())
    }

    pub fn inv(&self, u: &FieldElem) -> Result<FieldElem, Error> {
        if u.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.ring.pow(u, self.order() - 1))
    }

    /// `u^q`, applied as a linear map.
    pub fn frobenius_q(&self, u: &FieldElem) -> FieldElem {
        let n = self.ring.n;
        let p = self.ring.p as u128;
        let mut out = self.zero();
        for (r, slot) in out.coords[..n].iter_mut().enumerate() {
            let row = &self.frob_q[r * n..(r + 1) * n];
            let acc: u128 = row.iter().zip(u.coords()).map(|(&m, &c)| m as u128 * c as u128).sum();
            *slot = (acc % p) as u32;
        }
        out
    }

    /// `u ∈ F_q`, i.e. `u^q = u`.
    pub fn in_subfield(&self, u: &FieldElem) -> bool {
        self.frobenius_q(u) == *u
    }

    /// The `q` elements of `F_q`: zero followed by the powers of `a^{q+1}`.
    pub fn subfield_elements(&self) -> Vec<FieldElem> {
        let g = self.pow(&self.a, self.q() + 1);
        let mut out = Vec::with_capacity(self.q() as usize);
        out.push(self.zero());
        let mut cur = self.one();
        for _ in 0..self.q() - 1 {
            out.push(cur);
            cur = self.mul(&cur, &g);
        }
        out
    }

    /// Multiplicative order, found by stripping primes of `q² − 1`.
    pub fn element_order(&self, u: &FieldElem) -> Result<u64, Error> {
        if u.is_zero() {
            return Err(Error::ZeroElement);
        }
        let one = self.one();
        let mut t = self.order();
        for &(l, e) in self.ctx.fact_q2m1.factors() {
            for _ in 0..e {
                if self.pow(u, t / l) == one {
                    t /= l;
                } else {
                    break;
                }
            }
        }
        Ok(t)
    }

    /// Translate key `u^q − u`; two elements outside `F_q` are translates of
    /// each other exactly when their keys agree.
    pub fn translate_class_key(&self, u: &FieldElem) -> Result<FieldElem, Error> {
        let key = self.sub(&self.frobenius_q(u), u);
        if key.is_zero() {
            Err(Error::InSubfield)
        } else {
            Ok(key)
        }
    }

    /// Key of the line of `gamma` through `u`: the translate key of `u/γ`, or
    /// `None` when `u/γ ∈ F_q` (no line of `γ` contains `u`).
    pub fn line_class_key(&self, u: &FieldElem, gamma: &FieldElem) -> Result<Option<FieldElem>, Error> {
        let v = self.mul(u, &self.inv(gamma)?);
        match self.translate_class_key(&v) {
            Ok(key) => Ok(Some(key)),
            Err(_) => Ok(None),
        }
    }

    /// Matrix (row-major `n × n`) of multiplication by `g`.
    fn mul_matrix(&self, g: &FieldElem) -> Vec<u64> {
        let n = self.ring.n;
        let mut m = vec![0u64; n * n];
        let x = self.ring.elem(&[0, 1]);
        let mut col = *g;
        for c in 0..n {
            for r in 0..n {
                m[r * n + c] = col.coords[r] as u64;
            }
            col = self.ring.mul(&col, &x);
        }
        m
    }

    /// Indexer for translate classes.
    pub fn translate_indexer(&self) -> ClassIndexer {
        let n = self.ring.n;
        let p = self.ring.p;
        let mut d = self.frob_q.clone();
        for i in 0..n {
            d[i * n + i] = (d[i * n + i] + p - 1) % p;
        }
        let rows = independent_rows(&d, n, p);
        debug_assert_eq!(rows.len(), n / 2);
        let mut sel = Vec::with_capacity(rows.len() * n);
        for r in rows {
            sel.extend_from_slice(&d[r * n..(r + 1) * n]);
        }
        ClassIndexer { p, n, k: n / 2, rows: sel }
    }

    /// Indexer for the lines of `gamma`: `u ↦ index of the translate class of u/γ`.
    pub fn line_indexer(&self, gamma: &FieldElem) -> Result<ClassIndexer, Error> {
        let base = self.translate_indexer();
        let m = self.mul_matrix(&self.inv(gamma)?);
        let (n, k, p) = (base.n, base.k, base.p);
        let mut rows = vec![0u64; k * n];
        for r in 0..k {
            for c in 0..n {
                let acc: u128 = (0..n).map(|j| base.rows[r * n + j] as u128 * m[j * n + c] as u128).sum();
                rows[r * n + c] = (acc % p as u128) as u64;
            }
        }
        Ok(ClassIndexer { p, n, k, rows })
    }
}

fn first_irreducible(p: u64, n: usize) -> PolyRing {
    let mut digits = vec![0u64; n];
    loop {
        let ring = PolyRing { p, n, low: digits.clone() };
        if is_irreducible(&ring) {
            return ring;
        }
        // Next coefficient vector, constant term least significant.
        let mut i = 0;
        loop {
            assert!(i < n, "no irreducible polynomial of degree {n} over F_{p}");
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Indices of a maximal set of linearly independent rows, greedily from the top.
fn independent_rows(m: &[u64], n: usize, p: u64) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut chosen = Vec::new();
    for r in 0..n {
        let mut v: Vec<u64> = m[r * n..(r + 1) * n].to_vec();
        for (pivot, b) in &basis {
            if v[*pivot] != 0 {
                let c = v[*pivot];
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = (*x + p - crate::arith::mul_mod(c, y, p)) % p;
                }
            }
        }
        if let Some(pivot) = v.iter().position(|&x| x != 0) {
            let inv = inv_mod_p(v[pivot], p);
            for x in v.iter_mut() {
                *x = crate::arith::mul_mod(*x, inv, p);
            }
            basis.push((pivot, v));
            chosen.push(r);
        }
    }
    chosen
}

/// A linear map `F_{q^2} → [0, q)` that is constant exactly on translate
/// classes (or on the lines of a fixed `γ`), and sends `F_q` (resp. `γ F_q`) to 0.
#[derive(Debug, Clone)]
pub struct ClassIndexer {
    p: u64,
    n: usize,
    k: usize,
    rows: Vec<u64>,
}

impl ClassIndexer {
    #[inline]
    pub fn index(&self, u: &FieldElem) -> u64 {
        self.index_coords(u.coords())
    }

    /// Same as [`ClassIndexer::index`] on a raw coordinate slice of length `n`.
    #[inline]
    pub fn index_coords(&self, coords: &[u32]) -> u64 {
        let n = self.n;
        let p = self.p;
        let mut out = 0u64;
        for r in (0..self.k).rev() {
            let row = &self.rows[r * n..(r + 1) * n];
            let acc: u128 = row.iter().zip(coords).map(|(&m, &c)| m as u128 * c as u128).sum();
            out = out * p + (acc % p as u128) as u64;
        }
        out
    }

    /// Number of index values, `q`.
    pub fn classes(&self) -> u64 {
        self.p.pow(self.k as u32)
    }
}

/// `gcd(j, q² − 1) = 2`, i.e. `a^j` has order `(q² − 1)/2`.
pub fn is_two_primitive_exponent(j: u64, ctx: &PrimePowerCtx) -> bool {
    gcd(j, ctx.order()) == 2
}
