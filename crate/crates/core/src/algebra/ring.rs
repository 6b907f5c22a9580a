//! Coefficient rings.
//!
//! Rings are passed around as small context objects; elements are plain
//! values (`u32` residues, big rationals, extension-field coefficient arrays).

use std::fmt::Debug;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{KzpError, Result};

/// A commutative ring with unit, given as a context object.
pub trait Ring: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for non-units.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;
    fn render(&self, a: &Self::Elem) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn add_assign(&self, acc: &mut Self::Elem, b: &Self::Elem) {
        *acc = self.add(acc, b);
    }

    fn mul_add_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        let t = self.mul(a, b);
        self.add_assign(acc, &t);
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// Rings that can produce uniformly random elements.
pub trait Sample: Ring {
    fn sample<G: Rng + ?Sized>(&self, rng: &mut G) -> Self::Elem;
    /// Number of elements, saturating; `u64::MAX` for infinite rings.
    fn size(&self) -> u64;
}

/// Rings receiving the canonical map from ℚ (partial in positive characteristic).
pub trait FromRational: Ring {
    /// `None` when the characteristic divides the denominator.
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem>;
}

impl FromRational for PrimeField {
    fn from_rational(&self, q: &BigRational) -> Option<u32> {
        self.reduce_rational(q)
    }
}

impl FromRational for Rationals {
    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
}

impl FromRational for ExtField {
    fn from_rational(&self, q: &BigRational) -> Option<ExtElem> {
        self.base.reduce_rational(q).map(|a| self.embed(a))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field F_p for an odd prime p < 2^31.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 31 {
            return Err(KzpError::ModulusTooLarge(p));
        }
        if p < 3 || !is_prime(p) {
            return Err(KzpError::NotOddPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// Reduce a rational number; `None` if p divides the denominator.
    pub fn reduce_rational(&self, q: &BigRational) -> Option<u32> {
        let p = BigInt::from(self.p);
        let num = ((q.numer() % &p) + &p) % &p;
        let den = ((q.denom() % &p) + &p) % &p;
        if den.is_zero() {
            return None;
        }
        let n: u32 = u32::try_from(num).ok()?;
        let d: u32 = u32::try_from(den).ok()?;
        self.div(&n, &d)
    }

    /// Lift a residue to its symmetric representative in (-p/2, p/2].
    pub fn symmetric(&self, a: u32) -> i64 {
        let a = a as i64;
        let p = self.p as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }
}

impl Ring for PrimeField {
    type Elem = u32;

    #[inline]
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn one(&self) -> u32 {
        1
    }
    fn from_i64(&self, v: i64) -> u32 {
        self.reduce_i64(v)
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on i64
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        Some(self.reduce_i64(s0))
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn characteristic(&self) -> u64 {
        self.p as u64
    }
    fn render(&self, a: &u32) -> String {
        a.to_string()
    }
    #[inline]
    fn mul_add_assign(&self, acc: &mut u32, a: &u32, b: &u32) {
        *acc = ((*acc as u64 + *a as u64 * *b as u64) % self.p as u64) as u32;
    }
}

impl Sample for PrimeField {
    fn sample<G: Rng + ?Sized>(&self, rng: &mut G) -> u32 {
        rng.gen_range(0..self.p)
    }
    fn size(&self) -> u64 {
        self.p as u64
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn render(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn add_assign(&self, acc: &mut BigRational, b: &BigRational) {
        *acc += b;
    }
}

impl Sample for Rationals {
    /// Small integers in [-1000, 1000]; enough for generic-point arguments.
    fn sample<G: Rng + ?Sized>(&self, rng: &mut G) -> BigRational {
        BigRational::from_integer(BigInt::from(rng.gen_range(-1000i64..=1000)))
    }
    fn size(&self) -> u64 {
        2001
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_abs_height(q: &BigRational) -> usize {
    q.numer().abs().bits().max(q.denom().bits()) as usize
}

pub const MAX_EXT_DEGREE: usize = 12;

/// Element of F_{p^k}: coefficients of a polynomial of degree < k.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ExtElem(pub [u32; MAX_EXT_DEGREE]);

/// The extension field F_p[x]/(f) for a monic irreducible f of degree k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    base: PrimeField,
    k: usize,
    /// f = x^k + modulus[k-1] x^{k-1} + ... + modulus[0]
    modulus: Arc<Vec<u32>>,
}

impl ExtField {
    /// Smallest-degree extension with at least `min_size` elements, using the
    /// first irreducible modulus in lexicographic coefficient order.
    pub fn with_min_size(base: PrimeField, min_size: u64) -> Result<Self> {
        let p = base.p() as u64;
        let mut k = 1usize;
        let mut q = p;
        while q < min_size {
            k += 1;
            q = q.saturating_mul(p);
        }
        Self::of_degree(base, k)
    }

    pub fn of_degree(base: PrimeField, k: usize) -> Result<Self> {
        if k == 0 || k > MAX_EXT_DEGREE {
            return Err(KzpError::InvalidParameters(format!(
                "extension degree {k} outside 1..={MAX_EXT_DEGREE}"
            )));
        }
        let modulus = upoly::first_irreducible(base, k);
        Ok(ExtField { base, k, modulus: Arc::new(modulus) })
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn embed(&self, a: u32) -> ExtElem {
        let mut e = [0u32; MAX_EXT_DEGREE];
        e[0] = a % self.base.p();
        ExtElem(e)
    }

    pub fn order(&self) -> u64 {
        (self.base.p() as u64).saturating_pow(self.k as u32)
    }
}

impl Ring for ExtField {
    type Elem = ExtElem;

    fn zero(&self) -> ExtElem {
        ExtElem([0; MAX_EXT_DEGREE])
    }
    fn one(&self) -> ExtElem {
        self.embed(1)
    }
    fn from_i64(&self, v: i64) -> ExtElem {
        self.embed(self.base.reduce_i64(v))
    }
    fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let mut c = [0u32; MAX_EXT_DEGREE];
        for i in 0..self.k {
            c[i] = self.base.add(&a.0[i], &b.0[i]);
        }
        ExtElem(c)
    }
    fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let mut c = [0u32; MAX_EXT_DEGREE];
        for i in 0..self.k {
            c[i] = self.base.sub(&a.0[i], &b.0[i]);
        }
        ExtElem(c)
    }
    fn neg(&self, a: &ExtElem) -> ExtElem {
        let mut c = [0u32; MAX_EXT_DEGREE];
        for i in 0..self.k {
            c[i] = self.base.neg(&a.0[i]);
        }
        ExtElem(c)
    }
    fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let k = self.k;
        let p = self.base.p() as u64;
        let mut prod = [0u64; 2 * MAX_EXT_DEGREE];
        for i in 0..k {
            if a.0[i] == 0 {
                continue;
            }
            let ai = a.0[i] as u64;
            for j in 0..k {
                prod[i + j] += ai * b.0[j] as u64;
            }
        }
        // reduce top-down: x^k = -sum modulus[i] x^i
        for d in (k..2 * k - 1).rev() {
            let c = prod[d] % p;
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            let neg = p - c;
            for i in 0..k {
                prod[d - k + i] += neg * self.modulus[i] as u64;
            }
            prod[d - 1] %= p;
        }
        let mut out = [0u32; MAX_EXT_DEGREE];
        for i in 0..k {
            out[i] = (prod[i] % p) as u32;
        }
        ExtElem(out)
    }
    fn inv(&self, a: &ExtElem) -> Option<ExtElem> {
        if self.is_zero(a) {
            return None;
        }
        // a^(q-2)
        let q = self.order();
        Some(self.pow(a, q - 2))
    }
    fn is_zero(&self, a: &ExtElem) -> bool {
        a.0[..self.k].iter().all(|&c| c == 0)
    }
    fn characteristic(&self) -> u64 {
        self.base.p() as u64
    }
    fn render(&self, a: &ExtElem) -> String {
        let parts: Vec<String> = a.0[..self.k].iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

impl Sample for ExtField {
    fn sample<G: Rng + ?Sized>(&self, rng: &mut G) -> ExtElem {
        let mut c = [0u32; MAX_EXT_DEGREE];
        for x in c.iter_mut().take(self.k) {
            *x = self.base.sample(rng);
        }
        ExtElem(c)
    }
    fn size(&self) -> u64 {
        self.order()
    }
}

/// Dual numbers R[ε]/(ε²); used for exact first derivatives at points.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual<R: Ring> {
    pub base: R,
}

impl<R: Ring> Dual<R> {
    pub fn new(base: R) -> Self {
        Dual { base }
    }
    pub fn lift(&self, a: R::Elem) -> (R::Elem, R::Elem) {
        (a, self.base.zero())
    }
}

impl<R: Ring> Ring for Dual<R> {
    type Elem = (R::Elem, R::Elem);

    fn zero(&self) -> Self::Elem {
        (self.base.zero(), self.base.zero())
    }
    fn one(&self) -> Self::Elem {
        (self.base.one(), self.base.zero())
    }
    fn from_i64(&self, v: i64) -> Self::Elem {
        (self.base.from_i64(v), self.base.zero())
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.base.add(&a.0, &b.0), self.base.add(&a.1, &b.1))
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.base.sub(&a.0, &b.0), self.base.sub(&a.1, &b.1))
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        (self.base.neg(&a.0), self.base.neg(&a.1))
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let re = self.base.mul(&a.0, &b.0);
        let du = self.base.add(&self.base.mul(&a.0, &b.1), &self.base.mul(&a.1, &b.0));
        (re, du)
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        let i = self.base.inv(&a.0)?;
        let d = self.base.neg(&self.base.mul(&a.1, &self.base.mul(&i, &i)));
        Some((i, d))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.base.is_zero(&a.0) && self.base.is_zero(&a.1)
    }
    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }
    fn render(&self, a: &Self::Elem) -> String {
        format!("{}+{}e", self.base.render(&a.0), self.base.render(&a.1))
    }
}

/// Dense univariate helpers over F_p (little-endian coefficient vectors).
pub mod upoly {
    use super::{PrimeField, Ring};

    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn mul(f: PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut c = vec![0u32; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                f.mul_add_assign(&mut c[i + j], x, y);
            }
        }
        trim(&mut c);
        c
    }

    /// Remainder of a modulo b (b nonzero).
    pub fn rem(f: PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lead_inv = f.inv(&b[db]).expect("nonzero leading coefficient");
        while r.len() > db {
            let top = r.len() - 1;
            let c = f.mul(&r[top], &lead_inv);
            if c != 0 {
                for i in 0..=db {
                    let t = f.mul(&c, &b[i]);
                    r[top - db + i] = f.sub(&r[top - db + i], &t);
                }
            }
            r.pop();
            trim(&mut r);
        }
        r
    }

    pub fn gcd(f: PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(f, &x, &y);
            x = y;
            y = r;
        }
        if let Some(&l) = x.last() {
            let li = f.inv(&l).unwrap();
            for c in x.iter_mut() {
                *c = f.mul(c, &li);
            }
        }
        x
    }

    pub fn powmod(f: PrimeField, base: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
        let mut acc = vec![1u32];
        let mut b = rem(f, base, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(f, &mul(f, &acc, &b), m);
            }
            e >>= 1;
            if e > 0 {
                b = rem(f, &mul(f, &b, &b), m);
            }
        }
        acc
    }

    fn prime_divisors(mut n: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                out.push(d);
                while n.is_multiple_of(d) {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            out.push(n);
        }
        out
    }

    /// Rabin's irreducibility test for a monic polynomial of degree k.
    pub fn is_irreducible(f: PrimeField, m: &[u32]) -> bool {
        let k = m.len() - 1;
        if k == 1 {
            return true;
        }
        let p = f.p() as u64;
        let x = vec![0u32, 1];
        // x^{p^j} mod m for j = 0..=k, by repeated p-th powering
        let mut frob = vec![x.clone()];
        for _ in 0..k {
            let last = frob.last().unwrap().clone();
            frob.push(powmod(f, &last, p, m));
        }
        let sub_x = |mut a: Vec<u32>| {
            a.resize(a.len().max(2), 0);
            a[1] = f.sub(&a[1], &1);
            trim(&mut a);
            a
        };
        if !sub_x(frob[k].clone()).is_empty() {
            return false;
        }
        for q in prime_divisors(k) {
            let h = sub_x(frob[k / q].clone());
            if gcd(f, &h, m).len() != 1 {
                return false;
            }
        }
        true
    }

    /// First monic irreducible polynomial of degree k, enumerating the lower
    /// coefficients as base-p digits (constant term least significant).
    /// Returns the k lower coefficients.
    pub fn first_irreducible(f: PrimeField, k: usize) -> Vec<u32> {
        let p = f.p() as u64;
        let mut counter: u64 = 1;
        loop {
            let mut m = Vec::with_capacity(k + 1);
            let mut c = counter;
            for _ in 0..k {
                m.push((c % p) as u32);
                c /= p;
            }
            m.push(1);
            if m[0] != 0 && is_irreducible(f, &m) {
                m.pop();
                return m;
            }
            counter += 1;
        }
    }
}
