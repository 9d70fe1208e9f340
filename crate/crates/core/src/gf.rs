//! Small finite fields `F_{p^e}` for brute-force enumeration.
//!
//! Elements are coordinate vectors over `F_p` in the power basis of a fixed
//! modulus. A [`GfElem`] does not carry its field; every operation goes through
//! the [`PrimePowerField`] that produced it.

use thiserror::Error;

use crate::algebra::{is_prime, PrimePower};

/// Largest field size that may be constructed (and therefore enumerated).
pub const ENUMERATION_BOUND: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of size {p}^{e} exceeds the enumeration bound 2^22")]
    TooLarge { p: u64, e: u32 },
    #[error("quadratic character is undefined in characteristic 2")]
    EvenCharacteristic,
    #[error("zero has no inverse")]
    DivisionByZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GfElem {
    coords: Vec<u64>,
}

impl GfElem {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimePowerField {
    p: u64,
    e: u32,
    q: u64,
    /// Monic, ascending, length `e + 1`.
    modulus: Vec<u64>,
}

/// Builds `F_{p^e}` with the lexicographically least monic irreducible
/// modulus, comparing coefficients from the constant term upward.
pub fn gf_make(p: u64, e: u32) -> Result<PrimePowerField, GfError> {
    if !is_prime(p) {
        return Err(GfError::NotPrime(p));
    }
    if e == 0 {
        return Err(GfError::ZeroDegree);
    }
    let q = p
        .checked_pow(e)
        .filter(|&q| q <= ENUMERATION_BOUND)
        .ok_or(GfError::TooLarge { p, e })?;
    let modulus = least_irreducible(p, e as usize);
    Ok(PrimePowerField { p, e, q, modulus })
}

fn least_irreducible(p: u64, e: usize) -> Vec<u64> {
    let count = p.pow(e as u32);
    for idx in 0..count {
        // Constant term is the most significant digit of the ordering.
        let mut digits = vec![0u64; e];
        let mut rest = idx;
        for k in (0..e).rev() {
            digits[k] = rest % p;
            rest /= p;
        }
        // t divides anything with zero constant term.
        if e > 1 && digits[0] == 0 {
            continue;
        }
        let mut f = digits;
        f.push(1);
        if fp_poly::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl PrimePowerField {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn order(&self) -> PrimePower {
        PrimePower::new(self.p, self.e).expect("validated on construction")
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    fn dim(&self) -> usize {
        self.e as usize
    }

    pub fn zero(&self) -> GfElem {
        GfElem { coords: vec![0; self.dim()] }
    }

    pub fn one(&self) -> GfElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> GfElem {
        let mut x = self.zero();
        x.coords[0] = n.rem_euclid(self.p as i64) as u64;
        x
    }

    /// Element from coordinates; missing high coordinates are zero.
    pub fn element(&self, coords: &[u64]) -> GfElem {
        assert!(coords.len() <= self.dim(), "too many coordinates");
        let mut x = self.zero();
        for (slot, c) in x.coords.iter_mut().zip(coords) {
            *slot = c % self.p;
        }
        x
    }

    /// The generator `θ` of the power basis (a root of the modulus).
    pub fn generator(&self) -> GfElem {
        if self.e == 1 {
            return self.from_int(self.p as i64 - self.modulus[0] as i64);
        }
        self.element(&[0, 1])
    }

    /// Base-`p` digit encoding: `Σ c_k p^k`.
    pub fn index(&self, x: &GfElem) -> u64 {
        x.coords.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn from_index(&self, mut idx: u64) -> GfElem {
        let mut x = self.zero();
        for c in x.coords.iter_mut() {
            *c = idx % self.p;
            idx /= self.p;
        }
        x
    }

    pub fn elements(&self) -> impl Iterator<Item = GfElem> + '_ {
        (0..self.q).map(|i| self.from_index(i))
    }

    pub fn is_zero(&self, x: &GfElem) -> bool {
        x.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &GfElem, b: &GfElem) -> GfElem {
        GfElem {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| (x + y) % self.p).collect(),
        }
    }

    pub fn sub(&self, a: &GfElem, b: &GfElem) -> GfElem {
        GfElem {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| (x + self.p - y) % self.p).collect(),
        }
    }

    pub fn neg(&self, a: &GfElem) -> GfElem {
        GfElem { coords: a.coords.iter().map(|x| (self.p - x) % self.p).collect() }
    }

    pub fn mul(&self, a: &GfElem, b: &GfElem) -> GfElem {
        let e = self.dim();
        let p = self.p;
        if e == 1 {
            return GfElem { coords: vec![a.coords[0] * b.coords[0] % p] };
        }
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in a.coords.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coords.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for k in (e..2 * e - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for (i, &m) in self.modulus[..e].iter().enumerate() {
                prod[k - e + i] = (prod[k - e + i] + c * (p - m)) % p;
            }
            prod[k] = 0;
        }
        prod.truncate(e);
        GfElem { coords: prod }
    }

    pub fn square(&self, a: &GfElem) -> GfElem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &GfElem, mut exp: u64) -> GfElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.square(&base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &GfElem) -> Result<GfElem, GfError> {
        if self.is_zero(a) {
            return Err(GfError::DivisionByZero);
        }
        Ok(self.pow(a, self.q - 2))
    }

    /// Evaluates an `F_p`-coefficient polynomial (ascending) at `x`.
    pub fn eval_prime_poly(&self, coeffs: &[u64], x: &GfElem) -> GfElem {
        let mut acc = self.zero();
        for &c in coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, x), &self.from_int(c as i64));
        }
        acc
    }

    /// Quadratic character by Euler's criterion `x^((q-1)/2)`.
    pub fn quad_character(&self, x: &GfElem) -> Result<i8, GfError> {
        if self.p == 2 {
            return Err(GfError::EvenCharacteristic);
        }
        if self.is_zero(x) {
            return Ok(0);
        }
        let r = self.pow(x, (self.q - 1) / 2);
        if r == self.one() {
            Ok(1)
        } else {
            debug_assert_eq!(r, self.from_int(-1));
            Ok(-1)
        }
    }
}

/// Polynomial arithmetic over `F_p` on ascending coefficient vectors.
mod fp_poly {
    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        let mut acc = 1u64;
        let mut base = a % p;
        let mut exp = p - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = (acc as u128 * base as u128 % p as u128) as u64;
            }
            base = (base as u128 * base as u128 % p as u128) as u64;
            exp >>= 1;
        }
        acc
    }

    fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let k = r.len() - 1;
            let c = r[k] * lead_inv % p;
            for (i, &mi) in m.iter().enumerate() {
                r[k - dm + i] = (r[k - dm + i] + (p - c) * mi % p) % p;
            }
            r = trim(r);
        }
        r
    }

    fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y % p) % p;
            }
        }
        rem(&prod, m, p)
    }

    fn pow_mod(a: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut base = rem(a, m, p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul_mod(&acc, &base, m, p);
            }
            base = mul_mod(&base, &base, m, p);
            exp >>= 1;
        }
        acc
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|k| {
                    let x = a.get(k).copied().unwrap_or(0);
                    let y = b.get(k).copied().unwrap_or(0);
                    (x + p - y) % p
                })
                .collect(),
        )
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

    /// Rabin's irreducibility test for a monic `f` of degree `>= 1`.
    pub(super) fn is_irreducible(f: &[u64], p: u64) -> bool {
        let e = f.len() - 1;
        if e == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        // frob[k] = x^{p^k} mod f
        let mut frob = vec![rem(&x, f, p)];
        for k in 1..=e {
            let next = pow_mod(&frob[k - 1], p, f, p);
            frob.push(next);
        }
        if sub(&frob[e], &frob[0], p) != Vec::<u64>::new() {
            return false;
        }
        prime_divisors(e).into_iter().all(|r| {
            let g = gcd(&sub(&frob[e / r], &frob[0], p), f, p);
            g.len() == 1
        })
    }
}
