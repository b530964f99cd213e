//! Word-size prime fields, Chinese remaindering and rational reconstruction.
//!
//! Primes are kept below 2^31 so that a product of two residues plus one more
//! residue fits in a `u64`.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    // floor(2^64 / p), for Barrett reduction
    barrett: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p > 2 && p < (1 << 31), "prime out of range");
        let barrett = (u128::from(u64::MAX) + 1).div_euclid(u128::from(p)) as u64;
        PrimeField { p, barrett }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Reduces any `x < 2^63`.
    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        let q = ((u128::from(x) * u128::from(self.barrett)) >> 64) as u64;
        let mut r = x - q * self.p;
        while r >= self.p {
            r -= self.p;
        }
        r
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }

    /// `a + b*c`
    #[inline]
    pub fn mul_add(&self, a: u64, b: u64, c: u64) -> u64 {
        self.reduce(a + b * c)
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero mod {}", self.p);
        self.pow(a, self.p - 2)
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        let r = v.rem_euclid(self.p as i64);
        r as u64
    }

    pub fn from_bigint(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits")
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((u128::from(a) * u128::from(b)) % u128::from(n)) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    // deterministic witness set for 32-bit inputs
    'outer: for a in [2u64, 3, 5, 7] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Deterministic sequence of distinct primes just below 2^31.
pub fn primes() -> impl Iterator<Item = u64> {
    let mut n: u64 = (1 << 31) - 1;
    std::iter::from_fn(move || {
        while n > (1 << 30) {
            let cand = n;
            n -= 2;
            if is_prime(cand) {
                return Some(cand);
            }
        }
        None
    })
}

/// Image of a rational in `Z/pZ`; `None` when `p` divides the denominator.
pub fn rat_residue(q: &Rat, p: u64) -> Option<u64> {
    let pf = PrimeField::new(p);
    let den = pf.from_bigint(q.denom());
    if den == 0 {
        return None;
    }
    Some(pf.mul(pf.from_bigint(q.numer()), pf.inv(den)))
}

/// Incremental Chinese remaindering of a vector of residues.
#[derive(Clone, Debug)]
pub struct CrtVector {
    modulus: BigInt,
    values: Vec<BigInt>,
}

impl CrtVector {
    pub fn new(residues: &[u64], p: u64) -> Self {
        CrtVector {
            modulus: BigInt::from(p),
            values: residues.iter().map(|&r| BigInt::from(r)).collect(),
        }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn absorb(&mut self, residues: &[u64], p: u64) {
        assert_eq!(residues.len(), self.values.len());
        let pf = PrimeField::new(p);
        let m_mod_p = pf.from_bigint(&self.modulus);
        let inv = pf.inv(m_mod_p);
        for (v, &r) in self.values.iter_mut().zip(residues) {
            // v + M * ((r - v) / M mod p)
            let t = pf.mul(pf.sub(r, pf.from_bigint(v)), inv);
            *v += &self.modulus * BigInt::from(t);
        }
        self.modulus *= BigInt::from(p);
    }

    /// Reconstructs every entry as a rational with numerator and denominator
    /// bounded by `sqrt(M/2)`, sharing a running denominator.
    pub fn reconstruct(&self) -> Option<Vec<Rat>> {
        let bound = (&self.modulus >> 1u32).sqrt();
        let mut common = BigInt::one();
        let mut out = Vec::with_capacity(self.values.len());
        for v in &self.values {
            let scaled = (v * &common).mod_floor(&self.modulus);
            let (n, d) = rational_reconstruction(&scaled, &self.modulus, &bound)?;
            let q = Rat::new(n, d.clone() * &common);
            common *= d;
            if common.bits() > self.modulus.bits() {
                return None;
            }
            out.push(q);
        }
        Some(out)
    }
}

/// Wang's rational reconstruction: `n/d ≡ a (mod m)` with `|n|, d ≤ bound`.
pub fn rational_reconstruction(a: &BigInt, m: &BigInt, bound: &BigInt) -> Option<(BigInt, BigInt)> {
    if a.is_zero() {
        return Some((BigInt::zero(), BigInt::one()));
    }
    let (mut r0, mut r1) = (m.clone(), a.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > *bound {
        return None;
    }
    let (mut n, mut d) = (r1, t1);
    if d.sign() == Sign::Minus {
        n = -n;
        d = -d;
    }
    if !n.gcd(&d).is_one() {
        return None;
    }
    Some((n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ratio;

    #[test]
    fn primes_are_prime_and_distinct() {
        let ps: Vec<u64> = primes().take(20).collect();
        assert_eq!(ps[0], 2147483647);
        for w in ps.windows(2) {
            assert!(w[0] > w[1]);
        }
        for &p in &ps {
            assert!((2..50_000u64).all(|d| p % d != 0));
        }
    }

    #[test]
    fn barrett_matches_remainder() {
        let pf = PrimeField::new(2147483629);
        for x in [0u64, 1, 2147483628, 2147483629, 1 << 62, (1 << 63) - 1, 987654321987654321] {
            assert_eq!(pf.reduce(x), x % 2147483629);
        }
        assert_eq!(pf.mul(pf.inv(12345), 12345), 1);
    }

    #[test]
    fn crt_reconstructs_rationals() {
        let target = vec![ratio(-355, 113), ratio(7, 1), ratio(0, 1), ratio(1, 123456789)];
        let mut acc: Option<CrtVector> = None;
        for p in primes().take(4) {
            let res: Vec<u64> = target.iter().map(|q| rat_residue(q, p).unwrap()).collect();
            match acc.as_mut() {
                None => acc = Some(CrtVector::new(&res, p)),
                Some(a) => a.absorb(&res, p),
            }
        }
        assert_eq!(acc.unwrap().reconstruct().unwrap(), target);
    }
}
