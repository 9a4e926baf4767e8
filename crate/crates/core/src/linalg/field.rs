//! Residue arithmetic in GF(p) for small primes.
//!
//! Residues are stored as `u8`; the modulus travels with a [`PrimeField`]
//! context instead of with each element.

use crate::error::{Error, Result};

/// A residue in `0..p`.
pub type Residue = u8;

/// Largest supported modulus.
pub const MAX_PRIME: u32 = 251;

/// The prime field GF(p), `2 <= p <= 251`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u8,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(Self { p: p as u8 })
    }

    #[inline]
    pub fn p(self) -> u8 {
        self.p
    }

    #[inline]
    pub fn add(self, a: Residue, b: Residue) -> Residue {
        let s = a as u16 + b as u16;
        let p = self.p as u16;
        (if s >= p { s - p } else { s }) as u8
    }

    #[inline]
    pub fn sub(self, a: Residue, b: Residue) -> Residue {
        if a >= b {
            a - b
        } else {
            (a as u16 + self.p as u16 - b as u16) as u8
        }
    }

    #[inline]
    pub fn neg(self, a: Residue) -> Residue {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: Residue, b: Residue) -> Residue {
        ((a as u16 * b as u16) % self.p as u16) as u8
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inv(self, a: Residue) -> Result<Residue> {
        if a.is_multiple_of(self.p) {
            return Err(Error::DivisionByZero { p: self.p });
        }
        // Fermat: a^(p-2)
        Ok(self.pow(a, self.p as u64 - 2))
    }

    pub fn pow(self, mut base: Residue, mut exp: u64) -> Residue {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Reduces an arbitrary integer into `0..p`.
    #[inline]
    pub fn from_i64(self, v: i64) -> Residue {
        v.rem_euclid(self.p as i64) as u8
    }

    /// Signed representative in `(-p/2, p/2]`, used for display.
    pub fn signed(self, a: Residue) -> i64 {
        let a = a as i64;
        let p = self.p as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }

    /// Table `x -> f*x` for `x < 256`; entries at `x >= p` are unspecified.
    #[inline]
    pub fn scale_table(self, f: Residue) -> [u8; 256] {
        let mut t = [0u8; 256];
        let mut acc = 0u8;
        for slot in t.iter_mut().take(self.p as usize) {
            *slot = acc;
            acc = self.add(acc, f);
        }
        t
    }

    /// Binomial coefficient `C(a, b) mod p` by Lucas' theorem.
    pub fn binom(self, a: u64, b: u64) -> Residue {
        lucas_binom(a, b, self.p)
    }
}

/// `C(a, b) mod p` as the product of base-p digit binomials; zero when `b > a`.
pub fn lucas_binom(mut a: u64, mut b: u64, p: u8) -> Residue {
    if b > a {
        return 0;
    }
    let p64 = p as u64;
    let mut acc: u64 = 1;
    while b > 0 || a > 0 {
        let (ad, bd) = (a % p64, b % p64);
        if bd > ad {
            return 0;
        }
        acc = acc * small_binom(ad, bd, p64) % p64;
        a /= p64;
        b /= p64;
    }
    (acc % p64) as u8
}

// digits < p, so the product formula has no factor divisible by p
fn small_binom(n: u64, k: u64, p: u64) -> u64 {
    let k = k.min(n - k);
    let mut num = 1u64;
    let mut den = 1u64;
    for t in 0..k {
        num = num * ((n - t) % p) % p;
        den = den * ((t + 1) % p) % p;
    }
    // den is invertible mod p
    let mut inv = 1u64;
    let mut base = den;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            inv = inv * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    num * inv % p
}
