//! Exact integer and p-adic primitives.
//!
//! Inputs throughout the crate are bounded by a small multiple of `q`, so
//! factorization is plain trial division.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A validated field size `q = p^m` with `p` prime and `m >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePower {
    q: i64,
    p: i64,
    m: u32,
}

impl PrimePower {
    pub fn new(q: i64) -> Result<Self> {
        if q < 2 {
            return Err(Error::NotAPrimePower(q));
        }
        let p = smallest_prime_factor(q);
        let mut rest = q;
        let mut m = 0;
        while rest % p == 0 {
            rest /= p;
            m += 1;
        }
        if rest != 1 {
            return Err(Error::NotAPrimePower(q));
        }
        Ok(Self { q, p, m })
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `q` is a square exactly when `m` is even.
    pub fn is_square(&self) -> bool {
        self.m.is_multiple_of(2)
    }

    /// `p^(m/2)` when `q` is a square.
    pub fn sqrt(&self) -> Option<i64> {
        self.is_square().then(|| self.p.pow(self.m / 2))
    }

    /// `p^((m+1)/2)`, i.e. `sqrt(p*q)` when `q` is not a square.
    pub fn sqrt_pq(&self) -> Option<i64> {
        (!self.is_square()).then(|| self.p.pow(self.m.div_ceil(2)))
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

impl Serialize for PrimePower {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_i64(self.q)
    }
}

impl<'de> Deserialize<'de> for PrimePower {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let q = i64::deserialize(deserializer)?;
        PrimePower::new(q).map_err(serde::de::Error::custom)
    }
}

/// Parses `q` into its prime decomposition `p^m`.
pub fn parse_prime_power(q: i64) -> Result<PrimePower> {
    PrimePower::new(q)
}

/// All prime powers in `[2, max]`, ascending.
pub fn prime_powers_up_to(max: i64) -> Vec<PrimePower> {
    (2..=max).filter_map(|q| PrimePower::new(q).ok()).collect()
}

pub fn is_prime(n: i64) -> bool {
    n >= 2 && smallest_prime_factor(n) == n
}

fn smallest_prime_factor(n: i64) -> i64 {
    debug_assert!(n >= 2);
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

/// A p-adic valuation. `Infinite` (the valuation of zero) compares greater
/// than every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    /// `v >= k`.
    pub fn at_least(self, k: u32) -> bool {
        self >= Valuation::Finite(k)
    }

    /// `v >= m/2`, compared as `2v >= m`.
    pub fn at_least_half(self, m: u32) -> bool {
        match self {
            Valuation::Infinite => true,
            Valuation::Finite(v) => 2 * v >= m,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Valuation::Finite(0)
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

/// Largest `e` with `p^e | n`; [`Valuation::Infinite`] for `n = 0`.
pub fn valuation(n: i64, p: i64) -> Valuation {
    if n == 0 {
        return Valuation::Infinite;
    }
    let mut n = n.unsigned_abs();
    let p = p.unsigned_abs();
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    Valuation::Finite(e)
}

/// Returns the nonnegative root when `n` is a perfect square.
pub fn is_perfect_square(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let z = n.isqrt();
    (z * z == n).then_some(z)
}

/// Whether the nonzero integer `n` is a square in the p-adic integers.
///
/// Writing `n = p^v * u` with `p` not dividing `u`: `v` must be even and `u`
/// a quadratic residue mod `p` (for odd `p`) or `u = 1 mod 8` (for `p = 2`).
pub fn zp_is_square(p: i64, n: i64) -> Result<bool> {
    let Valuation::Finite(v) = valuation(n, p) else {
        return Err(Error::ZeroInput);
    };
    if v % 2 == 1 {
        return Ok(false);
    }
    let unit = n / p.pow(v);
    if p == 2 {
        return Ok(unit.rem_euclid(8) == 1);
    }
    // Euler's criterion.
    Ok(pow_mod(unit.rem_euclid(p), (p - 1) / 2, p) == 1)
}

fn pow_mod(base: i64, mut exp: i64, modulus: i64) -> i64 {
    let modulus = modulus as i128;
    let mut base = base as i128 % modulus;
    let mut acc: i128 = 1 % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc as i64
}

/// No prime square divides `|n|`.
pub fn is_squarefree(n: i64) -> Result<bool> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    let mut n = n.unsigned_abs();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return Ok(false);
            }
        }
        d += 1;
    }
    Ok(true)
}

/// The primes dividing `|n|`.
pub fn prime_divisors(n: i64) -> Result<BTreeSet<i64>> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    let mut n = n.unsigned_abs() as i64;
    let mut out = BTreeSet::new();
    while n > 1 {
        let d = smallest_prime_factor(n);
        out.insert(d);
        while n % d == 0 {
            n /= d;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_prime_powers() {
        let eight = parse_prime_power(8).unwrap();
        assert_eq!((eight.p(), eight.m(), eight.q()), (2, 3, 8));
        let thirteen = parse_prime_power(13).unwrap();
        assert_eq!((thirteen.p(), thirteen.m()), (13, 1));
        assert!(matches!(
            parse_prime_power(12),
            Err(Error::NotAPrimePower(12))
        ));
        assert!(parse_prime_power(1).is_err());
        assert!(parse_prime_power(0).is_err());
        assert!(parse_prime_power(-8).is_err());
    }

    #[test]
    fn square_roots_of_q() {
        let nine = PrimePower::new(9).unwrap();
        assert_eq!(nine.sqrt(), Some(3));
        assert_eq!(nine.sqrt_pq(), None);
        let eight = PrimePower::new(8).unwrap();
        assert_eq!(eight.sqrt(), None);
        assert_eq!(eight.sqrt_pq(), Some(4));
        assert_eq!(prime_powers_up_to(200).len(), 60);
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(12, 2), Valuation::Finite(2));
        assert_eq!(valuation(0, 3), Valuation::Infinite);
        assert_eq!(valuation(-45, 3), Valuation::Finite(2));
        assert!(Valuation::Infinite > Valuation::Finite(u32::MAX));
        assert!(Valuation::Infinite.at_least_half(7));
        assert!(!Valuation::Infinite.is_zero());
        assert!(Valuation::Finite(1).at_least_half(2));
        assert!(!Valuation::Finite(1).at_least_half(3));
    }

    #[test]
    fn perfect_squares() {
        assert_eq!(is_perfect_square(36), Some(6));
        assert_eq!(is_perfect_square(28), None);
        assert_eq!(is_perfect_square(0), Some(0));
        assert_eq!(is_perfect_square(-4), None);
    }

    #[test]
    fn p_adic_squares() {
        assert!(!zp_is_square(2, 28).unwrap());
        assert!(!zp_is_square(2, 128).unwrap());
        assert!(!zp_is_square(2, 544).unwrap());
        assert!(zp_is_square(5, -4).unwrap());
        assert!(zp_is_square(2, 17).unwrap());
        assert!(zp_is_square(2, -7).unwrap());
        assert!(matches!(zp_is_square(3, 0), Err(Error::ZeroInput)));
    }

    #[test]
    fn squarefree_and_divisors() {
        assert!(is_squarefree(15).unwrap());
        assert!(!is_squarefree(12).unwrap());
        assert!(is_squarefree(1).unwrap());
        assert!(is_squarefree(-6).unwrap());
        assert!(matches!(is_squarefree(0), Err(Error::ZeroInput)));

        assert_eq!(prime_divisors(18).unwrap(), BTreeSet::from([2, 3]));
        assert_eq!(prime_divisors(-7).unwrap(), BTreeSet::from([7]));
        assert!(prime_divisors(1).unwrap().is_empty());
        assert!(matches!(prime_divisors(0), Err(Error::ZeroInput)));
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn valuation_is_additive(a in 1i64..100_000, b in 1i64..100_000, pi in 0usize..5) {
                let p = [2, 3, 5, 7, 13][pi];
                let (Valuation::Finite(va), Valuation::Finite(vb)) = (valuation(a, p), valuation(b, p)) else {
                    unreachable!()
                };
                prop_assert_eq!(valuation(a * b, p), Valuation::Finite(va + vb));
            }

            #[test]
            fn perfect_square_matches_squaring(z in 0i64..3_000_000) {
                prop_assert_eq!(is_perfect_square(z * z), Some(z));
                if z > 0 {
                    prop_assert_eq!(is_perfect_square(z * z + 1), None);
                }
            }
        }
    }

    #[test]
    fn perfect_square_exhaustive() {
        let mut roots = std::collections::HashSet::new();
        let mut z = 0i64;
        while z * z <= 1_000_000 {
            roots.insert(z * z);
            z += 1;
        }
        for n in -10..=1_000_000 {
            assert_eq!(is_perfect_square(n).is_some(), roots.contains(&n), "n={n}");
        }
    }

    #[test]
    fn parse_all_small_prime_powers() {
        for p in (2..=50).filter(|&p| is_prime(p)) {
            for m in 1..=6u32 {
                let pp = PrimePower::new(p.pow(m)).unwrap();
                assert_eq!((pp.p(), pp.m()), (p, m));
            }
        }
    }
}
