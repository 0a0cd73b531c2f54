//! Budgeted factorization of group orders and primality testing.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Default trial-division bound used when verifying primitivity.
pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000;

const MR_BASES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    if n < (1 << 32) {
        let mut d = 3u64;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += 2;
        }
        return true;
    }
    is_probable_prime(&BigUint::from(n))
}

/// Miller-Rabin with the first sixteen primes as bases.
///
/// Deterministic below 3.3 * 10^24; a probable-prime test above that.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &b in &MR_BASES {
        if *n == BigUint::from(b) {
            return true;
        }
        if (n % b).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - 1u32;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'bases: for &b in &MR_BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors of `m`, found by trial division up to `bound` plus
/// a primality test on whatever cofactor remains.
///
/// Returns `None` when the remaining cofactor is composite.
pub fn distinct_prime_factors(m: &BigUint, bound: u64) -> Option<Vec<BigUint>> {
    let mut factors = Vec::new();
    let mut rest = m.clone();
    if rest <= BigUint::one() {
        return Some(factors);
    }
    let mut d = 2u64;
    while d <= bound {
        if let Some(r) = rest.to_u64() {
            if d.saturating_mul(d) > r {
                break;
            }
        }
        if (&rest % d).is_zero() {
            factors.push(BigUint::from(d));
            while (&rest % d).is_zero() {
                rest /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest.is_one() {
        return Some(factors);
    }
    let fully_sieved = rest
        .to_u64()
        .map(|r| d.saturating_mul(d) > r)
        .unwrap_or(false);
    if fully_sieved || is_probable_prime(&rest) {
        factors.push(rest);
        Some(factors)
    } else {
        None
    }
}

#[cfg(test)]
mod test {
    use super::*;

    #[test]
    fn small_primes() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn mersenne_orders() {
        let m31 = (BigUint::one() << 31usize) - 1u32;
        assert_eq!(distinct_prime_factors(&m31, 1000), Some(vec![m31.clone()]));
        // 2^40 - 1 = 3 * 5^2 * 11 * 17 * 31 * 41 * 61681
        let m40 = (BigUint::one() << 40usize) - 1u32;
        let f: Vec<u64> = distinct_prime_factors(&m40, DEFAULT_FACTOR_BOUND)
            .unwrap()
            .iter()
            .map(|x| x.to_u64().unwrap())
            .collect();
        assert_eq!(f, vec![3, 5, 11, 17, 31, 41, 61681]);
    }

    #[test]
    fn composite_cofactor_is_reported() {
        // 1000003 * 1000033, both above a bound of 1000
        let m = BigUint::from(1_000_003u64 * 1_000_033u64);
        assert_eq!(distinct_prime_factors(&m, 1000), None);
    }
}
