//! Small integer helpers shared by the arithmetic modules.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("integer overflow in {0}")]
pub struct Overflow(pub &'static str);

#[inline]
pub(crate) fn mul(a: i128, b: i128, what: &'static str) -> Result<i128, Overflow> {
    a.checked_mul(b).ok_or(Overflow(what))
}

#[inline]
pub(crate) fn add(a: i128, b: i128, what: &'static str) -> Result<i128, Overflow> {
    a.checked_add(b).ok_or(Overflow(what))
}

#[inline]
pub(crate) fn sub(a: i128, b: i128, what: &'static str) -> Result<i128, Overflow> {
    a.checked_sub(b).ok_or(Overflow(what))
}

/// Sum of products `Σ terms[i].0 * terms[i].1`, overflow-checked.
pub(crate) fn dot(terms: &[(i128, i128)], what: &'static str) -> Result<i128, Overflow> {
    terms
        .iter()
        .try_fold(0i128, |acc, &(a, b)| add(acc, mul(a, b, what)?, what))
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i128
}

/// Extended gcd: returns `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// All primes `<= n` in ascending order.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &p)| p.then_some(k as u64))
        .collect()
}

/// Prime factorisation of `|n|` by trial division, as `(p, exponent)` pairs.
pub fn factorize(n: i128) -> Vec<(u64, u32)> {
    let mut m = n.unsigned_abs();
    let mut out = Vec::new();
    if m < 2 {
        return out;
    }
    let mut d: u128 = 2;
    while d * d <= m {
        if m % d == 0 {
            let mut e = 0;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            out.push((d as u64, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m as u64, 1));
    }
    out
}

/// Positive integer divisors of `|n|` (`n != 0`), unordered.
pub fn divisors(n: i128) -> Vec<i128> {
    let m = n.unsigned_abs();
    let mut out = Vec::new();
    let mut d: u128 = 1;
    while d * d <= m {
        if m % d == 0 {
            out.push(d as i128);
            if d * d != m {
                out.push((m / d) as i128);
            }
        }
        d += 1;
    }
    out
}

/// Largest `r >= 0` with `r^3 < n`, or -1 when `n <= 0`.
pub(crate) fn max_cube_below(n: i128) -> i128 {
    if n <= 0 {
        return -1;
    }
    let mut r = (n as f64).cbrt() as i128 + 2;
    while r > 0 && r.checked_pow(3).map_or(true, |c| c >= n) {
        r -= 1;
    }
    r
}

/// Largest `r >= 0` with `r^2 < n`, or -1 when `n <= 0`.
pub(crate) fn max_square_below(n: i128) -> i128 {
    if n <= 0 {
        return -1;
    }
    let mut r = (n as f64).sqrt() as i128 + 2;
    while r > 0 && r.checked_mul(r).map_or(true, |c| c >= n) {
        r -= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_gcd_identity() {
        for a in -30i128..30 {
            for b in -30i128..30 {
                let (g, s, t) = ext_gcd(a, b);
                assert_eq!(g, gcd(a, b));
                assert_eq!(s * a + t * b, g);
            }
        }
    }

    #[test]
    fn factor_and_primes() {
        assert_eq!(factorize(-2012), vec![(2, 2), (503, 1)]);
        assert_eq!(factorize(81), vec![(3, 4)]);
        assert!(factorize(1).is_empty());
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(is_prime(503) && !is_prime(1) && !is_prime(91));
        let mut d = divisors(-12);
        d.sort();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn root_bounds() {
        assert_eq!(max_cube_below(1), 0);
        assert_eq!(max_cube_below(8), 1);
        assert_eq!(max_cube_below(9), 2);
        assert_eq!(max_cube_below(2_000_000), 125);
        assert_eq!(max_square_below(4), 1);
        assert_eq!(max_square_below(5), 2);
        assert_eq!(max_square_below(0), -1);
    }
}
