//! Dense polynomials over a prime field `F_p`.

use std::fmt;

/// Coefficients in ascending degree, reduced into `[0, p)`, without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyFp {
    p: u64,
    coeffs: Vec<u64>,
}

impl PolyFp {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut poly = PolyFp {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        poly.trim();
        poly
    }

    /// Reduce integer coefficients (ascending degree) modulo `p`.
    pub fn from_ints(p: u64, coeffs: &[i128]) -> Self {
        let m = p as i128;
        PolyFp::new(p, coeffs.iter().map(|c| c.rem_euclid(m) as u64).collect())
    }

    pub fn zero(p: u64) -> Self {
        PolyFp { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        PolyFp::new(p, vec![1])
    }

    /// `x - r`.
    pub fn linear(p: u64, r: u64) -> Self {
        PolyFp::new(p, vec![(p - r % p) % p, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Integer lift with coefficients in `[0, p)`.
    pub fn lift(&self) -> Vec<i128> {
        self.coeffs.iter().map(|&c| c as i128).collect()
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| (self.mulmod(acc, x) + c) % self.p)
    }

    pub fn add(&self, other: &PolyFp) -> PolyFp {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or(0);
                let b = other.coeffs.get(k).copied().unwrap_or(0);
                (a + b) % self.p
            })
            .collect();
        PolyFp::new(self.p, c)
    }

    pub fn mul(&self, other: &PolyFp) -> PolyFp {
        if self.is_zero() || other.is_zero() {
            return PolyFp::zero(self.p);
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + self.mulmod(a, b)) % self.p;
            }
        }
        PolyFp::new(self.p, c)
    }

    pub fn scale(&self, s: u64) -> PolyFp {
        PolyFp::new(self.p, self.coeffs.iter().map(|&c| self.mulmod(c, s)).collect())
    }

    pub fn pow(&self, e: u32) -> PolyFp {
        (0..e).fold(PolyFp::one(self.p), |acc, _| acc.mul(self))
    }

    fn inv(&self, a: u64) -> u64 {
        // Fermat; p is prime
        let mut result = 1u64;
        let mut base = a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mulmod(result, base);
            }
            base = self.mulmod(base, base);
            e >>= 1;
        }
        result
    }

    pub fn make_monic(&self) -> PolyFp {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.inv(self.lead()))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &PolyFp) -> (PolyFp, PolyFp) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let inv_lead = self.inv(divisor.lead());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = self.mulmod(*rem.last().unwrap(), inv_lead);
            quot[k] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let t = self.mulmod(c, d);
                rem[k + j] = (rem[k + j] + self.p - t) % self.p;
            }
            while rem.last() == Some(&0) {
                rem.pop();
            }
        }
        (PolyFp::new(self.p, quot), PolyFp::new(self.p, rem))
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &PolyFp) -> PolyFp {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Roots in `F_p` by exhaustive scan.
    pub fn roots(&self) -> Vec<u64> {
        (0..self.p).filter(|&x| self.eval(x) == 0).collect()
    }
}

impl fmt::Debug for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.p)
    }
}

impl fmt::Display for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (k, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{c}x")?,
                (_, 1) => write!(f, "x^{k}")?,
                _ => write!(f, "{c}x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_identity() {
        let a = PolyFp::from_ints(7, &[3, -1, 0, 5, 1]);
        let b = PolyFp::from_ints(7, &[2, 3, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().map_or(true, |d| d < 2));
    }

    #[test]
    fn gcd_and_roots() {
        // (x - 1)(x - 2) and (x - 2)(x - 3) over F_5
        let a = PolyFp::linear(5, 1).mul(&PolyFp::linear(5, 2));
        let b = PolyFp::linear(5, 2).mul(&PolyFp::linear(5, 3));
        assert_eq!(a.gcd(&b), PolyFp::linear(5, 2));
        assert_eq!(a.roots(), vec![1, 2]);
        assert_eq!(format!("{}", PolyFp::from_ints(5, &[3, 2, 1])), "x^2 + 2x + 3");
    }
}
