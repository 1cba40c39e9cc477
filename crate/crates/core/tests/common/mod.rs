//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's own arithmetic.
#![allow(dead_code)]

use std::collections::HashMap;

pub const CAS_ORACLE: &str = include_str!("../fixtures/cas_oracle.csv");
pub const SURVEY_ORACLE: &str = include_str!("../fixtures/survey_oracle.csv");

/// `(I, J)` of a monic form `x^3 + f1 x^2 y + f2 x y^2 + f3 y^3`.
pub fn ij(f1: i128, f2: i128, f3: i128) -> (i128, i128) {
    (f1 * f1 - 3 * f2, -2 * f1 * f1 * f1 + 9 * f1 * f2 - 27 * f3)
}

/// Polynomial discriminant of `x^3 + a x^2 + b x + c`.
pub fn poly_disc(a: i128, b: i128, c: i128) -> i128 {
    a * a * b * b - 4 * b * b * b - 4 * a * a * a * c - 27 * c * c + 18 * a * b * c
}

/// Monic cubic with integer coefficients is reducible iff it has an integer root,
/// which must divide the constant term.
pub fn has_integer_root(a: i128, b: i128, c: i128) -> bool {
    if c == 0 {
        return true;
    }
    let m = c.unsigned_abs();
    (1..=m)
        .filter(|d| d * d <= m)
        .flat_map(|d| [d, m / d])
        .filter(|d| m % d == 0)
        .flat_map(|d| [d as i128, -(d as i128)])
        .any(|r| r * r * r + a * r * r + b * r + c == 0)
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Counts {
    pub pos: u64,
    pub neg: u64,
    pub pos_irreducible: u64,
    pub neg_irreducible: u64,
}

/// Direct loop over `(f1, f2, f3)` in a box that covers `H < ymax`.
pub fn brute_counts(ymax: i128) -> Counts {
    let cube_root = (ymax as f64).cbrt().ceil() as i128 + 1;
    let f2_max = (cube_root + 1) / 3 + 2;
    let j_max = 2 * ((ymax as f64).sqrt().ceil() as i128) + 2;
    let f3_max = (2 + 9 * f2_max + j_max) / 27 + 2;
    let mut out = Counts::default();
    for f1 in -1..=1 {
        for f2 in -f2_max..=f2_max {
            for f3 in -f3_max..=f3_max {
                let (i, j) = ij(f1, f2, f3);
                if (4 * i.abs().pow(3)).max(j * j) >= 4 * ymax {
                    continue;
                }
                let d = poly_disc(f1, f2, f3);
                let irr = !has_integer_root(f1, f2, f3);
                match d.signum() {
                    1 => {
                        out.pos += 1;
                        out.pos_irreducible += u64::from(irr);
                    }
                    -1 => {
                        out.neg += 1;
                        out.neg_irreducible += u64::from(irr);
                    }
                    _ => {}
                }
            }
        }
    }
    out
}

/// Bareiss determinant.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

pub fn matmul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect())
        .collect()
}

/// Invariant-factor chains `d1 | d2 | ...` (all `d > 1`) with product `n`.
pub fn groups_of_order(n: u64) -> Vec<Vec<u64>> {
    fn rec(rest: u64, prev: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 1 {
            out.push(acc.clone());
            return;
        }
        for d in (2..=rest).filter(|&d| rest % d == 0 && d % prev == 0) {
            acc.push(d);
            rec(rest / d, d, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 1, &mut Vec::new(), &mut out);
    out
}

/// Count elements of `Z/d1 × ... × Z/dk` killed by `p`, one by one.
pub fn brute_torsion(factors: &[u64], p: u64) -> u64 {
    let order: u64 = factors.iter().product();
    (0..order)
        .filter(|&idx| {
            let mut r = idx;
            factors.iter().all(|&d| {
                let x = r % d;
                r /= d;
                (p * x) % d == 0
            })
        })
        .count() as u64
}

/// `(f1, f2, f3) -> invariant factors` from the CAS fixture.
pub fn cas_oracle() -> HashMap<(i128, i128, i128), (i128, Vec<u64>)> {
    let mut out = HashMap::new();
    for line in CAS_ORACLE.lines().skip(1).filter(|l| !l.trim().is_empty()) {
        let v: Vec<&str> = line.split(',').collect();
        let n = |k: usize| v[k].trim().parse::<i128>().unwrap();
        let group = match v[4].trim() {
            "1" => vec![],
            s => s.split('-').map(|t| t.parse().unwrap()).collect(),
        };
        out.insert((n(0), n(1), n(2)), (n(3), group));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRow {
    pub y: u64,
    pub sign: String,
    pub n: u64,
    pub n_max: u64,
    pub sums: [u64; 3],
}

pub fn survey_oracle() -> Vec<OracleRow> {
    SURVEY_ORACLE
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let v: Vec<&str> = line.split(',').collect();
            let n = |k: usize| v[k].parse::<u64>().unwrap();
            OracleRow { y: n(0), sign: v[1].to_string(), n: n(2), n_max: n(3), sums: [n(4), n(5), n(6)] }
        })
        .collect()
}
