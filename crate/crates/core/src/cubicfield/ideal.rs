//! Ideals of `Z[θ]` as rank-3 lattices in Hermite normal form.

use std::fmt;

use crate::arith::{self, Overflow};

use super::order::{IntElement, MonicCubic};
use super::poly::PolyFp;

/// Upper-triangular row HNF: row `k` has its pivot in column `k`, pivots
/// are positive and entries above a pivot lie in `[0, pivot)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdealLattice {
    rows: [IntElement; 3],
}

impl IdealLattice {
    pub fn unit() -> Self {
        IdealLattice { rows: [[1, 0, 0], [0, 1, 0], [0, 0, 1]] }
    }

    /// The principal ideal `(n)` for a rational integer `n != 0`.
    pub fn scalar(n: i128) -> Self {
        let n = n.abs();
        IdealLattice { rows: [[n, 0, 0], [0, n, 0], [0, 0, n]] }
    }

    pub fn rows(&self) -> &[IntElement; 3] {
        &self.rows
    }

    /// HNF of the Z-span of `gens`, given a positive `modulus` with
    /// `modulus · Z³` contained in that span.
    pub fn from_generators(gens: &[IntElement], modulus: i128) -> Result<Self, Overflow> {
        assert!(modulus > 0, "lattice modulus must be positive");
        let mut rows = [[modulus, 0, 0], [0, modulus, 0], [0, 0, modulus]];
        for g in gens {
            insert_row(&mut rows, *g, modulus)?;
        }
        normalize(&mut rows)?;
        Ok(IdealLattice { rows })
    }

    /// Index in `Z[θ]`, i.e. the product of the pivots.
    pub fn norm(&self) -> i128 {
        self.rows[0][0] * self.rows[1][1] * self.rows[2][2]
    }

    pub fn contains(&self, v: &IntElement) -> bool {
        let mut v = *v;
        for c in 0..3 {
            let piv = self.rows[c][c];
            if v[c] % piv != 0 {
                return false;
            }
            let k = v[c] / piv;
            if k != 0 {
                for j in c..3 {
                    match self.rows[c][j].checked_mul(k).and_then(|t| v[j].checked_sub(t)) {
                        Some(x) => v[j] = x,
                        None => return false,
                    }
                }
            }
        }
        true
    }

    /// Whether multiplication by θ maps the lattice into itself.
    pub fn is_ideal(&self, g: &MonicCubic) -> bool {
        self.rows
            .iter()
            .all(|r| g.mul_theta(r).map_or(false, |t| self.contains(&t)))
    }

    pub fn is_hnf(&self) -> bool {
        let r = &self.rows;
        (0..3).all(|i| r[i][i] > 0 && (0..i).all(|j| r[i][j] == 0))
            && (0..3).all(|j| (0..j).all(|i| (0..r[j][j]).contains(&r[i][j])))
    }

    /// `A·B`: HNF of the nine pairwise row products.
    pub fn product(&self, other: &IdealLattice, g: &MonicCubic) -> Result<Self, Overflow> {
        let modulus = arith::mul(self.norm(), other.norm(), "ideal product")?;
        let mut gens = Vec::with_capacity(9);
        for a in &self.rows {
            for b in &other.rows {
                let mut prod = g.mul(a, b)?;
                for c in prod.iter_mut() {
                    *c = c.rem_euclid(modulus);
                }
                gens.push(prod);
            }
        }
        IdealLattice::from_generators(&gens, modulus)
    }
}

impl fmt::Display for IdealLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.rows;
        write!(
            f,
            "[[{}, {}, {}], [0, {}, {}], [0, 0, {}]]",
            r[0][0], r[0][1], r[0][2], r[1][1], r[1][2], r[2][2]
        )
    }
}

fn insert_row(rows: &mut [IntElement; 3], mut v: IntElement, modulus: i128) -> Result<(), Overflow> {
    const W: &str = "hnf";
    for c in v.iter_mut() {
        *c = c.rem_euclid(modulus);
    }
    for col in 0..3 {
        if v[col] == 0 {
            continue;
        }
        let piv = rows[col];
        let (g, s, t) = arith::ext_gcd(piv[col], v[col]);
        let (pa, va) = (piv[col] / g, v[col] / g);
        let mut new_piv = [0i128; 3];
        let mut new_v = [0i128; 3];
        for j in col..3 {
            new_piv[j] = arith::dot(&[(s, piv[j]), (t, v[j])], W)?;
            new_v[j] = arith::dot(&[(pa, v[j]), (-va, piv[j])], W)?;
        }
        for j in col + 1..3 {
            new_piv[j] = new_piv[j].rem_euclid(modulus);
            new_v[j] = new_v[j].rem_euclid(modulus);
        }
        debug_assert_eq!(new_v[col], 0);
        rows[col] = new_piv;
        v = new_v;
    }
    Ok(())
}

fn normalize(rows: &mut [IntElement; 3]) -> Result<(), Overflow> {
    for j in 1..3 {
        let piv = rows[j][j];
        for i in 0..j {
            let q = rows[i][j].div_euclid(piv);
            if q != 0 {
                for k in j..3 {
                    rows[i][k] = arith::sub(rows[i][k], arith::mul(q, rows[j][k], "hnf")?, "hnf")?;
                }
            }
        }
    }
    Ok(())
}

/// A prime ideal of a maximal monogenic order, `P = (p, g_i(θ))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeIdealData {
    pub p: u64,
    pub residue_degree: u32,
    pub ramification: u32,
    pub lattice: IdealLattice,
    pub local_factor: PolyFp,
}

impl PrimeIdealData {
    pub fn norm(&self) -> i128 {
        (self.p as i128).pow(self.residue_degree)
    }
}

/// Lattice of the ideal `(p, h(θ))` for an integer polynomial `h`.
pub(crate) fn two_element_ideal(
    g: &MonicCubic,
    p: i128,
    h: &[i128],
) -> Result<IdealLattice, Overflow> {
    let h0 = g.poly_to_element(h)?;
    let h1 = g.mul_theta(&h0)?;
    let h2 = g.mul_theta(&h1)?;
    IdealLattice::from_generators(&[h0, h1, h2], p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_of_scalar_generators() {
        let l = IdealLattice::from_generators(&[[6, 0, 0], [0, 6, 0], [0, 0, 6]], 36).unwrap();
        assert_eq!(l, IdealLattice::scalar(6));
        assert_eq!(l.norm(), 216);
        assert!(l.is_hnf());
    }

    #[test]
    fn membership() {
        let g = MonicCubic::new(0, -1, 1);
        // x^3 - x + 1 ≡ (x - 3)(x^2 + 3x + 3) mod 5
        let p = two_element_ideal(&g, 5, &[-3, 1]).unwrap();
        assert_eq!(p.norm(), 5);
        assert!(p.is_hnf() && p.is_ideal(&g));
        assert!(p.contains(&[5, 0, 0]));
        assert!(p.contains(&[-3, 1, 0]));
        assert!(!p.contains(&[1, 0, 0]));
    }
}
