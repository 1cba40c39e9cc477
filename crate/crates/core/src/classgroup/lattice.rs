//! Incremental relation lattice `L ⊆ Z^n`, tracking the quotient `Z^n / L`.
//!
//! Until `L` has full rank the rows are kept in (unreduced) echelon form.
//! Afterwards only the non-trivial part of the quotient is kept: every
//! coordinate vector is mapped to `Z^k` (k = number of HNF pivots above 1)
//! and `L` becomes a small lattice there of the same index. A new relation
//! then costs `O(nk)` unless it actually enlarges `L`.

use crate::arith::{self, Overflow};

use super::snf;

const W: &str = "relation lattice";

#[derive(Debug, Clone)]
pub(crate) enum RelationLattice {
    Partial { n: usize, rows: Vec<Option<Vec<i128>>> },
    Full(Quotient),
}

#[derive(Debug, Clone)]
pub(crate) struct Quotient {
    modulus: i128,
    images: Vec<Vec<i128>>,
    hnf: Vec<Vec<i128>>,
}

impl RelationLattice {
    pub(crate) fn new(n: usize) -> Self {
        if n == 0 {
            RelationLattice::Full(Quotient { modulus: 1, images: Vec::new(), hnf: Vec::new() })
        } else {
            RelationLattice::Partial { n, rows: vec![None; n] }
        }
    }

    /// Index `[Z^n : L]`, once `L` has full rank.
    pub(crate) fn index(&self) -> Option<i128> {
        match self {
            RelationLattice::Partial { .. } => None,
            RelationLattice::Full(q) => Some(q.modulus),
        }
    }

    /// Invariant factors (all > 1) of the quotient, once finite.
    pub(crate) fn invariant_factors(&self) -> Option<Result<Vec<i128>, Overflow>> {
        match self {
            RelationLattice::Partial { .. } => None,
            RelationLattice::Full(q) => Some(
                snf::invariant_factors(&q.hnf).map(|d| d.into_iter().filter(|&x| x > 1).collect()),
            ),
        }
    }

    /// Invariant factors of `Z^n / L` with zeros for the free part; works
    /// at any rank.
    pub(crate) fn cokernel(&self) -> Result<Vec<i128>, Overflow> {
        match self {
            RelationLattice::Full(_) => Ok(self.invariant_factors().unwrap_or(Ok(Vec::new()))?),
            RelationLattice::Partial { n, rows } => {
                let m: Vec<Vec<i128>> = rows.iter().map(|r| r.clone().unwrap_or(vec![0; *n])).collect();
                Ok(snf::invariant_factors(&m)?.into_iter().filter(|&x| x != 1).collect())
            }
        }
    }

    /// Add a relation; returns whether `L` grew. On overflow the lattice is
    /// left unchanged.
    pub(crate) fn insert(&mut self, v: &[i64]) -> Result<bool, Overflow> {
        match self {
            RelationLattice::Full(q) => q.insert(v),
            RelationLattice::Partial { rows, .. } => {
                let mut work = rows.clone();
                let grew = insert_echelon(&mut work, v.iter().map(|&x| x as i128).collect())?;
                if !grew {
                    return Ok(false);
                }
                if work.iter().all(Option::is_some) {
                    let mut hnf: Vec<Vec<i128>> = work.into_iter().map(Option::unwrap).collect();
                    let modulus = pivot_product(&hnf)?;
                    reduce_rows(&mut hnf, modulus)?;
                    *self = RelationLattice::Full(Quotient::compress(&hnf, modulus)?);
                } else {
                    normalize_partial(&mut work)?;
                    *rows = work;
                }
                Ok(true)
            }
        }
    }
}

impl Quotient {
    /// Quotient data from a full-rank upper-triangular HNF whose entries are
    /// reduced modulo `modulus = Π pivots`.
    fn compress(h: &[Vec<i128>], modulus: i128) -> Result<Quotient, Overflow> {
        let n = h.len();
        let big: Vec<usize> = (0..n).filter(|&j| h[j][j] > 1).collect();
        let k = big.len();
        let mut pos = vec![usize::MAX; n];
        for (idx, &j) in big.iter().enumerate() {
            pos[j] = idx;
        }
        // e_j ≡ −Σ_{l>j} h[j][l] e_l when the pivot of row j is 1
        let mut images = vec![vec![0i128; k]; n];
        for j in (0..n).rev() {
            if h[j][j] > 1 {
                images[j][pos[j]] = 1;
                continue;
            }
            let mut img = vec![0i128; k];
            for l in j + 1..n {
                if h[j][l] != 0 {
                    axpy_mod(&mut img, &images[l], -h[j][l], modulus)?;
                }
            }
            images[j] = img;
        }
        let mut gens = Vec::with_capacity(k);
        for &j in &big {
            let mut img = vec![0i128; k];
            img[pos[j]] = h[j][j] % modulus;
            for l in j + 1..n {
                if h[j][l] != 0 {
                    axpy_mod(&mut img, &images[l], h[j][l], modulus)?;
                }
            }
            gens.push(img);
        }
        let mut hnf = scalar_rows(k, modulus);
        for g in gens {
            insert_modular(&mut hnf, g, modulus)?;
        }
        normalize_full(&mut hnf)?;
        debug_assert_eq!(pivot_product(&hnf)?, modulus);
        Ok(Quotient { modulus, images, hnf })
    }

    fn image(&self, v: &[i64]) -> Result<Vec<i128>, Overflow> {
        let k = self.hnf.len();
        let mut w = vec![0i128; k];
        for (j, &c) in v.iter().enumerate() {
            if c != 0 && k > 0 {
                axpy_mod(&mut w, &self.images[j], c as i128, self.modulus)?;
            }
        }
        Ok(w)
    }

    fn insert(&mut self, v: &[i64]) -> Result<bool, Overflow> {
        if self.modulus == 1 {
            return Ok(false);
        }
        let w = self.image(v)?;
        if contains(&self.hnf, &w)? {
            return Ok(false);
        }
        let mut hnf = self.hnf.clone();
        insert_modular(&mut hnf, w, self.modulus)?;
        let modulus = pivot_product(&hnf)?;
        reduce_rows(&mut hnf, modulus)?;
        normalize_full(&mut hnf)?;
        let inner = Quotient::compress(&hnf, modulus)?;
        let mut images = Vec::with_capacity(self.images.len());
        for img in &self.images {
            let mut out = vec![0i128; inner.hnf.len()];
            for (l, &c) in img.iter().enumerate() {
                if c != 0 && !out.is_empty() {
                    axpy_mod(&mut out, &inner.images[l], c, modulus)?;
                }
            }
            images.push(out);
        }
        *self = Quotient { modulus, images, hnf: inner.hnf };
        Ok(true)
    }
}

fn scalar_rows(k: usize, d: i128) -> Vec<Vec<i128>> {
    (0..k)
        .map(|i| (0..k).map(|j| if i == j { d } else { 0 }).collect())
        .collect()
}

fn pivot_product(h: &[Vec<i128>]) -> Result<i128, Overflow> {
    h.iter()
        .enumerate()
        .try_fold(1i128, |acc, (i, r)| arith::mul(acc, r[i], W))
}

// acc += c * v  (mod m), entries kept in [0, m)
fn axpy_mod(acc: &mut [i128], v: &[i128], c: i128, m: i128) -> Result<(), Overflow> {
    let c = c.rem_euclid(m);
    for (a, &x) in acc.iter_mut().zip(v) {
        *a = arith::add(*a, arith::mul(c, x, W)?, W)?.rem_euclid(m);
    }
    Ok(())
}

fn reduce_rows(h: &mut [Vec<i128>], m: i128) -> Result<(), Overflow> {
    for (i, row) in h.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            if j != i {
                *x = x.rem_euclid(m);
            }
        }
    }
    Ok(())
}

fn contains(h: &[Vec<i128>], w: &[i128]) -> Result<bool, Overflow> {
    let mut w = w.to_vec();
    for c in 0..h.len() {
        let piv = h[c][c];
        if w[c] % piv != 0 {
            return Ok(false);
        }
        let q = w[c] / piv;
        if q != 0 {
            for j in c..h.len() {
                w[j] = arith::sub(w[j], arith::mul(q, h[c][j], W)?, W)?;
            }
        }
    }
    Ok(true)
}

// Combine `v` into the echelon rows by extended gcds; `true` if the span grew.
fn insert_echelon(rows: &mut [Option<Vec<i128>>], mut v: Vec<i128>) -> Result<bool, Overflow> {
    let n = v.len();
    let mut grew = false;
    for col in 0..n {
        if v[col] == 0 {
            continue;
        }
        match rows[col].as_mut() {
            None => {
                if v[col] < 0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                rows[col] = Some(v);
                return Ok(true);
            }
            Some(piv) => {
                let (g, s, t) = arith::ext_gcd(piv[col], v[col]);
                let (pa, va) = (piv[col] / g, v[col] / g);
                grew |= g != piv[col];
                let mut new_piv = vec![0i128; n];
                let mut new_v = vec![0i128; n];
                for j in col..n {
                    new_piv[j] = arith::dot(&[(s, piv[j]), (t, v[j])], W)?;
                    new_v[j] = arith::dot(&[(pa, v[j]), (-va, piv[j])], W)?;
                }
                *piv = new_piv;
                v = new_v;
            }
        }
    }
    Ok(grew)
}

fn normalize_partial(rows: &mut [Option<Vec<i128>>]) -> Result<(), Overflow> {
    let n = rows.len();
    for j in 1..n {
        let Some(pj) = rows[j].clone() else { continue };
        for i in 0..j {
            if let Some(ri) = rows[i].as_mut() {
                let q = ri[j].div_euclid(pj[j]);
                if q != 0 {
                    for c in j..n {
                        ri[c] = arith::sub(ri[c], arith::mul(q, pj[c], W)?, W)?;
                    }
                }
            }
        }
    }
    Ok(())
}

// Square HNF insertion modulo `m`, where `m · Z^k` lies in the lattice.
fn insert_modular(rows: &mut [Vec<i128>], mut v: Vec<i128>, m: i128) -> Result<(), Overflow> {
    let k = v.len();
    for x in v.iter_mut() {
        *x = x.rem_euclid(m);
    }
    for col in 0..k {
        if v[col] == 0 {
            continue;
        }
        let piv = &rows[col];
        let (g, s, t) = arith::ext_gcd(piv[col], v[col]);
        let (pa, va) = (piv[col] / g, v[col] / g);
        let mut new_piv = vec![0i128; k];
        let mut new_v = vec![0i128; k];
        for j in col..k {
            new_piv[j] = arith::dot(&[(s, piv[j]), (t, v[j])], W)?;
            new_v[j] = arith::dot(&[(pa, v[j]), (-va, piv[j])], W)?;
        }
        for j in col + 1..k {
            new_piv[j] = new_piv[j].rem_euclid(m);
            new_v[j] = new_v[j].rem_euclid(m);
        }
        rows[col] = new_piv;
        v = new_v;
    }
    Ok(())
}

fn normalize_full(rows: &mut [Vec<i128>]) -> Result<(), Overflow> {
    let k = rows.len();
    for j in 1..k {
        let pj = rows[j].clone();
        for row in rows.iter_mut().take(j) {
            let q = row[j].div_euclid(pj[j]);
            if q != 0 {
                for c in j..k {
                    row[c] = arith::sub(row[c], arith::mul(q, pj[c], W)?, W)?;
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group_of(rels: &[Vec<i64>], n: usize) -> (Option<i128>, Vec<i128>) {
        let mut l = RelationLattice::new(n);
        for r in rels {
            l.insert(r).unwrap();
        }
        (l.index(), l.cokernel().unwrap())
    }

    #[test]
    fn matches_direct_snf() {
        let rels = vec![vec![2, 0, 0], vec![0, 4, 2], vec![0, 0, 6], vec![1, 2, 0], vec![0, 2, 2]];
        let m: Vec<Vec<i128>> = rels.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let direct: Vec<i128> = snf::invariant_factors(&m).unwrap().into_iter().filter(|&d| d != 1).collect();
        let (index, inc) = group_of(&rels, 3);
        assert_eq!(inc, direct);
        assert_eq!(index, Some(direct.iter().product()));
    }

    #[test]
    fn rank_deficient_has_free_part() {
        let (index, coker) = group_of(&[vec![3, 0], vec![6, 0]], 2);
        assert_eq!(index, None);
        assert_eq!(coker, vec![3, 0]);
    }

    #[test]
    fn redundant_relations_do_not_grow() {
        let mut l = RelationLattice::new(2);
        assert!(l.insert(&[4, 0]).unwrap());
        assert!(l.insert(&[0, 6]).unwrap());
        assert!(!l.insert(&[8, 6]).unwrap());
        assert!(l.insert(&[2, 3]).unwrap());
        assert_eq!(l.index(), Some(12));
        assert_eq!(l.cokernel().unwrap(), vec![12]);
    }
}
