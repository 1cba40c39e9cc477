//! Smith normal form over the integers.

use crate::arith::{self, Overflow};

/// `left · M · right = diag(diagonal)` with unimodular `left` and `right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithNormalForm {
    /// `min(rows, cols)` entries, non-negative, each dividing the next
    /// (zeros last).
    pub diagonal: Vec<i128>,
    pub left: Vec<Vec<i128>>,
    pub right: Vec<Vec<i128>>,
}

pub fn smith_normal_form(m: &[Vec<i128>]) -> Result<SmithNormalForm, Overflow> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut left = identity(rows);
    let mut right = identity(cols);
    let diagonal = reduce(m.to_vec(), cols, Some((&mut left, &mut right)))?;
    Ok(SmithNormalForm { diagonal, left, right })
}

/// The SNF diagonal alone, skipping the transforms.
pub fn invariant_factors(m: &[Vec<i128>]) -> Result<Vec<i128>, Overflow> {
    let cols = m.first().map_or(0, |r| r.len());
    reduce(m.to_vec(), cols, None)
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

type Transforms<'a> = Option<(&'a mut Vec<Vec<i128>>, &'a mut Vec<Vec<i128>>)>;

const W: &str = "smith normal form";

// row_dst -= q * row_src
fn row_axpy(a: &mut [Vec<i128>], dst: usize, src: usize, q: i128) -> Result<(), Overflow> {
    if q == 0 {
        return Ok(());
    }
    for j in 0..a[dst].len() {
        let t = arith::mul(q, a[src][j], W)?;
        a[dst][j] = arith::sub(a[dst][j], t, W)?;
    }
    Ok(())
}

fn col_axpy(a: &mut [Vec<i128>], dst: usize, src: usize, q: i128) -> Result<(), Overflow> {
    if q == 0 {
        return Ok(());
    }
    for row in a.iter_mut() {
        let t = arith::mul(q, row[src], W)?;
        row[dst] = arith::sub(row[dst], t, W)?;
    }
    Ok(())
}

fn reduce(mut a: Vec<Vec<i128>>, cols: usize, mut tr: Transforms<'_>) -> Result<Vec<i128>, Overflow> {
    let rows = a.len();
    let n = rows.min(cols);
    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j] != 0
                        && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Ok(finish(&a, n));
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            if let Some((l, r)) = tr.as_mut() {
                l.swap(t, pi);
                for row in r.iter_mut() {
                    row.swap(t, pj);
                }
            }

            let piv = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t] / piv;
                row_axpy(&mut a, i, t, q)?;
                if let Some((l, _)) = tr.as_mut() {
                    row_axpy(l, i, t, q)?;
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / piv;
                col_axpy(&mut a, j, t, q)?;
                if let Some((_, r)) = tr.as_mut() {
                    col_axpy(r, j, t, q)?;
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row and retry
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % piv != 0));
            match offender {
                Some(i) => {
                    row_axpy(&mut a, t, i, -1)?;
                    if let Some((l, _)) = tr.as_mut() {
                        row_axpy(l, t, i, -1)?;
                    }
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            for v in a[t].iter_mut() {
                *v = -*v;
            }
            if let Some((l, _)) = tr.as_mut() {
                for v in l[t].iter_mut() {
                    *v = -*v;
                }
            }
        }
    }
    Ok(finish(&a, n))
}

fn finish(a: &[Vec<i128>], n: usize) -> Vec<i128> {
    (0..n).map(|t| a[t][t].abs()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matmul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
        let inner = b.len();
        let cols = b.first().map_or(0, |r| r.len());
        a.iter()
            .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect())
            .collect()
    }

    #[test]
    fn examples() {
        let id: Vec<Vec<i128>> = identity(3);
        assert_eq!(invariant_factors(&id).unwrap(), vec![1, 1, 1]);
        assert_eq!(invariant_factors(&[vec![2, 0], vec![0, 3]]).unwrap(), vec![1, 6]);
        assert_eq!(invariant_factors(&[vec![2, 4], vec![4, 8]]).unwrap(), vec![2, 0]);
        assert!(invariant_factors(&[]).unwrap().is_empty());
    }

    #[test]
    fn transforms_certify_the_diagonal() {
        let m = vec![vec![4, -6, 2], vec![10, 3, 7], vec![0, 12, -8], vec![5, 5, 5]];
        let s = smith_normal_form(&m).unwrap();
        let d = matmul(&matmul(&s.left, &m), &s.right);
        for (i, row) in d.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let want = if i == j { s.diagonal[i] } else { 0 };
                assert_eq!(v, want, "entry ({i},{j})");
            }
        }
        for w in s.diagonal.windows(2) {
            assert!(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0));
        }
    }
}
