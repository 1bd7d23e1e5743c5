//! Exact kernels of rational matrices via fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::Rational;

/// Row echelon form of an integer matrix by Bareiss elimination. Every
/// division is exact. Returns the reduced matrix and its pivot columns.
pub fn bareiss_echelon(mut a: Vec<Vec<BigInt>>) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..rows {
            for j in col + 1..cols {
                let num = &a[r][col] * &a[i][j] - &a[i][col] * &a[r][j];
                debug_assert!((&num % &prev).is_zero());
                a[i][j] = num / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[r][col].clone();
        pivots.push(col);
        r += 1;
    }
    (a, pivots)
}

/// Clears denominators row by row.
fn integer_rows(m: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect()
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    bareiss_echelon(integer_rows(m)).1.len()
}

/// Basis of `{x : m x = 0}` for a matrix with `cols` columns, in canonical
/// form: the basis matrix is in reduced echelon form with respect to the
/// reversed column order, so each vector's last nonzero entry is 1 and no
/// other vector is nonzero there. Vectors are sorted by that position.
pub fn kernel(m: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    debug_assert!(m.iter().all(|r| r.len() == cols));
    let (ech, pivots) = bareiss_echelon(integer_rows(m));
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![Rational::zero(); cols];
        x[f] = Rational::one();
        for (r, &pc) in pivots.iter().enumerate().rev() {
            let mut s = Rational::zero();
            for j in pc + 1..cols {
                if !ech[r][j].is_zero() && !x[j].is_zero() {
                    s += Rational::from_integer(ech[r][j].clone()) * &x[j];
                }
            }
            x[pc] = -s / Rational::from_integer(ech[r][pc].clone());
        }
        basis.push(x);
    }
    canonical_basis(basis, cols)
}

/// Reduced echelon form of the row space with columns taken last to first.
fn canonical_basis(mut rows: Vec<Vec<Rational>>, cols: usize) -> Vec<Vec<Rational>> {
    let mut r = 0;
    for col in (0..cols).rev() {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for j in 0..cols {
                    let d = &f * &rows[r][j];
                    rows[i][j] -= d;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows.reverse();
    rows
}
