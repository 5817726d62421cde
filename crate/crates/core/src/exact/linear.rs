use num_traits::{One, Zero};

use super::rational::Rational;

/// Outcome of solving `A x = b` exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(Vec<Rational>),
    /// `particular + span(kernel)`.
    Affine { particular: Vec<Rational>, kernel: Vec<Vec<Rational>> },
    Infeasible,
}

/// Reduce `a` to reduced row echelon form, pivoting only in the first
/// `pivot_cols` columns. Returns the pivot columns in order.
pub(crate) fn rref_in_place(a: &mut [Vec<Rational>], pivot_cols: usize) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        if !inv.is_one() {
            for x in a[r].iter_mut() {
                *x *= &inv;
            }
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Reduced row echelon form and its pivot columns.
pub fn rref(a: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m = a.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let p = rref_in_place(&mut m, cols);
    (m, p)
}

pub fn rank(a: &[Vec<Rational>]) -> usize {
    rref(a).1.len()
}

/// Basis of the right kernel `{x : A x = 0}`; `cols` is needed when `a` has no rows.
pub fn kernel(a: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut m = a.to_vec();
    let pivots = rref_in_place(&mut m, cols);
    kernel_from_rref(&m, &pivots, cols)
}

fn kernel_from_rref(m: &[Vec<Rational>], pivots: &[usize], cols: usize) -> Vec<Vec<Rational>> {
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn solve_linear(a: &[Vec<Rational>], b: &[Rational]) -> LinearSolution {
    assert_eq!(a.len(), b.len(), "row count of A must match b");
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref_in_place(&mut m, cols);
    if m.iter().skip(pivots.len()).any(|row| !row[cols].is_zero()) {
        return LinearSolution::Infeasible;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = m[r][cols].clone();
    }
    let kernel = kernel_from_rref(&m, &pivots, cols);
    if kernel.is_empty() {
        LinearSolution::Unique(x)
    } else {
        LinearSolution::Affine { particular: x, kernel }
    }
}

pub(crate) fn determinant(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let pivot = a[k][k].clone();
        det *= &pivot;
        for i in (k + 1)..n {
            let f = &a[i][k] / &pivot;
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    det
}
