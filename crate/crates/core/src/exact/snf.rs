use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::int_matrix::IntMatrix;

/// Invariant factors `d_1 | d_2 | ... | d_r` (all positive) and the rank `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub factors: Vec<BigInt>,
    pub rank: usize,
}

impl SmithForm {
    /// Factors bigger than one, i.e. the torsion they contribute to a cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let rows: Vec<Vec<BigInt>> =
        (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect()).collect();
    smith_dense(rows, m.cols())
}

/// Pivot: the nonzero entry of smallest absolute value in the active block,
/// ties broken by row index and then column index.
pub(crate) fn smith_dense(mut a: Vec<Vec<BigInt>>, cols: usize) -> SmithForm {
    let nrows = a.len();
    let mut t = 0;
    while t < nrows.min(cols) {
        let Some((pi, pj)) = min_entry(&a, true, (t..nrows).flat_map(|i| (t..cols).map(move |j| (i, j)))) else {
            break;
        };
        move_to(&mut a, t, pi, pj);
        loop {
            let mut dirty = false;
            // Clear column t below the pivot.
            for i in (t + 1)..nrows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_sub(&mut a, i, t, &q, t);
                dirty |= !a[i][t].is_zero();
            }
            // Clear row t right of the pivot.
            for j in (t + 1)..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    if !row[t].is_zero() {
                        let d = &q * &row[t];
                        row[j] -= d;
                    }
                }
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                let cand = (t..nrows).map(|i| (i, t)).chain(((t + 1)..cols).map(|j| (t, j)));
                let (pi, pj) = min_entry(&a, false, cand).expect("pivot row/column became zero");
                move_to(&mut a, t, pi, pj);
                continue;
            }
            // Row and column are clear; enforce divisibility of the rest.
            let p = a[t][t].clone();
            let bad = ((t + 1)..nrows).find(|&i| a[i][(t + 1)..].iter().any(|x| !x.is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let (head, tail) = a.split_at_mut(i);
                    for (x, y) in head[t].iter_mut().zip(&tail[0]) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        t += 1;
    }
    let factors: Vec<BigInt> = (0..t).map(|i| a[i][i].abs()).collect();
    SmithForm { rank: factors.len(), factors }
}

/// Smallest nonzero entry by `(|x|, row, col)`. When `lex_order` is set the
/// positions arrive in row-major order and the first unit can stop the scan.
fn min_entry(
    a: &[Vec<BigInt>],
    lex_order: bool,
    positions: impl Iterator<Item = (usize, usize)>,
) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for (i, j) in positions {
        let x = &a[i][j];
        if x.is_zero() {
            continue;
        }
        let ax = x.abs();
        let better = match &best {
            None => true,
            Some((pos, ab)) => ax < *ab || (ax == *ab && (i, j) < *pos),
        };
        if better {
            let unit = ax.is_one();
            best = Some(((i, j), ax));
            if unit && lex_order {
                break;
            }
        }
    }
    best.map(|(pos, _)| pos)
}

fn move_to(a: &mut [Vec<BigInt>], t: usize, i: usize, j: usize) {
    a.swap(t, i);
    if j != t {
        for row in a.iter_mut() {
            row.swap(t, j);
        }
    }
}

/// `row[i] -= q * row[p]`, touching columns from `from` on.
fn row_sub(a: &mut [Vec<BigInt>], i: usize, p: usize, q: &BigInt, from: usize) {
    let (src, dst) = if p < i {
        let (h, t) = a.split_at_mut(i);
        (&h[p], &mut t[0])
    } else {
        let (h, t) = a.split_at_mut(p);
        (&t[0], &mut h[i])
    };
    for (x, y) in dst[from..].iter_mut().zip(&src[from..]) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}
