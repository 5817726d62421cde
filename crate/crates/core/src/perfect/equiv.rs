//! Unimodular equivalence `U^t A U = B` by backtracking over short vectors.

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Result;
use crate::exact::{IntMatrix, Rational, SymMatrix};
use crate::minvec::{minimal_vectors, vectors_below};

/// Cheap invariants of a form under `GL_n(Z)`; unequal invariants rule out
/// equivalence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassInvariants {
    pub det: Rational,
    pub mu: Rational,
    pub min_count: usize,
    /// Sorted `|A(m_i, m_j)|` over pairs of minimal vectors.
    pub products: Vec<Rational>,
}

impl ClassInvariants {
    pub fn of(q: &SymMatrix) -> Result<Self> {
        let md = minimal_vectors(q)?;
        let mut products = Vec::new();
        for (i, u) in md.vectors.iter().enumerate() {
            for v in &md.vectors[i + 1..] {
                products.push(q.bilinear(u, v).abs());
            }
        }
        products.sort();
        Ok(Self { det: q.determinant(), mu: md.mu, min_count: md.vectors.len(), products })
    }
}

/// A witness `U` in `GL_n(Z)` with `U^t a U = b`, if the forms are equivalent.
/// Both forms must be positive-definite.
pub fn are_equivalent(a: &SymMatrix, b: &SymMatrix) -> Option<IntMatrix> {
    if a.n() != b.n() {
        return None;
    }
    let (ia, ib) = (ClassInvariants::of(a).ok()?, ClassInvariants::of(b).ok()?);
    if ia != ib {
        return None;
    }
    isometry(a, b)
}

/// Search without the invariant pre-filter.
pub(crate) fn isometry(a: &SymMatrix, b: &SymMatrix) -> Option<IntMatrix> {
    let n = a.n();
    let (b_red, _, v_inv) = pair_reduce_with_inverse(b);

    // Work with integer Gram matrices scaled by a common denominator.
    let l = num_integer::lcm(a.denominator_lcm(), b_red.denominator_lcm());
    let to_int = |m: &SymMatrix| -> Option<Vec<Vec<i128>>> {
        m.rows()
            .map(|r| r.iter().map(|x| (x * &l).to_integer().to_i128()).collect::<Option<Vec<_>>>())
            .collect()
    };
    let ga = to_int(a)?;
    let gb = to_int(&b_red)?;

    let max_diag = (0..n).map(|i| b_red.get(i, i)).max()?.clone();
    let short = vectors_below(a, &max_diag).ok()?;
    let mut cands: Vec<Vec<(Vec<i64>, Vec<i128>)>> = vec![Vec::new(); n];
    for (x, val) in &short {
        for (j, c) in cands.iter_mut().enumerate() {
            if val == b_red.get(j, j) {
                let mut signs = vec![x.clone()];
                if j > 0 {
                    signs.push(x.iter().map(|t| -t).collect());
                }
                for y in signs {
                    let gy = mat_vec(&ga, &y);
                    c.push((y, gy));
                }
            }
        }
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let u_prime = search(&cands, &gb, &mut chosen)?;
    let u = u_prime.mul(&v_inv);
    debug_assert_eq!(a.congruence(&u), *b);
    Some(u)
}

fn mat_vec(g: &[Vec<i128>], x: &[i64]) -> Vec<i128> {
    g.iter().map(|row| row.iter().zip(x).map(|(a, &b)| a * b as i128).sum()).collect()
}

fn dot(a: &[i128], x: &[i64]) -> i128 {
    a.iter().zip(x).map(|(p, &q)| p * q as i128).sum()
}

fn search(
    cands: &[Vec<(Vec<i64>, Vec<i128>)>],
    gb: &[Vec<i128>],
    chosen: &mut Vec<usize>,
) -> Option<IntMatrix> {
    let j = chosen.len();
    if j == cands.len() {
        let cols: Vec<Vec<i64>> = chosen.iter().enumerate().map(|(k, &c)| cands[k][c].0.clone()).collect();
        let u = IntMatrix::from_columns(&cols);
        return u.is_unimodular().then_some(u);
    }
    'next: for (c, (x, _)) in cands[j].iter().enumerate() {
        for (k, &ck) in chosen.iter().enumerate() {
            let gx = &cands[k][ck].1;
            if dot(gx, x) != gb[k][j] {
                continue 'next;
            }
        }
        chosen.push(c);
        if let Some(u) = search(cands, gb, chosen) {
            return Some(u);
        }
        chosen.pop();
    }
    None
}

/// Greedy pairwise reduction: returns `(B', V)` with `B' = V^t B V` and no
/// single `col_j -= k col_i` step shortening a basis vector.
pub fn pair_reduce(b: &SymMatrix) -> (SymMatrix, IntMatrix) {
    let (r, v, _) = pair_reduce_with_inverse(b);
    (r, v)
}

fn pair_reduce_with_inverse(b: &SymMatrix) -> (SymMatrix, IntMatrix, IntMatrix) {
    let n = b.n();
    let mut g: Vec<Vec<Rational>> = b.rows().map(|r| r.to_vec()).collect();
    let mut v = vec![vec![0i64; n]; n];
    let mut vi = vec![vec![0i64; n]; n];
    for i in 0..n {
        v[i][i] = 1;
        vi[i][i] = 1;
    }
    let mut changed = true;
    while changed {
        changed = false;
        for j in 0..n {
            for i in 0..n {
                if i == j {
                    continue;
                }
                let q = (&g[i][j] / &g[i][i]).round().to_integer();
                if q.is_zero() {
                    continue;
                }
                let qr = Rational::from_integer(q.clone());
                let new_jj = &g[j][j] - &qr * &g[i][j] * Rational::from_integer(2.into()) + &qr * &qr * &g[i][i];
                if new_jj >= g[j][j] {
                    continue;
                }
                // B <- E^t B E with E = I - q e_i e_j^t.
                for row in g.iter_mut() {
                    let t = &qr * &row[i];
                    row[j] -= t;
                }
                let gi = g[i].clone();
                for (x, y) in g[j].iter_mut().zip(&gi) {
                    *x -= &qr * y;
                }
                let qi = q.to_i64().expect("reduction step overflow");
                for row in v.iter_mut() {
                    row[j] -= qi * row[i];
                }
                let vij = vi[j].clone();
                for (x, y) in vi[i].iter_mut().zip(&vij) {
                    *x += qi * y;
                }
                changed = true;
            }
        }
    }
    let refs = |m: &Vec<Vec<i64>>| IntMatrix::from_i64(&m.iter().map(|r| r.as_slice()).collect::<Vec<_>>());
    let reduced = SymMatrix::new(g).expect("congruence keeps symmetry");
    (reduced, refs(&v), refs(&vi))
}
