//! Arithmetic minimum and minimal vectors of a positive-definite form.
//!
//! Short vectors are enumerated with a Fincke–Pohst traversal over an exact
//! rational Cholesky-type decomposition
//! `Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2`; every interval endpoint
//! is decided by exact comparison, never by a rounded square root.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{canonical_sign, is_primitive, Rational, SymMatrix};
use crate::par::{self, Execution};

/// `(mu(A), M(A))` with vectors stored up to sign, first nonzero coordinate
/// positive, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinData {
    #[serde(with = "crate::exact::rational::as_string")]
    pub mu: Rational,
    pub vectors: Vec<Vec<i64>>,
}

impl MinData {
    /// `|M(A)|` counting `v` and `-v` separately.
    pub fn signed_count(&self) -> usize {
        2 * self.vectors.len()
    }
}

pub fn minimal_vectors(q: &SymMatrix) -> Result<MinData> {
    minimal_vectors_with(q, Execution::Sequential)
}

pub fn minimal_vectors_with(q: &SymMatrix, exec: Execution) -> Result<MinData> {
    let bound = (0..q.n()).map(|i| q.get(i, i)).min().cloned().ok_or(Error::NotPositiveDefinite)?;
    let short = vectors_below_with(q, &bound, exec)?;
    let mu = short.iter().map(|(_, v)| v).min().cloned().expect("unit vectors lie below the bound");
    let vectors = short.into_iter().filter(|(_, v)| *v == mu).map(|(x, _)| x).collect();
    Ok(MinData { mu, vectors })
}

/// All primitive vectors (up to sign) with `Q(v) <= bound`, with their values,
/// sorted lexicographically by vector.
pub fn vectors_below(q: &SymMatrix, bound: &Rational) -> Result<Vec<(Vec<i64>, Rational)>> {
    vectors_below_with(q, bound, Execution::Sequential)
}

pub fn vectors_below_with(
    q: &SymMatrix,
    bound: &Rational,
    exec: Execution,
) -> Result<Vec<(Vec<i64>, Rational)>> {
    let n = q.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    let dec = Decomposition::new(q)?;
    if !bound.is_positive() {
        return Ok(Vec::new());
    }
    // Split on the last coordinate; it is kept nonnegative so that each
    // +/- pair is visited once.
    let top = n - 1;
    let zero = Rational::zero();
    let tops: Vec<i64> = dec.range(top, &zero, bound).into_iter().filter(|&x| x >= 0).collect();
    let chunks = par::map(exec, &tops, |&xt| {
        let mut out = Vec::new();
        let mut x = vec![0i64; n];
        x[top] = xt;
        let used = dec.term(top, &zero, xt);
        dec.descend(top, &mut x, &used, bound, xt != 0, &mut out);
        out
    });
    let mut all: Vec<(Vec<i64>, Rational)> = chunks
        .into_iter()
        .flatten()
        .filter(|(v, _)| is_primitive(v))
        .map(|(v, val)| (canonical_sign(v), val))
        .collect();
    all.sort();
    Ok(all)
}

struct Decomposition {
    n: usize,
    /// `q[i][i]` on the diagonal, `q[i][j]` (j > i) the coefficients above.
    q: Vec<Vec<Rational>>,
}

impl Decomposition {
    fn new(a: &SymMatrix) -> Result<Self> {
        let n = a.n();
        let mut q: Vec<Vec<Rational>> = a.rows().map(|r| r.to_vec()).collect();
        for i in 0..n {
            if !q[i][i].is_positive() {
                return Err(Error::NotPositiveDefinite);
            }
            for j in (i + 1)..n {
                q[j][i] = q[i][j].clone();
                q[i][j] = &q[i][j] / &q[i][i];
            }
            for k in (i + 1)..n {
                for l in k..n {
                    let t = &q[k][i] * &q[i][l];
                    q[k][l] -= t;
                }
            }
        }
        Ok(Self { n, q })
    }

    fn center(&self, i: usize, x: &[i64]) -> Rational {
        let mut c = Rational::zero();
        for j in (i + 1)..self.n {
            if x[j] != 0 {
                c -= &self.q[i][j] * BigInt::from(x[j]);
            }
        }
        c
    }

    /// `q_ii (x - c)^2`.
    fn term(&self, i: usize, c: &Rational, x: i64) -> Rational {
        let d = Rational::from_integer(x.into()) - c;
        &self.q[i][i] * &d * &d
    }

    /// Integers `x` with `q_ii (x - c)^2 <= budget`, ascending.
    fn range(&self, i: usize, c: &Rational, budget: &Rational) -> Vec<i64> {
        if budget.is_negative() {
            return Vec::new();
        }
        let start = c.floor().to_integer().to_i64().expect("center overflow");
        let mut lo = start;
        while self.term(i, c, lo) <= *budget {
            lo -= 1;
        }
        let mut hi = start + 1;
        while self.term(i, c, hi) <= *budget {
            hi += 1;
        }
        ((lo + 1)..hi).collect()
    }

    /// Fill coordinates below `level` given `x[level..]`; `used` is the
    /// value already spent by the fixed coordinates.
    fn descend(
        &self,
        level: usize,
        x: &mut Vec<i64>,
        used: &Rational,
        bound: &Rational,
        nonzero_above: bool,
        out: &mut Vec<(Vec<i64>, Rational)>,
    ) {
        if level == 0 {
            if nonzero_above {
                out.push((x.clone(), used.clone()));
            }
            return;
        }
        let i = level - 1;
        let c = self.center(i, x);
        let budget = bound - used;
        for xi in self.range(i, &c, &budget) {
            if !nonzero_above && xi < 0 {
                continue;
            }
            x[i] = xi;
            let u = used + self.term(i, &c, xi);
            self.descend(i, x, &u, bound, nonzero_above || xi != 0, out);
        }
        x[i] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn m(rows: &[&[i64]]) -> SymMatrix {
        SymMatrix::from_i64(rows).unwrap()
    }

    #[test]
    fn identity_minimum() {
        let d = minimal_vectors(&SymMatrix::identity(2)).unwrap();
        assert_eq!(d.mu, rat(1, 1));
        assert_eq!(d.vectors, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn hexagonal_minimum() {
        let d = minimal_vectors(&m(&[&[2, 1], &[1, 2]])).unwrap();
        assert_eq!(d.mu, rat(2, 1));
        assert_eq!(d.vectors, vec![vec![0, 1], vec![1, -1], vec![1, 0]]);
        assert_eq!(d.signed_count(), 6);
    }

    #[test]
    fn unbalanced_diagonal() {
        let d = minimal_vectors(&m(&[&[1, 0], &[0, 5]])).unwrap();
        assert_eq!(d.mu, rat(1, 1));
        assert_eq!(d.vectors, vec![vec![1, 0]]);
    }

    #[test]
    fn short_vectors_of_identity() {
        let v = vectors_below(&SymMatrix::identity(2), &rat(1, 1)).unwrap();
        assert_eq!(v, vec![(vec![0, 1], rat(1, 1)), (vec![1, 0], rat(1, 1))]);
        let v = vectors_below(&SymMatrix::identity(2), &rat(2, 1)).unwrap();
        assert_eq!(
            v,
            vec![
                (vec![0, 1], rat(1, 1)),
                (vec![1, -1], rat(2, 1)),
                (vec![1, 0], rat(1, 1)),
                (vec![1, 1], rat(2, 1)),
            ]
        );
    }

    #[test]
    fn short_vectors_of_hexagonal() {
        let v = vectors_below(&m(&[&[2, 1], &[1, 2]]), &rat(2, 1)).unwrap();
        let vecs: Vec<_> = v.into_iter().map(|(x, _)| x).collect();
        assert_eq!(vecs, vec![vec![0, 1], vec![1, -1], vec![1, 0]]);
    }

    #[test]
    fn non_primitive_skipped() {
        let v = vectors_below(&SymMatrix::identity(1), &rat(9, 1)).unwrap();
        assert_eq!(v, vec![(vec![1], rat(1, 1))]);
    }

    #[test]
    fn rejects_indefinite() {
        let q = m(&[&[1, 2], &[2, 1]]);
        assert_eq!(minimal_vectors(&q), Err(Error::NotPositiveDefinite));
        assert_eq!(vectors_below(&q, &rat(3, 1)), Err(Error::NotPositiveDefinite));
    }

    #[test]
    fn parallel_split_agrees() {
        let q = SymMatrix::root_lattice_a(4);
        let a = vectors_below_with(&q, &rat(4, 1), Execution::Sequential).unwrap();
        let b = vectors_below_with(&q, &rat(4, 1), Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
