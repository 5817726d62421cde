use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::int_matrix::IntMatrix;
use super::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// Symmetric `n x n` matrix with exact rational entries, stored densely.
///
/// Also used as a quadratic form `x -> x^t A x` and, for the rank-one
/// matrices `v v^t`, as a point of the Voronoi polyhedron.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl SymMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        for row in &rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    /// Build from a function of the upper triangle `(i, j)` with `i <= j`.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let x = f(i, j);
                entries[j * n + i] = x.clone();
                entries[i * n + j] = x;
            }
        }
        Self { n, entries }
    }

    pub fn zero(n: usize) -> Self {
        Self { n, entries: vec![Rational::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_upper(n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    /// Gram matrix of the root lattice `A_n`: 2 on the diagonal, -1 next to it.
    pub fn root_lattice_a(n: usize) -> Self {
        Self::from_upper(n, |i, j| match j - i {
            0 => Rational::from_integer(2.into()),
            1 => Rational::from_integer((-1).into()),
            _ => Rational::zero(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension `n(n+1)/2` of the space of symmetric matrices.
    pub fn space_dim(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.entries.chunks(self.n)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// Upper-triangle coordinates `(a_00, a_01, .., a_0n, a_11, ..)`.
    pub fn svec(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.space_dim());
        for i in 0..self.n {
            for j in i..self.n {
                out.push(self.get(i, j).clone());
            }
        }
        out
    }

    pub fn from_svec(n: usize, coords: &[Rational]) -> Self {
        let mut it = coords.iter();
        Self::from_upper(n, |_, _| it.next().expect("svec too short").clone())
    }

    /// Leading principal minors `det(A[..k, ..k])` for `k = 1..=n`.
    pub fn leading_minors(&self) -> Vec<Rational> {
        // Gaussian elimination without pivoting: the k-th minor is the
        // product of the first k pivots, as long as they are nonzero.
        let n = self.n;
        let mut a = self.entries.clone();
        let mut minors = Vec::with_capacity(n);
        let mut acc = Rational::one();
        for k in 0..n {
            let pivot = a[k * n + k].clone();
            acc *= &pivot;
            minors.push(acc.clone());
            if pivot.is_zero() {
                // Fall back to direct determinants for the rest.
                for m in (k + 2)..=n {
                    minors.push(self.principal_minor(m));
                }
                return minors;
            }
            for i in (k + 1)..n {
                let f = &a[i * n + k] / &pivot;
                if f.is_zero() {
                    continue;
                }
                for j in k..n {
                    let t = &f * &a[k * n + j];
                    a[i * n + j] -= t;
                }
            }
        }
        minors
    }

    fn principal_minor(&self, m: usize) -> Rational {
        let rows: Vec<Vec<Rational>> =
            (0..m).map(|i| (0..m).map(|j| self.get(i, j).clone()).collect()).collect();
        super::linear::determinant(rows)
    }

    pub fn determinant(&self) -> Rational {
        self.principal_minor(self.n)
    }

    /// Positive-definite iff every leading principal minor is positive.
    pub fn is_positive_definite(&self) -> bool {
        self.leading_minors().iter().all(|m| m.is_positive())
    }

    /// `v^t A v` for an integer vector.
    pub fn evaluate(&self, v: &[i64]) -> Result<Rational> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: v.len() });
        }
        Ok(self.bilinear(v, v))
    }

    /// `u^t A v`; caller guarantees matching lengths.
    pub fn bilinear(&self, u: &[i64], v: &[i64]) -> Rational {
        let n = self.n;
        let mut acc = Rational::zero();
        for i in 0..n {
            if u[i] == 0 {
                continue;
            }
            let mut row = Rational::zero();
            for j in 0..n {
                if v[j] != 0 {
                    row += &self.entries[i * n + j] * BigInt::from(v[j]);
                }
            }
            acc += row * BigInt::from(u[i]);
        }
        acc
    }

    /// Change of variables `U^t A U`.
    pub fn congruence(&self, u: &IntMatrix) -> Self {
        let n = self.n;
        assert_eq!(u.rows(), n);
        assert_eq!(u.cols(), n);
        // A U first, then U^t (A U).
        let mut au = vec![Rational::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Rational::zero();
                for k in 0..n {
                    let c = u.get(k, j);
                    if !c.is_zero() {
                        s += &self.entries[i * n + k] * c;
                    }
                }
                au[i * n + j] = s;
            }
        }
        Self::from_upper(n, |i, j| {
            let mut s = Rational::zero();
            for k in 0..n {
                let c = u.get(k, i);
                if !c.is_zero() {
                    s += &au[k * n + j] * c;
                }
            }
            s
        })
    }

    /// `W X W^t`, the action on the rank-one side.
    pub fn transform_rays(&self, w: &IntMatrix) -> Self {
        self.congruence(&w.transpose())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|x| x * c).collect() }
    }

    /// `self + t * other`.
    pub fn add_scaled(&self, other: &Self, t: &Rational) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b * t).collect(),
        }
    }

    /// Trace pairing `<A, B> = tr(A B)`.
    pub fn trace_pairing(&self, other: &Self) -> Rational {
        self.entries.iter().zip(&other.entries).map(|(a, b)| a * b).sum()
    }

    /// Smallest positive integer `d` such that `d * A` is integral.
    pub fn denominator_lcm(&self) -> BigInt {
        self.entries.iter().fold(BigInt::one(), |l, x| num_integer::lcm(l, x.denom().clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }
}

/// The rank-one matrix `v v^t`.
pub fn rank_one(v: &[i64]) -> SymMatrix {
    SymMatrix::from_upper(v.len(), |i, j| Rational::from_integer(BigInt::from(v[i] * v[j])))
}

/// `<R, v v^t> = v^t R v`, the value of a linear functional on a rank-one ray.
pub fn evaluate_rank_one(r: &SymMatrix, v: &[i64]) -> Rational {
    r.bilinear(v, v)
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", format_rational(x))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct SymMatrixJson {
    n: usize,
    rows: Vec<Vec<String>>,
}

impl Serialize for SymMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SymMatrixJson {
            n: self.n,
            rows: self.rows().map(|r| r.iter().map(format_rational).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SymMatrixJson::deserialize(d)?;
        if raw.rows.len() != raw.n {
            return Err(D::Error::custom(format!("expected {} rows, found {}", raw.n, raw.rows.len())));
        }
        let rows = raw
            .rows
            .iter()
            .map(|r| r.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        SymMatrix::new(rows).map_err(D::Error::custom)
    }
}
