//! Perfect forms and the Voronoi enumeration.
//!
//! A positive-definite form `A` with minimum `mu` and minimal vectors `M(A)`
//! is perfect when the linear system `m^t Z m = mu` (`m` in `M(A)`) in the
//! symmetric unknown `Z` has `A` as its only solution. The cones spanned by
//! `v v^t` over the minimal vectors of perfect forms tile the cone of
//! positive-definite forms; walking across their facets enumerates the
//! finitely many classes of perfect forms modulo `GL_n(Z)`.

mod catalog;
mod enumerate;
mod equiv;
mod facets;
mod neighbor;

pub use catalog::{Catalog, CatalogClass, CatalogFacet, CATALOG_FORMAT};
pub use enumerate::{enumerate_perfect_forms, ClassEntry, Crossing, EnumerateOptions, Enumeration};
pub use equiv::{are_equivalent, pair_reduce, ClassInvariants};
pub use facets::{facets, facets_of_rays, Facet};
pub use neighbor::neighbor;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, rank_one, Rational, SymMatrix};
use crate::minvec::{minimal_vectors, MinData};

/// `q(v) = v v^t` for a primitive minimal vector `v` (canonical sign).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOneRay {
    pub vector: Vec<i64>,
    pub matrix: SymMatrix,
}

impl RankOneRay {
    pub fn new(v: &[i64]) -> Self {
        Self { vector: v.to_vec(), matrix: rank_one(v) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Perfection {
    Perfect,
    /// Kernel of the homogeneous system, in upper-triangle coordinates.
    NotPerfect { kernel: Vec<Vec<Rational>> },
}

impl Perfection {
    pub fn is_perfect(&self) -> bool {
        matches!(self, Perfection::Perfect)
    }
}

/// Row of the system `m^t Z m = mu` in upper-triangle coordinates of `Z`:
/// `m_i^2` on the diagonal slots, `2 m_i m_j` off it.
pub(crate) fn evaluation_row(m: &[i64]) -> Vec<i64> {
    let n = m.len();
    let mut row = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            row.push(if i == j { m[i] * m[i] } else { 2 * m[i] * m[j] });
        }
    }
    row
}

pub fn is_perfect(q: &SymMatrix) -> Result<Perfection> {
    let md = minimal_vectors(q)?;
    Ok(perfection_of(q.n(), &md))
}

pub(crate) fn perfection_of(n: usize, md: &MinData) -> Perfection {
    let d = n * (n + 1) / 2;
    let rows: Vec<Vec<Rational>> = md
        .vectors
        .iter()
        .map(|m| evaluation_row(m).into_iter().map(|x| Rational::from_integer(x.into())).collect())
        .collect();
    let kernel = exact::kernel(&rows, d);
    if kernel.is_empty() {
        Perfection::Perfect
    } else {
        Perfection::NotPerfect { kernel }
    }
}

/// Rescale so that the arithmetic minimum is one.
pub fn normalize(q: &SymMatrix) -> Result<SymMatrix> {
    let md = minimal_vectors(q)?;
    Ok(q.scale(&md.mu.recip()))
}

/// A perfect form (normalized to minimum one) with its minimal vectors,
/// domain rays and facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectFormRecord {
    pub form: SymMatrix,
    pub min_data: MinData,
    pub rays: Vec<RankOneRay>,
    pub facets: Vec<Facet>,
}

impl PerfectFormRecord {
    /// Normalize, check perfection and compute the facets of the domain.
    pub fn new(q: &SymMatrix) -> Result<Self> {
        let form = normalize(q)?;
        let mut rec = Self::without_facets(form)?;
        rec.facets = facets(&rec)?;
        Ok(rec)
    }

    /// As [`PerfectFormRecord::new`] but leaves `facets` empty; `form` must
    /// already have minimum one.
    pub fn without_facets(form: SymMatrix) -> Result<Self> {
        let min_data = minimal_vectors(&form)?;
        if !min_data.mu.is_one() {
            return Err(Error::Invalid(format!(
                "form must be normalized to minimum 1, found {}",
                exact::format_rational(&min_data.mu)
            )));
        }
        if !perfection_of(form.n(), &min_data).is_perfect() {
            return Err(Error::NotPerfect);
        }
        let rays = min_data.vectors.iter().map(|v| RankOneRay::new(v)).collect();
        Ok(Self { form, min_data, rays, facets: Vec::new() })
    }

    pub fn n(&self) -> usize {
        self.form.n()
    }
}

/// Rays `q(m)` of the Voronoi domain of a perfect form.
pub fn domain_cone(p: &PerfectFormRecord) -> &[RankOneRay] {
    &p.rays
}

/// The built-in seed for dimension `n`: the `A_n` root lattice, normalized.
pub fn seed_form(n: usize) -> SymMatrix {
    let a = SymMatrix::root_lattice_a(n);
    a.scale(&Rational::new(1.into(), 2.into()))
}

/// The `D_n` root lattice Gram matrix (`n >= 3`), used in tests and docs.
pub fn root_lattice_d(n: usize) -> SymMatrix {
    assert!(n >= 3);
    // Basis e1 - e2, e2 - e3, ..., e_{n-1} - e_n, e_{n-1} + e_n.
    let mut basis: Vec<Vec<i64>> = (0..n - 1)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v[i + 1] = -1;
            v
        })
        .collect();
    let mut last = vec![0; n];
    last[n - 2] = 1;
    last[n - 1] = 1;
    basis.push(last);
    SymMatrix::from_upper(n, |i, j| {
        let dot: i64 = basis[i].iter().zip(&basis[j]).map(|(a, b)| a * b).sum();
        if dot.is_zero() {
            Rational::zero()
        } else {
            Rational::from_integer(dot.into())
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> SymMatrix {
        SymMatrix::from_i64(rows).unwrap()
    }

    #[test]
    fn hexagonal_is_perfect() {
        assert!(is_perfect(&m(&[&[2, 1], &[1, 2]])).unwrap().is_perfect());
    }

    #[test]
    fn identity_is_not_perfect() {
        let Perfection::NotPerfect { kernel } = is_perfect(&SymMatrix::identity(2)).unwrap() else {
            panic!("identity is not perfect");
        };
        // Only the off-diagonal slot is free.
        assert_eq!(kernel, vec![vec![Rational::zero(), Rational::one(), Rational::zero()]]);
    }

    #[test]
    fn a3_is_perfect() {
        let a3 = m(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert!(is_perfect(&a3).unwrap().is_perfect());
        let rec = PerfectFormRecord::new(&a3).unwrap();
        assert_eq!(rec.rays.len(), 6);
        assert_eq!(rec.min_data.signed_count(), 12);
    }

    #[test]
    fn rejects_indefinite() {
        assert_eq!(is_perfect(&m(&[&[1, 2], &[2, 1]])), Err(Error::NotPositiveDefinite));
    }

    #[test]
    fn seed_domain_is_full_dimensional() {
        let rec = PerfectFormRecord::new(&seed_form(2)).unwrap();
        let vecs: Vec<_> = domain_cone(&rec).iter().map(|r| r.vector.clone()).collect();
        assert_eq!(vecs, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        let rows: Vec<Vec<Rational>> = rec.rays.iter().map(|r| r.matrix.svec()).collect();
        assert_eq!(exact::rank(&rows), 3);
    }

    #[test]
    fn d4_has_twelve_minimal_pairs() {
        let d4 = root_lattice_d(4);
        let rec = PerfectFormRecord::new(&d4).unwrap();
        assert_eq!(rec.rays.len(), 12);
    }
}
