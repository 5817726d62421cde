//! Voronoi reduction: locate the cone of the Voronoi fan containing a form.
//!
//! The walk starts in the seed domain and repeatedly crosses the facet whose
//! normal is most negative on the input. The trace pairing of the current
//! perfect form with the input strictly decreases at every crossing, and it
//! takes only finitely many values below any bound, so the walk stops.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, canonical_sign, rank_one, IntMatrix, LinearSolution, Membership, Rational, SymMatrix};
use crate::perfect::Enumeration;

pub const DEFAULT_STEP_CAP: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionResult {
    pub class_index: usize,
    /// `W` such that the containing domain is `W D(A) W^t`, i.e. spanned by
    /// `q(W m)` for the stored minimal vectors `m` of the class.
    pub witness: IntMatrix,
    /// Indices (into the class's rays) of the open cone containing the input.
    pub support: Vec<usize>,
    /// Translated minimal vectors `W m` on the support, canonical sign.
    pub rays: Vec<Vec<i64>>,
    /// One coefficient per ray of the class; positive exactly on `support`.
    #[serde(with = "rational_vec")]
    pub coefficients: Vec<Rational>,
}

/// One facet crossing of the walk: the class left and the facet crossed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkStep {
    pub class: usize,
    pub facet: usize,
}

pub fn voronoi_reduce(q: &SymMatrix, catalog: &Enumeration) -> Result<ReductionResult> {
    reduce_walk_trace(q, catalog, DEFAULT_STEP_CAP).map(|(r, _)| r)
}

pub fn reduce_walk_trace(
    q: &SymMatrix,
    catalog: &Enumeration,
    step_cap: usize,
) -> Result<(ReductionResult, Vec<WalkStep>)> {
    if q.n() != catalog.n {
        return Err(Error::DimensionMismatch { expected: catalog.n, got: q.n() });
    }
    if !q.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    if !catalog.is_complete() {
        return Err(Error::IncompleteCatalog { n: catalog.n });
    }
    let n = q.n();
    let mut class = 0;
    let mut w = IntMatrix::identity(n);
    let mut trace = Vec::new();
    let (y, values) = loop {
        let w_inv = w.inverse_unimodular().expect("walk keeps W unimodular");
        // Pull the input back into the stored frame: y = W^{-1} x W^{-t}.
        let y = q.transform_rays(&w_inv);
        let entry = &catalog.classes[class];
        let values: Vec<Rational> = entry.record.facets.iter().map(|f| f.normal.trace_pairing(&y)).collect();
        let worst = values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_negative())
            .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))
            .map(|(i, _)| i);
        let Some(facet) = worst else { break (y, values) };
        if trace.len() >= step_cap {
            return Err(Error::WalkLimit(step_cap));
        }
        let crossing = entry
            .crossings
            .iter()
            .find(|x| x.facet == facet)
            .ok_or(Error::IncompleteCatalog { n })?;
        trace.push(WalkStep { class, facet });
        w = w.mul(&crossing.transform);
        class = crossing.neighbor;
    };

    let rec = &catalog.classes[class].record;
    // The open cone containing y is cut out by the facets tight at y.
    let tight: Vec<usize> = (0..values.len()).filter(|&f| values[f].is_zero()).collect();
    let support: Vec<usize> = (0..rec.rays.len())
        .filter(|i| tight.iter().all(|&f| rec.facets[f].support.contains(i)))
        .collect();
    let face: Vec<SymMatrix> = support.iter().map(|&i| rec.rays[i].matrix.clone()).collect();
    let lambda = positive_combination(&face, &y)
        .ok_or_else(|| Error::Invalid("input not in the relative interior of its face".into()))?;
    let mut coefficients = vec![Rational::zero(); rec.rays.len()];
    for (&i, c) in support.iter().zip(lambda) {
        coefficients[i] = c;
    }
    let rays = support.iter().map(|&i| canonical_sign(w.apply(&rec.rays[i].vector))).collect();
    let result = ReductionResult { class_index: class, witness: w, support, rays, coefficients };
    debug_assert!(result.reconstructs(q));
    Ok((result, trace))
}

impl ReductionResult {
    /// `sum_i lambda_i q(W m_i) == x`.
    pub fn reconstructs(&self, x: &SymMatrix) -> bool {
        let sum = self
            .rays
            .iter()
            .zip(self.support.iter().map(|&i| &self.coefficients[i]))
            .fold(SymMatrix::zero(x.n()), |acc, (v, c)| acc.add_scaled(&rank_one(v), c));
        sum == *x
    }
}

/// Strictly positive `lambda` with `sum lambda_i rays_i = target`, assuming
/// `target` lies in the relative interior of `cone(rays)`.
fn positive_combination(rays: &[SymMatrix], target: &SymMatrix) -> Option<Vec<Rational>> {
    if rays.is_empty() {
        return target.is_zero().then(Vec::new);
    }
    let cols: Vec<Vec<Rational>> = rays.iter().map(SymMatrix::svec).collect();
    let d = cols[0].len();
    let a: Vec<Vec<Rational>> = (0..d).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    if let LinearSolution::Unique(x) = exact::solve_linear(&a, &target.svec()) {
        return x.iter().all(Signed::is_positive).then_some(x);
    }
    // Non-simplicial face: shave eps off every ray until the rest is still
    // in the cone; then every coefficient is at least eps.
    let total = rays.iter().fold(SymMatrix::zero(target.n()), |acc, r| acc.add_scaled(r, &Rational::from_integer(1.into())));
    let mut eps = Rational::from_integer(1.into());
    for _ in 0..256 {
        let shaved = target.add_scaled(&total, &-eps.clone());
        if let Membership::Inside { coefficients, .. } = exact::cone_membership(rays, &shaved) {
            return Some(coefficients.into_iter().map(|c| c + &eps).collect());
        }
        eps /= Rational::from_integer(2.into());
    }
    None
}

mod rational_vec {
    use super::Rational;
    use crate::exact::{format_rational, parse_rational};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(format_rational).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|s| parse_rational(s).map_err(serde::de::Error::custom)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::perfect::{enumerate_perfect_forms, EnumerateOptions};

    fn catalog2() -> Enumeration {
        enumerate_perfect_forms(2, &EnumerateOptions::default()).unwrap()
    }

    #[test]
    fn seed_interior_point() {
        let cat = catalog2();
        let x = SymMatrix::from_i64(&[&[2, 1], &[1, 2]]).unwrap();
        let (r, trace) = reduce_walk_trace(&x, &cat, DEFAULT_STEP_CAP).unwrap();
        assert!(trace.is_empty());
        assert_eq!(r.class_index, 0);
        assert_eq!(r.support, vec![0, 1, 2]);
        assert_eq!(r.coefficients, vec![rat(1, 1); 3]);
        assert!(r.reconstructs(&x));
    }

    #[test]
    fn identity_lies_on_a_face() {
        let cat = catalog2();
        let r = voronoi_reduce(&SymMatrix::identity(2), &cat).unwrap();
        assert_eq!(r.rays, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(r.support.len(), 2);
        assert!(r.support.iter().all(|&i| r.coefficients[i] == rat(1, 1)));
    }

    #[test]
    fn far_translate_walks_back() {
        let cat = catalog2();
        let v = IntMatrix::from_i64(&[&[5, 8], &[3, 5]]);
        let x = SymMatrix::from_i64(&[&[2, 1], &[1, 2]]).unwrap().congruence(&v);
        let (r, trace) = reduce_walk_trace(&x, &cat, DEFAULT_STEP_CAP).unwrap();
        assert!(!trace.is_empty());
        assert_eq!(r.class_index, 0);
        assert!(r.reconstructs(&x));
        assert_eq!(r.support.len(), 3);
    }

    #[test]
    fn preconditions() {
        let cat = catalog2();
        let bad = SymMatrix::from_i64(&[&[1, 2], &[2, 1]]).unwrap();
        assert_eq!(voronoi_reduce(&bad, &cat), Err(Error::NotPositiveDefinite));
        let mut partial = cat.clone();
        partial.expanded = 0;
        assert_eq!(voronoi_reduce(&SymMatrix::identity(2), &partial), Err(Error::IncompleteCatalog { n: 2 }));
    }

    #[test]
    fn step_cap_is_enforced() {
        let cat = catalog2();
        let v = IntMatrix::from_i64(&[&[13, 8], &[8, 5]]);
        let x = SymMatrix::identity(2).congruence(&v);
        assert_eq!(reduce_walk_trace(&x, &cat, 0).map(|_| ()), Err(Error::WalkLimit(0)));
    }
}
