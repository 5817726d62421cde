//! Facets of a Voronoi domain by double description.
//!
//! The facet normals of `cone{q(m)}` are the extreme rays of the polar cone
//! `{R : m^t R m >= 0 for all m}`; these are found by the incremental
//! double-description method over the integers, with rays kept primitive.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{evaluation_row, PerfectFormRecord};
use crate::error::{Error, Result};
use crate::exact::{self, Rational, SymMatrix};

/// Codimension-one face of a domain cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    /// Integral, content one, nonnegative on every ray of the domain.
    pub normal: SymMatrix,
    /// Indices of the rays with `m^t R m = 0`.
    pub support: Vec<usize>,
}

pub fn facets(p: &PerfectFormRecord) -> Result<Vec<Facet>> {
    let vectors: Vec<Vec<i64>> = p.rays.iter().map(|r| r.vector.clone()).collect();
    facets_of_rays(p.n(), &vectors)
}

/// Facets of `cone{v v^t : v in vectors}`, which must be full-dimensional.
/// Sorted by support.
pub fn facets_of_rays(n: usize, vectors: &[Vec<i64>]) -> Result<Vec<Facet>> {
    let d = n * (n + 1) / 2;
    let constraints: Vec<Vec<BigInt>> =
        vectors.iter().map(|v| evaluation_row(v).into_iter().map(BigInt::from).collect()).collect();
    let rays = double_description(&constraints, d)?;
    let mut out: Vec<Facet> = rays
        .into_iter()
        .map(|r| {
            let support = (0..constraints.len()).filter(|&i| dot(&constraints[i], &r).is_zero()).collect();
            let coords: Vec<Rational> = r.into_iter().map(Rational::from_integer).collect();
            Facet { normal: SymMatrix::from_svec(n, &coords), support }
        })
        .collect();
    out.sort_by(|a, b| a.support.cmp(&b.support));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &Self) -> Self {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn contains(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && g != BigInt::from(1) {
        v.iter_mut().for_each(|x| *x /= &g);
    }
    v
}

struct Ray {
    coords: Vec<BigInt>,
    tight: Bits,
}

/// Extreme rays of `{x : h . x >= 0 for h in constraints}`, assumed pointed
/// (the constraints have full rank `d`).
fn double_description(constraints: &[Vec<BigInt>], d: usize) -> Result<Vec<Vec<BigInt>>> {
    let m = constraints.len();
    let as_rat = |h: &Vec<BigInt>| h.iter().map(|x| Rational::from_integer(x.clone())).collect::<Vec<_>>();

    // Initial basis: the first d independent constraints, in order.
    let mut basis: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (i, h) in constraints.iter().enumerate() {
        rows.push(as_rat(h));
        if exact::rank(&rows) > basis.len() {
            basis.push(i);
            if basis.len() == d {
                break;
            }
        } else {
            rows.pop();
        }
    }
    if basis.len() < d {
        return Err(Error::Degenerate { rank: basis.len(), dim: d });
    }

    // Rays of the simplicial start cone are the columns of the inverse.
    let mut aug: Vec<Vec<Rational>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..d).map(|j| Rational::from_integer(BigInt::from((i == j) as i64))));
            row
        })
        .collect();
    exact::linear::rref_in_place(&mut aug, d);
    let mut rays: Vec<Ray> = (0..d)
        .map(|k| {
            let col: Vec<Rational> = (0..d).map(|i| aug[i][d + k].clone()).collect();
            let l = col.iter().fold(BigInt::from(1), |l, x| l.lcm(x.denom()));
            let coords = primitive(col.iter().map(|x| (x * &l).to_integer()).collect());
            let mut tight = Bits::new(m);
            for (i, &b) in basis.iter().enumerate() {
                if i != k {
                    tight.set(b);
                }
            }
            Ray { coords, tight }
        })
        .collect();

    for (idx, h) in constraints.iter().enumerate() {
        if basis.contains(&idx) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(h, &r.coords)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut fresh = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].tight.and(&rays[q].tight);
                if common.count() + 2 < d {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|r| r == p || r == q || !rays[r].tight.contains(&common));
                if !adjacent {
                    continue;
                }
                let coords: Vec<BigInt> = rays[q]
                    .coords
                    .iter()
                    .zip(&rays[p].coords)
                    .map(|(x, y)| &vals[p] * x - &vals[q] * y)
                    .collect();
                let mut tight = common;
                tight.set(idx);
                fresh.push(Ray { coords: primitive(coords), tight });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                r.tight.set(idx);
            }
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
    }
    Ok(rays.into_iter().map(|r| r.coords).collect())
}
