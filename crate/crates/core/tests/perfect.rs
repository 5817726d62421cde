mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use voronoi_core::exact::{kernel, rank, Rational, SymMatrix};
use voronoi_core::minvec::{minimal_vectors, vectors_below};
use voronoi_core::par::Execution;
use voronoi_core::perfect::*;

fn rational_rows(rows: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect()
}

fn eval_row(m: &[i64]) -> Vec<i64> {
    let n = m.len();
    let mut row = Vec::new();
    for i in 0..n {
        for j in i..n {
            row.push(if i == j { m[i] * m[i] } else { 2 * m[i] * m[j] });
        }
    }
    row
}

/// Facet normals of the cone over `rays` by brute force: every hyperplane
/// through `d - 1` independent rays with all rays on one side.
fn brute_force_facets(n: usize, vectors: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let d = n * (n + 1) / 2;
    let rows: Vec<Vec<i64>> = vectors.iter().map(|v| eval_row(v)).collect();
    let mut out = BTreeSet::new();
    let k = rows.len();
    let mut pick: Vec<usize> = (0..d - 1).collect();
    loop {
        let sub: Vec<Vec<i64>> = pick.iter().map(|&i| rows[i].clone()).collect();
        let ker = kernel(&rational_rows(&sub), d);
        if ker.len() == 1 {
            // Scale to a primitive integer vector.
            let lcm = ker[0].iter().fold(num_bigint::BigInt::from(1), |acc, x| num_integer::lcm(acc, x.denom().clone()));
            let mut v: Vec<i64> =
                ker[0].iter().map(|x| i64::try_from(x.numer() * (&lcm / x.denom())).unwrap()).collect();
            let g = v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
            v.iter_mut().for_each(|x| *x /= g);
            let vals: Vec<i64> = rows.iter().map(|r| r.iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
            if vals.iter().all(|&x| x >= 0) {
                out.insert(v);
            } else if vals.iter().all(|&x| x <= 0) {
                out.insert(v.iter().map(|x| -x).collect());
            }
        }
        // Next combination.
        let mut i = d - 1;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pick[i] < k - (d - 1 - i) {
                pick[i] += 1;
                for j in i + 1..d - 1 {
                    pick[j] = pick[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Facet normal as integer svec coordinates of the dual pairing: the
/// functional `R -> sum_{i<=j} c_ij R_ij`.
fn normal_coords(f: &Facet) -> Vec<i64> {
    let n = f.normal.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            let x = f.normal.get(i, j);
            assert!(x.is_integer());
            out.push(i64::try_from(x.to_integer()).unwrap());
        }
    }
    out
}

#[test]
fn facets_match_brute_force() {
    for q in [seed_form(2), seed_form(3), root_lattice_d(4), seed_form(4)] {
        let rec = PerfectFormRecord::new(&q).unwrap();
        let fast: BTreeSet<Vec<i64>> = rec
            .facets
            .iter()
            .map(normal_coords)
            .collect();
        let slow = brute_force_facets(rec.n(), &rec.min_data.vectors);
        // Compare via the induced tight-ray sets, which are basis independent.
        let tight = |normals: &BTreeSet<Vec<i64>>, as_form: bool| -> BTreeSet<Vec<usize>> {
            normals
                .iter()
                .map(|c| {
                    rec.min_data
                        .vectors
                        .iter()
                        .enumerate()
                        .filter(|(_, m)| {
                            let val: i64 = if as_form {
                                let f = SymMatrix::from_svec(
                                    rec.n(),
                                    &c.iter().map(|&x| Rational::from_integer(x.into())).collect::<Vec<_>>(),
                                );
                                i64::try_from(f.evaluate(m).unwrap().to_integer()).unwrap()
                            } else {
                                eval_row(m).iter().zip(c).map(|(a, b)| a * b).sum()
                            };
                            val == 0
                        })
                        .map(|(i, _)| i)
                        .collect()
                })
                .collect()
        };
        assert_eq!(tight(&fast, true), tight(&slow, false), "n = {}", rec.n());
        let supports: BTreeSet<Vec<usize>> = rec.facets.iter().map(|f| f.support.clone()).collect();
        assert_eq!(supports, tight(&slow, false));
    }
}

#[test]
fn neighbor_steps_are_involutions() {
    for q in [seed_form(2), seed_form(3), seed_form(4), root_lattice_d(4)] {
        let rec = PerfectFormRecord::new(&q).unwrap();
        for (fi, f) in rec.facets.iter().enumerate() {
            let nb = neighbor(&rec, fi).unwrap();
            let back = PerfectFormRecord::new(&nb).unwrap();
            let opposite = f.normal.scale(&Rational::from_integer((-1).into()));
            let j = back
                .facets
                .iter()
                .position(|g| {
                    // Same hyperplane, opposite side; normals agree up to a positive scalar.
                    let ratio = g.normal.entries().iter().zip(opposite.entries()).find(|(_, b)| !num_traits::Zero::is_zero(*b)).map(|(a, b)| a / b);
                    ratio.is_some_and(|r| r > Rational::from_integer(0.into()) && g.normal == opposite.scale(&r))
                })
                .expect("shared wall");
            assert_eq!(neighbor(&back, j).unwrap(), rec.form, "n = {} facet {fi}", rec.n());
        }
    }
}

#[test]
fn fan_property_across_every_crossing() {
    for n in 2..=4 {
        let e = enumerate_perfect_forms(n, &EnumerateOptions::default()).unwrap();
        for c in &e.classes {
            let own: BTreeSet<SymMatrix> = c.record.rays.iter().map(|r| r.matrix.clone()).collect();
            for x in &c.crossings {
                let f = &c.record.facets[x.facet];
                let other = &e.classes[x.neighbor].record;
                let translated: BTreeSet<SymMatrix> =
                    other.rays.iter().map(|r| r.matrix.transform_rays(&x.transform)).collect();
                let wall: BTreeSet<SymMatrix> = f.support.iter().map(|&i| c.record.rays[i].matrix.clone()).collect();
                let common: BTreeSet<SymMatrix> = own.intersection(&translated).cloned().collect();
                assert_eq!(common, wall, "n = {n}");
                let zero = Rational::from_integer(0.into());
                for r in translated.difference(&wall) {
                    assert!(f.normal.trace_pairing(r) < zero, "neighbor ray on the wrong side");
                }
            }
        }
    }
}

#[test]
fn enumeration_is_order_independent() {
    for n in 2..=5 {
        let fwd = enumerate_perfect_forms(n, &EnumerateOptions::default()).unwrap();
        let rev = enumerate_perfect_forms(
            n,
            &EnumerateOptions { reverse_facets: true, exec: Execution::Sequential, ..Default::default() },
        )
        .unwrap();
        assert_eq!(fwd.classes.len(), rev.classes.len());
        for c in &rev.classes {
            assert!(fwd.classes.iter().any(|d| are_equivalent(&d.record.form, &c.record.form).is_some()));
        }
        let count = |e: &Enumeration| {
            let mut v: Vec<usize> = e.classes.iter().map(|c| c.record.rays.len()).collect();
            v.sort();
            v
        };
        assert_eq!(count(&fwd), count(&rev));
    }
}

#[test]
fn known_perfect_forms() {
    for n in 2..=5 {
        assert!(is_perfect(&seed_form(n)).unwrap().is_perfect());
    }
    assert!(is_perfect(&root_lattice_d(4)).unwrap().is_perfect());
    assert!(!is_perfect(&SymMatrix::identity(3)).unwrap().is_perfect());
    let e4 = enumerate_perfect_forms(4, &EnumerateOptions::default()).unwrap();
    let mut rays: Vec<usize> = e4.classes.iter().map(|c| c.record.rays.len()).collect();
    rays.sort();
    assert_eq!(rays, vec![10, 12]);
    assert!(e4.classes.iter().any(|c| are_equivalent(&c.record.form, &normalize(&root_lattice_d(4)).unwrap()).is_some()));
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn positivity_and_perfection_are_unimodular_invariants(q in pd_strategy(3), u in unimodular_strategy(3)) {
        let x = q.congruence(&u);
        prop_assert!(x.is_positive_definite());
        prop_assert_eq!(is_perfect(&x).unwrap().is_perfect(), is_perfect(&q).unwrap().is_perfect());
        let p = seed_form(3).congruence(&u);
        prop_assert!(is_perfect(&p).unwrap().is_perfect());
        prop_assert_eq!(x.determinant(), q.determinant());
    }

    #[test]
    fn minimal_vectors_transform_with_the_form(q in pd_strategy(3), u in unimodular_strategy(3)) {
        let x = q.congruence(&u);
        let (mq, mx) = (minimal_vectors(&q).unwrap(), minimal_vectors(&x).unwrap());
        prop_assert_eq!(&mq.mu, &mx.mu);
        let mapped: BTreeSet<Vec<i64>> = mx.vectors.iter().map(|v| apply_canonical(&u, v)).collect();
        let expected: BTreeSet<Vec<i64>> = mq.vectors.iter().cloned().collect();
        prop_assert_eq!(mapped, expected);
        let three = Rational::from_integer(3.into());
        let scaled = minimal_vectors(&q.scale(&three)).unwrap();
        prop_assert_eq!(scaled.mu, &mq.mu * &three);
        prop_assert_eq!(scaled.vectors, mq.vectors);
    }

    #[test]
    fn short_vectors_match_a_box_search(q in pd_strategy(3)) {
        let bound = (0..3).map(|i| q.get(i, i).clone()).max().unwrap();
        let fast: Vec<(Vec<i64>, Rational)> = vectors_below(&q, &bound).unwrap();
        // Box from Cauchy-Schwarz: x_i^2 <= bound * (Q^-1)_ii, with slack.
        let f: Vec<f64> = q.entries().iter().map(|x| num_traits::ToPrimitive::to_f64(x).unwrap()).collect();
        let det = f[0] * (f[4] * f[8] - f[5] * f[7]) - f[1] * (f[3] * f[8] - f[5] * f[6]) + f[2] * (f[3] * f[7] - f[4] * f[6]);
        let cof = [f[4] * f[8] - f[5] * f[7], f[0] * f[8] - f[2] * f[6], f[0] * f[4] - f[1] * f[3]];
        let b = num_traits::ToPrimitive::to_f64(&bound).unwrap();
        let r: Vec<i64> = cof.iter().map(|c| (b * c / det).sqrt().ceil() as i64 + 1).collect();
        let mut slow = Vec::new();
        for x in -r[0]..=r[0] {
            for y in -r[1]..=r[1] {
                for z in -r[2]..=r[2] {
                    let v = vec![x, y, z];
                    if voronoi_core::exact::is_primitive(&v) && voronoi_core::exact::canonical_sign(v.clone()) == v {
                        let val = q.evaluate(&v).unwrap();
                        if val <= bound {
                            slow.push((v, val));
                        }
                    }
                }
            }
        }
        slow.sort();
        prop_assert_eq!(fast, slow);
    }
}

#[test]
fn rank_of_seed_systems() {
    for n in 2..=5 {
        let md = minimal_vectors(&seed_form(n)).unwrap();
        let rows: Vec<Vec<i64>> = md.vectors.iter().map(|m| eval_row(m)).collect();
        assert_eq!(rank(&rational_rows(&rows)), n * (n + 1) / 2);
        assert_eq!(md.vectors.len(), n * (n + 1) / 2);
    }
}
