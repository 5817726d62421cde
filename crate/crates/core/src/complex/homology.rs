use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Serialize, Serializer};

use super::RegularComplex;
use crate::exact::snf::smith_dense;
use crate::par::{self, Execution};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coefficients {
    Integers,
    Rationals,
}

/// A finitely generated abelian group `Z^betti + sum Z/t` (over the
/// rationals the torsion list is always empty).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub betti: usize,
    #[serde(serialize_with = "torsion_strings")]
    pub torsion: Vec<BigInt>,
}

fn torsion_strings<S: Serializer>(t: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(t.iter().map(|x| x.to_string()))
}

impl HomologyGroup {
    pub fn free(betti: usize) -> Self {
        Self { betti, torsion: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// Homology groups `H_0 .. H_dim`.
pub fn homology(c: &RegularComplex, coeff: Coefficients) -> Vec<HomologyGroup> {
    let Some(d) = c.dim() else { return Vec::new() };
    let ranks = boundary_data(c, coeff);
    (0..=d)
        .map(|k| {
            let (r_in, torsion) = ranks.get(k).cloned().unwrap_or_default();
            let r_out = if k == 0 { 0 } else { ranks[k - 1].0 };
            HomologyGroup { betti: c.count(k) - r_out - r_in, torsion }
        })
        .collect()
}

/// Cohomology groups `H^0 .. H^dim`. Torsion of `H^k` is that of `H_{k-1}`.
pub fn cohomology(c: &RegularComplex, coeff: Coefficients) -> Vec<HomologyGroup> {
    let h = homology(c, coeff);
    (0..h.len())
        .map(|k| HomologyGroup {
            betti: h[k].betti,
            torsion: if k == 0 { Vec::new() } else { h[k - 1].torsion.clone() },
        })
        .collect()
}

/// Entry `k` is `(rank, torsion)` of the boundary map `d_{k+1}`.
fn boundary_data(c: &RegularComplex, coeff: Coefficients) -> Vec<(usize, Vec<BigInt>)> {
    let d = c.dim().unwrap_or(0);
    par::map_range(Execution::default(), d, |k| {
        let (rank, torsion) = boundary_rank_torsion(c.count(k), &c.boundary_columns(k + 1));
        match coeff {
            Coefficients::Integers => (rank, torsion),
            Coefficients::Rationals => (rank, Vec::new()),
        }
    })
}

/// Rank and invariant factors bigger than one of a sparse integer matrix
/// given by columns. Unit pivots are eliminated sparsely, preferring short
/// columns and rows; what remains goes through dense Smith normal form.
pub(crate) fn boundary_rank_torsion(nrows: usize, columns: &[Vec<(usize, i64)>]) -> (usize, Vec<BigInt>) {
    let mut m = Sparse::new(nrows, columns);
    let rank = m.eliminate_units();
    let (dense, width) = m.residual();
    if dense.is_empty() || width == 0 {
        return (rank, Vec::new());
    }
    let snf = smith_dense(dense, width);
    let torsion = snf.factors.iter().filter(|x| !x.is_one()).cloned().collect();
    (rank + snf.rank, torsion)
}

struct Sparse {
    rows: Vec<HashMap<u32, i128>>,
    cols: Vec<HashMap<u32, i128>>,
    col_alive: Vec<bool>,
    row_alive: Vec<bool>,
}

impl Sparse {
    fn new(nrows: usize, columns: &[Vec<(usize, i64)>]) -> Self {
        let mut rows = vec![HashMap::new(); nrows];
        let mut cols = vec![HashMap::new(); columns.len()];
        for (j, col) in columns.iter().enumerate() {
            for &(i, v) in col {
                if v != 0 {
                    rows[i].insert(j as u32, i128::from(v));
                    cols[j].insert(i as u32, i128::from(v));
                }
            }
        }
        Self { rows, col_alive: vec![true; cols.len()], row_alive: vec![true; nrows], cols }
    }

    fn eliminate_units(&mut self) -> usize {
        let mut queue: BTreeSet<(usize, u32)> = BTreeSet::new();
        let mut key: Vec<usize> = self.cols.iter().map(HashMap::len).collect();
        for (j, &k) in key.iter().enumerate() {
            if k > 0 {
                queue.insert((k, j as u32));
            }
        }
        let mut rank = 0;
        while let Some(&(k, c)) = queue.iter().next() {
            queue.remove(&(k, c));
            let Some(r) = self.unit_row(c) else {
                // Revisited only if the column changes.
                continue;
            };
            if !self.pivot(r, c, &mut queue, &mut key) {
                break;
            }
            rank += 1;
        }
        rank
    }

    fn unit_row(&self, c: u32) -> Option<u32> {
        self.cols[c as usize]
            .iter()
            .filter(|(_, v)| v.abs() == 1)
            .map(|(&r, _)| r)
            .min_by_key(|&r| (self.rows[r as usize].len(), r))
    }

    /// Clear column `c` using the unit at `(r, c)`, then delete row `r` and
    /// column `c`. Returns false (leaving the matrix unchanged) on overflow.
    fn pivot(&mut self, r: u32, c: u32, queue: &mut BTreeSet<(usize, u32)>, key: &mut [usize]) -> bool {
        let a = self.cols[c as usize][&r];
        let pivot_row: Vec<(u32, i128)> = self.rows[r as usize].iter().map(|(&j, &v)| (j, v)).collect();
        let targets: Vec<(u32, i128)> =
            self.cols[c as usize].iter().filter(|(&i, _)| i != r).map(|(&i, &v)| (i, v)).collect();
        // Check for overflow before mutating.
        for &(i, v) in &targets {
            let f = v * a;
            for &(j, w) in &pivot_row {
                let old = self.rows[i as usize].get(&j).copied().unwrap_or(0);
                if f.checked_mul(w).and_then(|x| old.checked_sub(x)).is_none() {
                    return false;
                }
            }
        }
        let mut touched: Vec<u32> = Vec::new();
        for &(i, v) in &targets {
            let f = v * a;
            for &(j, w) in &pivot_row {
                let row = &mut self.rows[i as usize];
                let new = row.get(&j).copied().unwrap_or(0) - f * w;
                if new == 0 {
                    row.remove(&j);
                    self.cols[j as usize].remove(&i);
                } else {
                    row.insert(j, new);
                    self.cols[j as usize].insert(i, new);
                }
                touched.push(j);
            }
        }
        for &(j, _) in &pivot_row {
            self.cols[j as usize].remove(&r);
            touched.push(j);
        }
        self.rows[r as usize].clear();
        self.row_alive[r as usize] = false;
        for i in self.cols[c as usize].keys().copied().collect::<Vec<_>>() {
            self.rows[i as usize].remove(&c);
        }
        self.cols[c as usize].clear();
        self.col_alive[c as usize] = false;
        touched.sort_unstable();
        touched.dedup();
        for j in touched {
            let ju = j as usize;
            queue.remove(&(key[ju], j));
            key[ju] = self.cols[ju].len();
            if self.col_alive[ju] && key[ju] > 0 {
                queue.insert((key[ju], j));
            }
        }
        true
    }

    /// Remaining nonzero block as a dense matrix.
    fn residual(&self) -> (Vec<Vec<BigInt>>, usize) {
        let cols: Vec<usize> = (0..self.cols.len()).filter(|&j| self.col_alive[j] && !self.cols[j].is_empty()).collect();
        let col_pos: HashMap<usize, usize> = cols.iter().enumerate().map(|(p, &j)| (j, p)).collect();
        let mut out = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            if !self.row_alive[i] || row.is_empty() {
                continue;
            }
            let mut dense = vec![BigInt::default(); cols.len()];
            for (&j, &v) in row {
                dense[col_pos[&(j as usize)]] = BigInt::from(v);
            }
            out.push(dense);
        }
        (out, cols.len())
    }
}
