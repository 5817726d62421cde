use std::collections::{BTreeMap, HashSet, VecDeque};

use super::{Cell, RegularComplex};
use crate::error::{Error, Result};

/// Dimension-preserving permutation of cells with an orientation sign per
/// cell: `images[k][i] = (j, s)` sends the `i`-th `k`-cell to `s` times the
/// `j`-th.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    pub images: Vec<Vec<(usize, i8)>>,
}

impl SignedPermutation {
    pub fn new(images: Vec<Vec<(usize, i8)>>) -> Self {
        Self { images }
    }

    /// Permutation preserving all orientations.
    pub fn unsigned(perms: Vec<Vec<usize>>) -> Self {
        Self { images: perms.into_iter().map(|p| p.into_iter().map(|j| (j, 1)).collect()).collect() }
    }

    pub fn identity(counts: &[usize]) -> Self {
        Self { images: counts.iter().map(|&n| (0..n).map(|i| (i, 1)).collect()).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().all(|l| l.iter().enumerate().all(|(i, &(j, s))| i == j && s == 1))
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Self) -> Self {
        let images = other
            .images
            .iter()
            .zip(&self.images)
            .map(|(o, s)| o.iter().map(|&(j, a)| (s[j].0, a * s[j].1)).collect())
            .collect();
        Self { images }
    }
}

/// Finite group acting on a complex, given by generators.
#[derive(Clone, Debug, Default)]
pub struct GroupAction {
    pub generators: Vec<SignedPermutation>,
}

impl GroupAction {
    pub fn new(generators: Vec<SignedPermutation>) -> Self {
        Self { generators }
    }

    /// Check each generator is a bijection on every dimension that maps the
    /// incidence relation to itself.
    pub fn validate(&self, c: &RegularComplex) -> Result<()> {
        let counts = c.f_vector();
        for (gi, g) in self.generators.iter().enumerate() {
            if g.images.len() != counts.len() || g.images.iter().zip(&counts).any(|(l, &n)| l.len() != n) {
                return Err(Error::InvalidComplex(format!("generator {gi} has the wrong shape")));
            }
            for (k, l) in g.images.iter().enumerate() {
                let mut hit = vec![false; l.len()];
                for &(j, s) in l {
                    if j >= l.len() || hit[j] || s.abs() != 1 {
                        return Err(Error::InvalidComplex(format!(
                            "generator {gi} is not a signed permutation in dimension {k}"
                        )));
                    }
                    hit[j] = true;
                }
            }
            for k in 1..counts.len() {
                for (i, cell) in c.cells(k).iter().enumerate() {
                    let (ti, e) = g.images[k][i];
                    let target = &c.cells(k)[ti];
                    let mut mapped: Vec<(usize, i8)> = cell
                        .faces
                        .iter()
                        .map(|&(f, s)| {
                            let (tf, ef) = g.images[k - 1][f];
                            (tf, s * ef * e)
                        })
                        .collect();
                    mapped.sort_unstable();
                    if mapped != target.faces {
                        return Err(Error::InvalidComplex(format!(
                            "generator {gi} does not preserve the incidences of cell {:?}",
                            cell.id
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// All group elements, identity first, in breadth-first order over the
    /// generators.
    pub fn elements(&self, counts: &[usize]) -> Vec<SignedPermutation> {
        let id = SignedPermutation::identity(counts);
        let mut seen: HashSet<SignedPermutation> = HashSet::from([id.clone()]);
        let mut order = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = g.compose(&x);
                if seen.insert(y.clone()) {
                    order.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        order
    }
}

/// Orbit complex of a free action. Each orbit is represented by its
/// lowest-index cell, whose id it keeps; incidences are summed over the
/// orbit. The result is flagged regular only when the input is, no two
/// faces of a cell fall in one orbit, and distinct cells keep distinct face
/// sets.
pub fn quotient(c: &RegularComplex, a: &GroupAction) -> Result<RegularComplex> {
    a.validate(c)?;
    let counts = c.f_vector();
    let group = a.elements(&counts);
    for g in group.iter().skip(1) {
        for (k, l) in g.images.iter().enumerate() {
            if let Some(i) = l.iter().enumerate().position(|(i, &(j, _))| i == j) {
                return Err(Error::NotFree { cell: c.cells(k)[i].id.clone() });
            }
        }
    }
    // orbit[k][i] = (orbit index, sign relative to the representative)
    let mut orbit: Vec<Vec<Option<(usize, i8)>>> = counts.iter().map(|&n| vec![None; n]).collect();
    let mut reps: Vec<Vec<usize>> = vec![Vec::new(); counts.len()];
    for k in 0..counts.len() {
        for i in 0..counts[k] {
            if orbit[k][i].is_some() {
                continue;
            }
            let o = reps[k].len();
            reps[k].push(i);
            for g in &group {
                let (j, s) = g.images[k][i];
                orbit[k][j] = Some((o, s));
            }
        }
    }
    let mut collapsed = false;
    let mut layers = Vec::with_capacity(counts.len());
    for k in 0..counts.len() {
        let mut layer = Vec::with_capacity(reps[k].len());
        for &r in &reps[k] {
            let cell = &c.cells(k)[r];
            let mut acc: BTreeMap<usize, i32> = BTreeMap::new();
            for &(f, s) in &cell.faces {
                let (o, e) = orbit[k - 1][f].expect("every cell has an orbit");
                let entry = acc.entry(o).or_insert(0);
                if *entry != 0 || s == 0 {
                    collapsed = true;
                }
                *entry += i32::from(s) * i32::from(e);
            }
            let mut faces = Vec::with_capacity(acc.len());
            for (o, v) in acc {
                let v = i8::try_from(v).ok().filter(|v| (-1..=1).contains(v)).ok_or_else(|| {
                    Error::InvalidComplex(format!("orbit incidence {v} of cell {:?} exceeds one", cell.id))
                })?;
                faces.push((o, v));
            }
            layer.push(Cell::new(cell.id.clone(), faces));
        }
        layers.push(layer);
    }
    let mut q = RegularComplex::new(layers, false)?;
    q.regular = c.is_regular() && !collapsed && q.has_distinct_face_sets();
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::cycle_graph;
    use super::*;

    fn rotation(n: usize, step: usize) -> SignedPermutation {
        let p: Vec<usize> = (0..n).map(|i| (i + step) % n).collect();
        SignedPermutation::unsigned(vec![p.clone(), p])
    }

    #[test]
    fn antipodal_quotient_of_hexagon() {
        let c = cycle_graph(6);
        let q = quotient(&c, &GroupAction::new(vec![rotation(6, 3)])).unwrap();
        assert_eq!(q.f_vector(), vec![3, 3]);
        assert!(q.is_regular());
        assert_eq!(c.euler_characteristic(), 2 * q.euler_characteristic());
    }

    #[test]
    fn order_three_quotient_is_not_regular() {
        let c = cycle_graph(6);
        let q = quotient(&c, &GroupAction::new(vec![rotation(6, 2)])).unwrap();
        assert_eq!(q.f_vector(), vec![2, 2]);
        assert!(!q.is_regular());
        let full = quotient(&c, &GroupAction::new(vec![rotation(6, 1)])).unwrap();
        assert_eq!(full.f_vector(), vec![1, 1]);
        assert_eq!(full.cells(1)[0].faces, vec![(0, 0)]);
        assert!(!full.is_regular());
    }

    #[test]
    fn rejects_fixed_cells_and_bad_maps() {
        let c = cycle_graph(4);
        // Reflection fixing v0 and v2.
        let v = vec![0, 3, 2, 1];
        let e = vec![3, 2, 1, 0];
        let refl = SignedPermutation::new(vec![
            v.into_iter().map(|j| (j, 1)).collect(),
            e.into_iter().map(|j| (j, -1)).collect(),
        ]);
        assert_eq!(quotient(&c, &GroupAction::new(vec![refl])), Err(Error::NotFree { cell: "v0".into() }));
        let swap_vertices = SignedPermutation::unsigned(vec![vec![1, 0, 2, 3], vec![0, 1, 2, 3]]);
        assert!(matches!(
            quotient(&c, &GroupAction::new(vec![swap_vertices])),
            Err(Error::InvalidComplex(_))
        ));
    }

    #[test]
    fn group_closure() {
        let counts = [6, 6];
        let g = GroupAction::new(vec![rotation(6, 2), rotation(6, 3)]);
        let els = g.elements(&counts);
        assert_eq!(els.len(), 6);
        assert!(els[0].is_identity());
    }
}
