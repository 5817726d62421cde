use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u32;

/// Finite simplicial complex given by its maximal faces. Faces are stored
/// sorted; the constructor drops duplicates and non-maximal faces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    facets: Vec<Vec<Vertex>>,
}

impl SimplicialComplex {
    pub fn new(faces: impl IntoIterator<Item = Vec<Vertex>>) -> Result<Self> {
        let mut all: BTreeSet<Vec<Vertex>> = BTreeSet::new();
        for mut f in faces {
            f.sort_unstable();
            let len = f.len();
            f.dedup();
            if f.len() != len {
                return Err(Error::InvalidComplex(format!("face {f:?} repeats a vertex")));
            }
            if f.is_empty() {
                continue;
            }
            all.insert(f);
        }
        // Drop faces contained in larger ones: check against facets of
        // strictly larger size sharing the first vertex's star.
        let mut by_size: Vec<Vec<Vertex>> = all.into_iter().collect();
        by_size.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        let mut star: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
        let mut kept: Vec<Vec<Vertex>> = Vec::new();
        for f in by_size {
            let covered = star
                .get(&f[0])
                .is_some_and(|ids| ids.iter().any(|&i| kept[i].len() > f.len() && is_subset(&f, &kept[i])));
            if covered {
                continue;
            }
            for &v in &f {
                star.entry(v).or_default().push(kept.len());
            }
            kept.push(f);
        }
        kept.sort();
        Ok(Self { facets: kept })
    }

    pub fn facets(&self) -> &[Vec<Vertex>] {
        &self.facets
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        let s: BTreeSet<Vertex> = self.facets.iter().flatten().copied().collect();
        s.into_iter().collect()
    }

    /// Dimension of the largest face; `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.facets.iter().map(|f| f.len() - 1).max()
    }

    pub fn is_pure(&self) -> bool {
        let mut sizes = self.facets.iter().map(Vec::len);
        match sizes.next() {
            None => true,
            Some(s) => sizes.all(|t| t == s),
        }
    }

    /// All faces of dimension `k`, sorted.
    pub fn faces(&self, k: usize) -> Vec<Vec<Vertex>> {
        let mut out = BTreeSet::new();
        for f in &self.facets {
            if f.len() > k {
                for_each_subset(f, k + 1, &mut |s| {
                    out.insert(s.to_vec());
                });
            }
        }
        out.into_iter().collect()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        match self.dim() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|k| self.faces(k).len()).collect(),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    /// Apply a vertex map; it must be injective on the vertex set.
    pub fn relabel(&self, map: impl Fn(Vertex) -> Vertex) -> Result<Self> {
        Self::new(self.facets.iter().map(|f| f.iter().map(|&v| map(v)).collect()))
    }

    /// Boundary of the `k`-simplex on vertices `0..=k`.
    pub fn simplex_boundary(k: usize) -> Self {
        let verts: Vec<Vertex> = (0..=k as Vertex).collect();
        Self::new((0..=k).map(|skip| verts.iter().copied().filter(|&v| v as usize != skip).collect()))
            .expect("valid")
    }

    /// The full `k`-simplex.
    pub fn simplex(k: usize) -> Self {
        Self::new([(0..=k as Vertex).collect()]).expect("valid")
    }

    /// Boundary of the `(k+1)`-dimensional cross-polytope: a simplicial
    /// `k`-sphere on `2(k+1)` vertices (`k = 2` is the octahedron).
    pub fn cross_polytope_boundary(k: usize) -> Self {
        let m = k + 1;
        let mut faces = Vec::new();
        for signs in 0..(1u32 << m) {
            faces.push((0..m).map(|i| (2 * i) as Vertex + ((signs >> i) & 1)).collect());
        }
        Self::new(faces).expect("valid")
    }

    /// Replace every facet `F` by the cone from a new vertex over `dF`.
    pub fn stellar_subdivide_facets(&self) -> Self {
        let mut next = self.vertices().last().map_or(0, |v| v + 1);
        let mut faces = Vec::new();
        for f in &self.facets {
            for skip in 0..f.len() {
                let mut g: Vec<Vertex> = f.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                g.push(next);
                faces.push(g);
            }
            next += 1;
        }
        Self::new(faces).expect("valid")
    }
}

pub(crate) fn is_subset(a: &[Vertex], b: &[Vertex]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

/// Call `f` on every `size`-subset of the sorted slice `s`, in lex order.
pub(crate) fn for_each_subset(s: &[Vertex], size: usize, f: &mut impl FnMut(&[Vertex])) {
    fn go(s: &[Vertex], size: usize, start: usize, cur: &mut Vec<Vertex>, f: &mut impl FnMut(&[Vertex])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        let need = size - cur.len();
        for i in start..=(s.len() - need) {
            cur.push(s[i]);
            go(s, size, i + 1, cur, f);
            cur.pop();
        }
    }
    if size <= s.len() {
        go(s, size, 0, &mut Vec::with_capacity(size), f);
    }
}

#[derive(Serialize, Deserialize)]
struct SimplicialJson {
    #[serde(default = "super::format_version")]
    format: u32,
    maximal_faces: Vec<Vec<Vertex>>,
}

impl Serialize for SimplicialComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SimplicialJson { format: super::FORMAT, maximal_faces: self.facets.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimplicialComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SimplicialJson::deserialize(d)?;
        SimplicialComplex::new(raw.maximal_faces).map_err(serde::de::Error::custom)
    }
}
