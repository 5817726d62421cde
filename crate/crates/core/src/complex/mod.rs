//! Finite cell complexes: regular CW complexes given by graded cells with
//! signed incidences, simplicial complexes, and the constructions between
//! them (subdivision, dual blocks, free quotients, homology).

mod homology;
mod quotient;
mod simplicial;
mod subdivision;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::IntMatrix;

pub use homology::{cohomology, homology, Coefficients, HomologyGroup};
pub use quotient::{quotient, GroupAction, SignedPermutation};
pub use simplicial::{SimplicialComplex, Vertex};
pub use subdivision::{barycentric_subdivision, dual_block_chains, dual_cells, Subdivision};

pub const FORMAT: u32 = 1;

fn format_version() -> u32 {
    FORMAT
}

/// A cell: identifier plus its codimension-one faces as
/// `(index into the previous dimension, incidence)`, sorted by index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub id: String,
    pub faces: Vec<(usize, i8)>,
}

impl Cell {
    pub fn new(id: impl Into<String>, mut faces: Vec<(usize, i8)>) -> Self {
        faces.sort_unstable();
        Self { id: id.into(), faces }
    }
}

/// Finite cell complex with cells graded by dimension. Construction checks
/// closure, incidence values and `dd = 0`; regularity is a flag set by the
/// caller or by the construction that produced the complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularComplex {
    cells: Vec<Vec<Cell>>,
    regular: bool,
}

impl RegularComplex {
    pub fn new(mut cells: Vec<Vec<Cell>>, regular: bool) -> Result<Self> {
        while cells.last().is_some_and(Vec::is_empty) {
            cells.pop();
        }
        let mut seen: HashMap<&str, (usize, usize)> = HashMap::new();
        for (k, layer) in cells.iter().enumerate() {
            for (i, cell) in layer.iter().enumerate() {
                if let Some(&(k0, _)) = seen.get(cell.id.as_str()) {
                    return Err(Error::InvalidComplex(format!(
                        "duplicate cell id {:?} in dimensions {k0} and {k}",
                        cell.id
                    )));
                }
                seen.insert(&cell.id, (k, i));
                if k == 0 && !cell.faces.is_empty() {
                    return Err(Error::InvalidComplex(format!("vertex {:?} has faces", cell.id)));
                }
                for w in cell.faces.windows(2) {
                    if w[0].0 == w[1].0 {
                        return Err(Error::InvalidComplex(format!("cell {:?} lists a face twice", cell.id)));
                    }
                }
                for &(f, s) in &cell.faces {
                    if k > 0 && f >= cells[k - 1].len() {
                        return Err(Error::InvalidComplex(format!(
                            "cell {:?} refers to missing face {f} of dimension {}",
                            cell.id,
                            k - 1
                        )));
                    }
                    if !(-1..=1).contains(&s) {
                        return Err(Error::InvalidComplex(format!(
                            "cell {:?} has incidence {s} outside {{-1,0,1}}",
                            cell.id
                        )));
                    }
                }
            }
        }
        let c = Self { cells, regular };
        c.check_boundary_squared()?;
        Ok(c)
    }

    fn check_boundary_squared(&self) -> Result<()> {
        for k in 2..self.cells.len() {
            for cell in &self.cells[k] {
                let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                for &(f, s) in &cell.faces {
                    for &(g, t) in &self.cells[k - 1][f].faces {
                        *acc.entry(g).or_default() += i64::from(s) * i64::from(t);
                    }
                }
                if let Some((&g, _)) = acc.iter().find(|(_, &v)| v != 0) {
                    return Err(Error::InvalidComplex(format!(
                        "boundary of boundary of cell {:?} is nonzero at {:?}",
                        cell.id,
                        self.cells[k - 2][g].id
                    )));
                }
            }
        }
        Ok(())
    }

    /// Cell complex of a simplicial complex, one cell per face, oriented by
    /// increasing vertex order. Cell ids are the vertex lists joined by
    /// commas.
    pub fn from_simplicial(s: &SimplicialComplex) -> Self {
        let Some(d) = s.dim() else {
            return Self { cells: Vec::new(), regular: true };
        };
        let faces: Vec<Vec<Vec<Vertex>>> = (0..=d).map(|k| s.faces(k)).collect();
        let mut cells = Vec::with_capacity(d + 1);
        for k in 0..=d {
            let index: HashMap<&[Vertex], usize> = if k == 0 {
                HashMap::new()
            } else {
                faces[k - 1].iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect()
            };
            let layer = faces[k]
                .iter()
                .map(|f| {
                    let mut bd = Vec::new();
                    if k > 0 {
                        let mut sub = Vec::with_capacity(k);
                        for skip in 0..=k {
                            sub.clear();
                            sub.extend(f.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                            let sign = if skip % 2 == 0 { 1 } else { -1 };
                            bd.push((index[sub.as_slice()], sign));
                        }
                    }
                    Cell::new(simplex_id(f), bd)
                })
                .collect();
            cells.push(layer);
        }
        Self { cells, regular: true }
    }

    /// Dimension of the complex; `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        self.cells.len().checked_sub(1)
    }

    pub fn is_regular(&self) -> bool {
        self.regular
    }

    pub fn cells(&self, k: usize) -> &[Cell] {
        self.cells.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, k: usize) -> usize {
        self.cells(k).len()
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells.iter().enumerate().map(|(k, l)| if k % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) }).sum()
    }

    /// Locate a cell by identifier.
    pub fn find(&self, id: &str) -> Option<(usize, usize)> {
        self.cells
            .iter()
            .enumerate()
            .find_map(|(k, l)| l.iter().position(|c| c.id == id).map(|i| (k, i)))
    }

    /// For each `(k-1)`-cell, the `k`-cells having it as a face, with
    /// incidence.
    pub fn cofaces(&self, k: usize) -> Vec<Vec<(usize, i8)>> {
        let mut out = vec![Vec::new(); self.count(k.wrapping_sub(1))];
        if k == 0 {
            return out;
        }
        for (i, c) in self.cells(k).iter().enumerate() {
            for &(f, s) in &c.faces {
                out[f].push((i, s));
            }
        }
        out
    }

    /// Boundary map from `k`-chains to `(k-1)`-chains as a dense matrix with
    /// rows indexed by `(k-1)`-cells and columns by `k`-cells.
    pub fn boundary_matrix(&self, k: usize) -> IntMatrix {
        let rows = if k == 0 { 0 } else { self.count(k - 1) };
        let mut m = IntMatrix::zeros(rows, self.count(k));
        for (j, c) in self.cells(k).iter().enumerate() {
            for &(i, s) in &c.faces {
                m.set(i, j, s.into());
            }
        }
        m
    }

    /// `[d_1, ..., d_dim]`.
    pub fn boundary_matrices(&self) -> Vec<IntMatrix> {
        (1..self.cells.len()).map(|k| self.boundary_matrix(k)).collect()
    }

    /// Sparse columns of the `k`-th boundary map.
    pub(crate) fn boundary_columns(&self, k: usize) -> Vec<Vec<(usize, i64)>> {
        self.cells(k)
            .iter()
            .map(|c| c.faces.iter().filter(|&&(_, s)| s != 0).map(|&(i, s)| (i, i64::from(s))).collect())
            .collect()
    }

    /// Whether the closure of every cell is a subcomplex with faces
    /// having distinct vertex sets, tested on face sets of 1-cells and up.
    pub(crate) fn has_distinct_face_sets(&self) -> bool {
        for layer in self.cells.iter().skip(1) {
            let mut seen = std::collections::HashSet::new();
            for c in layer {
                if c.faces.iter().any(|&(_, s)| s == 0) {
                    return false;
                }
                let key: Vec<usize> = c.faces.iter().map(|&(i, _)| i).collect();
                if !seen.insert(key) {
                    return false;
                }
            }
        }
        true
    }

    pub(crate) fn set_regular(&mut self, regular: bool) {
        self.regular = regular;
    }

    pub(crate) fn into_layers(self) -> Vec<Vec<Cell>> {
        self.cells
    }
}

pub(crate) fn simplex_id(f: &[Vertex]) -> String {
    let mut s = String::new();
    for (i, v) in f.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&v.to_string());
    }
    s
}

#[derive(Serialize, Deserialize)]
struct FaceJson {
    id: String,
    sign: i8,
}

#[derive(Serialize, Deserialize)]
struct CellJson {
    id: String,
    dim: usize,
    faces: Vec<FaceJson>,
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    #[serde(default = "format_version")]
    format: u32,
    dims: i64,
    #[serde(default = "default_regular")]
    regular: bool,
    cells: Vec<CellJson>,
}

fn default_regular() -> bool {
    true
}

impl Serialize for RegularComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut cells = Vec::with_capacity(self.total_cells());
        for (k, layer) in self.cells.iter().enumerate() {
            for c in layer {
                let faces = c
                    .faces
                    .iter()
                    .map(|&(i, sign)| FaceJson { id: self.cells[k - 1][i].id.clone(), sign })
                    .collect();
                cells.push(CellJson { id: c.id.clone(), dim: k, faces });
            }
        }
        let dims = self.dim().map_or(-1, |d| d as i64);
        ComplexJson { format: FORMAT, dims, regular: self.regular, cells }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RegularComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ComplexJson::deserialize(d)?;
        if raw.format != FORMAT {
            return Err(D::Error::custom(format!("unsupported complex format {}", raw.format)));
        }
        let layers = usize::try_from(raw.dims + 1).map_err(|_| D::Error::custom("dims must be at least -1"))?;
        let mut index: HashMap<String, (usize, usize)> = HashMap::new();
        let mut counts = vec![0usize; layers];
        for c in &raw.cells {
            if c.dim >= layers {
                return Err(D::Error::custom(format!("cell {:?} has dim {} > dims {}", c.id, c.dim, raw.dims)));
            }
            if index.insert(c.id.clone(), (c.dim, counts[c.dim])).is_some() {
                return Err(D::Error::custom(format!("duplicate cell id {:?}", c.id)));
            }
            counts[c.dim] += 1;
        }
        let mut cells: Vec<Vec<Cell>> = counts.iter().map(|&n| Vec::with_capacity(n)).collect();
        for c in raw.cells {
            let mut faces = Vec::with_capacity(c.faces.len());
            for f in &c.faces {
                match index.get(&f.id) {
                    Some(&(k, i)) if k + 1 == c.dim => faces.push((i, f.sign)),
                    Some(&(k, _)) => {
                        return Err(D::Error::custom(format!(
                            "face {:?} of cell {:?} has dim {k}, expected {}",
                            f.id,
                            c.id,
                            c.dim as i64 - 1
                        )))
                    }
                    None => return Err(D::Error::custom(format!("cell {:?} refers to unknown face {:?}", c.id, f.id))),
                }
            }
            cells[c.dim].push(Cell::new(c.id, faces));
        }
        RegularComplex::new(cells, raw.regular).map_err(D::Error::custom)
    }
}

/// Small standard complexes.
pub mod fixtures {
    use super::*;

    pub fn interval() -> RegularComplex {
        RegularComplex::new(
            vec![vec![Cell::new("a", vec![]), Cell::new("b", vec![])], vec![Cell::new("e", vec![(0, -1), (1, 1)])]],
            true,
        )
        .unwrap()
    }

    /// Two vertices joined by two edges.
    pub fn circle() -> RegularComplex {
        RegularComplex::new(
            vec![
                vec![Cell::new("a", vec![]), Cell::new("b", vec![])],
                vec![Cell::new("e", vec![(0, -1), (1, 1)]), Cell::new("f", vec![(0, 1), (1, -1)])],
            ],
            true,
        )
        .unwrap()
    }

    /// The 6-vertex triangulation of the real projective plane.
    pub fn rp2() -> SimplicialComplex {
        SimplicialComplex::new(vec![
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 4, 5],
            vec![0, 1, 5],
            vec![1, 2, 4],
            vec![2, 3, 5],
            vec![1, 3, 4],
            vec![2, 4, 5],
            vec![1, 3, 5],
        ])
        .unwrap()
    }

    pub fn cycle_graph(n: usize) -> RegularComplex {
        let vs = (0..n).map(|i| Cell::new(format!("v{i}"), vec![])).collect();
        let es = (0..n).map(|i| Cell::new(format!("e{i}"), vec![(i, -1), ((i + 1) % n, 1)])).collect();
        RegularComplex::new(vec![vs, es], true).unwrap()
    }
}
