use super::{Cell, RegularComplex, SimplicialComplex, Vertex};
use crate::error::Result;

/// Barycentric subdivision with the cell behind each new vertex.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub complex: SimplicialComplex,
    /// `(dim, index)` of the cell whose barycenter is vertex `v`.
    pub cell_of_vertex: Vec<(usize, usize)>,
}

impl Subdivision {
    pub fn of(c: &RegularComplex) -> Self {
        let offsets = offsets(c);
        let cell_of_vertex =
            (0..c.f_vector().len()).flat_map(|k| (0..c.count(k)).map(move |i| (k, i))).collect();
        let mut has_coface: Vec<Vec<bool>> = c.f_vector().iter().map(|&n| vec![false; n]).collect();
        for k in 1..has_coface.len() {
            for cell in c.cells(k) {
                for &(f, _) in &cell.faces {
                    has_coface[k - 1][f] = true;
                }
            }
        }
        let mut faces = Vec::new();
        for (k, flags) in has_coface.iter().enumerate() {
            for (i, _) in flags.iter().enumerate().filter(|(_, &h)| !h) {
                let mut chain = Vec::with_capacity(k + 1);
                descend(c, &offsets, k, i, &mut chain, &mut |ch| faces.push(ch.to_vec()));
            }
        }
        let complex = SimplicialComplex::new(faces).expect("chains have distinct vertices");
        Self { complex, cell_of_vertex }
    }
}

fn offsets(c: &RegularComplex) -> Vec<Vertex> {
    let mut acc = 0;
    c.f_vector()
        .iter()
        .map(|&n| {
            let o = acc;
            acc += n as Vertex;
            o
        })
        .collect()
}

fn descend(
    c: &RegularComplex,
    offsets: &[Vertex],
    k: usize,
    i: usize,
    chain: &mut Vec<Vertex>,
    emit: &mut impl FnMut(&[Vertex]),
) {
    chain.push(offsets[k] + i as Vertex);
    let faces = &c.cells(k)[i].faces;
    if faces.is_empty() {
        emit(chain);
    } else {
        for &(f, _) in faces {
            descend(c, offsets, k - 1, f, chain, emit);
        }
    }
    chain.pop();
}

/// Simplicial complex whose simplices are the chains of cells under the
/// face relation. Vertex `v` is the `v`-th cell in (dimension, index) order.
pub fn barycentric_subdivision(c: &RegularComplex) -> SimplicialComplex {
    Subdivision::of(c).complex
}

/// Maximal chains `sigma = s_0 < s_1 < ... ` of selected cells starting at
/// `sigma`, as `(dim, index)` lists; these are the barycentric simplices whose
/// union is the dual block of `sigma`.
pub fn dual_block_chains(
    c: &RegularComplex,
    sigma: (usize, usize),
    selected: impl Fn(usize, usize) -> bool,
) -> Vec<Vec<(usize, usize)>> {
    let cofaces: Vec<Vec<Vec<(usize, i8)>>> = (0..=c.dim().unwrap_or(0) + 1).map(|k| c.cofaces(k)).collect();
    let mut out = Vec::new();
    let mut chain = vec![sigma];
    fn up(
        cofaces: &[Vec<Vec<(usize, i8)>>],
        selected: &dyn Fn(usize, usize) -> bool,
        chain: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let (k, i) = *chain.last().unwrap();
        let next: Vec<usize> = cofaces
            .get(k + 1)
            .map(|cf| cf[i].iter().map(|&(j, _)| j).filter(|&j| selected(k + 1, j)).collect())
            .unwrap_or_default();
        if next.is_empty() {
            out.push(chain.clone());
        }
        for j in next {
            chain.push((k + 1, j));
            up(cofaces, selected, chain, out);
            chain.pop();
        }
    }
    if selected(sigma.0, sigma.1) {
        up(&cofaces, &selected, &mut chain, &mut out);
    }
    out
}

/// Dual block complex of the selected cells: one cell `D(s)` of dimension
/// `dim c - dim s` per selected `s`, with `D(t)` a face of `D(s)` when `s` is
/// a face of `t`, carrying the same incidence number. Ids are `*` followed by
/// the original id.
pub fn dual_cells(c: &RegularComplex, selected: impl Fn(usize, usize) -> bool) -> Result<RegularComplex> {
    let Some(top) = c.dim() else { return RegularComplex::new(Vec::new(), true) };
    // Position of each selected cell inside its dual layer.
    let pos: Vec<Vec<Option<usize>>> = (0..=top)
        .map(|k| {
            let mut n = 0;
            (0..c.count(k))
                .map(|i| {
                    selected(k, i).then(|| {
                        n += 1;
                        n - 1
                    })
                })
                .collect()
        })
        .collect();
    let mut layers: Vec<Vec<Cell>> = vec![Vec::new(); top + 1];
    for k in (0..=top).rev() {
        let cofaces = c.cofaces(k + 1);
        for (i, cell) in c.cells(k).iter().enumerate() {
            if pos[k][i].is_none() {
                continue;
            }
            let faces = if k == top {
                Vec::new()
            } else {
                cofaces[i].iter().filter_map(|&(j, s)| pos[k + 1][j].map(|p| (p, s))).collect()
            };
            layers[top - k].push(Cell::new(format!("*{}", cell.id), faces));
        }
    }
    RegularComplex::new(layers, c.is_regular())
}
