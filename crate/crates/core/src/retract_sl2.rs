//! Finite quotients of the Farey tessellation of the upper half plane by
//! principal congruence subgroups, and the trivalent dual graph.
//!
//! Everything is expressed through cosets in `PSL_2(Z/N)`: the ideal
//! triangle with vertices `0, 1, oo` is stabilized by `U = [[0,-1],[1,-1]]`,
//! its edge from `oo` to `0` by `S = [[0,-1],[1,0]]`, and the cusp `oo` by
//! `T = [[1,1],[0,1]]`.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::complex::{cohomology, Cell, Coefficients, GroupAction, RegularComplex, SignedPermutation};
use crate::error::{Error, Result};

/// `[a, b, c, d]` for the matrix `[[a, b], [c, d]]`, entries reduced mod N.
pub type Mat2 = [u32; 4];

/// `PSL_2(Z/N)` by explicit enumeration. Each element is stored as the
/// lexicographically smaller of `M` and `-M`.
#[derive(Clone, Debug)]
pub struct Psl2 {
    n: u32,
    elements: Vec<Mat2>,
    index: HashMap<Mat2, usize>,
}

impl Psl2 {
    pub fn new(n: u32) -> Result<Self> {
        if n < 3 {
            return Err(Error::BadLevel(n));
        }
        let mut g = Self { n, elements: Vec::new(), index: HashMap::new() };
        let gens = [g.s(), g.t()];
        let id = g.canonical([1, 0, 0, 1]);
        g.insert(id);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for s in gens {
                let y = g.mul(x, s);
                if !g.index.contains_key(&y) {
                    g.insert(y);
                    queue.push_back(y);
                }
            }
        }
        Ok(g)
    }

    fn insert(&mut self, m: Mat2) {
        self.index.insert(m, self.elements.len());
        self.elements.push(m);
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn index_of(&self, m: Mat2) -> Option<usize> {
        self.index.get(&self.canonical(m)).copied()
    }

    pub fn canonical(&self, m: Mat2) -> Mat2 {
        let n = self.n;
        let m = m.map(|x| x % n);
        let neg = m.map(|x| (n - x) % n);
        m.min(neg)
    }

    pub fn mul(&self, x: Mat2, y: Mat2) -> Mat2 {
        let n = u64::from(self.n);
        let [a, b, c, d] = x.map(u64::from);
        let [e, f, g, h] = y.map(u64::from);
        self.canonical([(a * e + b * g) % n, (a * f + b * h) % n, (c * e + d * g) % n, (c * f + d * h) % n].map(
            |v| v as u32,
        ))
    }

    pub fn s(&self) -> Mat2 {
        self.canonical([0, self.n - 1, 1, 0])
    }

    pub fn t(&self) -> Mat2 {
        self.canonical([1, 1, 0, 1])
    }

    pub fn u(&self) -> Mat2 {
        self.canonical([0, self.n - 1, 1, self.n - 1])
    }

    /// `N^3 prod_{p | N} (1 - p^-2) / 2`.
    pub fn expected_order(n: u32) -> usize {
        let mut order = u64::from(n).pow(3);
        let mut m = n;
        let mut p = 2;
        while m > 1 {
            if m % p == 0 {
                order = order / (u64::from(p) * u64::from(p)) * (u64::from(p) * u64::from(p) - 1);
                while m % p == 0 {
                    m /= p;
                }
            }
            p += 1;
        }
        (order / 2) as usize
    }
}

/// Triangles, edges and cusps of `Gamma(N) \ H` as coset data, with the
/// closed surface `X(N)` and dual graph available as cell complexes.
#[derive(Clone, Debug)]
pub struct QuotientTessellation {
    group: Psl2,
    /// Representative group element of each coset.
    pub triangles: Vec<usize>,
    pub edges: Vec<usize>,
    pub cusps: Vec<usize>,
    /// Coset of each group element: `(index, sign)` for edges, where the
    /// sign compares the element's orientation with the representative's.
    triangle_of: Vec<usize>,
    edge_of: Vec<(usize, i8)>,
    cusp_of: Vec<usize>,
}

impl QuotientTessellation {
    pub fn build(n: u32) -> Result<Self> {
        let group = Psl2::new(n)?;
        let (triangles, triangle_of) = cosets(&group, group.u());
        let (edges, edge_plain) = cosets(&group, group.s());
        let (cusps, cusp_of) = cosets(&group, group.t());
        let edge_of = edge_plain
            .iter()
            .enumerate()
            .map(|(g, &e)| (e, if edges[e] == g { 1 } else { -1 }))
            .collect();
        Ok(Self { group, triangles, edges, cusps, triangle_of, edge_of, cusp_of })
    }

    pub fn level(&self) -> u32 {
        self.group.level()
    }

    pub fn group(&self) -> &Psl2 {
        &self.group
    }

    fn el(&self, g: usize) -> Mat2 {
        self.group.elements[g]
    }

    fn idx(&self, m: Mat2) -> usize {
        self.group.index[&m]
    }

    /// Signed edges of triangle `t`, traversing `oo -> 0 -> 1 -> oo`.
    pub fn triangle_edges(&self, t: usize) -> [(usize, i8); 3] {
        let u = self.group.u();
        let mut g = self.el(self.triangles[t]);
        let mut out = [(0, 0); 3];
        for slot in &mut out {
            *slot = self.edge_of[self.idx(g)];
            g = self.group.mul(g, u);
        }
        out
    }

    /// `(from, to)` cusps of edge `e` in its representative orientation.
    pub fn edge_cusps(&self, e: usize) -> (usize, usize) {
        let g = self.el(self.edges[e]);
        let from = self.cusp_of[self.idx(g)];
        let to = self.cusp_of[self.idx(self.group.mul(g, self.group.s()))];
        (from, to)
    }

    /// The compactified surface `X(N)`: cusps, edges, triangles.
    pub fn surface(&self) -> RegularComplex {
        let cusps = (0..self.cusps.len()).map(|i| Cell::new(format!("c{i}"), vec![])).collect();
        let edges = (0..self.edges.len())
            .map(|e| {
                let (a, b) = self.edge_cusps(e);
                Cell::new(format!("e{e}"), vec![(a, -1), (b, 1)])
            })
            .collect();
        let tris = (0..self.triangles.len())
            .map(|t| Cell::new(format!("t{t}"), self.triangle_edges(t).to_vec()))
            .collect();
        let mut c = RegularComplex::new(vec![cusps, edges, tris], false).expect("tessellation is a cell complex");
        let regular = c.has_distinct_face_sets();
        c.set_regular(regular);
        c
    }

    /// Edge `e` joins the triangle where it appears with sign `-1` to the
    /// one where it appears with `+1`.
    pub fn dual_graph(&self) -> RegularComplex {
        let mut ends = vec![[usize::MAX; 2]; self.edges.len()];
        for t in 0..self.triangles.len() {
            for (e, s) in self.triangle_edges(t) {
                ends[e][usize::from(s > 0)] = t;
            }
        }
        let verts = (0..self.triangles.len()).map(|t| Cell::new(format!("w{t}"), vec![])).collect();
        let edges = ends
            .iter()
            .enumerate()
            .map(|(e, &[minus, plus])| Cell::new(format!("d{e}"), vec![(minus, -1), (plus, 1)]))
            .collect();
        RegularComplex::new(vec![verts, edges], true).expect("dual graph is a graph")
    }

    /// Left multiplication by the kernel of reduction to level `m`, acting
    /// on the dual graph. It is free and the quotient is the level-`m` dual
    /// graph.
    pub fn reduction_action(&self, m: u32) -> Result<GroupAction> {
        let n = self.level();
        if m < 3 || n % m != 0 || m == n {
            return Err(Error::BadLevel(m));
        }
        let small = Psl2::new(m)?;
        let id = small.canonical([1, 0, 0, 1]);
        let mut gens = Vec::new();
        for &h in self.group.elements() {
            if small.canonical(h) != id || h == self.group.canonical([1, 0, 0, 1]) {
                continue;
            }
            let verts = self
                .triangles
                .iter()
                .map(|&g| (self.triangle_of[self.idx(self.group.mul(h, self.el(g)))], 1))
                .collect();
            let edges = self.edges.iter().map(|&g| self.edge_of[self.idx(self.group.mul(h, self.el(g)))]).collect();
            gens.push(SignedPermutation::new(vec![verts, edges]));
        }
        Ok(GroupAction::new(gens))
    }
}

/// Right cosets `g<h>` of a cyclic subgroup: representatives (lowest
/// element index) and the coset of every element.
fn cosets(g: &Psl2, h: Mat2) -> (Vec<usize>, Vec<usize>) {
    let mut of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for i in 0..g.order() {
        if of[i] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(i);
        let mut x = g.elements[i];
        loop {
            let j = g.index[&x];
            if of[j] == c {
                break;
            }
            of[j] = c;
            x = g.mul(x, h);
        }
    }
    (reps, of)
}

/// Rank of `H^1` of the dual graph, as `E - V + (components)`.
pub fn h1_rank(t: &QuotientTessellation) -> usize {
    let w = t.dual_graph();
    let mut parent: Vec<usize> = (0..w.count(0)).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut components = w.count(0);
    for e in w.cells(1) {
        let (a, b) = (find(&mut parent, e.faces[0].0), find(&mut parent, e.faces[1].0));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    w.count(1) + components - w.count(0)
}

/// `H^2` of the dual graph vanishes.
pub fn vcd_vanishing_check(t: &QuotientTessellation) -> bool {
    let w = t.dual_graph();
    let h = cohomology(&w, Coefficients::Integers);
    w.dim().is_some_and(|d| d <= 1) && h.get(2).map_or(true, |g| g.is_zero())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenusReport {
    pub level: u32,
    pub genus: u64,
    pub cusps: usize,
    pub edges: usize,
    pub triangles: usize,
    pub euler_characteristic: i64,
    /// `genus / (N^3 / 24)`.
    pub ratio: f64,
}

pub fn genus_report(n: u32) -> Result<GenusReport> {
    let t = QuotientTessellation::build(n)?;
    Ok(genus_of(&t))
}

pub fn genus_of(t: &QuotientTessellation) -> GenusReport {
    let (c, e, f) = (t.cusps.len(), t.edges.len(), t.triangles.len());
    let chi = c as i64 - e as i64 + f as i64;
    let genus = ((2 - chi) / 2) as u64;
    let n = f64::from(t.level());
    GenusReport {
        level: t.level(),
        genus,
        cusps: c,
        edges: e,
        triangles: f,
        euler_characteristic: chi,
        ratio: genus as f64 / (n * n * n / 24.0),
    }
}
