//! Shellings of pure simplicial complexes and sphere recognition.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::complex::{homology, Coefficients, RegularComplex, SimplicialComplex, Vertex};
use crate::error::{Error, Result};

/// A shelling order on the facets of a complex. `restrictions[j]` lists the
/// vertices `v` of facet `order[j]` whose opposite ridge lies in an earlier
/// facet; those ridges are exactly where the facet attaches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shelling {
    pub order: Vec<usize>,
    pub restrictions: Vec<Vec<Vertex>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Sphere,
    Ball,
    /// The node budget ran out.
    Unknown,
    NotPseudomanifold,
    /// The search space was exhausted without a shelling.
    NotShellable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Shelling),
    Exhausted,
    BudgetExceeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SearchStats {
    pub nodes: u64,
    pub backtracks: u64,
    pub restarts: u64,
}

fn pure_facets(c: &SimplicialComplex) -> Result<&[Vec<Vertex>]> {
    if !c.is_pure() {
        return Err(Error::NotPure);
    }
    Ok(c.facets())
}

/// Number of facets containing each ridge, keyed by the ridge.
fn ridge_degrees(facets: &[Vec<Vertex>]) -> HashMap<Vec<Vertex>, usize> {
    let mut deg = HashMap::new();
    for f in facets {
        for skip in 0..f.len() {
            *deg.entry(without(f, skip)).or_insert(0) += 1;
        }
    }
    deg
}

fn without(f: &[Vertex], skip: usize) -> Vec<Vertex> {
    f.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect()
}

/// Every ridge lies in exactly two facets.
pub fn is_pseudomanifold(c: &SimplicialComplex) -> Result<bool> {
    let facets = pure_facets(c)?;
    Ok(!facets.is_empty() && ridge_degrees(facets).values().all(|&d| d == 2))
}

/// Check a shelling against the complex from scratch: the order is a
/// permutation of the facets, and at each step `j >= 1` the set `R_j` of
/// attached vertices is nonempty and contained in no earlier facet. That
/// condition says the new facet meets the earlier ones in a nonempty union
/// of its ridges.
pub fn verify_shelling(c: &SimplicialComplex, s: &Shelling) -> std::result::Result<(), String> {
    let facets = c.facets();
    let n = facets.len();
    if s.order.len() != n || s.restrictions.len() != n {
        return Err(format!("order has {} entries for {n} facets", s.order.len()));
    }
    let mut pos = vec![usize::MAX; n];
    for (j, &f) in s.order.iter().enumerate() {
        if f >= n || pos[f] != usize::MAX {
            return Err(format!("step {j}: facet {f} is out of range or repeated"));
        }
        pos[f] = j;
    }
    let mut first_seen: HashMap<Vec<Vertex>, usize> = HashMap::new();
    for (j, &f) in s.order.iter().enumerate() {
        for skip in 0..facets[f].len() {
            first_seen.entry(without(&facets[f], skip)).or_insert(j);
        }
    }
    let mut star: HashMap<Vertex, Vec<usize>> = HashMap::new();
    for (i, f) in facets.iter().enumerate() {
        for &v in f {
            star.entry(v).or_default().push(i);
        }
    }
    for (j, &f) in s.order.iter().enumerate() {
        let face = &facets[f];
        let r: Vec<Vertex> =
            (0..face.len()).filter(|&p| first_seen[&without(face, p)] < j).map(|p| face[p]).collect();
        if r != s.restrictions[j] {
            return Err(format!("step {j}: recorded attachment {:?} differs from {:?}", s.restrictions[j], r));
        }
        if j == 0 {
            continue;
        }
        if r.is_empty() {
            return Err(format!("step {j}: facet {face:?} meets no earlier ridge"));
        }
        let pivot = r.iter().min_by_key(|v| star[v].len()).unwrap();
        if let Some(&g) = star[pivot].iter().find(|&&g| pos[g] < j && r.iter().all(|v| facets[g].contains(v))) {
            return Err(format!(
                "step {j}: intersection with earlier facet {:?} is not covered by attached ridges",
                facets[g]
            ));
        }
    }
    Ok(())
}

/// Greedy search with chronological backtracking. Each placement counts as
/// one node against `budget`.
pub fn find_shelling(c: &SimplicialComplex, budget: u64) -> Result<SearchOutcome> {
    Ok(search(c, budget, None)?.0)
}

/// Like [`find_shelling`], starting from `start` and reporting statistics.
pub fn search(c: &SimplicialComplex, budget: u64, start: Option<usize>) -> Result<(SearchOutcome, SearchStats)> {
    let facets = pure_facets(c)?;
    if facets.is_empty() {
        return Ok((SearchOutcome::Found(Shelling { order: vec![], restrictions: vec![] }), SearchStats::default()));
    }
    if !passes_necessary_conditions(c, facets) {
        return Ok((SearchOutcome::Exhausted, SearchStats::default()));
    }
    let mut s = Search::new(facets);
    let pseudo = ridge_degrees(facets).values().all(|&d| d <= 2);
    let outcome = s.run(budget, start, pseudo);
    Ok((outcome, s.stats))
}

/// A shellable pure `d`-complex is strongly connected and has the homology
/// of a wedge of `d`-spheres. Failing either rules out a shelling without
/// searching.
fn passes_necessary_conditions(c: &SimplicialComplex, facets: &[Vec<Vertex>]) -> bool {
    let d = facets[0].len() - 1;
    if d == 0 {
        return true;
    }
    let mut by_ridge: HashMap<Vec<Vertex>, usize> = HashMap::new();
    let mut parent: Vec<usize> = (0..facets.len()).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, f) in facets.iter().enumerate() {
        for skip in 0..f.len() {
            if let Some(&j) = by_ridge.get(&without(f, skip)) {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[a] = b;
            } else {
                by_ridge.insert(without(f, skip), i);
            }
        }
    }
    let r = root(&mut parent, 0);
    if (0..facets.len()).any(|i| root(&mut parent, i) != r) {
        return false;
    }
    let h = homology(&RegularComplex::from_simplicial(c), Coefficients::Integers);
    h.iter().enumerate().all(|(k, g)| g.torsion.is_empty() && (k == d || g.betti == usize::from(k == 0)))
}

/// Sphere or ball recognition through a shelling.
pub fn certify_sphere(c: &SimplicialComplex, budget: u64) -> Result<(Verdict, Option<Shelling>)> {
    let facets = pure_facets(c)?;
    let degrees = ridge_degrees(facets);
    if facets.is_empty() || degrees.values().any(|&d| d > 2) {
        return Ok((Verdict::NotPseudomanifold, None));
    }
    match find_shelling(c, budget)? {
        SearchOutcome::Found(sh) => {
            debug_assert!(verify_shelling(c, &sh).is_ok());
            let closed = degrees.values().all(|&d| d == 2);
            Ok((if closed { Verdict::Sphere } else { Verdict::Ball }, Some(sh)))
        }
        SearchOutcome::Exhausted => Ok((Verdict::NotShellable, None)),
        SearchOutcome::BudgetExceeded => Ok((Verdict::Unknown, None)),
    }
}

/// Cap on the words of failed facet sets kept (128 MiB).
const MAX_FAILED_WORDS: usize = 1 << 24;

struct Search<'a> {
    facets: &'a [Vec<Vertex>],
    /// ridges[f][p]: ridge opposite the p-th vertex of facet f.
    ridges: Vec<Vec<usize>>,
    ridge_facets: Vec<Vec<usize>>,
    star: HashMap<Vertex, Vec<usize>>,
    placed: Vec<bool>,
    order: Vec<usize>,
    covered: Vec<u32>,
    attached: Vec<usize>,
    buckets: Vec<BTreeSet<usize>>,
    zobrist: Vec<u64>,
    hash: u64,
    failed: HashMap<u64, Vec<Vec<u64>>>,
    /// Words stored in `failed`.
    failed_count: usize,
    stats: SearchStats,
}

impl<'a> Search<'a> {
    fn new(facets: &'a [Vec<Vertex>]) -> Self {
        let mut ids: HashMap<Vec<Vertex>, usize> = HashMap::new();
        let mut ridge_facets: Vec<Vec<usize>> = Vec::new();
        let mut ridges = Vec::with_capacity(facets.len());
        let mut star: HashMap<Vertex, Vec<usize>> = HashMap::new();
        for (i, f) in facets.iter().enumerate() {
            let mut rs = Vec::with_capacity(f.len());
            for skip in 0..f.len() {
                let key = without(f, skip);
                let next = ridge_facets.len();
                let id = *ids.entry(key).or_insert(next);
                if id == next {
                    ridge_facets.push(Vec::new());
                }
                ridge_facets[id].push(i);
                rs.push(id);
            }
            ridges.push(rs);
            for &v in f {
                star.entry(v).or_default().push(i);
            }
        }
        // SplitMix64 keys for the placed-set hash.
        let mut state = 0x9e37_79b9_7f4a_7c15u64;
        let zobrist = (0..facets.len())
            .map(|_| {
                state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
                let mut z = state;
                z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
                z ^ (z >> 31)
            })
            .collect();
        let width = facets[0].len() + 1;
        Self {
            facets,
            covered: vec![0; ridge_facets.len()],
            ridges,
            ridge_facets,
            star,
            placed: vec![false; facets.len()],
            order: Vec::new(),
            attached: vec![0; facets.len()],
            buckets: vec![BTreeSet::new(); width],
            zobrist,
            hash: 0,
            failed: HashMap::new(),
            failed_count: 0,
            stats: SearchStats::default(),
        }
    }

    fn restriction(&self, f: usize) -> Vec<Vertex> {
        let face = &self.facets[f];
        (0..face.len()).filter(|&p| self.covered[self.ridges[f][p]] > 0).map(|p| face[p]).collect()
    }

    fn attachable(&self, f: usize) -> bool {
        if self.order.is_empty() {
            return true;
        }
        let r = self.restriction(f);
        let Some(pivot) = r.iter().min_by_key(|v| self.star[v].len()) else { return false };
        !self.star[pivot]
            .iter()
            .any(|&g| self.placed[g] && r.iter().all(|v| self.facets[g].binary_search(v).is_ok()))
    }

    fn place(&mut self, f: usize) {
        self.placed[f] = true;
        self.order.push(f);
        self.hash ^= self.zobrist[f];
        self.buckets[self.attached[f]].remove(&f);
        for p in 0..self.ridges[f].len() {
            let r = self.ridges[f][p];
            self.covered[r] += 1;
            if self.covered[r] == 1 {
                for &g in &self.ridge_facets[r] {
                    if g != f && !self.placed[g] {
                        self.buckets[self.attached[g]].remove(&g);
                        self.attached[g] += 1;
                        self.buckets[self.attached[g]].insert(g);
                    }
                }
            }
        }
    }

    fn unplace(&mut self) -> usize {
        let f = self.order.pop().expect("nonempty");
        self.placed[f] = false;
        self.hash ^= self.zobrist[f];
        for p in 0..self.ridges[f].len() {
            let r = self.ridges[f][p];
            self.covered[r] -= 1;
            if self.covered[r] == 0 {
                for &g in &self.ridge_facets[r] {
                    if g != f && !self.placed[g] {
                        self.buckets[self.attached[g]].remove(&g);
                        self.attached[g] -= 1;
                        self.buckets[self.attached[g]].insert(g);
                    }
                }
            }
        }
        self.buckets[self.attached[f]].insert(f);
        f
    }

    fn placed_bits(&self) -> Vec<u64> {
        let mut bits = vec![0u64; self.placed.len().div_ceil(64)];
        for &f in &self.order {
            bits[f / 64] |= 1 << (f % 64);
        }
        bits
    }

    fn is_failed_with(&self, f: usize) -> bool {
        let h = self.hash ^ self.zobrist[f];
        let Some(list) = self.failed.get(&h) else { return false };
        let mut bits = self.placed_bits();
        bits[f / 64] |= 1 << (f % 64);
        list.contains(&bits)
    }

    fn record_failed(&mut self) {
        let words = self.placed.len().div_ceil(64);
        if self.failed_count + words <= MAX_FAILED_WORDS {
            let bits = self.placed_bits();
            self.failed.entry(self.hash).or_default().push(bits);
            self.failed_count += words;
        }
    }

    /// Most-attached valid candidate not yet tried at this depth, lowest
    /// index first among equals.
    fn best(&self, tried: &[usize]) -> Option<usize> {
        if self.order.is_empty() {
            return (0..self.facets.len()).find(|f| !tried.contains(f));
        }
        for bucket in self.buckets.iter().skip(1).rev() {
            for &f in bucket {
                if !tried.contains(&f) && self.attachable(f) && !self.is_failed_with(f) {
                    return Some(f);
                }
            }
        }
        None
    }

    fn shelling(&self) -> Shelling {
        // Recompute restrictions along the final order.
        let mut covered = vec![false; self.ridge_facets.len()];
        let mut restrictions = Vec::with_capacity(self.order.len());
        for &f in &self.order {
            let face = &self.facets[f];
            restrictions.push((0..face.len()).filter(|&p| covered[self.ridges[f][p]]).map(|p| face[p]).collect());
            for &r in &self.ridges[f] {
                covered[r] = true;
            }
        }
        Shelling { order: self.order.clone(), restrictions }
    }

    /// Greedy descent without backtracking from the current state.
    fn greedy(&mut self, budget: u64) -> bool {
        let base = self.order.len();
        while self.order.len() < self.facets.len() {
            if self.stats.nodes >= budget {
                break;
            }
            let Some(f) = self.best(&[]) else { break };
            self.stats.nodes += 1;
            self.place(f);
        }
        if self.order.len() == self.facets.len() {
            return true;
        }
        while self.order.len() > base {
            self.unplace();
        }
        false
    }

    fn run(&mut self, budget: u64, start: Option<usize>, pseudo: bool) -> SearchOutcome {
        let n = self.facets.len();
        // tried[d]: facets already tried at position d.
        let mut tried: Vec<Vec<usize>> = vec![Vec::new()];
        if let Some(s) = start {
            tried[0] = (0..n).filter(|&f| f != s).collect();
        }
        let mut restarted: Vec<usize> = Vec::new();
        loop {
            if self.order.len() == n {
                return SearchOutcome::Found(self.shelling());
            }
            let depth = self.order.len();
            match self.best(&tried[depth]) {
                Some(f) => {
                    if self.stats.nodes >= budget {
                        return SearchOutcome::BudgetExceeded;
                    }
                    self.stats.nodes += 1;
                    tried[depth].push(f);
                    self.place(f);
                    tried.push(Vec::new());
                }
                None => {
                    if depth == 0 {
                        return SearchOutcome::Exhausted;
                    }
                    // Reversed-prefix restart: greedy from the last facet of
                    // the failed prefix, once per distinct facet.
                    let last = *self.order.last().unwrap();
                    if pseudo && depth > 1 && !restarted.contains(&last) {
                        restarted.push(last);
                        self.stats.restarts += 1;
                        let saved: Vec<usize> = self.order.clone();
                        while !self.order.is_empty() {
                            self.unplace();
                        }
                        self.stats.nodes += 1;
                        self.place(last);
                        if self.greedy(budget) {
                            return SearchOutcome::Found(self.shelling());
                        }
                        self.unplace();
                        for &f in &saved {
                            self.place(f);
                        }
                        if self.stats.nodes >= budget {
                            return SearchOutcome::BudgetExceeded;
                        }
                    }
                    self.record_failed();
                    self.stats.backtracks += 1;
                    tried.pop();
                    self.unplace();
                }
            }
        }
    }
}
