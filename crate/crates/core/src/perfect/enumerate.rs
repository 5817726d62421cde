use std::collections::BTreeSet;

use super::equiv::{isometry, ClassInvariants};
use super::{facets, neighbor, seed_form, PerfectFormRecord};
use crate::error::{Error, Result};
use crate::exact::{IntMatrix, SymMatrix};
use crate::par::{self, Execution};

#[derive(Clone, Debug, Default)]
pub struct EnumerateOptions {
    pub exec: Execution,
    /// Stop after this many class expansions in this run.
    pub max_expansions: Option<usize>,
    /// Process facets in reverse order (used to check order independence).
    pub reverse_facets: bool,
}

/// Crossing facet `facet` of a class lands in class `neighbor`: the
/// contiguous form equals `V^t A_neighbor V` and `transform = V^{-1}`, so
/// a translate `W D(A)` of this domain is adjacent to `(W V^{-1}) D(A_neighbor)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub facet: usize,
    pub neighbor: usize,
    pub transform: IntMatrix,
}

#[derive(Clone, Debug)]
pub struct ClassEntry {
    /// `facets` is empty until the class has been expanded.
    pub record: PerfectFormRecord,
    pub invariants: ClassInvariants,
    pub crossings: Vec<Crossing>,
    /// Sorted distinct neighbor classes.
    pub neighbors: Vec<usize>,
}

impl ClassEntry {
    pub(crate) fn new(form: SymMatrix) -> Result<Self> {
        let invariants = ClassInvariants::of(&form)?;
        let record = PerfectFormRecord::without_facets(form)?;
        Ok(Self { record, invariants, crossings: Vec::new(), neighbors: Vec::new() })
    }
}

/// State of a Voronoi enumeration: classes are discovered breadth-first and
/// expanded in index order, so `expanded` is a resumable cursor.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub n: usize,
    pub classes: Vec<ClassEntry>,
    pub expanded: usize,
    /// `(class, facet, reason)` for facets whose neighbor step failed.
    pub failed: Vec<(usize, usize, String)>,
}

impl Enumeration {
    pub fn seeded(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid(format!("perfect-form enumeration needs n >= 2, got {n}")));
        }
        Ok(Self { n, classes: vec![ClassEntry::new(seed_form(n))?], expanded: 0, failed: Vec::new() })
    }

    pub fn is_complete(&self) -> bool {
        self.expanded == self.classes.len() && self.failed.is_empty()
    }

    /// Expand classes until done or the expansion cap is hit.
    pub fn run(&mut self, opts: &EnumerateOptions) -> Result<()> {
        let mut budget = opts.max_expansions.unwrap_or(usize::MAX);
        while self.expanded < self.classes.len() && budget > 0 {
            self.expand(self.expanded, opts)?;
            self.expanded += 1;
            budget -= 1;
        }
        Ok(())
    }

    fn expand(&mut self, c: usize, opts: &EnumerateOptions) -> Result<()> {
        let exec = opts.exec;
        let fs = facets(&self.classes[c].record)?;
        self.classes[c].record.facets = fs;
        let rec = &self.classes[c].record;
        let forms: Vec<Result<SymMatrix>> = par::map_range(exec, rec.facets.len(), |f| neighbor(rec, f));

        // Match against the classes known before this expansion, in parallel.
        let known = self.classes.len();
        let classes = &self.classes;
        let matches: Vec<Option<(Option<(usize, IntMatrix)>, ClassInvariants)>> = par::map(exec, &forms, |f| {
            let form = f.as_ref().ok()?;
            let inv = ClassInvariants::of(form).ok()?;
            let hit = classes[..known].iter().enumerate().find_map(|(k, e)| {
                (e.invariants == inv).then(|| isometry(&e.record.form, form).map(|v| (k, v))).flatten()
            });
            Some((hit, inv))
        });

        let mut order: Vec<usize> = (0..forms.len()).collect();
        if opts.reverse_facets {
            order.reverse();
        }
        let mut crossings = Vec::with_capacity(forms.len());
        for f in order {
            let form = match &forms[f] {
                Ok(form) => form,
                Err(e) => {
                    self.failed.push((c, f, e.to_string()));
                    continue;
                }
            };
            let (hit, inv) = matches[f].clone().expect("neighbor forms are positive-definite");
            let hit = hit.or_else(|| {
                self.classes[known..].iter().enumerate().find_map(|(k, e)| {
                    (e.invariants == inv).then(|| isometry(&e.record.form, form).map(|v| (known + k, v))).flatten()
                })
            });
            let (neighbor, v) = match hit {
                Some(h) => h,
                None => {
                    self.classes.push(ClassEntry::new(form.clone())?);
                    (self.classes.len() - 1, IntMatrix::identity(self.n))
                }
            };
            let transform = v.inverse_unimodular().expect("witness is unimodular");
            crossings.push(Crossing { facet: f, neighbor, transform });
        }
        crossings.sort_by_key(|x| x.facet);
        let neighbors: BTreeSet<usize> = crossings.iter().map(|x| x.neighbor).collect();
        let entry = &mut self.classes[c];
        entry.crossings = crossings;
        entry.neighbors = neighbors.into_iter().collect();
        Ok(())
    }
}

/// Voronoi's algorithm from the `A_n` seed. The result is flagged incomplete
/// (see [`Enumeration::is_complete`]) when the expansion cap stops it early.
pub fn enumerate_perfect_forms(n: usize, opts: &EnumerateOptions) -> Result<Enumeration> {
    let mut e = Enumeration::seeded(n)?;
    e.run(opts)?;
    Ok(e)
}
