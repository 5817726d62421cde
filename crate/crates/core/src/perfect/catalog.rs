//! On-disk catalog of perfect-form classes.
//!
//! One JSON document per dimension. Each class record carries a SHA-256 of
//! its own canonical serialization (with the hash field blank) so a resumed
//! enumeration can refuse a tampered or truncated file.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::enumerate::{ClassEntry, Crossing, Enumeration};
use super::Facet;
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, IntMatrix, SymMatrix};

pub const CATALOG_FORMAT: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogFacet {
    pub normal: SymMatrix,
    pub support: Vec<usize>,
    /// `None` when the neighbor step failed on this facet.
    pub neighbor: Option<usize>,
    pub transform: Option<IntMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogClass {
    pub index: usize,
    pub form: SymMatrix,
    pub mu: String,
    pub min_vectors: Vec<Vec<i64>>,
    pub expanded: bool,
    pub facets: Vec<CatalogFacet>,
    pub neighbors: Vec<usize>,
    pub hash: String,
}

impl CatalogClass {
    pub fn content_hash(&self) -> String {
        let mut blank = self.clone();
        blank.hash.clear();
        let bytes = serde_json::to_vec(&blank).expect("catalog records serialize");
        hex::encode(Sha256::digest(bytes))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub format: u32,
    pub n: usize,
    pub complete: bool,
    pub expanded: usize,
    pub classes: Vec<CatalogClass>,
}

impl Catalog {
    pub fn from_enumeration(e: &Enumeration) -> Self {
        let classes = e
            .classes
            .iter()
            .enumerate()
            .map(|(index, c)| {
                let expanded = index < e.expanded;
                let facets = c
                    .record
                    .facets
                    .iter()
                    .enumerate()
                    .map(|(fi, f)| {
                        let x = c.crossings.iter().find(|x| x.facet == fi);
                        CatalogFacet {
                            normal: f.normal.clone(),
                            support: f.support.clone(),
                            neighbor: x.map(|x| x.neighbor),
                            transform: x.map(|x| x.transform.clone()),
                        }
                    })
                    .collect();
                let mut rec = CatalogClass {
                    index,
                    form: c.record.form.clone(),
                    mu: format_rational(&c.record.min_data.mu),
                    min_vectors: c.record.min_data.vectors.clone(),
                    expanded,
                    facets,
                    neighbors: c.neighbors.clone(),
                    hash: String::new(),
                };
                rec.hash = rec.content_hash();
                rec
            })
            .collect();
        Self { format: CATALOG_FORMAT, n: e.n, complete: e.is_complete(), expanded: e.expanded, classes }
    }

    pub fn verify_hashes(&self) -> Result<()> {
        for (i, c) in self.classes.iter().enumerate() {
            if c.index != i || c.hash != c.content_hash() {
                return Err(Error::HashMismatch { index: i });
            }
        }
        Ok(())
    }

    /// Rebuild the enumeration state, checking hashes and recomputing the
    /// minimal vectors of every stored form.
    pub fn to_enumeration(&self) -> Result<Enumeration> {
        if self.format != CATALOG_FORMAT {
            return Err(Error::Invalid(format!("unsupported catalog format {}", self.format)));
        }
        self.verify_hashes()?;
        let mut classes = Vec::with_capacity(self.classes.len());
        let mut failed = Vec::new();
        for (i, c) in self.classes.iter().enumerate() {
            if c.form.n() != self.n {
                return Err(Error::DimensionMismatch { expected: self.n, got: c.form.n() });
            }
            let mut entry = ClassEntry::new(c.form.clone())?;
            if entry.record.min_data.vectors != c.min_vectors || parse_rational(&c.mu)? != entry.record.min_data.mu {
                return Err(Error::Invalid(format!("class {i}: stored minimal vectors do not match the form")));
            }
            entry.record.facets =
                c.facets.iter().map(|f| Facet { normal: f.normal.clone(), support: f.support.clone() }).collect();
            for (fi, f) in c.facets.iter().enumerate() {
                match (f.neighbor, &f.transform) {
                    (Some(neighbor), Some(t)) => {
                        if neighbor >= self.classes.len() || !t.is_unimodular() {
                            return Err(Error::Invalid(format!("class {i} facet {fi}: bad crossing")));
                        }
                        entry.crossings.push(Crossing { facet: fi, neighbor, transform: t.clone() })
                    }
                    _ if c.expanded => failed.push((i, fi, "neighbor step failed".to_string())),
                    _ => {}
                }
            }
            entry.neighbors = c.neighbors.clone();
            classes.push(entry);
        }
        Ok(Enumeration { n: self.n, classes, expanded: self.expanded, failed })
    }
}
