//! Standard parabolic subgroups of `SL_n` as ordered partitions of `n`,
//! their Langlands block dimensions, the quotient of the Tits building by
//! `SL_n(Z)`, and the face labels of the closed positive Weyl chamber.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::complex::{Cell, RegularComplex, SimplicialComplex, Vertex};
use crate::error::{Error, Result};

/// Ordered partition of `n` into positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::BadPartition(format!("{parts:?} must be nonempty with positive parts")));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn n(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn is_proper(&self) -> bool {
        self.parts.len() >= 2
    }

    /// Partial sums strictly between `0` and `n`.
    pub fn cuts(&self) -> Vec<u32> {
        let mut acc = 0;
        self.parts[..self.parts.len() - 1]
            .iter()
            .map(|&p| {
                acc += p;
                acc
            })
            .collect()
    }

    pub fn from_cuts(n: u32, cuts: &[u32]) -> Result<Self> {
        let mut prev = 0;
        let mut parts = Vec::with_capacity(cuts.len() + 1);
        for &c in cuts {
            if c <= prev || c >= n {
                return Err(Error::BadPartition(format!("cuts {cuts:?} must increase strictly inside (0, {n})")));
            }
            parts.push(c - prev);
            prev = c;
        }
        parts.push(n - prev);
        Self::new(parts)
    }

    /// Whether `self` is obtained from `other` by merging adjacent parts.
    pub fn coarsens(&self, other: &Partition) -> bool {
        if self.n() != other.n() {
            return false;
        }
        let theirs = other.cuts();
        self.cuts().iter().all(|c| theirs.contains(c))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.parts.iter().all(|&p| p < 10) { "" } else { "," };
        let s: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "{}", s.join(sep))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Either single digits (`"121"`) or comma separated parts.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadPartition(format!("cannot parse {s:?}"));
        let parts: Vec<u32> = if s.contains(',') {
            s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
        } else {
            s.chars().map(|c| c.to_digit(10).ok_or_else(bad)).collect::<Result<_>>()?
        };
        Self::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All ordered partitions of `n` with at least two parts: by number of
/// parts descending, then parts in descending lexicographic order.
pub fn proper_partitions(n: u32) -> Result<Vec<Partition>> {
    if !(2..=31).contains(&n) {
        return Err(Error::BadPartition(format!("n = {n} must be in 2..=31")));
    }
    let mut out: Vec<Partition> = (1..(1u32 << (n - 1)))
        .map(|mask| {
            let cuts: Vec<u32> = (1..n).filter(|c| mask >> (c - 1) & 1 == 1).collect();
            Partition::from_cuts(n, &cuts).expect("valid cuts")
        })
        .collect();
    out.sort_by(|a, b| b.parts.len().cmp(&a.parts.len()).then_with(|| b.parts.cmp(&a.parts)));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParabolicData {
    pub partition: Partition,
    /// Unipotent radical: the blocks above the diagonal.
    pub dim_n: u64,
    /// Split part of the center of the Levi factor.
    pub dim_a: u64,
    /// Product of the diagonal `SL` blocks.
    pub dim_m: u64,
}

pub fn langlands_dims(p: &Partition) -> Result<ParabolicData> {
    if !p.is_proper() {
        return Err(Error::BadPartition(format!("{p} is not proper")));
    }
    let parts: Vec<u64> = p.parts.iter().map(|&x| u64::from(x)).collect();
    let total: u64 = parts.iter().sum();
    let squares: u64 = parts.iter().map(|x| x * x).sum();
    Ok(ParabolicData {
        partition: p.clone(),
        dim_n: (total * total - squares) / 2,
        dim_a: parts.len() as u64 - 1,
        dim_m: squares - parts.len() as u64,
    })
}

/// `SL_n(Z) \ B` for the Tits building `B`: one simplex per proper
/// partition, the simplex of `P` having as vertices the two-part partitions
/// coarsening `P`. It is a single `(n-2)`-simplex.
#[derive(Clone, Debug)]
pub struct BuildingQuotient {
    pub n: u32,
    /// Vertex `c - 1` is the two-part partition with cut `c`.
    pub complex: SimplicialComplex,
}

impl BuildingQuotient {
    pub fn simplex_of(&self, p: &Partition) -> Vec<Vertex> {
        p.cuts().iter().map(|c| c - 1).collect()
    }

    pub fn partition_of(&self, simplex: &[Vertex]) -> Result<Partition> {
        let cuts: Vec<u32> = simplex.iter().map(|v| v + 1).collect();
        Partition::from_cuts(self.n, &cuts)
    }

    /// Cell complex with cells named by their partitions.
    pub fn cell_complex(&self) -> RegularComplex {
        let base = RegularComplex::from_simplicial(&self.complex);
        let layers: Vec<Vec<Cell>> = base
            .into_layers()
            .into_iter()
            .map(|layer| {
                layer
                    .into_iter()
                    .map(|c| {
                        let verts: Vec<Vertex> = c.id.split(',').map(|v| v.parse().expect("vertex id")).collect();
                        let label = self.partition_of(&verts).expect("face of the simplex").to_string();
                        Cell::new(label, c.faces)
                    })
                    .collect()
            })
            .collect();
        RegularComplex::new(layers, true).expect("relabeling keeps validity")
    }

    /// Number of simplices in each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        self.complex.f_vector()
    }
}

pub fn building_quotient(n: u32) -> Result<BuildingQuotient> {
    let partitions = proper_partitions(n)?;
    let faces = partitions.iter().map(|p| p.cuts().iter().map(|c| c - 1).collect());
    let complex = SimplicialComplex::new(faces)?;
    Ok(BuildingQuotient { n, complex })
}

/// Label of the face of the closed positive chamber on which exactly the
/// simple roots `alpha_i` with `i` in `walls` are nonzero: the partition
/// with cuts at those positions.
pub fn chamber_face_label(n: u32, walls: &[u32]) -> Result<Partition> {
    if walls.is_empty() {
        return Err(Error::BadPartition("the empty wall set is the apex of the cone".into()));
    }
    let mut cuts = walls.to_vec();
    cuts.sort_unstable();
    if cuts.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::BadPartition(format!("walls {walls:?} repeat")));
    }
    Partition::from_cuts(n, &cuts)
}

/// Inverse of [`chamber_face_label`].
pub fn chamber_face_walls(p: &Partition) -> Result<Vec<u32>> {
    if !p.is_proper() {
        return Err(Error::BadPartition(format!("{p} is not proper")));
    }
    Ok(p.cuts())
}
