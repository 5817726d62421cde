use num_traits::{One, Signed};

use super::{perfection_of, Facet, PerfectFormRecord};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::minvec::{minimal_vectors, vectors_below};
use crate::exact::SymMatrix;

/// Growth/bisection steps allowed while bracketing the contiguity parameter.
const MAX_BRACKET_STEPS: usize = 256;

/// The perfect form sharing facet `facet_index` of `p`'s domain.
///
/// Moves along `Q + rho R` where `R` is the facet normal. Vectors on the
/// facet keep value one; the result is the smallest `rho > 0` at which a new
/// vector attains the minimum. Returned with minimum one.
pub fn neighbor(p: &PerfectFormRecord, facet_index: usize) -> Result<SymMatrix> {
    let facet: &Facet = p.facets.get(facet_index).ok_or_else(|| Error::NeighborFailed {
        facet: facet_index,
        reason: "no such facet".into(),
    })?;
    let fail = |reason: &str| Error::NeighborFailed { facet: facet_index, reason: reason.into() };
    let q = &p.form;
    let r = &facet.normal;
    let one = Rational::one();

    // Bracket: find u with Q + uR positive-definite and some vector below 1.
    let mut lo = Rational::from_integer(0.into());
    let mut hi = Rational::one();
    for _ in 0..MAX_BRACKET_STEPS {
        let trial = q.add_scaled(r, &hi);
        if !trial.is_positive_definite() {
            hi = (&lo + &hi) / Rational::from_integer(2.into());
            continue;
        }
        let below: Vec<Vec<i64>> = vectors_below(&trial, &one)?
            .into_iter()
            .filter(|(_, val)| *val < one)
            .map(|(v, _)| v)
            .collect();
        if below.is_empty() {
            lo = hi.clone();
            hi = &hi * Rational::from_integer(2.into());
            continue;
        }
        // Every vector whose crossing parameter is below `hi` is in `below`.
        let rho = below
            .iter()
            .map(|v| {
                let rv = r.bilinear(v, v);
                debug_assert!(rv.is_negative());
                (&one - q.bilinear(v, v)) / rv
            })
            .min()
            .expect("nonempty");
        if !rho.is_positive() {
            return Err(fail("nonpositive contiguity parameter"));
        }
        let next = q.add_scaled(r, &rho);
        let md = minimal_vectors(&next)?;
        if !md.mu.is_one() {
            return Err(fail("contiguous form lost the minimum"));
        }
        if !perfection_of(next.n(), &md).is_perfect() {
            return Err(fail("contiguous form is not perfect"));
        }
        return Ok(next);
    }
    Err(fail("no contiguous positive-definite form along the facet normal"))
}
