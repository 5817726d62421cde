use num_traits::{Signed, Zero};

use super::rational::Rational;
use super::sym::SymMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Inside { coefficients: Vec<Rational>, support: Vec<usize> },
    Outside,
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside { .. })
    }
}

/// Decide whether `target` is a nonnegative combination of `rays`.
///
/// Solved as a phase-one simplex in exact arithmetic under Bland's rule,
/// starting from the all-artificial basis. The certificate returned is the
/// basic solution where that pivoting sequence stops, so it is a function of
/// the input alone.
pub fn cone_membership(rays: &[SymMatrix], target: &SymMatrix) -> Membership {
    let cols: Vec<Vec<Rational>> = rays.iter().map(SymMatrix::svec).collect();
    match feasible_combination(&cols, &target.svec()) {
        Some(coefficients) => {
            let support = coefficients
                .iter()
                .enumerate()
                .filter(|(_, c)| c.is_positive())
                .map(|(i, _)| i)
                .collect();
            Membership::Inside { coefficients, support }
        }
        None => Membership::Outside,
    }
}

/// Nonnegative `lambda` with `sum_j lambda_j * cols[j] = target`, if one exists.
pub(crate) fn feasible_combination(cols: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let d = target.len();
    let m = cols.len();
    let width = m + d + 1;
    let rhs = m + d;

    let mut tab: Vec<Vec<Rational>> = (0..d)
        .map(|i| {
            let flip = target[i].is_negative();
            let mut row = vec![Rational::zero(); width];
            for (j, col) in cols.iter().enumerate() {
                debug_assert_eq!(col.len(), d);
                row[j] = if flip { -col[i].clone() } else { col[i].clone() };
            }
            row[m + i] = Rational::from_integer(1.into());
            row[rhs] = target[i].abs();
            row
        })
        .collect();
    let mut basis: Vec<usize> = (m..m + d).collect();

    // Reduced costs of the phase-one objective (sum of artificials), with
    // the objective value kept in the rhs slot as its negation.
    let mut obj = vec![Rational::zero(); width];
    for row in &tab {
        for j in 0..m {
            obj[j] -= &row[j];
        }
        obj[rhs] -= &row[rhs];
    }

    loop {
        let Some(enter) = (0..m + d).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..d {
            if !tab[i][enter].is_positive() {
                continue;
            }
            let ratio = &tab[i][rhs] / &tab[i][enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // Phase one is bounded below by zero, so a column with no positive
        // entry cannot have negative reduced cost at an optimum; it just
        // means the objective can decrease without bound, which is impossible.
        let (r, _) = leave.expect("phase-one objective is bounded");
        pivot(&mut tab, &mut obj, r, enter);
        basis[r] = enter;
    }

    if !obj[rhs].is_zero() {
        return None;
    }
    let mut lambda = vec![Rational::zero(); m];
    for (i, &b) in basis.iter().enumerate() {
        if b < m {
            lambda[b] = tab[i][rhs].clone();
        }
    }
    Some(lambda)
}

fn pivot(tab: &mut [Vec<Rational>], obj: &mut [Rational], r: usize, c: usize) {
    let inv = tab[r][c].recip();
    for x in tab[r].iter_mut() {
        *x *= &inv;
    }
    let prow = tab[r].clone();
    let eliminate = |row: &mut [Rational]| {
        if row[c].is_zero() {
            return;
        }
        let f = row[c].clone();
        for (x, p) in row.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
    };
    for (i, row) in tab.iter_mut().enumerate() {
        if i != r {
            eliminate(row);
        }
    }
    eliminate(obj);
}
