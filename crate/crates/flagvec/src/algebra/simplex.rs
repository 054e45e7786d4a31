//! Exact convex hull membership by phase-1 simplex.
//!
//! Membership of a point in the convex hull of finitely many points is a
//! linear feasibility question: do nonnegative weights summing to one
//! reproduce the point?  We answer it with a dense phase-1 simplex over
//! exact rationals, using Bland's rule so the pivot sequence terminates
//! and is deterministic.  Both possible answers carry certificates that
//! are re-verified by substitution before being returned: a weight list
//! when the point is inside, a separating affine functional when it is
//! not.

use num_traits::{One, Zero};

use crate::algebra::atom::Word;
use crate::algebra::vector::{FormalVector, Rational};
use crate::error::{Error, Result};

/// Answer to a hull membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HullOutcome {
    /// `target = sum weights[i] * points[i]`, weights nonnegative, sum 1.
    Inside { weights: Vec<Rational> },
    /// `normal . s + offset <= 0` for every input point while
    /// `normal . target + offset > 0`.
    Outside {
        normal: FormalVector,
        offset: Rational,
    },
}

enum DenseOutcome {
    Feasible(Vec<Rational>),
    /// Dual vector of length `dim + 1`; the last entry pairs with the
    /// weight-sum row.
    Infeasible(Vec<Rational>),
}

/// Decides whether `target` lies in the convex hull of `points`.
pub fn convex_membership(points: &[FormalVector], target: &FormalVector) -> Result<HullOutcome> {
    let mut words: Vec<Word> = Vec::new();
    for v in points.iter().chain(std::iter::once(target)) {
        words.extend(v.words().cloned());
    }
    words.sort();
    words.dedup();
    let dense = |v: &FormalVector| -> Vec<Rational> {
        words.iter().map(|w| v.coeff(w)).collect()
    };
    let columns: Vec<Vec<Rational>> = points.iter().map(|p| dense(p)).collect();
    let rhs = dense(target);
    let outcome = match feasible_combination(&columns, &rhs, words.len())? {
        DenseOutcome::Feasible(weights) => HullOutcome::Inside { weights },
        DenseOutcome::Infeasible(y) => {
            let mut normal = FormalVector::zero();
            for (w, c) in words.iter().zip(&y) {
                normal.add_term(w.clone(), c.clone());
            }
            HullOutcome::Outside {
                normal,
                offset: y[words.len()].clone(),
            }
        }
    };
    verify_outcome(points, target, &outcome)?;
    Ok(outcome)
}

/// Phase-1 simplex for `sum_j lambda_j columns[j] = rhs`, `lambda >= 0`,
/// `sum lambda = 1`, over `dim` coordinate rows plus the weight-sum row.
fn feasible_combination(
    columns: &[Vec<Rational>],
    rhs: &[Rational],
    dim: usize,
) -> Result<DenseOutcome> {
    let n = columns.len();
    let m = dim + 1;
    // Row-major tableau of the structural columns, then one artificial
    // identity column per row, then the right-hand side.
    let mut tab: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row: Vec<Rational> = (0..n)
                .map(|j| {
                    if i < dim {
                        columns[j][i].clone()
                    } else {
                        Rational::one()
                    }
                })
                .collect();
            row.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            row.push(if i < dim { rhs[i].clone() } else { Rational::one() });
            row
        })
        .collect();
    let rhs_col = n + m;
    let mut flips = vec![false; m];
    for (i, row) in tab.iter_mut().enumerate() {
        if row[rhs_col] < Rational::zero() {
            flips[i] = true;
            for entry in row.iter_mut() {
                *entry = -entry.clone();
            }
        }
    }
    // Reduced costs for phase-1 (artificial costs 1, structural 0):
    // z[j] = c_j - sum over rows of tab[i][j].
    let mut z: Vec<Rational> = (0..n + m)
        .map(|j| {
            let mut s = Rational::zero();
            for row in &tab {
                s -= row[j].clone();
            }
            if j >= n {
                s += Rational::one();
            }
            s
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut guard = 0usize;
    loop {
        guard += 1;
        if guard > 200_000 {
            return Err(Error::internal(
                "phase-1 simplex exceeded its iteration guard".to_string(),
            ));
        }
        // Bland: smallest structural index with negative reduced cost.
        // Artificial columns never re-enter once they have left the basis,
        // which preserves feasibility detection because a weight vector
        // with all artificials zero stays available.
        let enter = match (0..n).find(|&j| z[j] < Rational::zero()) {
            Some(j) => j,
            None => break,
        };
        let mut leave: Option<usize> = None;
        let mut best: Option<Rational> = None;
        for r in 0..m {
            if tab[r][enter] > Rational::zero() {
                let ratio = tab[r][rhs_col].clone() / tab[r][enter].clone();
                let better = match (&best, leave) {
                    (None, _) => true,
                    (Some(b), Some(lr)) => ratio < *b || (ratio == *b && basis[r] < basis[lr]),
                    (Some(_), None) => true,
                };
                if better {
                    best = Some(ratio);
                    leave = Some(r);
                }
            }
        }
        let Some(leave) = leave else {
            return Err(Error::internal(
                "phase-1 objective unbounded, which cannot happen".to_string(),
            ));
        };
        pivot(&mut tab, &mut z, leave, enter);
        basis[leave] = enter;
    }
    let objective: Rational = (0..m)
        .filter(|&r| basis[r] >= n)
        .map(|r| tab[r][rhs_col].clone())
        .sum();
    if objective.is_zero() {
        let mut weights = vec![Rational::zero(); n];
        for r in 0..m {
            if basis[r] < n {
                weights[basis[r]] = tab[r][rhs_col].clone();
            }
        }
        return Ok(DenseOutcome::Feasible(weights));
    }
    // Infeasible: the duals of the optimal phase-1 basis separate the
    // target from the points.  The reduced cost of artificial column i is
    // 1 - y_i in the sign-flipped system, and flipping a row negates its
    // dual.
    let y: Vec<Rational> = (0..m)
        .map(|i| {
            let raw = Rational::one() - z[n + i].clone();
            if flips[i] {
                -raw
            } else {
                raw
            }
        })
        .collect();
    Ok(DenseOutcome::Infeasible(y))
}

fn pivot(tab: &mut [Vec<Rational>], z: &mut [Rational], row: usize, col: usize) {
    let width = tab[row].len();
    let lead = tab[row][col].clone();
    for entry in tab[row].iter_mut() {
        *entry /= lead.clone();
    }
    for r in 0..tab.len() {
        if r != row && !tab[r][col].is_zero() {
            let factor = tab[r][col].clone();
            for c in 0..width {
                let sub = factor.clone() * tab[row][c].clone();
                tab[r][c] -= sub;
            }
        }
    }
    if !z[col].is_zero() {
        let factor = z[col].clone();
        for (c, zc) in z.iter_mut().enumerate() {
            let sub = factor.clone() * tab[row][c].clone();
            *zc -= sub;
        }
    }
}

fn verify_outcome(
    points: &[FormalVector],
    target: &FormalVector,
    outcome: &HullOutcome,
) -> Result<()> {
    match outcome {
        HullOutcome::Inside { weights } => {
            if weights.len() != points.len() {
                return Err(Error::internal("weight count mismatch".to_string()));
            }
            let mut total = Rational::zero();
            let mut combo = FormalVector::zero();
            for (w, p) in weights.iter().zip(points) {
                if *w < Rational::zero() {
                    return Err(Error::internal("negative hull weight".to_string()));
                }
                total += w.clone();
                combo.add_scaled(p, w);
            }
            if !total.is_one() || &combo != target {
                return Err(Error::internal(
                    "hull weights fail to reproduce the target".to_string(),
                ));
            }
            Ok(())
        }
        HullOutcome::Outside { normal, offset } => {
            let score = |v: &FormalVector| -> Rational {
                let mut s = offset.clone();
                for (w, c) in normal.terms() {
                    s += c.clone() * v.coeff(w);
                }
                s
            };
            for p in points {
                if score(p) > Rational::zero() {
                    return Err(Error::internal(
                        "separating functional fails on an input point".to_string(),
                    ));
                }
            }
            if score(target) <= Rational::zero() {
                return Err(Error::internal(
                    "separating functional fails on the target".to_string(),
                ));
            }
            Ok(())
        }
    }
}
