//! Exact positive semidefiniteness and dense linear solving.
//!
//! The probe runs an LDL decomposition without pivoting, which is exactly
//! what characterizes semidefiniteness over the rationals: a negative
//! pivot, or a zero pivot with a nonzero row, yields an explicit witness
//! vector with negative quadratic value, and otherwise the accumulated
//! factors certify the matrix.  Both certificates are re-verified by
//! substitution before being returned.

use num_traits::{One, Zero};

use crate::algebra::vector::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsdOutcome {
    /// `matrix = lower * diag * lower^T` with unit lower triangular
    /// `lower` and nonnegative `diag`.
    Yes {
        diag: Vec<Rational>,
        lower: Vec<Vec<Rational>>,
    },
    /// `witness^T * matrix * witness = value < 0`.
    No {
        witness: Vec<Rational>,
        value: Rational,
    },
}

/// Decides whether a symmetric rational matrix is positive semidefinite.
pub fn psd_probe(matrix: &[Vec<Rational>]) -> Result<PsdOutcome> {
    let n = matrix.len();
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != n {
            return Err(Error::input("matrix is not square".to_string()));
        }
        for j in 0..n {
            if matrix[i][j] != matrix[j][i] {
                return Err(Error::input("matrix is not symmetric".to_string()));
            }
        }
    }
    let mut work: Vec<Vec<Rational>> = matrix.to_vec();
    let mut lower: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    let mut diag = vec![Rational::zero(); n];
    for k in 0..n {
        let d = work[k][k].clone();
        if d < Rational::zero() {
            let mut schur = vec![Rational::zero(); n];
            schur[k] = Rational::one();
            return finish_negative(matrix, &lower, schur, d);
        }
        if d.is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !work[k][j].is_zero()) {
                // The 2x2 block [[0, c], [c, w]] takes the value -1 at
                // (t, 1) with t = -(w + 1) / (2c).
                let c = work[k][j].clone();
                let w = work[j][j].clone();
                let t = -(w + Rational::one()) / (Rational::from_integer(2.into()) * c);
                let mut schur = vec![Rational::zero(); n];
                schur[k] = t;
                schur[j] = Rational::one();
                return finish_negative(matrix, &lower, schur, -Rational::one());
            }
            continue;
        }
        diag[k] = d.clone();
        for i in k + 1..n {
            lower[i][k] = work[i][k].clone() / d.clone();
        }
        for i in k + 1..n {
            let lik = work[i][k].clone();
            if lik.is_zero() {
                continue;
            }
            for j in k + 1..n {
                let sub = lik.clone() * work[k][j].clone() / d.clone();
                work[i][j] -= sub;
            }
        }
    }
    let recon = reconstruct(&lower, &diag);
    if recon != matrix {
        return Err(Error::internal(
            "semidefiniteness factors fail to reproduce the matrix".to_string(),
        ));
    }
    Ok(PsdOutcome::Yes { diag, lower })
}

/// Lifts a Schur-coordinate witness through the unit triangular factor and
/// verifies it against the original matrix.
fn finish_negative(
    matrix: &[Vec<Rational>],
    lower: &[Vec<Rational>],
    schur: Vec<Rational>,
    expected: Rational,
) -> Result<PsdOutcome> {
    let n = schur.len();
    // Solve lower^T * x = schur by back substitution.
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut s = schur[i].clone();
        for j in i + 1..n {
            s -= lower[j][i].clone() * x[j].clone();
        }
        x[i] = s;
    }
    let value = quadratic_value(matrix, &x);
    if value != expected || value >= Rational::zero() {
        return Err(Error::internal(
            "negative-definiteness witness fails verification".to_string(),
        ));
    }
    Ok(PsdOutcome::No { witness: x, value })
}

pub fn quadratic_value(matrix: &[Vec<Rational>], x: &[Rational]) -> Rational {
    let mut total = Rational::zero();
    for (i, row) in matrix.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            total += x[i].clone() * entry.clone() * x[j].clone();
        }
    }
    total
}

fn reconstruct(lower: &[Vec<Rational>], diag: &[Rational]) -> Vec<Vec<Rational>> {
    let n = diag.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut s = Rational::zero();
                    for k in 0..n {
                        s += lower[i][k].clone() * diag[k].clone() * lower[j][k].clone();
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// One exact solution of `a * x = b` with free variables set to zero, or
/// `None` when the system is inconsistent.
pub fn solve_linear(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = eliminate(&mut aug, cols);
    for r in 0..rows {
        let all_zero = (0..cols).all(|c| aug[r][c].is_zero());
        if all_zero && !aug[r][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Basis of the kernel of `a`, one vector per free column, in ascending
/// free-column order.
pub fn kernel_basis(a: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut work: Vec<Vec<Rational>> = a.to_vec();
    let pivots = eliminate(&mut work, cols);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for f in 0..cols {
        if pivot_set.contains(&f) {
            continue;
        }
        let mut v = vec![Rational::zero(); cols];
        v[f] = Rational::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -work[r][f].clone();
        }
        basis.push(v);
    }
    basis
}

/// In-place reduced row echelon form over the first `cols` columns;
/// returns the pivot column of each nonzero row.
fn eliminate(work: &mut Vec<Vec<Rational>>, cols: usize) -> Vec<usize> {
    let rows = work.len();
    let width = work.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut next_row = 0usize;
    for col in 0..cols {
        let Some(pr) = (next_row..rows).find(|&r| !work[r][col].is_zero()) else {
            continue;
        };
        work.swap(next_row, pr);
        let lead = work[next_row][col].clone();
        for c in 0..width {
            work[next_row][c] /= lead.clone();
        }
        for r in 0..rows {
            if r != next_row && !work[r][col].is_zero() {
                let factor = work[r][col].clone();
                for c in 0..width {
                    let sub = factor.clone() * work[next_row][c].clone();
                    work[r][c] -= sub;
                }
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == rows {
            break;
        }
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::vector::rat;

    fn m(entries: &[&[i64]]) -> Vec<Vec<Rational>> {
        entries
            .iter()
            .map(|row| row.iter().map(|&e| rat(e)).collect())
            .collect()
    }

    #[test]
    fn identity_and_zero_are_psd() {
        assert!(matches!(
            psd_probe(&m(&[&[1, 0], &[0, 1]])).unwrap(),
            PsdOutcome::Yes { .. }
        ));
        assert!(matches!(
            psd_probe(&m(&[&[0, 0], &[0, 0]])).unwrap(),
            PsdOutcome::Yes { .. }
        ));
    }

    #[test]
    fn negative_diagonal_is_rejected_with_witness() {
        match psd_probe(&m(&[&[1, 0], &[0, -1]])).unwrap() {
            PsdOutcome::No { witness, value } => {
                assert!(value < Rational::zero());
                assert_eq!(quadratic_value(&m(&[&[1, 0], &[0, -1]]), &witness), value);
            }
            PsdOutcome::Yes { .. } => panic!("indefinite matrix reported PSD"),
        }
    }

    #[test]
    fn zero_pivot_with_nonzero_row_is_rejected() {
        assert!(matches!(
            psd_probe(&m(&[&[0, 1], &[1, 0]])).unwrap(),
            PsdOutcome::No { .. }
        ));
    }

    #[test]
    fn rank_one_and_diagonally_dominant_matrices_are_psd() {
        assert!(matches!(
            psd_probe(&m(&[&[1, 1], &[1, 1]])).unwrap(),
            PsdOutcome::Yes { .. }
        ));
        assert!(matches!(
            psd_probe(&m(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]])).unwrap(),
            PsdOutcome::Yes { .. }
        ));
    }

    #[test]
    fn witness_is_lifted_through_the_elimination() {
        let mat = m(&[&[1, 2], &[2, 1]]);
        match psd_probe(&mat).unwrap() {
            PsdOutcome::No { witness, value } => {
                assert_eq!(value, rat(-3));
                assert_eq!(quadratic_value(&mat, &witness), rat(-3));
            }
            PsdOutcome::Yes { .. } => panic!("indefinite matrix reported PSD"),
        }
    }

    #[test]
    fn asymmetric_input_is_an_input_error() {
        let err = psd_probe(&m(&[&[1, 2], &[3, 1]])).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn linear_solve_consistent_and_inconsistent() {
        let a = m(&[&[1, 1], &[1, -1]]);
        let x = solve_linear(&a, &[rat(3), rat(1)]).unwrap();
        assert_eq!(x, vec![rat(2), rat(1)]);
        let bad = m(&[&[1, 1], &[1, 1]]);
        assert!(solve_linear(&bad, &[rat(0), rat(1)]).is_none());
    }

    #[test]
    fn underdetermined_solve_zeroes_free_variables() {
        let a = m(&[&[1, 1]]);
        let x = solve_linear(&a, &[rat(2)]).unwrap();
        assert_eq!(x, vec![rat(2), rat(0)]);
    }

    #[test]
    fn kernel_bases() {
        let a = m(&[&[1, 1, 0], &[0, 0, 1]]);
        let basis = kernel_basis(&a);
        assert_eq!(basis, vec![vec![rat(-1), rat(1), rat(0)]]);
        let zero = m(&[&[0, 0], &[0, 0]]);
        let basis = kernel_basis(&zero);
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[0], vec![rat(1), rat(0)]);
        assert_eq!(basis[1], vec![rat(0), rat(1)]);
    }
}
